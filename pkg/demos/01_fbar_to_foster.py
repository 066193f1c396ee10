"""From an analytic FBAR admittance to a lumped Foster network.

A thin piezoelectric film between two electrodes looks, electrically, like
a capacitor C_g in parallel with a comb of mechanical resonances. This
script evaluates the exact admittance, locates the first few pole/zero
pairs, and synthesizes the equivalent LC network, checking the two
closed-form capacitances along the way.
"""

import numpy as np

import phonon_quant as pq

mat = pq.MaterialParams(e_pz=1.3, c=2.45e11, epsilon=2.66e-10, rho=4650.0)
geom = pq.FbarGeometry(thickness_b=750e-9, area=1e-12)
c_g = geom.gate_capacitance(mat.epsilon)

print(f"K^2 = {mat.k2:.4f}, v_bar = {mat.v_bar:.0f} m/s, "
      f"C_g = {c_g * 1e15:.3f} fF")

# The admittance zeros sit at Omega_n = (2n-1) pi v_bar / b; each pole is a
# little below its zero, separated by a K^2-sized margin.
for n, (pole, zero) in enumerate(pq.fbar_pole_zero(mat, geom, 3), start=1):
    print(f"branch {n}: pole {pole / 2 / np.pi / 1e9:.4f} GHz, "
          f"zero {zero / 2 / np.pi / 1e9:.4f} GHz")

# Foster synthesis from the first two zeros. Each zero becomes a series
# parallel-LC block; the static branch C_0 comes from the DC slope.
zeros = [z for _, z in pq.fbar_pole_zero(mat, geom, 2)]
net = pq.foster_from_admittance(
    lambda w: pq.fbar_admittance(mat, geom, w), zeros)

print(f"\nC_0 = {net.c0 * 1e15:.4f} fF "
      f"(closed form {c_g / (1 - mat.k2) * 1e15:.4f} fF)")
c1_closed = 0.5 * c_g * (np.pi / 2) ** 2 / mat.k2
for k, m in enumerate(net.modes, start=1):
    print(f"mode {k}: C_{k} = {m.c * 1e15:.4f} fF, "
          f"L_{k} = {m.l * 1e9:.3f} nH, "
          f"f_{k} = {m.omega / 2 / np.pi / 1e9:.4f} GHz")
print(f"closed-form C_1 = {c1_closed * 1e15:.4f} fF")
