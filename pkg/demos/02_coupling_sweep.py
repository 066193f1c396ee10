"""Where is the transmon-phonon coupling largest?

Sweeping the resonator electrode area scales the gate capacitance C_g
(and with it the Foster capacitances) while leaving the mechanical
frequency fixed. The coupling g rises like sqrt(C_g) while the resonator
is a small load, peaks where the static branch C_0 is about twice the
transmon shunt C_Sigma, then falls off like C_g^(-1/4).
"""

import warnings

import numpy as np

import phonon_quant as pq

warnings.filterwarnings("ignore")

mat = pq.MaterialParams(e_pz=1.3, c=2.45e11, epsilon=2.66e-10, rho=4650.0)
geom = pq.FbarGeometry(thickness_b=750e-9, area=1e-12)
e_j = pq.HBAR * 2 * np.pi * 10e9  # E_J/hbar = 2 pi x 10 GHz
base = pq.fbar_single_mode_network(mat, geom)

mults = np.logspace(0, 4, 120)
for c_sigma in (1e-15, 1e-14, 1e-13, 1e-12):
    t = pq.TransmonParams(e_j=e_j, c_sigma=c_sigma)
    rows = pq.sweep_coupling(mat, geom, mults, [t])
    peak = max(rows, key=lambda r: r["g_rad_s"])
    c0_at_peak = base.c0 * peak["c_g_f"] / geom.gate_capacitance(mat.epsilon)
    print(f"C_Sigma = {c_sigma * 1e15:7.1f} fF: "
          f"g_max/2pi = {peak['g_rad_s'] / 2 / np.pi / 1e6:7.2f} MHz "
          f"at C_0 = {c0_at_peak / c_sigma:.2f} C_Sigma")

# Log-log slopes in the two asymptotic regimes (C_Sigma = 100 fF).
t = pq.TransmonParams(e_j=e_j, c_sigma=1e-13)
rows = pq.sweep_coupling(mat, geom, np.logspace(-2, 5.5, 150), [t])
c_g = np.array([r["c_g_f"] for r in rows])
g = np.array([r["g_rad_s"] for r in rows])
lo, hi = c_g <= 1e-15, c_g >= 1e-11
print(f"\nslope for C_g << C_Sigma: "
      f"{np.polyfit(np.log(c_g[lo]), np.log(g[lo]), 1)[0]:+.3f}  (expect +0.5)")
print(f"slope for C_g >> C_Sigma: "
      f"{np.polyfit(np.log(c_g[hi]), np.log(g[hi]), 1)[0]:+.3f}  (expect -0.25)")
