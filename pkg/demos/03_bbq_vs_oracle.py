"""Black-box quantization cross-checked against exact diagonalization.

Fit the FBAR admittance, dress it with a transmon's shunt capacitance and
linearized junction inductance, read the polaritons off the zeros of the
total admittance, and compute the Kerr matrix perturbatively. Then build
the full cosine Hamiltonian in the polariton Fock basis and compare.
"""

import warnings

import numpy as np

import phonon_quant as pq

warnings.filterwarnings("ignore")

mat = pq.MaterialParams(e_pz=1.3, c=2.45e11, epsilon=2.66e-10, rho=4650.0)
geom = pq.FbarGeometry(thickness_b=750e-9, area=2e-11)

# Sample around the fundamental and fit a two-pole rational model.
(pole, zero), = pq.fbar_pole_zero(mat, geom, 1)
grid = pq.sample_grid(0.5 * pole, 1.5 * zero, 4001)
samples = pq.AdmittanceSamples(grid, pq.fbar_admittance(mat, geom, grid))
model = pq.enforce_lossless(
    pq.vector_fit(samples, pq.FitOptions(n_poles=2, tolerance=1e-3)),
    samples)
print(f"fit residual {model.residual:.2e}, "
      f"pole at {model.pole_freqs[0] / 2 / np.pi / 1e9:.4f} GHz")

# Transmon detuned ~600 MHz below the phonon (dispersive regime).
c_sigma = 4e-12
e_j = pq.PHI0_RED**2 * (2 * np.pi * 4.3e9) ** 2 * c_sigma
t = pq.BbqTransmon(e_j=e_j, c_j=2.5e-15, c_s=c_sigma - 2.5e-15)

rep = pq.bbq_report(model, t)
for mode, label in zip(rep.modes, rep.labels):
    print(f"{label:14s} {mode.omega / 2 / np.pi / 1e9:.4f} GHz, "
          f"psi_zp = {mode.psi_zp:.4f}")

chi_exact = pq.multimode_anharmonicities(
    rep.modes, e_j, pq.HilbertSpec(fock_cutoffs=(12, 12), dim_cap=200000))

print("\n            perturbative      exact         rel dev")
for k in range(2):
    p, x = rep.chi[k, k], chi_exact[k, k]
    print(f"chi_{k}{k}/2pi  {p / 2 / np.pi / 1e6:10.4f} MHz "
          f"{x / 2 / np.pi / 1e6:10.4f} MHz   {abs(p - x) / abs(x):.2%}")
p, x = rep.chi[0, 1], chi_exact[0, 1]
print(f"chi_01/2pi  {p / 2 / np.pi / 1e6:10.4f} MHz "
      f"{x / 2 / np.pi / 1e6:10.4f} MHz   {abs(p - x) / abs(x):.2%}")

trans = pq.multimode_transitions(rep.modes, e_j,
                                 pq.HilbertSpec(fock_cutoffs=(12, 12),
                                                dim_cap=200000))
print("\nLamb-shifted transitions:")
for k in range(2):
    print(f"mode {k}: {rep.omega_prime[k] / 2 / np.pi / 1e9:.6f} GHz "
          f"(exact {trans[k] / 2 / np.pi / 1e9:.6f} GHz)")
