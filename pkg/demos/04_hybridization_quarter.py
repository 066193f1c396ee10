"""The quarter-anharmonicity rule at zero detuning.

Sweep a transmon through resonance with a single phonon mode. At zero
detuning the polaritons are equal mixtures, so each carries half the
junction's zero-point phase variance -- and since Kerr terms scale as the
fourth power of the junction participation, the phonon-like self-Kerr
peaks at one quarter of the bare transmon anharmonicity while the
cross-Kerr is maximized.
"""

import warnings

import numpy as np

import phonon_quant as pq
from phonon_quant.ratfit import RationalModel

warnings.filterwarnings("ignore")

# One lossless phonon pole pair at 2.089 GHz.
wp = 2 * np.pi * 2.089e9
r = wp * 1e-15
ym = RationalModel(np.array([1j * wp, -1j * wp]),
                   np.array([r / 2, r / 2]), prop_term=1e-15)

c_sigma = 200e-15
e_j_res = pq.PHI0_RED**2 * (c_sigma + ym.prop_term) * wp**2
t = pq.BbqTransmon(e_j=e_j_res, c_j=2.5e-15, c_s=c_sigma - 2.5e-15)

rows = pq.detuning_sweep(ym, t, e_j_res * np.linspace(0.9, 1.1, 41) ** 2)
bare = (pq.E_CHARGE**2 / (2 * c_sigma)) / pq.HBAR

print(" delta/2pi (MHz)   |chi_ph|/|chi_bare|   chi_cross/2pi (kHz)")
for row in rows[::5]:
    print(f"{row.delta / 2 / np.pi / 1e6:14.2f} "
          f"{abs(row.chi_self_phonon) / bare:18.4f} "
          f"{row.chi_cross / 2 / np.pi / 1e3:18.2f}")

ratios = np.array([abs(r_.chi_self_phonon) for r_ in rows]) / bare
print(f"\nmax |chi_phonon| / |chi_bare| = {ratios.max():.4f}  (expect 0.25)")
