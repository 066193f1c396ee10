"""Black-box quantization of a junction shunted by an acoustic admittance.

The linear part of the transmon (C_Sigma = C_J + C_S and the linearized
junction inductance L_J = Phi0^2/E_J) is lumped into the electroacoustic
admittance, giving Y11(s) = Ym(s) + s C_Sigma + 1/(s L_J). The zeros of Y11
are the polariton normal modes; each carries an effective capacitance
C_k = (1/2) Im[d_w Y11] and a zero-point phase

    psi_zp_k = sqrt(2 e^2 / (hbar w_k C_k)).

Quartic expansion of the junction cosine then yields the Kerr matrix

    chi_kk = -(E_J / 2 hbar) psi_k^4,
    chi_kj = -(E_J / hbar) psi_k^2 psi_j^2   (k != j)

and Lamb-shifted frequencies w'_k = w_k + chi_kk + (1/2) sum_{j!=k} chi_kj.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .constants import E_CHARGE, HBAR, PHI0_RED
from .errors import ExpansionValidityError
from .ratfit import RationalModel, model_zeros

PSI_ZP_ERROR = 0.5
PSI_ZP_WARN = 0.3

# Lamb-shift coefficients omega'_k = omega_k + A_SELF chi_kk
# + A_CROSS sum_{j != k} chi_kj. Pinned against the exact-diagonalization
# oracle (normal-ordering of the quartic term reproduces exactly these).
LAMB_SELF_COEF = 1.0
LAMB_CROSS_COEF = 0.5


@dataclass(frozen=True)
class BbqTransmon:
    """Junction energy E_J (J), junction capacitance C_J (F), shunt C_S (F)."""

    e_j: float
    c_j: float
    c_s: float

    def __post_init__(self):
        if self.e_j <= 0 or self.c_j <= 0 or self.c_s <= 0:
            raise ValueError("e_j, c_j, c_s must be strictly positive")

    @property
    def c_sigma(self) -> float:
        return self.c_j + self.c_s

    @property
    def l_j(self) -> float:
        """Linearized junction inductance Phi0^2/E_J, Henries."""
        return PHI0_RED**2 / self.e_j

    @property
    def e_c(self) -> float:
        """Bare charging energy e^2/2C_Sigma, Joules."""
        return E_CHARGE**2 / (2.0 * self.c_sigma)


@dataclass(frozen=True)
class PolaritonMode:
    omega: float       # rad/s
    c_eff: float       # F
    psi_zp: float      # dimensionless

    @property
    def participation(self) -> float:
        """Junction-phase participation proxy psi^2/omega (up to Phi0^2/L_J),
        used only for ordering transmon-like vs phonon-like."""
        return self.psi_zp**2 / self.omega


@dataclass(frozen=True)
class BbqReport:
    modes: tuple[PolaritonMode, ...]
    chi: np.ndarray                  # rad/s, symmetric, chi_kk <= 0
    omega_prime: np.ndarray          # rad/s, Lamb-shifted
    labels: tuple[str, ...]          # 'transmon-like' / 'phonon-like' / ...

    def to_dict(self) -> dict:
        return {
            "omega_rad_s": [m.omega for m in self.modes],
            "omega_hz": [m.omega / (2 * np.pi) for m in self.modes],
            "c_eff_f": [m.c_eff for m in self.modes],
            "psi_zp": [m.psi_zp for m in self.modes],
            "chi_rad_s": self.chi.tolist(),
            "chi_hz": (self.chi / (2 * np.pi)).tolist(),
            "omega_prime_rad_s": self.omega_prime.tolist(),
            "omega_prime_hz": (self.omega_prime / (2 * np.pi)).tolist(),
            "labels": list(self.labels),
        }


def dressed_admittance(ym: RationalModel, t: BbqTransmon) -> RationalModel:
    """Total input admittance Y11 = Ym + s C_Sigma + 1/(s L_J)."""
    if not ym.is_lossless(tol=1e-6):
        raise ValueError("dressed_admittance requires a lossless Ym")
    if ym.ind_term:
        raise ValueError("Ym already carries an inductive branch")
    return replace(ym,
                   poles=ym.poles.copy(), residues=ym.residues.copy(),
                   prop_term=ym.prop_term + t.c_sigma,
                   const_term=0.0,
                   ind_term=1.0 / t.l_j)


def polariton_modes(y11: RationalModel) -> list[PolaritonMode]:
    """Normal modes of the dressed network: zeros of Y11 with their
    effective capacitances and zero-point phases."""
    out = []
    for wk in model_zeros(y11):
        c_eff = 0.5 * y11.im_deriv(wk)
        if c_eff <= 0:
            raise ValueError(f"non-positive effective capacitance at {wk:.6e}")
        psi = np.sqrt(2.0 * E_CHARGE**2 / (HBAR * wk * c_eff))
        out.append(PolaritonMode(float(wk), float(c_eff), float(psi)))
    return out


def kerr_matrix(modes, e_j: float) -> np.ndarray:
    """Self- and cross-Kerr matrix (rad/s) from the quartic cosine expansion.

    Valid for psi_zp < 0.5 (raises beyond); warns above 0.3.
    """
    psi = np.array([m.psi_zp for m in modes])
    if psi.size == 0:
        raise ValueError("no modes")
    if np.any(psi >= PSI_ZP_ERROR):
        bad = float(psi.max())
        raise ExpansionValidityError(
            f"psi_zp = {bad:.3f} >= {PSI_ZP_ERROR} invalidates the quartic "
            "expansion")
    if np.any(psi > PSI_ZP_WARN):
        warnings.warn(f"psi_zp up to {psi.max():.3f} strains the quartic "
                      "expansion")
    p2 = psi**2
    chi = -(e_j / HBAR) * np.outer(p2, p2)
    np.fill_diagonal(chi, -(e_j / (2.0 * HBAR)) * psi**4)
    return chi


def lamb_shift(modes, chi: np.ndarray) -> np.ndarray:
    """Lamb-shifted mode frequencies (rad/s)."""
    omega = np.array([m.omega for m in modes])
    cross = chi.sum(axis=1) - np.diag(chi)
    return omega + LAMB_SELF_COEF * np.diag(chi) + LAMB_CROSS_COEF * cross


def _label_modes(modes, omega_phonon: float | None = None) -> tuple[str, ...]:
    """transmon-like: largest junction participation; phonon-like: remaining
    mode nearest omega_phonon (or next-largest participation)."""
    if not modes:
        return ()
    parts = [m.participation for m in modes]
    i_t = int(np.argmax(parts))
    labels = ["spectator"] * len(modes)
    labels[i_t] = "transmon-like"
    rest = [i for i in range(len(modes)) if i != i_t]
    if rest:
        if omega_phonon is not None:
            i_p = min(rest, key=lambda i: abs(modes[i].omega - omega_phonon))
        else:
            i_p = max(rest, key=lambda i: parts[i])
        labels[i_p] = "phonon-like"
    return tuple(labels)


def bbq_report(ym: RationalModel, t: BbqTransmon,
               omega_phonon: float | None = None) -> BbqReport:
    """Full black-box pipeline: dress, extract polaritons, Kerr, Lamb shift."""
    y11 = dressed_admittance(ym, t)
    modes = polariton_modes(y11)
    chi = kerr_matrix(modes, t.e_j)
    return BbqReport(modes=tuple(modes), chi=chi,
                     omega_prime=lamb_shift(modes, chi),
                     labels=_label_modes(modes, omega_phonon))


@dataclass(frozen=True)
class DetuningSweepRow:
    delta: float             # rad/s, omega_phi - Omega
    e_j: float               # J
    chi_self_transmon: float  # rad/s
    chi_self_phonon: float    # rad/s
    chi_cross: float          # rad/s
    omega_transmon: float     # rad/s
    omega_phonon: float       # rad/s


def detuning_sweep(ym: RationalModel, t: BbqTransmon,
                   e_j_values) -> list[DetuningSweepRow]:
    """Polariton Kerr terms versus transmon-phonon detuning.

    The detuning for each E_J is Delta = omega_phi(E_J) - Omega with
    omega_phi = 1/sqrt(L_J (C_Sigma + C_m0)) the statically loaded bare
    transmon frequency (C_m0 = prop term of Ym) and Omega the phonon-branch
    zero of Ym + s C_Sigma, i.e. the far-detuned phonon polariton frequency.
    Labels come from junction participation at each point.
    """
    e_j_values = np.asarray(list(e_j_values), dtype=float)
    if np.any(e_j_values <= 0):
        raise ValueError("E_J values must be positive")
    # Far-detuned phonon frequency: zero of Ym + s C_Sigma nearest the Ym pole.
    ym_loaded = replace(ym, poles=ym.poles.copy(), residues=ym.residues.copy(),
                        prop_term=ym.prop_term + t.c_sigma)
    zeros_loaded = model_zeros(ym_loaded)
    wp = ym.pole_freqs
    if wp.size == 0 or zeros_loaded.size == 0:
        raise ValueError("Ym must carry at least one pole pair")
    omega_phonon = float(zeros_loaded[np.argmin(np.abs(zeros_loaded - wp[0]))])
    c_load = t.c_sigma + ym.prop_term
    rows = []
    for e_j in e_j_values:
        tt = BbqTransmon(e_j=float(e_j), c_j=t.c_j, c_s=t.c_s)
        omega_phi = 1.0 / np.sqrt(tt.l_j * c_load)
        rep = bbq_report(ym, tt, omega_phonon=omega_phonon)
        i_t = rep.labels.index("transmon-like")
        i_p = rep.labels.index("phonon-like")
        rows.append(DetuningSweepRow(
            delta=float(omega_phi - omega_phonon),
            e_j=float(e_j),
            chi_self_transmon=float(rep.chi[i_t, i_t]),
            chi_self_phonon=float(rep.chi[i_p, i_p]),
            chi_cross=float(rep.chi[i_t, i_p]),
            omega_transmon=rep.modes[i_t].omega,
            omega_phonon=rep.modes[i_p].omega,
        ))
    rows.sort(key=lambda r: r.delta)
    return rows
