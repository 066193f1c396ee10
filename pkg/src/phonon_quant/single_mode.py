"""Single-mode quantization of the transmon + Foster-network circuit.

From {C_0, C_1, L_1} and the transmon parameters {E_J, C_Sigma} this module
computes the charging energies of the two-node circuit, the zero-point
fluctuations of both degrees of freedom and the transmon-phonon coupling
rate

    hbar g = 8 E_C^(phi,theta) n_zp^theta n_zp^phi.

Notation: C^i_{jk} = C_i + (1/C_j + 1/C_k)^(-1) (j and k in series, in
parallel with i); beta = C_0/(C_1 + C_Sigma) is the participation ratio.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .constants import E_CHARGE, HBAR, PHI0_RED
from .errors import TransmonLimitError
from .fbar import FbarGeometry, MaterialParams, fbar_admittance, fbar_pole_zero
from .foster import FosterMode, FosterNetwork, foster_from_admittance, \
    single_mode_truncation

TRANSMON_RATIO_WARN = 20.0
TRANSMON_RATIO_ERROR = 5.0


@dataclass(frozen=True)
class TransmonParams:
    """Josephson energy (J), total shunt capacitance (F), offset charge."""

    e_j: float
    c_sigma: float
    n_g: float = 0.0

    def __post_init__(self):
        if self.e_j <= 0 or self.c_sigma <= 0:
            raise ValueError("e_j and c_sigma must be strictly positive")


@dataclass(frozen=True)
class CouplingReport:
    """Quantized single-mode outputs. Energies in Joules, rates in rad/s.

    Fields left at None by capacitance_energies are filled by coupling_rate.
    """

    e_c_phi: float
    e_c_theta: float
    e_c_cross: float
    e_l: float
    beta: float
    omega_m: float                      # phonon frequency Omega
    n_zp_theta: float | None = None
    theta_zp: float | None = None
    n_zp_phi: float | None = None
    phi_zp: float | None = None
    omega_phi: float | None = None
    g: float | None = None

    def to_dict(self) -> dict:
        return {
            "e_c_phi_j": self.e_c_phi,
            "e_c_theta_j": self.e_c_theta,
            "e_c_cross_j": self.e_c_cross,
            "e_l_j": self.e_l,
            "beta": self.beta,
            "omega_m_rad_s": self.omega_m,
            "n_zp_theta": self.n_zp_theta,
            "theta_zp": self.theta_zp,
            "n_zp_phi": self.n_zp_phi,
            "phi_zp": self.phi_zp,
            "omega_phi_rad_s": self.omega_phi,
            "g_rad_s": self.g,
        }


def _series(a: float, b: float) -> float:
    if a == 0.0 or b == 0.0:
        return 0.0
    return a * b / (a + b)


def capacitance_energies(net: FosterNetwork, t: TransmonParams) -> CouplingReport:
    """Charging/inductive energies of the two-node circuit (energy fields only).

    Requires a single-mode network. Equivalent to inverting the 2x2
    capacitance matrix [[C0+CS, -C0], [-C0, C0+C1]]:

        E_C_phi   = e^2 / 2 C^Sigma_{01}
        E_C_theta = e^2 / 2 C^1_{0Sigma}
        E_C_cross = beta e^2 / 2 C^0_{1Sigma}
    """
    if len(net.modes) != 1:
        raise ValueError("capacitance_energies needs exactly one mode")
    if net.c0 is None or net.c0 < 0:
        raise ValueError("network must carry a non-negative C_0 block")
    c0 = net.c0
    c1 = net.modes[0].c
    l1 = net.modes[0].l
    cs = t.c_sigma
    if c1 <= 0 or cs <= 0:
        raise ValueError("capacitances must be positive")
    c_sigma_01 = cs + _series(c0, c1)
    c_1_0sigma = c1 + _series(c0, cs)
    c_0_1sigma = c0 + _series(c1, cs)
    beta = c0 / (c1 + cs)
    e2 = E_CHARGE**2
    e_c_phi = e2 / (2.0 * c_sigma_01)
    e_c_theta = e2 / (2.0 * c_1_0sigma)
    e_c_cross = beta * e2 / (2.0 * c_0_1sigma) if c0 > 0 else 0.0
    e_l = PHI0_RED**2 / l1
    omega_m = 1.0 / np.sqrt(l1 * c_1_0sigma)
    return CouplingReport(e_c_phi=e_c_phi, e_c_theta=e_c_theta,
                          e_c_cross=e_c_cross, e_l=e_l, beta=beta,
                          omega_m=float(omega_m))


def coupling_rate(report: CouplingReport, t: TransmonParams,
                  strict: bool = True) -> CouplingReport:
    """Fill in zero-point fluctuations, transmon frequency and g.

    Valid in the transmon limit E_J/E_C^(phi) >> 1: warns below 20, raises
    below 5. strict=False downgrades the error to a warning (used by wide
    capacitance sweeps that deliberately leave the transmon regime).
    """
    ratio = t.e_j / report.e_c_phi
    if ratio < TRANSMON_RATIO_ERROR and strict:
        raise TransmonLimitError(
            f"E_J/E_C^(phi) = {ratio:.2f} < {TRANSMON_RATIO_ERROR}")
    if ratio < TRANSMON_RATIO_WARN:
        warnings.warn(f"E_J/E_C^(phi) = {ratio:.2f} is marginal for the "
                      "transmon-limit formulas")
    n_zp_theta = 0.5 * (report.e_l / (2.0 * report.e_c_theta)) ** 0.25
    theta_zp = (2.0 * report.e_c_theta / report.e_l) ** 0.25
    n_zp_phi = 0.5 * (t.e_j / (2.0 * report.e_c_phi)) ** 0.25
    phi_zp = (2.0 * report.e_c_phi / t.e_j) ** 0.25
    omega_phi = np.sqrt(8.0 * t.e_j * report.e_c_phi) / HBAR
    g = 8.0 * report.e_c_cross * n_zp_theta * n_zp_phi / HBAR
    return replace(report, n_zp_theta=n_zp_theta, theta_zp=theta_zp,
                   n_zp_phi=n_zp_phi, phi_zp=phi_zp,
                   omega_phi=float(omega_phi), g=float(g))


def quantize_single_mode(net: FosterNetwork, t: TransmonParams,
                         strict: bool = True) -> CouplingReport:
    """capacitance_energies followed by coupling_rate."""
    return coupling_rate(capacitance_energies(net, t), t, strict=strict)


def fbar_single_mode_network(m: MaterialParams, g: FbarGeometry) -> FosterNetwork:
    """Numerically synthesized {C_0, C_1, L_1} network of the fundamental
    FBAR mode (Foster extraction from the exact admittance)."""
    (_, omega_zero), = fbar_pole_zero(m, g, 1)
    net = foster_from_admittance(lambda w: fbar_admittance(m, g, w),
                                 [omega_zero])
    return single_mode_truncation(net, omega_zero)


def sweep_coupling(material: MaterialParams, geometry_base: FbarGeometry,
                   area_multipliers, transmons) -> list[dict]:
    """Coupling rate and transmon frequency versus gate-capacitor area.

    Area scaling multiplies C_g (and hence C_0 and C_1) while leaving the
    mechanical frequency fixed. Returns one row dict per (transmon, area)
    pair with keys c_g_f, c_sigma_f, g_rad_s, omega_phi_rad_s, omega_m_rad_s.
    """
    mults = np.asarray(list(area_multipliers), dtype=float)
    if np.any(mults <= 0):
        raise ValueError("area multipliers must be positive")
    base = fbar_single_mode_network(material, geometry_base)
    c_g_base = geometry_base.gate_capacitance(material.epsilon)
    rows = []
    for t in transmons:
        for a in mults:
            net = FosterNetwork(
                c0=base.c0 * a,
                modes=(FosterMode(base.modes[0].omega, base.modes[0].c * a),))
            rep = quantize_single_mode(net, t, strict=False)
            rows.append({
                "c_g_f": c_g_base * a,
                "c_sigma_f": t.c_sigma,
                "g_rad_s": rep.g,
                "omega_phi_rad_s": rep.omega_phi,
                "omega_m_rad_s": rep.omega_m,
            })
    return rows
