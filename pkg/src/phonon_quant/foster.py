"""Foster synthesis: lossless LC network realization of a reactive admittance.

The network is a static capacitance C_0 in series with a chain of parallel-LC
blocks. Each block's self-resonance w_k is a zero of Y(w) and its capacitance
is half the slope of Im[Y] there:

    C_k = lim_{w->w_k} (1/2) Im[d_w Y(w)],     L_k = 1/(w_k^2 C_k)

while C_0 is the DC slope of Im[Y].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .fbar import AdmittanceSamples
from .ratfit import RationalModel

ZERO_VERIFY_TOL = 1e-6


@dataclass(frozen=True)
class FosterMode:
    """One parallel-LC block: self-resonance omega (rad/s), capacitance c (F)."""

    omega: float
    c: float

    def __post_init__(self):
        if self.omega <= 0 or self.c <= 0:
            raise ValueError("mode frequency and capacitance must be positive")

    @property
    def l(self) -> float:
        """Derived inductance 1/(omega^2 c), Henries."""
        return 1.0 / (self.omega**2 * self.c)


@dataclass(frozen=True)
class FosterNetwork:
    """C_0 plus series-connected parallel-LC blocks (modes sorted ascending).

    c0 may be None in black-box mode, where the static block is absent
    because the junction inductance is lumped into the network.
    """

    c0: float | None
    modes: tuple[FosterMode, ...] = ()

    def __post_init__(self):
        if self.c0 is not None and self.c0 < 0:
            raise ValueError("c0 must be non-negative")
        modes = tuple(self.modes)
        freqs = [m.omega for m in modes]
        if freqs != sorted(freqs):
            modes = tuple(sorted(modes, key=lambda m: m.omega))
        object.__setattr__(self, "modes", modes)

    @property
    def mode_freqs(self) -> np.ndarray:
        return np.array([m.omega for m in self.modes])

    def to_dict(self) -> dict:
        return {
            "c0_f": self.c0,
            "modes": [
                {"omega_rad_s": m.omega, "c_f": m.c, "l_h": m.l}
                for m in self.modes
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FosterNetwork":
        return cls(
            c0=d["c0_f"],
            modes=tuple(FosterMode(m["omega_rad_s"], m["c_f"]) for m in d["modes"]),
        )


def synth_admittance(net: FosterNetwork, omega):
    """Evaluate the network admittance at angular frequency omega.

    Y(s) = [1/(s C_0) + sum_k (s/C_k)/(s^2 + w_k^2)]^(-1) at s = i w; the
    C_0 term is omitted when c0 is None (black-box network). Purely
    imaginary, with zeros exactly at the mode frequencies.
    """
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0):
        raise ValueError("omega must be strictly positive")
    if net.c0 is not None and net.c0 == 0.0 and not net.modes:
        raise ValueError("degenerate network: C_0 = 0 with no modes")
    s = 1j * w
    z = np.zeros_like(s)
    if net.c0 is not None:
        if net.c0 == 0.0:
            raise ValueError("degenerate network: C_0 = 0 blocks the port")
        z = z + 1.0 / (s * net.c0)
    for m in net.modes:
        z = z + (s / m.c) / (s**2 + m.omega**2)
    with np.errstate(divide="ignore"):
        y = 1.0 / z
    if np.isscalar(omega):
        return complex(y)
    return y


def _polish_zero(y_im, omega: float, max_widen: int = 6) -> float:
    """Refine a zero of Im[Y] near omega by bracketed root finding."""
    half = 1e-3
    for _ in range(max_widen):
        lo, hi = omega * (1 - half), omega * (1 + half)
        try:
            flo, fhi = y_im(lo), y_im(hi)
        except Exception:
            half *= 2
            continue
        if flo * fhi < 0:
            return brentq(y_im, lo, hi, xtol=1e-15 * omega, rtol=1e-15)
        half *= 2
    raise ValueError(f"no sign change of Im[Y] near {omega:.6e} rad/s")


def _numeric_half_slope(y_callable, omega: float) -> float:
    """(1/2) d Im[Y]/dw by adaptive central difference.

    Richardson-extrapolates once from steps h and h/2; falls back to a
    5-point stencil when the two estimates disagree.
    """
    def central(h):
        return (np.imag(y_callable(omega + h)) - np.imag(y_callable(omega - h))) / (2 * h)

    h = omega * 1e-6
    d1, d2 = central(h), central(h / 2)
    rich = (4.0 * d2 - d1) / 3.0
    if abs(d2 - d1) > 1e-6 * abs(rich) + 1e-300:
        h5 = omega * 1e-5
        ys = [np.imag(y_callable(omega + k * h5)) for k in (-2, -1, 1, 2)]
        rich = (ys[0] - 8 * ys[1] + 8 * ys[2] - ys[3]) / (12 * h5)
    return 0.5 * rich


def foster_from_admittance(y, zero_list, *, first_zero: float | None = None,
                           dc_points: int = 50) -> FosterNetwork:
    """Synthesize a Foster network from an evaluable admittance.

    y is a callable omega -> complex Y (a RationalModel works directly, with
    exact analytic derivatives). zero_list holds the admittance zeros to
    realize; each is verified (|Y| small relative to a nearby probe) and
    polished by root finding if the check fails. C_0 comes from a
    through-origin regression of Im[Y] over [w_1/1000, w_1/100], with w_1 the
    first zero (or `first_zero` when the list is empty).
    """
    analytic = isinstance(y, RationalModel)
    modes = []
    for wk in zero_list:
        ratio = abs(y(wk)) / abs(y(1.01 * wk))
        if ratio >= ZERO_VERIFY_TOL:
            wk = _polish_zero(lambda w: float(np.imag(y(w))), wk)
            if abs(y(wk)) / abs(y(1.01 * wk)) >= ZERO_VERIFY_TOL:
                raise ValueError(f"{wk:.6e} rad/s is not a zero of Y")
        ck = y.im_deriv(wk) * 0.5 if analytic else _numeric_half_slope(y, wk)
        if ck <= 0:
            raise ValueError(
                f"non-positive derivative at zero {wk:.6e} (Foster positivity)")
        modes.append(FosterMode(float(wk), float(ck)))

    if analytic:
        c0 = y.dc_slope()
    else:
        w1 = modes[0].omega if modes else first_zero
        if w1 is None:
            raise ValueError("need first_zero to place the DC window")
        grid = np.linspace(w1 / 1000.0, w1 / 100.0, dc_points)
        im = np.array([np.imag(y(w)) for w in grid])
        c0 = float(np.sum(grid * im) / np.sum(grid * grid))
    if c0 < 0:
        raise ValueError("negative DC slope (violates Foster positivity)")
    return FosterNetwork(c0=c0, modes=tuple(modes))


def foster_from_model(model: RationalModel) -> FosterNetwork:
    """Foster synthesis of a lossless RationalModel (exact derivatives)."""
    from .ratfit import model_zeros

    if not model.is_lossless(tol=1e-6):
        raise ValueError("foster_from_model requires a lossless model")
    zeros = model_zeros(model)
    return foster_from_admittance(model, zeros)


def single_mode_truncation(net: FosterNetwork, omega_target: float) -> FosterNetwork:
    """Keep only the mode nearest omega_target (plus the C_0 block)."""
    if not net.modes:
        raise ValueError("network has no modes to truncate")
    nearest = min(net.modes, key=lambda m: abs(m.omega - omega_target))
    return FosterNetwork(c0=net.c0, modes=(nearest,))


def scale_unit_cells(base, n_cells: int):
    """Admittance of n_cells identical cells in parallel: Y -> n Y.

    Accepts AdmittanceSamples, RationalModel or FosterNetwork and returns the
    same kind. Residues and linear coefficients scale by n; pole and zero
    frequencies are unchanged (capacitances scale by n, inductances by 1/n).
    """
    if n_cells < 1:
        raise ValueError("n_cells must be >= 1")
    n = float(n_cells)
    if isinstance(base, AdmittanceSamples):
        return AdmittanceSamples(base.frequencies, base.values * n,
                                 lossless_flag=base.lossless_flag,
                                 lossless_tol=base.lossless_tol)
    if isinstance(base, RationalModel):
        return RationalModel(base.poles.copy(), base.residues * n,
                             prop_term=base.prop_term * n,
                             const_term=base.const_term * n,
                             ind_term=base.ind_term * n,
                             converged=base.converged,
                             residual=base.residual)
    if isinstance(base, FosterNetwork):
        return FosterNetwork(
            c0=None if base.c0 is None else base.c0 * n,
            modes=tuple(FosterMode(m.omega, m.c * n) for m in base.modes))
    raise TypeError(f"cannot scale {type(base).__name__}")
