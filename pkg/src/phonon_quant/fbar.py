"""Analytic thin-film bulk acoustic resonator (FBAR) admittance and sampled data.

The one-dimensional thickness mode of a piezoelectric film between two
electrodes has the exact admittance

    Y(w) = i w C_g [1 - K^2 tan(x)/x]^(-1),   x = w b / 2 v

with C_g the geometric plate capacitance, K^2 the electromechanical coupling
coefficient, b the film thickness and v the (stiffened) sound velocity. Zeros
sit at w_n = (2n-1) pi v / b; each zero has an associated pole just below it.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import ConfigError, PoleProximityError

# Relative floor on |1 - K^2 tan(x)/x| below which a sample is unusable.
DEFAULT_POLE_FLOOR = 1e-14

# Max |Re Y| / max |Y| allowed for data claimed lossless.
DEFAULT_LOSSLESS_TOL = 1e-8

ADMITTANCE_CSV_HEADER = ["freq_hz", "re_y_siemens", "im_y_siemens"]


@dataclass(frozen=True)
class MaterialParams:
    """Piezoelectric material constants in stress-charge form (SI units).

    Attributes
    ----------
    e_pz : float
        Piezoelectric coupling coefficient, C/m^2.
    c : float
        Elasticity coefficient, Pa.
    epsilon : float
        Permittivity, F/m.
    rho : float
        Mass density, kg/m^3.
    """

    e_pz: float
    c: float
    epsilon: float
    rho: float

    def __post_init__(self):
        for name in ("c", "epsilon", "rho"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.e_pz < 0:
            raise ValueError("e_pz must be non-negative")

    @property
    def c_bar(self) -> float:
        """Piezoelectrically stiffened elasticity coefficient, Pa."""
        return self.c + self.e_pz**2 / self.epsilon

    @property
    def k2(self) -> float:
        """Electromechanical coupling coefficient K^2 = e_pz^2 / (c_bar eps)."""
        return self.e_pz**2 / (self.c_bar * self.epsilon)

    @property
    def v_bar(self) -> float:
        """Stiffened sound velocity, m/s."""
        return float(np.sqrt(self.c_bar / self.rho))


@dataclass(frozen=True)
class FbarGeometry:
    """Film thickness and electrode area of the plate resonator."""

    thickness_b: float  # m
    area: float         # m^2

    def __post_init__(self):
        if self.thickness_b <= 0 or self.area <= 0:
            raise ValueError("thickness_b and area must be strictly positive")

    def gate_capacitance(self, epsilon: float) -> float:
        """Geometric plate capacitance C_g = eps A / b, Farads."""
        return epsilon * self.area / self.thickness_b


@dataclass(frozen=True)
class AdmittanceSamples:
    """Tabulated one-port frequency response.

    frequencies are angular (rad/s), strictly increasing and positive;
    values are complex admittances in Siemens.
    """

    frequencies: np.ndarray
    values: np.ndarray
    lossless_flag: bool = True
    lossless_tol: float = field(default=DEFAULT_LOSSLESS_TOL, compare=False)

    def __post_init__(self):
        freqs = np.asarray(self.frequencies, dtype=float)
        vals = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "frequencies", freqs)
        object.__setattr__(self, "values", vals)
        if freqs.ndim != 1 or vals.shape != freqs.shape:
            raise ValueError("frequencies and values must be matching 1-D arrays")
        if freqs.size == 0:
            raise ValueError("empty sample set")
        if not np.all(freqs > 0):
            raise ValueError("all frequencies must be positive")
        if not np.all(np.diff(freqs) > 0):
            raise ValueError("frequencies must be strictly increasing")
        if not np.all(np.isfinite(vals)):
            raise ValueError("non-finite admittance value")
        if self.lossless_flag:
            worst = np.max(np.abs(vals.real)) / np.max(np.abs(vals))
            if worst >= self.lossless_tol:
                raise ValueError(
                    f"lossless_flag set but max |Re Y|/max |Y| = {worst:.3e} "
                    f">= {self.lossless_tol:.1e}"
                )

    def __len__(self):
        return self.frequencies.size


def fbar_admittance(m: MaterialParams, g: FbarGeometry, omega,
                    pole_floor: float = DEFAULT_POLE_FLOOR):
    """Exact FBAR admittance at angular frequency omega (scalar or array).

    Returns i w C_g [1 - K^2 tan(x)/x]^(-1) with x = w b / 2 v_bar. Purely
    imaginary for real omega. Raises PoleProximityError when the bracket is
    within `pole_floor` (relative) of zero, i.e. omega sits on a pole.
    """
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0):
        raise ValueError("omega must be strictly positive")
    c_g = g.gate_capacitance(m.epsilon)
    x = w * g.thickness_b / (2.0 * m.v_bar)
    term = m.k2 * np.tan(x) / np.where(x != 0, x, 1.0)
    denom = 1.0 - term
    scale = 1.0 + np.abs(term)
    bad = np.abs(denom) < pole_floor * scale
    if np.any(bad):
        w_bad = np.atleast_1d(w)[np.atleast_1d(bad)][0]
        raise PoleProximityError(
            f"omega = {w_bad:.6e} rad/s is unusably close to a pole of Y"
        )
    y = 1j * w * c_g / denom
    if np.isscalar(omega):
        return complex(y)
    return y


def fbar_pole_zero(m: MaterialParams, g: FbarGeometry, n_pairs: int,
                   xtol: float = 1e-14, max_iter: int = 200):
    """First n_pairs (pole, zero) angular frequencies of the FBAR admittance.

    Zeros are at w_n = (2n-1) pi v / b. The pole of each pair solves
    tan(x) = x / K^2 in the branch below the zero, found by bracketed root
    finding on the singularity-free form x cos(x) - K^2 sin(x) = 0. The pole
    lies strictly below its zero for any K^2 > 0; for K^2 -> 0 they merge.
    """
    if n_pairs < 1:
        raise ValueError("n_pairs must be >= 1")
    k2 = m.k2
    scale = 2.0 * m.v_bar / g.thickness_b  # omega = scale * x
    pairs = []
    for n in range(1, n_pairs + 1):
        x_zero = (2 * n - 1) * np.pi / 2.0
        if k2 == 0.0:
            pairs.append((scale * x_zero, scale * x_zero))
            continue
        f = lambda x: x * np.cos(x) - k2 * np.sin(x)
        lo = (n - 1) * np.pi if n > 1 else 1e-9 * x_zero
        x_pole = brentq(f, lo, x_zero, xtol=xtol * x_zero, rtol=1e-15,
                        maxiter=max_iter)
        pairs.append((scale * x_pole, scale * x_zero))
    return pairs


def load_admittance_csv(path, lossless_tol: float = DEFAULT_LOSSLESS_TOL) -> AdmittanceSamples:
    """Read tabulated admittance from the `freq_hz,re_y_siemens,im_y_siemens`
    CSV schema. Lines starting with '#' are comments. Frequencies are
    converted from Hz to rad/s; the lossless flag is set by inspecting Re[Y].
    """
    freqs = []
    vals = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header_seen = False
        for lineno, row in enumerate(reader, start=1):
            if not row or row[0].lstrip().startswith("#"):
                continue
            if not header_seen:
                if [c.strip() for c in row] != ADMITTANCE_CSV_HEADER:
                    raise ConfigError(
                        f"{path}: line {lineno}: expected header "
                        f"{','.join(ADMITTANCE_CSV_HEADER)}"
                    )
                header_seen = True
                continue
            if len(row) != 3:
                raise ConfigError(f"{path}: line {lineno}: expected 3 columns, got {len(row)}")
            try:
                f_hz, re_y, im_y = (float(c) for c in row)
            except ValueError as exc:
                raise ConfigError(f"{path}: line {lineno}: {exc}") from None
            if not np.isfinite([f_hz, re_y, im_y]).all():
                raise ConfigError(f"{path}: line {lineno}: non-finite value")
            w = 2.0 * np.pi * f_hz
            if freqs and w <= freqs[-1]:
                raise ConfigError(
                    f"{path}: line {lineno}: frequency not strictly increasing"
                )
            freqs.append(w)
            vals.append(complex(re_y, im_y))
    if not header_seen or not freqs:
        raise ConfigError(f"{path}: no data rows")
    freqs = np.array(freqs)
    vals = np.array(vals)
    lossless = np.max(np.abs(vals.real)) / np.max(np.abs(vals)) < lossless_tol
    return AdmittanceSamples(freqs, vals, lossless_flag=lossless,
                             lossless_tol=lossless_tol)


def write_admittance_csv(path, samples: AdmittanceSamples, comments=()):
    """Write samples in the CSV exchange schema (17 significant digits)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        fh.write(",".join(ADMITTANCE_CSV_HEADER) + "\n")
        for w, y in zip(samples.frequencies, samples.values):
            fh.write(f"{w / (2.0 * np.pi):.17g},{y.real:.17g},{y.imag:.17g}\n")


def sample_grid(omega_min: float, omega_max: float, count: int,
                spacing: str = "log") -> np.ndarray:
    """Angular-frequency grid for sampling/fitting, linear or log spaced."""
    if count < 2:
        raise ValueError("grid count must be >= 2")
    if omega_min <= 0 or omega_max <= omega_min:
        raise ValueError("need 0 < omega_min < omega_max")
    if spacing == "log":
        return np.geomspace(omega_min, omega_max, count)
    if spacing == "linear":
        return np.linspace(omega_min, omega_max, count)
    raise ValueError(f"unknown spacing {spacing!r}")
