"""Rational fitting of sampled admittances by iterative pole relocation.

Fits Y(s) = sum_k R_k/(s - s_k) + C s + D to tabulated frequency-response
data (Gustavsen-Semlyen vector fitting, scalar one-port case), then projects
the result onto the lossless manifold: poles on the imaginary axis, real
non-negative residues, D = 0, C >= 0.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.linalg import eigvals, lstsq

from .errors import FitConvergenceError
from .fbar import AdmittanceSamples

# Minimum relative separation between distinct pole frequencies.
POLE_SEPARATION_TOL = 1e-9


@dataclass
class FitOptions:
    """Knobs for vector_fit.

    n_poles must be even (poles are relocated as conjugate pairs).
    weighting is 'inv_mag' (rows weighted by 1/|Y_i|) or 'uniform'.
    """

    n_poles: int = 2
    max_iterations: int = 30
    tolerance: float = 1e-10       # relative residual target
    pole_move_tol: float = 1e-12   # relative pole movement stopping criterion
    weighting: str = "inv_mag"
    enforce_lossless: bool = True

    def __post_init__(self):
        if self.n_poles < 0 or self.n_poles % 2:
            raise ValueError("n_poles must be a non-negative even count")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.weighting not in ("inv_mag", "uniform"):
            raise ValueError(f"unknown weighting {self.weighting!r}")


@dataclass
class RationalModel:
    """Pole/residue/linear-term representation of a one-port admittance.

    Y(s) = sum_k residues[k]/(s - poles[k]) + prop_term*s + const_term
           + ind_term/s

    Poles and residues are conjugate-closed. ind_term is the coefficient of
    1/s (equal to 1/L for a shunt inductance L); it is zero for bare
    electroacoustic models and nonzero only after a junction inductance is
    lumped in.
    """

    poles: np.ndarray
    residues: np.ndarray
    prop_term: float = 0.0
    const_term: float = 0.0
    ind_term: float = 0.0
    converged: bool = True
    residual: float = 0.0

    def __post_init__(self):
        self.poles = np.asarray(self.poles, dtype=complex)
        self.residues = np.asarray(self.residues, dtype=complex)
        if self.poles.shape != self.residues.shape:
            raise ValueError("poles and residues must have matching shapes")

    # -- evaluation -------------------------------------------------------

    def eval_s(self, s):
        s = np.asarray(s, dtype=complex)
        y = self.prop_term * s + self.const_term
        if self.ind_term:
            y = y + self.ind_term / s
        for p, r in zip(self.poles, self.residues):
            y = y + r / (s - p)
        return y

    def __call__(self, omega):
        """Y(i omega) for real angular frequency omega (scalar or array)."""
        y = self.eval_s(1j * np.asarray(omega, dtype=float))
        if np.isscalar(omega):
            return complex(y)
        return y

    # -- lossless structure ----------------------------------------------

    @property
    def pole_freqs(self) -> np.ndarray:
        """Sorted positive pole frequencies |Im s_k|, one per conjugate pair."""
        im = self.poles.imag
        return np.sort(im[im > 0])

    def pair_residues(self) -> np.ndarray:
        """Residues matched to pole_freqs (real parts, one per pair)."""
        order = np.argsort(self.poles.imag[self.poles.imag > 0])
        res = self.residues[self.poles.imag > 0].real
        return res[order]

    def is_lossless(self, tol: float = 1e-9) -> bool:
        if abs(self.const_term) > tol * max(1.0, abs(self.prop_term)):
            return False
        if self.poles.size == 0:
            return True
        scale = np.max(np.abs(self.poles))
        return bool(np.all(np.abs(self.poles.real) <= tol * scale)
                    and np.all(np.abs(self.residues.imag)
                               <= tol * np.max(np.abs(self.residues) + 1e-300)))

    def im_deriv(self, omega: float) -> float:
        """Analytic d Im[Y(i w)]/dw for a lossless model.

        Im Y = w C - A/w + sum_p 2 R_p w / (w_p^2 - w^2).
        """
        wp = self.pole_freqs
        rp = self.pair_residues()
        w = float(omega)
        d = self.prop_term + self.ind_term / w**2
        if wp.size:
            d = d + np.sum(2.0 * rp * (wp**2 + w**2) / (wp**2 - w**2) ** 2)
        return float(d)

    def dc_slope(self) -> float:
        """lim_{w->0} d Im[Y]/dw; requires ind_term == 0."""
        if self.ind_term:
            raise ValueError("model has an inductive branch; no DC capacitance")
        wp = self.pole_freqs
        rp = self.pair_residues()
        return float(self.prop_term + np.sum(2.0 * rp / wp**2)) if wp.size \
            else float(self.prop_term)

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        d = {
            "poles_rad_s": [[p.real, p.imag] for p in self.poles],
            "residues": [[r.real, r.imag] for r in self.residues],
            "prop_term_f": self.prop_term,
            "const_term_s": self.const_term,
            "converged": self.converged,
            "residual": self.residual,
        }
        if self.ind_term:
            d["ind_term_s_rad_s"] = self.ind_term
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RationalModel":
        return cls(
            poles=np.array([complex(a, b) for a, b in d["poles_rad_s"]]),
            residues=np.array([complex(a, b) for a, b in d["residues"]]),
            prop_term=float(d["prop_term_f"]),
            const_term=float(d["const_term_s"]),
            ind_term=float(d.get("ind_term_s_rad_s", 0.0)),
            converged=bool(d.get("converged", True)),
            residual=float(d.get("residual", 0.0)),
        )


def _conjugate_pair_index(poles: np.ndarray) -> np.ndarray:
    """0 = real pole, 1 = first of a cc pair, 2 = second of a cc pair."""
    cindex = np.zeros(len(poles), dtype=int)
    i = 0
    while i < len(poles):
        if poles[i].imag != 0:
            cindex[i] = 1
            cindex[i + 1] = 2
            i += 2
        else:
            i += 1
    return cindex


def _basis_columns(s: np.ndarray, poles: np.ndarray, cindex: np.ndarray) -> np.ndarray:
    """Real-coefficient partial-fraction basis evaluated at the sample points."""
    cols = np.empty((s.size, poles.size), dtype=complex)
    for i, p in enumerate(poles):
        if cindex[i] == 0:
            cols[:, i] = 1.0 / (s - p)
        elif cindex[i] == 1:
            cols[:, i] = 1.0 / (s - p) + 1.0 / (s - p.conjugate())
        else:
            pc = poles[i - 1]
            cols[:, i] = 1j / (s - pc) - 1j / (s - pc.conjugate())
    return cols


def _lstsq_colscaled(areal: np.ndarray, breal: np.ndarray) -> np.ndarray:
    """Least squares with unit-norm column scaling for conditioning."""
    norms = np.linalg.norm(areal, axis=0)
    if np.any(norms == 0):
        raise FitConvergenceError(
            "rank-deficient least-squares system (under-sampled data)")
    sol, _, rank, _ = lstsq(areal / norms, breal, rcond=None)
    if rank < areal.shape[1]:
        raise FitConvergenceError(
            "rank-deficient least-squares system (under-sampled data)")
    return sol / norms


def _relocate_poles(s, f, w, poles):
    """One vector-fitting step: return relocated poles."""
    n = len(poles)
    cindex = _conjugate_pair_index(poles)
    basis = _basis_columns(s, poles, cindex)
    a = np.empty((s.size, 2 * n + 2), dtype=complex)
    a[:, :n] = basis
    a[:, n] = 1.0
    a[:, n + 1] = s
    a[:, n + 2:] = -basis * f[:, None]
    aw = a * w[:, None]
    bw = f * w
    areal = np.vstack([aw.real, aw.imag])
    breal = np.concatenate([bw.real, bw.imag])
    sol = _lstsq_colscaled(areal, breal)
    c_sigma = sol[n + 2:]

    # Zeros of the sigma function become the new poles.
    amat = np.zeros((n, n))
    bvec = np.zeros(n)
    i = 0
    while i < n:
        if cindex[i] == 0:
            amat[i, i] = poles[i].real
            bvec[i] = 1.0
            i += 1
        else:
            x, y = poles[i].real, poles[i].imag
            amat[i, i] = amat[i + 1, i + 1] = x
            amat[i, i + 1] = y
            amat[i + 1, i] = -y
            bvec[i] = 2.0
            bvec[i + 1] = 0.0
            i += 2
    new_poles = eigvals(amat - np.outer(bvec, c_sigma))
    new_poles = np.asarray(new_poles, dtype=complex)
    # Flip any unstable poles into the left half plane.
    flip = new_poles.real > 0
    new_poles[flip] = -new_poles[flip].conjugate()
    return _sort_conjugate_pairs(new_poles)


def _sort_conjugate_pairs(poles: np.ndarray) -> np.ndarray:
    """Order as [p, conj(p), ...] pairs sorted by |Im|, real poles first."""
    real = np.sort(poles[np.abs(poles.imag) < 1e-300].real)
    upper = poles[poles.imag >= 1e-300]
    upper = upper[np.argsort(upper.imag)]
    out = list(real.astype(complex))
    for p in upper:
        out.extend([p, p.conjugate()])
    return np.array(out, dtype=complex)


def _fit_residues(s, f, w, poles):
    """LS solve for residues, D and C with the poles held fixed."""
    n = len(poles)
    cindex = _conjugate_pair_index(poles)
    a = np.empty((s.size, n + 2), dtype=complex)
    a[:, :n] = _basis_columns(s, poles, cindex)
    a[:, n] = 1.0
    a[:, n + 1] = s
    aw = a * w[:, None]
    bw = f * w
    areal = np.vstack([aw.real, aw.imag])
    breal = np.concatenate([bw.real, bw.imag])
    sol = _lstsq_colscaled(areal, breal)
    residues = np.zeros(n, dtype=complex)
    i = 0
    while i < n:
        if cindex[i] == 0:
            residues[i] = sol[i]
            i += 1
        else:
            residues[i] = complex(sol[i], sol[i + 1])
            residues[i + 1] = residues[i].conjugate()
            i += 2
    d = float(sol[n])
    c = float(sol[n + 1])
    return residues, d, c


def _initial_poles(omega: np.ndarray, n_poles: int) -> np.ndarray:
    """Lightly damped conjugate pairs log-spaced over the sample band
    (imaginary-to-real ratio 100:1)."""
    n_pairs = n_poles // 2
    lo, hi = omega[0], omega[-1]
    if n_pairs == 1:
        betas = np.array([np.sqrt(lo * hi)])
    else:
        betas = np.geomspace(lo, hi, n_pairs)
    poles = []
    for b in betas:
        poles.extend([complex(-b / 100.0, b), complex(-b / 100.0, -b)])
    return np.array(poles, dtype=complex)


def _relative_residual(model: RationalModel, samples: AdmittanceSamples) -> float:
    y = model(samples.frequencies)
    return float(np.max(np.abs(y - samples.values)) / np.max(np.abs(samples.values)))


def vector_fit(samples: AdmittanceSamples, opts: FitOptions) -> RationalModel:
    """Fit samples to a RationalModel by iterative pole relocation.

    Initial poles are lightly damped conjugate pairs log-spaced over the
    sample band. Iteration stops when the relative pole movement drops below
    opts.pole_move_tol or after opts.max_iterations; the best iterate (by
    relative residual) is kept. A model failing opts.tolerance is returned
    with converged=False rather than raised.
    """
    if len(samples) < 2 * opts.n_poles + 2:
        raise ValueError(
            f"need >= {2 * opts.n_poles + 2} samples for n_poles={opts.n_poles}")
    omega = samples.frequencies
    scale = float(np.median(omega))
    s = 1j * omega / scale
    f = samples.values
    if opts.weighting == "inv_mag":
        w = 1.0 / np.maximum(np.abs(f), 1e-300)
    else:
        w = np.ones_like(omega)

    if opts.n_poles == 0:
        residues = np.array([], dtype=complex)
        _, d, c = _fit_residues(s, f, w, residues)
        model = RationalModel(residues, residues, prop_term=c / scale,
                              const_term=d)
        model.residual = _relative_residual(model, samples)
        model.converged = model.residual <= opts.tolerance
        if opts.enforce_lossless:
            model = enforce_lossless(model, samples)
        return model

    poles = _initial_poles(omega / scale, opts.n_poles)
    best = None
    for _ in range(opts.max_iterations):
        new_poles = _relocate_poles(s, f, w, poles)
        residues, d, c = _fit_residues(s, f, w, new_poles)
        model = RationalModel(new_poles * scale, residues * scale,
                              prop_term=c / scale, const_term=d)
        model.residual = _relative_residual(model, samples)
        if best is None or model.residual < best.residual:
            best = model
        move = np.max(np.abs(np.sort_complex(new_poles) - np.sort_complex(poles)))
        poles = new_poles
        if move < opts.pole_move_tol * np.max(np.abs(poles)):
            break
    model = best
    model.converged = model.residual <= opts.tolerance
    if not model.converged:
        warnings.warn(
            f"vector_fit did not reach tolerance {opts.tolerance:.1e} "
            f"(residual {model.residual:.3e}); returning best-effort model")
    if opts.enforce_lossless:
        model = enforce_lossless(model, samples)
    _check_pole_separation(model)
    return model


def _check_pole_separation(model: RationalModel):
    wp = model.pole_freqs
    if wp.size >= 2 and np.min(np.diff(wp)) < POLE_SEPARATION_TOL * wp[-1]:
        warnings.warn("fitted pole frequencies nearly degenerate")


def enforce_lossless(model: RationalModel,
                     samples: AdmittanceSamples | None = None) -> RationalModel:
    """Project a fitted model onto the lossless manifold.

    Pole real parts are zeroed, residues replaced by their real parts
    (negatives clamped to zero with a warning), D dropped and C clamped
    non-negative. If samples are given the residual field is re-evaluated
    so the projection distortion is visible.
    """
    im = np.abs(model.poles.imag)
    keep = im > 0
    freqs = np.sort(np.unique(np.round(im[keep], 12)))
    # Average the conjugate-pair residues per pole frequency.
    new_poles = []
    new_res = []
    n_clamped = 0
    used = np.zeros(len(model.poles), dtype=bool)
    for i, p in enumerate(model.poles):
        if used[i] or p.imag <= 0:
            continue
        # Find the conjugate partner.
        j = None
        for k in range(len(model.poles)):
            if k != i and not used[k] and model.poles[k].imag < 0 \
                    and abs(model.poles[k].conjugate() - p) <= 1e-9 * abs(p):
                j = k
                break
        r = model.residues[i].real
        if j is not None:
            r = 0.5 * (r + model.residues[j].real)
            used[j] = True
        used[i] = True
        if r < 0:
            n_clamped += 1
            r = 0.0
        wk = abs(p.imag)
        new_poles.extend([1j * wk, -1j * wk])
        new_res.extend([r, r])
    if n_clamped:
        warnings.warn(f"enforce_lossless clamped {n_clamped} negative residue(s)")
    out = replace(
        model,
        poles=np.array(new_poles, dtype=complex),
        residues=np.array(new_res, dtype=complex),
        prop_term=max(model.prop_term, 0.0),
        const_term=0.0,
    )
    if samples is not None:
        out.residual = _relative_residual(out, samples)
    return out


def model_zeros(model: RationalModel) -> np.ndarray:
    """Positive-frequency zeros of a lossless Y(s), sorted ascending.

    Works in u = omega^2: Im Y / omega = C - A/u + sum_p 2 R_p/(w_p^2 - u).
    Clearing denominators gives a polynomial whose roots are found via the
    companion matrix. Zeros interlace the poles; one zero lies above the
    highest pole whenever C > 0 (or an inductive branch is present).
    """
    wp = model.pole_freqs
    rp = model.pair_residues()
    c = model.prop_term
    a_ind = model.ind_term
    if wp.size == 0 and a_ind == 0.0:
        return np.array([])  # Y = C s: only the zero at s = 0
    if c == 0.0 and wp.size == 0:
        return np.array([])
    wref = wp[-1] if wp.size else np.sqrt(a_ind / c)
    up = (wp / wref) ** 2
    cs = c * wref**2
    from numpy.polynomial import polynomial as npoly

    prod = np.array([1.0])
    for u in up:
        prod = npoly.polymul(prod, np.array([u, -1.0]))
    # P(u') = cs * u' * prod - A * prod + sum_p 2 R_p wref^2 u' * prod_{q != p}
    poly = npoly.polymul(np.array([0.0, cs]), prod)
    if a_ind:
        poly = npoly.polysub(poly, a_ind * prod)
    for i, u in enumerate(up):
        partial = np.array([1.0])
        for j, uq in enumerate(up):
            if j != i:
                partial = npoly.polymul(partial, np.array([uq, -1.0]))
        poly = npoly.polyadd(poly, npoly.polymul(
            np.array([0.0, 2.0 * rp[i]]), partial))
    poly = np.trim_zeros(poly, "b")
    if poly.size <= 1:
        raise ValueError("degenerate all-zero model")
    roots = npoly.polyroots(poly)
    roots = roots[np.abs(roots.imag) < 1e-9 * (np.abs(roots) + 1e-300)].real
    roots = roots[roots > 0]
    return np.sort(np.sqrt(roots)) * wref
