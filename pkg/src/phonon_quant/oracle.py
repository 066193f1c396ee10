"""Exact diagonalization oracles for the perturbative results.

Two Hamiltonians are built at small Hilbert-space cutoffs:

* single-mode transmon + phonon, charge basis (x) Fock basis:
      H = 4 E_C^phi (n - n_g)^2 - E_J cos(phi) + hbar Omega a'a
          + 8 E_C^(phi,theta) n_zp^theta (a + a')(n - n_g)
  with cos(phi) the symmetric nearest-neighbor hop in the charge basis;

* multimode polariton Hamiltonian with the exact junction cosine:
      H = hbar sum_k w_k a_k' a_k - E_J [cos(X) + X^2/2],
      X = sum_k psi_k (a_k + a_k').
  The quadratic Taylor part of the cosine is subtracted because the
  polariton frequencies already contain the linearized junction inductance;
  the cosine itself is evaluated as a matrix function (exact at the cutoff),
  not a truncated series.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np
from scipy.linalg import eigh
from scipy.optimize import minimize_scalar
from scipy.sparse import diags, identity, kron
from scipy.sparse.linalg import eigsh

from .constants import HBAR
from .errors import FitConvergenceError
from .single_mode import CouplingReport, TransmonParams

DENSE_DIM_LIMIT = 4000
DEFAULT_DIM_CAP = 20000
CONVERGENCE_REL_TOL = 1e-3  # 0.1% shift allowed under cutoff doubling


@dataclass(frozen=True)
class HilbertSpec:
    """Charge cutoff N (n in [-N, N]) and per-mode Fock cutoffs."""

    charge_cutoff: int = 20
    fock_cutoffs: tuple[int, ...] = (12,)
    dim_cap: int = DEFAULT_DIM_CAP

    def __post_init__(self):
        if self.charge_cutoff < 5:
            raise ValueError("charge_cutoff must be >= 5")
        if any(f < 4 for f in self.fock_cutoffs):
            raise ValueError("each Fock cutoff must be >= 4")

    def check_dim(self, dim: int):
        if dim > self.dim_cap:
            raise ValueError(f"Hilbert dimension {dim} exceeds cap {self.dim_cap}")


@dataclass
class SpectrumReport:
    """Eigenvalues (J, ascending) plus extracted quantities and convergence."""

    eigenvalues: np.ndarray
    transitions_hz: dict | None = None
    g_rad_s: float | None = None
    anharmonicities_rad_s: np.ndarray | None = None
    converged: bool = True

    def to_dict(self) -> dict:
        return {
            "eigenvalues_j": self.eigenvalues.tolist(),
            "transitions_hz": self.transitions_hz,
            "g_rad_s": self.g_rad_s,
            "anharmonicities_rad_s":
                None if self.anharmonicities_rad_s is None
                else np.asarray(self.anharmonicities_rad_s).tolist(),
            "converged": self.converged,
        }


def _destroy(n: int):
    return diags(np.sqrt(np.arange(1, n)), 1)


def build_single_mode_hamiltonian(rep: CouplingReport, t: TransmonParams,
                                  h: HilbertSpec, e_j: float | None = None):
    """Sparse real-symmetric H for the coupled transmon-phonon circuit.

    e_j overrides t.e_j (used when scanning the transmon frequency through
    resonance with everything else held fixed).
    """
    if len(h.fock_cutoffs) != 1:
        raise ValueError("single-mode builder takes exactly one Fock cutoff")
    e_j = t.e_j if e_j is None else e_j
    n_ch = 2 * h.charge_cutoff + 1
    n_f = h.fock_cutoffs[0]
    h.check_dim(n_ch * n_f)
    n_op = diags(np.arange(-h.charge_cutoff, h.charge_cutoff + 1) - t.n_g)
    hop = diags([np.ones(n_ch - 1), np.ones(n_ch - 1)], [1, -1])
    h_transmon = 4.0 * rep.e_c_phi * (n_op @ n_op) - 0.5 * e_j * hop
    a = _destroy(n_f)
    h_phonon = HBAR * rep.omega_m * diags(np.arange(n_f))
    x_phonon = a + a.T
    coupling = 8.0 * rep.e_c_cross * rep.n_zp_theta
    ident_f = identity(n_f)
    ident_c = identity(n_ch)
    ham = kron(ident_f, h_transmon) + kron(h_phonon, ident_c) \
        + coupling * kron(x_phonon, n_op)
    return ham.tocsr()


def lowest_eigenvalues(ham, k: int = 20) -> np.ndarray:
    """Lowest k eigenvalues; dense solver below DENSE_DIM_LIMIT, else
    iterative extremal eigensolver."""
    dim = ham.shape[0]
    k = min(k, dim)
    if dim <= DENSE_DIM_LIMIT:
        vals = eigh(ham.toarray() if hasattr(ham, "toarray") else ham,
                    eigvals_only=True)
        return vals[:k]
    vals = eigsh(ham, k=k, which="SA", return_eigenvectors=False)
    return np.sort(vals)


def check_convergence(build, spec: HilbertSpec, k: int = 8) -> bool:
    """Doubling every cutoff must shift the lowest k levels (relative to the
    ground state) by < 0.1%."""
    big = HilbertSpec(charge_cutoff=2 * spec.charge_cutoff,
                      fock_cutoffs=tuple(2 * f for f in spec.fock_cutoffs),
                      dim_cap=max(spec.dim_cap, DEFAULT_DIM_CAP * 8))
    e_small = lowest_eigenvalues(build(spec), k)
    e_big = lowest_eigenvalues(build(big), k)
    t_small = e_small[1:] - e_small[0]
    t_big = e_big[1:] - e_big[0]
    shift = np.max(np.abs(t_small - t_big) / np.abs(t_big))
    return bool(shift < CONVERGENCE_REL_TOL)


def extract_g_avoided_crossing(rep: CouplingReport, t: TransmonParams,
                               h: HilbertSpec,
                               e_j_bounds: tuple[float, float] | None = None) -> tuple[float, float]:
    """g from the minimum splitting of the one-excitation doublet.

    Scans E_J (shifting the transmon frequency through the phonon) and
    minimizes the gap between the two lowest excited levels; returns
    (g, e_j_at_minimum) with g = half the minimum splitting in rad/s.
    """
    if e_j_bounds is None:
        e_j_res = (HBAR * rep.omega_m) ** 2 / (8.0 * rep.e_c_phi)
        e_j_bounds = (0.7 * e_j_res, 1.3 * e_j_res)

    def gap(e_j):
        vals = lowest_eigenvalues(
            build_single_mode_hamiltonian(rep, t, h, e_j=e_j), k=3)
        return vals[2] - vals[1]

    res = minimize_scalar(gap, bounds=e_j_bounds, method="bounded",
                          options={"xatol": 1e-6 * e_j_bounds[0]})
    if not res.success:
        raise FitConvergenceError("avoided-crossing scan did not converge")
    return float(0.5 * res.fun / HBAR), float(res.x)


# -- multimode ------------------------------------------------------------


def build_multimode_hamiltonian(modes, e_j: float, h: HilbertSpec,
                                taylor_order: int | None = None) -> np.ndarray:
    """Dense H for polariton modes under the exact junction cosine.

    modes is a sequence of objects with .omega and .psi_zp (PolaritonMode
    works). taylor_order=None uses the matrix cosine; an even integer uses
    the Taylor series of cos to that order instead (for cross-checks).
    """
    if len(modes) == 0 or len(modes) > 3:
        raise ValueError("multimode oracle supports 1 to 3 modes")
    if len(h.fock_cutoffs) != len(modes):
        raise ValueError("need one Fock cutoff per mode")
    dims = list(h.fock_cutoffs)
    dim = int(np.prod(dims))
    h.check_dim(dim)

    def embed(op, which):
        mats = [np.eye(d) for d in dims]
        mats[which] = op
        return reduce(np.kron, mats)

    ham = np.zeros((dim, dim))
    x_total = np.zeros((dim, dim))
    for i, m in enumerate(modes):
        a = _destroy(dims[i]).toarray()
        ham += HBAR * m.omega * embed(np.diag(np.arange(dims[i])), i)
        x_total += m.psi_zp * embed(a + a.T, i)

    if taylor_order is None:
        vals, vecs = eigh(x_total)
        cos_x = (vecs * np.cos(vals)) @ vecs.T
    else:
        if taylor_order < 4 or taylor_order % 2:
            raise ValueError("taylor_order must be an even integer >= 4")
        cos_x = np.eye(dim)
        term = np.eye(dim)
        x2 = x_total @ x_total
        sign = 1.0
        fact = 1.0
        for m in range(1, taylor_order // 2 + 1):
            term = term @ x2
            sign = -sign
            fact *= (2 * m - 1) * (2 * m)
            cos_x = cos_x + sign / fact * term
    # Subtract the quadratic part already counted in the polariton
    # frequencies; keep only the nonlinear remainder of the cosine.
    ham -= e_j * (cos_x + 0.5 * (x_total @ x_total))
    return ham


def _bare_index(label: tuple[int, ...], dims) -> int:
    idx = 0
    for n, d in zip(label, dims):
        idx = idx * d + n
    return idx


def assign_levels(ham: np.ndarray, dims, labels,
                  min_overlap: float = 0.6) -> dict:
    """Map bare occupation labels to eigenenergies by maximum overlap.

    Returns {label: energy}. Raises if the best overlap for any requested
    label falls below min_overlap (ambiguous assignment is reported, not
    guessed).
    """
    vals, vecs = eigh(ham)
    out = {}
    for label in labels:
        row = np.abs(vecs[_bare_index(label, dims), :])
        best = int(np.argmax(row))
        if row[best] < min_overlap:
            raise FitConvergenceError(
                f"ambiguous level assignment for {label}: max overlap "
                f"{row[best]:.2f} < {min_overlap}")
        out[label] = float(vals[best])
    return out


def multimode_anharmonicities(modes, e_j: float, h: HilbertSpec,
                              taylor_order: int | None = None):
    """Exact self- and cross-Kerr (rad/s) from level combinations.

    alpha_k = E(2_k) - 2 E(1_k) + E(0);
    chi_kj  = E(1_k, 1_j) - E(1_k) - E(1_j) + E(0).
    Returns a symmetric matrix matching the layout of kerr_matrix.
    """
    n = len(modes)
    dims = list(h.fock_cutoffs)
    ham = build_multimode_hamiltonian(modes, e_j, h, taylor_order=taylor_order)
    labels = set()
    zero = tuple([0] * n)
    labels.add(zero)
    for k in range(n):
        one = list(zero); one[k] = 1
        two = list(zero); two[k] = 2
        labels.add(tuple(one))
        labels.add(tuple(two))
        for j in range(k + 1, n):
            both = list(zero); both[k] = 1; both[j] = 1
            labels.add(tuple(both))
    energies = assign_levels(ham, dims, sorted(labels))
    chi = np.zeros((n, n))
    e0 = energies[zero]
    for k in range(n):
        one_k = tuple(1 if i == k else 0 for i in range(n))
        two_k = tuple(2 if i == k else 0 for i in range(n))
        chi[k, k] = (energies[two_k] - 2 * energies[one_k] + e0) / HBAR
        for j in range(k + 1, n):
            one_j = tuple(1 if i == j else 0 for i in range(n))
            kj = tuple((1 if i in (k, j) else 0) for i in range(n))
            chi[k, j] = chi[j, k] = \
                (energies[kj] - energies[one_k] - energies[one_j] + e0) / HBAR
    return chi


def multimode_transitions(modes, e_j: float, h: HilbertSpec) -> np.ndarray:
    """First transition frequency E(1_k) - E(0) per mode, rad/s."""
    n = len(modes)
    dims = list(h.fock_cutoffs)
    ham = build_multimode_hamiltonian(modes, e_j, h)
    zero = tuple([0] * n)
    labels = [zero] + [tuple(1 if i == k else 0 for i in range(n))
                       for k in range(n)]
    energies = assign_levels(ham, dims, labels)
    return np.array([(energies[l] - energies[zero]) / HBAR
                     for l in labels[1:]])
