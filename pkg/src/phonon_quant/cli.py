"""Command-line entry point: ``pq <fbar|fit|couple|bbq|oracle>``.

Each subcommand reads one JSON config, runs a pipeline stage and writes
CSV/JSON artifacts into the output directory. Outputs are deterministic
(floats fixed at 17 significant digits) and embed the config SHA-256 and
toolkit version. Invalid configs never leave partial files behind: every
artifact is written to a temporary file and renamed into place only after
the computation finished.

Exit codes: 0 success, 2 config error, 3 numerical non-convergence,
4 contract violation (expansion validity, transmon limit, pole proximity).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
import warnings
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .bbq import BbqTransmon, bbq_report, detuning_sweep
from .errors import (ConfigError, ExpansionValidityError, FitConvergenceError,
                     PhononQuantError, PoleProximityError, TransmonLimitError)
from .fbar import (AdmittanceSamples, FbarGeometry, MaterialParams,
                   fbar_admittance, fbar_pole_zero, load_admittance_csv,
                   sample_grid)
from .foster import foster_from_admittance, scale_unit_cells
from .oracle import (HilbertSpec, extract_g_avoided_crossing,
                     multimode_anharmonicities, multimode_transitions)
from .ratfit import FitOptions, RationalModel, enforce_lossless, vector_fit
from .single_mode import (TransmonParams, fbar_single_mode_network,
                          quantize_single_mode, sweep_coupling)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NONCONVERGENCE = 3
EXIT_CONTRACT = 4


def _fmt(x) -> str:
    """Fixed 17-significant-digit decimal rendering for determinism."""
    return format(float(x), ".17g")


def _jsonify(obj):
    """Recursively render floats as 17-significant-digit strings-safe values."""
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return float(_fmt(obj))
    if isinstance(obj, (int, np.integer, str, bool)) or obj is None:
        return obj
    if isinstance(obj, complex):
        return {"re": float(_fmt(obj.real)), "im": float(_fmt(obj.imag))}
    if isinstance(obj, np.ndarray):
        return _jsonify(obj.tolist())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


class _Writer:
    """Atomic artifact writer stamping provenance into every file."""

    def __init__(self, out_dir: Path, config_sha: str):
        self.out_dir = out_dir
        self.config_sha = config_sha

    def _atomic(self, name: str, text: str):
        self.out_dir.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.out_dir, prefix=f".{name}.")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(text)
            os.replace(tmp, self.out_dir / name)
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise

    def json(self, name: str, payload: dict):
        payload = dict(payload)
        payload["toolkit_version"] = __version__
        payload["config_sha256"] = self.config_sha
        self._atomic(name, json.dumps(_jsonify(payload), indent=2,
                                      sort_keys=True) + "\n")

    def csv(self, name: str, header: list[str], rows):
        lines = [f"# toolkit_version={__version__}",
                 f"# config_sha256={self.config_sha}",
                 ",".join(header)]
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row))
        self._atomic(name, "\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Config access helpers

def _require(cfg: dict, key: str, kind, path: str):
    if key not in cfg:
        raise ConfigError(f"missing required key '{path}{key}'")
    val = cfg[key]
    if kind is float and isinstance(val, (int, float)) \
            and not isinstance(val, bool):
        return float(val)
    if kind is int and isinstance(val, int) and not isinstance(val, bool):
        return val
    if isinstance(val, kind) and not (kind is not bool
                                      and isinstance(val, bool)):
        return val
    raise ConfigError(f"key '{path}{key}' must be {kind.__name__}, "
                      f"got {type(val).__name__}")


def _positive(cfg: dict, key: str, path: str) -> float:
    val = _require(cfg, key, float, path)
    if val <= 0:
        raise ConfigError(f"key '{path}{key}' must be positive, got {val!r}")
    return val


def _material(cfg: dict) -> MaterialParams:
    blk = _require(cfg, "material", dict, "")
    try:
        return MaterialParams(
            e_pz=_require(blk, "e_pz_c_per_m2", float, "material."),
            c=_positive(blk, "c_pa", "material."),
            epsilon=_positive(blk, "epsilon_f_per_m", "material."),
            rho=_positive(blk, "rho_kg_per_m3", "material."))
    except ValueError as exc:
        raise ConfigError(f"material: {exc}") from exc


def _geometry(cfg: dict) -> FbarGeometry:
    blk = _require(cfg, "geometry", dict, "")
    try:
        return FbarGeometry(
            thickness_b=_positive(blk, "thickness_m", "geometry."),
            area=_positive(blk, "area_m2", "geometry."))
    except ValueError as exc:
        raise ConfigError(f"geometry: {exc}") from exc


def _load_config(path: str) -> tuple[dict, str]:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {path}")
    raw = p.read_bytes()
    sha = hashlib.sha256(raw).hexdigest()
    try:
        cfg = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    return cfg, sha


def _thread_count(args) -> int:
    if args.threads is not None:
        n = args.threads
    else:
        env = os.environ.get("PHONON_QUANT_THREADS", "")
        try:
            n = int(env) if env else 1
        except ValueError:
            raise ConfigError(
                f"PHONON_QUANT_THREADS must be an integer, got {env!r}")
    if n < 1:
        raise ConfigError(f"thread count must be >= 1, got {n}")
    return n


def _pmap(fn, items, n_threads: int):
    if n_threads == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n_threads) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# Subcommands

def cmd_fbar(cfg: dict, writer: _Writer, n_threads: int) -> int:
    mat = _material(cfg)
    geom = _geometry(cfg)
    band = _require(cfg, "band", dict, "")
    f_min = _positive(band, "f_min_hz", "band.")
    f_max = _positive(band, "f_max_hz", "band.")
    n_points = _require(band, "n_points", int, "band.")
    if f_max <= f_min or n_points < 2:
        raise ConfigError("band must satisfy f_max_hz > f_min_hz "
                          "and n_points >= 2")
    n_branches = cfg.get("n_branches", 3)
    if not isinstance(n_branches, int) or n_branches < 1:
        raise ConfigError("n_branches must be a positive integer")

    omega = sample_grid(2 * np.pi * f_min, 2 * np.pi * f_max, n_points)
    y = fbar_admittance(mat, geom, omega)
    pairs = fbar_pole_zero(mat, geom, n_branches)

    writer.csv("admittance.csv",
               ["freq_hz", "re_y_siemens", "im_y_siemens"],
               ((w / (2 * np.pi), val.real, val.imag)
                for w, val in zip(omega, y)))
    writer.json("fbar_summary.json", {
        "k2": mat.k2,
        "v_bar_m_per_s": mat.v_bar,
        "c_g_f": geom.gate_capacitance(mat.epsilon),
        "poles_rad_s": [p for p, _ in pairs],
        "zeros_rad_s": [z for _, z in pairs],
        "poles_hz": [p / (2 * np.pi) for p, _ in pairs],
        "zeros_hz": [z / (2 * np.pi) for _, z in pairs],
    })
    return EXIT_OK


def cmd_fit(cfg: dict, writer: _Writer, n_threads: int) -> int:
    input_csv = _require(cfg, "input_csv", str, "")
    if not Path(input_csv).is_file():
        raise ConfigError(f"input_csv not found: {input_csv}")
    n_poles = _require(cfg, "n_poles", int, "")
    try:
        opts = FitOptions(
            n_poles=n_poles,
            max_iterations=cfg.get("max_iterations", 30),
            tolerance=cfg.get("tolerance", 1e-10),
            weighting=cfg.get("weighting", "inv_mag"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    samples = load_admittance_csv(input_csv)
    model = vector_fit(samples, opts)
    if cfg.get("enforce_lossless", True):
        model = enforce_lossless(model, samples)
    writer.json("model.json", model.to_dict())
    writer.json("fit_report.json", {
        "converged": model.converged,
        "residual": model.residual,
        "n_poles": n_poles,
        "n_samples": len(samples.frequencies),
        "pole_freqs_hz": [w / (2 * np.pi) for w in model.pole_freqs],
    })
    if not model.converged:
        return EXIT_NONCONVERGENCE
    return EXIT_OK


def cmd_couple(cfg: dict, writer: _Writer, n_threads: int) -> int:
    mat = _material(cfg)
    geom = _geometry(cfg)
    blk = _require(cfg, "transmon", dict, "")
    tp = TransmonParams(e_j=_positive(blk, "e_j_joules", "transmon."),
                        c_sigma=_positive(blk, "c_sigma_f", "transmon."))
    n_cells = cfg.get("n_cells", 1)
    if not isinstance(n_cells, int) or n_cells < 1:
        raise ConfigError("n_cells must be a positive integer")

    net = fbar_single_mode_network(mat, geom)
    if n_cells > 1:
        net = scale_unit_cells(net, n_cells)
    rep = quantize_single_mode(net, tp, strict=cfg.get("strict", True))
    writer.json("coupling.json", rep.to_dict())

    sweep = cfg.get("sweep")
    if sweep is not None:
        if not isinstance(sweep, dict):
            raise ConfigError("sweep must be an object")
        lo = _positive(sweep, "area_mult_min", "sweep.")
        hi = _positive(sweep, "area_mult_max", "sweep.")
        n_pts = _require(sweep, "n_points", int, "sweep.")
        if hi <= lo or n_pts < 2:
            raise ConfigError("sweep must satisfy area_mult_max > "
                              "area_mult_min and n_points >= 2")
        c_sigmas = sweep.get("c_sigma_f", [tp.c_sigma])
        if not isinstance(c_sigmas, list) or not c_sigmas:
            raise ConfigError("sweep.c_sigma_f must be a non-empty list")
        mults = np.logspace(np.log10(lo), np.log10(hi), n_pts)
        transmons = [TransmonParams(e_j=tp.e_j, c_sigma=float(cs))
                     for cs in c_sigmas]
        parts = _pmap(
            lambda t: sweep_coupling(mat, geom, mults, [t]),
            transmons, n_threads)
        rows = [r for part in parts for r in part]
        writer.csv("coupling_sweep.csv",
                   ["c_g_f", "c_sigma_f", "g_rad_s",
                    "omega_phi_rad_s", "omega_m_rad_s"],
                   ((r["c_g_f"], r["c_sigma_f"], r["g_rad_s"],
                     r["omega_phi_rad_s"], r["omega_m_rad_s"])
                    for r in rows))
    return EXIT_OK


def _bbq_transmon(cfg: dict) -> BbqTransmon:
    blk = _require(cfg, "transmon", dict, "")
    try:
        return BbqTransmon(
            e_j=_positive(blk, "e_j_joules", "transmon."),
            c_j=_positive(blk, "c_j_f", "transmon."),
            c_s=_positive(blk, "c_shunt_f", "transmon."))
    except ValueError as exc:
        raise ConfigError(f"transmon: {exc}") from exc


def _bbq_model(cfg: dict) -> RationalModel:
    model_path = cfg.get("model_json")
    if model_path is not None:
        if not isinstance(model_path, str) or not Path(model_path).is_file():
            raise ConfigError(f"model_json not found: {model_path}")
        try:
            return RationalModel.from_dict(
                json.loads(Path(model_path).read_text()))
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            raise ConfigError(f"invalid model JSON: {exc}") from exc
    # Otherwise fit the analytic FBAR admittance around its fundamental.
    # A two-pole model truncates the higher mechanical overtones, so the
    # residual floor is set by truncation error, not fit quality.
    mat = _material(cfg)
    geom = _geometry(cfg)
    (pole, zero), = fbar_pole_zero(mat, geom, 1)
    omega = sample_grid(0.5 * pole, 1.5 * zero, 2001)
    samples = AdmittanceSamples(omega, fbar_admittance(mat, geom, omega))
    model = vector_fit(samples, FitOptions(n_poles=2, tolerance=1e-3))
    if not model.converged:
        raise FitConvergenceError("built-in FBAR fit did not converge")
    return enforce_lossless(model, samples)


def cmd_bbq(cfg: dict, writer: _Writer, n_threads: int) -> int:
    model = _bbq_model(cfg)
    transmon = _bbq_transmon(cfg)
    rep = bbq_report(model, transmon)
    writer.json("bbq.json", rep.to_dict())

    sweep = cfg.get("detuning_sweep")
    if sweep is not None:
        if not isinstance(sweep, dict):
            raise ConfigError("detuning_sweep must be an object")
        lo = _positive(sweep, "e_j_min_joules", "detuning_sweep.")
        hi = _positive(sweep, "e_j_max_joules", "detuning_sweep.")
        n_pts = _require(sweep, "n_points", int, "detuning_sweep.")
        if hi <= lo or n_pts < 2:
            raise ConfigError("detuning_sweep must satisfy e_j_max_joules > "
                              "e_j_min_joules and n_points >= 2")
        e_js = np.linspace(lo, hi, n_pts)
        chunks = np.array_split(e_js, n_threads)
        parts = _pmap(lambda ch: detuning_sweep(model, transmon, ch),
                      [c for c in chunks if len(c)], n_threads)
        rows = sorted((r for part in parts for r in part),
                      key=lambda r: r.delta)
        writer.csv("detuning_sweep.csv",
                   ["delta_rad_s", "e_j_joules", "chi_self_transmonlike",
                    "chi_self_phononlike", "chi_cross"],
                   ((r.delta, r.e_j, r.chi_self_transmon,
                     r.chi_self_phonon, r.chi_cross) for r in rows))
    return EXIT_OK


def cmd_oracle(cfg: dict, writer: _Writer, n_threads: int) -> int:
    model = _bbq_model(cfg)
    transmon = _bbq_transmon(cfg)
    blk = cfg.get("hilbert", {})
    if not isinstance(blk, dict):
        raise ConfigError("hilbert must be an object")
    fock = blk.get("fock_cutoff", 12)
    charge = blk.get("charge_cutoff", 20)
    if not isinstance(fock, int) or not isinstance(charge, int) \
            or fock < 2 or charge < 2:
        raise ConfigError("hilbert cutoffs must be integers >= 2")

    rep = bbq_report(model, transmon)
    n_modes = len(rep.modes)
    spec = HilbertSpec(charge_cutoff=charge, fock_cutoffs=(fock,) * n_modes)
    chi_exact = multimode_anharmonicities(rep.modes, transmon.e_j, spec)
    trans_exact = multimode_transitions(rep.modes, transmon.e_j, spec)

    chi_pert = rep.chi
    rows = []
    for k in range(n_modes):
        for j in range(k, n_modes):
            exact, pert = chi_exact[k, j], chi_pert[k, j]
            rel = (abs(pert - exact) / abs(exact)) if exact else float("nan")
            rows.append({"kind": "self" if k == j else "cross",
                         "mode_k": k, "mode_j": j,
                         "chi_perturbative_rad_s": pert,
                         "chi_oracle_rad_s": exact,
                         "rel_deviation": rel})
    writer.json("oracle_comparison.json", {
        "labels": list(rep.labels),
        "omega_prime_rad_s": rep.omega_prime.tolist(),
        "omega_oracle_rad_s": trans_exact.tolist(),
        "kerr_rows": rows,
        "fock_cutoff": fock,
        "charge_cutoff": charge,
    })

    single = cfg.get("avoided_crossing")
    if single is not None:
        if not isinstance(single, dict):
            raise ConfigError("avoided_crossing must be an object")
        mat = _material(cfg)
        geom = _geometry(cfg)
        net = fbar_single_mode_network(mat, geom)
        tp = TransmonParams(
            e_j=_positive(single, "e_j_joules", "avoided_crossing."),
            c_sigma=_positive(single, "c_sigma_f", "avoided_crossing."))
        srep = quantize_single_mode(net, tp, strict=False)
        g_num, e_j_min = extract_g_avoided_crossing(
            srep, tp, HilbertSpec(charge_cutoff=charge, fock_cutoffs=(fock,)))
        # Compare like with like: the perturbative g at the resonant E_J
        # the oracle scan settled on.
        srep = quantize_single_mode(
            net, TransmonParams(e_j=e_j_min, c_sigma=tp.c_sigma),
            strict=False)
        writer.json("avoided_crossing.json", {
            "g_perturbative_rad_s": srep.g,
            "g_oracle_rad_s": g_num,
            "e_j_at_minimum_joules": e_j_min,
            "rel_deviation": abs(g_num - srep.g) / srep.g,
        })
    return EXIT_OK


_COMMANDS = {
    "fbar": cmd_fbar,
    "fit": cmd_fit,
    "couple": cmd_couple,
    "bbq": cmd_bbq,
    "oracle": cmd_oracle,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="pq",
        description="Piezoelectric-resonator circuit quantization toolkit")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in _COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True,
                        help="path to the JSON run configuration")
        sp.add_argument("--out", required=True,
                        help="output directory for artifacts")
        sp.add_argument("--threads", type=int, default=None,
                        help="worker thread count "
                             "(default: $PHONON_QUANT_THREADS or 1)")
    args = parser.parse_args(argv)

    try:
        n_threads = _thread_count(args)
        cfg, sha = _load_config(args.config)
        writer = _Writer(Path(args.out), sha)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return _COMMANDS[args.subcommand](cfg, writer, n_threads)
    except ConfigError as exc:
        print(f"pq: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FitConvergenceError as exc:
        print(f"pq: did not converge: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (ExpansionValidityError, TransmonLimitError,
            PoleProximityError) as exc:
        print(f"pq: contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except PhononQuantError as exc:
        print(f"pq: error: {exc}", file=sys.stderr)
        return EXIT_CONTRACT


if __name__ == "__main__":
    sys.exit(main())
