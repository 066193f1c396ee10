"""End-to-end runs of the ``pq`` subcommands and their exit-code contract."""

import json

import numpy as np
import pytest

from phonon_quant.cli import main

MATERIAL = {"e_pz_c_per_m2": 1.3, "c_pa": 2.45e11,
            "epsilon_f_per_m": 2.66e-10, "rho_kg_per_m3": 4650.0}
GEOMETRY = {"thickness_m": 7.5e-7, "area_m2": 1e-12}


def _write(tmp_path, name, cfg):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def _run(args):
    return main([str(a) for a in args])


@pytest.fixture()
def fbar_cfg(tmp_path):
    return _write(tmp_path, "fbar.json", {
        "material": MATERIAL, "geometry": GEOMETRY,
        "band": {"f_min_hz": 2.5e9, "f_max_hz": 7.5e9, "n_points": 501}})


def test_fbar_outputs(tmp_path, fbar_cfg):
    out = tmp_path / "out"
    assert _run(["fbar", "--config", fbar_cfg, "--out", out]) == 0
    rows = [l for l in (out / "admittance.csv").read_text().splitlines()
            if not l.startswith("#")]
    assert rows[0] == "freq_hz,re_y_siemens,im_y_siemens"
    assert len(rows) == 502
    summary = json.loads((out / "fbar_summary.json").read_text())
    assert "config_sha256" in summary and "toolkit_version" in summary
    # First admittance zero at pi v_bar / b.
    v_bar = np.sqrt((2.45e11 + 1.3**2 / 2.66e-10) / 4650.0)
    assert summary["zeros_rad_s"][0] == pytest.approx(
        np.pi * v_bar / 7.5e-7, rel=1e-9)


def test_deterministic_output(tmp_path, fbar_cfg):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert _run(["fbar", "--config", fbar_cfg, "--out", out1]) == 0
    assert _run(["fbar", "--config", fbar_cfg, "--out", out2]) == 0
    assert (out1 / "admittance.csv").read_bytes() \
        == (out2 / "admittance.csv").read_bytes()


def test_missing_config_exits_2(tmp_path):
    assert _run(["fbar", "--config", tmp_path / "nope.json",
                 "--out", tmp_path / "o"]) == 2


def test_invalid_config_exits_2_without_partial_files(tmp_path):
    cfg = _write(tmp_path, "bad.json", {"material": MATERIAL})
    out = tmp_path / "o"
    assert _run(["fbar", "--config", cfg, "--out", out]) == 2
    assert not out.exists() or not list(out.iterdir())


def test_fit_pipeline(tmp_path, fbar_cfg):
    out = tmp_path / "o1"
    assert _run(["fbar", "--config", fbar_cfg, "--out", out]) == 0
    cfg = _write(tmp_path, "fit.json", {
        "input_csv": str(out / "admittance.csv"), "n_poles": 2,
        "tolerance": 1e-3})
    out2 = tmp_path / "o2"
    assert _run(["fit", "--config", cfg, "--out", out2]) == 0
    model = json.loads((out2 / "model.json").read_text())
    report = json.loads((out2 / "fit_report.json").read_text())
    assert report["converged"] is True
    v_bar = np.sqrt((2.45e11 + 1.3**2 / 2.66e-10) / 4650.0)
    # Fitted pole within 1e-6 of the analytic pole frequency.
    from phonon_quant import MaterialParams, FbarGeometry, fbar_pole_zero
    (pole, _), = fbar_pole_zero(
        MaterialParams(1.3, 2.45e11, 2.66e-10, 4650.0),
        FbarGeometry(7.5e-7, 1e-12), 1)
    assert report["pole_freqs_hz"][0] * 2 * np.pi == pytest.approx(
        pole, rel=1e-6)
    assert model["converged"] is True


def test_unconverged_fit_exits_3(tmp_path, fbar_cfg):
    out = tmp_path / "o1"
    assert _run(["fbar", "--config", fbar_cfg, "--out", out]) == 0
    cfg = _write(tmp_path, "fit.json", {
        "input_csv": str(out / "admittance.csv"), "n_poles": 2,
        "tolerance": 1e-12})
    out2 = tmp_path / "o2"
    assert _run(["fit", "--config", cfg, "--out", out2]) == 3
    report = json.loads((out2 / "fit_report.json").read_text())
    assert report["converged"] is False


def test_couple_with_sweep(tmp_path):
    cfg = _write(tmp_path, "couple.json", {
        "material": MATERIAL, "geometry": GEOMETRY,
        "transmon": {"e_j_joules": 6.6e-24, "c_sigma_f": 1e-13},
        "sweep": {"area_mult_min": 0.1, "area_mult_max": 10.0,
                  "n_points": 11, "c_sigma_f": [1e-14, 1e-13]}})
    out = tmp_path / "o"
    assert _run(["couple", "--config", cfg, "--out", out,
                 "--threads", 2]) == 0
    rows = [l for l in (out / "coupling_sweep.csv").read_text().splitlines()
            if not l.startswith("#")]
    assert rows[0] == "c_g_f,c_sigma_f,g_rad_s,omega_phi_rad_s,omega_m_rad_s"
    assert len(rows) == 1 + 22
    rep = json.loads((out / "coupling.json").read_text())
    assert rep["g_rad_s"] > 0


def test_bbq_expansion_violation_exits_4(tmp_path):
    cfg = _write(tmp_path, "bbq.json", {
        "material": MATERIAL, "geometry": GEOMETRY,
        "transmon": {"e_j_joules": 1e-24, "c_j_f": 5e-17,
                     "c_shunt_f": 5e-17}})
    assert _run(["bbq", "--config", cfg, "--out", tmp_path / "o"]) == 4


def test_bbq_with_detuning_sweep(tmp_path):
    cfg = _write(tmp_path, "bbq.json", {
        "material": MATERIAL,
        "geometry": {"thickness_m": 7.5e-7, "area_m2": 2e-11},
        "transmon": {"e_j_joules": 2.4e-22, "c_j_f": 2.5e-15,
                     "c_shunt_f": 3.9975e-12},
        "detuning_sweep": {"e_j_min_joules": 2.0e-22,
                           "e_j_max_joules": 2.8e-22, "n_points": 9}})
    out = tmp_path / "o"
    assert _run(["bbq", "--config", cfg, "--out", out, "--threads", 2]) == 0
    rep = json.loads((out / "bbq.json").read_text())
    assert set(rep["labels"]) == {"transmon-like", "phonon-like"}
    rows = [l for l in
            (out / "detuning_sweep.csv").read_text().splitlines()
            if not l.startswith("#")]
    assert rows[0] == ("delta_rad_s,e_j_joules,chi_self_transmonlike,"
                       "chi_self_phononlike,chi_cross")
    deltas = [float(r.split(",")[0]) for r in rows[1:]]
    assert deltas == sorted(deltas)


def test_oracle_comparison(tmp_path):
    cfg = _write(tmp_path, "oracle.json", {
        "material": MATERIAL,
        "geometry": {"thickness_m": 7.5e-7, "area_m2": 2e-11},
        "transmon": {"e_j_joules": 1.55e-22, "c_j_f": 2.5e-15,
                     "c_shunt_f": 3.9975e-12},
        "hilbert": {"fock_cutoff": 8, "charge_cutoff": 15},
        "avoided_crossing": {"e_j_joules": 6.6e-23, "c_sigma_f": 1e-13}})
    out = tmp_path / "o"
    assert _run(["oracle", "--config", cfg, "--out", out]) == 0
    comp = json.loads((out / "oracle_comparison.json").read_text())
    cross = [r for r in comp["kerr_rows"] if r["kind"] == "cross"]
    assert cross and cross[0]["rel_deviation"] < 0.05
    avoided = json.loads((out / "avoided_crossing.json").read_text())
    assert avoided["rel_deviation"] < 0.05


def test_threads_env_var(tmp_path, fbar_cfg, monkeypatch):
    monkeypatch.setenv("PHONON_QUANT_THREADS", "2")
    assert _run(["fbar", "--config", fbar_cfg, "--out", tmp_path / "o"]) == 0
    monkeypatch.setenv("PHONON_QUANT_THREADS", "zero")
    assert _run(["fbar", "--config", fbar_cfg, "--out", tmp_path / "p"]) == 2
