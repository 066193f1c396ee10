"""Shared fixtures: a lithium-niobate-like FBAR and derived artifacts."""

import numpy as np
import pytest

import phonon_quant as pq


@pytest.fixture(scope="session")
def material():
    # Illustrative thin-film constants (stress-charge form): K^2 ~ 2.5%,
    # v_bar ~ 7.35 km/s, typical of a strongly piezoelectric film.
    return pq.MaterialParams(e_pz=1.3, c=2.45e11, epsilon=2.66e-10,
                             rho=4650.0)


@pytest.fixture(scope="session")
def geometry():
    return pq.FbarGeometry(thickness_b=750e-9, area=1e-12)


@pytest.fixture(scope="session")
def fbar_samples(material, geometry):
    (pole, zero), = pq.fbar_pole_zero(material, geometry, 1)
    omega = pq.sample_grid(0.5 * pole, 1.5 * zero, 2001)
    return pq.AdmittanceSamples(
        omega, pq.fbar_admittance(material, geometry, omega))


@pytest.fixture(scope="session")
def fbar_model(fbar_samples):
    model = pq.vector_fit(fbar_samples, pq.FitOptions(n_poles=2,
                                                      tolerance=1e-3))
    return pq.enforce_lossless(model, fbar_samples)


@pytest.fixture(scope="session")
def single_mode_net(material, geometry):
    return pq.fbar_single_mode_network(material, geometry)


@pytest.fixture
def rng():
    return np.random.default_rng(20260826)
