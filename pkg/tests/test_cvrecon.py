import numpy as np
import pytest
from scipy.linalg import sqrtm

from tomokit.cvrecon import (
    classify_tomogram,
    gaussian_optical_tomogram,
    gaussian_sweep_covariances,
    neither_fixture,
    reconstruct_density_matrix,
    reconstruct_phase_space,
)
from tomokit.cvstates import (
    DensityMatrixCV,
    classical_gaussian_density,
    coherent_state,
    fock_amplitudes,
    fock_state,
    thermal_state,
)
from tomokit.cvtomo import optical_tomogram, symplectic_tomogram
from tomokit.numkernel import NumericalFailure


def _rho(state):
    if isinstance(state, DensityMatrixCV):
        return np.asarray(state.matrix)
    a = fock_amplitudes(state, 32)
    return np.outer(a, a.conj())


def test_vacuum_phase_space(vacuum):
    qg, pg, f = reconstruct_phase_space(vacuum)
    q, p = np.meshgrid(qg.points, pg.points, indexing="ij")
    np.testing.assert_allclose(f, np.exp(-q * q - p * p) / np.pi, atol=1e-8)


def test_classical_phase_space_roundtrip():
    qg, pg, f = reconstruct_phase_space(classical_gaussian_density(0, 0, np.eye(2)))
    q, p = np.meshgrid(qg.points, pg.points, indexing="ij")
    np.testing.assert_allclose(f, np.exp(-(q * q + p * p) / 2) / (2 * np.pi), atol=1e-8)


def test_fock1_phase_space_negative_at_origin(fock1):
    # f = W / 2pi, so f(0, 0) = -1/pi
    qg, pg, f = reconstruct_phase_space(fock1)
    q, p = np.meshgrid(qg.points, pg.points, indexing="ij")
    np.testing.assert_allclose(f, (2 * (q * q + p * p) - 1) * np.exp(-q * q - p * p) / np.pi, atol=1e-6)


def test_phase_space_from_optical_samples(coherent1):
    qg, pg, f = reconstruct_phase_space(optical_tomogram(coherent1))
    q, p = np.meshgrid(qg.points, pg.points, indexing="ij")
    np.testing.assert_allclose(f, np.exp(-((q - np.sqrt(2)) ** 2) - p * p) / np.pi, atol=1e-4)


@pytest.mark.parametrize(
    "state",
    [fock_state(0), fock_state(1), coherent_state(1.0), thermal_state(0.5), coherent_state(-0.5 + 0.8j)],
    ids=["vacuum", "fock1", "coherent1", "thermal", "coherent_complex"],
)
def test_density_matrix_roundtrip(state):
    rho_in = _rho(state)
    rho = reconstruct_density_matrix(symplectic_tomogram(state), cutoff=32)
    np.testing.assert_allclose(rho, rho.conj().T, atol=1e-12)
    ra = sqrtm(rho_in)
    fid = np.real(np.trace(sqrtm(ra @ rho @ ra))) ** 2
    assert fid >= 0.999
    np.testing.assert_allclose(rho, rho_in, atol=1e-8)


def test_density_matrix_from_optical_file_data(coherent1):
    rho = reconstruct_density_matrix(optical_tomogram(coherent1))
    np.testing.assert_allclose(rho, _rho(coherent1), atol=1e-6)


def test_cutoff_too_small():
    with pytest.raises(ValueError, match="cutoff too small"):
        reconstruct_density_matrix(coherent_state(2.0), cutoff=8)


def test_non_decaying_characteristic_fails():
    with pytest.raises(NumericalFailure):
        reconstruct_phase_space(gaussian_optical_tomogram(1e-4 * np.eye(2)))


@pytest.mark.parametrize(
    "state,label",
    [
        (coherent_state(1.0), "both"),
        (fock_state(0), "both"),
        (thermal_state(0.5), "both"),
        (fock_state(1), "quantum"),
        (classical_gaussian_density(0, 0, 0.01 * np.eye(2)), "classical"),
        (classical_gaussian_density(0.3, 0, np.eye(2)), "both"),
    ],
)
def test_classification(state, label):
    assert classify_tomogram(state).label == label


@pytest.mark.parametrize(
    "cov",
    [np.diag([0.5, 0.5]), np.diag([0.2, 1.0]), np.diag([0.3, 0.3]), np.diag([0.15, 1.2]), np.array([[0.6, 0.2], [0.2, 0.5]])],
)
def test_gaussian_quantum_flag_matches_uncertainty(cov):
    res = classify_tomogram(gaussian_optical_tomogram(cov))
    assert res.quantum == (np.linalg.det(cov) >= 0.25)
    assert res.classical


def test_sweep_covariances_avoid_boundary():
    covs = gaussian_sweep_covariances(20, seed=0)
    dets = np.array([np.linalg.det(c) for c in covs])
    assert len(covs) == 20
    assert np.all(np.abs(dets - 0.25) > 0.01)
    assert (dets < 0.25).sum() >= 3 and (dets > 0.25).sum() >= 3


def test_neither_fixture():
    tomo, params, res = neither_fixture()
    assert res.label == "neither"
    assert res.min_phase_space_value < -res.tolerance
    assert res.min_density_eigenvalue < -res.tolerance


def test_report_line_format():
    line = classify_tomogram(fock_state(1)).report_line()
    assert line.startswith("classical=false quantum=true min_f=")


@pytest.mark.slow
def test_rescaled_tomogram_same_flags(coherent1):
    M = symplectic_tomogram(coherent1)
    assert classify_tomogram(M.rescaled(2.0)).label == classify_tomogram(M).label
