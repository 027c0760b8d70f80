import numpy as np
import pytest

from conftest import gaussian
from tomokit.cvrecon import gaussian_optical_tomogram
from tomokit.cvstates import coherent_state, fock_state, thermal_state
from tomokit.cvtomo import optical_tomogram
from tomokit.fidelity import bounds_ok, fidelity_from_tomograms, joint_distribution, rotated_marginal
from tomokit.numkernel import BoundViolation, NumericalFailure, make_grid

# overlaps Tr(rho1 rho2): |<a|b>|^2 = exp(-|a-b|^2), <1|a> = a exp(-|a|^2/2),
# thermal Q-function exp(-|a|^2/(1+n)) / (1+n)
PAIRS = [
    ("vac", "vac", 1.0),
    ("vac", "coh1", np.exp(-1.0)),
    ("coh1", "coh_i", np.exp(-1.25)),
    ("fock1", "coh1", np.exp(-1.0)),
    ("fock1", "fock1", 1.0),
    ("vac", "fock1", 0.0),
    ("thermal", "coh1", (2 / 3) * np.exp(-2 / 3)),
]


@pytest.fixture(scope="module")
def tomos():
    states = {
        "vac": fock_state(0),
        "coh1": coherent_state(1.0),
        "coh_i": coherent_state(0.5j),
        "fock1": fock_state(1),
        "thermal": thermal_state(0.5),
    }
    return {k: optical_tomogram(v) for k, v in states.items()}


@pytest.mark.parametrize("a,b,expected", PAIRS)
def test_overlap_values(tomos, a, b, expected):
    F, im = fidelity_from_tomograms(tomos[a], tomos[b])
    assert F == pytest.approx(expected, abs=1e-3)
    assert im <= 1e-3


def test_symmetric(tomos):
    assert fidelity_from_tomograms(tomos["fock1"], tomos["coh1"])[0] == pytest.approx(
        fidelity_from_tomograms(tomos["coh1"], tomos["fock1"])[0], abs=1e-4
    )


def test_joint_distribution_normalized(tomos):
    P = joint_distribution(tomos["fock1"], tomos["coh1"])
    assert P.normalization() == pytest.approx(1.0, abs=1e-4)
    assert P.values.min() >= 0


def test_vacuum_rotated_marginal(tomos):
    marg = rotated_marginal(joint_distribution(tomos["vac"], tomos["vac"]))
    assert marg.normalization() == pytest.approx(1.0, abs=1e-4)
    np.testing.assert_allclose(marg.values, gaussian(marg.bgrid.points, 0.0, 0.5), atol=1e-4)
    assert marg.characteristic(0.0)[0] == pytest.approx(1.0, abs=1e-4)


def test_grid_mismatch(tomos):
    other = optical_tomogram(fock_state(0), make_grid(0, 2 * np.pi, 128))
    with pytest.raises(ValueError, match="grid mismatch"):
        joint_distribution(tomos["vac"], other)


def test_slow_decay(tomos):
    with pytest.raises(NumericalFailure):
        fidelity_from_tomograms(tomos["vac"], tomos["vac"], lambda_max=3.0)


def test_non_quantum_input_violates_bound():
    # narrow classical Gaussians: the integral gives 1/(2 sqrt(det)) = 5;
    # xi = exp(-lam^2/20) is negligible well before lam = 30
    w = gaussian_optical_tomogram(0.1 * np.eye(2))
    with pytest.raises(BoundViolation):
        fidelity_from_tomograms(w, w, lambda_max=30.0)
    F, _ = fidelity_from_tomograms(w, w, lambda_max=30.0, check_bounds=False)
    assert F == pytest.approx(5.0, abs=1e-2)


@pytest.mark.parametrize("F,ok", [(0.5, True), (-5e-4, True), (1.0009, True), (-0.01, False), (1.01, False)])
def test_bounds_ok(F, ok):
    assert bounds_ok(F) is ok
