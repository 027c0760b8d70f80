import numpy as np
import pytest

from conftest import gaussian
from tomokit.cvstates import coherent_state, fock_amplitudes, fock_state, thermal_state
from tomokit.cvtomo import symplectic_tomogram, vacuum_tomogram_formula
from tomokit.multimode import (
    GaussianDensity,
    MultimodeState,
    SampledDensity,
    center_of_mass_tomogram,
    multimode_entropy_check,
    multimode_symplectic_tomogram,
    reconstruct_multimode,
    subsystem_marginal,
)
from tomokit.numkernel import make_grid

MU = np.array([0.6, 1.2])
NU = np.array([0.8, -0.3])
COV4 = np.array([[1, 0.3, 0.1, 0], [0.3, 0.9, 0, 0.2], [0.1, 0, 1.1, -0.2], [0, 0.2, -0.2, 0.8]])


@pytest.fixture(scope="module")
def vac2():
    return MultimodeState.product([fock_state(0), fock_state(0)])


def test_product_tomogram_factorizes(vac2):
    M = multimode_symplectic_tomogram(vac2)
    rng = np.random.default_rng(1)
    for _ in range(10):
        X = rng.uniform(-2, 2, 2)
        mu = rng.uniform(0.3, 1.5, 2) * rng.choice([-1, 1], 2)
        nu = rng.uniform(0.3, 1.5, 2) * rng.choice([-1, 1], 2)
        ref = vacuum_tomogram_formula(X[0], mu[0], nu[0]) * vacuum_tomogram_formula(X[1], mu[1], nu[1])
        assert M.evaluate(X, mu, nu) == pytest.approx(ref, abs=1e-9)


def test_product_tomogram_normalized_and_homogeneous(vac2):
    M = multimode_symplectic_tomogram(vac2)
    g = np.linspace(-8, 8, 161)
    XX = np.stack(np.meshgrid(g, g, indexing="ij"), -1)
    assert M.evaluate(XX, MU, NU).sum() * (g[1] - g[0]) ** 2 == pytest.approx(1.0, abs=1e-4)
    for k in range(2):
        assert M.mode_homogeneity_residual(np.array([0.3, -0.5]), MU, NU, k) < 1e-6


def test_zero_mode_direction_rejected(vac2):
    M = multimode_symplectic_tomogram(vac2)
    with pytest.raises(ValueError):
        M.evaluate(np.zeros(2), [1.0, 0.0], [0.0, 0.0])


def test_center_of_mass_vacuum(vac2):
    cm = center_of_mass_tomogram(vac2)
    x = np.linspace(-4, 4, 33)
    var = float((MU**2 + NU**2).sum() / 2)
    np.testing.assert_allclose(cm.evaluate(x, MU, NU), gaussian(x, 0.0, var), atol=1e-5)


@pytest.mark.parametrize("lam", [-2.0, 0.5, 3.0])
def test_center_of_mass_homogeneity(vac2, lam):
    cm = center_of_mass_tomogram(vac2)
    assert cm.homogeneity_error(np.linspace(-3, 3, 7), MU, NU, lam) < 1e-6


def test_center_of_mass_differential_form(vac2):
    assert center_of_mass_tomogram(vac2).differential_residual(0.7, MU, NU) < 1e-4


def test_center_of_mass_product_of_coherent():
    st = MultimodeState.product([coherent_state(1.0), coherent_state(0.5j)])
    x = np.linspace(-4, 6, 21)
    mean = np.sqrt(2) * (MU[0] * 1.0 + NU[1] * 0.5)
    var = float((MU**2 + NU**2).sum() / 2)
    np.testing.assert_allclose(center_of_mass_tomogram(st).evaluate(x, MU, NU), gaussian(x, mean, var), atol=1e-5)


def test_center_of_mass_gaussian_closed_form():
    cm = center_of_mass_tomogram(MultimodeState.classical(GaussianDensity(np.zeros(4), COV4)))
    k = np.array([MU[0], NU[0], MU[1], NU[1]])
    x = np.linspace(-4, 4, 17)
    np.testing.assert_allclose(cm.evaluate(x, MU, NU), gaussian(x, 0.0, k @ COV4 @ k), atol=1e-12)


def test_sampled_density_binning_matches_closed_form():
    G = GaussianDensity(np.zeros(4), COV4)
    S = G.sampled(make_grid(-6, 6, 40))
    cmS = center_of_mass_tomogram(MultimodeState.classical(S))
    cmG = center_of_mass_tomogram(MultimodeState.classical(G))
    x = np.linspace(-3, 3, 13)
    np.testing.assert_allclose(cmS.evaluate(x, MU, NU), cmG.evaluate(x, MU, NU), atol=2e-2)
    g = make_grid(-8, 8, 400)
    assert cmS.evaluate(g.points, MU, NU).sum() * g.spacing == pytest.approx(1.0, abs=1e-4)


def test_symplectic_marginal_matches_single_mode():
    M = multimode_symplectic_tomogram(MultimodeState.product([fock_state(1), coherent_state(0.5)]))
    x = np.linspace(-4, 4, 17)
    direct = symplectic_tomogram(fock_state(1)).evaluate(x, 0.6, 0.8)
    np.testing.assert_allclose(subsystem_marginal(M, 1).evaluate(x[:, None], [0.6], [0.8]), direct, atol=1e-4)


def test_center_of_mass_marginal_matches_single_mode(vac2):
    x = np.linspace(-4, 4, 17)
    direct = symplectic_tomogram(fock_state(0)).evaluate(x, 0.6, 0.8)
    cm = center_of_mass_tomogram(vac2)
    np.testing.assert_allclose(subsystem_marginal(cm, 1).evaluate(x, [0.6], [0.8]), direct, atol=1e-4)


@pytest.mark.parametrize("drop", [0, 2, 1.5])
def test_marginal_rejects_bad_drop(vac2, drop):
    with pytest.raises(ValueError):
        subsystem_marginal(multimode_symplectic_tomogram(vac2), drop)


def test_classical_reconstruction_gaussian():
    G = GaussianDensity(np.zeros(4), COV4)
    og, f = reconstruct_multimode(center_of_mass_tomogram(MultimodeState.classical(G)), "classical")
    P = og.points
    Z = np.stack(np.meshgrid(P, P, P, P, indexing="ij"), -1)
    np.testing.assert_allclose(f, G.pdf(Z), atol=1e-8)


def test_quantum_product_reconstruction():
    coh = coherent_state(1.0)
    st = MultimodeState.product([fock_state(0), coh])
    rhos = reconstruct_multimode(multimode_symplectic_tomogram(st), "quantum-product")
    a = fock_amplitudes(coh, 32)
    assert rhos[0][0, 0].real == pytest.approx(1.0, abs=1e-4)
    assert np.real(a.conj() @ rhos[1] @ a) == pytest.approx(1.0, abs=1e-4)


def test_quantum_reconstruction_needs_product():
    st = MultimodeState.classical(GaussianDensity(np.zeros(4), COV4))
    with pytest.raises(ValueError):
        reconstruct_multimode(multimode_symplectic_tomogram(st), "quantum-product")


def test_dispersion_ordering():
    G = GaussianDensity(np.zeros(4), COV4)
    d = MultimodeState.classical(G).dispersion()
    # (q1, p1, q2, p2) -> (p1, q1, p2, q2)
    assert d[0, 0] == COV4[1, 1] and d[1, 1] == COV4[0, 0] and d[0, 3] == COV4[1, 2]
    mixed = MultimodeState.product([thermal_state(0.5), fock_state(0)])
    np.testing.assert_allclose(mixed.dispersion(), np.diag([1.0, 1.0, 0.5, 0.5]), atol=1e-8)


def test_sampled_density_validation():
    g = make_grid(-1, 1, 8)
    with pytest.raises(ValueError):
        SampledDensity((g, g), np.ones((8, 8)))
    with pytest.raises(ValueError):
        SampledDensity((g,), np.ones(8) / 2)


@pytest.mark.parametrize(
    "modes,expected",
    [
        ([coherent_state(1.0), coherent_state(0.5j)], 0.0),
        ([fock_state(0), fock_state(0), fock_state(0)], 0.0),
    ],
)
def test_entropy_check_saturation(modes, expected):
    rep = multimode_entropy_check(MultimodeState.product(modes), len(modes))
    assert rep.residual == pytest.approx(expected, abs=1e-3)


def test_entropy_check_fock_excess():
    from tomokit.cventropy import LN_PI_E, position_momentum_entropies

    sx, sp = position_momentum_entropies(fock_state(1))
    rep = multimode_entropy_check(MultimodeState.product([fock_state(0), fock_state(1)]))
    assert rep.residual == pytest.approx(sx + sp - LN_PI_E, abs=1e-9)
    assert rep.ok()


def test_entropy_check_needs_pure_product():
    with pytest.raises(ValueError):
        multimode_entropy_check(MultimodeState.product([thermal_state(0.5), fock_state(0)]))
