import numpy as np
import pytest

from tomokit.numkernel import BoundViolation, haar_unitary
from tomokit.spintomo import (
    DensityMatrixSpin,
    ObservablePair,
    bell_state,
    bipartite_subadditivity,
    eigenbasis_unitary,
    fourier_of_sqrt,
    ghz_state,
    group_average_entropy,
    haar_mixed_state,
    haar_pure_state,
    maximally_mixed,
    measurement_bounds,
    min_over_unitaries,
    partial_trace,
    pure_spin_state,
    qft_inequality_check,
    qft_matrix,
    quantum_renyi_entropy,
    qubit_state,
    relative_q_entropy,
    renyi_tomo_entropy,
    shannon_tomo_entropy,
    spin_tomogram,
    tripartite_ssa,
    von_neumann_entropy,
)

LN2 = np.log(2)
PX = np.array([[0, 1], [1, 0]], dtype=complex)
PZ = np.diag([1.0, -1.0]).astype(complex)


def test_qft_two_level():
    np.testing.assert_allclose(qft_matrix(2), np.array([[1, 1], [1, -1]]) / np.sqrt(2), atol=1e-15)


@pytest.mark.parametrize("N", [2, 3, 4, 5, 8])
def test_qft_unitary_and_fourth_power(N):
    F = qft_matrix(N)
    np.testing.assert_allclose(F @ F.conj().T, np.eye(N), atol=1e-12)
    np.testing.assert_allclose(np.linalg.matrix_power(F, 4), np.eye(N), atol=1e-12)


def test_qft_nth_power_is_not_identity():
    # F^2 is the index reversal j -> -j mod N, so F^3 != I
    assert np.abs(np.linalg.matrix_power(qft_matrix(3), 3) - np.eye(3)).max() > 0.5


@pytest.mark.parametrize("N", [1, 2.5])
def test_qft_invalid_dimension(N):
    with pytest.raises(ValueError):
        qft_matrix(N)


@pytest.mark.parametrize("a", [0.5, 0.7, 0.9, 1.0])
def test_qubit_entropies(a):
    b = 1 - a
    w = spin_tomogram(qubit_state(a, b), np.eye(2))
    expected = -sum(x * np.log(x) for x in (a, b) if x > 0)
    assert shannon_tomo_entropy(w) == pytest.approx(expected, abs=1e-14)
    assert renyi_tomo_entropy(w, 2) == pytest.approx(-np.log(a**2 + b**2), abs=1e-14)
    assert renyi_tomo_entropy(w, 0.5) == pytest.approx(2 * np.log(np.sqrt(a) + np.sqrt(b)), abs=1e-14)
    assert von_neumann_entropy(qubit_state(a, b)) == pytest.approx(expected, abs=1e-14)


def test_renyi_tends_to_shannon():
    w = np.array([0.5, 0.3, 0.2])
    assert renyi_tomo_entropy(w, 1 + 1e-7) == pytest.approx(shannon_tomo_entropy(w), abs=1e-6)


@pytest.mark.parametrize("q", [0, -1, 1])
def test_renyi_invalid_order(q):
    with pytest.raises(ValueError):
        renyi_tomo_entropy([0.5, 0.5], q)


def test_relative_q_entropy_values():
    assert relative_q_entropy([1, 0], [0.5, 0.5], 0.5) == pytest.approx(2 - np.sqrt(2), abs=1e-14)
    w1, w2 = np.array([0.6, 0.4]), np.array([0.3, 0.7])
    kl = float(np.sum(w1 * np.log(w1 / w2)))
    assert relative_q_entropy(w1, w2, 1) == pytest.approx(kl, abs=1e-14)
    assert relative_q_entropy(w1, w1, 0.7) == pytest.approx(0.0, abs=1e-15)


def test_relative_q_entropy_support_violation():
    with pytest.raises(ValueError, match="support"):
        relative_q_entropy([0.5, 0.5], [1.0, 0.0], 0.5)


def test_tomogram_dimension_mismatch():
    with pytest.raises(ValueError):
        spin_tomogram(qubit_state(0.5, 0.5), np.eye(3))


@pytest.mark.parametrize(
    "m",
    [
        np.array([[0.5, 0.1], [0.2, 0.5]]),
        np.diag([0.6, 0.6]),
        np.diag([1.2, -0.2]),
        np.ones(3) / 3,
    ],
)
def test_invalid_density_matrices(m):
    with pytest.raises(ValueError):
        DensityMatrixSpin(m)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_eigenbasis_unitary_gives_spectrum(seed):
    rho = haar_mixed_state(4, seed)
    vals, V = eigenbasis_unitary(rho)
    assert np.all(np.diff(vals) <= 0)
    np.testing.assert_allclose(spin_tomogram(rho, V.conj().T).probabilities, vals, atol=1e-12)


@pytest.mark.parametrize("mode,q", [("shannon", None), ("renyi", 0.5), ("renyi", 2.0)])
def test_min_over_unitaries_qutrit(mode, q):
    rho = haar_mixed_state(3, 5)
    value, argmin = min_over_unitaries(rho, mode=mode, samples=500, rng_seed=1, q=q)
    exact = von_neumann_entropy(rho) if q is None else quantum_renyi_entropy(rho, q)
    assert value == pytest.approx(exact, abs=1e-12)
    np.testing.assert_allclose(argmin @ argmin.conj().T, np.eye(3), atol=1e-12)


def test_min_over_unitaries_pure_is_zero():
    value, _ = min_over_unitaries(haar_pure_state(4, 2), samples=200)
    assert value == pytest.approx(0.0, abs=1e-10)


def test_min_over_unitaries_bad_mode():
    with pytest.raises(ValueError):
        min_over_unitaries(maximally_mixed(2), mode="renyi", q=None)


def test_measurement_bounds_pauli():
    pair = ObservablePair.from_operators(PZ, PX)
    rep = measurement_bounds(pair, [1, 0])
    assert rep.c == pytest.approx(1 / np.sqrt(2), abs=1e-14)
    assert rep.H_p == pytest.approx(0.0, abs=1e-14)
    assert rep.H_q == pytest.approx(LN2, abs=1e-14)
    assert rep.maassen_uffink_residual == pytest.approx(0.0, abs=1e-12)
    assert rep.mub_residual == pytest.approx(0.0, abs=1e-12)
    assert rep.deutsch_residual == pytest.approx(LN2 + 2 * np.log((1 + 2**-0.5) / 2), abs=1e-12)
    assert rep.ok


@pytest.mark.parametrize("seed", range(5))
def test_measurement_bounds_random(seed):
    rng = np.random.default_rng(seed)
    pair = ObservablePair(haar_unitary(4, seed), haar_unitary(4, seed + 100))
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    rep = measurement_bounds(pair, psi / np.linalg.norm(psi))
    assert rep.ok and rep.mub_residual is None
    assert rep.deutsch_residual >= rep.maassen_uffink_residual - 1e-12


def test_measurement_bounds_unnormalized():
    with pytest.raises(ValueError):
        measurement_bounds(ObservablePair.from_operators(PZ, PX), [1, 1])


def test_observable_pair_rejects_nonunitary():
    with pytest.raises(ValueError):
        ObservablePair(np.eye(2) * 2, np.eye(2))


def test_fourier_of_sqrt_uniform_concentrates():
    np.testing.assert_allclose(fourier_of_sqrt(np.ones(4) / 4), [1, 0, 0, 0], atol=1e-14)


@pytest.mark.parametrize("N", [2, 3, 4, 8])
def test_qft_inequalities_maximally_mixed(N):
    rep = qft_inequality_check(maximally_mixed(N), haar_unitary(N, 3))
    v = rep.values()
    assert v["renyi_sqrt"] == pytest.approx(0.0, abs=1e-12)
    assert v["shannon_sqrt"] == pytest.approx(0.0, abs=1e-12)
    for key in ("renyi_composed", "shannon_composed", "von_neumann"):
        assert v[key] == pytest.approx(np.log(N), abs=1e-12)


@pytest.mark.parametrize("alpha", [1.0, 0.75, 0.6])
def test_qft_inequalities_pure_qubit_saturate(alpha):
    beta = alpha / (2 * alpha - 1)
    rep = qft_inequality_check(pure_spin_state([1, 0]), np.eye(2), alpha, beta)
    for v in rep.values().values():
        assert v == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("N", [2, 3, 4, 8])
def test_qft_inequalities_random(N):
    for seed in range(25):
        rho = haar_mixed_state(N, seed)
        assert qft_inequality_check(rho, haar_unitary(N, 1000 + seed), 0.75, 1.5).ok(tol=1e-10)


def test_qft_inequality_orders_checked():
    with pytest.raises(ValueError):
        qft_inequality_check(maximally_mixed(2), np.eye(2), 1.0, 2.0)


def test_partial_trace_product():
    a, b = haar_mixed_state(2, 1).matrix, haar_mixed_state(3, 2).matrix
    ab = np.kron(a, b)
    np.testing.assert_allclose(partial_trace(ab, [2, 3], [0]), a, atol=1e-14)
    np.testing.assert_allclose(partial_trace(ab, [2, 3], [1]), b, atol=1e-14)


def test_bell_subadditivity():
    rep = bipartite_subadditivity(bell_state(), [2, 2], np.eye(4))
    assert rep.shannon_residual == pytest.approx(LN2, abs=1e-14)
    assert rep.von_neumann_residual == pytest.approx(2 * LN2, abs=1e-12)


def test_product_subadditivity_equality():
    a, b = haar_mixed_state(2, 3), haar_mixed_state(3, 4)
    rho = DensityMatrixSpin(np.kron(a.matrix, b.matrix))
    u = np.kron(haar_unitary(2, 5), haar_unitary(3, 6))
    rep = bipartite_subadditivity(rho, [2, 3], u)
    assert rep.shannon_residual == pytest.approx(0.0, abs=1e-12)
    assert rep.von_neumann_residual == pytest.approx(0.0, abs=1e-10)


def test_ghz_strong_subadditivity():
    rep = tripartite_ssa(ghz_state(), [2, 2, 2], np.eye(8))
    # all four marginal entropies equal ln 2 for the computational-basis tomogram
    for v in rep.entropies.values():
        assert v == pytest.approx(LN2, abs=1e-14)
    assert rep.shannon_residual == pytest.approx(0.0, abs=1e-14)
    assert rep.von_neumann_residual == pytest.approx(LN2, abs=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_random_subadditivity(seed):
    assert bipartite_subadditivity(haar_mixed_state(6, seed), [2, 3], haar_unitary(6, seed + 50)).ok()
    assert tripartite_ssa(haar_mixed_state(8, seed), [2, 2, 2], haar_unitary(8, seed + 50)).ok()


@pytest.mark.parametrize(
    "fn,dims",
    [(bipartite_subadditivity, [2, 3]), (tripartite_ssa, [2, 2]), (tripartite_ssa, [2, 3, 3])],
)
def test_subadditivity_dims_errors(fn, dims):
    n = int(np.prod(dims)) if fn is tripartite_ssa and len(dims) == 3 else 4
    with pytest.raises(ValueError):
        fn(maximally_mixed(n), dims, np.eye(n))


@pytest.mark.parametrize("N", [2, 3])
def test_group_average_maximally_mixed(N):
    g = group_average_entropy(maximally_mixed(N), samples=1000, rng_seed=1)
    assert g.mean == pytest.approx(np.log(N), abs=1e-12)
    assert g.bound_residual == pytest.approx(0.5 * np.log(N), abs=1e-12)
    assert g.ok()


def test_group_average_pure_qubit():
    # for a Haar qubit the tomogram is (p, 1-p) with p uniform, mean entropy 1/2
    g = group_average_entropy(pure_spin_state([1, 0]), samples=4000, rng_seed=2)
    assert g.mean == pytest.approx(0.5, abs=0.02)
    assert g.column_mean == pytest.approx(0.5, abs=0.02)
    assert g.ok()


def test_group_average_renyi_pair():
    g = group_average_entropy(haar_pure_state(3, 1), mode="renyi-pair", samples=1000, rng_seed=3)
    assert g.ok()


@pytest.mark.parametrize("kw", [{"samples": 999}, {"mode": "other"}, {"mode": "renyi-pair", "alpha": 1, "beta": 2}])
def test_group_average_errors(kw):
    with pytest.raises(ValueError):
        group_average_entropy(maximally_mixed(2), **kw)


def test_min_over_unitaries_raises_on_violation(monkeypatch):
    import tomokit.spintomo as st

    # a fake eigenbasis that is not minimal triggers the sampled check
    monkeypatch.setattr(st, "eigenbasis_unitary", lambda r: (None, qft_matrix(2)))
    with pytest.raises(BoundViolation):
        min_over_unitaries(qubit_state(0.9, 0.1), samples=200)


def test_ghz_strong_subadditivity_fourier_frame():
    # uniform over even-parity strings: bits 1 and 3 stay correlated given bit 2
    f2 = qft_matrix(2)
    u = np.kron(np.kron(f2, f2), f2)
    rep = tripartite_ssa(ghz_state(), [2, 2, 2], u)
    assert rep.entropies["H123"] == pytest.approx(2 * LN2, abs=1e-12)
    assert rep.shannon_residual == pytest.approx(LN2, abs=1e-12)
    assert bipartite_subadditivity(bell_state(), [2, 2], np.kron(f2, f2)).shannon_residual == pytest.approx(LN2, abs=1e-12)
