import numpy as np
import pytest

from tomokit.cvstates import fock_basis
from tomokit.numkernel import (
    WaveFunction,
    default_xgrid,
    fourier_momentum,
    fractional_fourier,
    haar_unitaries,
    haar_unitary,
    make_grid,
    scaled_dft,
)


@pytest.mark.parametrize("lower,upper,count", [(1.0, 1.0, 16), (2.0, -2.0, 16), (-1.0, 1.0, 7), (0, np.inf, 16)])
def test_grid_rejects_bad_input(lower, upper, count):
    with pytest.raises(ValueError):
        make_grid(lower, upper, count)


def test_grid_midpoints():
    g = make_grid(-1.0, 1.0, 8)
    assert g.spacing == pytest.approx(0.25)
    np.testing.assert_allclose(g.points, -1.0 + 0.125 + 0.25 * np.arange(8))


@pytest.mark.parametrize("scale", [0.3, 1.0, 2.7])
def test_scaled_dft_matches_direct_sum(scale):
    g = make_grid(-4.0, 4.0, 64)
    rng = np.random.default_rng(3)
    v = rng.normal(size=64) + 1j * rng.normal(size=64)
    x = g.points
    direct = np.exp(-1j * scale * np.outer(x, x)) @ v * g.spacing
    np.testing.assert_allclose(scaled_dft(v, g, scale), direct, atol=1e-10)


@pytest.mark.parametrize("n", [0, 1, 2, 5])
@pytest.mark.parametrize("theta", [0.0, 0.3, np.pi / 2, 2.0, np.pi, -1.1, 1e-9, np.pi - 1e-9, 7.0])
def test_fractional_fourier_hermite_eigenfunctions(n, theta):
    # oracle: oscillator eigenfunctions pick up exp(-i n theta)
    g = default_xgrid()
    phi = fock_basis(n + 1, g)[n]
    out = fractional_fourier(WaveFunction(g, phi), theta)
    np.testing.assert_allclose(out.samples, np.exp(-1j * n * theta) * phi, atol=1e-9)


def test_fractional_fourier_composes():
    g = default_xgrid()
    x = g.points
    psi = WaveFunction(g, np.exp(-0.5 * (x - 1.0) ** 2 + 0.4j * x) * np.pi**-0.25)
    two = fractional_fourier(fractional_fourier(psi, 0.4), 0.9)
    one = fractional_fourier(psi, 1.3)
    np.testing.assert_allclose(two.samples, one.samples, atol=1e-9)


def test_momentum_transform_is_quarter_turn():
    g = default_xgrid()
    x = g.points
    psi = WaveFunction(g, np.exp(-0.5 * (x - 0.7) ** 2) * np.pi**-0.25)
    np.testing.assert_allclose(fourier_momentum(psi).samples, fractional_fourier(psi, np.pi / 2).samples, atol=1e-9)


@pytest.mark.parametrize("dim", [1, 2, 3, 8])
def test_haar_unitaries_are_unitary_and_seeded(dim):
    us = haar_unitaries(dim, 20, 5)
    for u in us:
        np.testing.assert_allclose(u.conj().T @ u, np.eye(dim), atol=1e-12)
    np.testing.assert_array_equal(us, haar_unitaries(dim, 20, 5))
    assert not np.allclose(us, haar_unitaries(dim, 20, 6))


def test_haar_first_column_is_uniform_on_sphere():
    # |u_00|^2 is Beta(1, N-1): mean 1/N, second moment 2/(N(N+1))
    N = 3
    p = np.abs(haar_unitaries(N, 20000, 1)[:, 0, 0]) ** 2
    assert p.mean() == pytest.approx(1 / N, abs=0.01)
    assert (p**2).mean() == pytest.approx(2 / (N * (N + 1)), abs=0.01)


def test_haar_single_draw_matches_batch():
    np.testing.assert_array_equal(haar_unitary(4, 9), haar_unitaries(4, 1, 9)[0])
