"""Continuous-variable states, classical phase-space densities and Wigner functions."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .numkernel import Grid1D, WaveFunction, czt, default_xgrid

__all__ = [
    "WaveFunction",
    "DensityMatrixCV",
    "WignerFunction",
    "PhaseSpaceDensity",
    "fock_basis",
    "fock_state",
    "coherent_state",
    "coherent_fock_amplitudes",
    "thermal_state",
    "classical_gaussian_density",
    "wigner_from_state",
    "pure_density_matrix",
    "fock_amplitudes",
    "position_kernel",
    "default_phase_grid",
]

FOCK_MAX = 10
ALPHA_MAX = 2.0
DEFAULT_CUTOFF = 32


def default_phase_grid() -> Grid1D:
    return Grid1D(-8.0, 8.0, 512)


@dataclass(frozen=True)
class DensityMatrixCV:
    """Fock-basis density matrix truncated at ``cutoff`` levels."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("density matrix must be square")
        if np.abs(m - m.conj().T).max() > 1e-10:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > 1e-8:
            raise ValueError("density matrix trace differs from 1")
        if np.linalg.eigvalsh(m).min() < -1e-8:
            raise ValueError("density matrix has a negative eigenvalue")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def cutoff(self) -> int:
        return self.matrix.shape[0]

    def eigh(self):
        """Eigenvalues (descending) and eigenvectors as columns."""
        vals, vecs = np.linalg.eigh(self.matrix)
        return vals[::-1], vecs[:, ::-1]


@dataclass(frozen=True)
class WignerFunction:
    """Wigner function normalized as ``sum W dq dp / (2 pi) = 1``."""

    qgrid: Grid1D
    pgrid: Grid1D
    values: np.ndarray = field(repr=False)

    def normalization(self) -> float:
        return float(self.values.sum() * self.qgrid.spacing * self.pgrid.spacing / (2 * np.pi))


@dataclass(frozen=True)
class PhaseSpaceDensity:
    """Nonnegative classical density ``f(q, p)``; ``values[i, j]`` is at ``(q_i, p_j)``."""

    qgrid: Grid1D
    pgrid: Grid1D
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.qgrid.count, self.pgrid.count):
            raise ValueError("values do not match grids")
        if v.min() < 0:
            raise ValueError("phase-space density must be nonnegative")
        norm = v.sum() * self.qgrid.spacing * self.pgrid.spacing
        if abs(norm - 1.0) > 1e-6:
            raise ValueError(f"phase-space density not normalized ({norm})")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


def fock_basis(cutoff: int, grid: Grid1D | None = None) -> np.ndarray:
    """Oscillator eigenfunctions ``phi_0 .. phi_{cutoff-1}`` sampled on ``grid``.

    Uses the normalized three-term Hermite-function recurrence, which never
    forms factorials.

    Returns:
        Real array of shape ``(cutoff, grid.count)``.
    """
    grid = grid or default_xgrid()
    x = grid.points
    out = np.zeros((cutoff, x.size))
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if cutoff > 1:
        out[1] = np.sqrt(2.0) * x * out[0]
    for n in range(1, cutoff - 1):
        out[n + 1] = np.sqrt(2.0 / (n + 1)) * x * out[n] - np.sqrt(n / (n + 1)) * out[n - 1]
    return out


def fock_state(n: int, grid: Grid1D | None = None) -> WaveFunction:
    """Oscillator eigenstate ``|n>`` for ``0 <= n <= 10``."""
    if int(n) != n or not 0 <= n <= FOCK_MAX:
        raise ValueError(f"fock level must be an integer in [0, {FOCK_MAX}], got {n}")
    grid = grid or default_xgrid()
    return WaveFunction(grid, fock_basis(int(n) + 1, grid)[int(n)])


def coherent_state(alpha: complex, grid: Grid1D | None = None) -> WaveFunction:
    """Displaced vacuum with mean quadratures ``sqrt(2) Re alpha``, ``sqrt(2) Im alpha``.

    Args:
        alpha: Complex amplitude with ``|alpha| <= 2``.
        grid: Position grid, default ``[-8, 8]`` with 1024 points.

    Returns:
        The wave function ``exp(-i q0 p0 / 2) exp(i p0 x) phi_0(x - q0)``.
    """
    alpha = complex(alpha)
    if abs(alpha) > ALPHA_MAX:
        raise ValueError(f"|alpha| must be <= {ALPHA_MAX}")
    grid = grid or default_xgrid()
    x = grid.points
    q0 = np.sqrt(2.0) * alpha.real
    p0 = np.sqrt(2.0) * alpha.imag
    psi = np.pi ** -0.25 * np.exp(-0.5 * (x - q0) ** 2 + 1j * p0 * x - 0.5j * q0 * p0)
    return WaveFunction(grid, psi)


def coherent_fock_amplitudes(alpha: complex, cutoff: int = DEFAULT_CUTOFF) -> np.ndarray:
    """Fock amplitudes ``exp(-|a|^2/2) a^n / sqrt(n!)`` of a coherent state."""
    amps = np.zeros(cutoff, dtype=complex)
    amps[0] = np.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, cutoff):
        amps[n] = amps[n - 1] * alpha / np.sqrt(n)
    return amps


def thermal_state(nbar: float, cutoff: int = DEFAULT_CUTOFF) -> DensityMatrixCV:
    """Diagonal thermal state with weights proportional to ``(nbar/(1+nbar))^n``."""
    if nbar < 0:
        raise ValueError("nbar must be nonnegative")
    if cutoff < 8:
        raise ValueError("cutoff must be >= 8")
    r = nbar / (1.0 + nbar)
    w = r ** np.arange(cutoff)
    return DensityMatrixCV(np.diag(w / w.sum()))


def pure_density_matrix(amplitudes: np.ndarray) -> DensityMatrixCV:
    a = np.asarray(amplitudes, dtype=complex)
    a = a / np.linalg.norm(a)
    return DensityMatrixCV(np.outer(a, a.conj()))


def fock_amplitudes(psi: WaveFunction, cutoff: int = DEFAULT_CUTOFF) -> np.ndarray:
    """Project a sampled wave function onto the first ``cutoff`` Fock states."""
    basis = fock_basis(cutoff, psi.grid)
    return basis @ np.asarray(psi.samples) * psi.grid.spacing


def classical_gaussian_density(
    mean_q: float,
    mean_p: float,
    cov,
    qgrid: Grid1D | None = None,
    pgrid: Grid1D | None = None,
) -> PhaseSpaceDensity:
    """Bivariate Gaussian ``f(q, p)`` sampled on a grid and renormalized."""
    cov = np.asarray(cov, dtype=float)
    if cov.shape != (2, 2) or abs(cov[0, 1] - cov[1, 0]) > 1e-12:
        raise ValueError("cov must be a symmetric 2x2 matrix")
    if np.linalg.eigvalsh(cov).min() <= 0:
        raise ValueError("cov must be positive definite")
    qgrid = qgrid or default_phase_grid()
    pgrid = pgrid or default_phase_grid()
    dq = qgrid.points[:, None] - mean_q
    dp = pgrid.points[None, :] - mean_p
    inv = np.linalg.inv(cov)
    quad = inv[0, 0] * dq * dq + 2 * inv[0, 1] * dq * dp + inv[1, 1] * dp * dp
    f = np.exp(-0.5 * quad) / (2 * np.pi * np.sqrt(np.linalg.det(cov)))
    f /= f.sum() * qgrid.spacing * pgrid.spacing
    return PhaseSpaceDensity(qgrid, pgrid, f)


def position_kernel(state, grid: Grid1D | None = None) -> np.ndarray:
    """Position-representation kernel ``rho(x, x')`` of a pure or mixed state."""
    if isinstance(state, WaveFunction):
        s = np.asarray(state.samples)
        return np.outer(s, s.conj())
    if isinstance(state, DensityMatrixCV):
        basis = fock_basis(state.cutoff, grid or default_xgrid())
        return basis.T @ state.matrix @ basis
    raise TypeError(f"unsupported state type {type(state).__name__}")


def wigner_from_state(state, pgrid: Grid1D | None = None, grid: Grid1D | None = None) -> WignerFunction:
    r"""Wigner function :math:`W(q,p)=\int\rho(q+y/2,q-y/2)e^{-ipy}dy`.

    The q samples are the nodes of the state's position grid; p defaults to
    the same nodes. Normalization is ``int W dq dp / 2 pi = 1``.

    Args:
        state: ``WaveFunction`` or ``DensityMatrixCV``.
        pgrid: Momentum grid of the output.
        grid: Position grid used for density matrices.

    Returns:
        The sampled ``WignerFunction``.
    """
    if isinstance(state, WaveFunction):
        qgrid = state.grid
    else:
        qgrid = grid or default_xgrid()
    pgrid = pgrid or qgrid
    kern = position_kernel(state, qgrid)
    n = qgrid.count
    h = qgrid.spacing
    # midpoint grids are closed under q +/- k h, so rho(q_i + kh, q_i - kh) is exact
    ks = np.arange(-(n - 1), n)
    i = np.arange(n)[:, None]
    a = i + ks[None, :]
    b = i - ks[None, :]
    valid = (a >= 0) & (a < n) & (b >= 0) & (b < n)
    corr = np.where(valid, kern[np.clip(a, 0, n - 1), np.clip(b, 0, n - 1)], 0.0)
    # sum_k corr[i, k] exp(-2i p k h) over p = p0 + j dp via a chirp-z transform
    p0 = pgrid.points[0]
    dp = pgrid.spacing
    r = np.arange(ks.size)
    pre = corr * np.exp(-2j * h * r * p0)[None, :]
    core = czt(pre, m=pgrid.count, w=np.exp(-2j * h * dp), a=1.0, axis=-1)
    phase = np.exp(-2j * h * ks[0] * pgrid.points)
    w = 2 * h * core * phase[None, :]
    return WignerFunction(qgrid, pgrid, np.real(w))
