"""Grids, fractional Fourier transform, momentum transform and Haar sampling."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import czt

__all__ = [
    "Grid1D",
    "WaveFunction",
    "NumericalFailure",
    "BoundViolation",
    "make_grid",
    "default_xgrid",
    "default_thetagrid",
    "fractional_fourier",
    "fourier_momentum",
    "haar_unitary",
    "haar_unitaries",
]

# Below this |sin(theta)| the rotation is taken from its exact 0 / pi limit.
DEGENERATE_SIN = 1e-3
# Direct chirp evaluation is used only when |sin(theta)| is at least this large.
_WELL_CONDITIONED_SIN = 0.5


class NumericalFailure(RuntimeError):
    """A numerical precondition (decay, convergence, eigensolver) failed."""


class BoundViolation(RuntimeError):
    """A proven bound or consistency check was violated beyond tolerance."""


@dataclass(frozen=True)
class Grid1D:
    """Uniform midpoint-sampled grid on ``[lower, upper)``.

    Sample ``i`` sits at ``lower + (i + 1/2) * spacing``.
    """

    lower: float
    upper: float
    count: int

    def __post_init__(self):
        if not (np.isfinite(self.lower) and np.isfinite(self.upper)) or self.lower >= self.upper:
            raise ValueError(f"invalid-bounds: lower={self.lower} upper={self.upper}")
        if int(self.count) != self.count or self.count < 8:
            raise ValueError(f"invalid-count: {self.count} (need an integer >= 8)")

    @property
    def spacing(self) -> float:
        return (self.upper - self.lower) / self.count

    @property
    def points(self) -> np.ndarray:
        return self.lower + (np.arange(self.count) + 0.5) * self.spacing

    @property
    def symmetric(self) -> bool:
        return abs(self.lower + self.upper) <= 1e-12 * (self.upper - self.lower)


def make_grid(lower: float, upper: float, count: int) -> Grid1D:
    """Build a midpoint-sampled uniform grid.

    Args:
        lower: Left edge of the interval.
        upper: Right edge of the interval.
        count: Number of samples, at least 8.

    Returns:
        The grid. Raises ``ValueError`` for bad bounds or counts.
    """
    return Grid1D(float(lower), float(upper), int(count))


def default_xgrid() -> Grid1D:
    return Grid1D(-8.0, 8.0, 1024)


def default_thetagrid() -> Grid1D:
    return Grid1D(0.0, 2.0 * np.pi, 256)


@dataclass(frozen=True)
class WaveFunction:
    """Complex samples of a pure state on a position grid."""

    grid: Grid1D
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        if s.shape != (self.grid.count,):
            raise ValueError("samples do not match grid size")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    def norm(self) -> float:
        return float(np.sum(np.abs(self.samples) ** 2) * self.grid.spacing)

    def density(self) -> np.ndarray:
        return np.abs(self.samples) ** 2

    def inner(self, other: "WaveFunction") -> complex:
        """Return <self|other>."""
        return complex(np.vdot(self.samples, other.samples) * self.grid.spacing)


def scaled_dft(values: np.ndarray, grid: Grid1D, scale: float) -> np.ndarray:
    """Evaluate ``sum_j values_j exp(-i scale x_i y_j) dx`` with x, y on ``grid``.

    Uses a chirp-z transform, so the cost is O(n log n) for any scale.
    """
    n = grid.count
    h = grid.spacing
    x0 = grid.points[0]
    k = np.arange(n)
    pre = values * np.exp(-1j * scale * x0 * h * k)
    w = np.exp(-1j * scale * h * h)
    core = czt(pre, m=n, w=w, a=1.0)
    return np.exp(-1j * scale * (x0 * x0 + x0 * h * k)) * core * h


def _direct_rotation(samples: np.ndarray, grid: Grid1D, theta: float) -> np.ndarray:
    # Chirp, scaled Fourier, chirp. Global phase exp(i theta/2) makes the
    # family exp(-i theta n) so that theta=pi/2 is exactly the momentum FT.
    theta = float(np.remainder(theta + np.pi, 2.0 * np.pi) - np.pi)
    s = np.sin(theta)
    cot = np.cos(theta) / s
    x = grid.points
    chirp = np.exp(0.5j * cot * x * x)
    core = scaled_dft(samples * chirp, grid, 1.0 / s)
    pref = np.exp(0.5j * theta) / np.sqrt(2j * np.pi * s)
    return pref * chirp * core


def _rotate(samples: np.ndarray, grid: Grid1D, theta: float) -> np.ndarray:
    t = float(np.remainder(theta + np.pi, 2.0 * np.pi) - np.pi)
    if t == 0.0:
        return samples.copy()
    s = np.sin(t)
    if abs(s) >= _WELL_CONDITIONED_SIN:
        return _direct_rotation(samples, grid, t)
    if abs(s) < DEGENERATE_SIN:
        if abs(t) < 0.5 * np.pi:
            base, rest = samples, t
        else:
            base, rest = samples[::-1], t - np.copysign(np.pi, t)
        if rest == 0.0:
            return base.copy()
        # residual step split into two well-conditioned rotations
        tmp = _direct_rotation(base, grid, rest - 0.5 * np.pi)
        return _direct_rotation(tmp, grid, 0.5 * np.pi)
    tmp = _direct_rotation(samples, grid, t - 0.5 * np.pi)
    return _direct_rotation(tmp, grid, 0.5 * np.pi)


def fractional_fourier(psi: WaveFunction, theta: float) -> WaveFunction:
    r"""Rotate a wave function in phase space by ``theta``.

    Computes :math:`\psi(X,\theta)=e^{i\theta/2}(2\pi i\sin\theta)^{-1/2}
    \int e^{\frac{i}{2}(\cot\theta(y^2+X^2)-2Xy/\sin\theta)}\psi(y)\,dy`
    on the input grid. Angles with small ``|sin theta|`` are routed through
    the exact identity / parity limits plus well-conditioned steps.

    Args:
        psi: Input state on a grid symmetric about zero.
        theta: Rotation angle in radians.

    Returns:
        The rotated wave function on the same grid.
    """
    if not psi.grid.symmetric:
        raise ValueError("fractional_fourier needs a grid symmetric about 0")
    return WaveFunction(psi.grid, _rotate(np.asarray(psi.samples), psi.grid, float(theta)))


def fourier_momentum(psi: WaveFunction) -> WaveFunction:
    """Momentum-space wave function ``(2 pi)^(-1/2) int psi(x) exp(-ipx) dx``.

    The momentum samples share the position grid's nodes.
    """
    out = scaled_dft(np.asarray(psi.samples), psi.grid, 1.0) / np.sqrt(2.0 * np.pi)
    return WaveFunction(psi.grid, out)


def _as_rng(rng_seed) -> np.random.Generator:
    if isinstance(rng_seed, np.random.Generator):
        return rng_seed
    return np.random.default_rng(rng_seed)


def haar_unitaries(dim: int, count: int, rng_seed=0) -> np.ndarray:
    """Draw ``count`` Haar-random ``dim x dim`` unitaries as a stacked array.

    Parameters
    ----------
    dim : int
        Matrix size, at least 1.
    count : int
        Number of samples.
    rng_seed : int or numpy.random.Generator
        Seed or generator.

    Returns
    -------
    numpy.ndarray
        Array of shape ``(count, dim, dim)``.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = _as_rng(rng_seed)
    z = rng.standard_normal((count, dim, dim)) + 1j * rng.standard_normal((count, dim, dim))
    z /= np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    q = q * (d / np.abs(d))[:, None, :]
    return q


def haar_unitary(dim: int, rng_seed=0) -> np.ndarray:
    """Draw one Haar-random unitary (QR of a complex Ginibre matrix, phase fixed)."""
    return haar_unitaries(dim, 1, rng_seed)[0]
