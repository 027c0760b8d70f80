"""State overlap computed directly from two optical tomograms."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import map_coordinates

from .cvtomo import OpticalTomogram
from .numkernel import BoundViolation, Grid1D, NumericalFailure, make_grid

__all__ = [
    "JointQuadratureDistribution",
    "RotatedMarginal",
    "joint_distribution",
    "rotated_marginal",
    "fidelity_from_tomograms",
    "bounds_ok",
]

NORM_TOL = 1e-4
DECAY_TOL = 1e-8
BOUND_TOL = 1e-3


@dataclass(frozen=True)
class JointQuadratureDistribution:
    """Phase-averaged joint density ``P12(x, y)``; ``values[i, j]`` is at ``(x_i, y_j)``."""

    xgrid: Grid1D
    ygrid: Grid1D
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.xgrid.count, self.ygrid.count):
            raise ValueError("values do not match grids")
        if v.min() < 0:
            raise ValueError("joint distribution must be nonnegative")
        norm = self.normalization_of(v)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"joint distribution not normalized ({norm:.6g})")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def normalization_of(self, v) -> float:
        return float(v.sum() * self.xgrid.spacing * self.ygrid.spacing)

    def normalization(self) -> float:
        return self.normalization_of(self.values)


@dataclass(frozen=True)
class RotatedMarginal:
    """Density ``P(b)`` of ``b = (x - y)/sqrt(2)`` with its characteristic function."""

    bgrid: Grid1D
    values: np.ndarray = field(repr=False)

    def normalization(self) -> float:
        return float(self.values.sum() * self.bgrid.spacing)

    def characteristic(self, lam) -> np.ndarray:
        """``xi(lam) = int exp(i lam b) P(b) db``, vectorized over ``lam``."""
        lam = np.atleast_1d(np.asarray(lam, dtype=float))
        return np.exp(1j * np.outer(lam, self.bgrid.points)) @ self.values * self.bgrid.spacing


def _same_grid(a: Grid1D, b: Grid1D) -> bool:
    return a.count == b.count and np.isclose(a.lower, b.lower) and np.isclose(a.upper, b.upper)


def joint_distribution(w1: OpticalTomogram, w2: OpticalTomogram) -> JointQuadratureDistribution:
    """``P12(x, y) = (1/2pi) int w1(x, t) w2(y, t) dt`` over a full turn.

    Raises:
        ValueError: the theta grids differ or do not cover ``[0, 2pi)``.
    """
    if not _same_grid(w1.thetagrid, w2.thetagrid):
        raise ValueError("grid mismatch: theta grids differ")
    if not w1.covers_circle():
        raise ValueError("theta grid must cover [0, 2pi)")
    dt = w1.thetagrid.spacing
    # periodic trapezoid on a uniform grid: equal weights
    vals = np.asarray(w1.values).T @ np.asarray(w2.values) * dt / (2 * np.pi)
    return JointQuadratureDistribution(w1.xgrid, w2.xgrid, np.maximum(vals, 0.0))


def rotated_marginal(P12: JointQuadratureDistribution, bgrid: Grid1D | None = None) -> RotatedMarginal:
    """``P(b) = int P12((a + b)/sqrt(2), (a - b)/sqrt(2)) da``.

    ``P12`` is interpolated bilinearly (zero outside its grid) and the
    ``a`` integral uses the midpoint rule with the x spacing.
    """
    xg, yg = P12.xgrid, P12.ygrid
    bgrid = bgrid or xg
    reach = np.sqrt(2.0) * max(abs(xg.lower), abs(xg.upper), abs(yg.lower), abs(yg.upper))
    ag = make_grid(-reach, reach, int(np.ceil(2 * reach / xg.spacing)))
    a = ag.points[:, None]
    b = bgrid.points[None, :]
    x = (a + b) / np.sqrt(2.0)
    y = (a - b) / np.sqrt(2.0)
    # fractional indices on the midpoint grids
    ix = (x - xg.lower) / xg.spacing - 0.5
    iy = (y - yg.lower) / yg.spacing - 0.5
    vals = map_coordinates(np.asarray(P12.values), [ix.ravel(), iy.ravel()], order=1, mode="constant", cval=0.0)
    pb = vals.reshape(ix.shape).sum(axis=0) * ag.spacing
    return RotatedMarginal(bgrid, np.maximum(pb, 0.0))


def bounds_ok(F: float) -> bool:
    """Whether an overlap lies in ``[0, 1]`` up to 1e-3."""
    return bool(-BOUND_TOL <= F <= 1.0 + BOUND_TOL)


def fidelity_from_tomograms(
    w1: OpticalTomogram,
    w2: OpticalTomogram,
    lambda_max: float = 40.0,
    n_lambda: int = 400,
    check_bounds: bool = True,
) -> tuple[float, float]:
    """Overlap ``Tr(rho1 rho2)`` from two optical tomograms.

    Computes ``F = (1/2) int_0^lambda_max lam xi(lam) dlam`` where ``xi`` is
    the characteristic function of the rotated marginal of the joint
    quadrature distribution. The imaginary part of the integral must vanish
    for a consistent pair and is returned as a residual.

    Args:
        w1: First tomogram.
        w2: Second tomogram on the same theta grid.
        lambda_max: Upper limit of the ``lam`` integral.
        n_lambda: Gauss-Legendre nodes on ``[0, lambda_max]``.
        check_bounds: Raise if ``F`` leaves ``[0, 1]`` by more than 1e-3.

    Returns:
        ``(F, im_residual)``.

    Raises:
        NumericalFailure: ``|lam xi(lam)|`` at ``lambda_max`` is not below 1e-8.
        BoundViolation: ``F`` is outside ``[0, 1 + 1e-3]`` (corrupt input).
    """
    marg = rotated_marginal(joint_distribution(w1, w2))
    edge = abs(lambda_max * marg.characteristic(lambda_max)[0])
    if edge >= DECAY_TOL:
        raise NumericalFailure(f"slow decay: |lam xi(lam)| = {edge:.3g} at lam = {lambda_max}")
    nodes, weights = np.polynomial.legendre.leggauss(n_lambda)
    lam = 0.5 * lambda_max * (nodes + 1.0)
    wl = 0.5 * lambda_max * weights
    total = 0.5 * np.sum(wl * lam * marg.characteristic(lam))
    F = float(total.real)
    if check_bounds and not bounds_ok(F):
        raise BoundViolation(f"overlap {F:.6g} outside [0, 1]")
    return F, float(abs(total.imag))
