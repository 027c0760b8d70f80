"""Inversion of tomograms to phase-space densities and Fock density matrices.

Both inversions go through the unit-frequency characteristic function
``chi(mu, nu) = xi(1, mu, nu)``; by homogeneity this carries all of ``M``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

from .cvtomo import CharacteristicFn, OpticalTomogram, SymplecticTomogram, symplectic_tomogram, tomogram_from_characteristic
from .numkernel import Grid1D, NumericalFailure, default_thetagrid, default_xgrid, make_grid
from . import report

__all__ = [
    "ClassificationResult",
    "reconstruct_phase_space",
    "reconstruct_density_matrix",
    "classify_tomogram",
    "gaussian_optical_tomogram",
    "gaussian_sweep_covariances",
    "neither_fixture",
]

# candidate half-widths of the (mu, nu) window
WINDOWS = (8.0, 16.0, 32.0, 64.0)
DECAY_TOL = 1e-6
# chi below this (relative to chi(0) = 1) is dropped from the radial integral
CUTOFF_TOL = 1e-12
REL_TOL = 1e-6
MAX_CUTOFF = 32


def default_output_grid() -> Grid1D:
    return make_grid(-8.0, 8.0, 128)


@dataclass(frozen=True)
class ClassificationResult:
    """Outcome of the classical / quantum admissibility tests."""

    classical: bool
    quantum: bool
    min_phase_space_value: float
    min_density_eigenvalue: float
    tolerance: float

    @property
    def label(self) -> str:
        if self.classical and self.quantum:
            return "both"
        if self.classical:
            return "classical"
        if self.quantum:
            return "quantum"
        return "neither"

    def report_line(self) -> str:
        return report.line(
            classical=self.classical,
            quantum=self.quantum,
            min_f=self.min_phase_space_value,
            min_eig=self.min_density_eigenvalue,
        )


def _is_density(M: SymplecticTomogram) -> bool:
    return M.backend in ("wigner", "classical-density")


def _select_window(M: SymplecticTomogram, thetas: np.ndarray) -> float:
    """Smallest half-width ``W`` with ``|chi| <= 1e-6`` on the circle of radius ``W``."""
    edge = np.inf
    for W in WINDOWS:
        edge = np.abs(M.characteristic_polar(np.array([W]), thetas)).max()
        if edge <= DECAY_TOL:
            return W
    raise NumericalFailure(f"non-decaying characteristic function (|chi| = {edge:.3g} at radius {WINDOWS[-1]})")


def _effective_radius(M: SymplecticTomogram, thetas: np.ndarray, s_max: float) -> float:
    probe = np.linspace(0.0, s_max, 97)[1:]
    mags = np.abs(M.characteristic_polar(probe, thetas)).max(axis=0)
    alive = np.nonzero(mags > CUTOFF_TOL)[0]
    if alive.size == 0:
        return probe[0]
    return float(probe[min(alive[-1] + 1, probe.size - 1)])


def _midpoint_thetas(n: int) -> np.ndarray:
    return make_grid(0.0, 2 * np.pi, n).points


def _phase_space_polar(M: SymplecticTomogram, qgrid: Grid1D, pgrid: Grid1D, W: float) -> np.ndarray:
    base = default_thetagrid().points
    r_out = float(np.hypot(np.abs([qgrid.lower, qgrid.upper]).max(), np.abs([pgrid.lower, pgrid.upper]).max()))
    s_int = _effective_radius(M, base, W * np.sqrt(2.0))
    # trapezoid in theta is exact below this many harmonics
    n_theta = max(base.size, 8 * int(np.ceil(1.1 * s_int * 2 * r_out / 8)))
    thetas = base if n_theta == base.size else _midpoint_thetas(n_theta)
    n_s = int(s_int * r_out / np.pi * 1.2) + 48
    nodes, weights = np.polynomial.legendre.leggauss(n_s)
    s = 0.5 * s_int * (nodes + 1.0)
    ws = 0.5 * s_int * weights
    half = n_theta // 2
    chi = M.characteristic_polar(s, thetas[:half])
    q = qgrid.points
    p = pgrid.points
    acc = np.zeros((q.size, p.size), dtype=complex)
    for k in range(half):
        t = thetas[k]
        c = ws * s * chi[k]
        a = np.exp(-1j * np.outer(q, s * np.cos(t)))
        b = np.exp(-1j * np.outer(s * np.sin(t), p))
        acc += (a * c) @ b
    # the node at t + pi contributes the complex conjugate
    return 2.0 * acc.real * (2 * np.pi / n_theta) / (4 * np.pi**2)


def _phase_space_cartesian(M: SymplecticTomogram, qgrid: Grid1D, pgrid: Grid1D, W: float) -> np.ndarray:
    dens = M.payload
    vals = np.asarray(dens.values) * (1.0 / (2 * np.pi) if M.backend == "wigner" else 1.0)
    qin = dens.qgrid.points
    pin = dens.pgrid.points
    span = max(np.ptp(qin), np.ptp(pin), np.ptp(qgrid.points), np.ptp(pgrid.points))
    # frequency step small enough that the implied period exceeds both supports
    n_k = 2 * int(np.ceil(2 * W * 2 * span / (2 * np.pi) * 1.1 / 2)) + 16
    kg = make_grid(-W, W, n_k)
    k = kg.points
    area = dens.qgrid.spacing * dens.pgrid.spacing
    chi = np.exp(1j * np.outer(k, qin)) @ vals @ np.exp(1j * np.outer(pin, k)) * area
    out = np.exp(-1j * np.outer(qgrid.points, k)) @ chi @ np.exp(-1j * np.outer(k, pgrid.points))
    return out.real * kg.spacing**2 / (4 * np.pi**2)


def reconstruct_phase_space(
    M, qgrid: Grid1D | None = None, pgrid: Grid1D | None = None
) -> tuple[Grid1D, Grid1D, np.ndarray]:
    """Invert a tomogram to the phase-space function it is the Radon transform of.

    The characteristic function ``chi(mu, nu) = xi(1, mu, nu)`` is sampled in
    a window ``[-W, W]^2`` (``W`` from 8, 16, 32, 64, the first where ``chi``
    has decayed below 1e-6), then Fourier transformed back:
    ``f(q, p) = (2 pi)^-2 int chi(mu, nu) exp(-i(mu q + nu p)) dmu dnu``.
    Row-based tomograms use polar coordinates (Gauss-Legendre radially,
    trapezoid in angle); sampled densities use a Cartesian frequency grid.

    Args:
        M: ``SymplecticTomogram`` or anything ``symplectic_tomogram`` accepts.
        qgrid: Output q grid, default ``[-8, 8]`` with 128 points.
        pgrid: Output p grid, default as ``qgrid``.

    Returns:
        ``(qgrid, pgrid, values)`` with ``values[i, j]`` at ``(q_i, p_j)``;
        values may be negative.

    Raises:
        NumericalFailure: ``chi`` does not decay or the output does not
            integrate to 1 within 1e-3.
    """
    M = symplectic_tomogram(M)
    qgrid = qgrid or default_output_grid()
    pgrid = pgrid or qgrid
    W = _select_window(M, default_thetagrid().points)
    if _is_density(M):
        f = _phase_space_cartesian(M, qgrid, pgrid, W)
    else:
        f = _phase_space_polar(M, qgrid, pgrid, W)
    total = f.sum() * qgrid.spacing * pgrid.spacing
    if abs(total - 1.0) > 1e-3:
        raise NumericalFailure(f"reconstructed phase-space function integrates to {total:.6g}")
    return qgrid, pgrid, f


def _displacement_radial(cutoff: int, r: np.ndarray) -> np.ndarray:
    """Radial part ``R_mn(r)`` of ``<m|D(r e^{i phi})|n> = R_mn(r) e^{i(m-n)phi}``."""
    m = np.arange(cutoff)[:, None, None]
    n = np.arange(cutoff)[None, :, None]
    lo = np.minimum(m, n)
    d = np.abs(m - n)
    r = np.asarray(r, dtype=float)[None, None, :]
    x = r * r
    norm = np.exp(0.5 * (gammaln(lo + 1) - gammaln(lo + d + 1)) - 0.5 * x)
    sign = np.where(m < n, (-1.0) ** d, 1.0)
    return sign * norm * r**d * eval_genlaguerre(lo, d, x)


def reconstruct_density_matrix(M, cutoff: int = MAX_CUTOFF, check_trace: bool = True) -> np.ndarray:
    """Fock-basis operator whose tomogram is ``M``.

    Uses ``rho = (1/2pi) int chi(mu, nu) D(beta) dmu dnu`` with
    ``beta = (nu - i mu)/sqrt(2)``. In polar coordinates the angular integral
    of ``chi`` against ``exp(i d theta)`` is an FFT over the theta nodes, and
    the radial one is Gauss-Legendre against the closed-form displacement
    matrix elements (associated Laguerre polynomials).

    Args:
        M: Tomogram or anything ``symplectic_tomogram`` accepts.
        cutoff: Number of Fock levels, at most 32.
        check_trace: Raise when the trace deficit exceeds 1e-2.

    Returns:
        Hermitian ``(cutoff, cutoff)`` complex matrix; eigenvalues may be
        negative for non-quantum tomograms.
    """
    if int(cutoff) != cutoff or not 1 <= cutoff <= MAX_CUTOFF:
        raise ValueError(f"cutoff must be an integer in [1, {MAX_CUTOFF}]")
    cutoff = int(cutoff)
    M = symplectic_tomogram(M)
    thetas = default_thetagrid().points
    W = _select_window(M, thetas)
    # Fock functions below the cutoff vanish beyond this displacement
    s_max = min(W * np.sqrt(2.0), np.sqrt(2.0) * (np.sqrt(2.0 * cutoff) + 8.0))
    nodes, weights = np.polynomial.legendre.leggauss(256)
    s = 0.5 * s_max * (nodes + 1.0)
    ws = 0.5 * s_max * weights
    chi = M.characteristic_polar(s, thetas)
    n_theta = thetas.size
    # sum_k chi_k exp(i d theta_k) for all d, via one inverse FFT
    harm = np.fft.ifft(chi, axis=0) * n_theta
    d = np.arange(-(cutoff - 1), cutoff)
    c = harm[d % n_theta] * np.exp(1j * d * thetas[0])[:, None] * (2 * np.pi / n_theta)
    radial = _displacement_radial(cutoff, s / np.sqrt(2.0))
    dm = np.arange(cutoff)[:, None] - np.arange(cutoff)[None, :]
    cd = c[dm + cutoff - 1]
    rho = np.einsum("mnk,mnk,k->mn", radial, cd, ws * s) * np.exp(-0.5j * np.pi * dm) / (2 * np.pi)
    skew = np.abs(rho - rho.conj().T).max()
    if skew > 1e-6:
        raise NumericalFailure(f"reconstructed matrix not Hermitian ({skew:.3g})")
    rho = 0.5 * (rho + rho.conj().T)
    deficit = abs(1.0 - np.trace(rho).real)
    if check_trace and deficit > 1e-2:
        raise ValueError(f"cutoff too small: trace deficit {deficit:.3g}")
    return rho


def classify_tomogram(M, tolerance: float | None = None, cutoff: int = MAX_CUTOFF) -> ClassificationResult:
    """Decide whether a tomogram comes from a classical density, a quantum state, both or neither.

    The classical flag tests the minimum of the reconstructed phase-space
    function, the quantum flag the minimum eigenvalue of the reconstructed
    density matrix. The trace check is skipped here because non-quantum
    tomograms can have slowly decaying Fock tails.

    Args:
        M: Tomogram or anything ``symplectic_tomogram`` accepts.
        tolerance: Absolute negativity tolerance; default ``1e-6`` times the
            largest magnitude among the reconstructed values and eigenvalues.
        cutoff: Fock cutoff of the density-matrix reconstruction.
    """
    M = symplectic_tomogram(M)
    _, _, f = reconstruct_phase_space(M)
    rho = reconstruct_density_matrix(M, cutoff, check_trace=False)
    eig = np.linalg.eigvalsh(rho)
    if tolerance is None:
        tolerance = REL_TOL * max(np.abs(f).max(), np.abs(eig).max())
    min_f = float(f.min())
    min_eig = float(eig.min())
    return ClassificationResult(
        classical=bool(min_f >= -tolerance),
        quantum=bool(min_eig >= -tolerance),
        min_phase_space_value=min_f,
        min_density_eigenvalue=min_eig,
        tolerance=float(tolerance),
    )


# ---------------------------------------------------------------------------
# fixtures


def gaussian_optical_tomogram(
    cov, mean=(0.0, 0.0), thetagrid: Grid1D | None = None, xgrid: Grid1D | None = None
) -> OpticalTomogram:
    """Optical tomogram of a Gaussian with quadrature covariance ``cov``.

    Each row is the normal density with mean ``q cos t + p sin t`` and
    variance ``u^T cov u``, ``u = (cos t, sin t)``.
    """
    cov = np.asarray(cov, dtype=float)
    thetagrid = thetagrid or default_thetagrid()
    xgrid = xgrid or default_xgrid()
    t = thetagrid.points[:, None]
    x = xgrid.points[None, :]
    var = cov[0, 0] * np.cos(t) ** 2 + 2 * cov[0, 1] * np.cos(t) * np.sin(t) + cov[1, 1] * np.sin(t) ** 2
    centre = mean[0] * np.cos(t) + mean[1] * np.sin(t)
    rows = np.exp(-0.5 * (x - centre) ** 2 / var) / np.sqrt(2 * np.pi * var)
    return OpticalTomogram(xgrid, thetagrid, rows)


def gaussian_sweep_covariances(count: int = 20, seed: int = 0, exclusion: float = 0.01) -> list[np.ndarray]:
    """Random rotated covariances with eigenvalues in ``[0.15, 1.0]``.

    Draws whose determinant lies within ``exclusion`` of 1/4 are rejected so
    that the admissibility boundary is never probed at noise level.
    """
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        a, b = rng.uniform(0.15, 1.0, size=2)
        if abs(a * b - 0.25) < exclusion:
            continue
        phi = rng.uniform(0, np.pi)
        rot = np.array([[np.cos(phi), -np.sin(phi)], [np.sin(phi), np.cos(phi)]])
        out.append(rot @ np.diag([a, b]) @ rot.T)
    return out


def _bumped_characteristic(var: float, bump_var: float, depth: float) -> CharacteristicFn:
    # isotropic Gaussian minus a narrower one, renormalized so chi(0) = 1
    def func(k, mu, nu):
        r2 = (k * k) * (mu * mu + nu * nu)
        return (np.exp(-0.5 * var * r2) - depth * np.exp(-0.5 * bump_var * r2)) / (1.0 - depth)

    return CharacteristicFn(func)


def neither_fixture(seed: int = 7, attempts: int = 20):
    """Seed-pinned search for a tomogram that is neither classical nor quantum.

    Candidates subtract a narrow Gaussian bump from a sub-vacuum Gaussian
    characteristic function, with the bump depth chosen so the rows stay
    nonnegative while the phase-space function dips below zero. The first
    candidate the classifier labels "neither" is returned.

    Returns:
        ``(tomogram, params, result)`` where ``params`` holds the draw.

    Raises:
        NumericalFailure: no candidate qualified.
    """
    rng = np.random.default_rng(seed)
    thetagrid = make_grid(0.0, 2 * np.pi, 64)
    for _ in range(attempts):
        var = rng.uniform(0.12, 0.2)
        bump = rng.uniform(0.02, 0.03)
        lo, hi = bump / var, np.sqrt(bump / var)
        depth = rng.uniform(lo + 0.25 * (hi - lo), lo + 0.75 * (hi - lo))
        xi = _bumped_characteristic(var, bump, depth)
        # isotropic: every row is the same
        row = tomogram_from_characteristic(xi, 1.0, 0.0)
        rows = np.tile(np.maximum(row, 0.0), (thetagrid.count, 1))
        tomo = OpticalTomogram(default_xgrid(), thetagrid, rows)
        result = classify_tomogram(tomo)
        if result.label == "neither":
            return tomo, {"var": var, "bump_var": bump, "depth": depth}, result
    raise NumericalFailure("no 'neither' candidate found")
