"""Symplectic and optical tomograms of single-mode states, symbols and traces."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .cvstates import (
    DensityMatrixCV,
    PhaseSpaceDensity,
    WignerFunction,
    fock_basis,
)
from .numkernel import (
    Grid1D,
    NumericalFailure,
    WaveFunction,
    default_thetagrid,
    default_xgrid,
    fourier_momentum,
    fractional_fourier,
    make_grid,
)

__all__ = [
    "SymplecticTomogram",
    "OpticalTomogram",
    "TomographicSymbol",
    "CharacteristicFn",
    "AxiomReport",
    "ShiftedTomogram",
    "symplectic_tomogram",
    "optical_tomogram",
    "symplectic_from_optical",
    "verify_tomogram_axioms",
    "homogeneity_residual",
    "tomogram_moments",
    "characteristic_function",
    "tomogram_from_characteristic",
    "operator_symbol",
    "symbol_trace",
    "symbol_pair_trace",
    "shifted_tomogram",
    "vacuum_tomogram_formula",
]

DIRECTION_EPS = 1e-6
LIMIT_EPS = 1e-3
K_WINDOW = 40.0
DECAY_TOL = 1e-6


def vacuum_tomogram_formula(X, mu, nu):
    """Closed-form ground-state tomogram ``exp(-X^2/s2) / sqrt(pi s2)``, ``s2 = mu^2+nu^2``."""
    s2 = mu * mu + nu * nu
    return np.exp(-np.asarray(X) ** 2 / s2) / np.sqrt(np.pi * s2)


def _check_direction(mu: float, nu: float) -> None:
    if abs(mu) < DIRECTION_EPS and abs(nu) < DIRECTION_EPS:
        raise ValueError("undefined direction: both |mu| and |nu| are below 1e-6")


# ---------------------------------------------------------------------------
# pure-state amplitudes


class _PureAmplitude:
    """Evaluates a complex amplitude A with ``M = |A|^2`` for one wave function.

    For two wave functions the transition symbol is ``A_1 conj(A_2)``: every
    route below differs from the integral kernel only by an X-dependent phase
    common to both factors.
    """

    def __init__(self, psi: WaveFunction):
        self.psi = psi
        self.grid = psi.grid
        self.y = psi.grid.points
        self.h = psi.grid.spacing
        self._momentum = None
        self._rotated: dict[float, np.ndarray] = {}

    def momentum(self) -> np.ndarray:
        if self._momentum is None:
            self._momentum = np.asarray(fourier_momentum(self.psi).samples)
        return self._momentum

    def position_at(self, x: np.ndarray) -> np.ndarray:
        # band-limited evaluation through the momentum samples
        pk = self.momentum()
        return np.exp(1j * np.outer(x, self.y)) @ pk * self.h / np.sqrt(2 * np.pi)

    def _momentum_of(self, samples: np.ndarray, p: np.ndarray) -> np.ndarray:
        return np.exp(-1j * np.outer(p, self.y)) @ samples * self.h / np.sqrt(2 * np.pi)

    def rotated(self, theta: float) -> np.ndarray:
        key = float(theta)
        if key not in self._rotated:
            self._rotated[key] = np.asarray(fractional_fourier(self.psi, theta).samples)
        return self._rotated[key]

    def __call__(self, X, mu: float, nu: float) -> np.ndarray:
        X = np.atleast_1d(np.asarray(X, dtype=float))
        mu = float(mu)
        nu = float(nu)
        _check_direction(mu, nu)
        samples = np.asarray(self.psi.samples)
        if abs(nu) < LIMIT_EPS:
            return self.position_at(X / mu) / np.sqrt(abs(mu))
        if abs(mu) < LIMIT_EPS:
            return self._momentum_of(samples, X / nu) / np.sqrt(abs(nu))
        s = math.hypot(mu, nu)
        if abs(nu) >= 0.5 * s:
            y = self.y
            kern = np.exp(1j * (mu / (2 * nu) * y * y)[None, :] - 1j * np.outer(X / nu, y))
            return kern @ samples * self.h / np.sqrt(2 * np.pi * abs(nu))
        # rotate first so the remaining direction is pure momentum
        theta = math.atan2(nu, mu)
        rot = self.rotated(theta - 0.5 * np.pi)
        return self._momentum_of(rot, X / s) / np.sqrt(s)


def _pure_rows(psi1: WaveFunction, psi2: WaveFunction | None, thetas: np.ndarray) -> np.ndarray:
    out = []
    for th in thetas:
        a = np.asarray(fractional_fourier(psi1, th).samples)
        b = a if psi2 is None else np.asarray(fractional_fourier(psi2, th).samples)
        out.append(a * b.conj())
    out = np.array(out)
    return out.real if psi2 is None else out


def _fock_rows(rho: np.ndarray, thetas: np.ndarray, grid: Grid1D) -> np.ndarray:
    # eigenvectors evolve by the exact oscillator phase exp(-i n theta)
    vals, vecs = np.linalg.eigh(rho)
    keep = np.abs(vals) > 1e-14 * np.abs(vals).max()
    vals = vals[keep]
    vecs = vecs[:, keep]
    basis = fock_basis(rho.shape[0], grid)
    n = np.arange(rho.shape[0])
    rows = np.empty((len(thetas), grid.count))
    for i, th in enumerate(thetas):
        amp = basis.T @ (np.exp(-1j * n * th)[:, None] * vecs)
        rows[i] = (np.abs(amp) ** 2) @ vals
    return rows


def _eigen_wavefunctions(state: DensityMatrixCV, grid: Grid1D):
    vals, vecs = state.eigh()
    keep = vals > 1e-14 * vals.max()
    basis = fock_basis(state.cutoff, grid)
    return [(float(v), WaveFunction(grid, basis.T @ vecs[:, k])) for k, v in enumerate(vals) if keep[k]]


# ---------------------------------------------------------------------------
# phase-space line integrals


class _LineIntegrator:
    """``M(X, mu, nu) = int f delta(X - mu q - nu p) dq dp`` for a sampled density.

    The integral runs over the nodes of the dominant axis; the other
    coordinate is reached by linear interpolation, which keeps nonnegative
    inputs nonnegative.
    """

    def __init__(self, values: np.ndarray, qgrid: Grid1D, pgrid: Grid1D):
        self.values = np.asarray(values, dtype=float)
        self.qgrid = qgrid
        self.pgrid = pgrid

    def __call__(self, X, mu: float, nu: float) -> np.ndarray:
        X = np.atleast_1d(np.asarray(X, dtype=float))
        _check_direction(mu, nu)
        if abs(nu) >= abs(mu):
            line, axis, table = self.qgrid, self.pgrid, self.values
            a, b = mu, nu
        else:
            line, axis, table = self.pgrid, self.qgrid, self.values.T
            a, b = nu, mu
        nodes = axis.points
        acc = np.zeros(X.shape)
        for i, c in enumerate(line.points):
            acc += np.interp((X - a * c) / b, nodes, table[i], left=0.0, right=0.0)
        return acc * line.spacing / abs(b)


# ---------------------------------------------------------------------------
# optical tomogram


@dataclass(frozen=True)
class OpticalTomogram:
    """Sampled ``w(X, theta)``; ``values[k, j]`` is at ``(theta_k, X_j)``."""

    xgrid: Grid1D
    thetagrid: Grid1D
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.thetagrid.count, self.xgrid.count):
            raise ValueError("values must have shape (ntheta, nx)")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def row_norms(self) -> np.ndarray:
        return self.values.sum(axis=1) * self.xgrid.spacing

    def covers_circle(self) -> bool:
        g = self.thetagrid
        return abs(g.lower) < 1e-12 and abs(g.upper - 2 * np.pi) < 1e-9

    def to_csv(self) -> str:
        from .report import fmt

        g = self.xgrid
        lines = [
            f"#tomokit optical v1 nx={g.count} ntheta={self.thetagrid.count} "
            f"xmin={fmt(g.lower)} xmax={fmt(g.upper)}"
        ]
        xs = g.points
        for k, th in enumerate(self.thetagrid.points):
            ths = fmt(th)
            row = self.values[k]
            lines.extend(f"{ths},{fmt(x)},{fmt(v)}" for x, v in zip(xs, row))
        return "\n".join(lines) + "\n"

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv())

    @classmethod
    def load(cls, path) -> "OpticalTomogram":
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        return cls.from_csv(text)

    @classmethod
    def from_csv(cls, text: str) -> "OpticalTomogram":
        lines = text.strip().splitlines()
        if not lines or not lines[0].startswith("#tomokit optical v1"):
            raise ValueError("missing '#tomokit optical v1' header")
        meta = dict(tok.split("=", 1) for tok in lines[0].split()[3:])
        nx, nth = int(meta["nx"]), int(meta["ntheta"])
        xgrid = make_grid(float(meta["xmin"]), float(meta["xmax"]), nx)
        data = np.loadtxt(lines[1:], delimiter=",", ndmin=2)
        if data.shape != (nx * nth, 3):
            raise ValueError("row count does not match header")
        vals = data[:, 2].reshape(nth, nx)
        thetagrid = make_grid(0.0, 2 * np.pi, nth)
        if not np.allclose(data[::nx, 0], thetagrid.points, atol=1e-8):
            raise ValueError("theta column must be a midpoint grid on [0, 2pi)")
        return cls(xgrid, thetagrid, vals)


def _lagrange_weights(frac: np.ndarray) -> np.ndarray:
    # 4-point cubic Lagrange weights for nodes -1, 0, 1, 2
    t = frac
    return np.stack(
        [
            -t * (t - 1) * (t - 2) / 6,
            (t + 1) * (t - 1) * (t - 2) / 2,
            -(t + 1) * t * (t - 2) / 2,
            (t + 1) * t * (t - 1) / 6,
        ],
        axis=-1,
    )


def symplectic_from_optical(w: OpticalTomogram, X, mu: float, nu: float) -> np.ndarray:
    """Symplectic value ``s^-1 w(X/s, atan2(nu, mu))`` from stored optical rows.

    Interpolation is local cubic in both X and theta (periodic); results are
    clipped at zero.

    Args:
        w: Optical tomogram covering ``[0, 2 pi)``.
        X: Point(s) to evaluate.
        mu: Position coefficient.
        nu: Momentum coefficient.

    Returns:
        Array of tomogram values.
    """
    _check_direction(mu, nu)
    X = np.atleast_1d(np.asarray(X, dtype=float))
    s = math.hypot(mu, nu)
    theta = math.atan2(nu, mu) % (2 * np.pi)
    xr = X / s
    xg = w.xgrid
    if np.any(xr < xg.lower - 1e-12) or np.any(xr > xg.upper + 1e-12):
        raise ValueError("evaluation point outside the stored X range")
    tg = w.thetagrid
    if not w.covers_circle():
        raise ValueError("optical tomogram must cover [0, 2pi)")
    tpos = (theta - tg.points[0]) / tg.spacing
    t0 = int(np.floor(tpos))
    tw = _lagrange_weights(np.array(tpos - t0))
    tidx = (t0 + np.arange(-1, 3)) % tg.count
    row = tw @ w.values[tidx]
    pos = (xr - xg.points[0]) / xg.spacing
    x0 = np.floor(pos).astype(int)
    xw = _lagrange_weights(pos - x0)
    idx = x0[:, None] + np.arange(-1, 3)[None, :]
    padded = np.concatenate([[0.0, 0.0], row, [0.0, 0.0]])
    vals = np.sum(xw * padded[np.clip(idx + 2, 0, padded.size - 1)], axis=1)
    return np.maximum(vals, 0.0) / s


# ---------------------------------------------------------------------------
# symplectic tomogram


class SymplecticTomogram:
    """Evaluator of the symplectic tomogram ``M(X, mu, nu)``.

    ``backend`` is one of ``wavefunction``, ``density-matrix``, ``wigner``,
    ``classical-density``, ``optical-samples``.
    """

    def __init__(self, backend: str, payload, xgrid: Grid1D | None = None):
        self.backend = backend
        self.payload = payload
        self._rows: dict = {}
        if backend == "wavefunction":
            self.xgrid = payload.grid
            self._amp = _PureAmplitude(payload)
        elif backend == "density-matrix":
            self.xgrid = xgrid or default_xgrid()
            self._components = [(lam, _PureAmplitude(psi)) for lam, psi in _eigen_wavefunctions(payload, self.xgrid)]
        elif backend == "wigner":
            self.xgrid = xgrid or default_xgrid()
            self._line = _LineIntegrator(payload.values / (2 * np.pi), payload.qgrid, payload.pgrid)
        elif backend == "classical-density":
            self.xgrid = xgrid or default_xgrid()
            self._line = _LineIntegrator(payload.values, payload.qgrid, payload.pgrid)
        elif backend == "optical-samples":
            self.xgrid = payload.xgrid
        elif backend == "rescaled":
            base, lam = payload
            if lam == 0:
                raise ValueError("rescaling factor must be nonzero")
            self.xgrid = base.xgrid
        else:
            raise ValueError(f"unknown backend {backend!r}")

    def evaluate(self, X, mu: float, nu: float) -> np.ndarray:
        """Tomogram values at points ``X`` for the direction ``(mu, nu)``."""
        _check_direction(mu, nu)
        if self.backend == "wavefunction":
            return np.abs(self._amp(X, mu, nu)) ** 2
        if self.backend == "density-matrix":
            return sum(lam * np.abs(a(X, mu, nu)) ** 2 for lam, a in self._components)
        if self.backend == "optical-samples":
            return symplectic_from_optical(self.payload, X, mu, nu)
        if self.backend == "rescaled":
            base, lam = self.payload
            return abs(lam) * base.evaluate(lam * np.asarray(X, dtype=float), lam * mu, lam * nu)
        return self._line(X, mu, nu)

    __call__ = evaluate

    def rows(self, thetas) -> np.ndarray:
        """Unit-direction rows ``w(X_j, theta_k)`` on ``self.xgrid``."""
        thetas = np.asarray(thetas, dtype=float)
        key = thetas.tobytes()
        if key in self._rows:
            return self._rows[key]
        if self.backend == "wavefunction":
            out = _pure_rows(self.payload, None, thetas)
        elif self.backend == "density-matrix":
            out = _fock_rows(np.asarray(self.payload.matrix), thetas, self.xgrid)
        elif self.backend == "optical-samples" and _same_theta_nodes(self.payload.thetagrid, thetas):
            out = np.array(self.payload.values)
        else:
            out = self._rows_by_evaluation(thetas)
        self._rows[key] = out
        return out

    def rescaled(self, lam: float) -> "SymplecticTomogram":
        """Evaluator of ``|lam| M(lam X, lam mu, lam nu)`` (identical to M by homogeneity)."""
        return SymplecticTomogram("rescaled", (self, float(lam)))

    def characteristic_polar(self, s, thetas) -> np.ndarray:
        """``xi(1, s cos t, s sin t)`` for all ``t`` in ``thetas`` and ``s`` in ``s``.

        Rows give ``xi`` through the X integral of each unit-direction row
        (homogeneity maps radius ``s`` to frequency ``s``). Sampled phase-space
        densities integrate the delta constraint exactly, so their slice is the
        2-D quadrature of ``f exp(i s (q cos t + p sin t))``.

        Returns:
            Complex array of shape ``(len(thetas), len(s))``.
        """
        s = np.asarray(s, dtype=float)
        thetas = np.asarray(thetas, dtype=float)
        if self.backend in ("wigner", "classical-density"):
            scale = 1.0 / (2 * np.pi) if self.backend == "wigner" else 1.0
            return _density_slices(self.payload, scale, s, thetas)
        x = self.xgrid.points
        rows = self.rows(thetas)
        return rows @ np.exp(1j * np.outer(x, s)) * self.xgrid.spacing

    def _rows_by_evaluation(self, thetas: np.ndarray) -> np.ndarray:
        x = self.xgrid.points
        out = np.empty((thetas.size, x.size))
        done = np.zeros(thetas.size, dtype=bool)
        mirror = self.xgrid.symmetric
        for k, t in enumerate(thetas):
            if done[k]:
                continue
            out[k] = self.evaluate(x, np.cos(t), np.sin(t))
            done[k] = True
            if mirror:
                # w(X, t + pi) = w(-X, t)
                partner = np.nonzero(np.abs(np.angle(np.exp(1j * (thetas - t - np.pi)))) < 1e-12)[0]
                for j in partner:
                    if not done[j]:
                        out[j] = out[k][::-1]
                        done[j] = True
        return out

    def natural_thetas(self) -> np.ndarray:
        if self.backend == "optical-samples":
            return self.payload.thetagrid.points
        return default_thetagrid().points


def _pi_partners(thetas: np.ndarray) -> np.ndarray:
    """Index of the node at ``t + pi`` for each node, or -1."""
    out = np.full(thetas.size, -1)
    for k, t in enumerate(thetas):
        hit = np.nonzero(np.abs(np.angle(np.exp(1j * (thetas - t - np.pi)))) < 1e-12)[0]
        if hit.size:
            out[k] = hit[0]
    return out


def _density_slices(density, scale: float, s: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    vals = np.asarray(density.values) * scale
    q = density.qgrid.points
    p = density.pgrid.points
    # drop the numerically empty margin
    mask = np.abs(vals) > 1e-18 * np.abs(vals).max()
    qi = np.nonzero(mask.any(axis=1))[0]
    pj = np.nonzero(mask.any(axis=0))[0]
    vals = vals[qi[0] : qi[-1] + 1, pj[0] : pj[-1] + 1]
    q = q[qi[0] : qi[-1] + 1]
    p = p[pj[0] : pj[-1] + 1]
    area = density.qgrid.spacing * density.pgrid.spacing
    partners = _pi_partners(thetas)
    out = np.empty((thetas.size, s.size), dtype=complex)
    done = np.zeros(thetas.size, dtype=bool)
    for k, t in enumerate(thetas):
        if done[k]:
            continue
        eq = np.exp(1j * np.outer(s * np.cos(t), q))
        ep = np.exp(1j * np.outer(s * np.sin(t), p))
        out[k] = np.sum((eq @ vals) * ep, axis=1) * area
        done[k] = True
        j = partners[k]
        if j >= 0 and not done[j]:
            # xi(1, -mu, -nu) is the conjugate for a real density
            out[j] = out[k].conj()
            done[j] = True
    return out


def _same_theta_nodes(grid: Grid1D, thetas: np.ndarray) -> bool:
    pts = grid.points
    return pts.shape == thetas.shape and np.allclose(pts, thetas, atol=1e-12)


def symplectic_tomogram(state, xgrid: Grid1D | None = None) -> SymplecticTomogram:
    """Wrap a state (or optical data) as a symplectic tomogram evaluator.

    Args:
        state: ``WaveFunction``, ``DensityMatrixCV``, ``WignerFunction``,
            ``PhaseSpaceDensity`` or ``OpticalTomogram``.
        xgrid: X grid used for row computations (defaults to the state's grid).

    Returns:
        A ``SymplecticTomogram``.
    """
    if isinstance(state, SymplecticTomogram):
        return state
    if isinstance(state, WaveFunction):
        return SymplecticTomogram("wavefunction", state)
    if isinstance(state, DensityMatrixCV):
        return SymplecticTomogram("density-matrix", state, xgrid)
    if isinstance(state, WignerFunction):
        return SymplecticTomogram("wigner", state, xgrid)
    if isinstance(state, PhaseSpaceDensity):
        return SymplecticTomogram("classical-density", state, xgrid)
    if isinstance(state, OpticalTomogram):
        return SymplecticTomogram("optical-samples", state)
    raise TypeError(f"unsupported state type {type(state).__name__}")


def optical_tomogram(state, thetagrid: Grid1D | None = None, xgrid: Grid1D | None = None) -> OpticalTomogram:
    """Optical tomogram ``w(X, theta) = M(X, cos theta, sin theta)`` on a grid.

    Pure states use ``|fractional_fourier(psi, theta)|^2``; density matrices
    sum their eigenstate tomograms; phase-space inputs use line integrals.
    """
    thetagrid = thetagrid or default_thetagrid()
    M = symplectic_tomogram(state, xgrid)
    vals = M.rows(thetagrid.points)
    return OpticalTomogram(M.xgrid, thetagrid, np.maximum(vals, 0.0))


# ---------------------------------------------------------------------------
# axioms, moments


@dataclass
class AxiomReport:
    normalization_errors: list
    min_value: float
    homogeneity_residual: float
    differential_residual: float
    tol: float = 1e-4
    differential_tol: float = 1e-3

    @property
    def ok(self) -> bool:
        return (
            max(self.normalization_errors) <= self.tol
            and self.min_value >= -1e-10
            and self.homogeneity_residual <= self.tol
            and self.differential_residual <= self.differential_tol
        )


def homogeneity_residual(f: Callable, point: Sequence[float], step: float = 1e-4) -> float:
    """Residual of ``(sum_i v_i d/dv_i + 1) f`` at ``point`` by central differences."""
    point = np.asarray(point, dtype=float)
    total = float(f(*point))
    for i in range(point.size):
        up = point.copy()
        dn = point.copy()
        up[i] += step
        dn[i] -= step
        total += point[i] * (float(f(*up)) - float(f(*dn))) / (2 * step)
    return abs(total)


def _scalar(M) -> Callable:
    return lambda X, mu, nu: float(M.evaluate(np.array([X]), mu, nu)[0])


def verify_tomogram_axioms(
    M,
    directions: Sequence[tuple[float, float]],
    lambdas: Sequence[float] = (-2.0, 0.5),
    seed: int = 0,
    step: float = 1e-4,
) -> AxiomReport:
    """Check nonnegativity, normalization, homogeneity and its differential form.

    Args:
        M: Any object with ``evaluate(X, mu, nu)``.
        directions: Nonempty list of ``(mu, nu)``.
        lambdas: Scale factors for the homogeneity check.
        seed: Seed for the 8 random differential-form points.
        step: Finite-difference step.

    Returns:
        An ``AxiomReport``.
    """
    if not directions:
        raise ValueError("need at least one direction")
    xg = default_xgrid()
    norm_err = []
    min_val = np.inf
    hom = 0.0
    for mu, nu in directions:
        s = math.hypot(mu, nu)
        X = xg.points * s
        vals = M.evaluate(X, mu, nu)
        norm_err.append(abs(vals.sum() * xg.spacing * s - 1.0))
        min_val = min(min_val, float(vals.min()))
        Xs = X[::16]
        base = M.evaluate(Xs, mu, nu)
        for lam in lambdas:
            scaled = M.evaluate(lam * Xs, lam * mu, lam * nu) * abs(lam)
            hom = max(hom, float(np.abs(scaled - base).max()))
    rng = np.random.default_rng(seed)
    f = _scalar(M)
    diff = 0.0
    for _ in range(8):
        mu = rng.uniform(0.5, 1.5) * rng.choice([-1, 1])
        nu = rng.uniform(0.5, 1.5) * rng.choice([-1, 1])
        X = rng.uniform(-1.5, 1.5)
        diff = max(diff, homogeneity_residual(f, (X, mu, nu), step))
    return AxiomReport(norm_err, float(min_val), hom, diff)


def tomogram_moments(M: SymplecticTomogram, n: int, which: str = "position") -> float:
    """Moment ``int M(X, 1, 0) X^n dX`` (position) or at ``(0, 1)`` (momentum)."""
    if not 0 <= n <= 4:
        raise ValueError("moment order must be in 0..4")
    direction = {"position": (1.0, 0.0), "momentum": (0.0, 1.0)}.get(which)
    if direction is None:
        raise ValueError("which must be 'position' or 'momentum'")
    x = M.xgrid.points
    vals = M.evaluate(x, *direction)
    return float(np.trapezoid(vals * x**n, x))


# ---------------------------------------------------------------------------
# characteristic function


class CharacteristicFn:
    """``xi(k, mu, nu)``; ``evaluate`` is vectorized over ``k``."""

    def __init__(self, func: Callable, source: SymplecticTomogram | None = None):
        self._func = func
        self.source = source

    def evaluate(self, k, mu: float, nu: float) -> np.ndarray:
        k = np.atleast_1d(np.asarray(k, dtype=float))
        return np.asarray(self._func(k, float(mu), float(nu)), dtype=complex) * np.ones(k.shape)

    __call__ = evaluate


def characteristic_function(M: SymplecticTomogram) -> CharacteristicFn:
    """``xi(k, mu, nu) = int exp(ikX) M(X, mu, nu) dX`` by quadrature.

    The quadrature runs on the unit-direction row, using homogeneity:
    ``xi(k, mu, nu) = xi(k s, mu/s, nu/s)``.
    """
    xg = M.xgrid
    x = xg.points

    def func(k, mu, nu):
        _check_direction(mu, nu)
        s = math.hypot(mu, nu)
        row = M.evaluate(x, mu / s, nu / s)
        return np.exp(1j * np.outer(k * s, x)) @ row * xg.spacing

    return CharacteristicFn(func, M)


def tomogram_from_characteristic(
    xi: CharacteristicFn, mu: float, nu: float, xgrid: Grid1D | None = None, nk: int = 2048
) -> np.ndarray:
    """Invert ``M = (1/2pi) int xi(k) exp(-ikX) dk`` over ``k`` in ``[-40, 40]``.

    Raises:
        NumericalFailure: if ``|xi|`` at the window edge exceeds 1e-6.
    """
    xgrid = xgrid or default_xgrid()
    kg = make_grid(-K_WINDOW, K_WINDOW, nk)
    edge = np.abs(xi.evaluate(np.array([-K_WINDOW, K_WINDOW]), mu, nu)).max()
    if edge > DECAY_TOL:
        raise NumericalFailure(f"non-decaying characteristic function (|xi| = {edge:.3g} at k window edge)")
    k = kg.points
    vals = xi.evaluate(k, mu, nu)
    out = np.exp(-1j * np.outer(xgrid.points, k)) @ vals * kg.spacing / (2 * np.pi)
    return out.real


# ---------------------------------------------------------------------------
# operator symbols and traces


class TomographicSymbol:
    """Tomographic symbol ``M_A(X, mu, nu)`` of a rank-one operator or density matrix."""

    def __init__(self, kind: str, payload, trace_hint: complex | None = None):
        self.kind = kind
        self.payload = payload
        self.trace_hint = trace_hint
        if kind == "rank-one":
            psi1, psi2 = payload
            if psi1.grid != psi2.grid:
                raise ValueError("both wave functions must share a grid")
            self.xgrid = psi1.grid
            self._a1 = _PureAmplitude(psi1)
            self._a2 = self._a1 if psi2 is psi1 else _PureAmplitude(psi2)
        elif kind == "density-matrix":
            self._tomo = SymplecticTomogram("density-matrix", payload)
            self.xgrid = self._tomo.xgrid
        else:
            raise ValueError(f"unknown symbol kind {kind!r}")

    def evaluate(self, X, mu: float, nu: float) -> np.ndarray:
        _check_direction(mu, nu)
        if self.kind == "rank-one":
            return self._a1(X, mu, nu) * np.conj(self._a2(X, mu, nu))
        return self._tomo.evaluate(X, mu, nu).astype(complex)

    __call__ = evaluate

    def rows(self, thetas) -> np.ndarray:
        """Complex unit-direction rows on ``self.xgrid``."""
        thetas = np.asarray(thetas, dtype=float)
        if self.kind == "rank-one":
            psi1, psi2 = self.payload
            return _pure_rows(psi1, psi2, thetas)
        return self._tomo.rows(thetas).astype(complex)


def operator_symbol(op) -> TomographicSymbol:
    """Symbol of ``|psi1><psi2|`` (pass a ``(psi1, psi2)`` pair) or a density matrix."""
    if isinstance(op, DensityMatrixCV):
        return TomographicSymbol("density-matrix", op, trace_hint=1.0)
    if isinstance(op, WaveFunction):
        return TomographicSymbol("rank-one", (op, op))
    if isinstance(op, tuple) and len(op) == 2 and all(isinstance(p, WaveFunction) for p in op):
        return TomographicSymbol("rank-one", op)
    if isinstance(op, SymplecticTomogram):
        if op.backend == "wavefunction":
            return TomographicSymbol("rank-one", (op.payload, op.payload))
        if op.backend == "density-matrix":
            return TomographicSymbol("density-matrix", op.payload, trace_hint=1.0)
    raise TypeError("operator must be a (psi1, psi2) pair, a WaveFunction or a DensityMatrixCV")


def symbol_trace(sym: TomographicSymbol, direction: tuple[float, float] = (1.0, 0.0), eps: float = 1e-4) -> complex:
    """Trace from the X-integral of the symbol at a reference direction.

    The delta-collapsed form is also evaluated, as the small-``k`` limit
    ``int M_A(X, mu, nu) exp(i eps X) dX`` along a second direction; the two
    must agree within 1e-3.

    Raises:
        NumericalFailure: when the two formulas disagree by more than 1e-3.
    """
    xg = sym.xgrid
    x = xg.points
    mu, nu = direction
    s = math.hypot(mu, nu)
    tr = complex(np.sum(sym.evaluate(x * s, mu, nu)) * xg.spacing * s)
    other = sym.evaluate(x, math.cos(0.7), math.sin(0.7))
    collapsed = complex(np.sum(other * np.exp(1j * eps * x)) * xg.spacing)
    if abs(tr - collapsed) > 1e-3:
        raise NumericalFailure(f"trace formulas disagree: {tr} vs {collapsed}")
    return tr


def _cos_sin_moments(rows: np.ndarray, x: np.ndarray, h: float, s: np.ndarray):
    ph = np.exp(1j * np.outer(x, s))
    c = rows @ ph.real * h
    sn = rows @ ph.imag * h
    return c, sn


def symbol_pair_trace(
    symA: TomographicSymbol,
    symB: TomographicSymbol,
    thetagrid: Grid1D | None = None,
    s_max: float = 12.0,
    n_s: int = 96,
) -> complex:
    """``Tr(AB)`` from two symbols via per-direction cos / sin correlations.

    For each direction the X, Y integrals factor as
    ``C_A C_B + S_A S_B`` (cosine part) and ``S_A C_B - C_A S_B`` (sine
    part), where ``C = int M cos X``, ``S = int M sin X``. Directions are
    sampled in polar form ``(s cos t, s sin t)``: trapezoid in ``t``,
    Gauss-Legendre in ``s``. The result's imaginary part is the sine integral.
    """
    thetagrid = thetagrid or default_thetagrid()
    if symA.xgrid != symB.xgrid:
        raise ValueError("symbols must share an X grid")
    t = thetagrid.points
    x = symA.xgrid.points
    h = symA.xgrid.spacing
    nodes, weights = np.polynomial.legendre.leggauss(n_s)
    s = 0.5 * s_max * (nodes + 1)
    ws = 0.5 * s_max * weights
    ra = symA.rows(t)
    rb = ra if symB is symA else symB.rows(t)
    # homogeneity: M(X, s mu0, s nu0) dX integrated against exp(iX) equals the
    # unit-direction row integrated against exp(i s X)
    ca, sa = _cos_sin_moments(ra, x, h, s)
    cb, sb = _cos_sin_moments(rb, x, h, s)
    cos_part = ca * cb + sa * sb
    sin_part = sa * cb - ca * sb
    jac = (s * ws)[None, :] * thetagrid.spacing / (2 * np.pi)
    return complex(np.sum(cos_part * jac) + 1j * np.sum(sin_part * jac))


# ---------------------------------------------------------------------------
# shifted tomogram


class ShiftedTomogram:
    """``w(X, mu, nu, a) = M(X - a, mu, nu)``."""

    def __init__(self, M, a: float = 0.0):
        self.M = M
        self.a = float(a)

    def evaluate(self, X, mu: float, nu: float, a: float | None = None) -> np.ndarray:
        a = self.a if a is None else float(a)
        return self.M.evaluate(np.atleast_1d(np.asarray(X, dtype=float)) - a, mu, nu)

    __call__ = evaluate

    def differential_residual(self, point: Sequence[float], step: float = 1e-4) -> float:
        """Four-variable homogeneity residual at ``(X, mu, nu, a)``."""
        f = lambda X, mu, nu, a: float(self.evaluate(np.array([X]), mu, nu, a)[0])  # noqa: E731
        return homogeneity_residual(f, point, step)


def shifted_tomogram(M, a: float) -> ShiftedTomogram:
    return ShiftedTomogram(M, a)
