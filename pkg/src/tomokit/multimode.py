"""Multimode symplectic and center-of-mass tomograms of classical densities and product states."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from . import report
from .cvrecon import reconstruct_density_matrix
from .cventropy import LN_PI_E, _single_mode_dispersion, position_momentum_entropies
from .cvstates import DensityMatrixCV
from .cvtomo import SymplecticTomogram, homogeneity_residual, symplectic_tomogram
from .numkernel import Grid1D, NumericalFailure, WaveFunction, make_grid

__all__ = [
    "GaussianDensity",
    "SampledDensity",
    "MultimodeState",
    "MultimodeTomogram",
    "CenterOfMassTomogram",
    "MultimodeEntropyReport",
    "multimode_symplectic_tomogram",
    "center_of_mass_tomogram",
    "subsystem_marginal",
    "reconstruct_multimode",
    "multimode_entropy_check",
]

DIRECTION_EPS = 1e-6
MAX_CLASSICAL_MODES = 3
MAX_QUANTUM_MODES = 2
N_BINS = 160


def _pairs_to_mode_order(n_modes: int) -> np.ndarray:
    # (q1, p1, q2, p2, ...) -> (p1, q1, p2, q2, ...)
    return np.array([2 * k + 1 - j for k in range(n_modes) for j in range(2)])


@dataclass(frozen=True)
class GaussianDensity:
    """Normal density on ``(q1, p1, ..., qN, pN)`` with closed-form tomograms."""

    mean: np.ndarray
    cov: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.mean, dtype=float).ravel()
        c = np.array(self.cov, dtype=float)
        if m.size % 2 or c.shape != (m.size, m.size):
            raise ValueError("mean must have 2N entries and cov shape (2N, 2N)")
        if np.abs(c - c.T).max() > 1e-12 or np.linalg.eigvalsh(c).min() <= 0:
            raise ValueError("cov must be symmetric positive definite")
        object.__setattr__(self, "mean", m)
        object.__setattr__(self, "cov", c)

    @property
    def mode_count(self) -> int:
        return self.mean.size // 2

    def pdf(self, z: np.ndarray) -> np.ndarray:
        d = np.asarray(z, dtype=float) - self.mean
        inv = np.linalg.inv(self.cov)
        quad = np.einsum("...i,ij,...j->...", d, inv, d)
        norm = (2 * np.pi) ** (self.mean.size / 2) * np.sqrt(np.linalg.det(self.cov))
        return np.exp(-0.5 * quad) / norm

    def sampled(self, grid: Grid1D) -> "SampledDensity":
        """Sample on the same grid along every axis and renormalize."""
        axes = np.meshgrid(*([grid.points] * self.mean.size), indexing="ij")
        vals = self.pdf(np.stack(axes, axis=-1))
        vals /= vals.sum() * grid.spacing ** self.mean.size
        return SampledDensity(tuple([grid] * self.mean.size), vals)

    def marginal(self, n_modes: int) -> "GaussianDensity":
        k = 2 * n_modes
        return GaussianDensity(self.mean[:k], self.cov[:k, :k])

    def dispersion(self) -> np.ndarray:
        order = _pairs_to_mode_order(self.mode_count)
        return self.cov[np.ix_(order, order)]


@dataclass(frozen=True)
class SampledDensity:
    """Nonnegative density sampled on a product grid, axes ``(q1, p1, ..., qN, pN)``."""

    grids: tuple
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if len(self.grids) % 2 or v.shape != tuple(g.count for g in self.grids):
            raise ValueError("values do not match grids")
        if v.min() < 0:
            raise ValueError("density must be nonnegative")
        norm = v.sum() * self.cell
        if abs(norm - 1.0) > 1e-4:
            raise ValueError(f"density not normalized ({norm:.6g})")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def mode_count(self) -> int:
        return len(self.grids) // 2

    @property
    def cell(self) -> float:
        return float(np.prod([g.spacing for g in self.grids]))

    def mode_points(self, k: int) -> tuple[np.ndarray, np.ndarray]:
        q = self.grids[2 * k].points
        p = self.grids[2 * k + 1].points
        return np.repeat(q, p.size), np.tile(p, q.size)

    def marginal(self, n_modes: int) -> "SampledDensity":
        drop = tuple(range(2 * n_modes, len(self.grids)))
        spacing = np.prod([self.grids[a].spacing for a in drop]) if drop else 1.0
        return SampledDensity(self.grids[: 2 * n_modes], self.values.sum(axis=drop) * spacing)

    def dispersion(self) -> np.ndarray:
        n = len(self.grids)
        w = self.values * self.cell
        axes = np.meshgrid(*[g.points for g in self.grids], indexing="ij", sparse=True)
        mean = np.array([np.sum(w * a) for a in axes])
        cov = np.empty((n, n))
        for i in range(n):
            for j in range(i, n):
                cov[i, j] = cov[j, i] = np.sum(w * (axes[i] - mean[i]) * (axes[j] - mean[j]))
        order = _pairs_to_mode_order(n // 2)
        return cov[np.ix_(order, order)]


@dataclass(frozen=True)
class MultimodeState:
    """Classical density or product of single-mode quantum states.

    ``kind`` is ``classical-density``, ``product-pure`` or ``product-mixed``.
    """

    kind: str
    payloads: tuple

    def __post_init__(self):
        if self.kind == "classical-density":
            if len(self.payloads) != 1 or not isinstance(self.payloads[0], (GaussianDensity, SampledDensity)):
                raise ValueError("classical state takes one GaussianDensity or SampledDensity")
            if self.mode_count > MAX_CLASSICAL_MODES:
                raise ValueError(f"at most {MAX_CLASSICAL_MODES} classical modes")
        elif self.kind in ("product-pure", "product-mixed"):
            if not self.payloads:
                raise ValueError("product state needs at least one mode")
            for p in self.payloads:
                if not isinstance(p, (WaveFunction, DensityMatrixCV)):
                    raise ValueError(f"unsupported mode payload {type(p).__name__}")
            if self.kind == "product-pure" and not all(isinstance(p, WaveFunction) for p in self.payloads):
                raise ValueError("product-pure needs wave functions")
        else:
            raise ValueError(f"unknown kind {self.kind!r}")

    @classmethod
    def product(cls, states: Sequence) -> "MultimodeState":
        states = tuple(states)
        pure = all(isinstance(s, WaveFunction) for s in states)
        return cls("product-pure" if pure else "product-mixed", states)

    @classmethod
    def classical(cls, density) -> "MultimodeState":
        return cls("classical-density", (density,))

    @property
    def is_product(self) -> bool:
        return self.kind != "classical-density"

    @property
    def mode_count(self) -> int:
        if self.is_product:
            return len(self.payloads)
        return self.payloads[0].mode_count

    def dispersion(self) -> np.ndarray:
        if not self.is_product:
            return self.payloads[0].dispersion()
        n = self.mode_count
        out = np.zeros((2 * n, 2 * n))
        for k, p in enumerate(self.payloads):
            out[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = _single_mode_dispersion(p)
        return out


def _as_vectors(mu, nu, n: int) -> tuple[np.ndarray, np.ndarray]:
    mu = np.atleast_1d(np.asarray(mu, dtype=float))
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    if mu.shape != (n,) or nu.shape != (n,):
        raise ValueError(f"dimension mismatch: expected {n} direction components per vector")
    return mu, nu


def _share_linear(values: np.ndarray, weights: np.ndarray, bins: Grid1D) -> np.ndarray:
    """Histogram with each sample split linearly between its two nearest bin centres."""
    u = (values - bins.lower) / bins.spacing - 0.5
    i0 = np.floor(u).astype(int)
    frac = u - i0
    out = np.zeros(bins.count)
    for idx, w in ((i0, weights * (1 - frac)), (i0 + 1, weights * frac)):
        ok = (idx >= 0) & (idx < bins.count)
        out += np.bincount(idx[ok], weights=w[ok], minlength=bins.count)
    return out


def _sharing_matrix(values: np.ndarray, bins: Grid1D) -> np.ndarray:
    u = (values - bins.lower) / bins.spacing - 0.5
    i0 = np.floor(u).astype(int)
    frac = u - i0
    out = np.zeros((bins.count, values.size))
    cols = np.arange(values.size)
    for idx, w in ((i0, 1 - frac), (i0 + 1, frac)):
        ok = (idx >= 0) & (idx < bins.count)
        np.add.at(out, (idx[ok], cols[ok]), w[ok])
    return out


def _bins_for(values: np.ndarray, step: float = 0.0) -> Grid1D:
    # bins no narrower than the projected sample lattice, else the histogram combs
    lo, hi = float(values.min()), float(values.max())
    pad = 0.05 * (hi - lo) + 1e-9
    width = hi - lo + 2 * pad
    count = max(8, min(N_BINS, int(width / step) if step > 0 else N_BINS))
    return make_grid(lo - pad, hi + pad, count)


class MultimodeTomogram:
    """Evaluator of ``M(X_vec, mu_vec, nu_vec)`` for an N-mode state.

    Products multiply single-mode tomograms; Gaussians use the closed-form
    normal law of ``X_k = mu_k q_k + nu_k p_k``; sampled densities bin those
    combinations with linear sharing.
    """

    def __init__(self, state: MultimodeState):
        self.state = state
        self.mode_count = state.mode_count
        self.factors = [symplectic_tomogram(p) for p in state.payloads] if state.is_product else None
        self._cache: dict = {}

    def evaluate(self, X, mu, nu) -> np.ndarray:
        n = self.mode_count
        mu, nu = _as_vectors(mu, nu, n)
        if np.any(np.hypot(mu, nu) < DIRECTION_EPS):
            raise ValueError("every mode needs a nonzero direction")
        X = np.asarray(X, dtype=float)
        if X.shape[-1] != n:
            raise ValueError(f"dimension mismatch: X has {X.shape[-1]} components, expected {n}")
        if self.factors is not None:
            out = np.ones(X.shape[:-1])
            for k, M in enumerate(self.factors):
                out = out * np.reshape(M.evaluate(X[..., k].ravel(), mu[k], nu[k]), X.shape[:-1])
            return out
        dens = self.state.payloads[0]
        if isinstance(dens, GaussianDensity):
            A = np.zeros((n, 2 * n))
            for k in range(n):
                A[k, 2 * k : 2 * k + 2] = mu[k], nu[k]
            return GaussianDensity(A @ dens.mean, A @ dens.cov @ A.T).pdf(X)
        return self._binned(mu, nu)(X)

    __call__ = evaluate

    def _binned(self, mu: np.ndarray, nu: np.ndarray):
        key = (mu.tobytes(), nu.tobytes())
        if key in self._cache:
            return self._cache[key]
        dens = self.state.payloads[0]
        t = np.asarray(dens.values).reshape([g.count * h.count for g, h in zip(dens.grids[::2], dens.grids[1::2])])
        bins = []
        for k in range(self.mode_count):
            q, p = dens.mode_points(k)
            y = mu[k] * q + nu[k] * p
            b = _bins_for(y, max(abs(mu[k]) * dens.grids[2 * k].spacing, abs(nu[k]) * dens.grids[2 * k + 1].spacing))
            bins.append(b)
            # contract mode k's (q, p) axis with its sharing matrix
            t = np.moveaxis(np.tensordot(_sharing_matrix(y, b), t, axes=([1], [k])), 0, k)
        t = t * dens.cell / np.prod([b.spacing for b in bins])
        interp = RegularGridInterpolator([b.points for b in bins], t, bounds_error=False, fill_value=0.0)
        self._cache[key] = interp
        return interp

    def mode_homogeneity_residual(self, X, mu, nu, mode: int, step: float = 1e-4) -> float:
        """Finite-difference residual of the per-mode homogeneity equation for mode ``mode``."""
        X = np.asarray(X, dtype=float)
        mu, nu = _as_vectors(mu, nu, self.mode_count)

        def f(x, m, v):
            Xv, mv, vv = X.copy(), mu.copy(), nu.copy()
            Xv[mode], mv[mode], vv[mode] = x, m, v
            return float(self.evaluate(Xv, mv, vv))

        return homogeneity_residual(f, (X[mode], mu[mode], nu[mode]), step)


class CenterOfMassTomogram:
    """Evaluator of ``M_cm(X, mu_vec, nu_vec)``, the law of ``sum_k mu_k q_k + nu_k p_k``."""

    def __init__(self, state: MultimodeState):
        self.state = state
        self.mode_count = state.mode_count
        self.factors = [symplectic_tomogram(p) for p in state.payloads] if state.is_product else None

    def evaluate(self, X, mu, nu) -> np.ndarray:
        mu, nu = _as_vectors(mu, nu, self.mode_count)
        if np.all(np.abs(mu) < DIRECTION_EPS) and np.all(np.abs(nu) < DIRECTION_EPS):
            raise ValueError("all direction components are zero")
        X = np.asarray(X, dtype=float)
        if self.factors is not None:
            return self._convolved(X, mu, nu)
        dens = self.state.payloads[0]
        if isinstance(dens, GaussianDensity):
            k = np.column_stack([mu, nu]).ravel()
            var = k @ dens.cov @ k
            return np.exp(-0.5 * (X - k @ dens.mean) ** 2 / var) / np.sqrt(2 * np.pi * var)
        return self._binned(X, mu, nu)

    __call__ = evaluate

    def _convolved(self, X: np.ndarray, mu: np.ndarray, nu: np.ndarray) -> np.ndarray:
        # the sum of independent quadratures has the convolution of their laws
        active = [(k, np.hypot(mu[k], nu[k])) for k in range(self.mode_count) if np.hypot(mu[k], nu[k]) >= DIRECTION_EPS]
        reach = sum(s * max(abs(self.factors[k].xgrid.lower), abs(self.factors[k].xgrid.upper)) for k, s in active)
        h = min(s * self.factors[k].xgrid.spacing for k, s in active) / 2
        n = int(min(2 ** 15, 2 * np.ceil(reach / h)))
        grid = make_grid(-reach, reach, n)
        dens = None
        for k, _ in active:
            row = self.factors[k].evaluate(grid.points, mu[k], nu[k])
            if dens is None:
                dens = row
            else:
                dens = np.convolve(dens, row, mode="same") * grid.spacing
        if len(active) > 1 and n % 2 == 0:
            # "same" on an even midpoint grid lands half a cell off centre
            centre = grid.points - 0.5 * grid.spacing * (len(active) - 1)
            return np.interp(X, centre, dens, left=0.0, right=0.0)
        return np.interp(X, grid.points, dens, left=0.0, right=0.0)

    def _binned(self, X: np.ndarray, mu: np.ndarray, nu: np.ndarray) -> np.ndarray:
        dens = self.state.payloads[0]
        axes = np.meshgrid(*[g.points for g in dens.grids], indexing="ij", sparse=True)
        y = sum(mu[k] * axes[2 * k] + nu[k] * axes[2 * k + 1] for k in range(self.mode_count))
        y = np.broadcast_to(y, dens.values.shape).ravel()
        step = max(max(abs(mu[k]) * dens.grids[2 * k].spacing, abs(nu[k]) * dens.grids[2 * k + 1].spacing) for k in range(self.mode_count))
        bins = _bins_for(y, step)
        hist = _share_linear(y, np.asarray(dens.values).ravel() * dens.cell, bins) / bins.spacing
        return np.interp(X, bins.points, hist, left=0.0, right=0.0)

    def homogeneity_error(self, X, mu, nu, lam: float) -> float:
        """``| |lam| M(lam X, lam mu, lam nu) - M(X, mu, nu) |``."""
        mu, nu = _as_vectors(mu, nu, self.mode_count)
        a = abs(lam) * self.evaluate(lam * np.asarray(X, dtype=float), lam * mu, lam * nu)
        return float(np.max(np.abs(a - self.evaluate(X, mu, nu))))

    def differential_residual(self, X: float, mu, nu, step: float = 1e-4) -> float:
        """Residual of ``(X d/dX + sum mu_k d/dmu_k + nu_k d/dnu_k + 1) M_cm = 0``."""
        mu, nu = _as_vectors(mu, nu, self.mode_count)
        n = self.mode_count

        def f(*args):
            return float(self.evaluate(args[0], np.array(args[1 : n + 1]), np.array(args[n + 1 :])))

        return homogeneity_residual(f, (float(X), *mu, *nu), step)

    def characteristic(self, k: np.ndarray) -> np.ndarray:
        """``chi(k) = int exp(iX) M_cm(X, k) dX`` for rows of ``k`` ordered ``(mu1, nu1, ...)``.

        Gaussian states integrate the evaluated tomogram on a grid adapted to
        each direction; products multiply single-mode values; sampled
        densities use the exact transform of the grid values.
        """
        k = np.atleast_2d(np.asarray(k, dtype=float))
        n = self.mode_count
        if self.factors is not None:
            out = np.ones(k.shape[0], dtype=complex)
            x_cache = {}
            for m, M in enumerate(self.factors):
                x = M.xgrid.points
                x_cache[m] = x
                for i, (a, b) in enumerate(k[:, 2 * m : 2 * m + 2]):
                    s = np.hypot(a, b)
                    if s < DIRECTION_EPS:
                        continue
                    row = M.evaluate(x, a / s, b / s)
                    out[i] *= np.sum(np.exp(1j * s * x) * row) * M.xgrid.spacing
            return out
        dens = self.state.payloads[0]
        if isinstance(dens, GaussianDensity):
            t = np.linspace(-12.0, 12.0, 121)
            dt = t[1] - t[0]
            out = np.empty(k.shape[0], dtype=complex)
            for lo in range(0, k.shape[0], 4096):
                kk = k[lo : lo + 4096]
                centre = kk @ dens.mean
                sd = np.sqrt(np.einsum("ij,jk,ik->i", kk, dens.cov, kk))
                sd = np.maximum(sd, 1e-12)
                X = centre[:, None] + sd[:, None] * t[None, :]
                vals = np.exp(-0.5 * ((X - centre[:, None]) / sd[:, None]) ** 2) / (np.sqrt(2 * np.pi) * sd[:, None])
                out[lo : lo + 4096] = np.sum(np.exp(1j * X) * vals, axis=1) * sd * dt
            return out
        axes = [g.points for g in dens.grids]
        out = np.empty(k.shape[0], dtype=complex)
        flat = np.asarray(dens.values)
        for i, kv in enumerate(k):
            t = flat.astype(complex)
            for a in range(2 * n):
                t = np.tensordot(np.exp(1j * kv[a] * axes[a]), t, axes=([0], [0]))
            out[i] = t * dens.cell
        return out

    def characteristic_grid(self, k1d: np.ndarray, n_axes: int) -> np.ndarray:
        """``chi`` on the Cartesian product of ``k1d`` along all ``n_axes`` axes."""
        if self.factors is None and isinstance(self.state.payloads[0], SampledDensity):
            dens = self.state.payloads[0]
            t = np.asarray(dens.values).astype(complex)
            for g in dens.grids:
                # the contracted axis is replaced by a frequency axis at the end
                t = np.tensordot(t, np.exp(1j * np.outer(g.points, k1d)), axes=([0], [0]))
            return t * dens.cell
        mesh = np.stack(np.meshgrid(*([k1d] * n_axes), indexing="ij"), axis=-1).reshape(-1, n_axes)
        return self.characteristic(mesh).reshape([k1d.size] * n_axes)

    def marginal(self, drop: int) -> "_CMMarginal":
        return _CMMarginal(self, drop)


class _CMMarginal:
    """Center-of-mass tomogram of the first ``N - drop`` modes: trailing directions set to zero."""

    def __init__(self, parent: CenterOfMassTomogram, drop: int):
        self.parent = parent
        self.mode_count = parent.mode_count - drop
        self.drop = drop

    def evaluate(self, X, mu, nu) -> np.ndarray:
        mu, nu = _as_vectors(mu, nu, self.mode_count)
        z = np.zeros(self.drop)
        return self.parent.evaluate(X, np.concatenate([mu, z]), np.concatenate([nu, z]))

    __call__ = evaluate


class _SymplecticMarginal:
    """Symplectic tomogram of the first ``N - drop`` modes by integrating out trailing X."""

    def __init__(self, parent: MultimodeTomogram, drop: int, grid: Grid1D | None = None):
        self.parent = parent
        self.drop = drop
        self.mode_count = parent.mode_count - drop
        self.grid = grid or make_grid(-8.0, 8.0, 256 if drop == 1 else 64)

    def evaluate(self, X, mu, nu) -> np.ndarray:
        mu, nu = _as_vectors(mu, nu, self.mode_count)
        X = np.asarray(X, dtype=float)
        lead = X.reshape(-1, self.mode_count)
        tail = np.stack(np.meshgrid(*([self.grid.points] * self.drop), indexing="ij"), axis=-1).reshape(-1, self.drop)
        full_mu = np.concatenate([mu, np.ones(self.drop)])
        full_nu = np.concatenate([nu, np.zeros(self.drop)])
        out = np.empty(lead.shape[0])
        for i, x in enumerate(lead):
            pts = np.concatenate([np.broadcast_to(x, (tail.shape[0], self.mode_count)), tail], axis=1)
            out[i] = self.parent.evaluate(pts, full_mu, full_nu).sum() * self.grid.spacing**self.drop
        return out.reshape(X.shape[:-1])

    __call__ = evaluate


def multimode_symplectic_tomogram(state: MultimodeState) -> MultimodeTomogram:
    """Symplectic tomogram of an N-mode classical density or product state."""
    return MultimodeTomogram(state)


def center_of_mass_tomogram(state: MultimodeState) -> CenterOfMassTomogram:
    """Center-of-mass tomogram: law of ``sum_k mu_k q_k + nu_k p_k``."""
    return CenterOfMassTomogram(state)


def subsystem_marginal(M, drop: int):
    """Tomogram of the first ``N - drop`` modes.

    Symplectic tomograms integrate out the trailing X variables; for
    center-of-mass tomograms the trailing directions are set to zero.

    Raises:
        ValueError: unless ``1 <= N - drop < N``.
    """
    n = M.mode_count
    if int(drop) != drop or not 1 <= n - drop < n:
        raise ValueError(f"invalid number of dropped modes {drop} for {n} modes")
    if isinstance(M, CenterOfMassTomogram):
        return M.marginal(int(drop))
    if isinstance(M, MultimodeTomogram):
        return _SymplecticMarginal(M, int(drop))
    raise TypeError(f"unsupported tomogram {type(M).__name__}")


def _cartesian_inverse(cm: CenterOfMassTomogram, n_axes: int, out_grid: Grid1D, windows=(4.0, 6.0, 8.0, 12.0)) -> np.ndarray:
    chi_fn = cm.characteristic
    rng = np.random.default_rng(0)
    probe = rng.standard_normal((64, n_axes))
    probe /= np.linalg.norm(probe, axis=1)[:, None]
    probe = np.vstack([probe, np.eye(n_axes), -np.eye(n_axes)])
    for W in windows:
        if np.abs(chi_fn(W * probe)).max() <= 1e-6:
            break
    else:
        raise NumericalFailure("characteristic function does not decay in the frequency window")
    # frequency step sets the period of the implied Fourier series
    period = 2.5 * max(abs(out_grid.lower), abs(out_grid.upper))
    n_k = int(np.ceil(2 * W / (2 * np.pi / period)))
    kg = make_grid(-W, W, n_k)
    chi = cm.characteristic_grid(kg.points, n_axes)
    back = np.exp(-1j * np.outer(kg.points, out_grid.points)) * kg.spacing / (2 * np.pi)
    out = chi
    for _ in range(n_axes):
        # contract the leading frequency axis; the output axis moves to the end
        out = np.tensordot(out, back, axes=([0], [0]))
    return out.real


def reconstruct_multimode(M, kind: str = "classical", out_grid: Grid1D | None = None, cutoff: int = 32):
    """Invert a multimode tomogram.

    ``classical``: ``chi(k) = xi(1, k)`` from the center-of-mass tomogram is
    sampled on a Cartesian frequency grid and Fourier transformed back onto
    ``out_grid`` along every axis (at most two modes). ``quantum-product``:
    each factor is inverted to a density matrix on its own.

    Returns:
        ``(out_grid, values)`` with axes ``(q1, p1, ...)`` for ``classical``;
        a list of Fock density matrices for ``quantum-product``.
    """
    state = M.state
    if kind == "quantum-product":
        if not state.is_product:
            raise ValueError("quantum reconstruction needs a declared product state")
        return [reconstruct_density_matrix(f, cutoff) for f in M.factors]
    if kind != "classical":
        raise ValueError("kind must be 'classical' or 'quantum-product'")
    if state.mode_count > MAX_QUANTUM_MODES:
        raise ValueError("classical reconstruction supports at most two modes")
    out_grid = out_grid or make_grid(-4.0, 4.0, 20)
    cm = M if isinstance(M, CenterOfMassTomogram) else CenterOfMassTomogram(state)
    return out_grid, _cartesian_inverse(cm, 2 * state.mode_count, out_grid)


@dataclass(frozen=True)
class MultimodeEntropyReport:
    """``S_x + S_p - N ln(pi e)`` for a product of pure modes."""

    mode_count: int
    S_x: float
    S_p: float

    @property
    def residual(self) -> float:
        return self.S_x + self.S_p - self.mode_count * LN_PI_E

    def ok(self, tol: float = 1e-3) -> bool:
        return self.residual >= -tol

    def line(self) -> str:
        return report.line(N=self.mode_count, S_x=self.S_x, S_p=self.S_p, residual=self.residual)


def multimode_entropy_check(state: MultimodeState, N: int | None = None) -> MultimodeEntropyReport:
    """Position plus momentum entropy of a product of pure modes against ``N ln(pi e)``.

    The joint position (momentum) density of a product factorizes, so its
    entropy is the sum of the per-mode entropies.
    """
    if state.kind != "product-pure":
        raise ValueError("entropy check needs a product of pure modes")
    n = state.mode_count
    if N is not None and N != n:
        raise ValueError(f"state has {n} modes, expected {N}")
    if n > MAX_CLASSICAL_MODES:
        raise ValueError("at most three modes")
    sx = sp = 0.0
    for psi in state.payloads:
        a, b = position_momentum_entropies(psi)
        sx += a
        sp += b
    return MultimodeEntropyReport(n, sx, sp)
