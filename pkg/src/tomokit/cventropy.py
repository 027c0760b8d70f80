"""Differential entropies, tomographic entropies, dispersion matrices and uncertainty checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import report
from .cvstates import DensityMatrixCV, PhaseSpaceDensity, fock_amplitudes
from .cvtomo import SymplecticTomogram, symplectic_tomogram
from .numkernel import WaveFunction, fourier_momentum, make_grid

__all__ = [
    "DispersionMatrix",
    "EntropicURReport",
    "RenyiURReport",
    "UncertaintyReport",
    "differential_entropy",
    "renyi_differential_entropy",
    "position_momentum_entropies",
    "tomographic_entropy",
    "entropic_ur_check",
    "renyi_ur_check",
    "phase_space_marginals",
    "dispersion_matrix",
    "uncertainty_tests",
    "DEFAULT_Q_VALUES",
]

NORM_TOL = 1e-4
TINY = 1e-300
DEFAULT_Q_VALUES = (0.1, 0.25, 0.5, 0.75, 0.9)
LN_PI_E = float(np.log(np.pi * np.e))


def _check_density(p: np.ndarray, spacing: float) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.min() < -1e-12:
        raise ValueError("density must be nonnegative")
    norm = p.sum() * spacing
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"unnormalized density (integral {norm:.6g})")
    return np.maximum(p, 0.0)


def _shannon(p: np.ndarray, spacing: float) -> float:
    p = np.where(p < TINY, 0.0, p)
    logs = np.log(np.where(p > 0, p, 1.0))
    return float(-np.sum(p * logs) * spacing)


def differential_entropy(density, spacing: float) -> float:
    """Shannon entropy ``-int p ln p`` of a sampled density (``0 ln 0 = 0``).

    Raises:
        ValueError: negative or unnormalized input (tolerance 1e-4).
    """
    return _shannon(_check_density(density, spacing), spacing)


def renyi_differential_entropy(density, spacing: float, q: float) -> float:
    """Renyi entropy ``ln(int p^q) / (1 - q)`` for ``q > 0``, ``q != 1``."""
    if q <= 0:
        raise ValueError("Renyi order must be positive")
    if q == 1:
        raise ValueError("Renyi order 1 is the Shannon entropy")
    p = _check_density(density, spacing)
    p = np.where(p < TINY, 0.0, p)
    return float(np.log(np.sum(p**q) * spacing) / (1.0 - q))


def position_momentum_entropies(psi: WaveFunction) -> tuple[float, float]:
    """Entropies of ``|psi(x)|^2`` and of the momentum density ``|psi~(p)|^2``."""
    h = psi.grid.spacing
    sx = differential_entropy(psi.density(), h)
    sp = differential_entropy(fourier_momentum(psi).density(), h)
    return sx, sp


def tomographic_entropy(M, mu: float, nu: float) -> float:
    """Entropy ``-int M(X, mu, nu) ln M(X, mu, nu) dX``.

    The X grid is the tomogram's grid stretched by ``|(mu, nu)|`` so that a
    rescaled direction sees the whole (rescaled) support.
    """
    M = symplectic_tomogram(M)
    s = float(np.hypot(mu, nu))
    g = M.xgrid
    xg = make_grid(s * g.lower, s * g.upper, g.count)
    vals = np.maximum(M.evaluate(xg.points, mu, nu), 0.0)
    return _shannon(vals, xg.spacing)


def _row_entropies(M: SymplecticTomogram, thetas: np.ndarray) -> np.ndarray:
    rows = np.maximum(M.rows(thetas), 0.0)
    return np.array([_shannon(r, M.xgrid.spacing) for r in rows])


@dataclass(frozen=True)
class EntropicURReport:
    """Per-angle entropy sums ``S(t) + S(t + pi/2) - ln(pi e)``."""

    thetas: np.ndarray
    S: np.ndarray
    S_conj: np.ndarray

    @property
    def residuals(self) -> np.ndarray:
        return self.S + self.S_conj - LN_PI_E

    def ok(self, tol: float = 1e-4) -> bool:
        return bool(self.residuals.min() >= -tol)

    def lines(self) -> list[str]:
        return [
            report.line(theta=t, S=a, S_conj=b, residual=r)
            for t, a, b, r in zip(self.thetas, self.S, self.S_conj, self.residuals)
        ]


def entropic_ur_check(state, thetas: Sequence[float]) -> EntropicURReport:
    """Evaluate the entropic uncertainty sum for conjugate quadratures at each angle.

    Quantum states satisfy ``S(t) + S(t + pi/2) >= ln(pi e)``; classical
    inputs may violate it and the violation is reported, not raised.
    """
    M = symplectic_tomogram(state)
    t = np.asarray(thetas, dtype=float)
    return EntropicURReport(t, _row_entropies(M, t), _row_entropies(M, t + 0.5 * np.pi))


def _renyi_residual(w: np.ndarray, w_conj: np.ndarray, h: float, q: float) -> float:
    a = 1.0 / (1.0 - q)
    b = 1.0 / (1.0 + q)
    left = (q - 1.0) * np.log(np.sum(w_conj**a) * h) + (q + 1.0) * np.log(np.sum(w**b) * h)
    right = 0.5 * ((q - 1.0) * np.log(np.pi * (1.0 - q)) + (q + 1.0) * np.log(np.pi * (1.0 + q)))
    return float(left - right)


@dataclass(frozen=True)
class RenyiURReport:
    """Renyi uncertainty residuals at one angle for several orders ``q``."""

    theta: float
    q_values: np.ndarray
    residuals: np.ndarray

    def ok(self, tol: float = 1e-3) -> bool:
        return bool(self.residuals.min() >= -tol)

    def lines(self) -> list[str]:
        return [report.line(q=q, residual=r) for q, r in zip(self.q_values, self.residuals)]


def renyi_ur_check(state, theta: float = 0.0, q_values: Sequence[float] = DEFAULT_Q_VALUES) -> RenyiURReport:
    """Renyi-family uncertainty condition for the quadratures at ``theta`` and ``theta + pi/2``.

    For ``q`` in (0, 1) the orders ``1/(1-q)`` and ``1/(1+q)`` form a
    conjugate pair and the residual
    ``(q-1) ln int w_conj^(1/(1-q)) + (q+1) ln int w^(1/(1+q))
    - [(q-1) ln(pi(1-q)) + (q+1) ln(pi(1+q))]/2`` is nonnegative for
    quantum states. Dividing by ``q`` recovers the Shannon residual as
    ``q -> 0``.

    Raises:
        ValueError: some ``q`` is outside (0, 1).
    """
    qs = np.asarray(q_values, dtype=float)
    if qs.size == 0 or qs.min() <= 0 or qs.max() >= 1:
        raise ValueError("each q must lie in (0, 1)")
    M = symplectic_tomogram(state)
    rows = np.maximum(M.rows(np.array([theta, theta + 0.5 * np.pi])), 0.0)
    h = M.xgrid.spacing
    res = np.array([_renyi_residual(rows[0], rows[1], h, q) for q in qs])
    return RenyiURReport(float(theta), qs, res)


def phase_space_marginals(f: PhaseSpaceDensity):
    """Position and momentum marginals of a classical density and their entropies.

    Returns:
        ``(Pq, Pp, Sq, Sp)``.
    """
    v = np.asarray(f.values)
    hq, hp = f.qgrid.spacing, f.pgrid.spacing
    pq = v.sum(axis=1) * hp
    pp = v.sum(axis=0) * hq
    return pq, pp, differential_entropy(pq, hq), differential_entropy(pp, hp)


@dataclass(frozen=True)
class DispersionMatrix:
    """Covariances ordered ``(p1, q1[, p2, q2])``."""

    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        e = np.array(self.entries, dtype=float)
        if e.shape not in ((2, 2), (4, 4)):
            raise ValueError("dispersion matrix must be 2x2 or 4x4")
        if np.abs(e - e.T).max() > 1e-10:
            raise ValueError("dispersion matrix must be symmetric")
        if np.diag(e).min() < 0:
            raise ValueError("variances must be nonnegative")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def _classical_moments(f: PhaseSpaceDensity) -> np.ndarray:
    v = np.asarray(f.values)
    w = v * f.qgrid.spacing * f.pgrid.spacing
    q = f.qgrid.points[:, None]
    p = f.pgrid.points[None, :]
    mq, mp = np.sum(w * q), np.sum(w * p)
    spp = np.sum(w * (p - mp) ** 2)
    sqq = np.sum(w * (q - mq) ** 2)
    spq = np.sum(w * (p - mp) * (q - mq))
    return np.array([[spp, spq], [spq, sqq]])


def _quantum_moments(rho: np.ndarray) -> np.ndarray:
    n = rho.shape[0]
    # two extra levels keep quadratic operators exact on the truncated block
    big = n + 2
    a = np.diag(np.sqrt(np.arange(1, big)), 1)
    q = (a + a.T) / np.sqrt(2.0)
    p = (a - a.T) / (1j * np.sqrt(2.0))
    r = np.zeros((big, big), dtype=complex)
    r[:n, :n] = rho

    def ev(op):
        return np.trace(r @ op).real

    mq, mp = ev(q), ev(p)
    spp = ev(p @ p) - mp * mp
    sqq = ev(q @ q) - mq * mq
    spq = 0.5 * ev(p @ q + q @ p) - mp * mq
    return np.array([[spp, spq], [spq, sqq]])


def _single_mode_dispersion(source) -> np.ndarray:
    if isinstance(source, PhaseSpaceDensity):
        return _classical_moments(source)
    if isinstance(source, DensityMatrixCV):
        return _quantum_moments(np.asarray(source.matrix))
    if isinstance(source, WaveFunction):
        amps = fock_amplitudes(source)
        amps = amps / np.linalg.norm(amps)
        return _quantum_moments(np.outer(amps, amps.conj()))
    raise TypeError(f"unsupported source {type(source).__name__}")


def dispersion_matrix(source, modes: int | None = None) -> DispersionMatrix:
    """Variances and covariances of the quadratures.

    Args:
        source: ``PhaseSpaceDensity``, ``DensityMatrixCV`` or ``WaveFunction``
            (one mode); a two-element sequence of those (product of two
            modes); or any object exposing ``dispersion()`` (e.g. a two-mode
            classical density).
        modes: Expected number of modes; checked when given.

    Returns:
        The ``DispersionMatrix`` in ``(p1, q1[, p2, q2])`` order.
    """
    if hasattr(source, "dispersion"):
        entries = np.asarray(source.dispersion())
    elif isinstance(source, (list, tuple)):
        if len(source) != 2:
            raise ValueError("product sources must have two modes")
        entries = np.zeros((4, 4))
        entries[:2, :2] = _single_mode_dispersion(source[0])
        entries[2:, 2:] = _single_mode_dispersion(source[1])
    else:
        entries = _single_mode_dispersion(source)
    out = DispersionMatrix(entries)
    if modes is not None and out.dim != 2 * modes:
        raise ValueError(f"source has {out.dim // 2} modes, expected {modes}")
    return out


@dataclass(frozen=True)
class UncertaintyReport:
    """Named pass/fail conditions with the quantity each one tested."""

    mode: str
    checks: dict
    values: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def lines(self) -> list[str]:
        return [report.line(check=k, value=self.values[k], ok=v) for k, v in self.checks.items()]


def _symplectic_form(dim: int) -> np.ndarray:
    # -i [R_j, R_k] for R = (p, q): [p, q] = -i
    block = np.array([[0.0, -1.0], [1.0, 0.0]])
    return np.kron(np.eye(dim // 2), block)


def uncertainty_tests(sigma: DispersionMatrix, mode: str = "quantum", tol: float = 1e-9) -> UncertaintyReport:
    """Check the classical or quantum constraints on a dispersion matrix.

    Classical: nonnegative variances, Cauchy-Schwarz for each pair of one
    mode, and for two modes nonnegative determinant and leading 3x3 minor.
    Quantum: ``sigma_qq sigma_pp - sigma_qp^2 >= 1/4`` per mode and, for two
    modes, positivity of ``sigma + (i/2) Omega``.
    """
    e = sigma.entries
    checks: dict = {}
    values: dict = {}
    n_modes = sigma.dim // 2
    for k in range(n_modes):
        blk = e[2 * k : 2 * k + 2, 2 * k : 2 * k + 2]
        det = float(np.linalg.det(blk))
        if mode == "classical":
            values[f"var_p{k + 1}"] = float(blk[0, 0])
            checks[f"var_p{k + 1}"] = blk[0, 0] >= -tol
            values[f"var_q{k + 1}"] = float(blk[1, 1])
            checks[f"var_q{k + 1}"] = blk[1, 1] >= -tol
            values[f"det{k + 1}"] = det
            checks[f"det{k + 1}"] = det >= -tol
        elif mode == "quantum":
            values[f"det{k + 1}"] = det
            checks[f"det{k + 1}"] = det >= 0.25 - tol
        else:
            raise ValueError("mode must be 'classical' or 'quantum'")
    if n_modes == 2:
        if mode == "classical":
            values["det"] = float(np.linalg.det(e))
            checks["det"] = values["det"] >= -tol
            values["minor3"] = float(np.linalg.det(e[:3, :3]))
            checks["minor3"] = values["minor3"] >= -tol
        else:
            aug = e + 0.5j * _symplectic_form(4)
            values["augmented_min_eig"] = float(np.linalg.eigvalsh(aug).min())
            checks["augmented_min_eig"] = values["augmented_min_eig"] >= -tol
    checks = {k: bool(v) for k, v in checks.items()}
    return UncertaintyReport(mode, checks, values)
