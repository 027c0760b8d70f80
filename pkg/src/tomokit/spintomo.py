"""Unitary spin tomograms, their entropies, and the inequalities they satisfy."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import report
from .numkernel import BoundViolation, haar_unitaries, haar_unitary

__all__ = [
    "DensityMatrixSpin",
    "SpinTomogram",
    "ObservablePair",
    "spin_tomogram",
    "qft_matrix",
    "eigenbasis_unitary",
    "shannon_tomo_entropy",
    "renyi_tomo_entropy",
    "relative_q_entropy",
    "von_neumann_entropy",
    "quantum_renyi_entropy",
    "min_over_unitaries",
    "measurement_bounds",
    "qft_inequality_check",
    "bipartite_subadditivity",
    "tripartite_ssa",
    "group_average_entropy",
    "partial_trace",
    "qubit_state",
    "pure_spin_state",
    "bell_state",
    "ghz_state",
    "haar_pure_state",
    "haar_mixed_state",
    "maximally_mixed",
]

TOL = 1e-12
MAX_TRIPARTITE_DIM = 16


@dataclass(frozen=True)
class DensityMatrixSpin:
    """``N x N`` density matrix of a spin ``j = (N - 1)/2`` or a composite system."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("density matrix must be square")
        if np.abs(m - m.conj().T).max() > TOL:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > TOL:
            raise ValueError("density matrix trace differs from 1")
        if np.linalg.eigvalsh(m).min() < -TOL:
            raise ValueError("density matrix has a negative eigenvalue")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class SpinTomogram:
    """Probabilities of the spin projections ``m = -j..j`` (index ``m + j``) after ``u``."""

    probabilities: np.ndarray
    unitary: np.ndarray = field(repr=False)

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float)
        if p.min() < -1e-14:
            raise ValueError("tomogram has negative entries")
        if abs(p.sum() - 1.0) > TOL:
            raise ValueError("tomogram is not normalized")
        object.__setattr__(self, "probabilities", p)


@dataclass(frozen=True)
class ObservablePair:
    """Eigenbases (as unitary columns) and eigenvalues of two observables."""

    basisA: np.ndarray
    basisB: np.ndarray
    eigenvaluesA: np.ndarray | None = None
    eigenvaluesB: np.ndarray | None = None

    def __post_init__(self):
        for name in ("basisA", "basisB"):
            b = np.asarray(getattr(self, name), dtype=complex)
            if b.ndim != 2 or b.shape[0] != b.shape[1]:
                raise ValueError(f"{name} must be square")
            if np.abs(b.conj().T @ b - np.eye(b.shape[0])).max() > TOL:
                raise ValueError(f"{name} is not unitary")
            object.__setattr__(self, name, b)
        if self.basisA.shape != self.basisB.shape:
            raise ValueError("bases have different dimensions")

    @classmethod
    def from_operators(cls, A: np.ndarray, B: np.ndarray) -> "ObservablePair":
        va, ua = np.linalg.eigh(A)
        vb, ub = np.linalg.eigh(B)
        return cls(ua, ub, va, vb)


def _probs(w) -> np.ndarray:
    if isinstance(w, SpinTomogram):
        return w.probabilities
    return np.asarray(w, dtype=float)


def _shannon(p: np.ndarray) -> float:
    p = np.clip(p, 0.0, None)
    nz = p[p > 0]
    return float(-np.sum(nz * np.log(nz)))


def _renyi(p: np.ndarray, q: float) -> float:
    if q <= 0:
        raise ValueError("Renyi order must be positive")
    if q == 1:
        return _shannon(p)
    p = np.clip(p, 0.0, None)
    return float(np.log(np.sum(p[p > 0] ** q)) / (1.0 - q))


def _as_rho(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrixSpin):
        return rho.matrix
    return DensityMatrixSpin(rho).matrix


def spin_tomogram(rho, u: np.ndarray) -> SpinTomogram:
    """``w(m, u) = <m| u rho u^dagger |m>``.

    Raises:
        ValueError: ``u`` and ``rho`` have different dimensions.
    """
    r = _as_rho(rho)
    u = np.asarray(u, dtype=complex)
    if u.shape != r.shape:
        raise ValueError(f"dimension mismatch: unitary {u.shape} vs density matrix {r.shape}")
    w = np.einsum("mi,ij,mj->m", u, r, u.conj()).real
    return SpinTomogram(w, u)


def qft_matrix(N: int) -> np.ndarray:
    """Discrete Fourier matrix ``F_jk = a^(jk) / sqrt(N)``, ``a = exp(2 pi i / N)``."""
    if int(N) != N or N < 2:
        raise ValueError("QFT dimension must be an integer >= 2")
    idx = np.arange(int(N))
    # reduce jk mod N before exponentiating to keep the phases exact
    return np.exp(2j * np.pi * (np.outer(idx, idx) % N) / N) / np.sqrt(N)


def eigenbasis_unitary(rho) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (decreasing) and the unitary with the eigenvectors as columns.

    Each eigenvector is phased so that its first nonzero component is real
    and positive. The tomogram at the adjoint of this unitary is the
    eigenvalue vector itself.
    """
    vals, vecs = np.linalg.eigh(_as_rho(rho))
    order = np.argsort(-vals, kind="stable")
    vals, vecs = vals[order], vecs[:, order]
    for k in range(vecs.shape[1]):
        col = vecs[:, k]
        first = np.nonzero(np.abs(col) > 1e-12)[0][0]
        vecs[:, k] = col * (abs(col[first]) / col[first])
    return np.clip(vals, 0.0, None), vecs


def shannon_tomo_entropy(w) -> float:
    """``H = -sum w ln w`` with ``0 ln 0 = 0``."""
    return _shannon(_probs(w))


def renyi_tomo_entropy(w, q: float) -> float:
    """``ln(sum w^q) / (1 - q)`` for ``q > 0``, ``q != 1``."""
    if q <= 0 or q == 1:
        raise ValueError("Renyi order must be positive and different from 1")
    return _renyi(_probs(w), q)


def _ln_q(x: np.ndarray, q: float) -> np.ndarray:
    if q == 1:
        return np.log(x)
    return (x ** (1.0 - q) - 1.0) / (1.0 - q)


def relative_q_entropy(w1, w2, q: float) -> float:
    """``-sum w1 ln_q(w2 / w1)`` over the support of ``w1``.

    Raises:
        ValueError: ``q <= 0`` or ``w2`` vanishes where ``w1`` does not.
    """
    if q <= 0:
        raise ValueError("q must be positive")
    a, b = _probs(w1), _probs(w2)
    if a.shape != b.shape:
        raise ValueError("tomograms have different lengths")
    supp = a > 0
    if np.any(b[supp] <= 0):
        raise ValueError("support violation: second tomogram vanishes where the first does not")
    return float(-np.sum(a[supp] * _ln_q(b[supp] / a[supp], q)))


def von_neumann_entropy(rho) -> float:
    return _shannon(np.linalg.eigvalsh(_as_rho(rho)))


def quantum_renyi_entropy(rho, q: float) -> float:
    return _renyi(np.linalg.eigvalsh(_as_rho(rho)), q)


def _entropy_fn(mode: str, q: float | None):
    if mode == "shannon":
        return _shannon
    if mode == "renyi":
        if q is None or q <= 0 or q == 1:
            raise ValueError("renyi mode needs q > 0, q != 1")
        return lambda p: _renyi(p, q)
    raise ValueError("mode must be 'shannon' or 'renyi'")


def _batched_tomograms(rho: np.ndarray, us: np.ndarray) -> np.ndarray:
    return np.einsum("smi,ij,smj->sm", us, rho, us.conj()).real


def min_over_unitaries(rho, mode: str = "shannon", samples: int = 1000, rng_seed=0, q: float | None = None):
    """Minimum of the tomographic entropy over the unitary group.

    The minimum sits where the tomogram equals the spectrum, giving the
    von Neumann (or quantum Renyi) entropy. Haar samples confirm that no
    sampled unitary goes below it.

    Returns:
        ``(min_value, argmin)`` where ``argmin`` is the adjoint eigenbasis.

    Raises:
        BoundViolation: a sampled entropy lies below the minimum by more
            than 1e-12.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    fn = _entropy_fn(mode, q)
    r = _as_rho(rho)
    vals, vecs = eigenbasis_unitary(r)
    argmin = vecs.conj().T
    value = fn(spin_tomogram(r, argmin).probabilities)
    us = haar_unitaries(r.shape[0], samples, rng_seed)
    sampled = np.array([fn(w) for w in _batched_tomograms(r, us)])
    if sampled.min() < value - TOL:
        raise BoundViolation(f"sampled entropy {sampled.min():.15g} below analytic minimum {value:.15g}")
    return value, argmin


@dataclass(frozen=True)
class MeasurementBoundsReport:
    H_p: float
    H_q: float
    c: float
    deutsch_residual: float
    maassen_uffink_residual: float
    mub_residual: float | None

    @property
    def ok(self) -> bool:
        res = [self.deutsch_residual, self.maassen_uffink_residual]
        if self.mub_residual is not None:
            res.append(self.mub_residual)
        return min(res) >= -TOL

    def line(self) -> str:
        return report.line(
            H_p=self.H_p,
            H_q=self.H_q,
            c=self.c,
            deutsch=self.deutsch_residual,
            maassen_uffink=self.maassen_uffink_residual,
            mub="none" if self.mub_residual is None else self.mub_residual,
        )


def measurement_bounds(pair: ObservablePair, psi) -> MeasurementBoundsReport:
    """Entropic bounds for measuring two observables on a pure state.

    ``p_k = |<a_k|psi>|^2``, ``q_k = |<b_k|psi>|^2`` and ``c`` is the largest
    overlap ``|<a_j|b_k>|``. Residuals are the entropy sum minus the
    Deutsch bound ``-2 ln((1+c)/2)``, the Maassen-Uffink bound ``-2 ln c`` and,
    for unbiased bases (``c = 1/sqrt(N)``), ``ln N``.
    """
    psi = np.asarray(psi, dtype=complex)
    if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
        raise ValueError("psi must be normalized")
    p = np.abs(pair.basisA.conj().T @ psi) ** 2
    qv = np.abs(pair.basisB.conj().T @ psi) ** 2
    c = float(np.abs(pair.basisA.conj().T @ pair.basisB).max())
    hp, hq = _shannon(p), _shannon(qv)
    n = psi.size
    total = hp + hq
    mub = total - np.log(n) if abs(c - 1.0 / np.sqrt(n)) <= TOL else None
    return MeasurementBoundsReport(hp, hq, c, total + 2 * np.log((1 + c) / 2), total + 2 * np.log(c), mub)


@dataclass(frozen=True)
class QFTInequalityReport:
    """Residuals (left side minus ``ln N``) of the Fourier-pair entropic inequalities."""

    renyi_sqrt: float
    renyi_composed: float
    shannon_composed: float
    shannon_sqrt: float
    von_neumann: float

    def values(self) -> dict:
        return {
            "renyi_sqrt": self.renyi_sqrt,
            "renyi_composed": self.renyi_composed,
            "shannon_composed": self.shannon_composed,
            "shannon_sqrt": self.shannon_sqrt,
            "von_neumann": self.von_neumann,
        }

    def ok(self, tol: float = 1e-10) -> bool:
        return min(self.values().values()) >= -tol

    def line(self) -> str:
        return report.line(**self.values())


def fourier_of_sqrt(w: np.ndarray) -> np.ndarray:
    """``w_F(m) = |sum_m' F_mm' sqrt(w(m'))|^2`` (nonnegative square root)."""
    F = qft_matrix(w.size)
    return np.abs(F @ np.sqrt(np.clip(w, 0.0, None))) ** 2


def qft_inequality_check(rho, u: np.ndarray, alpha: float = 1.0, beta: float = 1.0) -> QFTInequalityReport:
    """Evaluate the Fourier-pair entropic inequalities for one tomogram.

    Args:
        rho: Spin density matrix.
        u: Unitary defining the tomogram ``w(m, u)``.
        alpha: Renyi order for ``w``.
        beta: Renyi order for the Fourier partner; ``1/alpha + 1/beta = 2``.

    Returns:
        Residuals for ``R_alpha(w) + R_beta(w_F)``, ``R_alpha(u) + R_beta(Fu)``,
        ``H(u) + H(Fu)``, ``H(u) + H_F(u)`` and, at the minimizing unitary,
        ``S_vN + H(F u0)``, each minus ``ln N``.
    """
    if alpha <= 0 or beta <= 0 or abs(1.0 / alpha + 1.0 / beta - 2.0) > TOL:
        raise ValueError("need alpha, beta > 0 with 1/alpha + 1/beta = 2")
    r = _as_rho(rho)
    n = r.shape[0]
    F = qft_matrix(n)
    ln_n = np.log(n)
    w = spin_tomogram(r, u).probabilities
    wf = fourier_of_sqrt(w)
    w_fu = spin_tomogram(r, F @ u).probabilities
    _, vecs = eigenbasis_unitary(r)
    u0 = vecs.conj().T
    return QFTInequalityReport(
        renyi_sqrt=_renyi(w, alpha) + _renyi(wf, beta) - ln_n,
        renyi_composed=_renyi(w, alpha) + _renyi(w_fu, beta) - ln_n,
        shannon_composed=_shannon(w) + _shannon(w_fu) - ln_n,
        shannon_sqrt=_shannon(w) + _shannon(wf) - ln_n,
        von_neumann=von_neumann_entropy(r) + _shannon(spin_tomogram(r, F @ u0).probabilities) - ln_n,
    )


def partial_trace(rho: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Reduced density matrix on the subsystems listed in ``keep``."""
    dims = list(dims)
    n = len(dims)
    t = np.asarray(rho).reshape(dims + dims)
    keep = sorted(keep)
    drop = [k for k in range(n) if k not in keep]
    letters = "abcdefghijklmnopqrstuvwxyz"
    rows = list(letters[:n])
    cols = list(letters[n : 2 * n])
    for k in drop:
        cols[k] = rows[k]
    out = "".join(rows[k] for k in keep) + "".join(cols[k] for k in keep)
    red = np.einsum("".join(rows) + "".join(cols) + "->" + out, t)
    d = int(np.prod([dims[k] for k in keep]))
    return red.reshape(d, d)


def _check_dims(r: np.ndarray, dims: Sequence[int]) -> None:
    if int(np.prod(dims)) != r.shape[0]:
        raise ValueError(f"dimension mismatch: {tuple(dims)} vs matrix size {r.shape[0]}")


@dataclass(frozen=True)
class SubadditivityReport:
    entropies: dict
    shannon_residual: float
    von_neumann_residual: float

    def ok(self, tol: float = 1e-10) -> bool:
        return min(self.shannon_residual, self.von_neumann_residual) >= -tol

    def line(self) -> str:
        return report.line(**self.entropies, residual=self.shannon_residual, vn_residual=self.von_neumann_residual)


def bipartite_subadditivity(rho12, dims: Sequence[int], u: np.ndarray) -> SubadditivityReport:
    """``H1(u) + H2(u) - H12(u)`` for the joint tomogram reshaped to ``N1 x N2``.

    The von Neumann counterpart ``S1 + S2 - S12`` from partial traces is
    reported alongside; it equals the tomographic value at a product of
    local eigenbases.
    """
    r = _as_rho(rho12)
    _check_dims(r, dims)
    w = spin_tomogram(r, u).probabilities.reshape(dims)
    h12 = _shannon(w.ravel())
    h1 = _shannon(w.sum(axis=1))
    h2 = _shannon(w.sum(axis=0))
    s12 = von_neumann_entropy(r)
    s1 = _shannon(np.linalg.eigvalsh(partial_trace(r, dims, [0])))
    s2 = _shannon(np.linalg.eigvalsh(partial_trace(r, dims, [1])))
    ent = {"H1": h1, "H2": h2, "H12": h12}
    return SubadditivityReport(ent, h1 + h2 - h12, s1 + s2 - s12)


def tripartite_ssa(rho123, dims: Sequence[int], u: np.ndarray) -> SubadditivityReport:
    """``H12(u) + H23(u) - H123(u) - H2(u)`` with the von Neumann analogue."""
    r = _as_rho(rho123)
    if len(dims) != 3:
        raise ValueError("need three subsystem dimensions")
    _check_dims(r, dims)
    if r.shape[0] > MAX_TRIPARTITE_DIM:
        raise ValueError(f"total dimension must be <= {MAX_TRIPARTITE_DIM}")
    w = spin_tomogram(r, u).probabilities.reshape(dims)
    h123 = _shannon(w.ravel())
    h12 = _shannon(w.sum(axis=2).ravel())
    h23 = _shannon(w.sum(axis=0).ravel())
    h2 = _shannon(w.sum(axis=(0, 2)))

    def s(keep):
        return _shannon(np.linalg.eigvalsh(partial_trace(r, dims, keep)))

    vn = s([0, 1]) + s([1, 2]) - von_neumann_entropy(r) - s([1])
    ent = {"H12": h12, "H23": h23, "H123": h123, "H2": h2}
    return SubadditivityReport(ent, h12 + h23 - h123 - h2, vn)


@dataclass(frozen=True)
class GroupAverage:
    """Monte-Carlo Haar averages and their distance to the proven lower bounds."""

    mean: float
    stderr: float
    bound_residual: float
    column_mean: float
    column_stderr: float
    column_residual: float

    def ok(self) -> bool:
        return self.bound_residual >= -3 * self.stderr and self.column_residual >= -3 * self.column_stderr

    def line(self) -> str:
        return report.line(
            mean=self.mean,
            stderr=self.stderr,
            residual=self.bound_residual,
            column_mean=self.column_mean,
            column_residual=self.column_residual,
        )


def group_average_entropy(
    rho, mode: str = "shannon", samples: int = 1000, rng_seed=0, alpha: float = 2.0, beta: float = 2.0 / 3.0
) -> GroupAverage:
    """Haar average of the tomographic entropy with its lower bound.

    ``mode="shannon"`` averages ``H(u)`` against ``ln N / 2``;
    ``mode="renyi-pair"`` averages ``R_alpha(u) + R_beta(u)`` against
    ``ln N``. The column entropy ``-sum_j |u_j1|^2 ln |u_j1|^2`` of the same
    samples is averaged against ``ln N / 2``.
    """
    if samples < 1000:
        raise ValueError("group averages need at least 1000 samples")
    r = _as_rho(rho)
    n = r.shape[0]
    us = haar_unitaries(n, samples, rng_seed)
    ws = _batched_tomograms(r, us)
    if mode == "shannon":
        vals = np.array([_shannon(w) for w in ws])
        bound = 0.5 * np.log(n)
    elif mode == "renyi-pair":
        if alpha <= 0 or beta <= 0 or abs(1.0 / alpha + 1.0 / beta - 2.0) > TOL:
            raise ValueError("need alpha, beta > 0 with 1/alpha + 1/beta = 2")
        vals = np.array([_renyi(w, alpha) + _renyi(w, beta) for w in ws])
        bound = np.log(n)
    else:
        raise ValueError("mode must be 'shannon' or 'renyi-pair'")
    cols = np.array([_shannon(np.abs(u[:, 0]) ** 2) for u in us])
    mean, se = float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(samples))
    cmean, cse = float(cols.mean()), float(cols.std(ddof=1) / np.sqrt(samples))
    return GroupAverage(mean, se, mean - bound, cmean, cse, cmean - 0.5 * np.log(n))


# ---------------------------------------------------------------------------
# state builders


def _clean(m: np.ndarray) -> DensityMatrixSpin:
    m = 0.5 * (m + m.conj().T)
    return DensityMatrixSpin(m / np.trace(m).real)


def maximally_mixed(N: int) -> DensityMatrixSpin:
    return DensityMatrixSpin(np.eye(N) / N)


def qubit_state(a: float, b: float) -> DensityMatrixSpin:
    """Diagonal qubit ``diag(a, b)`` with ``a + b = 1``."""
    if a < 0 or b < 0 or abs(a + b - 1.0) > TOL:
        raise ValueError("qubit weights must be nonnegative and sum to 1")
    return DensityMatrixSpin(np.diag([a, b]).astype(complex))


def pure_spin_state(vec) -> DensityMatrixSpin:
    v = np.asarray(vec, dtype=complex)
    nrm = np.linalg.norm(v)
    if v.ndim != 1 or v.size < 2 or nrm == 0:
        raise ValueError("need a nonzero vector with at least two components")
    v = v / nrm
    return _clean(np.outer(v, v.conj()))


def bell_state() -> DensityMatrixSpin:
    return pure_spin_state([1, 0, 0, 1])


def ghz_state() -> DensityMatrixSpin:
    v = np.zeros(8)
    v[0] = v[7] = 1
    return pure_spin_state(v)


def haar_pure_state(N: int, seed: int = 0) -> DensityMatrixSpin:
    return pure_spin_state(haar_unitary(N, seed)[:, 0])


def haar_mixed_state(N: int, seed: int = 0) -> DensityMatrixSpin:
    """Reduced state of a Haar-random pure state on ``N x N`` (ancilla traced out)."""
    v = haar_unitary(N * N, seed)[:, 0]
    return _clean(partial_trace(np.outer(v, v.conj()), [N, N], [0]))
