"""Sombor matrices, a cyclic Jacobi eigensolver and quotient-matrix tools."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graphs import SimpleGraph
from .groups import VertexPartition

__all__ = [
    "ConvergenceError",
    "DimensionLimitError",
    "NeighborhoodConditionError",
    "SpectrumSummary",
    "QuotientMatrix",
    "sombor_matrix",
    "eigen_sym",
    "eigh_jacobi",
    "cluster_spectrum",
    "default_cluster_tol",
    "spectral_radius",
    "equitable_quotient",
    "char_poly",
    "eval_poly",
    "lemma21_predict",
    "matrix_to_csv",
    "matrix_from_csv",
]

SWEEP_CAP = 64
CHAR_POLY_MAX_DIM = 32
DEFAULT_EIGEN_TOL = 1e-14


class ConvergenceError(ArithmeticError):
    def __init__(self, residual: float, sweeps: int):
        super().__init__(f"Jacobi did not converge after {sweeps} sweeps (off-diagonal norm {residual:.3e})")
        self.residual = residual
        self.sweeps = sweeps


class DimensionLimitError(ValueError):
    pass


class NeighborhoodConditionError(ValueError):
    """The vertex set does not share one external neighbourhood."""


def _as_symmetric(m) -> np.ndarray:
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    if not np.array_equal(a, a.T):
        raise ValueError("matrix is not exactly symmetric")
    return a


def sombor_matrix(g: SimpleGraph) -> np.ndarray:
    d = g.degrees().astype(float)
    weights = np.sqrt(d[:, None] ** 2 + d[None, :] ** 2)
    m = np.where(g.adjacency, weights, 0.0)
    m = np.maximum(m, m.T)  # bitwise symmetric regardless of rounding order
    m.setflags(write=False)
    return m


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(off * off)))


def eigh_jacobi(m, tol: float = DEFAULT_EIGEN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalization.

    Returns ascending eigenvalues and the accumulated orthogonal matrix whose
    columns are the matching eigenvectors.  Stops once the off-diagonal
    Frobenius norm drops below ``tol * ||m||_F``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    a = _as_symmetric(m).copy()
    n = a.shape[0]
    v = np.eye(n)
    if n == 0:
        return np.zeros(0), v
    threshold = tol * float(np.linalg.norm(a))
    sweeps = 0
    off = _off_norm(a)
    while off > threshold:
        if sweeps == SWEEP_CAP:
            raise ConvergenceError(off, sweeps)
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(apq) < 1e-150 * abs(diff):
                    t = apq / diff  # tiny angle; tau would overflow
                else:
                    tau = diff / (2.0 * apq)
                    t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                rp, rq = a[p].copy(), a[q].copy()
                a[p], a[q] = c * rp - s * rq, s * rp + c * rq
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p], a[:, q] = c * cp - s * cq, s * cp + c * cq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p], v[:, q] = c * vp - s * vq, s * vp + c * vq
        off = _off_norm(a)
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def eigen_sym(m, tol: float = DEFAULT_EIGEN_TOL) -> list[float]:
    return eigh_jacobi(m, tol)[0].tolist()


def spectral_radius(eigs: Sequence[float]) -> float:
    return max((abs(x) for x in eigs), default=0.0)


def default_cluster_tol(eigs: Sequence[float]) -> float:
    return 1e-6 * max(1.0, spectral_radius(eigs))


@dataclass(frozen=True)
class SpectrumSummary:
    pairs: tuple[tuple[float, int], ...]
    cluster_tol: float
    dim: int

    @property
    def values(self) -> list[float]:
        return [v for v, _ in self.pairs]

    def multiplicity_near(self, value: float, tol: float) -> int:
        return sum(k for v, k in self.pairs if abs(v - value) <= tol)

    def to_dict(self) -> dict:
        return {
            "pairs": [{"value": v, "multiplicity": k} for v, k in self.pairs],
            "clusterTol": self.cluster_tol,
            "dim": self.dim,
        }


def cluster_spectrum(eigs: Sequence[float], cluster_tol: float | None = None) -> SpectrumSummary:
    eigs = list(eigs)
    if any(b < a for a, b in zip(eigs, eigs[1:])):
        raise ValueError("eigenvalues must be sorted ascending")
    tol = default_cluster_tol(eigs) if cluster_tol is None else cluster_tol
    pairs: list[tuple[float, int]] = []
    total, count = 0.0, 0
    for x in eigs:
        if count and abs(x - total / count) <= tol:
            total += x
            count += 1
            continue
        if count:
            pairs.append((total / count, count))
        total, count = x, 1
    if count:
        pairs.append((total / count, count))
    return SpectrumSummary(tuple(pairs), tol, len(eigs))


@dataclass(frozen=True)
class QuotientMatrix:
    entries: np.ndarray
    equitable: bool
    max_row_sum_deviation: float

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def equitable_quotient(m, p: VertexPartition, tol: float = 1e-9) -> QuotientMatrix:
    a = np.asarray(m, dtype=float)
    if p.size != a.shape[0]:
        raise ValueError(f"partition covers {p.size} vertices but the matrix has dimension {a.shape[0]}")
    k = len(p)
    q = np.zeros((k, k))
    worst = 0.0
    for i, ci in enumerate(p.classes):
        for j, cj in enumerate(p.classes):
            sums = a[np.ix_(ci, cj)].sum(axis=1)
            mean = float(sums.mean())
            q[i, j] = mean
            worst = max(worst, float(np.abs(sums - mean).max()))
    q.setflags(write=False)
    return QuotientMatrix(q, worst <= tol, worst)


def char_poly(m) -> list[float]:
    """Monic coefficients of det(xI - m), highest power first (Faddeev-LeVerrier)."""
    a = np.asarray(m, dtype=float)
    n = a.shape[0]
    if n > CHAR_POLY_MAX_DIM:
        raise DimensionLimitError(f"characteristic polynomial is limited to dimension {CHAR_POLY_MAX_DIM}, got {n}")
    coeffs = [1.0]
    mk = np.zeros_like(a)
    eye = np.eye(n)
    for k in range(1, n + 1):
        mk = a @ mk + coeffs[-1] * eye
        coeffs.append(-float(np.trace(a @ mk)) / k)
    return coeffs


def eval_poly(coeffs: Sequence[float], x: float) -> float:
    acc = 0.0
    for c in coeffs:
        acc = acc * x + c
    return acc


def poly_scale(coeffs: Sequence[float], x: float) -> float:
    """Sum of |c_k||x|^k, the natural magnitude for a relative residual."""
    return eval_poly([abs(c) for c in coeffs], abs(x))


def lemma21_predict(g: SimpleGraph, s: Iterable[int]) -> tuple[float, int] | None:
    members = sorted(set(s))
    if not members:
        raise ValueError("vertex set must be non-empty")
    inside = set(members)
    outer = [g.neighbors(u) - inside for u in members]
    if any(o != outer[0] for o in outer[1:]):
        bad = next(u for u, o in zip(members, outer) if o != outer[0])
        raise NeighborhoodConditionError(
            f"vertex {bad} has a different neighbourhood outside the set than vertex {members[0]}"
        )
    t = len(members)
    if g.is_independent(members):
        return 0.0, t - 1
    if g.is_clique(members):
        d = int(g.degrees()[members[0]])
        return -d * math.sqrt(2.0), t - 1
    return None


def matrix_to_csv(m) -> str:
    a = np.asarray(m, dtype=float)
    out = io.StringIO()
    out.write(f"{a.shape[0]}\n")
    for row in a:
        out.write(",".join(f"{x:.17g}" for x in row) + "\n")
    return out.getvalue()


def matrix_from_csv(text: str) -> np.ndarray:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix document")
    dim = int(lines[0])
    rows = [[float(x) for x in ln.split(",")] for ln in lines[1:]]
    if len(rows) != dim or any(len(r) != dim for r in rows):
        raise ValueError(f"expected {dim} rows of {dim} values")
    return np.array(rows, dtype=float).reshape(dim, dim)
