"""Initial-set polytopes: boxes, explicit vertex lists, translation, convex-form maxima."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionTooLarge, NotConvexForm

# Corner enumeration refuses boxes with more than this many vertices.
DEFAULT_VERTEX_CAP = 2**22
# User-supplied vertex lists are deduplicated within this tolerance.
DEDUP_TOL = 1e-12
# Tolerance-based deduplication is quadratic; fall back to exact-row
# deduplication above this point count.
_DEDUP_PAIRWISE_LIMIT = 4096


class Polytope:
    """Base for the supported initial-set representations."""

    @property
    def dim(self) -> int:
        raise NotImplementedError


@dataclass(eq=False)
class Box(Polytope):
    """Axis-aligned box {x : lower <= x <= upper}, nonempty."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        self.lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        self.upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if self.lower.ndim != 1 or self.lower.shape != self.upper.shape:
            raise ValueError("box bounds must be 1-d vectors of equal length")
        if self.lower.size == 0:
            raise ValueError("box dimension must be positive")
        if not (np.all(np.isfinite(self.lower)) and np.all(np.isfinite(self.upper))):
            raise ValueError("box bounds must be finite")
        if np.any(self.lower > self.upper):
            raise ValueError("empty box: lower > upper in some coordinate")

    @property
    def dim(self) -> int:
        return self.lower.size


@dataclass(eq=False)
class VRep(Polytope):
    """Polytope given as the convex hull of an explicit list of points."""

    points: np.ndarray

    def __post_init__(self):
        self.points = np.atleast_2d(np.asarray(self.points, dtype=float))
        if self.points.ndim != 2 or self.points.shape[0] == 0 or self.points.shape[1] == 0:
            raise ValueError("vertex representation needs at least one point")
        if not np.all(np.isfinite(self.points)):
            raise ValueError("vertices must be finite")

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def _dedup_points(points: np.ndarray, tol: float) -> np.ndarray:
    """Drop duplicate rows, keeping first occurrences in their original order."""
    if points.shape[0] <= 1:
        return points
    if points.shape[0] > _DEDUP_PAIRWISE_LIMIT:
        _, first = np.unique(points, axis=0, return_index=True)
        return points[np.sort(first)]
    kept = np.empty_like(points)
    count = 0
    keep: list[int] = []
    for i, p in enumerate(points):
        if count == 0 or float(np.min(np.max(np.abs(kept[:count] - p), axis=1))) > tol:
            kept[count] = p
            count += 1
            keep.append(i)
    return points[keep]


def vertices(P: Polytope, cap: int = DEFAULT_VERTEX_CAP) -> np.ndarray:
    """All vertices of P as an (m, dim) array in a fixed deterministic order.

    Boxes enumerate their 2^dim corners in lexicographic (lower, upper) order
    per coordinate; vertex lists are returned in stored order, deduplicated
    within DEDUP_TOL.
    """
    if isinstance(P, Box):
        d = P.dim
        if 2**d > cap:
            raise DimensionTooLarge(f"box in dimension {d} would have 2^{d} vertices (cap {cap})")
        idx = np.arange(2**d, dtype=np.int64)
        bits = (idx[:, None] >> np.arange(d - 1, -1, -1)) & 1
        return np.where(bits == 1, P.upper, P.lower).astype(float)
    if isinstance(P, VRep):
        return _dedup_points(P.points, DEDUP_TOL)
    raise TypeError(f"unsupported polytope type {type(P).__name__}")


def translate(P: Polytope, t) -> Polytope:
    """Return the shifted set P - t (the same representation, bounds moved by -t)."""
    t = np.asarray(t, dtype=float)
    if isinstance(P, Box):
        return Box(P.lower - t, P.upper - t)
    if isinstance(P, VRep):
        return VRep(P.points - t)
    raise TypeError(f"unsupported polytope type {type(P).__name__}")


def mu(B, P: Polytope, cap: int = DEFAULT_VERTEX_CAP) -> float:
    """Maximum of the quadratic form x^T Re(B) x over the vertices of P.

    B must be Hermitian with positive semidefinite real part: the maximum of
    a convex form over a polytope is attained at a vertex, which is what makes
    the enumeration exact. A real argument x only sees Re(B).
    """
    B = np.asarray(B, dtype=complex)
    R = np.real(B + B.conj().T) / 2.0
    if float(np.linalg.eigvalsh(R)[0]) < -1e-9:
        raise NotConvexForm("real part of the form has a negative eigenvalue")
    V = vertices(P, cap=cap)
    W = V @ R
    return float(np.max(np.einsum("ij,ij->i", W, V)))
