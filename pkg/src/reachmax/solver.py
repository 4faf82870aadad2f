"""End-to-end solver: affine reduction, positivity search, envelope-driven main loop.

The problem is to maximize x^T Q x + q^T x over every state reachable by
x_{k+1} = A x_k + b from a polytope of initial conditions, for a convergent
diagonalizable A and a convex or strictly concave quadratic. Affine systems
are first turned linear by recentering at the fixed point b~ = (I - A)^-1 b;
the recentred problem has linear coefficient 2 Q b~ + q, working set
X^in - b~, and a constant offset added back only when reporting.

In reduced coordinates the per-rank optimal values nu_k tend to zero, so the
search runs in three phases: an early exit when nu_0 dominates the decay
envelope; a bounded scan for the first strictly positive nu_k (failing after
N ranks); then a loop up to the stopping rank K derived from the best value
seen, shrinking K each time the incumbent improves.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .bounds import SpectralData, build_spectral_data, corollary_one_holds, k_diag
from .errors import NotConvergent, SingularShift, UnsupportedObjective
from .geometry import Box, Polytope, VRep, translate, vertices
from .linalg import SpectralDecomposition, eig_decompose, matrix_power_step, spectral_radius_check
from .qpcore import (
    ObjectiveClass,
    QuadraticObjective,
    SteppedObjective,
    classify,
    maximize_concave_qp,
    maximize_convex_vertices,
)

DEFAULT_N = 100


class SolveStatus(enum.Enum):
    FAILED = "Failed"
    COROLLARY_ONE = "CorollaryOne"
    K_DIAG = "KDiag"


@dataclass(eq=False)
class ProblemInstance:
    """Problem data: dynamics (A, b), objective (Qmat, qvec), initial set, scan cap N."""

    A: np.ndarray
    b: np.ndarray
    Qmat: np.ndarray
    qvec: np.ndarray
    Xin: Polytope
    N: int = DEFAULT_N

    def __post_init__(self):
        self.A = np.atleast_2d(np.asarray(self.A, dtype=float))
        d = self.A.shape[0]
        if self.A.shape != (d, d):
            raise ValueError(f"A must be square, got shape {self.A.shape}")
        self.b = np.atleast_1d(np.asarray(self.b, dtype=float))
        self.Qmat = np.atleast_2d(np.asarray(self.Qmat, dtype=float))
        self.qvec = np.atleast_1d(np.asarray(self.qvec, dtype=float))
        if self.b.shape != (d,) or self.qvec.shape != (d,) or self.Qmat.shape != (d, d):
            raise ValueError("A, b, Q, q dimensions are inconsistent")
        if not isinstance(self.Xin, Polytope):
            raise ValueError("Xin must be a Box or a VRep polytope")
        if self.Xin.dim != d:
            raise ValueError("initial set dimension does not match A")
        for arr in (self.A, self.b, self.Qmat, self.qvec):
            if not np.all(np.isfinite(arr)):
                raise ValueError("problem data must be finite")
        self.N = int(self.N)
        if self.N < 1:
            raise ValueError("N must be a positive integer")
        if not np.any(self.b) and _is_origin_only(self.Xin):
            raise ValueError("a linear system needs an initial set other than {0}")

    @property
    def dim(self) -> int:
        return self.A.shape[0]


@dataclass(eq=False)
class ReducedInstance:
    """Linear reformulation around the fixed point b_tilde = (I - A)^-1 b."""

    A: np.ndarray
    Qmat: np.ndarray
    qvec_reduced: np.ndarray
    Xwork: Polytope
    offset: float
    b_tilde: np.ndarray


@dataclass(eq=False)
class SolveReport:
    """Outcome of a solve in original coordinates.

    K_trace records every stopping-rank computation as (rank, K) pairs, the
    first entry being the initial K; iterations counts per-rank optimizations.
    For the Failed status only k-independent fields are meaningful.
    """

    status: SolveStatus
    nu_opt: float | None
    x_opt: np.ndarray | None
    k_opt: int | None
    k_pos: int | None
    K_trace: list[tuple[int, int]] = field(default_factory=list)
    iterations: int = 0


def _is_origin_only(P: Polytope) -> bool:
    if isinstance(P, Box):
        return bool(np.all(P.lower == 0.0) and np.all(P.upper == 0.0))
    if isinstance(P, VRep):
        return bool(np.all(P.points == 0.0))
    return False


def reduce_affine(inst: ProblemInstance) -> ReducedInstance:
    """Recenter the system at its fixed point; the identity reduction when b = 0."""
    d = inst.dim
    if not np.any(inst.b):
        return ReducedInstance(
            A=inst.A,
            Qmat=inst.Qmat,
            qvec_reduced=inst.qvec,
            Xwork=inst.Xin,
            offset=0.0,
            b_tilde=np.zeros(d),
        )
    shift = np.eye(d) - inst.A
    cond = np.linalg.cond(shift)
    if not np.isfinite(cond) or cond > 1e12:
        raise SingularShift(f"I - A has condition {cond:.3e}")
    b_tilde = np.linalg.solve(shift, inst.b)
    return ReducedInstance(
        A=inst.A,
        Qmat=inst.Qmat,
        qvec_reduced=2.0 * inst.Qmat @ b_tilde + inst.qvec,
        Xwork=translate(inst.Xin, b_tilde),
        offset=float(b_tilde @ inst.Qmat @ b_tilde + inst.qvec @ b_tilde),
        b_tilde=b_tilde,
    )


class _NuEvaluator:
    """Sequential evaluator of the per-rank optima in reduced coordinates.

    Matrix powers advance one multiplication per rank, never recomputed from
    scratch, so a full run over ranks 0..K costs K products and identical
    inputs give bit-identical value sequences.
    """

    def __init__(self, red: ReducedInstance, klass: ObjectiveClass, qp_gap_tol: float = 1e-10):
        if klass not in (ObjectiveClass.CONVEX_PSD, ObjectiveClass.STRICTLY_CONCAVE_ND):
            raise UnsupportedObjective(f"cannot evaluate objective class {klass.value}")
        self._red = red
        self._klass = klass
        self._qp_gap_tol = qp_gap_tol
        base = QuadraticObjective(red.Qmat, red.qvec_reduced, 0.0)
        d = base.dim
        self._stepped = SteppedObjective(base, red.A, 0, np.eye(d))
        if klass is ObjectiveClass.CONVEX_PSD:
            self._verts = vertices(red.Xwork)
        else:
            if not isinstance(red.Xwork, Box):
                raise UnsupportedObjective("a strictly concave objective needs a box initial set")
            self._verts = None

    def value(self, k: int) -> tuple[float, np.ndarray]:
        """nu_k and a maximizing point, both in reduced coordinates."""
        s = self._stepped
        if k < s.k:
            base = s.base
            s = SteppedObjective(base, self._red.A, 0, np.eye(base.dim))
        while s.k < k:
            s = SteppedObjective(s.base, s.A, s.k + 1, matrix_power_step(s.power, s.A))
        self._stepped = s
        if self._klass is ObjectiveClass.CONVEX_PSD:
            return maximize_convex_vertices(s, self._verts)
        return maximize_concave_qp(s, self._red.Xwork, gap_tol=self._qp_gap_tol)


def nu_at(red: ReducedInstance, k: int, klass: ObjectiveClass) -> tuple[float, np.ndarray]:
    """One per-rank optimum (no offset), evaluated by sequential matrix powers."""
    return _NuEvaluator(red, klass).value(k)


def _validated_parts(
    inst: ProblemInstance,
) -> tuple[SpectralDecomposition, ReducedInstance, ObjectiveClass]:
    dec = eig_decompose(inst.A)
    if not spectral_radius_check(dec):
        raise NotConvergent(f"spectral radius {dec.rho} is not strictly below 1")
    red = reduce_affine(inst)
    klass = classify(QuadraticObjective(red.Qmat, red.qvec_reduced, 0.0))
    if klass is ObjectiveClass.UNSUPPORTED:
        raise UnsupportedObjective("objective must be convex or strictly concave with nonzero curvature")
    return dec, red, klass


def solve(
    inst: ProblemInstance,
    *,
    positivity_margin: float = 0.0,
    qp_gap_tol: float = 1e-10,
) -> SolveReport:
    """Exact optimal value and maximizer over the reachable values set.

    positivity_margin replaces the exact nu_k <= 0 test of the positivity
    scan by nu_k <= margin; the default 0 is the faithful comparison.
    """
    dec, red, klass = _validated_parts(inst)

    # degenerate screens whose answer is known without any optimization
    concave = klass is ObjectiveClass.STRICTLY_CONCAVE_ND
    if _is_origin_only(red.Xwork) or (concave and not np.any(red.qvec_reduced)):
        # supremum equals the offset, approached at the fixed point
        return SolveReport(
            status=SolveStatus.K_DIAG,
            nu_opt=red.offset,
            x_opt=red.b_tilde.copy(),
            k_opt=0,
            k_pos=None,
            K_trace=[],
            iterations=0,
        )
    if concave and isinstance(red.Xwork, VRep):
        raise UnsupportedObjective("a strictly concave objective needs a box initial set")

    sd = build_spectral_data(dec, red.Qmat, red.qvec_reduced, red.Xwork)
    ev = _NuEvaluator(red, klass, qp_gap_tol)

    nu_k, y_k = ev.value(0)
    iterations = 1
    if corollary_one_holds(sd, nu_k):
        return SolveReport(
            status=SolveStatus.COROLLARY_ONE,
            nu_opt=nu_k + red.offset,
            x_opt=y_k + red.b_tilde,
            k_opt=0,
            k_pos=0,
            K_trace=[],
            iterations=iterations,
        )

    k = 0
    while k < inst.N and nu_k <= positivity_margin:
        k += 1
        nu_k, y_k = ev.value(k)
        iterations += 1
    if k == inst.N and nu_k <= positivity_margin:
        return SolveReport(
            status=SolveStatus.FAILED,
            nu_opt=None,
            x_opt=None,
            k_opt=None,
            k_pos=None,
            K_trace=[],
            iterations=iterations,
        )

    k_pos = k
    K = k_diag(sd, nu_k)
    K_trace = [(k, K)]
    nu_opt, y_opt, k_opt = nu_k, y_k, k
    while k < K:
        k += 1
        nu_k, y_k = ev.value(k)
        iterations += 1
        if nu_opt < nu_k:
            nu_opt, y_opt, k_opt = nu_k, y_k, k
            K = k_diag(sd, nu_k)
            K_trace.append((k, K))

    return SolveReport(
        status=SolveStatus.K_DIAG,
        nu_opt=nu_opt + red.offset,
        x_opt=y_opt + red.b_tilde,
        k_opt=k_opt,
        k_pos=k_pos,
        K_trace=K_trace,
        iterations=iterations,
    )


def brute_force(inst: ProblemInstance, horizon: int) -> tuple[float, int, np.ndarray]:
    """Direct maximum of the per-rank optima over ranks 0..horizon.

    No envelope, no stopping logic: every rank is evaluated and the best
    (smallest attaining rank on ties) is returned with the offset included
    and the maximizer in original coordinates.
    """
    if horizon < 0:
        raise ValueError("horizon must be a natural number")
    _, red, klass = _validated_parts(inst)
    ev = _NuEvaluator(red, klass)
    best_val, best_y = ev.value(0)
    best_k = 0
    for k in range(1, horizon + 1):
        val, y = ev.value(k)
        if val > best_val:
            best_val, best_y, best_k = val, y, k
    return best_val + red.offset, best_k, best_y + red.b_tilde


def k_pos_screen(red: ReducedInstance) -> bool:
    """Cheap certificate that the rank-0 value is already strictly positive.

    True when one of three structural conditions holds on the reduced data:
    zero linear part with positive definite curvature; zero linear part,
    positive semidefinite singular curvature and an initial set with interior;
    nonzero linear part, positive semidefinite curvature and 0 strictly inside
    the initial set. False means inconclusive, never a negative certificate.
    """
    if _is_origin_only(red.Xwork):
        return False
    Q = np.asarray(red.Qmat, dtype=float)
    evals = np.linalg.eigvalsh(Q)
    lmin = float(evals[0])
    psd = lmin >= -1e-9
    if not psd:
        return False
    q_zero = not np.any(red.qvec_reduced)
    if q_zero and lmin > 1e-9:
        return True
    box = red.Xwork if isinstance(red.Xwork, Box) else None
    if q_zero and lmin <= 1e-9:
        return box is not None and bool(np.all(box.lower < box.upper))
    return box is not None and bool(np.all(box.lower < 0.0) and np.all(box.upper > 0.0))
