"""Shared fixtures and independent oracles for the test suite."""

from __future__ import annotations

import math

import numpy as np

from reachmax import (
    BEYOND_PREFIX,
    INFINITE,
    Box,
    FiniteC0Sequence,
    ObjectiveClass,
    QuadraticObjective,
    classify,
    maximize_concave_qp,
    maximize_convex_vertices,
    partial_sup,
    rank_profile,
    reduce_affine,
    step,
    step_next,
    vertices,
)

# damped oscillator discretized with a small explicit Euler step
OSC_A = np.array([[1.0, 0.01], [-0.01, 0.99]])


def osc_box() -> Box:
    return Box([-1.0, -1.0], [1.0, 1.0])


def osc_eigvec_basis() -> np.ndarray:
    """Hand-picked (non-unit-norm) eigenvector basis of OSC_A with first row (1, 1)."""
    s3 = 1j * math.sqrt(3.0)
    return np.array([[1.0, 1.0], [(s3 - 1.0) / 2.0, -(s3 + 1.0) / 2.0]])


# ---------------------------------------------------------------------------
# reference sequences with known rank profiles


def hump_seq(n: int = 41) -> np.ndarray:
    """Negative start, single interior peak, slow decay to 0+."""
    k = np.arange(n, dtype=float)
    return (1.6 * k - 1.6) / (0.08 * k * k + 0.5)


def plateau_seq(n: int = 41) -> np.ndarray:
    """Integer-floored hump: the maximum is attained on a plateau of ranks."""
    k = np.arange(n, dtype=float)
    return np.floor((1.2 * k - 2.0) / (0.04 * k * k + 0.5))


def strictly_negative_seq(n: int = 41) -> np.ndarray:
    """Oscillating, strictly negative, tending to zero from below."""
    k = np.arange(n, dtype=float)
    return -4.0 * np.abs(np.sin((0.4 * k + 0.5) * np.pi)) / (0.04 * k + 1.0)


def touch_zero_seq(n: int = 41) -> np.ndarray:
    """Nonpositive with exact zeros at every fifth index.

    sin(0.4*(k+1)*pi) vanishes exactly when 2*(k+1) is a multiple of 5; the
    float evaluation must honor those exact zeros or the nonnegativity rank
    would silently disappear.
    """
    out = np.empty(n)
    for k in range(n):
        if (2 * (k + 1)) % 5 == 0:
            s = 0.0
        else:
            s = math.sin(0.4 * (k + 1) * math.pi)
        out[k] = -3.0 * abs(s) / (0.1 * k + 1.0)
    return out


# ---------------------------------------------------------------------------
# random sequences and rank-profile property checks


def random_sequences(count, seed):
    """Mixed-shape sequences: signs, exact zeros, and plateaus all exercised."""
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(1, 60))
        style = rng.integers(0, 4)
        if style == 0:
            terms = rng.normal(size=n)
        elif style == 1:
            terms = -np.abs(rng.normal(size=n))  # nonpositive
        elif style == 2:
            terms = rng.normal(size=n)
            terms[rng.random(size=n) < 0.3] = 0.0  # exact zeros
        else:
            terms = np.round(rng.normal(size=n) * 3.0)  # heavy ties, plateaus
        yield FiniteC0Sequence(terms)


def rank_order_value(rank, n):
    """Map a rank to a point on the extended number line for inequality checks.

    A beyond-prefix rank is exactly n under zero extension (the first padded
    index is its witness); an infinite rank has no witness at all.
    """
    if rank is BEYOND_PREFIX:
        return n
    if rank is INFINITE:
        return math.inf
    return rank


def check_profile_properties(u: FiniteC0Sequence) -> None:
    """Assert every structural identity of a rank profile; raises on violation."""
    p = rank_profile(u)
    n = len(u)
    t = u.terms

    # equivalences between emptiness of the index sets
    assert (p.k_geq is BEYOND_PREFIX) == (p.K_geq is BEYOND_PREFIX)
    assert (p.k_gt is INFINITE) == (p.K_gt is INFINITE)
    assert (p.K_gt is INFINITE) == (p.sup_value == 0.0)

    # rank inequalities
    k_geq = rank_order_value(p.k_geq, n)
    k_gt = rank_order_value(p.k_gt, n)
    cap_geq = rank_order_value(p.K_geq, n)
    cap_gt = rank_order_value(p.K_gt, n)
    assert k_geq <= k_gt
    assert k_geq <= cap_geq
    assert k_gt <= cap_gt
    assert cap_geq <= cap_gt
    if isinstance(p.k_gt, int):
        assert p.k_gt <= cap_geq

    # argmax identities
    if isinstance(p.K_geq, int):
        assert p.argmax_set, "a finite dominance rank implies an attained supremum"
        assert min(p.argmax_set) == p.K_geq
    if isinstance(p.K_gt, int):
        assert p.sup_value > 0.0
        assert max(p.argmax_set) == p.K_gt
    if not p.argmax_set:
        assert p.sup_value == 0.0
    for i in p.argmax_set:
        assert t[i] == p.sup_value

    # prefix supremum saturates at the dominance rank
    k0 = p.K_geq if isinstance(p.K_geq, int) else n
    for k in (k0, k0 + 3, n + 5):
        assert partial_sup(u, 0, k) == p.sup_value


# ---------------------------------------------------------------------------
# brute-force optimization oracles


def grid_points(lower, upper, per_axis: int) -> np.ndarray:
    axes = [np.linspace(lo, up, per_axis) for lo, up in zip(lower, upper)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def grid_max(value_many, lower, upper, per_axis: int = 33) -> float:
    """Plain dense grid maximum; exact for convex objectives (corners included)."""
    return float(np.max(value_many(grid_points(lower, upper, per_axis))))


def refined_grid_max(value_many, lower, upper, per_axis: int = 41, stages: int = 4) -> float:
    """Grid maximum with successive window refinement around the incumbent.

    Sound for concave objectives: the maximizer of a concave function lies
    within one cell of the grid argmax, so shrinking the window keeps it.
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    lo, up = lower.copy(), upper.copy()
    best = -np.inf
    for _ in range(stages):
        pts = grid_points(lo, up, per_axis)
        vals = value_many(pts)
        i = int(np.argmax(vals))
        best = max(best, float(vals[i]))
        h = (up - lo) / (per_axis - 1)
        lo = np.maximum(lower, pts[i] - 2.0 * h)
        up = np.minimum(upper, pts[i] + 2.0 * h)
    return best


def trajectory_max(inst, horizon: int) -> float:
    """Maximum of the objective along exact system trajectories.

    Iterates x <- A x + b from every vertex of the original initial set and
    takes the best objective value seen over ranks 0..horizon. For convex
    objectives this equals the true reachable-set maximum over those ranks.
    """
    X = vertices(inst.Xin)
    best = -np.inf
    for _ in range(horizon + 1):
        W = X @ inst.Qmat
        vals = np.einsum("ij,ij->i", W, X) + X @ inst.qvec
        best = max(best, float(np.max(vals)))
        X = X @ inst.A.T + inst.b
    return best


def nu_prefix(inst, kmax: int) -> tuple[np.ndarray, float]:
    """Per-rank optima nu_0..nu_kmax in reduced coordinates, plus the offset."""
    red = reduce_affine(inst)
    base = QuadraticObjective(red.Qmat, red.qvec_reduced, 0.0)
    klass = classify(base)
    s = step(base, red.A, 0)
    out = np.empty(kmax + 1)
    if klass is ObjectiveClass.CONVEX_PSD:
        V = vertices(red.Xwork)
        for k in range(kmax + 1):
            out[k] = maximize_convex_vertices(s, V)[0]
            s = step_next(s)
    else:
        for k in range(kmax + 1):
            out[k] = maximize_concave_qp(s, red.Xwork)[0]
            s = step_next(s)
    return out, red.offset


def concave_box_max_kkt(obj: QuadraticObjective, lower, upper) -> float:
    """Exact maximum of a concave quadratic over a box by stationarity patterns.

    Enumerates every lower/upper/free activity pattern, solves the free-block
    stationarity system, keeps feasible candidates. Exact up to linear solves
    for negative definite curvature (all patterns have a unique candidate).
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    d = lower.size
    best = -np.inf
    for code in range(3**d):
        pattern = []
        c = code
        for _ in range(d):
            pattern.append(c % 3)
            c //= 3
        pattern = np.array(pattern)
        x = np.where(pattern == 0, lower, upper).astype(float)
        free = pattern == 2
        if np.any(free):
            Qff = obj.Qmat[np.ix_(free, free)]
            rhs = -(obj.qvec[free] + 2.0 * obj.Qmat[np.ix_(free, ~free)] @ x[~free])
            try:
                x[free] = np.linalg.solve(2.0 * Qff, rhs)
            except np.linalg.LinAlgError:
                continue
            if np.any(x[free] < lower[free] - 1e-12) or np.any(x[free] > upper[free] + 1e-12):
                continue
        best = max(best, obj.value(x))
    return best
