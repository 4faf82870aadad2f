"""Random instance generation and a batch benchmark runner.

Instances are drawn deterministically from (seed, index): the system matrix
is rescaled to a uniform random spectral radius in [0.3, 0.97] and redrawn
until it is diagonalizable; the quadratic part is M^T M (convex kinds) or
-M^T M - 1e-3 I (concave kinds); initial sets are random boxes or random
point clouds. Concave kinds require boxes.
"""

from __future__ import annotations

import concurrent.futures
import enum
import os
import time
import tracemalloc
from dataclasses import dataclass

import numpy as np

from .errors import GenerationExhausted, NotDiagonalizable, ReachmaxError
from .geometry import Box, VRep
from .linalg import eig_decompose
from .solver import ProblemInstance, SolveStatus, solve

_MAX_MATRIX_ATTEMPTS = 1000
_SEED_MASK = 0xFFFF_FFFF_FFFF_FFFF


class SystemKind(enum.Enum):
    LINEAR = "linear"
    AFFINE = "affine"


class ObjectiveKind(enum.Enum):
    CXH = "cxh"    # convex homogeneous
    CXNH = "cxnh"  # convex non-homogeneous
    CAH = "cah"    # concave homogeneous
    CANH = "canh"  # concave non-homogeneous

    @property
    def convex(self) -> bool:
        return self in (ObjectiveKind.CXH, ObjectiveKind.CXNH)

    @property
    def homogeneous(self) -> bool:
        return self in (ObjectiveKind.CXH, ObjectiveKind.CAH)


@dataclass(eq=False)
class BenchSpec:
    """One benchmark batch: everything needed to regenerate it bit for bit."""

    dim: int
    system_kind: SystemKind
    objective_kind: ObjectiveKind
    set_kind: str = "box"  # "box" or "vertices"
    vertex_count: int | None = None
    instance_count: int = 100
    seed: int = 0
    N: int = 100

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be positive")
        if self.set_kind not in ("box", "vertices"):
            raise ValueError(f"unknown set kind {self.set_kind!r}")
        if self.set_kind == "vertices":
            if not self.objective_kind.convex:
                raise ValueError("concave objectives require box initial sets")
            if self.vertex_count is None or self.vertex_count < 1:
                raise ValueError("vertex sets need a positive vertex count")
        if self.instance_count < 1:
            raise ValueError("instance_count must be positive")
        if self.N < 1:
            raise ValueError("N must be positive")


@dataclass(eq=False)
class InstanceRecord:
    index: int
    status: str
    nu_opt: float | None
    k_opt: int | None
    k_pos: int | None
    K_init: int | None
    K_final: int | None
    iterations: int | None
    time_s: float
    mem_mib: float | None = None


@dataclass(eq=False)
class BenchStats:
    """Aggregate over one batch, following the usual benchmark table columns.

    avg_iter / max_iter are the final stopping rank of the successful runs;
    the gap columns subtract the attaining rank from it. Memory is the
    allocator-level peak per solve, only measured for sequential runs.
    """

    count_c: int
    count_k: int
    count_f: int
    count_error: int
    avg_time_s: float
    avg_mem_mib: float | None
    avg_k_pos: float | None
    max_k_pos: int | None
    avg_iter: float | None
    max_iter: int | None
    avg_gap: float | None
    max_gap: int | None


def random_instance(spec: BenchSpec, index: int) -> ProblemInstance:
    """Deterministic random instance number `index` of the batch."""
    rng = np.random.default_rng([spec.seed & _SEED_MASK, index])
    d = spec.dim

    A = None
    for _ in range(_MAX_MATRIX_ATTEMPTS):
        raw = rng.uniform(-1.0, 1.0, size=(d, d))
        target_rho = rng.uniform(0.3, 0.97)
        measured = float(np.max(np.abs(np.linalg.eigvals(raw))))
        if measured == 0.0:
            continue
        candidate = raw * (target_rho / measured)
        try:
            eig_decompose(candidate)
        except NotDiagonalizable:
            continue
        A = candidate
        break
    if A is None:
        raise GenerationExhausted(f"no diagonalizable matrix after {_MAX_MATRIX_ATTEMPTS} draws")

    b = rng.uniform(-1.0, 1.0, size=d) if spec.system_kind is SystemKind.AFFINE else np.zeros(d)

    M = rng.uniform(-1.0, 1.0, size=(d, d))
    Q = M.T @ M if spec.objective_kind.convex else -(M.T @ M) - 1e-3 * np.eye(d)
    q = np.zeros(d) if spec.objective_kind.homogeneous else rng.uniform(-1.0, 1.0, size=d)

    if spec.set_kind == "box":
        center = rng.uniform(-1.0, 1.0, size=d)
        radius = rng.uniform(0.1, 1.0, size=d)
        xin: Box | VRep = Box(center - radius, center + radius)
    else:
        xin = VRep(rng.uniform(-2.0, 2.0, size=(spec.vertex_count, d)))

    return ProblemInstance(A=A, b=b, Qmat=Q, qvec=q, Xin=xin, N=spec.N)


def _solve_one(spec: BenchSpec, index: int, measure_memory: bool) -> InstanceRecord:
    inst = random_instance(spec, index)
    mem_mib = None
    start = time.perf_counter()
    try:
        if measure_memory:
            tracemalloc.start()
            try:
                report = solve(inst)
                mem_mib = tracemalloc.get_traced_memory()[1] / (1024.0 * 1024.0)
            finally:
                tracemalloc.stop()
        else:
            report = solve(inst)
    except (ReachmaxError, ValueError, np.linalg.LinAlgError) as exc:
        return InstanceRecord(
            index=index,
            status=f"Error:{type(exc).__name__}",
            nu_opt=None,
            k_opt=None,
            k_pos=None,
            K_init=None,
            K_final=None,
            iterations=None,
            time_s=time.perf_counter() - start,
        )
    elapsed = time.perf_counter() - start
    k_init = report.K_trace[0][1] if report.K_trace else None
    k_final = report.K_trace[-1][1] if report.K_trace else None
    return InstanceRecord(
        index=index,
        status=report.status.value,
        nu_opt=report.nu_opt,
        k_opt=report.k_opt,
        k_pos=report.k_pos,
        K_init=k_init,
        K_final=k_final,
        iterations=report.iterations,
        time_s=elapsed,
        mem_mib=mem_mib,
    )


def _thread_count() -> int:
    raw = os.environ.get("REACHMAX_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_bench(spec: BenchSpec) -> tuple[BenchStats, list[InstanceRecord]]:
    """Solve the whole batch and aggregate the table columns.

    Per-instance failures become Error records instead of aborting the batch.
    Parallelism is capped by REACHMAX_THREADS (default 1); memory peaks are
    only meaningful sequentially, so they are omitted for parallel runs.
    """
    threads = _thread_count()
    measure_memory = threads == 1
    indices = range(spec.instance_count)
    if threads == 1:
        records = [_solve_one(spec, i, measure_memory) for i in indices]
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            futures = {pool.submit(_solve_one, spec, i, False): i for i in indices}
            by_index = {futures[f]: f.result() for f in concurrent.futures.as_completed(futures)}
        records = [by_index[i] for i in indices]

    def _mean(values):
        return float(np.mean(values)) if values else None

    kdiag = [r for r in records if r.status == SolveStatus.K_DIAG.value]
    finite_kpos = [r.k_pos for r in records if r.k_pos is not None]
    finals = [r.K_final for r in kdiag if r.K_final is not None]
    gaps = [r.K_final - r.k_opt for r in kdiag if r.K_final is not None and r.k_opt is not None]
    mems = [r.mem_mib for r in records if r.mem_mib is not None]

    stats = BenchStats(
        count_c=sum(r.status == SolveStatus.COROLLARY_ONE.value for r in records),
        count_k=len(kdiag),
        count_f=sum(r.status == SolveStatus.FAILED.value for r in records),
        count_error=sum(r.status.startswith("Error:") for r in records),
        avg_time_s=float(np.mean([r.time_s for r in records])),
        avg_mem_mib=_mean(mems) if measure_memory else None,
        avg_k_pos=_mean(finite_kpos),
        max_k_pos=max(finite_kpos) if finite_kpos else None,
        avg_iter=_mean(finals),
        max_iter=max(finals) if finals else None,
        avg_gap=_mean(gaps),
        max_gap=max(gaps) if gaps else None,
    )
    return stats, records


def vertex_count_of(spec: BenchSpec) -> int:
    """Number of initial-set vertices of every instance in the batch."""
    return 2**spec.dim if spec.set_kind == "box" else int(spec.vertex_count)
