"""The randomized row-action solvers and the conjugate-gradient baseline.

Iteration convention: a run performs exactly ``config.max_iterations``
projection steps, drawing exactly that many indices from its stream up front
(so index consumption is identical across solver variants and unaffected by
early exit). Iterate x_k is the state after k steps.

Residuals are evaluated every ``residual_stride`` steps (default: m for the
randomized solvers, 1 for the CG baseline); these checks are O(nnz) and are
not charged to the modeled operation count. Early exit on ``target_residual``
is likewise only detected at evaluation points.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .costmodel import auto_cycle_length, modeled_ops
from .errors import BreakdownError, InvalidCycleError
from .linalg import RowMatrix, as_vector, density, residual_norm
from .schedule import build_schedule
from .trace import Trace, TracePoint


@dataclass
class SolverConfig:
    """Run-length, cycle, tracing and termination knobs shared by the solvers."""

    max_iterations: int
    cycle_length: int | str = "auto"
    residual_stride: int | None = None
    target_residual: float | None = None

    def __post_init__(self):
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be nonnegative")
        if self.residual_stride is not None and self.residual_stride < 1:
            raise ValueError("residual_stride must be >= 1")
        if self.cycle_length != "auto":
            if not isinstance(self.cycle_length, (int, np.integer)) or self.cycle_length < 1:
                raise InvalidCycleError(f"cycle_length must be 'auto' or a positive integer, got {self.cycle_length!r}")


def _evaluation_points(K, stride, capture_at):
    ks = set(range(stride, K + 1, stride))
    ks.add(K)
    if capture_at:
        for k in capture_at:
            if not 0 <= k <= K:
                raise ValueError(f"capture point {k} outside [0, {K}]")
            ks.add(int(k))
    ks.discard(0)
    return sorted(ks)


def _run(A, b, x0, config, *, advance, probe, capture=None, solver, idx,
         x_star=None, weighted=None, ops_per_iter=0.0, ops_offset=0.0,
         capture_at=None, meta=None):
    """Common segment loop: advance the kernel between evaluation points."""
    K = config.max_iterations
    stride = config.residual_stride if config.residual_stride is not None else max(1, A.m)
    target = config.target_residual
    capture_set = set(int(k) for k in capture_at) if capture_at else set()

    trace = Trace(solver=solver, meta=dict(meta or {}))
    trace.meta.setdefault("ops_per_iter", ops_per_iter)

    def record(k):
        x_cur = probe()
        resid = residual_norm(A, x_cur, b)
        err = float(np.sum((x_cur - x_star) ** 2)) if x_star is not None else None
        wgt = weighted() if weighted is not None else None
        trace.points.append(TracePoint(k, ops_offset + k * ops_per_iter, resid, err, wgt))
        if k in capture_set:
            snap = capture() if capture is not None else {"x": x_cur.copy()}
            trace.captures[k] = snap
        return resid

    resid = record(0)
    prev = 0
    if not (target is not None and resid <= target):
        for k in _evaluation_points(K, stride, capture_at):
            advance(idx[prev:k], prev)
            prev = k
            resid = record(k)
            if target is not None and resid <= target:
                break
    return probe().copy(), trace


def solve_rk(A: RowMatrix, b, x0, config: SolverConfig, stream, *,
             x_star=None, capture_at=None, ops_per_iter=None, ops_offset=0.0):
    """Plain randomized row projection: each step projects onto one drawn row."""
    b = as_vector(b, A.m, "b")
    x = as_vector(x0, A.n, "x0").copy()
    idx = stream.next_indices(A.m, config.max_iterations)
    if ops_per_iter is None:
        ops_per_iter = modeled_ops("rk", A.n, density(A).delta)

    dense = A.dense_array()
    if dense is None:
        indptr, indices, data = A.csr_arrays()

        def advance(seg, k0):
            kernels.rk_csr(indptr, indices, data, b, A.row_sq_norms, x, seg)
    else:

        def advance(seg, k0):
            kernels.rk_dense(dense, b, A.row_sq_norms, x, seg)

    return _run(A, b, x0, config, advance=advance, probe=lambda: x, solver="rk",
                idx=idx, x_star=x_star, ops_per_iter=ops_per_iter,
                ops_offset=ops_offset, capture_at=capture_at,
                meta={"seed": stream.seed})


def solve_ark_reference(A: RowMatrix, b, lam, x0, config: SolverConfig, stream, *,
                        x_star=None, spectral=None, capture_at=None,
                        ops_per_iter=None, ops_offset=0.0):
    """Accelerated solver in its three-sequence form.

    Exists as the verification twin of `solve_ark_efficient`; it materializes
    the momentum sequence v explicitly, which the trace can measure in the
    pseudoinverse-weighted norm when spectral data is supplied.
    """
    b = as_vector(b, A.m, "b")
    x = as_vector(x0, A.n, "x0").copy()
    v = x.copy()
    y = np.zeros(A.n)
    K = config.max_iterations
    sched = build_schedule(A.m, lam, K)
    idx = stream.next_indices(A.m, K)
    indptr, indices, data = A.csr_arrays()
    if ops_per_iter is None:
        ops_per_iter = modeled_ops("ark-ref", A.n, density(A).delta)

    def advance(seg, k0):
        kernels.ark_reference_csr(indptr, indices, data, b, A.row_sq_norms,
                                  x, v, y, seg, sched.gamma, sched.alpha, sched.beta, k0)

    weighted = None
    if spectral is not None and x_star is not None:
        Wp = spectral.pseudo_gram_inverse

        def weighted():
            d = v - x_star
            return max(0.0, float(d @ (Wp @ d)))

    def capture():
        return {"x": x.copy(), "y": y.copy(), "v": v.copy()}

    return _run(A, b, x0, config, advance=advance, probe=lambda: x, capture=capture,
                solver="ark-ref", idx=idx, x_star=x_star, weighted=weighted,
                ops_per_iter=ops_per_iter, ops_offset=ops_offset, capture_at=capture_at,
                meta={"seed": stream.seed, "lambda": lam})


def solve_ark_efficient(A: RowMatrix, b, lam, x0, config: SolverConfig, stream, *,
                        x_star=None, capture_at=None, ops_per_iter=None, ops_offset=0.0):
    """Accelerated solver in its two-vector form (same iterates, fewer ops)."""
    b = as_vector(b, A.m, "b")
    x = as_vector(x0, A.n, "x0").copy()
    y = x.copy()
    K = config.max_iterations
    sched = build_schedule(A.m, lam, K)
    idx = stream.next_indices(A.m, K)
    indptr, indices, data = A.csr_arrays()
    if ops_per_iter is None:
        ops_per_iter = modeled_ops("ark", A.n, density(A).delta)

    def advance(seg, k0):
        kernels.ark_efficient_csr(indptr, indices, data, b, A.row_sq_norms,
                                  x, y, seg, sched.gamma, sched.alpha, k0, float(A.m))

    def capture():
        return {"x": x.copy(), "y": y.copy()}

    return _run(A, b, x0, config, advance=advance, probe=lambda: x, capture=capture,
                solver="ark", idx=idx, x_star=x_star, ops_per_iter=ops_per_iter,
                ops_offset=ops_offset, capture_at=capture_at,
                meta={"seed": stream.seed, "lambda": lam})


def solve_sark(A: RowMatrix, b, lam, x0, config: SolverConfig, stream, *,
               x_star=None, capture_at=None, ops_per_iter=None, ops_offset=0.0):
    """Cycle-cached accelerated solver for sparse rows.

    Produces the same iterates as `solve_ark_efficient` on the same stream;
    explicit iterates are rebuilt from the cycle-base representation at every
    evaluation point and at the end of the run.
    """
    b = as_vector(b, A.m, "b")
    K = config.max_iterations
    delta = density(A).delta
    if config.cycle_length == "auto":
        T = auto_cycle_length(delta)
    else:
        T = int(config.cycle_length)
        if T < 1:
            raise InvalidCycleError("cycle length must be >= 1")
    sched = build_schedule(A.m, lam, K)
    idx = stream.next_indices(A.m, K)
    indptr, indices, data = A.csr_arrays()
    if ops_per_iter is None:
        if config.cycle_length == "auto":
            ops_per_iter = modeled_ops("sark", A.n, delta)
        else:
            ops_per_iter = modeled_ops("sark", A.n, delta, T=T)

    n = A.n
    x = as_vector(x0, n, "x0").copy()
    y = x.copy()
    z = np.zeros(n)
    w = np.zeros(n)
    act = np.zeros(n, dtype=np.int64)
    in_act = np.zeros(n, dtype=np.bool_)
    scal = np.array([1.0, 0.0, 0.0, 1.0])
    state = {"t": 0, "act_count": 0}

    def advance(seg, k0):
        state["t"], state["act_count"] = kernels.sark_csr(
            indptr, indices, data, b, A.row_sq_norms, x, y, z, w, act, in_act,
            scal, seg, sched.p, sched.q, sched.r, T, k0, state["t"], state["act_count"])

    def probe():
        return scal[0] * x + scal[1] * y + z

    def capture():
        return {"x": probe().copy(), "y": scal[2] * x + scal[3] * y + w}

    return _run(A, b, x0, config, advance=advance, probe=probe, capture=capture,
                solver="sark", idx=idx, x_star=x_star, ops_per_iter=ops_per_iter,
                ops_offset=ops_offset, capture_at=capture_at,
                meta={"seed": stream.seed, "lambda": lam, "cycle_length": T})


def solve_cgne(A: RowMatrix, b, x0, config: SolverConfig, *,
               x_star=None, capture_at=None, ops_per_iter=None, ops_offset=0.0):
    """Conjugate gradient on the normal equations, without forming A^T A.

    Two-term recurrence with the residual re-evaluated explicitly every 50
    iterations to damp drift. Deterministic; takes no index stream.
    """
    b = as_vector(b, A.m, "b")
    x = as_vector(x0, A.n, "x0").copy()
    K = config.max_iterations
    stride = config.residual_stride if config.residual_stride is not None else 1
    target = config.target_residual
    if ops_per_iter is None:
        ops_per_iter = modeled_ops("cgne", A.n, density(A).delta, m=A.m)
    capture_set = set(int(k) for k in capture_at) if capture_at else set()

    trace = Trace(solver="cgne", meta={"ops_per_iter": ops_per_iter})

    r = b - A.matvec(x)
    g = A.matvec_t(r)
    p = g.copy()
    gamma = float(g @ g)

    def record(k):
        resid = float(np.linalg.norm(r))
        err = float(np.sum((x - x_star) ** 2)) if x_star is not None else None
        trace.points.append(TracePoint(k, ops_offset + k * ops_per_iter, resid, err))
        if k in capture_set:
            trace.captures[k] = {"x": x.copy()}
        return resid

    resid = record(0)
    if not (target is not None and resid <= target):
        for k in range(1, K + 1):
            if gamma == 0.0:
                if trace.points[-1].k != k - 1:
                    record(k - 1)
                break
            q = A.matvec(p)
            curv = float(q @ q)
            if curv < 1e-300:
                raise BreakdownError(
                    f"direction curvature underflowed at iteration {k} (curv={curv:g})")
            al = gamma / curv
            x += al * p
            if k % 50 == 0:
                r = b - A.matvec(x)
            else:
                r -= al * q
            g = A.matvec_t(r)
            gnew = float(g @ g)
            p = g + (gnew / gamma) * p
            gamma = gnew
            if k % stride == 0 or k == K or k in capture_set:
                resid = record(k)
                if target is not None and resid <= target:
                    break
    return x.copy(), trace
