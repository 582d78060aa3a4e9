"""Support points by the convex-concave procedure.

The sample energy objective is a difference of convex functions of the
point set.  Linearizing the concave self term and bounding every remaining
distance ``||y_m - x_i||`` by a quadratic that touches it at the current
iterate gives a separable quadratic majorizer whose minimizer is available
point by point in closed form (a Weiszfeld-type weighted average with a
repulsion term).  Iterating that map is an MM scheme, so the objective never
increases.

``sp_ccp`` iterates against one fixed batch of draws; ``sp_sccp`` redraws
the batch at every iteration (stochastic MM).  Both use Jacobi updates: all
new points are computed from the frozen previous iterate.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from . import _backend
from .dist import DistributionSpec, make_rng, sample
from .energy import as_points
from .exceptions import InvalidInputError, SingularityError

__all__ = [
    "SolverConfig",
    "SolverReport",
    "Termination",
    "majorizer_hq",
    "ccp_map",
    "ccp_maps",
    "check_pairwise_distinct",
    "sp_ccp",
    "sp_sccp",
]

# Seed-stream tags; every random draw in a run is keyed by (seed, tag, counter).
_INIT, _RESAMPLE, _JITTER = 0, 1, 2
_JITTER_SCALE = 1e-6
_MAX_JITTER_ROUNDS = 10


class Termination(str, enum.Enum):
    CONVERGED = "converged"
    MAX_ITERS = "max_iters"
    DISTINCTNESS_VIOLATION = "distinctness_violation"


@dataclass(frozen=True)
class SolverConfig:
    """Solver settings.

    ``move_tol=None`` means ``1e-6`` times the mean per-dimension sample
    standard deviation of the draws.  ``singular_tol`` is relative to the
    same scale: a draw closer than that to the current point is treated as
    coincident with it.
    """

    resample_size: int = 10_000
    max_iters: int = 500
    move_tol: float | None = None
    distinct_tol: float = 0.0
    seed: int = 0
    threads: int = 1
    objective_log: bool = True
    singular_tol: float = 1e-12
    backend: str | None = None

    def __post_init__(self):
        if self.resample_size < 1:
            raise InvalidInputError("resample_size must be >= 1")
        if self.max_iters < 1:
            raise InvalidInputError("max_iters must be >= 1")
        if self.move_tol is not None and not self.move_tol > 0:
            raise InvalidInputError("move_tol must be > 0")
        if not self.distinct_tol >= 0:
            raise InvalidInputError("distinct_tol must be >= 0")
        if self.threads < 1:
            raise InvalidInputError("threads must be >= 1")


@dataclass
class SolverReport:
    iterations: int = 0
    objective_trace: list[float] = field(default_factory=list)
    final_move: float = float("nan")
    termination: Termination = Termination.MAX_ITERS
    elapsed_seconds: float = 0.0
    jitter_events: int = 0
    singular_terms: int = 0

    def summary(self) -> str:
        obj = f"{self.objective_trace[-1]:.6g}" if self.objective_trace else "n/a"
        return (f"iterations={self.iterations} termination={self.termination.value} "
                f"final_move={self.final_move:.3g} objective={obj} "
                f"jitters={self.jitter_events} seconds={self.elapsed_seconds:.3f}")


def _check_triple(x_prev, y):
    x_prev = as_points(x_prev, "x_prev")
    y = as_points(y, "y")
    if x_prev.shape[1] != y.shape[1]:
        raise InvalidInputError("x_prev and y differ in dimension")
    return x_prev, y


def majorizer_hq(x, x_prev, y) -> float:
    """Quadratic majorizer of the sample energy objective at ``x_prev``, evaluated at ``x``.

    Equal to the objective when ``x == x_prev`` and no smaller anywhere.
    Requires ``x_prev`` pairwise distinct and disjoint from ``y``.
    """
    x_prev, y = _check_triple(x_prev, y)
    x = as_points(x, "x")
    if x.shape != x_prev.shape:
        raise InvalidInputError("x and x_prev must have the same shape")
    n, big_n = x.shape[0], y.shape[0]
    d_prev = cdist(x_prev, y)
    if (d_prev == 0).any():
        i, m = np.argwhere(d_prev == 0)[0]
        raise SingularityError(f"x_prev[{i}] coincides with y[{m}]", (int(i), int(m)))
    d_new_sq = cdist(x, y, "sqeuclidean")
    convex = (2.0 / (n * big_n)) * float(np.sum(d_new_sq / (2 * d_prev) + d_prev / 2))

    dxx = cdist(x_prev, x_prev)
    np.fill_diagonal(dxx, np.inf)
    if n > 1 and (dxx == 0).any():
        i, j = np.argwhere(dxx == 0)[0]
        raise SingularityError(f"x_prev[{i}] coincides with x_prev[{j}]", (int(i), int(j)))
    diff = x_prev[:, None, :] - x_prev[None, :, :]
    unit = diff / dxx[:, :, None]
    step = x - x_prev
    lin = 2.0 * float(np.einsum("ik,ijk->", step, unit))
    np.fill_diagonal(dxx, 0.0)
    concave = (float(dxx.sum()) + lin) / n**2
    return convex - concave


def ccp_map(i: int, x_prev, y) -> np.ndarray:
    """Closed-form minimizer of the majorizer in point ``i``.

    Raises :class:`SingularityError` naming the offending pair if ``x_prev[i]``
    coincides with a draw or with another point.
    """
    x_prev, y = _check_triple(x_prev, y)
    n, big_n = x_prev.shape[0], y.shape[0]
    if not 0 <= i < n:
        raise IndexError(i)
    xi = x_prev[i]
    dy = np.sqrt(((y - xi) ** 2).sum(axis=1))
    if (dy == 0).any():
        m = int(np.flatnonzero(dy == 0)[0])
        raise SingularityError(f"x_prev[{i}] coincides with y[{m}]", (i, m))
    others = np.delete(np.arange(n), i)
    diff = xi - x_prev[others]
    dx = np.sqrt((diff**2).sum(axis=1))
    if (dx == 0).any():
        j = int(others[np.flatnonzero(dx == 0)[0]])
        raise SingularityError(f"x_prev[{i}] coincides with x_prev[{j}]", (i, j))
    rep = (diff / dx[:, None]).sum(axis=0)
    wy = (y / dy[:, None]).sum(axis=0)
    return ((big_n / n) * rep + wy) / (1.0 / dy).sum()


def ccp_maps(x_prev, y, threads: int = 1, backend: str | None = None) -> np.ndarray:
    """All maps at once via the kernel backend, with the same strict singularity rules."""
    x_prev, y = _check_triple(x_prev, y)
    res = _backend.sweep(x_prev, y, 0.0, threads, backend)
    if (res["eta"] > 0).any():
        i = int(np.flatnonzero(res["eta"] > 0)[0])
        m = int(np.flatnonzero(cdist(x_prev[i:i + 1], y)[0] == 0)[0])
        raise SingularityError(f"x_prev[{i}] coincides with y[{m}]", (i, m))
    if x_prev.shape[0] > 1 and (res["mind"] == 0).any():
        i = int(np.flatnonzero(res["mind"] == 0)[0])
        j = int(np.flatnonzero(cdist(x_prev[i:i + 1], x_prev)[0] == 0)[0])
        if j == i:
            j = int(np.flatnonzero(cdist(x_prev[i:i + 1], x_prev)[0] == 0)[1])
        raise SingularityError(f"x_prev[{i}] coincides with x_prev[{j}]", (i, j))
    big_n, n = y.shape[0], x_prev.shape[0]
    return (res["wy"] + (big_n / n) * res["rep"]) / res["w"][:, None]


def check_pairwise_distinct(x, tol: float = 0.0) -> bool:
    """True iff every pair of distinct indices is more than ``tol`` apart."""
    x = as_points(x)
    if x.shape[0] < 2:
        return True
    return bool(_backend.sweep(x, x[:1], 0.0)["mind"].min() > tol)


def _update(x, res, big_n):
    """Apply the maps, with the Vardi-Zhang step for points sitting on a draw.

    Draws coincident with ``x_i`` are dropped from the weighted average; the
    step toward the reduced map is then shortened by ``eta / ||R||`` (and
    cancelled when ``||R|| <= eta``, i.e. ``x_i`` is already optimal in its own
    coordinates), which keeps the MM descent guarantee.
    """
    n = x.shape[0]
    num = res["wy"] + (big_n / n) * res["rep"]
    w = res["w"]
    new = np.empty_like(x)
    ok = w > 0
    new[ok] = num[ok] / w[ok, None]
    new[~ok] = x[~ok]
    sing = np.flatnonzero((res["eta"] > 0) & ok)
    if sing.size:
        resid = num[sing] - w[sing, None] * x[sing]
        r = np.sqrt((resid**2).sum(axis=1))
        eta = res["eta"][sing].astype(float)
        stay = np.ones_like(r)
        np.divide(eta, r, out=stay, where=r > eta)
        new[sing] = (1.0 - stay)[:, None] * new[sing] + stay[:, None] * x[sing]
    return new


def _objective(res, n, big_n):
    return 2.0 * float(np.sum(res["cross"])) / (n * big_n) - float(np.sum(res["selfsum"])) / n**2


def _colliding(x, tol):
    """Indices ``i`` having some ``j < i`` within ``tol`` (the later member of each pair)."""
    if x.shape[0] < 2:
        return np.empty(0, dtype=int)
    mind = _backend.sweep(x, x[:1], 0.0)["mind"]
    cand = np.flatnonzero(mind <= tol)
    hits = [i for i in cand if (cdist(x[i:i + 1], x[:i])[0] <= tol).any()]
    return np.array(hits, dtype=int)


class _Jitter:
    def __init__(self, seed, scale):
        self.seed = seed
        self.scale = scale
        self.count = 0

    def __call__(self, x, idx):
        rng = make_rng([self.seed, _JITTER, self.count])
        x = x.copy()
        x[idx] += _JITTER_SCALE * self.scale * rng.standard_normal((len(idx), x.shape[1]))
        self.count += 1
        return x


def _restore_distinct(x, tol, jitter, report):
    for _ in range(_MAX_JITTER_ROUNDS):
        idx = _colliding(x, tol)
        if idx.size == 0:
            return x, True
        x = jitter(x, idx)
        report.jitter_events += int(idx.size)
    return x, _colliding(x, tol).size == 0


def _scale_of(y):
    if y.shape[0] < 2:
        return 1.0
    s = float(np.mean(y.std(axis=0, ddof=1)))
    return s if s > 0 else 1.0


def _iterate(x, batches, cfg, scale, report):
    """Shared outer loop; ``batches(l)`` returns the draws for iteration ``l``."""
    move_tol = cfg.move_tol if cfg.move_tol is not None else 1e-6 * scale
    eps = cfg.singular_tol * scale
    jitter = _Jitter(cfg.seed, scale)
    n = x.shape[0]
    start = time.perf_counter()
    report.termination = Termination.MAX_ITERS

    x, ok = _restore_distinct(x, cfg.distinct_tol, jitter, report)
    if not ok:
        report.termination = Termination.DISTINCTNESS_VIOLATION
        report.elapsed_seconds = time.perf_counter() - start
        return x

    for it in range(cfg.max_iters):
        y = batches(it)
        res = _backend.sweep(x, y, eps, cfg.threads, cfg.backend)
        if n > 1 and not (res["mind"] > cfg.distinct_tol).all():
            x, ok = _restore_distinct(x, cfg.distinct_tol, jitter, report)
            if not ok:
                report.termination = Termination.DISTINCTNESS_VIOLATION
                break
            res = _backend.sweep(x, y, eps, cfg.threads, cfg.backend)
        if cfg.objective_log:
            report.objective_trace.append(_objective(res, n, y.shape[0]))
        report.singular_terms += int(res["eta"].sum())
        new = _update(x, res, y.shape[0])
        move = float(np.sqrt(((new - x) ** 2).sum(axis=1)).max())
        x = new
        report.iterations = it + 1
        report.final_move = move
        if move < move_tol:
            report.termination = Termination.CONVERGED
            break

    if report.termination is not Termination.DISTINCTNESS_VIOLATION:
        x, ok = _restore_distinct(x, cfg.distinct_tol, jitter, report)
        if not ok:
            report.termination = Termination.DISTINCTNESS_VIOLATION
    if cfg.objective_log and report.termination is not Termination.DISTINCTNESS_VIOLATION:
        y = batches(report.iterations)
        res = _backend.sweep(x, y, eps, cfg.threads, cfg.backend)
        report.objective_trace.append(_objective(res, n, y.shape[0]))
    report.elapsed_seconds = time.perf_counter() - start
    return x


def initial_subsample(y, n: int, seed: int) -> np.ndarray:
    """Draw ``n`` starting points from the rows of ``y``.

    Without replacement when ``n <= N``; otherwise with replacement plus a
    small Gaussian jitter so the points are distinct.
    """
    y = as_points(y, "y")
    rng = make_rng([seed, _INIT])
    big_n = y.shape[0]
    if n <= big_n:
        return y[rng.choice(big_n, size=n, replace=False)].copy()
    x = y[rng.integers(0, big_n, size=n)].copy()
    sd = y.std(axis=0, ddof=1) if big_n > 1 else np.ones(y.shape[1])
    sd = np.where(sd > 0, sd, 1.0)
    return x + 1e-6 * sd * rng.standard_normal(x.shape)


def sp_ccp(y, n: int, cfg: SolverConfig | None = None, init=None):
    """Support points for the empirical law of a fixed batch ``y``.

    Returns ``(points, report)``.  ``init`` overrides the random starting
    subsample.
    """
    cfg = cfg or SolverConfig()
    y = as_points(y, "y")
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    if init is None:
        x = initial_subsample(y, n, cfg.seed)
    else:
        x = as_points(init, "init").copy()
        if x.shape != (n, y.shape[1]):
            raise InvalidInputError(f"init must have shape {(n, y.shape[1])}")
    report = SolverReport()
    x = _iterate(x, lambda _l: y, cfg, _scale_of(y), report)
    return x, report


def sp_sccp(spec: DistributionSpec, n: int, cfg: SolverConfig | None = None, init=None):
    """Support points for ``spec``, redrawing ``cfg.resample_size`` draws per iteration.

    Iteration ``l`` draws from a Philox stream keyed by ``(seed, l)``, so runs
    are reproducible and batches are independent.  Convergence is judged on
    point movement only.
    """
    cfg = cfg or SolverConfig()
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    if init is None:
        x = np.array(sample(spec, n, [cfg.seed, _INIT]).draws)
    else:
        x = as_points(init, "init").copy()
        if x.shape != (n, spec.p):
            raise InvalidInputError(f"init must have shape {(n, spec.p)}")
    cache = {}

    def batches(l):
        if l not in cache:
            cache.clear()
            cache[l] = sample(spec, cfg.resample_size, [cfg.seed, _RESAMPLE, l]).draws
        return cache[l]

    report = SolverReport()
    x = _iterate(x, batches, cfg, _scale_of(batches(0)), report)
    return x, report

