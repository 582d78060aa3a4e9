"""Integration benchmarks: test integrands, reference integrals, error summaries.

Errors are ``|mean_i g(x_i) - I|`` against a stored reference ``I``.  The
references are large seeded Monte Carlo estimates kept in
``data/reference_integrals.json`` together with their standard errors.
"""

from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .dist import DistributionSpec, load_samples, sample
from .energy import as_points
from .exceptions import InvalidInputError
from .solver import SolverConfig, sp_sccp

__all__ = [
    "Integrand",
    "ErrorSummary",
    "gapk",
    "osc",
    "borehole",
    "gapk_integrand",
    "osc_integrand",
    "borehole_integrand",
    "integration_error",
    "Reference",
    "compute_reference",
    "load_reference",
    "run_comparison",
    "write_comparison",
    "timing_study",
    "INTEGRANDS",
    "Comparison",
    "reference_key",
    "evaluate_on",
]


def gapk(x, u, alpha):
    """Gaussian peak ``exp(-sum_l alpha_l^2 (x_l - u_l)^2)``; rows of ``x`` are points."""
    x = np.asarray(x, dtype=float)
    return np.exp(-np.sum((np.asarray(alpha) * (x - np.asarray(u))) ** 2, axis=-1))


def osc(x, u1, beta):
    """Damped oscillatory ``exp(-sum beta_l x_l^2) cos(2 pi u1 + sum beta_l x_l)``."""
    x = np.asarray(x, dtype=float)
    beta = np.asarray(beta)
    return np.exp(-np.sum(beta * x**2, axis=-1)) * np.cos(2 * np.pi * u1 + np.sum(beta * x, axis=-1))


def borehole(x):
    """Water flow rate (m^3/yr) through a borehole.

    Columns: rw, r, Tu, Hu, Tl, Hl, L, Kw (same order as
    :func:`supportpoints.dist.borehole_spec`).
    """
    x = np.asarray(x, dtype=float)
    rw, r, tu, hu, tl, hl, length, kw = np.moveaxis(x, -1, 0)
    if np.any(rw <= 0) or np.any(r <= 0) or np.any(length <= 0) or np.any(r <= rw):
        raise ValueError("borehole: radii and length must be positive with r > rw")
    lr = np.log(r / rw)
    return 2 * np.pi * tu * (hu - hl) / (lr * (1 + 2 * length * tu / (lr * rw**2 * kw) + tu / tl))


@dataclass(frozen=True)
class Integrand:
    name: str
    p: int
    func: Callable[[np.ndarray], np.ndarray] = field(repr=False, compare=False)
    params: dict = field(default_factory=dict, compare=False)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.p:
            raise InvalidInputError(f"{self.name} expects dimension {self.p}, got {x.shape[-1]}")
        return self.func(x)


def gapk_integrand(spec: DistributionSpec) -> Integrand:
    u = spec.means
    alpha = np.full(spec.p, 20.0 / spec.p)
    return Integrand("gapk", spec.p, lambda x: gapk(x, u, alpha), {"u": u, "alpha": alpha})


def osc_integrand(spec: DistributionSpec) -> Integrand:
    u1 = float(spec.means[0])
    beta = np.full(spec.p, 5.0 / spec.p)
    return Integrand("osc", spec.p, lambda x: osc(x, u1, beta), {"u1": u1, "beta": beta})


def borehole_integrand() -> Integrand:
    return Integrand("borehole", 8, borehole)


INTEGRANDS = {"gapk": gapk_integrand, "osc": osc_integrand,
              "borehole": lambda spec: borehole_integrand()}


def integration_error(g: Callable, x, reference: float) -> float:
    return abs(float(np.mean(g(as_points(x)))) - reference)


@dataclass(frozen=True)
class Reference:
    value: float
    se: float
    draws: int
    seed: int


def compute_reference(g: Callable, spec: DistributionSpec, draws: int = 10**7,
                      seed: int = 20170401, chunk: int = 10**6) -> Reference:
    """Seeded Monte Carlo estimate of ``E g(X)`` with its standard error."""
    total = 0.0
    total_sq = 0.0
    done = 0
    k = 0
    while done < draws:
        m = min(chunk, draws - done)
        vals = g(sample(spec, m, [seed, k]).draws)
        total += math.fsum(vals)
        total_sq += math.fsum(vals * vals)
        done += m
        k += 1
    mean = total / draws
    var = max(total_sq / draws - mean * mean, 0.0) * draws / (draws - 1)
    return Reference(mean, math.sqrt(var / draws), draws, seed)


def _reference_table() -> dict:
    text = resources.files("supportpoints").joinpath("data/reference_integrals.json").read_text()
    return json.loads(text)


def reference_key(integrand: str, spec: DistributionSpec) -> str:
    return f"{integrand}|{spec.label}"


def load_reference(integrand: str, spec: DistributionSpec) -> Reference:
    table = _reference_table()
    key = reference_key(integrand, spec)
    if key not in table:
        raise KeyError(f"no stored reference for {key!r}; use compute_reference")
    return Reference(**table[key])


@dataclass(frozen=True)
class ErrorSummary:
    method: str
    n: int
    trials: int
    mean_abs_error: float
    q25: float
    q75: float

    @classmethod
    def from_errors(cls, method: str, n: int, errors: Sequence[float], log: bool = False):
        e = np.asarray(errors, dtype=float)
        if log:
            e = np.log10(e)
        q25, q75 = np.quantile(e, [0.25, 0.75])
        return cls(method, n, len(e), float(e.mean()), float(q25), float(q75))


@dataclass
class Comparison:
    records: list[tuple[str, int, int, float]]
    summaries: list[ErrorSummary]
    reference: Reference

    def summary(self, method: str, n: int) -> ErrorSummary:
        for s in self.summaries:
            if s.method == method and s.n == n:
                return s
        raise KeyError((method, n))


def run_comparison(spec: DistributionSpec, g: Integrand, n_grid: Sequence[int], trials: int,
                   seed: int = 0, reference: Reference | None = None,
                   cfg: SolverConfig | None = None, externals: Sequence = (),
                   log: bool = False) -> Comparison:
    """Compare support points, replicated Monte Carlo and external point sets.

    Support points come from :func:`sp_sccp` (one deterministic run per
    ``n``).  Each Monte Carlo trial ``t`` at size ``n`` draws from a stream
    keyed by ``(seed, n, t)``.  An external file contributes its first ``n``
    rows at each grid size.
    """
    if trials < 1:
        raise InvalidInputError("trials must be >= 1")
    if g.p != spec.p:
        raise InvalidInputError(f"integrand dimension {g.p} != distribution dimension {spec.p}")
    if reference is None:
        reference = load_reference(g.name, spec)
    cfg = replace(cfg or SolverConfig(), seed=seed)
    ext = []
    for path in externals:
        pts = load_samples(path).draws
        if pts.shape[1] != spec.p:
            raise InvalidInputError(f"{path}: dimension {pts.shape[1]} != {spec.p}")
        if pts.shape[0] < max(n_grid):
            raise InvalidInputError(f"{path}: {pts.shape[0]} rows < largest n {max(n_grid)}")
        ext.append((f"external:{Path(path).stem}", pts))

    records = []
    summaries = []
    ref = reference.value
    for n in n_grid:
        x, _ = sp_sccp(spec, n, cfg)
        e = integration_error(g, x, ref)
        records.append(("support_points", n, 0, e))
        summaries.append(ErrorSummary.from_errors("support_points", n, [e], log))

        errs = [integration_error(g, sample(spec, n, [seed, n, t]).draws, ref) for t in range(trials)]
        records.extend(("mc", n, t, v) for t, v in enumerate(errs))
        summaries.append(ErrorSummary.from_errors("mc", n, errs, log))

        for name, pts in ext:
            e = integration_error(g, pts[:n], ref)
            records.append((name, n, 0, e))
            summaries.append(ErrorSummary.from_errors(name, n, [e], log))
    return Comparison(records, summaries, reference)


def write_comparison(result: Comparison, out_dir) -> tuple[Path, Path]:
    """Write ``errors.csv`` (per trial) and ``summary.csv``; returns both paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    per = out / "errors.csv"
    summ = out / "summary.csv"
    with per.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["method", "n", "trial", "abs_error"])
        for method, n, t, e in result.records:
            w.writerow([method, n, t, f"{e:.17g}"])
    with summ.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["method", "n", "mean_abs_error", "q25", "q75"])
        for s in result.summaries:
            w.writerow([s.method, s.n, f"{s.mean_abs_error:.17g}", f"{s.q25:.17g}", f"{s.q75:.17g}"])
    return per, summ


def timing_study(make_spec: Callable[[int], DistributionSpec], sizes: Sequence[tuple[int, int]],
                 cfg: SolverConfig | None = None, out=None) -> list[dict]:
    """Wall time of :func:`sp_sccp` for each ``(n, p)``; optionally written as CSV."""
    cfg = cfg or SolverConfig()
    rows = []
    for n, p in sizes:
        t0 = time.perf_counter()
        _, rep = sp_sccp(make_spec(p), n, cfg)
        rows.append({"n": n, "p": p, "seconds": time.perf_counter() - t0,
                     "iterations": rep.iterations})
    if out is not None:
        with open(out, "w", newline="") as fh:
            w = csv.DictWriter(fh, ["n", "p", "seconds", "iterations"], lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
    return rows


def evaluate_on(g: Integrand, points, out) -> None:
    """Write ``g`` evaluated at each point, one value per line (for external density plots)."""
    vals = g(as_points(points))
    Path(out).write_text("".join(f"{v:.17g}\n" for v in vals))

