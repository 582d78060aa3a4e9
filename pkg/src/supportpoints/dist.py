"""Product distributions, seeded sampling, CSV sample files, standardization."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import stats

from .energy import as_points
from .exceptions import DegenerateDimensionError, InvalidInputError, ParseError

__all__ = [
    "Marginal",
    "DistributionSpec",
    "SampleBatch",
    "Standardizer",
    "make_rng",
    "sample",
    "load_samples",
    "write_points",
    "fit_standardizer",
    "borehole_spec",
]

LAWS = {
    "normal": 2,
    "exponential": 1,
    "beta": 2,
    "uniform": 2,
    "lognormal": 2,
}
ALIASES = {"exp": "exponential", "norm": "normal", "unif": "uniform", "lnorm": "lognormal"}


def _fmt(v: float) -> str:
    return f"{v:g}"


@dataclass(frozen=True)
class Marginal:
    """A univariate law.

    Parameterizations: ``normal(mean, sd)``, ``exponential(rate)``,
    ``beta(a, b)``, ``uniform(lo, hi)``, ``lognormal(meanlog, sdlog)``.
    """

    law: str
    params: tuple[float, ...]

    def __post_init__(self):
        law = ALIASES.get(self.law, self.law)
        object.__setattr__(self, "law", law)
        object.__setattr__(self, "params", tuple(float(v) for v in self.params))
        if law not in LAWS:
            raise InvalidInputError(f"unknown law {self.law!r}")
        if len(self.params) != LAWS[law]:
            raise InvalidInputError(f"{law} takes {LAWS[law]} parameter(s), got {len(self.params)}")
        if not all(math.isfinite(v) for v in self.params):
            raise InvalidInputError(f"{law}: non-finite parameter")
        ok = {
            "normal": lambda s: s[1] > 0,
            "exponential": lambda s: s[0] > 0,
            "beta": lambda s: s[0] > 0 and s[1] > 0,
            "uniform": lambda s: s[0] < s[1],
            "lognormal": lambda s: s[1] > 0,
        }[law](self.params)
        if not ok:
            raise InvalidInputError(f"invalid parameters for {law}: {self.params}")

    def __str__(self) -> str:
        return f"{self.law}({','.join(_fmt(v) for v in self.params)})"

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        a = self.params
        if self.law == "normal":
            return rng.normal(a[0], a[1], size)
        if self.law == "exponential":
            return rng.exponential(1.0 / a[0], size)
        if self.law == "beta":
            return rng.beta(a[0], a[1], size)
        if self.law == "uniform":
            return rng.uniform(a[0], a[1], size)
        return rng.lognormal(a[0], a[1], size)

    def frozen(self):
        """The equivalent frozen :mod:`scipy.stats` distribution."""
        a = self.params
        if self.law == "normal":
            return stats.norm(a[0], a[1])
        if self.law == "exponential":
            return stats.expon(scale=1.0 / a[0])
        if self.law == "beta":
            return stats.beta(a[0], a[1])
        if self.law == "uniform":
            return stats.uniform(a[0], a[1] - a[0])
        return stats.lognorm(s=a[1], scale=math.exp(a[0]))

    @property
    def mean(self) -> float:
        return float(self.frozen().mean())

    @property
    def var(self) -> float:
        return float(self.frozen().var())


@dataclass(frozen=True)
class DistributionSpec:
    """Independent product of univariate marginals."""

    marginals: tuple[Marginal, ...]
    name: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "marginals", tuple(self.marginals))
        if not self.marginals:
            raise InvalidInputError("a distribution needs at least one marginal")

    @classmethod
    def iid(cls, marginal: Marginal, p: int) -> "DistributionSpec":
        if p < 1:
            raise InvalidInputError("dimension must be >= 1")
        return cls((marginal,) * p)

    @property
    def p(self) -> int:
        return len(self.marginals)

    @property
    def means(self) -> np.ndarray:
        return np.array([m.mean for m in self.marginals])

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        first = self.marginals[0]
        if self.p > 1 and all(m == first for m in self.marginals):
            return f"iid:{first}:{self.p}"
        return ":".join(str(m) for m in self.marginals)

    def sample(self, count: int, seed) -> "SampleBatch":
        return sample(self, count, seed)


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """``N`` draws of dimension ``p`` and where they came from."""

    draws: np.ndarray
    provenance: str = "array"

    def __post_init__(self):
        object.__setattr__(self, "draws", as_points(self.draws, "draws"))
        self.draws.setflags(write=False)

    @property
    def N(self) -> int:
        return self.draws.shape[0]

    @property
    def p(self) -> int:
        return self.draws.shape[1]

    def __len__(self) -> int:
        return self.N

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.draws
        return self.draws.astype(dtype)


def make_rng(seed) -> np.random.Generator:
    """Counter-based (Philox) generator keyed by an int or a sequence of ints."""
    if isinstance(seed, np.random.SeedSequence):
        ss = seed
    elif isinstance(seed, (int, np.integer)):
        ss = np.random.SeedSequence(int(seed))
    else:
        ss = np.random.SeedSequence([int(s) for s in seed])
    return np.random.Generator(np.random.Philox(ss))


def sample(spec: DistributionSpec, count: int, seed) -> SampleBatch:
    """Draw ``count`` i.i.d. points from ``spec``; columns are drawn in order."""
    if count < 1:
        raise InvalidInputError("count must be >= 1")
    rng = make_rng(seed)
    cols = [m.draw(rng, count) for m in spec.marginals]
    return SampleBatch(np.column_stack(cols), provenance=f"generated(seed={seed})")


def load_samples(path, format: str = "csv", header: bool = False) -> SampleBatch:
    """Read a numeric CSV file, one draw per row.

    Raises :class:`ParseError` with the offending line number for ragged
    rows, non-numeric or non-finite cells, and empty files.
    """
    if format != "csv":
        raise InvalidInputError(f"unsupported format {format!r}")
    rows: list[list[float]] = []
    width = None
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if header and lineno == 1:
                continue
            if not row or all(not c.strip() for c in row):
                continue
            try:
                vals = [float(c) for c in row]
            except ValueError:
                raise ParseError(f"non-numeric cell in {row!r}", lineno) from None
            if not all(math.isfinite(v) for v in vals):
                raise ParseError("non-finite value", lineno)
            if width is None:
                width = len(vals)
            elif len(vals) != width:
                raise ParseError(f"expected {width} columns, found {len(vals)}", lineno)
            rows.append(vals)
    if not rows:
        raise ParseError(f"{path}: no data rows")
    return SampleBatch(np.array(rows), provenance=f"file({path})")


def write_points(path, points) -> None:
    """Write points as CSV with 17 significant digits (round-trip exact)."""
    pts = as_points(points)
    lines = [",".join(f"{v:.17g}" for v in row) for row in pts]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


@dataclass(frozen=True)
class Standardizer:
    """Per-dimension affine map to zero mean and unit (n-1) variance."""

    loc: np.ndarray
    scale: np.ndarray = field(repr=False)

    def apply(self, points) -> np.ndarray:
        return (as_points(points) - self.loc) / self.scale

    def invert(self, points) -> np.ndarray:
        return as_points(points) * self.scale + self.loc


def fit_standardizer(y) -> Standardizer:
    y = as_points(y, "y")
    if y.shape[0] < 2:
        raise InvalidInputError("standardization needs at least two draws")
    loc = y.mean(axis=0)
    scale = y.std(axis=0, ddof=1)
    for k, s in enumerate(scale):
        if not s > 0:
            raise DegenerateDimensionError(k)
    return Standardizer(loc, scale)


def borehole_spec() -> DistributionSpec:
    """Input law of the 8-variable borehole flow model.

    Order: borehole radius, radius of influence, upper transmissivity,
    upper head, lower transmissivity, lower head, borehole length, hydraulic
    conductivity.  The normal is (mean, sd); the lognormal is
    (meanlog, sdlog).
    """
    return DistributionSpec(
        (
            Marginal("normal", (0.1, 0.01618)),
            Marginal("lognormal", (7.71, 1.0056)),
            Marginal("uniform", (63070, 115600)),
            Marginal("uniform", (990, 1110)),
            Marginal("uniform", (63.1, 116)),
            Marginal("uniform", (700, 820)),
            Marginal("uniform", (1120, 1680)),
            Marginal("uniform", (9855, 12045)),
        ),
        name="borehole",
    )

