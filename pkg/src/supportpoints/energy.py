"""Energy-distance statistics over finite point sets.

All double sums are formed as per-row sums (computed by the active kernel
backend, see :mod:`supportpoints._backend`) followed by one NumPy reduction
over rows, so the result does not depend on the thread count.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from . import _backend
from .exceptions import InvalidInputError, NumericError

__all__ = [
    "EnergyValue",
    "as_points",
    "pairwise_distance_sum",
    "energy_statistic",
    "full_energy_distance",
    "energy_1d_vs_cdf",
]


@dataclass(frozen=True)
class EnergyValue:
    """An energy statistic with its three averaged distance terms.

    ``value == 2 * cross_term - self_term_x - self_term_y``.
    """

    value: float
    cross_term: float
    self_term_x: float
    self_term_y: float = 0.0

    def __float__(self) -> float:
        return self.value


def as_points(a, name: str = "points") -> np.ndarray:
    """Validate ``a`` and return it as a C-contiguous ``(n, p)`` float array.

    One-dimensional input is read as ``n`` points in one dimension.
    """
    try:
        arr = np.asarray(a, dtype=np.float64)
    except (ValueError, TypeError) as exc:
        raise InvalidInputError(f"{name}: inconsistent dimensions ({exc})") from None
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise InvalidInputError(f"{name}: expected a 2-D array, got ndim={arr.ndim}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InvalidInputError(f"{name}: need at least one point of dimension >= 1")
    if not np.isfinite(arr).all():
        raise InvalidInputError(f"{name}: non-finite coordinate")
    return np.ascontiguousarray(arr)


def _pair(x, y):
    x = as_points(x, "x")
    y = as_points(y, "y")
    if x.shape[1] != y.shape[1]:
        raise InvalidInputError(
            f"dimension mismatch: x has p={x.shape[1]}, y has p={y.shape[1]}")
    return x, y


def pairwise_distance_sum(a, threads: int = 1) -> float:
    """Sum of ``||a_i - a_j||`` over all ordered pairs, diagonal included."""
    a = as_points(a)
    return float(np.sum(_backend.cross_row_sums(a, a, threads)))


def _mean_cross(x, y, threads):
    return float(np.sum(_backend.cross_row_sums(x, y, threads))) / (x.shape[0] * y.shape[0])


def energy_statistic(x, y, threads: int = 1) -> EnergyValue:
    """Monte Carlo energy objective of point set ``x`` against draws ``y``.

    Returns ``(2/(nN)) sum_im ||y_m - x_i|| - (1/n^2) sum_ij ||x_i - x_j||``;
    the draws' own self term is a constant for optimization and is omitted
    (``self_term_y == 0``).
    """
    x, y = _pair(x, y)
    cross = _mean_cross(x, y, threads)
    sx = _mean_cross(x, x, threads)
    return EnergyValue(2.0 * cross - sx, cross, sx, 0.0)


def full_energy_distance(x, y, threads: int = 1) -> EnergyValue:
    """Two-sample energy distance between the empirical laws of ``x`` and ``y``."""
    x, y = _pair(x, y)
    cross = _mean_cross(x, y, threads)
    sx = _mean_cross(x, x, threads)
    sy = _mean_cross(y, y, threads)
    return EnergyValue(2.0 * cross - sx - sy, cross, sx, sy)


@lru_cache(maxsize=64)
def _gauss_legendre(order: int):
    return np.polynomial.legendre.leggauss(order)


def energy_1d_vs_cdf(x, cdf: Callable | object, quad_points: int = 2000,
                     support: tuple[float, float] | None = None,
                     tail: float = 1e-9) -> float:
    """Energy distance between a 1-D point set and a univariate law by quadrature.

    In one dimension the energy distance equals ``2 * int (F_n - F)^2``.
    The integral is split at the points of ``x`` (where the empirical CDF
    jumps) and each piece is integrated by Gauss-Legendre.

    Parameters
    ----------
    x : array_like
        Points, shape ``(n,)`` or ``(n, 1)``.
    cdf : callable or frozen scipy distribution
        If the object has a ``ppf`` method, unbounded supports are truncated
        at its ``tail`` and ``1 - tail`` quantiles.  Otherwise ``support``
        must be given.
    quad_points : int
        Total number of quadrature nodes, at least 100.
    """
    pts = as_points(x, "x")
    if pts.shape[1] != 1:
        raise InvalidInputError("energy_1d_vs_cdf needs one-dimensional points")
    if quad_points < 100:
        raise InvalidInputError("quad_points must be >= 100")
    pts = np.sort(pts[:, 0])
    f = cdf.cdf if hasattr(cdf, "cdf") else cdf
    if support is None:
        if not hasattr(cdf, "ppf"):
            raise InvalidInputError("support is required for a bare CDF callable")
        support = (float(cdf.ppf(tail)), float(cdf.ppf(1.0 - tail)))
    lo = min(support[0], pts[0])
    hi = max(support[1], pts[-1])

    edges = np.unique(np.concatenate([[lo], pts, [hi]]))
    pieces = len(edges) - 1
    order = max(2, quad_points // max(pieces, 1))
    nodes, weights = _gauss_legendre(order)
    n = len(pts)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        half = 0.5 * (b - a)
        t = a + half * (nodes + 1.0)
        fn = np.searchsorted(pts, t, side="right") / n
        total += half * float(np.dot(weights, (fn - f(t)) ** 2))
    total *= 2.0
    if not np.isfinite(total):
        raise NumericError("quadrature produced a non-finite value")
    return total
