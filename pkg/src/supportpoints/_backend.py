"""Kernel backend selection.

The compiled extension is used when importable.  Setting the environment
variable ``SUPPORTPOINTS_BACKEND=numpy`` forces the NumPy fallback.
"""

from __future__ import annotations

import os
from types import ModuleType

import numpy as np

from . import _fallback


def _load_compiled() -> ModuleType | None:
    if os.environ.get("SUPPORTPOINTS_BACKEND", "").lower() == "numpy":
        return None
    try:
        from . import _kernels
    except ImportError:
        return None
    return _kernels


_compiled = _load_compiled()
_active: ModuleType = _compiled if _compiled is not None else _fallback


def backend_name() -> str:
    return "cython" if _active is _compiled else "numpy"


def available_backends() -> list[str]:
    names = ["numpy"]
    if _compiled is not None:
        names.insert(0, "cython")
    return names


def get(name: str | None = None) -> ModuleType:
    """Return the kernel module called ``name`` (default: the active one)."""
    if name is None:
        return _active
    if name == "numpy":
        return _fallback
    if name == "cython":
        if _compiled is None:
            raise ValueError("compiled kernels are not available")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def cross_row_sums(x: np.ndarray, y: np.ndarray, threads: int = 1,
                   backend: str | None = None) -> np.ndarray:
    out = np.empty(x.shape[0])
    get(backend).cross_row_sums(x, y, out, int(threads))
    return out


def sweep(x: np.ndarray, y: np.ndarray, eps: float, threads: int = 1,
          backend: str | None = None) -> dict[str, np.ndarray]:
    n, p = x.shape
    res = {
        "wy": np.empty((n, p)),
        "w": np.empty(n),
        "eta": np.empty(n, dtype=np.int64),
        "rep": np.empty((n, p)),
        "cross": np.empty(n),
        "selfsum": np.empty(n),
        "mind": np.empty(n),
    }
    get(backend).sweep(x, y, float(eps), res["wy"], res["w"], res["eta"],
                       res["rep"], res["cross"], res["selfsum"], res["mind"],
                       int(threads))
    return res
