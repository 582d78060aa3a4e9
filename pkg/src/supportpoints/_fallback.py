"""Pure NumPy versions of the compiled kernels.

Row blocks are sized from ``N`` and ``p`` only, never from the thread count,
so the arithmetic performed on each row is the same however many worker
threads share the blocks.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

_BLOCK_ELEMS = 1 << 21


def _blocks(n: int, width: int):
    step = max(1, _BLOCK_ELEMS // max(width, 1))
    return [(s, min(n, s + step)) for s in range(0, n, step)]


def _run(blocks, fn, threads: int) -> None:
    if threads <= 1 or len(blocks) == 1:
        for b in blocks:
            fn(*b)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        list(pool.map(lambda b: fn(*b), blocks))


def _dist(xb: np.ndarray, y: np.ndarray) -> np.ndarray:
    d2 = np.zeros((xb.shape[0], y.shape[0]))
    for k in range(xb.shape[1]):
        t = xb[:, k, None] - y[None, :, k]
        d2 += t * t
    return np.sqrt(d2)


def cross_row_sums(x, y, out, threads=1):
    def work(s, e):
        out[s:e] = _dist(x[s:e], y).sum(axis=1)

    _run(_blocks(x.shape[0], y.shape[0]), work, threads)


def sweep(x, y, eps, wy, w, eta, rep, cross, selfsum, mind, threads=1):
    n, p = x.shape

    def work(s, e):
        d = _dist(x[s:e], y)
        cross[s:e] = d.sum(axis=1)
        keep = d > eps
        inv = np.zeros_like(d)
        np.divide(1.0, d, out=inv, where=keep)
        w[s:e] = inv.sum(axis=1)
        eta[s:e] = (~keep).sum(axis=1)
        for k in range(p):
            wy[s:e, k] = (inv * y[:, k]).sum(axis=1)

        dx = _dist(x[s:e], x)
        rows = np.arange(s, e)
        selfsum[s:e] = dx.sum(axis=1)
        dx_off = dx.copy()
        dx_off[rows - s, rows] = np.inf
        mind[s:e] = dx_off.min(axis=1) if n > 1 else np.inf
        invx = np.zeros_like(dx)
        np.divide(1.0, dx, out=invx, where=dx > 0.0)
        invx[rows - s, rows] = 0.0
        for k in range(p):
            diff = x[s:e, k, None] - x[None, :, k]
            rep[s:e, k] = (invx * diff).sum(axis=1)

    _run(_blocks(n, y.shape[0] + n), work, threads)
