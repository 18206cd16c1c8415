"""NumPy implementation of the Bessel-array kernels.

Same contract as the compiled module ``_native``: ``jn_array`` returns
J_0(x)..J_nmax(x) of the first kind, ``jn_array_batch`` the same for a
vector of arguments (vectorized across arguments, so large scans stay
cheap even without the extension).

Algorithm: ascending power series for |x| <= 2, otherwise Miller's
backward recurrence seeded above max(nmax, |x|) and normalized with
J_0 + 2*sum_k J_{2k} = 1.  Absolute accuracy is ~1e-14 for |x| <= 200.
"""

from __future__ import annotations

import numpy as np

_SERIES_CUTOFF = 2.0
_START_MARGIN = 60  # recurrence start above max(order, |x|); 2^60 damping
_BIG = 1e10
_SMALL = 1e-10


def _series_batch(nmax: int, x: np.ndarray) -> np.ndarray:
    """Power series J_n(x) = sum_m (-1)^m (x/2)^(n+2m) / (m! (n+m)!).

    Each element terminates on its own tail test so the result is
    bit-identical to the scalar evaluation (and to the compiled kernel).
    """
    half = x / 2.0
    quarter = half * half
    out = np.zeros((x.size, nmax + 1))
    pref = np.ones_like(x)
    for n in range(nmax + 1):
        if n > 0:
            pref = pref * (half / n)
        term = pref.copy()
        acc = term.copy()
        live = np.ones(x.size, dtype=bool)
        m = 0
        while live.any():
            m += 1
            term[live] = term[live] * (-quarter[live] / (m * (n + m)))
            acc[live] += term[live]
            live[live] = np.abs(term[live]) > 1e-18 * (np.abs(acc[live]) + 1e-300)
        out[:, n] = acc
    return out


def _miller_batch(nmax: int, ax: np.ndarray) -> np.ndarray:
    start = max(nmax, int(np.ceil(ax.max()))) + _START_MARGIN
    if start % 2:
        start += 1
    npts = ax.size
    out = np.zeros((npts, nmax + 1))
    inv = 2.0 / ax
    jp = np.zeros(npts)
    jc = np.ones(npts)
    norm = np.zeros(npts)
    for m in range(start, 0, -1):
        jm = (m * inv) * jc - jp
        jp = jc
        jc = jm
        idx = m - 1
        if idx <= nmax:
            out[:, idx] = jc
        if idx == 0:
            norm += jc
        elif idx % 2 == 0:
            norm += 2.0 * jc
        big = np.abs(jc) > _BIG
        if big.any():
            jc = np.where(big, jc * _SMALL, jc)
            jp = np.where(big, jp * _SMALL, jp)
            norm = np.where(big, norm * _SMALL, norm)
            if idx <= nmax:
                out[big, idx:] *= _SMALL
    return out / norm[:, None]


def jn_array_batch(nmax: int, xs) -> np.ndarray:
    """J_0..J_nmax for each argument; shape (len(xs), nmax + 1)."""
    if nmax < 0:
        raise ValueError("nmax must be >= 0")
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if not np.all(np.isfinite(xs)):
        raise ValueError("arguments must be finite")
    ax = np.abs(xs)
    out = np.zeros((xs.size, nmax + 1))
    zero = ax == 0.0
    small = (ax <= _SERIES_CUTOFF) & ~zero
    big = ax > _SERIES_CUTOFF
    if zero.any():
        out[zero, 0] = 1.0
    if small.any():
        out[small] = _series_batch(nmax, ax[small])
    if big.any():
        out[big] = _miller_batch(nmax, ax[big])
    neg = xs < 0.0
    if neg.any() and nmax >= 1:
        out[np.ix_(neg, np.arange(1, nmax + 1, 2))] *= -1.0
    return out


def jn_array(nmax: int, x: float) -> np.ndarray:
    """J_0(x)..J_nmax(x) as a 1-D array."""
    return jn_array_batch(nmax, [float(x)])[0]
