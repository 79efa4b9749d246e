"""NumPy reference implementation of the per-shot sampling kernel.

Every random number is a pure function of ``(seed, shot, draw)``: the shot
state is ``mix(key + (shot + 1) * GAMMA)`` and draw ``k`` is
``mix(state + (k + 1) * GAMMA)``, where ``mix`` is the SplitMix64
finalizer. Draw 0 selects the photon number, draws ``1..n`` decide
survival of each photon under loss, and draws ``n + 1 + j`` route the
``j``-th surviving photon at the beam splitter. The compiled kernel must
reproduce this layout bit for bit.
"""

import numpy as np

GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_TO_UNIT = 2.0**-53
_MASK64 = (1 << 64) - 1


def mix64(z):
    z = np.asarray(z, dtype=np.uint64)
    # wrap-around multiplication is intended
    with np.errstate(over="ignore"):
        z = (z ^ (z >> _S30)) * _M1
        z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def stream_key(seed):
    return mix64(np.uint64(int(seed) & _MASK64))


def _unit(bits):
    return (bits >> _S11).astype(np.float64) * _TO_UNIT


def _draw(state, k):
    # k is a per-shot uint64 draw index
    return _unit(mix64(state + (k + np.uint64(1)) * GAMMA))


def draw_counts(cdf, seed, start, stop, efficiency=1.0, split=False):
    """Photon counts for shots ``start..stop-1``.

    Returns shape ``(stop - start,)`` or, with ``split``, ``(stop - start, 2)``.
    """
    cdf = np.ascontiguousarray(cdf, dtype=np.float64)
    cutoff = cdf.size - 1
    with np.errstate(over="ignore"):
        shots = np.arange(start, stop, dtype=np.uint64)
        state = mix64(stream_key(seed) + (shots + np.uint64(1)) * GAMMA)
        u = _draw(state, np.uint64(0))
        n = np.minimum(np.searchsorted(cdf, u, side="right"), cutoff).astype(np.int64)

        kept = n.copy()
        if efficiency < 1.0:
            kept[:] = 0
            for j in range(int(n.max(initial=0))):
                active = np.flatnonzero(n > j)
                u = _draw(state[active], np.uint64(j + 1))
                kept[active] += u < efficiency
        if not split:
            return kept

        a = np.zeros_like(kept)
        for j in range(int(kept.max(initial=0))):
            active = np.flatnonzero(kept > j)
            k = n[active].astype(np.uint64) + np.uint64(1 + j)
            u = _draw(state[active], k)
            a[active] += u < 0.5
        return np.column_stack([a, kept - a])
