"""Pure-numpy state-vector gate kernels (fallback backend).

Every function mutates a 1-D contiguous complex128 amplitude array in
place.  Wire 0 is the most significant bit of the basis index: the bit
of wire ``w`` in index ``idx`` is ``(idx >> (n - 1 - w)) & 1``.
"""

import numpy as np

_INDEX_CACHE = {}


def _indices(n):
    idx = _INDEX_CACHE.get(n)
    if idx is None:
        idx = np.arange(1 << n, dtype=np.int64)
        _INDEX_CACHE[n] = idx
    return idx


def apply_single(amps, n, wire, u00, u01, u10, u11):
    view = amps.reshape(1 << wire, 2, 1 << (n - 1 - wire))
    a0 = view[:, 0, :].copy()
    a1 = view[:, 1, :]
    view[:, 0, :] = u00 * a0 + u01 * a1
    view[:, 1, :] = u10 * a0 + u11 * a1


def apply_x(amps, n, wire):
    view = amps.reshape(1 << wire, 2, 1 << (n - 1 - wire))
    a0 = view[:, 0, :].copy()
    view[:, 0, :] = view[:, 1, :]
    view[:, 1, :] = a0


def apply_cnot(amps, n, control, target):
    cbit = 1 << (n - 1 - control)
    tbit = 1 << (n - 1 - target)
    idx = _indices(n)
    i0 = idx[((idx & cbit) != 0) & ((idx & tbit) == 0)]
    i1 = i0 | tbit
    a0 = amps[i0]
    amps[i0] = amps[i1]
    amps[i1] = a0


def apply_controlled(amps, n, cmask, target, u00, u01, u10, u11):
    tbit = 1 << (n - 1 - target)
    idx = _indices(n)
    i0 = idx[((idx & cmask) == cmask) & ((idx & tbit) == 0)]
    i1 = i0 | tbit
    a0 = amps[i0]
    a1 = amps[i1]
    amps[i0] = u00 * a0 + u01 * a1
    amps[i1] = u10 * a0 + u11 * a1
