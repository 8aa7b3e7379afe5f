"""Pure-numpy Monte Carlo kernel; same contract as the compiled ``_mckernel``."""

import math

import numpy as np

from .numerics.rng import standard_normals

BLOCK = 1 << 16
_R = 1.0 / math.sqrt(2.0)


def sample_block(key, start, n, q0, p0, s):
    """Output phase points ``(q1, p1, q2, p2)`` for samples ``start .. start+n-1``.

    Sample ``i`` consumes normals ``4i .. 4i+3`` for ``q, p, Q, P``.
    """
    z = standard_normals(key, 4 * start, 4 * n).reshape(n, 4)
    q = q0 + _R * z[:, 0]
    p = p0 + _R * z[:, 1]
    Q = z[:, 2] * (_R / s)
    P = z[:, 3] * (_R * s)
    out = np.empty((n, 4))
    out[:, 0] = _R * (q + Q)
    out[:, 1] = _R * (p + P)
    out[:, 2] = _R * (Q - q)
    out[:, 3] = _R * (P - p)
    return out


def sign_counts(key, n, q0, p0, s, t1, t2):
    t1 = np.asarray(t1, dtype=float)
    t2 = np.asarray(t2, dtype=float)
    m = len(t1)
    opp = np.zeros(m, dtype=np.int64)
    joint = np.zeros((m, m), dtype=np.int64)
    pos1 = np.zeros(m, dtype=np.int64)
    pos2 = np.zeros(m, dtype=np.int64)
    for start in range(0, n, BLOCK):
        pts = sample_block(key, start, min(BLOCK, n - start), q0, p0, s)
        a = (pts[:, 0, None] + pts[:, 1, None] * t1) >= 0.0
        b = (pts[:, 2, None] + pts[:, 3, None] * t2) >= 0.0
        d = (a != b).astype(np.int64)
        opp += d.sum(axis=0)
        joint += d.T @ d
        pos1 += a.sum(axis=0)
        pos2 += b.sum(axis=0)
    return opp, joint, pos1, pos2
