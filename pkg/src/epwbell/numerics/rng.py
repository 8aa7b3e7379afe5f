"""Counter-based Gaussian random streams.

A stream is addressed by ``(seed, stream_id)``. Uniform number ``c`` of a
stream is a pure function of ``(seed, stream_id, c)``: the SplitMix64
finalizer applied to ``key + (c + 1) * GOLDEN``, where ``key`` mixes seed
and stream id. Nothing depends on call order, process or thread layout.

Normals come from Box-Muller on consecutive uniform pairs. Normal ``j``
uses uniforms ``2*(j//2)`` and ``2*(j//2)+1``; even ``j`` takes the cosine
branch and odd ``j`` the sine branch. ``RngStream.position`` counts normals.

The compiled Monte Carlo kernel reimplements exactly this construction.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from ..errors import DomainError

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
TWO_PI = 2.0 * math.pi
INV_2_53 = 1.0 / (1 << 53)


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def stream_key(seed: int, stream_id: int) -> int:
    return mix64(seed ^ mix64(stream_id + GOLDEN))


def _mix64_array(z):
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    return z ^ (z >> np.uint64(31))


def uniforms(key: int, start: int, count: int) -> np.ndarray:
    """Uniforms in the open interval (0, 1) for counters ``start .. start+count-1``."""
    c = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    bits = _mix64_array(np.uint64(key) + c * np.uint64(GOLDEN))
    return ((bits >> np.uint64(11)).astype(np.float64) + 0.5) * INV_2_53


def standard_normals(key: int, start: int, count: int) -> np.ndarray:
    """Standard normals ``start .. start+count-1`` of the stream with ``key``."""
    if count <= 0:
        return np.empty(0)
    first_pair = start // 2
    last_pair = (start + count - 1) // 2
    u = uniforms(key, 2 * first_pair, 2 * (last_pair - first_pair + 1))
    r = np.sqrt(-2.0 * np.log(u[0::2]))
    theta = TWO_PI * u[1::2]
    z = np.empty(2 * len(r))
    z[0::2] = r * np.cos(theta)
    z[1::2] = r * np.sin(theta)
    offset = start - 2 * first_pair
    return z[offset:offset + count]


@dataclass(frozen=True)
class RngStream:
    """Immutable handle on a position within a counter-based stream."""

    seed: int
    stream_id: int = 0
    position: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            v = getattr(self, name)
            if not 0 <= v <= MASK64:
                raise DomainError(f"{name} must be a 64-bit unsigned integer")
        if self.position < 0:
            raise DomainError("position must be nonnegative")

    @property
    def key(self) -> int:
        return stream_key(self.seed, self.stream_id)

    def advance(self, n: int) -> "RngStream":
        return replace(self, position=self.position + n)

    def normals(self, count: int):
        """Return ``(draws, advanced_stream)``."""
        return standard_normals(self.key, self.position, count), self.advance(count)


def gaussian_sample(stream: RngStream, mean: float, std_dev: float, size=None):
    """Draw from N(mean, std_dev**2) and return ``(sample, advanced_stream)``.

    ``size=None`` gives a float, otherwise an array of that length.
    ``std_dev == 0`` returns ``mean`` exactly (the stream still advances).
    """
    if not std_dev >= 0:
        raise DomainError(f"std_dev must be nonnegative, got {std_dev}")
    n = 1 if size is None else int(size)
    z, nxt = stream.normals(n)
    x = mean + std_dev * z if std_dev > 0 else np.full(n, float(mean))
    return (float(x[0]) if size is None else x), nxt
