"""The finite-squeezing Wigner density read as a classical ensemble.

Phase points are drawn from the (nonnegative, normalized) input densities,
mapped to the output variables, and moved along free trajectories. Each
particle's sign depends only on its own point and its own time, so every
estimate here is, by construction, produced by a local hidden variable
model.

Samples are split into ``n_chunks`` chunks; chunk ``c`` reads RNG stream
``c``. Chunks return integer counts, so the combination is exact and
independent of scheduling.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from . import _backend
from .errors import DomainError
from .numerics.rng import MASK64, RngStream, stream_key
from .phase_space import ModePairParams, TimePair, as_time_pair

FLAG_SIGMAS = 4.0


@dataclass(frozen=True)
class McConfig:
    n_samples: int
    seed: int = 0
    n_chunks: int = 1

    def __post_init__(self):
        if self.n_samples < 1:
            raise DomainError("n_samples must be at least 1")
        if self.n_chunks < 1:
            raise DomainError("n_chunks must be at least 1")
        if not 0 <= self.seed <= MASK64:
            raise DomainError("seed must be a 64-bit unsigned integer")

    def chunk_sizes(self) -> List[int]:
        base, extra = divmod(self.n_samples, self.n_chunks)
        return [base + (1 if c < extra else 0) for c in range(self.n_chunks)]


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n: int


class PhasePoint(NamedTuple):
    q1: float
    p1: float
    q2: float
    p2: float


@dataclass(frozen=True)
class SignCounts:
    """Integer sufficient statistics for linear combinations of opposite-sign rates."""

    n: int
    opposite: np.ndarray
    joint: np.ndarray
    positive1: np.ndarray
    positive2: np.ndarray

    def combine(self, coeffs: Sequence[float]) -> McEstimate:
        """Estimate of ``sum_j c_j D_j`` with per-sample variance."""
        c = np.asarray(coeffs, dtype=float)
        n = self.n
        s1 = float(c @ self.opposite)
        s2 = float(c @ self.joint @ c)
        mean = s1 / n
        if n > 1:
            var = max(s2 - s1 * s1 / n, 0.0) / (n - 1)
            se = math.sqrt(var / n)
        else:
            se = 0.0
        return McEstimate(mean, se, n)


def sample_initial(params: ModePairParams, stream: RngStream) -> Tuple[PhasePoint, RngStream]:
    """Draw one phase point in output variables and return it with the advanced stream.

    ``(q, p)`` comes from the coherent density, ``(Q, P)`` from the squeezed
    one; four normals are consumed.
    """
    if stream.position % 4:
        raise DomainError("stream position must be aligned to a 4-normal sample boundary")
    pts = _backend.kernel.sample_block(
        stream.key, stream.position // 4, 1, params.q0, params.p0, params.s
    )
    return PhasePoint(*(float(v) for v in pts[0])), stream.advance(4)


def sample_batch(params: ModePairParams, stream: RngStream, n: int) -> Tuple[np.ndarray, RngStream]:
    """``n`` consecutive phase points as an ``(n, 4)`` array, columns ``q1, p1, q2, p2``."""
    if stream.position % 4:
        raise DomainError("stream position must be aligned to a 4-normal sample boundary")
    pts = _backend.kernel.sample_block(
        stream.key, stream.position // 4, n, params.q0, params.p0, params.s
    )
    return pts, stream.advance(4 * n)


def trajectory_sign(point: PhasePoint, particle: int, t: float) -> int:
    """Sign of ``q_k + p_k t``; zero counts as +1."""
    if particle == 1:
        x = point.q1 + point.p1 * t
    elif particle == 2:
        x = point.q2 + point.p2 * t
    else:
        raise DomainError(f"particle must be 1 or 2, got {particle}")
    return 1 if x >= 0.0 else -1


def sign_counts(
    params: ModePairParams,
    times: Sequence,
    mc: McConfig,
    *,
    backend: Optional[str] = None,
    workers: Optional[int] = None,
) -> SignCounts:
    """Counts over all samples for each time pair in ``times``.

    The same phase points serve every time pair (common random numbers).
    """
    pairs = [as_time_pair(t) for t in times]
    t1 = np.array([t.t1 for t in pairs], dtype=float)
    t2 = np.array([t.t2 for t in pairs], dtype=float)
    kern = _backend.get_kernel(backend)

    def run(chunk):
        c, size = chunk
        if size == 0:
            m = len(pairs)
            z = np.zeros(m, dtype=np.int64)
            return z, np.zeros((m, m), dtype=np.int64), z, z
        return kern.sign_counts(stream_key(mc.seed, c), size, params.q0, params.p0, params.s, t1, t2)

    chunks = list(enumerate(mc.chunk_sizes()))
    if workers and workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, chunks))
    else:
        parts = [run(ch) for ch in chunks]

    opp, joint, pos1, pos2 = (sum(p[i] for p in parts) for i in range(4))
    return SignCounts(mc.n_samples, opp, joint, pos1, pos2)


def estimate_D(params: ModePairParams, t, mc: McConfig, **kw) -> McEstimate:
    """Fraction of trajectories whose signs differ at ``(t1, t2)``."""
    return sign_counts(params, [t], mc, **kw).combine([1.0])


def estimate_S(params: ModePairParams, tau: float, mc: McConfig, **kw) -> McEstimate:
    """``3 D(tau, tau) - D(3 tau, 3 tau)`` on common samples."""
    counts = sign_counts(params, [(tau, tau), (3.0 * tau, 3.0 * tau)], mc, **kw)
    return counts.combine([3.0, -1.0])


def estimate_chained(params: ModePairParams, tau: float, mc: McConfig, **kw) -> McEstimate:
    """Four-setting sign chain with local times ``{3 tau, -tau}`` on each side.

    ``D(3τ,-τ) + D(-τ,3τ) + D(-τ,-τ) - D(3τ,3τ)`` is nonnegative for every
    single sample, hence for any local model.
    """
    a, b = 3.0 * tau, -tau
    counts = sign_counts(params, [(a, b), (b, a), (b, b), (a, a)], mc, **kw)
    return counts.combine([1.0, 1.0, 1.0, -1.0])


@dataclass(frozen=True)
class AuditRow:
    tau: float
    estimate: McEstimate
    flagged: bool


@dataclass(frozen=True)
class AuditReport:
    params: ModePairParams
    rows: List[AuditRow] = field(default_factory=list)

    @property
    def flags(self) -> int:
        return sum(r.flagged for r in self.rows)

    @property
    def verdict(self) -> str:
        if not self.rows:
            return "vacuous"
        return "violated" if self.flags else "consistent"


def lhv_audit(params: ModePairParams, tau_grid: Sequence[float], mc: McConfig, **kw) -> AuditReport:
    """Estimate S on each grid point; flag values below ``-4`` standard errors."""
    rows = []
    for tau in tau_grid:
        est = estimate_S(params, float(tau), mc, **kw)
        rows.append(AuditRow(float(tau), est, est.mean < -FLAG_SIGMAS * est.std_error))
    return AuditReport(params, rows)
