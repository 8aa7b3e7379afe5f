"""Gaussian Wigner densities as (mean, covariance, weight) data.

Phase-space vectors are ordered ``(q1, p1, q2, p2, ...)``. The coherent
state density ``exp[-(q-q0)^2 - (p-p0)^2] / pi`` corresponds to variance
1/2 per quadrature; every constructor here is written in that convention.

Only positive-definite covariances are representable. The unnormalizable
``K * delta(P)`` limit of the squeezed vacuum has no place in this module;
it is handled in closed form by :mod:`epwbell.bell`.
"""

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .errors import DomainError, ShapeError

_R = 1.0 / math.sqrt(2.0)

# (q, p, Q, P) -> (q1, p1, q2, p2); inverse of q=(q1-q2)/√2, Q=(q1+q2)/√2 and
# the same for momenta.
BEAMSPLITTER = np.array([
    [_R, 0.0, _R, 0.0],
    [0.0, _R, 0.0, _R],
    [-_R, 0.0, _R, 0.0],
    [0.0, -_R, 0.0, _R],
])
BEAMSPLITTER.setflags(write=False)

SYMMETRY_TOL = 1e-12


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _symmetrize(c):
    return 0.5 * (c + c.T)


class _GaussianDensity:
    """Shared density evaluation for full states and position marginals."""

    mean: np.ndarray
    covariance: np.ndarray
    log_weight: float

    def _validate(self):
        m, c = self.mean, self.covariance
        if m.ndim != 1 or c.shape != (len(m), len(m)):
            raise ShapeError(f"mean of shape {m.shape} incompatible with covariance {c.shape}")
        if not np.all(np.isfinite(m)) or not np.all(np.isfinite(c)):
            raise DomainError("mean and covariance must be finite")
        if not math.isfinite(self.log_weight):
            raise DomainError("log_weight must be finite")
        scale = max(1.0, float(np.max(np.abs(c))))
        if np.max(np.abs(c - c.T)) > SYMMETRY_TOL * scale:
            raise DomainError("covariance is not symmetric")
        if np.linalg.eigvalsh(c)[0] <= 0.0:
            raise DomainError("covariance is not positive definite")

    @property
    def dim(self) -> int:
        return len(self.mean)

    @property
    def total_weight(self) -> float:
        return math.exp(self.log_weight)

    def density(self, point) -> Union[float, np.ndarray]:
        x = np.asarray(point, dtype=float)
        if x.shape[-1:] != (self.dim,):
            raise ShapeError(f"point must have trailing dimension {self.dim}, got {x.shape}")
        d = x - self.mean
        chol = np.linalg.cholesky(self.covariance)
        y = np.linalg.solve(chol, d.reshape(-1, self.dim).T)
        quad = np.sum(y * y, axis=0)
        log_norm = -0.5 * self.dim * math.log(2.0 * math.pi) - float(np.sum(np.log(np.diag(chol))))
        out = np.exp(self.log_weight + log_norm - 0.5 * quad)
        return float(out[0]) if x.ndim == 1 else out.reshape(x.shape[:-1])


@dataclass(frozen=True, eq=False)
class GaussianState(_GaussianDensity):
    """Gaussian Wigner density on a ``2 * n_modes`` dimensional phase space.

    ``log_weight`` is the log of the total integral (0 when normalized).
    """

    mean: np.ndarray
    covariance: np.ndarray
    log_weight: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "mean", _frozen(self.mean))
        object.__setattr__(self, "covariance", _frozen(self.covariance))
        object.__setattr__(self, "log_weight", float(self.log_weight))
        self._validate()
        if self.dim % 2:
            raise ShapeError("phase-space dimension must be even")

    @property
    def n_modes(self) -> int:
        return self.dim // 2


@dataclass(frozen=True, eq=False)
class PositionMarginal(_GaussianDensity):
    """Joint Gaussian density of the positions ``(q1, q2)``."""

    mean: np.ndarray
    covariance: np.ndarray
    log_weight: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "mean", _frozen(self.mean))
        object.__setattr__(self, "covariance", _frozen(self.covariance))
        object.__setattr__(self, "log_weight", float(self.log_weight))
        self._validate()
        if self.dim != 2:
            raise ShapeError("position marginal must be two-dimensional")


@dataclass(frozen=True)
class ModePairParams:
    """Coherent amplitude ``(q0, p0)`` and squeezing ``s`` of the input pair."""

    q0: float
    p0: float
    s: float

    def __post_init__(self):
        if not (math.isfinite(self.q0) and math.isfinite(self.p0)):
            raise DomainError("q0 and p0 must be finite")
        if not (math.isfinite(self.s) and self.s > 0):
            raise DomainError(f"squeezing s must be positive, got {self.s}")


@dataclass(frozen=True)
class TimePair:
    t1: float
    t2: float

    def __post_init__(self):
        if not (math.isfinite(self.t1) and math.isfinite(self.t2)):
            raise DomainError("times must be finite")

    @property
    def tau(self) -> float:
        return 0.5 * (self.t1 + self.t2)


def as_time_pair(t: Union[TimePair, Tuple[float, float]]) -> TimePair:
    return t if isinstance(t, TimePair) else TimePair(float(t[0]), float(t[1]))


def coherent_wigner(q0: float, p0: float) -> GaussianState:
    """Coherent state centred at ``(q0, p0)``; covariance ``I/2``."""
    return GaussianState([q0, p0], 0.5 * np.eye(2))


def squeezed_vacuum_wigner(s: float) -> GaussianState:
    """Squeezed vacuum ``exp[-(sQ)^2 - (P/s)^2] / pi``.

    Var(Q) = 1/(2 s^2), Var(P) = s^2/2.
    """
    if not (math.isfinite(s) and s > 0):
        raise DomainError(f"squeezing s must be positive, got {s}")
    return GaussianState([0.0, 0.0], np.diag([0.5 / s**2, 0.5 * s**2]))


def tensor(a: GaussianState, b: GaussianState) -> GaussianState:
    n, m = a.dim, b.dim
    cov = np.zeros((n + m, n + m))
    cov[:n, :n] = a.covariance
    cov[n:, n:] = b.covariance
    return GaussianState(np.concatenate([a.mean, b.mean]), cov, a.log_weight + b.log_weight)


def _linear(state: GaussianState, matrix: np.ndarray) -> GaussianState:
    return GaussianState(
        matrix @ state.mean,
        _symmetrize(matrix @ state.covariance @ matrix.T),
        state.log_weight,
    )


def _require_two_modes(state):
    if state.n_modes != 2:
        raise ShapeError(f"expected a two-mode state, got {state.n_modes} modes")


def beamsplitter_transform(state: GaussianState) -> GaussianState:
    """Re-express a ``(q, p, Q, P)`` state in the output variables ``(q1, p1, q2, p2)``."""
    _require_two_modes(state)
    return _linear(state, BEAMSPLITTER)


def shear_matrix(t: Union[TimePair, Tuple[float, float]]) -> np.ndarray:
    t = as_time_pair(t)
    m = np.eye(4)
    m[0, 1] = t.t1
    m[2, 3] = t.t2
    return m


def free_evolution(state: GaussianState, t: Union[TimePair, Tuple[float, float]]) -> GaussianState:
    """Free unit-mass motion of each particle for its own time, ``q_k -> q_k + p_k t_k``."""
    _require_two_modes(state)
    return _linear(state, shear_matrix(t))


def marginal_positions(state: GaussianState) -> PositionMarginal:
    _require_two_modes(state)
    idx = [0, 2]
    return PositionMarginal(state.mean[idx], state.covariance[np.ix_(idx, idx)], state.log_weight)


def evaluate_density(state, point) -> Union[float, np.ndarray]:
    """Density of a :class:`GaussianState` or :class:`PositionMarginal` at ``point``.

    ``point`` may carry leading batch dimensions.
    """
    return state.density(point)


def prepared_state(params: ModePairParams) -> GaussianState:
    """Coherent ⊗ squeezed input expressed in output variables, before evolution."""
    return beamsplitter_transform(
        tensor(coherent_wigner(params.q0, params.p0), squeezed_vacuum_wigner(params.s))
    )
