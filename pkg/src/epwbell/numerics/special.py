"""Error function and Gaussian tail helpers."""

import math

import numpy as np
from scipy import special as _sp

from ..errors import DomainError

# beyond this |x| erf is ±1 to well under 1e-28
ERF_CLAMP = 8.0
_SQRT2 = math.sqrt(2.0)


def _check_finite(x):
    if not np.all(np.isfinite(x)):
        raise DomainError("erf/erfc require finite arguments")


def erf(x):
    """Error function, scalar or elementwise on arrays.

    Odd, monotone and clamped to exactly ±1 for ``|x| > 8``. Raises
    :class:`DomainError` for NaN or infinite input.
    """
    if np.isscalar(x):
        x = float(x)
        _check_finite(x)
        if abs(x) > ERF_CLAMP:
            return math.copysign(1.0, x)
        return math.erf(x)
    x = np.asarray(x, dtype=float)
    _check_finite(x)
    return np.where(np.abs(x) > ERF_CLAMP, np.sign(x), _sp.erf(x))


def erfc(x):
    """Complementary error function, accurate in the upper tail."""
    if np.isscalar(x):
        x = float(x)
        _check_finite(x)
        return math.erfc(x)
    x = np.asarray(x, dtype=float)
    _check_finite(x)
    return _sp.erfc(x)


def normal_cdf(z):
    """Standard normal CDF, Phi(z) = erfc(-z/sqrt 2)/2."""
    if np.isscalar(z):
        return 0.5 * erfc(-float(z) / _SQRT2)
    return 0.5 * erfc(-np.asarray(z, dtype=float) / _SQRT2)
