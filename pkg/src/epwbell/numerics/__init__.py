from .quadrature import QuadratureResult, gaussian_support, integrate_1d, integrate_2d
from .rng import RngStream, gaussian_sample, standard_normals, stream_key
from .special import erf, erfc, normal_cdf

__all__ = [
    "QuadratureResult",
    "RngStream",
    "erf",
    "erfc",
    "gaussian_sample",
    "gaussian_support",
    "integrate_1d",
    "integrate_2d",
    "normal_cdf",
    "standard_normals",
    "stream_key",
]
