"""Scalar special functions: log-gamma, erf, erfc and the standard normal CDF.

These wrap the C library implementations exposed by :mod:`math`, which are
accurate to a few ulps over the ranges used here, and add the domain checks
and NaN propagation the rest of the package relies on.
"""

import math

from .errors import DomainError

SQRT2 = math.sqrt(2.0)
SQRT2PI = math.sqrt(2.0 * math.pi)
LOG_SQRT2PI = 0.5 * math.log(2.0 * math.pi)


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for ``x > 0``."""
    if math.isnan(x):
        return math.nan
    if x <= 0.0:
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def erf(x: float) -> float:
    return math.erf(x)


def erfc(x: float) -> float:
    return math.erfc(x)


def std_normal_cdf(x: float) -> float:
    """Phi(x), evaluated as erfc(-x/sqrt(2))/2 so the lower tail keeps full
    relative precision."""
    return 0.5 * math.erfc(-x / SQRT2)


def std_normal_sf(x: float) -> float:
    """Upper tail 1 - Phi(x)."""
    return 0.5 * math.erfc(x / SQRT2)


def std_normal_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / SQRT2PI
