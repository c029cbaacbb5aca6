"""Absolute monomial exponential families.

A degree-``l`` member has density ``exp(theta * |x|**l - F_l(theta))`` on the
real line with natural parameter ``theta < 0``.  The expectation parameter is
``eta = E[|X|**l] = -1 / (l * theta)``.  Every quantity below has a closed form
in terms of ``log_gamma(1/l)``.
"""

import math
from dataclasses import dataclass

from .errors import DomainError
from .special_fn import log_gamma

LOG2 = math.log(2.0)


def _check_degree(l: int) -> None:
    if isinstance(l, bool) or not isinstance(l, int) or l < 1:
        raise DomainError(f"degree must be an integer >= 1, got {l!r}")


def _check_theta(theta: float) -> None:
    if not theta < 0.0:
        raise DomainError(f"natural parameter must be negative, got {theta!r}")


def _check_eta(eta: float) -> None:
    if not eta > 0.0:
        raise DomainError(f"expectation parameter must be positive, got {eta!r}")


def _log_norm_const(l: int) -> float:
    # log(2 * Gamma(1/l) / l)
    return LOG2 + log_gamma(1.0 / l) - math.log(l)


def entropy_constant_natural(l: int) -> float:
    """a_l such that H = a_l - log(-theta)/l."""
    _check_degree(l)
    return _log_norm_const(l) + 1.0 / l


def entropy_constant_expectation(l: int) -> float:
    """b_l such that H = b_l + log(eta)/l."""
    _check_degree(l)
    return _log_norm_const(l) + (1.0 + math.log(l)) / l


def log_normalizer(l: int, theta: float) -> float:
    _check_degree(l)
    _check_theta(theta)
    return _log_norm_const(l) - math.log(-theta) / l


def half_support_log_normalizer(l: int, theta: float) -> float:
    """Log-normalizer of the same family restricted to [0, inf)."""
    return log_normalizer(l, theta) - LOG2


def theta_to_eta(l: int, theta: float) -> float:
    _check_degree(l)
    _check_theta(theta)
    return -1.0 / (l * theta)


def eta_to_theta(l: int, eta: float) -> float:
    _check_degree(l)
    _check_eta(eta)
    return -1.0 / (l * eta)


def entropy_natural(l: int, theta: float) -> float:
    _check_theta(theta)
    return entropy_constant_natural(l) - math.log(-theta) / l


def entropy_expectation(l: int, eta: float) -> float:
    _check_eta(eta)
    return entropy_constant_expectation(l) + math.log(eta) / l


def negative_entropy_threshold(l: int) -> float:
    """The expectation parameter below which the entropy is negative.

    Equal to ``l**l / (l * e * (2 * Gamma(1/l))**l)``; computed as
    ``exp(-l * b_l)`` to stay in log space.
    """
    return math.exp(-l * entropy_constant_expectation(l))


def location_scale_entropy(l: int, theta: float, scale: float) -> float:
    if not scale > 0.0:
        raise DomainError(f"scale must be positive, got {scale!r}")
    return entropy_natural(l, theta) + math.log(scale)


def location_scale_entropy_eta(l: int, eta: float, scale: float) -> float:
    if not scale > 0.0:
        raise DomainError(f"scale must be positive, got {scale!r}")
    return entropy_expectation(l, eta) + math.log(scale)


def log_density(l: int, theta: float, x: float) -> float:
    return theta * abs(x) ** l - log_normalizer(l, theta)


def effective_support(l: int, theta: float, eps: float = 1e-18) -> float:
    """Half-width beyond which the unnormalized density is below ``eps``."""
    _check_degree(l)
    _check_theta(theta)
    return (-math.log(eps) / -theta) ** (1.0 / l)


@dataclass(frozen=True)
class Amef:
    """A member of the degree-``degree`` family, stored by natural parameter."""

    degree: int
    theta: float

    def __post_init__(self):
        _check_degree(self.degree)
        _check_theta(self.theta)

    @classmethod
    def from_eta(cls, degree: int, eta: float) -> "Amef":
        return cls(degree, eta_to_theta(degree, eta))

    @property
    def eta(self) -> float:
        return theta_to_eta(self.degree, self.theta)

    def log_normalizer(self) -> float:
        return log_normalizer(self.degree, self.theta)

    def entropy(self) -> float:
        return entropy_natural(self.degree, self.theta)

    def log_density(self, x: float) -> float:
        return log_density(self.degree, self.theta, x)


@dataclass(frozen=True)
class LocationScaleAmef:
    """``(1/scale) * p((x - loc) / scale)`` for a standard member ``p``."""

    degree: int
    theta: float
    loc: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        _check_degree(self.degree)
        _check_theta(self.theta)
        if not self.scale > 0.0:
            raise DomainError(f"scale must be positive, got {self.scale!r}")

    @property
    def base(self) -> Amef:
        return Amef(self.degree, self.theta)

    def entropy(self) -> float:
        return location_scale_entropy(self.degree, self.theta, self.scale)

    def log_density(self, x: float) -> float:
        z = (x - self.loc) / self.scale
        return log_density(self.degree, self.theta, z) - math.log(self.scale)
