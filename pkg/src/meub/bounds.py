"""Maximum-entropy upper bounds on the differential entropy of a mixture.

For any order ``l >= 1`` the entropy of ``X`` is at most the entropy of the
degree-``l`` absolute monomial family member with the same absolute moment:

    H(X) <= U_l = b_l + log(E[|X - delta|**l]) / l

Order 1 is the Laplacian bound and order 2 the Gaussian (variance) bound.
"""

import math
from dataclasses import dataclass, field

from . import amef
from .errors import ConvergenceError, DomainError, EmptySeriesError, NonFiniteMoment
from .gmm import Gmm, log_z, mixture_abs_moment, power_mean
from .special_fn import std_normal_cdf

# sigma_1 / sigma_2 below this makes U_1 the tighter bound for zero-centered mixtures
LAPLACIAN_THRESHOLD = math.pi / (2.0 * math.sqrt(math.e))
# exp(U_1 - U_2) for any single Gaussian; above 1, so U_2 always wins there
SINGLE_GAUSSIAN_CROSSOVER = 2.0 * math.sqrt(math.e) / math.pi

SCAN_POINTS = 33
GOLDEN_XTOL = 1e-8
GOLDEN_MAXITER = 200
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def bound_constant(l: int) -> float:
    """b_l = log 2 + log Gamma(1/l) - log l + (1 + log l) / l."""
    return amef.entropy_constant_expectation(l)


def meub(l: int, abs_moment: float) -> float:
    """The order-``l`` bound given ``A_l = E[|X|**l]``."""
    if not abs_moment > 0.0:
        raise DomainError(f"absolute moment must be positive, got {abs_moment!r}")
    return amef.entropy_expectation(l, abs_moment)


def u1_laplacian(g: Gmm) -> float:
    """Laplacian bound of ``g`` as given (no recentering)."""
    a1 = math.fsum(
        w * (m * (1.0 - 2.0 * std_normal_cdf(-m / s))
             + s * math.sqrt(2.0 / math.pi) * math.exp(-0.5 * (m / s) ** 2))
        for w, m, s in g.components
    )
    return math.log(2.0 * math.e * a1)


def u2_gaussian(g: Gmm) -> float:
    """Gaussian bound ``0.5 log(2 pi e Var[X])``; shift invariant."""
    return 0.5 * math.log(2.0 * math.pi * math.e * g.variance())


def shifted_bound(g: Gmm, l: int, delta: float) -> float:
    """U_l of ``X - delta``."""
    return meub(l, mixture_abs_moment(g, l, delta))


@dataclass(frozen=True)
class BoundSeries:
    """Bounds U_1..U_lmax at a fixed shift.

    Orders whose moment could not be evaluated are kept in ``skipped`` with
    the reason, never interpolated.  When each order was shifted separately,
    ``delta`` is None and ``shifts`` maps order to shift.
    """

    delta: float
    l_max: int
    entries: dict
    skipped: dict = field(default_factory=dict)
    shifts: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.entries:
            raise EmptySeriesError(f"no finite bound up to order {self.l_max}")

    @property
    def best_order(self) -> int:
        return min(self.entries, key=lambda l: (self.entries[l], l))

    @property
    def best_value(self) -> float:
        return self.entries[self.best_order]

    @property
    def first_failure(self):
        """Lowest order that failed, or None."""
        return min(self.skipped) if self.skipped else None

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "l_max": self.l_max,
            "bounds": {str(l): v for l, v in sorted(self.entries.items())},
            "skipped": {str(l): r for l, r in sorted(self.skipped.items())},
            "best_order": self.best_order,
            "best_value": self.best_value,
            "first_failure": self.first_failure,
            **({"shifts": {str(l): d for l, d in sorted(self.shifts.items())}} if self.shifts else {}),
        }


def bound_series(g: Gmm, l_max: int = 10, delta: float = None) -> BoundSeries:
    """Evaluate U_1..U_l_max; ``delta`` defaults to the mixture mean."""
    if isinstance(l_max, bool) or not isinstance(l_max, int) or l_max < 1:
        raise DomainError(f"l_max must be a positive integer, got {l_max!r}")
    if delta is None:
        delta = g.mean()
    entries, skipped = {}, {}
    for l in range(1, l_max + 1):
        try:
            value = shifted_bound(g, l, delta)
        except NonFiniteMoment as exc:
            skipped[l] = exc.detail
            continue
        if math.isfinite(value):
            entries[l] = value
        else:
            skipped[l] = "non-finite bound"
    return BoundSeries(delta=delta, l_max=l_max, entries=entries, skipped=skipped)


def default_shift_bracket(g: Gmm) -> tuple:
    spread = 3.0 * max(g.sigmas)
    return min(g.means) - spread, max(g.means) + spread


def _objective(g, l):
    def f(delta):
        try:
            return shifted_bound(g, l, delta)
        except NonFiniteMoment:
            return math.inf
    return f


def _golden_section(f, lo, hi, xtol, maxiter):
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(maxiter):
        if hi - lo <= xtol:
            break
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - _INVPHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INVPHI * (hi - lo)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def optimize_shift(g: Gmm, l: int, bracket: tuple = None) -> tuple:
    """Minimize U_l(delta) over ``bracket``; returns ``(delta, U_l(delta))``.

    Order 2 is solved exactly by the mean.  Otherwise a coarse scan picks the
    best sub-bracket, refined by golden-section search.  The result is never
    worse than the mean shift.
    """
    mbar = g.mean()
    f = _objective(g, l)
    if l == 2:
        return mbar, f(mbar)
    lo, hi = bracket if bracket is not None else default_shift_bracket(g)
    if not lo < hi:
        raise DomainError(f"invalid bracket ({lo}, {hi})")
    step = (hi - lo) / (SCAN_POINTS - 1)
    grid = [lo + i * step for i in range(SCAN_POINTS)]
    values = [f(x) for x in grid]
    if not any(math.isfinite(v) for v in values):
        raise ConvergenceError(f"U_{l}(delta) is non-finite across [{lo}, {hi}]")
    i = min(range(SCAN_POINTS), key=values.__getitem__)
    sub_lo, sub_hi = grid[max(i - 1, 0)], grid[min(i + 1, SCAN_POINTS - 1)]
    candidates = [
        _golden_section(f, sub_lo, sub_hi, GOLDEN_XTOL, GOLDEN_MAXITER),
        (grid[i], values[i]),
        (mbar, f(mbar)),
    ]
    return min(candidates, key=lambda c: c[1])


def optimized_bound_series(g: Gmm, l_max: int = 10) -> BoundSeries:
    """Like :func:`bound_series` but with the shift optimized per order."""
    if isinstance(l_max, bool) or not isinstance(l_max, int) or l_max < 1:
        raise DomainError(f"l_max must be a positive integer, got {l_max!r}")
    entries, skipped, shifts = {}, {}, {}
    for l in range(1, l_max + 1):
        try:
            shifts[l], entries[l] = optimize_shift(g, l)
        except ConvergenceError as exc:
            skipped[l] = str(exc)
    return BoundSeries(delta=None, l_max=l_max, entries=entries, skipped=skipped, shifts=shifts)


def zero_centered_bound(weights, sigmas, l: int) -> float:
    """U_l of a zero-centered mixture via the l-th power mean of the sigmas."""
    if l < 2 or l % 2:
        raise DomainError(f"order must be even and >= 2, got {l}")
    return bound_constant(l) + log_z(l) / l + math.log(power_mean(weights, sigmas, l))


def delta_l(l: int) -> float:
    """Gap between the sigma-free parts of consecutive even-order bounds.

    ``U_{l+2} < U_l`` for a zero-centered mixture requires
    ``log(sigma_{l+2} / sigma_l) < delta_l(l)``.
    """
    if isinstance(l, bool) or not isinstance(l, int) or l < 2 or l % 2:
        raise DomainError(f"order must be even and >= 2, got {l!r}")
    return (bound_constant(l) + log_z(l) / l
            - bound_constant(l + 2) - log_z(l + 2) / (l + 2))


@dataclass(frozen=True)
class TightnessReport:
    sigma_mean_1: float
    sigma_mean_2: float
    deltas: dict
    threshold: float = LAPLACIAN_THRESHOLD

    @property
    def ratio(self) -> float:
        return self.sigma_mean_1 / self.sigma_mean_2

    @property
    def laplacian_tighter(self) -> bool:
        """Predicted ``U_1 < U_2`` for the zero-centered mixture."""
        return self.ratio < self.threshold


def tightness_report(weights, sigmas, even_orders=(2, 4, 6, 8, 10)) -> TightnessReport:
    return TightnessReport(
        sigma_mean_1=power_mean(weights, sigmas, 1),
        sigma_mean_2=power_mean(weights, sigmas, 2),
        deltas={l: delta_l(l) for l in even_orders},
    )
