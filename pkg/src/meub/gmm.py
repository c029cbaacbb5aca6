"""Univariate Gaussian mixtures and their raw absolute moments.

The moment ``A_l = E[|X - delta|**l]`` of a mixture is the weighted sum of the
component moments.  For a single normal ``N(mu, sigma)``:

* even ``l``: ``A_l = sum_i C(l, 2i) mu**(l-2i) sigma**(2i) (2i-1)!!``
* any ``l``: split the integral at zero and expand binomially,

      A_l = sum_i C(l, i) mu**(l-i) sigma**i (I_i(-mu/sigma) + (-1)**(l+i) I_i(mu/sigma))

  (for odd ``l`` the bracket is ``I_i(-a) - (-1)**i I_i(a)``), where
  ``I_i(a) = (2 pi)**-0.5 * int_a^inf x**i exp(-x**2/2) dx`` satisfies
  ``I_i(a) = phi(a) a**(i-1) + (i-1) I_{i-2}(a)``.

The recursion is evaluated as written, in double precision.  At high orders
with extreme ``mu/sigma`` the power ``a**(i-1)`` overflows while ``phi(a)``
underflows; that surfaces as :class:`NonFiniteMoment` rather than a NaN.
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, InvalidMixtureError, MixtureParseError, NonFiniteMoment
from .special_fn import LOG_SQRT2PI, SQRT2PI, log_gamma, std_normal_sf

WEIGHT_SUM_TOL = 1e-9
SAMPLE_CHUNK = 1 << 16
_U64 = 1 << 64


@dataclass(frozen=True)
class Gmm:
    """Immutable mixture ``sum_c w_c N(mu_c, sigma_c)``.

    Weights summing to within 1e-9 of one are renormalized; anything else is
    rejected with :class:`InvalidMixtureError`.
    """

    weights: tuple
    means: tuple
    sigmas: tuple

    def __post_init__(self):
        w = tuple(float(v) for v in self.weights)
        mu = tuple(float(v) for v in self.means)
        sg = tuple(float(v) for v in self.sigmas)
        if not (len(w) == len(mu) == len(sg)):
            raise InvalidMixtureError("weights, means and sigmas differ in length")
        if not w:
            raise InvalidMixtureError("a mixture needs at least one component")
        if not all(math.isfinite(v) for v in w + mu + sg):
            raise InvalidMixtureError("mixture parameters must be finite")
        if any(v <= 0.0 for v in w):
            raise InvalidMixtureError("weights must be positive")
        if any(v <= 0.0 for v in sg):
            raise InvalidMixtureError("standard deviations must be positive")
        total = math.fsum(w)
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise InvalidMixtureError(f"weights sum to {total!r}, not 1")
        object.__setattr__(self, "weights", tuple(v / total for v in w))
        object.__setattr__(self, "means", mu)
        object.__setattr__(self, "sigmas", sg)

    @classmethod
    def from_components(cls, components: Iterable[Sequence[float]]) -> "Gmm":
        comps = [tuple(c) for c in components]
        if any(len(c) != 3 for c in comps):
            raise InvalidMixtureError("each component is a (weight, mean, sigma) triple")
        if not comps:
            raise InvalidMixtureError("a mixture needs at least one component")
        w, mu, sg = zip(*comps)
        return cls(w, mu, sg)

    @classmethod
    def normal(cls, mu: float = 0.0, sigma: float = 1.0) -> "Gmm":
        return cls((1.0,), (mu,), (sigma,))

    @property
    def k(self) -> int:
        return len(self.weights)

    @property
    def components(self) -> list:
        return list(zip(self.weights, self.means, self.sigmas))

    def mean(self) -> float:
        return math.fsum(w * m for w, m in zip(self.weights, self.means))

    def variance(self) -> float:
        mbar = self.mean()
        return math.fsum(
            w * ((m - mbar) ** 2 + s * s)
            for w, m, s in zip(self.weights, self.means, self.sigmas)
        )

    def shift(self, delta: float) -> "Gmm":
        """The mixture of ``X - delta``."""
        return Gmm(self.weights, tuple(m - delta for m in self.means), self.sigmas)

    def centered(self) -> "Gmm":
        return self.shift(self.mean())

    def log_pdf(self, x):
        """Log density, stabilized with log-sum-exp; accepts scalars or arrays."""
        xa = np.asarray(x, dtype=float)
        w = np.asarray(self.weights)
        mu = np.asarray(self.means)
        sg = np.asarray(self.sigmas)
        z = (xa[..., None] - mu) / sg
        terms = np.log(w) - np.log(sg) - LOG_SQRT2PI - 0.5 * z * z
        top = terms.max(axis=-1)
        out = top + np.log(np.exp(terms - top[..., None]).sum(axis=-1))
        return float(out) if out.ndim == 0 else out

    def pdf(self, x):
        return np.exp(self.log_pdf(x))

    def sample(self, n: int, seed: int) -> np.ndarray:
        return sample(self, n, seed)

    def to_dict(self) -> dict:
        return {
            "components": [
                {"w": w, "mu": m, "sigma": s} for w, m, s in self.components
            ]
        }


# -- parsing ---------------------------------------------------------------


def parse_text(text: str) -> Gmm:
    """Parse ``w mu sigma`` lines; blank lines and ``#`` comments are skipped."""
    comps = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 3:
            raise MixtureParseError(f"line {lineno}: expected 'w mu sigma', got {raw!r}")
        try:
            comps.append(tuple(float(f) for f in fields))
        except ValueError:
            raise MixtureParseError(f"line {lineno}: not a number in {raw!r}") from None
    if not comps:
        raise MixtureParseError("no mixture components found")
    return Gmm.from_components(comps)


def parse_json(data) -> Gmm:
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise MixtureParseError(f"invalid JSON: {exc}") from None
    try:
        comps = [(c["w"], c["mu"], c["sigma"]) for c in data["components"]]
        comps = [tuple(float(v) for v in c) for c in comps]
    except (KeyError, TypeError, ValueError) as exc:
        raise MixtureParseError(f"malformed mixture JSON: {exc!r}") from None
    if not comps:
        raise MixtureParseError("no mixture components found")
    return Gmm.from_components(comps)


def parse_mixture(text: str) -> Gmm:
    """Dispatch on content: JSON objects start with ``{``."""
    if text.lstrip().startswith("{"):
        return parse_json(text)
    return parse_text(text)


def load_mixture(path) -> Gmm:
    try:
        text = Path(path).read_text()
    except (OSError, UnicodeDecodeError) as exc:
        raise MixtureParseError(f"cannot read {path}: {exc}") from None
    return parse_mixture(text)


# -- moments ---------------------------------------------------------------


def _check_order(l: int) -> None:
    if isinstance(l, bool) or not isinstance(l, int) or l < 0:
        raise DomainError(f"moment order must be a non-negative integer, got {l!r}")


def i_integrals(n: int, a: float) -> list:
    """``[I_0(a), ..., I_n(a)]`` by the two-step upward recursion."""
    phi = math.exp(-0.5 * a * a) / SQRT2PI
    out = [std_normal_sf(a), phi]
    # power holds a**(i-1); multiplied in place so overflow yields inf, not an exception
    power = 1.0
    for i in range(2, n + 1):
        power *= a
        out.append(phi * power + (i - 1) * out[i - 2])
    return out[: n + 1]


def i_integral(i: int, a: float) -> float:
    _check_order(i)
    return i_integrals(i, a)[i]


def _checked(l: int, terms) -> float:
    try:
        value = math.fsum(terms)
    except (OverflowError, ValueError):
        raise NonFiniteMoment(l) from None
    if not math.isfinite(value):
        raise NonFiniteMoment(l)
    return value


def _pow(x: float, n: int) -> float:
    try:
        return x**n
    except OverflowError:
        return math.copysign(math.inf, x) if n % 2 else math.inf


def raw_moment_even(mu: float, sigma: float, l: int) -> float:
    """``E[X**l]`` for even ``l`` by the direct binomial formula."""
    _check_order(l)
    if l % 2:
        raise DomainError(f"direct formula needs an even order, got {l}")
    terms = []
    dfact = 1.0  # (2i-1)!! == 2**i Gamma(i + 1/2) / sqrt(pi)
    for i in range(l // 2 + 1):
        if i:
            dfact *= 2 * i - 1
        terms.append(math.comb(l, 2 * i) * _pow(mu, l - 2 * i) * _pow(sigma, 2 * i) * dfact)
    return _checked(l, terms)


def abs_moment_split(mu: float, sigma: float, l: int) -> float:
    """``E[|X|**l]`` via the half-line integrals; valid for every order."""
    _check_order(l)
    a = mu / sigma
    upper = i_integrals(l, -a)
    lower = i_integrals(l, a)
    terms = []
    for i in range(l + 1):
        # |x|**l == (-1)**l x**l on the negative half-line
        diff = upper[i] + lower[i] if (l + i) % 2 == 0 else upper[i] - lower[i]
        terms.append(math.comb(l, i) * _pow(mu, l - i) * _pow(sigma, i) * diff)
    return _checked(l, terms)


def gaussian_abs_moment(mu: float, sigma: float, l: int) -> float:
    """``E[|X|**l]`` for ``X ~ N(mu, sigma)``.

    Raises :class:`NonFiniteMoment` when the evaluation overflows or
    cancellation leaves a non-positive result.
    """
    _check_order(l)
    if not sigma > 0.0:
        raise DomainError(f"sigma must be positive, got {sigma!r}")
    if l == 0:
        return 1.0
    value = raw_moment_even(mu, sigma, l) if l % 2 == 0 else abs_moment_split(mu, sigma, l)
    if not value > 0.0:
        raise NonFiniteMoment(l, "non-positive result after cancellation")
    return value


def mixture_abs_moment(g: Gmm, l: int, delta: float = 0.0) -> float:
    """``E[|X - delta|**l]``; the shift is applied to the means on the fly."""
    _check_order(l)
    if l == 0:
        return 1.0
    return _checked(
        l,
        (
            w * gaussian_abs_moment(m - delta, s, l)
            for w, m, s in zip(g.weights, g.means, g.sigmas)
        ),
    )


def _check_weights_sigmas(weights, sigmas):
    Gmm(tuple(weights), (0.0,) * len(weights), tuple(sigmas))
    return [float(w) for w in weights], [float(s) for s in sigmas]


def log_z(l: int) -> float:
    """log of ``E[|Z|**l]`` for a standard normal: ``2**(l/2) Gamma((l+1)/2) / sqrt(pi)``."""
    return 0.5 * l * math.log(2.0) + log_gamma(0.5 * (l + 1)) - 0.5 * math.log(math.pi)


def _log_weighted_power_sum(weights, sigmas, l: int) -> float:
    # log sum w_i sigma_i**l, scaled by the largest sigma to avoid overflow
    logs = [math.log(s) for s in sigmas]
    top = max(logs)
    return l * top + math.log(math.fsum(w * math.exp(l * (ls - top)) for w, ls in zip(weights, logs)))


def power_mean(weights, sigmas, l: int) -> float:
    """``(sum_i w_i sigma_i**l) ** (1/l)``."""
    if isinstance(l, bool) or not isinstance(l, int) or l < 1:
        raise DomainError(f"power mean order must be a positive integer, got {l!r}")
    w, s = _check_weights_sigmas(weights, sigmas)
    w = [v / math.fsum(w) for v in w]
    return math.exp(_log_weighted_power_sum(w, s, l) / l)


def zero_centered_even_moment(weights, sigmas, l: int) -> float:
    """``z_l * sum_i w_i sigma_i**l`` for a mixture with all means at zero."""
    _check_order(l)
    if l < 2 or l % 2:
        raise DomainError(f"order must be even and >= 2, got {l}")
    return math.exp(log_z(l) + l * math.log(power_mean(weights, sigmas, l)))


def rayleigh_mixture_raw_moment(weights, sigmas, l: int) -> float:
    """``E[X**l]`` for ``sum_i w_i Rayleigh(sigma_i)``.

    ``2**(l/2) Gamma(1 + l/2) sum_i w_i sigma_i**l``; the weights enter by
    linearity of expectation.
    """
    _check_order(l)
    w, s = _check_weights_sigmas(weights, sigmas)
    total = math.fsum(w)
    return 2.0 ** (0.5 * l) * math.gamma(1.0 + 0.5 * l) * math.fsum(
        (wi / total) * si**l for wi, si in zip(w, s)
    )


# -- sampling --------------------------------------------------------------


def _check_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise DomainError(f"seed must be an integer, got {seed!r}")
    seed = int(seed)
    if not 0 <= seed < _U64:
        raise DomainError(f"seed must fit in an unsigned 64-bit integer, got {seed}")
    return seed


def chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    """Generator for chunk ``chunk`` of the stream rooted at ``seed``.

    Chunks are independent substreams, so any split of the work across
    workers reproduces the same draws.
    """
    return np.random.default_rng(np.random.SeedSequence(_check_seed(seed), spawn_key=(chunk,)))


def _sample_chunk(g: Gmm, m: int, rng: np.random.Generator) -> np.ndarray:
    cum = np.cumsum(g.weights)
    comp = np.minimum(np.searchsorted(cum, rng.random(m), side="right"), g.k - 1)
    z = rng.standard_normal(m)
    return np.asarray(g.means)[comp] + np.asarray(g.sigmas)[comp] * z


def sample_chunks(g: Gmm, n: int, seed: int):
    """Yield ``(chunk_index, draws)`` covering ``n`` samples in order."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError(f"sample count must be >= 1, got {n!r}")
    nchunks = -(-int(n) // SAMPLE_CHUNK)
    for c in range(nchunks):
        m = min(SAMPLE_CHUNK, n - c * SAMPLE_CHUNK)
        yield c, _sample_chunk(g, m, chunk_rng(seed, c))


def sample(g: Gmm, n: int, seed: int) -> np.ndarray:
    """``n`` iid draws; component by inverse-CDF on the weights, then a normal draw."""
    return np.concatenate([x for _, x in sample_chunks(g, n, seed)])
