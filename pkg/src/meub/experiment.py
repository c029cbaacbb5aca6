"""Randomized comparison of the Laplacian and Gaussian bounds.

Each trial draws a k-component mixture with means, standard deviations and
(renormalized) weights uniform on (0, 1], recenters it at its mean, estimates
its entropy by Monte Carlo and evaluates U_1 and U_2.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .bounds import u1_laplacian, u2_gaussian
from .errors import DomainError
from .estimators import McConfig, mc_entropy
from .gmm import Gmm, _check_seed

# trials with |H_hat| below this are left out of the relative-excess averages
MIN_ABS_ENTROPY = 1e-3


@dataclass(frozen=True)
class Trial:
    weights: tuple
    means: tuple
    sigmas: tuple
    entropy: float
    entropy_se: float
    u1: float
    u2: float

    @property
    def excluded(self) -> bool:
        return abs(self.entropy) < MIN_ABS_ENTROPY

    def excess(self, bound: float) -> float:
        """``|bound - H_hat| / |H_hat|`` in percent."""
        return abs((bound - self.entropy) / self.entropy) * 100.0


@dataclass(frozen=True)
class ExperimentReport:
    trials: int
    samples: int
    components: int
    seed: int
    mean_excess_u1: float
    mean_excess_u2: float
    beat_fraction: float
    excluded: int
    rows: list = field(default_factory=list, compare=False, repr=False)

    def to_dict(self, include_rows: bool = False) -> dict:
        out = asdict(self)
        out.pop("rows")
        if include_rows:
            out["rows"] = [asdict(r) for r in self.rows]
        return out


def trial_seeds(seed: int, index: int) -> tuple:
    """(parameter generator, Monte-Carlo seed) for trial ``index``."""
    params = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index, 0)))
    mc_seed = int(np.random.SeedSequence(seed, spawn_key=(index, 1)).generate_state(1, np.uint64)[0])
    return params, mc_seed


def draw_mixture(rng: np.random.Generator, k: int) -> Gmm:
    mu = rng.random(k)
    sigma = 1.0 - rng.random(k)
    w = 1.0 - rng.random(k)
    return Gmm(tuple(w / w.sum()), tuple(mu), tuple(sigma))


def run_trial(seed: int, index: int, samples: int, components: int) -> Trial:
    rng, mc_seed = trial_seeds(seed, index)
    g = draw_mixture(rng, components).centered()
    h, se = mc_entropy(g, McConfig(samples, mc_seed))
    return Trial(g.weights, g.means, g.sigmas, h, se, u1_laplacian(g), u2_gaussian(g))


def run_experiment(trials: int, samples: int, seed: int, components: int = 2,
                   workers: int = 1) -> ExperimentReport:
    """Run ``trials`` independent trials; the report does not depend on ``workers``."""
    for name, v in (("trials", trials), ("samples", samples), ("components", components)):
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise DomainError(f"{name} must be a positive integer, got {v!r}")
    seed = _check_seed(seed)

    def one(i):
        return run_trial(seed, i, samples, components)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, range(trials)))
    else:
        rows = [one(i) for i in range(trials)]

    kept = [r for r in rows if not r.excluded]
    nan = math.nan
    return ExperimentReport(
        trials=trials,
        samples=samples,
        components=components,
        seed=seed,
        mean_excess_u1=math.fsum(r.excess(r.u1) for r in kept) / len(kept) if kept else nan,
        mean_excess_u2=math.fsum(r.excess(r.u2) for r in kept) / len(kept) if kept else nan,
        beat_fraction=sum(r.u1 < r.u2 for r in rows) / trials,
        excluded=len(rows) - len(kept),
        rows=rows,
    )
