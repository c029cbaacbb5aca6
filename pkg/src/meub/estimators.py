"""Monte-Carlo and quadrature oracles for mixture entropies and moments.

Quadrature runs adaptive Simpson over the union of per-component windows
``[mu_i - K sigma_i, mu_i + K sigma_i]``.  Every window edge and component
mean is kept as a breakpoint, so a near-degenerate component gets its own
panels instead of hiding between the nodes of a wide one.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError
from .gmm import SAMPLE_CHUNK, Gmm, _check_seed, _sample_chunk, chunk_rng

INITIAL_PANELS = 8
MAX_ACTIVE_PANELS = 1 << 20
RESOLUTION_ULPS = 1024


@dataclass(frozen=True)
class McConfig:
    samples: int
    seed: int

    def __post_init__(self):
        if isinstance(self.samples, bool) or not isinstance(self.samples, int) or self.samples < 1:
            raise DomainError(f"samples must be a positive integer, got {self.samples!r}")
        _check_seed(self.seed)


@dataclass(frozen=True)
class QuadConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_depth: int = 60
    tail_width: float = 12.0

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if not self.tail_width >= 6:
            raise DomainError(f"tail_width must be >= 6, got {self.tail_width!r}")
        if self.max_depth < 1:
            raise DomainError("max_depth must be >= 1")


# -- quadrature ------------------------------------------------------------


def adaptive_simpson(f, segments, rel_tol=1e-10, abs_tol=1e-12, max_depth=60):
    """Integrate vectorized ``f`` over a list of ``(a, b)`` segments.

    Panels are refined level by level.  A panel is accepted once its Simpson
    error estimate is below ``rel_tol`` times its own ``int |f|`` or below its
    width share of ``abs_tol``; summed, the error stays within
    ``abs_tol + rel_tol * int |f|`` while narrow spikes are still resolved.
    Panels narrower than ~1000 ulps of their abscissa are accepted as is.
    Returns ``(value, error)``.
    """
    edges = []
    for a, b in segments:
        if b > a:
            edges.append(np.linspace(a, b, INITIAL_PANELS + 1))
    if not edges:
        return 0.0, 0.0
    lo = np.concatenate([e[:-1] for e in edges])
    hi = np.concatenate([e[1:] for e in edges])
    total_width = float(np.sum(hi - lo))

    mid = 0.5 * (lo + hi)
    flo, fmid, fhi = f(lo), f(mid), f(hi)
    whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    accepted, errors = [], []
    depth = 0
    while lo.size:
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = f(lm), f(rm)
        h = (hi - lo) / 12.0
        left = h * (flo + 4.0 * flm + fmid)
        right = h * (fmid + 4.0 * frm + fhi)
        err = (left + right - whole) / 15.0
        mass = h * (np.abs(flo) + 4.0 * np.abs(flm) + 2.0 * np.abs(fmid) + 4.0 * np.abs(frm) + np.abs(fhi))
        ok = np.abs(err) <= np.maximum(abs_tol * (hi - lo) / total_width, rel_tol * mass)
        # panels at the resolution of x carry only evaluation noise; stop there
        ok |= (hi - lo) <= RESOLUTION_ULPS * np.spacing(np.maximum(np.abs(lo), np.abs(hi)))
        accepted.append(left[ok] + right[ok] + err[ok])
        errors.append(np.abs(err[ok]))
        todo = ~ok
        if not todo.any():
            break
        depth += 1
        if depth > max_depth or todo.sum() > MAX_ACTIVE_PANELS:
            raise ConvergenceError(
                f"adaptive Simpson stopped at depth {depth} with {int(todo.sum())} unresolved panels"
            )
        # children: [lo, mid] and [mid, hi] of each unresolved panel
        lo = np.concatenate([lo[todo], mid[todo]])
        hi = np.concatenate([mid[todo], hi[todo]])
        flo = np.concatenate([flo[todo], fmid[todo]])
        fhi = np.concatenate([fmid[todo], fhi[todo]])
        fmid = np.concatenate([flm[todo], frm[todo]])
        whole = np.concatenate([left[todo], right[todo]])
        mid = 0.5 * (lo + hi)
    value = math.fsum(np.concatenate(accepted))
    return value, float(np.sum(np.concatenate(errors)))


def integration_segments(g: Gmm, tail_width: float, extra_points=()) -> list:
    """Segments covering the union of component windows, split at every
    window edge, component mean and extra point."""
    windows = [(m - tail_width * s, m + tail_width * s) for m, s in zip(g.means, g.sigmas)]
    points = {p for w in windows for p in w} | set(g.means)
    points |= {p for p in extra_points if any(a < p < b for a, b in windows)}
    points = sorted(points)
    segments = []
    for a, b in zip(points, points[1:]):
        c = 0.5 * (a + b)
        if any(wa <= c <= wb for wa, wb in windows):
            segments.append((a, b))
    return segments


def _neg_m_log_m(g):
    def f(x):
        lp = g.log_pdf(x)
        p = np.exp(lp)
        # 0 log 0 = 0 where the density underflows
        return np.where(p > 0.0, -p * lp, 0.0)
    return f


def quad_entropy(g: Gmm, cfg: QuadConfig = QuadConfig()) -> float:
    """Differential entropy ``-int m log m`` by adaptive quadrature."""
    segments = integration_segments(g, cfg.tail_width)
    value, _ = adaptive_simpson(_neg_m_log_m(g), segments, cfg.rel_tol, cfg.abs_tol, cfg.max_depth)
    return value


def quad_abs_moment(g: Gmm, l: int, delta: float = 0.0, cfg: QuadConfig = QuadConfig()) -> float:
    """``E[|X - delta|**l]`` by adaptive quadrature (kink at ``delta`` is a breakpoint)."""
    if isinstance(l, bool) or not isinstance(l, int) or l < 0:
        raise DomainError(f"moment order must be a non-negative integer, got {l!r}")

    def f(x):
        return np.abs(x - delta) ** l * g.pdf(x)

    segments = integration_segments(g, cfg.tail_width, extra_points=(delta,))
    value, _ = adaptive_simpson(f, segments, cfg.rel_tol, cfg.abs_tol, cfg.max_depth)
    return value


# -- Monte Carlo -----------------------------------------------------------


def _chunk_values(g: Gmm, cfg: McConfig, fn, workers: int) -> np.ndarray:
    n = cfg.samples
    nchunks = -(-n // SAMPLE_CHUNK)

    def one(c):
        m = min(SAMPLE_CHUNK, n - c * SAMPLE_CHUNK)
        return fn(_sample_chunk(g, m, chunk_rng(cfg.seed, c)))

    if workers > 1 and nchunks > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(one, range(nchunks)))
    else:
        parts = [one(c) for c in range(nchunks)]
    return np.concatenate(parts)


def _mean_and_se(values: np.ndarray) -> tuple:
    est = math.fsum(values) / values.size
    if values.size < 2:
        return est, math.nan
    return est, float(np.std(values, ddof=1)) / math.sqrt(values.size)


def mc_entropy(g: Gmm, cfg: McConfig, workers: int = 1) -> tuple:
    """``(H_hat, standard error)`` with ``H_hat = -mean(log m(x_i))``.

    The standard error is NaN for a single sample.
    """
    return _mean_and_se(_chunk_values(g, cfg, lambda x: -g.log_pdf(x), workers))


def mc_abs_moment(g: Gmm, l: int, delta: float, cfg: McConfig, workers: int = 1) -> tuple:
    """``(estimate, standard error)`` of ``E[|X - delta|**l]``."""
    if isinstance(l, bool) or not isinstance(l, int) or l < 0:
        raise DomainError(f"moment order must be a non-negative integer, got {l!r}")
    return _mean_and_se(_chunk_values(g, cfg, lambda x: np.abs(x - delta) ** l, workers))
