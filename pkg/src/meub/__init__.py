"""Closed-form maximum-entropy upper bounds on the differential entropy of
univariate Gaussian mixtures."""

__version__ = "0.1.0"

from .amef import Amef, LocationScaleAmef
from .bounds import (
    BoundSeries,
    TightnessReport,
    bound_series,
    meub,
    optimize_shift,
    tightness_report,
    u1_laplacian,
    u2_gaussian,
)
from .errors import (
    ConvergenceError,
    DomainError,
    EmptySeriesError,
    InvalidMixtureError,
    MeubError,
    MixtureParseError,
    NonFiniteMoment,
)
from .estimators import McConfig, QuadConfig, mc_entropy, quad_entropy
from .gmm import Gmm, gaussian_abs_moment, load_mixture, mixture_abs_moment, parse_mixture
