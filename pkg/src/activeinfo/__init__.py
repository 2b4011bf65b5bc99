"""Exact hypothesis tests for active information, log(p / q)."""

from .dists import (
    COIN,
    CriticalMode,
    EventProb,
    ReferenceModel,
    UniformN,
    actinfo,
    cdf_one_sided,
    cdf_two_sided,
    critical_one_sided,
    critical_two_sided,
    parse_reference,
    pdf_two_sided,
    tail_one_sided,
    tail_two_sided,
)
from .engine import Sidedness, TestResult, TestSpec, log_pvalue_ratio, run_test, run_test_on_statistic
from .errors import DomainError, PreconditionError, ShapeError, UnsupportedModeError
from .priors import Beta, Empirical, Prior, Uniform01, prior_cdf, prior_quantile, prior_sample
from .units import BITS, NATS, InfoUnit, InfoValue, convert, log_in_unit, nits, parse_unit

__version__ = "0.1.0"
