"""Hypothesis tests on active information: p-values, critical values, verdicts."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .dists import (
    COIN,
    CriticalMode,
    ReferenceModel,
    critical_one_sided,
    critical_two_sided,
    tail_one_sided,
    tail_two_sided,
    actinfo,
)
from .errors import DomainError
from .priors import Prior, Uniform01
from .units import NATS, InfoUnit, InfoValue, convert, log_in_unit

__all__ = [
    "Sidedness",
    "TestSpec",
    "TestResult",
    "run_test",
    "run_test_on_statistic",
    "log_pvalue_ratio",
    "p_values",
]


class Sidedness(enum.Enum):
    ONE_SIDED_UPPER = "one"
    TWO_SIDED = "two"


@dataclass(frozen=True)
class TestSpec:
    __test__ = False

    sidedness: Sidedness
    alpha: float
    unit: InfoUnit = NATS
    ref: ReferenceModel = COIN
    prior: Prior = field(default_factory=Uniform01)
    mode: CriticalMode = CriticalMode.EXACT

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha!r}")


@dataclass(frozen=True)
class TestResult:
    """Outcome of a test.

    ``reject`` is ``p_value < alpha`` (strict), so a p-value landing exactly on
    alpha does not reject. For a two-sided test ``statistic`` keeps its sign;
    the tail is looked up at its magnitude.
    """

    __test__ = False

    statistic: InfoValue
    p_value: float
    critical_value: InfoValue
    reject: bool
    alpha: float

    @property
    def exceeds_critical(self) -> bool:
        """Whether the statistic lies strictly beyond the critical value."""
        stat = abs(self.statistic.nats) if self._two_sided else self.statistic.nats
        return stat > self.critical_value.nats

    _two_sided: bool = field(default=False, repr=False)

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic.value,
            "unit": str(self.statistic.unit),
            "p_value": self.p_value,
            "critical_value": self.critical_value.value,
            "alpha": self.alpha,
            "reject": self.reject,
        }


def _critical(spec: TestSpec) -> InfoValue:
    if spec.sidedness is Sidedness.ONE_SIDED_UPPER:
        return critical_one_sided(spec.alpha, spec.ref, spec.prior, spec.unit)
    return critical_two_sided(spec.alpha, spec.ref, spec.prior, spec.mode, spec.unit)


def run_test_on_statistic(stat: InfoValue, spec: TestSpec) -> TestResult:
    stat = convert(stat, spec.unit)
    n = stat.nats
    if spec.sidedness is Sidedness.ONE_SIDED_UPPER:
        p_value = float(tail_one_sided(n, spec.ref, spec.prior))
    else:
        p_value = float(tail_two_sided(abs(n), spec.ref, spec.prior))
    return TestResult(
        statistic=stat,
        p_value=p_value,
        critical_value=_critical(spec),
        reject=p_value < spec.alpha,
        alpha=spec.alpha,
        _two_sided=spec.sidedness is Sidedness.TWO_SIDED,
    )


def run_test(p_obs: float, spec: TestSpec) -> TestResult:
    """Test H0: I+ ~ 0 for an observed exogenous probability ``p_obs``."""
    return run_test_on_statistic(actinfo(p_obs, spec.ref, spec.unit), spec)


def p_values(p_obs, spec: TestSpec) -> np.ndarray:
    """Vectorized p-values for an array of observed probabilities."""
    p = np.asarray(p_obs, dtype=float)
    if np.any(~((p > 0) & (p <= 1))):
        raise DomainError("observed probabilities must lie in (0, 1]")
    n = np.log(p) - math.log(spec.ref.q_eff)
    if spec.sidedness is Sidedness.ONE_SIDED_UPPER:
        return np.asarray(tail_one_sided(n, spec.ref, spec.prior))
    return np.asarray(tail_two_sided(np.abs(n), spec.ref, spec.prior))


def log_pvalue_ratio(p_val: float, alpha: float, unit: InfoUnit = NATS) -> float:
    """log(p_val / alpha); negative exactly when the test rejects."""
    if not 0.0 < p_val <= 1.0:
        raise DomainError(f"p-value must lie in (0, 1], got {p_val!r}")
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    return log_in_unit(p_val / alpha, unit)
