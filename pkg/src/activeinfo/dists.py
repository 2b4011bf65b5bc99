"""Exact laws of the active-information statistic log(p / q).

``q`` is the endogenous probability fixed by a :class:`ReferenceModel` and
``p`` is random with a :class:`~activeinfo.priors.Prior` law. Everything is
computed in nats internally; thresholds expressed as :class:`InfoValue` are
converted on entry, bare floats are read as nats.

CDFs, tails and the density accept scalars or numpy arrays.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, UnsupportedModeError
from .priors import Prior, Uniform01, prior_cdf, prior_quantile
from .units import NATS, InfoUnit, InfoValue, convert, log_in_unit

__all__ = [
    "ReferenceModel",
    "UniformN",
    "EventProb",
    "CriticalMode",
    "COIN",
    "parse_reference",
    "actinfo",
    "cdf_one_sided",
    "tail_one_sided",
    "cdf_two_sided",
    "pdf_two_sided",
    "tail_two_sided",
    "critical_one_sided",
    "critical_two_sided",
]


class ReferenceModel:
    """Endogenous model; ``q_eff`` is the baseline probability of the target."""

    q_eff: float

    @property
    def max_nats(self) -> float:
        """Upper end of the statistic's support, -ln q_eff."""
        return -math.log(self.q_eff)


@dataclass(frozen=True)
class UniformN(ReferenceModel):
    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)) or self.n < 2:
            raise DomainError(f"UniformN needs an integer N >= 2, got {self.n!r}")

    @property
    def q_eff(self) -> float:
        return 1.0 / self.n

    def __str__(self):
        return f"uniform:{self.n}"


@dataclass(frozen=True)
class EventProb(ReferenceModel):
    q: float

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise DomainError(f"EventProb needs 0 < q < 1, got {self.q!r}")

    @property
    def q_eff(self) -> float:
        return float(self.q)

    def __str__(self):
        return f"event:{self.q!r}"


COIN = UniformN(2)


class CriticalMode(enum.Enum):
    EXACT = "exact"
    PAPER_TABLE = "paper-table"


def parse_reference(text: str) -> ReferenceModel:
    """Parse ``uniform:N`` or ``event:q``."""
    kind, _, arg = text.strip().partition(":")
    try:
        if kind == "uniform":
            return UniformN(int(arg))
        if kind == "event":
            return EventProb(float(arg))
    except ValueError:
        raise DomainError(f"bad reference parameter in {text!r}") from None
    raise DomainError(f"unknown reference {text!r}; expected uniform:N or event:q")


def _nats(x):
    if isinstance(x, InfoValue):
        return x.nats
    return x


def _out(arr):
    arr = np.asarray(arr, dtype=float)
    return float(arr) if arr.ndim == 0 else arr


def _check_alpha(alpha):
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")


def _check_nonneg(n):
    if np.any(~(n >= 0)):
        raise DomainError("two-sided threshold must be >= 0 nats")


def actinfo(p: float, ref: ReferenceModel, unit: InfoUnit = NATS) -> InfoValue:
    """Active information log(p / q_eff) of an observed probability ``p``."""
    if not 0.0 < p <= 1.0:
        raise DomainError(f"p must lie in (0, 1], got {p!r}")
    if isinstance(ref, UniformN):
        # log(p * N) keeps the exact zero at p = 1/N
        return InfoValue(log_in_unit(p * ref.n, unit), unit)
    return InfoValue(log_in_unit(p / ref.q_eff, unit), unit)


def cdf_one_sided(x, ref: ReferenceModel, prior: Prior = Uniform01()):
    """P[I+ <= x], i.e. F(q e^x) with x in nats, capped at 1 above the support."""
    n = np.asarray(_nats(x), dtype=float)
    q = ref.q_eff
    with np.errstate(over="ignore"):
        arg = np.minimum(q * np.exp(np.minimum(n, ref.max_nats + 1.0)), 1.0)
    arg = np.where(n >= ref.max_nats, 1.0, arg)
    if isinstance(prior, Uniform01):
        return _out(arg)
    return _out(prior_cdf(prior, arg))


def tail_one_sided(x, ref: ReferenceModel, prior: Prior = Uniform01()):
    """P[I+ > x]."""
    return _out(1.0 - np.asarray(cdf_one_sided(x, ref, prior)))


def cdf_two_sided(n, ref: ReferenceModel, prior: Prior = Uniform01()):
    """P[|I+| <= n] for ``n`` >= 0 nats.

    For the uniform prior this is 2 q sinh(n) up to n = -ln q and
    1 - q e^(-n) beyond.
    """
    n = np.asarray(_nats(n), dtype=float)
    _check_nonneg(n)
    q = ref.q_eff
    kink = ref.max_nats
    if isinstance(prior, Uniform01):
        inner = 2.0 * q * np.sinh(np.minimum(n, kink))
        outer = 1.0 - q * np.exp(-n)
        return _out(np.clip(np.where(n <= kink, inner, outer), 0.0, 1.0))
    upper = np.where(n >= kink, 1.0, q * np.exp(np.minimum(n, kink)))
    lower = q * np.exp(-n)
    out = np.asarray(prior_cdf(prior, upper)) - np.asarray(prior_cdf(prior, lower))
    return _out(np.clip(out, 0.0, 1.0))


def tail_two_sided(n, ref: ReferenceModel, prior: Prior = Uniform01()):
    """P[|I+| > n] for ``n`` >= 0 nats."""
    return _out(1.0 - np.asarray(cdf_two_sided(n, ref, prior)))


def pdf_two_sided(n, ref: ReferenceModel):
    """Density of |I+| in nats under the uniform prior.

    2 q cosh(n) below the kink at -ln q and q e^(-n) above it; for the coin
    the inner branch is the catenary cosh(n).
    """
    n = np.asarray(_nats(n), dtype=float)
    _check_nonneg(n)
    q = ref.q_eff
    kink = ref.max_nats
    inner = 2.0 * q * np.cosh(np.minimum(n, kink))
    outer = q * np.exp(-n)
    return _out(np.where(n <= kink, inner, outer))


def critical_one_sided(
    alpha: float, ref: ReferenceModel, prior: Prior = Uniform01(), unit: InfoUnit = NATS
) -> InfoValue:
    """Smallest threshold t with P[I+ > t] <= alpha."""
    _check_alpha(alpha)
    if isinstance(prior, Uniform01):
        n = math.log1p(-alpha) - math.log(ref.q_eff)
    else:
        n = math.log(prior_quantile(prior, 1.0 - alpha)) - math.log(ref.q_eff)
    return convert(InfoValue(n, NATS), unit)


def _paper_table_critical(alpha):
    # ln(1 - a + sqrt((1 - a)^2 + 1)) == asinh(1 - a), applied for every alpha
    return math.asinh(1.0 - alpha)


def critical_two_sided(
    alpha: float,
    ref: ReferenceModel,
    prior: Prior = Uniform01(),
    mode: CriticalMode = CriticalMode.EXACT,
    unit: InfoUnit = NATS,
) -> InfoValue:
    """Two-sided critical value n* (nats unless ``unit`` says otherwise).

    EXACT solves P[|I+| > n*] = alpha. PAPER_TABLE reproduces the published
    coin table, which uses asinh(1 - alpha) for every alpha; it agrees with
    EXACT for alpha >= 1/4 only.
    """
    _check_alpha(alpha)
    q = ref.q_eff
    if mode is CriticalMode.PAPER_TABLE:
        if q != 0.5 or not isinstance(prior, Uniform01):
            raise UnsupportedModeError(
                "paper-table mode covers only the coin reference with a uniform prior"
            )
        return convert(InfoValue(_paper_table_critical(alpha), NATS), unit)
    if isinstance(prior, Uniform01):
        if alpha >= q * q:
            n = math.asinh((1.0 - alpha) / (2.0 * q))
        else:
            n = math.log(q / alpha)
        return convert(InfoValue(n, NATS), unit)

    hi = ref.max_nats + 60.0
    if tail_two_sided(hi, ref, prior) > alpha:
        return InfoValue(math.inf, unit)
    n = brentq(
        lambda t: tail_two_sided(t, ref, prior) - alpha,
        0.0,
        hi,
        xtol=1e-14,
        rtol=4 * np.finfo(float).eps,
        maxiter=500,
    )
    return convert(InfoValue(n, NATS), unit)
