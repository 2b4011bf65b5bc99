"""Seeded Monte Carlo checks for the closed-form laws and the conservation bound.

Sampling is split into fixed-size chunks. Chunk ``i`` draws from the ``i``-th
child of ``SeedSequence(seed)``, so results depend only on (seed, n) and not on
how chunks are scheduled.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dists import ReferenceModel
from .engine import Sidedness, TestSpec, p_values
from .errors import DomainError, PreconditionError
from .priors import Prior, prior_sample
from .units import InfoValue

__all__ = [
    "MCEstimate",
    "DiscreteDist",
    "ConservationRow",
    "empirical_cdf",
    "empirical_critical",
    "quantile_std_error",
    "null_rejection_rate",
    "log_pvalue_bound_check",
    "conservation_lhs_exact",
    "conservation_bound_check",
    "ENUMERATION_LIMIT",
]

CHUNK = 1 << 18
ENUMERATION_LIMIT = 20


@dataclass(frozen=True)
class MCEstimate:
    estimate: float
    std_error: float
    n_samples: int
    seed: int

    @classmethod
    def from_count(cls, hits: int, n: int, seed: int) -> MCEstimate:
        est = hits / n
        return cls(est, math.sqrt(est * (1.0 - est) / n), n, seed)

    def agrees(self, exact: float, k: float = 4.0) -> bool:
        return abs(self.estimate - exact) <= k * self.std_error


@dataclass(frozen=True)
class DiscreteDist:
    """Finite distribution with full support, normalized on construction."""

    probs: tuple

    def __post_init__(self):
        arr = np.asarray(self.probs, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise DomainError("a discrete distribution needs at least one probability")
        if np.any(~(arr > 0)) or not np.all(np.isfinite(arr)):
            raise DomainError("every point must carry positive finite mass")
        arr = arr / arr.sum()
        object.__setattr__(self, "probs", tuple(float(x) for x in arr))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.probs)

    def __len__(self):
        return len(self.probs)

    @classmethod
    def from_file(cls, path) -> DiscreteDist:
        """One probability per line; blank lines and ``#`` comments are skipped."""
        return cls(tuple(read_column(path)))


def read_column(path) -> list:
    values = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            try:
                values.append(float(line))
            except ValueError:
                raise DomainError(f"{path}: not a number: {line!r}") from None
    return values


def _chunk_sizes(n):
    sizes = [CHUNK] * (n // CHUNK)
    if n % CHUNK:
        sizes.append(n % CHUNK)
    return sizes


def _map_chunks(fn, seed, n, workers):
    """Apply ``fn(child_seed, size)`` to each chunk; returns per-chunk results in order."""
    sizes = _chunk_sizes(n)
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(fn, children, sizes))
    return [fn(c, s) for c, s in zip(children, sizes)]


def _stat_nats(p, ref):
    return np.log(p) - math.log(ref.q_eff)


def empirical_cdf(
    threshold,
    sidedness: Sidedness,
    ref: ReferenceModel,
    prior: Prior,
    seed: int,
    n: int,
    workers: int = 1,
) -> MCEstimate:
    """Fraction of prior draws whose statistic (or its magnitude) is <= threshold."""
    if n < 1:
        raise DomainError("n must be >= 1")
    t = threshold.nats if isinstance(threshold, InfoValue) else float(threshold)
    if t == math.inf:
        return MCEstimate(1.0, 0.0, n, seed)

    def count(child, size):
        s = _stat_nats(prior_sample(prior, child, size), ref)
        if sidedness is Sidedness.TWO_SIDED:
            s = np.abs(s)
        return int(np.count_nonzero(s <= t))

    hits = sum(_map_chunks(count, seed, n, workers))
    return MCEstimate.from_count(hits, n, seed)


def empirical_critical(
    alpha: float,
    sidedness: Sidedness,
    ref: ReferenceModel,
    prior: Prior,
    seed: int,
    n: int,
    workers: int = 1,
) -> float:
    """Empirical (1 - alpha)-quantile of the statistic (magnitude if two-sided), in nats."""
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")
    if n < 1000:
        raise DomainError("empirical critical values need n >= 1000")

    def draw(child, size):
        s = _stat_nats(prior_sample(prior, child, size), ref)
        return np.abs(s) if sidedness is Sidedness.TWO_SIDED else s

    sample = np.concatenate(_map_chunks(draw, seed, n, workers))
    return float(np.quantile(sample, 1.0 - alpha))


def quantile_std_error(alpha: float, density: float, n: int) -> float:
    """Asymptotic standard error of a sample (1 - alpha)-quantile."""
    return math.sqrt(alpha * (1.0 - alpha) / n) / density


def null_rejection_rate(spec: TestSpec, seed: int, n: int, workers: int = 1) -> MCEstimate:
    """Rejection frequency of ``spec`` when p_obs is drawn from its own prior."""

    def count(child, size):
        pv = p_values(prior_sample(spec.prior, child, size), spec)
        return int(np.count_nonzero(pv < spec.alpha))

    hits = sum(_map_chunks(count, seed, n, workers))
    return MCEstimate.from_count(hits, n, seed)


def log_pvalue_bound_check(spec: TestSpec, x_grid, seed: int, n: int) -> list:
    """Check P[ln(p_val / alpha) < x] <= alpha e^x under the null, per x in ``x_grid``.

    Returns ``(x, estimate, bound, holds)`` tuples; holds allows 3 standard errors.
    """

    def draw(child, size):
        return p_values(prior_sample(spec.prior, child, size), spec)

    pv = np.concatenate(_map_chunks(draw, seed, n, 1))
    with np.errstate(divide="ignore"):
        ratio = np.log(pv / spec.alpha)
    rows = []
    for x in x_grid:
        est = MCEstimate.from_count(int(np.count_nonzero(ratio < x)), n, seed)
        bound = spec.alpha * math.exp(x)
        rows.append((x, est.estimate, bound, est.estimate <= bound + 3 * est.std_error))
    return rows


@dataclass(frozen=True)
class ConservationRow:
    x: float
    lhs: float
    bound: float
    holds: bool
    std_error: float = 0.0


def _check_conservation_inputs(p: DiscreteDist, v, r):
    v = np.asarray(v, dtype=float)
    if v.shape != (len(p),):
        raise PreconditionError(f"v has {v.size} entries, distribution has {len(p)}")
    if np.any(v < 0) or not np.all(np.isfinite(v)):
        raise PreconditionError("v must be finite and nonnegative")
    if not r > 0:
        raise PreconditionError("r must be positive")
    if v.sum() > r * (1 + 1e-12):
        raise PreconditionError(f"total mass of v ({v.sum()!r}) exceeds r = {r!r}")
    return v


def _score(p, v, r):
    # -ln(r p / v); v = 0 gives -inf, which never reaches any finite x
    with np.errstate(divide="ignore"):
        return np.log(v) - np.log(r * p)


def conservation_lhs_exact(p: DiscreteDist, v, r: float, x: float) -> float:
    """P[-ln(r p(X) / v(X)) >= x] by summing over every outcome."""
    v = _check_conservation_inputs(p, v, r)
    probs = p.array
    return float(probs[_score(probs, v, r) >= x].sum())


def conservation_bound_check(
    p: DiscreteDist,
    v,
    r: float,
    x_grid,
    seed: int = 0,
    n: int = 100_000,
    method: str = "auto",
) -> list:
    """Check P[-ln(r p(X)/v(X)) >= x] <= e^-x on each x of ``x_grid``.

    ``v`` must have total mass at most ``r``. ``method`` is ``"enumerate"``,
    ``"sample"`` or ``"auto"`` (enumerate when the space has at most
    ``ENUMERATION_LIMIT`` points).
    """
    v = _check_conservation_inputs(p, v, r)
    if method == "auto":
        method = "enumerate" if len(p) <= ENUMERATION_LIMIT else "sample"
    probs = p.array
    scores = _score(probs, v, r)
    rows = []
    if method == "enumerate":
        for x in x_grid:
            lhs = float(probs[scores >= x].sum())
            bound = math.exp(-x)
            rows.append(ConservationRow(x, lhs, bound, lhs <= bound * (1 + 1e-12)))
        return rows
    if method != "sample":
        raise DomainError(f"unknown method {method!r}")

    def draw(child, size):
        rng = np.random.default_rng(child)
        return scores[rng.choice(len(probs), size=size, p=probs)]

    sampled = np.concatenate(_map_chunks(draw, seed, n, 1))
    for x in x_grid:
        est = MCEstimate.from_count(int(np.count_nonzero(sampled >= x)), n, seed)
        bound = math.exp(-x)
        rows.append(
            ConservationRow(x, est.estimate, bound, est.estimate <= bound + 3 * est.std_error, est.std_error)
        )
    return rows
