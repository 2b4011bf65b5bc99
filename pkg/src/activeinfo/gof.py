"""Total absolute log-ratio between two full-support distributions.

For discrete inputs the statistic is sum_i |log(p_i / q_i)| (counting measure);
for densities sampled on a uniform grid it is the trapezoid rule applied to
|log(p(x) / q(x))|. No null distribution is attached; simulate one with
:mod:`activeinfo.oracle` if needed.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError, ShapeError
from .oracle import read_column
from .units import NATS, InfoUnit, log_in_unit

__all__ = [
    "Discrete",
    "Grid",
    "gof_statistic",
    "singleton_bound_check",
    "event_active_info",
    "read_pair_csv",
]


def _positive_pair(p, q):
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.ndim != 1 or q.ndim != 1 or p.shape != q.shape:
        raise ShapeError(f"length mismatch: {p.size} vs {q.size}")
    if p.size == 0:
        raise ShapeError("inputs are empty")
    if np.any(~(p > 0)) or np.any(~(q > 0)):
        raise DomainError("every point needs strictly positive mass or density")
    return p, q


@dataclass(frozen=True)
class Discrete:
    p: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        p, q = _positive_pair(self.p, self.q)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)


@dataclass(frozen=True)
class Grid:
    """Densities sampled at equally spaced points; not renormalized."""

    p_vals: np.ndarray
    q_vals: np.ndarray
    step: float

    def __post_init__(self):
        p, q = _positive_pair(self.p_vals, self.q_vals)
        if not self.step > 0:
            raise DomainError(f"grid step must be positive, got {self.step!r}")
        object.__setattr__(self, "p_vals", p)
        object.__setattr__(self, "q_vals", q)


def gof_statistic(data, unit: InfoUnit = NATS) -> float:
    if isinstance(data, Discrete):
        return float(np.sum(np.abs(log_in_unit(data.p / data.q, unit))))
    if isinstance(data, Grid):
        y = np.abs(np.atleast_1d(log_in_unit(data.p_vals / data.q_vals, unit)))
        if y.size == 1:
            return 0.0
        return float(data.step * (y.sum() - 0.5 * (y[0] + y[-1])))
    raise TypeError(f"expected Discrete or Grid, got {type(data).__name__}")


def singleton_bound_check(data: Discrete, unit: InfoUnit = NATS) -> bool:
    """Whether every singleton's |log-ratio| is at most the total statistic."""
    if not isinstance(data, Discrete):
        raise TypeError("singleton bound applies to discrete inputs")
    terms = np.abs(log_in_unit(data.p / data.q, unit))
    return bool(np.max(terms) <= gof_statistic(data, unit))


def event_active_info(data: Discrete, event, unit: InfoUnit = NATS) -> float:
    """log(P_p(E) / P_q(E)) for an event given as indices or a boolean mask."""
    idx = np.asarray(event)
    if idx.dtype != bool:
        idx = np.unique(idx.astype(int))
    pe = data.p[idx].sum()
    qe = data.q[idx].sum()
    if pe <= 0 or qe <= 0:
        raise DomainError("event is empty")
    return log_in_unit(pe / qe, unit)


def read_pair_csv(path):
    """Read a two-column ``p,q`` CSV; a non-numeric first row is taken as a header."""
    ps, qs = [], []
    with Path(path).open(encoding="utf-8", newline="") as fh:
        for i, row in enumerate(csv.reader(fh)):
            row = [c.strip() for c in row if c.strip()]
            if not row:
                continue
            if len(row) != 2:
                raise ShapeError(f"{path}:{i + 1}: expected 2 columns, got {len(row)}")
            try:
                ps.append(float(row[0]))
                qs.append(float(row[1]))
            except ValueError:
                if i == 0:
                    continue
                raise DomainError(f"{path}:{i + 1}: not numeric: {row}") from None
    return ps, qs


def read_pair_files(p_path, q_path):
    return read_column(p_path), read_column(q_path)
