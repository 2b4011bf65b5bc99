"""Prior distributions for the exogenous probability ``p`` on (0, 1].

Three variants are supported: the default continuous uniform, Beta(a, b) and a
piecewise-linear empirical CDF. All CDF and quantile functions accept scalars
or numpy arrays.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError

__all__ = [
    "Prior",
    "Uniform01",
    "Beta",
    "Empirical",
    "betainc",
    "prior_cdf",
    "prior_pdf",
    "prior_quantile",
    "prior_sample",
    "prior_from_dict",
    "parse_prior",
]

# Smallest positive normal double; draws that would land on 0 are moved here.
P_FLOOR = np.finfo(float).tiny

_CF_EPS = 1e-15
_CF_MAXIT = 300
_FPMIN = 1e-300


class Prior:
    """Base class for priors on (0, 1]."""

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Uniform01(Prior):
    def to_dict(self):
        return {"type": "uniform"}


@dataclass(frozen=True)
class Beta(Prior):
    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0) or not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise DomainError(f"Beta prior needs a > 0 and b > 0, got a={self.a}, b={self.b}")

    def to_dict(self):
        return {"type": "beta", "a": self.a, "b": self.b}


@dataclass(frozen=True)
class Empirical(Prior):
    """Tabulated CDF ``[(p_i, F_i), ...]`` interpolated linearly.

    An implicit knot at (0, 0) precedes the first row.
    """

    table: tuple

    def __post_init__(self):
        rows = tuple((float(p), float(f)) for p, f in self.table)
        if not rows:
            raise DomainError("empirical prior table is empty")
        ps = np.array([r[0] for r in rows])
        fs = np.array([r[1] for r in rows])
        if ps[0] <= 0 or ps[-1] > 1:
            raise DomainError("empirical prior knots must lie in (0, 1]")
        if np.any(np.diff(ps) <= 0):
            raise DomainError("empirical prior knots must be strictly increasing")
        if np.any(fs < 0) or np.any(np.diff(fs) < 0):
            raise DomainError("empirical prior CDF values must be nondecreasing and >= 0")
        if fs[-1] != 1.0:
            raise DomainError("empirical prior table must end with F = 1")
        object.__setattr__(self, "table", rows)

    @property
    def knots(self):
        ps = np.array([0.0] + [r[0] for r in self.table])
        fs = np.array([0.0] + [r[1] for r in self.table])
        return ps, fs

    def to_dict(self):
        return {"type": "empirical", "table": [list(r) for r in self.table]}


def prior_from_dict(spec: dict) -> Prior:
    """Build a prior from its JSON form, e.g. ``{"type": "beta", "a": 0.5, "b": 0.5}``."""
    kind = spec.get("type")
    if kind == "uniform":
        return Uniform01()
    if kind == "beta":
        try:
            return Beta(float(spec["a"]), float(spec["b"]))
        except KeyError as e:
            raise DomainError(f"beta prior missing field {e.args[0]!r}") from None
    if kind == "empirical":
        if "table" not in spec:
            raise DomainError("empirical prior missing 'table'")
        return Empirical(tuple(tuple(row) for row in spec["table"]))
    raise DomainError(f"unknown prior type {kind!r}")


def parse_prior(text: str) -> Prior:
    """Parse ``uniform``, ``beta:a,b``, ``empirical:path.json`` or an inline JSON object."""
    text = text.strip()
    if text.startswith("{"):
        try:
            return prior_from_dict(json.loads(text))
        except json.JSONDecodeError as e:
            raise DomainError(f"bad prior JSON: {e}") from None
    if text == "uniform":
        return Uniform01()
    if text.startswith("beta:"):
        parts = text[5:].split(",")
        if len(parts) != 2:
            raise DomainError(f"expected beta:a,b, got {text!r}")
        try:
            return Beta(float(parts[0]), float(parts[1]))
        except ValueError:
            raise DomainError(f"bad Beta parameters in {text!r}") from None
    if text.startswith("empirical:"):
        path = Path(text[len("empirical:"):])
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise DomainError(f"cannot read empirical prior {path}: {e}") from None
        if isinstance(data, list):
            data = {"type": "empirical", "table": data}
        return prior_from_dict(data)
    raise DomainError(f"unknown prior {text!r}")


def _lbeta(a, b):
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def _betacf(a, b, x):
    """Continued fraction for I_x(a, b) by the modified Lentz method (array x)."""
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = np.ones_like(x)
    d = 1.0 - qab * x / qap
    d = np.where(np.abs(d) < _FPMIN, _FPMIN, d)
    d = 1.0 / d
    h = d.copy()
    active = np.arange(x.size)
    for m in range(1, _CF_MAXIT + 1):
        xa = x[active]
        ca, da, ha = c[active], d[active], h[active]
        m2 = 2 * m
        aa = m * (b - m) * xa / ((qam + m2) * (a + m2))
        da = 1.0 + aa * da
        da = np.where(np.abs(da) < _FPMIN, _FPMIN, da)
        ca = 1.0 + aa / ca
        ca = np.where(np.abs(ca) < _FPMIN, _FPMIN, ca)
        da = 1.0 / da
        ha = ha * da * ca
        aa = -(a + m) * (qab + m) * xa / ((a + m2) * (qap + m2))
        da = 1.0 + aa * da
        da = np.where(np.abs(da) < _FPMIN, _FPMIN, da)
        ca = 1.0 + aa / ca
        ca = np.where(np.abs(ca) < _FPMIN, _FPMIN, ca)
        da = 1.0 / da
        delta = da * ca
        ha = ha * delta
        c[active], d[active], h[active] = ca, da, ha
        active = active[np.abs(delta - 1.0) >= _CF_EPS]
        if active.size == 0:
            return h
    raise ArithmeticError(
        f"incomplete beta continued fraction did not converge for a={a}, b={b}"
    )


def betainc(a: float, b: float, x):
    """Regularized incomplete beta function I_x(a, b).

    Uses the continued fraction directly below x = (a+1)/(a+b+2) and the
    symmetry I_x(a, b) = 1 - I_{1-x}(b, a) above it.
    """
    xs = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    flat = xs.ravel()
    out = np.empty_like(flat)
    out[flat <= 0.0] = 0.0
    out[flat >= 1.0] = 1.0
    inner = (flat > 0.0) & (flat < 1.0)
    lb = _lbeta(a, b)
    switch = (a + 1.0) / (a + b + 2.0)
    lo = inner & (flat < switch)
    hi = inner & ~lo
    if lo.any():
        xv = flat[lo]
        front = np.exp(a * np.log(xv) + b * np.log1p(-xv) - lb)
        out[lo] = front * _betacf(a, b, xv) / a
    if hi.any():
        xv = flat[hi]
        yv = 1.0 - xv
        front = np.exp(b * np.log(yv) + a * np.log(xv) - lb)
        out[hi] = 1.0 - front * _betacf(b, a, yv) / b
    out = np.clip(out, 0.0, 1.0).reshape(xs.shape)
    return float(out) if out.ndim == 0 else out


def _scalar_or_array(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


def prior_cdf(prior: Prior, p):
    """P[p' <= p] under ``prior``; arguments outside (0, 1] are clamped."""
    x = np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
    if isinstance(prior, Uniform01):
        out = x
    elif isinstance(prior, Beta):
        out = np.asarray(betainc(prior.a, prior.b, x))
    elif isinstance(prior, Empirical):
        ps, fs = prior.knots
        out = np.interp(x, ps, fs)
    else:
        raise TypeError(f"not a prior: {prior!r}")
    return _scalar_or_array(out)


def prior_pdf(prior: Prior, p):
    """Density of ``prior`` at ``p`` (0 outside (0, 1])."""
    x = np.asarray(p, dtype=float)
    inside = (x > 0) & (x <= 1)
    if isinstance(prior, Uniform01):
        out = np.where(inside, 1.0, 0.0)
    elif isinstance(prior, Beta):
        a, b = prior.a, prior.b
        xc = np.clip(x, P_FLOOR, 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            logd = (a - 1.0) * np.log(xc) + (b - 1.0) * np.log1p(-xc) - _lbeta(a, b)
            out = np.where(inside, np.exp(logd), 0.0)
    elif isinstance(prior, Empirical):
        ps, fs = prior.knots
        slopes = np.diff(fs) / np.diff(ps)
        idx = np.clip(np.searchsorted(ps, x, side="left") - 1, 0, len(slopes) - 1)
        out = np.where(inside, slopes[idx], 0.0)
    else:
        raise TypeError(f"not a prior: {prior!r}")
    return _scalar_or_array(out)


def _beta_quantile(a, b, u):
    # Newton steps safeguarded by a shrinking bisection bracket.
    x = np.clip(u, 1e-3, 1 - 1e-3)
    lo = np.zeros_like(u)
    hi = np.ones_like(u)
    out = np.empty_like(u)
    active = np.arange(u.size)
    for _ in range(400):
        xa, ua = x[active], u[active]
        f = np.asarray(betainc(a, b, xa)) - ua
        la = np.where(f < 0, xa, lo[active])
        ha = np.where(f > 0, xa, hi[active])
        dens = np.asarray(prior_pdf(Beta(a, b), xa))
        with np.errstate(divide="ignore", invalid="ignore"):
            xn = xa - f / dens
        bad = ~np.isfinite(xn) | (xn <= la) | (xn >= ha)
        xn = np.where(bad, 0.5 * (la + ha), xn)
        done = (
            (f == 0)
            | (np.abs(xn - xa) <= 1e-15 * np.maximum(xa, 1e-300))
            | (ha - la <= 2e-16 * ha)
        )
        xn = np.where(f == 0, xa, xn)
        out[active[done]] = xn[done]
        x[active], lo[active], hi[active] = xn, la, ha
        active = active[~done]
        if active.size == 0:
            return out
    out[active] = x[active]
    return out


def prior_quantile(prior: Prior, u):
    """Inverse of :func:`prior_cdf`: the smallest p in (0, 1] with F(p) >= u."""
    arr = np.asarray(u, dtype=float)
    if np.any(~((arr >= 0) & (arr <= 1))):
        raise DomainError("quantile level must lie in [0, 1]")
    flat = arr.ravel()
    if isinstance(prior, Uniform01):
        out = flat.copy()
    elif isinstance(prior, Beta):
        out = np.empty_like(flat)
        out[flat == 0] = 0.0
        out[flat == 1] = 1.0
        mid = (flat > 0) & (flat < 1)
        if mid.any():
            out[mid] = _beta_quantile(prior.a, prior.b, flat[mid].copy())
    elif isinstance(prior, Empirical):
        ps, fs = prior.knots
        k = np.clip(np.searchsorted(fs, flat, side="left"), 1, len(fs) - 1)
        f0, f1 = fs[k - 1], fs[k]
        p0, p1 = ps[k - 1], ps[k]
        with np.errstate(divide="ignore", invalid="ignore"):
            frac = np.where(f1 > f0, (flat - f0) / (f1 - f0), 0.0)
        out = p0 + frac * (p1 - p0)
        out[flat == 1] = ps[np.searchsorted(fs, 1.0, side="left")]
    else:
        raise TypeError(f"not a prior: {prior!r}")
    out = np.clip(out, P_FLOOR, 1.0).reshape(arr.shape)
    return _scalar_or_array(out)


def prior_sample(prior: Prior, seed, count: int) -> np.ndarray:
    """``count`` draws from ``prior`` by inverse-CDF on uniforms in (0, 1].

    ``seed`` is anything accepted by :func:`numpy.random.default_rng`, including
    a :class:`numpy.random.SeedSequence`.
    """
    if count < 1:
        raise DomainError("sample count must be >= 1")
    rng = np.random.default_rng(seed)
    u = 1.0 - rng.random(count)
    return np.asarray(prior_quantile(prior, u))
