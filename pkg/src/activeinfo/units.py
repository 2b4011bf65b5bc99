"""Information units (bits, nats, N-its) and conversions between them.

Nats are the canonical internal unit. A value ``x`` in base ``B`` is the same
amount of information as ``y`` in base ``C`` whenever ``B**x == C**y``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "InfoUnit",
    "InfoValue",
    "BITS",
    "NATS",
    "nits",
    "convert",
    "log_in_unit",
    "parse_unit",
]


@dataclass(frozen=True)
class InfoUnit:
    """Logarithm base tag. ``kind`` is ``"bits"``, ``"nats"`` or ``"nits"``."""

    kind: str
    n: int | None = None

    def __post_init__(self):
        if self.kind not in ("bits", "nats", "nits"):
            raise DomainError(f"unknown information unit {self.kind!r}")
        if self.kind == "nits":
            if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
                raise DomainError(f"N-its need an integer base, got {self.n!r}")
            if self.n < 2:
                raise DomainError(f"N-its need N >= 2, got {self.n}")
            object.__setattr__(self, "n", int(self.n))
        elif self.n is not None:
            raise DomainError(f"{self.kind} takes no base parameter")

    @property
    def base(self) -> float:
        if self.kind == "bits":
            return 2.0
        if self.kind == "nats":
            return math.e
        return float(self.n)

    @property
    def ln_base(self) -> float:
        """Natural log of the base; the number of nats in one unit."""
        if self.kind == "bits":
            return math.log(2.0)
        if self.kind == "nats":
            return 1.0
        return math.log(self.n)

    def __str__(self):
        return f"nits:{self.n}" if self.kind == "nits" else self.kind


BITS = InfoUnit("bits")
NATS = InfoUnit("nats")


def nits(n: int) -> InfoUnit:
    return InfoUnit("nits", n)


def parse_unit(text: str) -> InfoUnit:
    """Parse ``bits``, ``nats`` or ``nits:N``."""
    text = text.strip().lower()
    if text in ("bits", "nats"):
        return InfoUnit(text)
    if text.startswith("nits:"):
        try:
            n = int(text[5:])
        except ValueError:
            raise DomainError(f"bad N-it base in {text!r}") from None
        return nits(n)
    raise DomainError(f"unknown unit {text!r}; expected bits, nats or nits:N")


@dataclass(frozen=True)
class InfoValue:
    """An amount of information tagged with its unit.

    ``value`` may be ``+inf``, which is absorbing under conversion.
    """

    value: float
    unit: InfoUnit = NATS

    def to(self, unit: InfoUnit) -> InfoValue:
        return convert(self, unit)

    @property
    def nats(self) -> float:
        return self.value * self.unit.ln_base if math.isfinite(self.value) else self.value

    def __float__(self):
        return float(self.value)


def convert(v: InfoValue, target: InfoUnit) -> InfoValue:
    if v.unit == target or not math.isfinite(v.value):
        return InfoValue(float(v.value), target)
    return InfoValue(v.value * v.unit.ln_base / target.ln_base, target)


def log_in_unit(x, unit: InfoUnit = NATS):
    """Logarithm of ``x`` in the base of ``unit``. Accepts scalars or arrays."""
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("logarithm needs strictly positive arguments")
    if unit.kind == "bits":
        out = np.log2(arr)
    elif unit.kind == "nats":
        out = np.log(arr)
    else:
        out = np.log(arr) / math.log(unit.n)
    return float(out) if out.ndim == 0 else out
