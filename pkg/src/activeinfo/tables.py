"""Rejection-region tables in CSV or markdown."""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import ROUND_DOWN, ROUND_HALF_EVEN, Decimal

from .dists import COIN, CriticalMode, ReferenceModel, critical_one_sided, critical_two_sided
from .engine import Sidedness
from .errors import DomainError
from .priors import Prior, Uniform01
from .units import BITS, NATS

__all__ = ["TableSpec", "PRESETS", "generate_table", "table_rows", "format_number"]

# "down" truncates toward zero, which is how the published tables were printed.
_ROUNDING = {"half-even": ROUND_HALF_EVEN, "down": ROUND_DOWN}


@dataclass(frozen=True)
class TableSpec:
    alphas: tuple
    sidedness: Sidedness
    ref: ReferenceModel = COIN
    prior: Prior = field(default_factory=Uniform01)
    mode: CriticalMode = CriticalMode.EXACT
    units: tuple = (NATS,)
    format: str = "csv"
    precision: int | None = 4
    rounding: str = "half-even"

    def __post_init__(self):
        if not self.alphas:
            raise DomainError("table needs at least one alpha")
        for i, a in enumerate(self.alphas):
            if not 0.0 < a < 1.0:
                hint = " (the alpha = 0 row has no finite critical value)" if a == 0 else ""
                raise DomainError(f"row {i + 1}: alpha = {a!r} is outside (0, 1){hint}")
        if not self.units:
            raise DomainError("table needs at least one unit column")
        if self.rounding not in _ROUNDING:
            raise DomainError(f"unknown rounding {self.rounding!r}")
        if self.format not in ("csv", "markdown"):
            raise DomainError(f"unknown table format {self.format!r}")


PRESETS = {
    "supp-table-1": TableSpec(
        alphas=(0.5, 0.49, 0.45, 0.4, 0.1, 0.05, 0.01, 0.001),
        sidedness=Sidedness.ONE_SIDED_UPPER,
        units=(BITS, NATS),
    ),
    "supp-table-2": TableSpec(
        alphas=(0.5, 0.49, 0.45, 0.4, 0.25, 0.1, 0.05, 0.01, 0.001),
        sidedness=Sidedness.TWO_SIDED,
        mode=CriticalMode.PAPER_TABLE,
        units=(NATS, BITS),
    ),
}


def format_number(x: float, precision: int | None, rounding: str = "half-even") -> str:
    """Round to ``precision`` decimals; ``None`` gives full precision."""
    if precision is None:
        return repr(float(x))
    if x == float("inf"):
        return "inf"
    d = Decimal(repr(float(x))).quantize(Decimal(1).scaleb(-precision), rounding=_ROUNDING[rounding])
    if d.is_zero():
        d = abs(d)
    return f"{d:f}"


def table_rows(spec: TableSpec) -> list:
    """Unrounded rows ``[alpha, value_unit1, value_unit2, ...]``."""
    rows = []
    for a in spec.alphas:
        if spec.sidedness is Sidedness.ONE_SIDED_UPPER:
            vals = [critical_one_sided(a, spec.ref, spec.prior, u).value for u in spec.units]
        else:
            crit = critical_two_sided(a, spec.ref, spec.prior, spec.mode)
            vals = [crit.to(u).value for u in spec.units]
        rows.append([a] + vals)
    return rows


def generate_table(spec: TableSpec) -> str:
    header = ["alpha"] + [str(u) for u in spec.units]
    body = [
        [repr(float(row[0]))] + [format_number(v, spec.precision, spec.rounding) for v in row[1:]]
        for row in table_rows(spec)
    ]
    if spec.format == "csv":
        return "".join(",".join(r) + "\n" for r in [header] + body)
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(r) + " |" for r in body]
    return "\n".join(lines) + "\n"
