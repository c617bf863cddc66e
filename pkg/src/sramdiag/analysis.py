"""Closed-form diagnosis-time and area models.

All times are in ns.  ``t_baseline`` is the serial-interface scheme that
needs ``k`` iterations of its M1 element; ``t_proposed`` is March CW run
through per-memory SPC/PSC pairs, and must agree cycle for cycle with
``controller.run_diagnosis``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

from .errors import DomainError
from .march import ceil_log2

DRF_PAUSE_NS = 200_000_000  # two 100 ms retention pauses


def _positive(**values):
    for name, value in values.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not value > 0:
            raise DomainError(f"{name} must be positive, got {value!r}")


def _positive_int(**values):
    for name, value in values.items():
        if isinstance(value, bool) or not isinstance(value, int) or value < 1:
            raise DomainError(f"{name} must be a positive integer, got {value!r}")


@dataclass(frozen=True)
class CostInputs:
    n: int
    c: int
    t: float
    k: int
    drf_pause_ns: float = DRF_PAUSE_NS

    def __post_init__(self):
        _positive_int(n=self.n, c=self.c, k=self.k)
        _positive(t=self.t)
        if isinstance(self.drf_pause_ns, bool) or not self.drf_pause_ns >= 0:
            raise DomainError(f"drf_pause_ns must be non-negative, got {self.drf_pause_ns!r}")


def t_baseline(inputs):
    """(17k + 9) n c t."""
    return (17 * inputs.k + 9) * inputs.n * inputs.c * inputs.t


def proposed_cycles(n, c):
    _positive_int(n=n, c=c)
    march_c = 5 * n + 5 * c + 5 * n * (c + 1)
    per_background = 3 * n + 3 * c + 2 * n * (c + 1)
    return march_c + per_background * ceil_log2(c)


def t_proposed(n, c, t):
    _positive(t=t)
    return proposed_cycles(n, c) * t


def t_baseline_drf(inputs):
    """Baseline plus 8k extra elements of n c t each and the retention pauses."""
    return t_baseline(inputs) + 8 * inputs.k * inputs.n * inputs.c * inputs.t + inputs.drf_pause_ns


def t_proposed_drf(inputs):
    """Proposed plus the two NWRC elements (2n writes, 2c delivery cycles)."""
    return t_proposed(inputs.n, inputs.c, inputs.t) + (2 * inputs.n + 2 * inputs.c) * inputs.t


def reduction_no_drf(inputs):
    return t_baseline(inputs) / t_proposed(inputs.n, inputs.c, inputs.t)


def reduction_with_drf(inputs):
    return t_baseline_drf(inputs) / t_proposed_drf(inputs)


def estimate_k(total_faults, m1_coverage=0.75, faults_per_iteration=2):
    """M1 iterations the baseline needs to localize ``total_faults`` faults.

    The M1 element sees ``m1_coverage`` of the faults and each iteration
    pins down at most ``faults_per_iteration`` of them.
    """
    if isinstance(total_faults, bool) or not isinstance(total_faults, int) or total_faults < 0:
        raise DomainError(f"total_faults must be a non-negative integer, got {total_faults!r}")
    if not 0 <= m1_coverage <= 1:
        raise DomainError(f"m1_coverage must lie in [0, 1], got {m1_coverage!r}")
    _positive(faults_per_iteration=faults_per_iteration)
    # exact decimal arithmetic so 0.75 * 256 / 2 does not pick up float noise
    k = Fraction(total_faults) * Fraction(str(m1_coverage)) / Fraction(str(faults_per_iteration))
    return max(1, math.ceil(k))


@dataclass(frozen=True)
class CostReport:
    n: int
    c: int
    t: float
    k: int
    t_baseline_ns: float
    t_proposed_ns: float
    r_no_drf: float
    t_baseline_drf_ns: float
    t_proposed_drf_ns: float
    r_with_drf: float
    proposed_cycles: int

    def to_dict(self):
        return asdict(self)


def cost_report(inputs):
    return CostReport(
        n=inputs.n,
        c=inputs.c,
        t=inputs.t,
        k=inputs.k,
        t_baseline_ns=t_baseline(inputs),
        t_proposed_ns=t_proposed(inputs.n, inputs.c, inputs.t),
        r_no_drf=reduction_no_drf(inputs),
        t_baseline_drf_ns=t_baseline_drf(inputs),
        t_proposed_drf_ns=t_proposed_drf(inputs),
        r_with_drf=reduction_with_drf(inputs),
        proposed_cycles=proposed_cycles(inputs.n, inputs.c),
    )


# -- area ---------------------------------------------------------------------


@dataclass(frozen=True)
class AreaCostTable:
    """Transistor-equivalent cost of each cell type, counted in 6T SRAM cells."""

    dff_cells: float = 2
    latch_cells: float = 1
    mux2_cells: float = 1
    mux4_cells: float | None = None  # defaults to two 2:1 muxes

    def __post_init__(self):
        if self.mux4_cells is None:
            object.__setattr__(self, "mux4_cells", 2 * self.mux2_cells)
        for name in ("dff_cells", "latch_cells", "mux2_cells", "mux4_cells"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be non-negative")


@dataclass(frozen=True)
class AreaReport:
    baseline_per_bit: float
    proposed_per_bit: float
    extra_per_bit: float
    io_bits: int
    memory_cells: int
    extra_cells: float
    extra_percent: float
    combined_percent: float
    extra_global_wires: int = 1

    def to_dict(self):
        return asdict(self)


def area_report(cluster, table=None):
    """Interface area per IO bit, and totals over a cluster.

    The baseline serial interface is a latch and a 4:1 mux per bit.  The
    proposed SPC plus PSC is two shift-register flip-flops and two 2:1 muxes
    per bit.  ``extra_percent`` counts only the difference; ``combined_percent``
    counts both interfaces together.  Both are relative to the cluster's
    total cell count.  ``cluster`` is a ClusterConfig or an iterable of
    MemoryGeometry.
    """
    table = table or AreaCostTable()
    geometries = list(getattr(cluster, "geometries", cluster))
    baseline = table.latch_cells + table.mux4_cells
    proposed = 2 * table.dff_cells + 2 * table.mux2_cells
    extra = proposed - baseline
    io_bits = sum(g.width for g in geometries)
    cells = sum(g.words * g.width for g in geometries)
    return AreaReport(
        baseline_per_bit=baseline,
        proposed_per_bit=proposed,
        extra_per_bit=extra,
        io_bits=io_bits,
        memory_cells=cells,
        extra_cells=extra * io_bits,
        extra_percent=100 * extra * io_bits / cells,
        combined_percent=100 * (baseline + proposed) * io_bits / cells,
    )
