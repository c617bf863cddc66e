import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sramdiag.analysis import (AreaCostTable, CostInputs, area_report, cost_report, estimate_k,
                               proposed_cycles, reduction_no_drf, reduction_with_drf, t_baseline,
                               t_baseline_drf, t_proposed, t_proposed_drf)
from sramdiag.controller import ClusterConfig
from sramdiag.errors import DomainError
from sramdiag.memory_model import MemoryGeometry

BENCH = CostInputs(512, 100, 10, 96)


def test_t_baseline():
    assert t_baseline(BENCH) == 840_192_000
    assert t_baseline(CostInputs(1, 1, 1, 1)) == 26


@pytest.mark.parametrize("kwargs", [dict(k=0), dict(n=0), dict(c=-1), dict(t=0), dict(k=1.5)])
def test_cost_inputs_domain(kwargs):
    args = dict(n=4, c=4, t=10, k=1, **{})
    args.update(kwargs)
    with pytest.raises(DomainError):
        CostInputs(**args)


def test_t_proposed():
    assert proposed_cycles(512, 100) == 998_440
    assert t_proposed(512, 100, 10) == 9_984_400
    for n in (1, 7, 512):
        assert t_proposed(n, 1, 3) == (15 * n + 5) * 3
    with pytest.raises(DomainError):
        t_proposed(0, 4, 10)
    with pytest.raises(DomainError):
        t_proposed(4, 4, 0)


def test_benchmark_reductions():
    r = reduction_no_drf(BENCH)
    assert 84 <= r < 85
    assert t_baseline_drf(BENCH) == 840_192_000 + 393_216_000 + 200_000_000
    assert t_proposed_drf(BENCH) == 9_984_400 + 12_240
    assert reduction_with_drf(BENCH) == pytest.approx(1_433_408_000 / 9_996_640, rel=1e-12)
    assert round(reduction_with_drf(BENCH), 1) == 143.4


def test_unit_ratios():
    unit = CostInputs(1, 1, 1, 1)
    for r in (reduction_no_drf(unit), reduction_with_drf(unit)):
        assert math.isfinite(r) and r > 1


def test_cost_report_ratios_exact():
    rep = cost_report(BENCH)
    assert rep.r_no_drf == rep.t_baseline_ns / rep.t_proposed_ns
    assert rep.r_with_drf == rep.t_baseline_drf_ns / rep.t_proposed_drf_ns


def test_estimate_k():
    assert estimate_k(256) == 96
    assert estimate_k(0) == 1
    assert estimate_k(257) == 97
    assert estimate_k(10, m1_coverage=1.0, faults_per_iteration=1) == 10
    with pytest.raises(DomainError):
        estimate_k(-1)


small = st.integers(1, 300)


@given(small, small, st.integers(1, 50), st.integers(1, 50))
def test_monotonicity(n, c, t, k):
    base = CostInputs(n, c, t, k)
    for bumped in (CostInputs(n + 1, c, t, k), CostInputs(n, c + 1, t, k),
                   CostInputs(n, c, t + 1, k), CostInputs(n, c, t, k + 1)):
        assert t_baseline(bumped) > t_baseline(base)
    assert t_proposed(n + 1, c, t) > t_proposed(n, c, t)
    assert t_proposed(n, c + 1, t) > t_proposed(n, c, t)
    assert t_proposed(n, c, t + 1) > t_proposed(n, c, t)


def test_reduction_over_sweep():
    # R grows with k, so k = 1 and k = 2 bound every other case.  At k = 1 the
    # ratio dips just under one for four-word memories 65 to 90 bits wide;
    # from k = 2 on it exceeds one everywhere in the sweep.
    below = [(n, c) for n in range(4, 4097) for c in range(1, 129)
             if 26 * n * c <= proposed_cycles(n, c)]
    assert below == [(4, c) for c in range(65, 91)]
    assert min(reduction_no_drf(CostInputs(4, c, 10, 1)) for c in range(65, 91)) > 0.99
    assert all(43 * n * c > proposed_cycles(n, c) for n in range(4, 4097) for c in range(1, 129))
    assert all(reduction_with_drf(CostInputs(n, c, 10, 1)) > 1
               for n in range(4, 4097, 7) for c in range(1, 129))


@given(st.integers(4, 4096), st.integers(1, 128), st.integers(2, 1000))
def test_reduction_exceeds_one(n, c, k):
    assert reduction_no_drf(CostInputs(n, c, 10, k)) > 1
    assert reduction_with_drf(CostInputs(n, c, 10, k)) > 1


@given(st.floats(0, 100, allow_nan=False))
def test_area_mux_independence(m):
    rep = area_report([MemoryGeometry(512, 100)], AreaCostTable(mux2_cells=m))
    assert rep.extra_per_bit == pytest.approx(3)
    assert rep.extra_global_wires == 1


def test_area_benchmark():
    rep = area_report(ClusterConfig.single(512, 100))
    assert rep.extra_cells == 300
    assert rep.memory_cells == 51_200
    assert rep.extra_percent == pytest.approx(300 / 51_200 * 100)
    assert round(rep.extra_percent, 2) == 0.59
    assert rep.baseline_per_bit == 3 and rep.proposed_per_bit == 6
    assert round(rep.combined_percent, 1) == 1.8


def test_area_cluster_totals():
    rep = area_report(ClusterConfig.of((16, 4), (8, 3)))
    assert rep.io_bits == 7
    assert rep.extra_cells == 21
    assert rep.memory_cells == 88


def test_area_table_domain():
    with pytest.raises(DomainError):
        AreaCostTable(dff_cells=-1)
    assert AreaCostTable(mux2_cells=3).mux4_cells == 6
