"""Acceptance suite.  Each criterion prints one PASS/FAIL line; run with
``pytest tests/test_acceptance.py -s`` or read the summary section at the end
of a normal pytest run."""
import itertools
import time

import pytest

from oracle import all_single_faults, record_set, replay
from sramdiag.analysis import (AreaCostTable, CostInputs, area_report, estimate_k, proposed_cycles,
                               reduction_no_drf, reduction_with_drf)
from sramdiag.controller import ClusterConfig, Mode, pause_points, run_diagnosis
from sramdiag.march import march_c_minus, march_cw, merge_nwrtm
from sramdiag.memory_model import FaultDescriptor, FaultKind, MemoryGeometry
from sramdiag.serdes import Spc, serial_stream

RESULTS = []


def criterion(number, title):
    def wrap(check):
        def test():
            start = time.perf_counter()
            try:
                detail = check()
            except AssertionError as exc:
                line = f"[FAIL] {number}. {title}: {exc}"
                RESULTS.append(line)
                print(line)
                raise
            line = f"[PASS] {number}. {title}: {detail} ({time.perf_counter() - start:.1f} s)"
            RESULTS.append(line)
            print(line)
        test.__name__ = check.__name__
        return test
    return wrap


@criterion(1, "cycle count matches the closed form")
def test_cycle_reconciliation():
    for n, c in itertools.product((4, 16, 512), (1, 3, 4, 100)):
        formula = (5 * n + 5 * c + 5 * n * (c + 1)) + (3 * n + 3 * c + 2 * n * (c + 1)) * (c - 1).bit_length()
        measured = run_diagnosis(ClusterConfig.single(n, c), march_cw(c)).cycles
        assert measured == formula == proposed_cycles(n, c), f"n={n} c={c}: {measured} != {formula}"
    return "12/12 (n, c) points exact"


@criterion(2, "benchmark reduction factors")
def test_benchmark_reduction():
    k = estimate_k(256)
    assert k == 96, f"k = {k}"
    inputs = CostInputs(512, 100, 10, k)
    r = reduction_no_drf(inputs)
    assert 84 <= r < 85, f"R = {r}"
    n, c, t = 512, 100, 10
    direct = ((17 * k + 9) * n * c * t + 8 * k * n * c * t + 2e8) / (proposed_cycles(n, c) * t + (2 * n + 2 * c) * t)
    r_drf = reduction_with_drf(inputs)
    assert r_drf == pytest.approx(direct, rel=1e-9), f"R_drf = {r_drf} vs {direct}"
    return f"k = 96, R = {r:.4f}, R_drf = {r_drf:.4f}"


@criterion(3, "NWRTM adds exactly 2n + 2c cycles")
def test_nwrtm_delta():
    clusters = [ClusterConfig.single(n, c) for n, c in itertools.product((1, 4, 16, 64), (1, 2, 3, 4, 8))]
    clusters += [ClusterConfig.of((16, 4), (8, 3)), ClusterConfig.of((4, 2), (8, 4), (16, 3)),
                 ClusterConfig.of((512, 100))]
    checked = 0
    for cluster in clusters:
        for alg in (march_c_minus(), march_cw(cluster.c_max)):
            base = run_diagnosis(cluster, alg, mode=Mode.NONE).cycles
            merged = run_diagnosis(cluster, merge_nwrtm(alg), mode=Mode.NWRTM).cycles
            want = 2 * cluster.n_max + 2 * cluster.c_max
            assert merged - base == want, f"{cluster.memories}: {merged - base} != {want}"
            checked += 1
    return f"{checked} algorithm/cluster pairs exact"


COMPLETENESS_SHAPES = [(16, 4), (1, 1), (1, 4), (2, 1), (3, 3), (5, 3), (16, 1)]
STATIC_KINDS = ["SA0", "SA1", "TF_UP", "TF_DOWN", "CF_IN", "CF_ID"]


@criterion(4, "exhaustive single-fault detection and localization")
def test_localization_completeness():
    total = 0
    for n, c in COMPLETENESS_SHAPES:
        geom, cluster, alg = MemoryGeometry(n, c), ClusterConfig.single(n, c), march_cw(c)
        for fault in all_single_faults(geom, STATIC_KINDS):
            result = run_diagnosis(cluster, alg, [fault])
            cells = {(r.local_address, r.bit_index) for r in result.records}
            assert cells == {(fault.address, fault.bit)}, f"{n}x{c} {fault}: cells {sorted(cells)}"
            assert record_set(result) == replay(geom, alg, [fault]), f"{n}x{c} {fault}: differs from oracle"
            total += 1
    return f"{total} fault instances over {len(COMPLETENESS_SHAPES)} shapes, all localized, oracle agrees"


DRF_SHAPES = list(itertools.product((1, 2, 3, 5, 8, 16), (1, 2, 3, 4)))
THRESHOLD = 100_000_000


@criterion(5, "DRF differential across modes")
def test_drf_differential():
    total = 0
    for n, c in DRF_SHAPES:
        geom, cluster = MemoryGeometry(n, c), ClusterConfig.single(n, c)
        alg, merged = march_cw(c), merge_nwrtm(march_cw(c))
        run_ns = run_diagnosis(cluster, alg).simulated_ns
        short = THRESHOLD - run_ns - 1
        for kind in (FaultKind.DRF_A, FaultKind.DRF_B):
            for a, b in itertools.product(range(n), range(c)):
                fault = FaultDescriptor(kind, a, b)
                where = f"{n}x{c} {fault}"

                nw = run_diagnosis(cluster, merged, [fault], Mode.NWRTM, retention_threshold_ns=THRESHOLD)
                assert {r.cell[1:] for r in nw.records} == {(a, b)}, f"{where}: NWRTM missed"
                assert nw.per_phase_cycles["pause_ns"] == 0
                assert record_set(nw) == replay(geom, merged, [fault], nwrtm=True)

                long = run_diagnosis(cluster, alg, [fault], Mode.PAUSE,
                                     retention_threshold_ns=THRESHOLD, pause_ns=THRESHOLD)
                assert {r.cell[1:] for r in long.records} == {(a, b)}, f"{where}: PAUSE missed"
                assert record_set(long) == replay(geom, alg, [fault], pause_before=pause_points(alg),
                                                  pause_ns=THRESHOLD)

                brief = run_diagnosis(cluster, alg, [fault], Mode.PAUSE,
                                      retention_threshold_ns=THRESHOLD, pause_ns=short)
                assert not brief.records, f"{where}: detected with pauses below the threshold"

                none = run_diagnosis(cluster, alg, [fault], Mode.NONE, retention_threshold_ns=THRESHOLD)
                assert not none.records, f"{where}: detected without NWRTM or pauses"
                total += 1
    return f"{total} DRF instances: NWRTM and long PAUSE detect, short PAUSE and NONE miss"


@criterion(6, "SPC MSB-first delivery and LSB-first hazard")
def test_spc_ordering():
    checked = 0
    for c in range(1, 9):
        for width in range(1, c + 1):
            mask = (1 << width) - 1
            lsb_differs = False
            for pattern in range(1 << c):
                msb, lsb = Spc(width), Spc(width, lsb_first=True)
                for bit in serial_stream(pattern, c):
                    msb.shift_in(bit)
                for bit in serial_stream(pattern, c, lsb_first=True):
                    lsb.shift_in(bit)
                assert msb.parallel_out() == pattern & mask, f"c={c} c'={width} pattern={pattern:b}"
                lsb_differs |= lsb.parallel_out() != pattern & mask
                checked += 1
            if width < c:
                assert lsb_differs, f"LSB-first never differs at c={c} c'={width}"
    return f"{checked} (c, c', pattern) cases"


@criterion(7, "SA pairs are both reported")
def test_sa_pairs():
    pairs = 0
    for n, c in ((8, 4), (3, 3), (8, 1), (1, 4)):
        cluster, alg = ClusterConfig.single(n, c), march_cw(c)
        cells = list(itertools.product(range(n), range(c)))
        single = {}
        for kind in (FaultKind.SA0, FaultKind.SA1):
            for cell in cells:
                single[kind, cell] = record_set(run_diagnosis(cluster, alg, [FaultDescriptor(kind, *cell)]))
        for x, y in itertools.combinations(cells, 2):
            for kx, ky in itertools.product((FaultKind.SA0, FaultKind.SA1), repeat=2):
                result = run_diagnosis(cluster, alg, [FaultDescriptor(kx, *x), FaultDescriptor(ky, *y)])
                seen = {(r.local_address, r.bit_index) for r in result.records}
                assert seen == {x, y}, f"{n}x{c} {kx.value}{x} + {ky.value}{y}: saw {sorted(seen)}"
                assert record_set(result) == single[kx, x] | single[ky, y]
                pairs += 1
    return f"{pairs} pairs, same-word and cross-word, none masked"


@criterion(8, "fault-free mixed clusters give no records")
def test_wrap_around_soundness():
    shapes = list(itertools.product((4, 8, 16), (2, 3, 4)))
    clusters = 0
    for size in (2, 3):
        for combo in itertools.combinations_with_replacement(shapes, size):
            cluster = ClusterConfig.of(*combo)
            alg = march_cw(cluster.c_max)
            for a, mode in ((alg, Mode.NONE), (merge_nwrtm(alg), Mode.NWRTM), (march_c_minus(), Mode.PAUSE)):
                result = run_diagnosis(cluster, a, mode=mode)
                assert result.records == [], f"{combo} {mode.value}: {result.records[:3]}"
            clusters += 1
    return f"{clusters} clusters x 3 runs, zero records"


@criterion(9, "interface area accounting")
def test_area():
    for mux2 in (0, 0.5, 1, 1.5, 2, 3, 10):
        for dims in ([MemoryGeometry(512, 100)], [MemoryGeometry(16, 4), MemoryGeometry(8, 3)]):
            rep = area_report(dims, AreaCostTable(mux2_cells=mux2))
            assert rep.extra_per_bit == 3, f"mux2={mux2}: {rep.extra_per_bit}"
            assert rep.extra_global_wires == 1
    rep = area_report([MemoryGeometry(512, 100)])
    return f"3 cells/bit, 1 wire; 512x100 extra {rep.extra_percent:.2f}%, both interfaces {rep.combined_percent:.2f}%"
