"""Data-retention faults: a plain March run is too fast to see them, a pause
of the retention time exposes them, and no-write-recovery writes expose them
with no pause at all."""
from sramdiag.controller import ClusterConfig, Mode, run_diagnosis
from sramdiag.march import march_cw, merge_nwrtm
from sramdiag.memory_model import FaultDescriptor

cluster = ClusterConfig.single(16, 4)
faults = [FaultDescriptor("DRF_A", 0, 0), FaultDescriptor("DRF_B", 7, 3)]
base = march_cw(4)

runs = [
    ("none", base, Mode.NONE, {}),
    ("pause 1 ms", base, Mode.PAUSE, {"pause_ns": 1_000_000}),
    ("pause 100 ms", base, Mode.PAUSE, {"pause_ns": 100_000_000}),
    ("nwrtm", merge_nwrtm(base), Mode.NWRTM, {}),
]
print(f"{'mode':<14}{'cells found':<26}{'cycles':>8}{'wall time':>14}")
for label, alg, mode, extra in runs:
    res = run_diagnosis(cluster, alg, faults, mode, **extra)
    found = sorted({(a, b) for _, a, b in res.cells()})
    print(f"{label:<14}{str(found):<26}{res.cycles:>8}{res.simulated_ns / 1e6:>11.3f} ms")
