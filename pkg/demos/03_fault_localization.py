"""Inject a handful of faults into one memory and read back where the
comparator points."""
from sramdiag.controller import ClusterConfig, run_diagnosis
from sramdiag.march import format_march, march_cw
from sramdiag.memory_model import FaultDescriptor

cluster = ClusterConfig.single(16, 4)
alg = march_cw(4)
print("algorithm:", format_march(alg))

faults = [
    FaultDescriptor("SA0", 3, 1),
    FaultDescriptor("SA1", 3, 2),              # same word as the SA0
    FaultDescriptor("TF_DOWN", 9, 0),
    FaultDescriptor("CF_IN", 12, 3, aggressor=(12, 0)),
    FaultDescriptor("CF_ID", 6, 2, aggressor=(1, 2), transition="up", forced_value=1),
]
result = run_diagnosis(cluster, alg, faults)
print(f"{len(result.records)} mismatching bits in {result.cycles} cycles\n")

first = {}
for rec in result.records:
    first.setdefault(rec.cell, rec)
for f in faults:
    rec = first.get((f.memory or "m0", f.address, f.bit))
    if rec is None:
        print(f"{f.kind.value:8} ({f.address:2},{f.bit})  MISSED")
    else:
        print(f"{f.kind.value:8} ({f.address:2},{f.bit})  first seen in element {rec.element_index}, "
              f"background {rec.background_id}, expected {rec.expected_bit} got {rec.observed_bit}")
print("\ncells flagged:", result.cells())
