"""One controller, memories of different sizes.  The smaller ones wrap their
address counters; the comparator knows each memory's size, so the redundant
operations raise no false alarms."""
from sramdiag import analysis
from sramdiag.controller import ClusterConfig, run_diagnosis
from sramdiag.march import march_cw
from sramdiag.memory_model import FaultDescriptor

cluster = ClusterConfig.of((16, 4), (8, 3), (4, 2))
alg = march_cw(cluster.c_max)
print(f"n_max = {cluster.n_max}, c_max = {cluster.c_max}")

clean = run_diagnosis(cluster, alg)
print(f"fault-free: {len(clean.records)} records, {clean.cycles} cycles "
      f"(formula {analysis.proposed_cycles(cluster.n_max, cluster.c_max)})")

faults = [FaultDescriptor("SA1", 2, 1, memory="m2"), FaultDescriptor("TF_UP", 5, 2, memory="m1")]
res = run_diagnosis(cluster, alg, faults)
for rec in res.records[:6]:
    print(f"  {rec.memory_id} step {rec.global_step:2} -> local address {rec.local_address}, "
          f"bit {rec.bit_index}, element {rec.element_index}")
print("cells flagged:", res.cells())

area = analysis.area_report(cluster)
print(f"interface overhead: {area.extra_cells:g} cells over {area.memory_cells} "
      f"({area.extra_percent:.2f}%), {area.extra_global_wires} extra wire")
