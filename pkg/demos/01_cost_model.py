"""Diagnosis time of the serial-interface baseline against the SPC/PSC scheme,
for the 512 x 100 benchmark memory at a 10 ns clock."""
from sramdiag import analysis
from sramdiag.controller import ClusterConfig, run_diagnosis
from sramdiag.march import march_cw

n, c, t = 512, 100, 10
k = analysis.estimate_k(256)            # 1% of 51 200 cells, at most 256 faults
inputs = analysis.CostInputs(n, c, t, k)
report = analysis.cost_report(inputs)

print(f"baseline M1 iterations    k = {k}")
print(f"baseline diagnosis time     {report.t_baseline_ns / 1e6:10.3f} ms")
print(f"proposed diagnosis time     {report.t_proposed_ns / 1e6:10.3f} ms")
print(f"reduction                   {report.r_no_drf:10.2f}x")
print(f"reduction incl. DRF tests   {report.r_with_drf:10.2f}x")

# the closed form is only useful if the simulator agrees with it
measured = run_diagnosis(ClusterConfig.single(n, c), march_cw(c))
print(f"simulated cycles            {measured.cycles:10d}  (formula {report.proposed_cycles})")
for phase, cycles in measured.per_phase_cycles.items():
    print(f"    {phase:<13} {cycles:>10}")

print("\nR at k = 1 for a few shapes (the ratio grows with k):")
for n_, c_ in [(4, 8), (4, 80), (64, 16), (1024, 32)]:
    r = analysis.reduction_no_drf(analysis.CostInputs(n_, c_, t, 1))
    print(f"    {n_:5d} x {c_:3d}   R = {r:6.3f}")
