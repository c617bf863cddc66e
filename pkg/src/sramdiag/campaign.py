"""Seeded random fault campaigns over a cluster."""
from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .controller import DEFAULT_PAUSE_NS, run_diagnosis
from .errors import ConfigError
from .memory_model import DEFAULT_RETENTION_NS, FaultDescriptor, FaultKind


def sample_faults(cluster, defect_rate, kinds, rng):
    """Draw one fault set.

    Each memory gets round(defect_rate * cells) victims, drawn uniformly
    without replacement.  Kinds are drawn uniformly from ``kinds``.  Coupling
    aggressors come from the memory's cells that carry no fault of their own.
    """
    kinds = [FaultKind(k) for k in kinds]
    faults = []
    for mid, geom in cluster.memories:
        count = math.floor(defect_rate * geom.cells + 0.5)
        victims = rng.choice(geom.cells, size=count, replace=False)
        picked = rng.integers(len(kinds), size=count)
        free = np.setdiff1d(np.arange(geom.cells), victims)
        for cell, ki in zip(victims.tolist(), picked.tolist()):
            kind = kinds[ki]
            address, bit = divmod(cell, geom.width)
            extra = {}
            if kind.is_coupling:
                if free.size == 0:
                    raise ConfigError(f"no fault-free cell left in {mid!r} for a coupling aggressor",
                                      field="campaign.defect_rate")
                aggressor = int(free[rng.integers(free.size)])
                extra["aggressor"] = divmod(aggressor, geom.width)
                if kind is FaultKind.CF_ID:
                    extra["transition"] = ("up", "down")[int(rng.integers(2))]
                    extra["forced_value"] = int(rng.integers(2))
            faults.append(FaultDescriptor(kind, address, bit, memory=mid, **extra))
    return faults


@dataclass(frozen=True)
class FaultOutcome:
    trial: int
    fault: FaultDescriptor
    detected: bool

    @property
    def sort_key(self):
        f = self.fault
        return (f.memory, f.address, f.bit, self.trial)


@dataclass
class CampaignSummary:
    injected: int
    detected: int
    per_kind: dict
    cycles_total: int
    simulated_ns_total: float
    pause_ns_total: float
    outcomes: list

    @property
    def detection_rate(self):
        return self.detected / self.injected if self.injected else None


def _run_trial(args):
    trial, cluster, alg, faults, mode, retention_threshold_ns, pause_ns = args
    result = run_diagnosis(cluster, alg, faults, mode,
                           retention_threshold_ns=retention_threshold_ns, pause_ns=pause_ns)
    hit = {r.cell for r in result.records}
    outcomes = [FaultOutcome(trial, f, (f.memory, f.address, f.bit) in hit) for f in faults]
    return outcomes, result.cycles, result.simulated_ns, result.per_phase_cycles["pause_ns"]


def run_campaign(cluster, alg, spec, mode, *, retention_threshold_ns=DEFAULT_RETENTION_NS,
                 pause_ns=DEFAULT_PAUSE_NS, workers=None):
    """Simulate ``spec.trials`` independent fault sets.

    Trial ``i`` draws from the i-th child of ``SeedSequence(spec.seed)``, so
    results do not depend on the order in which the trials execute.
    """
    children = np.random.SeedSequence(spec.seed).spawn(spec.trials)
    jobs = []
    for trial, child in enumerate(children):
        faults = sample_faults(cluster, spec.defect_rate, spec.kinds, np.random.default_rng(child))
        jobs.append((trial, cluster, alg, faults, mode, retention_threshold_ns, pause_ns))

    if workers and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_trial, jobs))
    else:
        results = [_run_trial(job) for job in jobs]

    outcomes = sorted((o for res in results for o in res[0]), key=lambda o: o.sort_key)
    injected = Counter(o.fault.kind for o in outcomes)
    detected = Counter(o.fault.kind for o in outcomes if o.detected)
    per_kind = {}
    for kind in spec.kinds:
        n = injected[kind]
        per_kind[kind.value] = {"injected": n, "detected": detected[kind],
                                "detection_rate": detected[kind] / n if n else None}
    return CampaignSummary(
        injected=len(outcomes),
        detected=sum(detected.values()),
        per_kind=per_kind,
        cycles_total=sum(r[1] for r in results),
        simulated_ns_total=sum(r[2] for r in results),
        pause_ns_total=sum(r[3] for r in results),
        outcomes=outcomes,
    )
