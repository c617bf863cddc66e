"""JSON run configuration: parsing, validation and round-trip serialization.

A document looks like::

    {
      "cluster": [{"id": "m0", "words": 16, "width": 4}],
      "clock_ns": 10,
      "algorithm": "marchcw",
      "mode": "none",
      "faults": [{"memory": "m0", "kind": "SA0", "address": 3, "bit": 1}],
      "retention_threshold_ns": 100000000
    }

``faults`` may be replaced by ``"campaign": {"defect_rate": 0.01,
"kinds": ["SA0", "DRF_A"], "seed": 7, "trials": 1}``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .controller import DEFAULT_PAUSE_NS, ClusterConfig, Mode
from .errors import (ConfigError, ConfigParseError, DiagnosisError, FaultError,
                     MarchParseError, MarchStructureError)
from .march import ALGORITHMS, merge_nwrtm, parse_march
from .memory_model import DEFAULT_RETENTION_NS, FaultDescriptor, FaultKind, MemoryGeometry

SCHEMA_VERSION = 1
FORMATS = ("json", "csv")

_TRANSITION_ALIASES = {"up": "up", "0->1": "up", "rise": "up",
                       "down": "down", "1->0": "down", "fall": "down"}


@dataclass(frozen=True)
class CampaignSpec:
    defect_rate: float
    kinds: tuple
    seed: int
    trials: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kinds", tuple(FaultKind(k) for k in self.kinds))
        if isinstance(self.defect_rate, bool) or not 0 <= self.defect_rate <= 1:
            raise ConfigError(f"defect_rate must lie in [0, 1], got {self.defect_rate!r}",
                              field="campaign.defect_rate")
        if not self.kinds:
            raise ConfigError("at least one fault kind is required", field="campaign.kinds")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}",
                              field="campaign.seed")
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ConfigError(f"trials must be a positive integer, got {self.trials!r}",
                              field="campaign.trials")


@dataclass(frozen=True)
class RunConfig:
    cluster: ClusterConfig
    algorithm: str = "marchcw"
    mode: Mode = Mode.NONE
    faults: tuple = ()
    campaign: CampaignSpec | None = None
    output: str = "json"
    retention_threshold_ns: float = DEFAULT_RETENTION_NS
    pause_ns: float = DEFAULT_PAUSE_NS

    def resolve_algorithm(self):
        """The MarchAlgorithm to run, merged with NWRC writes in NWRTM mode."""
        try:
            if self.algorithm in ALGORITHMS:
                alg = ALGORITHMS[self.algorithm](self.cluster.c_max)
            else:
                alg = parse_march(self.algorithm)
        except MarchParseError as exc:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}: {exc}", field="algorithm") from None
        if self.mode is Mode.NWRTM and not alg.uses_nwrite:
            try:
                alg = merge_nwrtm(alg)
            except MarchStructureError as exc:
                raise ConfigError(f"cannot add NWRC writes: {exc}", field="algorithm") from None
        elif self.mode is not Mode.NWRTM and alg.uses_nwrite:
            raise ConfigError(f"algorithm uses NWRC writes but mode is {self.mode.value}",
                              field="mode")
        return alg

    def to_dict(self):
        doc = {
            "cluster": [{"id": mid, "words": g.words, "width": g.width}
                        for mid, g in self.cluster.memories],
            "clock_ns": self.cluster.clock_ns,
            "algorithm": self.algorithm,
            "mode": self.mode.value,
            "output": self.output,
            "retention_threshold_ns": self.retention_threshold_ns,
            "pause_ns": self.pause_ns,
        }
        if self.campaign is not None:
            doc["campaign"] = {
                "defect_rate": self.campaign.defect_rate,
                "kinds": [k.value for k in self.campaign.kinds],
                "seed": self.campaign.seed,
                "trials": self.campaign.trials,
            }
        else:
            doc["faults"] = [fault_to_dict(f) for f in self.faults]
        return doc

    def dumps(self):
        return json.dumps(self.to_dict(), indent=2)


def fault_to_dict(fault):
    doc = {"memory": fault.memory, "kind": fault.kind.value,
           "address": fault.address, "bit": fault.bit}
    if fault.aggressor is not None:
        doc["aggressor"] = list(fault.aggressor)
    if fault.transition is not None:
        doc["cf_transition"] = fault.transition
        doc["cf_value"] = fault.forced_value
    return doc


def _require(doc, key, where, kind=None):
    if key not in doc:
        raise ConfigError(f"missing required key {key!r}", field=f"{where}{key}")
    value = doc[key]
    if kind is not None and (not isinstance(value, kind) or isinstance(value, bool)):
        raise ConfigError(f"{key!r} has the wrong type ({type(value).__name__})", field=f"{where}{key}")
    return value


def _parse_cluster(doc):
    entries = _require(doc, "cluster", "", list)
    memories = []
    for i, entry in enumerate(entries):
        where = f"cluster[{i}]."
        if not isinstance(entry, dict):
            raise ConfigError("memory entry must be an object", field=f"cluster[{i}]")
        mid = str(entry.get("id", f"m{i}"))
        words = _require(entry, "words", where, int)
        width = _require(entry, "width", where, int)
        try:
            memories.append((mid, MemoryGeometry(words, width)))
        except DiagnosisError as exc:
            raise ConfigError(str(exc), field=f"cluster[{i}]") from None
    clock = doc.get("clock_ns", 10)
    if isinstance(clock, bool) or not isinstance(clock, (int, float)):
        raise ConfigError("clock_ns must be a number", field="clock_ns")
    return ClusterConfig(tuple(memories), clock)


def _parse_fault(entry, i, cluster):
    where = f"faults[{i}]."
    if not isinstance(entry, dict):
        raise ConfigError("fault entry must be an object", field=f"faults[{i}]")
    geometries = dict(cluster.memories)
    memory = entry.get("memory")
    if memory is None and len(geometries) == 1:
        memory = cluster.ids[0]
    if str(memory) not in geometries:
        raise ConfigError(f"unknown memory {memory!r}", field=f"{where}memory")
    memory = str(memory)
    kind = _require(entry, "kind", where, str)
    address = _require(entry, "address", where, int)
    bit = _require(entry, "bit", where, int)
    aggressor = entry.get("aggressor")
    if isinstance(aggressor, dict):
        aggressor = (aggressor.get("address"), aggressor.get("bit"))
    elif aggressor is not None:
        if not isinstance(aggressor, list) or len(aggressor) != 2:
            raise ConfigError("aggressor must be [address, bit]", field=f"{where}aggressor")
        aggressor = tuple(aggressor)
    transition = entry.get("cf_transition")
    if transition is not None:
        if str(transition) not in _TRANSITION_ALIASES:
            raise ConfigError(f"unknown transition {transition!r}", field=f"{where}cf_transition")
        transition = _TRANSITION_ALIASES[str(transition)]
    try:
        fault = FaultDescriptor(kind, address, bit, aggressor=aggressor, transition=transition,
                                forced_value=entry.get("cf_value"), memory=memory)
    except FaultError as exc:
        raise ConfigError(str(exc), field=f"faults[{i}]") from None
    geom = geometries[memory]
    if not geom.contains(address, bit):
        raise ConfigError(f"cell ({address}, {bit}) outside {geom.words}x{geom.width}",
                          field=f"faults[{i}]")
    if aggressor is not None and not geom.contains(*aggressor):
        raise ConfigError(f"aggressor {aggressor} outside {geom.words}x{geom.width}",
                          field=f"{where}aggressor")
    return fault


def config_from_dict(doc):
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    cluster = _parse_cluster(doc)
    algorithm = doc.get("algorithm", "marchcw")
    if not isinstance(algorithm, str):
        raise ConfigError("algorithm must be a string", field="algorithm")
    try:
        mode = Mode(str(doc.get("mode", "none")).lower())
    except ValueError:
        raise ConfigError(f"unknown mode {doc.get('mode')!r}", field="mode") from None
    output = doc.get("output", "json")
    if output not in FORMATS:
        raise ConfigError(f"unknown output format {output!r}", field="output")
    faults, campaign = (), None
    if "faults" in doc and "campaign" in doc:
        raise ConfigError("give either 'faults' or 'campaign', not both", field="campaign")
    if "faults" in doc:
        if not isinstance(doc["faults"], list):
            raise ConfigError("faults must be a list", field="faults")
        faults = tuple(_parse_fault(e, i, cluster) for i, e in enumerate(doc["faults"]))
        seen = set()
        for i, f in enumerate(faults):
            if (f.memory, f.victim) in seen:
                raise ConfigError(f"second fault on cell {f.victim} of {f.memory}", field=f"faults[{i}]")
            seen.add((f.memory, f.victim))
    elif "campaign" in doc:
        spec = doc["campaign"]
        if not isinstance(spec, dict):
            raise ConfigError("campaign must be an object", field="campaign")
        kinds = spec.get("kinds", [k.value for k in FaultKind])
        try:
            kinds = tuple(FaultKind(k) for k in kinds)
        except (ValueError, TypeError):
            raise ConfigError(f"unknown fault kind in {kinds!r}", field="campaign.kinds") from None
        campaign = CampaignSpec(
            defect_rate=_require(spec, "defect_rate", "campaign.", (int, float)),
            kinds=kinds,
            seed=_require(spec, "seed", "campaign.", int),
            trials=spec.get("trials", 1),
        )
    numbers = {}
    for key, default in (("retention_threshold_ns", DEFAULT_RETENTION_NS), ("pause_ns", DEFAULT_PAUSE_NS)):
        value = doc.get(key, default)
        if isinstance(value, bool) or not isinstance(value, (int, float)) or value < 0:
            raise ConfigError(f"{key} must be a non-negative number", field=key)
        numbers[key] = value
    return RunConfig(cluster=cluster, algorithm=algorithm, mode=mode, faults=faults,
                     campaign=campaign, output=output, **numbers)


def loads(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(f"malformed JSON: {exc.msg}", line=exc.lineno) from None
    return config_from_dict(doc)


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
