"""Shared BISD controller driving a cluster of small memories.

One schedule serves every memory: it is sized by the largest word count
(n_max) and the widest IO count (c_max).  Smaller memories see their local
address generator wrap around, and the comparator uses each memory's size to
know which reads are first visits and which re-read data the current element
has already rewritten.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from enum import Enum
from functools import lru_cache

from .errors import ConfigError, ContractError, FaultError, ModeError
from .march import OpKind, Order
from .memory_model import DEFAULT_RETENTION_NS, MemoryGeometry, MemoryInstance
from .serdes import Psc, Spc, deliver

DEFAULT_PAUSE_NS = 100_000_000


class Mode(str, Enum):
    NWRTM = "nwrtm"
    PAUSE = "pause"
    NONE = "none"


@dataclass(frozen=True)
class ClusterConfig:
    memories: tuple  # of (id, MemoryGeometry)
    clock_ns: float = 10

    def __post_init__(self):
        mems = tuple((str(mid), geom) for mid, geom in self.memories)
        object.__setattr__(self, "memories", mems)
        if not mems:
            raise ConfigError("cluster has no memories", field="cluster")
        ids = [mid for mid, _ in mems]
        if len(set(ids)) != len(ids):
            raise ConfigError("memory ids must be unique", field="cluster")
        for mid, geom in mems:
            if not isinstance(geom, MemoryGeometry):
                raise ConfigError(f"memory {mid!r} has no geometry", field="cluster")
        if not self.clock_ns > 0:
            raise ConfigError(f"clock period must be positive, got {self.clock_ns!r}", field="clock_ns")

    @classmethod
    def single(cls, words, width, clock_ns=10, memory_id="m0"):
        return cls(((memory_id, MemoryGeometry(words, width)),), clock_ns)

    @classmethod
    def of(cls, *shapes, clock_ns=10):
        """``ClusterConfig.of((16, 4), (8, 3))`` names the memories m0, m1, ..."""
        return cls(tuple((f"m{i}", MemoryGeometry(w, c)) for i, (w, c) in enumerate(shapes)), clock_ns)

    @property
    def ids(self):
        return [mid for mid, _ in self.memories]

    @property
    def geometries(self):
        return [geom for _, geom in self.memories]

    @property
    def n_max(self):
        return max(g.words for g in self.geometries)

    @property
    def c_max(self):
        return max(g.width for g in self.geometries)


@dataclass(frozen=True, order=True)
class DiagnosisRecord:
    memory_id: str
    element_index: int
    global_step: int
    op_index: int
    bit_index: int
    local_address: int
    background_id: int
    expected_bit: int
    observed_bit: int

    @property
    def cell(self):
        return (self.memory_id, self.local_address, self.bit_index)


@dataclass
class RunResult:
    records: list
    cycles: int
    simulated_ns: float
    per_phase_cycles: dict
    trace: list | None = None

    def cells(self):
        """Distinct (memory_id, address, bit) cells that produced a mismatch."""
        return sorted({r.cell for r in self.records})

    def to_dict(self):
        return {
            "records": [asdict(r) for r in self.records],
            "cycles": self.cycles,
            "simulated_ns": self.simulated_ns,
            "per_phase_cycles": dict(self.per_phase_cycles),
        }


@dataclass(frozen=True)
class CycleEvent:
    cycle: int
    phase: str
    element_index: int
    wen: int
    data: tuple  # data-input word seen by each memory


def background_bit(background_id, column_index):
    if background_id == 0:
        return 0
    return (column_index >> (background_id - 1)) & 1


def background_word(background_id, width):
    word = 0
    for i in range(width):
        word |= background_bit(background_id, i) << i
    return word


def expected_read(geometry, element, global_step, op_index=0):
    """Fault-free value of the read at ``op_index`` in step ``global_step``.

    The first ``geometry.words`` steps of an element visit each local address
    once and find what the previous element left there, which is what the
    read's own polarity encodes.  Later steps are wrap-around revisits of a
    smaller memory and find what this element already wrote.
    """
    ops = element.ops
    if not 0 <= op_index < len(ops) or ops[op_index].kind is not OpKind.READ:
        raise ContractError(f"op {op_index} of {element} is not a read")
    polarity = ops[op_index].value
    earlier = [op for op in ops[:op_index] if op.is_write]
    if earlier:
        polarity = earlier[-1].value
    elif global_step >= geometry.words:
        writes = [op for op in ops if op.is_write]
        if writes:
            polarity = writes[-1].value
    word = background_word(element.background, geometry.width)
    return word ^ geometry.mask if polarity else word


def delivered_pattern(element, width):
    """Word the SPCs must hold for ``element``: its first write's data."""
    first = next((op for op in element.ops if op.is_write), None)
    if first is None:
        raise ContractError(f"read-only element {element} takes no pattern delivery")
    word = background_word(element.background, width)
    return word ^ ((1 << width) - 1) if first.value else word


def deliver_pattern(spcs, element, c_max):
    """Serially broadcast the element's pattern to all SPCs; returns c_max."""
    return deliver(spcs, delivered_pattern(element, c_max), c_max)


def pause_points(alg):
    """Elements preceded by a retention pause in PAUSE mode.

    One per data polarity: the first read-led solid-background element that
    follows a write, so every cell has been holding a uniform 0 (resp. 1).
    """
    points = {}
    seen_write = False
    for i, el in enumerate(alg.elements):
        first = el.ops[0]
        if seen_write and el.background == 0 and first.kind is OpKind.READ:
            points.setdefault(first.value, i)
        seen_write = seen_write or el.has_write
    return sorted(points.values())


@lru_cache(maxsize=64)
def _comparator_tables(geometries, alg):
    """Per element, per read op, per memory: (first-visit word, revisit word)."""
    tables = []
    for el in alg.elements:
        expect = {}
        for oi, op in enumerate(el.ops):
            if op.kind is OpKind.READ:
                expect[oi] = [(expected_read(g, el, 0, oi), expected_read(g, el, g.words, oi))
                              for g in geometries]
        tables.append(expect)
    return tables


class _Lane:
    __slots__ = ("memory_id", "geometry", "words", "width", "mask", "mem", "spc", "psc")

    def __init__(self, memory_id, geometry, retention_threshold_ns):
        self.memory_id = memory_id
        self.geometry = geometry
        self.words = geometry.words
        self.width = geometry.width
        self.mask = geometry.mask
        self.mem = MemoryInstance(geometry, retention_threshold_ns=retention_threshold_ns)
        self.spc = Spc(geometry.width)
        self.psc = Psc(geometry.width)


def run_diagnosis(cluster, alg, faults=(), mode=Mode.NONE, *,
                  retention_threshold_ns=DEFAULT_RETENTION_NS,
                  pause_ns=DEFAULT_PAUSE_NS, trace=False):
    mode = Mode(mode)
    if alg.uses_nwrite and mode is not Mode.NWRTM:
        raise ModeError(f"{alg.name!r} contains NWRC writes but mode is {mode.value}")

    lanes = [_Lane(mid, geom, retention_threshold_ns) for mid, geom in cluster.memories]
    by_id = {lane.memory_id: lane for lane in lanes}
    for fault in faults:
        mid = fault.memory
        if mid is None and len(lanes) == 1:
            mid = lanes[0].memory_id
        if mid not in by_id:
            raise FaultError(f"fault {fault} names unknown memory {mid!r}")
        by_id[mid].mem.inject_fault(fault)
    for lane in lanes:
        lane.mem.nwrtm = mode is Mode.NWRTM
    # addresses and words below are in range by construction; skip the checks
    stores = [lane.mem._store for lane in lanes]

    n_max, c_max, clock = cluster.n_max, cluster.c_max, cluster.clock_ns
    pauses = set(pause_points(alg)) if mode is Mode.PAUSE else set()
    phases = {"delivery": 0, "write": 0, "read_capture": 0, "shift": 0, "nwrc": 0, "pause_ns": 0}
    records = []
    events = [] if trace else None
    cycle = 0
    paused = 0
    spcs = [lane.spc for lane in lanes]
    tables = _comparator_tables(tuple(cluster.geometries), alg)

    def log(phase, ei, wen, data):
        events.append(CycleEvent(cycle, phase, ei, wen, tuple(data)))

    for ei, el in enumerate(alg.elements):
        if ei in pauses:
            paused += pause_ns
            phases["pause_ns"] += pause_ns

        bus = [0] * len(lanes)
        if el.has_write:
            pattern = delivered_pattern(el, c_max)
            for bit in reversed(range(c_max)):
                for spc in spcs:
                    spc.shift_in((pattern >> bit) & 1)
                if trace:
                    log("delivery", ei, 0, [spc.register for spc in spcs])
                cycle += 1
            phases["delivery"] += c_max
            bus = [spc.parallel_out() for spc in spcs]
            base_polarity = next(op.value for op in el.ops if op.is_write)

        expect = tables[ei]

        descending = el.order is Order.DOWN
        data_for = {}
        if el.has_write:
            data_for = {base_polarity: bus, 1 - base_polarity: [w ^ lane.mask for w, lane in zip(bus, lanes)]}
        reads = [lane.mem._effective for lane in lanes]
        captures = [lane.psc.capture for lane in lanes]
        shifters = [(li, lane.psc.shift_out, lane.memory_id)
                    for li, lane in enumerate(lanes)]
        words = [lane.words for lane in lanes]
        masks = [lane.mask for lane in lanes]
        pscs = [lane.psc for lane in lanes]
        # per op: (index, is_read, phase, data words) with data chosen once per element
        plan = []
        for oi, op in enumerate(el.ops):
            if op.kind is OpKind.READ:
                plan.append((oi, True, None, None))
            else:
                plan.append((oi, False, "nwrc" if op.kind is OpKind.NWRITE else "write",
                             data_for[op.value]))
        many = len(lanes) > 1
        for step in range(n_max):
            g = n_max - 1 - step if descending else step
            local = [g % w for w in words]
            for oi, is_read, phase, data in plan:
                now = cycle * clock + paused
                if is_read:
                    for li in range(len(lanes)):
                        captures[li](reads[li](local[li], now))
                    if trace:
                        log("read_capture", ei, 0, bus)
                    cycle += 1
                    for psc in pscs:
                        psc.scan_en = True
                    table = expect[oi]
                    want_words = [first if step < w else revisit
                                  for (first, revisit), w in zip(table, words)]
                    # all PSCs shift in lockstep; compare each memory's first c_i bits
                    for li, shift_out, memory_id in shifters:
                        got = 0
                        for k in range(c_max):
                            got |= shift_out() << k
                        diff = (got ^ want_words[li]) & masks[li]
                        k = 0
                        while diff:
                            if diff & 1:
                                want = (want_words[li] >> k) & 1
                                records.append(DiagnosisRecord(
                                    memory_id, ei, step, oi, k, local[li],
                                    el.background, want, 1 - want))
                            diff >>= 1
                            k += 1
                    if trace:
                        for _ in range(c_max):
                            log("shift", ei, 0, bus)
                            cycle += 1
                    else:
                        cycle += c_max
                    for psc in pscs:
                        psc.scan_en = False
                else:
                    nwrc = phase == "nwrc"
                    if many:
                        for store, address, word in zip(stores, local, data):
                            store(address, word, now, nwrc)
                    else:
                        stores[0](local[0], data[0], now, nwrc)
                    if trace:
                        log(phase, ei, 1, data)
                    cycle += 1
        phases["read_capture"] += el.reads * n_max
        phases["shift"] += el.reads * n_max * c_max
        phases["write"] += el.writes * n_max
        phases["nwrc"] += el.nwrites * n_max

    records.sort(key=lambda r: (r.memory_id, r.element_index, r.global_step, r.op_index, r.bit_index))
    return RunResult(
        records=records,
        cycles=cycle,
        simulated_ns=cycle * clock + paused,
        per_phase_cycles=phases,
        trace=events,
    )
