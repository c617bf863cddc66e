"""Behavioral n-word x c-bit SRAM with injectable functional faults.

Words are held as Python ints, bit ``i`` of the int being IO bit ``i``.
The model has no clock of its own: every access carries a timestamp in ns
supplied by the caller, which is all the data-retention model needs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import BoundsError, FaultConflictError, FaultError, ModeError

DEFAULT_RETENTION_NS = 100_000_000  # 100 ms


class FaultKind(str, Enum):
    SA0 = "SA0"
    SA1 = "SA1"
    TF_UP = "TF_UP"
    TF_DOWN = "TF_DOWN"
    CF_ID = "CF_ID"
    CF_IN = "CF_IN"
    DRF_A = "DRF_A"
    DRF_B = "DRF_B"

    @property
    def is_coupling(self):
        return self in (FaultKind.CF_ID, FaultKind.CF_IN)

    @property
    def is_retention(self):
        return self in (FaultKind.DRF_A, FaultKind.DRF_B)


# value a DRF cell's node settles to once its charge leaks away
DECAY_VALUE = {FaultKind.DRF_A: 0, FaultKind.DRF_B: 1}

TRANSITIONS = ("up", "down")


@dataclass(frozen=True)
class MemoryGeometry:
    words: int
    width: int

    def __post_init__(self):
        for name in ("words", "width"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise BoundsError(f"{name} must be a positive integer, got {value!r}")

    @property
    def cells(self):
        return self.words * self.width

    @property
    def mask(self):
        return (1 << self.width) - 1

    def contains(self, address, bit):
        return 0 <= address < self.words and 0 <= bit < self.width


@dataclass(frozen=True)
class FaultDescriptor:
    """One injected defect.

    ``address``/``bit`` locate the victim cell.  Coupling faults also need an
    ``aggressor`` cell; CF_ID additionally needs the sensitizing aggressor
    ``transition`` ("up" for 0->1, "down" for 1->0) and the ``forced_value``
    the victim is driven to.  ``memory`` names the cluster member and may be
    left as None when a single memory is simulated.
    """

    kind: FaultKind
    address: int
    bit: int
    aggressor: tuple[int, int] | None = None
    transition: str | None = None
    forced_value: int | None = None
    memory: str | None = None

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", FaultKind(self.kind))
        except ValueError:
            raise FaultError(f"unknown fault kind {self.kind!r}") from None
        if self.aggressor is not None:
            object.__setattr__(self, "aggressor", tuple(self.aggressor))
        if self.kind.is_coupling:
            if self.aggressor is None or len(self.aggressor) != 2:
                raise FaultError(f"{self.kind.value} needs an (address, bit) aggressor")
            if self.aggressor == self.victim:
                raise FaultError("aggressor and victim must be distinct cells")
        elif self.aggressor is not None:
            raise FaultError(f"{self.kind.value} takes no aggressor")
        if self.kind is FaultKind.CF_ID:
            if self.transition not in TRANSITIONS:
                raise FaultError(f"CF_ID transition must be one of {TRANSITIONS}, got {self.transition!r}")
            if self.forced_value not in (0, 1):
                raise FaultError(f"CF_ID forced_value must be 0 or 1, got {self.forced_value!r}")
        elif self.transition is not None or self.forced_value is not None:
            raise FaultError(f"{self.kind.value} takes no CF_ID parameters")

    @property
    def victim(self):
        return (self.address, self.bit)


@dataclass
class MemoryInstance:
    """Cell array plus fault map.

    Cells power up holding 0 with a last-write time of 0 ns.  ``nwrtm`` is the
    NWRTM control line; ``nwrc_write`` refuses to run unless it is asserted.
    """

    geometry: MemoryGeometry
    retention_threshold_ns: float = DEFAULT_RETENTION_NS
    nwrtm: bool = False
    faults: dict = field(default_factory=dict)

    def __post_init__(self):
        n = self.geometry.words
        self._mask = self.geometry.mask
        self._data = [0] * n
        self._word_time = [0] * n
        self._drf_time = {}
        # per-address indexes so fault-free words take the fast path
        self._faults_at = {}
        self._drf_at = {}
        self._aggressors_at = {}
        initial, self.faults = dict(self.faults), {}
        for fault in initial.values():
            self.inject_fault(fault)

    # -- fault injection -------------------------------------------------

    def inject_fault(self, fault):
        geom = self.geometry
        if not geom.contains(*fault.victim):
            raise BoundsError(f"victim {fault.victim} outside {geom.words}x{geom.width}")
        if fault.aggressor is not None and not geom.contains(*fault.aggressor):
            raise BoundsError(f"aggressor {fault.aggressor} outside {geom.words}x{geom.width}")
        if fault.victim in self.faults:
            raise FaultConflictError(f"cell {fault.victim} already carries a fault")
        self.faults[fault.victim] = fault
        address, bit = fault.victim
        self._faults_at.setdefault(address, {})[bit] = fault
        if fault.kind.is_retention:
            self._drf_at.setdefault(address, []).append((bit, DECAY_VALUE[fault.kind]))
            self._drf_time[fault.victim] = self._word_time[address]
        elif fault.kind is FaultKind.SA0:
            self._data[address] &= ~(1 << bit)
        elif fault.kind is FaultKind.SA1:
            self._data[address] |= 1 << bit
        if fault.aggressor is not None:
            a_addr, a_bit = fault.aggressor
            entries = self._aggressors_at.setdefault(a_addr, [])
            entries.append((a_bit, fault))
            entries.sort(key=lambda e: (e[0], e[1].victim))
        return self

    # -- access ----------------------------------------------------------

    def _check(self, address, word=None):
        if not (isinstance(address, int) and 0 <= address < self.geometry.words):
            raise BoundsError(f"address {address!r} outside [0, {self.geometry.words})")
        if word is not None and not (isinstance(word, int) and 0 <= word <= self._mask):
            raise BoundsError(f"word {word!r} does not fit {self.geometry.width} bits")

    def _effective(self, address, time_ns):
        word = self._data[address]
        drfs = self._drf_at.get(address)
        if drfs:
            threshold = self.retention_threshold_ns
            for bit, decayed in drfs:
                if time_ns - self._drf_time[(address, bit)] >= threshold:
                    word = (word & ~(1 << bit)) | (decayed << bit)
        return word

    def read(self, address, time_ns=0):
        self._check(address)
        return self._effective(address, time_ns)

    def write(self, address, word, time_ns=0):
        self._check(address, word)
        self._store(address, word, time_ns, nwrc=False)
        return self

    def nwrc_write(self, address, word, time_ns=0):
        """No-write-recovery write: a DRF cell cannot be flipped toward the
        value its open pull-up fails to hold; everything else is a normal write."""
        if not self.nwrtm:
            raise ModeError("nwrc_write requires the NWRTM control to be asserted")
        self._check(address, word)
        self._store(address, word, time_ns, nwrc=True)
        return self

    def _store(self, address, word, time_ns, nwrc):
        faults = self._faults_at.get(address)
        aggressors = self._aggressors_at.get(address)
        self._word_time[address] = time_ns
        if faults is None and aggressors is None:
            self._data[address] = word
            return
        old = self._effective(address, time_ns)
        new = word
        if faults:
            for bit, fault in faults.items():
                kind = fault.kind
                target = (word >> bit) & 1
                current = (old >> bit) & 1
                if kind is FaultKind.SA0:
                    value = 0
                elif kind is FaultKind.SA1:
                    value = 1
                elif kind is FaultKind.TF_UP:
                    value = 0 if (current == 0 and target == 1) else target
                elif kind is FaultKind.TF_DOWN:
                    value = 1 if (current == 1 and target == 0) else target
                elif kind.is_retention:
                    refuses = target != current and target != DECAY_VALUE[kind]
                    if nwrc and refuses:
                        value = current
                    else:
                        value = target
                        self._drf_time[(address, bit)] = time_ns
                else:
                    value = target
                new = (new & ~(1 << bit)) | (value << bit)
        self._data[address] = new
        if aggressors:
            for bit, fault in aggressors:
                before = (old >> bit) & 1
                after = (new >> bit) & 1
                if before == after:
                    continue
                v_addr, v_bit = fault.victim
                if fault.kind is FaultKind.CF_IN:
                    self._data[v_addr] ^= 1 << v_bit
                elif (fault.transition == "up") == (after == 1):
                    if fault.forced_value:
                        self._data[v_addr] |= 1 << v_bit
                    else:
                        self._data[v_addr] &= ~(1 << v_bit)

    # -- inspection ------------------------------------------------------

    def last_write_ns(self, address, bit):
        self._check(address)
        return self._drf_time.get((address, bit), self._word_time[address])

    def contents(self, time_ns=0):
        """Every word as it would read at ``time_ns``."""
        return [self._effective(a, time_ns) for a in range(self.geometry.words)]

    def state(self):
        """Raw stored words and per-cell timestamps, for equivalence checks."""
        times = [
            tuple(self.last_write_ns(a, b) for b in range(self.geometry.width))
            for a in range(self.geometry.words)
        ]
        return list(self._data), times
