"""Brute-force reference: replay a March test straight against the memory
model, with a fault-free twin supplying expected values.  No SPC, PSC,
scheduler or analytic expected-value rule is involved."""
from functools import lru_cache

from sramdiag.march import OpKind, Order
from sramdiag.memory_model import FaultDescriptor, FaultKind, MemoryInstance


@lru_cache(maxsize=None)
def pattern(background, width, complement):
    word = 0
    for col in range(width):
        if background and (col >> (background - 1)) & 1:
            word |= 1 << col
    return word ^ ((1 << width) - 1) if complement else word


def _walk(geometry, alg, clock_ns, pause_before, pause_ns):
    """Yield (element, step, op index, op, address, pattern word, time)."""
    n, c = geometry.words, geometry.width
    now = 0
    for ei, el in enumerate(alg.elements):
        if ei in pause_before:
            now += pause_ns
        if any(op.kind is not OpKind.READ for op in el.ops):
            now += c * clock_ns
        addresses = range(n - 1, -1, -1) if el.order is Order.DOWN else range(n)
        for step, addr in enumerate(addresses):
            for oi, op in enumerate(el.ops):
                yield ei, step, oi, op, addr, pattern(el.background, c, op.value), now
                now += ((1 + c) if op.kind is OpKind.READ else 1) * clock_ns


def _apply(mem, op, addr, word, now):
    if op.kind is OpKind.READ:
        return mem.read(addr, now)
    if op.kind is OpKind.WRITE:
        mem.write(addr, word, now)
    else:
        mem.nwrc_write(addr, word, now)
    return None


@lru_cache(maxsize=256)
def golden_reads(geometry, alg, nwrtm, clock_ns, pause_before, pause_ns):
    """What a fault-free twin returns on every read, in execution order."""
    golden = MemoryInstance(geometry, nwrtm=nwrtm)
    out = []
    for _, _, _, op, addr, word, now in _walk(geometry, alg, clock_ns, pause_before, pause_ns):
        got = _apply(golden, op, addr, word, now)
        if got is not None:
            out.append(got)
    return tuple(out)


def replay(geometry, alg, faults=(), *, nwrtm=False, clock_ns=10, pause_before=(),
           pause_ns=0, retention_threshold_ns=100_000_000):
    """Return the set of (element, step, op, address, bit, expected, observed)."""
    pause_before = tuple(sorted(pause_before))
    want_words = iter(golden_reads(geometry, alg, nwrtm, clock_ns, pause_before, pause_ns))
    dut = MemoryInstance(geometry, retention_threshold_ns=retention_threshold_ns, nwrtm=nwrtm)
    for f in faults:
        dut.inject_fault(f)
    mismatches = set()
    for ei, step, oi, op, addr, word, now in _walk(geometry, alg, clock_ns, pause_before, pause_ns):
        got = _apply(dut, op, addr, word, now)
        if got is None:
            continue
        want = next(want_words)
        diff = got ^ want
        bit = 0
        while diff:
            if diff & 1:
                mismatches.add((ei, step, oi, addr, bit, (want >> bit) & 1, (got >> bit) & 1))
            diff >>= 1
            bit += 1
    return mismatches


def record_set(result):
    return {(r.element_index, r.global_step, r.op_index, r.local_address, r.bit_index,
             r.expected_bit, r.observed_bit) for r in result.records}


def all_single_faults(geometry, kinds):
    """Every injectable instance of each kind: every victim, and for coupling
    kinds every aggressor and every CF_ID sensitization."""
    cells = [(a, b) for a in range(geometry.words) for b in range(geometry.width)]
    for kind in map(FaultKind, kinds):
        for victim in cells:
            if not kind.is_coupling:
                yield FaultDescriptor(kind, *victim)
                continue
            for aggressor in cells:
                if aggressor == victim:
                    continue
                if kind is FaultKind.CF_IN:
                    yield FaultDescriptor(kind, *victim, aggressor=aggressor)
                else:
                    for tr in ("up", "down"):
                        for value in (0, 1):
                            yield FaultDescriptor(kind, *victim, aggressor=aggressor,
                                                  transition=tr, forced_value=value)
