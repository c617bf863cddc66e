"""Why the pattern is shifted MSB-first: a narrower memory must receive the
low bits of the shared data pattern, and only MSB-first leaves them there."""
from sramdiag.serdes import Spc, serial_stream


def receive(pattern, c, width, lsb_first):
    spc = Spc(width, lsb_first=lsb_first)
    for bit in serial_stream(pattern, c, lsb_first=lsb_first):
        spc.shift_in(bit)
    return spc.parallel_out()


pattern = 0b1011
for lsb_first in (False, True):
    order = "LSB-first" if lsb_first else "MSB-first"
    got = ", ".join(f"c'={w}: {receive(pattern, 4, w, lsb_first):0{w}b}" for w in (4, 3, 2))
    want = ", ".join(f"{pattern & ((1 << w) - 1):0{w}b}" for w in (4, 3, 2))
    print(f"{order}: {got}   (want {want})")

bad = sum(receive(p, 8, 5, True) != p & 0b11111 for p in range(256))
print(f"\nLSB-first corrupts {bad} of 256 patterns for a 5-bit memory on an 8-bit bus")
