"""Per-memory serial-to-parallel (SPC) and parallel-to-serial (PSC) converters."""
from __future__ import annotations

from .errors import ProtocolError, StalenessError


class Spc:
    """Shift register that turns the serial pattern broadcast into a word.

    The controller broadcasts DP[c-1] first and DP[0] last.  Each bit enters
    at the LSB and moves up, so after the broadcast a ``width``-bit SPC holds
    DP[width-1:0]; the extra leading bits of a wider pattern fall off the top.

    ``lsb_first=True`` is the naive alternative (DP[0] broadcast first, bits
    entering at the MSB and moving down).  A narrower SPC then ends up with
    DP[c-1:c-width] instead.  It exists only to demonstrate that mismatch.
    """

    def __init__(self, width, lsb_first=False):
        self.width = width
        self.lsb_first = lsb_first
        self.register = 0
        self._mask = (1 << width) - 1
        self._shifts = 0

    def shift_in(self, bit):
        if self.lsb_first:
            self.register = (self.register >> 1) | ((bit & 1) << (self.width - 1))
        else:
            self.register = ((self.register << 1) | (bit & 1)) & self._mask
        self._shifts += 1
        return self

    def parallel_out(self):
        if self._shifts < self.width:
            raise StalenessError(
                f"SPC read after {self._shifts} of {self.width} shifts; no complete delivery yet"
            )
        return self.register


def serial_stream(pattern, c, lsb_first=False):
    """Bit order in which the controller broadcasts a c-bit pattern."""
    order = range(c) if lsb_first else range(c - 1, -1, -1)
    return [(pattern >> k) & 1 for k in order]


def deliver(spcs, pattern, c):
    """Broadcast ``pattern`` to every SPC; returns the cycles spent (c)."""
    for bit in serial_stream(pattern, c):
        for spc in spcs:
            spc.shift_in(bit)
    return c


class Psc:
    """Scan register between a memory's data outputs and the controller.

    With ``scan_en`` low the register captures a read word in parallel; with
    it high each call to ``shift_out`` returns the next bit, LSB first, and
    zeros once the captured bits are exhausted.  Shifting never touches the
    memory array.
    """

    def __init__(self, width):
        self.width = width
        self.capture_reg = 0
        self.scan_en = False

    def capture(self, word):
        if self.scan_en:
            raise ProtocolError("PSC capture while scan_en is asserted")
        self.capture_reg = word
        return self

    def shift_out(self):
        if not self.scan_en:
            raise ProtocolError("PSC shift while scan_en is deasserted")
        bit = self.capture_reg & 1
        self.capture_reg >>= 1
        return bit
