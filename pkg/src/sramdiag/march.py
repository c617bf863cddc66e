"""March test algebra.

Notation (ASCII, whitespace ignored)::

    b(w0);u(r0,w1);u(r1,w0);d(r0,w1);d(r1,w0);b(r0)
    b(w0)@1;u(r0,w1)@1;u(r1,w0)@1

``u``/``d``/``b`` are ascending, descending and either-order elements (the
arrows ⇑ ⇓ ⇕ are accepted too).  ``r``/``w``/``n`` are read, write and
no-write-recovery write; the digit is the polarity relative to the element's
data background (0 = background, 1 = its complement).  ``@j`` selects data
background ``j``; 0 (solid) is the default and is omitted when formatting.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from .errors import DomainError, MarchParseError, MarchStructureError, MergeConflictError


class Order(str, Enum):
    UP = "u"
    DOWN = "d"
    ANY = "b"


class OpKind(str, Enum):
    READ = "r"
    WRITE = "w"
    NWRITE = "n"


@dataclass(frozen=True)
class MarchOp:
    kind: OpKind
    value: int  # 0 = background polarity, 1 = complement

    def __post_init__(self):
        if self.value not in (0, 1):
            raise DomainError(f"op polarity must be 0 or 1, got {self.value!r}")

    @property
    def is_write(self):
        return self.kind is not OpKind.READ

    def __str__(self):
        return f"{self.kind.value}{self.value}"


def R(value):
    return MarchOp(OpKind.READ, value)


def W(value):
    return MarchOp(OpKind.WRITE, value)


def N(value):
    return MarchOp(OpKind.NWRITE, value)


@dataclass(frozen=True)
class MarchElement:
    order: Order
    ops: tuple
    background: int = 0

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        if not self.ops:
            raise MarchStructureError("a March element needs at least one op")
        if not isinstance(self.background, int) or self.background < 0:
            raise DomainError(f"background id must be a non-negative int, got {self.background!r}")

    @property
    def has_write(self):
        return any(op.is_write for op in self.ops)

    @property
    def reads(self):
        return sum(1 for op in self.ops if op.kind is OpKind.READ)

    @property
    def writes(self):
        return sum(1 for op in self.ops if op.kind is OpKind.WRITE)

    @property
    def nwrites(self):
        return sum(1 for op in self.ops if op.kind is OpKind.NWRITE)

    def __str__(self):
        body = f"{self.order.value}({','.join(str(op) for op in self.ops)})"
        return body + (f"@{self.background}" if self.background else "")


@dataclass(frozen=True)
class MarchAlgorithm:
    elements: tuple
    name: str = field(default="custom", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if not self.elements:
            raise MarchStructureError("a March algorithm needs at least one element")

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __str__(self):
        return format_march(self)

    @property
    def uses_nwrite(self):
        return any(el.nwrites for el in self.elements)

    def ops_per_word(self):
        return sum(len(el.ops) for el in self.elements)

    def operation_count(self, n):
        return n * self.ops_per_word()

    def delivery_count(self):
        return sum(1 for el in self.elements if el.has_write)

    def cycle_count(self, n, c):
        """Clock cycles for an n_max x c_max cluster, from the algebra alone.

        A writing element first pays ``c`` cycles of serial pattern delivery;
        each write/NWRC costs one cycle and each read one capture cycle plus
        ``c`` PSC shift cycles, for every one of the ``n`` addresses.
        """
        total = 0
        for el in self.elements:
            if el.has_write:
                total += c
            total += n * (el.writes + el.nwrites + el.reads * (1 + c))
        return total


def ceil_log2(c):
    if not isinstance(c, int) or isinstance(c, bool) or c < 1:
        raise DomainError(f"width must be a positive integer, got {c!r}")
    return (c - 1).bit_length()


_C_MINUS = (
    MarchElement(Order.ANY, (W(0),)),
    MarchElement(Order.UP, (R(0), W(1))),
    MarchElement(Order.UP, (R(1), W(0))),
    MarchElement(Order.DOWN, (R(0), W(1))),
    MarchElement(Order.DOWN, (R(1), W(0))),
    MarchElement(Order.ANY, (R(0),)),
)

_C_MINUS_NWRTM = (
    MarchElement(Order.ANY, (W(0),)),
    MarchElement(Order.ANY, (N(1),)),
    MarchElement(Order.UP, (R(1), W(0))),
    MarchElement(Order.UP, (R(0), W(1))),
    MarchElement(Order.DOWN, (R(1), W(0))),
    MarchElement(Order.DOWN, (R(0), W(1))),
    MarchElement(Order.ANY, (N(0),)),
    MarchElement(Order.ANY, (R(0),)),
)


def march_c_minus():
    return MarchAlgorithm(_C_MINUS, name="March C-")


def background_block(j):
    """The three elements March CW adds for counting background ``j``."""
    return (
        MarchElement(Order.ANY, (W(0),), j),
        MarchElement(Order.UP, (W(1), R(1)), j),
        MarchElement(Order.UP, (W(0), R(0)), j),
    )


def march_cw(width):
    extra = []
    for j in range(1, ceil_log2(width) + 1):
        extra.extend(background_block(j))
    return MarchAlgorithm(_C_MINUS + tuple(extra), name="March CW" if extra else "March C-")


def merge_nwrtm(alg):
    """Fold two NWRC writes into the March C- base of ``alg``.

    The base becomes w0, Nw1 (a good cell flips, a node-A DRF cell cannot),
    the four read-modify-write elements with inverted polarity, then Nw0
    (catches node-B DRF cells) before the final read.  Costs 2n ops and two
    pattern deliveries more than the base it replaces.
    """
    if alg.uses_nwrite:
        raise MergeConflictError(f"{alg.name!r} already contains NWRC writes")
    if alg.elements[: len(_C_MINUS)] != _C_MINUS:
        raise MarchStructureError(f"{alg.name!r} does not start with the March C- base")
    rest = alg.elements[len(_C_MINUS):]
    return MarchAlgorithm(_C_MINUS_NWRTM + rest, name=f"{alg.name} + NWRTM")


# -- notation -----------------------------------------------------------------

_ORDER_TOKENS = {"u": Order.UP, "d": Order.DOWN, "b": Order.ANY,
                 "⇑": Order.UP, "⇓": Order.DOWN, "⇕": Order.ANY}
_OP_RE = re.compile(r"([rwn])([01])$")
_TOKEN_RE = re.compile(r"\s*([^\s(),;@]+|[(),;@])")


def _tokens(text):
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:  # trailing whitespace
            break
        yield m.group(1), m.start(1)
        pos = m.end()


def parse_march(text, name="custom"):
    toks = list(_tokens(text))
    toks.append(("", len(text)))
    i = 0

    def take(expected=None):
        nonlocal i
        tok, pos = toks[i]
        if expected is not None and tok != expected:
            raise MarchParseError(f"expected {expected!r}", pos, tok)
        i += 1
        return tok, pos

    elements = []
    while True:
        tok, pos = take()
        if tok not in _ORDER_TOKENS:
            raise MarchParseError("expected direction u, d or b" if tok else "expected an element",
                                  pos, tok)
        order = _ORDER_TOKENS[tok]
        take("(")
        ops = []
        while True:
            tok, pos = take()
            if tok == ")" and not ops:
                raise MarchParseError("empty op list", pos, tok)
            m = _OP_RE.match(tok)
            if m is None:
                raise MarchParseError("unknown op", pos, tok)
            ops.append(MarchOp(OpKind(m.group(1)), int(m.group(2))))
            tok, pos = take()
            if tok == ")":
                break
            if tok != ",":
                raise MarchParseError("expected ',' or ')'", pos, tok)
        background = 0
        tok, pos = toks[i]
        if tok == "@":
            take()
            tok, pos = take()
            if not tok.isdigit():
                raise MarchParseError("background id must be a non-negative integer", pos, tok)
            background = int(tok)
        elements.append(MarchElement(order, tuple(ops), background))
        tok, pos = take()
        if tok == "":
            break
        if tok != ";":
            raise MarchParseError("expected ';' between elements", pos, tok)
    return MarchAlgorithm(tuple(elements), name=name)


def format_march(alg):
    return ";".join(str(el) for el in alg.elements)


ALGORITHMS = {
    "marchc": lambda width: march_c_minus(),
    "marchcw": march_cw,
    "marchcw_nwrtm": lambda width: merge_nwrtm(march_cw(width)),
}


def resolve_algorithm(selector, width):
    """Named selector (see ``ALGORITHMS``) or inline notation."""
    if selector in ALGORITHMS:
        return ALGORITHMS[selector](width)
    return parse_march(selector)
