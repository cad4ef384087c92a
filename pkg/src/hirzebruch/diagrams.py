"""Diagram values and the structural operators on them.

A diagram ``diag(a_1, ..., a_k)`` is a finite sequence of non-negative
layers; layer ``j`` holds ``a_j`` unit cells.  Canonical diagrams carry no
trailing zero layers, so the empty tuple stands for ``diag(0, ..., 0)``.

Symbolic diagrams extend a concrete prefix with a number of unknown
trailing layers, written ``x`` in text form (``8,9,10,x,x``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Union


class DiagramError(ValueError):
    """Raised for negative layers or malformed diagram text."""


class Diagram(tuple):
    """Immutable canonical diagram; a tuple of layers without trailing zeros."""

    __slots__ = ()

    def __new__(cls, layers: Iterable[int] = ()) -> "Diagram":
        layers = tuple(int(a) for a in layers)
        for a in layers:
            if a < 0:
                raise DiagramError(f"negative layer {a} in {layers}")
        end = len(layers)
        while end and layers[end - 1] == 0:
            end -= 1
        return super().__new__(cls, layers[:end])

    @property
    def layers(self) -> tuple:
        return tuple(self)

    @property
    def xcount(self) -> int:
        return 0

    def __add__(self, other):
        # the "+" of diagrams is concatenation of layers
        if isinstance(other, SymbolicDiagram):
            return SymbolicDiagram(tuple(self) + other.prefix, other.xcount)
        return Diagram(tuple(self) + tuple(other))

    def __repr__(self) -> str:
        return f"diag({','.join(map(str, self))})"

    __str__ = __repr__


@dataclass(frozen=True)
class SymbolicDiagram:
    """A concrete prefix followed by ``xcount`` unknown layers.

    The prefix is kept verbatim while ``xcount > 0`` (a zero in the last
    prefix position is meaningful: it bounds the unknown layers).  With
    ``xcount == 0`` use :meth:`to_diagram` for the canonical value.
    """

    prefix: tuple
    xcount: int = 0

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(a) for a in self.prefix))
        if any(a < 0 for a in self.prefix):
            raise DiagramError(f"negative layer in {self.prefix}")
        if self.xcount < 0:
            raise DiagramError("negative x count")
        if self.xcount == 0:
            object.__setattr__(self, "prefix", tuple(Diagram(self.prefix)))

    def to_diagram(self) -> Diagram:
        if self.xcount:
            raise DiagramError(f"{self} still has symbolic layers")
        return Diagram(self.prefix)

    def __repr__(self) -> str:
        return f"diag({format_diagram(self)})"


AnyDiagram = Union[Diagram, SymbolicDiagram]


def symbolic(prefix: Iterable[int], xcount: int) -> AnyDiagram:
    """Build a symbolic diagram, collapsing to a plain Diagram when x-free."""
    if xcount == 0:
        return Diagram(prefix)
    return SymbolicDiagram(tuple(prefix), xcount)


def canonicalize(layers: Iterable[int]) -> Diagram:
    return Diagram(layers)


def _concrete(d: AnyDiagram) -> tuple:
    return d.prefix if isinstance(d, SymbolicDiagram) else tuple(d)


def size(d: AnyDiagram) -> int:
    """Number of cells; symbolic layers contribute nothing."""
    return sum(_concrete(d))


def leng(d: AnyDiagram) -> int:
    """Number of non-zero layers, each symbolic layer counting as one."""
    return sum(1 for a in _concrete(d) if a > 0) + d.xcount


def cut(d: Diagram, r: int) -> Diagram:
    """The first ``r`` layers of ``d`` (all of ``d`` when ``r`` exceeds its length)."""
    if r < 0:
        raise ValueError("cut length must be non-negative")
    return Diagram(tuple(d)[:r])


def cutr(d: Diagram, length: int) -> Diagram:
    """The last ``length`` layers of ``d``."""
    if length < 0:
        raise ValueError("cutr length must be non-negative")
    if length == 0:
        return Diagram()
    return Diagram(tuple(d)[-length:])


def rev(d: Diagram) -> Diagram:
    return Diagram(reversed(tuple(d)))


def concat(*parts: Diagram) -> Diagram:
    out: list = []
    for p in parts:
        out.extend(p)
    return Diagram(out)


def repeat(value: int, count: int) -> Diagram:
    """``diag([value]^count)``."""
    return Diagram([value] * count)


def staircase(start: int, stop: int, times: int) -> Diagram:
    """``diag([start]^times, ..., [stop]^times)``."""
    return Diagram([v for v in range(start, stop + 1) for _ in range(times)])


def parse_diagram(text: str) -> AnyDiagram:
    """Parse ``"8,9,10,x,x"``-style text; an empty string is the empty diagram."""
    text = text.strip()
    if text.startswith("diag(") and text.endswith(")"):
        text = text[5:-1]
    if not text:
        return Diagram()
    layers = []
    xcount = 0
    for token in text.split(","):
        token = token.strip()
        if token == "x":
            xcount += 1
            continue
        if xcount:
            raise DiagramError(f"numeral after symbolic layer in {text!r}")
        if not token.isdigit():
            raise DiagramError(f"malformed layer {token!r} in {text!r}")
        layers.append(int(token))
    return symbolic(layers, xcount)


def format_diagram(d: AnyDiagram) -> str:
    tokens = [str(a) for a in _concrete(d)] + ["x"] * d.xcount
    return ",".join(tokens)


def sort_key(d: AnyDiagram):
    """Length-lexicographic order used for every reproducible listing."""
    concrete = _concrete(d)
    return (len(concrete) + d.xcount, concrete, d.xcount)


class DiagramSet:
    """Finite set of diagrams iterating in length-lexicographic order."""

    __slots__ = ("_items", "_ordered")

    def __init__(self, items: Iterable[AnyDiagram] = ()):
        self._items = frozenset(items)
        self._ordered = None

    def _order(self) -> tuple:
        if self._ordered is None:
            self._ordered = tuple(sorted(self._items, key=sort_key))
        return self._ordered

    def __iter__(self) -> Iterator[AnyDiagram]:
        return iter(self._order())

    def __len__(self) -> int:
        return len(self._items)

    def __contains__(self, d) -> bool:
        return d in self._items

    def __eq__(self, other) -> bool:
        if isinstance(other, DiagramSet):
            return self._items == other._items
        if isinstance(other, (set, frozenset)):
            return self._items == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._items)

    def __or__(self, other: Iterable[AnyDiagram]) -> "DiagramSet":
        return DiagramSet(self._items.union(other))

    def __sub__(self, other: Iterable[AnyDiagram]) -> "DiagramSet":
        return DiagramSet(self._items.difference(other))

    def __repr__(self) -> str:
        return "DiagramSet({" + ", ".join(map(repr, self)) + "})"

    def as_frozenset(self) -> frozenset:
        return self._items


def rev_set(ds: Iterable[Diagram]) -> DiagramSet:
    return DiagramSet(rev(d) for d in ds)


def read_diagram_file(path) -> DiagramSet:
    """One diagram per line; a blank line is the empty diagram."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().split("\n")
    # the final newline terminates the last record, it does not add one
    if lines and lines[-1] == "":
        lines.pop()
    return DiagramSet(parse_diagram(line) for line in lines)


def write_diagram_file(path, ds: Iterable[AnyDiagram]) -> None:
    items = ds if isinstance(ds, DiagramSet) else DiagramSet(ds)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for d in items:
            fh.write(format_diagram(d) + "\n")
