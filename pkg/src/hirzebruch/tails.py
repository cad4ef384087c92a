"""Enumeration of admissible tails.

``h_tails``, ``ltails`` and ``atails`` iterate top-reductions of diagrams
with a fixed layer ``h`` glued in front; ``tails_enum`` closes a symbolic
diagram under symbolic reduction.  A reduction that stops with m or more
non-zero layers left raises :class:`TailsError`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .diagrams import (
    AnyDiagram,
    Diagram,
    DiagramSet,
    SymbolicDiagram,
    cut,
    leng,
    repeat,
    size,
    symbolic,
)
from .reduction import reduce, top_reduce_counted


class TailsError(RuntimeError):
    """A top-reduction stopped too early; ``diagram`` is the offender."""

    def __init__(self, diagram, message: str = ""):
        self.diagram = diagram
        super().__init__(message or f"reduction stops too early at {diagram!r}")


@dataclass
class EnumStats:
    """Work counters reported in logs as "N entries used"."""

    entries: int = 0


def _check_args(m: int, h: int) -> None:
    if m < 2:
        raise ValueError("m must be at least 2")
    if h <= m:
        raise ValueError(f"h must exceed m (got h={h}, m={m})")


def _h_orbit(m: int, h: int, d: Diagram, seen: set, stats: EnumStats) -> None:
    # adds the orbit of d to `seen` in place
    while True:
        seen.add(d)
        g, calls = top_reduce_counted(m, Diagram((h,) + tuple(d)))
        stats.entries += calls
        if leng(g) >= m:
            raise TailsError(g)
        if g in seen:
            return
        d = g


def h_tails(m: int, h: int, d: Diagram = Diagram(), stats: EnumStats | None = None) -> DiagramSet:
    """All admissible h-d-tails for multiplicity m.

    Starting from ``d``, repeatedly glue a layer ``h`` in front and
    top-reduce; stop on the first revisit.
    """
    _check_args(m, h)
    d = Diagram(d)
    if leng(d) > m - 1:
        raise ValueError(f"{d!r} has more than {m - 1} non-zero layers")
    seen: set = set()
    _h_orbit(m, h, d, seen, stats if stats is not None else EnumStats())
    return DiagramSet(seen)


def ltails(m: int, h: int, ds: Iterable[Diagram], stats: EnumStats | None = None) -> DiagramSet:
    """Union of ``h_tails(m, h, d)`` over ``ds``.

    A start that already lies in the union is skipped: its orbit is a suffix
    of an orbit already collected.
    """
    _check_args(m, h)
    stats = stats if stats is not None else EnumStats()
    seen: set = set()
    for d in ds:
        if d in seen:
            continue
        if leng(d) > m - 1:
            raise ValueError(f"{d!r} has more than {m - 1} non-zero layers")
        _h_orbit(m, h, d, seen, stats)
    return DiagramSet(seen)


def atails(m: int, h: int, n: int, ds: Iterable[Diagram], stats: EnumStats | None = None) -> DiagramSet:
    """Top-reductions of ``diag([h]^n) + d`` for every ``d`` in ``ds``."""
    _check_args(m, h)
    if n <= 0:
        raise ValueError("n must be positive")
    stats = stats if stats is not None else EnumStats()
    block = repeat(h, n)
    out = set()
    for d in ds:
        g, calls = top_reduce_counted(m, block + d)
        stats.entries += calls
        if leng(g) >= m:
            raise TailsError(g)
        out.add(g)
    return DiagramSet(out)


def _decreasing_tuples(top: int, k: int):
    # non-increasing k-tuples with top >= c_1 >= ... >= c_k >= 0
    for combo in itertools.combinations_with_replacement(range(top, -1, -1), k):
        yield combo


def symb_reduce(m: int, w: AnyDiagram) -> set:
    """All symbolic m-reductions of ``w`` (a prefix of m layers plus x's)."""
    if isinstance(w, SymbolicDiagram) and w.xcount:
        prefix, k = w.prefix, w.xcount
    else:
        g = reduce(m, Diagram(w))
        return set() if g is None else {g}
    if k > m - 1:
        raise ValueError(f"at most {m - 1} symbolic layers allowed, got {k}")
    if len(prefix) != m:
        raise ValueError(f"symbolic prefix must have {m} layers, got {prefix}")
    out = set()
    top = min(m + 1, prefix[-1])
    for cs in _decreasing_tuples(top, k):
        d = reduce(m, Diagram(prefix + cs))
        if d is None:
            continue
        head = tuple(d)[:m]
        extra = leng(d) - leng(Diagram(head))
        out.add(symbolic(head, extra))
    return out


def tails_enum(m: int, d: Diagram, stats: EnumStats | None = None) -> DiagramSet:
    """All admissible ``d``-tails, ``d`` having exactly m layers.

    Worklist closure of :func:`symb_reduce` from ``d`` followed by m-1
    symbolic layers; x-free results with fewer than m non-zero layers are
    collected.  ``stats.entries`` counts distinct worklist items processed.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    d = tuple(d)
    if len(d) != m:
        raise ValueError(f"tails needs exactly {m} layers, got {d}")
    stats = stats if stats is not None else EnumStats()
    start = symbolic(d, m - 1)
    worklist = [start]
    seen = {start}
    found = set()
    while worklist:
        w = worklist.pop()
        stats.entries += 1
        w_size = size(w)
        for r in symb_reduce(m, w):
            if size(r) >= w_size:
                raise AssertionError(f"no descent from {w!r} to {r!r}")
            if r.xcount == 0 and leng(r) < m:
                found.add(r)
            if r not in seen:
                seen.add(r)
                worklist.append(r)
    return DiagramSet(found)
