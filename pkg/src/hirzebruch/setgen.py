"""Generators of the diagram families checked for non-speciality.

Every generator returns a :class:`GeneratedSet`: the final family plus the
intermediate left/right sets, which the logs and tests report.  Distinct
(left, right) pairs may glue to the same diagram (a left tail ending in the
middle layer value shifts into the middle block), so ``pairs`` can exceed
``len(diagrams)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .diagrams import (
    Diagram,
    DiagramSet,
    cut,
    cutr,
    repeat,
    rev,
    staircase,
)
from .tails import atails, h_tails, ltails, tails_enum


@dataclass
class GeneratedSet:
    name: str
    params: tuple
    diagrams: DiagramSet
    left: Optional[DiagramSet] = None
    middle: Optional[Diagram] = None
    right: Optional[DiagramSet] = None
    left_history: list = field(default_factory=list)
    pairs: int = 0

    def __post_init__(self):
        if not self.pairs:
            self.pairs = len(self.diagrams)

    def __iter__(self):
        return iter(self.diagrams)

    def __len__(self):
        return len(self.diagrams)

    def __contains__(self, d):
        return d in self.diagrams


def base_diagram(start: int, step: int, count: int) -> Diagram:
    """``diag(start, start+step, ..., start+(count-1)*step)``."""
    if min(start, step, count) < 0:
        raise ValueError("basediag arguments must be non-negative")
    return Diagram(start + i * step for i in range(count))


def glue(left: Iterable[Diagram], mid, right: Iterable[Diagram], reverse_left: bool = False) -> DiagramSet:
    """All ``L + mid + R``; ``mid`` is a diagram or an iterable of them."""
    mids = [mid] if isinstance(mid, Diagram) else list(mid)
    right = list(right)
    out = set()
    for lft in left:
        lft = rev(lft) if reverse_left else lft
        for md in mids:
            head = tuple(lft) + tuple(md)
            for r in right:
                out.add(Diagram(head + tuple(r)))
    return DiagramSet(out)


def set_bign(m: int, N: int) -> GeneratedSet:
    if m < 4 or N < m:
        raise ValueError("setbign needs m >= 4 and N >= m")
    history = []
    left = h_tails(m, m + 1)
    history.append(len(left))
    for j in range(m + 2, 2 * m - 2):
        left = atails(m, j, N, left)
        history.append(len(left))
        left = ltails(m, j, left)
        history.append(len(left))
    left = ltails(m, 2 * m - 2, left)
    history.append(len(left))
    right = tails_enum(m, repeat(2 * m - 1, m))
    mid = repeat(2 * m - 2, N)
    out = glue(left, mid, right, reverse_left=True)
    return GeneratedSet("setbign", (m, N), out, left, mid, right, history, len(left) * len(right))


def set_bign23(m: int, N: int) -> GeneratedSet:
    if m not in (2, 3) or N < m:
        raise ValueError("setbign23 needs m in {2, 3} and N >= m")
    left = h_tails(m, m + 1)
    history = [len(left)]
    left = ltails(m, m + 2, left)
    history.append(len(left))
    right = tails_enum(m, repeat(m + 3, m))
    mid = repeat(m + 2, N)
    out = glue(left, mid, right, reverse_left=True)
    return GeneratedSet("setbign23", (m, N), out, left, mid, right, history, len(left) * len(right))


def set_bignb(m: int, N: int, b: int) -> GeneratedSet:
    if m < 2 or N < m or b < m + 2:
        raise ValueError("setbignb needs m >= 2, N >= m, b >= m + 2")
    left = h_tails(m, m + 1)
    history = [len(left)]
    for j in range(m + 2, b):
        left = atails(m, j, N, left)
        history.append(len(left))
        left = ltails(m, j, left)
        history.append(len(left))
    left = ltails(m, b, left)
    history.append(len(left))
    right = h_tails(m, b + 1)
    mid = repeat(b, N)
    out = glue(left, mid, right, reverse_left=True)
    return GeneratedSet("setbignb", (m, N, b), out, left, mid, right, history, len(left) * len(right))


def nb_blocks(m: int, n: int, B: int) -> tuple:
    """The (G, H, K) diagrams of the setnb construction."""
    g = staircase(m + 1, B, n) + Diagram((B + 1,))
    h = cutr(g, m)
    k = cut(g, n * (B - m) - m + 1)
    return g, h, k


def set_nb(m: int, n: int, B: int) -> GeneratedSet:
    if m < 2 or n < 2 or B < 2 * m - 1:
        raise ValueError("setnb needs m >= 2, n >= 2, B >= 2m - 1")
    _, h, k = nb_blocks(m, n, B)
    right = tails_enum(m, h)
    out = glue([Diagram()], k, right)
    return GeneratedSet("setnb", (m, n, B), out, None, k, right)


def set_nba(m: int, n: int, b: int, A: int) -> GeneratedSet:
    if m < 2 or n < 2 or b < m + 1 or A < 0:
        raise ValueError("setnba needs m >= 2, n >= 2, b >= m + 1, A >= 0")
    right = h_tails(m, b + 1)
    prefix = staircase(m + 1, b, n) + repeat(b + 1, A + 1)
    out = glue([Diagram()], prefix, right)
    return GeneratedSet("setnba", (m, n, b, A), out, None, prefix, right)


def set_pb(m: int, B: int) -> GeneratedSet:
    if m < 2 or B < 3 * (m - 1):
        raise ValueError("setpb needs m >= 2, B >= 3(m - 1)")
    right = tails_enum(m, Diagram(range(B - m + 2, B + 2)))
    prefix = Diagram(range(1, B - m + 2))
    out = glue([Diagram()], prefix, right)
    return GeneratedSet("setpb", (m, B), out, None, prefix, right)


def set_pba(m: int, b: int, A: int) -> GeneratedSet:
    if m < 2 or b < m or A < b:
        raise ValueError("setpba needs m >= 2, b >= m, A >= b")
    right = h_tails(m, b + 1)
    prefix = repeat(b + 1, A + 1)
    out = glue([Diagram()], prefix, right)
    return GeneratedSet("setpba", (m, b, A), out, None, prefix, right)


GENERATORS = {
    "setbign": set_bign,
    "setbign23": set_bign23,
    "setbignb": set_bignb,
    "setnb": set_nb,
    "setnba": set_nba,
    "setpb": set_pb,
    "setpba": set_pba,
}
