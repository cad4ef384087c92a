"""The m-reduction step and its iterated and set-level forms.

``reduce`` returns ``None`` when the diagram is not m-reducible; every other
function here propagates that convention.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .diagrams import Diagram, DiagramSet


def _reduce_layers(m: int, a: tuple) -> Optional[tuple]:
    k = len(a)
    if k < m:
        return None
    b = list(a)
    free = list(range(1, m + 1))  # {1..m} minus the amounts used, ascending
    for j in range(k - 1, k - m - 1, -1):
        r = a[j] if a[j] < m else free[-1]
        b[j] = a[j] - r
        if r in free:
            free.remove(r)
    # m steps remove exactly {1..m} iff every amount got used
    if free:
        return None
    return tuple(b)


def reduce(m: int, d: Diagram) -> Optional[Diagram]:
    """One m-reduction of ``d``, or None if ``d`` is not m-reducible.

    The last m layers are scanned from the end; a layer below m loses all of
    its cells, any other layer loses the largest amount in {1..m} not used
    yet.  The step succeeds iff the amounts removed are exactly {1..m}.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    out = _reduce_layers(m, tuple(d))
    return None if out is None else Diagram(out)


def sequence_reduce(m: int, k: int, d: Diagram) -> Optional[Diagram]:
    if k < 1:
        raise ValueError("k must be at least 1")
    for _ in range(k):
        d = reduce(m, d)
        if d is None:
            return None
    return d


def top_reduce(m: int, d: Diagram) -> Diagram:
    """Reduce ``d`` as many times as possible."""
    return top_reduce_counted(m, d)[0]


def top_reduce_counted(m: int, d: Diagram) -> tuple:
    """``top_reduce`` plus the number of reduce calls it made."""
    calls = 0
    while True:
        calls += 1
        g = reduce(m, d)
        if g is None:
            return d, calls
        d = g


def red_set(m: int, k: int, ds: Iterable[Diagram]) -> DiagramSet:
    out = set()
    for d in ds:
        g = sequence_reduce(m, k, d)
        if g is not None:
            out.add(g)
    return DiagramSet(out)


def redout_set(m: int, k: int, ds: Iterable[Diagram], targets) -> DiagramSet:
    """Members of ``ds`` whose k-fold reduction fails or misses ``targets``."""
    targets = targets if isinstance(targets, (set, frozenset, DiagramSet)) else set(targets)
    return DiagramSet(d for d in ds if sequence_reduce(m, k, d) not in targets)
