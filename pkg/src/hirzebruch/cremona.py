"""Detection of -1-special systems on Hirzebruch surfaces.

A system L_n(a, b; m^r) is pushed to plane systems L(d; m_1, ..., m_s)
which are then simplified by splitting off lines through the two largest
points and by quadratic Cremona transformations.  If some simplified system
has larger expected dimension than the original, the original is
-1-special.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


class ReductionCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class PlanarSystem:
    """L(d; m_1, ..., m_s), normalized: multiplicities positive and non-increasing."""

    degree: int
    mults: tuple = ()

    def __post_init__(self):
        ms = sorted((max(0, int(v)) for v in self.mults), reverse=True)
        object.__setattr__(self, "mults", tuple(v for v in ms if v > 0))

    def mult(self, j: int) -> int:
        """The j-th largest multiplicity (1-based), zero past the end."""
        return self.mults[j - 1] if j <= len(self.mults) else 0

    def __str__(self) -> str:
        if not self.mults:
            return f"L({self.degree};)"
        parts = []
        i = 0
        ms = self.mults
        while i < len(ms):
            j = i
            while j < len(ms) and ms[j] == ms[i]:
                j += 1
            parts.append(str(ms[i]) if j - i == 1 else f"{ms[i]}^{j - i}")
            i = j
        return f"L({self.degree};{','.join(parts)})"


def vdim_planar(sys: PlanarSystem) -> int:
    d = sys.degree
    return d * (d + 3) // 2 - sum(v * (v + 1) // 2 for v in sys.mults)


def edim_planar(sys: PlanarSystem) -> int:
    if sys.degree < 0:
        return -1
    return max(-1, vdim_planar(sys))


def vdim_hirzebruch(m: int, n: int, a: int, b: int, r: int) -> int:
    return (a + 1) * (b + 1) + n * b * (b + 1) // 2 - 1 - r * m * (m + 1) // 2


def edim_hirzebruch(m: int, n: int, a: int, b: int, r: int) -> int:
    return max(-1, vdim_hirzebruch(m, n, a, b, r))


def sort_system(sys: PlanarSystem) -> PlanarSystem:
    # construction already normalizes; kept as an explicit step of the procedure
    return PlanarSystem(sys.degree, sys.mults)


def take_line(sys: PlanarSystem) -> PlanarSystem:
    """L(d-1; m_1-1, m_2-1, m_3, ...)."""
    ms = list(sys.mults) + [0] * max(0, 2 - len(sys.mults))
    ms[0] -= 1
    ms[1] -= 1
    return PlanarSystem(sys.degree - 1, ms)


def cremona_step(sys: PlanarSystem) -> PlanarSystem:
    """L(d+k; m_1+k, m_2+k, m_3+k, m_4, ...) with k = d - m_1 - m_2 - m_3."""
    ms = list(sys.mults) + [0] * max(0, 3 - len(sys.mults))
    k = sys.degree - ms[0] - ms[1] - ms[2]
    for i in range(3):
        ms[i] += k
    return PlanarSystem(sys.degree + k, ms)


def _excess(sys: PlanarSystem, upto: int) -> int:
    return sys.degree - sum(sys.mult(j) for j in range(1, upto + 1))


def reduce_system(sys: PlanarSystem, trace: list | None = None) -> PlanarSystem:
    """Apply take-line / Cremona until d >= m_1 + m_2 + m_3.

    A system of negative degree is empty and is returned as is.  ``trace``
    collects every intermediate system when given.
    """
    cap = 10 * (abs(sys.degree) + len(sys.mults) + 10)
    sys = sort_system(sys)
    if trace is not None:
        trace.append(sys)
    steps = 0
    while _excess(sys, 3) < 0:
        if sys.degree < 0:
            break
        steps += 1
        if steps > cap:
            raise ReductionCapExceeded(f"no normal form after {cap} steps, at {sys}")
        if _excess(sys, 2) < 0:
            sys = take_line(sys)
        else:
            sys = cremona_step(sys)
        sys = sort_system(sys)
        if trace is not None:
            trace.append(sys)
    return sys


class SpecVerdict(enum.Enum):
    MINUS_ONE_SPECIAL = "-1-special"
    ERROR = "error"


@dataclass
class SpecResult:
    verdict: SpecVerdict
    expected: int
    t: int | None = None
    endpoints: list = field(default_factory=list)  # (t, start, reduced, edim)
    detail: str = ""


def planar_start(m: int, n: int, a: int, b: int, r: int, t: int) -> PlanarSystem:
    d = (n + 1) * b + a
    m0 = n * b + a
    return PlanarSystem(d - t, (m0,) + (m,) * r + (b - t,) * (n + 1))


def spec_check(m: int, n: int, a: int, b: int, r: int) -> SpecResult:
    """Decide whether L_n(a, b; m^r) is -1-special by the plane reduction."""
    e = edim_hirzebruch(m, n, a, b, r)
    result = SpecResult(SpecVerdict.ERROR, e)
    for t in range(b + 1):
        start = planar_start(m, n, a, b, r, t)
        try:
            end = reduce_system(start)
        except ReductionCapExceeded as exc:
            result.detail = str(exc)
            return result
        ed = edim_planar(end)
        result.endpoints.append((t, start, end, ed))
        if ed > e:
            result.verdict = SpecVerdict.MINUS_ONE_SPECIAL
            result.t = t
            return result
    return result
