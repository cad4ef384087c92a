"""Randomized non-speciality certification over a prime field.

The system L(D; m^r) is non-special when the interpolation matrix of the
monomials in D against the order-m vanishing conditions at r points has
maximal rank.  Evaluating at random points of F_p gives a one-sided test: a
full-rank specialization certifies non-speciality, a rank drop proves
nothing.
"""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

from .diagrams import Diagram, DiagramSet, rev_set, size, staircase, repeat
from .reduction import sequence_reduce

DEFAULT_PRIME = 2**31 - 1


class NsVerdict(enum.Enum):
    NON_SPECIAL = "non-special"
    NOT_DECIDED = "not decided"


class ChVerdict(enum.Enum):
    OK = "ok"
    NOT_DECIDED = "not decided"


def binom2(m: int) -> int:
    """Number of conditions imposed by one point of multiplicity m."""
    return m * (m + 1) // 2


def monomials(d: Diagram) -> list:
    """Exponent pairs of the cells of ``d``: layer j holds x^(j-1) y^i, i < a_j.

    Ordered by total degree, then by descending x exponent.
    """
    cells = [(j, i) for j, a in enumerate(d) for i in range(a)]
    cells.sort(key=lambda c: (c[0] + c[1], -c[0]))
    return cells


def conditions(m: int, r: int) -> list:
    """Condition triples (k, dx, dy), 1-based point index, dx + dy < m."""
    out = []
    for k in range(1, r + 1):
        for total in range(m):
            for dx in range(total, -1, -1):
                out.append((k, dx, total - dx))
    return out


def _int64_ok(p: int) -> bool:
    return (p - 1) ** 2 < 2**63


def _falling_table(top: int, depth: int, p: int) -> list:
    # table[d][a] = a (a-1) ... (a-d+1) mod p, zero when d > a
    table = []
    for d in range(depth):
        row = []
        for a in range(top + 1):
            v = 1
            for i in range(d):
                v = v * (a - i) % p
            row.append(v)
        table.append(row)
    return table


@dataclass
class RankProblem:
    matrix: np.ndarray
    monomials: list
    conditions: list
    prime: int

    @property
    def shape(self) -> tuple:
        return self.matrix.shape


def i_matrix(d: Diagram, m: int, r: int, points: Sequence, prime: int = DEFAULT_PRIME) -> RankProblem:
    """Interpolation matrix of L(d; m p_1, ..., m p_r) over F_prime.

    Rows are monomials, columns the conditions; the entry is the
    (dx, dy)-th partial derivative of the monomial evaluated at the point.
    """
    if len(points) != r:
        raise ValueError(f"expected {r} points, got {len(points)}")
    mons = monomials(d)
    conds = conditions(m, r)
    dtype = np.int64 if _int64_ok(prime) else object
    mat = np.zeros((len(mons), len(conds)), dtype=dtype)
    if not mons or not conds:
        return RankProblem(mat, mons, conds, prime)
    alpha = np.array([a for a, _ in mons])
    beta = np.array([b for _, b in mons])
    top = int(max(alpha.max(), beta.max()))
    ff = np.array(_falling_table(top, m, prime), dtype=dtype)
    col = 0
    for (x, y) in points:
        x, y = int(x) % prime, int(y) % prime
        xp = np.array([pow(x, e, prime) for e in range(top + 1)], dtype=dtype)
        yp = np.array([pow(y, e, prime) for e in range(top + 1)], dtype=dtype)
        for total in range(m):
            for dx in range(total, -1, -1):
                dy = total - dx
                # ff is zero where the exponent is below the order, so the clipped power is harmless
                xs = ff[dx][alpha] * xp[np.maximum(alpha - dx, 0)] % prime
                ys = ff[dy][beta] * yp[np.maximum(beta - dy, 0)] % prime
                mat[:, col] = xs * ys % prime
                col += 1
    return RankProblem(mat, mons, conds, prime)


def _eliminate_py(a, prime, target):
    nrows, ncols = a.shape
    rank = 0
    for c in range(ncols):
        if rank >= target or rank == nrows:
            break
        nz = np.flatnonzero(a[rank:, c])
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, c]), prime - 2, prime)
        a[rank, c:] = a[rank, c:] * inv % prime
        below = rank + 1 + np.flatnonzero(a[rank + 1:, c])
        if below.size:
            factors = a[below, c]
            a[below, c:] = (a[below, c:] - np.outer(factors, a[rank, c:]) % prime) % prime
        rank += 1
    return rank


def _eliminate_int64(a, prime, target):
    # same algorithm as _eliminate_py, written as scalar loops for numba
    nrows, ncols = a.shape
    rank = 0
    for c in range(ncols):
        if rank >= target or rank == nrows:
            break
        piv = -1
        for i in range(rank, nrows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(c, ncols):
                tmp = a[rank, j]
                a[rank, j] = a[piv, j]
                a[piv, j] = tmp
        e = prime - 2
        base = a[rank, c]
        inv = 1
        while e:
            if e & 1:
                inv = inv * base % prime
            base = base * base % prime
            e >>= 1
        for j in range(c, ncols):
            a[rank, j] = a[rank, j] * inv % prime
        for i in range(rank + 1, nrows):
            f = a[i, c]
            if f != 0:
                for j in range(c, ncols):
                    a[i, j] = (a[i, j] - f * a[rank, j]) % prime
        rank += 1
    return rank


if numba is not None:
    _eliminate_int64 = numba.njit(cache=True)(_eliminate_int64)
else:  # pragma: no cover
    _eliminate_int64 = _eliminate_py


def rank_mod_p(matrix, prime: int = DEFAULT_PRIME, target: Optional[int] = None) -> int:
    """Rank over F_prime by Gaussian elimination.

    Stops as soon as ``target`` pivots are found (defaults to the maximal
    possible rank).
    """
    dtype = np.int64 if _int64_ok(prime) else object
    a = np.array(matrix, dtype=dtype) % prime
    if a.ndim != 2 or a.size == 0:
        return 0
    if a.shape[0] > a.shape[1]:
        a = a.T.copy()
    nrows, ncols = a.shape
    if target is None:
        target = nrows
    if a.dtype == np.int64:
        a = np.ascontiguousarray(a)
        return int(_eliminate_int64(a, np.int64(prime), np.int64(target)))
    return _eliminate_py(a, prime, target)


def rank(problem: RankProblem) -> int:
    return rank_mod_p(problem.matrix, problem.prime)


def _trial_rng(seed: int, m: int, r: int, trial: int, d: Diagram) -> np.random.Generator:
    key = (m, r, trial, len(d)) + tuple(d)
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=key))


def random_points(rng: np.random.Generator, r: int, prime: int) -> list:
    """r pairwise distinct uniform points of F_prime^2."""
    if r > prime * prime:
        raise ValueError(f"F_{prime}^2 has fewer than {r} points")
    pts: list = []
    seen = set()
    while len(pts) < r:
        x, y = (int(v) for v in rng.integers(0, prime, size=2))
        if (x, y) not in seen:
            seen.add((x, y))
            pts.append((x, y))
    return pts


def ns(m: int, r: int, d: Diagram, tries: int, seed: int = 0, prime: int = DEFAULT_PRIME) -> NsVerdict:
    """Try ``tries`` random specializations of L(d; m^r); NON_SPECIAL on the first of maximal rank."""
    if tries < 1:
        raise ValueError("tries must be at least 1")
    d = Diagram(d)
    expected = min(size(d), r * binom2(m))
    if expected == 0:
        return NsVerdict.NON_SPECIAL
    for trial in range(tries):
        pts = random_points(_trial_rng(seed, m, r, trial, d), r, prime)
        problem = i_matrix(d, m, r, pts, prime)
        if rank_mod_p(problem.matrix, prime, target=expected) == expected:
            return NsVerdict.NON_SPECIAL
    return NsVerdict.NOT_DECIDED


@dataclass(frozen=True)
class CheckResult:
    diagram: Diagram
    r: int
    at_r: NsVerdict
    at_r1: Optional[NsVerdict]  # None when not run
    check_next: bool = True

    @property
    def passed(self) -> bool:
        if not self.check_next:
            return self.at_r is NsVerdict.NON_SPECIAL
        return self.at_r1 is NsVerdict.NON_SPECIAL


def check_one(m: int, d: Diagram, tries: int, seed: int = 0, prime: int = DEFAULT_PRIME,
              check_next: bool = True) -> CheckResult:
    """Test L(d; m^r) and, unless ``check_next`` is off, L(d; m^(r+1)).

    Skipping r+1 certifies strictly less; it exists to replay the legacy
    campaign counts, which were produced that way.
    """
    r = size(d) // binom2(m)
    first = ns(m, r, d, tries, seed, prime)
    second = None
    if check_next and first is NsVerdict.NON_SPECIAL:
        second = ns(m, r + 1, d, tries, seed, prime)
    return CheckResult(Diagram(d), r, first, second, check_next)


def _check_star(args):
    return check_one(*args)


def check_details(m: int, ds: Iterable[Diagram], tries: int, seed: int = 0,
                  prime: int = DEFAULT_PRIME, workers: int = 1, check_next: bool = True) -> list:
    """Per-diagram :class:`CheckResult` list, in the iteration order of ``ds``."""
    jobs = [(m, d, tries, seed, prime, check_next) for d in ds]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_check_star, jobs, chunksize=max(1, len(jobs) // (8 * workers))))
    return [check_one(*job) for job in jobs]


def check_set(m: int, ds: Iterable[Diagram], tries: int, seed: int = 0,
              prime: int = DEFAULT_PRIME, workers: int = 1, check_next: bool = True) -> DiagramSet:
    """Diagrams d with L(d; m^r) and L(d; m^(r+1)) certified non-special, r = floor(#d / C(m+1,2))."""
    results = check_details(m, ds, tries, seed, prime, workers, check_next)
    return DiagramSet(res.diagram for res in results if res.passed)


@dataclass
class PhaseReport:
    k: int
    inputs: int
    reducible: int
    reduced: int
    verified: int
    not_reducible: int
    to_unverified: int
    survivors: int


@dataclass
class ChReport:
    verdict: ChVerdict
    phases: dict = field(default_factory=dict)
    final_checked: int = 0
    final_kept: int = 0
    survivors: Optional[DiagramSet] = None


def _phase(m, k, ds, tries, seed, prime, workers, check_next):
    reduced_map = {d: sequence_reduce(m, k, d) for d in ds}
    reduced = DiagramSet(g for g in reduced_map.values() if g is not None)
    verified = check_set(m, reduced, tries, seed, prime, workers, check_next)
    survivors = DiagramSet(d for d, g in reduced_map.items() if g is None or g not in verified)
    not_reducible = sum(1 for g in reduced_map.values() if g is None)
    report = PhaseReport(
        k=k,
        inputs=len(reduced_map),
        reducible=len(reduced_map) - not_reducible,
        reduced=len(reduced),
        verified=len(verified),
        not_reducible=not_reducible,
        to_unverified=len(survivors) - not_reducible,
        survivors=len(survivors),
    )
    return survivors, report


def ch(m: int, ds: Iterable[Diagram], u: int, v: int, seed: int = 0,
       prime: int = DEFAULT_PRIME, workers: int = 1, phase_check_next: bool = True) -> ChReport:
    """Certify every system L(d; m^r), d in ds, via reductions then a final check.

    Diagrams whose u-fold reduction is verified are settled; the remainder is
    reversed and treated the same way with v reductions; whatever is left is
    checked directly with 16 tries.

    ``phase_check_next=False`` verifies reduced diagrams at r only, as the
    legacy m = 6 campaign did; the final check always tests r and r+1.
    """
    ds = DiagramSet(ds)
    phases = {}
    if u > 0:
        ds, phases["u"] = _phase(m, u, ds, 6, seed, prime, workers, phase_check_next)
    if v > 0:
        ds = rev_set(ds)
        ds, phases["v"] = _phase(m, v, ds, 6, seed, prime, workers, phase_check_next)
    kept = check_set(m, ds, 16, seed, prime, workers)
    verdict = ChVerdict.OK if len(kept) == len(ds) else ChVerdict.NOT_DECIDED
    return ChReport(verdict, phases, len(ds), len(kept), ds)


def nba_diagram(n: int, a: int, b: int) -> Diagram:
    """Monomial diagram of L_n(a, b) on the Hirzebruch surface F_n (n != 1)."""
    if n == 1:
        raise ValueError("n = 1 is not supported")
    if n == 0:
        return repeat(a + 1, b + 1)
    return staircase(1, b, n) + repeat(b + 1, a + 1)


def finalnba(m: int, n: int, a: int, b: int, seed: int = 0,
             prime: int = DEFAULT_PRIME, tries: int = 16) -> set:
    """Multiplicities r for which L_n(a, b; m^r) could not be certified non-special."""
    d = nba_diagram(n, a, b)
    r0 = size(d) // binom2(m)
    undecided = set()
    r = r0
    while True:
        # r = 0 imposes nothing and always passes
        if ns(m, r, d, tries, seed, prime) is NsVerdict.NON_SPECIAL:
            break
        undecided.add(r)
        r -= 1
    r = r0 + 1
    while True:
        if ns(m, r, d, tries, seed, prime) is NsVerdict.NON_SPECIAL:
            break
        undecided.add(r)
        r += 1
    return undecided
