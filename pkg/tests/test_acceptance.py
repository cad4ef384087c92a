"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the lines are repeated in
the terminal summary.  Randomized criteria use seed 0 and the default prime,
and rerun once with seed 1 if a verdict-dependent count disagrees.
"""

import random
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from oracles import rank_oracle

from hirzebruch.cli import main
from hirzebruch.cremona import PlanarSystem, SpecVerdict, spec_check
from hirzebruch.diagrams import Diagram, parse_diagram, read_diagram_file, repeat, size, SymbolicDiagram
from hirzebruch.reduction import red_set, reduce, sequence_reduce, top_reduce
from hirzebruch.setgen import nb_blocks, set_bign, set_bignb, set_nb, set_pb, set_pba
from hirzebruch.speciality import (
    ChVerdict,
    NsVerdict,
    ch,
    finalnba,
    i_matrix,
    ns,
    rank_mod_p,
)
from hirzebruch.tails import h_tails, symb_reduce, tails_enum

SEEDS = (0, 1)


def D(*xs):
    return Diagram(xs)


def report(label, ok, elapsed, budget, detail=""):
    in_time = elapsed <= budget
    status = "PASS" if ok and in_time else "FAIL"
    line = f"[{status}] criterion {label}: {detail} ({elapsed:.3f}s, budget {budget:g}s)"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line
    assert in_time, line


def with_rerun(run, mismatches):
    """Run with the first seed; on a mismatch rerun once with the second."""
    result = run(SEEDS[0])
    bad = mismatches(result)
    if bad:
        result = run(SEEDS[1])
        bad = mismatches(result)
    return result, bad


@pytest.fixture(scope="module", autouse=True)
def warm_kernel():
    # compile/load the elimination kernel outside any timed region
    rank_mod_p(np.eye(2, dtype=np.int64), 7)


def test_criterion_01_reduction_fixtures():
    t = time.perf_counter()
    d = repeat(4, 3) + repeat(5, 5)
    checks = [
        reduce(3, D(5, 5, 4, 2)) == D(5, 4, 1),
        sequence_reduce(4, 3, d) == D(3, 2, 1, 1),
        sequence_reduce(4, 4, d) is None,
        top_reduce(3, D(5, 5, 4, 2)) == D(3, 1),
    ]
    report("1", all(checks), time.perf_counter() - t, 1e-3, f"reduction fixtures {checks}")


def test_criterion_02_conservation():
    rnd = random.Random(2024)
    cases = [
        (rnd.randint(2, 7), Diagram(rnd.randint(0, 40) for _ in range(rnd.randint(0, 20))))
        for _ in range(100_000)
    ]
    t = time.perf_counter()
    bad = reduced = 0
    for m, d in cases:
        g = reduce(m, d)
        if g is None:
            continue
        reduced += 1
        padded = tuple(g) + (0,) * (len(d) - len(g))
        if size(d) - size(g) != m * (m + 1) // 2 or padded[: len(d) - m] != tuple(d)[: len(d) - m]:
            bad += 1
    report("2", bad == 0, time.perf_counter() - t, 5,
           f"{reduced} successful reductions of 100000, {bad} violations")


def test_criterion_03_tails():
    t = time.perf_counter()
    h5 = h_tails(3, 5)
    h59 = h_tails(5, 9)
    expected_symb = {
        SymbolicDiagram((5, 5, 4), 2), SymbolicDiagram((5, 5, 4), 1),
        SymbolicDiagram((5, 5, 3), 1), SymbolicDiagram((5, 4, 3), 1),
        D(5, 5, 4), D(5, 5, 3), D(5, 4, 3), D(5, 5, 2), D(5, 4, 2), D(5, 3, 2), D(4, 3, 2),
    }
    checks = {
        "h(3,4)": h_tails(3, 4) == {D(), D(4), D(4, 4)},
        "h(3,5)": len(h5) == 9 and h5 == {D(), D(5), D(5, 5), D(3), D(5, 3), D(4, 3), D(4, 2), D(4, 1), D(3, 1)},
        "h(3,5,10)": len(h_tails(3, 5, D(1, 0))) == 13,
        "h(5,9)": len(h59) == 15 and D(7, 5, 3) in h59,
        "tails(2,55)": tails_enum(2, D(5, 5)) == {D(k) for k in range(1, 6)},
        "tails(3,8910)": len(tails_enum(3, D(8, 9, 10))) == 28,
        "tails(5,9^5)": len(tails_enum(5, repeat(9, 5))) == 147,
        "symb": symb_reduce(3, parse_diagram("5,5,5,x,x")) == expected_symb,
    }
    failed = [k for k, v in checks.items() if not v]
    report("3", not failed, time.perf_counter() - t, 10, f"tail enumeration, failed={failed}")


def test_criterion_04_set_generators():
    t = time.perf_counter()
    bign = set_bign(5, 11)
    member = D(1, 3, 6, 8) + repeat(8, 11) + D(7, 6, 5, 4)
    _, h, k = nb_blocks(3, 2, 6)
    pba = {
        repeat(8, 8), repeat(8, 9), repeat(8, 10), repeat(8, 8) + D(5, 1),
        repeat(8, 8) + D(6, 2), repeat(8, 8) + D(7, 3), repeat(8, 8) + D(7, 5),
    }
    checks = {
        "bign history": bign.left_history[1:] == [5, 53, 119],
        "|R|": len(bign.right) == 147,
        "pairs": bign.pairs == 17493,
        "distinct": len(bign) == 16521,
        "member": member in bign,
        "bignb(5,11,8)": len(set_bignb(5, 11, 8)) == 1785,
        "bignb(6,51,8)": len(set_bignb(6, 51, 8)) == 5472,
        "pba": set_pba(3, 7, 7).diagrams == pba,
        "nb blocks": (k, h) == (D(4, 4, 5, 5), D(6, 6, 7)) and len(set_nb(3, 2, 6)) > 0,
        "pb": D(1, 2, 3, 4, 5, 6, 7, 6, 5) in set_pb(3, 9),
    }
    failed = [name for name, ok in checks.items() if not ok]
    report("4", not failed, time.perf_counter() - t, 60,
           f"generators, 17493 glued pairs / {len(bign)} distinct, failed={failed}")


def test_criterion_05_matrix():
    printed = [
        [1, 0, 0, 1, 0, 0],
        [0, 1, 0, 2, 1, 0],
        [0, 0, 1, 1, 0, 1],
        [0, 0, 0, 4, 4, 0],
        [0, 0, 0, 2, 1, 2],
        [0, 0, 0, 1, 0, 1],
    ]
    t = time.perf_counter()
    prob = i_matrix(D(3, 2, 1), 2, 2, [(0, 0), (2, 1)])
    rk = rank_mod_p(prob.matrix, prob.prime)
    elapsed = time.perf_counter() - t
    got = prob.matrix.tolist()
    diffs = [(i + 1, j + 1) for i in range(6) for j in range(6) if got[i][j] != printed[i][j]]
    ok = diffs == [(6, 6)] and got[5][5] == 2 and rk == 5
    report("5", ok, elapsed, 1e-3, f"35/36 entries agree, differing {diffs} = {got[5][5]}, rank {rk}")


def test_criterion_06_rank_oracle():
    rng = np.random.default_rng(6)
    mats = []
    for i in range(10_000):
        p = 101 if i % 2 else 65521
        nr, nc = (int(x) for x in rng.integers(1, 7, 2))
        if i % 3 == 0:
            k = int(rng.integers(0, 7))
            a = rng.integers(0, p, (nr, k)) @ rng.integers(0, p, (k, nc)) % p
        else:
            a = rng.integers(0, p, (nr, nc))
        mats.append((p, a))
    t = time.perf_counter()
    bad = sum(rank_mod_p(a, p) != rank_oracle(a.tolist(), p) for p, a in mats)
    report("6", bad == 0, time.perf_counter() - t, 10, f"10000 matrices vs minor expansion, {bad} mismatches")


def test_criterion_07_one_sided():
    t = time.perf_counter()
    a = sum(ns(2, 2, D(3, 2, 1), 16, seed) is NsVerdict.NOT_DECIDED for seed in range(1000))
    b = sum(ns(3, 5, repeat(6, 5), 16, seed) is NsVerdict.NOT_DECIDED for seed in range(1000))
    report("7", a == 1000 and b == 1000, time.perf_counter() - t, 30,
           f"not decided in {a}/1000 and {b}/1000 seeds")


@pytest.mark.slow
def test_criterion_08a_ch_setpba():
    t = time.perf_counter()
    rep = ch(3, set_pba(3, 7, 7), 8, 0)
    table = {D(8, 6, 2), D(8, 8, 6, 2), D(8, 8, 8, 6, 2), D(8, 7, 5, 2), D(8, 8, 7, 3), D(8, 8, 7, 5)}
    ok = (rep.verdict is ChVerdict.OK and rep.phases["u"].reduced == 6
          and red_set(3, 8, set_pba(3, 7, 7)) == table)
    report("8a", ok, time.perf_counter() - t, 60, f"ch(3, setpba(3,7,7), 8, 0) = {rep.verdict.value}")


@pytest.mark.slow
def test_criterion_08b_ch_bign():
    bign = set_bign(5, 11)
    t = time.perf_counter()
    rep, bad = with_rerun(
        lambda seed: ch(5, bign, 3, 0, seed=seed),
        lambda r: r.verdict is not ChVerdict.OK or r.phases["u"].verified != 6234,
    )
    ok = not bad and rep.phases["u"].reduced == 6234
    report("8b", ok, time.perf_counter() - t, 15 * 60,
           f"ch(5, setbign(5,11), 3, 0) = {rep.verdict.value}, u-phase {rep.phases['u'].reduced} reduced")


@pytest.mark.slow
def test_criterion_08c_ch_bignb_legacy_counts():
    # the legacy campaign verified reduced diagrams at r only
    ds = set_bignb(6, 51, 8)
    want = dict(verified=2832, not_reducible=855, to_unverified=250, survivors=46, special=24)

    def counts(rep):
        u, v = rep.phases["u"], rep.phases["v"]
        return dict(verified=u.verified, not_reducible=u.not_reducible, to_unverified=u.to_unverified,
                    survivors=v.survivors, special=v.reduced - v.verified)

    t = time.perf_counter()
    rep, bad = with_rerun(
        lambda seed: ch(6, ds, 14, 13, seed=seed, phase_check_next=False),
        lambda r: counts(r) != want,
    )
    u, v = rep.phases["u"], rep.phases["v"]
    deterministic = (u.reducible, u.reduced, v.inputs, v.reduced) == (4617, 2991, 1105, 562)
    report("8c", deterministic and not bad, time.perf_counter() - t, 30 * 60,
           f"ch(6, setbignb(6,51,8), 14, 13): {u.reducible}/{u.reduced}, {v.inputs}->{v.reduced}, "
           f"{counts(rep)}, verdict {rep.verdict.value}")


@pytest.mark.slow
def test_criterion_08d_ch_bignb_strict():
    # same campaign with the r and r+1 check in every phase
    t = time.perf_counter()
    rep = ch(6, set_bignb(6, 51, 8), 14, 13, seed=SEEDS[0])
    u, v = rep.phases["u"], rep.phases["v"]
    ok = rep.verdict is ChVerdict.OK and (u.reducible, u.reduced, u.not_reducible) == (4617, 2991, 855)
    report("8d", ok, time.perf_counter() - t, 30 * 60,
           f"strict phases: verified {u.verified}, survivors {u.survivors}->{v.reduced} reduced, "
           f"final {rep.final_kept}/{rep.final_checked}, verdict {rep.verdict.value}")


def test_criterion_09_finalnba_and_spec():
    t = time.perf_counter()
    fin = finalnba(3, 0, 5, 4)
    t_fin = time.perf_counter() - t
    t = time.perf_counter()
    res = spec_check(6, 8, 2, 8, 15)
    t_spec = time.perf_counter() - t
    ends = {step: (end, ed) for step, _, end, ed in res.endpoints}
    ok = (
        fin == {5}
        and res.verdict is SpecVerdict.MINUS_ONE_SPECIAL and res.t == 2
        and ends[0] == (PlanarSystem(8, (2,) * 15), -1)
        and ends[1][1] == -1
        and ends[2] == (PlanarSystem(0, ()), 0)
    )
    report("9", ok and t_fin <= 10, t_spec, 1,
           f"finalnba = {sorted(fin)} ({t_fin:.2f}s/10s), spec endpoints "
           + ", ".join(f"t={k}: {e} edim {d}" for k, (e, d) in sorted(ends.items())))


def test_criterion_10_cli_golden(tmp_path):
    script = "# setpb 3 9\ntails 3 8,9,10,x,x rt\nbasediag 1 1 7 0 bt\ngluediags inempty bt rt diag\n"
    t = time.perf_counter()
    outputs = []
    for run in ("a", "b"):
        wd = tmp_path / run
        wd.mkdir()
        (wd / "pb.bat").write_text(script, encoding="utf-8")
        rc = main(["--fixed-clock", "--workdir", str(wd), "run", str(wd / "pb.bat")])
        outputs.append((rc, {n: (wd / n).read_bytes() for n in ("diag", "log", "shortlog", "infolog")}))
    elapsed = time.perf_counter() - t
    (rc_a, a), (rc_b, b) = outputs
    log, short, info = (a[n].decode().splitlines() for n in ("log", "shortlog", "infolog"))

    def subseq(small, big):
        it = iter(big)
        return all(any(x == y for y in it) for x in small)

    diag = read_diagram_file(tmp_path / "a" / "diag")
    ok = (
        rc_a == rc_b == 0 and a == b
        and len(diag) == 28 and D(1, 2, 3, 4, 5, 6, 7, 6, 5) in diag
        and subseq(info, short) and subseq(short, log)
        and len(info) < len(short) < len(log)
        and not any("job finished" in line for line in short)
    )
    report("10", ok, elapsed, 5, "setpb(3,9) batch replay byte-stable, infolog < shortlog < log")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
