"""Batch-script interpreter and the four log channels.

A script holds one command per line, whitespace-separated positional
tokens.  Lines starting with ``#`` before the first command form the
preamble; other ``#`` lines and blank lines are ignored.  Diagram-set files
are resolved relative to the working directory; a missing ``inempty`` reads
as the set holding only the empty diagram.
"""

from __future__ import annotations

import datetime
import logging
import shlex
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from . import setgen
from .cremona import spec_check
from .diagrams import (
    Diagram,
    DiagramError,
    DiagramSet,
    SymbolicDiagram,
    format_diagram,
    parse_diagram,
    read_diagram_file,
    rev_set,
    write_diagram_file,
)
from .reduction import red_set, redout_set, reduce, sequence_reduce, top_reduce
from .speciality import (
    DEFAULT_PRIME,
    NsVerdict,
    check_details,
    ch,
    finalnba,
    ns,
)
from .tails import EnumStats, TailsError, atails, ltails, tails_enum

logger = logging.getLogger(__name__)

PREAMBLE_RULE = "X" * 58
COMMAND_RULE = "*" * 37
CHANNELS = ("log", "shortlog", "infolog", "finitlog")


class BatchError(Exception):
    """Parse, arity or execution failure of one batch line."""


@dataclass
class Config:
    prime: int = DEFAULT_PRIME
    seed: int = 0
    tries: int = 6
    log_dir: Optional[Path] = None
    fixed_clock: Optional[str] = None
    workdir: Path = field(default_factory=Path.cwd)
    workers: int = 1
    phase_check_next: bool = True


class RunLog:
    """Appends to log/shortlog/infolog/finitlog under ``directory``.

    log gets everything, shortlog preambles and command headers, infolog
    preambles only, finitlog the blocks of ``spec`` runs.
    """

    def __init__(self, directory: Optional[Path], fixed_clock: Optional[str] = None):
        self.directory = Path(directory) if directory is not None else None
        self.fixed_clock = fixed_clock
        self.buffers = {name: [] for name in CHANNELS}
        if self.directory is not None:
            self.directory.mkdir(parents=True, exist_ok=True)
            for name in CHANNELS:
                (self.directory / name).touch()

    def _emit(self, channels, lines) -> None:
        for name in channels:
            self.buffers[name].extend(lines)
            if self.directory is not None:
                with open(self.directory / name, "a", encoding="utf-8", newline="\n") as fh:
                    for line in lines:
                        fh.write(line + "\n")

    def stamp(self) -> str:
        if self.fixed_clock is not None:
            return self.fixed_clock
        return datetime.datetime.now().strftime("%d:%H:%M:%S")

    def preamble(self, lines) -> None:
        block = ["", PREAMBLE_RULE, ""] + list(lines) + ["", PREAMBLE_RULE, ""]
        self._emit(("log", "shortlog", "infolog"), block)

    def command(self, header: str, details, finit: bool = False) -> None:
        tail = [f" job finished: {self.stamp()}", COMMAND_RULE, ""]
        self._emit(("log", "shortlog"), [header])
        self._emit(("log",), list(details) + tail)
        if finit:
            self._emit(("finitlog",), [header] + list(details) + tail)

    def write_log(self, channel: str, entry) -> None:
        if channel not in CHANNELS:
            raise ValueError(f"unknown log channel {channel!r}")
        self._emit((channel,), [entry] if isinstance(entry, str) else list(entry))


def _ints(args, n=None):
    try:
        vals = [int(a) for a in (args if n is None else args[:n])]
    except ValueError as exc:
        raise BatchError(f"expected integer arguments, got {args}") from exc
    return vals


def _diag_lines(ds) -> list:
    return [format_diagram(d) for d in ds]


class Interpreter:
    """Executes batch commands against files in ``config.workdir``."""

    def __init__(self, config: Config, log: Optional[RunLog] = None):
        self.config = config
        self.log = log if log is not None else RunLog(config.log_dir, config.fixed_clock)
        self.commands: dict[str, tuple[int, int, Callable]] = {
            "reduce": (3, 3, self.do_reduce),
            "red": (4, 4, self.do_red),
            "redout": (5, 5, self.do_redout),
            "topreduce": (3, 3, self.do_topreduce),
            "htails": (4, 4, self.do_htails),
            "ltails": (4, 4, self.do_ltails),
            "atails": (5, 5, self.do_atails),
            "tails": (3, 3, self.do_tails),
            "basediag": (4, 5, self.do_basediag),
            "gluediags": (4, 4, self.do_gluediags),
            "rev": (2, 2, self.do_rev),
            "ns": (3, 4, self.do_ns),
            "check": (2, 4, self.do_check),
            "ch": (4, 4, self.do_ch),
            "finalnba": (4, 4, self.do_finalnba),
            "spec": (5, 5, self.do_spec),
            "setbign": (2, 3, self.do_generator),
            "setbign23": (2, 3, self.do_generator),
            "setbignb": (3, 4, self.do_generator),
            "setnb": (3, 4, self.do_generator),
            "setnba": (4, 5, self.do_generator),
            "setpb": (2, 3, self.do_generator),
            "setpba": (3, 4, self.do_generator),
        }

    # -- files ---------------------------------------------------------

    def path(self, name: str) -> Path:
        return Path(self.config.workdir) / name

    def load(self, name: str) -> DiagramSet:
        p = self.path(name)
        if not p.exists():
            if name == "inempty":
                return DiagramSet([Diagram()])
            raise BatchError(f"file not found: {name}")
        try:
            return read_diagram_file(p)
        except DiagramError as exc:
            raise BatchError(f"{name}: {exc}") from exc

    def store(self, name: str, ds) -> None:
        write_diagram_file(self.path(name), ds)

    # -- driver --------------------------------------------------------

    def execute(self, tokens: list) -> None:
        if not tokens:
            return
        verb, args = tokens[0], tokens[1:]
        if verb not in self.commands:
            raise BatchError(f"unknown command {verb!r}")
        lo, hi, fn = self.commands[verb]
        if not lo <= len(args) <= hi:
            want = str(lo) if lo == hi else f"{lo}-{hi}"
            raise BatchError(f"{verb} takes {want} arguments, got {len(args)}")
        try:
            fn(verb, args)
        except TailsError as exc:
            raise BatchError(f"{verb}: reduction stops too early at {format_diagram(exc.diagram)}") from exc
        except (DiagramError, ValueError, OSError) as exc:
            raise BatchError(f"{verb}: {exc}") from exc

    def run_lines(self, lines, default_preamble: Optional[str] = None) -> int:
        """Run script lines; returns 0 on success, 1 at the first failing line.

        Without leading ``#`` lines the preamble is ``default_preamble``.
        """
        preamble = []
        started = False
        for lineno, raw in enumerate(lines, 1):
            line = raw.strip()
            if line.startswith("#"):
                if not started:
                    preamble.append(line[1:].strip())
                continue
            if not line:
                continue
            if not started:
                started = True
                self._open(preamble, default_preamble)
            try:
                self.execute(shlex.split(line))
            except BatchError as exc:
                self.log.command(f"error at line {lineno}: {line}", [str(exc)])
                logger.error("line %d: %s: %s", lineno, line, exc)
                return 1
        if not started:
            self._open(preamble, default_preamble)
        return 0

    def _open(self, preamble, default_preamble) -> None:
        if not preamble and default_preamble:
            preamble = [default_preamble]
        if preamble:
            self.log.preamble(preamble)

    # -- first-kind commands -------------------------------------------

    def do_reduce(self, verb, args):
        m = _ints(args, 1)[0]
        ds = self.load(args[1])
        out = DiagramSet(g for g in (reduce(m, d) for d in ds) if g is not None)
        self.store(args[2], out)
        self.log.command(f"reduce {m}", [f"{len(ds)} diagrams loaded.", f"{len(out)} reductions found."])

    def do_red(self, verb, args):
        m, k = _ints(args, 2)
        ds = self.load(args[2])
        out = red_set(m, k, ds)
        self.store(args[3], out)
        reducible = sum(1 for d in ds if sequence_reduce(m, k, d) is not None)
        self.log.command(
            f"red (sequence reductions) {m} {k}",
            [f"{len(ds)} diagrams loaded.", f"{reducible} reducible, {len(out)} diagrams produced."],
        )

    def do_redout(self, verb, args):
        m, k = _ints(args, 2)
        ds = self.load(args[2])
        targets = self.load(args[3])
        out = redout_set(m, k, ds, targets)
        self.store(args[4], out)
        not_red = sum(1 for d in out if sequence_reduce(m, k, d) is None)
        self.log.command(
            f"redout {m} {k}",
            [
                f"{len(ds)} diagrams loaded, {len(targets)} targets loaded.",
                f"{not_red} not reducible, {len(out) - not_red} reduce outside targets.",
                f"{len(out)} diagrams left.",
            ],
        )

    def do_topreduce(self, verb, args):
        m = _ints(args, 1)[0]
        ds = self.load(args[1])
        out = DiagramSet(top_reduce(m, d) for d in ds)
        self.store(args[2], out)
        self.log.command(f"topreduce {m}", ["diagrams found:"] + _diag_lines(out))

    def _tails_block(self, header, loaded, out, stats):
        details = ["tails loaded:"] + _diag_lines(loaded) + [f"{len(loaded)} tails loaded."]
        details += ["tails found:"] + _diag_lines(out)
        details.append(f"{stats.entries} entries used, {len(out)} tails found.")
        self.log.command(header, details)

    def do_htails(self, verb, args):
        m, h = _ints(args, 2)
        ds = self.load(args[2])
        stats = EnumStats()
        out = ltails(m, h, ds, stats)
        self.store(args[3], out)
        self._tails_block(f"htails (h-D-admissible tails) {m} {h}", ds, out, stats)

    def do_ltails(self, verb, args):
        m, h = _ints(args, 2)
        ds = self.load(args[2])
        stats = EnumStats()
        out = ltails(m, h, ds, stats)
        self.store(args[3], out)
        self._tails_block(f"ltails (all-h-D-admissible tails) {m} {h}", ds, out, stats)

    def do_atails(self, verb, args):
        m, h, n = _ints(args, 3)
        ds = self.load(args[3])
        stats = EnumStats()
        out = atails(m, h, n, ds, stats)
        self.store(args[4], out)
        self._tails_block(f"atails (top-reduced tails) {m} {h} {n}", ds, out, stats)

    def do_tails(self, verb, args):
        m = _ints(args, 1)[0]
        w = parse_diagram(args[1])
        prefix = w.prefix if isinstance(w, SymbolicDiagram) else tuple(w)
        if len(prefix) != m or w.xcount not in (0, m - 1):
            raise BatchError(f"tails needs {m} layers followed by {m - 1} x's, got {args[1]}")
        stats = EnumStats()
        out = tails_enum(m, Diagram(prefix), stats)
        self.store(args[2], out)
        details = ["diagram:", format_diagram(SymbolicDiagram(prefix, m - 1)), "tails found:"]
        details += _diag_lines(out)
        details.append(f"{stats.entries} entries used, {len(out)} tails found.")
        self.log.command(f"tails (admissible tails) {m}", details)

    def do_basediag(self, verb, args):
        start, step, count = _ints(args, 3)
        if len(args) == 5:
            _ints(args[3:4])  # undocumented legacy argument, ignored
        d = setgen.base_diagram(start, step, count)
        self.store(args[-1], [d])
        self.log.command(f"basediag {' '.join(args[:-1])}", ["base diagram:", format_diagram(d)])

    def do_gluediags(self, verb, args):
        left, mid, right = (self.load(a) for a in args[:3])
        out = setgen.glue(left, mid, right)
        self.store(args[3], out)
        pairs = len(left) * len(mid) * len(right)
        details = [f"{pairs} diagrams produced."]
        if pairs != len(out):
            details.append(f"{len(out)} distinct diagrams stored.")
        self.log.command("gluediags (glue diagrams)", details)

    def do_rev(self, verb, args):
        ds = self.load(args[0])
        out = rev_set(ds)
        self.store(args[1], out)
        self.log.command("rev (reverse diagrams)", [f"{len(out)} diagrams reversed."])

    def do_ns(self, verb, args):
        m, r = _ints(args, 2)
        d = parse_diagram(args[2])
        if isinstance(d, SymbolicDiagram):
            raise BatchError("ns needs a concrete diagram")
        tries = int(args[3]) if len(args) == 4 else self.config.tries
        verdict = ns(m, r, d, tries, self.config.seed, self.config.prime)
        self.log.command(f"ns {m} {r}", [f"diag({format_diagram(d)})", f"result: {verdict.value}"])

    def do_check(self, verb, args):
        m = _ints(args, 1)[0]
        ds = self.load(args[1])
        tries = int(args[2]) if len(args) >= 3 else self.config.tries
        results = check_details(m, ds, tries, self.config.seed, self.config.prime, self.config.workers)
        details = [f"multiplicity: {m}"]
        for res in results:
            marks = [_det(res.at_r)] + ([_det(res.at_r1)] if res.at_r1 is not None else [])
            details.append(f"diag({format_diagram(res.diagram)})  {' '.join(marks)}")
        good = [res.diagram for res in results if res.passed]
        details.append("result: positive." if len(good) == len(results) else "result: negative.")
        details.append(f"non-special: {len(good)}, special: {len(results) - len(good)}")
        if len(args) == 4:
            self.store(args[3], good)
        self.log.command("check", details)

    def do_ch(self, verb, args):
        m = _ints(args, 1)[0]
        ds = self.load(args[1])
        u, v = _ints(args[2:])
        report = ch(m, ds, u, v, self.config.seed, self.config.prime, self.config.workers,
                    phase_check_next=self.config.phase_check_next)
        details = [f"multiplicity: {m}", f"{len(ds)} diagrams loaded."]
        for name, ph in report.phases.items():
            details.append(
                f"{name}-phase: {ph.reducible} of {ph.inputs} reducible {ph.k} times, "
                f"{ph.reduced} reductions, {ph.verified} non-special; "
                f"{ph.not_reducible} not reducible + {ph.to_unverified} reduce to unverified "
                f"= {ph.survivors} left."
            )
        details.append(f"final check: {report.final_kept} of {report.final_checked} non-special.")
        details.append(f"result: {report.verdict.value}")
        self.log.command(f"ch {m} {u} {v}", details)

    def do_finalnba(self, verb, args):
        m, n, a, b = _ints(args)
        found = finalnba(m, n, a, b, self.config.seed, self.config.prime)
        listing = ", ".join(str(r) for r in sorted(found))
        self.log.command(f"finalnba {m} {n} {a} {b}", [f"possibly special for r in {{{listing}}}"])

    def do_spec(self, verb, args):
        m, n, a, b, r = _ints(args)
        res = spec_check(m, n, a, b, r)
        details = [f"edim L_{n}({a},{b})({m}^{r}) = {res.expected}"]
        for t, start, end, ed in res.endpoints:
            details.append(f"t={t}: {start} -> {end}, edim {ed}")
        if res.detail:
            details.append(res.detail)
        details.append(f"result: {res.verdict.value}")
        self.log.command(f"spec {m} {n} {a} {b} {r}", details, finit=True)

    def do_generator(self, verb, args):
        fn = setgen.GENERATORS[verb]
        nparams = self.commands[verb][0]
        params = _ints(args, nparams)
        out_name = args[nparams] if len(args) > nparams else "diag"
        gen = fn(*params)
        self.store(out_name, gen.diagrams)
        details = [f"{gen.pairs} diagrams produced."]
        if gen.pairs != len(gen.diagrams):
            details.append(f"{len(gen.diagrams)} distinct diagrams stored.")
        self.log.command(f"{verb} {' '.join(map(str, params))}", details)


def _det(v: NsVerdict) -> str:
    return "det <> 0" if v is NsVerdict.NON_SPECIAL else "det = 0"


def run_batch(script, config: Config) -> int:
    """Run a batch script file; returns the process exit status."""
    with open(script, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    return Interpreter(config).run_lines(lines, default_preamble=f"batch {Path(script).name}")


# -- batch-script emission for the set generators -----------------------


def _emit_diagram(d: Diagram, name: str, lines: list, scratch: str) -> None:
    """Lines that write the single diagram ``d`` into file ``name``."""
    runs = []
    for a in d:
        if runs and runs[-1][0] == a:
            runs[-1][1] += 1
        else:
            runs.append([a, 1])
    # arithmetic progressions with step > 0 fit one basediag
    if len(d) > 1 and all(y - x == d[1] - d[0] for x, y in zip(d, d[1:])) and d[1] > d[0]:
        lines.append(f"basediag {d[0]} {d[1] - d[0]} {len(d)} 0 {name}")
        return
    if len(runs) <= 1:
        value, count = runs[0] if runs else (0, 0)
        lines.append(f"basediag {value} 0 {count} 0 {name}")
        return
    for i, (value, count) in enumerate(runs):
        target = name if i == 0 else f"{scratch}{i}"
        lines.append(f"basediag {value} 0 {count} 0 {target}")
        if i:
            lines.append(f"gluediags {name} {target} inempty {name}")


def emit_batch(verb: str, params) -> list:
    """Batch lines whose execution writes the generator's set to ``diag``."""
    params = [int(p) for p in params]
    lines = [f"# {verb} {' '.join(map(str, params))}"]
    if verb == "setpb":
        m, B = params
        tail = ",".join(map(str, range(B - m + 2, B + 2))) + ",x" * (m - 1)
        lines.append(f"tails {m} {tail} rt")
        lines.append(f"basediag 1 1 {B - m + 1} 0 bt")
        lines.append("gluediags inempty bt rt diag")
    elif verb == "setpba":
        m, b, A = params
        lines.append(f"htails {m} {b + 1} inempty rt")
        lines.append(f"basediag {b + 1} 0 {A + 1} 0 bt")
        lines.append("gluediags inempty bt rt diag")
    elif verb == "setnba":
        m, n, b, A = params
        lines.append(f"htails {m} {b + 1} inempty rt")
        prefix = setgen.staircase(m + 1, b, n) + setgen.repeat(b + 1, A + 1)
        _emit_diagram(prefix, "bt", lines, "bt_")
        lines.append("gluediags inempty bt rt diag")
    elif verb == "setnb":
        m, n, B = params
        _, h, k = setgen.nb_blocks(m, n, B)
        lines.append(f"tails {m} {format_diagram(SymbolicDiagram(tuple(h), m - 1))} rt")
        _emit_diagram(k, "bt", lines, "bt_")
        lines.append("gluediags inempty bt rt diag")
    elif verb in ("setbign", "setbign23", "setbignb"):
        if verb == "setbign":
            m, N = params
            steps, last, mid_value = range(m + 2, 2 * m - 2), 2 * m - 2, 2 * m - 2
        elif verb == "setbign23":
            m, N = params
            steps, last, mid_value = range(0), m + 2, m + 2
        else:
            m, N, b = params
            steps, last, mid_value = range(m + 2, b), b, b
        lines.append(f"htails {m} {m + 1} inempty lt")
        for j in steps:
            lines.append(f"atails {m} {j} {N} lt lt")
            lines.append(f"ltails {m} {j} lt lt")
        lines.append(f"ltails {m} {last} lt lt")
        if verb == "setbignb":
            lines.append(f"htails {m} {b + 1} inempty rt")
        else:
            top = 2 * m - 1 if verb == "setbign" else m + 3
            lines.append(f"tails {m} {','.join([str(top)] * m)}{',x' * (m - 1)} rt")
        lines.append(f"basediag {mid_value} 0 {N} 0 bt")
        lines.append("rev lt lt")
        lines.append("gluediags lt bt rt diag")
    else:
        raise ValueError(f"no batch form for {verb!r}")
    return lines
