"""Command-line entry point.

    hirzebruch [options] run SCRIPT
    hirzebruch [options] VERB ARGS...

Every batch verb is also a direct subcommand, e.g.
``hirzebruch tails 3 8,9,10,x,x rt`` or ``hirzebruch --emit-batch pb.bat setpb 3 9``.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .batch import BatchError, Config, Interpreter, emit_batch, run_batch
from .setgen import GENERATORS
from .speciality import DEFAULT_PRIME


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hirzebruch", description=__doc__.split("\n\n")[0])
    p.add_argument("--prime", type=int, default=DEFAULT_PRIME, help="field characteristic for rank tests")
    p.add_argument("--seed", type=int, default=0, help="master seed for random points")
    p.add_argument("--tries", type=int, default=6, help="default tries for check/ns")
    p.add_argument("--log-dir", type=Path, default=None, help="directory for log files (default: workdir)")
    p.add_argument("--workdir", type=Path, default=Path("."), help="directory holding diagram-set files")
    p.add_argument("--fixed-clock", action="store_true", help="freeze 'job finished' timestamps")
    p.add_argument("--clock", default="00:00:00:00", metavar="DD:HH:MM:SS",
                   help="timestamp used with --fixed-clock")
    p.add_argument("--emit-batch", type=Path, default=None, metavar="PATH",
                   help="with a set generator: also write an equivalent batch script")
    p.add_argument("--workers", type=int, default=1, help="processes for rank checks")
    p.add_argument("--phase-r-only", action="store_true",
                   help="ch: verify reduced diagrams at r only (replays the legacy campaign counts)")
    p.add_argument("command", help="'run' or a batch verb")
    p.add_argument("args", nargs="*")
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    ns = build_parser().parse_intermixed_args(argv)
    config = Config(
        prime=ns.prime,
        seed=ns.seed,
        tries=ns.tries,
        log_dir=ns.log_dir if ns.log_dir is not None else ns.workdir,
        fixed_clock=ns.clock if ns.fixed_clock else None,
        workdir=ns.workdir,
        workers=ns.workers,
        phase_check_next=not ns.phase_r_only,
    )
    if ns.command == "run":
        if len(ns.args) != 1:
            print("run takes exactly one script path", file=sys.stderr)
            return 2
        try:
            return run_batch(ns.args[0], config)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    if ns.emit_batch is not None:
        if ns.command not in GENERATORS:
            print("--emit-batch applies to set generators only", file=sys.stderr)
            return 2
        lines = emit_batch(ns.command, ns.args[: Interpreter(config).commands[ns.command][0]])
        ns.emit_batch.write_text("\n".join(lines) + "\n", encoding="utf-8")
    interp = Interpreter(config)
    try:
        interp.execute([ns.command] + list(ns.args))
    except BatchError as exc:
        interp.log.command(f"error: {' '.join([ns.command] + list(ns.args))}", [str(exc)])
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
