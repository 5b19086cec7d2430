"""polycomplex command line.  Exit status: 0 all checks pass, 1 a check failed,
2 the input was rejected."""
from __future__ import annotations

import argparse
import sys

from ..core import ContractError, Field
from . import harness


def _window(text):
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"window must look like LO:HI, got {text!r}") from exc
    if hi < lo:
        raise argparse.ArgumentTypeError("window is empty")
    return lo, hi


def _field(text):
    try:
        return Field.parse(text)
    except ContractError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polycomplex", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decompose", help="split a bicomplex into indecomposables")
    d.add_argument("file")
    d.add_argument("--out", help="write the change of basis here")

    e = sub.add_parser("espage", help="a page of the spectral sequence")
    e.add_argument("file")
    e.add_argument("--page", type=int, default=1)

    t = sub.add_parser("tot", help="total cohomology")
    t.add_argument("file")

    b = sub.add_parser("braid", help="apply a braid word")
    b.add_argument("file")
    b.add_argument("--word", required=True, help='signed letters, e.g. "0,1,-0"')
    b.add_argument("--side", choices=("complex", "tricomplex"), default="tricomplex")
    b.add_argument("--out")

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=("tl", "braid", "inverse", "bridge", "homtable"))
    v.add_argument("--trials", type=int)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--window", type=_window)
    v.add_argument("--max-dim", type=int, default=3)
    v.add_argument("--field", type=_field, default=Field(32003))

    r = sub.add_parser("random", help="write a seeded random input file")
    r.add_argument("kind", choices=("bicomplex", "tricomplex", "acomplex"))
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--max-dim", type=int, default=3)
    r.add_argument("--field", type=_field, default=Field(32003))
    r.add_argument("--window", type=_window, default=(-4, 4))
    r.add_argument("--out")
    return p


def run(args) -> harness.Report:
    c = args.command
    if c == "decompose":
        return harness.cmd_decompose(args.file, args.out)
    if c == "espage":
        return harness.cmd_espage(args.file, args.page)
    if c == "tot":
        return harness.cmd_tot(args.file)
    if c == "braid":
        return harness.cmd_braid(args.word, args.file, args.side, args.out)
    if c == "verify":
        return harness.cmd_verify(args.suite, args.trials, args.seed, args.window, args.max_dim, args.field)
    return harness.cmd_random(args.kind, args.seed, args.max_dim, args.field, args.out, args.window)


def _glue_windows(argv):
    # argparse reads "-4:4" as an option, so "--window -4:4" becomes "--window=-4:4"
    out, it = [], iter(argv)
    for a in it:
        if a == "--window":
            out.append(f"--window={next(it, '')}")
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _glue_windows(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return harness.INPUT_ERROR if exc.code else 0
    try:
        report = run(args)
    except (ContractError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return harness.INPUT_ERROR
    sys.stdout.write(report.to_json())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
