"""Command line entry point: ``cisys {compute,complete,verify,trace} FILE``."""

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor

from .engine import _format_spec, cominvsys
from .involution import Stats, prop1_completion
from .problem import (
    ProblemError,
    parse_division,
    parse_problem,
    report_dict,
    report_json,
    report_text,
)
from .trace import Tracer
from .verify import verify_cis

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _on_off(text):
    if text not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected on or off")
    return text == "on"


def build_parser():
    p = _Parser(prog="cisys", description="Comprehensive involutive systems of parametric ideals.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _Parser(add_help=False)
    common.add_argument("problem", help="problem file ('-' for stdin)")
    common.add_argument("--division", help="janet or pair:<perm>:<lex|degrevlex>:<adm|inv>")
    common.add_argument("--criteria", type=_on_off, default=True, metavar="on|off")
    common.add_argument("--output", choices=("json", "text"), default="json")
    common.add_argument("--parallel", action="store_true", help="use worker processes")
    common.add_argument("--workers", type=int, default=None, help="worker count for --parallel")
    sub.add_parser("compute", parents=[common], help="comprehensive involutive system")
    sub.add_parser("complete", parents=[common], help="box completion of a minimal basis")
    v = sub.add_parser("verify", parents=[common], help="compute, then check by sampling")
    v.add_argument("--samples", type=int, default=25)
    v.add_argument("--seed", type=int, default=0)
    sub.add_parser("trace", parents=[common], help="compute with a call trace")
    return p


def _load(args):
    text = sys.stdin.read() if args.problem == "-" else open(args.problem, encoding="utf-8").read()
    prob = parse_problem(text)
    if args.division:
        prob.division = parse_division(args.division, len(prob.vars))
    return prob


def _parallel(args):
    if not args.parallel:
        return False
    return args.workers or True


def _emit(report, args):
    if args.output == "json":
        sys.stdout.write(report_json(report))
    else:
        sys.stdout.write(report_text(report))


def cmd_compute(prob, args):
    stats = Stats()
    cells = cominvsys(prob.generators, prob.division, args.criteria, stats=stats, parallel=_parallel(args))
    report = report_dict(prob, cells, stats)
    report["meta"]["criteria"] = args.criteria
    _emit(report, args)
    return EXIT_OK


def cmd_complete(prob, args):
    out = prop1_completion(prob.generators, prob.division)
    basis = [g.to_str() for g in out]
    if args.output == "json":
        report = report_dict(prob, [])
        del report["cells"]
        report["basis"] = basis
        sys.stdout.write(report_json(report))
    else:
        sys.stdout.write("\n".join(basis) + "\n")
    return EXIT_OK


def cmd_verify(prob, args):
    stats = Stats()
    cells = cominvsys(prob.generators, prob.division, args.criteria, stats=stats, parallel=_parallel(args))
    if args.parallel:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            res = verify_cis(prob.generators, cells, prob.division, args.samples, args.seed, pool=pool)
    else:
        res = verify_cis(prob.generators, cells, prob.division, args.samples, args.seed)
    report = report_dict(prob, cells, stats, {"verification": res.as_dict()})
    report["meta"]["samples"] = args.samples
    report["meta"]["seed"] = args.seed
    if args.output == "json":
        sys.stdout.write(report_json(report))
    else:
        sys.stdout.write(report_text(report))
        d = res.as_dict()
        status = "ok" if res.ok else "FAILED"
        sys.stdout.write(f"verification {status}: {d['checked_points']} cell points, "
                         f"{d['partition_points']} partition points\n")
        for msg in d["failures"]:
            sys.stdout.write(f"  {msg}\n")
    return EXIT_OK if res.ok else EXIT_VERIFY


def cmd_trace(prob, args):
    tracer = Tracer(_format_spec)
    cells = cominvsys(prob.generators, prob.division, args.criteria, tracer=tracer)
    if args.output == "json":
        events = [{"kind": e.kind, "name": e.name, "depth": e.depth, "text": e.text, "data": e.data}
                  for e in tracer.events]
        report = report_dict(prob, cells, extra={"trace": events})
        sys.stdout.write(report_json(report))
    else:
        sys.stdout.write(tracer.render())
    return EXIT_OK


COMMANDS = {"compute": cmd_compute, "complete": cmd_complete, "verify": cmd_verify, "trace": cmd_trace}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        prob = _load(args)
        if not prob.generators and args.command == "complete":
            raise ProblemError("no generators")
        return COMMANDS[args.command](prob, args)
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"cisys: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
