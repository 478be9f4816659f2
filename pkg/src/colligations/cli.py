"""``collig`` command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import io
from .charfn import charfn_eval, det_identity_residual
from .core import FLAVORS, Shape, amplify, random_colligation, validate
from .divisor import divisor_summary
from .errors import ColligationError, PoleError
from .invariants import conjugacy_oracle, fingerprint
from .scalars import EXACT, MODES
from .semigroup import circ
from .suites import SUITES, RunConfig, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _global_flags(parser, suppress):
    def default(v):
        return argparse.SUPPRESS if suppress else v

    g = parser.add_argument_group("global options")
    g.add_argument("--mode", choices=MODES, default=default(EXACT))
    g.add_argument("--seed", type=int, default=default(None), help="default: $COLLIG_SEED or 0")
    g.add_argument("--tol", type=float, default=default(1e-9))
    g.add_argument("--trials", type=int, default=default(20))
    g.add_argument("--max-word-len", type=int, default=default(None), help="default: N^2")
    g.add_argument("--det-cap", type=int, default=default(12))
    g.add_argument("--amplify", type=int, default=default(1), metavar="J")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="collig", description="Colligations and their characteristic functions.", allow_abbrev=False
    )
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text, allow_abbrev=False)
        _global_flags(p, suppress=True)
        return p

    p = add("random", "emit a random colligation document")
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--flavor", choices=FLAVORS, default="general")

    p = add("product", "g o h of two documents")
    p.add_argument("left")
    p.add_argument("right")

    p = add("charfn", "evaluate the characteristic function")
    p.add_argument("colligation")
    p.add_argument("S", help="matrix as inline JSON or a file name")
    p.add_argument("--check-det-identity", action="store_true")

    p = add("divisor", "divisor polynomial summary")
    p.add_argument("colligation")

    p = add("invariants", "invariant fingerprint")
    p.add_argument("colligation")

    p = add("conjtest", "conjugacy test with witness")
    p.add_argument("left")
    p.add_argument("right")

    p = add("verify", "run a property suite")
    p.add_argument("suite", help=f"one of {', '.join(SUITES + ('all',))}")
    return parser


def _read_text(arg):
    if arg == "-":
        return sys.stdin.read()
    try:
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {arg}: {exc.strerror}") from exc


def _load_json(text, what):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what} is not valid JSON: {exc}") from exc


def _load_colligation(arg):
    return io.colligation_from_json(_load_json(_read_text(arg), arg))


def _load_matrix(arg, mode):
    stripped = arg.lstrip()
    text = arg if stripped.startswith("[") else _read_text(arg)
    return io.matrix_from_json(_load_json(text, "S"), mode)


def _config(args):
    seed = args.seed
    if seed is None:
        env = os.environ.get("COLLIG_SEED")
        try:
            seed = int(env) if env else 0
        except ValueError as exc:
            raise InputError(f"COLLIG_SEED must be an integer, got {env!r}") from exc
    try:
        return RunConfig(args.mode, seed, args.tol, args.trials, args.max_word_len, args.det_cap)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _amplified(C, args):
    if args.amplify < 1:
        raise InputError("--amplify must be >= 1")
    return amplify(C, args.amplify)


def _emit(doc):
    sys.stdout.write(io.dumps(doc) + "\n")


def cmd_random(args, config):
    shape = Shape(args.alpha, args.m, args.N)
    C = random_colligation(shape, args.flavor, config.mode, config.seed)
    problems = validate(C)
    if problems:
        raise ColligationError("; ".join(problems))
    _emit(io.colligation_to_json(C))
    return EXIT_OK


def cmd_product(args, config):
    _emit(io.colligation_to_json(circ(_load_colligation(args.left), _load_colligation(args.right))))
    return EXIT_OK


def cmd_charfn(args, config):
    C = _amplified(_load_colligation(args.colligation), args)
    S = _load_matrix(args.S, C.mode)
    doc = {"value": io.matrix_to_json(charfn_eval(C, S))}
    status = EXIT_OK
    if args.check_det_identity:
        res = det_identity_residual(C, S, relative=True)
        doc["detIdentityResidual"] = io.scalar_to_json(res) if C.mode == EXACT else res
        if (res != 0) if C.mode == EXACT else res > config.tol:
            status = EXIT_FAIL
    _emit(doc)
    return status


def cmd_divisor(args, config):
    C = _amplified(_load_colligation(args.colligation), args)
    _emit(divisor_summary(C, cap=config.det_cap).to_json())
    return EXIT_OK


def cmd_invariants(args, config):
    C = _amplified(_load_colligation(args.colligation), args)
    _emit(fingerprint(C, config.max_word_len).to_json())
    return EXIT_OK


def cmd_conjtest(args, config):
    v = conjugacy_oracle(_load_colligation(args.left), _load_colligation(args.right), config.trials, config.seed, config.tol)
    _emit(v.to_json())
    return EXIT_OK


def cmd_verify(args, config):
    if args.suite not in SUITES + ("all",):
        raise InputError(f"unknown suite {args.suite!r}")
    rep = run_suite(args.suite, config)
    _emit(rep.to_json())
    return EXIT_OK if rep.ok else EXIT_FAIL


COMMANDS = {
    "random": cmd_random,
    "product": cmd_product,
    "charfn": cmd_charfn,
    "divisor": cmd_divisor,
    "invariants": cmd_invariants,
    "conjtest": cmd_conjtest,
    "verify": cmd_verify,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        config = _config(args)
        return COMMANDS[args.command](args, config)
    except PoleError as exc:
        print(f"collig: {exc} (residual {exc.residual})", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, ColligationError, ValueError, KeyError, TypeError) as exc:
        print(f"collig: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
