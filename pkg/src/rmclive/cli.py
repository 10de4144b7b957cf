"""Command-line front end.

Exit codes: 0 proved or conforms, 1 usage error, 2 violation or not
proved, 3 timeout or exhausted budget.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import certificate as certio
from . import oracle
from .bench import SUITES, bench, to_tsv
from .builtins import GAME_PROFILE
from .incr import DisjunctiveCertificate, IncrementalError, check_certificate, solve_incremental
from .model import ModelError, load_model, validate
from .mono import Certificate, EngineOptions, Exhausted, Timeout, solve_monolithic
from .verify import CONDITION, verify

log = logging.getLogger("rmclive")

OK, USAGE, VIOLATION, TIMEOUT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE)


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rmclive", description="Regular liveness proofs for parameterised games.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    pr = sub.add_parser("prove", help="search for a certificate")
    pr.add_argument("--model", required=True, help="builtin name or .game file")
    pr.add_argument("--mode", choices=("mono", "incr"), default="mono")
    pr.add_argument("--with-invariant", action="store_true")
    pr.add_argument("--with-symmetry", action="store_true")
    pr.add_argument("--game-profile", action="store_true",
                    help="drop the inductiveness condition (combinatorial games)")
    pr.add_argument("--timeout", type=float, default=600.0)
    pr.add_argument("--max-states", type=int, default=24)
    pr.add_argument("--cert-out")
    pr.add_argument("--dump-cnf", metavar="DIR")
    pr.add_argument("--lstar-precision", type=int, default=5)
    pr.add_argument("--seed", type=int, default=0)

    ck = sub.add_parser("check", help="check a certificate against a model")
    ck.add_argument("--model", required=True)
    ck.add_argument("--cert", required=True)

    orc = sub.add_parser("oracle", help="explicit-state agreement table")
    orc.add_argument("--model", required=True)
    orc.add_argument("--lengths", required=True, help="a..b")
    orc.add_argument("--cap", type=int, default=oracle.DEFAULT_CAP)

    bn = sub.add_parser("bench", help="run a benchmark suite")
    bn.add_argument("--suite", required=True)
    bn.add_argument("--timeout", type=float)
    bn.add_argument("--seed", type=int, default=0)
    bn.add_argument("--jobs", type=int, default=1)
    return p


def _load(name):
    try:
        return load_model(name)
    except OSError as e:
        raise _Usage(f"cannot read model {name}: {e.strerror}")
    except ModelError as e:
        raise _Usage(f"{name}:{e.line}:{e.col}: {e.message}")


class _Usage(Exception):
    pass


def cmd_prove(a) -> int:
    g = _load(a.model)
    game = a.game_profile or g.name in GAME_PROFILE
    if not game:
        rep = validate(g)
        if not rep.ok:
            for v in rep.violations:
                print(v.show(g))
            return VIOLATION
    opts = EngineOptions(game_profile=game, max_states=a.max_states, timeout=a.timeout,
                         dump_cnf=a.dump_cnf, seed=a.seed, with_invariant=a.with_invariant,
                         with_symmetry=a.with_symmetry, lstar_precision=a.lstar_precision)
    if a.mode == "mono":
        r = solve_monolithic(g, opts)
    else:
        if game:
            print("the incremental engine does not support the game profile")
            return USAGE
        try:
            r = solve_incremental(g, opts)
        except IncrementalError as e:
            print(f"not proved: {e}")
            return VIOLATION
    if isinstance(r, Timeout):
        print(f"timeout after {r.rounds} rounds ({r.elapsed:.1f}s)")
        return TIMEOUT
    if isinstance(r, Exhausted):
        print(f"exhausted: {r.reason} after {r.rounds} rounds")
        return TIMEOUT
    if isinstance(r, Certificate):
        text = certio.dump_mono(g.name, r.advice, game)
        print(f"proved: {r.rounds} rounds, shape {r.shape}, {r.elapsed:.2f}s")
    else:
        assert isinstance(r, DisjunctiveCertificate)
        text = certio.dump_incr(g.name, g, r)
        print(f"proved: {len(r.pieces)} pieces, {len(r.invariants)} invariants, "
              f"{r.rounds} rounds, {r.elapsed:.2f}s")
    if a.cert_out:
        with open(a.cert_out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return OK


def cmd_check(a) -> int:
    g = _load(a.model)
    try:
        with open(a.cert) as fh:
            text = fh.read()
    except OSError as e:
        raise _Usage(f"cannot read certificate {a.cert}: {e.strerror}")
    try:
        c = certio.parse(text, g)
    except certio.CertificateError as e:
        raise _Usage(f"bad certificate: {e}")
    if isinstance(c, certio.MonoCertificate):
        ce = verify(g, c.advice, game_profile=c.game_profile)
        if ce is None:
            print("conforms")
            return OK
        print(f"{CONDITION[ce.kind]} {ce.kind}")
        for w in ce.words:
            print(g.show(w))
        return VIOLATION
    _, cert = c
    bad = check_certificate(g, cert)
    if not bad:
        print("conforms")
        return OK
    for label, words in bad:
        print(label)
        for w in words:
            print(g.show(w))
    return VIOLATION


def _lengths(text):
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise _Usage(f"bad length range {text!r}, expected a..b")
    if lo < 0 or hi < lo:
        raise _Usage(f"bad length range {text!r}")
    return range(lo, hi + 1)


def cmd_oracle(a) -> int:
    g = _load(a.model)
    print("length\tconfigs\treachable\tall-reachable-winning\tmdp-agrees")
    for n in _lengths(a.lengths):
        try:
            ag = oracle.agreement(g, n, a.cap)
        except oracle.CapExceeded:
            print(f"{n}\t---\t---\t---\t---")
            continue
        print(f"{n}\t{ag.configs}\t{ag.reachable}\t{str(ag.all_reachable_winning).lower()}"
              f"\t{str(ag.mdp_agrees).lower()}")
    return OK


def cmd_bench(a) -> int:
    if a.suite not in SUITES:
        raise _Usage(f"unknown suite {a.suite!r}; choose from {', '.join(SUITES)}")
    sys.stdout.write(to_tsv(bench(a.suite, a.timeout, a.seed, a.jobs)))
    return OK


def main(argv=None) -> int:
    try:
        a = _parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else USAGE
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    handler = {"prove": cmd_prove, "check": cmd_check, "oracle": cmd_oracle,
               "bench": cmd_bench}[a.cmd]
    try:
        return handler(a)
    except _Usage as e:
        print(f"rmclive: error: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
