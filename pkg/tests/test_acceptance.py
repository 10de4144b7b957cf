"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the verdict lines.
"""

import itertools
import json
import os
import random
import subprocess
import sys
import time

import pytest

from rmclive import automata as fa
from rmclive import oracle
from rmclive.builtins import GAME_PROFILE, NAMES, builtin
from rmclive.certificate import dump_incr, dump_mono, parse
from rmclive.incr import check_certificate
from rmclive.learn import learn_invariant
from rmclive.model import SymmetryDecl
from rmclive.mono import Certificate, EngineOptions, solve_monolithic
from rmclive.regex import compile_regex
from rmclive.symmetry import check_automorphism, close_piece
from rmclive.verify import AdviceBits, inductive_witness, replay, verify

import brute
from proofs import incr_proof, mono_proof

MAX_LEN = 7
CAP = oracle.DEFAULT_CAP


def verdict(n, ok, detail):
    print(f"\nCRITERION {n}: {'PASS' if ok else 'FAIL'} - {detail}")
    return ok


# ---------------------------------------------------------------------------
# 1. attractor membership of reachable scheduler configurations vs almost-sure


def test_criterion_1_agreement():
    start = time.monotonic()
    rows, bad = [], []
    for name in NAMES:
        for n in range(1, MAX_LEN + 1):
            try:
                ag = oracle.agreement(builtin(name), n, CAP)
            except oracle.CapExceeded:
                rows.append(f"{name}:{n}:cap")
                break
            assert ag.converged and ag.conflicts == 0
            rows.append(f"{name}:{n}:{ag.literal_disagreements}")
            if ag.literal_disagreements:
                bad.append((name, n, ag.literal_disagreements, ag.ahead_disagreements))
    elapsed = time.monotonic() - start
    detail = (f"{len(bad)} (model, n) cells disagree: {bad}; "
              f"winning-everywhere-ahead form disagrees on "
              f"{sum(b[3] for b in bad)} configs; {elapsed:.0f}s")
    ok = verdict(1, not bad and elapsed < 120, detail)
    # In the combinatorial games player 2 is an adversary, so attractor
    # membership and almost-sure winning against a random opponent differ.
    assert ok, detail


# ---------------------------------------------------------------------------
# 2. Israeli-Jalfon monolithic proof


def test_criterion_2_israeli_jalfon_mono():
    g = builtin("israeli-jalfon")
    start = time.monotonic()
    res = solve_monolithic(g, EngineOptions(timeout=300))
    elapsed = time.monotonic() - start
    proved = isinstance(res, Certificate)
    reverified = proved and verify(g, parse(dump_mono(g.name, res.advice)).advice) is None
    # every reachable configuration of small rings is in the attractor
    winning = True
    for n in range(1, MAX_LEN + 1):
        e = oracle.expand(g, n)
        reach = oracle.reachable_mask(e)
        winning &= bool(oracle.attractor(e)[reach].all())
    ok = proved and reverified and winning and elapsed < 300
    verdict(2, ok, f"proved={proved} shape={getattr(res, 'shape', None)} "
                   f"rounds={res.rounds} reverified={reverified} "
                   f"reachable-winning(n<=7)={winning} {elapsed:.1f}s")
    assert ok


# ---------------------------------------------------------------------------
# 3. flip golden run


def test_criterion_3_flip_golden_run():
    g = builtin("flip")
    start = time.monotonic()
    res = solve_monolithic(g, EngineOptions(timeout=60))
    elapsed = time.monotonic() - start
    assert isinstance(res, Certificate)
    more_ones = compile_regex("(0/0|1/1)* 1/0 (0/0|1/0|1/1)*", g.alphabet, pairs=True)
    A_ok = brute.language(res.advice.A, 5) == brute.language(g.states, 5)
    P_ok = brute.language(res.advice.prec, 5) == brute.language(more_ones, 5)
    # the smaller certificate is genuine: independent word-level check
    sound = brute.advice_violation(g, res.advice.A, res.advice.prec, 5) is None
    canon_sound = brute.advice_violation(g, g.states, more_ones, 5) is None
    ok = res.shape == (2, 2) and res.rounds <= 200 and elapsed < 10 and A_ok and P_ok
    detail = (f"shape={res.shape} (expected (2, 2)), rounds={res.rounds}, {elapsed:.2f}s, "
              f"A matches canonical={A_ok}, order matches canonical={P_ok}; "
              f"found certificate passes word-level check={sound}, "
              f"canonical pair passes={canon_sound}")
    verdict(3, ok, detail)
    # A single-state universal A with a two-state order already conforms,
    # so the schedule stops at (1, 2) before reaching (2, 2).
    assert ok, detail


# ---------------------------------------------------------------------------
# 4. combinatorial games


def _take_away_p_positions(limit):
    lose = {}
    for k in range(limit + 1):
        lose[k] = not any(lose[k - m] for m in (1, 2, 3) if m <= k)
    return lose


def _nim_mover_loses(piles, memo={}):
    piles = tuple(sorted(piles))
    if piles not in memo:
        moves = [piles[:i] + (v,) + piles[i + 1:] for i, p in enumerate(piles)
                 for v in range(p)]
        memo[piles] = not any(_nim_mover_loses(m) for m in moves)
    return memo[piles]


def _nim_word(g, piles, width):
    cols = ["".join(str((p >> b) & 1) for p in piles) for b in range(width - 1, -1, -1)]
    return g.alphabet.word(["p"] + cols)


def test_criterion_4_games():
    details, ok = [], True
    t = builtin("take-away")
    start = time.monotonic()
    res = solve_monolithic(t, EngineOptions(game_profile=True, timeout=300))
    t_time = time.monotonic() - start
    ok &= isinstance(res, Certificate) and t_time < 300
    lose = _take_away_p_positions(16)
    assert all(lose[k] == (k % 4 == 0) for k in lose)
    wrong = []
    for k in range(17):
        for pad in range(4):
            w = t.word("p" + "c" * k + "e" * pad)
            if res.advice.A.accepts(w) != lose[k]:
                wrong.append((k, pad))
    # the attractor agrees on every pile that fits the explicit oracle
    att_wrong = []
    for n in range(2, 13):
        e = oracle.expand(t, n)
        att = oracle.attractor(e)
        for k in range(n):
            w = t.word("p" + "c" * k + "e" * (n - 1 - k))
            if bool(att[e.index(w)]) != lose[k]:
                att_wrong.append(k)
    ok &= not wrong and not att_wrong
    details.append(f"take-away {t_time:.1f}s mismatches={wrong} attractor={att_wrong}")

    g = builtin("nim")
    start = time.monotonic()
    res = solve_monolithic(g, EngineOptions(game_profile=True, timeout=300))
    n_time = time.monotonic() - start
    ok &= isinstance(res, Certificate) and n_time < 300
    wrong, checked = [], 0
    for piles in itertools.product(range(8), repeat=3):
        if sum(piles) > 12:
            continue
        xor_loses = piles[0] ^ piles[1] ^ piles[2] == 0
        assert xor_loses == _nim_mover_loses(piles)
        for width in (3, 4):
            checked += 1
            if res.advice.A.accepts(_nim_word(g, piles, width)) != xor_loses:
                wrong.append((piles, width))
    e = oracle.expand(g, 4)
    att = oracle.attractor(e)
    att_wrong = [p for p in itertools.product(range(8), repeat=3)
                 if bool(att[e.index(_nim_word(g, p, 3))]) != (p[0] ^ p[1] ^ p[2] == 0)]
    ok &= not wrong and not att_wrong
    details.append(f"nim {n_time:.1f}s checked={checked} mismatches={len(wrong)} "
                   f"attractor={len(att_wrong)}")
    assert verdict(4, ok, "; ".join(details))


# ---------------------------------------------------------------------------
# 5. incremental engine


def test_criterion_5_incremental():
    details, ok = [], True
    for name in ("flip", "israeli-jalfon"):
        g = builtin(name)
        for inv in (False, True):
            start = time.monotonic()
            cert, log = incr_proof(name, inv)
            elapsed = time.monotonic() - start
            variant = all(s.a_shrank or s.w_grew for s in log) and log == cert.iterations
            failures = check_certificate(g, cert)
            good = variant and not failures and elapsed < 600
            ok &= good
            details.append(f"{name}{'+inv' if inv else ''}: iterations={len(log)} "
                           f"pieces={len(cert.pieces)} invariants={len(cert.invariants)} "
                           f"variant={variant} failed={failures} {elapsed:.1f}s")
    assert verdict(5, ok, "; ".join(details))


# ---------------------------------------------------------------------------
# 6. learned invariants


def test_criterion_6_lstar():
    details, ok = [], True
    for name in ("flip", "israeli-jalfon"):
        g = builtin(name)
        start = time.monotonic()
        H = learn_invariant(g, 5).H
        elapsed = time.monotonic() - start
        inductive = inductive_witness(g, H, outside=(g.final,)) is None
        contains = fa.includes(H, g.initial) is None
        mismatches = sum(1 for w in brute.words(len(g.alphabet), 5)
                         if H.accepts(w) != oracle.reachable(g, w))
        good = inductive and contains and mismatches == 0 and elapsed < 120
        ok &= good
        details.append(f"{name}: states={H.n} inductive={inductive} contains-I0={contains} "
                       f"mismatches={mismatches} {elapsed:.2f}s")
    assert verdict(6, ok, "; ".join(details))


# ---------------------------------------------------------------------------
# 7. symmetry


def test_criterion_7_symmetry():
    ij_ok = check_automorphism(builtin("israeli-jalfon")) is None
    h = builtin("herman-line")
    v = check_automorphism(h)
    h_ok = v is not None
    rng = random.Random(7)
    rot = SymmetryDecl.rotation()
    invariant = 0
    for _ in range(100):
        k = rng.randint(1, 3)
        d = brute.random_dfa(rng, brute.alphabet(k), rng.randint(1, 5))
        C = close_piece(d, rot)
        if fa.equivalent(fa.minimize(fa.rotate_once(C)), C) is None:
            invariant += 1
    ok = ij_ok and h_ok and invariant == 100
    assert verdict(7, ok, f"israeli-jalfon rotation ok={ij_ok}; herman-line witness="
                          f"{v.show(h) if v else None}; closures invariant {invariant}/100")


# ---------------------------------------------------------------------------
# 8. property suites


def _automata_cases(rng, count):
    ok = 0
    for _ in range(count):
        k = rng.randint(1, 3)
        al = brute.alphabet(k)
        n = {1: 7, 2: 6, 3: 5}[k]
        a = brute.random_dfa(rng, al, rng.randint(1, 5))
        b = brute.random_dfa(rng, al, rng.randint(1, 5))
        m = brute.random_nfa(rng, al, rng.randint(1, 4))
        La, Lb, Lm = (brute.language(x, n) for x in (a, b, m))
        universe = set(brute.words(k, n))
        good = (brute.language(fa.union(a, b), n) == La | Lb
                and brute.language(fa.intersect(a, b), n) == La & Lb
                and brute.language(fa.difference(a, b), n) == La - Lb
                and brute.language(fa.complement(a), n) == universe - La
                and brute.language(fa.determinize(m), n) == Lm
                and brute.language(fa.minimize(a), n) == La
                and (fa.is_empty(a) is None) == (not brute.language(a, a.n)))
        ok += good
    return ok


def test_criterion_8_property_suites():
    rng = random.Random(8)
    cases = 600
    automata_ok = _automata_cases(rng, cases)

    # violations synthesised by the engine: every counterexample handed to the
    # solver must replay against the candidate it was found for
    replayed = failed = 0
    for name in ("flip", "israeli-jalfon", "herman-line", "take-away", "nim"):
        g = builtin(name)
        profile = name in GAME_PROFILE
        stream = []

        def on_round(k, shape, cands, found):
            if found is not None:
                stream.append((AdviceBits(cands["A"], cands["P"]), found[0]))

        solve_monolithic(g, EngineOptions(game_profile=profile, timeout=300), on_round=on_round)
        for adv, ce in stream:
            replayed += 1
            failed += not replay(g, adv, ce)

    # certificate round trips for the proofs of criteria 2 to 5
    trips = []
    for name in ("flip", "israeli-jalfon", "take-away", "nim"):
        g = builtin(name)
        profile = name in GAME_PROFILE
        c = parse(dump_mono(name, mono_proof(name).advice, profile))
        trips.append(verify(g, c.advice, game_profile=profile) is None)
    for name in ("flip", "israeli-jalfon"):
        g = builtin(name)
        for inv in (False, True):
            cert, _ = incr_proof(name, inv)
            _, back = parse(dump_incr(name, g, cert), g)
            trips.append(check_certificate(g, back) == [])
    ok = automata_ok == cases >= 500 and replayed >= 200 and failed == 0 and all(trips)
    assert verdict(8, ok, f"automata {automata_ok}/{cases}; replayed {replayed - failed}/"
                          f"{replayed} synthesised violations; round trips "
                          f"{sum(trips)}/{len(trips)}")


# ---------------------------------------------------------------------------
# 9. Lehmann-Rabin (stretch, informational)

LR_SCRIPT = """
import json, sys, time
from rmclive.builtins import builtin
from rmclive.incr import solve_incremental, DisjunctiveCertificate
from rmclive.mono import EngineOptions
g = builtin("lehmann-rabin")
start = time.monotonic()
r = solve_incremental(g, EngineOptions(with_invariant=True, with_symmetry=True,
                                       timeout=float(sys.argv[1])))
out = {"result": type(r).__name__, "elapsed": round(time.monotonic() - start, 1)}
if isinstance(r, DisjunctiveCertificate):
    out.update(pieces=len(r.pieces), invariants=len(r.invariants), base_states=r.base.n)
print(json.dumps(out))
"""


def test_criterion_9_lehmann_rabin_stretch():
    budget = float(os.environ.get("RMCLIVE_LR_BUDGET", "300"))
    try:
        proc = subprocess.run([sys.executable, "-c", LR_SCRIPT, str(budget)],
                              capture_output=True, text=True, timeout=budget + 60)
        out = json.loads(proc.stdout.strip().splitlines()[-1]) if proc.stdout.strip() \
            else {"result": "error", "stderr": proc.stderr[-300:]}
    except subprocess.TimeoutExpired:
        out = {"result": "killed", "budget": budget}
    ok = out.get("result") == "DisjunctiveCertificate"
    verdict(9, ok, f"stretch, budget {budget:.0f}s: {out}")
    if not ok:
        pytest.xfail("stretch criterion, not required: Lehmann-Rabin did not finish in budget")
