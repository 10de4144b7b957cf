import dataclasses
import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rmclive import oracle
from rmclive.builtins import NAMES, builtin
from rmclive.model import parse_model
from rmclive.regex import compile_regex

SMALL = ("flip", "israeli-jalfon", "herman-line", "take-away", "nim")
RANDOMISED = ("flip", "israeli-jalfon", "herman-line", "lehmann-rabin")


def explicit(g, n):
    """Configurations and edges by testing every word and pair directly."""
    K = len(g.alphabet)
    pa = g.alphabet.pairs()
    cfg = [x for x in itertools.product(range(K), repeat=n) if g.states.accepts(x)]
    edges = {x: [y for y in cfg if g.moves.accepts(pa.convolve(x, y))] for x in cfg}
    return cfg, edges


def naive_attractor(g, cfg, edges, owner2):
    win = {x for x in cfg if g.final.accepts(x)}
    while True:
        new = set(win)
        for x in cfg:
            if x in win or not edges[x]:
                continue
            succ = [y in win for y in edges[x]]
            if (any(succ) if owner2[x] else all(succ)):
                new.add(x)
        if new == win:
            return win
        win = new


def naive_reachable(g, cfg, edges):
    seen = {x for x in cfg if g.initial.accepts(x)}
    todo = list(seen)
    while todo:
        x = todo.pop()
        for y in edges[x]:
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


def test_expand_flip_length_two(flip):
    e = oracle.expand(flip, 2)
    assert e.size == 8
    got = {flip.show(e.word(i)) for i in range(e.size)}
    assert got == {"00", "01", "10", "11", "0^0", "00^", "0^1", "10^"}


def test_expand_israeli_jalfon_length_three(ij):
    e = oracle.expand(ij, 3)
    unmarked = [i for i in range(e.size) if ij.alphabet.index("T^") not in e.word(i)]
    assert len(unmarked) == 7
    assert e.size == 7 + 3 * 4  # one marked token among three, others free


def test_expand_empty_length(flip):
    e = oracle.expand(flip, 0)
    assert e.size == 0
    assert oracle.attractor(e).size == 0


def test_expand_cap(ij):
    with pytest.raises(oracle.CapExceeded):
        oracle.expand(ij, 8, cap=100)


@pytest.mark.parametrize("name", SMALL)
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_expand_matches_direct_enumeration(name, n):
    g = builtin(name)
    cfg, edges = explicit(g, n)
    e = oracle.expand(g, n)
    assert [e.word(i) for i in range(e.size)] == cfg
    for i in range(e.size):
        assert sorted(e.word(j) for j in e.successors(i)) == sorted(edges[e.word(i)])


@pytest.mark.parametrize("name", SMALL)
@pytest.mark.parametrize("n", [2, 3, 4])
def test_attractor_and_reachability_match_naive(name, n):
    g = builtin(name)
    cfg, edges = explicit(g, n)
    e = oracle.expand(g, n)
    owner2 = {e.word(i): e.owner[i] == 2 for i in range(e.size)}
    win = naive_attractor(g, cfg, edges, owner2)
    reach = naive_reachable(g, cfg, edges)
    att, rm = oracle.attractor(e), oracle.reachable_mask(e)
    assert {e.word(i) for i in np.flatnonzero(att)} == win
    assert {e.word(i) for i in np.flatnonzero(rm)} == reach


def test_owner_respects_alternation(ij):
    e = oracle.expand(ij, 4)
    for i in range(e.size):
        for j in e.successors(i, 1):
            assert e.owner[i] == 1 and e.owner[j] == 2
        for j in e.successors(i, 2):
            assert e.owner[i] == 2 and e.owner[j] == 1


def test_flip_all_winning(flip):
    e = oracle.expand(flip, 3)
    assert oracle.attractor(e).all()


def test_take_away_multiples_of_four():
    g = builtin("take-away")
    e = oracle.expand(g, 10)
    att = oracle.attractor(e)
    for k in range(10):
        i = e.index(g.word("p" + "c" * k + "e" * (9 - k)))
        assert bool(att[i]) == (k % 4 == 0)


def test_reachable_examples(flip, ij):
    assert oracle.reachable(ij, ij.word("TNTN"))
    assert not oracle.reachable(ij, ij.word("NNNN"))
    assert oracle.reachable(flip, flip.word("11"))


def test_reachable_above_cap_uses_symbolic_route(ij):
    cache = oracle.ReachabilityCache(cap=10)
    for text in ("TNTNT", "NNTNN", "T^NNNT", "NNNNN"):
        w = ij.word(text)
        assert cache.reachable(ij, w) == oracle.reachable(ij, w)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_symbolic_reachability_matches_explicit(ij, n):
    e = oracle.expand(ij, n)
    mask = oracle.reachable_mask(e)
    dfa = oracle.symbolic_reachable(ij, n)
    for i in range(e.size):
        assert dfa.accepts(e.word(i)) == bool(mask[i])


def test_mdp_israeli_jalfon_length_four(ij):
    e = oracle.expand(ij, 4)
    res = oracle.mdp_check(e)
    reach = oracle.reachable_mask(e)
    assert res.converged and res.conflicts == 0
    assert res.almost_sure[reach].all()


def test_mdp_flip_length_three(flip):
    res = oracle.mdp_check(oracle.expand(flip, 3))
    assert res.almost_sure.all()
    assert all(v is oracle.Verdict.ALMOST_SURE for v in res.verdict)


def test_mdp_flip_with_stalling_process(flip):
    stall = compile_regex("(0/0|1/1)* (0^/1 | 0^/0) (0/0|1/1)*", flip.alphabet, pairs=True)
    g = flip.replace(name="flip-stall", move2=stall)
    for n in (1, 2, 3, 4):
        e = oracle.expand(g, n)
        att = oracle.attractor(e)
        res = oracle.mdp_check(e)
        assert att.all()
        assert res.almost_sure.all()
        stalls = [i for i in range(e.size) if e.owner[i] == 2]
        assert all(0.0 < res.values[i] <= 1.0 for i in stalls)


def test_mdp_detects_a_trap():
    # the process may fall into a sink that never reaches F
    src = """\
alphabet: a b s t x;
states: a | b | s | t | x;
initial: a;
final: x;
player1: a/b | s/t;
player2: b/x | b/s | t/s;
"""
    g = parse_model(src, "trap")
    e = oracle.expand(g, 1)
    res = oracle.mdp_check(e)
    att = oracle.attractor(e)
    i = e.index(g.word("a"))
    assert att[i]  # player 2 can choose x
    assert not res.almost_sure[i]  # a fair coin sometimes picks s
    assert res.conflicts == 0


def test_mdp_non_convergence(ij):
    res = oracle.mdp_check(oracle.expand(ij, 5), max_iter=1)
    assert not res.converged
    assert set(res.verdict) == {oracle.Verdict.NOT_CONVERGED}


@pytest.mark.parametrize("name", NAMES)
def test_agreement_with_almost_sure_verdicts(name):
    g = builtin(name)
    for n in range(1, 8 if name != "nim" else 7):
        try:
            ag = oracle.agreement(g, n)
        except oracle.CapExceeded:
            break
        assert ag.converged and ag.conflicts == 0
        assert ag.ahead_disagreements == 0
        if name in RANDOMISED:
            assert ag.literal_disagreements == 0
            assert ag.all_reachable_winning


def test_literal_form_disagrees_on_games():
    # player 2 in a game is an opponent: winning does not mean winning almost surely
    assert oracle.agreement(builtin("take-away"), 5).literal_disagreements == 1
    assert [oracle.agreement(builtin("nim"), n).literal_disagreements
            for n in (3, 4, 5)] == [12, 60, 252]


@settings(max_examples=40)
@given(st.sampled_from(SMALL), st.integers(2, 5), st.randoms(use_true_random=False))
def test_attractor_monotone_in_final(name, n, rnd):
    g = builtin(name)
    e = oracle.expand(g, n)
    base = oracle.attractor(e)
    owner1 = np.flatnonzero(e.owner == 1)
    extra = e.final.copy()
    for i in owner1:
        if rnd.random() < 0.2:
            extra[i] = True
    bigger = oracle.attractor(dataclasses.replace(e, final=extra))
    assert (bigger | ~base).all()


@pytest.mark.parametrize("name", SMALL)
def test_reachability_closed_under_moves(name):
    g = builtin(name)
    e = oracle.expand(g, 4)
    mask = oracle.reachable_mask(e)
    rng = random.Random(0)
    for i in rng.sample(list(np.flatnonzero(mask)), min(40, int(mask.sum()))):
        for j in e.successors(int(i)):
            assert mask[j]
            assert oracle.reachable(g, e.word(j))


def test_reachable_language(flip):
    R = oracle.reachable_language(flip, 3)
    e = oracle.expand(flip, 3)
    assert all(R.accepts(e.word(i)) for i in range(e.size))
    assert not R.accepts(flip.word("0000"))
