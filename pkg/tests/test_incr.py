import dataclasses

import pytest

from rmclive import automata as fa
from rmclive.builtins import builtin
from rmclive.incr import (AssembleRefused, DisjunctiveCertificate, IncrementalError,
                          assemble, check_certificate, invariant, solve_incremental)
from rmclive.model import parse_model
from rmclive.mono import EngineOptions, Timeout
from rmclive.regex import compile_regex
from rmclive.verify import verify

import brute
from proofs import JUNK, incr_proof

VARIANTS = [(n, inv, sym) for n in ("flip", "israeli-jalfon")
            for inv in (False, True) for sym in (False, True)]


@pytest.fixture(scope="module")
def junk():
    return parse_model(JUNK, "flip-junk")


def replay_loop(g, cert):
    """Recompute A and W step by step; every u must be the shortest-lex gap."""
    A, W = cert.base, g.final
    j = k = 0
    for step in cert.iterations:
        assert tuple(fa.is_empty(fa.difference(A, W))) == step.u
        if step.reachable:
            p = cert.pieces[j]
            assert p.u == step.u
            W = fa.union(W, p.closed)
            j += 1
        else:
            inv = cert.invariants[k]
            assert inv.u == step.u
            A = fa.intersect(A, inv.I)
            k += 1
    assert (j, k) == (len(cert.pieces), len(cert.invariants))
    assert fa.is_empty(fa.difference(A, W)) is None


@pytest.mark.parametrize("name,inv,sym", VARIANTS)
def test_incremental_proofs(name, inv, sym):
    g = builtin(name)
    cert, log = incr_proof(name, inv, sym)
    assert isinstance(cert, DisjunctiveCertificate)
    assert check_certificate(g, cert) == []
    assert log == cert.iterations
    # loop variant: every iteration shrinks A or grows W
    assert all(s.a_shrank or s.w_grew for s in log)
    replay_loop(g, cert)


def test_flip_first_gap_is_a_single_zero():
    cert, _ = incr_proof("flip")
    assert [p.u for p in cert.pieces] == [builtin("flip").word("0")]


def test_israeli_jalfon_gaps():
    g = builtin("israeli-jalfon")
    cert, _ = incr_proof("israeli-jalfon")
    assert [g.show(p.u) for p in cert.pieces] == ["T^", "NT^", "TT"]


def test_symmetry_does_not_add_iterations():
    _, plain = incr_proof("israeli-jalfon")
    cert, sym = incr_proof("israeli-jalfon", with_symmetry=True)
    assert len(sym) <= len(plain)
    for p in cert.pieces:
        assert p.symmetric
        assert fa.includes(p.closed, p.B) is None
        for w in brute.language(p.closed, 5):
            for r in brute.rotations(w):
                assert p.closed.accepts(r)


def test_invariant_branch(junk):
    cert = solve_incremental(junk, EngineOptions(timeout=300))
    assert [junk.show(i.u) for i in cert.invariants] == ["x"]
    assert check_certificate(junk, cert) == []
    replay_loop(junk, cert)
    # everything left in A is free of the junk letter
    assert not cert.A.accepts(junk.word("x"))
    assert verify(junk, assemble(junk, cert)) is None


def test_learned_invariant_removes_junk_up_front(junk):
    cert = solve_incremental(junk, EngineOptions(timeout=300, with_invariant=True))
    assert cert.invariants == []
    has_x = compile_regex("(0|1|0^|x)* x (0|1|0^|x)*", junk.alphabet)
    assert fa.is_empty(fa.intersect(cert.base, has_x)) is None
    assert check_certificate(junk, cert) == []


def test_invariant_refuses_initial_word():
    g = builtin("flip")
    with pytest.raises(IncrementalError):
        invariant(g, g.word("0"), g.states, EngineOptions())


def test_tampered_certificates_are_caught(junk):
    cert = solve_incremental(junk, EngineOptions(timeout=300))
    g = junk
    labels = lambda c: {lab for lab, _ in check_certificate(g, c)}
    assert "D3" in labels(dataclasses.replace(cert, pieces=cert.pieces[:-1]))
    hamming = compile_regex("(0/0|1/1|x/x|0^/0^)* (0/1|1/0) (0/0|1/1|x/x|0^/0^)*",
                            g.alphabet, pairs=True)
    bad = dataclasses.replace(cert.pieces[0], prec=hamming)
    assert "PP2[0]" in labels(dataclasses.replace(cert, pieces=[bad] + cert.pieces[1:]))
    leaky = dataclasses.replace(cert.invariants[0], I=g.states)
    got = labels(dataclasses.replace(cert, invariants=[leaky]))
    assert "RI1[0]" in got
    assert "D1" in labels(dataclasses.replace(cert, A=fa.Dfa.empty(g.alphabet)))


def test_assemble(flip):
    cert, _ = incr_proof("flip")
    adv = assemble(flip, cert)
    assert verify(flip, adv) is None
    sym, _ = incr_proof("flip", with_symmetry=True)
    with pytest.raises(AssembleRefused):
        assemble(flip, sym)
    with pytest.raises(AssembleRefused):
        assemble(flip, dataclasses.replace(cert, pieces=[]))


def test_assemble_israeli_jalfon(ij):
    cert, _ = incr_proof("israeli-jalfon")
    assert verify(ij, assemble(ij, cert)) is None


def test_declared_symmetry_must_hold():
    with pytest.raises(IncrementalError):
        solve_incremental(builtin("herman-line"), EngineOptions(with_symmetry=True))


def test_timeout():
    res = solve_incremental(builtin("israeli-jalfon"), EngineOptions(timeout=1e-9))
    assert isinstance(res, Timeout)
