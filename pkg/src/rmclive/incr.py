"""Incremental liveness checking with disjunctive advice bits.

The loop keeps an over-approximation ``A`` of the reachable
configurations and an under-approximation ``W`` of the winning ones.
While some word of ``A`` lies outside ``W``, the shortest such word ``u``
is either reachable, and a progress pair ``(B, prec)`` with ``u`` in
``B`` widens ``W``, or unreachable, and a relatively inductive invariant
excluding ``u`` tightens ``A``.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field

from . import automata as fa
from . import oracle
from .automata import Dfa
from .learn import learn_invariant
from .model import GameInstance, SymmetryDecl
from .mono import EngineOptions, Timeout
from .symmetry import check_automorphism, close_piece, interior
from .synth import REL, SET, Obligation, cegar, post_dfa
from .verify import (AdviceBits, Counterexample, check_L3, inductive_witness,
                     progress_witness)


class IncrementalError(RuntimeError):
    pass


class SubproblemExhausted(IncrementalError):
    def __init__(self, what: str, u):
        super().__init__(f"{what} found no automaton for u={u!r} within the state budget")
        self.what = what
        self.u = u


class AssembleRefused(IncrementalError):
    pass


@dataclass
class Piece:
    u: tuple
    B: Dfa
    prec: Dfa
    closed: Dfa  # B itself, or its closure under the symmetry
    symmetric: bool = False
    rounds: int = 0
    shape: tuple = ()


@dataclass
class Invariant:
    u: tuple
    I: Dfa
    rounds: int = 0
    shape: tuple = ()


@dataclass
class Iteration:
    u: tuple
    reachable: bool
    a_shrank: bool
    w_grew: bool


@dataclass
class DisjunctiveCertificate:
    base: Dfa  # starting over-approximation
    A: Dfa
    pieces: list
    invariants: list
    symmetry: SymmetryDecl | None = None
    iterations: list = field(default_factory=list)
    elapsed: float = 0.0

    def winning_before(self, g: GameInstance, j: int) -> Dfa:
        W = g.final
        for p in self.pieces[:j]:
            W = fa.minimize(fa.union(W, p.closed))
        return W

    def reach_before(self, k: int) -> Dfa:
        A = self.base
        for inv in self.invariants[:k]:
            A = fa.minimize(fa.intersect(A, inv.I))
        return A

    @property
    def rounds(self) -> int:
        return sum(p.rounds for p in self.pieces) + sum(i.rounds for i in self.invariants)


def _ce(kind, *words):
    return Counterexample(kind, tuple(words))


def _dump_dir(opts: EngineOptions, tag: str):
    return None if opts.dump_cnf is None else os.path.join(opts.dump_cnf, tag)


def win(g: GameInstance, u, A: Dfa, W: Dfa, opts: EngineOptions, deadline=None, tag="win"):
    """Progress pair ``(B, prec)`` with ``u`` in ``B``; see ``progress_witness``."""
    def check(c):
        B, P = c["B"], c["P"]
        if not B.accepts(u):
            return _ce("PP1", u), Obligation("accept", ("B",), (u,))
        ce = check_L3(g, AdviceBits(B, P))
        if ce is not None:
            if ce.kind == "IRREFLEXIVE":
                x = ce.words[0]
                return ce, Obligation("reject", ("P",), ((x, x),))
            return ce, Obligation("transitive", ("P",), ce.words)
        w = progress_witness(g, B, P, inside=(A,), outside=(W,))
        if w is not None:
            return _ce("PP3", *w), Obligation("progress", ("B", "P"), w, post_dfa(g.move2, w[1]))
        return None

    res = cegar(g.alphabet, {"B": SET, "P": REL}, check,
                seed_obligations=[Obligation("accept", ("B",), (u,))],
                max_total=opts.max_states, deadline=deadline, seed=opts.seed,
                dump_dir=_dump_dir(opts, tag))
    if res.status == "timeout":
        raise TimeoutError()
    if res.status != "ok":
        raise SubproblemExhausted("win", u)
    return res.candidates["B"], res.candidates["P"], res.rounds, res.shape


def invariant(g: GameInstance, u, A: Dfa, opts: EngineOptions, deadline=None,
              tag="invariant"):
    """Set ``I`` with ``u`` outside, ``I0`` inside, inductive relative to ``A``."""
    if g.initial.accepts(u):
        raise IncrementalError(f"u={g.show(u)} is both initial and claimed unreachable")

    def check(c):
        I = c["I"]
        if I.accepts(u):
            return _ce("RI1", u), Obligation("reject", ("I",), (u,))
        x = fa.includes(I, g.initial)
        if x is not None:
            return _ce("RI2", tuple(x)), Obligation("accept", ("I",), (tuple(x),))
        w = inductive_witness(g, I, inside=(A,), outside=(g.final,))
        if w is not None:
            return _ce("RI3", *w), Obligation("implies", ("I",), w)
        return None

    res = cegar(g.alphabet, {"I": SET}, check,
                seed_obligations=[Obligation("reject", ("I",), (u,))],
                max_total=opts.max_states, deadline=deadline, seed=opts.seed,
                dump_dir=_dump_dir(opts, tag))
    if res.status == "timeout":
        raise TimeoutError()
    if res.status != "ok":
        raise SubproblemExhausted("invariant", u)
    return res.candidates["I"], res.rounds, res.shape


def _strict_subset(small: Dfa, big: Dfa) -> bool:
    return fa.includes(big, small) is None and fa.includes(small, big) is not None


def solve_incremental(g: GameInstance, opts: EngineOptions | None = None, log=None):
    """DisjunctiveCertificate or Timeout; sub-solver failures raise."""
    opts = opts or EngineOptions()
    start = time.monotonic()
    deadline = start + opts.timeout if opts.timeout else None
    sigma = None
    if opts.with_symmetry:
        sigma = g.symmetry or SymmetryDecl.rotation()
        bad = check_automorphism(g, sigma)
        if bad is not None:
            raise IncrementalError(f"declared symmetry fails: {bad.show(g)}")
    A = g.states
    if opts.with_invariant:
        A = fa.minimize(fa.intersect(learn_invariant(g, opts.lstar_precision).H, g.states))
    if sigma is not None:
        A = interior(A, sigma, g.states)
    cert = DisjunctiveCertificate(A, A, [], [], sigma)
    W = g.final
    try:
        while True:
            if deadline is not None and time.monotonic() > deadline:
                raise TimeoutError()
            u = fa.is_empty(fa.difference(A, W))
            if u is None:
                break
            u = tuple(u)
            reach = oracle.reachable(g, u)
            if reach:
                B, P, rounds, shape = win(g, u, A, W, opts, deadline,
                                          f"win{len(cert.pieces)}")
                closed = close_piece(B, sigma) if sigma is not None else B
                newW = fa.minimize(fa.union(W, closed))
                cert.pieces.append(Piece(u, B, P, closed, sigma is not None, rounds, shape))
                step = Iteration(u, True, False, _strict_subset(W, newW))
                W = newW
            else:
                I, rounds, shape = invariant(g, u, A, opts, deadline,
                                             f"invariant{len(cert.invariants)}")
                if sigma is not None:
                    I = interior(I, sigma, g.states)
                newA = fa.minimize(fa.intersect(A, I))
                cert.invariants.append(Invariant(u, I, rounds, shape))
                step = Iteration(u, False, _strict_subset(newA, A), False)
                A = newA
            cert.iterations.append(step)
            if log is not None:
                log(step)
            if not (step.a_shrank or step.w_grew):
                raise IncrementalError(f"no progress on u={g.show(u)}")
    except TimeoutError:
        return Timeout(cert.rounds, None, time.monotonic() - start)
    cert.A = A
    cert.elapsed = time.monotonic() - start
    return cert


# ---------------------------------------------------------------------------
# independent checks of a finished certificate


def check_certificate(g: GameInstance, cert: DisjunctiveCertificate) -> list:
    """All failed conditions as ``(label, witness)``; empty when valid."""
    out = []
    A = cert.A
    x = fa.includes(A, g.initial)
    if x is not None:
        out.append(("D1", (tuple(x),)))
    w = inductive_witness(g, A, outside=(g.final,))
    if w is not None:
        out.append(("D2", w))
    cover = g.final
    for p in cert.pieces:
        cover = fa.union(cover, p.closed)
    x = fa.includes(cover, A)
    if x is not None:
        out.append(("D3", (tuple(x),)))
    for j, p in enumerate(cert.pieces):
        if not p.B.accepts(p.u):
            out.append((f"PP1[{j}]", (p.u,)))
        ce = check_L3(g, AdviceBits(p.B, p.prec))
        if ce is not None:
            out.append((f"PP2[{j}]", ce.words))
        w = progress_witness(g, p.B, p.prec, inside=(A,), outside=(cert.winning_before(g, j),))
        if w is not None:
            out.append((f"PP3[{j}]", w))
    for k, inv in enumerate(cert.invariants):
        if inv.I.accepts(inv.u):
            out.append((f"RI1[{k}]", (inv.u,)))
        x = fa.includes(inv.I, g.initial)
        if x is not None:
            out.append((f"RI2[{k}]", (tuple(x),)))
        w = inductive_witness(g, inv.I, inside=(cert.reach_before(k),), outside=(g.final,))
        if w is not None:
            out.append((f"RI3[{k}]", w))
    return out


def assemble(g: GameInstance, cert: DisjunctiveCertificate, limit: int = 200_000) -> AdviceBits:
    """Monolithic advice bits: pieces ranked by index, then by their own order.

    ``idx(x)`` is the first piece containing ``x`` (the first piece when
    none does); ``z < x`` iff ``idx(z) < idx(x)``, or both indices are
    ``j`` and ``z <_j x``.
    """
    if any(p.symmetric for p in cert.pieces):
        raise AssembleRefused("pieces closed under a symmetry have no regular combined order")
    if not cert.pieces:
        raise AssembleRefused("no pieces to assemble")
    K = len(g.alphabet)
    pa = g.alphabet.pairs()
    Bs = [p.B for p in cert.pieces]
    Ps = [p.prec for p in cert.pieces]

    def step(d, q, a):
        return None if q is None else d.delta[q].get(a)

    def idx(states):
        for j, (d, q) in enumerate(zip(Bs, states)):
            if q is not None and q in d.accepting:
                return j
        return 0

    start = (tuple(d.initial for d in Bs), tuple(d.initial for d in Bs),
             tuple(d.initial for d in Ps))
    ids = {start: 0}
    order = [start]
    trans = []
    i = 0
    while i < len(order):
        bz, bx, ps = order[i]
        for a in range(K):
            for b in range(K):
                letter = a * K + b
                t = (tuple(step(d, q, a) for d, q in zip(Bs, bz)),
                     tuple(step(d, q, b) for d, q in zip(Bs, bx)),
                     tuple(step(d, q, letter) for d, q in zip(Ps, ps)))
                if t not in ids:
                    ids[t] = len(order)
                    order.append(t)
                    if len(order) > limit:
                        raise fa.AutomatonLimit("assemble", limit)
                trans.append((i, letter, ids[t]))
        i += 1
    acc = []
    for k, (bz, bx, ps) in enumerate(order):
        iz, ix = idx(bz), idx(bx)
        if iz < ix or (iz == ix and ps[iz] is not None and ps[iz] in Ps[iz].accepting):
            acc.append(k)
    prec = fa.minimize(Dfa.build(pa, len(order), 0, trans, acc))
    return AdviceBits(cert.A, prec)
