"""Conformance checks for advice bits, with shortest counterexamples.

Advice bits are a DFA ``A`` over the configuration alphabet and a
deterministic transducer ``prec`` accepting ``x/y`` iff ``x`` is below
``y``.  The four checks run in order (initial inclusion, inductiveness,
strict preorder, progress) and the first failure is reported with the
shortest, then lexicographically least, witness.

All checks walk lazily built products, so only the reachable part of a
product is ever constructed.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from . import automata as fa
from .automata import AutomatonLimit, Dfa, DEFAULT_STATE_LIMIT
from .model import GameInstance

# the condition each counterexample kind refutes
CONDITION = {"CE1": "L1", "CE2": "L2", "CE3": "L3", "IRREFLEXIVE": "L3", "CE4": "L4"}


@dataclass(frozen=True)
class AdviceBits:
    A: Dfa
    prec: Dfa

    def below(self, x, y) -> bool:
        """``x`` is below ``y`` (``prec`` accepts ``x/y``)."""
        pa = self.prec.alphabet
        return self.prec.accepts(pa.convolve(x, y))


@dataclass(frozen=True)
class Counterexample:
    kind: str
    words: tuple

    @property
    def length(self) -> int:
        return len(self.words[0])

    def show(self, alphabet) -> list:
        return [alphabet.show(w) for w in self.words]


def _bfs(start, expand, accepting, limit, what):
    """Shortest-lex accepted word of an implicit DFA.

    ``expand(s)`` returns ``(letter, t)`` pairs; letters are sorted here.
    """
    if accepting(start):
        return ()
    parent = {start: None}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for x, t in sorted(expand(s), key=lambda p: p[0]):
            if t in parent:
                continue
            parent[t] = (s, x)
            if accepting(t):
                word = []
                while parent[t] is not None:
                    t, y = parent[t]
                    word.append(y)
                return tuple(reversed(word))
            if len(parent) > limit:
                raise AutomatonLimit(what, limit)
            queue.append(t)
    return None


def _step(d: Dfa, q, a):
    """Partial step; ``None`` is the dead state."""
    if q is None:
        return None
    return d.delta[q].get(a)


def _acc(d: Dfa, q) -> bool:
    return q is not None and q in d.accepting


def _by_first(t: Dfa, K: int) -> list:
    """Per state: first-track letter -> list of (second letter, target)."""
    out = []
    for q in range(t.n):
        m: dict = {}
        for x, r in t.delta[q].items():
            m.setdefault(x // K, []).append((x % K, r))
        out.append(m)
    return out


def _split_pairs(word, K):
    return tuple(x // K for x in word), tuple(x % K for x in word)


# ---------------------------------------------------------------------------
# generic checks


def inclusion_witness(sup: Dfa, sub: Dfa):
    """Shortest-lex word of ``sub`` outside ``sup`` (``None`` if included)."""
    return fa.includes(sup, sub)


def inductive_witness(g: GameInstance, A: Dfa, relation: Dfa | None = None,
                      inside: tuple = (), outside: tuple = (), target: Dfa | None = None,
                      limit: int = DEFAULT_STATE_LIMIT):
    """Shortest pair ``(x, y)`` with ``x`` in ``A`` and every set of ``inside``,
    ``x`` outside every set of ``outside``, ``x -> y`` and ``y`` not in
    ``target`` (default ``A``)."""
    rel = g.moves if relation is None else relation
    target = A if target is None else target
    K = len(g.alphabet)
    pos = (A,) + tuple(inside)
    neg = tuple(outside)
    start = (rel.initial, tuple(d.initial for d in pos), tuple(d.initial for d in neg),
             target.initial)

    def expand(s):
        qr, qp, qn, qt = s
        out = []
        for x, r in rel.delta[qr].items():
            a, b = divmod(x, K)
            np_ = tuple(d.delta[q].get(a) for d, q in zip(pos, qp))
            if None in np_:
                continue
            nn = tuple(_step(d, q, a) for d, q in zip(neg, qn))
            out.append((x, (r, np_, nn, _step(target, qt, b))))
        return out

    def accepting(s):
        qr, qp, qn, qt = s
        return (qr in rel.accepting and all(q in d.accepting for d, q in zip(pos, qp))
                and not any(_acc(d, q) for d, q in zip(neg, qn)) and not _acc(target, qt))

    w = _bfs(start, expand, accepting, limit, "inductiveness check")
    return None if w is None else _split_pairs(w, K)


def irreflexive_witness(prec: Dfa, K: int):
    def expand(q):
        return [(a * K + a, prec.delta[q][a * K + a]) for a in range(K)
                if a * K + a in prec.delta[q]]

    w = _bfs(prec.initial, expand, lambda q: q in prec.accepting, DEFAULT_STATE_LIMIT,
             "irreflexivity check")
    return None if w is None else tuple(x // K for x in w)


def transitivity_witness(prec: Dfa, K: int, limit: int = DEFAULT_STATE_LIMIT):
    """Shortest ``(x, y, z)`` with ``x<y``, ``y<z`` and not ``x<z``."""
    first = _by_first(prec, K)
    start = (prec.initial, prec.initial, prec.initial)

    def expand(s):
        p1, p2, p3 = s
        out = []
        for xy, r1 in prec.delta[p1].items():
            a, b = divmod(xy, K)
            for c, r2 in first[p2].get(b, ()):
                letter = (a * K + b) * K + c
                out.append((letter, (r1, r2, _step(prec, p3, a * K + c))))
        return out

    def accepting(s):
        return s[0] in prec.accepting and s[1] in prec.accepting and not _acc(prec, s[2])

    w = _bfs(start, expand, accepting, limit, "transitivity check")
    if w is None:
        return None
    return (tuple(x // (K * K) for x in w), tuple((x // K) % K for x in w),
            tuple(x % K for x in w))


def progress_witness(g: GameInstance, B: Dfa, prec: Dfa, inside: tuple = (),
                     outside: tuple = (), limit: int = DEFAULT_STATE_LIMIT):
    """Shortest ``(x, y)`` with ``x`` in ``B`` and all of ``inside``, outside
    ``F`` and all of ``outside``, ``x ->1 y`` with ``y`` not final, such that
    no ``z`` in ``B`` has ``y ->2 z`` and ``z`` below ``x``.

    The existential part is determinised on the fly: its state is the set of
    ``(B, ->2, prec)`` state triples reachable for some ``z``.
    """
    K = len(g.alphabet)
    m1, m2, F = g.move1, g.move2, g.final
    second = _by_first(m2, K)
    pos = (B,) + tuple(inside)
    neg = (F,) + tuple(outside)
    start = (m1.initial, tuple(d.initial for d in pos), tuple(d.initial for d in neg),
             F.initial, frozenset({(B.initial, m2.initial, prec.initial)}))

    def expand(s):
        q1, qp, qn, qf, zs = s
        out = []
        for x, r in m1.delta[q1].items():
            a, b = divmod(x, K)
            np_ = tuple(d.delta[q].get(a) for d, q in zip(pos, qp))
            if None in np_:
                continue
            nn = tuple(_step(d, q, a) for d, q in zip(neg, qn))
            nz = set()
            for qb, q2, qpr in zs:
                for c, r2 in second[q2].get(b, ()):
                    rb = B.delta[qb].get(c)
                    if rb is None:
                        continue
                    rp = prec.delta[qpr].get(c * K + a)
                    if rp is None:
                        continue
                    nz.add((rb, r2, rp))
            out.append((x, (r, np_, nn, _step(F, qf, b), frozenset(nz))))
        return out

    def accepting(s):
        q1, qp, qn, qf, zs = s
        if q1 not in m1.accepting or _acc(F, qf):
            return False
        if not all(q in d.accepting for d, q in zip(pos, qp)):
            return False
        if any(_acc(d, q) for d, q in zip(neg, qn)):
            return False
        return not any(qb in B.accepting and q2 in m2.accepting and qpr in prec.accepting
                       for qb, q2, qpr in zs)

    w = _bfs(start, expand, accepting, limit, "progress check")
    return None if w is None else _split_pairs(w, K)


# ---------------------------------------------------------------------------
# the four conditions


def check_L1(g: GameInstance, adv: AdviceBits):
    x = inclusion_witness(adv.A, g.initial)
    return None if x is None else Counterexample("CE1", (x,))


def check_L2(g: GameInstance, adv: AdviceBits):
    w = inductive_witness(g, adv.A)
    return None if w is None else Counterexample("CE2", w)


def check_L3(g: GameInstance, adv: AdviceBits):
    K = len(g.alphabet)
    x = irreflexive_witness(adv.prec, K)
    if x is not None:
        return Counterexample("IRREFLEXIVE", (x,))
    w = transitivity_witness(adv.prec, K)
    return None if w is None else Counterexample("CE3", w)


def check_L4(g: GameInstance, adv: AdviceBits):
    w = progress_witness(g, adv.A, adv.prec)
    return None if w is None else Counterexample("CE4", w)


def verify(g: GameInstance, adv: AdviceBits, game_profile: bool = False):
    """``None`` when the advice bits conform, else the first counterexample."""
    checks = [check_L1, check_L2, check_L3, check_L4]
    if game_profile:
        checks.remove(check_L2)
    for check in checks:
        ce = check(g, adv)
        if ce is not None:
            return ce
    return None


# ---------------------------------------------------------------------------
# replay by direct membership tests


def post_words(t: Dfa, word) -> list:
    """All ``w`` with ``word -> w`` under ``t``, in lexicographic order."""
    return list(fa.words_of_length(fa.image_of_word(t, word), len(word)))


def replay(g: GameInstance, adv: AdviceBits, ce: Counterexample) -> bool:
    """Does ``ce`` really violate its condition for ``adv``?"""
    A, pa = adv.A, g.alphabet.pairs()
    if len({len(w) for w in ce.words}) != 1:
        return False
    if ce.kind == "CE1":
        (x,) = ce.words
        return g.initial.accepts(x) and not A.accepts(x)
    if ce.kind == "CE2":
        x, y = ce.words
        return A.accepts(x) and g.moves.accepts(pa.convolve(x, y)) and not A.accepts(y)
    if ce.kind == "IRREFLEXIVE":
        (x,) = ce.words
        return adv.below(x, x)
    if ce.kind == "CE3":
        x, y, z = ce.words
        return adv.below(x, y) and adv.below(y, z) and not adv.below(x, z)
    if ce.kind == "CE4":
        x, y = ce.words
        if not (A.accepts(x) and not g.final.accepts(x) and g.states.accepts(y)
                and not g.final.accepts(y) and g.move1.accepts(pa.convolve(x, y))):
            return False
        return not any(A.accepts(z) and adv.below(z, x) for z in post_words(g.move2, y))
    raise ValueError(f"unknown counterexample kind {ce.kind}")
