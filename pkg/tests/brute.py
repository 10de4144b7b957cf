"""Brute-force reference semantics shared by the test modules.

Everything here works on explicit words and simulates automata directly
from their transition tables, so it never goes through the constructions
under test.
"""

import itertools
import random

from hypothesis import strategies as st

from rmclive.automata import Alphabet, Dfa, Nfa, TrackAlphabet


def step_set(a, states, letter):
    out = set()
    for q in states:
        r = a.delta[q].get(letter)
        if r is None:
            continue
        if isinstance(r, int):
            out.add(r)
        else:
            out |= r
    return out


def start_set(a):
    return {a.initial} if isinstance(a, Dfa) else set(a.initial)


def language(a, max_len):
    """All accepted words of length at most ``max_len`` (trie walk)."""
    K = len(a.alphabet)
    out = set()
    stack = [((), frozenset(start_set(a)))]
    while stack:
        w, cur = stack.pop()
        if cur & a.accepting:
            out.add(w)
        if len(w) == max_len:
            continue
        for x in range(K):
            nxt = step_set(a, cur, x)
            if nxt:
                stack.append((w + (x,), frozenset(nxt)))
    return out


def words(K, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(range(K), repeat=n)


def pairs_of(t, n):
    """All ``(x, y)`` of length ``n`` related by the transducer ``t``."""
    pa = t.alphabet
    return {pa.split(w) for w in language(t, n) if len(w) == n}


def alphabet(k):
    return Alphabet([str(i) for i in range(k)])


def random_dfa(rng: random.Random, al, n, density=0.6, p_acc=0.4):
    trans = [(q, a, rng.randrange(n)) for q in range(n) for a in range(len(al))
             if rng.random() < density]
    acc = [q for q in range(n) if rng.random() < p_acc]
    return Dfa.build(al, n, 0, trans, acc)


def random_nfa(rng: random.Random, al, n, density=0.35, p_acc=0.4):
    trans = [(q, a, r) for q in range(n) for a in range(len(al)) for r in range(n)
             if rng.random() < density / max(1, n // 2)]
    init = [q for q in range(n) if rng.random() < 0.3] or [0]
    acc = [q for q in range(n) if rng.random() < p_acc]
    return Nfa.build(al, n, init, trans, acc)


@st.composite
def dfas(draw, al=None, max_states=6, max_letters=4):
    if al is None:
        al = alphabet(draw(st.integers(1, max_letters)))
    n = draw(st.integers(1, max_states))
    trans = []
    for q in range(n):
        for a in range(len(al)):
            r = draw(st.one_of(st.none(), st.integers(0, n - 1)))
            if r is not None:
                trans.append((q, a, r))
    acc = draw(st.sets(st.integers(0, n - 1)))
    return Dfa.build(al, n, 0, trans, acc)


@st.composite
def nfas(draw, al=None, max_states=6, max_letters=4):
    if al is None:
        al = alphabet(draw(st.integers(1, max_letters)))
    n = draw(st.integers(1, max_states))
    trans = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, len(al) - 1),
                                    st.integers(0, n - 1)), max_size=3 * n))
    init = draw(st.sets(st.integers(0, n - 1), min_size=1))
    acc = draw(st.sets(st.integers(0, n - 1)))
    return Nfa.build(al, n, init, trans, acc)


def relations(k=2, max_states=4):
    """Transducers over a ``k``-letter base alphabet."""
    return dfas(al=TrackAlphabet(alphabet(k), 2), max_states=max_states)


def rotations(w):
    w = tuple(w)
    return {w[i:] + w[:i] for i in range(max(1, len(w)))}


def advice_violation(g, A, P, max_len, game_profile=False):
    """First failed advice-bit condition on words up to ``max_len``, or None.

    Works on the explicit languages: I0 inside A, A closed under moves
    (skipped for games), P irreflexive and transitive, and from every x in
    A outside F each scheduler move to a non-final y has a process answer
    z in A strictly below x.
    """
    K = len(g.alphabet)
    for n in range(max_len + 1):
        Aw = {w for w in language(A, n) if len(w) == n}
        for x in language(g.initial, n):
            if len(x) == n and x not in Aw:
                return ("L1", x)
        m1, m2, mv = pairs_of(g.move1, n), pairs_of(g.move2, n), pairs_of(g.moves, n)
        if not game_profile:
            for x, y in mv:
                if x in Aw and y not in Aw:
                    return ("L2", x, y)
        below = pairs_of(P, n)
        for z, x in below:
            if z == x:
                return ("L3", x)
        above = {}
        for y, x in below:
            above.setdefault(y, []).append(x)
        for z, y in below:
            for x in above.get(y, ()):
                if (z, x) not in below:
                    return ("L3", z, y, x)
        F = {w for w in language(g.final, n) if len(w) == n}
        answers = {}
        for y, z in m2:
            answers.setdefault(y, []).append(z)
        for x, y in m1:
            if x in Aw and x not in F and y not in F:
                if not any(z in Aw and (z, x) in below for z in answers.get(y, ())):
                    return ("L4", x, y)
    return None
