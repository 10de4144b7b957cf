"""SAT encoding of candidate automata and the shape-driven CEGAR driver.

A synthesis task has named roles, each a partial DFA over the base
alphabet (a set) or over pair letters (a relation).  For a fixed shape,
i.e. a state count per role, the base constraints are

* determinism: at most one successor per state and letter;
* irreflexivity of relations, via "reachable on diagonal letters" flags;
* every state reachable from the initial state, via binary distances;
* every state co-reachable to an accepting state (or the automaton is
  the one-state empty automaton);
* non-initial states sorted by their accepting bit and self-loop bits.

Obligations learnt from counterexamples are added on top.  State 0 is
the initial state throughout.
"""

from __future__ import annotations

import os
import threading
import time
from dataclasses import dataclass, field
from itertools import combinations

from pysat.solvers import Glucose4

from . import automata as fa
from .automata import Alphabet, Dfa

SET, REL = "set", "rel"


class SynthTimeout(RuntimeError):
    pass


@dataclass(frozen=True)
class Obligation:
    """A constraint on candidates, stated on words.

    kind is one of ``accept`` (role accepts w), ``reject`` (role rejects w),
    ``implies`` (role accepts x => role accepts y), ``transitive`` (on a
    relation role: x<y and y<z => x<z) and ``progress`` (set role B
    accepts x => some z in B with y ->2 z is below x, ``post`` being the
    DFA of admissible z).
    """
    kind: str
    roles: tuple
    words: tuple
    post: Dfa | None = field(default=None, compare=False)


def shapes(k: int, max_total: int):
    """State-count tuples by increasing total, then lexicographically."""
    def rec(rest, total):
        if rest == 1:
            yield (total,)
            return
        for first in range(1, total - rest + 2):
            for tail in rec(rest - 1, total - first):
                yield (first,) + tail

    for total in range(k, max_total + 1):
        yield from rec(k, total)


class _Auto:
    """Variables of one candidate automaton."""

    def __init__(self, enc: "Encoder", kind: str, n: int, letters: int):
        self.kind, self.n, self.L = kind, n, letters
        self.x = [[[enc.new() for _ in range(n)] for _ in range(letters)] for _ in range(n)]
        self.z = [enc.new() for _ in range(n)]
        self.empty = enc.new()

    def edge_vars(self, q, r):
        return [self.x[q][a][r] for a in range(self.L)]


class Encoder:
    """Clause store plus solver for one shape."""

    def __init__(self, alphabet: Alphabet, roles: dict, shape: tuple, seed: int = 0):
        self.alphabet = alphabet
        self.K = len(alphabet)
        self.seed = seed
        self.nv = 0
        self.clauses: list = []
        self.solver = Glucose4()
        self.roles = {}
        for (name, kind), n in zip(roles.items(), shape):
            letters = self.K if kind == SET else self.K * self.K
            self.roles[name] = _Auto(self, kind, n, letters)
        self._pos: dict = {}
        self._acc: dict = {}
        for auto in self.roles.values():
            self._base(auto)

    # -- plumbing

    def new(self) -> int:
        self.nv += 1
        return self.nv

    def add(self, clause):
        self.clauses.append(clause)
        self.solver.add_clause(clause)

    def close(self):
        self.solver.delete()

    def dimacs(self) -> str:
        out = [f"p cnf {self.nv} {len(self.clauses)}"]
        out.extend(" ".join(map(str, c)) + " 0" for c in self.clauses)
        return "\n".join(out) + "\n"

    # -- base constraints

    def _increment(self, guard, src, dst):
        """guard => dst = src + 1 (binary, least significant bit first)."""
        self.add([-guard, dst[0], src[0]])
        self.add([-guard, -dst[0], -src[0]])
        carry = src[0]
        for i in range(1, len(src)):
            a, b = src[i], dst[i]
            self.add([-guard, -b, a, carry])
            self.add([-guard, -b, -a, -carry])
            self.add([-guard, b, -a, carry])
            self.add([-guard, b, a, -carry])
            c = self.new()
            self.add([-c, a])
            self.add([-c, carry])
            self.add([c, -a, -carry])
            carry = c
        self.add([-guard, -carry])

    def _lex_leq(self, a, b):
        """Bit vector a <= b lexicographically (first bit most significant)."""
        eq = None  # None stands for the constant true
        for i, (ai, bi) in enumerate(zip(a, b)):
            pre = [] if eq is None else [-eq]
            self.add(pre + [-ai, bi])
            if i == len(a) - 1:
                break
            nxt = self.new()
            self.add(pre + [-ai, -bi, nxt])
            self.add(pre + [ai, bi, nxt])
            eq = nxt

    def _base(self, m: _Auto):
        n, L = m.n, m.L
        # determinism
        for q in range(n):
            for a in range(L):
                for r1, r2 in combinations(range(n), 2):
                    self.add([-m.x[q][a][r1], -m.x[q][a][r2]])
        # irreflexivity: r_q marks states reachable on diagonal letters
        if m.kind == REL:
            r = [self.new() for _ in range(n)]
            self.add([r[0]])
            for q in range(n):
                self.add([-m.z[q], -r[q]])
                for a in range(self.K):
                    diag = a * self.K + a
                    for q2 in range(n):
                        self.add([-r[q], -m.x[q][diag][q2], r[q2]])
        width = max(1, (n - 1).bit_length())
        # reachability
        y = [[self.new() for _ in range(width)] for _ in range(n)]
        for bit in y[0]:
            self.add([-bit])
        for q in range(1, n):
            ts = []
            for p in range(n):
                if p == q:
                    continue
                t = self.new()
                ts.append(t)
                self.add([-t] + m.edge_vars(p, q))
                self._increment(t, y[p], y[q])
            self.add(ts)
        # co-reachability, or the whole automaton is empty
        d = [[self.new() for _ in range(width)] for _ in range(n)]
        for q in range(n):
            us = []
            for p in range(n):
                if p == q:
                    continue
                u = self.new()
                us.append(u)
                self.add([-u] + m.edge_vars(q, p))
                self._increment(u, d[p], d[q])
            self.add([m.z[q], m.empty] + us)
            self.add([-m.empty, -m.z[q]])
            for a in range(L):
                for p in range(n):
                    self.add([-m.empty, -m.x[q][a][p]])
        # symmetry breaking on non-initial states
        for q in range(1, n - 1):
            va = [m.z[q]] + [m.x[q][a][q] for a in range(L)]
            vb = [m.z[q + 1]] + [m.x[q + 1][a][q + 1] for a in range(L)]
            self._lex_leq(va, vb)

    # -- membership

    def letter(self, role: str, word_letters) -> tuple:
        """Word over a role's letters; relation words are given as tracks."""
        if self.roles[role].kind == SET:
            return tuple(word_letters)
        x, y = word_letters
        return tuple(a * self.K + b for a, b in zip(x, y))

    def pos(self, role: str, word) -> int:
        """Variable g with g => the role accepts word."""
        key = (role, word)
        if key in self._pos:
            return self._pos[key]
        m = self.roles[role]
        g = self.new()
        e = [[self.new() for _ in range(m.n)] for _ in range(len(word) + 1)]
        self.add([-g, e[0][0]])
        for i, a in enumerate(word):
            for q in range(m.n):
                self.add([-e[i][q]] + e[i + 1])
                for r in range(m.n):
                    self.add([-e[i][q], -e[i + 1][r], m.x[q][a][r]])
        for q in range(m.n):
            self.add([-e[len(word)][q], m.z[q]])
        self._pos[key] = g
        return g

    def acc(self, role: str, word) -> int:
        """Variable v with (the role accepts word) => v."""
        key = (role, word)
        if key in self._acc:
            return self._acc[key]
        m = self.roles[role]
        v = self.new()
        rho = [0] * m.n  # 0 marks "false", None marks "true"
        rho[0] = None
        for a in word:
            nxt = [self.new() for _ in range(m.n)]
            for q in range(m.n):
                if rho[q] == 0:
                    continue
                pre = [] if rho[q] is None else [-rho[q]]
                for r in range(m.n):
                    self.add(pre + [-m.x[q][a][r], nxt[r]])
            rho = nxt
        for q in range(m.n):
            if rho[q] == 0:
                continue
            pre = [] if rho[q] is None else [-rho[q]]
            self.add(pre + [-m.z[q], v])
        self._acc[key] = v
        return v

    def _path(self, m: _Auto, guard, s, n, letter_of):
        """guard => m accepts the word chosen by one-hot letters s."""
        e = [[self.new() for _ in range(m.n)] for _ in range(n + 1)]
        self.add([-guard, e[0][0]])
        for i in range(n):
            for q in range(m.n):
                self.add([-e[i][q]] + e[i + 1])
                for r in range(m.n):
                    for c in range(self.K):
                        self.add([-e[i][q], -e[i + 1][r], -s[i][c], m.x[q][letter_of(i, c)][r]])
        for q in range(m.n):
            self.add([-e[n][q], m.z[q]])

    def _fixed_path(self, d: Dfa, guard, s, n):
        """guard => the fixed DFA d accepts the word chosen by s."""
        e = [[self.new() for _ in range(d.n)] for _ in range(n + 1)]
        self.add([-guard, e[0][d.initial]])
        for i in range(n):
            for q in range(d.n):
                self.add([-e[i][q]] + e[i + 1])
                for r in range(d.n):
                    for c in range(self.K):
                        if d.delta[q].get(c) != r:
                            self.add([-e[i][q], -e[i + 1][r], -s[i][c]])
        for q in range(d.n):
            if q not in d.accepting:
                self.add([-e[n][q]])

    # -- obligations

    def encode(self, ob: Obligation):
        k = ob.kind
        if k == "accept":
            (role,) = ob.roles
            self.add([self.pos(role, self.letter(role, ob.words[0]))])
        elif k == "reject":
            (role,) = ob.roles
            self.add([-self.acc(role, self.letter(role, ob.words[0]))])
        elif k == "implies":
            (role,) = ob.roles
            x, y = ob.words
            self.add([-self.acc(role, self.letter(role, x)), self.pos(role, self.letter(role, y))])
        elif k == "transitive":
            (role,) = ob.roles
            x, y, z = ob.words
            w = lambda a, b: self.letter(role, (a, b))
            self.add([-self.acc(role, w(x, y)), -self.acc(role, w(y, z)), self.pos(role, w(x, z))])
        elif k == "progress":
            brole, prole = ob.roles
            x, y = ob.words
            ax = self.acc(brole, tuple(x))
            post = ob.post
            if not post.accepting:
                self.add([-ax])
                return
            g = self.new()
            self.add([-ax, g])
            n = len(x)
            s = [[self.new() for _ in range(self.K)] for _ in range(n)]
            for row in s:
                self.add([-g] + row)
                for a, b in combinations(row, 2):
                    self.add([-a, -b])
            K = self.K
            self._path(self.roles[brole], g, s, n, lambda i, c: c)
            self._path(self.roles[prole], g, s, n, lambda i, c: c * K + x[i])
            self._fixed_path(post, g, s, n)
        else:
            raise ValueError(f"unknown obligation kind {k}")

    # -- solving

    def solve(self, deadline: float | None = None):
        """Model as a set of true variables, ``None`` if unsatisfiable."""
        timer = None
        if deadline is not None:
            left = deadline - time.monotonic()
            if left <= 0:
                raise SynthTimeout()
            timer = threading.Timer(left, self.solver.interrupt)
            timer.daemon = True
            timer.start()
        try:
            res = self.solver.solve_limited(expect_interrupt=True)
        finally:
            if timer is not None:
                timer.cancel()
        if res is None:
            self.solver.clear_interrupt()
            raise SynthTimeout()
        if not res:
            return None
        return {v for v in self.solver.get_model() if v > 0}

    def decode(self, model: set) -> dict:
        out = {}
        for name, m in self.roles.items():
            al = self.alphabet if m.kind == SET else self.alphabet.pairs()
            trans = [(q, a, r) for q in range(m.n) for a in range(m.L) for r in range(m.n)
                     if m.x[q][a][r] in model]
            acc = [q for q in range(m.n) if m.z[q] in model]
            out[name] = Dfa.build(al, m.n, 0, trans, acc)
        return out


# ---------------------------------------------------------------------------
# CEGAR driver


@dataclass
class CegarResult:
    status: str  # "ok", "exhausted" or "timeout"
    candidates: dict | None
    rounds: int
    shape: tuple | None
    shapes_tried: list
    obligations: list
    counterexamples: list


def post_dfa(move2: Dfa, y) -> Dfa:
    return fa.minimize(fa.image_of_word(move2, y))


def cegar(alphabet: Alphabet, roles: dict, check, seed_obligations=(), max_total: int = 24,
          deadline: float | None = None, dump_dir: str | None = None, seed: int = 0,
          on_round=None, max_rounds: int | None = None) -> CegarResult:
    """Alternate synthesis and checking until a candidate passes.

    ``check(candidates)`` returns ``None`` when they pass, else a pair
    ``(counterexample, obligation)``.  Obligations are kept across shapes.
    """
    obligations = list(seed_obligations)
    ces: list = []
    tried: list = []
    rounds = 0
    for shape in shapes(len(roles), max_total):
        tried.append(shape)
        enc = Encoder(alphabet, roles, shape, seed)
        try:
            for ob in obligations:
                enc.encode(ob)
            while True:
                if max_rounds is not None and rounds >= max_rounds:
                    return CegarResult("exhausted", None, rounds, shape, tried, obligations, ces)
                rounds += 1
                if dump_dir is not None:
                    os.makedirs(dump_dir, exist_ok=True)
                    name = f"round{rounds}_{'x'.join(map(str, shape))}.cnf"
                    with open(os.path.join(dump_dir, name), "w") as fh:
                        fh.write(enc.dimacs())
                try:
                    model = enc.solve(deadline)
                except SynthTimeout:
                    return CegarResult("timeout", None, rounds, shape, tried, obligations, ces)
                if model is None:
                    break
                cands = enc.decode(model)
                found = check(cands)
                if on_round is not None:
                    on_round(rounds, shape, cands, found)
                if found is None:
                    return CegarResult("ok", cands, rounds, shape, tried, obligations, ces)
                ce, ob = found
                ces.append(ce)
                obligations.append(ob)
                enc.encode(ob)
                if deadline is not None and time.monotonic() > deadline:
                    return CegarResult("timeout", None, rounds, shape, tried, obligations, ces)
        finally:
            enc.close()
    return CegarResult("exhausted", None, rounds, tried[-1] if tried else None, tried,
                       obligations, ces)
