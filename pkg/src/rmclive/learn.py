"""L* learning of an inductive over-approximation of the reachable set.

Membership queries ask whether a word is reachable.  A hypothesis H is
accepted once it contains I0, is inductive outside F, and agrees with
reachability on all words up to a fixed length (the precision).
Counterexamples are processed by adding all their suffixes to the
experiment set, so the table stays consistent by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import automata as fa
from . import oracle
from .automata import Dfa
from .model import GameInstance
from .verify import inductive_witness


class LearningLimit(RuntimeError):
    pass


@dataclass
class ObservationTable:
    alphabet: fa.Alphabet
    member: object  # word -> bool
    prefixes: list = field(default_factory=lambda: [()])
    suffixes: list = field(default_factory=lambda: [()])
    entries: dict = field(default_factory=dict)

    def query(self, w) -> bool:
        v = self.entries.get(w)
        if v is None:
            v = bool(self.member(w))
            self.entries[w] = v
        return v

    def row(self, s) -> tuple:
        return tuple(self.query(s + e) for e in self.suffixes)

    def close(self, max_prefixes: int):
        """Add one-letter extensions until every row already occurs."""
        while True:
            rows = {self.row(s) for s in self.prefixes}
            missing = None
            for s in self.prefixes:
                for a in range(len(self.alphabet)):
                    r = self.row(s + (a,))
                    if r not in rows:
                        missing = s + (a,)
                        break
                if missing:
                    break
            if missing is None:
                return
            self.prefixes.append(missing)
            if len(self.prefixes) > max_prefixes:
                raise LearningLimit(f"more than {max_prefixes} table rows")

    def add_counterexample(self, w):
        for i in range(len(w) + 1):
            suf = tuple(w[i:])
            if suf not in self.suffixes:
                self.suffixes.append(suf)

    def hypothesis(self) -> Dfa:
        ids: dict = {}
        reps = []
        for s in self.prefixes:
            r = self.row(s)
            if r not in ids:
                ids[r] = len(reps)
                reps.append(s)
        trans = []
        for i, s in enumerate(reps):
            for a in range(len(self.alphabet)):
                trans.append((i, a, ids[self.row(s + (a,))]))
        acc = [i for i, s in enumerate(reps) if self.query(s)]
        d = Dfa.build(self.alphabet, len(reps), ids[self.row(())], trans, acc)
        return fa.minimize(d)


@dataclass
class LearnResult:
    H: Dfa
    rounds: int
    queries: int
    counterexamples: list


def teacher(g: GameInstance, H: Dfa, n: int, member):
    """``None`` if H passes all three tests, else ``(test, word, polarity)``."""
    x = fa.includes(H, g.initial)
    if x is not None:
        return (1, tuple(x), True)
    w = inductive_witness(g, H, outside=(g.final,))
    if w is not None:
        x, y = w
        if not member(x):
            return (2, x, False)
        return (2, y, True)
    exact = oracle.reachable_language(g, n)
    bounded = fa.intersect(H, fa.length_at_most(g.alphabet, n))
    w = fa.equivalent(bounded, exact)
    if w is not None:
        w = tuple(w)
        return (3, w, member(w))
    return None


def learn_invariant(g: GameInstance, n_precision: int = 5, max_rounds: int = 500,
                    max_prefixes: int = 5000) -> LearnResult:
    member = lambda w: oracle.reachable(g, w)
    table = ObservationTable(g.alphabet, member)
    ces = []
    for rounds in range(1, max_rounds + 1):
        table.close(max_prefixes)
        H = table.hypothesis()
        found = teacher(g, H, n_precision, table.query)
        if found is None:
            return LearnResult(H, rounds, len(table.entries), ces)
        ces.append(found)
        table.add_counterexample(found[1])
    raise LearningLimit(f"no accepted hypothesis after {max_rounds} rounds")
