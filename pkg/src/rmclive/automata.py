"""Finite automata and length-preserving transducers.

Automata are partial: a missing transition rejects.  Words are tuples of
letter indices into an :class:`Alphabet`.  A transducer is simply an
automaton whose alphabet is a :class:`TrackAlphabet` with two tracks; the
letter ``a/b`` is stored as the fused index ``i * K + j``.

All values are treated as immutable once built.  Every operation returns a
fresh automaton.
"""

from __future__ import annotations

import itertools
from collections import deque
from typing import Callable, Hashable, Iterable, Iterator, Sequence

DEFAULT_STATE_LIMIT = 1_000_000

Word = tuple


class AutomatonLimit(RuntimeError):
    """Raised when a construction exceeds its configured state budget."""

    def __init__(self, operation: str, limit: int):
        super().__init__(f"{operation}: more than {limit} states")
        self.operation = operation
        self.limit = limit


class AlphabetMismatch(ValueError):
    pass


_RESERVED = set(" \t\r\n|*+?()/;,:#{}")


class Alphabet:
    """An ordered set of letter names.

    The declaration order is the letter order used for every
    shortest-lexicographic witness and for symmetry breaking.
    """

    __slots__ = ("letters", "_index")

    def __init__(self, letters: Iterable[str]):
        letters = tuple(letters)
        if not letters:
            raise ValueError("alphabet must not be empty")
        if len(set(letters)) != len(letters):
            raise ValueError(f"duplicate letters in {letters}")
        self.letters = letters
        self._index = {a: i for i, a in enumerate(letters)}

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(range(len(self.letters)))

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __repr__(self) -> str:
        return f"Alphabet({list(self.letters)})"

    def index(self, letter: str) -> int:
        try:
            return self._index[letter]
        except KeyError:
            raise KeyError(f"unknown letter {letter!r}") from None

    def name(self, i: int) -> str:
        return self.letters[i]

    def word(self, letters: Iterable[str]) -> Word:
        return tuple(self.index(a) for a in letters)

    def tokenize(self, text: str) -> Word:
        """Split ``text`` into letters by longest match (whitespace ignored)."""
        names = sorted(self.letters, key=len, reverse=True)
        out = []
        i = 0
        while i < len(text):
            if text[i].isspace():
                i += 1
                continue
            for nm in names:
                if text.startswith(nm, i):
                    out.append(self._index[nm])
                    i += len(nm)
                    break
            else:
                raise KeyError(f"cannot tokenize {text!r} at offset {i}")
        return tuple(out)

    def show(self, word: Sequence[int], sep: str = "") -> str:
        return sep.join(self.letters[a] for a in word)

    @property
    def base(self) -> "Alphabet":
        return self

    @property
    def tracks(self) -> int:
        return 1

    def pairs(self) -> "TrackAlphabet":
        return TrackAlphabet(self, 2)


class TrackAlphabet(Alphabet):
    """Tuples of base letters, fused into one index (most significant first)."""

    __slots__ = ("base_alphabet", "k")
    _cache: dict = {}

    def __new__(cls, base: Alphabet, k: int):
        key = (base.letters, k)
        hit = cls._cache.get(key)
        if hit is not None:
            return hit
        self = super().__new__(cls)
        cls._cache[key] = self
        return self

    def __init__(self, base: Alphabet, k: int):
        if getattr(self, "k", None) == k:
            return
        if isinstance(base, TrackAlphabet):
            raise ValueError("track alphabets must be built over a base alphabet")
        if k < 2:
            raise ValueError("a track alphabet needs at least two tracks")
        combos = itertools.product(base.letters, repeat=k)
        super().__init__("/".join(c) for c in combos)
        self.base_alphabet = base
        self.k = k

    @property
    def base(self) -> Alphabet:
        return self.base_alphabet

    @property
    def tracks(self) -> int:
        return self.k

    def encode(self, *parts: int) -> int:
        K = len(self.base_alphabet)
        idx = 0
        for p in parts:
            idx = idx * K + p
        return idx

    def decode(self, idx: int) -> tuple:
        K = len(self.base_alphabet)
        out = []
        for _ in range(self.k):
            out.append(idx % K)
            idx //= K
        return tuple(reversed(out))

    def convolve(self, *words: Sequence[int]) -> Word:
        """Return ``w1 ⊗ w2 ⊗ ...`` (all words must have equal length)."""
        if len({len(w) for w in words}) > 1:
            raise ValueError("convolution needs words of equal length")
        return tuple(self.encode(*col) for col in zip(*words))

    def split(self, word: Sequence[int]) -> tuple:
        cols = [self.decode(a) for a in word]
        return tuple(tuple(c[t] for c in cols) for t in range(self.k))


def _check_same(a: Alphabet, b: Alphabet) -> None:
    if a != b:
        raise AlphabetMismatch(f"{a!r} vs {b!r}")


# ---------------------------------------------------------------------------
# automata


class Nfa:
    """Nondeterministic automaton; ``delta[q]`` maps a letter to a frozenset."""

    __slots__ = ("alphabet", "n", "initial", "delta", "accepting")

    def __init__(self, alphabet: Alphabet, n: int, initial, delta, accepting):
        self.alphabet = alphabet
        self.n = n
        self.initial = frozenset(initial)
        self.delta = tuple(delta)
        self.accepting = frozenset(accepting)
        if len(self.delta) != n:
            raise ValueError("delta must list every state")
        for q in self.initial | self.accepting:
            if not 0 <= q < n:
                raise ValueError(f"state {q} out of range")

    @classmethod
    def build(cls, alphabet, n, initial, transitions, accepting) -> "Nfa":
        delta = [dict() for _ in range(n)]
        for q, a, r in transitions:
            if not (0 <= q < n and 0 <= r < n):
                raise ValueError(f"transition ({q}, {a}, {r}) out of range")
            delta[q].setdefault(a, set()).add(r)
        delta = [{a: frozenset(s) for a, s in d.items()} for d in delta]
        return cls(alphabet, n, initial, delta, accepting)

    def to_nfa(self) -> "Nfa":
        return self

    def transitions(self) -> Iterator[tuple]:
        for q in range(self.n):
            for a in sorted(self.delta[q]):
                for r in sorted(self.delta[q][a]):
                    yield q, a, r

    def accepts(self, word: Sequence[int]) -> bool:
        cur = self.initial
        for a in word:
            cur = frozenset(r for q in cur for r in self.delta[q].get(a, ()))
            if not cur:
                return False
        return bool(cur & self.accepting)

    def __repr__(self) -> str:
        return f"<Nfa {self.n} states over {len(self.alphabet)} letters>"


class Dfa:
    """Partial deterministic automaton; ``delta[q]`` maps a letter to a state."""

    __slots__ = ("alphabet", "n", "initial", "delta", "accepting")

    def __init__(self, alphabet: Alphabet, n: int, initial: int, delta, accepting):
        self.alphabet = alphabet
        self.n = n
        self.initial = initial
        self.delta = tuple(delta)
        self.accepting = frozenset(accepting)
        if len(self.delta) != n or not 0 <= initial < n:
            raise ValueError("malformed DFA")

    @classmethod
    def build(cls, alphabet, n, initial, transitions, accepting) -> "Dfa":
        delta = [dict() for _ in range(n)]
        for q, a, r in transitions:
            if not (0 <= q < n and 0 <= r < n):
                raise ValueError(f"transition ({q}, {a}, {r}) out of range")
            if delta[q].get(a, r) != r:
                raise ValueError(f"nondeterministic transition at ({q}, {a})")
            delta[q][a] = r
        return cls(alphabet, n, initial, delta, accepting)

    @classmethod
    def empty(cls, alphabet: Alphabet) -> "Dfa":
        return cls(alphabet, 1, 0, [{}], ())

    @classmethod
    def universal(cls, alphabet: Alphabet) -> "Dfa":
        return cls(alphabet, 1, 0, [{a: 0 for a in alphabet}], (0,))

    def to_nfa(self) -> Nfa:
        delta = [{a: frozenset((r,)) for a, r in d.items()} for d in self.delta]
        return Nfa(self.alphabet, self.n, (self.initial,), delta, self.accepting)

    def transitions(self) -> Iterator[tuple]:
        for q in range(self.n):
            for a in sorted(self.delta[q]):
                yield q, a, self.delta[q][a]

    def run(self, word: Sequence[int], start: int | None = None):
        q = self.initial if start is None else start
        for a in word:
            q = self.delta[q].get(a)
            if q is None:
                return None
        return q

    def accepts(self, word: Sequence[int]) -> bool:
        q = self.run(word)
        return q is not None and q in self.accepting

    def structure(self) -> tuple:
        """Hashable structural key; equal keys mean identical automata."""
        return (self.alphabet.letters, self.n, self.initial,
                tuple(tuple(sorted(d.items())) for d in self.delta),
                tuple(sorted(self.accepting)))

    def __repr__(self) -> str:
        return f"<Dfa {self.n} states over {len(self.alphabet)} letters>"


Automaton = Nfa | Dfa


def as_nfa(a: Automaton) -> Nfa:
    return a.to_nfa()


def from_words(alphabet: Alphabet, words: Iterable[Sequence[int]]) -> Dfa:
    """Minimal DFA for a finite set of words (a trie, then minimized)."""
    delta: list[dict] = [{}]
    acc = set()
    for w in words:
        q = 0
        for a in w:
            nxt = delta[q].get(a)
            if nxt is None:
                nxt = len(delta)
                delta.append({})
                delta[q][a] = nxt
            q = nxt
        acc.add(q)
    return minimize(Dfa(alphabet, len(delta), 0, delta, acc))


# ---------------------------------------------------------------------------
# determinization and minimization


def determinize(a: Automaton, limit: int = DEFAULT_STATE_LIMIT) -> Dfa:
    """Subset construction over reachable subsets (empty subset omitted)."""
    if isinstance(a, Dfa):
        return a
    start = a.initial
    index = {start: 0}
    order = [start]
    delta: list[dict] = []
    i = 0
    while i < len(order):
        cur = order[i]
        i += 1
        moves: dict[int, set] = {}
        for q in cur:
            for x, rs in a.delta[q].items():
                moves.setdefault(x, set()).update(rs)
        row = {}
        for x in sorted(moves):
            nxt = frozenset(moves[x])
            j = index.get(nxt)
            if j is None:
                j = len(order)
                if j >= limit:
                    raise AutomatonLimit("determinize", limit)
                index[nxt] = j
                order.append(nxt)
            row[x] = j
        delta.append(row)
    acc = [j for j, s in enumerate(order) if s & a.accepting]
    return Dfa(a.alphabet, len(order), 0, delta, acc)


def _trim_states(n, initial, delta, accepting) -> set:
    fwd = set(initial)
    stack = list(initial)
    while stack:
        q = stack.pop()
        for r in _succ(delta[q]):
            if r not in fwd:
                fwd.add(r)
                stack.append(r)
    back: dict[int, set] = {}
    for q in fwd:
        for r in _succ(delta[q]):
            back.setdefault(r, set()).add(q)
    live = {q for q in accepting if q in fwd}
    stack = list(live)
    while stack:
        r = stack.pop()
        for q in back.get(r, ()):
            if q not in live:
                live.add(q)
                stack.append(q)
    return live


def _succ(row) -> Iterable[int]:
    for v in row.values():
        if isinstance(v, int):
            yield v
        else:
            yield from v


def trim(a: Automaton) -> Automaton:
    """Drop states that are unreachable or cannot reach acceptance."""
    if isinstance(a, Dfa):
        live = _trim_states(a.n, (a.initial,), a.delta, a.accepting)
        if a.initial not in live:
            return Dfa.empty(a.alphabet)
        keep = sorted(live, key=lambda q: (q != a.initial, q))
        ren = {q: i for i, q in enumerate(keep)}
        delta = [{x: ren[r] for x, r in a.delta[q].items() if r in ren} for q in keep]
        return Dfa(a.alphabet, len(keep), 0, delta, [ren[q] for q in a.accepting if q in ren])
    live = _trim_states(a.n, a.initial, a.delta, a.accepting)
    keep = sorted(live)
    ren = {q: i for i, q in enumerate(keep)}
    delta = []
    for q in keep:
        row = {}
        for x, rs in a.delta[q].items():
            rs2 = frozenset(ren[r] for r in rs if r in ren)
            if rs2:
                row[x] = rs2
        delta.append(row)
    return Nfa(a.alphabet, len(keep), [ren[q] for q in a.initial if q in ren], delta,
               [ren[q] for q in a.accepting if q in ren])


def minimize(a: Automaton, limit: int = DEFAULT_STATE_LIMIT) -> Dfa:
    """Minimal trim partial DFA, states numbered in breadth-first letter order.

    Two language-equal automata minimize to structurally identical DFAs.
    """
    d = trim(determinize(a, limit))
    if not d.accepting:
        return Dfa.empty(d.alphabet)
    # Moore refinement; missing transitions go to an implicit dead class -1
    cls = [1 if q in d.accepting else 0 for q in range(d.n)]
    count = len(set(cls))
    while True:
        sigs = {}
        new = []
        for q in range(d.n):
            sig = (cls[q], tuple(sorted((x, cls[r]) for x, r in d.delta[q].items())))
            new.append(sigs.setdefault(sig, len(sigs)))
        if len(sigs) == count:
            break
        cls, count = new, len(sigs)
    # canonical numbering by BFS from the initial class
    rep = {}
    for q in range(d.n):
        rep.setdefault(cls[q], q)
    order = {cls[d.initial]: 0}
    queue = deque([cls[d.initial]])
    delta = []
    while queue:
        c = queue.popleft()
        q = rep[c]
        row = {}
        for x in sorted(d.delta[q]):
            c2 = cls[d.delta[q][x]]
            if c2 not in order:
                order[c2] = len(order)
                queue.append(c2)
            row[x] = order[c2]
        delta.append(row)
    acc = {order[cls[q]] for q in d.accepting}
    return Dfa(d.alphabet, len(order), 0, delta, acc)


def isomorphic(a: Dfa, b: Dfa) -> bool:
    return minimize(a).structure() == minimize(b).structure()


# ---------------------------------------------------------------------------
# witnesses


def shortest_word(a: Automaton) -> Word | None:
    """Shortest accepted word, least in letter order among the shortest.

    Returns ``None`` iff the language is empty.
    """
    n = as_nfa(a)
    # backward distances to acceptance
    back: dict[int, list] = {}
    for q in range(n.n):
        for x, rs in n.delta[q].items():
            for r in rs:
                back.setdefault(r, []).append(q)
    dist = {q: 0 for q in n.accepting}
    queue = deque(n.accepting)
    while queue:
        r = queue.popleft()
        for q in back.get(r, ()):
            if q not in dist:
                dist[q] = dist[r] + 1
                queue.append(q)
    starts = [q for q in n.initial if q in dist]
    if not starts:
        return None
    length = min(dist[q] for q in starts)
    cur = {q for q in starts if dist[q] == length}
    word = []
    for remaining in range(length, 0, -1):
        best = None
        nxt: set = set()
        for q in cur:
            for x, rs in n.delta[q].items():
                if best is not None and x > best:
                    continue
                good = [r for r in rs if dist.get(r) == remaining - 1]
                if not good:
                    continue
                if best is None or x < best:
                    best, nxt = x, set(good)
                else:
                    nxt.update(good)
        word.append(best)
        cur = nxt
    return tuple(word)


def is_empty(a: Automaton) -> Word | None:
    """``None`` when the language is empty, else its shortest-lex word."""
    return shortest_word(a)


def search(start: Hashable | None, step: Callable, accepting: Callable,
           letters: Callable, limit: int = DEFAULT_STATE_LIMIT,
           operation: str = "search") -> Word | None:
    """Breadth-first search of an implicit deterministic automaton.

    ``letters(s)`` yields candidate letters in ascending order and
    ``step(s, x)`` returns the successor or ``None``.  Returns the
    shortest-lex accepted word, or ``None``.
    """
    if start is None:
        return None
    if accepting(start):
        return ()
    parent = {start: None}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for x in letters(s):
            t = step(s, x)
            if t is None or t in parent:
                continue
            parent[t] = (s, x)
            if accepting(t):
                word = []
                while parent[t] is not None:
                    t, y = parent[t]
                    word.append(y)
                return tuple(reversed(word))
            if len(parent) > limit:
                raise AutomatonLimit(operation, limit)
            queue.append(t)
    return None


# ---------------------------------------------------------------------------
# boolean operations


def _product(a: Nfa, b: Nfa, accept: Callable[[bool, bool], bool], complete: bool,
             limit: int) -> Nfa:
    """Reachable product; with ``complete`` missing moves go to sink ``None``."""
    _check_same(a.alphabet, b.alphabet)
    starts = [(p, q) for p in a.initial for q in b.initial]
    if complete:
        if not a.initial:
            starts += [(None, q) for q in b.initial]
        if not b.initial:
            starts += [(p, None) for p in a.initial]
        if not a.initial and not b.initial:
            starts = []
    index = {s: i for i, s in enumerate(starts)}
    order = list(starts)
    delta = []
    i = 0
    while i < len(order):
        p, q = order[i]
        i += 1
        da = a.delta[p] if p is not None else {}
        db = b.delta[q] if q is not None else {}
        keys = set(da) | set(db) if complete else set(da) & set(db)
        row = {}
        for x in keys:
            ra = da.get(x) or ((None,) if complete else ())
            rb = db.get(x) or ((None,) if complete else ())
            targets = set()
            for r1 in ra:
                for r2 in rb:
                    if r1 is None and r2 is None:
                        continue
                    s = (r1, r2)
                    j = index.get(s)
                    if j is None:
                        j = len(order)
                        if j >= limit:
                            raise AutomatonLimit("product", limit)
                        index[s] = j
                        order.append(s)
                    targets.add(j)
            if targets:
                row[x] = frozenset(targets)
        delta.append(row)
    acc = [i for i, (p, q) in enumerate(order)
           if accept(p is not None and p in a.accepting, q is not None and q in b.accepting)]
    return Nfa(a.alphabet, len(order), range(len(starts)), delta, acc)


def intersect(a: Automaton, b: Automaton, limit: int = DEFAULT_STATE_LIMIT) -> Nfa:
    return _product(as_nfa(a), as_nfa(b), lambda x, y: x and y, False, limit)


def union(a: Automaton, b: Automaton) -> Nfa:
    _check_same(a.alphabet, b.alphabet)
    a, b = as_nfa(a), as_nfa(b)
    off = a.n
    delta = list(a.delta) + [{x: frozenset(r + off for r in rs) for x, rs in d.items()}
                             for d in b.delta]
    return Nfa(a.alphabet, a.n + b.n, set(a.initial) | {q + off for q in b.initial}, delta,
               set(a.accepting) | {q + off for q in b.accepting})


def complement(d: Dfa, universe: Automaton | None = None) -> Dfa:
    """Words of ``universe`` (default: all words) that ``d`` rejects."""
    if not isinstance(d, Dfa):
        raise TypeError("complement needs a deterministic automaton")
    if universe is None:
        universe = Dfa.universal(d.alphabet)
    return minimize(difference(universe, d))


def difference(a: Automaton, b: Automaton, limit: int = DEFAULT_STATE_LIMIT) -> Nfa:
    """L(a) minus L(b); ``b`` is determinized first."""
    db = determinize(b, limit)
    return _product(as_nfa(a), db.to_nfa(), lambda x, y: x and not y, True, limit)


def includes(a: Automaton, b: Automaton, limit: int = DEFAULT_STATE_LIMIT) -> Word | None:
    """Check L(b) ⊆ L(a).  Returns ``None`` if so, else the shortest-lex word of L(b) \\ L(a)."""
    return shortest_word(difference(b, a, limit))


def equivalent(a: Automaton, b: Automaton) -> Word | None:
    """``None`` if the languages agree, else a shortest-lex distinguishing word."""
    w1 = includes(a, b)
    w2 = includes(b, a)
    cands = [w for w in (w1, w2) if w is not None]
    return min(cands, key=lambda w: (len(w), w)) if cands else None


def concat(a: Automaton, b: Automaton) -> Nfa:
    _check_same(a.alphabet, b.alphabet)
    a, b = as_nfa(a), as_nfa(b)
    off = a.n
    delta = []
    for q in range(a.n):
        row = {x: set(rs) for x, rs in a.delta[q].items()}
        for x, rs in a.delta[q].items():
            if rs & a.accepting:
                row[x] |= {p + off for p in b.initial}
        delta.append({x: frozenset(s) for x, s in row.items()})
    delta += [{x: frozenset(r + off for r in rs) for x, rs in d.items()} for d in b.delta]
    init = set(a.initial)
    if a.initial & a.accepting:
        init |= {p + off for p in b.initial}
    return Nfa(a.alphabet, a.n + b.n, init, delta, {q + off for q in b.accepting})


def length_exactly(alphabet: Alphabet, n: int) -> Dfa:
    delta = [{x: q + 1 for x in alphabet} for q in range(n)] + [{}]
    return Dfa(alphabet, n + 1, 0, delta, (n,))


def length_at_most(alphabet: Alphabet, n: int) -> Dfa:
    delta = [{x: q + 1 for x in alphabet} for q in range(n)] + [{}]
    return Dfa(alphabet, n + 1, 0, delta, range(n + 1))


# ---------------------------------------------------------------------------
# transducers


def _pairs(t: Automaton) -> TrackAlphabet:
    al = t.alphabet
    if not isinstance(al, TrackAlphabet) or al.k != 2:
        raise AlphabetMismatch("expected a two-track transducer")
    return al


def identity(alphabet: Alphabet, letters: Iterable[int] | None = None) -> Dfa:
    pa = alphabet.pairs()
    xs = alphabet if letters is None else letters
    return Dfa(pa, 1, 0, [{pa.encode(x, x): 0 for x in xs}], (0,))


def relation_of(domain: Automaton, codomain: Automaton) -> Nfa:
    """The product relation ``domain × codomain`` restricted to equal lengths."""
    d, c = as_nfa(domain), as_nfa(codomain)
    _check_same(d.alphabet, c.alphabet)
    pa = d.alphabet.pairs()
    return _join(pa, [(d, (0,)), (c, (1,))])


def _join(alphabet: TrackAlphabet, parts: list, limit: int = DEFAULT_STATE_LIMIT) -> Nfa:
    """Synchronous product of automata reading given tracks of a k-track word.

    ``parts`` is a list of ``(automaton, tracks)``; a component over a base
    alphabet reads one track, a transducer reads two tracks, etc.
    """
    K = len(alphabet.base)
    k = alphabet.k
    nfas = [(as_nfa(a), tr) for a, tr in parts]
    decoders = []
    for a, tr in nfas:
        if a.alphabet.tracks != len(tr):
            raise AlphabetMismatch("track count does not match component alphabet")
        decoders.append(a.alphabet.decode if a.alphabet.tracks > 1 else (lambda x: (x,)))
    starts = list(itertools.product(*[sorted(a.initial) for a, _ in nfas]))
    index = {s: i for i, s in enumerate(starts)}
    order = list(starts)
    delta = []
    i = 0
    while i < len(order):
        state = order[i]
        i += 1
        row: dict[int, set] = {}

        def extend(ci, assign, targets):
            if ci == len(nfas):
                free = [t for t in range(k) if assign[t] is None]
                for fill in itertools.product(range(K), repeat=len(free)):
                    full = list(assign)
                    for t, v in zip(free, fill):
                        full[t] = v
                    letter = alphabet.encode(*full)
                    for combo in itertools.product(*targets):
                        row.setdefault(letter, set()).add(combo)
                return
            a, tr = nfas[ci]
            for x, rs in a.delta[state[ci]].items():
                vals = decoders[ci](x)
                new = list(assign)
                ok = True
                for t, v in zip(tr, vals):
                    if new[t] is None:
                        new[t] = v
                    elif new[t] != v:
                        ok = False
                        break
                if ok:
                    extend(ci + 1, new, targets + [sorted(rs)])

        extend(0, [None] * k, [])
        out = {}
        for letter, combos in row.items():
            ts = set()
            for s in combos:
                j = index.get(s)
                if j is None:
                    j = len(order)
                    if j >= limit:
                        raise AutomatonLimit("join", limit)
                    index[s] = j
                    order.append(s)
                ts.add(j)
            out[letter] = frozenset(ts)
        delta.append(out)
    acc = [i for i, s in enumerate(order)
           if all(q in a.accepting for q, (a, _) in zip(s, nfas))]
    return Nfa(alphabet, len(order), range(len(starts)), delta, acc)


def cylindrify(a: Automaton, tracks: Sequence[int], k: int) -> Nfa:
    """Lift ``a`` to a k-track automaton reading ``tracks``; other tracks are free."""
    base = a.alphabet.base
    return _join(TrackAlphabet(base, k), [(a, tuple(tracks))])


def project(t: Automaton, track: int) -> Nfa:
    """Existentially remove ``track`` from a multi-track automaton."""
    al = t.alphabet
    if not isinstance(al, TrackAlphabet) or not 0 <= track < al.k:
        raise ValueError(f"cannot project track {track}")
    target = al.base if al.k == 2 else TrackAlphabet(al.base, al.k - 1)
    n = as_nfa(t)
    delta = []
    for q in range(n.n):
        row: dict[int, set] = {}
        for x, rs in n.delta[q].items():
            parts = list(al.decode(x))
            del parts[track]
            y = parts[0] if al.k == 2 else target.encode(*parts)
            row.setdefault(y, set()).update(rs)
        delta.append({y: frozenset(s) for y, s in row.items()})
    return Nfa(target, n.n, n.initial, delta, n.accepting)


def inverse(t: Automaton) -> Nfa:
    pa = _pairs(t)
    n = as_nfa(t)
    delta = []
    for q in range(n.n):
        row = {}
        for x, rs in n.delta[q].items():
            a, b = pa.decode(x)
            row[pa.encode(b, a)] = rs
        delta.append(row)
    return Nfa(pa, n.n, n.initial, delta, n.accepting)


def apply(t: Automaton, s: Automaton, limit: int = DEFAULT_STATE_LIMIT) -> Nfa:
    """Post-image ``{y : exists x in s, (x, y) in t}``."""
    pa = _pairs(t)
    _check_same(pa.base, s.alphabet)
    tn, sn = as_nfa(t), as_nfa(s)
    K = len(pa.base)
    starts = [(p, q) for p in sorted(tn.initial) for q in sorted(sn.initial)]
    index = {st: i for i, st in enumerate(starts)}
    order = list(starts)
    delta = []
    i = 0
    while i < len(order):
        p, q = order[i]
        i += 1
        row: dict[int, set] = {}
        dq = sn.delta[q]
        for x, rs in tn.delta[p].items():
            a, b = divmod(x, K)
            ss = dq.get(a)
            if not ss:
                continue
            for r1 in rs:
                for r2 in ss:
                    st = (r1, r2)
                    j = index.get(st)
                    if j is None:
                        j = len(order)
                        if j >= limit:
                            raise AutomatonLimit("apply", limit)
                        index[st] = j
                        order.append(st)
                    row.setdefault(b, set()).add(j)
        delta.append({b: frozenset(v) for b, v in row.items()})
    acc = [i for i, (p, q) in enumerate(order) if p in tn.accepting and q in sn.accepting]
    return trim(Nfa(pa.base, len(order), range(len(starts)), delta, acc))


def preimage(t: Automaton, s: Automaton) -> Nfa:
    return apply(inverse(t), s)


def domain(t: Automaton) -> Nfa:
    return project(t, 1)


def range_of(t: Automaton) -> Nfa:
    return project(t, 0)


def compose(r1: Automaton, r2: Automaton, limit: int = DEFAULT_STATE_LIMIT) -> Nfa:
    """Relation composition: x⊗z accepted iff some y has (x,y) in r1 and (y,z) in r2."""
    pa = _pairs(r1)
    _check_same(pa, _pairs(r2))
    K = len(pa.base)
    n1, n2 = as_nfa(r1), as_nfa(r2)
    # r2 transitions indexed by their first track
    by_first = []
    for q in range(n2.n):
        m: dict[int, list] = {}
        for x, rs in n2.delta[q].items():
            b, c = divmod(x, K)
            m.setdefault(b, []).append((c, rs))
        by_first.append(m)
    starts = [(p, q) for p in sorted(n1.initial) for q in sorted(n2.initial)]
    index = {st: i for i, st in enumerate(starts)}
    order = list(starts)
    delta = []
    i = 0
    while i < len(order):
        p, q = order[i]
        i += 1
        row: dict[int, set] = {}
        for x, rs in n1.delta[p].items():
            a, b = divmod(x, K)
            for c, rs2 in by_first[q].get(b, ()):
                letter = a * K + c
                for s1 in rs:
                    for s2 in rs2:
                        st = (s1, s2)
                        j = index.get(st)
                        if j is None:
                            j = len(order)
                            if j >= limit:
                                raise AutomatonLimit("compose", limit)
                            index[st] = j
                            order.append(st)
                        row.setdefault(letter, set()).add(j)
        delta.append({x: frozenset(v) for x, v in row.items()})
    acc = [i for i, (p, q) in enumerate(order) if p in n1.accepting and q in n2.accepting]
    return trim(Nfa(pa, len(order), range(len(starts)), delta, acc))


def image_of_word(t: Automaton, word: Sequence[int]) -> Dfa:
    """Minimal DFA of ``{w : word -> w}`` under transducer ``t``."""
    pa = _pairs(t)
    return minimize(apply(t, from_words(pa.base, [tuple(word)])))


# ---------------------------------------------------------------------------
# rotations


def rotate_once(s: Automaton) -> Nfa:
    """``{u2 ... un u1 : u1 ... un in L}`` (the empty word maps to itself)."""
    n = as_nfa(s)
    al = n.alphabet
    # states (a, q): first letter a still owed at the end; END accepts
    index: dict = {}
    order: list = []

    def sid(st):
        j = index.get(st)
        if j is None:
            j = len(order)
            index[st] = j
            order.append(st)
        return j

    end = sid("END")
    starts = set()
    for q0 in n.initial:
        for a, rs in n.delta[q0].items():
            for r in rs:
                starts.add(sid((a, r)))
    delta_map: dict[int, dict] = {end: {}}
    i = 1
    while i < len(order):
        a, q = order[i]
        row: dict[int, set] = {}
        for x, rs in n.delta[q].items():
            for r in rs:
                row.setdefault(x, set()).add(sid((a, r)))
        if q in n.accepting:
            row.setdefault(a, set()).add(end)
        delta_map[i] = row
        i += 1
    acc = {end}
    if n.initial & n.accepting:
        starts.add(sid("EPS"))
        acc.add(index["EPS"])
        delta_map[index["EPS"]] = {}
    delta = [{x: frozenset(v) for x, v in delta_map.get(j, {}).items()} for j in range(len(order))]
    return Nfa(al, len(order), starts, delta, acc)


def cyclic_shift_closure(s: Automaton) -> Dfa:
    """All rotations of all words: ``{v u : u v in L}``."""
    d = minimize(s)
    al = d.alphabet
    if not d.accepting:
        return d
    # for every pivot state p: L(p -> accept) . L(init -> p)
    index: dict = {}
    order: list = []

    def sid(st):
        j = index.get(st)
        if j is None:
            j = len(order)
            index[st] = j
            order.append(st)
        return j

    starts = set()
    for p in range(d.n):
        starts.add(sid((p, 0, p)))
        if p in d.accepting:
            starts.add(sid((p, 1, d.initial)))
    rows: list = []
    i = 0
    while i < len(order):
        p, phase, q = order[i]
        row: dict[int, set] = {}
        for x, r in d.delta[q].items():
            row.setdefault(x, set()).add(sid((p, phase, r)))
            if phase == 0 and r in d.accepting:
                row[x].add(sid((p, 1, d.initial)))
        rows.append(row)
        i += 1
    acc = set()
    for j, (p, phase, q) in enumerate(order):
        if phase == 1 and q == p:
            acc.add(j)
        if phase == 0 and q in d.accepting and p == d.initial:
            acc.add(j)
    delta = [{x: frozenset(v) for x, v in row.items()} for row in rows]
    return minimize(Nfa(al, len(order), starts, delta, acc))


# ---------------------------------------------------------------------------
# enumeration helpers


def words_of_length(a: Automaton, n: int) -> Iterator[Word]:
    """All accepted words of length ``n`` in lexicographic order."""
    d = minimize(a)
    live = [set() for _ in range(n + 1)]
    live[n] = set(d.accepting)
    for i in range(n - 1, -1, -1):
        live[i] = {q for q in range(d.n) if any(r in live[i + 1] for r in d.delta[q].values())}
    if d.initial not in live[0]:
        return

    def rec(q, i, pre):
        if i == n:
            yield tuple(pre)
            return
        for x in sorted(d.delta[q]):
            r = d.delta[q][x]
            if r in live[i + 1]:
                pre.append(x)
                yield from rec(r, i + 1, pre)
                pre.pop()

    yield from rec(d.initial, 0, [])


def all_words(alphabet: Alphabet, max_len: int) -> Iterator[Word]:
    for n in range(max_len + 1):
        yield from itertools.product(range(len(alphabet)), repeat=n)


# ---------------------------------------------------------------------------
# textual dump


def dump(d: Automaton) -> str:
    """Text form: header, sorted transitions, ``init``, ``accept``."""
    d = determinize(d) if not isinstance(d, Dfa) else d
    al = d.alphabet
    lines = [f"dfa {d.n} {','.join(al.letters)}"]
    for q, a, r in d.transitions():
        lines.append(f"{q} {al.letters[a]} {r}")
    lines.append(f"init {d.initial}")
    lines.append(" ".join(["accept"] + [str(q) for q in sorted(d.accepting)]))
    return "\n".join(lines) + "\n"


def parse_dump(text: str | Iterable[str]) -> Dfa:
    lines = text.splitlines() if isinstance(text, str) else list(text)
    lines = [ln.strip() for ln in lines if ln.strip()]
    head = lines[0].split()
    if len(head) != 3 or head[0] != "dfa":
        raise ValueError(f"bad automaton header: {lines[0]!r}")
    n = int(head[1])
    letters = head[2].split(",")
    if all("/" in x for x in letters):
        parts = [x.split("/") for x in letters]
        k = len(parts[0])
        base_letters = []
        for p in parts:
            if p[-1] not in base_letters:
                base_letters.append(p[-1])
        al: Alphabet = TrackAlphabet(Alphabet(base_letters), k)
        if al.letters != tuple(letters):
            raise ValueError("pair alphabet is not a full product in canonical order")
    else:
        al = Alphabet(letters)
    trans = []
    init = None
    acc: list = []
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] == "init":
            init = int(parts[1])
        elif parts[0] == "accept":
            acc = [int(x) for x in parts[1:]]
            break
        else:
            q, a, r = parts
            trans.append((int(q), al.index(a), int(r)))
    if init is None:
        raise ValueError("automaton dump lacks an init line")
    return Dfa.build(al, n, init, trans, acc)
