"""Explicit-state ground truth for one configuration length.

The instance of length ``n`` is enumerated exactly: configurations are the
words of ``S`` of that length, edges come from the transducers.  On top of
it sit the game attractor, breadth-first reachability and a value-iteration
check of the Markov decision process obtained by letting player 2 move at
random.
"""

from __future__ import annotations

import threading
import weakref
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import automata as fa
from . import kernels
from .automata import Dfa
from .model import GameInstance

DEFAULT_CAP = 2_000_000


class CapExceeded(RuntimeError):
    def __init__(self, n: int, count: int, cap: int):
        super().__init__(f"length {n}: {count} configurations exceed the cap of {cap}")
        self.n = n
        self.count = count
        self.cap = cap


def count_words(d: Dfa, n: int) -> int:
    counts = {d.initial: 1}
    for _ in range(n):
        nxt: dict = {}
        for q, c in counts.items():
            for r in d.delta[q].values():
                nxt[r] = nxt.get(r, 0) + c
        counts = nxt
    return sum(c for q, c in counts.items() if q in d.accepting)


def enumerate_codes(d: Dfa, n: int, K: int) -> np.ndarray:
    """Sorted base-K codes of all words of length ``n`` accepted by ``d``."""
    groups = {d.initial: np.zeros(1, dtype=np.int64)}
    for _ in range(n):
        nxt: dict = {}
        for q, codes in groups.items():
            for a, r in d.delta[q].items():
                nxt.setdefault(r, []).append(codes * K + a)
        groups = {r: np.concatenate(v) for r, v in nxt.items()}
    parts = [c for q, c in groups.items() if q in d.accepting]
    if not parts:
        return np.zeros(0, dtype=np.int64)
    return np.sort(np.concatenate(parts))


def decode_codes(codes: np.ndarray, n: int, K: int) -> np.ndarray:
    out = np.zeros((len(codes), n), dtype=np.uint8)
    c = codes.copy()
    for i in range(n - 1, -1, -1):
        out[:, i] = c % K
        c //= K
    return out


def encode_word(word, K: int) -> int:
    code = 0
    for a in word:
        code = code * K + a
    return code


def transducer_table(t: Dfa, K: int) -> np.ndarray:
    table = np.full((t.n, K, K), -1, dtype=np.int32)
    for q in range(t.n):
        for x, r in t.delta[q].items():
            table[q, x // K, x % K] = r
    return table


def _accept_vector(d: Dfa) -> np.ndarray:
    v = np.zeros(d.n, dtype=np.uint8)
    for q in d.accepting:
        v[q] = 1
    return v


def _member(d: Dfa, words: np.ndarray) -> np.ndarray:
    """Vectorised membership of every row of ``words``."""
    N, n = words.shape
    table = np.full((d.n + 1, len(d.alphabet)), d.n, dtype=np.int64)
    for q in range(d.n):
        for a, r in d.delta[q].items():
            table[q, a] = r
    state = np.full(N, d.initial, dtype=np.int64)
    for i in range(n):
        state = table[state, words[:, i]]
    acc = np.zeros(d.n + 1, dtype=bool)
    acc[list(d.accepting)] = True
    return acc[state]


def _reverse(indptr, idx, N):
    src = np.repeat(np.arange(N, dtype=np.int64), np.diff(indptr))
    order = np.argsort(idx, kind="stable")
    pred_idx = src[order]
    pred_ptr = np.zeros(N + 1, dtype=np.int64)
    np.cumsum(np.bincount(idx, minlength=N), out=pred_ptr[1:])
    return pred_ptr, pred_idx


@dataclass(eq=False)
class ExplicitInstance:
    """One finite arena: configurations of length ``n`` and both move relations."""

    n: int
    K: int
    codes: np.ndarray          # sorted word codes, the configuration index
    words: np.ndarray          # (N, n) letter matrix
    succ1: tuple               # (indptr, idx) for ->1
    succ2: tuple               # (indptr, idx) for ->2
    owner: np.ndarray          # 1 or 2
    initial: np.ndarray        # bool
    final: np.ndarray          # bool

    @property
    def size(self) -> int:
        return len(self.codes)

    def index(self, word) -> int | None:
        if len(word) != self.n:
            return None
        c = encode_word(word, self.K)
        i = int(np.searchsorted(self.codes, c))
        if i < len(self.codes) and self.codes[i] == c:
            return i
        return None

    def word(self, i: int) -> tuple:
        return tuple(int(a) for a in self.words[i])

    def successors(self, i: int, player: int | None = None) -> list:
        out = []
        for pl, (ip, ix) in ((1, self.succ1), (2, self.succ2)):
            if player in (None, pl):
                out.extend(int(j) for j in ix[ip[i]:ip[i + 1]])
        return out

    def combined(self) -> tuple:
        """CSR of ->1 union ->2 (each node has edges of one relation only, by A0)."""
        cached = getattr(self, "_combined", None)
        if cached is None:
            N = self.size
            ip1, ix1 = self.succ1
            ip2, ix2 = self.succ2
            deg = np.diff(ip1) + np.diff(ip2)
            indptr = np.zeros(N + 1, dtype=np.int64)
            np.cumsum(deg, out=indptr[1:])
            idx = np.empty(indptr[-1], dtype=np.int64)
            # interleave: edges of ->1 first, then ->2, per node
            pos1 = np.repeat(indptr[:-1], np.diff(ip1)) + (
                np.arange(len(ix1)) - np.repeat(ip1[:-1], np.diff(ip1)))
            idx[pos1] = ix1
            off2 = indptr[:-1] + np.diff(ip1)
            pos2 = np.repeat(off2, np.diff(ip2)) + (
                np.arange(len(ix2)) - np.repeat(ip2[:-1], np.diff(ip2)))
            idx[pos2] = ix2
            pred = _reverse(indptr, idx, N)
            cached = (indptr, idx, pred[0], pred[1])
            self._combined = cached
        return cached


def _edges(g: GameInstance, player: int, words, codes, K):
    t = g.relation(player)
    ip, out = kernels.successors(words, transducer_table(t, K), _accept_vector(t), t.initial)
    idx = np.searchsorted(codes, out)
    if len(out):
        bad = (idx >= len(codes)) | (codes[np.minimum(idx, len(codes) - 1)] != out)
        if bad.any():
            raise ValueError("a move leaves the state space")
    return ip.astype(np.int64), idx.astype(np.int64)


def expand(g: GameInstance, n: int, cap: int = DEFAULT_CAP) -> ExplicitInstance:
    """Enumerate the arena of length ``n`` exactly."""
    K = len(g.alphabet)
    total = count_words(g.states, n)
    if total > cap:
        raise CapExceeded(n, total, cap)
    codes = enumerate_codes(g.states, n, K)
    words = decode_codes(codes, n, K)
    succ1 = _edges(g, 1, words, codes, K)
    succ2 = _edges(g, 2, words, codes, K)
    N = len(codes)
    owner = np.ones(N, dtype=np.uint8)
    owner[np.diff(succ2[0]) > 0] = 2
    owner[succ1[1]] = 2
    return ExplicitInstance(n, K, codes, words, succ1, succ2, owner,
                            _member(g.initial, words), _member(g.final, words))


def attractor(e: ExplicitInstance) -> np.ndarray:
    """Boolean mask of configurations from which player 2 forces ``F``."""
    ip, ix, pp, pi = e.combined()
    return kernels.attractor(ip, ix, pp, pi, e.owner, e.final.astype(np.uint8)).astype(bool)


def reachable_mask(e: ExplicitInstance) -> np.ndarray:
    ip, ix, _, _ = e.combined()
    allowed = np.ones(e.size, dtype=np.uint8)
    return kernels.bfs(ip, ix, e.initial.astype(np.uint8), allowed).astype(bool)


class Verdict(Enum):
    ALMOST_SURE = "almost-sure"
    NOT_ALMOST_SURE = "not-almost-sure"
    NOT_CONVERGED = "not-converged"


@dataclass
class MdpResult:
    values: np.ndarray
    verdict: list
    almost_sure: np.ndarray   # bool, meaningful only when converged
    confirmed: np.ndarray     # graph-level confirmation
    sweeps: int
    converged: bool
    conflicts: int            # numeric and graph verdicts disagree


def mdp_check(e: ExplicitInstance, p: float = 0.5, eps: float = 1e-9,
              max_iter: int = 200_000, tol: float = 1e-13) -> MdpResult:
    """Qualitative check of ``Pr_min(reach F) = 1`` per configuration.

    Numeric route: Gauss-Seidel value iteration for the minimal reachability
    probability.  Graph route: the configurations from which the scheduler
    can, with positive probability, enter a region it can keep away from
    ``F`` forever.  A configuration is almost-sure when its value is at
    least ``1 - eps`` and the graph route agrees.
    """
    ip, ix, pp, pi = e.combined()
    fin = e.final.astype(np.uint8)
    values, sweeps, converged = kernels.value_iteration(ip, ix, e.owner, fin, p, tol, max_iter)
    values = np.asarray(values)
    stuck = kernels.trap(ip, ix, pp, pi, e.owner, fin)
    # positive-probability reach of the trap along paths avoiding F
    allowed = (1 - fin).astype(np.uint8)
    doomed = kernels.bfs(pp, pi, stuck, allowed).astype(bool)
    confirmed = ~doomed
    numeric = values >= 1.0 - eps
    as_mask = numeric & confirmed
    conflicts = int(np.count_nonzero(numeric != confirmed))
    if converged:
        verdict = [Verdict.ALMOST_SURE if x else Verdict.NOT_ALMOST_SURE for x in as_mask]
    else:
        verdict = [Verdict.NOT_CONVERGED] * e.size
    return MdpResult(values, verdict, as_mask, confirmed, sweeps, bool(converged), conflicts)


def winning_everywhere_ahead(e: ExplicitInstance, win: np.ndarray) -> np.ndarray:
    """Per configuration: every configuration reachable along F-avoiding paths wins."""
    ip, ix, pp, pi = e.combined()
    losing = (~win).astype(np.uint8)
    allowed = (~e.final).astype(np.uint8)
    bad = kernels.bfs(pp, pi, losing, allowed).astype(bool)
    return ~bad


@dataclass
class Agreement:
    n: int
    configs: int
    reachable: int
    all_reachable_winning: bool
    literal_disagreements: int   # attractor vs almost-sure, reachable P1 configs
    ahead_disagreements: int     # almost-sure vs "winning everywhere ahead"
    converged: bool
    conflicts: int

    @property
    def mdp_agrees(self) -> bool:
        return self.converged and self.ahead_disagreements == 0


def agreement(g: GameInstance, n: int, cap: int = DEFAULT_CAP) -> Agreement:
    e = expand(g, n, cap)
    win = attractor(e)
    reach = reachable_mask(e)
    mdp = mdp_check(e)
    ahead = winning_everywhere_ahead(e, win)
    p1 = reach & (e.owner == 1)
    literal = int(np.count_nonzero((win != mdp.almost_sure) & p1))
    strong = int(np.count_nonzero((ahead != mdp.almost_sure) & p1))
    return Agreement(n, e.size, int(reach.sum()), bool(win[reach].all()), literal, strong,
                     mdp.converged, mdp.conflicts)


# ---------------------------------------------------------------------------
# memoised reachability


def symbolic_reachable(g: GameInstance, n: int) -> Dfa:
    """Fixpoint of post-images from ``I0`` restricted to length ``n``."""
    R = fa.minimize(fa.intersect(g.initial, fa.length_exactly(g.alphabet, n)))
    while True:
        nxt = fa.minimize(fa.union(R, fa.apply(g.moves, R)))
        if fa.equivalent(nxt, R) is None:
            return nxt
        R = nxt


class ReachabilityCache:
    """Per-game, per-length reachable sets behind a lock."""

    def __init__(self, cap: int = DEFAULT_CAP):
        self.cap = cap
        self._lock = threading.Lock()
        self._data: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()

    def instance(self, g: GameInstance, n: int) -> tuple:
        with self._lock:
            per = self._data.setdefault(g, {})
            hit = per.get(n)
            if hit is None:
                e = expand(g, n, self.cap)
                hit = (e, reachable_mask(e))
                per[n] = hit
            return hit

    def reachable(self, g: GameInstance, word) -> bool:
        try:
            e, mask = self.instance(g, len(word))
        except CapExceeded:
            return self.symbolic(g, len(word)).accepts(tuple(word))
        i = e.index(tuple(word))
        return i is not None and bool(mask[i])

    def symbolic(self, g: GameInstance, n: int) -> Dfa:
        """Reachable set of length ``n`` as a DFA, for lengths above the cap."""
        with self._lock:
            per = self._data.setdefault(g, {})
            hit = per.get(("dfa", n))
        if hit is None:
            hit = symbolic_reachable(g, n)
            with self._lock:
                self._data.setdefault(g, {})[("dfa", n)] = hit
        return hit

    def reachable_words(self, g: GameInstance, n: int) -> list:
        e, mask = self.instance(g, n)
        return [e.word(i) for i in np.flatnonzero(mask)]

    def clear(self):
        with self._lock:
            self._data = weakref.WeakKeyDictionary()


CACHE = ReachabilityCache()


def reachable(g: GameInstance, word) -> bool:
    """Is ``word`` reachable from an initial configuration of its length?"""
    return CACHE.reachable(g, word)


def reachable_language(g: GameInstance, max_len: int) -> Dfa:
    """Minimal DFA of all reachable configurations of length at most ``max_len``."""
    words = []
    for n in range(max_len + 1):
        words.extend(CACHE.reachable_words(g, n))
    return fa.from_words(g.alphabet, words)
