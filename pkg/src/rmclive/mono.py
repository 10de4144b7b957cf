"""Monolithic CEGAR loop: synthesise one pair of advice bits for a game."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .model import GameInstance
from .synth import REL, SET, Obligation, cegar, post_dfa
from .verify import AdviceBits, Counterexample, verify


@dataclass
class EngineOptions:
    game_profile: bool = False
    max_states: int = 24
    timeout: float = 600.0
    dump_cnf: str | None = None
    seed: int = 0
    with_invariant: bool = False
    with_symmetry: bool = False
    lstar_precision: int = 5
    max_rounds: int | None = None


@dataclass
class Certificate:
    advice: AdviceBits
    rounds: int
    shape: tuple
    shapes_tried: list
    counterexamples: list = field(default_factory=list)
    elapsed: float = 0.0


@dataclass
class Exhausted:
    rounds: int
    shape: tuple | None
    reason: str = "shape schedule exhausted"
    elapsed: float = 0.0


@dataclass
class Timeout:
    rounds: int
    shape: tuple | None
    elapsed: float = 0.0


def game_profile(opts: EngineOptions | None = None) -> EngineOptions:
    """Options for combinatorial games: the inductiveness condition is dropped."""
    opts = opts or EngineOptions()
    return EngineOptions(**{**opts.__dict__, "game_profile": True})


def obligation_for(g: GameInstance, ce: Counterexample, set_role: str = "A",
                   rel_role: str = "P") -> Obligation:
    """Translate a counterexample into a constraint on the next candidate."""
    w = ce.words
    if ce.kind == "CE1":
        return Obligation("accept", (set_role,), w)
    if ce.kind == "CE2":
        return Obligation("implies", (set_role,), w)
    if ce.kind == "IRREFLEXIVE":
        return Obligation("reject", (rel_role,), ((w[0], w[0]),))
    if ce.kind == "CE3":
        return Obligation("transitive", (rel_role,), w)
    if ce.kind == "CE4":
        return Obligation("progress", (set_role, rel_role), w, post_dfa(g.move2, w[1]))
    raise ValueError(f"unknown counterexample kind {ce.kind}")


def solve_monolithic(g: GameInstance, opts: EngineOptions | None = None, on_round=None):
    """Certificate, Exhausted or Timeout."""
    opts = opts or EngineOptions()
    start = time.monotonic()
    deadline = start + opts.timeout if opts.timeout else None

    def check(c):
        adv = AdviceBits(c["A"], c["P"])
        ce = verify(g, adv, game_profile=opts.game_profile)
        return None if ce is None else (ce, obligation_for(g, ce))

    res = cegar(g.alphabet, {"A": SET, "P": REL}, check, max_total=opts.max_states,
                deadline=deadline, dump_dir=opts.dump_cnf, seed=opts.seed, on_round=on_round,
                max_rounds=opts.max_rounds)
    elapsed = time.monotonic() - start
    if res.status == "ok":
        adv = AdviceBits(res.candidates["A"], res.candidates["P"])
        return Certificate(adv, res.rounds, res.shape, res.shapes_tried, res.counterexamples,
                           elapsed)
    if res.status == "timeout":
        return Timeout(res.rounds, res.shape, elapsed)
    return Exhausted(res.rounds, res.shape, elapsed=elapsed)
