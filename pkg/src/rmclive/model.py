"""Game models: file format, parser, printer and structural validation.

A model file is a sequence of ``;``-terminated sections::

    # comment
    alphabet: 0 1 0^;
    let I = 0/0 | 1/1;
    states:  (0|1)+ | (0|1)* 0^ (0|1)*;
    initial: 0 0*;
    final:   1 1*;
    player1: {I}* 0/0^ {I}*;
    player2: {I}* 0^/1 {I}*;
    symmetry: rotation;

``states`` is optional and defaults to the union of the initial and final
sets with the domains and ranges of both relations.  Relations are
restricted to ``states x states`` after parsing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import automata as fa
from .automata import Alphabet, Dfa
from .regex import RegexError, parse_regex, to_nfa, to_regex

SECTIONS = ("alphabet", "states", "initial", "final", "player1", "player2", "symmetry")
REQUIRED = ("alphabet", "initial", "final", "player1", "player2")


class ModelError(ValueError):
    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"{message} (line {line}, column {col})")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class SymmetryDecl:
    """A declared symmetry: the rotation, or an explicit transducer."""

    kind: str  # "rotation" | "transducer"
    transducer: Dfa | None = None

    @classmethod
    def rotation(cls) -> "SymmetryDecl":
        return cls("rotation")


@dataclass(frozen=True, eq=False)
class GameInstance:
    name: str
    alphabet: Alphabet
    states: Dfa
    initial: Dfa
    final: Dfa
    move1: Dfa
    move2: Dfa
    symmetry: SymmetryDecl | None = None
    source: str = field(default="", repr=False)

    @property
    def moves(self) -> Dfa:
        """``->1`` union ``->2`` as a minimal DFA (cached)."""
        cached = self.__dict__.get("_moves")
        if cached is None:
            cached = fa.minimize(fa.union(self.move1, self.move2))
            object.__setattr__(self, "_moves", cached)
        return cached

    def relation(self, player: int) -> Dfa:
        return self.move1 if player == 1 else self.move2

    def word(self, text: str) -> tuple:
        return self.alphabet.tokenize(text)

    def show(self, word) -> str:
        return self.alphabet.show(word)

    def replace(self, **kw) -> "GameInstance":
        vals = dict(name=self.name, alphabet=self.alphabet, states=self.states,
                    initial=self.initial, final=self.final, move1=self.move1,
                    move2=self.move2, symmetry=self.symmetry, source="")
        vals.update(kw)
        return GameInstance(**vals)


# ---------------------------------------------------------------------------
# parsing


def _strip_comments(text: str) -> str:
    out = []
    for line in text.splitlines():
        i = line.find("#")
        out.append(line if i < 0 else line[:i] + " " * (len(line) - i))
    return "\n".join(out)


def _pos(text: str, offset: int) -> tuple:
    before = text[:offset]
    line = before.count("\n") + 1
    col = offset - (before.rfind("\n") + 1) + 1
    return line, col


_HEAD = re.compile(r"\s*(?:(let)\s+([A-Za-z_][A-Za-z0-9_]*)\s*=|([A-Za-z0-9_]+)\s*:)")


def parse_model(text: str, name: str = "model") -> GameInstance:
    """Parse model source into a :class:`GameInstance`."""
    clean = _strip_comments(text)
    i = 0
    raw: dict[str, tuple] = {}
    lets: list[tuple] = []
    while True:
        while i < len(clean) and clean[i].isspace():
            i += 1
        if i >= len(clean):
            break
        m = _HEAD.match(clean, i)
        if not m:
            raise ModelError("expected a section header", *_pos(clean, i))
        end = clean.find(";", m.end())
        if end < 0:
            raise ModelError("section is not terminated by ';'", *_pos(clean, i))
        body_at = m.end()
        body = clean[body_at:end]
        if m.group(1):
            lets.append((m.group(2), body, body_at))
        else:
            key = m.group(3)
            if key not in SECTIONS:
                raise ModelError(f"unknown section {key!r}", *_pos(clean, i))
            if key in raw:
                raise ModelError(f"duplicate section {key!r}", *_pos(clean, i))
            raw[key] = (body, body_at, len(lets))
        i = end + 1
    for key in REQUIRED:
        if key not in raw:
            raise ModelError(f"missing section {key!r}", *_pos(clean, len(clean)))

    body, at, _ = raw["alphabet"]
    letters = body.replace(",", " ").split()
    if not letters:
        raise ModelError("empty alphabet", *_pos(clean, at))
    for a in letters:
        bad = set(a) & set("|*+?(){}/;:#")
        if bad:
            raise ModelError(f"letter {a!r} uses a reserved character", *_pos(clean, at))
    try:
        alphabet = Alphabet(letters)
    except ValueError as e:
        raise ModelError(str(e), *_pos(clean, at)) from None
    pairs = alphabet.pairs()

    def parse(body, at, as_pairs, macros):
        line, col = _pos(clean, at)
        try:
            return parse_regex(body, alphabet, as_pairs, macros, line, col)
        except RegexError as e:
            raise ModelError(e.message, e.line, e.col) from None

    macros: dict = {}
    for mname, body, at in lets:
        # decide the kind by the presence of a pair letter
        node = None
        for as_pairs in (False, True):
            try:
                node = parse_regex(body, alphabet, as_pairs, macros, *_pos(clean, at))
                macros[mname] = (as_pairs, node)
                break
            except RegexError as e:
                err = e
        if node is None:
            raise ModelError(err.message, err.line, err.col)

    def build(key, as_pairs):
        body, at, _ = raw[key]
        node = parse(body, at, as_pairs, macros)
        return fa.minimize(to_nfa(node, pairs if as_pairs else alphabet))

    initial = build("initial", False)
    final = build("final", False)
    move1 = build("player1", True)
    move2 = build("player2", True)
    if "states" in raw:
        states = build("states", False)
    else:
        parts = [initial, final] + [f(t) for t in (move1, move2)
                                    for f in (fa.domain, fa.range_of)]
        u = parts[0]
        for p in parts[1:]:
            u = fa.union(u, p)
        states = fa.minimize(u)
    symmetry = None
    if "symmetry" in raw:
        body, at, _ = raw["symmetry"]
        kind = body.strip()
        if kind == "rotation":
            symmetry = SymmetryDecl.rotation()
        elif kind:
            node = parse(body, at, True, macros)
            symmetry = SymmetryDecl("transducer", fa.minimize(to_nfa(node, pairs)))
        else:
            raise ModelError("empty symmetry declaration", *_pos(clean, at))
    sxs = fa.relation_of(states, states)
    move1 = fa.minimize(fa.intersect(move1, sxs))
    move2 = fa.minimize(fa.intersect(move2, sxs))
    return GameInstance(name, alphabet, states, initial, final, move1, move2, symmetry, text)


def print_model(g: GameInstance) -> str:
    """Render ``g`` as model source (regexes obtained by state elimination)."""
    lines = [f"# {g.name}", "alphabet: " + " ".join(g.alphabet.letters) + ";"]
    lines.append(f"states: {to_regex(g.states)};")
    lines.append(f"initial: {to_regex(g.initial)};")
    lines.append(f"final: {to_regex(g.final)};")
    lines.append(f"player1: {to_regex(g.move1)};")
    lines.append(f"player2: {to_regex(g.move2)};")
    if g.symmetry is not None:
        if g.symmetry.kind == "rotation":
            lines.append("symmetry: rotation;")
        else:
            lines.append(f"symmetry: {to_regex(g.symmetry.transducer)};")
    return "\n".join(lines) + "\n"


def load_model(path_or_name: str) -> GameInstance:
    """A builtin name, or a path to a model file."""
    from . import builtins

    if path_or_name in builtins.NAMES:
        return builtins.builtin(path_or_name)
    with open(path_or_name, encoding="utf-8") as fh:
        text = fh.read()
    stem = path_or_name.rsplit("/", 1)[-1]
    if stem.endswith(".game"):
        stem = stem[:-5]
    return parse_model(text, stem)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    witness: tuple

    def show(self, g: GameInstance) -> str:
        return f"{self.code}: {self.message}: {g.show(self.witness)!r}"


@dataclass
class Report:
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> list:
        return [v.code for v in self.violations]


def player_sets(g: GameInstance) -> tuple:
    """``(V1, V2)`` with V2 = dom(->2) | rng(->1) and V1 = S minus V2."""
    v2 = fa.minimize(fa.union(fa.domain(g.move2), fa.range_of(g.move1)))
    v1 = fa.minimize(fa.difference(g.states, v2))
    return v1, v2


def validate(g: GameInstance) -> Report:
    """Check the structural conventions; each failure carries a shortest witness."""
    out = []
    v1, v2 = player_sets(g)

    def need(code, msg, sup, sub):
        w = fa.includes(sup, sub)
        if w is not None:
            out.append(Violation(code, msg, w))

    need("S", "initial configuration outside the state space", g.states, g.initial)
    need("S", "final configuration outside the state space", g.states, g.final)
    need("A0", "player 1 moves from a player 2 configuration", v1, fa.domain(g.move1))
    need("A0", "player 2 moves into a player 2 configuration", v1, fa.range_of(g.move2))
    need("A1", "initial configuration not owned by player 1", v1, g.initial)
    need("A1", "final configuration not owned by player 1", v1, g.final)
    movable = fa.union(fa.domain(g.move1), fa.domain(g.move2))
    need("A2", "non-final configuration without a move", movable,
         fa.difference(g.states, g.final))
    return Report(out)
