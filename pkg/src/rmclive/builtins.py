"""Built-in game models, kept as model source text.

Hats are written with a ``^`` suffix (``T^`` is a token holder picked by the
scheduler).  The sources are also shipped as ``models/<name>.game``.
"""

from __future__ import annotations

import functools
import itertools

from .model import GameInstance, parse_model

FLIP = """\
# Flip game: the scheduler marks a 0, the process turns it into a 1.
alphabet: 0 1 0^;
let I = 0/0 | 1/1;
states:  (0|1)+ | (0|1)* 0^ (0|1)*;
initial: 0 0*;
final:   1 1*;
player1: {I}* 0/0^ {I}*;
player2: {I}* 0^/1 {I}*;
"""

_TOKEN_RING_HEAD = """\
# N: no token, T: token, T^: token holder chosen by the scheduler.
alphabet: N T T^;
let I = N/N | T/T;
let G = N/T | T/T;
states:  (N|T)* T (N|T)* | (N|T)* T^ (N|T)*;
initial: (N|T)* T (N|T)*;
final:   N* T N*;
player1: {I}* T/T^ {I}*;
"""

ISRAELI_JALFON = _TOKEN_RING_HEAD.replace(
    "# N:", "# Israeli-Jalfon token ring.  Tokens move left or right and merge.\n# N:") + """\
# pass right, pass left, and the two moves across the ring seam;
# a ring of one process keeps its token.
player2: {I}* T^/N {G} {I}*
       | {I}* {G} T^/N {I}*
       | {G} {I}* T^/N
       | T^/N {I}* {G}
       | T^/T;
symmetry: rotation;
"""

HERMAN_LINE = _TOKEN_RING_HEAD.replace(
    "# N:", "# Token passing on a line: endpoints can pass in one direction only.\n# N:") + """\
player2: {I}* T^/N {G} {I}*
       | {I}* {G} T^/N {I}*
       | T^/T;
"""

TAKE_AWAY = """\
# Take-away: a pile of c chips padded with e.  p: player 1 to move,
# q: player 2 to move.  Each move removes one to three chips.  Player 2
# wins by taking the last chip; if player 1 takes it, play moves to the
# losing loop l <-> m.
alphabet: p q l m c e;
let C = c/c;
let E = e/e;
let TAKE = {C}* (c/e | c/e c/e | c/e c/e c/e) {E}*;
states:  (p|q) c* e* | (l|m) e*;
initial: p (c c c c)* e*;
final:   p e*;
player1: p/q {TAKE} | l/m {E}*;
player2: q/p {TAKE} | q/l {E}* | m/l {E}*;
"""


def _nim_source() -> str:
    cols = ["".join(b) for b in itertools.product("01", repeat=3)]

    def alts(xs):
        return "(" + " | ".join(xs) + ")"

    same = alts(f"{c}/{c}" for c in cols)
    dec = []
    for t in range(3):
        drop = [f"{c}/{c[:t]}0{c[t + 1:]}" for c in cols if c[t] == "1"]
        free = [f"{c}/{d}" for c in cols for d in cols
                if all(c[i] == d[i] for i in range(3) if i != t)]
        dec.append(f"{{SAME}}* {alts(drop)} {alts(free)}*")
    zero_xor = [c for c in cols if c.count("1") % 2 == 0]
    return f"""\
# Nim on three piles written in binary, most significant bit first.
# Each column letter holds one bit of every pile.  p: player 1 to move,
# q: player 2 to move; a move lowers one pile.  Player 2 wins by taking
# the last object; otherwise play moves to the losing loop l <-> m.
alphabet: p q l m {" ".join(cols)};
let COL = {alts(cols)};
let SAME = {same};
let DEC = {" | ".join(alts([d]) for d in dec)};
states:  (p|q) {{COL}}* | (l|m) 000*;
initial: p {alts(zero_xor)}*;
final:   p 000*;
player1: p/q {{DEC}} | l/m (000/000)*;
player2: q/p {{DEC}} | q/l (000/000)* | m/l (000/000)*;
"""


NIM = _nim_source()

# Lehmann-Rabin dining philosophers.  Wl/Wr wait for the left/right fork,
# Sl/Sr hold the left/right fork and wait for the other, Dl/Dr put a fork
# down, E eats.
LR_PLAIN = ("T", "H", "Wl", "Wr", "Sl", "Sr", "Dl", "Dr", "E")
LR_HOLD_LEFT = ("Sl", "Dl", "E")
LR_HOLD_RIGHT = ("Sr", "Dr", "E")


def _lr_rules():
    """Rewrite rules as ``(lhs, hat position, rhs)``; lhs has one or two letters."""
    not_left = [a for a in LR_PLAIN if a not in LR_HOLD_LEFT]
    not_right = [a for a in LR_PLAIN if a not in LR_HOLD_RIGHT]
    rules = [(("T",), 0, ("H",)), (("H",), 0, ("Wl",)), (("H",), 0, ("Wr",)),
             (("Dl",), 0, ("H",)), (("Dr",), 0, ("H",))]
    rules += [((a, "Wl"), 1, (a, "Sl")) for a in not_right]
    rules += [(("Wr", a), 0, ("Sr", a)) for a in not_left]
    rules += [(("Sl", a), 0, ("E", a)) for a in not_left]
    rules += [(("Sl", a), 0, ("Dl", a)) for a in LR_HOLD_LEFT]
    rules += [((a, "Sr"), 1, (a, "E")) for a in not_right]
    rules += [((a, "Sr"), 1, (a, "Dr")) for a in LR_HOLD_RIGHT]
    return rules


def _lehmann_rabin_source() -> str:
    rules = _lr_rules()
    hat = {a: a + "^" for a in LR_PLAIN}
    plain = "(" + "|".join(LR_PLAIN) + ")"

    def alts(xs):
        xs = list(dict.fromkeys(xs))
        return xs[0] if len(xs) == 1 else "(" + " | ".join(xs) + ")"

    m1, m2 = [], []
    for lhs, h, rhs in rules:
        if len(lhs) == 1:
            a = lhs[0]
            m1.append(f"{{I}}* {a}/{hat[a]} {{I}}*")
            m2.append(f"{{I}}* {hat[a]}/{rhs[0]} {{I}}*")
            continue
        (a, b), (a2, b2) = lhs, rhs
        if h == 0:
            p1 = [f"{a}/{hat[a]}", f"{b}/{b}"]
            p2 = [f"{hat[a]}/{a2}", f"{b}/{b2}"]
        else:
            p1 = [f"{a}/{a}", f"{b}/{hat[b]}"]
            p2 = [f"{a}/{a2}", f"{hat[b]}/{b2}"]
        # adjacent, and across the seam with the second letter in front
        m1 += [f"{{I}}* {p1[0]} {p1[1]} {{I}}*", f"{p1[1]} {{I}}* {p1[0]}"]
        m2 += [f"{{I}}* {p2[0]} {p2[1]} {{I}}*", f"{p2[1]} {{I}}* {p2[0]}"]
    not_right = alts(a for a in LR_PLAIN if a not in LR_HOLD_RIGHT)
    not_left = alts(a for a in LR_PLAIN if a not in LR_HOLD_LEFT)
    free = alts(hat[a] for a in ("T", "H", "Sl", "Sr", "Dl", "Dr"))
    sep = "\n       | "
    return f"""\
# Lehmann-Rabin randomised dining philosophers on a ring of at least three.
# Wl/Wr: waiting for the left/right fork; Sl/Sr: holding the left/right
# fork and waiting for the other; Dl/Dr: putting a fork down; E: eating.
# A ^ suffix marks the philosopher chosen by the scheduler.
alphabet: {" ".join(LR_PLAIN)} {" ".join(hat[a] for a in LR_PLAIN)};
let U = {plain};
let I = {alts(f"{a}/{a}" for a in LR_PLAIN)};
let NR = {not_right};
let NL = {not_left};
let FREE = {free};
# a chosen philosopher must have an enabled rule
states:  {{U}} {{U}} {{U}}+
       | {{FREE}} {{U}} {{U}}+ | {{U}} {{FREE}} {{U}}+ | {{U}} {{U}}+ {{FREE}} {{U}}*
       | {{NR}} Wl^ {{U}}+ | {{U}}+ {{NR}} Wl^ {{U}}* | Wl^ {{U}}+ {{NR}}
       | Wr^ {{NL}} {{U}}+ | {{U}}+ Wr^ {{NL}} {{U}}* | {{NL}} {{U}}+ Wr^;
initial: T T T T*;
final:   E {{U}} {{U}}+ | {{U}} E {{U}}+ | {{U}} {{U}}+ E {{U}}*;
player1: {sep.join(dict.fromkeys(m1))};
player2: {sep.join(dict.fromkeys(m2))};
symmetry: rotation;
"""


LEHMANN_RABIN = _lehmann_rabin_source()

SOURCES = {
    "flip": FLIP,
    "israeli-jalfon": ISRAELI_JALFON,
    "herman-line": HERMAN_LINE,
    "take-away": TAKE_AWAY,
    "nim": NIM,
    "lehmann-rabin": LEHMANN_RABIN,
}
NAMES = tuple(SOURCES)
# models whose Player 2 is an opponent rather than a coin
GAME_PROFILE = frozenset({"take-away", "nim"})


@functools.lru_cache(maxsize=None)
def builtin(name: str) -> GameInstance:
    try:
        text = SOURCES[name]
    except KeyError:
        raise KeyError(f"unknown builtin model {name!r}; choose from {', '.join(NAMES)}") from None
    return parse_model(text, name)
