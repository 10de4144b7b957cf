"""Declared symmetries: automorphism checks and closure of progress pieces.

A symmetry is either the cyclic rotation ``u1 u2 .. un -> u2 .. un u1``
or an explicit length-preserving transducer.  Conjugated orders are never
built as automata; replay on explicit words computes them on demand.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import automata as fa
from .automata import Dfa
from .model import GameInstance, SymmetryDecl


class SymmetryError(RuntimeError):
    pass


@dataclass(frozen=True)
class SymmetryViolation:
    component: str  # "bijection", "states", "initial", "final", "player1", "player2"
    words: tuple

    def show(self, g: GameInstance) -> str:
        return f"{self.component}: " + " ".join(g.show(w) for w in self.words)


def rotate_word(w) -> tuple:
    w = tuple(w)
    return w[1:] + w[:1]


def unrotate_word(w) -> tuple:
    w = tuple(w)
    return w[-1:] + w[:-1]


def _rotation_fails(L: Dfa, pairs: bool):
    """Shortest word of L whose rotation leaves L, as (w, rotated w)."""
    out = fa.includes(L, fa.rotate_once(L))
    if out is None:
        return None
    if pairs:
        pa = L.alphabet
        x, y = pa.split(out)
        return ((unrotate_word(x), unrotate_word(y)), (tuple(x), tuple(y)))
    return (unrotate_word(out), tuple(out))


def _flatten(g, comp, found, pairs):
    before, after = found
    if pairs:
        return SymmetryViolation(comp, (before[0], before[1], after[0], after[1]))
    return SymmetryViolation(comp, (before, after))


def check_automorphism(g: GameInstance, sigma: SymmetryDecl | None = None):
    """``None`` if ``sigma`` maps the game onto itself, else a violation.

    For rotation, each component L must satisfy rotate(L) <= L; rotation
    is a bijection on each length, so inclusion already gives equality.
    """
    sigma = sigma or g.symmetry or SymmetryDecl.rotation()
    sets = [("states", g.states), ("initial", g.initial), ("final", g.final)]
    rels = [("player1", g.move1), ("player2", g.move2)]
    if sigma.kind == "rotation":
        for comp, L in sets:
            found = _rotation_fails(L, False)
            if found is not None:
                return _flatten(g, comp, found, False)
        for comp, L in rels:
            found = _rotation_fails(L, True)
            if found is not None:
                return _flatten(g, comp, found, True)
        return None
    t = sigma.transducer
    bad = bijection_violation(g, t)
    if bad is not None:
        return bad
    for comp, L in sets:
        w = fa.equivalent(fa.apply(t, L), L)
        if w is not None:
            return SymmetryViolation(comp, (tuple(w),))
    pa = g.alphabet.pairs()
    for comp, R in rels:
        w = fa.equivalent(fa.compose(t, R), fa.compose(R, t))
        if w is not None:
            return SymmetryViolation(comp, tuple(pa.split(w)))
    return None


def bijection_violation(g: GameInstance, t: Dfa):
    """Functional, injective and total on every length."""
    pa = g.alphabet.pairs()
    ident = fa.identity(g.alphabet)
    for pair in (fa.compose(fa.inverse(t), t), fa.compose(t, fa.inverse(t))):
        w = fa.includes(ident, pair)
        if w is not None:
            return SymmetryViolation("bijection", tuple(pa.split(w)))
    w = fa.includes(fa.domain(t), fa.Dfa.universal(g.alphabet))
    if w is not None:
        return SymmetryViolation("bijection", (tuple(w),))
    return None


def image(sigma: SymmetryDecl, L) -> Dfa:
    if sigma.kind == "rotation":
        return fa.minimize(fa.rotate_once(L))
    return fa.minimize(fa.apply(sigma.transducer, L))


def close_piece(B, sigma: SymmetryDecl, cap: int = 64) -> Dfa:
    """Smallest sigma-invariant superset of ``B``."""
    if sigma.kind == "rotation":
        return fa.cyclic_shift_closure(B)
    cur = fa.minimize(B)
    for _ in range(cap):
        nxt = fa.minimize(fa.union(cur, image(sigma, cur)))
        if fa.equivalent(nxt, cur) is None:
            return nxt
        cur = nxt
    raise SymmetryError(f"closure did not stabilise within {cap} steps")


def interior(L, sigma: SymmetryDecl, universe=None, cap: int = 64) -> Dfa:
    """Largest sigma-invariant subset of ``L`` (within ``universe``)."""
    universe = fa.Dfa.universal(L.alphabet) if universe is None else universe
    if sigma.kind == "rotation":
        outside = fa.cyclic_shift_closure(fa.difference(universe, L))
        return fa.minimize(fa.difference(universe, outside))
    cur = fa.minimize(fa.intersect(L, universe))
    for _ in range(cap):
        nxt = fa.minimize(fa.intersect(cur, image(sigma, cur)))
        if fa.equivalent(nxt, cur) is None:
            return nxt
        cur = nxt
    raise SymmetryError(f"interior did not stabilise within {cap} steps")


def word_maps(sigma: SymmetryDecl):
    """Functions mapping a word to its image and preimage under sigma."""
    if sigma.kind == "rotation":
        return rotate_word, unrotate_word
    t = sigma.transducer

    def fwd(w):
        return next(iter(fa.words_of_length(fa.image_of_word(t, w), len(w))))

    def back(w):
        return next(iter(fa.words_of_length(fa.image_of_word(fa.inverse(t), w), len(w))))

    return fwd, back


def conjugate_violations(g: GameInstance, A, W, B, prec: Dfa, sigma: SymmetryDecl, n: int):
    """PP3 violations of the image piece ``(sigma(B), prec^sigma)`` at length ``n``.

    ``z prec^sigma x`` holds iff ``sigma^-1(z) prec sigma^-1(x)``.
    """
    fwd, back = word_maps(sigma)
    pa = g.alphabet.pairs()
    out = []
    for xb in fa.words_of_length(B, n):
        x = fwd(xb)
        if not A.accepts(x) or W.accepts(x):
            continue
        for y in fa.words_of_length(fa.image_of_word(g.move1, x), n):
            if g.final.accepts(y):
                continue
            ok = False
            for z in fa.words_of_length(fa.image_of_word(g.move2, y), n):
                zb = back(z)
                if B.accepts(zb) and prec.accepts(pa.convolve(zb, xb)):
                    ok = True
                    break
            if not ok:
                out.append((x, y))
    return out
