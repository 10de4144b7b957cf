"""Text format for proofs.

A monolithic certificate is a header followed by two automaton dumps
(the set, then the order)::

    certificate mono <model> profile=<standard|game>
    dfa ...

An incremental certificate lists the starting set, the final set, every
invariant and every piece, each introduced by a keyword line::

    certificate incr <model> symmetry=<none|rotation|transducer>
    base
    dfa ...
    final
    dfa ...
    invariant <k> <letters of u>
    dfa ...
    piece <j> <plain|symmetric> <letters of u>
    dfa ...          (the set B)
    dfa ...          (the order)
"""

from __future__ import annotations

from dataclasses import dataclass

from . import automata as fa
from .incr import DisjunctiveCertificate, Invariant, Piece
from .model import GameInstance, SymmetryDecl
from .symmetry import close_piece
from .verify import AdviceBits


class CertificateError(ValueError):
    pass


@dataclass
class MonoCertificate:
    model: str
    advice: AdviceBits
    game_profile: bool = False


def _word(g: GameInstance, w) -> str:
    return g.alphabet.show(w, sep=" ")


def dump_mono(model: str, adv: AdviceBits, game_profile: bool = False) -> str:
    profile = "game" if game_profile else "standard"
    return (f"certificate mono {model} profile={profile}\n" + fa.dump(adv.A)
            + fa.dump(adv.prec))


def dump_incr(model: str, g: GameInstance, cert: DisjunctiveCertificate) -> str:
    sym = "none" if cert.symmetry is None else cert.symmetry.kind
    out = [f"certificate incr {model} symmetry={sym}\n", "base\n", fa.dump(cert.base),
           "final\n", fa.dump(cert.A)]
    for k, inv in enumerate(cert.invariants):
        out.append(f"invariant {k} {_word(g, inv.u)}".rstrip() + "\n")
        out.append(fa.dump(inv.I))
    for j, p in enumerate(cert.pieces):
        flag = "symmetric" if p.symmetric else "plain"
        out.append(f"piece {j} {flag} {_word(g, p.u)}".rstrip() + "\n")
        out.append(fa.dump(p.B))
        out.append(fa.dump(p.prec))
    return "".join(out)


def _blocks(lines):
    """Split into (keyword line or None, [dfa lines]) items."""
    items = []
    cur = None
    for ln in lines:
        if ln.startswith("dfa "):
            cur = [ln]
            items.append(("dfa", cur))
        elif ln.split()[0] in ("base", "final", "invariant", "piece"):
            items.append(("key", ln))
            cur = None
        elif cur is not None:
            cur.append(ln)
        else:
            raise CertificateError(f"unexpected line {ln!r}")
    return items


def parse(text: str, g: GameInstance | None = None):
    """MonoCertificate, or ``(model, DisjunctiveCertificate)`` for incremental ones.

    Incremental certificates need the game to rebuild words and closures.
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise CertificateError("empty certificate")
    head = lines[0].split()
    if len(head) < 3 or head[0] != "certificate":
        raise CertificateError(f"bad certificate header: {lines[0]!r}")
    mode, model = head[1], head[2]
    opts = dict(p.split("=", 1) for p in head[3:] if "=" in p)
    try:
        items = _blocks(lines[1:])
        if mode == "mono":
            dfas = [fa.parse_dump(b) for kind, b in items if kind == "dfa"]
            if len(dfas) != 2 or len(items) != 2:
                raise CertificateError("a monolithic certificate holds exactly two automata")
            return MonoCertificate(model, AdviceBits(dfas[0], dfas[1]),
                                   opts.get("profile") == "game")
        if mode != "incr":
            raise CertificateError(f"unknown certificate mode {mode!r}")
        if g is None:
            raise CertificateError("an incremental certificate needs its game")
        return model, _parse_incr(items, g, opts.get("symmetry", "none"))
    except (ValueError, KeyError, IndexError) as e:
        if isinstance(e, CertificateError):
            raise
        raise CertificateError(str(e)) from e


def _parse_incr(items, g: GameInstance, sym: str) -> DisjunctiveCertificate:
    sigma = None
    if sym != "none":
        sigma = g.symmetry or SymmetryDecl.rotation()
        if sigma.kind != sym:
            raise CertificateError(f"certificate uses symmetry {sym}, model declares {sigma.kind}")
    base = A = None
    invs, pieces = [], []
    i = 0
    while i < len(items):
        kind, val = items[i]
        if kind != "key":
            raise CertificateError("automaton without a section keyword")
        words = val.split()
        if words[0] in ("base", "final"):
            d = fa.parse_dump(items[i + 1][1])
            if words[0] == "base":
                base = d
            else:
                A = d
            i += 2
        elif words[0] == "invariant":
            u = g.alphabet.word(words[2:])
            invs.append(Invariant(u, fa.parse_dump(items[i + 1][1])))
            i += 2
        else:
            symmetric = words[2] == "symmetric"
            u = g.alphabet.word(words[3:])
            B = fa.parse_dump(items[i + 1][1])
            P = fa.parse_dump(items[i + 2][1])
            if symmetric and sigma is None:
                raise CertificateError("symmetric piece in a certificate without symmetry")
            closed = close_piece(B, sigma) if symmetric else B
            pieces.append(Piece(u, B, P, closed, symmetric))
            i += 3
    if base is None or A is None:
        raise CertificateError("missing base or final set")
    return DisjunctiveCertificate(base, A, pieces, invs, sigma)
