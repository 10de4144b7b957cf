"""Regular expressions over declared letters, compiled to automata.

Syntax::

    r ::= r '|' r  |  r r  |  r '*'  |  r '+'  |  r '?'  |  r '{' m [',' [n]] '}'
        |  '(' r ')'  |  '()'  |  letter  |  letter '/' letter  |  '{' NAME '}'

Letters are matched by longest name among the declared alphabet, so
``0^`` is one letter when declared.  ``a/b`` is a pair letter and may only
appear in relation expressions.  ``{NAME}`` splices a previously defined
macro.
"""

from __future__ import annotations

from dataclasses import dataclass

from .automata import Alphabet, Dfa, Nfa, minimize

_SPECIAL = set("|*+?(){}")


class RegexError(ValueError):
    """Syntax or vocabulary error, with 1-based line and column."""

    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"{message} (line {line}, column {col})")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Node:
    op: str  # 'sym', 'eps', 'cat', 'alt', 'star', 'empty'
    args: tuple = ()
    sym: int = -1


EPS = Node("eps")
EMPTY = Node("empty")


def cat(*parts: Node) -> Node:
    parts = tuple(p for p in parts if p.op != "eps")
    if any(p.op == "empty" for p in parts):
        return EMPTY
    if not parts:
        return EPS
    if len(parts) == 1:
        return parts[0]
    return Node("cat", parts)


def alt(*parts: Node) -> Node:
    parts = tuple(p for p in parts if p.op != "empty")
    if not parts:
        return EMPTY
    if len(parts) == 1:
        return parts[0]
    return Node("alt", parts)


def star(p: Node) -> Node:
    if p.op in ("eps", "empty"):
        return EPS
    return Node("star", (p,))


class _Parser:
    def __init__(self, text, alphabet: Alphabet, pairs: bool, macros, line0=1, col0=1):
        self.text = text
        self.alphabet = alphabet
        self.pairs = pairs
        self.macros = macros or {}
        self.pos = 0
        self.line0 = line0
        self.col0 = col0
        self.names = sorted(alphabet.letters, key=len, reverse=True)

    def where(self, pos=None):
        pos = self.pos if pos is None else pos
        before = self.text[:pos]
        line = self.line0 + before.count("\n")
        if "\n" in before:
            col = pos - before.rfind("\n")
        else:
            col = self.col0 + pos
        return line, col

    def fail(self, msg, pos=None):
        raise RegexError(msg, *self.where(pos))

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Node:
        node = self.alternation()
        if self.peek():
            self.fail(f"unexpected {self.peek()!r}")
        return node

    def alternation(self) -> Node:
        parts = [self.concatenation()]
        while self.peek() == "|":
            self.pos += 1
            parts.append(self.concatenation())
        return alt(*parts) if len(parts) > 1 else parts[0]

    def concatenation(self) -> Node:
        parts = []
        while True:
            c = self.peek()
            if c == "" or c in "|)":
                break
            parts.append(self.postfix())
        if not parts:
            return EPS
        return cat(*parts)

    def postfix(self) -> Node:
        node = self.atom()
        while True:
            c = self.peek()
            if c == "*":
                self.pos += 1
                node = star(node)
            elif c == "+":
                self.pos += 1
                node = cat(node, star(node))
            elif c == "?":
                self.pos += 1
                node = alt(EPS, node)
            elif c == "{" and self._is_count():
                node = self.repeat(node)
            else:
                return node

    def _is_count(self):
        j = self.pos + 1
        return j < len(self.text) and (self.text[j].isdigit() or self.text[j] == ",")

    def repeat(self, node: Node) -> Node:
        start = self.pos
        end = self.text.find("}", self.pos)
        if end < 0:
            self.fail("unclosed repetition", start)
        body = self.text[self.pos + 1:end].replace(" ", "")
        self.pos = end + 1
        try:
            if "," in body:
                lo_s, hi_s = body.split(",", 1)
                lo = int(lo_s) if lo_s else 0
                hi = int(hi_s) if hi_s else None
            else:
                lo = hi = int(body)
        except ValueError:
            self.fail(f"bad repetition {{{body}}}", start)
        if hi is not None and hi < lo:
            self.fail("repetition upper bound below lower bound", start)
        parts = [node] * lo
        if hi is None:
            parts.append(star(node))
        else:
            opt = EPS
            for _ in range(hi - lo):
                opt = alt(EPS, cat(node, opt))
            parts.append(opt)
        return cat(*parts)

    def atom(self) -> Node:
        c = self.peek()
        if c == "(":
            open_at = self.pos
            self.pos += 1
            node = self.alternation()
            if self.peek() != ")":
                self.fail("unclosed parenthesis", open_at)
            self.pos += 1
            return node
        if c == "{":
            start = self.pos
            end = self.text.find("}", self.pos)
            if end < 0:
                self.fail("unclosed macro reference", start)
            name = self.text[self.pos + 1:end].strip()
            if name == "EMPTY" and name not in self.macros:
                self.pos = end + 1
                return EMPTY
            if name not in self.macros:
                self.fail(f"unknown macro {name!r}", start)
            self.pos = end + 1
            kind, node = self.macros[name]
            if kind != self.pairs:
                what = "relation" if kind else "set"
                self.fail(f"macro {name!r} is a {what} expression", start)
            return node
        if c in _SPECIAL:
            self.fail(f"unexpected {c!r}")
        return self.letter()

    def _letter_name(self):
        for nm in self.names:
            if self.text.startswith(nm, self.pos):
                self.pos += len(nm)
                return self.alphabet.index(nm)
        end = self.pos
        while end < len(self.text) and not self.text[end].isspace() \
                and self.text[end] not in _SPECIAL and self.text[end] != "/":
            end += 1
        self.fail(f"unknown letter {self.text[self.pos:end]!r}")

    def letter(self) -> Node:
        start = self.pos
        a = self._letter_name()
        if self.pos < len(self.text) and self.text[self.pos] == "/":
            self.pos += 1
            b = self._letter_name()
            if not self.pairs:
                self.fail("pair letter in a set expression", start)
            return Node("sym", sym=a * len(self.alphabet) + b)
        if self.pairs:
            self.fail("single letter in a relation expression", start)
        return Node("sym", sym=a)


def parse_regex(text: str, alphabet: Alphabet, pairs: bool = False, macros=None,
                line: int = 1, col: int = 1) -> Node:
    """Parse ``text``; ``pairs`` selects relation syntax (``a/b`` letters)."""
    return _Parser(text, alphabet, pairs, macros, line, col).parse()


def to_nfa(node: Node, alphabet: Alphabet) -> Nfa:
    """Thompson construction followed by epsilon elimination."""
    trans: list[list] = []
    eps: list[list] = []

    def new():
        trans.append([])
        eps.append([])
        return len(trans) - 1

    def build(n: Node):
        s, t = new(), new()
        if n.op == "sym":
            trans[s].append((n.sym, t))
        elif n.op == "eps":
            eps[s].append(t)
        elif n.op == "empty":
            pass
        elif n.op == "cat":
            cur = s
            for p in n.args:
                a, b = build(p)
                eps[cur].append(a)
                cur = b
            eps[cur].append(t)
        elif n.op == "alt":
            for p in n.args:
                a, b = build(p)
                eps[s].append(a)
                eps[b].append(t)
        elif n.op == "star":
            a, b = build(n.args[0])
            eps[s] += [a, t]
            eps[b] += [a, t]
        else:
            raise ValueError(n.op)
        return s, t

    s0, f0 = build(node)
    closures = []
    for q in range(len(trans)):
        seen = {q}
        stack = [q]
        while stack:
            p = stack.pop()
            for r in eps[p]:
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        closures.append(seen)
    delta = []
    for q in range(len(trans)):
        row: dict[int, set] = {}
        for p in closures[q]:
            for x, r in trans[p]:
                row.setdefault(x, set()).update(closures[r])
        delta.append({x: frozenset(v) for x, v in row.items()})
    acc = [q for q in range(len(trans)) if f0 in closures[q]]
    return Nfa(alphabet, len(trans), closures[s0], delta, acc)


def compile_regex(text: str, alphabet: Alphabet, pairs: bool = False, macros=None) -> Dfa:
    al = alphabet.pairs() if pairs else alphabet
    return minimize(to_nfa(parse_regex(text, alphabet, pairs, macros), al))


# ---------------------------------------------------------------------------
# automaton -> regex (state elimination), used to print models


def _show(alphabet: Alphabet, x: int) -> str:
    return alphabet.letters[x]


def to_regex(d: Dfa) -> str:
    """A regular expression for ``L(d)`` by state elimination.

    The result is not small but parses back to the same language.
    """
    d = minimize(d)
    if not d.accepting:
        return "{EMPTY}"
    al = d.alphabet
    # edges[(p, q)] -> regex string (None = no edge); states: d.n, plus S=-1, T=-2
    edges: dict = {}

    def add(p, q, r):
        if (p, q) in edges:
            edges[(p, q)] = f"{edges[(p, q)]}|{r}"
        else:
            edges[(p, q)] = r

    for q in range(d.n):
        groups: dict[int, list] = {}
        for x, r in d.delta[q].items():
            groups.setdefault(r, []).append(_show(al, x))
        for r, xs in groups.items():
            add(q, r, xs[0] if len(xs) == 1 else "(" + "|".join(xs) + ")")
    add(-1, d.initial, "()")
    for q in d.accepting:
        add(q, -2, "()")

    def wrap(r):
        return r if r == "()" else f"({r})"

    for k in range(d.n):
        loop = edges.pop((k, k), None)
        ins = [(p, r) for (p, q), r in edges.items() if q == k]
        outs = [(q, r) for (p, q), r in edges.items() if p == k]
        for p, _ in ins:
            edges.pop((p, k))
        for q, _ in outs:
            edges.pop((k, q))
        mid = f"{wrap(loop)}*" if loop is not None else ""
        for p, r1 in ins:
            for q, r2 in outs:
                parts = [x for x in (wrap(r1), mid, wrap(r2)) if x and x != "()"]
                add(p, q, " ".join(parts) if parts else "()")
    return edges.get((-1, -2), "{EMPTY}")
