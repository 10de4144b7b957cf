import re

import pytest
from hypothesis import given, settings

from rmclive import automata as fa
from rmclive.automata import Alphabet
from rmclive.regex import RegexError, compile_regex, parse_regex, to_regex

import brute

AB = Alphabet(["a", "b"])
HATS = Alphabet(["0", "1", "0^"])


def lang(text, al=AB, n=5, **kw):
    return brute.language(compile_regex(text, al, **kw), n)


def pyre(pattern, n=5, letters="ab"):
    """Same language through Python's re, on single-character letters."""
    r = re.compile(pattern)
    return {tuple(letters.index(c) for c in w) for w in
            ("".join(letters[i] for i in t) for t in brute.words(len(letters), n))
            if r.fullmatch(w)}


@pytest.mark.parametrize("ours,theirs", [
    ("a*", "a*"),
    ("(a|b)* b", "(a|b)*b"),
    ("a+ b?", "a+b?"),
    ("a{2}", "a{2}"),
    ("a{1,3} b", "a{1,3}b"),
    ("(ab){2,}", "(ab){2,}"),
    ("a{,2}", "a{0,2}"),
    ("()", ""),
    ("a | ()", "a|"),
])
def test_matches_python_re(ours, theirs):
    assert lang(ours) == pyre(theirs)


def test_longest_letter_match():
    assert lang("0^ 0", HATS) == {(2, 0)}
    assert lang("0 0^", HATS) == {(0, 2)}


def test_pairs_and_macros():
    macros = {}
    parse = lambda t, pairs: parse_regex(t, HATS, pairs, macros)
    macros["I"] = (True, parse("0/0 | 1/1", True))
    d = compile_regex("{I}* 0/0^ {I}*", HATS, pairs=True, macros=macros)
    pa = HATS.pairs()
    assert d.accepts(pa.convolve((1, 0), (1, 2)))
    assert not d.accepts(pa.convolve((0, 0), (0, 0)))
    with pytest.raises(RegexError, match="relation expression"):
        compile_regex("{I}", HATS, macros=macros)


def test_empty_macro():
    assert fa.is_empty(compile_regex("{EMPTY}", AB)) is None


@pytest.mark.parametrize("text,msg,col", [
    ("(a|b", "unclosed parenthesis", 1),
    ("a c", "unknown letter", 3),
    ("a/b", "pair letter", 1),
    ("a{3,1}", "upper bound", 2),
    ("a{x", "unclosed macro", 2),
    ("{NOPE}", "unknown macro", 1),
    ("*a", "unexpected", 1),
    ("a)", "unexpected", 2),
])
def test_errors(text, msg, col):
    with pytest.raises(RegexError) as e:
        compile_regex(text, AB)
    assert msg in e.value.message
    assert e.value.col == col


def test_single_letter_in_relation():
    with pytest.raises(RegexError, match="single letter"):
        compile_regex("a", AB, pairs=True)


def test_to_regex_examples():
    assert to_regex(fa.Dfa.empty(AB)) == "{EMPTY}"
    for text in ("()", "a", "(a|b)* b", "a* b a*"):
        d = compile_regex(text, AB)
        assert fa.equivalent(compile_regex(to_regex(d), AB), d) is None


def test_to_regex_relation(flip):
    r = to_regex(flip.move2)
    assert fa.equivalent(compile_regex(r, flip.alphabet, pairs=True), flip.move2) is None


@settings(max_examples=120)
@given(brute.dfas(al=HATS, max_states=5))
def test_to_regex_round_trip(d):
    back = compile_regex(to_regex(d), HATS)
    assert fa.equivalent(back, d) is None
