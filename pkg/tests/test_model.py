import itertools
from pathlib import Path

import pytest

import rmclive
from rmclive import automata as fa
from rmclive import oracle
from rmclive.builtins import NAMES, SOURCES, builtin
from rmclive.model import ModelError, load_model, parse_model, print_model, validate
from rmclive.regex import compile_regex

import brute

TINY = "alphabet: 0 1;\ninitial: 0*;\nfinal: 1;\nplayer1: 0/1;\nplayer2: 1/0;\n"
COMPONENTS = ("states", "initial", "final", "move1", "move2")


def model_error(text):
    with pytest.raises(ModelError) as e:
        parse_model(text)
    return e.value


def test_israeli_jalfon_scheduler_marks_a_token(ij):
    pa = ij.alphabet.pairs()
    assert ij.move1.accepts(pa.convolve(ij.word("TN"), ij.word("T^N")))
    assert not ij.move1.accepts(pa.convolve(ij.word("TN"), ij.word("TN")))


def test_israeli_jalfon_sets(ij):
    I0 = compile_regex("(N|T)* T (N|T)*", ij.alphabet)
    F = compile_regex("N* T N*", ij.alphabet)
    assert fa.equivalent(ij.initial, I0) is None
    assert fa.equivalent(ij.final, F) is None


def test_flip_sets(flip):
    assert fa.equivalent(flip.initial, compile_regex("0 0*", flip.alphabet)) is None
    assert fa.equivalent(flip.final, compile_regex("1 1*", flip.alphabet)) is None


def test_flip_process_acts_only_at_the_mark(flip):
    pa = flip.alphabet.pairs()
    assert flip.move2.accepts(pa.convolve(flip.word("10^"), flip.word("11")))
    assert not flip.move2.accepts(pa.convolve(flip.word("00^"), flip.word("11")))
    assert not flip.move2.accepts(pa.convolve(flip.word("00"), flip.word("01")))


def test_syntax_error_position():
    e = model_error(TINY.replace("initial: 0*", "initial: (0|"))
    assert "parenthesis" in e.message
    assert (e.line, e.col) == (2, 10)


def test_unknown_letter():
    e = model_error(TINY.replace("initial: 0*", "initial: 2*"))
    assert "unknown letter" in e.message


def test_pair_letter_in_set_field():
    e = model_error(TINY.replace("initial: 0*", "initial: 0/1"))
    assert "pair letter" in e.message


def test_pair_uses_undeclared_letter():
    e = model_error(TINY.replace("player1: 0/1", "player1: 0/2"))
    assert "unknown letter" in e.message
    assert e.line == 4


def test_missing_alphabet():
    e = model_error(TINY.replace("alphabet: 0 1;\n", ""))
    assert "alphabet" in e.message


def test_default_state_space():
    g = parse_model(TINY)
    # union of initial, final and both relation domains and ranges
    assert brute.language(g.states, 3) == {(), (0,), (0, 0), (0, 0, 0), (1,)}


def test_validate_flip_passes(flip):
    assert validate(flip).ok


def test_validate_flip_without_final(flip):
    g = flip.replace(final=fa.Dfa.empty(flip.alphabet))
    rep = validate(g)
    assert rep.codes() == ["A2"]
    assert rep.violations[0].witness == flip.word("1")


def test_validate_process_into_process_configuration(flip):
    # process may also move a marked word to a marked word
    bad = compile_regex("(0/0|1/1)* (0^/1 | 0^/0^) (0/0|1/1)*", flip.alphabet, pairs=True)
    rep = validate(flip.replace(move2=bad))
    assert "A0" in rep.codes()


@pytest.mark.parametrize("name", NAMES)
def test_builtins_validate(name):
    assert validate(builtin(name)).ok


def test_unknown_builtin():
    with pytest.raises(KeyError):
        builtin("dining-cats")
    with pytest.raises(FileNotFoundError):
        load_model("dining-cats")


@pytest.mark.parametrize("name", NAMES)
def test_parse_print_parse(name):
    g = builtin(name)
    p = parse_model(print_model(g), name)
    for comp in COMPONENTS:
        assert fa.equivalent(getattr(g, comp), getattr(p, comp)) is None, comp
    assert (p.symmetry is None) == (g.symmetry is None)


@pytest.mark.parametrize("name", NAMES)
def test_shipped_model_files_match_builtins(name):
    path = Path(rmclive.__file__).parent / "models" / f"{name}.game"
    assert path.read_text() == SOURCES[name]
    g = load_model(str(path))
    assert g.name == name
    for comp in COMPONENTS:
        assert fa.equivalent(getattr(g, comp), getattr(builtin(name), comp)) is None


def _take_away_mover_loses(k, memo={}):
    # backward induction: the player to move loses iff every move wins for the other
    if k not in memo:
        memo[k] = not any(_take_away_mover_loses(k - m) for m in (1, 2, 3) if m <= k)
    return memo[k]


def test_take_away_piles_four_and_five():
    g = builtin("take-away")
    assert _take_away_mover_loses(4) and not _take_away_mover_loses(5)
    for k, p2_wins in ((4, True), (5, False)):
        word = g.word("p" + "c" * k)
        e = oracle.expand(g, len(word))
        assert bool(oracle.attractor(e)[e.index(word)]) == p2_wins


def _tokens(w, T):
    return sum(1 for a in w if a in T)


def test_israeli_jalfon_token_count(ij):
    T = {ij.alphabet.index("T"), ij.alphabet.index("T^")}
    pa = ij.alphabet.pairs()
    K = len(ij.alphabet)
    for n in range(1, 7):
        S = [x for x in itertools.product(range(K), repeat=n) if ij.states.accepts(x)]
        unmarked = [x for x in S if ij.alphabet.index("T^") not in x]
        for x in unmarked:
            for y in S:
                if not ij.move1.accepts(pa.convolve(x, y)):
                    continue
                for z in S:
                    if ij.move2.accepts(pa.convolve(y, z)):
                        assert _tokens(z, T) in (_tokens(x, T), _tokens(x, T) - 1)
