import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import fingroup
import mealy
import words
from errors import UnknownLabel, WordSyntaxError, ZeroExponent
from words import Letter, LetterKind


def test_parse_conjugate(q8):
    w = words.parse("x^2 i x^-2", q8)
    i = q8.index_of('i')
    assert w.letters == (Letter(LetterKind.X, 0, 2), Letter(LetterKind.EMBEDDED, i, 1), Letter(LetterKind.X, 0, -2))


def test_parse_state_generators(q8):
    w = words.parse("C(i)^-1 C(j)", q8)
    assert [(l.kind, q8.labels[l.payload], l.exponent) for l in w.letters] == [
        (LetterKind.STATEGEN, 'i', -1), (LetterKind.STATEGEN, 'j', 1)]


def test_parse_parenthesized_label(q8):
    w = words.parse("(-i) -i", q8)
    assert [l.payload for l in w.letters] == [q8.index_of('-i')] * 2


def test_parse_empty(q8):
    assert words.parse("", q8).letters == ()
    assert words.parse("   ", q8).letters == ()


def test_zero_exponent(q8):
    with pytest.raises(ZeroExponent) as info:
        words.parse("i x^0", q8)
    assert info.value.position == 4


def test_syntax_error_position(q8):
    with pytest.raises(WordSyntaxError) as info:
        words.parse("x i x^-", q8)
    assert info.value.position == 5


def test_unknown_label(q8):
    with pytest.raises(UnknownLabel) as info:
        words.parse("x q", q8)
    assert info.value.position == 2
    with pytest.raises(UnknownLabel):
        words.parse("C(x)", q8)


def test_format(q8):
    assert words.format_word(words.parse("x^2", q8)) == "x^2"
    assert words.format_word(words.parse("", q8)) == ""
    assert words.format_word(words.parse("x^1   C(-k)^-3 (j)", q8)) == "x C(-k)^-3 j"


def test_random_words_round_trip(q8):
    rng = random.Random(42)
    for _ in range(1000):
        w = words.random_word(q8, rng, 12)
        assert words.parse(words.format_word(w), q8) == w


def test_random_words_stay_within_height(d4):
    rng = random.Random(5)
    for _ in range(200):
        level = 0
        for letter in words.random_word(d4, rng, 12, height=2).letters:
            if letter.kind is LetterKind.X:
                level += letter.exponent
            elif letter.kind is LetterKind.STATEGEN:
                level -= letter.exponent
            assert abs(level) <= 2


@pytest.mark.parametrize('text, factors, t', [
    ("x i x^-1 j", [(1, 'i'), (0, 'j')], 0),
    ("C(i)", [(-1, 'i')], -1),
    ("x^3", [], 3),
    ("C(i)^-1", [(0, '-i')], 1),
    ("C(1)^2 i^4", [], -2),
])
def test_to_conjugates(q8, text, factors, t):
    seq = words.to_conjugates(words.parse(text, q8))
    assert [(level, q8.labels[g]) for level, g in seq.factors] == factors
    assert seq.t == t


def test_from_conjugates(q8):
    seq = words.ConjugateSequence(q8, ((1, q8.index_of('i')),), -2)
    assert words.format_word(words.from_conjugates(seq)) == "x i x^-1 x^-2"


def test_machine_of_embedded_element(q8):
    for g in range(q8.order):
        w = words.parse(f"x C({q8.labels[g]})", q8)
        assert mealy.equal(words.to_machine(w), mealy.embedded_machine(q8, g))


def test_machine_of_empty_word(q8):
    assert mealy.is_identity(words.to_machine(words.parse("", q8)))


def test_identity_generator_inverse_is_x(q8):
    assert mealy.equal(words.to_machine(words.parse("C(1)^-1", q8)), mealy.x_machine(q8))


def test_inverse_word(d4):
    w = words.parse("x r C(s)^2 x^-3", d4)
    assert mealy.is_identity(words.to_machine(w + words.inverse_word(w)))


def test_free_reduce(q8):
    w = words.parse("x x^-1 i i^-1 j C(k) C(k)^-1 j", q8)
    assert words.format_word(words.free_reduce(w)) == "j^2"


@pytest.mark.parametrize('name', ['z4', 'q8', 'd4', 's3'])
def test_factored_machine_matches_literal(name):
    G = fingroup.builtin(name)
    rng = random.Random(name)
    for _ in range(25):
        w = words.random_word(G, rng, 6)
        assert mealy.equal(words.to_machine(w), words.to_machine_factored(w)), words.format_word(w)


def test_conjugate_machine_matches_literal(q8):
    for level in (-2, -1, 0, 1, 2):
        for g in range(q8.order):
            literal = words.to_machine(words.from_conjugates(words.ConjugateSequence(q8, ((level, g),), 0)))
            assert mealy.equal(words.conjugate_machine(q8, level, g), literal)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32), st.lists(st.integers(0, 7), min_size=1, max_size=6))
def test_act_word_matches_machine(seed, letters):
    q8 = fingroup.builtin('q8')
    w = words.random_word(q8, random.Random(seed), 8)
    assert words.act_word(w, letters) == mealy.act(words.to_machine_factored(w), letters)


def test_act_word_batch(q8):
    w = words.parse("x^2 j x^-1 C(i)", q8)
    batch = np.array([[0, 1, 2, 3], [7, 6, 5, 4]])
    out = words.act_word_batch(w, batch)
    for row, got in zip(batch, out):
        assert list(got) == words.act_word(w, list(row))


def test_free_reduction_preserves_element(d4):
    rng = random.Random(9)
    for _ in range(30):
        w = words.random_word(d4, rng, 10)
        assert mealy.equal(words.to_machine(w), words.to_machine(words.free_reduce(w)))


@pytest.mark.parametrize('name', ['q8', 'd4', 'heis3'])
def test_act_all_words_matches_batch(name):
    G = fingroup.builtin(name)
    rng = random.Random(name)
    inputs = words.all_words(G.order, 3)
    assert (words.word_ranks(inputs, G.order) == np.arange(G.order ** 3)).all()
    for _ in range(10):
        w = words.random_word(G, rng, 8)
        expected = words.word_ranks(words.act_word_batch(w, inputs), G.order)
        assert (words.act_all_words(w, 3) == expected).all(), words.format_word(w)
