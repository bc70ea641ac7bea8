"""Input format, letter encoding, and free-word arithmetic."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from relends import (
    ParseError,
    cyclic_reduce,
    free_reduce,
    invert,
    parse_file,
    parse_presentation,
)
from relends.presentation import word_from_text

from conftest import FREE2, GENUS2


def test_parse_generators_and_single_relator():
    p = parse_presentation(GENUS2)
    assert p.generators == ("a", "b", "c", "d")
    assert p.relators == ((0, 2, 1, 3, 4, 6, 5, 7),)


def test_relators_none_means_free():
    p = parse_presentation(FREE2)
    assert p.relators == ()


def test_relator_section_one_word_per_line():
    p = parse_presentation("generators: a b\nrelators:\n  aaa\n  bbb\n")
    assert p.relators == ((0, 0, 0), (2, 2, 2))


def test_single_letter_names_concatenate():
    p = parse_presentation("generators: a b\nrelators: none")
    assert p.word_from_text("aBba") == (0, 3, 2, 0)


def test_multi_letter_names_split_on_whitespace():
    p = parse_presentation("generators: g1 g2\nrelators: none")
    w = p.word_from_text("g1 g2 G1")
    assert w == (0, 2, 1)
    assert p.word_to_text(w) == "g1 g2 G1"


def test_empty_word_prints_as_one():
    p = parse_presentation(FREE2)
    assert p.word_to_text(()) == "1"
    assert p.word_from_text("1") == ()


def test_parse_file_inline_subgroup():
    parsed = parse_file("generators: a b\nrelators: none\nsubgroup: a\n")
    assert parsed.subgroup.words == ((0,),)


def test_parse_file_indented_subgroup_entries():
    parsed = parse_file("generators: a b\nrelators: none\nsubgroup:\n  abA\n  bb\n")
    assert parsed.subgroup.words == ((0, 2, 1), (2, 2))


@pytest.mark.parametrize(
    "text",
    [
        "relators: none",
        "generators: a b\nrelators: abz",
        "generators: a A\nrelators: none",
        "generators: a a\nrelators: none",
        "generators: a 0b\nrelators: none",
        "generators:\nrelators: none",
        "generators: a\nstray line\nrelators: none",
    ],
)
def test_bad_inputs_raise_parse_error(text):
    with pytest.raises(ParseError):
        parse_file(text)


# letters are ints: generator i maps to 2i, its inverse to 2i^1
letters = st.integers(min_value=0, max_value=7)
words = st.lists(letters, max_size=30).map(tuple)


@given(words)
def test_free_reduce_is_idempotent(w):
    r = free_reduce(w)
    assert free_reduce(r) == r


@given(words)
def test_free_reduce_preserves_length_parity(w):
    assert (len(w) - len(free_reduce(w))) % 2 == 0


@given(words)
def test_word_times_inverse_reduces_to_nothing(w):
    assert free_reduce(w + invert(w)) == ()


@given(words)
def test_invert_is_an_involution(w):
    assert invert(invert(w)) == w


@given(words, words)
def test_invert_reverses_concatenation(u, v):
    assert invert(u + v) == invert(v) + invert(u)


def test_cyclic_reduce_strips_conjugation():
    w = word_from_text("Aba", ("a", "b"))
    assert cyclic_reduce(w) == (2,)


@given(words)
def test_cyclic_reduce_never_longer(w):
    assert len(cyclic_reduce(w)) <= len(free_reduce(w))


@given(words)
def test_cyclic_reduce_ends_are_not_inverse(w):
    c = cyclic_reduce(w)
    if c:
        assert c[0] != c[-1] ^ 1


def test_round_trip_through_text():
    p = parse_presentation(GENUS2)
    for text in ("abAB", "cdCD", "aA", "1", "dcbaDCBA"):
        w = p.word_from_text(text)
        assert p.word_from_text(p.word_to_text(w)) == w
