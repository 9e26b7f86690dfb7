from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from turingtest import zoo
from turingtest.core import DEFAULT_ALPHABET
from turingtest.encoding import (EncodingTooLong, InvalidEncoding, decode, encode, encoding_space,
                                 is_valid_encoding)
from turingtest.enumerators import UniversalEnum, universal_enum

from oracles import valid_encoding, valid_encodings_upto

GOLDEN = Path(__file__).parent / "data" / "first100_encodings.txt"
SPACE = encoding_space(DEFAULT_ALPHABET)


@pytest.fixture(scope="module")
def upto20():
    return valid_encodings_upto(20)


def test_first_hundred_match_golden_file():
    golden = GOLDEN.read_text().split()
    assert len(golden) == 100
    assert [universal_enum(k) for k in range(1, 101)] == [decode(w) for w in golden]
    assert [encode(universal_enum(k)) for k in range(1, 101)] == golden


def test_first_machine_halts_immediately():
    m = universal_enum(1)
    assert encode(m) == "aaaaaa"
    assert m.initial in m.final_marks and not m.transitions


def test_three_routes_agree_to_length_20(upto20):
    scanned = [w for w in upto20]
    assert all(is_valid_encoding(w) for w in scanned)
    by_dfs = [w for L in range(1, 21) for w in SPACE.iter_length(L)]
    assert by_dfs == scanned
    for L in range(1, 21):
        assert SPACE.count(L) == sum(len(w) == L for w in scanned)
    for k in range(1, len(scanned) + 1, 7):
        assert SPACE.unrank(k) == scanned[k - 1]
        assert SPACE.rank(scanned[k - 1]) == k


def test_counts_by_length():
    assert [SPACE.count(L) for L in range(6, 16)] == [1, 2, 5, 11, 22, 43, 82, 150, 272, 483]
    assert [SPACE.count(L) for L in range(1, 6)] == [0] * 5


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet="ab", min_size=1, max_size=22))
def test_validity_matches_reference_grammar(w):
    assert is_valid_encoding(w) == valid_encoding(w)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=1, max_value=10**6))
def test_rank_unrank_roundtrip(k):
    w = SPACE.unrank(k)
    assert valid_encoding(w)
    assert SPACE.rank(w) == k


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=1, max_value=10**5))
def test_decode_encode_roundtrip(k):
    w = SPACE.unrank(k)
    assert encode(decode(w)) == w


def test_encode_decode_is_canonical_on_zoo():
    for m in zoo.machines():
        assert decode(encode(m)) == m.canonical()


def test_invalid_words_are_rejected():
    for w in ["", "b", "ab", "aaaaab", "aaaaaaa", "c"]:
        assert not is_valid_encoding(w)
    with pytest.raises(InvalidEncoding):
        decode("aaaaa")


def test_zoo_indices_in_the_universal_enumeration():
    """K0 for zoo machines short enough to rank exactly."""
    found = {}
    for e in zoo.ENTRIES:
        w = encode(e.load())
        if len(w) <= SPACE.max_length:
            k = SPACE.rank(w)
            assert decode(SPACE.unrank(k)) == e.load().canonical()
            found[e.name] = k
    assert found["halt"] == 1
    assert {"halt", "silent", "const0", "const1", "echo", "marcher", "spinner", "selfrec",
            "loop", "quit3"} <= set(found)


def test_long_encodings_raise():
    with pytest.raises(EncodingTooLong):
        SPACE.rank(encode(zoo.machine("counter")))


def test_universal_enumeration_is_increasing():
    E = UniversalEnum()
    ws = [E.word(k) for k in range(1, 101)]
    assert all((len(a), a) < (len(b), b) for a, b in zip(ws, ws[1:]))
