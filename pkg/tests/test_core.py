import pytest
from hypothesis import given, strategies as st

from turingtest.core import (Alphabet, MachineDescription, Transition, bar, num_to_word,
                             prefix_rel, validate, word_to_num)
from turingtest import zoo

from oracles import shortlex_words

words = st.text(alphabet="ab", max_size=12)


def test_bar_examples():
    assert bar("") == "a"
    assert bar("ab") == "aab"


@given(words)
def test_bar_never_fixes_a_word(w):
    assert bar(w) != w and len(bar(w)) == len(w) + 1 and bar(w).startswith("a")


def test_numbers_follow_shortlex():
    assert [num_to_word(n) for n in range(3)] == ["a", "b", "aa"]
    reference = shortlex_words(3000)
    assert [num_to_word(n) for n in range(3000)] == reference
    assert word_to_num("ba") == reference.index("ba") == 4


def test_number_roundtrip_to_ten_thousand():
    assert all(word_to_num(num_to_word(n)) == n for n in range(10_001))


@given(st.text(alphabet="ab", min_size=1, max_size=20))
def test_word_roundtrip(w):
    assert num_to_word(word_to_num(w)) == w


def test_empty_word_is_not_a_number():
    with pytest.raises(ValueError):
        word_to_num("")


def test_three_letter_alphabet():
    ab = Alphabet(("x", "y", "z"), "_")
    assert [num_to_word(n, ab) for n in range(5)] == ["x", "y", "z", "xx", "xy"]
    assert bar("zz", ab) == "xzz"


def test_prefix_relation():
    assert prefix_rel([], ["a"])
    assert prefix_rel(["a"], ["a", "b"])
    assert not prefix_rel(["a"], ["b", "c"])
    assert not prefix_rel([], [])
    assert not prefix_rel(["a"], ["a"])


@given(st.lists(words, max_size=5), st.lists(words, max_size=5))
def test_prefix_relation_is_strict_beginning(eta, tail):
    assert prefix_rel(eta, eta + tail) == (len(tail) > 0)
    assert not prefix_rel(eta + tail, eta)


def test_alphabet_invariants():
    with pytest.raises(ValueError):
        Alphabet(("a",), "_")
    with pytest.raises(ValueError):
        Alphabet(("a", "a"), "_")
    with pytest.raises(ValueError):
        Alphabet(("a", "b"), "a")
    assert Alphabet().letter == "a"


def test_validate_examples():
    assert validate(zoo.machine("echo")) == []
    bad = MachineDescription(("q0",), "q9", (("q0", None),))
    assert [v.rule for v in validate(bad)] == ["initial-undeclared"]
    t = Transition("q0", "_", "_", "_", "f", "_")
    dup = MachineDescription(("q0", "f"), "q0", (("f", None),), (t, t._replace(next="q0")))
    assert "nondeterministic" in [v.rule for v in validate(dup)]
    keyed = MachineDescription(("q0", "f"), "q0", (("f", None),),
                               (Transition("f", "_", "_", "_", "q0", "_"),))
    assert [v.rule for v in validate(keyed)] == ["final-keyed"]


def test_validate_reports_instead_of_raising():
    weird = MachineDescription(("q0",), "q0", (("q0", None), ("zz", None)),
                               (Transition("q0", "?", "!", "_", "nowhere", "_", "X"),))
    rules = {v.rule for v in validate(weird)}
    assert {"final-undeclared", "final-keyed", "work-symbol-undeclared", "symbol-undeclared",
            "state-undeclared", "bad-move"} <= rules
