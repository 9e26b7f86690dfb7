import pytest
from hypothesis import given, settings, strategies as st

from turingtest import zoo
from turingtest.core import Side
from turingtest.dsl import ParseError, load_runnable, parse_dsl, print_dsl
from turingtest.encoding import decode, encode, encoding_space


HEAD = "states: q0 f\ninitial: q0\nfinal: f\n"


def test_every_zoo_file_parses_and_prints_back():
    for path in sorted(zoo.ZOO_DIR.glob("*.tm")):
        desc = load_runnable(path).desc
        assert parse_dsl(print_dsl(desc)) == desc


def test_name_defaults_to_file_stem(tmp_path):
    p = tmp_path / "thing.tm"
    p.write_text(HEAD + "q0 * * * -> f _ S S S -\n")
    assert load_runnable(p).desc.name == "thing"


def test_wildcards_expand_over_the_tape_alphabet():
    d = parse_dsl(HEAD + "q0 * * _ -> f = S S S @\n")
    assert len(d.transitions) == 9
    t = {x.key: x for x in d.transitions}[("q0", "a", "b", "_")]
    assert t.write == "a" and t.emit == "b"


def test_more_specific_line_wins():
    d = parse_dsl(HEAD + "q0 * * _ -> f _ S S S a\nq0 _ * _ -> f _ S S S b\n")
    emits = {t.key: t.emit for t in d.transitions}
    assert emits[("q0", "_", "a", "_")] == "b"
    assert emits[("q0", "a", "a", "_")] == "a"


def test_equal_specificity_overlap_is_nondeterministic():
    with pytest.raises(ParseError) as e:
        parse_dsl(HEAD + "q0 * a _ -> f _ S S S a\nq0 a * _ -> f _ S S S b\n")
    assert e.value.rule == "nondeterministic" and e.value.line == 5


def test_invalid_machine_names_the_line():
    with pytest.raises(ParseError) as e:
        parse_dsl(HEAD + "\nq0 _ _ _ -> f _ S S S -\nf _ _ _ -> q0 _ S S S -\n")
    assert e.value.rule == "final-keyed" and e.value.line == 6


@pytest.mark.parametrize("text", [
    "states: q0\n",
    HEAD + "q0 _ _ _ -> f _ Q S S -\n",
    HEAD + "q0 _ _ _ f _ S S S -\n",
    HEAD + "time_limit: 0\n",
    HEAD + "alphabet: a\n",
])
def test_syntax_errors(text):
    with pytest.raises(ParseError) as e:
        parse_dsl(text)
    assert e.value.rule is None


def test_marks_and_time_limit():
    assert zoo.machine("quit3").final_marks["stop"] is Side.LEFT
    assert load_runnable(zoo.ZOO_DIR / "echo_t5.tm").time_limit == 5


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=1, max_value=17553))
def test_print_parse_roundtrip_on_enumerated_machines(k):
    d = decode(encoding_space(zoo.machine("echo").alphabet).unrank(k))
    assert encode(parse_dsl(print_dsl(d))) == encode(d)
