import pytest
from hypothesis import given, strategies as st

from turingtest import zoo
from turingtest.core import bar
from turingtest.enumerators import (DiagonalPreconditionError, FunctionEnum, RunnableItem,
                                    UniversalEnum, diagonal_answer, diagonal_generator,
                                    enum_prefix, index_of_pair, pair_of, tilde_generator,
                                    time_limit, time_limited_enum, zoo_first_enum)
from turingtest.participants import Generator, MachineParticipant, lambda_answers
from turingtest.vm import RunBudget


def test_pairing_order():
    assert [pair_of(n) for n in range(1, 7)] == [(1, 1), (1, 2), (2, 1), (1, 3), (2, 2), (3, 1)]


@given(st.integers(1, 5000))
def test_pairing_is_a_bijection(n):
    assert index_of_pair(*pair_of(n)) == n


def test_time_limited_enum_covers_small_pairs():
    E = time_limited_enum()
    assert E(1).time_limit == 1 and E(1).desc == UniversalEnum()(1).desc
    for k in range(1, 21):
        for t in range(1, 21):
            n = index_of_pair(k, t)
            assert n <= index_of_pair(20, 20)
            assert (E(n).desc, E(n).time_limit) == (UniversalEnum()(k).desc, t)


def test_every_time_limited_item_answers_lambda():
    E = time_limited_enum(zoo_first_enum())
    for n in range(1, 80):
        assert None not in lambda_answers(E(n).participant(), 6)


def test_enum_prefix():
    E = UniversalEnum()
    assert enum_prefix(E, 1) == {E(1)}
    assert len(enum_prefix(E, 50)) == 50
    with pytest.raises(ValueError):
        enum_prefix(E, 0)
    with pytest.raises(ValueError):
        E(0)


def test_zoo_first_enumeration():
    E = zoo_first_enum()
    names = [e.name for e in zoo.ENTRIES]
    assert [E(i).desc.name for i in range(1, len(names) + 1)] == names
    assert E(len(names) + 1).desc == UniversalEnum()(1).desc
    assert E.index_of(zoo.machine("echo")) == names.index("echo") + 1


def test_time_limit_supervisor():
    loop3 = time_limit(zoo.machine("loop"), 3)
    assert lambda_answers(loop3.participant(), 5) == [""] * 5
    counter = zoo.machine("counter")
    fast = time_limit(counter, 10_000)
    assert lambda_answers(fast.participant(), 30) == lambda_answers(MachineParticipant(counter), 30)
    with pytest.raises(ValueError):
        time_limit(counter, 0)


def test_time_limit_latches():
    # slow2 needs 2n cycles on question n, so a limit of 7 first fires at n = 4
    s = time_limit(zoo.machine("slow2"), 7).participant().session()
    got = [s.ask("") for _ in range(8)]
    assert got == ["a", "a", "a", "", "", "", "", ""]
    assert s.fired_at == 4


def test_tilde_generator():
    g = tilde_generator(zoo.machine("counter"), RunBudget(10_000))
    assert lambda_answers(g, 30) == lambda_answers(MachineParticipant(zoo.machine("counter")), 30)
    assert lambda_answers(tilde_generator(zoo.machine("loop"), RunBudget(50)), 5) == [""] * 5
    assert lambda_answers(tilde_generator(zoo.machine("stall"), RunBudget(50)), 5) == \
        ["a", "a", "", "", ""]
    # autonomous: questions are ignored
    s = g.session()
    assert [s.ask(q) for q in ("ab", "b", "")] == ["b", "aa", "ab"]
    with pytest.raises(ValueError):
        tilde_generator(zoo.machine("loop"), RunBudget(None))


def test_tilde_of_a_generator_is_itself():
    m = zoo.machine("const1")
    assert lambda_answers(tilde_generator(m, RunBudget(100)), 10) == ["b"] * 10


def test_diagonal_generator():
    E = time_limited_enum(zoo_first_enum())
    D = diagonal_generator(E)
    for n in range(1, 51):
        own = lambda_answers(E(n).participant(), n)[-1]
        assert D.answer(n) == bar(own) != own
        assert D.answer(n).startswith("a")


def test_diagonal_example_from_definition():
    b = RunnableItem(zoo.machine("const1"))
    E = FunctionEnum(lambda n: b)
    assert diagonal_answer(E, 2) == "ab"


def test_diagonal_precondition():
    E = FunctionEnum(lambda n: RunnableItem(zoo.machine("loop"), None, RunBudget(20)))
    with pytest.raises(DiagonalPreconditionError):
        diagonal_answer(E, 1)


def test_generator_participant_is_autonomous():
    g = Generator("g", lambda n: "a" * n, total=True)
    s = g.session()
    assert [s.ask(q) for q in ("b", "", "ab")] == ["a", "aa", "aaa"]
