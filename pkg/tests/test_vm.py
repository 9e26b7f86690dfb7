from hypothesis import given, settings, strategies as st

from turingtest import zoo
from turingtest.core import num_to_word
from turingtest.encoding import decode, encoding_space
from turingtest.oracle import RandomOracle
from turingtest.vm import DivergedAt, MachineInstance, RunBudget, answers, prove_nonhalting

from oracles import simulate

questions = st.lists(st.text(alphabet="ab_", max_size=6), min_size=1, max_size=6)


def package_answers(desc, qs, budget, oracle=None):
    inst = MachineInstance(desc, oracle)
    out = []
    for q in qs:
        if inst.broken:
            out.append(None)
            continue
        inst.begin(q)
        r = inst.run(RunBudget(budget))
        out.append(r.answer if r.answered else None)
    return out


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([e.name for e in zoo.ENTRIES]), questions)
def test_zoo_machines_agree_with_reference_simulator(name, qs):
    m = zoo.machine(name)
    assert package_answers(m, qs, 500) == simulate(m, qs, 500)[0]


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=1, max_value=17553), questions, st.integers(0, 2**20))
def test_enumerated_machines_agree_with_reference_simulator(k, qs, seed):
    m = decode(encoding_space(zoo.machine("echo").alphabet).unrank(k))
    o = RandomOracle(0.5, seed)
    assert package_answers(m, qs, 200, o) == simulate(m, qs, 200, o.read)[0]


def test_echo_copies_questions():
    assert answers(zoo.machine("echo"), ["ab", "", "bba"], RunBudget()) == ["ab", "", "bba"]


def test_answer_stops_at_the_first_blank():
    m = zoo.machine("echo")
    assert answers(m, ["a_b"], RunBudget()) == ["a"]


def test_counter_and_parrot():
    assert answers(zoo.machine("counter"), [""] * 20, RunBudget()) == \
        [num_to_word(n) for n in range(1, 21)]
    assert answers(zoo.machine("parrot"), ["ab", "b", "", "ba", "aab"], RunBudget()) == \
        ["", "ab", "b", "", "ba"]


def test_divergence_is_budget_relative_and_sticky():
    assert answers(zoo.machine("loop"), [""], RunBudget(100)) == DivergedAt(1, "budget")
    s = answers(zoo.machine("stall"), ["", "", "", ""], RunBudget(100))
    assert s == DivergedAt(3, "budget")


def test_zero_budget_answers_only_immediate_halts():
    assert answers(zoo.machine("halt"), ["", ""], RunBudget(0)) == ["", ""]
    assert isinstance(answers(zoo.machine("silent"), [""], RunBudget(0)), DivergedAt)


def test_nonhalting_proofs():
    assert prove_nonhalting(zoo.machine("spinner"), "")[0] == "repeat"
    assert prove_nonhalting(zoo.machine("loop"), "")[0] == "repeat"
    assert prove_nonhalting(zoo.machine("echo"), "ab")[0] == "halts"
    assert prove_nonhalting(zoo.machine("selfrec"), "a")[0] in ("repeat", "stuck")


def test_snapshot_and_segment():
    inst = MachineInstance(zoo.machine("marcher"))
    for _ in range(4):
        inst.begin("")
        inst.run(RunBudget())
    assert inst.segment_length == 5
    assert inst.snapshot().head_offset == 4


def test_fork_is_independent():
    inst = MachineInstance(zoo.machine("counter"))
    inst.begin("")
    inst.run(RunBudget())
    other = inst.fork()
    other.begin("")
    other.run(RunBudget())
    inst.begin("")
    assert inst.run(RunBudget()).answer == num_to_word(2)
