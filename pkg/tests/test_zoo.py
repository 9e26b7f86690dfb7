"""Each certificate in the zoo table is re-derived by simulation."""
import pytest

from turingtest import zoo
from turingtest.vm import MachineInstance, RunBudget

from oracles import simulate

QUESTIONS = [[""] * 12, ["ab", "b", "", "ba", "aab", "bb"], ["a_b", "bbb", "", "a"]]


def lambda_profile(m, n=40):
    inst = MachineInstance(m)
    worst, seg = 0, 1
    for _ in range(n):
        inst.begin("")
        r = inst.run(RunBudget(10_000))
        if not r.answered:
            return None
        worst = max(worst, r.cycles)
        seg = max(seg, inst.segment_length)
    return worst, seg


@pytest.mark.parametrize("entry", zoo.ENTRIES, ids=lambda e: e.name)
def test_certificates(entry):
    m = entry.load()
    answers = [simulate(m, qs, 10_000)[0] for qs in QUESTIONS]
    if entry.communicable:
        assert all(None not in a for a in answers)
    else:
        assert any(None in a for a in answers)
    if entry.autonomous:
        lam = simulate(m, [""] * 6, 10_000)[0]
        other = simulate(m, ["ab", "b", "ba", "a", "bb", "abab"], 10_000)[0]
        assert lam == other
    if entry.lambda_time is not None:
        assert lambda_profile(m)[0] == entry.lambda_time
    if entry.memory is not None:
        s, d, w = entry.memory
        assert len(m.states) == s and len(m.initial_work) == d
        assert lambda_profile(m)[1] == w


def test_slow2_takes_two_n_cycles():
    _, cycles = simulate(zoo.machine("slow2"), [""] * 10, 10_000)
    assert cycles == [2 * n for n in range(1, 11)]
    assert simulate(zoo.machine("slow2"), [""] * 3, 10_000)[0] == ["a"] * 3


def test_marcher_segment_grows():
    inst = MachineInstance(zoo.machine("marcher"))
    for n in range(1, 10):
        inst.begin("")
        inst.run(RunBudget())
        assert inst.segment_length == n + 1


def test_resolve_finds_packaged_files():
    assert zoo.resolve("zoo/echo.tm").name == "echo.tm"
    assert zoo.resolve("echo").name == "echo.tm"
    with pytest.raises(FileNotFoundError):
        zoo.resolve("zoo/nope.tm")
