"""Interpreter for the four-tape question/answer machine.

A :class:`MachineInstance` keeps its work tape between questions; each
question gets a fresh input tape and a fresh output buffer.  Divergence is
always budget-relative: a question either gets an answer within the cycle
budget or the outcome is :class:`Diverged`.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass
from functools import lru_cache
from typing import Protocol, Sequence

from .core import MOVE_DELTA, MachineDescription, Side


class Oracle(Protocol):
    def read(self, cell: int) -> str: ...


@dataclass(frozen=True)
class RunBudget:
    max_cycles: int | None = 10_000

    def __post_init__(self):
        if self.max_cycles is not None and self.max_cycles < 0:
            raise ValueError("a bounded budget must not be negative")

    @classmethod
    def unlimited(cls) -> "RunBudget":
        return cls(None)


@dataclass(frozen=True)
class Answered:
    answer: str
    cycles: int
    mark: Side | None = None

    answered = True


@dataclass(frozen=True)
class Diverged:
    reason: str  # "budget" or "stuck"
    cycles: int = 0

    answered = False


QuestionOutcome = Answered | Diverged


@dataclass(frozen=True)
class DivergedAt:
    index: int  # 1-based
    reason: str = "budget"


@dataclass(frozen=True)
class ConfigSnapshot:
    state: str
    head_offset: int
    segment: tuple[str, ...]


@lru_cache(maxsize=4096)
def _compile(desc: MachineDescription):
    table = {}
    for t in desc.transitions:
        table[t.key] = (t.next, t.write, MOVE_DELTA[t.work_move],
                        MOVE_DELTA[t.input_move], MOVE_DELTA[t.oracle_move], t.emit)
    return table, desc.final_marks


class MachineInstance:
    def __init__(self, desc: MachineDescription, oracle: Oracle | None = None):
        self.desc = desc
        self.oracle = oracle
        self._table, self._finals = _compile(desc)
        self.blank = desc.alphabet.blank
        self.work = {i: c for i, c in enumerate(desc.initial_work) if c != self.blank}
        self.work_head = 0
        self.scanned_min = self.scanned_max = 0
        self.state = desc.initial
        self.question = ""
        self.input_head = 0
        self.oracle_head = 0
        self.output: list[str] = []
        self.cycles_this_question = 0
        self.total_cycles = 0
        self.questions_posed = 0
        self.halted = desc.initial in self._finals
        self.broken = False  # left mid-question by a divergence

    def fork(self) -> "MachineInstance":
        other = copy.copy(self)
        other.work = dict(self.work)
        other.output = list(self.output)
        return other

    # -- one question -------------------------------------------------------

    def begin(self, question: str) -> None:
        if self.broken:
            raise RuntimeError("instance diverged on an earlier question")
        if not (self.halted or self.state == self.desc.initial):
            raise RuntimeError("questions are accepted only in the initial or a final state")
        self.state = self.desc.initial
        self.question = question
        self.input_head = 0
        self.oracle_head = 0
        self.output = []
        self.cycles_this_question = 0
        self.halted = self.state in self._finals
        self.questions_posed += 1

    def step(self) -> bool:
        """Apply one transition; ``False`` if none is defined (stuck)."""
        blank = self.blank
        read_w = self.work.get(self.work_head, blank)
        read_i = self.question[self.input_head] if self.input_head < len(self.question) else blank
        read_o = self.oracle.read(self.oracle_head) if self.oracle is not None else blank
        act = self._table.get((self.state, read_w, read_i, read_o))
        if act is None:
            return False
        nxt, write, dw, di, do, emit = act
        if write == blank:
            self.work.pop(self.work_head, None)
        else:
            self.work[self.work_head] = write
        self.work_head += dw
        if self.work_head < self.scanned_min:
            self.scanned_min = self.work_head
        elif self.work_head > self.scanned_max:
            self.scanned_max = self.work_head
        self.input_head = max(0, self.input_head + di)
        self.oracle_head = max(0, self.oracle_head + do)
        if emit is not None:
            self.output.append(emit)
        self.state = nxt
        self.cycles_this_question += 1
        self.total_cycles += 1
        self.halted = nxt in self._finals
        return True

    def run(self, budget: RunBudget) -> QuestionOutcome:
        """Continue the current question until a final state or the budget ends."""
        limit = budget.max_cycles
        while not self.halted:
            if limit is not None and self.cycles_this_question >= limit:
                self.broken = True
                return Diverged("budget", self.cycles_this_question)
            if not self.step():
                self.broken = True
                return Diverged("stuck", self.cycles_this_question)
        return Answered(self.answer(), self.cycles_this_question, self._finals[self.state])

    def answer(self) -> str:
        out = []
        for c in self.output:
            if c == self.blank:
                break
            out.append(c)
        return "".join(out)

    # -- instrumentation ----------------------------------------------------

    def snapshot(self) -> ConfigSnapshot:
        lo, hi = self.scanned_min, self.scanned_max
        seg = tuple(self.work.get(i, self.blank) for i in range(lo, hi + 1))
        return ConfigSnapshot(self.state, self.work_head - lo, seg)

    @property
    def segment_length(self) -> int:
        return self.scanned_max - self.scanned_min + 1


def pose_question(inst: MachineInstance, question: str, budget: RunBudget) -> QuestionOutcome:
    inst.begin(question)
    return inst.run(budget)


def answers(desc: MachineDescription, questions: Sequence[str], budget: RunBudget,
            oracle: Oracle | None = None) -> list[str] | DivergedAt:
    if not questions:
        raise ValueError("at least one question is required")
    inst = MachineInstance(desc, oracle)
    out = []
    for i, q in enumerate(questions, 1):
        res = pose_question(inst, q, budget)
        if not res.answered:
            return DivergedAt(i, res.reason)
        out.append(res.answer)
    return out


def recognizes(m: MachineDescription, n_enc: str, budget: RunBudget,
               oracle: Oracle | None = None) -> bool:
    return not isinstance(answers(m, [n_enc], budget, oracle), DivergedAt)


def config_snapshot(inst: MachineInstance) -> ConfigSnapshot:
    return inst.snapshot()


def scanned_segment_length(inst: MachineInstance) -> int:
    return inst.segment_length


def full_config(inst: MachineInstance) -> tuple:
    """Everything that determines the rest of the current question's run."""
    return (inst.state, inst.work_head, tuple(sorted(inst.work.items())),
            inst.input_head, inst.oracle_head)


def prove_nonhalting(desc: MachineDescription, question: str, limit: int = 100_000,
                     oracle: Oracle | None = None, inst: MachineInstance | None = None):
    """Run one question looking for a halt, a stuck key or a repeated configuration.

    Returns ``("halts", cycles)``, ``("stuck", cycles)``, ``("repeat", cycles)`` or
    ``("unknown", limit)``.  A repeated full configuration proves the question is
    never answered, since output never influences the run.
    """
    inst = inst.fork() if inst is not None else MachineInstance(desc, oracle)
    inst.begin(question)
    seen = set()
    while not inst.halted:
        if inst.cycles_this_question >= limit:
            return ("unknown", limit)
        cfg = full_config(inst)
        if cfg in seen:
            return ("repeat", inst.cycles_this_question)
        seen.add(cfg)
        if not inst.step():
            return ("stuck", inst.cycles_this_question)
    return ("halts", inst.cycles_this_question)
