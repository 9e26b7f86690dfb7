"""Session-stateful answerers that take part in a test.

A participant is a blueprint; :meth:`session` starts a fresh conversation
whose :meth:`ask` returns the answer word or ``None`` for a divergence.
After a divergence the session stays diverged: the machine never got past
that question.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Protocol

from .core import MachineDescription
from .encoding import encode
from .vm import MachineInstance, Oracle, RunBudget


class Session(Protocol):
    cycles: int | None

    def ask(self, question: str) -> str | None: ...


class Participant(Protocol):
    name: str
    reduces_to_tm: str  # "yes", "no" or "unknown"

    def session(self) -> Session: ...


class _MachineSession:
    def __init__(self, desc: MachineDescription, budget: RunBudget, oracle: Oracle | None):
        self.inst = MachineInstance(desc, oracle)
        self.budget = budget
        self.diverged = False
        self.cycles: int | None = None

    def ask(self, question: str) -> str | None:
        if self.diverged:
            return None
        self.inst.begin(question)
        res = self.inst.run(self.budget)
        self.cycles = res.cycles
        if not res.answered:
            self.diverged = True
            return None
        return res.answer


@dataclass(frozen=True)
class MachineParticipant:
    desc: MachineDescription
    budget: RunBudget = field(default_factory=RunBudget, compare=False)
    oracle: Oracle | None = field(default=None, compare=False)
    reduces_to_tm: str = "yes"

    @property
    def name(self) -> str:
        return self.desc.name or encode(self.desc)

    def session(self) -> _MachineSession:
        return _MachineSession(self.desc, self.budget, self.oracle)


class _LimitedSession:
    def __init__(self, desc: MachineDescription, t: int, oracle: Oracle | None):
        self.inst = MachineInstance(desc, oracle)
        self.limit = RunBudget(t)
        self.fired_at: int | None = None
        self.asked = 0
        self.cycles: int | None = None

    def ask(self, question: str) -> str:
        self.asked += 1
        if self.fired_at is not None:
            self.cycles = 0
            return ""
        self.inst.begin(question)
        res = self.inst.run(self.limit)
        self.cycles = res.cycles
        if not res.answered:
            self.fired_at = self.asked
            return ""
        return res.answer


@dataclass(frozen=True)
class TimeLimited:
    """``m`` under a supervisor that answers the empty word from the first
    question that takes more than ``t`` cycles onwards."""

    desc: MachineDescription
    t: int
    oracle: Oracle | None = field(default=None, compare=False)
    reduces_to_tm: str = "yes"

    def __post_init__(self):
        if self.t < 1:
            raise ValueError("time limit must be positive")

    @property
    def name(self) -> str:
        return f"{self.desc.name or encode(self.desc)}|{self.t}"

    def session(self) -> _LimitedSession:
        return _LimitedSession(self.desc, self.t, self.oracle)


class _GeneratorSession:
    def __init__(self, answer: Callable[[int], str | None]):
        self.answer = answer
        self.n = 0
        self.diverged = False
        self.cycles: int | None = None

    def ask(self, question: str) -> str | None:
        if self.diverged:
            return None
        self.n += 1
        a = self.answer(self.n)
        if a is None:
            self.diverged = True
        return a


@dataclass(frozen=True)
class Generator:
    """Autonomous participant: the nth answer is ``answer(n)`` whatever the question."""

    name: str
    answer: Callable[[int], str | None] = field(compare=False)
    reduces_to_tm: str = "unknown"
    total: bool = False  # answer(n) is never None

    def session(self) -> _GeneratorSession:
        return _GeneratorSession(self.answer)


def lambda_answers(p: Participant, n: int) -> list[str | None]:
    """Answers to ``n`` empty questions; ``None`` from the first divergence on."""
    s = p.session()
    return [s.ask("") for _ in range(n)]
