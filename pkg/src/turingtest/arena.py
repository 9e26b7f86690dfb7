"""Testers and the left/right test.

In the left test the second participant (SP) sits on the left and the
subject on the right; the right test mirrors this.  Each step the
interrogator's latest answer is put to both sides and the composed word
``left θ right`` goes back to the interrogator.  ``None`` stands for a
divergence throughout.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Protocol, Sequence, Union

from .core import DEFAULT_ALPHABET, Alphabet, MachineDescription, Side, bar, num_to_word, parse_number
from .encoding import decode, encode
from .enumerators import Enumerator, diagonal_generator, time_limited_enum, zoo_first_enum
from .oracle import BoundedPi
from .participants import Generator, MachineParticipant, Participant
from .vm import MachineInstance, RunBudget, answers as run_answers, DivergedAt

SCHEMA_VERSION = 1


class ProtocolError(RuntimeError):
    """An interrogator met a situation its construction does not cover."""


class SearchCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Continue:
    question: str


@dataclass(frozen=True)
class Finish:
    side: Side


Action = Union[Continue, Finish, None]


class InterrogatorRun(Protocol):
    def start(self) -> Action: ...

    def on_answers(self, left: str, right: str) -> Action: ...


class Interrogator(Protocol):
    name: str
    reduces_to_tm: str

    def open(self) -> InterrogatorRun: ...


# Interrogators ---------------------------------------------------------------

class _DumbRun:
    def __init__(self, q: Participant):
        self.session = q.session()
        self.asked = 0
        self.q = q
        self.n = 0

    def start(self) -> Action:
        return Continue("")

    def _alpha(self, n: int) -> str | None:
        if isinstance(self.q, Generator) and self.q.total:
            return self.q.answer(n)
        a = None
        while self.asked < n:
            a = self.session.ask("")
            self.asked += 1
        return a

    def on_answers(self, left: str, right: str) -> Action:
        self.n += 1
        if left == right:
            return Continue("")
        alpha = self._alpha(self.n)
        if alpha == left:
            return Finish(Side.LEFT)
        if alpha == right:
            return Finish(Side.RIGHT)
        raise ProtocolError(f"step {self.n}: neither {left!r} nor {right!r} equals {alpha!r}")


@dataclass(frozen=True)
class DumbInterrogator:
    """I_Q: asks only the empty word; on the first differing pair it names
    the side that gave Q's own answer."""

    q: Participant
    reduces_to_tm: str = "yes"

    @property
    def name(self) -> str:
        return f"dumb({self.q.name})"

    def open(self) -> _DumbRun:
        return _DumbRun(self.q)


class _MachineRun:
    def __init__(self, desc: MachineDescription, budget: RunBudget):
        self.inst = MachineInstance(desc)
        self.budget = budget
        self.marks = desc.final_marks
        self.blank = desc.alphabet.blank

    def _pose(self, question: str) -> Action:
        self.inst.begin(question)
        res = self.inst.run(self.budget)
        if not res.answered:
            return None
        if res.mark is not None:
            return Finish(res.mark)
        return Continue(res.answer)

    def start(self) -> Action:
        return self._pose("")

    def on_answers(self, left: str, right: str) -> Action:
        return self._pose(left + self.blank + right)


@dataclass(frozen=True)
class MachineInterrogator:
    """A machine as interrogator: its answer is the next test question, and
    halting in a marked final state finishes the test naming that side."""

    desc: MachineDescription
    budget: RunBudget = field(default_factory=RunBudget, compare=False)
    reduces_to_tm: str = "yes"

    @property
    def name(self) -> str:
        return self.desc.name or encode(self.desc)

    def open(self) -> _MachineRun:
        return _MachineRun(self.desc, self.budget)


@dataclass(frozen=True)
class Tester:
    __test__ = False

    interrogator: Interrogator
    sp: Participant
    name: str = ""

    @property
    def id(self) -> str:
        return self.name or f"<{self.interrogator.name},{self.sp.name}>"

    @property
    def types(self) -> tuple[str, str]:
        return self.interrogator.reduces_to_tm, self.sp.reduces_to_tm


# The test loop ---------------------------------------------------------------

@dataclass(frozen=True)
class Step:
    n: int
    test_question: str
    sp_answer: str | None
    subject_answer: str | None
    sp_cycles: int | None = None
    subject_cycles: int | None = None

    def to_json(self) -> dict:
        return {"n": self.n, "test_question": self.test_question, "sp_answer": self.sp_answer,
                "subject_answer": self.subject_answer,
                "cycles": {"sp": self.sp_cycles, "subject": self.subject_cycles}}


@dataclass(frozen=True)
class Termination:
    kind: str   # finished, subject_diverged, sp_diverged, interrogator_diverged, step_cap
    step: int
    side: Side | None = None

    def to_json(self) -> dict:
        d = {"kind": self.kind, "step": self.step}
        if self.side is not None:
            d["side"] = self.side.value
        return d


@dataclass
class Transcript:
    tester_id: str
    subject_id: str
    orientation: Side          # the side the SP sits on
    step_cap: int
    steps: list[Step] = field(default_factory=list)
    termination: Termination | None = None
    metadata: dict = field(default_factory=dict)

    def to_json(self, verdict: "Verdict | None" = None) -> dict:
        d = {"version": SCHEMA_VERSION, "tester_id": self.tester_id, "subject_id": self.subject_id,
             "orientation": self.orientation.value, "step_cap": self.step_cap,
             "budgets": self.metadata.get("budgets", {}), "seed": self.metadata.get("seed"),
             "steps": [s.to_json() for s in self.steps],
             "termination": self.termination.to_json() if self.termination else None}
        if verdict is not None:
            side = verdict.side(self.orientation)
            d["verdict_ordinary"] = {"failed": side.failed_ordinary, "reason": side.reason}
            d["verdict_strict"] = {"failed": side.failed_strict, "reason": side.reason}
        return d


class TestRun:
    """One orientation of a test, advanced a step at a time."""

    __test__ = False

    def __init__(self, tester: Tester, subject: Participant, orientation: Side,
                 step_cap: int = 1000, metadata: dict | None = None):
        if step_cap < 1:
            raise ValueError("step_cap must be at least 1")
        self.transcript = Transcript(tester.id, subject.name, orientation, step_cap,
                                     metadata=dict(metadata or {}))
        self.blank = DEFAULT_ALPHABET.blank
        self._irun = tester.interrogator.open()
        self._sp = tester.sp.session()
        self._subject = subject.session()
        self._pending: Action = self._irun.start()
        if self._pending is None:
            self._end("interrogator_diverged", 0)
        elif isinstance(self._pending, Finish):
            self._end("finished", 0, self._pending.side)

    @property
    def done(self) -> bool:
        return self.transcript.termination is not None

    def _end(self, kind: str, step: int, side: Side | None = None) -> None:
        self.transcript.termination = Termination(kind, step, side)

    def step(self) -> Step | None:
        if self.done:
            return None
        t = self.transcript
        n = len(t.steps) + 1
        q = self._pending.question
        a_sp = self._sp.ask(q)
        a_sub = self._subject.ask(q)
        st = Step(n, q, a_sp, a_sub, self._sp.cycles, self._subject.cycles)
        t.steps.append(st)
        if a_sub is None:
            self._end("subject_diverged", n)
        elif a_sp is None:
            self._end("sp_diverged", n)
        else:
            left, right = (a_sp, a_sub) if t.orientation is Side.LEFT else (a_sub, a_sp)
            self._pending = self._irun.on_answers(left, right)
            if self._pending is None:
                self._end("interrogator_diverged", n)
            elif isinstance(self._pending, Finish):
                self._end("finished", n, self._pending.side)
            elif n >= t.step_cap:
                self._end("step_cap", n)
        return st

    def run(self) -> Transcript:
        while not self.done:
            self.step()
        return self.transcript


def run_test(tester: Tester, subject: Participant, orientation: Side, step_cap: int = 1000,
             metadata: dict | None = None) -> Transcript:
    return TestRun(tester, subject, orientation, step_cap, metadata).run()


# Verdicts --------------------------------------------------------------------

@dataclass(frozen=True)
class OrientationVerdict:
    failed_ordinary: bool
    failed_strict: bool
    reason: str

    def to_json(self) -> dict:
        return {"failed_ordinary": self.failed_ordinary, "failed_strict": self.failed_strict,
                "reason": self.reason}


@dataclass(frozen=True)
class Verdict:
    left: OrientationVerdict
    right: OrientationVerdict

    def side(self, orientation: Side) -> OrientationVerdict:
        return self.left if orientation is Side.LEFT else self.right

    @property
    def fails_test_ordinary(self) -> bool:
        return self.left.failed_ordinary and self.right.failed_ordinary

    @property
    def fails_test_strict(self) -> bool:
        return self.left.failed_strict and self.right.failed_strict

    def to_json(self) -> dict:
        return {"left": self.left.to_json(), "right": self.right.to_json(),
                "fails_test_ordinary": self.fails_test_ordinary,
                "fails_test_strict": self.fails_test_strict}


def judge(t: Transcript) -> OrientationVerdict:
    term = t.termination
    if term is None:
        raise ValueError("transcript has not terminated")
    if term.kind == "finished":
        correct = term.side is t.orientation
        reason = "finished-correct" if correct else "finished-wrong"
        return OrientationVerdict(correct, correct, reason)
    if term.kind == "subject_diverged":
        sp_answered = t.steps[-1].sp_answer is not None
        reason = "subject-diverged" if sp_answered else "both-diverged"
        return OrientationVerdict(sp_answered, True, reason)
    return OrientationVerdict(False, False, term.kind.replace("_", "-"))


def evaluate(left: Transcript, right: Transcript) -> Verdict:
    """Ordinary and strict verdicts from the two orientations of one test."""
    if (left.orientation, right.orientation) != (Side.LEFT, Side.RIGHT):
        raise ValueError("need a left and a right transcript")
    if (left.tester_id, left.subject_id) != (right.tester_id, right.subject_id):
        raise ValueError("transcripts come from different tests")
    return Verdict(judge(left), judge(right))


evaluate_ordinary = evaluate
evaluate_strict = evaluate


@dataclass
class TestReport:
    __test__ = False

    left: Transcript
    right: Transcript
    verdict: Verdict

    def to_json(self) -> dict:
        return {"version": SCHEMA_VERSION, "tester_id": self.left.tester_id,
                "subject_id": self.left.subject_id,
                "transcripts": [self.left.to_json(self.verdict), self.right.to_json(self.verdict)],
                "verdict": self.verdict.to_json()}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)


def run_both(tester: Tester, subject: Participant, step_cap: int = 1000,
             metadata: dict | None = None) -> TestReport:
    left = run_test(tester, subject, Side.LEFT, step_cap, metadata)
    right = run_test(tester, subject, Side.RIGHT, step_cap, metadata)
    return TestReport(left, right, evaluate(left, right))


# Constructions ---------------------------------------------------------------

def dumb_tester(q: Participant | MachineDescription, budget: RunBudget | None = None) -> Tester:
    """T_Q: the dumb interrogator I_Q with SP Q."""
    if isinstance(q, MachineDescription):
        q = MachineParticipant(q, budget or RunBudget())
    return Tester(DumbInterrogator(q), q)


def diagonal_tester(E: Enumerator) -> Tester:
    g = diagonal_generator(E)
    return Tester(DumbInterrogator(g), g, name=f"diag({E.name})")


def time_diagonal_tester(base: Enumerator | None = None) -> Tester:
    return diagonal_tester(time_limited_enum(base or zoo_first_enum()))


def echo_generator(tester: Tester, step_cap: int = 100_000) -> Generator:
    """Replays the SP's answers from a simulated test of the SP against ``tester``;
    every answer after the simulated test ends is the empty word."""
    run = TestRun(tester, tester.sp, Side.LEFT, step_cap)
    steps = run.transcript.steps

    def answer(n: int) -> str:
        while len(steps) < n and not run.done:
            run.step()
        for st in steps[:n]:
            if st.sp_answer is None:
                return ""
        return steps[n - 1].sp_answer if n <= len(steps) else ""

    return Generator(f"echo{tester.id}", answer, reduces_to_tm="yes", total=True)


def similar_on_lambda(u: Participant, v: Participant, N: int) -> bool:
    """Equal answers, divergences included, on the first N empty questions."""
    if N < 1:
        raise ValueError("N must be at least 1")
    su, sv = u.session(), v.session()
    for _ in range(N):
        if su.ask("") != sv.ask(""):
            return False
    return True


# Recognition-oracle tester ---------------------------------------------------

def cycles_on_self(m: MachineDescription, budget: int) -> int | None:
    """Cycles ``m`` needs to answer its own encoding, counted as at least 1 so
    that the number 0 keeps meaning "never answers"."""
    inst = MachineInstance(m)
    inst.begin(encode(m))
    res = inst.run(RunBudget(budget))
    return max(res.cycles, 1) if res.answered else None


class _PiSession:
    def __init__(self, pi: BoundedPi):
        self.pi = pi
        self.n = 0
        self.cycles: int | None = None

    def ask(self, question: str) -> str | None:
        self.n += 1
        m = self.pi.universe[(self.n - 1) % len(self.pi.universe)]
        if self.pi.query(m, encode(m)):
            t = cycles_on_self(m, self.pi.budget)
            if t is None:
                return None
            return num_to_word(t)
        return num_to_word(0)


@dataclass(frozen=True)
class PiSP:
    """Answers the nth question with the number of cycles the nth universe
    machine needs on its own encoding, or 0 when the oracle says it never answers."""

    pi: BoundedPi = field(compare=False)
    name: str = "pi-sp"
    reduces_to_tm: str = "no"

    def session(self) -> _PiSession:
        return _PiSession(self.pi)


class _PiRun:
    def __init__(self, pi: BoundedPi):
        self.pi = pi
        self.n = 0

    def start(self) -> Action:
        return Continue("")

    def _verify(self, m: MachineDescription, a: str) -> bool:
        t = parse_number(a)
        if t is None:
            return False
        r = MachineInstance(m)
        r.begin(encode(m))
        return r.run(RunBudget(t)).answered

    def on_answers(self, left: str, right: str) -> Action:
        self.n += 1
        if left == right:
            return Continue("")
        m = self.pi.universe[(self.n - 1) % len(self.pi.universe)]
        zero = num_to_word(0)
        ok = {}
        for side, a in ((Side.LEFT, left), (Side.RIGHT, right)):
            if a != zero:
                ok[side] = self._verify(m, a)
                if not ok[side]:
                    return Finish(side.other)
        # Every nonzero answer is a true upper bound on the cycles, so the
        # machine does answer: a 0 is wrong, and of two bounds only the exact
        # count can come from the SP.
        if len(ok) == 1:
            return Finish(next(iter(ok)))
        exact = num_to_word(cycles_on_self(m, self.pi.budget))
        if left == exact:
            return Finish(Side.LEFT)
        if right == exact:
            return Finish(Side.RIGHT)
        raise ProtocolError(f"step {self.n}: neither {left!r} nor {right!r} is the exact count")


@dataclass(frozen=True)
class PiInterrogator:
    pi: BoundedPi = field(compare=False)
    name: str = "pi-dumb"
    reduces_to_tm: str = "yes"

    def open(self) -> _PiRun:
        return _PiRun(self.pi)


def pi_tester(pi: BoundedPi) -> Tester:
    return Tester(PiInterrogator(pi), PiSP(pi), name="pi")


# Communicability-search tester -----------------------------------------------

def _answers_all(m: MachineDescription, questions: Sequence[str], budget: int) -> list[str] | None:
    res = run_answers(m, list(questions), RunBudget(budget))
    return None if isinstance(res, DivergedAt) else list(res)


class _CommSPSession:
    def __init__(self, budget: int, alphabet: Alphabet):
        self.budget = budget
        self.alphabet = alphabet
        self.history: list[str] = []
        self.cycles: int | None = None

    def ask(self, question: str) -> str | None:
        self.history.append(question)
        try:
            m = decode(question, self.alphabet)
        except ValueError:
            return None
        got = _answers_all(m, self.history, self.budget)
        return None if got is None else bar(got[-1], self.alphabet)


@dataclass(frozen=True)
class CommSP:
    """Decodes the latest question as a machine and answers bar of that
    machine's answer to the whole question history."""

    budget: int = 10_000
    alphabet: Alphabet = DEFAULT_ALPHABET
    name: str = "comm-sp"
    reduces_to_tm: str = "yes"

    def session(self) -> _CommSPSession:
        return _CommSPSession(self.budget, self.alphabet)


class _CommRun:
    def __init__(self, pi: BoundedPi, search_cap: int):
        self.pi = pi
        self.cap = min(search_cap, len(pi.universe))
        self.r = 0
        self.mus: list[str] = []
        self.expected: str | None = None

    def _next(self) -> Action:
        for k in range(self.r + 1, self.cap + 1):
            m = self.pi.universe[k - 1]
            enc = encode(m)
            if not self.mus:
                if not self.pi.query(m, enc):
                    continue
                got = _answers_all(m, [enc], self.pi.budget)
            else:
                got = _answers_all(m, self.mus + [enc], self.pi.budget)
            if got is not None:
                self.r = k
                self.mus.append(enc)
                self.expected = bar(got[-1], self.pi.alphabet)
                return Continue(enc)
        raise SearchCapExceeded(f"no machine after index {self.r} within {self.cap}")

    def start(self) -> Action:
        return self._next()

    def on_answers(self, left: str, right: str) -> Action:
        if left != right:
            if left == self.expected:
                return Finish(Side.LEFT)
            if right == self.expected:
                return Finish(Side.RIGHT)
            raise ProtocolError(f"neither answer equals {self.expected!r}")
        return self._next()


@dataclass(frozen=True)
class CommInterrogator:
    pi: BoundedPi = field(compare=False)
    search_cap: int = 1000
    name: str = "comm"
    reduces_to_tm: str = "no"

    def open(self) -> _CommRun:
        return _CommRun(self.pi, self.search_cap)


def comm_tester(pi: BoundedPi, search_cap: int = 1000) -> Tester:
    return Tester(CommInterrogator(pi, search_cap), CommSP(pi.budget, pi.alphabet), name="comm")


def comm_questions(pi: BoundedPi, steps: int, search_cap: int = 1000) -> list[str]:
    """The comm tester's first ``steps`` questions (they ignore the answers)."""
    run = _CommRun(pi, search_cap)
    out = [run.start().question]
    while len(out) < steps:
        try:
            out.append(run._next().question)
        except SearchCapExceeded:
            break
    return out
