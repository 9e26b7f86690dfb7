"""The probabilistic test: a random SP against assistants that look for the
subject in an enumeration of machines.

The interrogator asks only the empty word.  At step n each assistant runs
the first n enumerated machines on n empty questions with a total budget of
n cycles and raises its flag when some machine k produced at least m + k - 1
answers that all agree, after binarizing, with the answers its side gave.

Two engines compute trials.  ``exact`` plays the test through the arena,
running the assistants as written.  ``fast`` uses that a machine's j-th
answer arrives after a fixed cumulative number of cycles, precomputes when
each machine would first count, and walks the random answers down a trie of
machine answer prefixes.  Both give the same verdicts.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.stats import beta

from .arena import Continue, Finish, Tester, TestRun
from .core import DEFAULT_ALPHABET, MachineDescription, Side, num_to_word
from .enumerators import Enumerator, zoo_first_enum
from .oracle import RandomOracle
from .participants import MachineParticipant, Participant
from .vm import MachineInstance, RunBudget


def binarize(a: str | None, alphabet=DEFAULT_ALPHABET) -> int:
    if a is None:
        raise ValueError("a divergence has no binary value")
    return 0 if a in ("", num_to_word(0, alphabet)) else 1


def bound(p0: float, m: int) -> float:
    p = max(p0, 1.0 - p0)
    if p >= 1.0:
        raise ValueError("the bound needs max(p0, 1 - p0) < 1")
    return p ** m / (1.0 - p)


def assistant_answers(desc: MachineDescription, n: int) -> list[int]:
    """Binarized answers of ``desc`` on n empty questions within n cycles in total."""
    inst = MachineInstance(desc)
    left = n
    out: list[int] = []
    while len(out) < n:
        inst.begin("")
        res = inst.run(RunBudget(left))
        if not res.answered:
            break
        left -= res.cycles
        out.append(binarize(res.answer, desc.alphabet))
    return out


@dataclass
class AssistantState:
    side: Side
    m: int
    received: list[int] = field(default_factory=list)

    def step(self, n: int, E: Enumerator) -> int:
        if len(self.received) != n:
            raise ValueError("the assistant needs exactly n received answers")
        for k in range(1, n + 1):
            got = assistant_answers(E(k).desc, n)
            j = len(got)
            if j >= self.m + k - 1 and got == self.received[:j]:
                return 1
        return 0


def prob_supervisor(dl: int, dr: int) -> Continue | Finish:
    if (dl, dr) == (0, 0):
        return Continue("")
    if (dl, dr) == (0, 1):
        return Finish(Side.LEFT)
    return Finish(Side.RIGHT)


class _ProbRun:
    def __init__(self, m: int, E: Enumerator):
        self.E = E
        self.left = AssistantState(Side.LEFT, m)
        self.right = AssistantState(Side.RIGHT, m)
        self.n = 0
        self.flags: list[tuple[int, int]] = []

    def start(self):
        return Continue("")

    def on_answers(self, left: str, right: str):
        self.n += 1
        self.left.received.append(binarize(left))
        self.right.received.append(binarize(right))
        dl, dr = self.left.step(self.n, self.E), self.right.step(self.n, self.E)
        self.flags.append((dl, dr))
        return prob_supervisor(dl, dr)


@dataclass(frozen=True)
class ProbInterrogator:
    m: int
    E: Enumerator = field(default_factory=zoo_first_enum, compare=False)
    reduces_to_tm: str = "yes"

    @property
    def name(self) -> str:
        return f"prob(m={self.m})"

    def open(self) -> _ProbRun:
        return _ProbRun(self.m, self.E)


class _ZSession:
    def __init__(self, oracle: RandomOracle):
        self.oracle = oracle
        self.n = 0
        self.cycles = 0

    def ask(self, question: str) -> str:
        self.n += 1
        return num_to_word(self.oracle.bit(self.n - 1), self.oracle.alphabet)


@dataclass(frozen=True)
class RandomSP:
    """Z: the nth answer is the nth oracle symbol as a one-letter number."""

    p0: float
    seed: int
    reduces_to_tm: str = "no"

    @property
    def name(self) -> str:
        return f"Z(p0={self.p0},seed={self.seed})"

    def session(self) -> _ZSession:
        return _ZSession(RandomOracle(self.p0, self.seed))


@dataclass(frozen=True)
class TrialResult:
    seed: int
    passed: bool
    steps: int                  # steps until the deciding event, or the cap
    reason: str
    flags: tuple = ()           # per-step (left, right) flags of the left test (exact engine)

    def to_json(self) -> dict:
        return {"seed": self.seed, "passed": self.passed, "steps": self.steps, "reason": self.reason}


def _classify(n_s: int | None, n_z: int | None, n_d: int | None, cap: int) -> tuple[bool, int, str]:
    """Trial verdict from the first steps at which the subject-side flag,
    the Z-side flag and a subject divergence occur."""
    inf = cap + 1
    s, z, d = (x if x is not None and x <= cap else inf for x in (n_s, n_z, n_d))
    first = min(s, z)
    if d < inf and d <= first:
        return False, d, "subject-diverged"
    if first == inf:
        return True, cap, "step-cap"
    if s < z:
        return False, s, "subject-found"
    return True, z, "z-flagged-first" if z < s else "tie"


def prob_test(subject: Participant, m: int, p0: float, seed: int, step_cap: int = 2000,
              E: Enumerator | None = None) -> TrialResult:
    """One trial, both orientations played through the arena."""
    E = E or zoo_first_enum()
    tester = Tester(ProbInterrogator(m, E), RandomSP(p0, seed), name=f"prob(m={m},p0={p0})")
    failed = []
    flags = ()
    steps = 0
    for side in (Side.LEFT, Side.RIGHT):
        run = TestRun(tester, subject, side, step_cap)
        t = run.run()
        term = t.termination
        fail = (term.kind == "finished" and term.side is side) or term.kind == "subject_diverged"
        failed.append(fail)
        steps = max(steps, term.step)
        if side is Side.LEFT:
            flags = tuple(run._irun.flags)
    passed = not all(failed)
    reason = "step-cap" if steps >= step_cap and passed else ("passed" if passed else "failed")
    return TrialResult(seed, passed, steps, reason, flags)


# Fast engine -----------------------------------------------------------------

@dataclass
class _MachineTable:
    bits: list[int]             # binarized answers in order
    cum: list[int]              # cumulative cycles after each answer

    def j(self, n: int) -> int:
        """Answers produced on n questions within n cycles."""
        import bisect
        return min(n, bisect.bisect_right(self.cum, n))


def _table(desc: MachineDescription, cap: int) -> _MachineTable:
    inst = MachineInstance(desc)
    left, total = cap, 0
    bits, cum = [], []
    while len(bits) < cap:
        inst.begin("")
        res = inst.run(RunBudget(left))
        if not res.answered:
            break
        left -= res.cycles
        total += res.cycles
        bits.append(binarize(res.answer, desc.alphabet))
        cum.append(total)
    return _MachineTable(bits, cum)


class FastEngine:
    """Precomputed assistant data for one (enumerator, m, cap)."""

    def __init__(self, m: int, cap: int, E: Enumerator | None = None):
        self.m, self.cap = m, cap
        self.E = E or zoo_first_enum()
        # For machine k the flag can first be raised at step n_k = the first
        # n >= k with j_k(n) >= m + k - 1; it is raised there iff the first
        # j_k(n_k) received bits equal the machine's.
        self.events: list[tuple[int, int, tuple[int, ...]]] = []   # (n_k, k, prefix)
        for k in range(1, cap - m + 2):
            tab = _table(self.E(k).desc, cap)
            need = m + k - 1
            if len(tab.bits) < need or tab.cum[need - 1] > cap:
                continue
            n_k = max(k, need, tab.cum[need - 1])
            self.events.append((n_k, k, tuple(tab.bits[:tab.j(n_k)])))
        self.events.sort()
        self._trie: dict = {}
        for n_k, k, prefix in self.events:
            node = self._trie
            for b in prefix:
                node = node.setdefault(b, {})
            node["end"] = min(node.get("end", n_k), n_k)

    def first_flag(self, bit) -> int | None:
        """First step at which a side receiving ``bit(0), bit(1), ...`` is flagged."""
        node, depth, best = self._trie, 0, None
        while True:
            if "end" in node and (best is None or node["end"] < best):
                best = node["end"]
            b = bit(depth)
            if b is None or b not in node:
                return best
            node = node[b]
            depth += 1

    def subject_profile(self, subject: Participant) -> tuple[int | None, int | None]:
        """(first flag step, divergence step) for a subject's own answers."""
        s = subject.session()
        bits: list[int] = []
        n_d = None
        for n in range(1, self.cap + 1):
            a = s.ask("")
            if a is None:
                n_d = n
                break
            bits.append(binarize(a))
        n_s = self.first_flag(lambda i: bits[i] if i < len(bits) else None)
        return n_s, n_d

    def trial(self, profile: tuple[int | None, int | None], p0: float, seed: int) -> TrialResult:
        n_s, n_d = profile
        z = RandomOracle(p0, seed)
        n_z = self.first_flag(z.bit)
        passed, steps, reason = _classify(n_s, n_z, n_d, self.cap)
        return TrialResult(seed, passed, steps, reason)


@lru_cache(maxsize=16)
def fast_engine(m: int, cap: int) -> FastEngine:
    return FastEngine(m, cap)


# Monte Carlo -----------------------------------------------------------------

def trial_seed(master_seed: int, i: int) -> int:
    return int(np.random.SeedSequence([master_seed, i]).generate_state(1, dtype=np.uint32)[0])


def clopper_pearson_upper(passes: int, trials: int, level: float = 0.95) -> float:
    if passes >= trials:
        return 1.0
    return float(beta.ppf(level, passes + 1, trials - passes))


@dataclass
class ProbOutcome:
    subject: str
    m: int
    p0: float
    trials: int
    master_seed: int
    results: list[TrialResult]
    engine: str
    step_cap: int

    @property
    def passes(self) -> int:
        return sum(r.passed for r in self.results)

    @property
    def estimate(self) -> float:
        return self.passes / self.trials

    @property
    def bound(self) -> float:
        return bound(self.p0, self.m)

    @property
    def ci_upper(self) -> float:
        return clopper_pearson_upper(self.passes, self.trials)

    @property
    def margin_limit(self) -> float:
        b = self.bound
        return b + 3.0 * (b * (1.0 - b) / self.trials) ** 0.5 if b < 1 else b

    def to_json(self) -> dict:
        reasons: dict[str, int] = {}
        for r in self.results:
            reasons[r.reason] = reasons.get(r.reason, 0) + 1
        return {"subject": self.subject, "m": self.m, "p0": self.p0, "trials": self.trials,
                "passes": self.passes, "estimate": self.estimate, "ci_upper": self.ci_upper,
                "bound": self.bound, "engine": self.engine, "step_cap": self.step_cap,
                "seeds": {"master": self.master_seed,
                          "rule": "trial i uses SeedSequence([master, i]).generate_state(1)[0]"},
                "reasons": dict(sorted(reasons.items()))}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)


def monte_carlo(subject: Participant | MachineDescription, m: int, p0: float, trials: int,
                master_seed: int, engine: str = "fast", step_cap: int = 2000) -> ProbOutcome:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    bound(p0, m)
    if isinstance(subject, MachineDescription):
        subject = MachineParticipant(subject)
    seeds = [trial_seed(master_seed, i) for i in range(trials)]
    if engine == "fast":
        eng = fast_engine(m, step_cap)
        profile = eng.subject_profile(subject)
        results = [eng.trial(profile, p0, s) for s in seeds]
    elif engine == "exact":
        results = [prob_test(subject, m, p0, s, step_cap) for s in seeds]
    else:
        raise ValueError(f"unknown engine {engine!r}")
    return ProbOutcome(subject.name, m, p0, trials, master_seed, results, engine, step_cap)
