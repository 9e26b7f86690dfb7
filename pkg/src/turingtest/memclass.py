"""Memory-bounded machines on empty-question sessions.

Machines with at most ``s`` states, an initial work tape of at most ``d``
cells and the blank oracle are explored in tree normal form: the
empty-question session is simulated and a transition is chosen only when
its key is first reached.  During such a session the input and oracle
tapes are blank, so a key is just (state, work symbol) and only the work
move matters.  New states are numbered in order of first use and decided
final or not when created; final marks play no part in the answers and
are left out.

Every leaf of the branching is a class of machines that behave identically
on empty questions.  A leaf is rejected when the scanned segment exceeds
``w`` cells, when a configuration repeats inside one question, when the
machine gets stuck, or when all ``s`` states are used and none is final.
It survives when the configuration between two questions repeats, which
makes the answer sequence periodic from then on.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator

from .core import DEFAULT_ALPHABET, MOVE_DELTA, Alphabet, MachineDescription, Transition
from .enumerators import Enumerator, RunnableItem
from .participants import Generator
from .vm import RunBudget


class SizeCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class MemoryBounds:
    s: int
    d: int
    w: int

    def __post_init__(self):
        if self.s < 1 or self.d < 0 or self.w < 1:
            raise ValueError("need s >= 1, d >= 0, w >= 1")


Action = tuple[int, str, int, str | None]  # next state, write, work move, emit


@dataclass
class ClassLeaf:
    index: int
    initial_work: str
    n_states: int
    finals: frozenset[int]
    table: dict[tuple[int, str], Action | None]
    verdict: str            # survive, segment, repeat, stuck, no-final
    question: int           # question during or after which the verdict fell
    answers: tuple[str, ...] = ()
    period_start: int = 0
    period: int = 0

    @property
    def survived(self) -> bool:
        return self.verdict == "survive"

    def lambda_answer(self, k: int) -> str:
        """Answer to the kth empty question (survivors only)."""
        q = len(self.answers)
        if k <= q:
            return self.answers[k - 1]
        return self.answers[self.period_start + (k - q - 1) % self.period]

    def key(self) -> tuple:
        return (self.initial_work, self.n_states, self.finals,
                tuple(sorted(self.table.items(), key=lambda kv: (kv[0][0], kv[0][1]))))

    def machine(self, alphabet: Alphabet = DEFAULT_ALPHABET, name: str = "") -> MachineDescription:
        states = tuple(f"q{i}" for i in range(self.n_states))
        blank = alphabet.blank
        moves = {v: k for k, v in MOVE_DELTA.items()}
        trans = [Transition(states[st], sym, blank, blank, states[a[0]], a[1], moves[a[2]],
                            "S", "S", a[3])
                 for (st, sym), a in sorted(self.table.items(),
                                            key=lambda kv: (kv[0][0], alphabet.bsymbols.index(kv[0][1])))
                 if a is not None]
        return MachineDescription(states, states[0], tuple((states[i], None) for i in sorted(self.finals)),
                                  tuple(trans), self.initial_work, alphabet=alphabet,
                                  name=name or f"class{self.index}")

    def to_json(self) -> dict:
        return {"index": self.index, "verdict": self.verdict, "question": self.question,
                "initial_work": self.initial_work, "states": self.n_states,
                "finals": sorted(self.finals),
                "table": [[st, sym] + (list(a) if a else [None]) for (st, sym), a in
                          sorted(self.table.items())]}


def _initial_tapes(d: int, alphabet: Alphabet) -> list[str]:
    seen, out = set(), []
    blank = alphabet.blank
    for length in range(d + 1):
        for word in itertools.product(alphabet.bsymbols, repeat=length):
            w = "".join(word).rstrip(blank)
            if w not in seen:
                seen.add(w)
                out.append(w)
    return out


class _Run:
    """Mutable simulation state of one branch."""

    __slots__ = ("table", "finals", "n_states", "tape", "head", "smin", "smax", "state",
                 "seen_cfg", "seen_q", "answers", "out", "q")

    def copy(self) -> "_Run":
        r = _Run()
        r.table = dict(self.table)
        r.finals = self.finals
        r.n_states = self.n_states
        r.tape = dict(self.tape)
        r.head, r.smin, r.smax, r.state = self.head, self.smin, self.smax, self.state
        r.seen_cfg = set(self.seen_cfg)
        r.seen_q = dict(self.seen_q)
        r.answers = list(self.answers)
        r.out = list(self.out)
        r.q = self.q
        return r

    def window(self, blank: str) -> tuple:
        return (self.head - self.smin,
                tuple(self.tape.get(i, blank) for i in range(self.smin, self.smax + 1)))


class _Explorer:
    def __init__(self, bounds: MemoryBounds, alphabet: Alphabet, max_classes: int | None):
        self.b = bounds
        self.alphabet = alphabet
        self.blank = alphabet.blank
        self.symbols = alphabet.bsymbols
        self.max_classes = max_classes
        self.count = 0
        self.options = [(w, mv, e) for w in self.symbols for mv in (0, 1, -1)
                        for e in (None,) + self.symbols]

    def _leaf(self, r: _Run, tape0: str, verdict: str, **kw) -> ClassLeaf:
        self.count += 1
        if self.max_classes is not None and self.count > self.max_classes:
            raise SizeCapExceeded(f"more than {self.max_classes} classes for {self.b}")
        return ClassLeaf(self.count, tape0, r.n_states, r.finals, dict(r.table), verdict, r.q,
                         tuple(r.answers), **kw)

    def _answer(self, out: list[str]) -> str:
        chars = []
        for c in out:
            if c == self.blank:
                break
            chars.append(c)
        return "".join(chars)

    def explore(self) -> Iterator[ClassLeaf]:
        for tape0 in _initial_tapes(self.b.d, self.alphabet):
            for first_final in (True, False):
                r = _Run()
                r.table = {}
                r.finals = frozenset({0}) if first_final else frozenset()
                r.n_states = 1
                r.tape = {i: c for i, c in enumerate(tape0) if c != self.blank}
                r.head = r.smin = r.smax = 0
                r.state = 0
                r.seen_cfg = set()
                r.answers, r.out = [], []
                r.q = 0
                r.seen_q = {r.window(self.blank): 0}
                if not first_final and self.b.s == 1:
                    yield self._leaf(r, tape0, "no-final")
                    continue
                r.q = 1
                yield from self._run(r, tape0)

    def _run(self, r: _Run, tape0: str) -> Iterator[ClassLeaf]:
        blank, w = self.blank, self.b.w
        while True:
            if r.state in r.finals:
                r.answers.append(self._answer(r.out))
                key = r.window(blank)
                if key in r.seen_q:
                    p = r.seen_q[key]
                    yield self._leaf(r, tape0, "survive", period_start=p, period=r.q - p)
                    return
                r.seen_q[key] = r.q
                r.q += 1
                r.state = 0
                r.out = []
                r.seen_cfg = set()
                continue
            sym = r.tape.get(r.head, blank)
            k = (r.state, sym)
            if k not in r.table:
                yield from self._branch(r, tape0, k)
                return
            act = r.table[k]
            if act is None:
                yield self._leaf(r, tape0, "stuck")
                return
            cfg = (r.state,) + r.window(blank)
            if cfg in r.seen_cfg:
                yield self._leaf(r, tape0, "repeat")
                return
            r.seen_cfg.add(cfg)
            nxt, write, mv, emit = act
            if write == blank:
                r.tape.pop(r.head, None)
            else:
                r.tape[r.head] = write
            r.head += mv
            if r.head < r.smin:
                r.smin = r.head
            elif r.head > r.smax:
                r.smax = r.head
            if emit is not None:
                r.out.append(emit)
            r.state = nxt
            if r.smax - r.smin + 1 > w:
                yield self._leaf(r, tape0, "segment")
                return

    def _branch(self, r: _Run, tape0: str, k) -> Iterator[ClassLeaf]:
        stuck = r.copy()
        stuck.table[k] = None
        yield self._leaf(stuck, tape0, "stuck")
        targets = [(i, r.finals, r.n_states) for i in range(r.n_states)]
        if r.n_states < self.b.s:
            new = r.n_states
            targets.append((new, r.finals | {new}, new + 1))
            targets.append((new, r.finals, new + 1))
        for nxt, finals, n_states in targets:
            if n_states == self.b.s and not finals:
                for _ in self.options:
                    c = r.copy()
                    c.finals, c.n_states = finals, n_states
                    c.table[k] = (nxt,) + _
                    yield self._leaf(c, tape0, "no-final")
                continue
            for opt in self.options:
                c = r.copy()
                c.finals, c.n_states = finals, n_states
                c.table[k] = (nxt,) + opt
                yield from self._run(c, tape0)


def explore_classes(bounds: MemoryBounds, alphabet: Alphabet = DEFAULT_ALPHABET,
                    max_classes: int | None = 2_000_000) -> Iterator[ClassLeaf]:
    """Every class leaf in a fixed depth-first order."""
    return _Explorer(bounds, alphabet, max_classes).explore()


HALT = MachineDescription(("q0",), "q0", (("q0", None),), name="halt")


@dataclass
class MemoryClassResult:
    bounds: MemoryBounds
    N: int
    survivors: list[ClassLeaf]
    verdicts: Counter = field(default_factory=Counter)
    alphabet: Alphabet = DEFAULT_ALPHABET

    def __post_init__(self):
        self._by_key = {leaf.key(): leaf for leaf in self.survivors}
        self.R = _SurvivorEnum(self)
        self.Egen = _GeneratorEnum(self)

    def find(self, desc: MachineDescription) -> ClassLeaf | None:
        key = project(desc, self.bounds)
        return None if key is None else self._by_key.get(key)

    def position(self, desc: MachineDescription) -> int | None:
        leaf = self.find(desc)
        return None if leaf is None else self.survivors.index(leaf) + 1

    def summary(self) -> dict:
        return {"s": self.bounds.s, "d": self.bounds.d, "w": self.bounds.w, "N": self.N,
                "survivors": len(self.survivors), "verdicts": dict(sorted(self.verdicts.items()))}


class _SurvivorEnum(Enumerator):
    def __init__(self, res: MemoryClassResult):
        self.res = res
        self.name = f"mem-R({res.bounds.s},{res.bounds.d},{res.bounds.w})"

    def item(self, n: int) -> RunnableItem:
        surv = self.res.survivors
        if n <= len(surv):
            return RunnableItem(surv[n - 1].machine(self.res.alphabet), None, RunBudget())
        return RunnableItem(HALT, None, RunBudget())


class _GeneratorEnum(Enumerator):
    def __init__(self, res: MemoryClassResult):
        self.res = res
        self.name = f"mem-E({res.bounds.s},{res.bounds.d},{res.bounds.w})"
        self._cache: dict[int, Generator] = {}

    def item(self, n: int) -> Generator:
        if n not in self._cache:
            self._cache[n] = self._make(n)
        return self._cache[n]

    def _make(self, n: int) -> Generator:
        N, surv = self.res.N, self.res.survivors
        if n <= min(N, len(surv)):
            leaf = surv[n - 1]

            def answer(k: int, leaf=leaf) -> str:
                return leaf.lambda_answer(k) if k <= N else ""
        else:
            def answer(k: int) -> str:
                return ""
        return Generator(f"egen{n}", answer, reduces_to_tm="yes", total=True)


def memory_class_enum(s: int, d: int, w: int, alphabet: Alphabet = DEFAULT_ALPHABET,
                      max_classes: int | None = 2_000_000) -> MemoryClassResult:
    bounds = MemoryBounds(s, d, w)
    verdicts: Counter = Counter()
    survivors = []
    n = 0
    for leaf in explore_classes(bounds, alphabet, max_classes):
        n += 1
        verdicts[leaf.verdict] += 1
        if leaf.survived:
            survivors.append(leaf)
    return MemoryClassResult(bounds, n, survivors, verdicts, alphabet)


def project(desc: MachineDescription, bounds: MemoryBounds) -> tuple | None:
    """The class key of ``desc``'s empty-question behaviour, or ``None`` when
    it is not a surviving class within ``bounds``."""
    ab = desc.alphabet
    blank = ab.blank
    if len(desc.states) > bounds.s or len(desc.initial_work) > bounds.d:
        return None
    if any(c not in ab.bsymbols for c in desc.initial_work):
        return None
    table = {(t.state, t.work): t for t in desc.transitions if t.input == blank and t.oracle == blank}
    finals = desc.final_marks
    number = {desc.initial: 0}
    found: dict[tuple[int, str], Action | None] = {}
    tape = {i: c for i, c in enumerate(desc.initial_work) if c != blank}
    head = smin = smax = 0
    state = desc.initial

    def window():
        return (head - smin, tuple(tape.get(i, blank) for i in range(smin, smax + 1)))

    seen_q = {window()}
    seen_cfg: set = set()
    while True:
        if state in finals:
            key = window()
            if key in seen_q:
                break
            seen_q.add(key)
            state = desc.initial
            seen_cfg = set()
            continue
        sym = tape.get(head, blank)
        t = table.get((state, sym))
        if t is None or t.write not in ab.bsymbols:
            return None
        cfg = (state,) + window()
        if cfg in seen_cfg:
            return None
        seen_cfg.add(cfg)
        if t.next not in number:
            number[t.next] = len(number)
        found[(number[state], sym)] = (number[t.next], t.write, MOVE_DELTA[t.work_move], t.emit)
        if t.write == blank:
            tape.pop(head, None)
        else:
            tape[head] = t.write
        head += MOVE_DELTA[t.work_move]
        smin, smax = min(smin, head), max(smax, head)
        if smax - smin + 1 > bounds.w:
            return None
        state = t.next
    tape0 = desc.initial_work.rstrip(blank)
    fin = frozenset(number[s] for s in number if s in finals)
    return (tape0, len(number), fin, tuple(sorted(found.items(), key=lambda kv: (kv[0][0], kv[0][1]))))
