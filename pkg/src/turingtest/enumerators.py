"""Enumerators of runnable machines and the generators built from them."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .core import DEFAULT_ALPHABET, Alphabet, MachineDescription, bar
from .encoding import decode, encode, encoding_space
from .participants import Generator, MachineParticipant, TimeLimited
from .vm import RunBudget


@dataclass(frozen=True)
class RunnableItem:
    """A plain machine, or a machine under a time-limit supervisor."""

    desc: MachineDescription
    time_limit: int | None = None
    budget: RunBudget = field(default_factory=RunBudget, compare=False)

    @property
    def encoding(self) -> str:
        return encode(self.desc)

    @property
    def label(self) -> str:
        name = self.desc.name or self.encoding
        return name if self.time_limit is None else f"{name}|{self.time_limit}"

    @property
    def name(self) -> str:
        return self.label

    @property
    def reduces_to_tm(self) -> str:
        return "yes"

    def participant(self):
        if self.time_limit is None:
            return MachineParticipant(self.desc, self.budget)
        return TimeLimited(self.desc, self.time_limit)

    def session(self):
        return self.participant().session()

    def to_json(self) -> dict:
        return {"encoding": self.encoding, "time_limit": self.time_limit,
                "name": self.desc.name or None}


class Enumerator:
    """Total map ``n >= 1 -> RunnableItem``; subclasses implement :meth:`item`."""

    name = "enumerator"

    def __call__(self, n: int) -> RunnableItem:
        if n < 1:
            raise ValueError("enumerators are indexed from 1")
        return self.item(n)

    def item(self, n: int) -> RunnableItem:
        raise NotImplementedError

    def prefix(self, count: int) -> list[RunnableItem]:
        return [self(n) for n in range(1, count + 1)]


class UniversalEnum(Enumerator):
    """The kth valid encoding in shortlex order, decoded."""

    name = "universal"

    def __init__(self, alphabet: Alphabet = DEFAULT_ALPHABET, budget: RunBudget | None = None):
        self.alphabet = alphabet
        self.budget = budget or RunBudget()
        self.space = encoding_space(alphabet)
        self._words: list[str] = []
        self._iter: Iterator[str] | None = None

    def word(self, k: int) -> str:
        if k > len(self._words) + 10_000:
            return self.space.unrank(k)
        if self._iter is None:
            self._iter = self.space.iter_all()
        while len(self._words) < k:
            self._words.append(next(self._iter))
        return self._words[k - 1]

    def item(self, n: int) -> RunnableItem:
        return RunnableItem(decode(self.word(n), self.alphabet), None, self.budget)


_UNIVERSAL: dict[Alphabet, UniversalEnum] = {}


def universal_enum(k: int, alphabet: Alphabet = DEFAULT_ALPHABET) -> MachineDescription:
    if alphabet not in _UNIVERSAL:
        _UNIVERSAL[alphabet] = UniversalEnum(alphabet)
    return _UNIVERSAL[alphabet](k).desc


class ListFirstEnum(Enumerator):
    """A fixed list of machines followed by the universal enumeration.

    Still enumerates every machine; it only moves some of them to the front
    so that tests against them finish within a few thousand steps.
    """

    def __init__(self, machines: Sequence[MachineDescription], rest: Enumerator | None = None,
                 name: str = "zoo-first", budget: RunBudget | None = None):
        self.machines = list(machines)
        self.rest = rest or UniversalEnum(budget=budget)
        self.budget = budget or RunBudget()
        self.name = name

    def item(self, n: int) -> RunnableItem:
        if n <= len(self.machines):
            return RunnableItem(self.machines[n - 1], None, self.budget)
        return self.rest(n - len(self.machines))

    def index_of(self, desc: MachineDescription) -> int | None:
        target = desc.canonical()
        for i, m in enumerate(self.machines, 1):
            if m.canonical() == target:
                return i
        return None


def zoo_first_enum(budget: RunBudget | None = None) -> ListFirstEnum:
    from . import zoo
    return ListFirstEnum(zoo.machines(), budget=budget)


class FunctionEnum(Enumerator):
    def __init__(self, fn: Callable[[int], RunnableItem], name: str = "function"):
        self.fn = fn
        self.name = name

    def item(self, n: int) -> RunnableItem:
        return self.fn(n)


def enum_prefix(E: Enumerator, N: int) -> set[RunnableItem]:
    if N < 1:
        raise ValueError("N must be at least 1")
    return set(E.prefix(N))


def pair_of(n: int) -> tuple[int, int]:
    """The nth pair of the order (1,1), (1,2), (2,1), (1,3), (2,2), (3,1), ..."""
    if n < 1:
        raise ValueError("pairs are indexed from 1")
    s = 2
    while (s - 1) * s // 2 < n:
        s += 1
    i = n - (s - 2) * (s - 1) // 2
    return i, s - i


def index_of_pair(i: int, j: int) -> int:
    s = i + j
    return (s - 2) * (s - 1) // 2 + i


def time_limit(m: MachineDescription | RunnableItem, t: int) -> RunnableItem:
    desc = m.desc if isinstance(m, RunnableItem) else m
    if t < 1:
        raise ValueError("time limit must be positive")
    return RunnableItem(desc, t)


class TimeLimitedEnum(Enumerator):
    """n -> base(i)|j for the nth pair (i, j)."""

    def __init__(self, base: Enumerator | None = None):
        self.base = base or UniversalEnum()
        self.name = f"time-limited({self.base.name})"

    def item(self, n: int) -> RunnableItem:
        i, j = pair_of(n)
        return time_limit(self.base(i), j)


def time_limited_enum(base: Enumerator | None = None) -> TimeLimitedEnum:
    return TimeLimitedEnum(base)


class DiagonalPreconditionError(AssertionError):
    pass


def tilde_generator(m: MachineDescription, budget: RunBudget) -> Generator:
    """Replays ``m``'s empty-question session; after a divergence every answer is empty."""
    if budget.max_cycles is None:
        raise ValueError("the tilde generator needs a bounded budget")
    session = MachineParticipant(m, budget).session()
    cache: list[str | None] = []

    def answer(n: int) -> str:
        while len(cache) < n:
            cache.append(session.ask(""))
        return cache[n - 1] or ""

    return Generator(f"tilde({m.name or encode(m)})", answer, reduces_to_tm="yes")


def diagonal_answer(E: Enumerator, n: int) -> str:
    """bar of E(n)'s answer to its nth empty question."""
    item = E(n)
    if isinstance(item, Generator) and item.total:
        return bar(item.answer(n))
    s = item.session()
    last = None
    for k in range(n):
        last = s.ask("")
        if last is None:
            raise DiagonalPreconditionError(
                f"item {n} ({item.name}) diverged on empty question {k + 1}")
    return bar(last)


def diagonal_generator(E: Enumerator) -> Generator:
    cache: dict[int, str] = {}

    def answer(n: int) -> str:
        if n not in cache:
            cache[n] = diagonal_answer(E, n)
        return cache[n]

    return Generator(f"diag({E.name})", answer, reduces_to_tm="yes", total=True)
