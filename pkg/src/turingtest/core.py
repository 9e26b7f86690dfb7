"""Alphabets, words, the number/word identification and machine descriptions.

Words are plain ``str`` objects whose characters are alphabet symbols; the
empty string is the empty word.  Every symbol, including the blank, is a
single character.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, NamedTuple, Sequence


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"

    @property
    def other(self) -> "Side":
        return Side.RIGHT if self is Side.LEFT else Side.LEFT

    @property
    def mark(self) -> str:
        return self.value.capitalize()


MOVES = ("S", "R", "L")
MOVE_DELTA = {"S": 0, "R": 1, "L": -1}


@dataclass(frozen=True)
class Alphabet:
    """The answer alphabet plus a blank symbol that is not part of it."""

    symbols: tuple[str, ...] = ("a", "b")
    blank: str = "_"

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if len(self.symbols) < 2:
            raise ValueError("an alphabet needs at least two symbols")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError(f"duplicate symbols in {self.symbols!r}")
        for s in (*self.symbols, self.blank):
            if len(s) != 1 or s.isspace():
                raise ValueError(f"symbols must be single visible characters, got {s!r}")
        if self.blank in self.symbols:
            raise ValueError("blank must not belong to the alphabet")

    @property
    def letter(self) -> str:
        """The designated letter prepended by :func:`bar`."""
        return self.symbols[0]

    @property
    def bsymbols(self) -> tuple[str, ...]:
        """Alphabet with the blank, blank first (the order used by the encoding)."""
        return (self.blank, *self.symbols)

    def is_word(self, w: str) -> bool:
        return all(c in self.symbols for c in w)

    def is_bword(self, w: str) -> bool:
        return all(c == self.blank or c in self.symbols for c in w)

    def check_word(self, w: str) -> str:
        if not self.is_word(w):
            raise ValueError(f"{w!r} is not a word over {''.join(self.symbols)}")
        return w


DEFAULT_ALPHABET = Alphabet()


def bar(w: str, alphabet: Alphabet = DEFAULT_ALPHABET) -> str:
    return alphabet.letter + alphabet.check_word(w)


def num_to_word(n: int, alphabet: Alphabet = DEFAULT_ALPHABET) -> str:
    """Shortlex bijection from ``n >= 0`` onto the nonempty words."""
    if n < 0:
        raise ValueError("numbers are non-negative")
    k = len(alphabet.symbols)
    length, block = 1, k
    while n >= block:
        n -= block
        length += 1
        block *= k
    digits = []
    for _ in range(length):
        n, r = divmod(n, k)
        digits.append(alphabet.symbols[r])
    return "".join(reversed(digits))


def word_to_num(w: str, alphabet: Alphabet = DEFAULT_ALPHABET) -> int:
    if not w:
        raise ValueError("the empty word is not a number notation")
    alphabet.check_word(w)
    k = len(alphabet.symbols)
    index = {s: i for i, s in enumerate(alphabet.symbols)}
    offset = sum(k**l for l in range(1, len(w)))
    value = 0
    for c in w:
        value = value * k + index[c]
    return offset + value


def parse_number(w: str, alphabet: Alphabet = DEFAULT_ALPHABET) -> int | None:
    """Like :func:`word_to_num` but ``None`` for words that denote no number."""
    if not w or not alphabet.is_word(w):
        return None
    return word_to_num(w, alphabet)


def prefix_rel(eta: Sequence[str], mu: Sequence[str]) -> bool:
    """The strict-beginning relation on finite word sequences."""
    if len(eta) == 0:
        return len(mu) > 0
    return len(eta) < len(mu) and list(mu[: len(eta)]) == list(eta)


class Transition(NamedTuple):
    state: str
    work: str
    input: str
    oracle: str
    next: str
    write: str
    work_move: str = "S"
    input_move: str = "S"
    oracle_move: str = "S"
    emit: str | None = None

    @property
    def key(self) -> tuple[str, str, str, str]:
        return (self.state, self.work, self.input, self.oracle)

    @property
    def action(self) -> tuple:
        return self[4:]


class Violation(NamedTuple):
    field: str
    rule: str
    detail: str = ""

    def __str__(self):
        return f"{self.field}: {self.rule}" + (f" ({self.detail})" if self.detail else "")


@dataclass(frozen=True)
class MachineDescription:
    """A deterministic machine with work, input, oracle and output tapes.

    ``finals`` maps each final state to ``None`` or a :class:`Side` mark and is
    stored as a tuple of pairs so that the description stays hashable.
    ``work_alphabet`` lists the blank and the answer symbols first, followed by
    any extra work symbols.
    """

    states: tuple[str, ...]
    initial: str
    finals: tuple[tuple[str, Side | None], ...]
    transitions: tuple[Transition, ...] = ()
    initial_work: str = ""
    work_alphabet: tuple[str, ...] | None = None
    alphabet: Alphabet = DEFAULT_ALPHABET
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(
            self, "finals",
            tuple((s, None if m is None else Side(m)) for s, m in self.finals))
        object.__setattr__(
            self, "transitions", tuple(Transition(*t) for t in self.transitions))
        if self.work_alphabet is None:
            object.__setattr__(self, "work_alphabet", self.alphabet.bsymbols)
        else:
            object.__setattr__(self, "work_alphabet", tuple(self.work_alphabet))

    @property
    def final_marks(self) -> dict[str, Side | None]:
        return dict(self.finals)

    @property
    def extra_work(self) -> tuple[str, ...]:
        b = set(self.alphabet.bsymbols)
        return tuple(s for s in self.work_alphabet if s not in b)

    def table(self) -> dict[tuple[str, str, str, str], tuple]:
        return {t.key: t.action for t in self.transitions}

    def canonical(self) -> "MachineDescription":
        """Rename states to ``q0, q1, ...`` and extra work symbols to a fixed pool,
        in declared order, and sort the transitions by symbol index."""
        smap = {s: f"q{i}" for i, s in enumerate(self.states)}
        wmap = {s: s for s in self.alphabet.bsymbols}
        for s, c in zip(self.extra_work, extra_symbol_pool(self.alphabet)):
            wmap[s] = c
        worder = {s: i for i, s in enumerate(self.alphabet.bsymbols + self.extra_work)}
        border = {s: i for i, s in enumerate(self.alphabet.bsymbols)}
        sorder = {s: i for i, s in enumerate(self.states)}
        trans = sorted(
            self.transitions,
            key=lambda t: (sorder[t.state], worder[t.work], border[t.input], border[t.oracle]))
        return replace(
            self,
            states=tuple(smap[s] for s in self.states),
            initial=smap[self.initial],
            finals=tuple(sorted(((smap[s], m) for s, m in self.finals),
                                key=lambda p: int(p[0][1:]))),
            transitions=tuple(
                t._replace(state=smap[t.state], next=smap[t.next],
                           work=wmap[t.work], write=wmap[t.write])
                for t in trans),
            initial_work="".join(wmap[c] for c in self.initial_work),
            work_alphabet=self.alphabet.bsymbols + tuple(wmap[s] for s in self.extra_work),
        )

    def with_name(self, name: str) -> "MachineDescription":
        return replace(self, name=name)


def extra_symbol_pool(alphabet: Alphabet) -> Iterable[str]:
    """Names given to extra work symbols by :meth:`MachineDescription.canonical`."""
    taken = set(alphabet.bsymbols)
    i = 0
    while True:
        c = chr(ord("A") + i) if i < 26 else chr(0x3B1 + i - 26)
        i += 1
        if c not in taken:
            yield c


def validate(desc: MachineDescription) -> list[Violation]:
    """Every broken invariant of ``desc``; an empty list means valid."""
    out: list[Violation] = []
    ab = desc.alphabet
    states = set(desc.states)
    if not desc.states:
        out.append(Violation("states", "states-empty"))
    dup = [s for s, c in Counter(desc.states).items() if c > 1]
    if dup:
        out.append(Violation("states", "duplicate-state", ", ".join(dup)))
    if desc.initial not in states:
        out.append(Violation("initial", "initial-undeclared", desc.initial))

    seen_final: dict[str, Side | None] = {}
    for s, mark in desc.finals:
        if s not in states:
            out.append(Violation("finals", "final-undeclared", s))
        if s in seen_final:
            out.append(Violation("finals", "final-duplicate", s))
        seen_final[s] = mark

    work = desc.work_alphabet
    if len(set(work)) != len(work):
        out.append(Violation("work_alphabet", "duplicate-work-symbol"))
    if tuple(work[: len(ab.bsymbols)]) != ab.bsymbols:
        out.append(Violation("work_alphabet", "work-alphabet-prefix",
                             "must start with the blank and the alphabet"))
    if any(len(s) != 1 or s.isspace() for s in work):
        out.append(Violation("work_alphabet", "bad-work-symbol"))
    wset, bset = set(work), set(ab.bsymbols)
    bad = [c for c in desc.initial_work if c not in wset]
    if bad:
        out.append(Violation("initial_work", "work-symbol-undeclared", "".join(bad)))

    keys: dict[tuple, int] = {}
    for i, t in enumerate(desc.transitions):
        where = f"transitions[{i}]"
        if t.state not in states:
            out.append(Violation(where, "state-undeclared", t.state))
        if t.next not in states:
            out.append(Violation(where, "state-undeclared", t.next))
        if t.state in seen_final:
            out.append(Violation(where, "final-keyed", t.state))
        for sym in (t.work, t.write):
            if sym not in wset:
                out.append(Violation(where, "work-symbol-undeclared", str(sym)))
        for sym in (t.input, t.oracle):
            if sym not in bset:
                out.append(Violation(where, "symbol-undeclared", str(sym)))
        if t.emit is not None and t.emit not in bset:
            out.append(Violation(where, "emit-undeclared", str(t.emit)))
        for mv in (t.work_move, t.input_move, t.oracle_move):
            if mv not in MOVE_DELTA:
                out.append(Violation(where, "bad-move", str(mv)))
        if t.key in keys:
            out.append(Violation(where, "nondeterministic",
                                 f"key {t.key} already bound by transitions[{keys[t.key]}]"))
        else:
            keys[t.key] = i
    return out


def is_valid(desc: MachineDescription) -> bool:
    return not validate(desc)


class InvalidMachine(ValueError):
    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(map(str, violations)))


def checked(desc: MachineDescription) -> MachineDescription:
    violations = validate(desc)
    if violations:
        raise InvalidMachine(violations)
    return desc
