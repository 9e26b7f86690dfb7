"""Line-oriented text format for machine descriptions (``.tm`` files).

Grammar (one item per line, ``#`` starts a comment)::

    name: echo
    alphabet: a b          # optional, default "a b"
    blank: _               # optional, default "_"
    states: q0 f
    initial: q0
    final: f               # repeatable; "final: f Left" or "final: f:Left g"
    work: X Y              # optional extra work-tape symbols
    tape: ab               # optional initial work-tape content
    time_limit: 5          # optional, see load_runnable()

    # state work input oracle -> next write work_move input_move oracle_move emit
    q0 _ a _ -> q0 _ S R S a

Key fields accept ``*`` (every symbol of that tape).  In the action, ``=`` as
the written symbol keeps the symbol that was read and ``@`` as the emitted
symbol copies the input symbol; ``-`` emits nothing.  When lines overlap, the
one with fewer ``*`` fields wins; two overlapping lines with the same number
of ``*`` fields are a ``nondeterministic`` error.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from pathlib import Path

from .core import (MOVE_DELTA, Alphabet, MachineDescription, Side, Transition,
                   validate)


class ParseError(ValueError):
    """``rule`` is set when the text is well formed but describes an invalid machine."""

    def __init__(self, line: int, message: str, rule: str | None = None):
        self.line = line
        self.message = message
        self.rule = rule
        super().__init__(f"line {line}: {message}")


@dataclass
class _Line:
    no: int
    fields: list[str]


_HEADER = re.compile(r"^([a-z_]+)\s*:\s*(.*)$")
_HEADERS = {"name", "alphabet", "blank", "states", "initial", "final", "work",
            "tape", "time_limit"}


def _split(text: str):
    header: dict[str, list[tuple[int, str]]] = {}
    lines: list[_Line] = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _HEADER.match(line)
        if m and "->" not in line:
            key, value = m.groups()
            if key not in _HEADERS:
                raise ParseError(no, f"unknown header {key!r}")
            header.setdefault(key, []).append((no, value.strip()))
            continue
        if "->" not in line:
            raise ParseError(no, "expected a header or a transition")
        lhs, rhs = (part.split() for part in line.split("->", 1))
        if len(lhs) != 4 or len(rhs) != 6:
            raise ParseError(no, "a transition has 4 key fields and 6 action fields")
        lines.append(_Line(no, lhs + rhs))
    return header, lines


def _one(header, key, default=None):
    entries = header.get(key)
    if not entries:
        if default is None:
            raise ParseError(0, f"missing header {key!r}")
        return 0, default
    if len(entries) > 1:
        raise ParseError(entries[1][0], f"header {key!r} given twice")
    return entries[0]


def _parse(text: str):
    header, lines = _split(text)
    _, name = _one(header, "name", "")
    no, symbols = _one(header, "alphabet", "a b")
    _, blank = _one(header, "blank", "_")
    try:
        alphabet = Alphabet(tuple(symbols.split()), blank)
    except ValueError as exc:
        raise ParseError(no, str(exc)) from None
    _, states = _one(header, "states")
    states = states.split()
    _, initial = _one(header, "initial")
    finals: list[tuple[str, Side | None]] = []
    for no, value in header.get("final", []):
        parts = value.replace(":", " ").split()
        i = 0
        while i < len(parts):
            s, mark = parts[i], None
            if i + 1 < len(parts) and parts[i + 1].lower() in ("left", "right"):
                mark = Side(parts[i + 1].lower())
                i += 1
            finals.append((s, mark))
            i += 1
    _, extra = _one(header, "work", "-")
    extra = [] if extra == "-" else extra.split()
    _, tape = _one(header, "tape", "-")
    tape = "" if tape == "-" else tape
    work_alphabet = alphabet.bsymbols + tuple(extra)

    bound: dict[tuple, tuple[int, int, Transition]] = {}  # key -> (specificity, line, t)
    for line in lines:
        st, w, i, o, nxt, wr, wm, im, om, em = line.fields
        for mv in (wm, im, om):
            if mv not in MOVE_DELTA:
                raise ParseError(line.no, f"bad-move {mv!r}")
        spec = sum(f != "*" for f in (w, i, o))
        ws = work_alphabet if w == "*" else (w,)
        ins = alphabet.bsymbols if i == "*" else (i,)
        ors = alphabet.bsymbols if o == "*" else (o,)
        for kw, ki, ko in itertools.product(ws, ins, ors):
            emit = None if em == "-" else (ki if em == "@" else em)
            t = Transition(st, kw, ki, ko, nxt, kw if wr == "=" else wr, wm, im, om, emit)
            old = bound.get(t.key)
            if old is not None and old[0] == spec:
                raise ParseError(line.no, f"nondeterministic: key {t.key} also bound on line "
                                          f"{old[1]}", rule="nondeterministic")
            if old is None or old[0] < spec:
                bound[t.key] = (spec, line.no, t)
    ordered = sorted(((no, t) for _, no, t in bound.values()),
                     key=lambda p: (p[0], _key_order(p[1], work_alphabet, alphabet)))
    desc = MachineDescription(
        states=tuple(states), initial=initial, finals=tuple(finals),
        transitions=tuple(t for _, t in ordered), initial_work=tape,
        work_alphabet=work_alphabet, alphabet=alphabet, name=name)
    line_of = [no for no, _ in ordered]
    violations = validate(desc)
    if violations:
        v = violations[0]
        m = re.match(r"transitions\[(\d+)\]", v.field)
        raise ParseError(line_of[int(m.group(1))] if m else 0, str(v), rule=v.rule)
    time_limit = header.get("time_limit")
    if time_limit:
        no, value = time_limit[0]
        try:
            t = int(value)
        except ValueError:
            raise ParseError(no, f"time_limit must be a positive integer, got {value!r}") from None
        if t < 1:
            raise ParseError(no, "time_limit must be positive")
        time_limit = t
    return desc, time_limit or None


def _key_order(t: Transition, work_alphabet, alphabet):
    b = alphabet.bsymbols
    return (work_alphabet.index(t.work) if t.work in work_alphabet else -1,
            b.index(t.input) if t.input in b else -1,
            b.index(t.oracle) if t.oracle in b else -1)


def parse_dsl(text: str) -> MachineDescription:
    return _parse(text)[0]


def load_machine(path: str | Path) -> MachineDescription:
    path = Path(path)
    desc = parse_dsl(path.read_text(encoding="utf-8"))
    return desc if desc.name else desc.with_name(path.stem)


def load_runnable(path: str | Path):
    """The machine in ``path``, under a supervisor when the file sets ``time_limit``."""
    from .enumerators import RunnableItem
    path = Path(path)
    desc, t = _parse(path.read_text(encoding="utf-8"))
    return RunnableItem(desc if desc.name else desc.with_name(path.stem), t)


def print_dsl(desc: MachineDescription) -> str:
    ab = desc.alphabet
    out = []
    if desc.name:
        out.append(f"name: {desc.name}")
    if ab.symbols != ("a", "b"):
        out.append(f"alphabet: {' '.join(ab.symbols)}")
    if ab.blank != "_":
        out.append(f"blank: {ab.blank}")
    out.append(f"states: {' '.join(desc.states)}")
    out.append(f"initial: {desc.initial}")
    for s, mark in desc.finals:
        out.append(f"final: {s}" + (f" {mark.mark}" if mark else ""))
    if desc.extra_work:
        out.append(f"work: {' '.join(desc.extra_work)}")
    if desc.initial_work:
        out.append(f"tape: {desc.initial_work}")
    if desc.transitions:
        out.append("")
    for t in desc.transitions:
        emit = "-" if t.emit is None else t.emit
        out.append(f"{t.state} {t.work} {t.input} {t.oracle} -> {t.next} {t.write} "
                   f"{t.work_move} {t.input_move} {t.oracle_move} {emit}")
    return "\n".join(out) + "\n"
