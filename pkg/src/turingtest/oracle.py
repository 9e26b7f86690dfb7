"""Oracle tapes: the blank oracle, a certified approximation of the recognition
oracle, and the random oracle used by the probabilistic test."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import DEFAULT_ALPHABET, Alphabet, MachineDescription
from .encoding import encode
from .vm import DivergedAt, RunBudget, answers, prove_nonhalting


class BlankOracle:
    def __init__(self, alphabet: Alphabet = DEFAULT_ALPHABET):
        self.blank = alphabet.blank

    def read(self, cell: int) -> str:
        return self.blank

    def describe(self) -> dict:
        return {"kind": "blank"}


def blank_oracle(alphabet: Alphabet = DEFAULT_ALPHABET) -> BlankOracle:
    return BlankOracle(alphabet)


@dataclass(frozen=True)
class Certificate:
    machine: str          # encoding of the machine
    question: str         # the question posed (an encoding for recognition facts)
    halts: bool
    cycles: int | None = None
    reason: str = ""      # "halts", "stuck", "repeat" or free text

    def to_json(self) -> str:
        d = asdict(self)
        if d["cycles"] is None:
            del d["cycles"]
        return json.dumps(d, sort_keys=True)


def certify(m: MachineDescription, question: str, limit: int = 100_000) -> Certificate | None:
    """Decide whether ``m`` answers ``question`` by simulation; ``None`` if undecided."""
    verdict, cycles = prove_nonhalting(m, question, limit)
    if verdict == "unknown":
        return None
    return Certificate(encode(m), question, verdict == "halts",
                       cycles if verdict == "halts" else None, verdict)


def save_certificates(certs: Iterable[Certificate], path: str | Path) -> None:
    Path(path).write_text("".join(c.to_json() + "\n" for c in certs), encoding="utf-8")


def load_certificates(path: str | Path) -> list[Certificate]:
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            out.append(Certificate(**json.loads(line)))
    return out


@dataclass
class BoundedPi:
    """Recognition facts for a finite universe.

    A query is answered from a certificate when one exists and otherwise by
    simulation under ``budget`` cycles; such budget-relative answers are
    recorded in :attr:`uncertified` so reports can say so.
    """

    universe: Sequence[MachineDescription]
    budget: int = 10_000
    certificates: Iterable[Certificate] = ()
    alphabet: Alphabet = DEFAULT_ALPHABET
    uncertified: list[tuple[str, str]] = field(default_factory=list, init=False)

    def __post_init__(self):
        self.universe = list(self.universe)
        self.facts = {(c.machine, c.question): c for c in self.certificates}
        self._encodings = [encode(m) for m in self.universe]
        self._tape: str | None = None

    @classmethod
    def closed(cls, universe: Sequence[MachineDescription], limit: int = 100_000,
               budget: int = 10_000) -> "BoundedPi":
        """Certify every (M, N) pair of the universe; fails if one is undecided."""
        certs = []
        encs = [encode(m) for m in universe]
        for m in universe:
            for n_enc in encs:
                c = certify(m, n_enc, limit)
                if c is None:
                    raise ValueError(f"cannot certify {m.name or encode(m)} on a universe encoding")
                certs.append(c)
        return cls(universe, budget, certs)

    @property
    def is_closed(self) -> bool:
        return all((a, b) in self.facts for a in self._encodings for b in self._encodings)

    def fact(self, m: MachineDescription, question: str) -> Certificate | None:
        return self.facts.get((encode(m), question))

    def query(self, m: MachineDescription, question: str) -> bool:
        c = self.fact(m, question)
        if c is not None:
            return c.halts
        self.uncertified.append((encode(m), question))
        return not isinstance(answers(m, [question], RunBudget(self.budget)), DivergedAt)

    def pairs(self) -> list[tuple[str, str]]:
        encs = sorted(set(self._encodings))
        by_enc = {encode(m): m for m in self.universe}
        return [(a, b) for a in encs for b in encs if self.query(by_enc[a], b)]

    def tape_prefix(self, length: int) -> str:
        if self._tape is None:
            blank = self.alphabet.blank
            self._tape = "".join(a + blank + b + blank for a, b in self.pairs())
        tape = self._tape[:length]
        return tape + self.alphabet.blank * (length - len(tape))

    def read(self, cell: int) -> str:
        return self.tape_prefix(cell + 1)[cell]

    def describe(self) -> dict:
        return {"kind": "bounded_pi", "universe": len(self.universe), "budget": self.budget,
                "certified": len(self.facts), "closed": self.is_closed,
                "uncertified_queries": len(self.uncertified),
                "note": "answers outside the certificates are relative to the budget"}


def pi_query(pi: BoundedPi, m: MachineDescription, n_enc: str) -> bool:
    return pi.query(m, n_enc)


def pi_tape_prefix(pi: BoundedPi, length: int) -> str:
    return pi.tape_prefix(length)


class RandomOracle:
    """Cells hold the first letter (symbol 0) with probability ``p0``, else the second.

    Cells are drawn in fixed-size chunks, each from its own generator seeded by
    ``(seed, chunk)``, so a cell's value does not depend on the read order.
    """

    CHUNK = 1024

    def __init__(self, p0: float, seed: int, alphabet: Alphabet = DEFAULT_ALPHABET):
        if not 0.0 <= p0 <= 1.0:
            raise ValueError("p0 must lie in [0, 1]")
        self.p0 = p0
        self.seed = seed
        self.alphabet = alphabet
        self._chunks: dict[int, np.ndarray] = {}

    def _chunk(self, c: int) -> np.ndarray:
        if c not in self._chunks:
            rng = np.random.default_rng([self.seed, c])
            self._chunks[c] = (rng.random(self.CHUNK) >= self.p0).astype(np.int8)
        return self._chunks[c]

    def bit(self, cell: int) -> int:
        if cell < 0:
            raise ValueError("cells are numbered from 0")
        c, i = divmod(cell, self.CHUNK)
        return int(self._chunk(c)[i])

    def bits(self, count: int) -> np.ndarray:
        chunks = -(-count // self.CHUNK)
        return np.concatenate([self._chunk(c) for c in range(chunks)])[:count] if count else \
            np.zeros(0, dtype=np.int8)

    def read(self, cell: int) -> str:
        return self.alphabet.symbols[self.bit(cell)]

    def describe(self) -> dict:
        return {"kind": "random", "p0": self.p0, "seed": self.seed}


def random_oracle(p0: float, seed: int, alphabet: Alphabet = DEFAULT_ALPHABET) -> RandomOracle:
    return RandomOracle(p0, seed, alphabet)


def oracle_symbol(o: RandomOracle, n: int) -> int:
    """xi_n for n >= 1."""
    return o.bit(n - 1)
