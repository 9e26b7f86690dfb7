"""The shipped machine zoo and the properties each machine is certified for.

Certificates are claims checked by simulation in the test suite, never
assumed at run time.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .core import MachineDescription
from .dsl import load_machine

ZOO_DIR = Path(str(resources.files("turingtest") / "zoo"))


@dataclass(frozen=True)
class ZooEntry:
    name: str
    role: str                    # "subject" or "interrogator"
    communicable: bool           # answers every question sequence
    autonomous: bool             # answers ignore the questions
    lambda_time: int | None      # max cycles per question on lambda sessions
    memory: tuple[int, int, int] | None  # (states, initial work, segment) on lambda sessions
    note: str = ""

    @property
    def path(self) -> Path:
        return ZOO_DIR / f"{self.name}.tm"

    def load(self) -> MachineDescription:
        return machine(self.name)


ENTRIES: tuple[ZooEntry, ...] = (
    ZooEntry("halt", "subject", True, True, 0, (1, 0, 1), "initial state is final"),
    ZooEntry("silent", "subject", True, True, 1, (2, 0, 1), "empty-word generator"),
    ZooEntry("const0", "subject", True, True, 1, (2, 0, 1), "always a"),
    ZooEntry("const1", "subject", True, True, 1, (2, 0, 1), "always b"),
    ZooEntry("echo", "subject", True, False, 1, (2, 0, 1), "copies the question"),
    ZooEntry("counter", "subject", True, True, None, None, "nth answer is the number n"),
    ZooEntry("parrot", "subject", True, False, 3, (4, 0, 2), "repeats the previous question"),
    ZooEntry("slow2", "subject", True, True, None, None, "nth answer after 2n cycles"),
    ZooEntry("marcher", "subject", True, True, 1, None, "segment grows by one per question"),
    ZooEntry("loop", "subject", False, True, None, None, "shuttles forever"),
    ZooEntry("spinner", "subject", False, True, None, None, "repeats its configuration"),
    ZooEntry("stall", "subject", False, True, None, None, "answers twice, then spins"),
    ZooEntry("selfrec", "subject", False, False, None, None, "halts iff the question starts with b"),
    ZooEntry("quit3", "interrogator", True, True, 1, None, "finishes Left on its third call"),
    ZooEntry("cmp", "interrogator", False, False, None, None, "finishes Left when answers differ"),
)
BY_NAME = {e.name: e for e in ENTRIES}

# Machines that appear in the zoo but are not plain descriptions.
RUNNABLE_FILES = ("echo_t5",)


@lru_cache(maxsize=None)
def machine(name: str) -> MachineDescription:
    return load_machine(ZOO_DIR / f"{name}.tm")


def entries(role: str | None = None, communicable: bool | None = None) -> list[ZooEntry]:
    return [e for e in ENTRIES
            if (role is None or e.role == role)
            and (communicable is None or e.communicable == communicable)]


def machines() -> list[MachineDescription]:
    return [e.load() for e in ENTRIES]


def resolve(path: str | Path) -> Path:
    """A path as given, or the packaged file when it names ``zoo/<file>``."""
    p = Path(path)
    if p.exists():
        return p
    if p.parent.name == "zoo" or p.parent == Path("."):
        name = p.name if p.suffix else f"{p.name}.tm"
        candidate = ZOO_DIR / name
        if candidate.exists():
            return candidate
    raise FileNotFoundError(str(path))
