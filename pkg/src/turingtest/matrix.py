"""The zoo tester and subject matrix used by the demos and the acceptance gate."""
from __future__ import annotations

from dataclasses import dataclass

from . import zoo
from .arena import (MachineInterrogator, ProtocolError, SearchCapExceeded, TestReport, Tester,
                    comm_tester, dumb_tester, pi_tester, run_both, time_diagonal_tester)
from .dsl import load_runnable
from .enumerators import RunnableItem
from .oracle import BoundedPi
from .participants import MachineParticipant, Participant
from .vm import RunBudget


@dataclass(frozen=True)
class MatrixConfig:
    budget: int = 10_000
    step_cap: int = 60
    pi_budget: int = 10_000


def zoo_subjects(budget: int = 10_000) -> list[Participant]:
    """Every zoo subject as a participant, plus the time-limited runnable files."""
    out: list[Participant] = [MachineParticipant(e.load(), RunBudget(budget))
                              for e in zoo.entries(role="subject")]
    for name in zoo.RUNNABLE_FILES:
        item = load_runnable(zoo.ZOO_DIR / f"{name}.tm")
        out.append(RunnableItem(item.desc, item.time_limit, RunBudget(budget)).participant())
    return out


def machine_testers(budget: int = 10_000) -> list[Tester]:
    """Testers whose interrogator and SP are both plain machines of the zoo."""
    b = RunBudget(budget)
    sps = [e.load() for e in zoo.entries(role="subject")]
    out = [dumb_tester(q, b) for q in sps]
    for i in zoo.entries(role="interrogator"):
        for q in sps:
            name = f"<{i.name},{q.name}>"
            out.append(Tester(MachineInterrogator(i.load(), b), MachineParticipant(q, b), name=name))
    return out


def zoo_testers(cfg: MatrixConfig = MatrixConfig(), pi: BoundedPi | None = None) -> list[Tester]:
    pi = pi or BoundedPi.closed([e.load() for e in zoo.entries(role="subject")],
                                budget=cfg.pi_budget)
    return machine_testers(cfg.budget) + [time_diagonal_tester(), pi_tester(pi), comm_tester(pi)]


@dataclass(frozen=True)
class Cell:
    tester: str
    subject: str
    report: TestReport | None
    error: str | None = None


def run_matrix(testers: list[Tester], subjects: list[Participant], step_cap: int) -> list[Cell]:
    cells = []
    for t in testers:
        for s in subjects:
            try:
                cells.append(Cell(t.id, s.name, run_both(t, s, step_cap)))
            except (ProtocolError, SearchCapExceeded) as exc:
                cells.append(Cell(t.id, s.name, None, f"{type(exc).__name__}: {exc}"))
    return cells
