"""The ten acceptance scenarios, each runnable on its own.

Every scenario returns a :class:`CriterionResult` whose ``data`` carries
enough detail for an outside check (the test suite re-derives the
recognition-oracle numbers with its own simulator).
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Callable

from . import zoo
from .arena import (DumbInterrogator, PiInterrogator, SearchCapExceeded, cycles_on_self,
                    diagonal_tester, echo_generator, pi_tester, run_both, run_test,
                    time_diagonal_tester)
from .config import Config
from .core import Side, parse_number
from .enumerators import (UniversalEnum, index_of_pair, time_limit, time_limited_enum,
                          zoo_first_enum)
from .matrix import MatrixConfig, machine_testers, run_matrix, zoo_subjects, zoo_testers
from .memclass import memory_class_enum
from .oracle import BoundedPi
from .participants import MachineParticipant
from .prob import monte_carlo
from .vm import RunBudget

TIME_LIMITS = (1, 5, 50)
PROB_CASES = ((0.5, 5), (0.5, 10), (0.7, 3))
PROB_TRIALS = 2000


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    checked: int
    failures: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"; first failure: {self.failures[0]}" if self.failures else ""
        return f"criterion {self.number:2d} {status}  {self.title} ({self.checked} checked{extra})"


def _correct_finish(t, orientation: Side, by: int) -> bool:
    term = t.termination
    return term.kind == "finished" and term.side is orientation and term.step <= by


def diagonal_success(cfg: Config = Config(), count: int = 50) -> CriterionResult:
    E = time_limited_enum(UniversalEnum(cfg.alphabet))
    tester = diagonal_tester(E)
    failures = []
    for n in range(1, count + 1):
        subject = E(n).participant()
        for side in Side:
            t = run_test(tester, subject, side, step_cap=n)
            if not _correct_finish(t, side, n):
                failures.append((n, side.value, t.termination.to_json()))
    return CriterionResult(1, "diagonal finishes correctly by step n, n = 1..50",
                           not failures, 2 * count, failures)


def time_limited_zoo(cfg: Config = Config()) -> CriterionResult:
    tester = time_diagonal_tester()
    E = zoo_first_enum()
    failures, rows = [], []
    subjects = []
    for e in zoo.entries(role="subject", communicable=True):
        for t in TIME_LIMITS:
            subjects.append((f"{e.name}|{t}", time_limit(e.load(), t)))
    subjects.append(("echo_t5", time_limit(zoo.machine("echo"), 5)))
    for label, item in subjects:
        n = index_of_pair(E.index_of(item.desc), item.time_limit)
        rep = run_both(tester, item.participant(), step_cap=max(n, cfg.step_cap))
        v = rep.verdict
        rows.append({"subject": label, "index": n, "finish_step": rep.left.termination.step})
        if not (v.fails_test_ordinary and v.fails_test_strict):
            failures.append((label, v.to_json()))
    return CriterionResult(2, "communicable zoo machines M|t fail the time-diagonal tester",
                           not failures, len(subjects), failures, {"runs": rows})


def memory_instance(cfg: Config = Config()) -> CriterionResult:
    res = memory_class_enum(2, 1, 3, cfg.alphabet, cfg.mem_max_classes)
    tester = diagonal_tester(res.Egen)
    failures, worst = [], 0
    for n in range(1, len(res.survivors) + 1):
        subject = MachineParticipant(res.R(n).desc, RunBudget(cfg.budget))
        for side in Side:
            t = run_test(tester, subject, side, step_cap=res.N)
            worst = max(worst, t.termination.step)
            if not _correct_finish(t, side, min(n, res.N)):
                failures.append((n, side.value, t.termination.to_json()))
    return CriterionResult(3, "every surviving (2,1,3) machine fails the diagonal test by step N",
                           not failures, 2 * len(res.survivors), failures,
                           {"N": res.N, "survivors": len(res.survivors),
                            "verdicts": dict(sorted(res.verdicts.items())), "latest_finish": worst})


def probability_bound(cfg: Config = Config(), trials: int = PROB_TRIALS) -> CriterionResult:
    failures, rows = [], []
    for e in zoo.entries(role="subject", communicable=True):
        for p0, m in PROB_CASES:
            out = monte_carlo(e.load(), m, p0, trials, cfg.seed, step_cap=cfg.prob_step_cap)
            rows.append({"subject": e.name, "p0": p0, "m": m, "estimate": out.estimate,
                         "bound": out.bound, "limit": out.margin_limit})
            if out.estimate > out.margin_limit:
                failures.append(rows[-1])
    return CriterionResult(4, f"pass rate <= p^m/(1-p) + 3 sigma over {trials} trials",
                           not failures, len(rows), failures, {"runs": rows})


def sp_as_subject_passes(cfg: Config = Config(), pi: BoundedPi | None = None) -> CriterionResult:
    testers = [t for t in zoo_testers(MatrixConfig(cfg.budget), pi) if t.sp.reduces_to_tm == "yes"]
    failures, capped = [], []
    for t in testers:
        try:
            rep = run_both(t, t.sp, step_cap=60)
        except SearchCapExceeded:
            # equal answers all the way to the end of the bounded search: nothing failed
            capped.append(t.id)
            continue
        if rep.verdict.fails_test_ordinary:
            failures.append(t.id)
    return CriterionResult(5, "a tester's own machine SP passes it", not failures, len(testers),
                           failures, {"search_capped": capped})


def echo_generators_pass(cfg: Config = Config()) -> CriterionResult:
    failures, mid = [], []
    testers = machine_testers(cfg.budget)
    for t in testers:
        g = echo_generator(t, step_cap=200)
        rep = run_both(t, g, step_cap=60)
        if rep.left.termination.kind == "sp_diverged" or rep.right.termination.kind == "sp_diverged":
            mid.append(t.id)
        if rep.verdict.fails_test_ordinary or rep.verdict.fails_test_strict:
            failures.append(t.id)
    return CriterionResult(6, "echo generators pass ordinary and strict tests", not failures,
                           len(testers), failures, {"sp_diverged_mid_test": mid})


def strict_dominance(cfg: Config = Config(), pi: BoundedPi | None = None) -> CriterionResult:
    cells = run_matrix(zoo_testers(MatrixConfig(cfg.budget), pi), zoo_subjects(cfg.budget), 60)
    failures = [(c.tester, c.subject) for c in cells
                if c.report and c.report.verdict.fails_test_ordinary
                and not c.report.verdict.fails_test_strict]
    errors = [(c.tester, c.subject, c.error) for c in cells if c.error]
    return CriterionResult(7, "no fails-ordinary with passes-strict in the zoo matrix",
                           not failures and not errors, len(cells), failures + errors)


def symmetry(cfg: Config = Config(), pi: BoundedPi | None = None) -> CriterionResult:
    testers = [t for t in zoo_testers(MatrixConfig(cfg.budget), pi)
               if isinstance(t.interrogator, (DumbInterrogator, PiInterrogator))]
    failures, checked = [], 0
    for t in testers:
        for s in zoo_subjects(cfg.budget):
            rep = run_both(t, s, step_cap=60)
            checked += 1
            L, R = rep.left, rep.right
            same = (len(L.steps) == len(R.steps)
                    and [(x.sp_answer, x.subject_answer) for x in L.steps]
                    == [(x.sp_answer, x.subject_answer) for x in R.steps])
            if not same:
                failures.append((t.id, s.name))
    return CriterionResult(8, "left and right dumb-interrogator transcripts agree", not failures,
                           checked, failures)


def recognition_oracle(cfg: Config = Config(), pi: BoundedPi | None = None) -> CriterionResult:
    universe = [e.load() for e in zoo.entries(role="subject")]
    pi = pi or BoundedPi.closed(universe, cfg.pi_certify_limit, cfg.pi_budget)
    tester = pi_tester(pi)
    failures = []
    for m in universe:
        rep = run_both(tester, MachineParticipant(m, RunBudget(cfg.budget)), len(universe))
        if not rep.verdict.fails_test_ordinary:
            failures.append(m.name)
    s = tester.sp.session()
    answers = []
    for m in universe:
        a = s.ask("")
        answers.append({"machine": m.name, "answer": a, "count": parse_number(a),
                        "self_cycles": cycles_on_self(m, cfg.pi_budget)})
    return CriterionResult(9, "every universe machine fails the recognition-oracle tester",
                           not failures and pi.is_closed, len(universe), failures,
                           {"answers": answers, "closed": pi.is_closed, "oracle": pi.describe()})


DETERMINISM_RUNS = (
    ["test", "--tester", "diag:time", "--subject", "zoo/echo_t5.tm", "--both"],
    ["test", "--tester", "dumb:zoo/counter.tm", "--subject", "zoo/counter.tm", "--both"],
    ["test", "--tester", "pi", "--subject", "zoo/echo.tm"],
    ["test", "--tester", "comm", "--subject", "zoo/parrot.tm"],
    ["test", "--tester", "prob:3,0.5", "--subject", "zoo/const1.tm", "--seed", "4"],
    ["prob", "--subject", "zoo/const1.tm", "--m", "5", "--p0", "0.5", "--trials", "500", "--seed", "7"],
    ["enumerate", "--kind", "time", "-N", "30"],
)


def determinism(cfg: Config = Config(), runs=DETERMINISM_RUNS) -> CriterionResult:
    from .cli import main
    failures = []
    outputs = {}
    for argv in runs:
        texts = []
        for _ in range(2):
            buf = io.StringIO()
            main(list(argv), buf)
            texts.append(buf.getvalue())
        outputs[" ".join(argv)] = texts[0]
        if texts[0] != texts[1]:
            failures.append(" ".join(argv))
    return CriterionResult(10, "repeated runs give byte-identical JSON", not failures, len(runs),
                           failures, {"outputs": outputs})


CRITERIA: dict[int, Callable[..., CriterionResult]] = {
    1: diagonal_success, 2: time_limited_zoo, 3: memory_instance, 4: probability_bound,
    5: sp_as_subject_passes, 6: echo_generators_pass, 7: strict_dominance, 8: symmetry,
    9: recognition_oracle, 10: determinism,
}


def run_criterion(n: int, cfg: Config = Config()) -> CriterionResult:
    if n not in CRITERIA:
        raise ValueError(f"no criterion {n}")
    return CRITERIA[n](cfg)
