"""Print the verdict of every zoo tester against every zoo subject.

Cell legend: F fails the test under both rules, s fails only the strict
rule, . passes, ! protocol or search-cap error.
"""
import argparse

from turingtest.matrix import MatrixConfig, run_matrix, zoo_subjects, zoo_testers


def cell(c):
    if c.error:
        return "!"
    v = c.report.verdict
    if v.fails_test_ordinary:
        return "F"
    return "s" if v.fails_test_strict else "."


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--step-cap", type=int, default=60)
    args = ap.parse_args()
    testers, subjects = zoo_testers(MatrixConfig(step_cap=args.step_cap)), zoo_subjects()
    cells = run_matrix(testers, subjects, args.step_cap)
    width = max(len(t.id) for t in testers)
    names = [s.name for s in subjects]
    for i in range(max(map(len, names))):
        print(" " * (width + 2) + " ".join(n[i] if i < len(n) else " " for n in names))
    for r, t in enumerate(testers):
        row = cells[r * len(subjects):(r + 1) * len(subjects)]
        print(f"{t.id:>{width}}  " + " ".join(cell(c) for c in row))


if __name__ == "__main__":
    main()
