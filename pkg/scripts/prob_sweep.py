"""Monte-Carlo pass rates of the zoo subjects against the random-SP tester."""
import argparse

from turingtest import zoo
from turingtest.prob import monte_carlo


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--p0", type=float, nargs="+", default=[0.5, 0.7])
    ap.add_argument("--m", type=int, nargs="+", default=[3, 5, 10])
    ap.add_argument("--engine", choices=["fast", "exact"], default="fast")
    args = ap.parse_args()
    print(f"{'subject':>8} {'p0':>4} {'m':>3} {'estimate':>9} {'ci95':>7} {'bound':>8} {'limit':>8}")
    for e in zoo.entries(role="subject", communicable=True):
        for p0 in args.p0:
            for m in args.m:
                out = monte_carlo(e.load(), m, p0, args.trials, args.seed, engine=args.engine,
                                  step_cap=500)
                flag = "" if out.estimate <= out.margin_limit else "  ABOVE"
                print(f"{e.name:>8} {p0:>4} {m:>3} {out.estimate:>9.4f} {out.ci_upper:>7.4f} "
                      f"{out.bound:>8.4f} {out.margin_limit:>8.4f}{flag}")


if __name__ == "__main__":
    main()
