"""Count behaviour classes of memory-bounded machines for a few (s, d, w)."""
import argparse
import time

from turingtest.memclass import memory_class_enum

DEFAULT = ["1,0,1", "1,0,2", "2,0,1", "2,0,2", "2,1,2", "2,1,3"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("bounds", nargs="*", default=DEFAULT, help="s,d,w triples")
    args = ap.parse_args()
    print(f"{'(s,d,w)':>9} {'N':>8} {'survive':>8}  rejections")
    for b in args.bounds:
        s, d, w = map(int, b.split(","))
        t0 = time.perf_counter()
        res = memory_class_enum(s, d, w)
        rej = {k: v for k, v in sorted(res.verdicts.items()) if k != "survive"}
        print(f"{b:>9} {res.N:>8} {len(res.survivors):>8}  {rej}  [{time.perf_counter() - t0:.1f}s]")


if __name__ == "__main__":
    main()
