"""Independent reference implementations used only by the tests.

None of these import the package's interpreter, encoder or enumerators;
they are written from the definitions with plain loops so that agreement
with the package is evidence rather than tautology.
"""
from __future__ import annotations

import itertools

LETTERS = "ab"
BLANK = "_"
B = BLANK + LETTERS


def shortlex_words(count: int, letters: str = LETTERS):
    out = []
    for length in itertools.count(1):
        for t in itertools.product(letters, repeat=length):
            out.append("".join(t))
            if len(out) == count:
                return out


def tokens(w: str) -> list[int] | None:
    out, v = [], 0
    for c in w:
        if c == "b":
            v += 1
        elif c == "a":
            out.append(v)
            v = 0
        else:
            return None
    return out if v == 0 and out else None


def valid_encoding(w: str) -> bool:
    """The encoding's grammar, checked field by field."""
    t = tokens(w)
    if t is None:
        return False
    pos = 0

    def nxt():
        nonlocal pos
        if pos >= len(t):
            raise IndexError
        pos += 1
        return t[pos - 1]

    try:
        n = nxt() + 1
        W = 3 + nxt()
        if nxt() >= n:
            return False
        codes = [nxt() for _ in range(n)]
        if any(c > 3 for c in codes):
            return False
        d = nxt()
        if any(nxt() >= W for _ in range(d)):
            return False
        rows = nxt()
        prev = None
        limits = (n, W, 3, 3, n, W, 3, 3, 3, 4)
        for _ in range(rows):
            row = [nxt() for _ in range(10)]
            if any(v >= lim for v, lim in zip(row, limits)):
                return False
            if codes[row[0]] != 1:
                return False
            if prev is not None and tuple(row[:4]) <= prev:
                return False
            prev = tuple(row[:4])
    except IndexError:
        return False
    return pos == len(t)


def valid_encodings_upto(length: int) -> list[str]:
    out = []
    for L in range(1, length + 1):
        for t in itertools.product("ab", repeat=L):
            w = "".join(t)
            if valid_encoding(w):
                out.append(w)
    return out


def simulate(desc, questions, budget, oracle_cells=None):
    """Answers (or None from the first divergence on) of a machine description.

    Reads only the public fields of the description.
    """
    blank = desc.alphabet.blank
    table = {}
    for tr in desc.transitions:
        table[(tr.state, tr.work, tr.input, tr.oracle)] = tr
    finals = {s for s, _ in desc.finals}
    work = {i: c for i, c in enumerate(desc.initial_work)}
    wh = 0
    out, cycles = [], []
    broken = False
    delta = {"L": -1, "R": 1, "S": 0}
    for q in questions:
        if broken:
            out.append(None)
            cycles.append(None)
            continue
        state, ih, oh, emitted, c = desc.initial, 0, 0, [], 0
        while state not in finals:
            if c >= budget:
                broken = True
                break
            key = (state, work.get(wh, blank), q[ih] if ih < len(q) else blank,
                   oracle_cells(oh) if oracle_cells else blank)
            tr = table.get(key)
            if tr is None:
                broken = True
                break
            work[wh] = tr.write
            wh += delta[tr.work_move]
            ih = max(0, ih + delta[tr.input_move])
            oh = max(0, oh + delta[tr.oracle_move])
            if tr.emit is not None:
                emitted.append(tr.emit)
            state = tr.next
            c += 1
        if broken:
            out.append(None)
            cycles.append(None)
            continue
        ans = ""
        for ch in emitted:
            if ch == blank:
                break
            ans += ch
        out.append(ans)
        cycles.append(c)
    return out, cycles


def class_count(s: int, d: int, w: int) -> dict:
    """Count empty-question behaviour classes by a separate branching search.

    Configurations are kept in absolute coordinates and output is ignored,
    since it never influences the branching.
    """
    stats = {"leaves": 0, "survive": 0, "segment": 0, "repeat": 0, "stuck": 0, "no-final": 0}
    opts = [(wr, mv, e) for wr in B for mv in (0, -1, 1) for e in (None,) + tuple(B)]

    def leaf(kind, k=1):
        stats["leaves"] += k
        stats[kind] += k

    def run(trans, finals, ns, tape, head, lo, hi, seen_q, state, seen):
        while True:
            if state in finals:
                key = (tuple(sorted((i, c) for i, c in tape.items() if c != BLANK)), head, lo, hi)
                if key in seen_q:
                    return leaf("survive")
                seen_q = seen_q | {key}
                state, seen = 0, set()
                continue
            cfg = (state, head, tuple(sorted((i, c) for i, c in tape.items() if c != BLANK)))
            sym = tape.get(head, BLANK)
            k = (state, sym)
            if k not in trans:
                leaf("stuck")
                targets = [(x, finals, ns) for x in range(ns)]
                if ns < s:
                    targets += [(ns, finals | {ns}, ns + 1), (ns, finals, ns + 1)]
                for x, nf, nns in targets:
                    if nns == s and not nf:
                        leaf("no-final", len(opts))
                        continue
                    for o in opts:
                        t2 = dict(trans)
                        t2[k] = (x,) + o
                        run(t2, nf, nns, dict(tape), head, lo, hi, seen_q, state, set(seen))
                return
            if cfg in seen:
                return leaf("repeat")
            seen.add(cfg)
            x, wr, mv, _ = trans[k]
            tape[head] = wr
            head += mv
            lo, hi = min(lo, head), max(hi, head)
            if hi - lo + 1 > w:
                return leaf("segment")
            state = x

    tapes = []
    for L in range(d + 1):
        for t in itertools.product(B, repeat=L):
            word = "".join(t).rstrip(BLANK)
            if word not in tapes:
                tapes.append(word)
    for word in tapes:
        leaf("survive")  # the initial state is final
        if s == 1:
            leaf("no-final")
            continue
        run({}, frozenset(), 1, dict(enumerate(word)), 0, 0, 0, frozenset(), 0, set())
    return stats
