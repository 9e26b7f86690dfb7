"""Self-delimiting encoding of machine descriptions over the first two letters.

With ``a, b`` the first two alphabet symbols, a natural number ``v`` is the
token ``b^v a``.  An encoding is the token sequence

1. ``n - 1`` where ``n`` is the number of states (states are ``q0 .. q{n-1}``)
2. ``e``, the number of extra work symbols; the work alphabet has
   ``W = |B| + e`` symbols indexed blank, alphabet symbols, extras
3. the initial state
4. one code per state: 0 final, 1 not final, 2 final ``Left``, 3 final ``Right``
5. ``d`` then ``d`` work-symbol indices: the initial work tape
6. ``t`` then ``t`` transitions of ten tokens each::

       state work input oracle  next write work_move input_move oracle_move emit

   Symbols on the input and oracle tapes are indexed in ``B`` (blank first),
   moves as ``S=0 R=1 L=2`` and ``emit`` is 0 for nothing or ``1 + index in B``.
   Transition keys are strictly increasing and never name a final state.

Every valid word parses to exactly one token sequence, so validity is a
linear scan.  Because every token ends in ``a``, comparing two encodings of
the same length letter by letter is the same as comparing their token
sequences value by value; :class:`EncodingSpace` uses this to count, rank and
unrank valid encodings in shortlex order with generating functions.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator

from gmpy2 import mpz

from .core import (DEFAULT_ALPHABET, MOVES, Alphabet, MachineDescription, Side,
                   Transition, checked, extra_symbol_pool)

_CODE_MARK = {0: None, 2: Side.LEFT, 3: Side.RIGHT}
_MARK_CODE = {None: 0, Side.LEFT: 2, Side.RIGHT: 3}
_VALUE_FIELDS = 6  # next, write, three moves, emit


class InvalidEncoding(ValueError):
    pass


class EncodingTooLong(ValueError):
    """Raised when counting would need words longer than the configured cap."""


def _letters(alphabet: Alphabet) -> tuple[str, str]:
    return alphabet.symbols[0], alphabet.symbols[1]


def _token_word(values, alphabet: Alphabet) -> str:
    a, b = _letters(alphabet)
    return "".join(b * v + a for v in values)


def tokens_of(w: str, alphabet: Alphabet = DEFAULT_ALPHABET) -> list[int] | None:
    a, b = _letters(alphabet)
    out, run = [], 0
    for c in w:
        if c == b:
            run += 1
        elif c == a:
            out.append(run)
            run = 0
        else:
            return None
    return out if run == 0 else None


def encode(desc: MachineDescription) -> str:
    desc = checked(desc)
    ab = desc.alphabet
    sidx = {s: i for i, s in enumerate(desc.states)}
    widx = {s: i for i, s in enumerate(ab.bsymbols + desc.extra_work)}
    bidx = {s: i for i, s in enumerate(ab.bsymbols)}
    midx = {m: i for i, m in enumerate(MOVES)}
    marks = desc.final_marks
    vals = [len(desc.states) - 1, len(desc.extra_work), sidx[desc.initial]]
    vals += [_MARK_CODE[marks[s]] if s in marks else 1 for s in desc.states]
    vals.append(len(desc.initial_work))
    vals += [widx[c] for c in desc.initial_work]
    rows = sorted(
        [sidx[t.state], widx[t.work], bidx[t.input], bidx[t.oracle], sidx[t.next],
         widx[t.write], midx[t.work_move], midx[t.input_move], midx[t.oracle_move],
         0 if t.emit is None else 1 + bidx[t.emit]]
        for t in desc.transitions)
    vals.append(len(rows))
    for r in rows:
        vals += r
    return _token_word(vals, ab)


def decode(w: str, alphabet: Alphabet = DEFAULT_ALPHABET) -> MachineDescription:
    toks = tokens_of(w, alphabet)
    if not toks:
        raise InvalidEncoding("not a sequence of tokens")
    it = iter(toks)

    def take(what: str, bound: int | None = None) -> int:
        v = next(it, None)
        if v is None:
            raise InvalidEncoding(f"truncated at {what}")
        if bound is not None and v >= bound:
            raise InvalidEncoding(f"{what} = {v} out of range (< {bound})")
        return v

    nb = len(alphabet.bsymbols)
    n = take("state count") + 1
    e = take("extra work symbols")
    W = nb + e
    initial = take("initial state", n)
    codes = [take("final code", 4) for _ in range(n)]
    d = take("initial work length")
    work = [take("work symbol", W) for _ in range(d)]
    t = take("transition count")
    rows, last = [], None
    for _ in range(t):
        row = [take("state", n), take("work symbol", W), take("input symbol", nb),
               take("oracle symbol", nb), take("next state", n), take("write", W),
               take("work move", 3), take("input move", 3), take("oracle move", 3),
               take("emit", nb + 1)]
        if codes[row[0]] != 1:
            raise InvalidEncoding("transition keyed on a final state")
        if last is not None and row[:4] <= last:
            raise InvalidEncoding("transition keys not strictly increasing")
        last = row[:4]
        rows.append(row)
    if next(it, None) is not None:
        raise InvalidEncoding("trailing tokens")

    states = tuple(f"q{i}" for i in range(n))
    extras = tuple(itertools.islice(extra_symbol_pool(alphabet), e))
    wsyms = alphabet.bsymbols + extras
    bs = alphabet.bsymbols
    trans = tuple(
        Transition(states[r[0]], wsyms[r[1]], bs[r[2]], bs[r[3]], states[r[4]], wsyms[r[5]],
                   MOVES[r[6]], MOVES[r[7]], MOVES[r[8]], None if r[9] == 0 else bs[r[9] - 1])
        for r in rows)
    return MachineDescription(
        states=states, initial=states[initial],
        finals=tuple((states[i], _CODE_MARK[c]) for i, c in enumerate(codes) if c != 1),
        transitions=trans, initial_work="".join(wsyms[i] for i in work),
        work_alphabet=wsyms, alphabet=alphabet)


def is_valid_encoding(w: str, alphabet: Alphabet = DEFAULT_ALPHABET) -> bool:
    try:
        decode(w, alphabet)
    except InvalidEncoding:
        return False
    return True


class _Polys:
    """Truncated integer polynomials packed into one big int (Kronecker)."""

    def __init__(self, degree: int):
        self.degree = degree
        self.bits = degree + 4  # coefficients count words of length <= degree
        self.slot = (1 << self.bits) - 1
        self.mask = (1 << (self.bits * (degree + 1))) - 1

    def mono(self, d: int) -> int:
        return mpz(1) << (self.bits * d) if 0 <= d <= self.degree else 0

    def mul(self, p: int, q: int) -> int:
        return (p * q) & self.mask

    def shift(self, p: int, d: int) -> int:
        return (p << (self.bits * d)) & self.mask if d <= self.degree else 0

    def power(self, p: int, k: int) -> int:
        out = 1
        while k:
            if k & 1:
                out = self.mul(out, p)
            p = self.mul(p, p)
            k >>= 1
        return out

    def coef(self, p: int, d: int) -> int:
        if not 0 <= d <= self.degree:
            return 0
        return int((p >> (self.bits * d)) & self.slot)

    def coefs(self, p: int) -> list[int]:
        return [self.coef(p, d) for d in range(self.degree + 1)]


class EncodingSpace:
    """Shortlex counting, ranking and unranking of valid encodings.

    Ranks are 1-based: ``unrank(1)`` is the shortlex-first valid encoding.
    Work grows quickly with the word length, so lengths above ``max_length``
    raise :class:`EncodingTooLong`.
    """

    def __init__(self, alphabet: Alphabet = DEFAULT_ALPHABET, max_length: int = 160):
        self.alphabet = alphabet
        self.nb = len(alphabet.bsymbols)
        self.max_length = max_length
        self._P: _Polys | None = None
        self._cumulative: list[int] = []

    # -- polynomial building blocks (all truncated at the current degree) ----

    def _ensure(self, length: int) -> _Polys:
        if length > self.max_length:
            raise EncodingTooLong(f"length {length} exceeds max_length={self.max_length}")
        if self._P is None or self._P.degree < length:
            degree = min(self.max_length, max(24, -(-length // 16) * 16))
            self._P = _Polys(degree)
            self._cache: dict = {}
            self._cumulative = []
        return self._P

    def _memo(self, key, build):
        c = self._cache
        if key not in c:
            c[key] = build()
        return c[key]

    def _range(self, m: int) -> int:
        # sum_{v<m} x^(v+1): one token with a value below m
        P = self._P
        return self._memo(("R", m), lambda: sum(P.mono(v + 1) for v in range(m)))

    def _value(self, n: int, W: int) -> int:
        P = self._P

        def build():
            v = P.mul(self._range(n), self._range(W))
            v = P.mul(v, P.power(self._range(3), 3))
            return P.mul(v, self._range(self.nb + 1))
        return self._memo(("V", n, W), build)

    def _keylen(self, key) -> int:
        return sum(key) + 4

    def _key_shapes(self, W: int) -> list[int]:
        # g_r: ways to pick r distinct keys (work < W, input, oracle) of state 0,
        # each weighted by x^(1+keylen); the extra letter is the key's share of
        # the transition-count token.  Built one work symbol at a time.
        P = self._P
        top = P.degree // (5 + _VALUE_FIELDS)
        if W == 0:
            return [1]
        key = ("G", W)
        if key not in self._cache:
            g = list(self._key_shapes(W - 1))
            for i, o in itertools.product(range(self.nb), range(self.nb)):
                k = 5 + (W - 1) + i + o
                g = g + [0] if len(g) <= top else g
                for r in range(len(g) - 1, 0, -1):
                    g[r] += P.shift(g[r - 1], k)
            while len(g) > 1 and not g[-1]:
                g.pop()
            self._cache[key] = g
        return self._cache[key]

    def _keys_by_size(self, n: int, W: int) -> list[int]:
        """q_r = g_r V^r: ``r`` transitions out of state 0, values included."""
        P = self._P

        def build():
            V = self._value(n, W)
            out, vr = [], 1
            for g in self._key_shapes(W):
                out.append(P.mul(g, vr))
                vr = P.mul(vr, V)
            return out
        return self._memo(("Q", n, W), build)

    def _keys_of_state(self, j: int, n: int, W: int) -> int:
        P = self._P
        return self._memo(("K", j, n, W), lambda: sum(
            P.shift(q, j * r) for r, q in enumerate(self._keys_by_size(n, W))))

    def _state_factor(self, j: int, n: int, W: int) -> int:
        P = self._P
        return self._memo(("F", j, n, W), lambda: (
            P.mono(1) + P.mono(3) + P.mono(4) + P.shift(self._keys_of_state(j, n, W), 2)))

    def _work_block(self, W: int) -> int:
        # sum_d x^(d+1) R(W)^d
        P = self._P

        def build():
            step = P.shift(self._range(W), 1)
            out, term = 0, P.mono(1)
            while term:
                out += term
                term = P.mul(term, step)
            return out
        return self._memo(("WORK", W), build)

    def _after_init(self, n: int, e: int) -> int:
        P = self._P
        W = self.nb + e

        def build():
            out = P.mul(self._work_block(W), P.mono(1))
            for j in range(n):
                out = P.mul(out, self._state_factor(j, n, W))
            return out
        return self._memo(("B", n, e), build)

    def _after_count(self, n: int) -> int:
        P = self._P

        def build():
            out = 0
            for e in range(P.degree):
                if 2 * n + e + 4 > P.degree:
                    break
                out += P.mul(P.shift(self._after_init(n, e), e + 1), self._range(n))
            return out
        return self._memo(("N", n), build)

    def _keys(self, n: int, W: int, nonfinal: tuple[int, ...]):
        return self._memo(("KEYS", n, W, nonfinal), lambda: [
            k for k in itertools.product(nonfinal, range(W), range(self.nb), range(self.nb))])

    def _exact(self, n: int, W: int, nonfinal: tuple[int, ...], start: int, c: int) -> int:
        """Choose exactly ``c`` transitions with keys from ``keys[start:]``."""
        P = self._P
        keys = self._keys(n, W, nonfinal)
        key = ("E", n, W, nonfinal, c)
        if key not in self._cache:
            V = self._value(n, W)
            table = [[0] * (len(keys) + 1) for _ in range(c + 1)]
            table[0] = [1] * (len(keys) + 1)
            for r in range(1, c + 1):
                row, prev = table[r], table[r - 1]
                for s in range(len(keys) - 1, -1, -1):
                    row[s] = row[s + 1] + P.shift(P.mul(V, prev[s + 1]), self._keylen(keys[s]))
            self._cache[key] = table
        return self._cache[key][c][start]

    # -- prefixes --------------------------------------------------------------

    def _parse_prefix(self, toks: list[int]) -> dict:
        st = {"phase": "n", "pos": 0}
        vals = iter(toks)
        consumed = 0

        def nxt():
            nonlocal consumed
            v = next(vals, None)
            if v is not None:
                consumed += 1
            return v

        v = nxt()
        if v is None:
            return st
        st["n"] = n = v + 1
        st["phase"] = "e"
        if (e := nxt()) is None:
            return st
        st["e"], st["W"] = e, self.nb + e
        st["phase"] = "init"
        if nxt() is None:
            return st
        st["codes"] = codes = []
        st["phase"] = "codes"
        while len(codes) < n:
            if (c := nxt()) is None:
                return st
            codes.append(c)
        st["nonfinal"] = tuple(i for i, c in enumerate(codes) if c == 1)
        st["phase"] = "d"
        if (d := nxt()) is None:
            return st
        st["d"], st["syms"] = d, 0
        st["phase"] = "syms"
        while st["syms"] < d:
            if nxt() is None:
                return st
            st["syms"] += 1
        st["phase"] = "t"
        if (t := nxt()) is None:
            return st
        st["t"], st["rows"], st["partial"] = t, [], []
        st["phase"] = "rows"
        rest = toks[consumed:]
        full, part = divmod(len(rest), 10)
        st["rows"] = [tuple(rest[10 * r: 10 * r + 10]) for r in range(full)]
        st["partial"] = rest[10 * full:]
        if full == t and not part:
            st["phase"] = "end"
        return st

    def _choices(self, st: dict) -> range | None:
        """Values allowed for the next token; ``None`` means unbounded."""
        ph = st["phase"]
        if ph in ("n", "e", "d", "t"):
            return None
        if ph == "init":
            return range(st["n"])
        if ph == "codes":
            return range(4)
        if ph == "syms":
            return range(st["W"])
        if ph == "rows":
            n, W, nb = st["n"], st["W"], self.nb
            bounds = (n, W, nb, nb, n, W, 3, 3, 3, nb + 1)
            return range(bounds[len(st["partial"])])
        return range(0)

    def _completion(self, st: dict) -> int:
        """Generating function of the ways to finish a prefix into a valid word."""
        P = self._P
        ph = st["phase"]
        if ph == "n":
            return sum(P.shift(self._after_count(n), n) for n in range(1, P.degree))
        if ph == "e":
            return self._after_count(st["n"])
        n = st["n"]
        W, e = st["W"], st["e"]
        if ph == "init":
            return P.mul(self._range(n), self._after_init(n, e))
        if ph in ("codes", "d", "syms"):
            codes = st["codes"]
            out = P.mono(1)
            for j in range(n):
                if j < len(codes):
                    if codes[j] == 1:
                        out = P.mul(out, self._keys_of_state(j, n, W))
                else:
                    out = P.mul(out, self._state_factor(j, n, W))
            if ph == "syms":
                return P.mul(out, P.power(self._range(W), st["d"] - st["syms"]))
            return P.mul(out, self._work_block(W))
        nonfinal = st["nonfinal"]
        if ph == "t":
            return P.mul(P.mono(1), self._prod_keys(n, W, nonfinal))
        if ph == "end":
            return 1
        keys = self._keys(n, W, nonfinal)
        index = self._key_index(n, W, nonfinal)
        rows, part = st["rows"], st["partial"]
        start = index[rows[-1][:4]] + 1 if rows else 0
        left = st["t"] - len(rows)
        if not part:
            return self._exact(n, W, nonfinal, start, left)
        if left < 1:
            return 0
        if len(part) < 4:
            got = sum(v + 1 for v in part)
            out = 0
            V = self._value(n, W)
            for s in range(start, len(keys)):
                k = keys[s]
                if list(k[: len(part)]) == part:
                    out += P.shift(P.mul(V, self._exact(n, W, nonfinal, s + 1, left - 1)),
                                   self._keylen(k) - got)
            return out
        key = tuple(part[:4])
        if key not in index or index[key] < start:
            return 0
        bounds = (n, W, 3, 3, 3, self.nb + 1)
        out = self._exact(n, W, nonfinal, index[key] + 1, left - 1)
        for m in bounds[len(part) - 4:]:
            out = P.mul(out, self._range(m))
        return out

    def _prod_keys(self, n, W, nonfinal):
        P = self._P

        def build():
            out = 1
            for j in nonfinal:
                out = P.mul(out, self._keys_of_state(j, n, W))
            return out
        return self._memo(("PK", n, W, nonfinal), build)

    def _key_index(self, n, W, nonfinal):
        return self._memo(("KI", n, W, nonfinal), lambda: {
            k: i for i, k in enumerate(self._keys(n, W, nonfinal))})

    # -- public ----------------------------------------------------------------

    def count(self, length: int) -> int:
        """Number of valid encodings of exactly ``length`` letters."""
        P = self._ensure(length)
        return P.coef(self._completion({"phase": "n"}), length)

    def count_upto(self, length: int) -> int:
        P = self._ensure(length)
        if len(self._cumulative) <= length:
            total = self._completion({"phase": "n"})
            acc, cum = 0, []
            for d in range(P.degree + 1):
                acc += P.coef(total, d)
                cum.append(acc)
            self._cumulative = cum
        return self._cumulative[length]

    def _values(self, st: dict, room: int):
        ch = self._choices(st)
        return range(room) if ch is None else ch

    def rank(self, w: str) -> int:
        decode(w, self.alphabet)
        toks = tokens_of(w, self.alphabet)
        L = len(w)
        P = self._ensure(L)
        below = self.count_upto(L - 1)
        used = 0
        for p, tok in enumerate(toks):
            st = self._parse_prefix(toks[:p])
            for v in self._values(st, tok):
                if v >= tok:
                    break
                c = self._completion(self._parse_prefix(toks[:p] + [v]))
                below += P.coef(c, L - used - (v + 1))
            used += tok + 1
        return below + 1

    def unrank(self, k: int) -> str:
        if k < 1:
            raise ValueError("ranks start at 1")
        L = 6
        while self.count_upto(L) < k:
            L += 1
        P = self._P
        k -= self.count_upto(L - 1)
        toks: list[int] = []
        used = 0
        while True:
            st = self._parse_prefix(toks)
            if st["phase"] == "end":
                break
            for v in self._values(st, L - used):
                c = P.coef(self._completion(self._parse_prefix(toks + [v])), L - used - v - 1)
                if k <= c:
                    toks.append(v)
                    used += v + 1
                    break
                k -= c
            else:  # pragma: no cover - counts are exact
                raise AssertionError("unrank walked off the counted set")
        return _token_word(toks, self.alphabet)

    def iter_length(self, length: int) -> Iterator[str]:
        """All valid encodings of exactly ``length`` letters in increasing order."""
        P = self._ensure(length)

        def walk(toks, used):
            st = self._parse_prefix(toks)
            if st["phase"] == "end":
                if used == length:
                    yield list(toks)
                return
            for v in self._values(st, length - used):
                nxt = toks + [v]
                if P.coef(self._completion(self._parse_prefix(nxt)), length - used - v - 1):
                    yield from walk(nxt, used + v + 1)

        for toks in walk([], 0):
            yield _token_word(toks, self.alphabet)

    def iter_all(self) -> Iterator[str]:
        """Valid encodings in shortlex order, without end."""
        length = 1
        while True:
            yield from self.iter_length(length)
            length += 1


@lru_cache(maxsize=8)
def encoding_space(alphabet: Alphabet = DEFAULT_ALPHABET) -> EncodingSpace:
    return EncodingSpace(alphabet)
