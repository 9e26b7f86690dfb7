import numpy as np
import pytest

from turingtest import zoo
from turingtest.encoding import encode
from turingtest.oracle import (BlankOracle, BoundedPi, Certificate, RandomOracle, certify,
                               load_certificates, oracle_symbol, pi_query, pi_tape_prefix,
                               save_certificates)

from oracles import simulate


def test_blank_oracle():
    assert BlankOracle().read(10) == "_"


def test_certify():
    echo = zoo.machine("echo")
    c = certify(echo, encode(echo))
    assert c.halts and c.cycles == simulate(echo, [encode(echo)], 10_000)[1][0] == len(encode(echo)) + 1
    assert not certify(zoo.machine("loop"), "").halts


def test_certificates_roundtrip(tmp_path):
    certs = [Certificate("aaaaaa", "", True, 0, "halts"), Certificate("x", "y", False, None, "repeat")]
    save_certificates(certs, tmp_path / "c.jsonl")
    assert load_certificates(tmp_path / "c.jsonl") == certs


def test_closed_universe(closed_pi, universe):
    assert closed_pi.is_closed
    for m in universe:
        for n in universe:
            want = simulate(m, [encode(n)], 100_000)[0][0] is not None
            assert pi_query(closed_pi, m, encode(n)) == want
    assert closed_pi.uncertified == []


def test_tape_lists_recognizing_pairs(closed_pi):
    tape = pi_tape_prefix(closed_pi, 200)
    first = closed_pi.pairs()[0]
    assert tape.startswith(first[0] + "_" + first[1] + "_")
    assert closed_pi.pairs() == sorted(closed_pi.pairs())


def test_uncertified_queries_are_logged(universe):
    pi = BoundedPi(universe, budget=100)
    assert pi.query(zoo.machine("echo"), "ab")
    assert pi.uncertified and pi.describe()["uncertified_queries"] == 1


def test_random_oracle_is_order_independent():
    a, b = RandomOracle(0.3, 11), RandomOracle(0.3, 11)
    forward = [a.bit(i) for i in range(3000)]
    backward = [b.bit(i) for i in reversed(range(3000))][::-1]
    assert forward == backward == list(RandomOracle(0.3, 11).bits(3000))
    assert oracle_symbol(a, 1) == forward[0]


def test_random_oracle_frequency():
    bits = RandomOracle(0.7, 3).bits(100_000)
    zeros = float(np.mean(bits == 0))
    assert abs(zeros - 0.7) < 4 * (0.7 * 0.3 / 100_000) ** 0.5


def test_random_oracle_rejects_bad_p0():
    with pytest.raises(ValueError):
        RandomOracle(1.5, 0)
