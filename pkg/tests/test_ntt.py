import numpy as np
import pytest

from simdmod import ntt
from simdmod.errors import RangeError, UnsupportedTransformSizeError

import oracles

P = 469762049


def test_bit_mirror():
    assert ntt.bit_mirror(0, 5) == 0
    assert ntt.bit_mirror(1, 3) == 4
    assert ntt.bit_mirror(3, 4) == 12
    for k in range(7):
        assert [ntt.bit_mirror(i, k) for i in range(1 << k)] == [oracles.mirror(i, k) for i in range(1 << k)]


def test_plan_limits():
    plan = ntt.make_plan(P, 26, n1=1 << 13)
    assert pow(plan.omega, 1 << 25, P) == P - 1
    with pytest.raises(UnsupportedTransformSizeError):
        ntt.make_plan(P, 27)


def test_plan_small_prime_root():
    plan = ntt.make_plan(5, 2)
    assert plan.omega in (2, 3) and plan.omega**2 % 5 == 4


def test_generator_is_smallest():
    assert ntt.find_generator(5) == 2
    assert ntt.find_generator(7) == 3
    assert ntt.find_generator(P) == 3


def test_dft_examples():
    plan = ntt.make_plan(5, 2)
    assert plan.omega == 2
    assert ntt.dft_bruteforce([1, 2, 3, 4], plan).tolist() == [0, 4, 3, 2]
    assert ntt.dft_bruteforce([3, 0, 0, 0], plan).tolist() == [3, 3, 3, 3]
    assert ntt.dft_bruteforce([0, 0, 0, 0], plan).tolist() == [0, 0, 0, 0]


def test_tft_example():
    plan = ntt.make_plan(5, 2)
    assert ntt.tft([1, 2, 3, 4], 4, plan).tolist() == [0, 3, 4, 2]


def test_tft_single_point_is_coefficient_sum():
    plan = ntt.make_plan(P, 4)
    assert ntt.tft([7], 1, plan).tolist() == [7]


@pytest.mark.parametrize("strategy", ["barrett", "fma"])
@pytest.mark.parametrize("p", [17, 97, P])
def test_tft_matches_mirrored_dft(p, strategy):
    gen = np.random.default_rng(p)
    for k in range(0, min(6, ntt.two_adic_valuation(p - 1)) + 1):
        plan = ntt.make_plan(p, k, strategy=strategy)
        a = gen.integers(0, p, plan.n).tolist()
        nat = oracles.dft(a, plan.omega, p)
        want = [nat[oracles.mirror(i, k)] for i in range(plan.n)]
        assert ntt.tft(a, plan.n, plan).tolist() == want
        for l in range(1, plan.n):
            padded = a[:l] + [0] * (plan.n - l)
            nat = oracles.dft(padded, plan.omega, p)
            assert ntt.tft(a[:l], l, plan).tolist() == [nat[oracles.mirror(i, k)] for i in range(l)]


def test_roundtrip_all_lengths():
    plan = ntt.make_plan(P, 6)
    gen = np.random.default_rng(3)
    for l in range(65):
        a = gen.integers(0, P, l)
        assert ntt.itft(ntt.tft(a, l, plan), l, plan).tolist() == a.tolist()


def test_blocked_examples():
    gen = np.random.default_rng(4)
    plan = ntt.make_plan(17, 3, n1=2)
    a = gen.integers(0, 17, 8)
    assert ntt.blocked_tft(a, 8, plan).tolist() == ntt.tft(a, 8, plan).tolist()
    plan = ntt.make_plan(P, 4, n1=4)
    a = gen.integers(0, P, 10)
    out = ntt.blocked_tft(a, 10, plan)
    assert len(out) == 12  # lambda * n1 with lambda = 3
    assert out[:10].tolist() == ntt.tft(a, 10, plan).tolist()
    assert ntt.blocked_itft(out, 10, plan).tolist() == a.tolist()


def test_blocked_degenerate_split():
    plan = ntt.make_plan(P, 5, n1=1)
    a = np.arange(1, 20)
    assert ntt.blocked_tft(a, 19, plan).tolist() == ntt.tft(a, 19, plan).tolist()


def test_blocked_rejects_short_input():
    plan = ntt.make_plan(P, 5, n1=8)
    with pytest.raises(RangeError):
        ntt.blocked_tft([1, 2, 3], 3, plan)


def test_transpose_blocked():
    assert ntt.transpose_blocked(np.arange(5).reshape(1, 5)).shape == (5, 1)
    assert ntt.transpose_blocked(np.array([[1, 2], [3, 4]])).tolist() == [[1, 3], [2, 4]]
    m = np.random.default_rng(5).integers(0, 100, (37, 64))
    assert np.array_equal(ntt.transpose_blocked(m, 8), m.T)


def test_op_counter_shape():
    plan = ntt.make_plan(P, 10, n1=32)
    c = ntt.OpCounter()
    ntt.blocked_tft(np.ones(1024, dtype=np.int64), 1024, plan, counter=c)
    assert c.total <= 1.5 * 1024 * 10 + 3 * 1024
    assert c.muls > 0 and c.adds > 0


def test_length_checked():
    plan = ntt.make_plan(P, 3)
    with pytest.raises(RangeError):
        ntt.tft(np.arange(9), 9, plan)
