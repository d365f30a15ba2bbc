import math
import random

import pytest

from simdmod import bigmul
from simdmod.bigmul import BigNat
from simdmod.errors import RangeError

import oracles


def test_default_primes_and_capacity():
    plan = bigmul.make_three_prime_plan(1 << 20)
    assert plan.primes == (998244353, 985661441, 943718401)
    assert bigmul.transform_capacity() == 22


def test_plan_bound_is_exact():
    for N in (1, 64, 1000, 1 << 16, 1 << 20, 32 << 16):
        plan = bigmul.make_three_prime_plan(N)
        assert (1 << plan.H) < plan.modulus
        assert plan.H == 2 * plan.h + math.ceil(math.log2(plan.d + 1))
        # h is maximal among byte multiples
        h2 = plan.h + 8
        d2 = -(-N // h2)
        assert (1 << (2 * h2 + (d2).bit_length())) >= plan.modulus or 2 * d2 > 1 << 22


def test_plan_single_chunk():
    plan = bigmul.make_three_prime_plan(1)
    assert plan.d == 1


def test_crt3():
    plan = bigmul.make_three_prime_plan(64)
    x = 123456789
    assert bigmul.crt3(*(x % p for p in plan.primes), plan) == x
    assert bigmul.crt3(0, 0, 0, plan) == 0
    rng = random.Random(0)
    for _ in range(100):
        x = rng.randrange(plan.modulus)
        assert bigmul.crt3(*(x % p for p in plan.primes), plan) == x


def test_int_mul_trivial():
    a = BigNat.from_int(12345678901234567890)
    assert int_mul_all(a, BigNat.from_int(0)) == 0
    assert int_mul_all(a, BigNat.from_int(1)) == a.to_int()
    assert bigmul.int_mul(BigNat.from_int(0xFFFFFFFF), BigNat.from_int(0xFFFFFFFF)).to_hex() == "fffffffe00000001"


def int_mul_all(a, b):
    outs = {bigmul.int_mul(a, b, cutoff=c).to_int() for c in (1, bigmul.SCHOOLBOOK_CUTOFF)}
    assert len(outs) == 1
    return outs.pop()


def test_int_mul_random_1e5_bits():
    rng = random.Random(1)
    x, y = rng.getrandbits(10**5), rng.getrandbits(10**5)
    got = bigmul.int_mul(BigNat.from_int(x), BigNat.from_int(y), cutoff=1)
    assert got.to_int() == oracles.limb_mul(x, y)


def test_int_mul_unbalanced():
    rng = random.Random(2)
    x, y = rng.getrandbits(50000), rng.getrandbits(300)
    assert bigmul.int_mul(BigNat.from_int(x), BigNat.from_int(y), cutoff=1).to_int() == x * y


def test_bignat_io():
    x = BigNat.from_hex("DEADbeef00000000000000001")
    assert x.to_hex() == "deadbeef00000000000000001"
    assert BigNat.from_bytes(x.to_bytes()).to_int() == x.to_int()
    assert BigNat.from_int(0).is_zero() and len(BigNat.from_int(0)) == 1
    with pytest.raises(RangeError):
        BigNat.from_int(-1)
    with pytest.raises(RangeError):
        BigNat.from_int(1 << 80).to_bytes(4)


def test_int_mat_mul():
    rng = random.Random(3)
    A = [[rng.getrandbits(4096) for _ in range(4)] for _ in range(4)]
    B = [[rng.getrandbits(4096) for _ in range(4)] for _ in range(4)]
    got = bigmul.int_mat_mul(A, B)
    for i in range(4):
        for j in range(4):
            assert got[i][j].to_int() == sum(oracles.limb_mul(A[i][k], B[k][j]) for k in range(4))
    assert [[e.to_int() for e in r] for r in bigmul.int_mat_mul([[A[0][0]]], [[B[0][0]]])] == [[A[0][0] * B[0][0]]]
    ident = [[int(i == j) for j in range(4)] for i in range(4)]
    assert [[e.to_int() for e in r] for r in bigmul.int_mat_mul(ident, B)] == B
