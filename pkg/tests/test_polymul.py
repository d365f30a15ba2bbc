import numpy as np
import pytest

from simdmod import ntt, polymul
from simdmod.errors import InvalidModulusError
from simdmod.polymul import ModPoly, PolyMatrix

import oracles

P = 469762049


def test_naive_examples():
    a = ModPoly.of([1, 1], 7)
    assert polymul.poly_mul_naive(a, a).tolist() == [1, 2, 1]
    b = ModPoly.of([3, 5, 6], 7)
    assert polymul.poly_mul_naive(b, ModPoly.of([1], 7)) == b


def test_naive_random_degree5():
    gen = np.random.default_rng(0)
    a, b = gen.integers(0, P, 6).tolist(), gen.integers(0, P, 6).tolist()
    got = polymul.poly_mul_naive(ModPoly.of(a, P), ModPoly.of(b, P))
    assert got.tolist() == oracles.poly_mul(a, b, P)


def test_tft_product_examples():
    plan = ntt.make_plan(P, 10)
    c = polymul.poly_mul_tft(ModPoly.of([P - 1], P), ModPoly.of([P - 2], P), plan)
    assert c.tolist() == [2]
    a = ModPoly.of([1, 1], P)
    assert polymul.poly_mul_tft(a, a, plan).tolist() == [1, 2, 1]


def test_tft_product_random():
    gen = np.random.default_rng(1)
    a = ModPoly.of(gen.integers(0, P, 201), P)
    b = ModPoly.of(gen.integers(0, P, 301), P)
    plan = ntt.make_plan(P, 9)
    assert polymul.poly_mul_tft(a, b, plan) == polymul.poly_mul_naive(a, b)


def test_tft_modulus_mismatch():
    plan = ntt.make_plan(P, 4)
    with pytest.raises(InvalidModulusError):
        polymul.poly_mul_tft(ModPoly.of([1], 7), ModPoly.of([1], 7), plan)


def test_kronecker_examples():
    a = ModPoly.of([1, 1], 7)
    assert polymul.poly_mul_kronecker(a, a).tolist() == [1, 2, 1]
    assert polymul.poly_mul_kronecker(ModPoly.of([5], 7), ModPoly.of([4], 7)).tolist() == [6]


def test_kronecker_random():
    gen = np.random.default_rng(2)
    a = ModPoly.of(gen.integers(0, P, 101), P)
    b = ModPoly.of(gen.integers(0, P, 101), P)
    assert polymul.poly_mul_kronecker(a, b) == polymul.poly_mul_naive(a, b)


def test_kronecker_chunk_rule():
    # 2m + ceil(log2(min(la, lb))) rounded up to whole bytes
    assert polymul.kronecker_chunk_bits(P, 100, 1000) == 72
    assert polymul.kronecker_chunk_bits(7, 2, 2) == 8


def test_kronecker_pack_roundtrip():
    rows = np.array([[1, 2, 3], [250, 0, 7]])
    packed = polymul.kronecker_pack(rows, 2)
    assert packed.shape == (2, 6)
    assert polymul.kronecker_unpack(packed, 3, 2, 251).tolist() == [[1, 2, 3], [250, 0, 7]]


def test_matrix_examples():
    gen = np.random.default_rng(3)
    plan = ntt.make_plan(P, 5)
    a = PolyMatrix.of([[gen.integers(0, P, 8).tolist()]], P)
    b = PolyMatrix.of([[gen.integers(0, P, 8).tolist()]], P)
    want = polymul.poly_mul_tft(a.entry(0, 0), b.entry(0, 0), plan)
    assert polymul.poly_mat_mul(a, b, plan).entry(0, 0) == want
    B = PolyMatrix(gen.integers(0, P, (3, 3, 8)), P)
    assert polymul.poly_mat_mul(PolyMatrix.identity(3, P), B, plan) == B


def test_matrix_random_3x3():
    gen = np.random.default_rng(4)
    A = PolyMatrix(gen.integers(0, P, (3, 3, 8)), P)
    B = PolyMatrix(gen.integers(0, P, (3, 3, 8)), P)
    plan = ntt.make_plan(P, 5)
    got = polymul.poly_mat_mul(A, B, plan)
    for i in range(3):
        for j in range(3):
            want = [0] * 15
            for k in range(3):
                prod = oracles.poly_mul(A.entry(i, k).tolist(), B.entry(k, j).tolist(), P)
                want = [(x + y) % P for x, y in zip(want, prod)]
            assert got.entry(i, j).tolist()[: len(want)] == want
