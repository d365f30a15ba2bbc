import numpy as np
import pytest

from simdmod import modcore, modsimd
from simdmod.modcore import Profile

import oracles


def u8(values):
    return np.array(values, dtype=np.uint8)


def test_vadd_examples():
    ctx = modcore.make_barrett(7, 8, Profile.MINUS2)
    assert modsimd.vadd_mod(u8([5, 6, 3, 0]), u8([3, 2, 4, 6]), ctx).tolist() == [1, 1, 0, 6]
    assert modsimd.vadd_mod(u8([0] * 32), u8([0] * 32), ctx).tolist() == [0] * 32


def test_vadd_overflow_lane():
    ctx = modcore.make_barrett(251, 8, Profile.FULL)
    assert modsimd.vadd_mod(u8([200, 250]), u8([100, 250]), ctx).tolist() == [49, 249]


def test_vsub_vneg():
    ctx = modcore.make_barrett(251, 8, Profile.FULL)
    xs, ys = u8([0, 5, 250]), u8([1, 5, 0])
    assert modsimd.vsub_mod(xs, ys, ctx).tolist() == [250, 0, 250]
    assert modsimd.vneg_mod(xs, ctx).tolist() == [0, 246, 1]


def test_vmul_examples():
    ctx = modcore.make_barrett(7, 8, Profile.MINUS2)
    assert modsimd.vmul_mod_barrett(u8([5, 6]), u8([3, 2]), ctx).tolist() == [1, 5]
    assert modsimd.vmul_mod_barrett(u8([0, 0]), u8([0, 0]), ctx).tolist() == [0, 0]


def test_vmul_p251_full_matches_scalar():
    ctx = modcore.make_barrett(251, 8, Profile.FULL)
    gen = np.random.default_rng(0)
    xs, ys = gen.integers(0, 251, 4096).astype(np.uint8), gen.integers(0, 251, 4096).astype(np.uint8)
    want = [modcore.mul_mod(int(x), int(y), ctx) for x, y in zip(xs, ys)]
    assert modsimd.vmul_mod_barrett(xs, ys, ctx).tolist() == want


def test_vmul_fixed_examples():
    ctx = modcore.make_barrett(7, 8, Profile.MINUS2)
    xs = u8([5, 0, 6, 1])
    assert modsimd.vmul_mod_fixed(xs, modcore.make_fixed(3, ctx), ctx).tolist() == [1, 0, 4, 3]
    assert modsimd.vmul_mod_fixed(xs, modcore.make_fixed(0, ctx), ctx).tolist() == [0, 0, 0, 0]
    assert modsimd.vmul_mod_fixed(xs, modcore.make_fixed(1, ctx), ctx).tolist() == xs.tolist()


def test_vmont_examples():
    ctx = modcore.make_montgomery(7, 8)
    assert modsimd.vmont_mul(u8([5]), u8([2]), ctx).tolist() == [6]
    assert modsimd.vmont_mul(u8([0, 0]), u8([3, 0]), ctx).tolist() == [0, 0]


def test_vmul_fma_examples():
    ctx = modcore.make_float_ctx(7)
    assert modsimd.vmul_mod_fma(np.array([3.0, 0.0]), np.array([4.0, 5.0]), ctx).tolist() == [5.0, 0.0]
    ones = np.ones(8)
    assert modsimd.vmul_mod_fma(ones, ones, ctx).tolist() == [1.0] * 8


def test_vmul_fma_large_prime_matches_scalar():
    p = 2**50 - 27
    ctx = modcore.make_float_ctx(p)
    gen = np.random.default_rng(1)
    xs = gen.integers(0, p, 2000).astype(np.float64)
    ys = gen.integers(0, p, 2000).astype(np.float64)
    xs[0] = ys[0] = p - 1
    got = modsimd.vmul_mod_fma(xs, ys, ctx)
    assert got.tolist() == [modcore.mul_mod_fma(float(x), float(y), ctx) for x, y in zip(xs, ys)]
    assert int(got[0]) == (p - 1) ** 2 % p


@pytest.mark.parametrize("n", [16, 32, 64])
def test_lanes_against_oracle(n):
    gen = np.random.default_rng(n)
    U = modsimd.lane_dtype(n)
    for profile in Profile:
        p = (1 << profile.bound(n)) - 1 - 2 * int(gen.integers(0, 100))
        ctx = modcore.make_barrett(p, n, profile)
        xs = gen.integers(0, p, 512, dtype=np.uint64).astype(U)
        ys = gen.integers(0, p, 512, dtype=np.uint64).astype(U)
        xs[0] = ys[0] = p - 1
        want = [oracles.mod_mul(int(x), int(y), p) for x, y in zip(xs, ys)]
        assert [int(v) for v in modsimd.vmul_mod_barrett(xs, ys, ctx)] == want
        assert [int(v) for v in modsimd.vadd_mod(xs, ys, ctx)] == [oracles.mod_add(int(x), int(y), p) for x, y in zip(xs, ys)]
        mc = modcore.make_montgomery(p | 1 if p | 1 < 1 << n else p - 2, n, n)
        q = mc.p
        xq, yq = (xs % U(q)).astype(U), (ys % U(q)).astype(U)
        assert [int(v) for v in modsimd.vmont_mul(xq, yq, mc)] == [oracles.mont_mul(int(x), int(y), q, n) for x, y in zip(xq, yq)]


def test_out_parameter_writes_first_buffer():
    ctx = modcore.make_barrett(97, 16, Profile.MINUS2)
    xs = modsimd.aligned_copy(np.arange(64, dtype=np.uint16))
    ys = np.full(64, 3, dtype=np.uint16)
    res = modsimd.vmul_mod_barrett(xs, ys, ctx, out=xs)
    assert res is xs and xs.tolist() == [3 * i % 97 for i in range(64)]
    assert xs.ctypes.data % modsimd.ALIGNMENT == 0


def test_lane_dtype_checked():
    ctx = modcore.make_barrett(97, 16, Profile.MINUS2)
    with pytest.raises((TypeError, ValueError)):
        modsimd.vadd_mod(np.arange(4, dtype=np.uint32), np.arange(4, dtype=np.uint32), ctx)


def test_u128_multiply():
    gen = np.random.default_rng(2)
    a = gen.integers(0, 2**64, 1000, dtype=np.uint64, endpoint=False)
    b = gen.integers(0, 2**64, 1000, dtype=np.uint64, endpoint=False)
    a[0] = b[0] = 2**64 - 1
    prod = modsimd.U128.mul(a, b)
    assert prod.to_ints() == [int(x) * int(y) for x, y in zip(a, b)]


def test_bias_compare_edges():
    a = np.array([0, 2**63, 2**64 - 1, 5], dtype=np.uint64)
    b = np.array([2**63, 0, 2**63, 5], dtype=np.uint64)
    assert modsimd.bias_cmpgt_u64(a, b).tolist() == [False, True, True, False]


def test_multi_modulus_barrett():
    moduli = [97, 101, 103, 107]
    ctx = modsimd.make_multi_barrett(moduli, 16, Profile.MINUS2)
    xs = np.array([96, 100, 102, 106] * 2, dtype=np.uint16)
    ys = np.array([95, 7, 50, 106] * 2, dtype=np.uint16)
    ps = moduli * 2
    assert modsimd.vmul_mod_barrett(xs, ys, ctx).tolist() == [int(x) * int(y) % p for x, y, p in zip(xs, ys, ps)]


def test_lane_count():
    assert modsimd.lane_count(8) == 32 and modsimd.lane_count(64) == 4
    assert modsimd.lanes([1, 2, 3], 16).dtype == np.uint16
