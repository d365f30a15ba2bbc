import math
from fractions import Fraction

import pytest

from simdmod.errors import InvalidModulusError, ProfileViolationError
from simdmod.modcore import (
    FloatVariant,
    Profile,
    add_mod,
    barrett_reduce,
    barrett_reduce_half,
    barrett_reduce_traced,
    float_reduce_half,
    from_mont,
    make_barrett,
    make_barrett_half,
    make_fixed,
    make_float_ctx,
    make_montgomery,
    mont_mul,
    mont_reduce,
    mul_mod,
    mul_mod_fixed,
    mul_mod_fma,
    neg_mod,
    profile_for,
    sub_mod,
    to_mont,
)

import oracles


# ---------------------------------------------------------------- Barrett contexts


def test_barrett_context_minus2():
    ctx = make_barrett(7, 8, Profile.MINUS2)
    assert (ctx.r, ctx.s, ctx.t, ctx.q, ctx.h, ctx.alpha) == (3, 1, 9, 146, 1, 2**6)


def test_barrett_context_full():
    ctx = make_barrett(7, 8, Profile.FULL)
    assert (ctx.s, ctx.t, ctx.q, ctx.h, ctx.alpha) == (2, 8, 146, 3, 2**8)


@pytest.mark.parametrize("n", [8, 16, 32, 64])
@pytest.mark.parametrize("profile", list(Profile))
def test_barrett_context_invariants(n, profile):
    for p in (3, 5, 7, 2 ** (profile.bound(n) - 1) + 1, 2 ** profile.bound(n) - 1):
        ctx = make_barrett(p, n, profile)
        assert 2 ** (ctx.r - 1) < p <= 2**ctx.r
        assert ctx.t >= ctx.r and ctx.s + ctx.t <= n + ctx.r - 1
        assert ctx.q == 2 ** (ctx.s + ctx.t) // p < 2**n
        alpha_off, h = {Profile.MINUS2: (-2, 1), Profile.MINUS1: (-1, 2), Profile.FULL: (0, 3)}[profile]
        assert ctx.alpha_log2 == n + alpha_off and ctx.h == h


def test_barrett_rejects_bad_moduli():
    with pytest.raises(InvalidModulusError):
        make_barrett(1, 8, Profile.FULL)
    with pytest.raises(ProfileViolationError):
        make_barrett(200, 8, Profile.MINUS1)
    with pytest.raises(ProfileViolationError):
        make_barrett(2, 8, Profile.MINUS2)


def test_profile_for():
    assert profile_for(6, 8) is Profile.MINUS2
    assert profile_for(7, 8) is Profile.MINUS1
    assert profile_for(8, 8) is Profile.FULL


# ---------------------------------------------------------------- sums


@pytest.mark.parametrize("variant", ["auto", "branch", "min", "shift"])
def test_sum_examples(variant):
    ctx = make_barrett(7, 8, Profile.MINUS2)
    assert add_mod(0, 0, ctx, variant) == 0
    assert add_mod(5, 6, ctx, variant) == 4
    assert sub_mod(2, 5, ctx, variant) == 4
    assert neg_mod(0, ctx, variant) == 0
    assert neg_mod(3, ctx, variant) == 4


def test_sum_overflow_branch():
    ctx = make_barrett(251, 8, Profile.FULL)
    assert add_mod(200, 100, ctx) == 49
    assert add_mod(250, 250, ctx) == 249
    with pytest.raises(ValueError):
        add_mod(1, 1, ctx, "min")


# ---------------------------------------------------------------- reductions


def test_barrett_reduce_examples():
    ctx = make_barrett(7, 8, Profile.MINUS2)
    assert barrett_reduce(200, ctx) == 4
    assert barrett_reduce_traced(200, ctx) == (4, 0)
    assert barrett_reduce(0, ctx) == 0
    assert barrett_reduce(447, ctx) == 6


def test_barrett_reduce_rejects_out_of_range():
    ctx = make_barrett(7, 8, Profile.MINUS2)
    with pytest.raises(AssertionError):
        barrett_reduce(448, ctx)


def test_barrett_half_examples():
    ctx = make_barrett_half(7, 8)
    assert ctx.qbar == 147
    assert barrett_reduce_half(89, ctx) == 5
    assert barrett_reduce_half(0, ctx) == 0
    assert barrett_reduce_half(6, ctx) == 6


def test_mul_mod_examples():
    ctx = make_barrett(7, 8, Profile.MINUS2)
    assert mul_mod(3, 4, ctx) == 5
    assert mul_mod(0, 6, ctx) == 0
    assert mul_mod(6, 6, ctx) == 1


def test_fixed_multiplicand():
    ctx = make_barrett(7, 8, Profile.MINUS2)
    fm = make_fixed(3, ctx)
    assert fm.psi == 109
    assert mul_mod_fixed(5, fm, ctx) == 1
    assert mul_mod_fixed(0, fm, ctx) == 0
    assert mul_mod_fixed(6, make_fixed(6, ctx), ctx) == 1


def test_fixed_half_path_needs_ceiling():
    # with m <= n/2 the correction-free path must use ceil(2^n y / p)
    ctx = make_barrett(13, 8, Profile.MINUS2, m=4)
    for y in range(13):
        fm = make_fixed(y, ctx)
        assert fm.half and fm.psi_bar == -(-(y << 8) // 13)
        for x in range(13):
            assert mul_mod_fixed(x, fm, ctx) == x * y % 13


@pytest.mark.parametrize("n", [16, 32, 64])
def test_barrett_random_wide(n):
    import random

    rng = random.Random(n)
    for profile in Profile:
        for _ in range(200):
            p = rng.randrange(3, 2 ** profile.bound(n))
            ctx = make_barrett(p, n, profile)
            x, y = rng.randrange(p), rng.randrange(p)
            assert mul_mod(x, y, ctx) == oracles.mod_mul(x, y, p)
            assert add_mod(x, y, ctx) == oracles.mod_add(x, y, p)


# ---------------------------------------------------------------- Montgomery


def test_montgomery_context():
    ctx = make_montgomery(7, 8)
    assert (ctx.rho, ctx.chi) == (2, 73)
    assert ctx.rho * 256 - ctx.chi * 7 == 1
    ctx = make_montgomery(3, 2)
    assert (ctx.rho, ctx.chi) == (1, 1)


def test_montgomery_rejects_even():
    with pytest.raises(InvalidModulusError):
        make_montgomery(16, 8)


def test_mont_reduce_examples():
    ctx = make_montgomery(7, 8)
    assert mont_reduce(20, ctx) == 5
    assert mont_reduce(0, ctx) == 0
    assert mont_reduce(10, ctx) == 6


def test_mont_mul_trace():
    ctx = make_montgomery(7, 8)
    xt, yt = to_mont(3, ctx), to_mont(4, ctx)
    assert (xt, yt) == (5, 2)
    assert mont_mul(xt, yt, ctx) == 6 == 12 * 256 % 7
    assert to_mont(0, ctx) == 0
    assert from_mont(to_mont(6, ctx), ctx) == 6


def test_mont_cofactors_against_oracle():
    for p in (3, 5, 97, 2**31 - 1, 2**61 - 1, 2**64 - 59):
        for m in {(p - 1).bit_length(), 64 if p > 2**32 else 32}:
            ctx = make_montgomery(p, m, 64)
            assert (ctx.rho, ctx.chi) == oracles.ext_gcd_cofactors(p, m)


def test_mont_full_word_carry():
    # m = n: the double-width sum can carry out, which the reduction must detect
    p = 2**64 - 59
    ctx = make_montgomery(p, 64, 64)
    for x, y in ((p - 1, p - 1), (p - 2, p - 1), (2**63, p - 1)):
        assert mont_mul(x, y, ctx) == oracles.mont_mul(x, y, p, 64)


# ---------------------------------------------------------------- floating point


def test_float_context_p7():
    ctx = make_float_ctx(7)
    assert Fraction(ctx.ubar) * 7 >= 1
    assert (Fraction(ctx.ubar) - Fraction(1, 2**ctx.e)) * 7 < 1
    assert abs(Fraction(1, 7) - Fraction(ctx.u)) < Fraction(1, 2**ctx.e)


def test_float_context_power_of_two():
    ctx = make_float_ctx(2)
    assert ctx.u == ctx.ubar == 0.5


def test_float_context_rejects_wide():
    with pytest.raises(ProfileViolationError):
        make_float_ctx(2**51)
    with pytest.raises(ProfileViolationError):
        make_float_ctx(2**21, "binary32")


@pytest.mark.parametrize("fmt", ["binary32", "binary64"])
def test_float_ubar_is_upward(fmt):
    import numpy as np

    for p in (3, 5, 7, 11, 97, 1021, 65521, 2**21 - 1):
        ctx = make_float_ctx(p, fmt)
        assert Fraction(float(ctx.ubar)) * p >= 1
        if oracles.below_by_rational(float(ctx.u), p):
            # one ulp above the nearest rounding
            assert ctx.ubar == np.nextafter(ctx.u, ctx.ftype(np.inf))
        else:
            assert ctx.ubar == ctx.u


def test_float_reduce_examples():
    ctx = make_float_ctx(7)
    assert float_reduce_half(200.0, ctx) == 4
    assert float_reduce_half(0.0, ctx) == 0
    assert float_reduce_half(6.0, ctx) == 6
    assert float_reduce_half(200.0, ctx, FloatVariant.UPWARD_NO_HIGH_BRANCH) == 4


def test_mul_mod_fma_examples():
    ctx = make_float_ctx(7)
    assert mul_mod_fma(3.0, 4.0, ctx) == 5
    assert mul_mod_fma(0.0, 6.0, ctx) == 0
    p = 2**50 - 27
    big = make_float_ctx(p)
    assert mul_mod_fma(float(p - 1), float(p - 1), big) == (p - 1) ** 2 % p


def test_mul_mod_fma_binary32():
    import numpy as np

    p = 2**21 - 9
    ctx = make_float_ctx(p, "binary32")
    for x, y in ((p - 1, p - 1), (12345, 999999), (1, p - 1)):
        got = mul_mod_fma(np.float32(x), np.float32(y), ctx)
        assert isinstance(got, np.float32) and int(got) == x * y % p
