"""Scalar modular arithmetic kernels and their precomputed contexts."""

from simdmod.modcore.barrett import (
    WORD_SIZES,
    BarrettContext,
    BarrettHalfContext,
    FixedMultiplicand,
    Profile,
    barrett_reduce,
    barrett_reduce_half,
    barrett_reduce_traced,
    ceil_log2,
    make_barrett,
    make_barrett_half,
    make_fixed,
    mul_mod,
    mul_mod_fixed,
    mul_mod_half,
    profile_for,
    word_size_for,
)
from simdmod.modcore.montgomery import (
    MontgomeryContext,
    MontgomeryFixed,
    from_mont,
    make_mont_fixed,
    make_montgomery,
    mont_mul,
    mont_mul_fixed,
    mont_reduce,
    to_mont,
)
from simdmod.modcore.numeric import (
    FloatContext,
    FloatVariant,
    add_mod_float,
    float_reduce_half,
    fma,
    make_float_ctx,
    mul_mod_fma,
    sub_mod_float,
    two_prod,
)
from simdmod.modcore.sums import add_mod, neg_mod, sub_mod

__all__ = [name for name in dir() if not name.startswith("_")]
