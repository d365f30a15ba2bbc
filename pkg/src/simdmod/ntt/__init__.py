"""Number-theoretic transforms: plans, truncated transforms and the blocked variant."""

from simdmod.ntt.plan import (
    LaneArith,
    TftPlan,
    bit_reverse_indices,
    find_generator,
    make_plan,
    next_pow2,
    prime_factors,
    two_adic_valuation,
)
from simdmod.ntt.transform import (
    OpCounter,
    bit_mirror,
    blocked_itft,
    blocked_tft,
    dft_bruteforce,
    itft,
    tft,
    tft_bitrev_oracle,
    transpose_blocked,
)

__all__ = [name for name in dir() if not name.startswith("_")]
