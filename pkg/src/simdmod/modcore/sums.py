"""Modular sum, difference and negation on ``n``-bit words.

Three interchangeable forms are provided:

``branch``
    compare-and-subtract, including the carry test needed when ``m = n``;
``min``
    ``min(a, a - p)`` with wrapping subtraction, valid for ``m <= n - 1``;
``shift``
    signed ``a = x + y - p`` followed by ``a + ((a >> (n-1)) & p)``, valid for
    ``m <= n - 1``.

``variant="auto"`` picks ``branch`` for ``m = n`` and ``min`` otherwise.
"""

from __future__ import annotations

from simdmod.modcore.barrett import BarrettContext

VARIANTS = ("auto", "branch", "min", "shift")


def _resolve(variant: str, ctx: BarrettContext) -> str:
    if variant == "auto":
        return "branch" if ctx.m >= ctx.n else "min"
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if variant != "branch" and ctx.m >= ctx.n:
        raise ValueError(f"variant {variant!r} requires m <= n - 1")
    return variant


def _sar(a: int, n: int) -> int:
    """Arithmetic right shift by n-1 of the n-bit two's complement pattern ``a``."""
    return -1 if a >> (n - 1) else 0


def add_mod(x: int, y: int, ctx: BarrettContext, variant: str = "auto") -> int:
    assert 0 <= x < ctx.p and 0 <= y < ctx.p
    p, mask = ctx.p, ctx.mask
    how = _resolve(variant, ctx)
    if how == "branch":
        a = (x + y) & mask
        if a < x:
            return (a - p) & mask
        return a - p if a >= p else a
    if how == "min":
        a = x + y
        return min(a, (a - p) & mask)
    a = (x + y - p) & mask
    return (a + (_sar(a, ctx.n) & p)) & mask


def sub_mod(x: int, y: int, ctx: BarrettContext, variant: str = "auto") -> int:
    assert 0 <= x < ctx.p and 0 <= y < ctx.p
    p, mask = ctx.p, ctx.mask
    how = _resolve(variant, ctx)
    a = (x - y) & mask
    if how == "branch":
        return (a + p) & mask if x < y else a
    if how == "min":
        return min(a, (a + p) & mask)
    return (a + (_sar(a, ctx.n) & p)) & mask


def neg_mod(x: int, ctx: BarrettContext, variant: str = "auto") -> int:
    assert 0 <= x < ctx.p
    how = _resolve(variant, ctx)
    if how == "branch":
        return ctx.p - x if x else 0
    if how == "min":
        # (-x) wraps above p - x unless x = 0
        return min(ctx.p - x, -x & ctx.mask)
    a = -x & ctx.mask
    return (a + (_sar(a, ctx.n) & ctx.p)) & ctx.mask
