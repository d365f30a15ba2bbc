"""Branch-free lane kernels mirroring the scalar ones in :mod:`simdmod.modcore`.

Every data-dependent decision is a lane select (``minimum``, ``where`` or a
mask ``&``), never a Python branch on values.  The per-width strategies:

* sums: ``min(a, a - p)`` for 8/16/32-bit lanes when ``m <= n - 1``; the
  sign-compare form for 64-bit lanes; the ``max``/``cmpeq`` form when
  ``m = n``, with unsigned 64-bit comparison emulated by biasing;
* Barrett products: widen to the double-width lane type (8 -> 16, 16 -> 32,
  32 -> 64), reduce, then ``h`` unconditional ``min`` rounds; 64-bit lanes go
  through :class:`~simdmod.modsimd.lanes.U128`;
* binary64/binary32 lanes: sign-bit blends as in the SSE ``blendv`` code.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from simdmod.errors import ProfileViolationError
from simdmod.modcore.barrett import BarrettContext, BarrettHalfContext, FixedMultiplicand, Profile, make_barrett
from simdmod.modcore.montgomery import MontgomeryContext
from simdmod.modcore.numeric import FORMATS, FloatContext, FloatVariant, fma, two_prod
from simdmod.modsimd.lanes import LANE_DTYPES, WIDE_DTYPES, U128, bias_cmpgt_u64, mask_of


@dataclass(frozen=True)
class MultiBarrettContext:
    """Several moduli sharing ``(r, s, t)``, one per lane (``p`` and ``q`` are arrays)."""

    p: np.ndarray
    q: np.ndarray
    n: int
    m: int
    r: int
    s: int
    t: int
    alpha_log2: int
    h: int
    profile: Profile

    def tiled(self, count: int) -> "MultiBarrettContext":
        """Moduli repeated as ``p1 p2 .. pk p1 p2 ..`` across ``count`` lanes."""
        k = len(self.p)
        if count % k:
            raise ValueError(f"{count} lanes are not a multiple of {k} moduli")
        return dataclasses.replace(self, p=np.tile(self.p, count // k), q=np.tile(self.q, count // k))


def make_multi_barrett(moduli, n: int, profile: Profile = Profile.FULL) -> MultiBarrettContext:
    ctxs = [make_barrett(int(p), n, profile) for p in moduli]
    if not ctxs:
        raise ValueError("need at least one modulus")
    first = ctxs[0]
    if any((c.r, c.s, c.t) != (first.r, first.s, first.t) for c in ctxs):
        raise ProfileViolationError("moduli must share the bit size r to share (r, s, t)")
    dt = LANE_DTYPES[n]
    return MultiBarrettContext(
        p=np.array([c.p for c in ctxs], dtype=dt),
        q=np.array([c.q for c in ctxs], dtype=dt),
        n=n,
        m=first.m,
        r=first.r,
        s=first.s,
        t=first.t,
        alpha_log2=first.alpha_log2,
        h=first.h,
        profile=profile,
    )


@dataclass(frozen=True)
class FixedTable:
    """Lane-wise multiplicands with their cached ``psi``/``psi_bar`` (e.g. twiddles)."""

    y: np.ndarray
    psi: np.ndarray
    psi_bar: np.ndarray
    half: bool


def make_fixed_table(ys, ctx: BarrettContext) -> FixedTable:
    dt = LANE_DTYPES[ctx.n]
    if ctx.n <= 32:
        y = np.asarray(ys, dtype=np.uint64)
        assert np.all(y < ctx.p)
        num = y << np.uint64(ctx.n)
        p = np.uint64(ctx.p)
        psi = num // p
        psi_bar = psi + (num % p != 0)
        return FixedTable(y=y.astype(dt), psi=psi.astype(dt), psi_bar=psi_bar.astype(dt), half=2 * ctx.m <= ctx.n)
    shape = np.shape(ys)
    flat = [int(y) for y in np.ravel(ys)]
    assert all(0 <= y < ctx.p for y in flat)
    psi = [(y << ctx.n) // ctx.p for y in flat]
    psi_bar = [-(-(y << ctx.n) // ctx.p) for y in flat]
    return FixedTable(
        y=np.array(flat, dtype=dt).reshape(shape),
        psi=np.array(psi, dtype=dt).reshape(shape),
        psi_bar=np.array(psi_bar, dtype=dt).reshape(shape),
        half=2 * ctx.m <= ctx.n,
    )


def _u(xs, n):
    dt = LANE_DTYPES[n]
    xs = np.asarray(xs)
    if xs.dtype != dt:
        raise TypeError(f"expected {np.dtype(dt).name} lanes, got {xs.dtype}")
    return xs


def _c(value, dtype):
    return np.asarray(value, dtype=dtype)


def _store(res, out):
    if out is None:
        return res
    out[...] = res
    return out


def vadd_mod(xs, ys, ctx: BarrettContext, out=None):
    n = ctx.n
    xs, ys = _u(xs, n), _u(ys, n)
    U = LANE_DTYPES[n]
    p = _c(ctx.p, U)
    if ctx.m <= n - 1:
        if n < 64:
            a = xs + ys
            res = np.minimum(a, a - p)
        else:
            a = (xs + ys - p).view(np.int64)
            b = mask_of(a < 0, np.uint64)
            res = a.view(np.uint64) + (b & p)
    elif n < 64:
        a = p - ys
        b = mask_of(np.maximum(xs, a) == xs, U)
        res = xs - a + (~b & p)
    else:
        a = xs + ys
        b = bias_cmpgt_u64(xs, a) | bias_cmpgt_u64(a, p - np.uint64(1))
        res = a - (mask_of(b, np.uint64) & p)
    return _store(res, out)


def vsub_mod(xs, ys, ctx: BarrettContext, out=None):
    n = ctx.n
    xs, ys = _u(xs, n), _u(ys, n)
    U = LANE_DTYPES[n]
    p = _c(ctx.p, U)
    a = xs - ys
    if ctx.m <= n - 1:
        if n < 64:
            res = np.minimum(a, a + p)
        else:
            s = a.view(np.int64) >> 63
            res = a + (s.view(np.uint64) & p)
    else:
        borrow = bias_cmpgt_u64(ys, xs) if n == 64 else ys > xs
        res = a + (mask_of(borrow, U) & p)
    return _store(res, out)


def vneg_mod(xs, ctx: BarrettContext, out=None):
    xs = _u(xs, ctx.n)
    return vsub_mod(np.zeros_like(xs), xs, ctx, out=out)


def _min_rounds(d, p, h):
    for _ in range(h):
        d = np.minimum(d, d - p)
    return d


def _select_rounds128(d: U128, p: U128, h: int) -> U128:
    for _ in range(h):
        d = (d - p).where(d >= p, d)
    return d


def vmul_mod_barrett(xs, ys, ctx: BarrettContext | MultiBarrettContext, out=None):
    n = ctx.n
    xs, ys = _u(xs, n), _u(ys, n)
    if isinstance(ctx, MultiBarrettContext) and len(ctx.p) != xs.shape[-1]:
        ctx = ctx.tiled(xs.shape[-1])
    U = LANE_DTYPES[n]
    if n == 64:
        a = U128.mul(xs, ys)
        c = (a >> ctx.s).mul_low(_c(ctx.q, U)) >> ctx.t
        p128 = U128.from_u64(_c(ctx.p, U))
        d = a - U128.mul(c.lo, p128.lo)
        return _store(_select_rounds128(d, p128, ctx.h).lo, out)
    L = WIDE_DTYPES[n]
    a = xs.astype(L) * ys.astype(L)
    b = a >> ctx.s
    c = (b * _c(ctx.q, L)) >> ctx.t
    if ctx.profile is Profile.MINUS2:
        p = _c(ctx.p, U)
        d = xs * ys - c.astype(U) * p
        res = _min_rounds(d, p, ctx.h)
    else:
        pL = _c(ctx.p, L)
        res = _min_rounds(a - c * pL, pL, ctx.h).astype(U)
    return _store(res, out)


def vmul_mod_half(xs, ys, ctx: BarrettHalfContext, out=None):
    n = ctx.n
    xs, ys = _u(xs, n), _u(ys, n)
    U = LANE_DTYPES[n]
    a = xs * ys  # p^2 < 2^n, no wrap
    if n == 64:
        c = U128.mul(a, _c(ctx.qbar, U)) >> ctx.t
        res = a - c.lo * _c(ctx.p, U)
    else:
        L = WIDE_DTYPES[n]
        c = (a.astype(L) * _c(ctx.qbar, L)) >> ctx.t
        res = a - c.astype(U) * _c(ctx.p, U)
    return _store(res, out)


def vmul_mod_fixed(xs, fm: FixedMultiplicand | FixedTable, ctx: BarrettContext, out=None):
    """Lane-wise ``mul_mod_fixed``; ``fm`` is one multiplicand or one per lane."""
    n = ctx.n
    xs = _u(xs, n)
    U = LANE_DTYPES[n]
    y = _c(fm.y, U)
    p = _c(ctx.p, U)
    if n == 64:
        if fm.half:
            c = U128.mul(xs, _c(fm.psi_bar, U)).hi
            return _store(xs * y - c * p, out)
        c = U128.mul(xs, _c(fm.psi, U)).hi
        d = U128.mul(xs, y) - U128.mul(c, p)
        return _store(_select_rounds128(d, U128.from_u64(p), 1).lo, out)
    L = WIDE_DTYPES[n]
    xl = xs.astype(L)
    if fm.half:
        c = (xl * _c(fm.psi_bar, L)) >> n
        return _store(xs * y - c.astype(U) * p, out)
    c = (xl * _c(fm.psi, L)) >> n
    pL = _c(ctx.p, L)
    d = xl * _c(fm.y, L) - c * pL
    return _store(np.minimum(d, d - pL).astype(U), out)


def vmont_mul(xs, ys, ctx: MontgomeryContext, out=None):
    n, m = ctx.n, ctx.m
    xs, ys = _u(xs, n), _u(ys, n)
    U = LANE_DTYPES[n]
    if n == 64:
        a = U128.mul(xs, ys)
        b = (a.lo * _c(ctx.chi, U)) & _c(ctx.mu, U)
        p = _c(ctx.p, U)
        c = a + U128.mul(b, p)
        d = c >> m
        if m == n:
            d = U128(d.hi + (c < a).astype(np.uint64), d.lo)
        return _store(_select_rounds128(d, U128.from_u64(p), 1).lo, out)
    L = WIDE_DTYPES[n]
    a = xs.astype(L) * ys.astype(L)
    mu = _c(ctx.mu, L)
    b = ((a & mu) * _c(ctx.chi, L)) & mu
    pL = _c(ctx.p, L)
    c = a + b * pL
    d = c >> m
    if m == n:
        # the sum can carry out of the double-width lane; put the carry back as 2^n
        d = d + (mask_of(c < a, L) & _c(1 << n, L))
    return _store(np.minimum(d, d - pL).astype(U), out)


def _fl(xs, ctx: FloatContext):
    dt = np.float64 if ctx.fmt == "binary64" else np.float32
    xs = np.asarray(xs)
    if xs.dtype != dt:
        raise TypeError(f"expected {np.dtype(dt).name} lanes, got {xs.dtype}")
    return xs, dt


def vadd_mod_float(xs, ys, ctx: FloatContext, out=None):
    xs, dt = _fl(xs, ctx)
    a = xs + ys
    b = a - dt(ctx.p)
    return _store(np.where(np.signbit(b), a, b), out)


def vsub_mod_float(xs, ys, ctx: FloatContext, out=None):
    xs, dt = _fl(xs, ctx)
    a = xs - ys
    b = a + dt(ctx.p)
    return _store(np.where(np.signbit(a), b, a), out)


def vmul_mod_fma(xs, ys, ctx: FloatContext, out=None):
    xs, dt = _fl(xs, ctx)
    splitter = FORMATS[ctx.fmt][2]
    p = dt(ctx.p)
    h, l = two_prod(xs, ys, splitter)
    c = np.floor(h * dt(ctx.u))
    d = fma(-c, p, h, splitter)
    e = d + l
    t = e - p
    e = np.where(np.signbit(t), e, t)
    t = e + p
    return _store(np.where(np.signbit(e), t, e), out)


def vfloat_reduce_half(xs, ctx: FloatContext, variant: FloatVariant = FloatVariant.ANY_ROUNDING, out=None):
    xs, dt = _fl(xs, ctx)
    p = dt(ctx.p)
    if variant is FloatVariant.UPWARD_NO_HIGH_BRANCH:
        c = np.floor(xs * dt(ctx.ubar))
        return _store(xs - c * p, out)
    c = np.floor(xs * dt(ctx.u))
    d = xs - c * p
    t = d - p
    d = np.where(np.signbit(t), d, t)
    t = d + p
    return _store(np.where(np.signbit(d), t, d), out)
