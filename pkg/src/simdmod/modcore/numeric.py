"""Modular reduction carried out in IEEE-754 binary32/binary64 arithmetic.

Residues are stored as integral floats.  The global rounding mode is never
touched: everything runs under round-to-nearest, and the upward rounding of
``1/p`` is obtained by stepping one ulp up from the nearest quotient after an
exact rational comparison.

Python exposes no fused multiply-add before 3.13, so :func:`fma` is emulated
with Dekker's two-product and Knuth's two-sum.  The emulation is exact when
the true result ``x*y + z`` is representable, which is the only situation in
which the kernels below rely on it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from simdmod.errors import InvalidModulusError, ProfileViolationError

FORMATS = {
    # name: (ell, scalar type, Veltkamp splitter 2^ceil((ell+1)/2) + 1)
    "binary64": (52, float, 134217729.0),
    "binary32": (23, np.float32, np.float32(4097.0)),
}


class FloatVariant(enum.Enum):
    ANY_ROUNDING = "any_rounding"
    # ubar, no correction branch; only valid when p does not divide a (or a = 0)
    UPWARD_NO_HIGH_BRANCH = "upward_no_high_branch"


@dataclass(frozen=True)
class FloatContext:
    p: float
    ell: int
    u: float
    ubar: float
    fmt: str
    e: int
    m: int

    @property
    def ftype(self):
        return FORMATS[self.fmt][1]

    def half_alpha_log2(self, variant: FloatVariant) -> int:
        if variant is FloatVariant.ANY_ROUNDING:
            return self.ell // 2
        return (self.ell - 1) // 2


def make_float_ctx(p: int, fmt: str = "binary64") -> FloatContext:
    if fmt not in FORMATS:
        raise ValueError(f"unknown float format {fmt!r}")
    ell, ftype, _ = FORMATS[fmt]
    p = int(p)
    if p < 2:
        raise InvalidModulusError(f"modulus must be at least 2, got {p}")
    m = p.bit_length()
    if m > ell - 2:
        raise ProfileViolationError(f"{m}-bit modulus exceeds {ell - 2} bits allowed in {fmt}")
    fp = ftype(p)
    u = ftype(1.0) / fp
    if Fraction(float(u)) * p >= 1:
        ubar = u
    else:
        ubar = np.nextafter(u, ftype(math.inf)) if ftype is not float else math.nextafter(u, math.inf)
    assert Fraction(float(ubar)) * p >= 1
    _, E = math.frexp(float(u))
    e = ell + 1 - E
    assert abs(Fraction(1, p) - Fraction(float(u))) < Fraction(1, 2**e) if e >= 0 else True
    return FloatContext(p=fp, ell=ell, u=u, ubar=ubar, fmt=fmt, e=e, m=m)


def _floor(x):
    if type(x) is float:
        return float(math.floor(x))
    return np.floor(x)


def two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _split(a, splitter):
    c = splitter * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a, b, splitter=134217729.0):
    """Return ``(h, l)`` with ``h = fl(a*b)`` and ``h + l == a*b`` exactly."""
    h = a * b
    ah, al = _split(a, splitter)
    bh, bl = _split(b, splitter)
    return h, ((ah * bh - h) + ah * bl + al * bh) + al * bl


def fma(x, y, z, splitter=134217729.0):
    """``x*y + z``; exact whenever that value is representable in the format."""
    ph, pl = two_prod(x, y, splitter)
    s, e = two_sum(ph, z)
    return s + (e + pl)


def float_reduce_half(a, ctx: FloatContext, variant: FloatVariant = FloatVariant.ANY_ROUNDING):
    """Return ``a rem p`` for integral ``0 <= a < alpha * p`` with ``alpha = 2^floor(ell/2)``.

    ``UPWARD_NO_HIGH_BRANCH`` uses ``alpha = 2^floor((ell-1)/2)`` and no
    correction at all; it is only correct when ``p`` does not divide a
    nonzero ``a``, e.g. ``p`` prime and ``a`` a product of two residues.
    """
    alog = ctx.half_alpha_log2(variant)
    assert ctx.m <= alog, f"{ctx.m}-bit modulus too wide for half reduction"
    assert 0 <= a < float(ctx.p) * 2.0**alog and a == _floor(a), f"input {a} outside [0, alpha*p)"
    p = ctx.p
    if variant is FloatVariant.UPWARD_NO_HIGH_BRANCH:
        c = _floor(a * ctx.ubar)
        d = a - c * p
        assert 0 <= d < p and int(d) == int(a) % int(p), f"contract violated for a={a}"
        return d
    c = _floor(a * ctx.u)
    d = a - c * p
    if d >= p:
        return d - p
    if d < 0:
        return d + p
    return d


def mul_mod_fma(a1, a2, ctx: FloatContext):
    """Return ``a1*a2 rem p`` for integral ``0 <= a1*a2 < 2^(ell-2) p``."""
    p = ctx.p
    splitter = FORMATS[ctx.fmt][2]
    h, l = two_prod(a1, a2, splitter)  # l = fma(a1, a2, -h)
    c = _floor(h * ctx.u)
    d = fma(-c, p, h, splitter)
    e = d + l
    if e >= p:
        return e - p
    if e < 0:
        return e + p
    return e


def add_mod_float(x, y, ctx: FloatContext):
    a = x + y
    b = a - ctx.p
    return a if b < 0 else b


def sub_mod_float(x, y, ctx: FloatContext):
    a = x - y
    return a + ctx.p if a < 0 else a
