"""Montgomery reduction with shift ``m`` for odd moduli."""

from __future__ import annotations

from dataclasses import dataclass

from simdmod.errors import InvalidModulusError, ProfileViolationError
from simdmod.modcore.barrett import WORD_SIZES, ceil_log2, word_size_for


@dataclass(frozen=True)
class MontgomeryContext:
    """Cofactors satisfy ``rho * 2^m - chi * p == 1``; ``rho`` is ``2^-m mod p``."""

    p: int
    n: int
    m: int
    mu: int
    chi: int
    rho: int
    r2: int


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        quo, rem = divmod(a, b)
        a, b = b, rem
        x0, x1 = x1, x0 - quo * x1
        y0, y1 = y1, y0 - quo * y1
    return a, x0, y0


def make_montgomery(p: int, m: int, n: int | None = None) -> MontgomeryContext:
    if n is None:
        n = word_size_for(m)
    if n not in WORD_SIZES:
        raise ProfileViolationError(f"unsupported word size n={n}")
    if p < 3 or p % 2 == 0:
        raise InvalidModulusError(f"Montgomery reduction needs an odd modulus >= 3, got {p}")
    if p >= 1 << n:
        raise ProfileViolationError(f"modulus {p} does not fit in {n} bits")
    if not ceil_log2(p) <= m <= n:
        raise ProfileViolationError(f"shift m={m} outside [{ceil_log2(p)}, {n}]")
    R = 1 << m
    g, u, v = _ext_gcd(R, p)
    assert g == 1
    # u R + v p = 1; normalise to 0 < rho < p, then chi = (rho R - 1) / p
    rho = u % p
    chi = (rho * R - 1) // p
    assert rho * R - chi * p == 1 and 0 < chi < R and 0 < rho < p
    return MontgomeryContext(p=p, n=n, m=m, mu=R - 1, chi=chi, rho=rho, r2=(R * R) % p)


def mont_reduce(a: int, ctx: MontgomeryContext) -> int:
    """Return ``a * rho mod p`` for ``0 <= a < 2^m p``."""
    assert 0 <= a < ctx.p << ctx.m, f"input {a} outside [0, 2^m p)"
    p, n = ctx.p, ctx.n
    b = (a * ctx.chi) & ctx.mu
    c = a + b * p
    if ctx.m < n:
        d = c >> ctx.m
    else:
        # the double-width sum may carry out of L; detect it as the C code does
        c &= (1 << (2 * n)) - 1
        d = c >> ctx.m
        if c < a:
            return (d - p) & ((1 << n) - 1)
    return d - p if d >= p else d


def to_mont(x: int, ctx: MontgomeryContext) -> int:
    assert 0 <= x < ctx.p
    return mont_reduce(x * ctx.r2, ctx)


def from_mont(x: int, ctx: MontgomeryContext) -> int:
    return mont_reduce(x, ctx)


def mont_mul(x: int, y: int, ctx: MontgomeryContext) -> int:
    """Product of two Montgomery representatives, itself in Montgomery form."""
    assert 0 <= x < ctx.p and 0 <= y < ctx.p
    return mont_reduce(x * y, ctx)


@dataclass(frozen=True)
class MontgomeryFixed:
    """Multiplicand ``y`` (Montgomery form) with ``phi = chi * y mod 2^m``."""

    y: int
    phi: int


def make_mont_fixed(y: int, ctx: MontgomeryContext) -> MontgomeryFixed:
    assert 0 <= y < ctx.p
    return MontgomeryFixed(y=y, phi=(ctx.chi * y) & ctx.mu)


def mont_mul_fixed(x: int, fm: MontgomeryFixed, ctx: MontgomeryContext) -> int:
    """Same result as ``mont_mul(x, fm.y)``; the low product uses the cached ``phi``."""
    assert 0 <= x < ctx.p
    p, n = ctx.p, ctx.n
    a = x * fm.y
    b = (x * fm.phi) & ctx.mu
    c = a + b * p
    if ctx.m < n:
        d = c >> ctx.m
    else:
        c &= (1 << (2 * n)) - 1
        d = c >> ctx.m
        if c < a:
            return (d - p) & ((1 << n) - 1)
    return d - p if d >= p else d
