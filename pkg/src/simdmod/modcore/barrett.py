"""Barrett reduction for unsigned words of 8, 16, 32 or 64 bits.

Integers stand in for the machine word ``U`` of ``n`` bits and its double
width companion ``L``.  Wherever the word arithmetic wraps, the kernels mask
explicitly so the Python code computes exactly what the fixed-width code
would.  Range preconditions are checked with ``assert`` and therefore vanish
under ``python -O``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from simdmod.errors import InvalidModulusError, ProfileViolationError

WORD_SIZES = (8, 16, 32, 64)


class Profile(enum.Enum):
    """Modulus width bound relative to the word size ``n``."""

    FULL = 0  # m <= n
    MINUS1 = 1  # m <= n - 1
    MINUS2 = 2  # m <= n - 2

    def bound(self, n: int) -> int:
        return n - self.value


# (alpha exponent offset, t offset, corrections) per profile; s is derived from r.
_PROFILE_TABLE = {
    Profile.MINUS2: (-2, 1, 1),
    Profile.MINUS1: (-1, 0, 2),
    Profile.FULL: (0, 0, 3),
}


def ceil_log2(p: int) -> int:
    """Smallest r with p <= 2**r (so that 2**(r-1) < p <= 2**r)."""
    return (p - 1).bit_length()


def profile_for(m: int, n: int) -> Profile:
    """Tightest profile admitting a modulus bit bound ``m`` in ``n``-bit words."""
    if not 1 <= m <= n:
        raise ProfileViolationError(f"bit bound m={m} does not fit in {n}-bit words")
    if m <= n - 2:
        return Profile.MINUS2
    if m == n - 1:
        return Profile.MINUS1
    return Profile.FULL


def word_size_for(m: int) -> int:
    """Smallest supported word size holding ``m``-bit moduli."""
    for n in WORD_SIZES:
        if m <= n:
            return n
    raise ProfileViolationError(f"no word size holds {m}-bit moduli")


def _check_word(p: int, n: int) -> None:
    if n not in WORD_SIZES:
        raise ProfileViolationError(f"unsupported word size n={n}")
    if p < 2:
        raise InvalidModulusError(f"modulus must be at least 2, got {p}")
    if p >= 1 << n:
        raise ProfileViolationError(f"modulus {p} does not fit in {n} bits")


@dataclass(frozen=True)
class BarrettContext:
    p: int
    n: int
    m: int
    r: int
    s: int
    t: int
    q: int
    alpha_log2: int
    h: int
    profile: Profile
    mask: int = field(init=False, repr=False)
    limit: int = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "mask", (1 << self.n) - 1)
        object.__setattr__(self, "limit", self.p << self.alpha_log2)

    @property
    def alpha(self) -> int:
        return 1 << self.alpha_log2


def make_barrett(p: int, n: int, profile: Profile = Profile.FULL, m: int | None = None) -> BarrettContext:
    """Build a Barrett context for modulus ``p`` in ``n``-bit words.

    ``m`` is the declared bit bound of the modulus and defaults to the bound
    of ``profile``.  The shifts, the admissible input range ``alpha * p`` and
    the maximal number of final corrections follow the per-profile table:

    ========  =========  =========  =======
    profile   alpha      s          t
    ========  =========  =========  =======
    MINUS2    2^(n-2)    max(r-2,0) n + 1
    MINUS1    2^(n-1)    r - 1      n
    FULL      2^n        r - 1      n
    ========  =========  =========  =======
    """
    _check_word(p, n)
    bound = profile.bound(n)
    if m is None:
        m = bound
    if p.bit_length() > m or m > bound:
        raise ProfileViolationError(
            f"modulus {p} ({p.bit_length()} bits) violates m={m} under profile {profile.name} (m <= {bound})"
        )
    r = ceil_log2(p)
    alpha_off, t_off, h = _PROFILE_TABLE[profile]
    s = max(r - 2, 0) if profile is Profile.MINUS2 else r - 1
    t = n + t_off
    if s + t > n + r - 1:
        # only p = 2 under MINUS2: the pre-inverse would be 2^n
        raise ProfileViolationError(f"modulus {p} needs a pre-inverse wider than {n} bits under {profile.name}")
    q = (1 << (s + t)) // p
    assert q < 1 << n
    return BarrettContext(p=p, n=n, m=m, r=r, s=s, t=t, q=q, alpha_log2=n + alpha_off, h=h, profile=profile)


def barrett_reduce(a: int, ctx: BarrettContext) -> int:
    """Return ``a rem p`` for ``0 <= a < alpha * p``."""
    assert 0 <= a < ctx.limit, f"input {a} outside [0, alpha*p)"
    p = ctx.p
    c = ((a >> ctx.s) * ctx.q) >> ctx.t
    d = a - c * p
    while d >= p:
        d -= p
    return d


def barrett_reduce_traced(a: int, ctx: BarrettContext) -> tuple[int, int]:
    """Like :func:`barrett_reduce` but also return the number of corrections."""
    assert 0 <= a < ctx.limit, f"input {a} outside [0, alpha*p)"
    p = ctx.p
    b = a >> ctx.s
    c = (b * ctx.q) >> ctx.t
    assert b * ctx.q < 1 << (2 * ctx.n) and c * p < 1 << (2 * ctx.n)
    d = a - c * p
    count = 0
    while d >= p:
        d -= p
        count += 1
    return d, count


def mul_mod(x: int, y: int, ctx: BarrettContext) -> int:
    assert 0 <= x < ctx.p and 0 <= y < ctx.p
    return barrett_reduce(x * y, ctx)


@dataclass(frozen=True)
class BarrettHalfContext:
    """Correction-free Barrett reduction for moduli of at most ``(n-1)//2`` bits."""

    p: int
    n: int
    r: int
    t: int
    qbar: int
    alpha_log2: int


def make_barrett_half(p: int, n: int) -> BarrettHalfContext:
    _check_word(p, n)
    alpha_log2 = (n - 1) // 2
    if p.bit_length() > alpha_log2:
        raise ProfileViolationError(f"modulus {p} wider than {alpha_log2} bits for half reduction in {n}-bit words")
    r = ceil_log2(p)
    t = n + r - 1
    qbar = -(-(1 << t) // p)
    assert qbar < 1 << n
    return BarrettHalfContext(p=p, n=n, r=r, t=t, qbar=qbar, alpha_log2=alpha_log2)


def barrett_reduce_half(a: int, ctx: BarrettHalfContext) -> int:
    """``a rem p`` with no correction step.

    Correct whenever ``a p <= 2^t`` (the quotient error then stays below 1);
    every ``a < alpha p`` satisfies this, and so does every product of two residues.
    """
    assert 0 <= a < 1 << ctx.n and a * ctx.p <= 1 << ctx.t, f"input {a} outside the correction-free range"
    c = (a * ctx.qbar) >> ctx.t
    return a - c * ctx.p


def mul_mod_half(x: int, y: int, ctx: BarrettHalfContext) -> int:
    """Product through :func:`barrett_reduce_half`; ``x*y < p**2 <= alpha*p`` always holds."""
    assert 0 <= x < ctx.p and 0 <= y < ctx.p
    return barrett_reduce_half(x * y, ctx)


@dataclass(frozen=True)
class FixedMultiplicand:
    """A residue ``y`` with its scaled reciprocals for repeated products by ``y``.

    ``psi`` is ``floor(2^n y / p)``.  The correction-free path (``half``, for
    ``m <= n/2``) needs the upward rounding ``psi_bar = ceil(2^n y / p)``:
    with the floor the quotient estimate can fall one short.
    """

    y: int
    psi: int
    psi_bar: int
    half: bool


def make_fixed(y: int, ctx: BarrettContext) -> FixedMultiplicand:
    assert 0 <= y < ctx.p
    num = y << ctx.n
    psi = num // ctx.p
    psi_bar = -(-num // ctx.p)
    return FixedMultiplicand(y=y, psi=psi, psi_bar=psi_bar, half=2 * ctx.m <= ctx.n)


def mul_mod_fixed(x: int, fm: FixedMultiplicand, ctx: BarrettContext) -> int:
    assert 0 <= x < ctx.p
    p = ctx.p
    if fm.half:
        c = (x * fm.psi_bar) >> ctx.n
        return (x * fm.y - c * p) & ctx.mask
    c = (x * fm.psi) >> ctx.n
    d = x * fm.y - c * p
    return d - p if d >= p else d
