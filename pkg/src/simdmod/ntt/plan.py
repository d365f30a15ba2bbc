"""Transform plans: roots of unity, twiddle tables and the lane arithmetic used by butterflies."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from simdmod.errors import InvalidModulusError, RangeError, UnsupportedTransformSizeError
from simdmod.modcore.barrett import make_barrett, profile_for
from simdmod.modcore.numeric import make_float_ctx
from simdmod.modsimd import kernels as K
from simdmod.modsimd.lanes import REGISTER_BITS

STRATEGIES = ("barrett", "fma")
SMALL_TRANSFORM_BYTES = 4096


def two_adic_valuation(x: int) -> int:
    return (x & -x).bit_length() - 1


def prime_factors(x: int) -> list[int]:
    """Distinct prime factors by trial division (fine for ``p - 1`` of word-size primes)."""
    out = []
    d = 2
    while d * d <= x:
        if x % d == 0:
            out.append(d)
            while x % d == 0:
                x //= d
        d += 1 if d == 2 else 2
    if x > 1:
        out.append(x)
    return out


def find_generator(p: int) -> int:
    """Smallest generator of the multiplicative group of Z/pZ (``p`` prime)."""
    if p < 3:
        raise InvalidModulusError(f"need an odd prime, got {p}")
    factors = prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in factors):
            return g
    raise InvalidModulusError(f"{p} is not prime")


def bit_reverse_indices(k: int) -> np.ndarray:
    """``r[i] = [i]_k`` for ``0 <= i < 2^k``."""
    r = np.zeros(1, dtype=np.int64)
    for _ in range(k):
        r = np.concatenate((2 * r, 2 * r + 1))
    return r


class LaneArith:
    """Vector modular arithmetic on one transform's lanes.

    ``barrett`` keeps residues in unsigned integer lanes and multiplies by
    cached twiddles with the fixed-multiplicand Barrett kernel; ``fma`` keeps
    them in binary64 lanes and uses the FMA product.
    """

    def __init__(self, p: int, strategy: str):
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {strategy!r}")
        self.p = p
        self.strategy = strategy
        if strategy == "barrett":
            n = 32 if p.bit_length() <= 31 else 64
            self.ctx = make_barrett(p, n, profile_for(p.bit_length(), n))
            self.dtype = np.uint32 if n == 32 else np.uint64
        else:
            self.ctx = make_float_ctx(p, "binary64")
            self.dtype = np.float64

    @property
    def lane_bits(self) -> int:
        return np.dtype(self.dtype).itemsize * 8

    def from_ints(self, values) -> np.ndarray:
        return np.asarray(values, dtype=np.int64).astype(self.dtype)

    def to_ints(self, values) -> np.ndarray:
        return np.asarray(values).astype(np.int64)

    def add(self, a, b):
        if self.strategy == "fma":
            return K.vadd_mod_float(a, b, self.ctx)
        return K.vadd_mod(a, b, self.ctx)

    def sub(self, a, b):
        if self.strategy == "fma":
            return K.vsub_mod_float(a, b, self.ctx)
        return K.vsub_mod(a, b, self.ctx)

    def mul(self, a, b):
        if self.strategy == "fma":
            return K.vmul_mod_fma(a, b, self.ctx)
        return K.vmul_mod_barrett(a, b, self.ctx)

    def table(self, values):
        """Multiplicand table for repeated products (``values`` are int residues)."""
        if self.strategy == "fma":
            return np.asarray(values, dtype=np.int64).astype(np.float64)
        return K.make_fixed_table(np.asarray(values, dtype=np.int64).astype(np.uint64), self.ctx)

    def mul_table(self, a, table):
        if self.strategy == "fma":
            return K.vmul_mod_fma(a, table, self.ctx)
        return K.vmul_mod_fixed(a, table, self.ctx)

    def scale(self, a, c: int):
        return self.mul_table(a, self.table([c % self.p]))


def slice_table(table, start: int, count: int, ndim: int):
    """Entries ``start .. start+count`` shaped to broadcast along the first of ``ndim`` axes."""
    shape = (count,) + (1,) * (ndim - 1)
    if isinstance(table, np.ndarray):
        return table[start : start + count].reshape(shape)
    return K.FixedTable(
        y=table.y[start : start + count].reshape(shape),
        psi=table.psi[start : start + count].reshape(shape),
        psi_bar=table.psi_bar[start : start + count].reshape(shape),
        half=table.half,
    )


def rows_table(table, rows: int):
    if isinstance(table, np.ndarray):
        return table[:rows]
    return K.FixedTable(y=table.y[:rows], psi=table.psi[:rows], psi_bar=table.psi_bar[:rows], half=table.half)


@dataclass(frozen=True)
class TftPlan:
    """Plan for transforms of size up to ``n = 2^k`` over Z/pZ.

    Twiddle tables are built on first use and cached; a plan is otherwise
    immutable.  ``W[j] = omega^[j]_{k-1}`` for ``j < n/2`` serves every
    power-of-two sub-transform through its prefix.
    """

    p: int
    k: int
    omega: int
    n1: int
    strategy: str = "barrett"
    arith: LaneArith = field(repr=False, compare=False, default=None)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n(self) -> int:
        return 1 << self.k

    @property
    def n2(self) -> int:
        return self.n // self.n1

    def _powers(self, base: int, count: int) -> np.ndarray:
        """``base^i`` for ``i < count`` by doubling, using lane products."""
        ar = self.arith
        pw = ar.from_ints([1])
        step = base
        while pw.size < count:
            pw = np.concatenate((pw, ar.mul(pw, ar.from_ints(np.full(pw.size, step)))))
            step = step * step % self.p
        return ar.to_ints(pw[:count])

    def _cached(self, key, build):
        try:
            return self._cache[key]
        except KeyError:
            value = self._cache[key] = build()
            return value

    @property
    def twiddles(self) -> np.ndarray:
        """Bit-reversed powers ``omega^[j]_{k-1}``, ``j < n/2`` (plain residues)."""

        def build():
            half = max(self.n // 2, 1)
            return self._powers(self.omega, half)[bit_reverse_indices(max(self.k - 1, 0))]

        return self._cached("W_int", build)

    def table(self, name: str):
        """Cached multiplicand tables: ``W``, ``W2`` (2W), ``Winv`` (1/W) and ``Winv2`` (1/2W)."""
        ar = self.arith

        def build():
            if name in ("W", "W2"):
                vals = self.twiddles
                if name == "W2":
                    w = ar.from_ints(vals)
                    vals = ar.to_ints(ar.add(w, w))
            else:
                root = pow(self.omega, -1, self.p)
                vals = self._powers(root, max(self.n // 2, 1))[bit_reverse_indices(max(self.k - 1, 0))]
                if name == "Winv2":
                    vals = ar.to_ints(ar.scale(ar.from_ints(vals), (self.p + 1) // 2))
            return ar.table(vals)

        return self._cached(name, build)

    def block_twiddles(self, inverse: bool = False):
        """Table ``T[j2, j1] = omega^(+-j1 [j2]_k2)`` of shape ``(n2, n1)``."""

        def build():
            root = pow(self.omega, -1, self.p) if inverse else self.omega
            k2 = self.n2.bit_length() - 1
            g = self._powers(root, self.n2)[bit_reverse_indices(k2)]
            ar = self.arith
            cols = [np.ones(self.n2, dtype=np.int64)]
            gl = ar.from_ints(g)
            cur = ar.from_ints(cols[0])
            for _ in range(1, self.n1):
                cur = ar.mul(cur, gl)
                cols.append(ar.to_ints(cur))
            return ar.table(np.stack(cols, axis=1))

        return self._cached(("T", inverse), build)


def make_plan(p: int, k: int, n1: int | None = None, strategy: str = "barrett") -> TftPlan:
    """Plan for transforms of size ``2^k`` over Z/pZ with block split ``n1 * n2 = 2^k``."""
    if p < 3 or p % 2 == 0:
        raise InvalidModulusError(f"need an odd prime modulus, got {p}")
    if k < 0:
        raise RangeError(f"negative transform order {k}")
    if k > two_adic_valuation(p - 1):
        raise UnsupportedTransformSizeError(f"2^{k} does not divide {p} - 1")
    n = 1 << k
    arith = LaneArith(p, strategy)
    if n1 is None:
        lanes = REGISTER_BITS // arith.lane_bits
        n1 = min(lanes, n) if n * arith.lane_bits // 8 <= SMALL_TRANSFORM_BYTES else 1 << (k // 2)
    if n1 < 1 or n1 & (n1 - 1) or n % n1:
        raise RangeError(f"n1={n1} must be a power of two dividing {n}")
    g = find_generator(p)
    omega = pow(g, (p - 1) >> k, p)
    # primitive: omega^(n/2) = -1 (and omega = 1 only for n = 1)
    if k:
        assert pow(omega, n >> 1, p) == p - 1
    else:
        assert omega == 1
    return TftPlan(p=p, k=k, omega=omega, n1=n1, strategy=strategy, arith=arith)


def next_pow2(x: int) -> int:
    return 1 << max(x - 1, 0).bit_length()


def log2_exact(x: int) -> int:
    k = x.bit_length() - 1
    assert 1 << k == x
    return k


__all__ = [
    "STRATEGIES",
    "LaneArith",
    "TftPlan",
    "bit_reverse_indices",
    "find_generator",
    "make_plan",
    "next_pow2",
    "prime_factors",
    "two_adic_valuation",
    "log2_exact",
]
