"""Big-integer products through Kronecker segmentation and three NTT primes.

Operands are cut into ``h``-bit chunks, the chunk polynomials are multiplied
modulo three primes with truncated Fourier transforms, every coefficient is
recovered by Chinese remaindering and the result is evaluated at ``2^h``
with carry propagation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from simdmod.errors import DimensionMismatchError, RangeError, SizeOverflowError
from simdmod.ntt.plan import TftPlan, make_plan, two_adic_valuation
from simdmod.polymul import PolyMatrix, convolve_tft, poly_mat_mul

DEFAULT_PRIMES = (998244353, 985661441, 943718401)
SCHOOLBOOK_CUTOFF = 64  # limbs


@dataclass(frozen=True, eq=False)
class BigNat:
    """Non-negative integer as little-endian 64-bit limbs (zero is a single zero limb)."""

    limbs: np.ndarray

    @classmethod
    def from_limbs(cls, limbs) -> "BigNat":
        arr = np.asarray(limbs, dtype=np.uint64).reshape(-1)
        nz = np.flatnonzero(arr)
        top = int(nz[-1]) + 1 if nz.size else 1
        out = np.zeros(1, dtype=np.uint64) if not arr.size else arr[:top].copy()
        return cls(out)

    @classmethod
    def from_bytes(cls, data: bytes) -> "BigNat":
        """From little-endian bytes."""
        pad = (-len(data)) % 8
        return cls.from_limbs(np.frombuffer(bytes(data) + b"\0" * pad, dtype="<u8").astype(np.uint64))

    @classmethod
    def from_int(cls, x: int) -> "BigNat":
        if x < 0:
            raise RangeError("BigNat holds non-negative integers only")
        return cls.from_bytes(x.to_bytes(max(8, (x.bit_length() + 7) // 8), "little"))

    @classmethod
    def from_hex(cls, text: str) -> "BigNat":
        text = text.strip()
        if not text or any(ch not in "0123456789abcdefABCDEF" for ch in text):
            raise ValueError(f"not a hex string: {text!r}")
        return cls.from_int(int(text, 16))

    def to_bytes(self, length: int | None = None) -> bytes:
        raw = self.limbs.astype("<u8").tobytes()
        if length is None:
            return raw.rstrip(b"\0") or b"\0"
        if any(raw[length:]):
            raise RangeError(f"value does not fit in {length} bytes")
        return raw[:length] + b"\0" * (length - len(raw))

    def to_int(self) -> int:
        return int.from_bytes(self.limbs.astype("<u8").tobytes(), "little")

    def to_hex(self) -> str:
        return format(self.to_int(), "x")

    def bit_length(self) -> int:
        top = len(self.limbs) - 1
        return 64 * top + int(self.limbs[top]).bit_length()

    def is_zero(self) -> bool:
        return len(self.limbs) == 1 and int(self.limbs[0]) == 0

    def __len__(self) -> int:
        return len(self.limbs)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.to_int() == other
        if not isinstance(other, BigNat):
            return NotImplemented
        return np.array_equal(self.limbs, other.limbs)

    def __add__(self, other: "BigNat") -> "BigNat":
        return BigNat.from_int(self.to_int() + other.to_int())

    def __mul__(self, other: "BigNat") -> "BigNat":
        return int_mul(self, other)

    def __repr__(self) -> str:
        return f"BigNat(0x{self.to_hex()})"


def _ceil_log2(x: int) -> int:
    return (x - 1).bit_length()


@dataclass(frozen=True)
class ThreePrimePlan:
    primes: tuple[int, int, int]
    h: int
    d: int
    H: int
    k: int
    inner: int = 1

    @property
    def modulus(self) -> int:
        p1, p2, p3 = self.primes
        return p1 * p2 * p3

    @property
    def plans(self) -> tuple[TftPlan, TftPlan, TftPlan]:
        return tuple(_cached_plan(p, self.k) for p in self.primes)

    @property
    def crt_constants(self) -> tuple[int, int]:
        """``(p1^-1 mod p2, (p1 p2)^-1 mod p3)``."""
        p1, p2, p3 = self.primes
        return pow(p1, -1, p2), pow(p1 * p2, -1, p3)


@lru_cache(maxsize=None)
def _cached_plan(p: int, k: int) -> TftPlan:
    return make_plan(p, k)


def transform_capacity(primes=DEFAULT_PRIMES) -> int:
    return min(two_adic_valuation(p - 1) for p in primes)


def make_three_prime_plan(N: int, primes=DEFAULT_PRIMES, inner: int = 1) -> ThreePrimePlan:
    """Largest byte-aligned chunk size ``h`` (so fewest chunks ``d``) for ``N``-bit operands.

    The coefficient bound ``H = 2h + ceil(log2((d+1) * inner))`` must satisfy
    ``2^H < p1 p2 p3`` and the product length ``2d`` must fit the transforms.
    """
    if N < 1:
        raise RangeError(f"bit size must be positive, got {N}")
    if inner < 1:
        raise RangeError(f"inner dimension must be positive, got {inner}")
    primes = tuple(int(p) for p in primes)
    modulus = primes[0] * primes[1] * primes[2]
    cap = transform_capacity(primes)
    for h in range(8 * (modulus.bit_length() // 16), 0, -8):
        d = -(-N // h)
        H = 2 * h + _ceil_log2((d + 1) * inner)
        if (1 << H) < modulus and 2 * d <= 1 << cap:
            return ThreePrimePlan(primes=primes, h=h, d=d, H=H, k=_ceil_log2(2 * d - 1), inner=inner)
    raise SizeOverflowError(f"{N}-bit operands exceed the three-prime transform capacity")


def crt3(r1: int, r2: int, r3: int, plan: ThreePrimePlan) -> int:
    """Unique ``x < p1 p2 p3`` with ``x = r_i mod p_i`` (Garner's mixed radix form)."""
    p1, p2, p3 = plan.primes
    i12, i123 = plan.crt_constants
    assert 0 <= r1 < p1 and 0 <= r2 < p2 and 0 <= r3 < p3
    x12 = r1 + p1 * ((r2 - r1) * i12 % p2)
    return x12 + p1 * p2 * ((r3 - x12) * i123 % p3)


def _crt3_split(r1, r2, r3, plan: ThreePrimePlan):
    """Vectorised Garner steps: ``x = x12 + p1 p2 k3`` with both parts as int64 arrays."""
    p1, p2, p3 = plan.primes
    i12, i123 = plan.crt_constants
    r1 = np.asarray(r1, dtype=np.int64)
    k2 = (np.asarray(r2, dtype=np.int64) - r1 % p2) % p2 * i12 % p2
    x12 = r1 + p1 * k2
    k3 = (np.asarray(r3, dtype=np.int64) - x12 % p3) % p3 * i123 % p3
    return x12, k3


def _segment(x: BigNat, h: int, d: int) -> np.ndarray:
    """``d`` chunks of ``h`` bits (``h`` a multiple of 8), least significant first."""
    hb = h // 8
    raw = x.to_bytes(d * hb) if x.bit_length() <= d * h else None
    if raw is None:
        raise RangeError(f"{x.bit_length()}-bit operand does not fit {d} chunks of {h} bits")
    rows = np.frombuffer(raw, dtype=np.uint8).reshape(d, hb).astype(np.int64)
    return (rows << (8 * np.arange(hb, dtype=np.int64))).sum(axis=1)


def _recombine(r1, r2, r3, plan: ThreePrimePlan) -> BigNat:
    """CRT every coefficient, then evaluate at ``2^h`` with a streaming carry."""
    x12, k3 = _crt3_split(r1, r2, r3, plan)
    p12 = plan.primes[0] * plan.primes[1]
    h = plan.h
    mask = (1 << h) - 1
    bound = 1 << plan.H
    out = np.zeros(len(x12) + 1 + -(-plan.H // h), dtype=np.int64)
    acc = 0
    for i, (lo, hi) in enumerate(zip(x12.tolist(), k3.tolist())):
        c = lo + p12 * hi
        assert c < bound, "recovered coefficient exceeds 2^H"
        acc += c
        out[i] = acc & mask
        acc >>= h
    i = len(x12)
    while acc:
        out[i] = acc & mask
        acc >>= h
        i += 1
    hb = h // 8
    raw = (out[:, None] >> (8 * np.arange(hb, dtype=np.int64))) & 0xFF
    return BigNat.from_bytes(raw.astype(np.uint8).tobytes())


def schoolbook_mul(a: BigNat, b: BigNat) -> BigNat:
    """Small operands: the interpreter's native integer product."""
    return BigNat.from_int(a.to_int() * b.to_int())


def int_mul(a: BigNat, b: BigNat, cutoff: int = SCHOOLBOOK_CUTOFF, plan: ThreePrimePlan | None = None) -> BigNat:
    """Exact product; operands below ``cutoff`` limbs skip the transforms."""
    if a.is_zero() or b.is_zero():
        return BigNat.from_int(0)
    if min(len(a), len(b)) < cutoff:
        return schoolbook_mul(a, b)
    if plan is None:
        plan = make_three_prime_plan(max(a.bit_length(), b.bit_length()))
    ca, cb = _segment(a, plan.h, plan.d), _segment(b, plan.h, plan.d)
    ta = ca[: max(1, -(-a.bit_length() // plan.h))]
    tb = cb[: max(1, -(-b.bit_length() // plan.h))]
    residues = [convolve_tft(ta % p, tb % p, tp) for p, tp in zip(plan.primes, plan.plans)]
    return _recombine(*residues, plan)


def _as_bignat_grid(M) -> list[list[BigNat]]:
    grid = [[e if isinstance(e, BigNat) else BigNat.from_int(int(e)) for e in row] for row in M]
    if not grid or not grid[0] or any(len(r) != len(grid[0]) for r in grid):
        raise DimensionMismatchError("ragged or empty matrix")
    return grid


def int_mat_mul_naive(A, B) -> list[list[BigNat]]:
    A, B = _as_bignat_grid(A), _as_bignat_grid(B)
    if len(A[0]) != len(B):
        raise DimensionMismatchError(f"cannot multiply {len(A)}x{len(A[0])} by {len(B)}x{len(B[0])}")
    return [
        [BigNat.from_int(sum(A[i][k].to_int() * B[k][j].to_int() for k in range(len(B)))) for j in range(len(B[0]))]
        for i in range(len(A))
    ]


def int_mat_mul(A, B) -> list[list[BigNat]]:
    """Matrix product: every entry is segmented and transformed once per prime,
    the products happen pointwise on evaluated matrices."""
    A, B = _as_bignat_grid(A), _as_bignat_grid(B)
    r, inner, c = len(A), len(A[0]), len(B[0])
    if inner != len(B):
        raise DimensionMismatchError(f"cannot multiply {r}x{inner} by {len(B)}x{c}")
    N = max(e.bit_length() for row in A + B for e in row)
    plan = make_three_prime_plan(max(N, 1), inner=inner)
    chunks_a = np.array([[_segment(e, plan.h, plan.d) for e in row] for row in A])
    chunks_b = np.array([[_segment(e, plan.h, plan.d) for e in row] for row in B])
    residues = []
    for p, tp in zip(plan.primes, plan.plans):
        prod = poly_mat_mul(PolyMatrix(chunks_a % p, p), PolyMatrix(chunks_b % p, p), tp)
        residues.append(prod.entries)
    return [[_recombine(*(res[i, j] for res in residues), plan) for j in range(c)] for i in range(r)]
