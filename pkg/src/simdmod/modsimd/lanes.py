"""Portable lane abstraction on top of numpy.

A lane vector is a one-dimensional numpy array whose dtype fixes the lane
width.  Unsigned numpy arithmetic wraps modulo ``2^n`` exactly like packed
integer instructions, so kernels can be written instruction for instruction.
64-bit lanes have no wider native type; :class:`U128` carries their double
width intermediates as (hi, lo) pairs.
"""

from __future__ import annotations

import numpy as np

REGISTER_BITS = 256
ALIGNMENT = REGISTER_BITS // 8

LANE_DTYPES = {8: np.uint8, 16: np.uint16, 32: np.uint32, 64: np.uint64}
WIDE_DTYPES = {8: np.uint16, 16: np.uint32, 32: np.uint64}
SIGNED_DTYPES = {8: np.int8, 16: np.int16, 32: np.int32, 64: np.int64}

_M32 = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)
_BIAS = np.uint64(1 << 63)


def lane_count(lane_bits: int, register_bits: int = REGISTER_BITS) -> int:
    return register_bits // lane_bits


def lane_dtype(lane_bits: int):
    try:
        return LANE_DTYPES[lane_bits]
    except KeyError:
        raise ValueError(f"unsupported lane width {lane_bits}") from None


def lanes(values, lane_bits: int) -> np.ndarray:
    """Build a lane vector, rejecting values that do not fit the lane width."""
    arr = np.asarray(values, dtype=object if lane_bits == 64 else np.int64)
    if arr.size and (min(int(v) for v in arr.ravel()) < 0 or max(int(v) for v in arr.ravel()) >> lane_bits):
        raise ValueError(f"value does not fit in {lane_bits}-bit lanes")
    return np.array([int(v) for v in arr.ravel()], dtype=lane_dtype(lane_bits))


def aligned_empty(count: int, dtype, align: int = ALIGNMENT) -> np.ndarray:
    """Uninitialised 1-d array whose data pointer is a multiple of ``align``."""
    dtype = np.dtype(dtype)
    raw = np.empty(count * dtype.itemsize + align, dtype=np.uint8)
    offset = (-raw.ctypes.data) % align
    return raw[offset : offset + count * dtype.itemsize].view(dtype)


def aligned_copy(arr: np.ndarray, align: int = ALIGNMENT) -> np.ndarray:
    out = aligned_empty(arr.size, arr.dtype, align)
    out[:] = arr.ravel()
    return out


def bias_cmpgt_u64(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Unsigned ``a > b`` on 64-bit lanes from a signed comparison of biased operands."""
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    return (a ^ _BIAS).view(np.int64) > (b ^ _BIAS).view(np.int64)


def mask_of(cond: np.ndarray, dtype) -> np.ndarray:
    """All-ones lanes where ``cond`` holds, zero elsewhere (a comparison result register)."""
    return np.negative(cond.astype(dtype))


class U128:
    """Pairs of uint64 arrays standing for unsigned 128-bit lanes (wrapping)."""

    __slots__ = ("hi", "lo")

    def __init__(self, hi, lo):
        self.hi = np.asarray(hi, dtype=np.uint64)
        self.lo = np.asarray(lo, dtype=np.uint64)

    @classmethod
    def from_u64(cls, lo) -> "U128":
        lo = np.asarray(lo, dtype=np.uint64)
        return cls(np.zeros_like(lo), lo)

    @classmethod
    def mul(cls, a, b) -> "U128":
        """Full 64x64 -> 128-bit product through 32-bit halves."""
        a = np.asarray(a, dtype=np.uint64)
        b = np.asarray(b, dtype=np.uint64)
        a0, a1 = a & _M32, a >> _S32
        b0, b1 = b & _M32, b >> _S32
        p00 = a0 * b0
        p01 = a0 * b1
        p10 = a1 * b0
        mid = (p00 >> _S32) + (p01 & _M32) + (p10 & _M32)
        lo = (mid << _S32) | (p00 & _M32)
        hi = a1 * b1 + (p01 >> _S32) + (p10 >> _S32) + (mid >> _S32)
        return cls(hi, lo)

    def mul_low(self, b) -> "U128":
        """Product by a 64-bit value, modulo 2^128."""
        r = U128.mul(self.lo, b)
        return U128(r.hi + self.hi * np.asarray(b, dtype=np.uint64), r.lo)

    def __add__(self, other: "U128") -> "U128":
        lo = self.lo + other.lo
        carry = (lo < self.lo).astype(np.uint64)
        return U128(self.hi + other.hi + carry, lo)

    def __sub__(self, other: "U128") -> "U128":
        lo = self.lo - other.lo
        borrow = (self.lo < other.lo).astype(np.uint64)
        return U128(self.hi - other.hi - borrow, lo)

    def __rshift__(self, k: int) -> "U128":
        if k == 0:
            return U128(self.hi, self.lo)
        if k >= 64:
            return U128(np.zeros_like(self.hi), self.hi >> np.uint64(k - 64))
        sk = np.uint64(k)
        return U128(self.hi >> sk, (self.lo >> sk) | (self.hi << np.uint64(64 - k)))

    def __lt__(self, other: "U128") -> np.ndarray:
        return (self.hi < other.hi) | ((self.hi == other.hi) & (self.lo < other.lo))

    def __ge__(self, other: "U128") -> np.ndarray:
        return ~(self < other)

    def where(self, cond, other: "U128") -> "U128":
        """Lane select: ``self`` where ``cond`` holds, ``other`` elsewhere."""
        return U128(np.where(cond, self.hi, other.hi), np.where(cond, self.lo, other.lo))

    def to_ints(self) -> list[int]:
        return [(int(h) << 64) | int(l) for h, l in zip(np.ravel(self.hi), np.ravel(self.lo))]
