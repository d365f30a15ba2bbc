"""Polynomial products over Z/pZ: schoolbook, truncated Fourier transform,
Kronecker substitution, and the evaluate-multiply-interpolate matrix product."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from simdmod.errors import DimensionMismatchError, InvalidModulusError, UnsupportedTransformSizeError
from simdmod.ntt.plan import TftPlan, next_pow2
from simdmod.ntt.transform import forward_inplace, mixed_inplace


def _coeff_array(values, p: int) -> np.ndarray:
    if p < 1 << 63:
        arr = np.asarray(values, dtype=np.int64).reshape(-1)
        return arr % p if arr.size and (arr.min() < 0 or arr.max() >= p) else arr.copy()
    return np.array([int(v) % p for v in values], dtype=object)


@dataclass(frozen=True, eq=False)
class ModPoly:
    """Coefficients ``c_0 .. c_{len-1}`` in Z/pZ; the storage length may exceed degree + 1."""

    coeffs: np.ndarray
    p: int

    @classmethod
    def of(cls, coeffs, p: int) -> "ModPoly":
        if p < 2:
            raise InvalidModulusError(f"modulus must be at least 2, got {p}")
        return cls(_coeff_array(coeffs, p), p)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModPoly):
            return NotImplemented
        return self.p == other.p and len(self) == len(other) and bool(np.all(self.coeffs == other.coeffs))

    def __add__(self, other: "ModPoly") -> "ModPoly":
        _same_modulus(self, other)
        n = max(len(self), len(other))
        out = np.zeros(n, dtype=self.coeffs.dtype)
        out[: len(self)] += self.coeffs
        out[: len(other)] += other.coeffs
        return ModPoly(out % self.p, self.p)

    def degree(self) -> int:
        nz = np.flatnonzero(self.coeffs)
        return int(nz[-1]) if nz.size else -1

    def tolist(self) -> list[int]:
        return [int(c) for c in self.coeffs]

    def __repr__(self) -> str:
        return f"ModPoly({self.tolist()}, p={self.p})"


def _same_modulus(a: ModPoly, b: ModPoly) -> None:
    if a.p != b.p:
        raise InvalidModulusError(f"modulus mismatch: {a.p} vs {b.p}")


def poly_mul_naive(a: ModPoly, b: ModPoly) -> ModPoly:
    """Schoolbook convolution, reducing row by row."""
    _same_modulus(a, b)
    p = a.p
    if not len(a) or not len(b):
        return ModPoly.of([], p)
    la, lb = len(a), len(b)
    if p < 1 << 31:
        out = np.zeros(la + lb - 1, dtype=np.int64)
        for i, ai in enumerate(a.coeffs):
            out[i : i + lb] = (out[i : i + lb] + int(ai) * b.coeffs) % p
        return ModPoly(out, p)
    out = [0] * (la + lb - 1)
    bl = [int(c) for c in b.coeffs]
    for i, ai in enumerate(a.coeffs):
        ai = int(ai)
        for j, bj in enumerate(bl):
            out[i + j] += ai * bj
    return ModPoly.of([c % p for c in out], p)


def convolve_tft(a: np.ndarray, b: np.ndarray, plan: TftPlan) -> np.ndarray:
    """Cyclic-free product of residue arrays through two forward and one inverse TFT.

    ``a`` and ``b`` may be two-dimensional ``(length, width)`` stacks; the
    transforms then run over all columns at once.
    """
    la, lb = a.shape[0], b.shape[0]
    l = la + lb - 1
    if l > plan.n:
        raise UnsupportedTransformSizeError(f"product length {l} exceeds transform size {plan.n}")
    ar = plan.arith
    size = next_pow2(l)
    width = a.shape[1] if a.ndim == 2 else 1
    bufs = []
    for x in (a, b):
        buf = np.zeros((size, width), dtype=ar.dtype)
        buf[: x.shape[0]] = ar.from_ints(x).reshape(x.shape[0], width)
        forward_inplace(buf, l, plan)
        bufs.append(buf)
    prod = np.zeros((size, width), dtype=ar.dtype)
    prod[:l] = ar.mul(bufs[0][:l], bufs[1][:l])
    mixed_inplace(prod, 0, l, plan)
    out = ar.to_ints(prod[:l])
    return out if a.ndim == 2 else out[:, 0]


def poly_mul_tft(a: ModPoly, b: ModPoly, plan: TftPlan) -> ModPoly:
    _same_modulus(a, b)
    if a.p != plan.p:
        raise InvalidModulusError(f"plan is over Z/{plan.p}Z, operands over Z/{a.p}Z")
    if not len(a) or not len(b):
        return ModPoly.of([], a.p)
    return ModPoly(convolve_tft(a.coeffs, b.coeffs, plan), a.p)


def kronecker_chunk_bits(p: int, la: int, lb: int) -> int:
    """Smallest multiple of 8 at least ``2m + ceil(log2(min(la, lb)))``, ``m`` the bit size of ``p - 1``."""
    m = (p - 1).bit_length()
    bound = 2 * m + (min(la, lb) - 1).bit_length()
    return max(8, -(-bound // 8) * 8)


def kronecker_pack(rows, nbytes: int) -> np.ndarray:
    """Pack each row of coefficients as an integer with ``nbytes`` bytes per coefficient.

    ``rows`` has shape ``(count, length)``; the result is ``(count, length * nbytes)``
    little-endian bytes.
    """
    rows = np.atleast_2d(np.asarray(rows, dtype=np.uint64))
    count, length = rows.shape
    out = np.zeros((count, length, nbytes), dtype=np.uint8)
    raw = np.ascontiguousarray(rows, dtype="<u8").view(np.uint8).reshape(count, length, 8)
    w = min(8, nbytes)
    out[:, :, :w] = raw[:, :, :w]
    return out.reshape(count, length * nbytes)


def kronecker_unpack(data, length: int, nbytes: int, p: int) -> np.ndarray:
    """Split little-endian product bytes into ``length`` chunks of ``nbytes`` and reduce each mod ``p``.

    ``data`` has shape ``(count, >= length * nbytes)``; returns ``(count, length)``.
    """
    data = np.atleast_2d(np.asarray(data, dtype=np.uint8))
    chunks = data[:, : length * nbytes].reshape(-1, nbytes)
    return _reduce_chunks(chunks, p).reshape(data.shape[0], length)


def _reduce_chunks(chunks: np.ndarray, p: int) -> np.ndarray:
    """Each row of little-endian bytes taken modulo ``p`` by Horner's rule over bytes."""
    if p < 1 << 54:
        acc = np.zeros(chunks.shape[0], dtype=np.int64)
        for j in range(chunks.shape[1] - 1, -1, -1):
            acc = (acc * 256 + chunks[:, j]) % p
        return acc
    return np.array([int.from_bytes(row.tobytes(), "little") % p for row in chunks], dtype=object)


def poly_mul_kronecker(a: ModPoly, b: ModPoly) -> ModPoly:
    """Evaluate both operands at ``2^H``, multiply the integers, read the product back in ``H``-bit chunks."""
    from simdmod.bigmul import BigNat, int_mul

    _same_modulus(a, b)
    p = a.p
    if p >= 1 << 64:
        raise InvalidModulusError("Kronecker packing supports word-size moduli only")
    if not len(a) or not len(b):
        return ModPoly.of([], p)
    H = kronecker_chunk_bits(p, len(a), len(b))
    nbytes = H // 8
    x = BigNat.from_bytes(kronecker_pack(a.coeffs, nbytes).tobytes())
    y = BigNat.from_bytes(kronecker_pack(b.coeffs, nbytes).tobytes())
    l = len(a) + len(b) - 1
    raw = np.frombuffer(int_mul(x, y).to_bytes(l * nbytes), dtype=np.uint8)
    return ModPoly(kronecker_unpack(raw, l, nbytes, p)[0], p)


@dataclass(frozen=True, eq=False)
class PolyMatrix:
    """``rows x cols`` matrix of polynomials of storage length ``d`` over Z/pZ.

    ``entries`` has shape ``(rows, cols, d)``.
    """

    entries: np.ndarray
    p: int

    @classmethod
    def of(cls, grid, p: int) -> "PolyMatrix":
        """From a nested list of coefficient lists (or ModPoly), zero-padded to a common length."""
        rows = [[e.coeffs if isinstance(e, ModPoly) else e for e in row] for row in grid]
        if not rows or not rows[0] or any(len(r) != len(rows[0]) for r in rows):
            raise DimensionMismatchError("ragged or empty polynomial matrix")
        d = max(len(e) for r in rows for e in r)
        out = np.zeros((len(rows), len(rows[0]), d), dtype=np.int64)
        for i, r in enumerate(rows):
            for j, e in enumerate(r):
                out[i, j, : len(e)] = _coeff_array(e, p)
        return cls(out, p)

    @classmethod
    def identity(cls, size: int, p: int, d: int = 1) -> "PolyMatrix":
        out = np.zeros((size, size, d), dtype=np.int64)
        out[np.arange(size), np.arange(size), 0] = 1
        return cls(out, p)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape[:2]

    @property
    def d(self) -> int:
        return self.entries.shape[2]

    def entry(self, i: int, j: int) -> ModPoly:
        return ModPoly(self.entries[i, j].copy(), self.p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.p == other.p and self.entries.shape == other.entries.shape and bool(np.all(self.entries == other.entries))


def poly_mat_mul_naive(A: PolyMatrix, B: PolyMatrix) -> PolyMatrix:
    """Entry-wise schoolbook products and sums (test oracle)."""
    _check_dims(A, B)
    (r, inner), c = A.shape, B.shape[1]
    out = np.zeros((r, c, A.d + B.d - 1), dtype=np.int64)
    for i in range(r):
        for j in range(c):
            for k in range(inner):
                prod = poly_mul_naive(A.entry(i, k), B.entry(k, j)).coeffs
                out[i, j] = (out[i, j] + prod) % A.p
    return PolyMatrix(out, A.p)


def _check_dims(A: PolyMatrix, B: PolyMatrix) -> None:
    if A.p != B.p:
        raise InvalidModulusError(f"modulus mismatch: {A.p} vs {B.p}")
    if A.shape[1] != B.shape[0]:
        raise DimensionMismatchError(f"cannot multiply {A.shape} by {B.shape}")


def poly_mat_mul(A: PolyMatrix, B: PolyMatrix, plan: TftPlan) -> PolyMatrix:
    """Transform every entry at ``l = dA + dB - 1`` points, multiply the ``l``
    evaluated matrices pointwise, and interpolate every entry of the result."""
    _check_dims(A, B)
    if A.p != plan.p:
        raise InvalidModulusError(f"plan is over Z/{plan.p}Z, operands over Z/{A.p}Z")
    (r, inner), c = A.shape, B.shape[1]
    l = A.d + B.d - 1
    if l > plan.n:
        raise UnsupportedTransformSizeError(f"{l} evaluation points exceed transform size {plan.n}")
    ar = plan.arith
    size = next_pow2(l)

    def evaluate(M: PolyMatrix) -> np.ndarray:
        rows, cols, d = M.entries.shape
        buf = np.zeros((size, rows * cols), dtype=ar.dtype)
        buf[:d] = ar.from_ints(M.entries.reshape(rows * cols, d).T)
        forward_inplace(buf, l, plan)
        return buf[:l].reshape(l, rows, cols)

    ea, eb = evaluate(A), evaluate(B)
    ec = np.zeros((size, r * c), dtype=ar.dtype)
    view = ec[:l].reshape(l, r, c)
    for i in range(r):
        for j in range(c):
            acc = ar.mul(ea[:, i, 0], eb[:, 0, j])
            for k in range(1, inner):
                acc = ar.add(acc, ar.mul(ea[:, i, k], eb[:, k, j]))
            view[:, i, j] = acc
    mixed_inplace(ec, 0, l, plan)
    out = ar.to_ints(ec[:l]).T.reshape(r, c, l)
    return PolyMatrix(np.ascontiguousarray(out), A.p)
