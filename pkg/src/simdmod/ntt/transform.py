"""Truncated Fourier transforms over Z/pZ.

Buffers are two-dimensional ``(rows, width)`` lane arrays: a transform runs
along the rows and treats each row as a vector of ``width`` residues, which
is how the blocked algorithm transforms over K^n1 and K^lambda.

Forward transforms use Cooley-Tukey butterflies ``(x, y) -> (x + zy, x - zy)``
where block ``b`` at every stage uses the twiddle ``W[b]``; the outputs come
out in bit-reversed order.  The inverse of a truncated transform is computed
in place by a recursion that mixes known outputs and known (zero) inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from simdmod.errors import RangeError
from simdmod.ntt.plan import TftPlan, bit_reverse_indices, next_pow2, rows_table, slice_table


@dataclass
class OpCounter:
    """Counts operations in K performed by the transforms (sums and products)."""

    adds: int = 0
    muls: int = 0

    @property
    def total(self) -> int:
        return self.adds + self.muls


def bit_mirror(i: int, k: int) -> int:
    """``[i]_k``: the k-bit binary expansion of ``i`` reversed."""
    if k < 0 or not 0 <= i < 1 << k:
        raise RangeError(f"index {i} outside [0, 2^{k})")
    return int(format(i, f"0{k}b")[::-1], 2) if k else 0


def dft_bruteforce(a, plan: TftPlan) -> np.ndarray:
    """Quadratic evaluation ``a_hat[i] = sum_j omega^(ij) a[j]`` in natural order (test oracle)."""
    p, n = plan.p, plan.n
    a = [int(x) % p for x in a]
    if len(a) != n:
        raise RangeError(f"expected {n} coefficients, got {len(a)}")
    out = []
    for i in range(n):
        w = pow(plan.omega, i, p)
        acc = 0
        for x in reversed(a):
            acc = (acc * w + x) % p
        out.append(acc)
    return np.array(out, dtype=np.int64)


def _count(counter, adds=0, muls=0):
    if counter is not None:
        counter.adds += adds
        counter.muls += muls


def forward_inplace(buf: np.ndarray, l: int, plan: TftPlan, counter=None) -> None:
    """Truncated forward transform of ``buf`` (power-of-two rows, rows >= l zero).

    Only the blocks that feed one of the first ``l`` outputs are processed.
    """
    ar = plan.arith
    W = plan.table("W")
    size, width = buf.shape
    half = size // 2
    while half >= 1:
        nb = -(-l // (2 * half))
        v = buf[: nb * 2 * half].reshape(nb, 2, half, width)
        lo, hi = v[:, 0], v[:, 1]
        t = ar.mul_table(hi, slice_table(W, 0, nb, 3))
        s = ar.add(lo, t)
        hi[...] = ar.sub(lo, t)
        lo[...] = s
        _count(counter, adds=2 * t.size, muls=t.size)
        half //= 2


def inverse_full_inplace(buf: np.ndarray, b: int, plan: TftPlan, counter=None) -> None:
    """Invert the full forward transform of block ``b`` held in ``buf``."""
    ar = plan.arith
    Winv = plan.table("Winv")
    size, width = buf.shape
    if size == 1:
        return
    half = 1
    while half < size:
        nb = size // (2 * half)
        v = buf.reshape(nb, 2, half, width)
        lo, hi = v[:, 0], v[:, 1]
        d = ar.sub(lo, hi)
        lo[...] = ar.add(lo, hi)
        hi[...] = ar.mul_table(d, slice_table(Winv, b * nb, nb, 3))
        _count(counter, adds=2 * d.size, muls=d.size)
        half *= 2
    buf[...] = ar.scale(buf, pow(size, -1, plan.p))
    _count(counter, muls=buf.size)


def mixed_inplace(buf: np.ndarray, b: int, known: int, plan: TftPlan, counter=None) -> None:
    """On entry rows ``< known`` hold outputs of block ``b``, the other rows its inputs.

    On return every row holds the input of the block.
    """
    size = buf.shape[0]
    if known == 0 or size == 1:
        return
    ar = plan.arith
    half = size // 2
    lo, hi = buf[:half], buf[half:]
    if known >= half:
        inverse_full_inplace(lo, 2 * b, plan, counter)
        rest = known - half
        if rest < half:
            # for rows whose input is known: y = x_lo - z x_hi = (x_lo + z x_hi) - 2z x_hi
            tail = ar.mul_table(hi[rest:], slice_table(plan.table("W2"), b, 1, 2))
            hi[rest:] = ar.sub(lo[rest:], tail)
            _count(counter, adds=tail.size, muls=tail.size)
        mixed_inplace(hi, 2 * b + 1, rest, plan, counter)
        d = ar.sub(lo, hi)
        lo[...] = ar.scale(ar.add(lo, hi), (plan.p + 1) // 2)
        hi[...] = ar.mul_table(d, slice_table(plan.table("Winv2"), b, 1, 2))
        _count(counter, adds=2 * d.size, muls=2 * d.size)
    else:
        W = slice_table(plan.table("W"), b, 1, 2)
        lo[known:] = ar.add(lo[known:], ar.mul_table(hi[known:], W))
        mixed_inplace(lo, 2 * b, known, plan, counter)
        lo[...] = ar.sub(lo, ar.mul_table(hi, W))
        _count(counter, adds=half + lo[known:].size, muls=half + lo[known:].size)


def _check_len(l: int, plan: TftPlan):
    if not 0 <= l <= plan.n:
        raise RangeError(f"length {l} outside [0, {plan.n}]")


def _load(values, rows: int, width: int, plan: TftPlan) -> np.ndarray:
    buf = np.zeros((rows, width), dtype=plan.arith.dtype)
    flat = np.asarray(values, dtype=np.int64).ravel() % plan.p
    buf.reshape(-1)[: flat.size] = flat.astype(plan.arith.dtype)
    return buf


def tft(a, l: int, plan: TftPlan, counter: OpCounter | None = None) -> np.ndarray:
    """``(A(w^[0]_k), ..., A(w^[l-1]_k))`` for ``A = a_0 + ... + a_{l-1} X^(l-1)``."""
    _check_len(l, plan)
    a = np.asarray(a, dtype=np.int64)[:l]
    if l == 0:
        return np.zeros(0, dtype=np.int64)
    buf = _load(a, next_pow2(l), 1, plan)
    forward_inplace(buf, l, plan, counter)
    return plan.arith.to_ints(buf[:l, 0])


def itft(values, l: int, plan: TftPlan, counter: OpCounter | None = None) -> np.ndarray:
    """Coefficients ``a_0 .. a_{l-1}`` from the first ``l`` bit-reversed evaluations."""
    _check_len(l, plan)
    if l == 0:
        return np.zeros(0, dtype=np.int64)
    buf = _load(np.asarray(values, dtype=np.int64)[:l], next_pow2(l), 1, plan)
    mixed_inplace(buf, 0, l, plan, counter)
    return plan.arith.to_ints(buf[:l, 0])


def transpose_blocked(matrix, block: int = 8) -> np.ndarray:
    """Transpose a 2-d array tile by tile so both sides are walked in cache-sized pieces."""
    m = np.asarray(matrix)
    if m.ndim != 2:
        raise ValueError("expected a 2-d grid")
    if block < 1:
        raise ValueError("block edge must be positive")
    rows, cols = m.shape
    out = np.empty((cols, rows), dtype=m.dtype)
    for i in range(0, rows, block):
        for j in range(0, cols, block):
            out[j : j + block, i : i + block] = m[i : i + block, j : j + block].T
    return out


def blocked_tft(a, l: int, plan: TftPlan, counter: OpCounter | None = None, block: int = 8) -> np.ndarray:
    """Blocked truncated transform; returns all ``lambda * n1`` values, ``lambda = ceil(l / n1)``.

    The first ``l`` agree with :func:`tft`.
    """
    _check_len(l, plan)
    n1 = plan.n1
    if l < n1:
        raise RangeError(f"length {l} below the block size n1={n1}")
    ar = plan.arith
    lam = -(-l // n1)
    # 1. column transforms of length lambda over K^n1
    buf = _load(np.asarray(a, dtype=np.int64)[:l], next_pow2(lam), n1, plan)
    forward_inplace(buf, lam, plan, counter)
    # 2. scale entry (j2, j1) by w^(j1 [j2]_k2)
    body = ar.mul_table(buf[:lam], rows_table(plan.block_twiddles(), lam))
    _count(counter, muls=body.size)
    # 3. full transforms of size n1 over K^lambda
    cols = transpose_blocked(body, block)
    forward_inplace(cols, n1, plan, counter)
    # 4. interleave back
    return ar.to_ints(transpose_blocked(cols, block).reshape(-1))


def blocked_itft(values, l: int, plan: TftPlan, counter: OpCounter | None = None, block: int = 8) -> np.ndarray:
    """Invert :func:`blocked_tft` from its ``lambda * n1`` values, returning ``l`` coefficients."""
    _check_len(l, plan)
    n1 = plan.n1
    if l < n1:
        raise RangeError(f"length {l} below the block size n1={n1}")
    ar = plan.arith
    lam = -(-l // n1)
    vals = np.asarray(values, dtype=np.int64)
    if vals.size != lam * n1:
        raise RangeError(f"expected {lam * n1} values, got {vals.size}")
    cols = transpose_blocked(_load(vals, lam, n1, plan), block)
    inverse_full_inplace(cols, 0, plan, counter)
    body = ar.mul_table(transpose_blocked(cols, block), rows_table(plan.block_twiddles(inverse=True), lam))
    buf = np.zeros((next_pow2(lam), n1), dtype=ar.dtype)
    buf[:lam] = body
    mixed_inplace(buf, 0, lam, plan, counter)
    return ar.to_ints(buf[:lam].reshape(-1)[:l])


def tft_bitrev_oracle(a, plan: TftPlan) -> np.ndarray:
    """Brute-force DFT permuted into bit-reversed order."""
    return dft_bruteforce(a, plan)[bit_reverse_indices(plan.k)]
