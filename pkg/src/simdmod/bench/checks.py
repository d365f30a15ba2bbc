"""Differential and property checks shared by ``simdmod selftest`` and the test suite.

Every check compares a kernel against an independent oracle (exact Python or
numpy integer arithmetic) and returns a :class:`CheckResult` holding the
number of cases, the number of failures and the first few counterexamples.
Sample counts are parameters so the same code serves quick self-tests and
the full-size acceptance runs.
"""

from __future__ import annotations

import dataclasses
import random
import time
from dataclasses import dataclass, field

import numpy as np

from simdmod import bigmul, modsimd, ntt, polymul
from simdmod.modcore import (
    FloatVariant,
    Profile,
    add_mod,
    add_mod_float,
    barrett_reduce_traced,
    float_reduce_half,
    from_mont,
    make_barrett,
    make_barrett_half,
    make_fixed,
    make_float_ctx,
    make_mont_fixed,
    make_montgomery,
    mont_mul,
    mont_mul_fixed,
    mont_reduce,
    mul_mod,
    mul_mod_fixed,
    mul_mod_fma,
    mul_mod_half,
    neg_mod,
    sub_mod,
    sub_mod_float,
    to_mont,
)
from simdmod.modsimd.lanes import LANE_DTYPES

MAX_EXAMPLES = 10


@dataclass
class CheckResult:
    name: str
    cases: int = 0
    failures: int = 0
    examples: list[str] = field(default_factory=list)
    seconds: float = 0.0
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.cases > 0

    def fail(self, message: str, count: int = 1) -> None:
        self.failures += count
        if len(self.examples) < MAX_EXAMPLES:
            self.examples.append(message)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({self.note})" if self.note else ""
        return f"{status} {self.name}: {self.cases} cases, {self.failures} failures, {self.seconds:.1f}s{extra}"


class _timed:
    def __init__(self, result: CheckResult):
        self.result = result

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self.result

    def __exit__(self, *exc):
        self.result.seconds += time.perf_counter() - self.t0
        return False


def _compare(res: CheckResult, label: str, got, want, inputs=()) -> None:
    """Record every position where ``got`` differs from ``want``."""
    got = np.asarray(got)
    want = np.asarray(want)
    res.cases += want.size
    bad = np.flatnonzero(got.reshape(-1) != want.reshape(-1))
    if bad.size:
        i = int(bad[0])
        args = ", ".join(f"{int(np.asarray(v).reshape(-1)[i])}" for v in inputs)
        res.fail(f"{label}: ({args}) -> {got.reshape(-1)[i]}, expected {want.reshape(-1)[i]}", int(bad.size))


# ---------------------------------------------------------------------------
# number theory helpers

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for b in _MR_BASES:
        x = pow(b, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_modulus(rng: random.Random, bits: int, odd: bool = False) -> int:
    """Random modulus of exactly ``bits`` bits (at least 2), biased towards both ends of the range."""
    lo, hi = max(2, 1 << (bits - 1)), (1 << bits) - 1
    roll = rng.random()
    if roll < 0.1:
        p = hi - rng.randrange(min(64, hi - lo + 1))
    elif roll < 0.2:
        p = lo + rng.randrange(min(64, hi - lo + 1))
    else:
        p = rng.randint(lo, hi)
    if odd and p % 2 == 0:
        p = p + 1 if p < hi else p - 1
    return max(p, 3) if odd else p


def random_prime(rng: random.Random, bits: int) -> int:
    while True:
        p = rng.randrange(max(2, 1 << (bits - 1)), 1 << bits) | 1
        if is_prime(p):
            return p


def _residues(gen: np.random.Generator, p: int, size: int, dtype) -> np.ndarray:
    """Uniform residues with the extreme values 0 and p-1 planted at the front."""
    out = gen.integers(0, p, size=size, dtype=np.uint64)
    out[: min(size, 2)] = [0, p - 1][: min(size, 2)]
    return out.astype(dtype)


def _obj(a) -> np.ndarray:
    return np.asarray(a).astype(object)


def _oracle_mul(x, y, p, n):
    if n <= 32:
        return (x.astype(np.uint64) * y.astype(np.uint64)) % np.uint64(p)
    return (_obj(x) * _obj(y)) % p


# ---------------------------------------------------------------------------
# Barrett context mutation used to demonstrate that the checks bite


def barrett_factory(mutate: str | None = None):
    """``make_barrett`` or a deliberately broken variant (``"q-off-by-one"``)."""
    if mutate is None:
        return make_barrett
    if mutate != "q-off-by-one":
        raise ValueError(f"unknown mutation {mutate!r}")

    def broken(p, n, profile=Profile.FULL, m=None):
        ctx = make_barrett(p, n, profile, m)
        return dataclasses.replace(ctx, q=ctx.q + 1)

    return broken


# ---------------------------------------------------------------------------
# exhaustive 8-bit sweep: scalar vs oracle, and lanes vs scalar


def _profiles_for(p: int, n: int):
    for prof in Profile:
        if p.bit_length() <= prof.bound(n) and not (p == 2 and prof is Profile.MINUS2):
            yield prof


def sweep_8bit(moduli=range(2, 256), mutate: str | None = None, lanes: bool = True, floats: bool = True, ints: bool = True):
    """Every modulus below 2^8, every applicable strategy and profile, every pair of residues.

    Returns ``(scalar_result, lane_result)``: scalar kernels against the wide
    integer oracle, and the 8-bit lane kernels against the scalar kernels.
    """
    scalar = CheckResult("exhaustive 8-bit scalar kernels vs oracle")
    lane = CheckResult("exhaustive 8-bit lane kernels vs scalar")
    mk = barrett_factory(mutate)
    u8 = np.uint8
    for p in moduli:
        xs_i, ys_i = (g.ravel() for g in np.meshgrid(np.arange(p), np.arange(p), indexing="ij"))
        pairs = list(zip(xs_i.tolist(), ys_i.tolist()))
        xs, ys = xs_i.astype(u8), ys_i.astype(u8)
        o_add, o_sub, o_mul = (xs_i + ys_i) % p, (xs_i - ys_i) % p, (xs_i * ys_i) % p
        o_neg = (-np.arange(p)) % p

        def both(label, fn_scalar, oracle, fn_lane=None, inputs=(xs_i, ys_i), args=pairs):
            with _timed(scalar):
                got = np.array([fn_scalar(*a) for a in args], dtype=np.int64)
                _compare(scalar, f"{label} p={p}", got, oracle, inputs)
            if lanes and fn_lane is not None:
                with _timed(lane):
                    _compare(lane, f"v{label} p={p}", np.asarray(fn_lane()).astype(np.int64), got, inputs)

        for prof in _profiles_for(p, 8) if ints else ():
            ctx = mk(p, 8, prof)
            tag = f"{prof.name}"
            variants = ("branch",) if ctx.m >= 8 else ("branch", "min", "shift")
            for v in variants:
                both(f"add_mod[{tag},{v}]", lambda x, y, v=v: add_mod(x, y, ctx, v), o_add, lambda: modsimd.vadd_mod(xs, ys, ctx))
                both(f"sub_mod[{tag},{v}]", lambda x, y, v=v: sub_mod(x, y, ctx, v), o_sub, lambda: modsimd.vsub_mod(xs, ys, ctx))
                r = np.arange(p)
                both(
                    f"neg_mod[{tag},{v}]",
                    lambda x, v=v: neg_mod(x, ctx, v),
                    o_neg,
                    lambda: modsimd.vneg_mod(r.astype(u8), ctx),
                    inputs=(r,),
                    args=[(x,) for x in range(p)],
                )
            both(f"mul_mod[{tag}]", lambda x, y: mul_mod(x, y, ctx), o_mul, lambda: modsimd.vmul_mod_barrett(xs, ys, ctx))
            fixed = [make_fixed(y, ctx) for y in range(p)]
            both(
                f"mul_mod_fixed[{tag}]",
                lambda x, y: mul_mod_fixed(x, fixed[y], ctx),
                o_mul,
                lambda: modsimd.vmul_mod_fixed(xs, modsimd.make_fixed_table(ys, ctx), ctx),
            )
        if ints and p.bit_length() <= 3:
            hctx = make_barrett_half(p, 8)
            both("mul_mod_half", lambda x, y: mul_mod_half(x, y, hctx), o_mul, lambda: modsimd.vmul_mod_half(xs, ys, hctx))
        if ints and p % 2 and p >= 3:
            r = (p - 1).bit_length()
            for m in sorted({r, 8}):
                mc = make_montgomery(p, m, 8)
                rho = pow(2, -m, p)
                both(
                    f"mont_mul[m={m}]",
                    lambda x, y: mont_mul(x, y, mc),
                    (xs_i * ys_i * rho) % p,
                    lambda: modsimd.vmont_mul(xs, ys, mc),
                )
                phis = [make_mont_fixed(y, mc) for y in range(p)]
                both(f"mont_mul_fixed[m={m}]", lambda x, y: mont_mul_fixed(x, phis[y], mc), (xs_i * ys_i * rho) % p)
        if floats:
            for fmt, dt in (("binary64", np.float64), ("binary32", np.float32)):
                fc = make_float_ctx(p, fmt)
                fx, fy = xs_i.astype(dt), ys_i.astype(dt)
                conv = float if dt is np.float64 else np.float32
                both(
                    f"mul_mod_fma[{fmt}]",
                    lambda x, y: mul_mod_fma(conv(x), conv(y), fc),
                    o_mul,
                    lambda: modsimd.vmul_mod_fma(fx, fy, fc),
                )
                both(
                    f"add_mod_float[{fmt}]",
                    lambda x, y: add_mod_float(conv(x), conv(y), fc),
                    o_add,
                    lambda: modsimd.vadd_mod_float(fx, fy, fc),
                )
                both(
                    f"sub_mod_float[{fmt}]",
                    lambda x, y: sub_mod_float(conv(x), conv(y), fc),
                    o_sub,
                    lambda: modsimd.vsub_mod_float(fx, fy, fc),
                )
                prod = (xs_i * ys_i).astype(dt)
                both(
                    f"float_reduce_half[{fmt},any]",
                    lambda x, y: float_reduce_half(conv(x * y), fc),
                    o_mul,
                    lambda: modsimd.vfloat_reduce_half(prod, fc),
                )
                if is_prime(p):
                    v = FloatVariant.UPWARD_NO_HIGH_BRANCH
                    both(
                        f"float_reduce_half[{fmt},upward]",
                        lambda x, y: float_reduce_half(conv(x * y), fc, v),
                        o_mul,
                        lambda: modsimd.vfloat_reduce_half(prod, fc, v),
                    )
    return scalar, lane


# ---------------------------------------------------------------------------
# randomized wide-word sweeps on the lane kernels


def random_word_sweep(n: int, samples: int, seed: int = 1, batch: int = 1 << 16, mutate: str | None = None) -> CheckResult:
    """At least ``samples`` random ``(p, x, y)`` per strategy for ``n``-bit words, lane kernels vs oracle.

    Each batch draws a fresh modulus, so the sweep covers many moduli.
    """
    res = CheckResult(f"random {n}-bit sweep vs oracle")
    rng = random.Random(seed)
    gen = np.random.default_rng(seed)
    mk = barrett_factory(mutate)
    U = LANE_DTYPES[n]
    strategies = ["add", "sub", "neg", "mul:FULL", "mul:MINUS1", "mul:MINUS2", "fixed", "fixed_half", "mont:n", "mont:r", "half"]
    with _timed(res):
        for strat in strategies:
            done = 0
            while done < samples:
                kind, _, opt = strat.partition(":")
                size = min(batch, samples - done)
                if kind in ("add", "sub", "neg"):
                    prof = rng.choice(list(Profile))
                    p = random_modulus(rng, rng.randint(2, prof.bound(n)))
                    ctx = mk(p, n, prof if p > 2 or prof is not Profile.MINUS2 else Profile.MINUS1)
                    xs, ys = _residues(gen, p, size, U), _residues(gen, p, size, U)
                    xo, yo = _obj(xs), _obj(ys)
                    if kind == "add":
                        got, want = modsimd.vadd_mod(xs, ys, ctx), (xo + yo) % p
                    elif kind == "sub":
                        got, want = modsimd.vsub_mod(xs, ys, ctx), (xo - yo) % p
                    else:
                        got, want = modsimd.vneg_mod(xs, ctx), (-xo) % p
                elif kind == "mul":
                    prof = Profile[opt]
                    p = random_modulus(rng, rng.randint(2 if prof is not Profile.MINUS2 else 3, prof.bound(n)))
                    ctx = mk(p, n, prof)
                    xs, ys = _residues(gen, p, size, U), _residues(gen, p, size, U)
                    got, want = modsimd.vmul_mod_barrett(xs, ys, ctx), _oracle_mul(xs, ys, p, n)
                elif kind == "fixed" or kind == "fixed_half":
                    top = n // 2 if kind == "fixed_half" else n
                    p = random_modulus(rng, rng.randint(max(2, top // 2 + 1) if kind == "fixed" else 2, top))
                    ctx = mk(p, n, Profile.FULL, top)
                    xs, ys = _residues(gen, p, size, U), _residues(gen, p, size, U)
                    got, want = modsimd.vmul_mod_fixed(xs, modsimd.make_fixed_table(ys, ctx), ctx), _oracle_mul(xs, ys, p, n)
                elif kind == "mont":
                    p = random_modulus(rng, rng.randint(2, n), odd=True)
                    r = (p - 1).bit_length()
                    m = n if opt == "n" else rng.randint(r, n)
                    mc = make_montgomery(p, m, n)
                    xs, ys = _residues(gen, p, size, U), _residues(gen, p, size, U)
                    want = (_oracle_mul(xs, ys, p, n).astype(object) * pow(2, -m, p)) % p
                    got = modsimd.vmont_mul(xs, ys, mc)
                else:
                    bits = (n - 1) // 2
                    p = random_modulus(rng, rng.randint(2, bits))
                    hc = make_barrett_half(p, n)
                    xs, ys = _residues(gen, p, size, U), _residues(gen, p, size, U)
                    got, want = modsimd.vmul_mod_half(xs, ys, hc), _oracle_mul(xs, ys, p, n)
                _compare(res, f"{strat} p={p}", _obj(got), np.asarray(want).astype(object), (xs, ys))
                done += size
    res.note = f"{len(strategies)} strategies x {samples} samples"
    return res


def float_sweep(fmt: str, samples: int, seed: int = 2, batch: int = 1 << 16) -> CheckResult:
    """FMA products, both half reductions and float sums on lanes vs the integer oracle.

    The no-branch reduction is only exercised for prime moduli, as its contract requires.
    """
    res = CheckResult(f"random {fmt} sweep vs oracle")
    rng = random.Random(seed)
    gen = np.random.default_rng(seed)
    dt = np.float64 if fmt == "binary64" else np.float32
    ell = 52 if fmt == "binary64" else 23
    with _timed(res):
        for strat in ("mul_fma", "reduce_any", "reduce_upward", "add", "sub"):
            done = 0
            while done < samples:
                size = min(batch, samples - done)
                if strat == "mul_fma":
                    p = random_modulus(rng, rng.randint(2, ell - 2))
                elif strat == "reduce_any":
                    p = random_modulus(rng, rng.randint(2, ell // 2))
                elif strat == "reduce_upward":
                    p = random_prime(rng, rng.randint(2, (ell - 1) // 2))
                else:
                    p = random_modulus(rng, rng.randint(2, ell - 2))
                fc = make_float_ctx(p, fmt)
                xs, ys = _residues(gen, p, size, np.int64), _residues(gen, p, size, np.int64)
                fx, fy = xs.astype(dt), ys.astype(dt)
                if strat == "mul_fma":
                    got, want = modsimd.vmul_mod_fma(fx, fy, fc), (_obj(xs) * _obj(ys)) % p
                elif strat.startswith("reduce"):
                    v = FloatVariant.ANY_ROUNDING if strat == "reduce_any" else FloatVariant.UPWARD_NO_HIGH_BRANCH
                    a = xs * ys
                    got, want = modsimd.vfloat_reduce_half(a.astype(dt), fc, v), a % p
                elif strat == "add":
                    got, want = modsimd.vadd_mod_float(fx, fy, fc), (xs + ys) % p
                else:
                    got, want = modsimd.vsub_mod_float(fx, fy, fc), (xs - ys) % p
                got = np.asarray(got)
                if not np.all(np.floor(got) == got):
                    res.fail(f"{strat} p={p}: non-integral result")
                _compare(res, f"{strat} p={p}", _obj(got.astype(np.int64)), np.asarray(want).astype(object), (xs, ys))
                done += size
    res.note = f"5 strategies x {samples} samples"
    return res


# ---------------------------------------------------------------------------
# correction bound and Montgomery properties


def correction_bound(samples: int, seed: int = 3, mutate: str | None = None) -> CheckResult:
    """Barrett correction counts never exceed the profile's ``h`` (``samples`` per profile)."""
    res = CheckResult("Barrett correction count <= h")
    rng = random.Random(seed)
    mk = barrett_factory(mutate)
    worst = {}
    with _timed(res):
        for prof in Profile:
            done = 0
            while done < samples:
                n = rng.choice((8, 16, 32, 64))
                bits = rng.randint(2 if prof is not Profile.MINUS2 else 3, prof.bound(n))
                ctx = mk(random_modulus(rng, bits), n, prof)
                limit = ctx.limit
                for _ in range(1000):
                    a = rng.randrange(limit) if rng.random() < 0.7 else limit - 1 - rng.randrange(min(limit, 1 << 20))
                    d, count = barrett_reduce_traced(a, ctx)
                    res.cases += 1
                    worst[prof.name] = max(worst.get(prof.name, 0), count)
                    if count > ctx.h or d != a % ctx.p:
                        res.fail(f"{prof.name} p={ctx.p} n={n} a={a}: d={d} corrections={count} h={ctx.h}")
                done += 1000
    res.note = "max corrections " + ", ".join(f"{k}={v}" for k, v in worst.items())
    return res


def montgomery_properties(samples: int, seed: int = 4) -> CheckResult:
    """``mont_reduce(a) = a rho mod p`` and ``< p`` for random ``(p, m, a)``; roundtrip exhaustive for p < 2^8."""
    res = CheckResult("Montgomery congruence and roundtrip")
    rng = random.Random(seed)
    with _timed(res):
        done = 0
        while done < samples:
            n = rng.choice((8, 16, 32, 64))
            p = random_modulus(rng, rng.randint(2, n), odd=True)
            m = rng.randint((p - 1).bit_length(), n)
            mc = make_montgomery(p, m, n)
            assert mc.rho * (1 << m) - mc.chi * p == 1
            top = p << m
            for _ in range(200):
                a = rng.randrange(top) if rng.random() < 0.8 else top - 1 - rng.randrange(min(top, 1000))
                d = mont_reduce(a, mc)
                res.cases += 1
                if d >= p or (d - a * mc.rho) % p:
                    res.fail(f"mont_reduce p={p} m={m} a={a} -> {d}")
            done += 200
        for p in range(3, 256, 2):
            for m in range((p - 1).bit_length(), 9):
                mc = make_montgomery(p, m, 8)
                for x in range(p):
                    res.cases += 1
                    if from_mont(to_mont(x, mc), mc) != x:
                        res.fail(f"roundtrip p={p} m={m} x={x}")
    return res


# ---------------------------------------------------------------------------
# lane homomorphism on random batches


def lane_homomorphism(batches: int, seed: int = 5, register_bits: int = 128) -> CheckResult:
    """Random batches of one register each: every lane equals the scalar kernel.

    For each lane width the kernels take turns over the ``batches`` registers;
    a modulus is redrawn every 1000 batches.
    """
    res = CheckResult("lane homomorphism on random batches")
    rng = random.Random(seed)
    gen = np.random.default_rng(seed)
    group = 1000
    with _timed(res):
        for width in (16, 32, 64, "binary64", "binary32"):
            done = 0
            turn = 0
            while done < batches:
                nb = min(group, batches - done)
                if isinstance(width, str):
                    _float_batch(res, width, nb, register_bits, rng, gen, turn)
                else:
                    _int_batch(res, width, nb, register_bits, rng, gen, turn)
                done += nb
                turn += 1
    res.note = f"{batches} batches of {register_bits}-bit registers per lane type"
    return res


def _int_batch(res, n, nb, register_bits, rng, gen, turn):
    U = LANE_DTYPES[n]
    size = nb * (register_bits // n)
    kinds = ("add", "sub", "neg", "mul", "fixed", "mont", "half")
    kind = kinds[turn % len(kinds)]
    prof = list(Profile)[turn // len(kinds) % 3]
    if kind == "mont":
        p = random_modulus(rng, rng.randint(2, n), odd=True)
        mc = make_montgomery(p, rng.randint((p - 1).bit_length(), n), n)
        xs, ys = _residues(gen, p, size, U), _residues(gen, p, size, U)
        got = modsimd.vmont_mul(xs, ys, mc)
        want = [mont_mul(x, y, mc) for x, y in zip(xs.tolist(), ys.tolist())]
    elif kind == "half":
        p = random_modulus(rng, rng.randint(2, (n - 1) // 2))
        hc = make_barrett_half(p, n)
        xs, ys = _residues(gen, p, size, U), _residues(gen, p, size, U)
        got = modsimd.vmul_mod_half(xs, ys, hc)
        want = [mul_mod_half(x, y, hc) for x, y in zip(xs.tolist(), ys.tolist())]
    else:
        p = random_modulus(rng, rng.randint(3, prof.bound(n)))
        ctx = make_barrett(p, n, prof)
        xs, ys = _residues(gen, p, size, U), _residues(gen, p, size, U)
        xl, yl = xs.tolist(), ys.tolist()
        if kind == "add":
            got, want = modsimd.vadd_mod(xs, ys, ctx), [add_mod(x, y, ctx) for x, y in zip(xl, yl)]
        elif kind == "sub":
            got, want = modsimd.vsub_mod(xs, ys, ctx), [sub_mod(x, y, ctx) for x, y in zip(xl, yl)]
        elif kind == "neg":
            got, want = modsimd.vneg_mod(xs, ctx), [neg_mod(x, ctx) for x in xl]
        elif kind == "mul":
            got, want = modsimd.vmul_mod_barrett(xs, ys, ctx), [mul_mod(x, y, ctx) for x, y in zip(xl, yl)]
        else:
            y = rng.randrange(p)
            fm = make_fixed(y, ctx)
            got, want = modsimd.vmul_mod_fixed(xs, fm, ctx), [mul_mod_fixed(x, fm, ctx) for x in xl]
    _compare(res, f"v{kind} n={n} p={p}", _obj(got), np.array(want, dtype=object), (xs, ys))


def _float_batch(res, fmt, nb, register_bits, rng, gen, turn):
    dt = np.float64 if fmt == "binary64" else np.float32
    ell = 52 if fmt == "binary64" else 23
    size = nb * (register_bits // (64 if fmt == "binary64" else 32))
    kind = ("mul", "add", "sub", "reduce")[turn % 4]
    p = random_modulus(rng, rng.randint(2, ell - 2 if kind != "reduce" else ell // 2))
    fc = make_float_ctx(p, fmt)
    conv = float if dt is np.float64 else np.float32
    xs, ys = _residues(gen, p, size, np.int64), _residues(gen, p, size, np.int64)
    fx, fy = xs.astype(dt), ys.astype(dt)
    sx, sy = [conv(v) for v in xs.tolist()], [conv(v) for v in ys.tolist()]
    if kind == "mul":
        got, want = modsimd.vmul_mod_fma(fx, fy, fc), [mul_mod_fma(a, b, fc) for a, b in zip(sx, sy)]
    elif kind == "add":
        got, want = modsimd.vadd_mod_float(fx, fy, fc), [add_mod_float(a, b, fc) for a, b in zip(sx, sy)]
    elif kind == "sub":
        got, want = modsimd.vsub_mod_float(fx, fy, fc), [sub_mod_float(a, b, fc) for a, b in zip(sx, sy)]
    else:
        prods = xs * ys
        got = modsimd.vfloat_reduce_half(prods.astype(dt), fc)
        want = [float_reduce_half(conv(a), fc) for a in prods.tolist()]
    _compare(res, f"v{kind} {fmt} p={p}", np.asarray(got, dtype=np.float64), np.array(want, dtype=np.float64), (xs, ys))


def bias_compare(samples: int, seed: int = 6) -> CheckResult:
    """The biased signed comparison equals unsigned ``>`` on 64-bit lanes."""
    res = CheckResult("biased unsigned 64-bit comparison")
    gen = np.random.default_rng(seed)
    edges = np.array([0, 1, (1 << 63) - 1, 1 << 63, (1 << 63) + 1, (1 << 64) - 1], dtype=np.uint64)
    with _timed(res):
        a, b = np.meshgrid(edges, edges)
        _compare(res, "edges", modsimd.bias_cmpgt_u64(a.ravel(), b.ravel()), _obj(a.ravel()) > _obj(b.ravel()), (a.ravel(), b.ravel()))
        a = gen.integers(0, 1 << 64, size=samples, dtype=np.uint64, endpoint=False)
        b = gen.integers(0, 1 << 64, size=samples, dtype=np.uint64, endpoint=False)
        b[::3] = a[::3] ^ np.uint64(1 << 63)
        _compare(res, "random", modsimd.bias_cmpgt_u64(a, b), a > b, (a, b))
    return res


# ---------------------------------------------------------------------------
# transforms


NTT_SMALL_PRIMES = (17, 97, 469762049)


def ntt_oracle(max_n: int = 64, primes=NTT_SMALL_PRIMES, seed: int = 7, strategies=("barrett", "fma")) -> CheckResult:
    """``tft`` at full length equals the bit-mirrored brute-force DFT, and every truncation agrees with it."""
    res = CheckResult("TFT vs bit-mirrored brute-force DFT")
    rng = random.Random(seed)
    kmax = max_n.bit_length() - 1
    with _timed(res):
        for p in primes:
            for strategy in strategies:
                for k in range(0, min(kmax, ntt.two_adic_valuation(p - 1)) + 1):
                    plan = ntt.make_plan(p, k, strategy=strategy)
                    a = [rng.randrange(p) for _ in range(plan.n)]
                    full = ntt.tft_bitrev_oracle(a, plan)
                    _compare(res, f"tft p={p} n={plan.n} {strategy}", ntt.tft(a, plan.n, plan), full)
                    for l in range(1, plan.n):
                        want = ntt.tft_bitrev_oracle(a[:l] + [0] * (plan.n - l), plan)[:l]
                        _compare(res, f"tft p={p} n={plan.n} l={l} {strategy}", ntt.tft(a[:l], l, plan), want)
    res.note = "sizes capped by each prime's 2-adic order"
    return res


def ntt_roundtrip(sizes=(1 << 10, 1 << 16), max_l: int = 128, p: int = 469762049, seed: int = 8, full: bool = True) -> CheckResult:
    """``itft(tft(a, l), l) = a`` for every ``l <= max_l`` and for full lengths."""
    res = CheckResult("itft o tft = identity")
    gen = np.random.default_rng(seed)
    with _timed(res):
        for n in sizes:
            plan = ntt.make_plan(p, n.bit_length() - 1)
            ls = list(range(0, max_l + 1))
            if full:
                ls += [n // 2 + 1, n - 1, n]
            for l in ls:
                a = gen.integers(0, p, size=l)
                _compare(res, f"roundtrip n={n} l={l}", ntt.itft(ntt.tft(a, l, plan), l, plan), a)
    return res


def ntt_blocked(max_k: int = 16, p: int = 469762049, seed: int = 9) -> CheckResult:
    """``blocked_tft`` agrees with ``tft`` for ``n1`` in {2, 4, 8, 16, sqrt n}; the blocked inverse roundtrips."""
    res = CheckResult("blocked TFT vs TFT")
    gen = np.random.default_rng(seed)
    with _timed(res):
        for k in range(4, max_k + 1, 4):
            n = 1 << k
            for n1 in sorted({2, 4, 8, 16, 1 << (k // 2)}):
                plan = ntt.make_plan(p, k, n1=n1)
                for l in sorted({n1, n1 + 1, n // 2 + 3, (3 * n) // 4, n}):
                    if not n1 <= l <= n:
                        continue
                    a = gen.integers(0, p, size=l)
                    got = ntt.blocked_tft(a, l, plan)
                    _compare(res, f"blocked n={n} n1={n1} l={l}", got[:l], ntt.tft(a, l, plan))
                    _compare(res, f"blocked inverse n={n} n1={n1} l={l}", ntt.blocked_itft(got, l, plan), a)
    return res


def ntt_op_count(ks=range(6, 17, 2), p: int = 469762049, slack: float = 3.0) -> CheckResult:
    """Measured operations of ``blocked_tft`` stay below ``3/2 lambda n1 k + C n`` with ``C = slack`` at every size.

    A bound that holds with one ``C`` from small to large ``n`` is the shape
    being checked; the largest measured ``C`` goes into the note.
    """
    res = CheckResult("blocked TFT operation count")
    worst = 0.0
    with _timed(res):
        for k in ks:
            n = 1 << k
            for n1 in sorted({2, 8, 1 << (k // 2)}):
                plan = ntt.make_plan(p, k, n1=n1)
                for l in sorted({n1, n // 3, n // 2 + 1, n}):
                    if l < n1:
                        continue
                    lam = -(-l // n1)
                    counter = ntt.OpCounter()
                    ntt.blocked_tft(np.ones(l, dtype=np.int64), l, plan, counter=counter)
                    c = (counter.total - 1.5 * lam * n1 * k) / n
                    worst = max(worst, c)
                    res.cases += 1
                    if c > slack:
                        res.fail(f"n={n} n1={n1} l={l}: {counter.total} ops, C={c:.2f}")
    res.note = f"largest measured C = {worst:.2f}"
    return res


def ntt_linearity(samples: int = 20, p: int = 998244353, k: int = 10, seed: int = 10) -> CheckResult:
    res = CheckResult("TFT linearity")
    gen = np.random.default_rng(seed)
    plan = ntt.make_plan(p, k)
    with _timed(res):
        for _ in range(samples):
            l = int(gen.integers(1, plan.n + 1))
            a, b = gen.integers(0, p, size=l), gen.integers(0, p, size=l)
            al, be = int(gen.integers(0, p)), int(gen.integers(0, p))
            lhs = ntt.tft((_obj(a) * al + _obj(b) * be) % p, l, plan)
            rhs = (_obj(ntt.tft(a, l, plan)) * al + _obj(ntt.tft(b, l, plan)) * be) % p
            _compare(res, f"linearity l={l}", _obj(lhs), rhs)
    return res


# ---------------------------------------------------------------------------
# polynomial and integer products


def poly_random(instances: int, max_len: int = 513, p: int = 469762049, seed: int = 11) -> CheckResult:
    """TFT and Kronecker products equal the schoolbook product on random operands (degrees < max_len)."""
    res = CheckResult("polynomial products vs schoolbook")
    rng = random.Random(seed)
    plan = ntt.make_plan(p, (2 * max_len - 1 - 1).bit_length())
    with _timed(res):
        for i in range(instances):
            la = rng.randint(1, max_len) if i % 4 else rng.randint(1, 8)
            lb = rng.randint(1, max_len)
            a = polymul.ModPoly.of([rng.randrange(p) for _ in range(la)], p)
            b = polymul.ModPoly.of([rng.randrange(p) for _ in range(lb)], p)
            want = polymul.poly_mul_naive(a, b)
            for label, got in (("tft", polymul.poly_mul_tft(a, b, plan)), ("kronecker", polymul.poly_mul_kronecker(a, b))):
                res.cases += 1
                if got != want:
                    res.fail(f"{label} lengths {la}x{lb}")
    return res


def poly_exhaustive(p: int = 7, length: int = 4) -> CheckResult:
    """Every pair of polynomials of degree < ``length`` over Z/pZ.

    TFT: all pairs are transformed together as the vector width of one
    transform of the ordinary size.  Kronecker: packing and unpacking are
    vectorised over all pairs and the packed integers (single words here)
    are multiplied lane-wise.
    """
    res = CheckResult(f"exhaustive polynomial products over Z/{p}Z, degree < {length}")
    grid = np.array(np.meshgrid(*[np.arange(p)] * length, indexing="ij")).reshape(length, -1).T  # (p^L, L)
    count = grid.shape[0]
    plan = ntt.make_plan(469762049, (2 * length - 2).bit_length())
    l = 2 * length - 1
    nbytes = polymul.kronecker_chunk_bits(p, length, length) // 8
    packed = polymul.kronecker_pack(grid, nbytes)
    assert packed.shape[1] <= 8 and l * nbytes <= 16
    words = np.zeros((count, 8), dtype=np.uint8)
    words[:, : packed.shape[1]] = packed
    words = words.view("<u8").reshape(-1).astype(np.uint64)
    with _timed(res):
        for i in range(count):
            a = np.broadcast_to(grid[i], (count, length))
            want = np.zeros((count, l), dtype=np.int64)
            for j in range(length):
                want[:, j : j + length] += grid[i, j] * grid
            want %= p
            # p = 7 has no roots of unity of order 8: convolve over the big prime (no wraparound) and reduce
            got_tft = polymul.convolve_tft(np.ascontiguousarray(a.T), np.ascontiguousarray(grid.T), plan).T % p
            _compare(res, f"tft a={grid[i].tolist()}", got_tft, want)
            prod = modsimd.U128.mul(np.full(count, words[i], dtype=np.uint64), words)
            raw = np.stack([prod.lo, prod.hi], axis=1).astype("<u8").view(np.uint8).reshape(count, 16)
            got_kr = polymul.kronecker_unpack(raw, l, nbytes, p)
            _compare(res, f"kronecker a={grid[i].tolist()}", got_kr, want)
    return res


def schoolbook_oracle(x: int, y: int) -> int:
    """Limb-by-limb schoolbook product on 16-bit limbs, independent of every library path."""
    if x == 0 or y == 0:
        return 0
    xb = np.frombuffer(x.to_bytes((x.bit_length() + 15) // 16 * 2, "little"), dtype="<u2").astype(np.int64)
    yb = np.frombuffer(y.to_bytes((y.bit_length() + 15) // 16 * 2, "little"), dtype="<u2").astype(np.int64)
    cols = np.zeros(len(xb) + len(yb) + 3, dtype=np.int64)
    # each column sum < len * 2^32 < 2^63; split into 16-bit slices before carrying
    conv = np.convolve(xb, yb)
    cols[: len(conv)] = conv
    lo = cols & 0xFFFF
    mid = (cols >> 16) & 0xFFFF
    hi = cols >> 32
    total = 0
    for part, shift in ((lo, 0), (mid, 16), (hi, 32)):
        total += _pack16(part) << shift
    return total


def _pack16(vals: np.ndarray) -> int:
    """``sum vals[i] 2^(16 i)`` for non-negative ``vals`` below 2^48."""
    out = 0
    for k in range(3):
        sl = ((vals >> (16 * k)) & 0xFFFF).astype("<u2")
        out += int.from_bytes(sl.tobytes(), "little") << (16 * k)
    return out


def int_products(bit_sizes, seed: int = 12, per_size: int = 1) -> CheckResult:
    """``int_mul`` equals the schoolbook oracle for random operands of each bit size."""
    res = CheckResult("integer products vs schoolbook")
    rng = random.Random(seed)
    with _timed(res):
        for bits in bit_sizes:
            for _ in range(per_size):
                x = rng.getrandbits(bits) | (1 << (bits - 1))
                y = rng.getrandbits(bits) | (1 << (bits - 1))
                got = bigmul.int_mul(bigmul.BigNat.from_int(x), bigmul.BigNat.from_int(y), cutoff=1).to_int()
                res.cases += 1
                if got != schoolbook_oracle(x, y):
                    res.fail(f"{bits}-bit operands")
    return res


def int_boundaries() -> CheckResult:
    """Structured operands of at most three limbs (zeros, ones, all-ones, single bits) through the transform path."""
    res = CheckResult("integer products on limb-boundary operands")
    vals = {0, 1, 2, 3}
    for limbs in (1, 2, 3):
        top = 1 << (64 * limbs)
        vals |= {top - 1, top >> 1, (top >> 1) - 1, (top >> 1) + 1, top // 3, top - 2}
        for k in range(0, 64 * limbs, 23):
            vals |= {1 << k, (1 << k) - 1 if k else 0}
    vals = sorted(vals)
    with _timed(res):
        for x in vals:
            for y in vals:
                for cutoff in (1, 64):
                    got = bigmul.int_mul(bigmul.BigNat.from_int(x), bigmul.BigNat.from_int(y), cutoff=cutoff).to_int()
                    res.cases += 1
                    if got != schoolbook_oracle(x, y):
                        res.fail(f"{x:#x} * {y:#x} (cutoff {cutoff})")
    return res


def matrix_products(seed: int = 13, p: int = 469762049, int_bits: int = 4096) -> CheckResult:
    """Polynomial matrices (n <= 4, d <= 32) and integer matrices (n <= 4, 2^12-bit entries) vs naive."""
    res = CheckResult("matrix products vs naive")
    rng = random.Random(seed)
    plan = ntt.make_plan(p, 6)
    with _timed(res):
        for r, inner, c in ((1, 1, 1), (2, 3, 4), (4, 4, 4), (3, 1, 2)):
            for d in (1, 7, 32):
                A = polymul.PolyMatrix.of([[[rng.randrange(p) for _ in range(d)] for _ in range(inner)] for _ in range(r)], p)
                B = polymul.PolyMatrix.of([[[rng.randrange(p) for _ in range(d)] for _ in range(c)] for _ in range(inner)], p)
                res.cases += 1
                if polymul.poly_mat_mul(A, B, plan) != polymul.poly_mat_mul_naive(A, B):
                    res.fail(f"poly_mat_mul {r}x{inner}x{c} d={d}")
            A = [[rng.getrandbits(rng.randint(1, int_bits)) for _ in range(inner)] for _ in range(r)]
            B = [[rng.getrandbits(rng.randint(1, int_bits)) for _ in range(c)] for _ in range(inner)]
            got = bigmul.int_mat_mul(A, B)
            for i in range(r):
                for j in range(c):
                    res.cases += 1
                    want = sum(schoolbook_oracle(A[i][k], B[k][j]) for k in range(inner))
                    if got[i][j].to_int() != want:
                        res.fail(f"int_mat_mul {r}x{inner}x{c} entry ({i},{j})")
    return res
