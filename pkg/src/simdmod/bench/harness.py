"""Throughput measurement of the kernels and the transform-based products.

Element-wise kernels are timed on 4096-byte aligned buffers, writing the
result into the first buffer, after one warmup pass.  Each row reports the
mean and the median over ``reps`` runs of the time per element.  Scalar rows
(strategy prefix ``scalar_``) run the modcore kernel in a Python loop over the
same buffer and serve as the baseline of the speedup ratios.
"""

from __future__ import annotations

import statistics
import sys
import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from simdmod import bigmul, modcore, modsimd, ntt, polymul
from simdmod.modcore import FloatVariant, Profile

BUFFER_BYTES = 4096

VECTOR_STRATEGIES = ("barrett", "barrett_half", "fixed", "montgomery", "float_fma")
# baselines with no vector counterpart; the last two are not lane kernels at all
EXTRA_STRATEGIES = ("scalar_naive", "kronecker", "bigint_builtin")
STRATEGIES = VECTOR_STRATEGIES + tuple(f"scalar_{s}" for s in VECTOR_STRATEGIES) + EXTRA_STRATEGIES

ELEMENTWISE_OPS = ("add_mod", "sub_mod", "neg_mod", "mul_mod")
PRODUCT_OPS = ("fft", "poly_mul", "int_mul", "poly_mat_mul", "int_mat_mul")
OPS = ELEMENTWISE_OPS + PRODUCT_OPS

CSV_HEADER = "op,strategy,lane_bits,m,len,ns_per_elem_mean,ns_per_elem_median"

FFT_PRIME = 469762049


class UsageError(ValueError):
    """An (op, strategy, lane_bits, m) combination violating a kernel precondition."""


@dataclass(frozen=True)
class BenchSpec:
    op: str
    lane_bits: int
    m: int
    strategy: str = "barrett"
    buffer_len: int | None = None  # elements; defaults to one 4096-byte buffer
    reps: int = 50
    p: int | None = None


@dataclass
class BenchRow:
    op: str
    strategy: str
    lane_bits: int
    m: int
    length: int
    ns_mean: float
    ns_median: float
    seconds_per_call: float = 0.0
    samples: list[float] = field(default_factory=list, repr=False)

    def csv(self) -> str:
        return f"{self.op},{self.strategy},{self.lane_bits},{self.m},{self.length},{self.ns_mean:.4g},{self.ns_median:.4g}"


# ---------------------------------------------------------------------------
# moduli and timing


@lru_cache(maxsize=None)
def bench_prime(m: int) -> int:
    """Largest prime of exactly ``m`` bits (3 for ``m = 2``)."""
    from simdmod.bench.checks import is_prime

    for p in range((1 << m) - 1, 1 << (m - 1), -1):
        if is_prime(p):
            return p
    raise UsageError(f"no prime of {m} bits")


def _time(fn, reps: int) -> list[float]:
    fn()  # warmup
    out = []
    for _ in range(reps):
        t0 = time.perf_counter_ns()
        fn()
        out.append((time.perf_counter_ns() - t0) * 1e-9)
    return out


def _row(spec: BenchSpec, length: int, samples: list[float], lane_bits: int | None = None, m: int | None = None) -> BenchRow:
    mean = statistics.fmean(samples)
    med = statistics.median(samples)
    return BenchRow(
        op=spec.op,
        strategy=spec.strategy,
        lane_bits=spec.lane_bits if lane_bits is None else lane_bits,
        m=spec.m if m is None else m,
        length=length,
        ns_mean=mean * 1e9 / length,
        ns_median=med * 1e9 / length,
        seconds_per_call=mean,
        samples=samples,
    )


# ---------------------------------------------------------------------------
# element-wise kernels


def _validate(spec: BenchSpec) -> None:
    if spec.op not in OPS:
        raise UsageError(f"unknown op {spec.op!r}; expected one of {', '.join(OPS)}")
    if spec.strategy not in STRATEGIES:
        raise UsageError(f"unknown strategy {spec.strategy!r}; expected one of {', '.join(STRATEGIES)}")
    if spec.reps < 1:
        raise UsageError("reps must be positive")
    if spec.op in PRODUCT_OPS:
        return
    base = spec.strategy.removeprefix("scalar_")
    n, m = spec.lane_bits, spec.m
    if base == "float_fma":
        if n not in (32, 64):
            raise UsageError("float_fma needs 32-bit (binary32) or 64-bit (binary64) lanes")
        ell = 23 if n == 32 else 52
        if not 2 <= m <= ell - 2:
            raise UsageError(f"float_fma needs 2 <= m <= {ell - 2} in {n}-bit lanes, got m={m}")
        if spec.op == "neg_mod":
            raise UsageError("neg_mod has no float kernel")
        return
    if n not in modcore.WORD_SIZES:
        raise UsageError(f"lane_bits must be one of {modcore.WORD_SIZES}, got {n}")
    if not 2 <= m <= n:
        raise UsageError(f"need 2 <= m <= lane_bits, got m={m}, lane_bits={n}")
    if spec.op != "mul_mod" and base not in ("barrett", "naive"):
        raise UsageError(f"{spec.op} only has the barrett (integer lane) and float_fma strategies")
    if base == "naive" and spec.op != "mul_mod":
        raise UsageError("scalar_naive is a mul_mod baseline")
    if base == "barrett_half" and m > (n - 1) // 2:
        raise UsageError(f"barrett_half needs m <= floor((n-1)/2) = {(n - 1) // 2}, got m={m}")


def _elementwise(spec: BenchSpec) -> BenchRow:
    n, m = spec.lane_bits, spec.m
    base = spec.strategy.removeprefix("scalar_")
    scalar = spec.strategy.startswith("scalar_")
    p = spec.p or bench_prime(m)
    if p.bit_length() != m:
        raise UsageError(f"modulus {p} is not {m} bits")
    count = spec.buffer_len or BUFFER_BYTES * 8 // n
    gen = np.random.default_rng(m * 131 + n)
    xs_i = gen.integers(0, p, size=count, dtype=np.uint64)
    ys_i = gen.integers(0, p, size=count, dtype=np.uint64)

    if base == "float_fma":
        fmt = "binary32" if n == 32 else "binary64"
        fc = modcore.make_float_ctx(p, fmt)
        dt = np.float32 if n == 32 else np.float64
        x = modsimd.aligned_copy(xs_i.astype(dt))
        y = modsimd.aligned_copy(ys_i.astype(dt))
        half = m <= fc.ell // 2
        if spec.op == "add_mod":
            vec, sca = (lambda: modsimd.vadd_mod_float(x, y, fc, out=x)), modcore.add_mod_float
        elif spec.op == "sub_mod":
            vec, sca = (lambda: modsimd.vsub_mod_float(x, y, fc, out=x)), modcore.sub_mod_float
        elif half:
            # moduli of at most ell/2 bits: the exact product reduced without FMA
            vec = lambda: modsimd.vfloat_reduce_half(x * y, fc, FloatVariant.ANY_ROUNDING, out=x)  # noqa: E731
            sca = lambda a, b, c: modcore.float_reduce_half(a * b, c)  # noqa: E731
        else:
            vec, sca = (lambda: modsimd.vmul_mod_fma(x, y, fc, out=x)), modcore.mul_mod_fma
        if scalar:
            conv = float if n == 64 else np.float32
            xl, yl = [conv(v) for v in x.tolist()], [conv(v) for v in y.tolist()]

            def run():
                for i in range(count):
                    xl[i] = sca(xl[i], yl[i], fc)

            return _row(spec, count, _time(run, spec.reps))
        return _row(spec, count, _time(vec, spec.reps))

    U = modsimd.lane_dtype(n)
    x = modsimd.aligned_copy(xs_i.astype(U))
    y = modsimd.aligned_copy(ys_i.astype(U))
    xl, yl = xs_i.tolist(), ys_i.tolist()

    if base == "montgomery":
        if p % 2 == 0:
            raise UsageError("montgomery needs an odd modulus")
        ctx = modcore.make_montgomery(p, m, n)
        vec, sca = (lambda: modsimd.vmont_mul(x, y, ctx, out=x)), (lambda a, b: modcore.mont_mul(a, b, ctx))
    elif base == "barrett_half":
        ctx = modcore.make_barrett_half(p, n)
        vec, sca = (lambda: modsimd.vmul_mod_half(x, y, ctx, out=x)), (lambda a, b: modcore.mul_mod_half(a, b, ctx))
    else:
        ctx = modcore.make_barrett(p, n, modcore.profile_for(m, n), m)
        if spec.op == "add_mod":
            vec, sca = (lambda: modsimd.vadd_mod(x, y, ctx, out=x)), (lambda a, b: modcore.add_mod(a, b, ctx))
        elif spec.op == "sub_mod":
            vec, sca = (lambda: modsimd.vsub_mod(x, y, ctx, out=x)), (lambda a, b: modcore.sub_mod(a, b, ctx))
        elif spec.op == "neg_mod":
            vec, sca = (lambda: modsimd.vneg_mod(x, ctx, out=x)), (lambda a, b: modcore.neg_mod(a, ctx))
        elif base == "fixed":
            yv = int(ys_i[0])
            fm = modcore.make_fixed(yv, ctx)
            vec, sca = (lambda: modsimd.vmul_mod_fixed(x, fm, ctx, out=x)), (lambda a, b: modcore.mul_mod_fixed(a, fm, ctx))
        elif base == "naive":
            vec, sca = None, (lambda a, b: a * b % p)
        else:
            vec, sca = (lambda: modsimd.vmul_mod_barrett(x, y, ctx, out=x)), (lambda a, b: modcore.mul_mod(a, b, ctx))

    if scalar:

        def run():
            for i in range(count):
                xl[i] = sca(xl[i], yl[i])

        return _row(spec, count, _time(run, spec.reps))
    return _row(spec, count, _time(vec, spec.reps))


# ---------------------------------------------------------------------------
# transforms and products


def _fft_rows(spec: BenchSpec, sizes) -> list[BenchRow]:
    p = spec.p or FFT_PRIME
    rows = []
    strategy = "fma" if spec.strategy.removeprefix("scalar_") == "float_fma" else "barrett"
    for n in sizes:
        k = n.bit_length() - 1
        plan = ntt.make_plan(p, k, strategy=strategy)
        a = np.random.default_rng(k).integers(0, p, size=n)
        reps = max(3, min(spec.reps, (1 << 22) // (n * max(k, 1))))
        if spec.strategy.startswith("scalar_"):
            if n > 1 << 12:
                continue
            ctx = modcore.make_barrett(p, 64, Profile.MINUS2)
            al = a.tolist()
            run = lambda: _scalar_ntt(al, plan, ctx)  # noqa: E731
            reps = 3
        else:
            run = lambda: ntt.tft(a, n, plan)  # noqa: E731
        rows.append(_row(spec, n, _time(run, reps), lane_bits=plan.arith.lane_bits, m=p.bit_length()))
    return rows


def _scalar_ntt(a: list[int], plan, ctx) -> list[int]:
    """Decimation-in-frequency radix-2 transform with scalar Barrett kernels (bit-reversed output)."""
    n = plan.n
    w = [int(v) for v in plan.twiddles]  # w[j] = omega^[j]_{k-1}, j < n/2
    order = [int(v) for v in ntt.bit_reverse_indices(max(plan.k - 1, 0))] if n > 1 else [0]
    natural = [0] * max(n // 2, 1)
    for j, idx in enumerate(order[: n // 2]):
        natural[idx] = w[j]  # natural[i] = omega^i
    a = list(a)
    half, stride = n // 2, 1
    while half:
        for start in range(0, n, 2 * half):
            for j in range(half):
                u, v = a[start + j], a[start + j + half]
                a[start + j] = modcore.add_mod(u, v, ctx)
                a[start + j + half] = modcore.mul_mod(modcore.sub_mod(u, v, ctx), natural[j * stride], ctx)
        half //= 2
        stride *= 2
    return a


def _product_rows(spec: BenchSpec, sizes) -> list[BenchRow]:
    rows = []
    p = spec.p or FFT_PRIME
    rng = np.random.default_rng(17)
    for size in sizes:
        reps = spec.reps
        lane_bits, m = 0, p.bit_length()
        if spec.op == "poly_mul":
            a = polymul.ModPoly.of(rng.integers(0, p, size=size), p)
            b = polymul.ModPoly.of(rng.integers(0, p, size=size), p)
            if spec.strategy == "scalar_naive":
                if size > 1 << 11:
                    continue
                run = lambda: polymul.poly_mul_naive(a, b)  # noqa: E731
            elif spec.strategy == "kronecker":
                run = lambda: polymul.poly_mul_kronecker(a, b)  # noqa: E731
            else:
                plan = ntt.make_plan(p, ntt.next_pow2(2 * size - 1).bit_length() - 1)
                lane_bits = plan.arith.lane_bits
                run = lambda: polymul.poly_mul_tft(a, b, plan)  # noqa: E731
        elif spec.op == "int_mul":
            import random as _random

            r = _random.Random(size)
            xi, yi = r.getrandbits(size) | 1 << (size - 1), r.getrandbits(size) | 1 << (size - 1)
            m = size
            if spec.strategy == "bigint_builtin":
                run = lambda: xi * yi  # noqa: E731
            else:
                x, y = bigmul.BigNat.from_int(xi), bigmul.BigNat.from_int(yi)
                lane_bits = 64
                run = lambda: bigmul.int_mul(x, y)  # noqa: E731
        elif spec.op == "poly_mat_mul":
            d = spec.buffer_len or 1 << 10
            A = polymul.PolyMatrix(rng.integers(0, p, size=(size, size, d)), p)
            B = polymul.PolyMatrix(rng.integers(0, p, size=(size, size, d)), p)
            if spec.strategy == "scalar_naive":
                if size > 4:
                    continue
                run = lambda: polymul.poly_mat_mul_naive(A, B)  # noqa: E731
            else:
                plan = ntt.make_plan(p, ntt.next_pow2(2 * d - 1).bit_length() - 1)
                lane_bits = plan.arith.lane_bits
                run = lambda: polymul.poly_mat_mul(A, B, plan)  # noqa: E731
        elif spec.op == "int_mat_mul":
            import random as _random

            bits = spec.buffer_len or 32 << 12
            r = _random.Random(size)
            A = [[r.getrandbits(bits) for _ in range(size)] for _ in range(size)]
            B = [[r.getrandbits(bits) for _ in range(size)] for _ in range(size)]
            m = bits
            if spec.strategy == "bigint_builtin":
                run = lambda: [[sum(A[i][k] * B[k][j] for k in range(size)) for j in range(size)] for i in range(size)]  # noqa: E731
            else:
                lane_bits = 64
                run = lambda: bigmul.int_mat_mul(A, B)  # noqa: E731
        else:
            raise UsageError(f"unknown product op {spec.op!r}")
        t0 = time.perf_counter()
        run()
        once = time.perf_counter() - t0
        reps = max(1, min(reps, int(0.5 / max(once, 1e-6))))
        rows.append(_row(spec, size, _time(run, reps), lane_bits=lane_bits, m=m))
    return rows


def run_bench(spec: BenchSpec, sizes=None) -> list[BenchRow]:
    """Time one kernel configuration; product ops produce one row per entry of ``sizes``."""
    _validate(spec)
    if spec.op == "fft":
        if spec.strategy not in ("barrett", "float_fma", "scalar_barrett"):
            raise UsageError("fft supports the barrett, float_fma and scalar_barrett strategies")
        return _fft_rows(spec, sizes or [1 << k for k in range(8, 21)])
    if spec.op in PRODUCT_OPS:
        allowed = {
            "poly_mul": ("barrett", "kronecker", "scalar_naive"),
            "int_mul": ("barrett", "bigint_builtin"),
            "poly_mat_mul": ("barrett", "scalar_naive"),
            "int_mat_mul": ("barrett", "bigint_builtin"),
        }[spec.op]
        if spec.strategy not in allowed:
            raise UsageError(f"{spec.op} supports the strategies {', '.join(allowed)}")
        return _product_rows(spec, sizes or DEFAULT_PRODUCT_SIZES[spec.op])
    return [_elementwise(spec)]


DEFAULT_PRODUCT_SIZES = {
    "poly_mul": [1 << k for k in range(8, 15)],
    "int_mul": [32 << k for k in range(8, 17)],
    "poly_mat_mul": [1, 2, 4, 8],
    "int_mat_mul": [1, 2, 4, 8],
}


# ---------------------------------------------------------------------------
# tables


@dataclass(frozen=True)
class TableSpec:
    title: str
    op: str
    columns: tuple  # (lane_bits, m) pairs or sizes
    strategies: tuple
    unit: str = "ns/elem"
    baseline: str | None = None  # strategy used as the speedup reference


TABLES = {
    "mod-sum": TableSpec(
        "Modular sum",
        "add_mod",
        ((8, 7), (8, 8), (16, 15), (16, 16), (32, 31), (32, 32), (64, 63), (64, 64)),
        ("scalar_barrett", "barrett"),
        baseline="scalar_barrett",
    ),
    "mod-product": TableSpec(
        "Modular product",
        "mul_mod",
        (
            (8, 2), (8, 6), (8, 7), (8, 8),
            (16, 6), (16, 14), (16, 15), (16, 16),
            (32, 14), (32, 30), (32, 31), (32, 32),
            (64, 30), (64, 62), (64, 63), (64, 64),
        ),
        ("scalar_naive", "scalar_barrett", "barrett", "barrett_half"),
        baseline="scalar_barrett",
    ),
    "fixed-product": TableSpec(
        "Modular product for a fixed multiplicand",
        "mul_mod",
        ((8, 7), (8, 8), (16, 15), (16, 16), (32, 31), (32, 32), (64, 63), (64, 64)),
        ("scalar_fixed", "fixed"),
        baseline="scalar_fixed",
    ),
    "montgomery": TableSpec(
        "Montgomery product",
        "mul_mod",
        ((8, 7), (8, 8), (16, 15), (16, 16), (32, 31), (32, 32), (64, 63), (64, 64)),
        ("scalar_montgomery", "montgomery"),
        baseline="scalar_montgomery",
    ),
    "float": TableSpec(
        "Floating point modular operations",
        "add_mod|mul_mod",
        (("add_mod", 32, 21), ("add_mod", 64, 50), ("mul_mod", 32, 11), ("mul_mod", 32, 21), ("mul_mod", 64, 25), ("mul_mod", 64, 26), ("mul_mod", 64, 50)),
        ("scalar_float_fma", "float_fma"),
        baseline="scalar_float_fma",
    ),
    "fft": TableSpec("Transform of size n over Z/469762049Z", "fft", tuple(1 << k for k in range(8, 21)), ("scalar_barrett", "barrett", "float_fma"), "us", "scalar_barrett"),
    "poly-product": TableSpec("Polynomial product for degrees < d over Z/469762049Z", "poly_mul", tuple(DEFAULT_PRODUCT_SIZES["poly_mul"]), ("scalar_naive", "kronecker", "barrett"), "ms", "scalar_naive"),
    "int-product": TableSpec("Integer product in bit-size N", "int_mul", tuple(DEFAULT_PRODUCT_SIZES["int_mul"]), ("bigint_builtin", "barrett"), "ms", "bigint_builtin"),
    "poly-matrix": TableSpec("Polynomial matrix product, n x n, degrees < 2^10", "poly_mat_mul", (1, 2, 4, 8), ("scalar_naive", "barrett"), "s", "scalar_naive"),
    "int-matrix": TableSpec("Integer matrix product, n x n, 2^17-bit entries", "int_mat_mul", (1, 2, 4, 8), ("bigint_builtin", "barrett"), "s", "bigint_builtin"),
}

_UNIT_SCALE = {"us": 1e6, "ms": 1e3, "s": 1.0}


def cpu_ghz() -> float | None:
    """Nominal clock from /proc/cpuinfo, used for the cycles estimate."""
    try:
        with open("/proc/cpuinfo") as fh:
            for line in fh:
                if line.lower().startswith("cpu mhz"):
                    return float(line.split(":")[1]) / 1000.0
    except (OSError, ValueError):
        pass
    return None


def run_table(name: str, reps: int = 50, scalar_reps: int = 3, sizes=None, p: int | None = None) -> tuple[TableSpec, list[BenchRow]]:
    table = TABLES[name]
    rows: list[BenchRow] = []
    if table.op in PRODUCT_OPS:
        for strategy in table.strategies:
            r = scalar_reps if strategy.startswith("scalar_") else reps
            rows += run_bench(BenchSpec(table.op, 0, 0, strategy, reps=r, p=p), sizes=sizes or list(table.columns))
        return table, rows
    for col in table.columns:
        op, n, m = col if len(col) == 3 else (table.op, *col)
        for strategy in table.strategies:
            base = strategy.removeprefix("scalar_")
            if base == "barrett_half" and m > (n - 1) // 2:
                continue
            r = scalar_reps if strategy.startswith("scalar_") else reps
            rows += run_bench(BenchSpec(op, n, m, strategy, reps=r))
    return table, rows


def _col_key(row: BenchRow, table: TableSpec):
    if table.op in PRODUCT_OPS:
        return row.length
    if table.op == "add_mod|mul_mod":
        return (row.op, row.lane_bits, row.m)
    return (row.lane_bits, row.m)


def _col_label(key) -> str:
    if isinstance(key, int):
        return f"2^{key.bit_length() - 1}" if key & (key - 1) == 0 else str(key)
    if len(key) == 3:
        return f"{key[0].split('_')[0]} {key[1]}/{key[2]}"
    return f"{key[0]}/{key[1]}"


def speedups(table: TableSpec, rows: list[BenchRow]) -> dict:
    """``baseline / strategy`` median time ratio per column and strategy."""
    by = {(r.strategy, _col_key(r, table)): r for r in rows}
    out = {}
    for (strategy, key), row in by.items():
        base = by.get((table.baseline, key))
        if base is None or strategy == table.baseline:
            continue
        out[(strategy, key)] = base.ns_median / row.ns_median
    return out


def format_table(table: TableSpec, rows: list[BenchRow], ghz: float | None = None) -> str:
    """Aligned text: strategies as rows, table columns as columns."""
    keys = []
    for r in rows:
        k = _col_key(r, table)
        if k not in keys:
            keys.append(k)
    by = {(r.strategy, _col_key(r, table)): r for r in rows}
    product = table.op in PRODUCT_OPS
    head = "n/m" if not product else ("size")
    lines = [f"{table.title} ({'median ' + table.unit if product else 'median ns/elem'}"
             + (f", cycles at {ghz:.2f} GHz in brackets" if ghz and not product else "") + ")"]
    header = [head] + [_col_label(k) for k in keys]
    body = []
    for s in table.strategies:
        cells = [s]
        for k in keys:
            row = by.get((s, k))
            if row is None:
                cells.append("N/A")
            elif product:
                cells.append(f"{statistics.median(row.samples) * _UNIT_SCALE[table.unit]:.3g}")
            else:
                c = f"{row.ns_median:.3g}"
                if ghz:
                    c += f" [{row.ns_median * ghz:.3g}]"
                cells.append(c)
        body.append(cells)
    ratios = speedups(table, rows)
    for s in table.strategies:
        if s == table.baseline:
            continue
        cells = [f"speedup {s}"]
        for k in keys:
            v = ratios.get((s, k))
            cells.append("N/A" if v is None else f"{v:.3g}x")
        body.append(cells)
    widths = [max(len(r[i]) for r in [header] + body) for i in range(len(header))]
    for r in [header] + body:
        lines.append("  ".join(c.rjust(w) if i else c.ljust(w) for i, (c, w) in enumerate(zip(r, widths))))
    return "\n".join(lines)


def emit(rows: list[BenchRow], out=None, header: bool = True) -> None:
    out = out or sys.stdout
    if header:
        print(CSV_HEADER, file=out)
    for r in rows:
        print(r.csv(), file=out)
