"""Exit criteria at full size.  Takes several minutes; select with ``-m acceptance``."""

import math
import sys
import time

import pytest

from simdmod.bench import checks, harness

from conftest import CRITERIA

pytestmark = pytest.mark.acceptance


def record(num: int, title: str, results, extra: str = "") -> None:
    ok = all(r.passed for r in results)
    cases = sum(r.cases for r in results)
    fails = sum(r.failures for r in results)
    secs = sum(r.seconds for r in results)
    line = f"{'PASS' if ok else 'FAIL'} criterion {num} ({title}): {cases} cases, {fails} failures, {secs:.1f}s"
    if extra:
        line += f"; {extra}"
    CRITERIA[num] = line
    print(line)
    for r in results:
        print("  " + r.summary())
        for ex in r.examples:
            print("    counterexample: " + ex)
    assert ok, line


@pytest.fixture(scope="module")
def sweep8():
    start = time.perf_counter()
    scalar, lane = checks.sweep_8bit()
    return scalar, lane, time.perf_counter() - start


def test_criterion_01_exhaustive_8bit(sweep8):
    scalar, lane, secs = sweep8
    if secs >= 300:
        scalar.fail(f"runtime {secs:.0f}s exceeds 300s")
    record(1, "exhaustive 8-bit sweep", [scalar, lane], f"wall {secs:.0f}s < 300s")


@pytest.mark.parametrize("n", [16, 32, 64])
def test_criterion_02_random_words(n):
    res = checks.random_word_sweep(n, 10**7)
    prev = CRITERIA.get(2)
    record(2, f"random {n}-bit sweeps, 10^7 per strategy", [res])
    if prev:
        CRITERIA[2] = prev + "\n" + CRITERIA[2]


def test_criterion_03_correction_bound():
    res = checks.correction_bound(10**6)
    record(3, "correction count <= h, 10^6 per profile", [res], res.note)


def test_criterion_04_montgomery():
    res = checks.montgomery_properties(10**6)
    record(4, "Montgomery congruence, exhaustive roundtrip p < 2^8", [res])


def test_criterion_05_float():
    results = [checks.float_sweep("binary64", 10**7), checks.float_sweep("binary32", 10**7)]
    record(5, "FMA and float reductions, 10^7 per strategy and format", results)


def test_criterion_06_lanes(sweep8):
    _, lane8, _ = sweep8
    res = checks.lane_homomorphism(10**6)
    record(6, "lane kernels equal scalar kernels", [lane8, res])


def test_criterion_07_ntt():
    results = [checks.ntt_oracle(64), checks.ntt_roundtrip(), checks.ntt_blocked(16)]
    record(7, "TFT vs mirrored DFT, inverse, blocked", results)


def test_criterion_08_poly_products():
    results = [checks.poly_random(1000), checks.poly_exhaustive(7, 4)]
    record(8, "polynomial products vs schoolbook", results)


def test_criterion_09_int_products():
    results = [checks.int_products([32 << k for k in range(8, 16)], per_size=3), checks.int_boundaries()]
    secs = sum(r.seconds for r in results)
    if secs >= 600:
        results[0].fail(f"runtime {secs:.0f}s exceeds 600s")
    record(9, "integer products vs schoolbook, 32*2^8 .. 32*2^15 bits", results, f"{secs:.0f}s < 600s")


def test_criterion_10_matrices():
    record(10, "matrix products vs naive", [checks.matrix_products()])


def test_criterion_11_speedup_report():
    ghz = harness.cpu_ghz()
    res = checks.CheckResult("speedup grid")
    start = time.perf_counter()
    best = {}
    for name in ("mod-sum", "mod-product", "fixed-product", "montgomery", "float"):
        table, rows = harness.run_table(name, reps=20, scalar_reps=2)
        res.cases += len(rows)
        if not rows or not all(math.isfinite(r.ns_median) and r.ns_median > 0 for r in rows):
            res.fail(f"{name}: empty or invalid timings")
        print(harness.format_table(table, rows, ghz), file=sys.stderr)
        ratios = [v for (strat, _), v in harness.speedups(table, rows).items() if not strat.startswith("scalar_")]
        if ratios:
            best[name] = f"{min(ratios):.0f}-{max(ratios):.0f}x"
    res.seconds = time.perf_counter() - start
    record(11, "speedup grid (informational)", [res], ", ".join(f"{k} {v}" for k, v in best.items()))
