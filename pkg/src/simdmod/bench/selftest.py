"""Differential self-tests grouped by module, scaled to a time budget."""

from __future__ import annotations

import time

from simdmod.bench import checks

SCOPES = ("modcore", "modsimd", "ntt", "polymul", "bigmul", "all")


def _suites(scale: float, mutate: str | None):
    """``(scope, thunk)`` pairs; ``scale`` multiplies the random sample counts."""
    n = lambda base: max(1000, int(base * scale))  # noqa: E731

    def sweep():
        # integer kernels exhaustively over every p < 2^8; the slower float kernels
        # over every modulus only when the budget allows, otherwise over a sample
        moduli = range(2, 64) if mutate else range(2, 256)
        scalar, _ = checks.sweep_8bit(moduli, mutate=mutate, lanes=False, floats=False)
        float_moduli = range(2, 256) if scale >= 0.5 else list(range(2, 32)) + list(range(241, 256))
        fl, _ = checks.sweep_8bit(float_moduli, lanes=False, ints=False)
        fl.name = "exhaustive 8-bit float kernels vs oracle"
        fl.note = f"{len(float_moduli)} moduli"
        return [scalar, fl]

    def lane_sweep():
        _, lane = checks.sweep_8bit(range(2, 256), floats=scale >= 0.5)
        return [lane]

    yield "modcore", sweep
    yield "modcore", lambda: [checks.correction_bound(n(10**5), mutate=mutate)]
    yield "modcore", lambda: [checks.montgomery_properties(n(10**5))]
    yield "modsimd", lane_sweep
    yield "modsimd", lambda: [checks.random_word_sweep(w, n(10**5), mutate=mutate) for w in (16, 32, 64)]
    yield "modsimd", lambda: [checks.float_sweep(f, n(10**5)) for f in ("binary64", "binary32")]
    yield "modsimd", lambda: [checks.lane_homomorphism(n(10**4)), checks.bias_compare(n(10**5))]
    yield "ntt", lambda: [checks.ntt_oracle(), checks.ntt_roundtrip(), checks.ntt_blocked(), checks.ntt_op_count(), checks.ntt_linearity()]
    yield "polymul", lambda: [checks.poly_random(n(100)), checks.poly_exhaustive()]
    yield "bigmul", lambda: [checks.int_boundaries(), checks.int_products([32 << k for k in range(8, 13)])]
    yield "bigmul", lambda: [checks.matrix_products()]


def run(scope: str = "all", budget: float = 600.0, mutate: str | None = None, report=print) -> list[checks.CheckResult]:
    """Run every suite in ``scope``; sample counts shrink for small budgets.

    Suites still pending when the budget runs out are reported as skipped.
    A suite raising an exception counts as a failure with the exception as its counterexample.
    """
    if scope not in SCOPES:
        raise ValueError(f"unknown scope {scope!r}")
    scale = min(1.0, max(0.01, budget / 600.0))
    t0 = time.perf_counter()
    results = []
    for s, thunk in _suites(scale, mutate):
        if scope != "all" and s != scope:
            continue
        if time.perf_counter() - t0 > budget:
            report(f"SKIP {s}: budget of {budget:.0f}s exhausted")
            continue
        try:
            batch = thunk()
        except Exception as exc:  # a crash is a counterexample too
            r = checks.CheckResult(f"{s} suite")
            r.cases = 1
            r.fail(f"{type(exc).__name__}: {exc}")
            batch = [r]
        for r in batch:
            report(r.summary())
            for ex in r.examples:
                report(f"    counterexample: {ex}")
        results += batch
    return results
