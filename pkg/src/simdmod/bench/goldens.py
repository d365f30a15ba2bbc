"""Golden-vector files: one kernel evaluation per line.

Line format::

    <op> <p-hex> <m> <x-hex> <y-hex> -> <z-hex>

``m`` is decimal, the other fields are hex zero-padded to ``n/4`` digits where
``n`` is the smallest word size the op accepts for an ``m``-bit modulus.
Blank lines and everything after ``#`` are ignored.  ``mont_mul`` uses the
shift ``n``, so it returns ``x y 2^-n mod p``; ``neg_mod`` ignores ``y``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from simdmod import modcore
from simdmod.errors import ModArithError

OPS = ("add_mod", "sub_mod", "neg_mod", "mul_mod", "mul_mod_fixed", "mul_mod_half", "mont_mul", "mul_mod_fma")

MAX_REPORTED = 10


class GoldenParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class Golden:
    op: str
    p: int
    m: int
    x: int
    y: int
    z: int
    lineno: int = 0


def word_size(op: str, m: int) -> int:
    for n in modcore.WORD_SIZES:
        if op == "mul_mod_half" and m > (n - 1) // 2:
            continue
        if m <= n:
            return n
    raise ModArithError(f"no word size for {op} with m={m}")


def evaluate(op: str, p: int, m: int, x: int, y: int) -> int:
    """The library's answer for one golden case."""
    n = word_size(op, m)
    if op == "mul_mod_fma":
        fc = modcore.make_float_ctx(p, "binary64")
        return int(modcore.mul_mod_fma(float(x), float(y), fc))
    if op == "mont_mul":
        return modcore.mont_mul(x, y, modcore.make_montgomery(p, n, n))
    if op == "mul_mod_half":
        return modcore.mul_mod_half(x, y, modcore.make_barrett_half(p, n))
    profile = modcore.profile_for(m, n)
    if p == 2 and profile is modcore.Profile.MINUS2:
        profile = modcore.Profile.MINUS1  # the only modulus MINUS2 cannot hold
        m = min(m, n - 1)
    ctx = modcore.make_barrett(p, n, profile, m)
    if op == "add_mod":
        return modcore.add_mod(x, y, ctx)
    if op == "sub_mod":
        return modcore.sub_mod(x, y, ctx)
    if op == "neg_mod":
        return modcore.neg_mod(x, ctx)
    if op == "mul_mod":
        return modcore.mul_mod(x, y, ctx)
    if op == "mul_mod_fixed":
        return modcore.mul_mod_fixed(x, modcore.make_fixed(y, ctx), ctx)
    raise ModArithError(f"unknown op {op!r}")


def format_line(g: Golden) -> str:
    w = word_size(g.op, g.m) // 4
    return f"{g.op} {g.p:0{w}x} {g.m} {g.x:0{w}x} {g.y:0{w}x} -> {g.z:0{w}x}"


def parse_line(line: str, lineno: int) -> Golden | None:
    text = line.split("#", 1)[0].strip()
    if not text:
        return None
    parts = text.split()
    if len(parts) != 7 or parts[5] != "->":
        raise GoldenParseError(lineno, f"expected '<op> <p> <m> <x> <y> -> <z>', got {text!r}")
    op = parts[0]
    if op not in OPS:
        raise GoldenParseError(lineno, f"unknown op {op!r}")
    try:
        p, x, y, z = (int(parts[i], 16) for i in (1, 3, 4, 6))
        m = int(parts[2], 10)
    except ValueError as exc:
        raise GoldenParseError(lineno, f"bad number: {exc}") from None
    if p < 2 or p.bit_length() > m:
        raise GoldenParseError(lineno, f"modulus {p:#x} does not have at most m={m} bits")
    if not (x < p and y < p):
        raise GoldenParseError(lineno, "operands must be residues below p")
    return Golden(op, p, m, x, y, z, lineno)


def parse(text: str) -> list[Golden]:
    out = []
    for i, line in enumerate(text.splitlines(), 1):
        g = parse_line(line, i)
        if g is not None:
            out.append(g)
    return out


def _random_modulus(rng: random.Random, op: str, m: int) -> int:
    p = rng.randrange(max(2, 1 << (m - 1)), 1 << m)
    if op == "mont_mul":
        p |= 1
        p = max(p, 3)
    return p


def generate(seed: int = 2014, per_op: int = 40) -> list[Golden]:
    """Deterministic cases: worked examples, extreme residues and random draws per op."""
    rng = random.Random(seed)
    cases = [
        Golden("mul_mod", 7, 3, 5, 3, 1),
        Golden("add_mod", 7, 3, 0, 0, 0),
        Golden("mont_mul", 7, 3, 5, 2, 6),
    ]
    ms = {
        "mul_mod_half": (2, 3, 7, 15, 31),
        "mul_mod_fma": (2, 11, 21, 26, 50),
        "mont_mul": (2, 3, 8, 15, 16, 31, 32, 63, 64),
    }
    default_ms = (2, 3, 6, 7, 8, 14, 15, 16, 30, 31, 32, 62, 63, 64)
    for op in OPS:
        for i in range(per_op):
            m = ms.get(op, default_ms)[i % len(ms.get(op, default_ms))]
            p = _random_modulus(rng, op, m)
            if i % 5 == 0:
                x, y = p - 1, p - 1
            elif i % 5 == 1:
                x, y = 0, p - 1
            else:
                x, y = rng.randrange(p), rng.randrange(p)
            if op == "neg_mod":
                y = 0
            cases.append(Golden(op, p, m, x, y, evaluate(op, p, m, x, y)))
    return cases


def dump(path) -> int:
    cases = generate()
    lines = ["# simdmod golden vectors", "# <op> <p-hex> <m> <x-hex> <y-hex> -> <z-hex>"]
    lines += [format_line(g) for g in cases]
    Path(path).write_text("\n".join(lines) + "\n")
    return len(cases)


@dataclass
class VerifyReport:
    checked: int
    mismatches: list[str]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def verify_text(text: str) -> VerifyReport:
    """Recompute every case; mismatches (at most ten reported) name the line."""
    cases = parse(text)
    bad = []
    for g in cases:
        try:
            z = evaluate(g.op, g.p, g.m, g.x, g.y)
        except (ModArithError, AssertionError) as exc:
            z = f"error: {exc}"
        if z != g.z:
            bad.append(f"line {g.lineno}: {g.op} p={g.p:#x} m={g.m} x={g.x:#x} y={g.y:#x}: expected {g.z:#x}, got {z if isinstance(z, str) else hex(z)}")
    return VerifyReport(len(cases), bad)


def verify(path) -> VerifyReport:
    return verify_text(Path(path).read_text())
