"""Reference computations used by the tests, written without any simdmod code."""

from fractions import Fraction


def mod_add(x, y, p):
    return (x + y) % p


def mod_mul(x, y, p):
    return x * y % p


def mont_mul(x, y, p, m):
    return x * y * pow(2, -m, p) % p


def ext_gcd_cofactors(p, m):
    """(rho, chi) with rho 2^m - chi p = 1, 0 < rho < p."""
    rho = pow(2, -m, p)
    chi = (rho * (1 << m) - 1) // p
    return rho, chi


def below_by_rational(u: float, p: int) -> bool:
    return Fraction(u) * p < 1


def dft(a, omega, p):
    """Natural-order evaluations of sum a_i X^i at omega^j, by Horner."""
    n = len(a)
    out = []
    for j in range(n):
        x = pow(omega, j, p)
        acc = 0
        for c in reversed(a):
            acc = (acc * x + c) % p
        out.append(acc)
    return out


def mirror(i, k):
    return int(format(i, f"0{k}b")[::-1], 2) if k else 0


def poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return [c % p for c in out]


def limb_mul(x: int, y: int, base_bits: int = 32) -> int:
    """Textbook limb-by-limb product with explicit carries."""
    mask = (1 << base_bits) - 1
    xs, ys = [], []
    while x:
        xs.append(x & mask)
        x >>= base_bits
    while y:
        ys.append(y & mask)
        y >>= base_bits
    res = [0] * (len(xs) + len(ys) + 1)
    for i, a in enumerate(xs):
        carry = 0
        for j, b in enumerate(ys):
            t = res[i + j] + a * b + carry
            res[i + j] = t & mask
            carry = t >> base_bits
        k = i + len(ys)
        while carry:
            t = res[k] + carry
            res[k] = t & mask
            carry = t >> base_bits
            k += 1
    out = 0
    for limb in reversed(res):
        out = (out << base_bits) | limb
    return out
