"""Brute-force reference implementations sharing no code with the package.

Everything here is written for clarity over speed: polynomials are plain
lists, the field is enumerated, sums are evaluated in complex floating point.
"""

from __future__ import annotations

import cmath
import itertools
import math


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


def poly_mulmod(a, b, mod, p):
    """Product of little-endian coefficient lists modulo a monic ``mod``."""
    f = len(mod) - 1
    prod = [0] * (2 * f)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, f - 1, -1):
        c = prod[d]
        if c:
            for i in range(f + 1):
                prod[d - f + i] = (prod[d - f + i] - c * mod[i]) % p
    return tuple(prod[:f])


def poly_is_irreducible(mod, p) -> bool:
    """No root and no factor of degree <= f/2, by trial division over all monic divisors."""
    f = len(mod) - 1
    for d in range(1, f // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            div = list(low) + [1]
            rem = list(mod)
            for top in range(f, d - 1, -1):
                c = rem[top]
                if c:
                    for i in range(d + 1):
                        rem[top - d + i] = (rem[top - d + i] - c * div[i]) % p
            if not any(rem[:d]):
                return False
    return True


def smallest_irreducible(p: int, f: int):
    """Smallest monic irreducible, ordering the lower coefficients as a base-p number (c_0 least significant)."""
    for code in range(p**f):
        low = [(code // p**i) % p for i in range(f)]
        mod = low + [1]
        if poly_is_irreducible(mod, p):
            return tuple(mod)
    raise AssertionError


class OracleField:
    def __init__(self, p: int, f: int, modulus=None):
        self.p, self.f, self.q = p, f, p**f
        self.mod = tuple(modulus) if modulus is not None else smallest_irreducible(p, f)
        self.elements = [tuple((code // p**i) % p for i in range(f)) for code in range(self.q)]
        self.one = (1,) + (0,) * (f - 1)
        self.gamma = next(g for g in self.elements[2:] + self.elements[1:2] if self.order(g) == self.q - 1)
        self.powers = [self.one]
        for _ in range(self.q - 2):
            self.powers.append(self.mul(self.powers[-1], self.gamma))
        self.log = {x: i for i, x in enumerate(self.powers)}

    def encode(self, x) -> int:
        return sum(c * self.p**i for i, c in enumerate(x))

    def add(self, x, y):
        return tuple((a + b) % self.p for a, b in zip(x, y))

    def neg(self, x):
        return tuple((-a) % self.p for a in x)

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        return poly_mulmod(x, y, self.mod, self.p)

    def order(self, x) -> int:
        if not any(x):
            return 0
        y, n = x, 1
        while y != self.one:
            y, n = self.mul(y, x), n + 1
        return n

    def trace(self, x) -> int:
        acc, y = (0,) * self.f, x
        for _ in range(self.f):
            acc = self.add(acc, y)
            y = self.pow(y, self.p)
        assert not any(acc[1:])
        return acc[0]

    def pow(self, x, e):
        out = self.one
        for _ in range(e):
            out = self.mul(out, x)
        return out

    def cls(self, k: int, i: int):
        """Cyclotomic class gamma^i <gamma^k> as a set of tuples."""
        return {self.powers[t] for t in range(i % k, self.q - 1, k)}

    def union(self, k: int, indices):
        out = set()
        for i in indices:
            out |= self.cls(k, i)
        return out


def gauss_sum(F: OracleField, k: int, j: int) -> complex:
    """sum_{x != 0} chi(x) zeta_p^{Tr x} with chi(gamma) = zeta_k^j."""
    total = 0j
    for t, x in enumerate(F.powers):
        total += cmath.exp(2j * math.pi * (j * t / k + F.trace(x) / F.p))
    return total


def psi_set(F: OracleField, a, D) -> complex:
    return sum(cmath.exp(2j * math.pi * F.trace(F.mul(a, d)) / F.p) for d in D)


def spectrum(F: OracleField, D) -> dict:
    """Rounded character value -> multiplicity over nonzero a."""
    out = {}
    for a in F.elements[1:]:
        v = psi_set(F, a, D)
        key = (round(v.real, 6), round(v.imag, 6))
        out[key] = out.get(key, 0) + 1
    return out


def difference_counts(F: OracleField, D) -> dict:
    """Nonzero g -> number of ordered pairs (x, y) in D with x - y = g."""
    out = {g: 0 for g in F.elements[1:]}
    for x in D:
        for y in D:
            if x != y:
                out[F.sub(x, y)] += 1
    return out


def cyclic_difference_counts(L, v: int) -> list:
    out = [0] * v
    for a in L:
        for b in L:
            if a != b:
                out[(a - b) % v] += 1
    return out


def multiplicative_order(a: int, n: int) -> int:
    x, e = a % n, 1
    while x != 1:
        x, e = (x * a) % n, e + 1
    return e


def cyclotomic_value(n: int, coeffs) -> complex:
    """sum_e c_e zeta_n^e."""
    return sum(c * cmath.exp(2j * math.pi * e / n) for e, c in enumerate(coeffs))


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1
