"""Exact arithmetic in the cyclotomic integers Z[zeta_n].

A :class:`CycInt` stores coordinates in the *powerful basis* of Z[zeta_n].
Write n = n_1 * ... * n_r with n_i prime powers in increasing order and let
omega_i be the primitive n_i-th root of unity zeta_n^{c_i}, where c_i is the
CRT idempotent (c_i = 1 mod n_i, 0 mod n/n_i).  The basis is

    omega_1^{j_1} * ... * omega_r^{j_r},    0 <= j_i < phi(n_i),

flattened in C order (j_1 slowest).  Equivalently basis element j is
zeta_n^{E(j)} with E(j) = j_i mod n_i.  This is an integral basis, so
equality is coefficient-wise and p-divisibility of an element is
p-divisibility of every coordinate.  When n is a prime power it is the plain
power basis 1, zeta_n, ..., zeta_n^{phi(n)-1}.

Reduction from the group ring Z[x]/(x^n - 1) folds one tensor axis at a
time with the sparse relation Phi_{P^a}(x) = sum_{i<P} x^{i P^(a-1)}, so it
costs O(n) regardless of how large phi(n) is.

Coefficients are int64 while a growth bound proves it safe and Python ints
(object arrays) otherwise.  Products go through Kronecker substitution on
big integers, which is exact at any size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np
from sympy import factorint

from .errors import BadConductorSplit, ConductorMismatch, NotCoprime, ZeroElement

try:
    import gmpy2

    _big = gmpy2.mpz
except ImportError:  # pragma: no cover
    _big = int

_SAFE = 2**62


# -- cyclotomic polynomials -------------------------------------------------------


@dataclass(frozen=True)
class CycloPoly:
    n: int
    coeffs: tuple  # ascending, monic

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


def _poly_divexact(num: list, den: list) -> list:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> CycloPoly:
    """Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d, memoised."""
    if n < 1:
        raise ValueError("n must be >= 1")
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _poly_divexact(num, list(cyclotomic_poly(d).coeffs))
    return CycloPoly(n, tuple(num))


# -- layout of the powerful basis --------------------------------------------------


def euler_phi(n: int) -> int:
    out = n
    for P in factorint(n):
        out -= out // P
    return out


@dataclass(frozen=True)
class _Layout:
    n: int
    parts: tuple  # ((P, a, P**a), ...)
    full_shape: tuple
    red_shape: tuple
    full_pos: np.ndarray  # exponent e -> flat index in the full tensor
    basis_exp: np.ndarray  # canonical index j -> exponent E(j)

    @property
    def phi(self) -> int:
        return int(np.prod(self.red_shape, dtype=np.int64))


@lru_cache(maxsize=128)
def _layout(n: int) -> _Layout:
    parts = tuple((P, a, P**a) for P, a in sorted(factorint(n).items()))
    full_shape = tuple(m for _, _, m in parts) or (1,)
    red_shape = tuple(m - m // P for P, _, m in parts) or (1,)
    e = np.arange(n, dtype=np.int64)
    pos = np.zeros(n, dtype=np.int64)
    for _, _, m in parts:
        pos = pos * m + e % m
    idem = [(n // m) * pow(n // m, -1, m) % n for _, _, m in parts]
    grids = np.indices(red_shape).reshape(len(red_shape), -1).astype(np.int64)
    if parts:
        E = sum(g * c for g, c in zip(grids, idem)) % n
    else:
        E = np.zeros(1, dtype=np.int64)
    for arr in (pos, E):
        arr.flags.writeable = False
    return _Layout(n, parts, full_shape, red_shape, pos, E)


def _maxabs(v: np.ndarray) -> int:
    if v.size == 0:
        return 0
    if v.dtype == object:
        return max(abs(int(x)) for x in v)
    return int(np.max(np.abs(v)))


def _normalize(v: np.ndarray) -> np.ndarray:
    """Downcast to int64 when every entry fits comfortably."""
    if v.dtype == object and _maxabs(v) < _SAFE:
        return v.astype(np.int64)
    return v


def _reduce_full(t: np.ndarray, lay: _Layout) -> np.ndarray:
    if t.dtype != object and _maxabs(t) * (2 ** len(lay.parts)) >= _SAFE:
        t = t.astype(object)
    t = t.reshape(lay.full_shape)
    for axis, (P, _, m) in enumerate(lay.parts):
        block = m // P
        phi = m - block
        top = np.take(t, np.arange(phi, m), axis=axis)
        low = np.take(t, np.arange(phi), axis=axis)
        reps = [1] * t.ndim
        reps[axis] = P - 1
        t = low - np.tile(top, reps)
    return _normalize(np.ascontiguousarray(t).reshape(-1))


# -- exact convolution ----------------------------------------------------------------


@lru_cache(maxsize=64)
def _offset(L: int, W: int) -> int:
    nb = W // 8
    return int.from_bytes(((1 << (W - 1)).to_bytes(nb, "little")) * L, "little")


def _pack(v: np.ndarray, W: int) -> int:
    nb = W // 8
    if v.dtype != object and W in (32, 64):
        ut = np.uint32 if W == 32 else np.uint64
        pos = np.where(v > 0, v, 0).astype(ut)
        neg = np.where(v < 0, -v, 0).astype(ut)
        return int.from_bytes(pos.tobytes(), "little") - int.from_bytes(neg.tobytes(), "little")
    vals = [int(x) for x in v]
    pos = b"".join((x if x > 0 else 0).to_bytes(nb, "little") for x in vals)
    neg = b"".join((-x if x < 0 else 0).to_bytes(nb, "little") for x in vals)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _unpack(P: int, L: int, W: int) -> np.ndarray:
    nb = W // 8
    raw = (P + _offset(L, W)).to_bytes(L * nb, "little")
    if W == 64:
        u = np.frombuffer(raw, dtype=np.uint64)
        return (u ^ np.uint64(1 << 63)).view(np.int64)
    if W == 32:
        return np.frombuffer(raw, dtype=np.uint32).astype(np.int64) - (1 << 31)
    half = 1 << (W - 1)
    out = np.empty(L, dtype=object)
    for i in range(L):
        out[i] = int.from_bytes(raw[i * nb : (i + 1) * nb], "little") - half
    return out


def linear_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact linear convolution of two integer vectors."""
    L = len(a) + len(b) - 1
    bound = _maxabs(a) * _maxabs(b) * min(len(a), len(b))
    if bound == 0:
        return np.zeros(L, dtype=np.int64)
    if min(len(a), len(b)) <= 32:
        if bound < _SAFE and a.dtype != object and b.dtype != object:
            return np.convolve(a, b)
        out = np.zeros(L, dtype=object)
        for i, x in enumerate(a):
            if x:
                out[i : i + len(b)] += int(x) * b.astype(object)
        return _normalize(out)
    if bound < 2**31:
        W = 32
    elif bound < 2**63:
        W = 64
    else:
        W = 64 * ((bound.bit_length() + 2) // 64 + 1)
    prod = _big(_pack(a, W)) * _big(_pack(b, W))
    return _unpack(int(prod), L, W)


def cyclic_convolve(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    c = linear_convolve(a, b)
    out = c[:n].copy()
    tail = c[n:]
    if out.dtype != tail.dtype:
        out, tail = out.astype(object), tail.astype(object)
    out[: len(tail)] += tail
    return _normalize(out)


# -- the element type -------------------------------------------------------------------


def _as_coeffs(values) -> np.ndarray:
    arr = np.asarray(values)
    if arr.dtype == object or arr.dtype.kind not in "iub":
        arr = np.array([int(x) for x in np.ravel(arr)], dtype=object)
    else:
        arr = arr.astype(np.int64)
    return _normalize(arr)


class CycInt:
    """Immutable element of Z[zeta_n] in the powerful basis."""

    __slots__ = ("n", "coeffs")
    __hash__ = None  # equality lifts across conductors; use key() for grouping

    def __init__(self, n: int, coeffs):
        n = int(n)
        if n < 1:
            raise ValueError("conductor must be >= 1")
        arr = _as_coeffs(coeffs)
        if len(arr) != _layout(n).phi:
            raise ValueError(f"expected {_layout(n).phi} coefficients for n={n}, got {len(arr)}")
        arr.flags.writeable = False
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("CycInt is immutable")

    # constructors
    @classmethod
    def from_int(cls, n: int, c: int) -> CycInt:
        v = np.zeros(_layout(n).phi, dtype=object if abs(c) >= _SAFE else np.int64)
        v[0] = c
        return cls(n, v)

    @classmethod
    def zero(cls, n: int) -> CycInt:
        return cls.from_int(n, 0)

    @classmethod
    def one(cls, n: int) -> CycInt:
        return cls.from_int(n, 1)

    @classmethod
    def from_cyclic(cls, n: int, v) -> CycInt:
        """Reduce sum_e v[e] zeta_n^e (v of length n)."""
        lay = _layout(n)
        v = _as_coeffs(v)
        if len(v) != n:
            raise ValueError(f"cyclic vector must have length {n}")
        t = np.empty(n, dtype=v.dtype)
        t[lay.full_pos] = v
        return cls(n, _reduce_full(t, lay))

    @classmethod
    def from_exponents(cls, n: int, terms) -> CycInt:
        """sum c * zeta_n^e over (e, c) pairs or a mapping e -> c."""
        items = terms.items() if hasattr(terms, "items") else terms
        v = np.zeros(n, dtype=object)
        for e, c in items:
            v[int(e) % n] += int(c)
        return cls.from_cyclic(n, v)

    @classmethod
    def zeta(cls, n: int, e: int = 1) -> CycInt:
        return cls.from_exponents(n, {e: 1})

    # views
    @property
    def phi(self) -> int:
        return len(self.coeffs)

    def to_cyclic(self) -> np.ndarray:
        v = np.zeros(self.n, dtype=self.coeffs.dtype)
        v[_layout(self.n).basis_exp] = self.coeffs
        return v

    def key(self) -> tuple:
        return (self.n, tuple(int(c) for c in self.coeffs))

    def is_zero(self) -> bool:
        return not np.any(self.coeffs != 0)

    def is_rational(self) -> bool:
        return not np.any(self.coeffs[1:] != 0)

    def rational(self) -> int:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return int(self.coeffs[0])

    def __repr__(self):
        if self.is_rational():
            return f"CycInt({self.n}, {int(self.coeffs[0])})"
        return f"CycInt({self.n}, {[int(c) for c in self.coeffs]})"

    # ring operations
    def _check(self, other) -> CycInt:
        if isinstance(other, (int, np.integer)):
            return CycInt.from_int(self.n, int(other))
        if not isinstance(other, CycInt):
            return NotImplemented
        if other.n != self.n:
            raise ConductorMismatch(f"conductors {self.n} and {other.n} differ")
        return other

    def _combine(self, other, sign: int) -> CycInt:
        other = self._check(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if a.dtype == object or b.dtype == object or _maxabs(a) + _maxabs(b) >= _SAFE:
            a, b = a.astype(object), b.astype(object)
        return CycInt(self.n, a + b if sign > 0 else a - b)

    def __add__(self, other):
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, -1)

    def __rsub__(self, other):
        return (-self)._combine(other, 1)

    def __neg__(self):
        return CycInt(self.n, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            c = int(other)
            a = self.coeffs
            if a.dtype == object or _maxabs(a) * abs(c) >= _SAFE:
                a = a.astype(object)
            return CycInt(self.n, a * c)
        other = self._check(other)
        if other is NotImplemented:
            return other
        if self.is_rational():
            return other * int(self.coeffs[0])
        if other.is_rational():
            return self * int(other.coeffs[0])
        prod = cyclic_convolve(self.to_cyclic(), other.to_cyclic(), self.n)
        return CycInt.from_cyclic(self.n, prod)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not defined in Z[zeta_n]")
        result, base = CycInt.one(self.n), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.is_rational() and int(self.coeffs[0]) == int(other)
        if not isinstance(other, CycInt):
            return NotImplemented
        if other.n != self.n:
            m = math.lcm(self.n, other.n)
            return self.lift(m) == other.lift(m)
        return bool(np.all(self.coeffs == other.coeffs))

    # automorphisms and embeddings
    def lift(self, m: int) -> CycInt:
        """The same number written over conductor m (n must divide m)."""
        if m % self.n:
            raise ConductorMismatch(f"{self.n} does not divide {m}")
        if m == self.n:
            return self
        v = np.zeros(m, dtype=self.coeffs.dtype)
        v[_layout(self.n).basis_exp * (m // self.n)] = self.coeffs
        return CycInt.from_cyclic(m, v)

    def galois_u(self, u: int) -> CycInt:
        """The automorphism zeta_n -> zeta_n^u, gcd(u, n) = 1."""
        if math.gcd(u, self.n) != 1:
            raise NotCoprime(f"gcd({u}, {self.n}) != 1")
        v = np.zeros(self.n, dtype=self.coeffs.dtype)
        v[(_layout(self.n).basis_exp * u) % self.n] = self.coeffs
        return CycInt.from_cyclic(self.n, v)

    def mul_root(self, e: int) -> CycInt:
        """Multiply by zeta_n^e (a coordinate permutation, no convolution)."""
        v = np.zeros(self.n, dtype=self.coeffs.dtype)
        v[(_layout(self.n).basis_exp + e) % self.n] = self.coeffs
        return CycInt.from_cyclic(self.n, v)

    def conj(self) -> CycInt:
        return self.galois_u(-1)

    def abs_square(self) -> CycInt:
        return self * self.conj()

    def p_valuation(self, p: int) -> int:
        if self.is_zero():
            raise ZeroElement("valuation of zero is infinite")
        best = None
        for c in self.coeffs:
            c = int(c)
            if c == 0:
                continue
            t = 0
            while c % p == 0:
                c //= p
                t += 1
            best = t if best is None else min(best, t)
            if best == 0:
                break
        return best

    def embed(self) -> complex:
        """Value at zeta_n = exp(2 pi i / n) in double precision.

        Error is at most phi(n) * max|coeff| * 2^-50.
        """
        E = _layout(self.n).basis_exp
        w = np.exp(2j * np.pi * E / self.n)
        return complex(np.dot(self.coeffs.astype(np.float64), w))

    def to_json(self) -> dict:
        return {"n": self.n, "coeffs": [int(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, d: dict) -> CycInt:
        return cls(d["n"], d["coeffs"])


# -- functional interface ---------------------------------------------------------


def cyc_add(a: CycInt, b: CycInt) -> CycInt:
    return a + b


def cyc_sub(a: CycInt, b: CycInt) -> CycInt:
    return a - b


def cyc_neg(a: CycInt) -> CycInt:
    return -a


def cyc_mul(a: CycInt, b: CycInt) -> CycInt:
    return a * b


def crt(residues, moduli) -> int:
    x, m = 0, 1
    for r, mi in zip(residues, moduli):
        t = ((r - x) * pow(m, -1, mi)) % mi if mi > 1 else 0
        x += m * t
        m *= mi
    return x % m


def galois(a: CycInt, s: int, t: int, k: int, p: int) -> CycInt:
    """sigma_{s,t}: zeta_k -> zeta_k^s, zeta_{p'} -> zeta_{p'}^t, where p' is the
    p-part of the conductor and k * p' must equal it."""
    n = a.n
    pp = 1
    while n % (pp * p) == 0:
        pp *= p
    if k * pp != n or math.gcd(k, pp) != 1:
        raise BadConductorSplit(f"conductor {n} is not {k} * (p-part {pp})")
    if math.gcd(s, k) != 1 or math.gcd(t, pp) != 1:
        raise NotCoprime(f"need gcd(s, {k}) = gcd(t, {pp}) = 1")
    return a.galois_u(crt([s % k, t % pp], [k, pp]))


def p_valuation(a: CycInt, p: int) -> int:
    return a.p_valuation(p)


def embed(a: CycInt) -> complex:
    return a.embed()


def abs_square(a: CycInt) -> CycInt:
    return a.abs_square()


def common_conductor(*xs: CycInt) -> list:
    m = reduce(math.lcm, (x.n for x in xs), 1)
    return [x.lift(m) for x in xs]
