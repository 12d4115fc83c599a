"""Prime-power finite fields with a fixed modulus and primitive root.

Elements of F_q, q = p^f, are coefficient tuples ``(c_0, ..., c_{f-1})`` in
the root ``alpha`` of the modulus.  Vectorised code works on the integer
encoding ``c_0 + c_1 p + ... + c_{f-1} p^{f-1}``, so an element is also an
index into any length-q table.

Field construction is deterministic: the modulus is the first monic
irreducible polynomial in big-endian lexicographic order of its lower
coefficients, and gamma is the primitive element with the smallest encoding.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np
from sympy import factorint, isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p

from .errors import (
    FieldTooLarge,
    ModulusDoesNotDivideGroupOrder,
    NonPrimeCharacteristic,
    ReducibleModulus,
    ZeroToNegativePower,
)

# Fields with more elements than this are only reachable through streaming.
TABLE_CEILING = 2**27
# Hard upper bound on q for anything that enumerates the field.
ENUM_CEILING = 10**8

CHUNK = 1 << 16


def _int_dtype(bound: int):
    for dt in (np.int8, np.int16, np.int32):
        if bound <= np.iinfo(dt).max:
            return dt
    return np.int64


@dataclass(frozen=True)
class Field:
    p: int
    f: int
    modulus: tuple
    gamma: tuple

    @property
    def q(self) -> int:
        return self.p**self.f

    def __repr__(self):
        return f"Field(p={self.p}, f={self.f}, modulus={list(self.modulus)}, gamma={list(self.gamma)})"

    # -- scalar arithmetic on coefficient tuples ------------------------------

    def element(self, x) -> tuple:
        """Coerce an int (prime-field scalar), encoding-free tuple or list."""
        if isinstance(x, (int, np.integer)):
            return (int(x) % self.p,) + (0,) * (self.f - 1)
        x = tuple(int(c) % self.p for c in x)
        if len(x) != self.f:
            raise ValueError(f"expected {self.f} coefficients, got {len(x)}")
        return x

    def encode(self, x) -> int:
        x = self.element(x) if not isinstance(x, tuple) else x
        e = 0
        for c in reversed(x):
            e = e * self.p + c
        return e

    def decode(self, e: int) -> tuple:
        out = []
        for _ in range(self.f):
            e, c = divmod(int(e), self.p)
            out.append(c)
        return tuple(out)

    @property
    def zero(self) -> tuple:
        return (0,) * self.f

    @property
    def one(self) -> tuple:
        return self.element(1)

    def add(self, x, y) -> tuple:
        return tuple((a + b) % self.p for a, b in zip(x, y))

    def sub(self, x, y) -> tuple:
        return tuple((a - b) % self.p for a, b in zip(x, y))

    def neg(self, x) -> tuple:
        return tuple(-a % self.p for a in x)

    def mul(self, x, y) -> tuple:
        p, f, mod = self.p, self.f, self.modulus
        prod = [0] * (2 * f - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    prod[i + j] += a * b
        for d in range(2 * f - 2, f - 1, -1):
            c = prod[d] % p
            if c:
                for i in range(f):
                    prod[d - f + i] -= c * mod[i]
        return tuple(c % p for c in prod[:f])

    def pow(self, x, e: int) -> tuple:
        x = self.element(x)
        if e < 0:
            if not any(x):
                raise ZeroToNegativePower("zero has no inverse")
            e %= self.q - 1
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, x)
            x = self.mul(x, x)
            e >>= 1
        return result

    def inv(self, x) -> tuple:
        return self.pow(x, -1)

    def trace(self, x) -> int:
        """Tr(x) = x + x^p + ... + x^(p^(f-1)), returned as a residue mod p."""
        x = self.element(x)
        acc, y = self.zero, x
        for _ in range(self.f):
            acc = self.add(acc, y)
            y = self.pow(y, self.p)
        if any(acc[1:]):
            raise AssertionError("trace left the prime field")
        return acc[0]

    def descriptor(self) -> dict:
        return {"p": self.p, "f": self.f, "modulus": list(self.modulus), "gamma": list(self.gamma)}

    # -- linear-algebra views ---------------------------------------------------

    def mult_matrix(self, y) -> np.ndarray:
        """Matrix M with coords(y*x) = M @ coords(x)."""
        y = self.element(y)
        cols = []
        for i in range(self.f):
            basis = tuple(1 if j == i else 0 for j in range(self.f))
            cols.append(self.mul(y, basis))
        return np.array(cols, dtype=np.int64).T

    @cached_property
    def basis_traces(self) -> np.ndarray:
        return np.array(
            [self.trace(tuple(1 if j == i else 0 for j in range(self.f))) for i in range(self.f)],
            dtype=np.int64,
        )

    @cached_property
    def trace_form(self) -> np.ndarray:
        """Symmetric matrix B with Tr(x*y) = coords(x) @ B @ coords(y) mod p."""
        f = self.f
        B = np.zeros((f, f), dtype=np.int64)
        for i in range(f):
            for j in range(f):
                a = tuple(1 if t == i else 0 for t in range(f))
                b = tuple(1 if t == j else 0 for t in range(f))
                B[i, j] = self.trace(self.mul(a, b))
        return B

    @cached_property
    def place_values(self) -> np.ndarray:
        return np.array([self.p**i for i in range(self.f)], dtype=np.int64)

    def encode_coords(self, coords: np.ndarray) -> np.ndarray:
        return np.asarray(coords, dtype=np.int64) @ self.place_values

    def decode_many(self, enc) -> np.ndarray:
        enc = np.asarray(enc, dtype=np.int64)
        return (enc[..., None] // self.place_values) % self.p

    def add_enc(self, a, b) -> np.ndarray:
        return self.encode_coords((self.decode_many(a) + self.decode_many(b)) % self.p)

    def sub_enc(self, a, b) -> np.ndarray:
        return self.encode_coords((self.decode_many(a) - self.decode_many(b)) % self.p)

    def neg_enc(self, a) -> np.ndarray:
        return self.encode_coords((-self.decode_many(a)) % self.p)

    def trace_enc(self, enc) -> np.ndarray:
        return (self.decode_many(enc) @ self.basis_traces) % self.p

    # -- multiplicative sweep -----------------------------------------------------

    def _matmul_mod(self, block: np.ndarray, M: np.ndarray) -> np.ndarray:
        # float64 products are exact while f*p^2 stays below 2^52
        if self.f * self.p * self.p < 2**52:
            out = block.astype(np.float64) @ M.T.astype(np.float64)
            return np.mod(out, self.p).astype(np.int64)
        return (block.astype(np.int64) @ M.T) % self.p

    def iter_powers(self, start: int = 0, stop: int | None = None, chunk: int = CHUNK) -> Iterator:
        """Yield ``(j0, coords)`` with coords[i] = coordinates of gamma^(j0+i).

        Streams the exponent range [start, stop) in blocks, so memory stays
        O(chunk * f) whatever q is.  A consumer handling a sub-range can start
        anywhere: the first block is re-derived from gamma^start.
        """
        if stop is None:
            stop = self.q - 1
        chunk = max(1, min(chunk, stop - start if stop > start else 1))
        base = np.zeros((1, self.f), dtype=np.int64)
        base[0, 0] = 1
        while len(base) < chunk:
            step = self.mult_matrix(self.pow(self.gamma, len(base)))
            base = np.vstack([base, self._matmul_mod(base, step)])
        base = base[:chunk]
        current = self._matmul_mod(base, self.mult_matrix(self.pow(self.gamma, start)))
        jump = self.mult_matrix(self.pow(self.gamma, chunk))
        j0 = start
        while j0 < stop:
            n = min(chunk, stop - j0)
            yield j0, current[:n]
            j0 += chunk
            if j0 < stop:
                current = self._matmul_mod(current, jump)

    def _require_table(self):
        if self.q > TABLE_CEILING:
            raise FieldTooLarge(
                f"q={self.q} exceeds the element-table ceiling {TABLE_CEILING}; use the streaming path"
            )

    @cached_property
    def power_coords(self) -> np.ndarray:
        """Coordinates of gamma^j for j = 0..q-2, shape (q-1, f)."""
        self._require_table()
        out = np.empty((self.q - 1, self.f), dtype=_int_dtype(self.p))
        for j0, block in self.iter_powers():
            out[j0 : j0 + len(block)] = block
        return out

    @cached_property
    def powers(self) -> np.ndarray:
        """Encoding of gamma^j for j = 0..q-2."""
        return self.encode_coords(self.power_coords)

    @cached_property
    def logs(self) -> np.ndarray:
        """logs[enc(x)] = log_gamma(x); logs[0] = -1."""
        out = np.empty(self.q, dtype=_int_dtype(self.q))
        out[0] = -1
        out[self.powers] = np.arange(self.q - 1)
        return out

    @cached_property
    def traces_by_exp(self) -> np.ndarray:
        """traces_by_exp[j] = Tr(gamma^j)."""
        return (self.power_coords.astype(np.int64) @ self.basis_traces) % self.p

    def dlog(self, x) -> int:
        enc = self.encode(self.element(x))
        if enc == 0:
            raise ValueError("zero has no discrete logarithm")
        return int(self.logs[enc])


# -- construction -----------------------------------------------------------------


def _lex_monic(p: int, f: int) -> Iterator[tuple]:
    # big-endian lexicographic order of (c_{f-1}, ..., c_0) == increasing integer code
    for code in range(p**f):
        low = []
        for _ in range(f):
            code, c = divmod(code, p)
            low.append(c)
        yield tuple(low) + (1,)


def _irreducible(modulus: Sequence[int], p: int) -> bool:
    return bool(gf_irreducible_p([int(c) for c in reversed(modulus)], p, ZZ))


def build_field(p: int, f: int = 1, modulus: Sequence[int] | None = None) -> Field:
    """Build F_{p^f} deterministically.

    ``modulus`` is little-endian and monic of degree f when given; otherwise
    the lexicographically smallest monic irreducible is used.  gamma is the
    primitive element with the smallest integer encoding.
    """
    p, f = int(p), int(f)
    if not isprime(p):
        raise NonPrimeCharacteristic(f"{p} is not prime")
    if f < 1:
        raise ValueError("extension degree must be >= 1")
    if p**f - 1 < 2:
        raise ValueError("need q - 1 >= 2")
    if modulus is None:
        mod = next(m for m in _lex_monic(p, f) if _irreducible(m, p))
    else:
        mod = tuple(int(c) % p for c in modulus)
        if len(mod) != f + 1 or mod[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {f}")
        if not _irreducible(mod, p):
            raise ReducibleModulus(f"{list(mod)} is reducible over Z_{p}")

    q = p**f
    scratch = Field(p, f, mod, (1,) + (0,) * (f - 1))
    cofactors = [(q - 1) // r for r in factorint(q - 1)]
    for code in range(2, q):
        g = scratch.decode(code)
        if all(scratch.pow(g, c) != scratch.one for c in cofactors):
            return Field(p, f, mod, g)
    raise AssertionError("no primitive element found")


def field_from_descriptor(desc: dict) -> Field:
    F = build_field(desc["p"], desc["f"], desc.get("modulus"))
    if "gamma" in desc and tuple(desc["gamma"]) != F.gamma:
        gamma = F.element(desc["gamma"])
        cofactors = [(F.q - 1) // r for r in factorint(F.q - 1)]
        if any(F.pow(gamma, c) == F.one for c in cofactors):
            raise ValueError("supplied gamma is not primitive")
        F = Field(F.p, F.f, F.modulus, gamma)
    return F


def power(F: Field, x, e: int) -> tuple:
    return F.pow(x, e)


def trace(F: Field, x) -> int:
    return F.trace(x)


# -- discrete logarithms -------------------------------------------------------------


class DlogTable:
    """Total map from nonzero elements to log_gamma(x) mod k."""

    def __init__(self, F: Field, k: int):
        self.field = F
        self.k = k
        self.residues = np.where(F.logs >= 0, F.logs % k, -1).astype(_int_dtype(k))

    def __getitem__(self, x) -> int:
        enc = x if isinstance(x, (int, np.integer)) else self.field.encode(self.field.element(x))
        if enc == 0:
            raise KeyError("zero has no discrete logarithm")
        return int(self.residues[enc])

    def __len__(self):
        return self.field.q - 1

    def members(self, indices) -> np.ndarray:
        """Encodings of the union of classes C_i, i in indices."""
        mask = np.zeros(self.k, dtype=bool)
        mask[list(indices)] = True
        hit = np.zeros(self.field.q, dtype=bool)
        hit[1:] = mask[self.residues[1:]]
        return np.flatnonzero(hit)


class DlogStream:
    """Single-consumer iterator over ``(encodings, j mod k, traces)`` blocks."""

    def __init__(self, F: Field, k: int, chunk: int = CHUNK):
        self.field = F
        self.k = k
        self.chunk = chunk

    def __iter__(self):
        F = self.field
        for j0, coords in F.iter_powers(chunk=self.chunk):
            j = np.arange(j0, j0 + len(coords))
            yield F.encode_coords(coords), j % self.k, (coords @ F.basis_traces) % F.p


def dlog_table(F: Field, k: int, ceiling: int | None = None):
    """Discrete logs mod k; streaming variant above the table ceiling."""
    if k < 1 or (F.q - 1) % k:
        raise ModulusDoesNotDivideGroupOrder(f"{k} does not divide q-1 = {F.q - 1}")
    ceiling = TABLE_CEILING if ceiling is None else ceiling
    if F.q > ceiling:
        return DlogStream(F, k)
    return DlogTable(F, k)
