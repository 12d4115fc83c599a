"""Gauss sums, cyclotomic class sums and additive-character spectra.

Everything exact is driven by one sufficient statistic, the class count
table N(i, t) = #{x != 0 : log x = i (mod k), Tr x = t}.  With it

    G(chi_k^j)        = sum_{i,t} N(i,t) zeta_k^{ij} zeta_p^t
    psi(gamma^a C_0)  = sum_t N(a,t) zeta_p^t

and the spectrum of any union of classes is a sum of class sums.

The float path evaluates all q additive characters at once with a
separable length-p transform over the coordinate group (Z_p)^f.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .cycint import CycInt
from .errors import (
    BadOrder,
    ClusteringAmbiguous,
    EvenCharacteristic,
    FieldTooLarge,
    FieldTooLargeForExactPath,
    ModulusDoesNotDivideGroupOrder,
)
from .field import ENUM_CEILING, Field
from .sets import SetDescriptor

EXACT_CEILING = 10**5  # q bound for the explicit-set exact spectrum
_STREAM_ABOVE = 1 << 22
EPS50 = 2.0**-50


@dataclass(frozen=True)
class Character:
    """chi = chi_k^j with chi_k(gamma) = zeta_k."""

    k: int
    j: int

    def __post_init__(self):
        object.__setattr__(self, "j", self.j % self.k)

    @property
    def trivial(self) -> bool:
        return self.j == 0

    @property
    def order(self) -> int:
        return self.k // math.gcd(self.j, self.k)

    def __pow__(self, e: int) -> Character:
        return Character(self.k, self.j * e)

    def __mul__(self, other: Character) -> Character:
        if other.k != self.k:
            raise BadOrder("characters live in different groups")
        return Character(self.k, self.j + other.j)

    def value_exponent(self, log_x: int) -> int:
        """chi(x) = zeta_k^(returned value) when log_gamma x = log_x."""
        return (self.j * log_x) % self.k


# -- class count tables -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ClassCountTable:
    field: Field
    k: int
    counts: np.ndarray  # shape (k, p)
    _gauss: dict = field(default_factory=dict, repr=False)

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def conductor(self) -> int:
        return self.k * self.field.p

    @cached_property
    def prime_field_logs(self) -> dict:
        """log_gamma(b) for b in F_p^*."""
        F = self.field
        if F.f == 1:
            return {b: int(F.logs[b]) for b in range(1, F.p)}
        step = (F.q - 1) // (F.p - 1)
        g0 = F.pow(F.gamma, step)
        out, x = {}, F.one
        for t in range(F.p - 1):
            out[x[0]] = t * step
            x = F.mul(x, g0)
        return out

    def log_of_int(self, b: int) -> int:
        return self.prime_field_logs[b % self.p]


def class_count_table(F: Field, k: int, ceiling: int = ENUM_CEILING) -> ClassCountTable:
    """N(i, t) from one multiplicative sweep x <- gamma x."""
    if k < 1 or (F.q - 1) % k:
        raise ModulusDoesNotDivideGroupOrder(f"{k} does not divide q-1 = {F.q - 1}")
    if F.q > ceiling:
        raise FieldTooLarge(f"q={F.q} above the enumeration ceiling {ceiling}")
    p = F.p
    if F.q <= _STREAM_ABOVE or "power_coords" in F.__dict__:
        tr = F.traces_by_exp
        j = np.arange(F.q - 1, dtype=np.int64)
        counts = np.bincount((j % k) * p + tr, minlength=k * p)
    else:
        counts = np.zeros(k * p, dtype=np.int64)
        for j0, coords in F.iter_powers():
            tr = (coords @ F.basis_traces) % p
            j = np.arange(j0, j0 + len(coords), dtype=np.int64)
            counts += np.bincount((j % k) * p + tr, minlength=k * p)
    return ClassCountTable(F, k, counts.reshape(k, p).astype(np.int64))


# -- Gauss sums ---------------------------------------------------------------------------


def gauss_vector(T: ClassCountTable, j: int) -> np.ndarray:
    """G(chi_k^j) unreduced: coefficient vector over zeta_{kp}^0..zeta_{kp}^{kp-1}.

    zeta_k is zeta_{kp}^p and zeta_p is zeta_{kp}^k, so the count N(i, t)
    lands on exponent ((ij mod k) p + t k) mod kp.
    """
    k, p = T.k, T.p
    n = k * p
    i = np.arange(k, dtype=np.int64)[:, None]
    t = np.arange(p, dtype=np.int64)[None, :]
    exps = (((i * (j % k)) % k) * p + t * k) % n
    return np.bincount(exps.ravel(), weights=T.counts.ravel(), minlength=n).astype(np.int64)


def gauss_sum(T: ClassCountTable, chi: Character | int) -> CycInt:
    """G(chi) = sum_{x != 0} chi(x) psi(x) as an element of Z[zeta_{kp}]."""
    if isinstance(chi, Character) and chi.k != T.k:
        raise BadOrder(f"character of Z_{chi.k} used with a table for k={T.k}")
    j = chi.j if isinstance(chi, Character) else int(chi) % T.k
    cached = T._gauss.get(j)
    if cached is None:
        cached = T._gauss[j] = CycInt.from_cyclic(T.conductor, gauss_vector(T, j))
    return cached


def legendre(x: int, p: int) -> int:
    x %= p
    if x == 0:
        return 0
    return 1 if pow(x, (p - 1) // 2, p) == 1 else -1


def quadratic_gauss_sum_prime(p: int) -> CycInt:
    """sum_x (x/p) zeta_p^x, a square root of (-1)^((p-1)/2) p."""
    return CycInt.from_cyclic(p, [legendre(x, p) for x in range(p)])


def quadratic_closed_form(p: int, f: int) -> CycInt:
    """(-1)^(f-1) * g^f with g the quadratic Gauss sum of Z_p (conductor p)."""
    if p == 2:
        raise EvenCharacteristic("the quadratic formula needs odd p")
    g = quadratic_gauss_sum_prime(p) ** f
    return g if f % 2 == 1 else -g


def class_sum_table(T: ClassCountTable) -> list:
    """psi(gamma^a C_0) = psi(C_a) for a = 0..k-1, conductor p."""
    return [CycInt.from_cyclic(T.p, T.counts[a]) for a in range(T.k)]


# -- conjugates and the norm test ---------------------------------------------------------
#
# An algebraic integer a in Z[zeta_n] with a != 0 has |N(a)| = prod_u |sigma_u(a)| >= 1.
# So if every conjugate is known to within a rigorous error bound and the product of
# (computed modulus + bound) is below 1, then a = 0.  All Gauss sums at one (q, k) have
# their conjugates in a single k x p table, so identities built from products of Gauss
# sums can be certified without multiplying in the ring.

EPS = 2.0**-53
EXACT_PRODUCT_LIMIT = 5_000  # conductor up to which ring products are done exactly


@dataclass
class GaussConjugates:
    """H[a, b] = sum_{i,t} N(i,t) zeta_k^{ia} zeta_p^{tb} with a per-entry error bound.

    sigma_u(G(chi_k^j)) = H[j u mod k, u mod p] for u a unit mod kp.
    """

    k: int
    p: int
    H: np.ndarray
    err: np.ndarray  # bound for each column b (same for all rows)

    def column_units(self):
        """Units of Z_k paired with b = 1.

        Every identity checked here is a difference X with sigma_{1,b} X = c X
        for a root of unity c, so |sigma_{a,b} X| = |sigma_{a,1} X| and the
        norm is the product over a of |sigma_{a,1} X|^(p-1).
        """
        uk = np.array([a for a in range(self.k) if math.gcd(a, self.k) == 1] or [0], dtype=np.int64)
        return uk, np.ones_like(uk)

    def units(self):
        """(u mod k, u mod p) for every unit u of Z_{kp}, as two index arrays."""
        uk = np.array([a for a in range(self.k) if math.gcd(a, self.k) == 1] or [0], dtype=np.int64)
        up = np.arange(1, self.p, dtype=np.int64)
        A, B = np.meshgrid(uk, up, indexing="ij")
        return A.ravel(), B.ravel()


def gauss_conjugates(T: ClassCountTable) -> GaussConjugates:
    cached = T._gauss.get("conjugates")
    if cached is not None:
        return cached
    k, p = T.k, T.p
    N = T.counts.astype(np.float64)
    # E[i, b] = sum_t N(i,t) zeta_p^{tb}
    E = np.conj(np.fft.fft(N, axis=1))
    # FFT backward error: |err| <= C log2(m) eps ||X||_2 with ||X||_2 = sqrt(p) ||x||_2;
    # C = 64 and m = 4p leave a wide margin for the Bluestein path on prime lengths.
    errE = 64 * math.log2(4 * p) * EPS * math.sqrt(p) * np.sqrt((N**2).sum(axis=1))
    a = np.arange(k)
    W = np.exp(2j * np.pi * np.outer(a, a) / k)
    H = W @ E
    err = errE.sum() + 8 * (k + 4) * EPS * np.abs(E).sum(axis=0)
    out = T._gauss["conjugates"] = GaussConjugates(k, p, H, err)
    return out


def _product_bound(vals: list, errs: list) -> tuple:
    """Product of complex factors with a bound on |computed - exact|."""
    prod = np.ones_like(vals[0])
    upper = np.ones(vals[0].shape)
    exact_mag = np.ones(vals[0].shape)
    for v, e in zip(vals, errs):
        prod = prod * v
        upper = upper * (np.abs(v) + e)
        exact_mag = exact_mag * np.abs(v)
    err = (upper - exact_mag) + 8 * (len(vals) + 2) * EPS * upper
    return prod, err


def norm_certifies_zero(values: np.ndarray, errors: np.ndarray, multiplicity: int = 1) -> bool:
    """True when the conjugates (values, errors) force the algebraic integer to be 0.

    ``multiplicity`` counts how often each listed modulus occurs among all conjugates.
    """
    bound = np.abs(values) + errors
    if np.any(bound >= 1e300):
        return False
    return multiplicity * float(np.sum(np.log(np.maximum(bound, 1e-300)))) < -1.0


# -- identity checks ----------------------------------------------------------------------


@dataclass
class GaussPropertyReport:
    q: int
    k: int
    trivial_is_minus_one: bool
    rows: list  # one dict per nontrivial j: {"j", "i", "ii", "iii", "v"}
    norm_method: str = "exact"  # how (i) was established: "exact" | "norm_bound"

    @property
    def all_pass(self) -> bool:
        return self.trivial_is_minus_one and all(
            r["i"] and r["ii"] and r["iii"] and r["v"] for r in self.rows
        )

    def failures(self) -> list:
        out = [] if self.trivial_is_minus_one else [("iv", 0)]
        for r in self.rows:
            out += [(name, r["j"]) for name in ("i", "ii", "iii", "v") if not r[name]]
        return out


def _units(m: int) -> list:
    return [u for u in range(1, m) if math.gcd(u, m) == 1] or [1]


def _crt_pair(a: int, b: int, k: int, p: int) -> int:
    # u = a mod k, u = b mod p
    return (a + k * (((b - a) * pow(k, -1, p)) % p)) % (k * p)


def _same(n: int, v: np.ndarray, w: np.ndarray) -> bool:
    """Equality in Z[zeta_n] of two unreduced vectors; literal match is sufficient."""
    if np.array_equal(v, w):
        return True
    return CycInt.from_cyclic(n, v) == CycInt.from_cyclic(n, w)


def check_gauss_properties(
    T: ClassCountTable, samples: int = 4, seed: int = 0, method: str = "auto"
) -> GaussPropertyReport:
    """Check the basic Gauss-sum identities exactly for every chi_k^j.

    (ii), (iii) and (v) are compared on unreduced vectors (a literal match
    proves equality; otherwise both sides are reduced).  (i) needs a ring
    product: done in Z[zeta_{kp}] for small conductors, and certified from
    the conjugate table by the norm bound above ``EXACT_PRODUCT_LIMIT``
    (falling back to the ring product if the certificate is inconclusive).
    (v) uses ``samples`` pseudo-random pairs (a, b) plus (-1, -1).
    """
    k, p, q = T.k, T.p, T.q
    n = k * p
    rng = random.Random(seed * 1_000_003 + q * 131 + k)
    vec = [gauss_vector(T, j) for j in range(k)]
    log_minus_one = (q - 1) // 2 if p != 2 else 0
    ua, ub = _units(k), _units(p)
    use_norm = method == "norm" or (method == "auto" and n > EXACT_PRODUCT_LIMIT)
    conj = gauss_conjugates(T) if use_norm else None
    if use_norm:
        UA, UB = conj.column_units()
    pairs = {(k - 1 if k > 1 else 1, p - 1 if p > 2 else 1)}
    while len(pairs) < min(samples, len(ua) * len(ub)):
        pairs.add((rng.choice(ua), rng.choice(ub)))
    # sigma_u as a gather: (sigma_u v)[e] = v[e u^-1]
    gathers = []
    for a, b in sorted(pairs):
        u = _crt_pair(a, b, k, p)
        gathers.append((a, b, (np.arange(n) * pow(u, -1, n)) % n if n > 1 else np.zeros(1, dtype=np.int64)))
    rows = []
    for j in range(1, k):
        chi = Character(k, j)
        v = vec[j]
        prop_ii = _same(n, vec[(j * p) % k], v)
        v_bar = np.roll(v[::-1], 1)  # exponent e -> -e
        prop_iii = _same(n, vec[(-j) % k], np.roll(v_bar, p * chi.value_exponent(log_minus_one)))
        prop_v = all(
            _same(n, v[g], np.roll(vec[(j * a) % k], p * ((-a * j * T.log_of_int(b)) % k)))
            for a, b, g in gathers
        )
        prop_i = None
        if use_norm:
            h = conj.H[(j * UA) % k, UB % p]
            e = conj.err[UB % p]
            x = np.abs(h) ** 2 - q
            xe = (2 * np.abs(h) + e) * e + 8 * EPS * (np.abs(h) + e) ** 2 + 4 * EPS * q
            if norm_certifies_zero(x, xe, p - 1):
                prop_i = True
        if prop_i is None:
            g = gauss_sum(T, j)
            prop_i = bool(g * g.conj() == q)
        rows.append({"j": j, "i": bool(prop_i), "ii": bool(prop_ii), "iii": bool(prop_iii), "v": bool(prop_v)})
    trivial = bool(gauss_sum(T, 0) == -1)
    return GaussPropertyReport(q, k, trivial, rows, "norm_bound" if use_norm else "exact")


@dataclass
class DHResult:
    passed: bool
    k: int
    j: int
    ell: int
    method: str
    lhs: CycInt | None = None
    rhs: CycInt | None = None

    def witness(self) -> dict:
        w = {"k": self.k, "j": self.j, "ell": self.ell, "method": self.method}
        if not self.passed and self.lhs is not None:
            w["lhs"] = self.lhs.to_json()
            w["rhs"] = self.rhs.to_json()
        return w


def davenport_hasse_check(T: ClassCountTable, chi: Character, ell: int, method: str = "auto") -> DHResult:
    """Cross-multiplied Davenport-Hasse product formula.

        G(chi) chi^l(l) prod_{i<l} G(chi eta^i) = G(chi^l) prod_{i<l} G(eta^i)

    with eta the order-l character gamma -> zeta_l.  Characters are moved to
    modulus K = lcm(chi.k, l), building a table on the same field if T.k != K.
    ``method`` is "exact" (ring arithmetic), "norm" (conjugate certificate with
    exact fallback) or "auto" (norm above ``EXACT_PRODUCT_LIMIT``).
    """
    q, p = T.q, T.p
    if ell < 2 or (q - 1) % ell:
        raise BadOrder(f"ell={ell} must be > 1 and divide q-1")
    if chi.k != T.k and T.k % chi.k:
        raise BadOrder(f"character of Z_{chi.k} does not live on a table for k={T.k}")
    K = math.lcm(chi.k, ell)
    if (q - 1) % K:
        raise BadOrder(f"lcm(k, ell) = {K} does not divide q-1")
    if K != T.k:
        T = class_count_table(T.field, K)
    j = chi.j * (K // chi.k) % K
    if j == 0 or (j * ell) % K == 0:
        raise BadOrder("chi and chi^ell must be nontrivial")
    step = K // ell
    twist = (j * ell * T.log_of_int(ell)) % K  # chi^l(l) = zeta_K^twist
    lhs_js = [j] + [(j + i * step) % K for i in range(1, ell)]
    rhs_js = [(j * ell) % K] + [(i * step) % K for i in range(1, ell)]

    use_norm = method == "norm" or (method == "auto" and K * p > EXACT_PRODUCT_LIMIT)
    if use_norm:
        C = gauss_conjugates(T)
        UA, UB = C.column_units()
        e = C.err[UB]
        lv, le = _product_bound([C.H[(x * UA) % K, UB] for x in lhs_js], [e] * ell)
        lv = lv * np.exp(2j * np.pi * ((twist * UA) % K) / K)
        rv, re_ = _product_bound([C.H[(x * UA) % K, UB] for x in rhs_js], [e] * ell)
        if norm_certifies_zero(lv - rv, le + re_ + 4 * EPS * np.abs(lv), p - 1):
            return DHResult(True, K, j, ell, "norm_bound")

    lhs = gauss_sum(T, lhs_js[0]).mul_root(p * twist)
    rhs = gauss_sum(T, rhs_js[0])
    for x, y in zip(lhs_js[1:], rhs_js[1:]):
        lhs = lhs * gauss_sum(T, x)
        rhs = rhs * gauss_sum(T, y)
    return DHResult(bool(lhs == rhs), K, j, ell, "exact", lhs, rhs)


def davenport_hasse_sweep(T: ClassCountTable, ell: int, method: str = "auto") -> list:
    """The product formula for every chi_k^j on the table (ell must divide k).

    In norm mode all characters are certified in one vectorized pass; any
    character the certificate cannot settle is redone exactly.
    """
    k, p = T.k, T.p
    if ell < 2 or k % ell:
        raise BadOrder(f"ell={ell} must be > 1 and divide k={k}")
    js = [j for j in range(1, k) if (j * ell) % k]
    use_norm = method == "norm" or (method == "auto" and k * p > EXACT_PRODUCT_LIMIT)
    if not use_norm:
        return [davenport_hasse_check(T, Character(k, j), ell, "exact") for j in js]
    C = gauss_conjugates(T)
    UA, UB = C.column_units()
    e = C.err[UB]
    step = k // ell
    J = np.array(js, dtype=np.int64)[:, None]
    logl = T.log_of_int(ell)
    lv, le = _product_bound([C.H[((J + i * step) * UA) % k, UB] for i in range(ell)], [e] * ell)
    lv = lv * np.exp(2j * np.pi * ((J * ell * logl * UA) % k) / k)
    rhs = [C.H[(J * ell * UA) % k, UB]] + [C.H[(i * step * UA) % k, UB][None, :] for i in range(1, ell)]
    rv, re_ = _product_bound([np.broadcast_to(x, lv.shape) for x in rhs], [e] * ell)
    out = []
    for row, j in enumerate(js):
        if norm_certifies_zero(lv[row] - rv[row], le[row] + re_[row] + 4 * EPS * np.abs(lv[row]), p - 1):
            out.append(DHResult(True, k, j, ell, "norm_bound"))
        else:
            out.append(davenport_hasse_check(T, Character(k, j), ell, "exact"))
    return out


# -- spectra ------------------------------------------------------------------------------


@dataclass
class SpectrumReport:
    field: dict
    set: dict
    mode: str  # "exact" | "float"
    values: list  # [(value, multiplicity)]; CycInt or complex
    max_abs_error: float = 0.0
    separation: float = 0.0
    truncated: bool = False

    @property
    def distinct(self) -> int:
        return len(self.values)

    @property
    def total(self) -> int:
        return sum(m for _, m in self.values)

    def to_json(self) -> dict:
        vals = []
        for v, m in self.values:
            if isinstance(v, CycInt):
                vals.append({"value": v.to_json(), "multiplicity": m})
            else:
                vals.append({"value": [v.real, v.imag], "multiplicity": m})
        out = {"field": self.field, "set": self.set, "mode": self.mode, "values": vals}
        if self.mode == "float":
            out["max_abs_error"] = self.max_abs_error
        return out


def _group_exact(p: int, count_rows: np.ndarray, mult: np.ndarray) -> list:
    groups: dict = {}
    order = []
    for row, m in zip(count_rows, mult):
        v = CycInt.from_cyclic(p, row)
        key = v.key()
        if key not in groups:
            groups[key] = [v, 0]
            order.append(key)
        groups[key][1] += int(m)
    return [(groups[key][0], groups[key][1]) for key in order]


def class_union_counts(T: ClassCountTable, indices) -> np.ndarray:
    """Row b: trace counts of gamma^b D for D = union of C_i, i in indices."""
    k = T.k
    out = np.zeros((k, T.p), dtype=np.int64)
    for i in indices:
        out += np.roll(T.counts, -int(i), axis=0)
    return out


def spectrum_exact(F: Field, D: SetDescriptor, ceiling: int = EXACT_CEILING) -> SpectrumReport:
    """Exact psi(aD) for every a != 0 as conductor-p cyclotomic integers.

    Class unions go through the class count table (O(q)); explicit sets use
    the bilinear trace form Tr(ax) = a^T B x and cost O(q |D| f).
    """
    if D.is_classes:
        T = class_count_table(F, D.k)
        rows = class_union_counts(T, D.indices)
        mult = np.full(D.k, (F.q - 1) // D.k)
        values = _group_exact(F.p, rows, mult)
        return SpectrumReport(F.descriptor(), D.to_json(), "exact", values)

    if F.q > ceiling:
        raise FieldTooLargeForExactPath(f"q={F.q} above the exact-path ceiling {ceiling}")
    p = F.p
    X = F.decode_many(D.elements)  # |D| x f
    BX = (F.trace_form @ X.T) % p  # f x |D|
    a_all = np.arange(1, F.q, dtype=np.int64)
    rows = []
    chunk = max(1, 4_000_000 // max(1, len(D.elements)))
    for s in range(0, len(a_all), chunk):
        A = F.decode_many(a_all[s : s + chunk])
        tr = (A @ BX) % p
        offs = np.arange(len(A), dtype=np.int64)[:, None] * p
        c = np.bincount((tr + offs).ravel(), minlength=len(A) * p).reshape(len(A), p)
        rows.append(c)
    rows = np.vstack(rows) if rows else np.zeros((0, p), dtype=np.int64)
    uniq, mult = np.unique(rows, axis=0, return_counts=True)
    values = _group_exact(p, uniq, mult)
    return SpectrumReport(F.descriptor(), D.to_json(), "exact", values)


def dft_error_bound(F: Field) -> float:
    return F.q * F.f * F.p * EPS50


def coordinate_dft(F: Field, x: np.ndarray, inverse: bool = False) -> np.ndarray:
    """X(w) = sum_x x[x] zeta_p^{+-w.x} over (Z_p)^f, as an f-dimensional FFT.

    Input and output are indexed by element encodings; both reshape to the
    same (p,)*f grid, so w.x pairs matching axes.
    """
    X = np.asarray(x, dtype=np.complex128).reshape((F.p,) * F.f)
    if inverse:
        return np.fft.fftn(X).reshape(-1)
    return (np.fft.ifftn(X) * F.q).reshape(-1)


def cluster_values(vals: np.ndarray, radius: float, separation: float, limit: int = 1 << 20):
    """Group complex values into clusters of diameter ~radius.

    Raises ClusteringAmbiguous when two cluster centres are closer than
    ``separation``.  Returns ([(centre, count)], truncated).
    """
    vals = np.asarray(vals)
    order = np.argsort(vals.real, kind="stable")
    re = vals.real[order]
    cuts = np.flatnonzero(np.diff(re) > radius) + 1
    clusters = []
    for grp in np.split(order, cuts):
        sub = vals[grp]
        o2 = np.argsort(sub.imag, kind="stable")
        im = sub.imag[o2]
        for g2 in np.split(o2, np.flatnonzero(np.diff(im) > radius) + 1):
            pts = sub[g2]
            c = pts.mean()
            if np.max(np.abs(pts - c)) > separation / 2:
                raise ClusteringAmbiguous("a value cluster is wider than the separation threshold")
            clusters.append((complex(c), len(pts)))
            if len(clusters) > limit:
                return clusters, True
    cells: dict = {}
    for idx, (c, _) in enumerate(clusters):
        cells.setdefault((math.floor(c.real / separation), math.floor(c.imag / separation)), []).append(idx)
    for idx, (c, _) in enumerate(clusters):
        cx, cy = math.floor(c.real / separation), math.floor(c.imag / separation)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for other in cells.get((cx + dx, cy + dy), ()):
                    if other != idx and abs(clusters[other][0] - c) < separation:
                        raise ClusteringAmbiguous(
                            f"clusters at {c} and {clusters[other][0]} closer than {separation:.3g}"
                        )
    clusters.sort(key=lambda t: (round(t[0].real, 9), round(t[0].imag, 9)))
    return clusters, False


def dft_of_set(F: Field, D: SetDescriptor) -> np.ndarray:
    if F.q > ENUM_CEILING:
        raise FieldTooLarge(f"q={F.q} above {ENUM_CEILING}")
    ind = np.zeros(F.q, dtype=np.float64)
    ind[D.elements] = 1.0
    return coordinate_dft(F, ind)


def character_index(F: Field) -> np.ndarray:
    """Position of psi_a in the coordinate transform, for a = 0..q-1."""
    a = np.arange(F.q, dtype=np.int64)
    return F.encode_coords((F.decode_many(a) @ F.trace_form) % F.p)


def spectrum_dft(F: Field, D: SetDescriptor, transform: np.ndarray | None = None) -> SpectrumReport:
    """All psi_a(D), a != 0, in floating point with a clustered value list.

    Cost O(q f p).  ``max_abs_error`` is the bound q f p 2^-50 and clusters
    must be separated by 10^3 times that bound.
    """
    hat = dft_of_set(F, D) if transform is None else transform
    vals = hat[character_index(F)[1:]]
    err = dft_error_bound(F)
    sep = 1e3 * err
    clusters, truncated = cluster_values(vals, 2 * err, sep)
    return SpectrumReport(
        F.descriptor(), D.to_json(), "float", clusters, max_abs_error=err, separation=sep, truncated=truncated
    )


@dataclass
class AutocorrelationResult:
    counts: np.ndarray  # counts[enc(g)] = #{(d1, d2) in D^2 : d1 - d2 = g}
    error_bound: float
    max_rounding_gap: float


def difference_counts_dft(F: Field, D: SetDescriptor, transform: np.ndarray | None = None) -> AutocorrelationResult:
    """Difference counts from |D^(w)|^2 and an inverse transform, rounded.

    Rounding is only accepted when the propagated error bound is below 1/2.
    """
    hat = dft_of_set(F, D) if transform is None else transform
    power = np.abs(hat) ** 2
    back = coordinate_dft(F, power, inverse=True) / F.q
    E = dft_error_bound(F)
    size = D.size
    bound = 2 * size * E + E * E + F.f * F.p * EPS50 * (size + E) ** 2
    if bound >= 0.5:
        raise FieldTooLarge(f"autocorrelation error bound {bound:.3g} is not below 1/2")
    rounded = np.rint(back.real)
    gap = float(np.max(np.abs(back - rounded)))
    if gap >= 0.5:
        raise AssertionError("rounding gap exceeds 1/2 despite the error bound")
    return AutocorrelationResult(rounded.astype(np.int64), bound, gap)
