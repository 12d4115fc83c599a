"""Verifiers for skew Hadamard difference sets, Paley-type PDS, difference sets and SRGs.

Each verifier returns a :class:`Certificate`; a failed check is a verdict,
not an exception.  Two independent routes are available:

* counting: the difference function Delta(g) = #{(d1, d2) in D^2 : d1 - d2 = g}
  computed exhaustively (orbit representatives for class unions, all pairs
  for explicit sets, rounded autocorrelation for very large explicit sets);
* spectrum: the additive-character values psi(aD), exact or in floating point.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .charsum import (
    SpectrumReport,
    difference_counts_dft,
    spectrum_dft,
    spectrum_exact,
)
from .errors import EvenOrder
from .field import Field
from .sets import SetDescriptor

SCHEMA_VERSION = "1.0"
PAIR_LIMIT = 4 * 10**8  # |D|^2 above which explicit sets are counted by autocorrelation
EXACT_SPECTRUM_CEILING = 10**5

__all__ = [
    "Certificate",
    "SetDescriptor",
    "paley_set",
    "difference_function",
    "verify_difference_set",
    "verify_skew_hadamard",
    "verify_paley_pds",
    "verify_srg",
    "default_tolerance",
]


@dataclass
class Certificate:
    kind: str  # skew_hadamard | paley_pds | difference_set | srg | gauss_property | construction
    field: dict
    k: int | None
    indices: list | None
    method: str  # exact_counting | exact_spectrum | float_spectrum | exact_arithmetic | structural
    verdict: str  # pass | fail | note
    witness: dict = field(default_factory=dict)
    runtime_ms: float = 0.0
    tolerance: float | None = None
    float_evidence: bool = False
    deviations: list = field(default_factory=list)
    schema_version: str = SCHEMA_VERSION

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, d: dict) -> Certificate:
        return cls(**d)


def _set_params(D: SetDescriptor) -> tuple:
    if D.is_classes:
        return D.k, list(D.indices)
    return None, None


def _cert(kind, F, D, method, verdict, witness, t0, **kw) -> Certificate:
    k, idx = _set_params(D) if D is not None else (None, None)
    return Certificate(
        kind=kind,
        field=F.descriptor(),
        k=k,
        indices=idx,
        method=method,
        verdict=verdict,
        witness=witness,
        runtime_ms=round((time.perf_counter() - t0) * 1000, 3),
        **kw,
    )


def default_tolerance(error_bound: float) -> float:
    return max(1e-7, 1e3 * error_bound)


def paley_set(F: Field) -> SetDescriptor:
    """The nonzero squares, C_0 of index 2."""
    if F.q % 2 == 0:
        raise EvenOrder("the squares form a difference set only for odd q")
    return SetDescriptor.classes(F, 2, [0])


# -- counting -----------------------------------------------------------------------------


@dataclass
class DifferenceFunction:
    """Delta(g) for nonzero g.

    ``by_class`` is set for class unions: Delta is constant on each class
    C_c^{(k,q)}, and by_class[c] = Delta(gamma^c).  Otherwise ``counts`` is
    indexed by element encoding.
    """

    route: str
    by_class: np.ndarray | None = None
    k: int | None = None
    counts: np.ndarray | None = None
    error_bound: float | None = None

    def values(self) -> np.ndarray:
        return self.by_class if self.by_class is not None else self.counts[1:]

    def distinct(self) -> list:
        return sorted({int(v) for v in self.values()})

    def at(self, F: Field, g: int) -> int:
        """Delta at the element with encoding g != 0."""
        if self.by_class is not None:
            return int(self.by_class[F.logs[g] % self.k])
        return int(self.counts[g])

    def first_witness(self, F: Field, target: int) -> dict:
        """The first nonzero g with Delta(g) != target."""
        if self.by_class is not None:
            c = int(np.flatnonzero(self.by_class != target)[0])
            g = F.pow(F.gamma, c)
            return {"element": list(g), "count": int(self.by_class[c]), "class": c}
        bad = np.flatnonzero(self.counts[1:] != target)[0] + 1
        return {"element": list(F.decode(int(bad))), "count": int(self.counts[bad])}


def difference_function(F: Field, D: SetDescriptor, route: str = "auto") -> DifferenceFunction:
    """Delta(g) = |D cap (D + g)| for every g != 0."""
    ind = D.indicator
    elems = D.elements
    if route == "auto":
        if D.is_classes:
            route = "orbit"
        elif len(elems) ** 2 <= PAIR_LIMIT:
            route = "pairs"
        else:
            route = "autocorrelation"
    if route == "orbit":
        if not D.is_classes:
            raise ValueError("orbit counting needs a class-union descriptor")
        # D is invariant under multiplication by gamma^k, hence so is Delta
        k = D.k
        reps = [F.encode(F.pow(F.gamma, c)) for c in range(k)]
        out = np.empty(k, dtype=np.int64)
        for c, g in enumerate(reps):
            out[c] = int(ind[F.sub_enc(elems, g)].sum())
        return DifferenceFunction("orbit_representatives", by_class=out, k=k)
    if route == "pairs":
        counts = np.zeros(F.q, dtype=np.int64)
        chunk = max(1, 2_000_000 // max(1, len(elems)))
        for s in range(0, len(elems), chunk):
            d1 = elems[s : s + chunk]
            diff = F.sub_enc(d1[:, None], elems[None, :])
            counts += np.bincount(diff.ravel(), minlength=F.q)
        return DifferenceFunction("all_pairs", counts=counts)
    if route == "autocorrelation":
        res = difference_counts_dft(F, D)
        return DifferenceFunction("autocorrelation_rounded", counts=res.counts, error_bound=res.error_bound)
    raise ValueError(f"unknown counting route {route!r}")


def _meta(df: DifferenceFunction) -> dict:
    w = {"counting": df.route}
    if df.error_bound is not None:
        w["rounding_error_bound"] = df.error_bound
    return w


def verify_difference_set(F: Field, D: SetDescriptor, lambda_: int | None = None, route: str = "auto") -> Certificate:
    t0 = time.perf_counter()
    if D.size < 1:
        return _cert("difference_set", F, D, "exact_counting", "fail", {"condition": "D is empty"}, t0)
    df = difference_function(F, D, route)
    vals = df.distinct()
    w = _meta(df)
    if len(vals) != 1:
        target = vals[0] if lambda_ is None else lambda_
        w.update(condition="difference counts are not constant", realized=vals)
        w.update(df.first_witness(F, target))
        return _cert("difference_set", F, D, "exact_counting", "fail", w, t0)
    lam = vals[0]
    w["lambda"] = lam
    if lambda_ is not None and lam != lambda_:
        w["condition"] = f"lambda = {lam}, expected {lambda_}"
        return _cert("difference_set", F, D, "exact_counting", "fail", w, t0)
    return _cert("difference_set", F, D, "exact_counting", "pass", w, t0)


# -- structural conditions ----------------------------------------------------------------


def _meets_negative(F: Field, D: SetDescriptor):
    """An element of D cap -D, or None."""
    if D.is_classes:
        neg = set(D.negated().indices)
        common = sorted(neg & set(D.indices))
        return list(F.pow(F.gamma, common[0])) if common else None
    hit = np.flatnonzero(D.indicator[F.neg_enc(D.elements)])
    return list(F.decode(int(D.elements[hit[0]]))) if len(hit) else None


def _asymmetric_element(F: Field, D: SetDescriptor):
    """An element d of D with -d not in D, or None."""
    if D.is_classes:
        miss = sorted(set(D.negated().indices) - set(D.indices))
        if not miss:
            return None
        shift = (F.q - 1) // 2 if F.p != 2 else 0
        return list(F.pow(F.gamma, (miss[0] - shift) % D.k))
    miss = np.flatnonzero(~D.indicator[F.neg_enc(D.elements)])
    return list(F.decode(int(D.elements[miss[0]]))) if len(miss) else None


def _structure(F: Field, D: SetDescriptor, skew: bool):
    """First violated structural condition for a skew / Paley-type set, or None."""
    half = (F.q - 1) / 2
    if D.contains_zero():
        return {"condition": "0 in D"}
    if skew:
        bad = _meets_negative(F, D)
        if bad is not None:
            return {"condition": "D cap -D is nonempty", "element": bad}
    else:
        bad = _asymmetric_element(F, D)
        if bad is not None:
            return {"condition": "D != -D", "element": bad}
    if D.size != half:
        return {"condition": f"|D| = {D.size}, expected (q-1)/2 = {half}"}
    return None


# -- spectra ------------------------------------------------------------------------------


def _spectrum(F: Field, D: SetDescriptor, mode: str) -> SpectrumReport:
    if mode == "auto":
        mode = "exact" if D.is_classes or F.q <= EXACT_SPECTRUM_CEILING else "float"
    if mode == "exact":
        return spectrum_exact(F, D, ceiling=max(EXACT_SPECTRUM_CEILING, F.q if D.is_classes else 0))
    return spectrum_dft(F, D)


def _spectral_values_check(report: SpectrumReport, q: int, sign: int, tol: float):
    """Every value must be (-1 +- sqrt(sign*q))/2.  Returns (ok, detail)."""
    if report.mode == "exact":
        for v, m in report.values:
            s = 2 * v + 1
            if s * s != sign * q:
                return False, {"value": v.to_json(), "multiplicity": m, "condition": f"(2 psi + 1)^2 != {sign * q}"}
        return True, {"values": [[v.to_json(), m] for v, m in report.values]}
    root = math.sqrt(q)
    targets = [complex(-0.5, root / 2), complex(-0.5, -root / 2)] if sign < 0 else [(-1 + root) / 2, (-1 - root) / 2]
    worst = 0.0
    for v, m in report.values:
        d = min(abs(v - t) for t in targets)
        worst = max(worst, d)
        if d > tol:
            return False, {"value": [v.real, v.imag], "multiplicity": m, "distance": d}
    return True, {"values": [[[v.real, v.imag], m] for v, m in report.values], "max_deviation": worst}


def _spectral_verdict(kind: str, F: Field, D: SetDescriptor, sign: int, mode: str, tolerance, t0):
    rep = _spectrum(F, D, mode)
    tol = tolerance if tolerance is not None else default_tolerance(rep.max_abs_error)
    ok, detail = _spectral_values_check(rep, F.q, sign, tol)
    if rep.mode == "exact":
        return _cert(kind, F, D, "exact_spectrum", "pass" if ok else "fail", detail, t0)
    detail["max_abs_error"] = rep.max_abs_error
    return _cert(kind, F, D, "float_spectrum", "pass" if ok else "fail", detail, t0, tolerance=tol, float_evidence=True)


def verify_skew_hadamard(
    F: Field, D: SetDescriptor, method: str = "exact", spectrum: str = "auto", tolerance: float | None = None
) -> Certificate:
    """Skew Hadamard check, by counting ("exact") or through the character values ("spectral")."""
    t0 = time.perf_counter()
    bad = _structure(F, D, skew=True)
    m0 = "exact_counting" if method == "exact" else ("float_spectrum" if spectrum == "float" else "exact_spectrum")
    if bad is not None:
        return _cert("skew_hadamard", F, D, m0, "fail", bad, t0)
    if F.q % 4 != 3:
        return _cert("skew_hadamard", F, D, m0, "fail", {"condition": "q is not 3 mod 4"}, t0)
    if method == "exact":
        lam = (F.q - 3) // 4
        c = verify_difference_set(F, D, lam)
        c.kind = "skew_hadamard"
        c.runtime_ms = round((time.perf_counter() - t0) * 1000, 3)
        return c
    return _spectral_verdict("skew_hadamard", F, D, -1, spectrum, tolerance, t0)


def verify_paley_pds(
    F: Field, D: SetDescriptor, method: str = "exact", spectrum: str = "auto", tolerance: float | None = None
) -> Certificate:
    """Paley-type PDS check: Delta = (q-5)/4 on D and (q-1)/4 off D."""
    t0 = time.perf_counter()
    m0 = "exact_counting" if method == "exact" else ("float_spectrum" if spectrum == "float" else "exact_spectrum")
    bad = _structure(F, D, skew=False)
    if bad is not None:
        return _cert("paley_pds", F, D, m0, "fail", bad, t0)
    if F.q % 4 != 1:
        return _cert("paley_pds", F, D, m0, "fail", {"condition": "q is not 1 mod 4"}, t0)
    if method != "exact":
        return _spectral_verdict("paley_pds", F, D, 1, spectrum, tolerance, t0)
    lam, mu = (F.q - 5) // 4, (F.q - 1) // 4
    df = difference_function(F, D)
    w = _meta(df)
    if df.by_class is not None:
        inside = np.isin(np.arange(D.k), D.indices)
        got = df.by_class
        expect = np.where(inside, lam, mu)
        if np.any(got != expect):
            c = int(np.flatnonzero(got != expect)[0])
            w.update(
                condition="difference count mismatch",
                element=list(F.pow(F.gamma, c)),
                in_D=bool(inside[c]),
                count=int(got[c]),
                expected=int(expect[c]),
            )
            return _cert("paley_pds", F, D, "exact_counting", "fail", w, t0)
    else:
        got = df.counts[1:]
        inside = D.indicator[1:]
        expect = np.where(inside, lam, mu)
        if np.any(got != expect):
            g = int(np.flatnonzero(got != expect)[0]) + 1
            w.update(
                condition="difference count mismatch",
                element=list(F.decode(g)),
                in_D=bool(inside[g - 1]),
                count=int(got[g - 1]),
                expected=int(expect[g - 1]),
            )
            return _cert("paley_pds", F, D, "exact_counting", "fail", w, t0)
    w.update(parameters=[F.q, D.size, lam, mu])
    return _cert("paley_pds", F, D, "exact_counting", "pass", w, t0)


def _srg_from_eigenvalues(v: int, deg: int, r_plus_s: int, r_times_s: int) -> dict:
    mu = deg + r_times_s
    lam = mu + r_plus_s
    out = {"parameters": [v, deg, lam, mu]}
    if mu == 0:
        out["note"] = "degenerate: mu = 0, a disjoint union of complete graphs"
    return out


def verify_srg(F: Field, D: SetDescriptor, mode: str = "auto", tolerance: float | None = None) -> Certificate:
    """Two-valued spectrum test for the Cayley graph Cay(F_q, D).

    (v, k, lambda, mu) come from r + s = lambda - mu and r s = mu - k.
    """
    t0 = time.perf_counter()
    if D.contains_zero():
        return _cert("srg", F, D, "exact_spectrum", "fail", {"condition": "0 in D"}, t0)
    if _asymmetric_element(F, D) is not None:
        return _cert("srg", F, D, "exact_spectrum", "fail", {"condition": "D != -D"}, t0)
    rep = _spectrum(F, D, mode)
    q, deg = F.q, D.size
    if rep.mode == "exact":
        vals = [v for v, _ in rep.values]
        w = {"values": [[v.to_json(), m] for v, m in rep.values]}
        if len(vals) != 2:
            w["condition"] = f"{len(vals)} distinct nontrivial character values"
            return _cert("srg", F, D, "exact_spectrum", "fail", w, t0)
        r, s = vals
        tr, nm = r + s, r * s
        if not (tr.is_rational() and nm.is_rational()):
            w["condition"] = "eigenvalues are not roots of an integer quadratic"
            return _cert("srg", F, D, "exact_spectrum", "fail", w, t0)
        w.update(_srg_from_eigenvalues(q, deg, tr.rational(), nm.rational()))
        return _cert("srg", F, D, "exact_spectrum", "pass", w, t0)

    tol = tolerance if tolerance is not None else default_tolerance(rep.max_abs_error)
    w = {"values": [[[v.real, v.imag], m] for v, m in rep.values], "max_abs_error": rep.max_abs_error}
    kw = dict(tolerance=tol, float_evidence=True)
    if rep.truncated or len(rep.values) != 2:
        w["condition"] = f"{len(rep.values)} value clusters"
        return _cert("srg", F, D, "float_spectrum", "fail", w, t0, **kw)
    (r, _), (s, _) = rep.values
    tr, nm = r + s, r * s
    tr_i, nm_i = round(tr.real), round(nm.real)
    scale = 1 + abs(r) + abs(s)
    if abs(tr - tr_i) > tol or abs(nm - nm_i) > tol * scale:
        w["condition"] = "r + s or r s is not an integer"
        return _cert("srg", F, D, "float_spectrum", "fail", w, t0, **kw)
    w.update(_srg_from_eigenvalues(q, deg, tr_i, nm_i))
    w["separation"] = abs(r - s)
    return _cert("srg", F, D, "float_spectrum", "pass", w, t0, **kw)
