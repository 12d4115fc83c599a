import cmath
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from skewcyc.charsum import (
    Character,
    check_gauss_properties,
    class_count_table,
    class_sum_table,
    davenport_hasse_check,
    davenport_hasse_sweep,
    difference_counts_dft,
    gauss_conjugates,
    gauss_sum,
    norm_certifies_zero,
    quadratic_closed_form,
    quadratic_gauss_sum_prime,
    spectrum_dft,
    spectrum_exact,
)
from skewcyc.cycint import CycInt
from skewcyc.errors import BadOrder, EvenCharacteristic, FieldTooLargeForExactPath, ModulusDoesNotDivideGroupOrder
from skewcyc.field import build_field
from skewcyc.sets import SetDescriptor

CASES = [(7, 1, 6), (3, 2, 4), (3, 2, 8), (5, 2, 12), (2, 3, 7), (3, 3, 13), (13, 1, 12), (2, 4, 15)]


@pytest.mark.parametrize("p,f,k", CASES)
def test_gauss_sums_match_direct_summation(p, f, k, oracle_cache):
    F, O = build_field(p, f), oracle_cache(p, f)
    T = class_count_table(F, k)
    for j in range(k):
        G = gauss_sum(T, j)
        assert cmath.isclose(G.embed(), oracles.gauss_sum(O, k, j), abs_tol=1e-7)


@pytest.mark.parametrize("p,f,k", CASES)
def test_class_counts_match_oracle(p, f, k, oracle_cache):
    F, O = build_field(p, f), oracle_cache(p, f)
    T = class_count_table(F, k)
    for i in range(k):
        row = [0] * p
        for x in O.cls(k, i):
            row[O.trace(x)] += 1
        assert list(T.counts[i]) == row


def test_frozen_small_values():
    # F_7: quadratic Gauss sum is i sqrt 7; F_9: it is 3 (derived by direct summation)
    T7 = class_count_table(build_field(7), 2)
    assert gauss_sum(T7, 1) * gauss_sum(T7, 1) == CycInt.from_int(1, -7)
    assert gauss_sum(T7, 0) == CycInt.from_int(1, -1)
    T9 = class_count_table(build_field(3, 2), 2)
    assert gauss_sum(T9, 1) == CycInt.from_int(1, 3)
    # F_27, k = 13: psi(C_a) is 2 on the Singer set {0, 1, 3, 9} and -1 elsewhere (oracle, frozen)
    sums = class_sum_table(class_count_table(build_field(3, 3), 13))
    assert [s.rational() for s in sums] == [2, 2, -1, 2, -1, -1, -1, -1, -1, 2, -1, -1, -1]


@pytest.mark.parametrize("p,f,k", [(7, 1, 6), (3, 3, 13), (5, 2, 24), (13, 1, 12), (2, 4, 15), (2, 2, 3)])
@pytest.mark.parametrize("method", ["exact", "norm"])
def test_gauss_properties(p, f, k, method):
    rep = check_gauss_properties(class_count_table(build_field(p, f), k), method=method)
    assert rep.all_pass, rep.failures()


@pytest.mark.parametrize("ell", [2, 3, 4, 6])
@pytest.mark.parametrize("method", ["exact", "norm"])
def test_davenport_hasse(ell, method):
    T = class_count_table(build_field(13), 12)
    res = davenport_hasse_sweep(T, ell, method=method)
    assert res and all(r.passed for r in res)
    assert all(r.method == ("exact" if method == "exact" else "norm_bound") for r in res)


def test_davenport_hasse_single_character_moves_modulus():
    T = class_count_table(build_field(5, 2), 4)
    r = davenport_hasse_check(T, Character(4, 1), 3)  # lcm(4, 3) = 12
    assert r.passed and r.k == 12
    with pytest.raises(BadOrder):
        davenport_hasse_check(T, Character(4, 1), 5)


def test_norm_certificate_rejects_false_identity():
    # |G|^2 = q, so |G|^2 - (q + 1) = -1 is nonzero and must never certify
    T = class_count_table(build_field(13), 12)
    C = gauss_conjugates(T)
    UA, UB = C.units()
    g = C.H[(1 * UA) % 12, UB]
    diff = np.abs(g) ** 2 - (13 + 1)
    assert not norm_certifies_zero(diff, np.full(len(diff), 1e-9))
    assert norm_certifies_zero(np.abs(g) ** 2 - 13, np.full(len(diff), 1e-9))


@pytest.mark.parametrize("p,f", [(p, f) for p in (3, 5, 7, 11, 13) for f in (1, 2, 3) if p**f <= 5000])
def test_quadratic_closed_form(p, f):
    T = class_count_table(build_field(p, f), 2)
    assert gauss_sum(T, 1) == quadratic_closed_form(p, f)


def test_quadratic_prime_sum_squares():
    for p in [3, 5, 7, 11, 13, 17]:
        g = quadratic_gauss_sum_prime(p)
        assert g * g == CycInt.from_int(1, (-1) ** ((p - 1) // 2) * p)
    with pytest.raises(EvenCharacteristic):
        quadratic_closed_form(2, 3)


def test_table_errors():
    with pytest.raises(ModulusDoesNotDivideGroupOrder):
        class_count_table(build_field(7), 4)


def _oracle_spectrum(O, D):
    vals = {}
    for a in O.elements[1:]:
        v = oracles.psi_set(O, a, D)
        vals[(round(v.real, 6) + 0.0, round(v.imag, 6) + 0.0)] = vals.get((round(v.real, 6) + 0.0, round(v.imag, 6) + 0.0), 0) + 1
    return sorted(vals.items())


def _report_values(rep):
    out = {}
    for v, m in rep.values:
        z = v.embed() if isinstance(v, CycInt) else v
        key = (round(z.real, 6) + 0.0, round(z.imag, 6) + 0.0)
        out[key] = out.get(key, 0) + m
    return sorted(out.items())


@pytest.mark.parametrize("p,f,k,idx", [(7, 1, 2, [0]), (3, 3, 26, [0, 1, 2]), (5, 2, 8, [0, 3]), (3, 2, 4, [1])])
def test_spectra_match_oracle(p, f, k, idx, oracle_cache):
    F, O = build_field(p, f), oracle_cache(p, f)
    D = SetDescriptor.classes(F, k, idx)
    ref = _oracle_spectrum(O, O.union(k, idx))
    assert _report_values(spectrum_exact(F, D)) == ref
    assert _report_values(spectrum_dft(F, D)) == ref
    E = SetDescriptor.from_elements(F, sorted(O.union(k, idx)))
    assert _report_values(spectrum_exact(F, E)) == ref


def test_exact_path_ceiling():
    F = build_field(3, 11)
    D = SetDescriptor.from_elements(F, [F.one])
    with pytest.raises(FieldTooLargeForExactPath):
        spectrum_exact(F, D)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([(3, 3), (5, 2), (2, 5), (7, 2)]), st.integers(0, 2**32))
def test_parseval_and_autocorrelation(pf, seed):
    F = build_field(*pf)
    rng = random.Random(seed)
    elems = sorted(rng.sample(range(F.q), rng.randint(1, F.q // 2)))
    D = SetDescriptor.from_elements(F, [F.decode(e) for e in elems])
    rep = spectrum_dft(F, D)
    total = sum(m * abs(v) ** 2 for v, m in rep.values) + len(elems) ** 2
    assert math.isclose(total, F.q * len(elems), rel_tol=1e-9)
    ac = difference_counts_dft(F, D)
    S = set(elems)
    for g in range(1, F.q, max(1, F.q // 17)):
        brute = sum(1 for x in elems if F.encode(F.sub(F.decode(x), F.decode(g))) in S)
        assert ac.counts[g] == brute
    assert ac.error_bound < 0.5


def test_close_clusters_are_refused():
    from skewcyc.charsum import cluster_values
    from skewcyc.errors import ClusteringAmbiguous

    vals = np.array([1.0, 1.0 + 1e-12, 1.0 + 5e-6, 3.0])
    with pytest.raises(ClusteringAmbiguous):
        cluster_values(vals, radius=1e-10, separation=1e-4)
    clusters, _ = cluster_values(vals, radius=1e-10, separation=1e-7)
    assert [m for _, m in clusters] == [2, 1, 1]
