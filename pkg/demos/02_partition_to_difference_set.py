"""From a strongly regular cyclotomic graph to a skew Hadamard difference set.

C_0 of index 11 in F_{3^5} is the connection set of a strongly regular
Cayley graph.  Its class sums split Z_11 into two cyclic difference sets,
and either part yields an index set J mod 22 whose classes form a skew
Hadamard difference set in F_243.
"""

from skewcyc import apply_thm4, build_field, classify_case, find_partition, verify_quotient_ds

k, p, f = 11, 3, 5
print(classify_case(k, p, f))

F = build_field(p, f)
P = find_partition(F, k)
print("L1 =", P.L1, " L2 =", P.L2, " p-adic valuation of G =", P.s_theta)
print("G(chi_11) =", P.gauss)

n = len(P.L2)
print("L2 as a cyclic difference set:", verify_quotient_ds(P.L2, (k, n, n * (n - 1) // (k - 1))).verdict)

J, cert = apply_thm4(F, k)
print("J =", list(J.indices), "mod", J.modulus)
print(cert.kind, cert.verdict, "lambda =", cert.witness["lambda"])
