"""Exact Gauss sums in a small field, then the Paley set checked two ways."""

from skewcyc import build_field, check_gauss_properties, class_count_table, gauss_sum, paley_set, verify_skew_hadamard

F = build_field(3, 3)
print(f"F_27 with modulus {F.modulus} (little-endian) and primitive element {F.gamma}")

# Every Gauss sum on F_27 for characters of order dividing 26 comes from one table of counts.
T = class_count_table(F, 26)
G = gauss_sum(T, 13)  # the quadratic character
print("quadratic Gauss sum:", G, "  numerically", G.embed())
print("G * G =", G * G)  # -27, since 27 = 3 mod 4 and f is odd

report = check_gauss_properties(T)
print(f"{len(report.rows)} nontrivial characters, all identities hold: {report.all_pass}")

# The nonzero squares of F_27 form a skew Hadamard difference set.
D = paley_set(F)
by_counting = verify_skew_hadamard(F, D, "exact")
by_values = verify_skew_hadamard(F, D, "spectral")
print(by_counting.verdict, by_counting.method, "lambda =", by_counting.witness["lambda"])
print(by_values.verdict, by_values.method)
