"""Cyclotomic constructions of skew Hadamard difference sets and Paley-type PDS.

Exact cyclotomic-integer Gauss sums drive everything: the partition of a
strongly regular cyclotomic case into two cyclic difference sets, the
construction of index sets J, their lifts, and verification by difference
counting or by character values.
"""

from .charsum import (
    Character,
    check_gauss_properties,
    class_count_table,
    davenport_hasse_check,
    davenport_hasse_sweep,
    gauss_sum,
    quadratic_closed_form,
    spectrum_dft,
    spectrum_exact,
)
from .construct import (
    JSet,
    apply_corollary1,
    apply_thm4,
    build_J_cosets,
    build_J_thm4,
    coset_union,
    index4_screen,
    lift_thm5,
)
from .cycint import CycInt
from .field import Field, build_field
from .sets import SetDescriptor
from .sw import classify_case, find_partition, verify_quotient_ds
from .verify import (
    Certificate,
    paley_set,
    verify_difference_set,
    verify_paley_pds,
    verify_skew_hadamard,
    verify_srg,
)

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "Character",
    "CycInt",
    "Field",
    "JSet",
    "SetDescriptor",
    "apply_corollary1",
    "apply_thm4",
    "build_J_cosets",
    "build_J_thm4",
    "build_field",
    "check_gauss_properties",
    "class_count_table",
    "classify_case",
    "coset_union",
    "davenport_hasse_check",
    "davenport_hasse_sweep",
    "find_partition",
    "gauss_sum",
    "index4_screen",
    "lift_thm5",
    "paley_set",
    "quadratic_closed_form",
    "spectrum_dft",
    "spectrum_exact",
    "verify_difference_set",
    "verify_paley_pds",
    "verify_quotient_ds",
    "verify_skew_hadamard",
    "verify_srg",
]
