"""Subsets of F_q given either as unions of cyclotomic classes or explicitly."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ModulusDoesNotDivideGroupOrder
from .field import Field, dlog_table


@dataclass(frozen=True)
class SetDescriptor:
    """D = union of C_i^{(k,q)} over ``indices``, or an explicit element list.

    Explicit elements are stored as integer encodings (see :mod:`skewcyc.field`);
    ``k`` is 1 for explicit sets.
    """

    field: Field
    k: int = 1
    indices: tuple | None = None
    explicit: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        if (self.indices is None) == (self.explicit is None):
            raise ValueError("give exactly one of indices / explicit elements")
        if self.indices is not None:
            if self.k < 1 or (self.field.q - 1) % self.k:
                raise ModulusDoesNotDivideGroupOrder(f"{self.k} does not divide q-1 = {self.field.q - 1}")
            idx = tuple(sorted({int(i) % self.k for i in self.indices}))
            object.__setattr__(self, "indices", idx)
        else:
            enc = tuple(int(e) for e in self.explicit)
            if len(set(enc)) != len(enc):
                raise ValueError("explicit element list contains duplicates")
            object.__setattr__(self, "explicit", tuple(sorted(enc)))

    @classmethod
    def classes(cls, F: Field, k: int, indices) -> SetDescriptor:
        return cls(F, k, tuple(indices))

    @classmethod
    def from_elements(cls, F: Field, elements) -> SetDescriptor:
        enc = [e if isinstance(e, (int, np.integer)) else F.encode(F.element(e)) for e in elements]
        return cls(F, 1, None, tuple(int(e) for e in enc))

    @property
    def is_classes(self) -> bool:
        return self.indices is not None

    @cached_property
    def elements(self) -> np.ndarray:
        """Sorted integer encodings of the members."""
        if not self.is_classes:
            return np.array(self.explicit, dtype=np.int64)
        return dlog_table(self.field, self.k).members(self.indices).astype(np.int64)

    @cached_property
    def indicator(self) -> np.ndarray:
        mask = np.zeros(self.field.q, dtype=bool)
        mask[self.elements] = True
        return mask

    @property
    def size(self) -> int:
        if self.is_classes:
            return len(self.indices) * (self.field.q - 1) // self.k
        return len(self.explicit)

    def contains_zero(self) -> bool:
        return (not self.is_classes) and len(self.explicit) > 0 and self.explicit[0] == 0

    def negated(self) -> SetDescriptor:
        """-D.  For class unions -1 = gamma^((q-1)/2) shifts every index."""
        F = self.field
        if self.is_classes:
            shift = (F.q - 1) // 2 if F.p != 2 else 0
            return SetDescriptor(F, self.k, tuple((i + shift) % self.k for i in self.indices))
        return SetDescriptor(F, 1, None, tuple(int(e) for e in F.neg_enc(self.elements)))

    def complement(self) -> SetDescriptor:
        """F_q^* minus D."""
        F = self.field
        if self.is_classes:
            return SetDescriptor(F, self.k, tuple(i for i in range(self.k) if i not in self.indices))
        mask = np.ones(F.q, dtype=bool)
        mask[0] = False
        mask[self.elements] = False
        return SetDescriptor(F, 1, None, tuple(int(e) for e in np.flatnonzero(mask)))

    def as_explicit(self) -> SetDescriptor:
        return SetDescriptor(self.field, 1, None, tuple(int(e) for e in self.elements))

    def to_json(self) -> dict:
        if self.is_classes:
            return {"k": self.k, "indices": list(self.indices)}
        return {"elements": [list(self.field.decode(e)) for e in self.explicit]}

    @classmethod
    def from_json(cls, F: Field, d: dict) -> SetDescriptor:
        if "indices" in d:
            return cls.classes(F, d["k"], d["indices"])
        return cls.from_elements(F, [tuple(e) if not isinstance(e, int) else e for e in d["elements"]])
