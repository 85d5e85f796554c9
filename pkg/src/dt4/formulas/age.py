"""Ages of diagonal group elements and the age-at-most-one test."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import NotSU4
from ..partitions import GroupAction


@dataclass(frozen=True)
class GroupElementSpec:
    order: int
    exponents: tuple   # (a1, a2, a3, a4), acting by diag(e^{2 pi i a_k / order})

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(a) % self.order for a in self.exponents))
        if self.order < 1 or len(self.exponents) != 4:
            raise ValueError("need a positive order and four exponents")


def age(g: GroupElementSpec) -> Fraction:
    """(a1 + a2 + a3 + a4) / r with 0 <= a_i < r."""
    total = sum(g.exponents)
    if total % g.order:
        raise NotSU4(f"exponents {g.exponents} do not sum to 0 mod {g.order}")
    return Fraction(total, g.order)


@dataclass(frozen=True)
class AgeReport:
    ok: bool
    ages: dict              # exponent tuple -> age, over all elements
    witness: GroupElementSpec | None

    def to_json(self) -> dict:
        return {
            "age_at_most_one": self.ok,
            "ages": {",".join(map(str, k)): str(v) for k, v in sorted(self.ages.items())},
            "witness": None if self.witness is None else {
                "order": self.witness.order, "exponents": list(self.witness.exponents)},
        }


def is_age_at_most_one(action: GroupAction) -> AgeReport:
    """Enumerate the group from its weight matrix; report any element of age >= 2."""
    ages = {}
    witness = None
    for n, exps in action.elements():
        g = GroupElementSpec(n, exps)
        a = age(g)
        ages[g.exponents] = a
        if a >= 2 and witness is None:
            witness = g
    return AgeReport(witness is None, ages, witness)
