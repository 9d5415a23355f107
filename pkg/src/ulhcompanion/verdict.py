"""Three-valued decisions for exact symbolic tests.

Concrete inputs decide to plain yes/no.  Parametric inputs may instead
yield a *conditional* verdict carrying the polynomials whose simultaneous
vanishing (relation ``"zero"``) or nonvanishing (relation ``"nonzero"``)
is required for the answer to be yes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .exprpoly import Polynomial

YES = "yes"
NO = "no"
CONDITIONAL = "conditional"


@dataclass(frozen=True)
class Condition:
    poly: Polynomial
    relation: str  # "zero" or "nonzero"

    def __post_init__(self):
        if self.relation not in ("zero", "nonzero"):
            raise ValueError(f"bad relation {self.relation!r}")

    @staticmethod
    def normalized(poly: Polynomial, relation: str) -> "Condition":
        """Scale the polynomial monic on its leading term for stable reports."""
        return Condition(poly.monic_normal(), relation)

    def render(self) -> str:
        op = "=" if self.relation == "zero" else "!="
        return f"{self.poly.render()} {op} 0"

    def to_json(self):
        return {"poly": self.poly.render(), "relation": self.relation}


@dataclass(frozen=True)
class Verdict:
    kind: str
    conditions: tuple[Condition, ...] = ()

    def __post_init__(self):
        if self.kind not in (YES, NO, CONDITIONAL):
            raise ValueError(f"bad verdict kind {self.kind!r}")
        if self.kind == CONDITIONAL and not self.conditions:
            raise ValueError("conditional verdict requires conditions")
        if self.kind != CONDITIONAL and self.conditions:
            raise ValueError("only conditional verdicts carry conditions")

    @classmethod
    def yes(cls) -> "Verdict":
        return cls(YES)

    @classmethod
    def no(cls) -> "Verdict":
        return cls(NO)

    @classmethod
    def conditional(cls, conditions: Iterable[Condition]) -> "Verdict":
        # Deduplicate and order deterministically by rendered text.
        unique = sorted(set(conditions), key=lambda c: (c.relation, c.poly.render()))
        if not unique:
            return cls.yes()
        return cls(CONDITIONAL, tuple(unique))

    @property
    def is_yes(self) -> bool:
        return self.kind == YES

    @property
    def is_no(self) -> bool:
        return self.kind == NO

    @property
    def is_conditional(self) -> bool:
        return self.kind == CONDITIONAL

    @staticmethod
    def all_of(verdicts: Iterable["Verdict"]) -> "Verdict":
        """Conjunction: no wins, then conditions accumulate, else yes."""
        conditions: list[Condition] = []
        for v in verdicts:
            if v.is_no:
                return Verdict.no()
            conditions.extend(v.conditions)
        if conditions:
            return Verdict.conditional(conditions)
        return Verdict.yes()

    def render(self) -> str:
        if self.kind != CONDITIONAL:
            return self.kind
        return "conditional: " + " and ".join(c.render() for c in self.conditions)

    def to_json(self):
        out = {"kind": self.kind}
        if self.conditions:
            out["conditions"] = [c.to_json() for c in self.conditions]
        return out
