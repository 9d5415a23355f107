"""Membership in the nested pattern families of ULH matrices.

Patterns are classified into six families (tested flags in parentheses):

* H (``in_h``): any valid placement of x1..xn on or below the diagonal.
* D (``in_d``): x_k sits on the (k-1)-subdiagonal for every k.
* C (``in_c``): D, and every variable lies in the block whose top-right
  corner is the diagonal cell of x1 (the i1-block).
* G (``in_g``): C, and rows i1..n as well as columns 1..i1 each carry at
  least one variable.
* F (``in_f``): G, and consecutive variables share a row or a column, so
  the variables trace a lattice path from the diagonal to the corner.
* B (``in_b``): all variables lie in a common t-block, i.e.
  max j_k <= min i_k.  Note F ⊂ G ⊂ C ⊂ D ⊂ H and C = D ∩ B.

For a concrete ULH matrix two further flags matter: *tilde* (the matrix is
a ULH superpattern of its base pattern matrix: extra nonzero entries occur
only below the superdiagonal) and *hat* (additionally, every nonzero
off-superdiagonal entry lies in the i1-block; only defined inside C).
"""

from __future__ import annotations

from dataclasses import dataclass

from .exprpoly import Polynomial, xvar
from .matrices import Pattern, SymMatrix


@dataclass(frozen=True)
class ClassLabel:
    in_h: bool
    in_d: bool
    in_c: bool
    in_g: bool
    in_f: bool
    in_b: bool
    block_ts: tuple[int, ...]
    i1: int | None

    def in_family(self, family: str) -> bool:
        return {
            "H": self.in_h,
            "D": self.in_d,
            "C": self.in_c,
            "G": self.in_g,
            "F": self.in_f,
            "B": self.in_b,
        }[family]

    def to_json(self):
        return {
            "sets": {
                "H": self.in_h,
                "D": self.in_d,
                "C": self.in_c,
                "G": self.in_g,
                "F": self.in_f,
                "B": self.in_b,
            },
            "block_ts": list(self.block_ts),
            "i1": self.i1,
        }


def classify_pattern(pattern: Pattern) -> ClassLabel:
    """Compute all family flags of a valid pattern."""
    n = pattern.n
    cells = pattern.positions
    if n == 0:
        return ClassLabel(False, False, False, False, False, False, (), None)
    rows = [i for i, _ in cells]
    cols = [j for _, j in cells]

    in_d = all(i - j == k for k, (i, j) in enumerate(cells))
    i1 = rows[0] if in_d else None

    in_c = in_d and all(i - k <= i1 <= i for k, (i, _) in enumerate(cells))

    in_g = (
        in_c
        and set(rows) == set(range(i1, n + 1))
        and set(cols) == set(range(1, i1 + 1))
    )

    in_f = in_g and all(
        rows[k] in (rows[k - 1], rows[k - 1] + 1) for k in range(1, n)
    )

    max_j, min_i = max(cols), min(rows)
    block_ts = tuple(range(max_j, min_i + 1))
    in_b = bool(block_ts)

    return ClassLabel(True, in_d, in_c, in_g, in_f, in_b, block_ts, i1)


def base_matrix(pattern: Pattern) -> SymMatrix:
    """The sparse matrix of a pattern: superdiagonal ones, x_k at its cell."""
    n = pattern.n
    rows = [[Polynomial.zero()] * n for _ in range(n)]
    for i in range(n - 1):
        rows[i][i + 1] = Polynomial.one()
    for k, (i, j) in enumerate(pattern.positions, start=1):
        rows[i - 1][j - 1] = xvar(k)
    return SymMatrix(tuple(tuple(row) for row in rows))


def classify_matrix(matrix: SymMatrix) -> tuple[ClassLabel, bool, bool]:
    """Classify a ULH matrix; returns (label, tilde, hat).

    ``tilde`` records that the matrix is a ULH superpattern of its base
    pattern matrix.  Parameters count as (generically) nonzero constants;
    their vanishing is handled downstream through conditional verdicts.
    ``hat`` is False whenever the pattern is outside C.
    """
    if not matrix.is_ulh():
        raise ValueError("classification requires a unit lower Hessenberg matrix")
    pattern = matrix.extract_pattern()
    label = classify_pattern(pattern)
    # ULH + successful extraction means all deviations from the base are
    # nonzero entries below the superdiagonal, which is the tilde relation.
    tilde = True
    hat = False
    if label.in_c:
        hat = True
        n = matrix.order
        i1 = label.i1
        for i in range(1, n + 1):
            for j in range(1, i + 1):
                if matrix.entry(i, j).is_zero():
                    continue
                if not (i >= i1 and j <= i1):
                    hat = False
    return label, tilde, hat
