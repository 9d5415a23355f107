"""Companion verdicts for ULH matrices.

A matrix with variables x1..xn placed once each is *companion* when its
characteristic polynomial is exactly

    lambda^n - x1*lambda^(n-1) - ... - x_{n-1}*lambda - x_n.

Two independent routes are provided: the direct route compares the
characteristic polynomial against that target, while the structural route
reduces the question to nilpotency of the constant part and of the
leading/trailing principal blocks attached to each variable position.
On matrices from the G family with extra entries confined to the i1-block
there is a much lighter test: every (k-1)-subdiagonal must sum to x_k.

The same machinery yields generators: unique nilpotent completions of
partially specified ULH matrices, and the parameterization of all
companion superpatterns of a G-family pattern.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import FamilyError, InternalInvariantError
from .exprpoly import LAM, Polynomial, lam_power, par, xvar
from .families import base_matrix, classify_matrix, classify_pattern
from .matrices import Pattern, SymMatrix
from .verdict import Condition, Verdict


def companion_target(n: int) -> Polynomial:
    """lambda^n - x1*lambda^(n-1) - ... - x_n."""
    target = lam_power(n)
    for k in range(1, n + 1):
        target = target - xvar(k) * lam_power(n - k)
    return target


@dataclass(frozen=True)
class NestedSpec:
    """Checkpoints for nested nilpotency of principal submatrices.

    ``side`` selects leading or trailing principal submatrices.  Zeros and
    repeated checkpoints are allowed and simply deduplicated.
    """

    n: int
    checkpoints: tuple[int, ...]
    side: str  # "leading" or "trailing"

    def __post_init__(self):
        if self.side not in ("leading", "trailing"):
            raise ValueError(f"bad side {self.side!r}")
        for m in self.checkpoints:
            if m < 0 or m > self.n:
                raise ValueError(f"checkpoint {m} out of range for order {self.n}")


@dataclass(frozen=True)
class CompanionReport:
    verdict: Verdict
    method: str  # "direct", "structural", "g_hat" or "fiedler_below"
    witnesses: tuple[str, ...] = ()

    def to_json(self):
        return {
            "verdict": self.verdict.to_json(),
            "method": self.method,
            "witnesses": list(self.witnesses),
        }


def _residual_report(residual: Polynomial, method: str) -> CompanionReport:
    """Classify a symbolic residual that must vanish identically."""
    if residual.is_zero():
        return CompanionReport(Verdict.yes(), method)
    witnesses = []
    conditions = []
    hard_failure = False
    groups = residual.split_by_parameters()
    for main in sorted(groups, key=lambda m: Polynomial({m: 1}).render()):
        coeff = groups[main]
        main_s = Polynomial({main: Fraction(1)}).render() if main else "1"
        if coeff.is_constant():
            hard_failure = True
            witnesses.append(
                f"unexpected term {coeff.constant_value()}*{main_s} in the characteristic polynomial"
            )
        else:
            conditions.append(Condition.normalized(coeff, "zero"))
            witnesses.append(f"coefficient of {main_s} is {coeff.render()}")
    if hard_failure:
        return CompanionReport(Verdict.no(), method, tuple(witnesses))
    return CompanionReport(Verdict.conditional(conditions), method, tuple(witnesses))


def is_companion_direct(matrix: SymMatrix) -> CompanionReport:
    """Compare the characteristic polynomial against the companion target."""
    matrix.extract_pattern()  # validates variable placement
    residual = matrix.charpoly() - companion_target(matrix.order)
    return _residual_report(residual, "direct")


def is_companion_structural(matrix: SymMatrix) -> CompanionReport:
    """Decide companionship through nilpotency of the attached blocks.

    Requires membership in the C family (as a superpattern); outside it the
    verdict is no.  The constant-part condition is skipped when the
    i1-block carries nothing but the variables.  Blocks are tested in
    ascending variable index, reporting the first failure.
    """
    pattern = matrix.extract_pattern()
    label, tilde, _hat = classify_matrix(matrix)
    if not (label.in_c and tilde):
        return CompanionReport(
            Verdict.no(),
            "structural",
            ("pattern lies outside the C family, so the matrix cannot be companion",),
        )
    n = matrix.order
    i1 = label.i1
    verdicts: list[Verdict] = []
    witnesses: list[str] = []

    block_is_clean = True
    for i in range(i1, n + 1):
        for j in range(1, i1 + 1):
            e = matrix.entry(i, j)
            if not e.is_zero() and not e.has_x():
                block_is_clean = False
    if not block_is_clean:
        v = matrix.constant_part().is_nilpotent()
        if v.is_no:
            return CompanionReport(
                Verdict.no(), "structural", ("constant part is not nilpotent",)
            )
        verdicts.append(v)

    tested: set[tuple[int, int]] = set()
    for k, (i_k, _j_k) in enumerate(pattern.positions, start=1):
        for lo, hi, side in ((1, i_k - k, "leading"), (i_k + 1, n, "trailing")):
            if (lo, hi) in tested or hi < lo:
                tested.add((lo, hi))
                continue
            tested.add((lo, hi))
            block = matrix.principal(lo, hi)
            if block.has_x():
                raise InternalInvariantError(
                    f"block A[{lo}..{hi}] contains companion variables"
                )
            v = block.is_nilpotent()
            if v.is_no:
                return CompanionReport(
                    Verdict.no(),
                    "structural",
                    (f"block A[{lo}..{hi}] required for x{k} is not nilpotent",),
                )
            if v.is_conditional:
                witnesses.append(f"block A[{lo}..{hi}] is nilpotent only conditionally")
            verdicts.append(v)
    return CompanionReport(Verdict.all_of(verdicts), "structural", tuple(witnesses))


def nested_membership(matrix: SymMatrix, spec: NestedSpec) -> Verdict:
    """Are all checkpointed leading/trailing principal submatrices nilpotent?"""
    if not matrix.is_ulh():
        raise ValueError("nested nilpotency is defined for ULH matrices")
    if matrix.order != spec.n:
        raise ValueError(f"matrix order {matrix.order} does not match spec order {spec.n}")
    verdicts = []
    for m in sorted(set(spec.checkpoints)):
        if m == 0:
            continue
        block = matrix.leading(m) if spec.side == "leading" else matrix.trailing(m)
        verdicts.append(block.is_nilpotent())
    return Verdict.all_of(verdicts)


def nilpotent_complete(partial: SymMatrix, checkpoints: Sequence[int]) -> SymMatrix:
    """Fill checkpoint rows so each checkpointed leading block is nilpotent.

    For a checkpoint m the row entries a_m1..a_mm are the unique values
    with charpoly(A[1..m]) = lambda^m.  Writing p_j for the charpoly of
    A[1..j], the recurrence gives

        lambda^m - lambda*p_{m-1} = -(a_mm p_{m-1} + ... + a_m1 p_0),

    and since each p_j is monic of degree j the left side has a unique
    expansion in the triangular basis {p_0, ..., p_{m-1}}, recovered by
    back-substitution from the top degree down.

    Entries already present on a checkpoint row must be zero or must agree
    with the solved value; otherwise the completion is inconsistent.
    """
    n = partial.order
    if not partial.is_ulh():
        raise ValueError("completion requires a ULH matrix")
    points = list(checkpoints)
    if sorted(set(points)) != points:
        raise ValueError("checkpoints must be strictly ascending")
    for m in points:
        if m < 1 or m > n:
            raise ValueError(f"checkpoint {m} exceeds the order {n}")
    checkpoint_set = set(points)

    rows = [list(row) for row in partial.entries]
    ps = [Polynomial.one()]
    for m in range(1, n + 1):
        if m in checkpoint_set:
            target = lam_power(m) - LAM * ps[m - 1]
            coeffs = [Polynomial.zero()] * m
            rem = target
            for j in range(m - 1, -1, -1):
                c = rem.lambda_coeff(j)
                if not c.is_zero():
                    coeffs[j] = c
                    rem = rem - c * ps[j]
            if not rem.is_zero():
                raise InternalInvariantError("triangular back-substitution left a remainder")
            for col in range(1, m + 1):
                solved = -coeffs[col - 1]
                existing = rows[m - 1][col - 1]
                if not existing.is_zero() and existing != solved:
                    raise ValueError(
                        f"entry ({m},{col}) is fixed to {existing} but the "
                        f"completion requires {solved}"
                    )
                rows[m - 1][col - 1] = solved
        acc = (LAM - rows[m - 1][m - 1]) * ps[m - 1]
        for j in range(1, m):
            a = rows[m - 1][j - 1]
            if not a.is_zero():
                acc = acc - a * ps[j - 1]
        ps.append(acc)
        if m in checkpoint_set and ps[m] != lam_power(m):
            raise InternalInvariantError(f"completion failed at checkpoint {m}")
    return SymMatrix(tuple(tuple(row) for row in rows))


def g_hat_companion_test(matrix: SymMatrix) -> CompanionReport:
    """Light companion test for superpatterns of G-family matrices.

    Such a matrix is companion exactly when its nonzero off-superdiagonal
    entries all lie in the i1-block and every (k-1)-subdiagonal sums to
    x_k.  Outside the G family the verdict is no.
    """
    matrix.extract_pattern()
    label, tilde, hat = classify_matrix(matrix)
    if not (label.in_g and tilde):
        return CompanionReport(
            Verdict.no(),
            "g_hat",
            ("pattern lies outside the G family",),
        )
    if not hat:
        n = matrix.order
        i1 = label.i1
        outside = [
            (i, j)
            for i in range(1, n + 1)
            for j in range(1, i + 1)
            if not matrix.entry(i, j).is_zero() and not (i >= i1 and j <= i1)
        ]
        return CompanionReport(
            Verdict.no(),
            "g_hat",
            tuple(f"nonzero entry at ({i},{j}) outside the i1-block" for i, j in outside),
        )
    verdicts = []
    witnesses = []
    for k in range(1, matrix.order + 1):
        diff = matrix.subdiag_sum(k - 1) - xvar(k)
        if diff.is_zero():
            continue
        if diff.is_constant():
            return CompanionReport(
                Verdict.no(),
                "g_hat",
                (f"subdiagonal sum s{k - 1} exceeds x{k} by {diff.constant_value()}",),
            )
        if diff.has_x():
            return CompanionReport(
                Verdict.no(),
                "g_hat",
                (f"subdiagonal sum s{k - 1} differs from x{k} by {diff.render()}",),
            )
        verdicts.append(Verdict.conditional([Condition.normalized(diff, "zero")]))
        witnesses.append(f"subdiagonal sum s{k - 1} differs from x{k} by {diff.render()}")
    return CompanionReport(Verdict.all_of(verdicts), "g_hat", tuple(witnesses))


def _fresh_param_names() -> Iterable[str]:
    letters = "abcdefghijklmnopqrstuvwyz"  # 'x' omitted: x<k> is reserved
    for round_ in itertools.count():
        for ch in letters:
            yield ch if round_ == 0 else f"{ch}{round_}"


def parameterize_g(pattern: Pattern) -> SymMatrix:
    """All companion superpatterns of a G-family pattern, as one matrix.

    Nonzero entries are confined to the superdiagonal and the i1-block.
    Inside the block, each (k-1)-subdiagonal carries x_k plus parameter
    cells summing to zero: every free cell gets a fresh parameter and the
    last cell (in placement order) is the negated sum of the others.  A
    subdiagonal with a single free cell therefore forces that cell to 0.
    """
    label = classify_pattern(pattern)
    if not label.in_g:
        raise FamilyError("parameterization requires a pattern in the G family")
    n = pattern.n
    i1 = label.i1
    matrix = base_matrix(pattern)
    names = _fresh_param_names()
    variable_cells = set(pattern.positions)
    for h in range(n):
        block_cells = [
            (r, r - h)
            for r in range(h + 1, n + 1)
            if r >= i1 and 1 <= r - h <= i1
        ]
        free_cells = [c for c in block_cells if c not in variable_cells]
        if not free_cells:
            continue
        total = Polynomial.zero()
        for cell in free_cells[:-1]:
            p = par(next(names))
            total = total + p
            matrix = matrix.with_entry(cell[0], cell[1], p)
        last = free_cells[-1]
        matrix = matrix.with_entry(last[0], last[1], -total)
    return matrix


def fiedler_below_diag_test(matrix: SymMatrix, base: Pattern) -> CompanionReport:
    """Companion test for matrices built from an F-family base pattern by
    changing zero entries below the superdiagonal."""
    if not classify_pattern(base).in_f:
        raise FamilyError("base pattern must belong to the F family")
    if matrix.order != base.n or not matrix.is_ulh():
        raise ValueError("matrix is not a ULH superpattern of the base pattern")
    if matrix.extract_pattern() != base:
        raise ValueError("matrix is not a ULH superpattern of the base pattern")
    report = g_hat_companion_test(matrix)
    return CompanionReport(report.verdict, "fiedler_below", report.witnesses)


def build_newton_companion(gammas: Sequence[Fraction | int]) -> SymMatrix:
    """Frobenius form with a modified diagonal.

    For constants g1..g_{n-1} the matrix has diagonal (g1, ..., g_{n-1}, 0),
    superdiagonal ones and last row (x_n, ..., x_1); its characteristic
    polynomial expands with coordinates (1, -x1, ..., -x_n) in the basis of
    products prod_{h<=m} (lambda - g_h).
    """
    n = len(gammas) + 1
    rows = [[Polynomial.zero()] * n for _ in range(n)]
    for i in range(n - 1):
        rows[i][i + 1] = Polynomial.one()
        rows[i][i] = Polynomial.const(Fraction(gammas[i]))
    for k in range(1, n + 1):
        rows[n - 1][n - k] = xvar(k)
    return SymMatrix(tuple(tuple(row) for row in rows))
