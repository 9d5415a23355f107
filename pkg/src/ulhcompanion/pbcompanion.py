"""PB-companion machinery for ULH matrices.

A matrix with variables x1..xn placed once each is *PB-companion* when its
characteristic polynomial expands as

    p_n(lambda) - x1*p_{n-1}(lambda) - ... - x_n*p_0(lambda)

for some polynomial basis {p_0, ..., p_n} of the degree-<=n polynomials.
Candidates necessarily have all variables inside a common t-block (the B
family as superpatterns); for such matrices the accompanying polynomials
are read off directly:

    p_{n-k} = charpoly(A[1..j_k-1]) * charpoly(A[i_k+1..n]),
    p_n     = charpoly of the constant part,

where (i_k, j_k) is the position of x_k.  PB-companionship is then the
nonsingularity of the (n+1) x (n+1) coefficient matrix whose rows list the
lambda coefficients of p_0..p_n; equivalently, of its diagonal blocks
along the concatenation induced by the degrees; and when every such block
has size at most two there is a purely structural test on the
subdiagonals of A.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import FamilyError, InternalInvariantError
from .exprpoly import Polynomial, xvar
from .matrices import SymMatrix
from .verdict import Condition, Verdict

Grid = tuple[tuple[Polynomial, ...], ...]


@dataclass(frozen=True)
class PBReport:
    basis: tuple[Polynomial, ...]
    ma: Grid
    degrees: tuple[int, ...]
    concat: tuple[tuple[int, ...], ...]
    block_dets: tuple[Polynomial, ...]
    det: Polynomial
    verdict: Verdict

    def to_json(self):
        return {
            "basis": [p.render() for p in self.basis],
            "ma": [[e.render() for e in row] for row in self.ma],
            "degrees": list(self.degrees),
            "concat": [list(c) for c in self.concat],
            "block_dets": [d.render() for d in self.block_dets],
            "det": self.det.render(),
            "verdict": self.verdict.to_json(),
        }


def _require_b_family(matrix: SymMatrix):
    """Return the pattern; raise with a witness if outside the B family."""
    if not matrix.is_ulh():
        raise ValueError("PB-companion analysis requires a ULH matrix")
    pattern = matrix.extract_pattern()
    cells = pattern.positions
    if not cells:
        raise FamilyError("order-0 matrix has no variables to analyse")
    max_j = max(j for _, j in cells)
    min_i = min(i for i, _ in cells)
    if max_j > min_i:
        r = next(k for k, (_, j) in enumerate(cells, start=1) if j == max_j)
        s = next(k for k, (i, _) in enumerate(cells, start=1) if i == min_i)
        i_r, j_r = pattern.cell_of(r)
        i_s, j_s = pattern.cell_of(s)
        exponent = pattern.n - (i_s - j_s + 1) - (i_r - j_r + 1)
        raise FamilyError(
            "variables are not confined to a common block: the disjoint "
            f"windows A[{j_s}..{i_s}] and A[{j_r}..{i_r}] force the term "
            f"x{s}*x{r}*lambda^{exponent} into the characteristic polynomial"
        )
    return pattern


def basis_polynomials(matrix: SymMatrix) -> tuple[Polynomial, ...]:
    """(p_0, ..., p_n) for a matrix in the B family (as a superpattern)."""
    pattern = _require_b_family(matrix)
    n = matrix.order
    basis: list[Polynomial] = [Polynomial.zero()] * (n + 1)
    for k, (i_k, j_k) in enumerate(pattern.positions, start=1):
        left = matrix.principal(1, j_k - 1)
        right = matrix.principal(i_k + 1, n)
        if left.has_x() or right.has_x():
            raise InternalInvariantError("windows flanking a variable are not constant")
        basis[n - k] = left.charpoly() * right.charpoly()
    basis[n] = matrix.constant_part().charpoly()
    reconstruction = basis[n]
    for k in range(1, n + 1):
        reconstruction = reconstruction - xvar(k) * basis[n - k]
    if reconstruction != matrix.charpoly():
        raise InternalInvariantError(
            "characteristic polynomial does not match its basis expansion"
        )
    return tuple(basis)


def ma_matrix(basis: tuple[Polynomial, ...]) -> Grid:
    """Row t lists the lambda coefficients of p_t, columns 0..n."""
    n = len(basis) - 1
    return tuple(
        tuple(basis[t].lambda_coeff(d) for d in range(n + 1)) for t in range(n + 1)
    )


def concatenation(basis: tuple[Polynomial, ...]) -> tuple[tuple[int, ...], ...]:
    """Split (0..n) into components ending at each t with deg p_t = t."""
    n = len(basis) - 1
    degrees = [basis[t].lambda_degree() for t in range(n + 1)]
    if degrees[n] != n:
        raise InternalInvariantError(f"p_{n} must have degree {n}")
    components = []
    start = 0
    for t in range(n + 1):
        if degrees[t] == t:
            components.append(tuple(range(start, t + 1)))
            start = t + 1
    return tuple(components)


# ---------------------------------------------------------------------------
# Exact determinants
# ---------------------------------------------------------------------------

def det_bareiss_fractions(grid) -> Fraction:
    """Fraction-free Bareiss elimination over the rationals."""
    m = [list(row) for row in grid]
    n = len(m)
    if n == 0:
        return Fraction(1)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            pivot_row = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if pivot_row is None:
                return Fraction(0)
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
            m[i][k] = Fraction(0)
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _det_cofactor_poly(grid) -> Polynomial:
    n = len(grid)
    memo: dict[tuple[int, ...], Polynomial] = {}

    def minor(row: int, cols: tuple[int, ...]) -> Polynomial:
        if not cols:
            return Polynomial.one()
        if cols in memo:
            return memo[cols]
        total = Polynomial.zero()
        sign = 1
        for idx, c in enumerate(cols):
            e = grid[row][c]
            if not e.is_zero():
                term = e * minor(row + 1, cols[:idx] + cols[idx + 1:])
                total = total + term if sign > 0 else total - term
            sign = -sign
        memo[cols] = total
        return total

    return minor(0, tuple(range(n)))


def _det_bareiss_poly(grid) -> Polynomial:
    """Bareiss elimination over the polynomial ring (divisions are exact)."""
    m = [list(row) for row in grid]
    n = len(m)
    if n == 0:
        return Polynomial.one()
    sign = 1
    prev = Polynomial.one()
    for k in range(n - 1):
        if m[k][k].is_zero():
            pivot_row = next((r for r in range(k + 1, n) if not m[r][k].is_zero()), None)
            if pivot_row is None:
                return Polynomial.zero()
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                numer = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = numer.exact_div(prev)
            m[i][k] = Polynomial.zero()
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det


def det_poly(grid: Grid) -> Polynomial:
    """Exact determinant of a grid of polynomials.

    Constant grids run Bareiss over the rationals; parametric grids use
    cofactor expansion up to size 4 and polynomial Bareiss beyond.
    """
    if all(e.is_constant() for row in grid for e in row):
        values = [[e.constant_value() for e in row] for row in grid]
        return Polynomial.const(det_bareiss_fractions(values))
    if len(grid) <= 4:
        return _det_cofactor_poly(grid)
    return _det_bareiss_poly(grid)


# ---------------------------------------------------------------------------
# Verdicts
# ---------------------------------------------------------------------------

def _nonsingularity_verdict(dets) -> Verdict:
    conditions = []
    for d in dets:
        if d.is_constant():
            if d.constant_value() == 0:
                return Verdict.no()
        else:
            conditions.append(Condition.normalized(d, "nonzero"))
    if conditions:
        return Verdict.conditional(conditions)
    return Verdict.yes()


def is_pb_companion(matrix: SymMatrix) -> PBReport:
    """Full report: basis, coefficient matrix, concatenation, determinants.

    The verdict is nonsingularity of the full coefficient matrix; its
    determinant is computed independently and cross-checked against the
    product of the diagonal block determinants (the coefficient matrix is
    always block lower triangular along the concatenation).  Parametric
    inputs yield a conditional verdict listing the block determinants that
    must not vanish.
    """
    basis = basis_polynomials(matrix)
    grid = ma_matrix(basis)
    degrees = tuple(int(p.lambda_degree()) for p in basis)
    concat = concatenation(basis)
    block_dets = []
    for component in concat:
        block = tuple(
            tuple(grid[t][d] for d in component) for t in component
        )
        block_dets.append(det_poly(block))
    block_dets = tuple(block_dets)
    full_det = det_poly(grid)
    product = Polynomial.one()
    for d in block_dets:
        product = product * d
    if full_det != product:
        raise InternalInvariantError(
            "determinant does not factor through the diagonal blocks"
        )
    if full_det.is_constant():
        verdict = Verdict.yes() if full_det.constant_value() != 0 else Verdict.no()
    else:
        verdict = _nonsingularity_verdict(block_dets)
    return PBReport(basis, grid, degrees, concat, block_dets, full_det, verdict)


def pb_via_blocks(report: PBReport) -> Verdict:
    """Nonsingularity of every diagonal block; must agree with the full verdict."""
    return _nonsingularity_verdict(report.block_dets)


def length_le2_criterion(matrix: SymMatrix) -> Verdict | None:
    """Structural PB-companion test when all concatenation components are short.

    Inspects each k-subdiagonal of the matrix:

    * no variables, or exactly x_{k+1}: fine;
    * exactly x_{k+1} and x_{k+2}: the two diagonal windows they span must
      have different trace sums (a condition when parameters are present);
    * a variable x_h with h <= k on the subdiagonal: the matrix cannot be
      PB-companion at all, verdict no;
    * anything else: the concatenation has a component of length at least
      three and this criterion does not apply; returns None.
    """
    pattern = _require_b_family(matrix)
    n = matrix.order
    by_subdiag: dict[int, list[int]] = {}
    for k, (i, j) in enumerate(pattern.positions, start=1):
        by_subdiag.setdefault(i - j, []).append(k)

    applicable = True
    conditions: list[Condition] = []
    for h in range(n):
        var_indices = sorted(by_subdiag.get(h, []))
        if not var_indices:
            continue
        if var_indices[0] <= h:
            return Verdict.no()
        if var_indices == [h + 1]:
            continue
        if var_indices == [h + 1, h + 2]:
            i, _ = pattern.cell_of(h + 1)
            i2, _ = pattern.cell_of(h + 2)
            sum1 = Polynomial.zero()
            for r in range(i - h, i + 1):
                sum1 = sum1 + matrix.entry(r, r)
            sum2 = Polynomial.zero()
            for r in range(i2 - h, i2 + 1):
                sum2 = sum2 + matrix.entry(r, r)
            diff = sum1 - sum2
            if diff.has_x():
                raise InternalInvariantError(
                    "window-sum difference should be free of companion variables"
                )
            if diff.is_constant():
                if diff.constant_value() == 0:
                    return Verdict.no()
            else:
                conditions.append(Condition.normalized(diff, "nonzero"))
            continue
        applicable = False
    if not applicable:
        return None
    if conditions:
        return Verdict.conditional(conditions)
    return Verdict.yes()


def degree_profile_check(matrix: SymMatrix) -> list[bool]:
    """Degree-based necessary conditions for PB-companionship.

    Validates that each basis degree matches the pattern geometry
    (deg p_{n-k} = n - i_k + j_k - 1) and that degrees are monotone, then
    returns, for t = 0..n, whether deg p_t >= t.  A False anywhere rules
    out PB-companionship without any determinant work.
    """
    pattern = _require_b_family(matrix)
    basis = basis_polynomials(matrix)
    n = matrix.order
    degrees = [int(p.lambda_degree()) for p in basis]
    if degrees[n] != n:
        raise InternalInvariantError(f"p_{n} must have degree {n}")
    for k, (i_k, j_k) in enumerate(pattern.positions, start=1):
        expected = n - i_k + j_k - 1
        if degrees[n - k] != expected:
            raise InternalInvariantError(
                f"deg p_{n - k} = {degrees[n - k]} but the pattern forces {expected}"
            )
    for t in range(n):
        if degrees[t] > degrees[t + 1]:
            raise InternalInvariantError("basis degrees must be monotone")
    return [degrees[t] >= t for t in range(n + 1)]
