"""Symbolic square matrices and unit lower Hessenberg (ULH) machinery.

A :class:`SymMatrix` is an immutable square grid of polynomials.  A matrix
is ULH when every superdiagonal entry is the constant 1 and everything
above the superdiagonal is 0.  Characteristic polynomials are computed by
an order-n recurrence valid for ULH matrices, cross-checkable against an
independent cofactor-expansion oracle.  Indices are 1-based throughout to
match the usual matrix conventions.

Also defined here: the cell order used to place the companion variables,
the :class:`Pattern` of variable positions, nilpotency as an exact
three-valued verdict, the backward-identity conjugation transform, and
the matrix text format.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InternalInvariantError, MatrixFormatError, PatternError
from .exprpoly import LAM, MINUS_INF, Polynomial, lam_power, parse_expr, x_indet, xvar
from .verdict import Condition, Verdict

Cell = tuple[int, int]


def prec_key(cell: Cell) -> tuple[int, int]:
    """Sort key for the placement order: diagonal index i - j, then row i."""
    i, j = cell
    return (i - j, i)


def order_prec(c1: Cell, c2: Cell) -> int:
    """Total order on cells: -1, 0 or 1 as c1 precedes, equals or follows c2."""
    k1, k2 = prec_key(c1), prec_key(c2)
    if k1 < k2:
        return -1
    if k1 > k2:
        return 1
    return 0


@dataclass(frozen=True)
class Window:
    """An inclusive 1-based index range; empty when hi < lo."""

    lo: int
    hi: int

    @property
    def is_empty(self) -> bool:
        return self.hi < self.lo

    def indices(self) -> range:
        return range(self.lo, self.hi + 1)

    def __len__(self) -> int:
        return 0 if self.is_empty else self.hi - self.lo + 1


@dataclass(frozen=True)
class Pattern:
    """The ordered positions of the companion variables x1..xn."""

    n: int
    positions: tuple[Cell, ...]

    def __post_init__(self):
        positions = tuple((int(i), int(j)) for i, j in self.positions)
        object.__setattr__(self, "positions", positions)
        if len(positions) != self.n:
            raise PatternError(
                f"pattern of order {self.n} needs {self.n} cells, got {len(positions)}"
            )
        for i, j in positions:
            if not (1 <= j <= i <= self.n):
                raise PatternError(f"cell ({i},{j}) is not on or below the diagonal")
        for a, b in zip(positions, positions[1:]):
            if not prec_key(a) < prec_key(b):
                raise PatternError(
                    f"cells {a} and {b} violate the placement order"
                )

    def cell_of(self, k: int) -> Cell:
        return self.positions[k - 1]

    def render(self) -> str:
        cells = " ".join(f"({i},{j})" for i, j in self.positions)
        return f"{self.n}; {cells}"


@dataclass(frozen=True)
class SymMatrix:
    """An immutable square matrix of polynomials (order 0 is the empty matrix)."""

    entries: tuple[tuple[Polynomial, ...], ...]

    def __post_init__(self):
        n = len(self.entries)
        for row in self.entries:
            if len(row) != n:
                raise ValueError("matrix must be square")

    # -- construction --------------------------------------------------------

    @staticmethod
    def from_rows(rows: Iterable[Iterable]) -> "SymMatrix":
        out = []
        for row in rows:
            cells = []
            for value in row:
                if isinstance(value, Polynomial):
                    cells.append(value)
                else:
                    cells.append(Polynomial.const(Fraction(value)))
            out.append(tuple(cells))
        return SymMatrix(tuple(out))

    @staticmethod
    def empty() -> "SymMatrix":
        return SymMatrix(())

    @staticmethod
    def zeros(n: int) -> "SymMatrix":
        zero = Polynomial.zero()
        return SymMatrix(tuple(tuple(zero for _ in range(n)) for _ in range(n)))

    @staticmethod
    def upper_shift(n: int) -> "SymMatrix":
        """U_n: ones on the superdiagonal, zeros elsewhere."""
        rows = [[Polynomial.zero()] * n for _ in range(n)]
        for i in range(n - 1):
            rows[i][i + 1] = Polynomial.one()
        return SymMatrix(tuple(tuple(row) for row in rows))

    @staticmethod
    def frobenius(n: int) -> "SymMatrix":
        """Variables along the last row, ones on the superdiagonal."""
        rows = [[Polynomial.zero()] * n for _ in range(n)]
        for i in range(n - 1):
            rows[i][i + 1] = Polynomial.one()
        for k in range(1, n + 1):
            rows[n - 1][n - k] = xvar(k)
        return SymMatrix(tuple(tuple(row) for row in rows))

    # -- access ---------------------------------------------------------------

    @property
    def order(self) -> int:
        return len(self.entries)

    def entry(self, i: int, j: int) -> Polynomial:
        return self.entries[i - 1][j - 1]

    def with_entry(self, i: int, j: int, value: Polynomial) -> "SymMatrix":
        rows = [list(row) for row in self.entries]
        rows[i - 1][j - 1] = value
        return SymMatrix(tuple(tuple(row) for row in rows))

    def substitute(self, bindings) -> "SymMatrix":
        return SymMatrix(
            tuple(tuple(e.substitute(bindings) for e in row) for row in self.entries)
        )

    # -- structure ------------------------------------------------------------

    def is_ulh(self) -> bool:
        n = self.order
        one = Polynomial.one()
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                e = self.entry(i, j)
                if j == i + 1:
                    if e != one:
                        return False
                elif not e.is_zero():
                    return False
        return True

    def submatrix(self, rows: Window, cols: Window) -> "SymMatrix":
        if rows.is_empty or cols.is_empty:
            return SymMatrix.empty()
        n = self.order
        for w in (rows, cols):
            if w.lo < 1 or w.hi > n:
                raise ValueError(f"window {w.lo}..{w.hi} out of range for order {n}")
        return SymMatrix(
            tuple(
                tuple(self.entry(i, j) for j in cols.indices())
                for i in rows.indices()
            )
        )

    def principal(self, lo: int, hi: int) -> "SymMatrix":
        """The submatrix A[lo..hi]; the empty matrix when hi < lo."""
        w = Window(lo, hi)
        return self.submatrix(w, w)

    def leading(self, k: int) -> "SymMatrix":
        return self.principal(1, k)

    def trailing(self, k: int) -> "SymMatrix":
        return self.principal(self.order - k + 1, self.order)

    def k_block(self, k: int) -> "SymMatrix":
        """Rows k..n and columns 1..k (top-right corner at the (k,k) entry)."""
        return self.submatrix(Window(k, self.order), Window(1, k))

    def subdiag_sum(self, k: int) -> Polynomial:
        """Sum of the entries (k+1,1), (k+2,2), ..., (n,n-k)."""
        n = self.order
        if not 0 <= k <= n - 1:
            raise ValueError(f"subdiagonal index {k} out of range for order {n}")
        total = Polynomial.zero()
        for c in range(1, n - k + 1):
            total = total + self.entry(k + c, c)
        return total

    def constant_part(self) -> "SymMatrix":
        """Every companion variable set to zero; parameters untouched."""
        bindings = {}
        for row in self.entries:
            for e in row:
                for ind in e.indets():
                    if ind.kind == "x":
                        bindings[ind] = 0
        if not bindings:
            return self
        return self.substitute(bindings)

    def has_x(self) -> bool:
        return any(e.has_x() for row in self.entries for e in row)

    # -- characteristic polynomials --------------------------------------------

    def charpoly(self) -> Polynomial:
        """det(lambda*I - A), exact; the empty matrix has charpoly 1.

        ULH matrices use the order-n recurrence over leading principal
        blocks (valid because all superdiagonal entries are 1):

            p_0 = 1,   p_k = (lambda - a_kk) p_{k-1} - sum_{j<k} a_kj p_{j-1}.

        Anything else falls back to cofactor expansion.
        """
        n = self.order
        if n == 0:
            return Polynomial.one()
        if not self.is_ulh():
            return _charpoly_cofactor(self)
        ps = [Polynomial.one()]
        for k in range(1, n + 1):
            acc = (LAM - self.entry(k, k)) * ps[k - 1]
            for j in range(1, k):
                a = self.entry(k, j)
                if not a.is_zero():
                    acc = acc - a * ps[j - 1]
            ps.append(acc)
        return ps[n]

    def leading_charpolys(self) -> list[Polynomial]:
        """Charpolys of all leading principal submatrices (ULH recurrence)."""
        n = self.order
        if not self.is_ulh():
            raise ValueError("leading_charpolys requires a ULH matrix")
        ps = [Polynomial.one()]
        for k in range(1, n + 1):
            acc = (LAM - self.entry(k, k)) * ps[k - 1]
            for j in range(1, k):
                a = self.entry(k, j)
                if not a.is_zero():
                    acc = acc - a * ps[j - 1]
            ps.append(acc)
        return ps

    def charpoly_oracle(self) -> Polynomial:
        """Independent cofactor-expansion charpoly, for cross-validation."""
        if self.order > 8:
            raise ValueError("cofactor oracle limited to order <= 8")
        return _charpoly_cofactor(self)

    # -- verdict-level predicates ------------------------------------------------

    def is_nilpotent(self) -> Verdict:
        """Exact nilpotency: charpoly equals lambda**order.

        Parametric constant matrices produce a conditional verdict listing
        the coefficient polynomials that must vanish.  Companion variables
        are rejected: nilpotency is only asked of constant parts.
        """
        if self.has_x():
            raise ValueError("nilpotency is only defined for x-free matrices")
        n = self.order
        residual = self.charpoly() - lam_power(n)
        if residual.is_zero():
            return Verdict.yes()
        conditions = []
        for d in range(n):
            c = residual.lambda_coeff(d)
            if c.is_zero():
                continue
            if c.is_constant():
                return Verdict.no()
            conditions.append(Condition.normalized(c, "zero"))
        if not conditions:
            raise InternalInvariantError("nonzero residual without coefficients")
        return Verdict.conditional(conditions)

    # -- transforms ----------------------------------------------------------------

    def j_conjugate_transpose(self) -> "SymMatrix":
        """(J A J)^T for the backward identity J; an involution on ULH matrices."""
        n = self.order
        return SymMatrix(
            tuple(
                tuple(self.entry(n + 1 - j, n + 1 - i) for j in range(1, n + 1))
                for i in range(1, n + 1)
            )
        )

    def matmul(self, other: "SymMatrix") -> "SymMatrix":
        n = self.order
        if other.order != n:
            raise ValueError("order mismatch")
        rows = []
        for i in range(1, n + 1):
            row = []
            for j in range(1, n + 1):
                acc = Polynomial.zero()
                for k in range(1, n + 1):
                    a = self.entry(i, k)
                    b = other.entry(k, j)
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                row.append(acc)
            rows.append(tuple(row))
        return SymMatrix(tuple(rows))

    def __matmul__(self, other):
        return self.matmul(other)

    # -- pattern extraction -----------------------------------------------------------

    def extract_pattern(self) -> Pattern:
        """Locate each companion variable; each must appear once, bare.

        Raises :class:`PatternError` when a variable is missing, appears in
        several entries, sits inside a compound expression, or when the
        resulting positions violate the placement order.
        """
        n = self.order
        found: dict[int, Cell] = {}
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                e = self.entry(i, j)
                ks = sorted(ind.index for ind in e.indets() if ind.kind == "x")
                if not ks:
                    continue
                if len(ks) > 1 or e != xvar(ks[0]):
                    raise PatternError(
                        f"entry ({i},{j}) embeds variables {ks} in a compound expression"
                    )
                k = ks[0]
                if k > n:
                    raise PatternError(f"variable x{k} exceeds the order {n}")
                if k in found:
                    raise PatternError(f"variable x{k} appears at {found[k]} and ({i},{j})")
                found[k] = (i, j)
        missing = [k for k in range(1, n + 1) if k not in found]
        if missing:
            raise PatternError(f"missing variables: {['x%d' % k for k in missing]}")
        return Pattern(n, tuple(found[k] for k in range(1, n + 1)))

    def __str__(self):
        if self.order == 0:
            return "[]"
        cells = [[e.render(compact=True) for e in row] for row in self.entries]
        width = max(len(c) for row in cells for c in row)
        return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)


def _charpoly_cofactor(matrix: SymMatrix) -> Polynomial:
    """det(lambda*I - A) by first-row cofactor expansion (memoized on columns)."""
    n = matrix.order
    lam_minus = []
    for i in range(n):
        row = []
        for j in range(n):
            e = -matrix.entries[i][j]
            if i == j:
                e = e + LAM
            row.append(e)
        lam_minus.append(tuple(row))
    memo: dict[tuple[int, ...], Polynomial] = {}

    def minor_det(row: int, cols: tuple[int, ...]) -> Polynomial:
        if not cols:
            return Polynomial.one()
        cached = memo.get(cols)
        if cached is not None:
            return cached
        total = Polynomial.zero()
        sign = 1
        for idx, c in enumerate(cols):
            e = lam_minus[row][c]
            if not e.is_zero():
                sub = minor_det(row + 1, cols[:idx] + cols[idx + 1:])
                term = e * sub
                total = total + term if sign > 0 else total - term
            sign = -sign
        memo[cols] = total
        return total

    return minor_det(0, tuple(range(n)))


# ---------------------------------------------------------------------------
# Matrix text format
# ---------------------------------------------------------------------------

def parse_matrix_text(text: str) -> SymMatrix:
    """Parse the matrix text format.

    First significant line is ``order <n>``; then n lines of n
    whitespace-separated entry expressions.  ``#`` starts a comment.
    """
    significant: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            significant.append((lineno, line))
    if not significant:
        raise MatrixFormatError("empty matrix text")
    lineno, header = significant[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "order":
        raise MatrixFormatError("expected header 'order <n>'", lineno)
    try:
        n = int(parts[1])
    except ValueError:
        raise MatrixFormatError(f"bad order {parts[1]!r}", lineno) from None
    if n < 0:
        raise MatrixFormatError(f"bad order {n}", lineno)
    body = significant[1:]
    if len(body) != n:
        raise MatrixFormatError(f"expected {n} rows, found {len(body)}", lineno)
    rows = []
    for lineno, line in body:
        tokens = line.split()
        if len(tokens) != n:
            raise MatrixFormatError(
                f"expected {n} entries, found {len(tokens)}", lineno
            )
        row = []
        for token in tokens:
            try:
                row.append(parse_expr(token, n))
            except ValueError as exc:
                raise MatrixFormatError(f"entry {token!r}: {exc}", lineno) from exc
        rows.append(tuple(row))
    return SymMatrix(tuple(rows))


def render_matrix_text(matrix: SymMatrix) -> str:
    """Render in the matrix text format (compact entries, aligned columns)."""
    n = matrix.order
    lines = [f"order {n}"]
    cells = [[e.render(compact=True) for e in row] for row in matrix.entries]
    if cells:
        widths = [max(len(cells[i][j]) for i in range(n)) for j in range(n)]
        for row in cells:
            lines.append(" ".join(c.rjust(w) for c, w in zip(row, widths)))
    return "\n".join(lines) + "\n"
