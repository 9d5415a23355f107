"""Shared builders for the worked matrices and random generators."""

from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path

import pytest

from ulhcompanion import Pattern, SymMatrix, base_matrix
from ulhcompanion.exprpoly import Polynomial, par, xvar
from ulhcompanion.matrices import parse_matrix_text

MATRICES_DIR = Path(__file__).resolve().parent.parent / "matrices"

# The five separating order-5 patterns, one per family gap.
PATTERN_H_ONLY = Pattern(5, ((1, 1), (3, 3), (2, 1), (5, 4), (5, 2)))
PATTERN_D_35355 = Pattern(5, ((3, 3), (5, 4), (3, 1), (5, 2), (5, 1)))
PATTERN_C_34345 = Pattern(5, ((3, 3), (4, 3), (3, 1), (4, 1), (5, 1)))
PATTERN_G_34355 = Pattern(5, ((3, 3), (4, 3), (3, 1), (5, 2), (5, 1)))
PATTERN_F_34445 = Pattern(5, ((3, 3), (4, 3), (4, 2), (4, 1), (5, 1)))
PATTERN_B_SEP = Pattern(5, ((3, 1), (4, 2), (4, 1), (5, 2), (5, 1)))

PATTERN_G7 = Pattern(7, ((4, 4), (4, 3), (6, 4), (5, 2), (5, 1), (7, 2), (7, 1)))


def load_matrix(name: str) -> SymMatrix:
    return parse_matrix_text((MATRICES_DIR / name).read_text())


@pytest.fixture
def sec4_7x7() -> SymMatrix:
    return load_matrix("sec4_7x7.mat")


@pytest.fixture
def sec4_6x6() -> SymMatrix:
    return load_matrix("sec4_6x6.mat")


@pytest.fixture
def gtilde_printed() -> SymMatrix:
    return load_matrix("gtilde_4465577.mat")


@pytest.fixture
def case1_10x10() -> SymMatrix:
    return load_matrix("case1_10x10.mat")


@pytest.fixture
def njl4() -> SymMatrix:
    return load_matrix("njl4_134.mat")


# ---------------------------------------------------------------------------
# Random generators (all deterministic through an explicit Random instance)
# ---------------------------------------------------------------------------

def random_ulh(rng: random.Random, n: int, with_params: bool = True) -> SymMatrix:
    """Random ULH matrix with entries from {0, +-1, +-2, x-variables, parameters}."""
    pool = [0, 0, 0, 0, 1, -1, 2, -2]
    rows = [[Polynomial.zero()] * n for _ in range(n)]
    for i in range(n - 1):
        rows[i][i + 1] = Polynomial.one()
    for i in range(1, n + 1):
        for j in range(1, i + 1):
            roll = rng.random()
            if roll < 0.15:
                rows[i - 1][j - 1] = xvar(rng.randint(1, n))
            elif with_params and roll < 0.25:
                rows[i - 1][j - 1] = par(rng.choice("abcd"))
            else:
                rows[i - 1][j - 1] = Polynomial.const(rng.choice(pool))
    return SymMatrix(tuple(tuple(r) for r in rows))


def random_c_pattern(rng: random.Random, n: int) -> Pattern:
    """Uniform-ish random pattern of the C family."""
    i1 = rng.randint(1, n)
    indices = [i1]
    for k in range(2, n + 1):
        lo, hi = max(k, i1), min(n, i1 + k - 1)
        indices.append(rng.randint(lo, hi))
    return Pattern(n, tuple((i, i - k) for k, i in enumerate(indices)))


def random_b_pattern(rng: random.Random, n: int) -> Pattern:
    """Random pattern of the B family: n cells inside one t-block."""
    ts = [t for t in range(1, n + 1) if (n - t + 1) * t >= n]
    t = rng.choice(ts)
    block = [(i, j) for i in range(t, n + 1) for j in range(1, t + 1)]
    cells = rng.sample(block, n)
    cells.sort(key=lambda c: (c[0] - c[1], c[0]))
    return Pattern(n, tuple(cells))


def random_superpattern(
    rng: random.Random,
    pattern: Pattern,
    density: float = 0.3,
    pool=(1, -1, 2, Fraction(1, 2)),
) -> SymMatrix:
    """Base matrix with random extra nonzero constants below the superdiagonal."""
    matrix = base_matrix(pattern)
    n = pattern.n
    taken = set(pattern.positions)
    for i in range(1, n + 1):
        for j in range(1, i + 1):
            if (i, j) in taken:
                continue
            if rng.random() < density:
                matrix = matrix.with_entry(i, j, Polynomial.const(rng.choice(pool)))
    return matrix
