"""Pattern enumeration, digraphs, and the mixed-superpattern search.

Enumeration walks all n-subsets of the cells on or below the diagonal in
placement order, so every valid pattern appears exactly once and output
is deterministic.  Each matrix also induces a digraph (an edge per
nonzero entry); the five separating example patterns of the families can
be told apart by digraph isomorphism alone.

The search harness gathers evidence for the question whether a companion
matrix can be produced from an F-family base by changing at least one
zero entry inside the i1-block *and* at least one zero entry above the
superdiagonal.  For every such choice of cells it builds the parametric
matrix, extracts the polynomial conditions for companionship, and
propagates parameters that are provably forced to zero.  The propagation
is sound but incomplete; cases it cannot close are re-checked by sampling
random rational points, and any surviving candidate is re-verified with
the direct companion test before being reported.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import networkx as nx

from .companion import companion_target, is_companion_direct
from .errors import InternalInvariantError
from .exprpoly import Polynomial, param_indet
from .families import base_matrix, classify_pattern
from .matrices import Pattern, SymMatrix, parse_matrix_text, prec_key, render_matrix_text

FAMILIES = ("H", "D", "C", "G", "F", "B")

_ISO_MAX_VERTICES = 9
_SAMPLE_POINTS = 50


@dataclass(frozen=True)
class Digraph:
    n: int
    edges: frozenset[tuple[int, int]]

    def to_json(self):
        return {"n": self.n, "edges": sorted(list(e) for e in self.edges)}


def build_digraph(matrix: SymMatrix) -> Digraph:
    """Vertex i points to vertex j exactly when the (i,j) entry is nonzero."""
    n = matrix.order
    edges = {
        (i, j)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        if not matrix.entry(i, j).is_zero()
    }
    return Digraph(n, frozenset(edges))


def digraphs_isomorphic(g1: Digraph, g2: Digraph) -> bool:
    """Backtracking isomorphism test for small digraphs (n <= 9)."""
    if g1.n > _ISO_MAX_VERTICES or g2.n > _ISO_MAX_VERTICES:
        raise ValueError(f"isomorphism test limited to {_ISO_MAX_VERTICES} vertices")
    if g1.n != g2.n or len(g1.edges) != len(g2.edges):
        return False
    nx1, nx2 = nx.DiGraph(), nx.DiGraph()
    nx1.add_nodes_from(range(1, g1.n + 1))
    nx2.add_nodes_from(range(1, g2.n + 1))
    nx1.add_edges_from(g1.edges)
    nx2.add_edges_from(g2.edges)
    return nx.is_isomorphic(nx1, nx2)


def all_cells(n: int) -> list[tuple[int, int]]:
    """Cells on or below the diagonal, in placement order."""
    cells = [(i, j) for i in range(1, n + 1) for j in range(1, i + 1)]
    cells.sort(key=prec_key)
    return cells


def enumerate_patterns(n: int, family: str) -> Iterator[Pattern]:
    """All patterns of one family, each exactly once, in placement-lex order."""
    if n < 1:
        raise ValueError("enumeration requires order >= 1")
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    for combo in itertools.combinations(all_cells(n), n):
        pattern = Pattern(n, combo)
        if classify_pattern(pattern).in_family(family):
            yield pattern


# ---------------------------------------------------------------------------
# Mixed-superpattern evidence search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SearchResult:
    examined: int
    counterexamples: tuple[SymMatrix, ...]
    forced_zero: tuple[str, ...]
    status: str  # "exhausted" or "budget-reached"
    cases_forced: int
    cases_contradiction: int
    cases_sampled: int

    def to_json(self):
        return {
            "examined": self.examined,
            "counterexamples": [render_matrix_text(m) for m in self.counterexamples],
            "forced_zero": list(self.forced_zero),
            "status": self.status,
            "cases_forced": self.cases_forced,
            "cases_contradiction": self.cases_contradiction,
            "cases_sampled": self.cases_sampled,
        }


def _residual_conditions(matrix: SymMatrix) -> list[Polynomial]:
    residual = matrix.charpoly() - companion_target(matrix.order)
    return [c for c in residual.split_by_parameters().values() if not c.is_zero()]


def _propagate_forced(conditions: list[Polynomial]) -> tuple[list[Polynomial], set[str]]:
    """Force parameters that appear as sole linear terms of a condition."""
    forced: set[str] = set()
    while True:
        fresh = set()
        for cond in conditions:
            if cond.term_count() != 1:
                continue
            (mono, _coeff), = cond.items()
            if len(mono) == 1 and mono[0][1] == 1 and mono[0][0].kind == "param":
                name = mono[0][0].name
                if name not in forced:
                    fresh.add(name)
        if not fresh:
            return conditions, forced
        forced |= fresh
        bindings = {param_indet(name): 0 for name in fresh}
        conditions = [
            c for c in (cond.substitute(bindings) for cond in conditions)
            if not c.is_zero()
        ]


def _sample_point(rng: random.Random) -> Fraction:
    numerator = rng.choice([v for v in range(-9, 10) if v != 0])
    denominator = rng.randint(1, 4)
    return Fraction(numerator, denominator)


def _case_matrix(pattern: Pattern, cells: tuple[tuple[int, int], ...]) -> SymMatrix:
    matrix = base_matrix(pattern)
    for i, j in cells:
        matrix = matrix.with_entry(i, j, Polynomial.from_indet(param_indet(f"c{i}_{j}")))
    return matrix


def _analyze_case(pattern: Pattern, block_cells, above_cells, case_seed: str):
    """Returns (outcome, forced_names, counterexample_text_or_None)."""
    cells = tuple(block_cells) + tuple(above_cells)
    matrix = _case_matrix(pattern, cells)
    above_names = {f"c{i}_{j}" for i, j in above_cells}
    conditions = _residual_conditions(matrix)
    conditions, forced = _propagate_forced(conditions)

    if forced & above_names:
        return "forced", forced, None
    if any(c.is_constant() for c in conditions):
        return "contradiction", forced, None

    def concrete(assignment: dict[str, Fraction]) -> SymMatrix:
        bindings = {param_indet(name): Polynomial.const(value) for name, value in assignment.items()}
        bindings.update({param_indet(name): Polynomial.zero() for name in forced})
        return matrix.substitute(bindings)

    free_names = sorted(
        {ind.name for c in conditions for ind in c.indets() if ind.kind == "param"}
        | ({f"c{i}_{j}" for i, j in cells} - forced)
    )
    if not conditions:
        candidate = concrete({name: Fraction(1) for name in free_names})
        if not _is_mixed_counterexample(candidate, pattern, above_cells):
            raise InternalInvariantError(
                "identically vanishing residual must specialize to a companion matrix"
            )
        return "counterexample", forced, render_matrix_text(candidate)

    rng = random.Random(case_seed)
    for _ in range(_SAMPLE_POINTS):
        assignment = {name: _sample_point(rng) for name in free_names}
        if all(
            c.substitute({param_indet(n): Polynomial.const(v) for n, v in assignment.items()}).is_zero()
            for c in conditions
        ):
            candidate = concrete(assignment)
            if _is_mixed_counterexample(candidate, pattern, above_cells):
                return "counterexample", forced, render_matrix_text(candidate)
    return "sampled", forced, None


def _is_mixed_counterexample(candidate: SymMatrix, pattern: Pattern, above_cells) -> bool:
    """Re-verify: companion, and genuinely nonzero above the superdiagonal."""
    if any(candidate.entry(i, j).is_zero() for i, j in above_cells):
        return False
    return is_companion_direct(candidate).verdict.is_yes


def _pattern_cases(pattern: Pattern):
    label = classify_pattern(pattern)
    n = pattern.n
    i1 = label.i1
    taken = set(pattern.positions)
    block_zeros = [
        (i, j)
        for i in range(i1, n + 1)
        for j in range(1, i1 + 1)
        if (i, j) not in taken
    ]
    above_zeros = [(i, j) for i in range(1, n + 1) for j in range(i + 2, n + 1)]
    for r1 in range(1, len(block_zeros) + 1):
        for s1 in itertools.combinations(block_zeros, r1):
            for r2 in range(1, len(above_zeros) + 1):
                for s2 in itertools.combinations(above_zeros, r2):
                    yield s1, s2


def _search_pattern_worker(args):
    """Process one F pattern; plain-data in and out so it can cross processes."""
    n, positions, max_cases = args
    pattern = Pattern(n, positions)
    examined = 0
    forced_all: set[str] = set()
    counterexamples: list[str] = []
    tallies = {"forced": 0, "contradiction": 0, "sampled": 0}
    truncated = False
    for case_idx, (s1, s2) in enumerate(_pattern_cases(pattern)):
        if max_cases is not None and examined >= max_cases:
            truncated = True
            break
        examined += 1
        seed = f"{pattern.render()}|{case_idx}"
        outcome, forced, counterexample = _analyze_case(pattern, s1, s2, seed)
        forced_all |= forced
        if outcome == "counterexample":
            counterexamples.append(counterexample)
        else:
            tallies[outcome] += 1
    return {
        "examined": examined,
        "forced": sorted(forced_all),
        "counterexamples": counterexamples,
        "tallies": tallies,
        "truncated": truncated,
    }


def fiedler_mixed_superpattern_search(
    n: int,
    budget: int | None = None,
    jobs: int = 1,
) -> SearchResult:
    """Sweep all mixed superpattern cases of every F pattern of order n.

    ``budget`` caps the total number of (pattern, cell-choice) cases;
    hitting it marks the result status "budget-reached".  With ``jobs > 1``
    (only honored when no budget is set, to keep its semantics exact)
    patterns are distributed across worker processes.
    """
    if not 2 <= n <= 6:
        raise ValueError("mixed search supports orders 2..6")
    patterns = list(enumerate_patterns(n, "F"))
    results = []
    if jobs > 1 and budget is None:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(
                pool.map(
                    _search_pattern_worker,
                    [(n, p.positions, None) for p in patterns],
                )
            )
    else:
        remaining = budget
        for p in patterns:
            out = _search_pattern_worker((n, p.positions, remaining))
            results.append(out)
            if remaining is not None:
                remaining -= out["examined"]
                if remaining <= 0:
                    break

    examined = sum(r["examined"] for r in results)
    forced = sorted(set().union(*[set(r["forced"]) for r in results])) if results else []
    counterexamples = tuple(
        parse_matrix_text(text) for r in results for text in r["counterexamples"]
    )
    status = "budget-reached" if any(r["truncated"] for r in results) else "exhausted"
    return SearchResult(
        examined=examined,
        counterexamples=counterexamples,
        forced_zero=tuple(forced),
        status=status,
        cases_forced=sum(r["tallies"]["forced"] for r in results),
        cases_contradiction=sum(r["tallies"]["contradiction"] for r in results),
        cases_sampled=sum(r["tallies"]["sampled"] for r in results),
    )
