"""Shared generators and reference implementations for the test suite.

The reference routines here are deliberately naive pure-Python loops so they
stay independent of the vectorized production code they check.
"""

from __future__ import annotations

import random
from itertools import combinations, product

import numpy as np

from decisive.core import Coloring, CoveragePattern, Hypergraph


def random_hypergraph(
    rng: random.Random,
    n_range: tuple[int, int] = (4, 10),
    max_edges: int = 8,
    edge_size_range: tuple[int, int] = (2, 5),
) -> Hypergraph:
    """A random hypergraph with skew toward small, sparse instances."""
    n = rng.randint(*n_range)
    m = rng.randint(0, max_edges)
    edges = []
    for _ in range(m):
        lo, hi = edge_size_range
        size = rng.randint(lo, min(hi, n))
        edges.append(tuple(rng.sample(range(n), size)))
    return Hypergraph(n, tuple(edges))


def random_uniform_hypergraph(
    rng: random.Random, n: int, r: int, m: int
) -> Hypergraph:
    pool = list(combinations(range(n), r))
    return Hypergraph(n, tuple(rng.sample(pool, min(m, len(pool)))))


def random_pattern(
    rng: random.Random,
    n_range: tuple[int, int] = (4, 10),
    k_range: tuple[int, int] = (1, 5),
    locus_size_range: tuple[int, int] = (2, 6),
) -> CoveragePattern:
    n = rng.randint(*n_range)
    k = rng.randint(*k_range)
    loci = []
    for j in range(k):
        lo, hi = locus_size_range
        size = rng.randint(lo, min(hi, n))
        loci.append((f"L{j}", rng.sample(range(n), size)))
    return CoveragePattern.from_sets([f"t{i}" for i in range(n)], loci)


def duplicated_pattern(
    rng: random.Random, base_n: int, k: int, copies: int
) -> CoveragePattern:
    """A pattern whose incidence rows repeat, to exercise the kernel."""
    base_rows = [rng.randint(0, (1 << k) - 1) for _ in range(base_n)]
    rows = list(base_rows)
    for _ in range(copies):
        rows.append(rng.choice(base_rows))
    rng.shuffle(rows)
    loci = []
    for j in range(k):
        members = [i for i, row in enumerate(rows) if (row >> j) & 1]
        if members:
            loci.append((f"L{j}", members))
    if not loci:
        loci = [("L0", list(range(len(rows))))]
    return CoveragePattern.from_sets([f"t{i}" for i in range(len(rows))], loci)


def reference_no_rainbow_colorings(h: Hypergraph, r: int) -> list[Coloring]:
    """All surjective no-rainbow r-colorings by a plain nested loop."""
    out = []
    for assignment in product(range(1, r + 1), repeat=h.node_count):
        if set(assignment) != set(range(1, r + 1)):
            continue
        if any(
            set(range(1, r + 1)) <= {assignment[v] for v in edge}
            for edge in h.edges
        ):
            continue
        out.append(Coloring(r, assignment))
    return out


def cnf_satisfiable_exhaustive(formula, n: int) -> bool:
    """Satisfiability of an emitted formula by sweeping all 4^n colorings.

    Variable values are derived functionally from the node color bits, which
    is equivalent to full satisfiability for these encodings: auxiliaries are
    one-directionally defined, so a satisfying assignment exists iff the
    derived one for some coloring works.  Vectorized over colorings so the
    exhaustive acceptance sweep stays fast.
    """
    total = 4**n
    codes = np.arange(total, dtype=np.int64)
    divisors = 4 ** np.arange(n - 1, -1, -1, dtype=np.int64)
    colors = (codes[:, None] // divisors) % 4 + 1  # (total, n)

    value_cols: dict[int, np.ndarray] = {}
    for var, meaning in formula.legend.items():
        kind = meaning[0]
        if kind == "hi":
            value_cols[var] = ((colors[:, meaning[1]] - 1) >> 1) & 1 == 1
        elif kind == "lo":
            value_cols[var] = (colors[:, meaning[1]] - 1) & 1 == 1
        elif kind == "pair_eq":
            _e, u, v = meaning[1:]
            value_cols[var] = colors[:, u] == colors[:, v]
        elif kind == "color_absent":
            e_idx, q = meaning[1:]
            edge = formula.edges[e_idx]
            value_cols[var] = ~(colors[:, edge] == q).any(axis=1)
        elif kind == "node_color":
            i, q = meaning[1:]
            value_cols[var] = colors[:, i] == q
        else:
            raise AssertionError(f"unknown legend entry {meaning!r}")

    ok = np.ones(total, dtype=bool)
    for clause in formula.clauses:
        clause_val = np.zeros(total, dtype=bool)
        for lit in clause:
            col = value_cols[abs(lit)]
            clause_val |= col if lit > 0 else ~col
        ok &= clause_val
        if not ok.any():
            return False
    return bool(ok.any())
