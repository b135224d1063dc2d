"""Solver-model emitters: 0-1 ILP in LP format and CNF in DIMACS format.

No solver is bundled; both emitters come with self-contained evaluators so
witnesses can be checked without external tools.  The ILP is feasible iff the
pattern is non-decisive.  The CNF encodes node colors as two bits per node
(00..11 for colors 1..4) and is satisfiable iff a no-rainbow 4-coloring
exists; surjectivity is either encoded with indicator auxiliaries ("aux") or
by emitting one formula per fixed color-representative triple ("enumerate").
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Mapping, Optional

from .core import Coloring, CoveragePattern, Hypergraph
from .errors import InputFormatError, InvalidInstanceError, SizeLimitError

ENUMERATE_NODE_CAP = 12


# --------------------------------------------------------------------------
# ILP
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class IlpRow:
    """One linear constraint: sum(coeff * var) <sense> rhs."""

    name: str
    terms: tuple[tuple[str, int], ...]
    sense: str  # "=", "<=", ">="
    rhs: int
    block: int  # 1..4, matching the constraint family
    index: int  # position within the block, 0-based


@dataclass(frozen=True)
class IlpModel:
    """Feasibility program over binaries x_i_q (taxon colors) and z_j_q
    (locus j misses color q)."""

    n: int
    k: int
    variables: tuple[str, ...]
    rows: tuple[IlpRow, ...]

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    @property
    def num_columns(self) -> int:
        return len(self.variables)

    @property
    def num_nonzeros(self) -> int:
        return sum(len(row.terms) for row in self.rows)

    def to_lp_text(self) -> str:
        lines = ["Minimize", " obj: 0", "Subject To"]
        for row in self.rows:
            rendered = " + ".join(
                name if coeff == 1 else f"{coeff} {name}" for name, coeff in row.terms
            )
            lines.append(f" {row.name}: {rendered} {row.sense} {row.rhs}")
        lines.append("Binary")
        for var in self.variables:
            lines.append(f" {var}")
        lines.append("End")
        return "\n".join(lines) + "\n"


def _xvar(i: int, q: int) -> str:
    return f"x_{i + 1}_{q}"


def _zvar(j: int, q: int) -> str:
    return f"z_{j + 1}_{q}"


def emit_ilp(pattern: CoveragePattern) -> IlpModel:
    """The four constraint blocks, emitted in order.

    (1) each taxon gets exactly one color; (2) each color is used; (3) z_j_q
    is forced to "color q unused in locus j", as two inequalities; (4) each
    locus misses at least one color.
    """
    n, k = pattern.n, pattern.k
    if n < 4:
        raise InvalidInstanceError("the ILP needs at least 4 taxa")
    variables = tuple(_xvar(i, q) for i in range(n) for q in range(1, 5)) + tuple(
        _zvar(j, q) for j in range(k) for q in range(1, 5)
    )
    rows: list[IlpRow] = []

    def add(terms, sense, rhs, block, index):
        rows.append(
            IlpRow(f"c{len(rows) + 1}", tuple(terms), sense, rhs, block, index)
        )

    for i in range(n):
        add([(_xvar(i, q), 1) for q in range(1, 5)], "=", 1, 1, i)
    for q in range(1, 5):
        add([(_xvar(i, q), 1) for i in range(n)], ">=", 1, 2, q - 1)
    for j, (_name, members) in enumerate(pattern.loci):
        for q in range(1, 5):
            covered = [(_xvar(i, q), 1) for i in members]
            add(covered + [(_zvar(j, q), 1)], ">=", 1, 3, 8 * j + 2 * (q - 1))
            add(covered + [(_zvar(j, q), n)], "<=", n, 3, 8 * j + 2 * (q - 1) + 1)
    for j in range(k):
        add([(_zvar(j, q), 1) for q in range(1, 5)], ">=", 1, 4, j)
    return IlpModel(n=n, k=k, variables=variables, rows=tuple(rows))


def ilp_assignment_from_coloring(
    pattern: CoveragePattern, coloring: Coloring
) -> dict[str, int]:
    """The 0-1 assignment a 4-coloring induces on the model variables."""
    values: dict[str, int] = {}
    for i in range(pattern.n):
        for q in range(1, 5):
            values[_xvar(i, q)] = int(coloring.assignment[i] == q)
    for j, (_name, members) in enumerate(pattern.loci):
        used = {coloring.assignment[i] for i in members}
        for q in range(1, 5):
            values[_zvar(j, q)] = int(q not in used)
    return values


def evaluate_ilp(
    model: IlpModel, assignment: Mapping[str, int]
) -> Optional[IlpRow]:
    """First violated row, or None if the assignment is feasible."""
    for var in model.variables:
        if var not in assignment:
            raise InputFormatError(f"assignment is missing variable {var}")
        if assignment[var] not in (0, 1):
            raise InputFormatError(f"variable {var} is not 0/1")
    for row in model.rows:
        value = sum(coeff * assignment[name] for name, coeff in row.terms)
        ok = (
            value == row.rhs
            if row.sense == "="
            else value <= row.rhs
            if row.sense == "<="
            else value >= row.rhs
        )
        if not ok:
            return row
    return None


# --------------------------------------------------------------------------
# CNF
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CnfFormula:
    """Clause list plus a legend giving every variable a semantic meaning.

    Legend entries: ("hi", i) and ("lo", i) are the color bits of node i
    (color = 1 + 2*hi + lo); ("pair_eq", e, u, v) means nodes u and v of edge
    e share a color; ("color_absent", e, q) means color q is unused on edge e;
    ("node_color", i, q) means node i has color q.
    """

    node_count: int
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]
    legend: dict[int, tuple] = field(repr=False)
    edges: tuple[tuple[int, ...], ...] = field(repr=False)

    def to_dimacs(self) -> str:
        lines = [
            f"c var {var} = {' '.join(str(part) for part in meaning)}"
            for var, meaning in sorted(self.legend.items())
        ]
        lines.append(f"p cnf {self.num_vars} {len(self.clauses)}")
        for clause in self.clauses:
            lines.append(" ".join(str(lit) for lit in clause) + " 0")
        return "\n".join(lines) + "\n"


def _color_bits(q: int) -> tuple[int, int]:
    return (q - 1) >> 1, (q - 1) & 1


def _bit_literal(var: int, bit: int) -> int:
    return var if bit else -var


class _CnfBuilder:
    def __init__(self, h: Hypergraph) -> None:
        self.h = h
        self.legend: dict[int, tuple] = {}
        self.clauses: list[tuple[int, ...]] = []
        self.num_vars = 0
        self.hi: list[int] = []
        self.lo: list[int] = []
        for i in range(h.node_count):
            self.hi.append(self.new_var(("hi", i)))
            self.lo.append(self.new_var(("lo", i)))

    def new_var(self, meaning: tuple) -> int:
        self.num_vars += 1
        self.legend[self.num_vars] = meaning
        return self.num_vars

    def add(self, *literals: int) -> None:
        self.clauses.append(tuple(literals))

    def node_color_literals(self, i: int, q: int) -> tuple[int, int]:
        """Two literals whose conjunction says node i has color q."""
        hi_bit, lo_bit = _color_bits(q)
        return _bit_literal(self.hi[i], hi_bit), _bit_literal(self.lo[i], lo_bit)

    def add_edge_constraints(self) -> list[tuple[int, ...]]:
        """No edge sees all four colors; edges smaller than 4 are skipped."""
        emitted = []
        for edge in self.h.edges:
            if len(edge) < 4:
                continue
            e_idx = len(emitted)  # index into the emitted edge list
            emitted.append(edge)
            if len(edge) == 4:
                pair_vars = []
                for u, v in combinations(edge, 2):
                    a = self.new_var(("pair_eq", e_idx, u, v))
                    pair_vars.append(a)
                    self.add(-a, -self.hi[u], self.hi[v])
                    self.add(-a, self.hi[u], -self.hi[v])
                    self.add(-a, -self.lo[u], self.lo[v])
                    self.add(-a, self.lo[u], -self.lo[v])
                self.add(*pair_vars)
            else:
                # wider edges: some color is absent from the whole edge
                absent_vars = []
                for q in range(1, 5):
                    a = self.new_var(("color_absent", e_idx, q))
                    absent_vars.append(a)
                    for v in edge:
                        l1, l2 = self.node_color_literals(v, q)
                        self.add(-a, -l1, -l2)
                self.add(*absent_vars)
        return emitted

    def add_surjectivity_aux(self) -> None:
        by_color: dict[int, list[int]] = {q: [] for q in range(1, 5)}
        for i in range(self.h.node_count):
            for q in range(1, 5):
                s = self.new_var(("node_color", i, q))
                by_color[q].append(s)
                l1, l2 = self.node_color_literals(i, q)
                self.add(-s, l1)
                self.add(-s, l2)
        for q in range(1, 5):
            self.add(*by_color[q])

    def fix_node_color(self, i: int, q: int) -> None:
        l1, l2 = self.node_color_literals(i, q)
        self.add(l1)
        self.add(l2)

    def build(self, edges: list[tuple[int, ...]]) -> CnfFormula:
        return CnfFormula(
            node_count=self.h.node_count,
            num_vars=self.num_vars,
            clauses=tuple(self.clauses),
            legend=self.legend,
            edges=tuple(edges),
        )


def emit_cnf(h: Hypergraph, surjectivity_mode: str = "aux"):
    """CNF whose satisfiability is equivalent to 4-NRC of ``h``.

    Mode "aux" returns one CnfFormula with surjectivity auxiliaries; mode
    "enumerate" returns a list of formulas, one per choice of representative
    nodes fixed to colors 2, 3, 4 (node 0 is fixed to color 1), and the
    instance has a no-rainbow 4-coloring iff some formula is satisfiable.
    """
    if h.node_count < 4:
        raise InvalidInstanceError("the CNF encoding needs at least 4 nodes")
    if surjectivity_mode == "aux":
        builder = _CnfBuilder(h)
        edges = builder.add_edge_constraints()
        builder.add_surjectivity_aux()
        return builder.build(edges)
    if surjectivity_mode == "enumerate":
        if h.node_count > ENUMERATE_NODE_CAP:
            raise SizeLimitError(
                f"enumerate mode caps at {ENUMERATE_NODE_CAP} nodes, "
                f"got {h.node_count}"
            )
        formulas = []
        others = range(1, h.node_count)
        for u, w, t in permutations(others, 3):
            builder = _CnfBuilder(h)
            edges = builder.add_edge_constraints()
            builder.fix_node_color(0, 1)
            builder.fix_node_color(u, 2)
            builder.fix_node_color(w, 3)
            builder.fix_node_color(t, 4)
            formulas.append(builder.build(edges))
        return formulas
    raise InputFormatError(f"unknown surjectivity mode {surjectivity_mode!r}")


def cnf_assignment_from_coloring(
    formula: CnfFormula, coloring: Coloring
) -> dict[int, bool]:
    """Functionally derived truth values for every variable of the formula."""
    c = coloring.assignment
    values: dict[int, bool] = {}
    for var, meaning in formula.legend.items():
        kind = meaning[0]
        if kind == "hi":
            values[var] = bool((c[meaning[1]] - 1) >> 1 & 1)
        elif kind == "lo":
            values[var] = bool((c[meaning[1]] - 1) & 1)
        elif kind == "pair_eq":
            _e, u, v = meaning[1:]
            values[var] = c[u] == c[v]
        elif kind == "color_absent":
            e_idx, q = meaning[1:]
            values[var] = all(c[v] != q for v in formula.edges[e_idx])
        elif kind == "node_color":
            i, q = meaning[1:]
            values[var] = c[i] == q
        else:  # pragma: no cover
            raise InputFormatError(f"unknown legend entry {meaning!r}")
    return values


def violated_clause(
    formula: CnfFormula, assignment: Mapping[int, bool]
) -> Optional[int]:
    """Index of the first unsatisfied clause, or None."""
    for idx, clause in enumerate(formula.clauses):
        if not any(
            assignment[abs(lit)] == (lit > 0) for lit in clause
        ):
            return idx
    return None


def cnf_holds(formula: CnfFormula, coloring: Coloring) -> bool:
    """Whether the functionally derived assignment satisfies every clause."""
    return violated_clause(formula, cnf_assignment_from_coloring(formula, coloring)) is None


def decode_cnf(formula: CnfFormula, assignment: Mapping[int, bool]) -> Coloring:
    """Read node colors out of the bit variables (00->1 .. 11->4)."""
    colors = []
    bit_vars = {
        meaning: var for var, meaning in formula.legend.items() if meaning[0] in ("hi", "lo")
    }
    for i in range(formula.node_count):
        hi = assignment[bit_vars[("hi", i)]]
        lo = assignment[bit_vars[("lo", i)]]
        colors.append(1 + 2 * int(hi) + int(lo))
    return Coloring(4, tuple(colors))
