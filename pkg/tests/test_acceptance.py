"""Acceptance gate: nine end-to-end checks, one pass/fail line each.

Each check prints a single summary line even under pytest capture so the
suite output doubles as an acceptance report.  Tolerances are exact unless a
runtime budget is stated in the check.
"""

import random
import time
from itertools import combinations
from math import comb

import numpy as np
import pytest

from conftest import (
    cnf_satisfiable_exhaustive,
    duplicated_pattern,
    random_hypergraph,
    random_pattern,
)
from decisive.bounds import a_closed, a_recurrence, star_hypergraph
from decisive.core import (
    Coloring,
    CoveragePattern,
    Hypergraph,
    build_hypergraph,
    connected_components,
    verify_no_rainbow,
)
from decisive.emit import (
    cnf_holds,
    emit_cnf,
    emit_ilp,
    evaluate_ilp,
    ilp_assignment_from_coloring,
)
from decisive.nrc import nrc2, nrc4
from decisive.oracle import brute_force_nrc
from decisive.pipeline import coloring_from_partition, decide, decisive_subset
from decisive.reduction import fpt_nrc4, reduce_pattern


def _report(capsys, number: int, title: str, body) -> None:
    try:
        body()
    except BaseException:
        with capsys.disabled():
            print(f"acceptance {number} ({title}): FAIL")
        raise
    with capsys.disabled():
        print(f"acceptance {number} ({title}): PASS")


def pattern_from_hypergraph(h: Hypergraph) -> CoveragePattern:
    return CoveragePattern.from_sets(
        [f"t{i}" for i in range(h.node_count)],
        [(f"L{j}", e) for j, e in enumerate(h.edges)],
    )


def _check_instance(h: Hypergraph) -> None:
    """All engines agree with the oracle and their witnesses verify."""
    expected = brute_force_nrc(h, 4) is not None
    direct = nrc4(h)
    assert direct.found == expected
    if direct.found:
        assert verify_no_rainbow(h, direct.witness)
    p = pattern_from_hypergraph(h)
    fpt = fpt_nrc4(p)
    assert fpt.found == expected
    if fpt.found:
        assert verify_no_rainbow(h, fpt.witness)
    verdict = decide(p)
    assert verdict.decisive == (not expected)
    if not verdict.decisive:
        w = coloring_from_partition(verdict.witness, p.n)
        assert verify_no_rainbow(h, w)


def test_acceptance_1_oracle_equivalence(capsys):
    def body():
        # (a) exhaustive by family: every set of at most 5 quadruple edges
        for n in (5, 6):
            quads = list(combinations(range(n), 4))
            for m in range(0, 6):
                for edge_set in combinations(quads, m):
                    _check_instance(Hypergraph(n, edge_set))
        # (b) at least 1000 random instances with n <= 10
        rng = random.Random(2024)
        for _ in range(600):
            _check_instance(random_hypergraph(rng, n_range=(4, 10), max_edges=8))
        for _ in range(400):
            p = random_pattern(rng, n_range=(4, 10), k_range=(1, 5))
            _check_instance(build_hypergraph(p))

    _report(capsys, 1, "oracle equivalence", body)


def test_acceptance_2_lower_bound_tightness(capsys):
    def body():
        for n in (5, 6, 7, 8):
            s = star_hypergraph(n, 4)
            assert len(s.edges) == comb(n - 1, 3)
            assert brute_force_nrc(s, 4) is None
            for i in range(len(s.edges)):
                sub = Hypergraph(n, s.edges[:i] + s.edges[i + 1 :])
                w = brute_force_nrc(sub, 4)
                assert w is not None and verify_no_rainbow(sub, w)

    _report(capsys, 2, "lower-bound tightness", body)


def test_acceptance_3_closed_form(capsys):
    def body():
        for n in range(1, 31):
            for r in range(1, n + 1):
                assert a_recurrence(n, r) == comb(n - 1, r - 1) == a_closed(n, r)

    _report(capsys, 3, "closed form", body)


def test_acceptance_4_ilp_sizes(capsys):
    def body():
        for n, k, rows, cols in (
            (136, 6, 194, 568),
            (112, 5, 161, 468),
            (137, 6, 195, 572),
        ):
            loci = [
                (f"L{j}", [i for i in range(n) if i % k == j]) for j in range(k)
            ]
            start = time.perf_counter()
            model = emit_ilp(
                CoveragePattern.from_sets([f"t{i}" for i in range(n)], loci)
            )
            assert (model.num_rows, model.num_columns) == (rows, cols)
            assert time.perf_counter() - start < 1.0

    _report(capsys, 4, "ILP sizes", body)


def _ilp_infeasible_for_all_colorings(p: CoveragePattern, model) -> bool:
    """No induced candidate over all 4^n colorings satisfies every row."""
    n = p.n
    total = 4**n
    codes = np.arange(total, dtype=np.int64)
    divisors = 4 ** np.arange(n - 1, -1, -1, dtype=np.int64)
    colors = (codes[:, None] // divisors) % 4 + 1
    var_cols = {}
    for i in range(n):
        for q in range(1, 5):
            var_cols[f"x_{i + 1}_{q}"] = (colors[:, i] == q).astype(np.int64)
    for j, (_name, members) in enumerate(p.loci):
        for q in range(1, 5):
            var_cols[f"z_{j + 1}_{q}"] = (
                ~(colors[:, members] == q).any(axis=1)
            ).astype(np.int64)
    feasible = np.ones(total, dtype=bool)
    for row in model.rows:
        value = sum(coeff * var_cols[name] for name, coeff in row.terms)
        if row.sense == "=":
            feasible &= value == row.rhs
        elif row.sense == "<=":
            feasible &= value <= row.rhs
        else:
            feasible &= value >= row.rhs
        if not feasible.any():
            return True
    return not feasible.any()


def test_acceptance_5_ilp_cnf_equivalence(capsys):
    def body():
        rng = random.Random(5)
        seen_decisive = 0
        for _ in range(200):
            p = random_pattern(rng, n_range=(4, 7), k_range=(1, 4))
            h = build_hypergraph(p)
            witness = brute_force_nrc(h, 4)
            formula = emit_cnf(h)
            sat = cnf_satisfiable_exhaustive(formula, p.n)
            assert sat == (witness is not None)
            model = emit_ilp(p)
            if witness is not None:
                assert cnf_holds(formula, witness)
                values = ilp_assignment_from_coloring(p, witness)
                assert evaluate_ilp(model, values) is None
            else:
                seen_decisive += 1
                assert _ilp_infeasible_for_all_colorings(p, model)
                # spot-check the vectorized sweep against the row evaluator
                probe = Coloring(4, tuple(rng.randint(1, 4) for _ in range(p.n)))
                assert (
                    evaluate_ilp(model, ilp_assignment_from_coloring(p, probe))
                    is not None
                )
        assert seen_decisive > 0

    _report(capsys, 5, "ILP/CNF equivalence", body)


def test_acceptance_6_two_color_characterization(capsys):
    def body():
        rng = random.Random(6)
        for _ in range(1000):
            h = random_hypergraph(rng, n_range=(2, 10), max_edges=7)
            out = nrc2(h)
            assert out.found == (connected_components(h).count >= 2)
            if out.found:
                assert verify_no_rainbow(h, out.witness)

    _report(capsys, 6, "2-NRC characterization", body)


def test_acceptance_7_kernel_consistency(capsys):
    def body():
        rng = random.Random(7)
        spares_seen = set()
        for _ in range(500):
            if rng.random() < 0.5:
                p = duplicated_pattern(
                    rng, base_n=rng.randint(3, 6), k=rng.randint(1, 5),
                    copies=rng.randint(0, 8),
                )
            else:
                p = random_pattern(rng, n_range=(4, 12), k_range=(1, 5))
            if p.n < 4 or p.n > 12:
                continue
            spares_seen.add(min(reduce_pattern(p).spares, 2))
            h = build_hypergraph(p)
            fpt = fpt_nrc4(p)
            direct = nrc4(h)
            assert fpt.found == direct.found
            if fpt.found:
                assert verify_no_rainbow(h, fpt.witness)
        assert {0, 1} <= spares_seen  # both edge regimes exercised

    _report(capsys, 7, "kernel consistency", body)


def test_acceptance_8_scale_smoke(capsys):
    def body():
        rng = random.Random(8)
        quads = list(combinations(range(16), 4))
        h = Hypergraph(16, tuple(rng.sample(quads, comb(15, 3))))
        start = time.perf_counter()
        out = nrc4(h)
        assert time.perf_counter() - start < 60.0
        if out.found:
            assert verify_no_rainbow(h, out.witness)

    _report(capsys, 8, "scale smoke", body)


def test_acceptance_9_heuristic_behavior(capsys):
    def body():
        two_triples = CoveragePattern.from_sets(
            [f"t{i}" for i in range(4)],
            [("L1", [0, 1, 2]), ("L2", [1, 2, 3])],
        )
        trace = decisive_subset(two_triples)
        assert [name for name, _cov in trace.removals] == ["t0"]
        assert trace.final_taxa == ("t1", "t2", "t3")
        assert trace.final_verdict.decisive

        rng = random.Random(9)
        checked = 0
        for _ in range(60):
            p = random_pattern(rng, n_range=(4, 9), k_range=(1, 4))
            if decide(p).decisive:
                continue
            checked += 1
            t = decisive_subset(p)
            assert len(t.removals) <= p.n
            assert t.final_verdict.decisive
        assert checked >= 10

    _report(capsys, 9, "heuristic behavior", body)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
