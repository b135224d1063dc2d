"""The decisiveness decision procedure and the decisive-subset heuristic.

A pattern is decisive iff its coverage hypergraph has no no-rainbow
4-coloring.  ``decide`` runs cheap certificates first (full locus, uncovered
triple, rooted case, zero-AND rows) and falls back to the exact engines; every
non-decisive verdict carries a four-block partition witness that is re-checked
before being returned.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import bounds, oracle, reduction
from .nrc import DEFAULT_SEARCH_CAP, non_neighbor_coloring, nrc4
from .core import (
    Coloring,
    CoveragePattern,
    build_hypergraph,
    verify_no_rainbow,
)
from .errors import DecisiveError, InvalidInstanceError

Partition = tuple[tuple[int, ...], ...]

DECIDED_TRIVIAL_SMALL = "trivial-small-n"
DECIDED_FULL_LOCUS = "full-locus"
DECIDED_TRIPLE_GAP = "triple-gap"
DECIDED_ROOTED = "rooted"
DECIDED_ZERO_AND = "zero-and"
DECIDED_BOUND_SEARCH = "quadruple-bound+search"
DECIDED_FPT = "fpt"
DECIDED_DIRECT = "direct-search"
DECIDED_ORACLE = "oracle"


@dataclass(frozen=True)
class Verdict:
    """Decision plus, for non-decisive patterns, a violating 4-way partition."""

    decisive: bool
    witness: Optional[Partition]
    decided_by: str
    stats: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SubsetTrace:
    """Removal log of the greedy decisive-subset heuristic."""

    removals: tuple[tuple[str, int], ...]  # (taxon name, coverage at removal)
    final_taxa: tuple[str, ...]
    final_verdict: Verdict


def partition_from_coloring(coloring: Coloring) -> Partition:
    """Color classes as a canonical partition: blocks ordered by smallest
    member, members ascending."""
    blocks = [coloring.color_class(q) for q in range(1, coloring.r + 1)]
    return tuple(sorted(blocks, key=lambda block: block[0]))


def coloring_from_partition(blocks: Partition, n: int) -> Coloring:
    assignment = [0] * n
    for color, block in enumerate(blocks, start=1):
        for v in block:
            assignment[v] = color
    return Coloring(len(blocks), tuple(assignment))


def _non_decisive(
    pattern: CoveragePattern, witness: Coloring, decided_by: str, stats: dict
) -> Verdict:
    h = build_hypergraph(pattern)
    if not verify_no_rainbow(h, witness):
        raise DecisiveError(
            f"internal error: {decided_by} produced a witness that fails "
            "re-verification"
        )
    return Verdict(False, partition_from_coloring(witness), decided_by, stats)


def decide(
    pattern: CoveragePattern,
    strategy: str = "auto",
    oracle_cap: int = oracle.DEFAULT_NODE_CAP,
    search_cap: int = DEFAULT_SEARCH_CAP,
    parallel: bool = False,
) -> Verdict:
    """Decide decisiveness.

    Strategy "auto" runs the screens in cost order and then picks the kernel
    search when duplicate rows exist, the direct search otherwise.  The other
    strategies force one engine: "direct", "fpt", or "oracle".
    """
    if strategy not in ("auto", "direct", "fpt", "oracle"):
        raise InvalidInstanceError(f"unknown strategy {strategy!r}")
    start = time.perf_counter()

    def stats(**extra) -> dict:
        return {"elapsed_s": time.perf_counter() - start, **extra}

    n = pattern.n
    # no partition into four nonempty blocks exists, so the four-way
    # partition property holds vacuously
    if n <= 3:
        return Verdict(True, None, DECIDED_TRIVIAL_SMALL, stats())

    if strategy == "direct":
        outcome = nrc4(build_hypergraph(pattern), search_cap, parallel)
        if outcome.found:
            return _non_decisive(pattern, outcome.witness, DECIDED_DIRECT, stats())
        return Verdict(True, None, DECIDED_DIRECT, stats())
    if strategy == "fpt":
        outcome = reduction.fpt_nrc4(pattern, search_cap, parallel)
        if outcome.found:
            return _non_decisive(pattern, outcome.witness, DECIDED_FPT, stats())
        return Verdict(True, None, DECIDED_FPT, stats())
    if strategy == "oracle":
        witness = oracle.brute_force_nrc(build_hypergraph(pattern), 4, oracle_cap)
        if witness is not None:
            return _non_decisive(pattern, witness, DECIDED_ORACLE, stats())
        return Verdict(True, None, DECIDED_ORACLE, stats())

    # auto: screens in cost order
    full = tuple(range(n))
    if any(members == full for _name, members in pattern.loci):
        return Verdict(True, None, DECIDED_FULL_LOCUS, stats())

    covered, gap = bounds.triple_coverage(pattern)
    if not covered:
        witness = non_neighbor_coloring(n, 4, gap)
        return _non_decisive(pattern, witness, DECIDED_TRIPLE_GAP, stats(triple=gap))

    rooted = bounds.rooted_decide(pattern)
    if rooted is not None:
        # triple coverage already held, so the rooted case is decisive
        return Verdict(True, None, DECIDED_ROOTED, stats())

    ri = reduction.reduce_pattern(pattern)
    witness = reduction.zero_and_screen(ri)
    if witness is not None:
        return _non_decisive(pattern, witness, DECIDED_ZERO_AND, stats())

    bound_flags = bounds.lower_bound_screen(pattern)

    if ri.spares >= 1:
        outcome = reduction.fpt_nrc4(pattern, search_cap, parallel)
        engine = DECIDED_FPT
    else:
        outcome = nrc4(build_hypergraph(pattern), search_cap, parallel)
        engine = DECIDED_DIRECT
    if outcome.found:
        tag = DECIDED_BOUND_SEARCH if bound_flags else engine
        return _non_decisive(
            pattern, outcome.witness, tag, stats(rule=outcome.rule)
        )
    if bound_flags:
        raise DecisiveError(
            "internal error: quadruple bound proves non-decisiveness but the "
            "search found no witness"
        )
    return Verdict(True, None, engine, stats(rule=outcome.rule))


def _coverage_counts(pattern: CoveragePattern) -> list[int]:
    counts = [0] * pattern.n
    for _name, members in pattern.loci:
        for i in members:
            counts[i] += 1
    return counts


def _remove_taxon(pattern: CoveragePattern, taxon: int) -> CoveragePattern:
    taxa = tuple(name for i, name in enumerate(pattern.taxa) if i != taxon)
    loci = []
    for name, members in pattern.loci:
        kept = tuple(i if i < taxon else i - 1 for i in members if i != taxon)
        if kept:
            loci.append((name, kept))
    return CoveragePattern(taxa, tuple(loci))


def decisive_subset(
    pattern: CoveragePattern,
    decider: Optional[Callable[[CoveragePattern], Verdict]] = None,
) -> SubsetTrace:
    """Greedily remove minimally covered taxa until the pattern is decisive.

    Ties break in favor of the first taxon in the input; loci emptied by a
    removal are dropped.  Terminates in at most n iterations (patterns with
    three or fewer taxa are decisive by convention).
    """
    if decider is None:
        decider = decide
    removals: list[tuple[str, int]] = []
    current = pattern
    while True:
        verdict = decider(current)
        if verdict.decisive:
            return SubsetTrace(tuple(removals), current.taxa, verdict)
        counts = _coverage_counts(current)
        victim = min(range(current.n), key=lambda i: (counts[i], i))
        removals.append((current.taxa[victim], counts[victim]))
        current = _remove_taxon(current, victim)
