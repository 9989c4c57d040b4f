"""Synthetic planted-bipartition hypergraphs for desk-scale experiments.

Intra-block edges draw all pins from one planted block; cross-block edges
take at least one pin from each.  The planted cut therefore equals the
number of cross edges (unit weights) and upper-bounds the optimal feasible
cut whenever the planted sizes are feasible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (Hypergraph, Partition, cut_size, ideal_block_weight,
                   max_feasible_block_weight)

__all__ = ["SyntheticSpec", "gen_synthetic"]


@dataclass
class SyntheticSpec:
    vertex_count: int
    block_sizes: tuple
    intra_edges: int
    cross_edges: int
    cardinality: tuple = (2, 4)  # inclusive pin-count range per edge
    epsilon: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if len(self.block_sizes) != 2:
            raise ValueError("exactly two planted blocks are supported")
        s0, s1 = self.block_sizes
        if s0 < 1 or s1 < 1:
            raise ValueError("planted blocks must be nonempty")
        if s0 + s1 != self.vertex_count:
            raise ValueError("block sizes must sum to the vertex count")
        if self.intra_edges < 0 or self.cross_edges < 0:
            raise ValueError("edge counts must be nonnegative")
        lo, hi = self.cardinality
        if lo < 2 or hi < lo:
            raise ValueError("cardinality range must satisfy 2 <= lo <= hi")
        limit = max_feasible_block_weight(self.vertex_count, 2, self.epsilon)
        if max(s0, s1) > limit:
            raise ValueError(
                f"planted block of {max(s0, s1)} vertices is infeasible at "
                f"epsilon={self.epsilon} (limit {limit})")


def gen_synthetic(spec):
    """Generate (hypergraph, planted partition, planted cut) from a spec.

    The planted cut is verified definitionally against the emitted
    hypergraph before returning.
    """
    rng = np.random.default_rng(spec.seed)
    order = rng.permutation(spec.vertex_count)
    s0 = spec.block_sizes[0]
    blocks = [np.sort(order[:s0]), np.sort(order[s0:])]
    lo, hi = spec.cardinality

    edges = []
    for j in range(spec.intra_edges):
        members = blocks[j % 2]
        card = min(int(rng.integers(lo, hi + 1)), len(members))
        if card < 2:
            raise ValueError("planted block too small for the cardinality range")
        edges.append(sorted(int(v) for v in rng.choice(members, card, replace=False)))
    for _ in range(spec.cross_edges):
        card = int(rng.integers(lo, hi + 1))
        take0 = int(rng.integers(1, card))  # at least one pin on each side
        take0 = min(take0, len(blocks[0]))
        take1 = min(card - take0, len(blocks[1]))
        pins = list(rng.choice(blocks[0], take0, replace=False))
        pins += list(rng.choice(blocks[1], take1, replace=False))
        edges.append(sorted(int(v) for v in pins))

    hg = Hypergraph(spec.vertex_count, edges)
    block_of = np.empty(spec.vertex_count, dtype=np.int64)
    block_of[blocks[0]] = 0
    block_of[blocks[1]] = 1
    planted = Partition(block_of, 2)
    planted_cut = spec.cross_edges
    actual = cut_size(hg, planted)
    if actual != planted_cut:
        raise RuntimeError(
            f"generator invariant violated: planted cut {planted_cut}, measured {actual}")
    return hg, planted, planted_cut
