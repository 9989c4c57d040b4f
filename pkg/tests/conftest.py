"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the library's own code paths: the
brute-force optimum enumerates bitmask assignments, the projection oracle
resolves survivor chains itself, and regression checks go through numpy
directly.
"""

import math

import numpy as np
import pytest

from hgpart.core import Hypergraph

# |V|=4, |E|=3, |pins|=7: e1={v1,v2}, e2={v2,v3,v4}, e3={v1,v3} (1-indexed)
H4_TEXT = "3 4\n1 2\n2 3 4\n1 3\n"


@pytest.fixture
def h4():
    from hgpart.core import parse_hmetis

    return parse_hmetis(H4_TEXT)


def random_hypergraph(rng, min_v=4, max_v=14, min_e=5, max_e=30, max_size=4,
                      weighted=False):
    """Connected-ish random test hypergraph with 2..max_size pin edges."""
    nv = int(rng.integers(min_v, max_v + 1))
    ne = int(rng.integers(min_e, max_e + 1))
    edges = []
    for _ in range(ne):
        size = int(rng.integers(2, min(max_size, nv) + 1))
        pins = sorted(int(p) for p in rng.choice(nv, size=size, replace=False))
        edges.append(pins)
    vw = [int(w) for w in rng.integers(1, 4, nv)] if weighted else None
    ew = [int(w) for w in rng.integers(1, 4, ne)] if weighted else None
    return Hypergraph(nv, edges, vw, ew)


def brute_force_best_cut(hg, epsilon):
    """Exhaustive optimal feasible bipartition cut; None if none feasible.

    Enumerates all 2^|V| assignments as bitmasks, fully independent of the
    library's cut and balance code.
    """
    n = hg.num_vertices
    masks = np.arange(1 << n, dtype=np.int64)
    weight1 = np.zeros(1 << n, dtype=np.int64)
    for v in range(n):
        weight1[(masks >> v & 1) == 1] += hg.vertex_weights[v]
    total = sum(hg.vertex_weights)
    ideal = -(-total // 2)
    limit = math.floor((1.0 + epsilon) * ideal + 1e-9)
    heaviest = np.maximum(weight1, total - weight1)
    feasible = heaviest <= limit
    if not feasible.any():
        return None
    cut = np.zeros(1 << n, dtype=np.int64)
    for e in range(hg.num_edges):
        pin_mask = 0
        for v in hg.pins[e]:
            pin_mask |= 1 << v
        sub = masks & pin_mask
        cut += np.where((sub != 0) & (sub != pin_mask), hg.edge_weights[e], 0)
    return int(cut[feasible].min())


def structural_snapshot(hg):
    """Everything that must round-trip bit-identically through uncontract."""
    return (
        tuple(tuple(edge) for edge in hg.pins),
        tuple(tuple(es) for es in hg.incident),
        tuple(hg.active),
        tuple(hg.enabled),
        tuple(hg.vertex_weights),
        tuple(hg.edge_weights),
        hg.num_active,
        hg.total_pins,
        hg.contraction_count,
    )


def balanced_random_partition(hg, rng):
    """Uniform random bipartition with floor(|V|/2) vertices in block 0.

    Always feasible for unit weights at any epsilon >= 0.
    """
    from hgpart.core import Partition

    n = hg.num_vertices
    block_of = np.ones(n, dtype=np.int64)
    chosen = rng.choice(n, size=n // 2, replace=False)
    block_of[chosen] = 0
    return Partition(block_of, 2)


def no_improving_feasible_move(hg, part, epsilon):
    """Single-move local-optimality oracle, recomputed from scratch."""
    from hgpart.core import cut_size, max_feasible_block_weight, block_weights

    base = cut_size(hg, part)
    limit = max_feasible_block_weight(hg.total_vertex_weight, 2, epsilon)
    weights = block_weights(hg, part)
    for v in range(hg.num_vertices):
        if not hg.active[v]:
            continue
        b = int(part.block_of[v])
        t = 1 - b
        if max(weights[b] - hg.vertex_weights[v], weights[t] + hg.vertex_weights[v]) > limit:
            continue
        trial = part.copy()
        trial.block_of[v] = t
        if cut_size(hg, trial) < base:
            return False
    return True
