"""Portfolio of cheap constructive initial bipartitioners ("the pool").

Members: fully random assignment, breadth-first growth over shared-edge
adjacency, label propagation, and four greedy-growing variants (start
vertex random or max-degree, candidate score move-gain or connectivity).
``pool_run`` cycles the members with ``r`` consecutive constructions each,
follows every construction with FM refinement, and keeps the
lexicographically best (cut, imbalance) result.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .core import ideal_block_weight, max_feasible_block_weight, Partition
from .fm import refine_genes, repair_genes

__all__ = [
    "PoolConfig",
    "PoolResult",
    "EvalRecord",
    "GREEDY_VARIANTS",
    "random_partition",
    "bfs_partition",
    "greedy_growing_partition",
    "label_propagation_partition",
    "pool_run",
    "format_log",
]

GREEDY_VARIANTS = (
    "greedy_random_gain",
    "greedy_degree_gain",
    "greedy_random_connectivity",
    "greedy_degree_connectivity",
)

DEFAULT_MEMBERS = ("random", "bfs", "label_propagation") + GREEDY_VARIANTS

LABEL_PROPAGATION_ROUNDS = 5


@dataclass
class PoolConfig:
    """Repetitions per member per cycle, balance fraction, member list."""

    r: int = 20
    epsilon: float = 0.1
    seed: int = 0
    members: tuple = DEFAULT_MEMBERS
    fm_max_passes: int = 8

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("r must be at least 1")
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        if not self.members:
            raise ValueError("member list must not be empty")
        for m in self.members:
            if m not in DEFAULT_MEMBERS:
                raise ValueError(f"unknown pool member {m!r}")


@dataclass
class EvalRecord:
    """One row of an evaluation log (shared by the pool and the EA)."""

    index: int
    source: str
    cut: int
    imbalance: float
    best_cut: int
    mut: float = float("nan")


def format_log(records):
    """Evaluation log as comma-separated text with a header row."""
    lines = ["evaluation,source,cut,imbalance,best_cut,mut"]
    for r in records:
        lines.append(f"{r.index},{r.source},{r.cut},{r.imbalance:.6g},{r.best_cut},{r.mut:.6g}")
    return "\n".join(lines) + "\n"


@dataclass
class PoolResult:
    """Best construction found plus the per-evaluation log."""

    best_genes: np.ndarray
    best_cut: int
    best_imbalance: float
    log: list
    node_ids: np.ndarray

    def best_partition(self, num_vertices, k=2):
        block_of = np.full(num_vertices, -1, dtype=np.int64)
        block_of[self.node_ids] = self.best_genes
        return Partition(block_of, k)


def genes_imbalance(view, genes):
    w0 = int(view.vertex_weight[genes == 0].sum())
    heaviest = max(w0, view.total_weight - w0)
    return heaviest / ideal_block_weight(view.total_weight, 2) - 1.0


# ---------------------------------------------------------------------------
# construction heuristics (dense genes; no repair, no FM)


def random_assignment(view, rng):
    """Uniform random block per vertex, prior to any repair."""
    return rng.integers(0, 2, view.num_nodes, dtype=np.int8)


def _bfs_genes(view, rng):
    n = view.num_nodes
    genes = np.ones(n, dtype=np.int8)
    if n == 0:
        return genes
    ideal = ideal_block_weight(view.total_weight, 2)
    start = int(rng.integers(n))
    visited = np.zeros(n, dtype=bool)
    visited[start] = True
    queue = deque([start])
    weight0 = 0
    while queue and weight0 < ideal:
        v = queue.popleft()
        genes[v] = 0
        weight0 += int(view.vertex_weight[v])
        for ii in range(view.inc_off[v], view.inc_off[v + 1]):
            e = view.inc_dense[ii]
            for p in range(view.pin_off[e], view.pin_off[e + 1]):
                u = int(view.pin_dense[p])
                if not visited[u]:
                    visited[u] = True
                    queue.append(u)
    return genes


def _greedy_genes(view, variant, rng):
    start_mode, score_mode = {
        "greedy_random_gain": ("random", "gain"),
        "greedy_degree_gain": ("degree", "gain"),
        "greedy_random_connectivity": ("random", "connectivity"),
        "greedy_degree_connectivity": ("degree", "connectivity"),
    }[variant]
    n = view.num_nodes
    genes = np.ones(n, dtype=np.int8)
    if n == 0:
        return genes
    ideal = ideal_block_weight(view.total_weight, 2)
    m = view.num_edges
    cnt0 = np.zeros(m, dtype=np.int64)
    edge_size = np.diff(view.pin_off)
    in_block0 = np.zeros(n, dtype=bool)
    frontier = np.zeros(n, dtype=bool)
    score = np.zeros(n, dtype=np.int64)

    def rescore(u):
        s = 0
        for ii in range(view.inc_off[u], view.inc_off[u + 1]):
            e = view.inc_dense[ii]
            w = int(view.edge_weight[e])
            if score_mode == "gain":
                # gain of assigning u to block 0, unassigned vertices counting
                # as block 1: +w when u is the sole unassigned pin, -w when the
                # edge touches no assigned pin yet
                if edge_size[e] - cnt0[e] == 1:
                    s += w
                if cnt0[e] == 0:
                    s -= w
            else:
                if cnt0[e] > 0:
                    s += w
        score[u] = s

    def absorb(v):
        genes[v] = 0
        in_block0[v] = True
        frontier[v] = False
        touched = set()
        for ii in range(view.inc_off[v], view.inc_off[v + 1]):
            e = view.inc_dense[ii]
            cnt0[e] += 1
            for p in range(view.pin_off[e], view.pin_off[e + 1]):
                u = int(view.pin_dense[p])
                if not in_block0[u]:
                    frontier[u] = True
                    touched.add(u)
        for u in touched:
            rescore(u)
        return int(view.vertex_weight[v])

    if start_mode == "degree":
        deg = np.diff(view.inc_off)
        best = deg.max()
        cands = np.flatnonzero(deg == best)
        start = int(cands[rng.integers(len(cands))])
    else:
        start = int(rng.integers(n))

    weight0 = absorb(start)
    while weight0 < ideal and not in_block0.all():
        cands = np.flatnonzero(frontier)
        if len(cands) == 0:
            rest = np.flatnonzero(~in_block0)
            pick = int(rest[rng.integers(len(rest))])
        else:
            best = score[cands].max()
            top = cands[score[cands] == best]
            pick = int(top[rng.integers(len(top))])
        weight0 += absorb(pick)
    return genes


def _label_prop_genes(view, epsilon, rng, rounds=LABEL_PROPAGATION_ROUNDS):
    """Label propagation rounds; returns (genes, converged)."""
    n = view.num_nodes
    genes = random_assignment(view, rng)
    if n == 0:
        return genes, True
    m = view.num_edges
    vw = view.vertex_weight
    cnt = np.zeros((m, 2), dtype=np.int64)
    for e in range(m):
        for p in range(view.pin_off[e], view.pin_off[e + 1]):
            cnt[e, genes[view.pin_dense[p]]] += 1
    W = np.zeros(2, dtype=np.int64)
    W[0] = int(vw[genes == 0].sum())
    W[1] = view.total_weight - W[0]
    limit = max_feasible_block_weight(view.total_weight, 2, epsilon)
    converged = False
    for _ in range(rounds):
        moved = False
        for v in rng.permutation(n):
            v = int(v)
            b = int(genes[v])
            s = [0, 0]
            for ii in range(view.inc_off[v], view.inc_off[v + 1]):
                e = view.inc_dense[ii]
                w = int(view.edge_weight[e])
                s[0] += w * (int(cnt[e, 0]) - (b == 0))
                s[1] += w * (int(cnt[e, 1]) - (b == 1))
            t = 1 - b
            if s[t] <= s[b]:
                continue  # ties keep the current block
            post = max(int(W[b]) - int(vw[v]), int(W[t]) + int(vw[v]))
            if post > limit and post >= int(W.max()):
                continue  # would break (or fail to improve) feasibility
            genes[v] = t
            W[b] -= vw[v]
            W[t] += vw[v]
            for ii in range(view.inc_off[v], view.inc_off[v + 1]):
                e = view.inc_dense[ii]
                cnt[e, b] -= 1
                cnt[e, t] += 1
            moved = True
        if not moved:
            converged = True
            break
    return genes, converged


def construct_genes(view, member, epsilon, rng):
    """Run one pool member; returns unrepaired dense genes."""
    if member == "random":
        return random_assignment(view, rng)
    if member == "bfs":
        return _bfs_genes(view, rng)
    if member == "label_propagation":
        genes, _ = _label_prop_genes(view, epsilon, rng)
        return genes
    if member in GREEDY_VARIANTS:
        return _greedy_genes(view, member, rng)
    raise ValueError(f"unknown pool member {member!r}")


# ---------------------------------------------------------------------------
# hypergraph-level construction ops (construct + repair)


def _as_partition(hg, view, genes):
    return view.genes_to_partition(hg.num_vertices, genes, 2)


def random_partition(hg, cfg, rng):
    """Uniform random assignment, repaired to feasibility."""
    view = hg.dense_view()
    genes = random_assignment(view, rng)
    repair_genes(view, genes, cfg.epsilon, rng)
    return _as_partition(hg, view, genes)


def bfs_partition(hg, cfg, rng):
    """Breadth-first traversal fills block 0 up to the ideal weight."""
    view = hg.dense_view()
    genes = _bfs_genes(view, rng)
    repair_genes(view, genes, cfg.epsilon, rng)
    return _as_partition(hg, view, genes)


def greedy_growing_partition(hg, cfg, variant, rng):
    """Grow block 0 greedily by the variant's score until the ideal weight."""
    if variant not in GREEDY_VARIANTS:
        raise ValueError(f"unknown greedy variant {variant!r}")
    view = hg.dense_view()
    genes = _greedy_genes(view, variant, rng)
    repair_genes(view, genes, cfg.epsilon, rng)
    return _as_partition(hg, view, genes)


def label_propagation_partition(hg, cfg, rng):
    """Random start, then rounds of feasibility-respecting relabeling."""
    view = hg.dense_view()
    genes, _ = _label_prop_genes(view, cfg.epsilon, rng)
    repair_genes(view, genes, cfg.epsilon, rng)
    return _as_partition(hg, view, genes)


# ---------------------------------------------------------------------------
# evaluation stream and pool driver


def pool_stream(view, cfg, rng):
    """Endless cycle of (index, member, genes, cut, imbalance) evaluations.

    Each evaluation constructs with the due member, repairs, then applies FM.
    Per-evaluation rng streams are derived from the caller's generator once,
    keyed by evaluation index, so results are order-independent.
    """
    root = int(rng.integers(2 ** 62))
    index = 0
    while True:
        member = cfg.members[(index // cfg.r) % len(cfg.members)]
        r = np.random.default_rng([root, index])
        genes = construct_genes(view, member, cfg.epsilon, r)
        repair_genes(view, genes, cfg.epsilon, r)
        cut = refine_genes(view, genes, cfg.epsilon, r, cfg.fm_max_passes)
        yield index, member, genes, cut, genes_imbalance(view, genes)
        index += 1


def pool_run(hg, cfg, budget, rng):
    """Run the portfolio for ``budget`` evaluations; keep the best result.

    Results are ordered lexicographically by (cut, imbalance).  The log has
    one record per evaluation with a running best cut.
    """
    if budget < 1:
        raise ValueError("pool budget must be at least 1")
    view = hg.dense_view()
    log = []
    best = None
    stream = pool_stream(view, cfg, rng)
    for _ in range(budget):
        index, member, genes, cut, imb = next(stream)
        if best is None or (cut, imb) < (best[1], best[2]):
            best = (genes, cut, imb)
        log.append(EvalRecord(index, member, cut, imb, best[1]))
    return PoolResult(best[0], best[1], best[2], log, view.node_ids.copy())
