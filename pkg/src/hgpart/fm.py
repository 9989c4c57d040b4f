"""Two-way Fiduccia-Mattheyses move-based local search.

One pass repeatedly moves the highest-gain unlocked vertex whose move keeps
the heavier block within a transient slack of one maximum vertex weight
above the balance limit, locks it, and finally rewinds to the best strictly
feasible prefix.  ``fm_refine`` iterates passes to a fixed point and then
enforces single-move local optimality with a greedy sweep of strictly
feasible improving moves.

The pass operates on the dense CSR snapshot of the hypergraph (see
:class:`hgpart.core.DenseView`); the hot loops are compiled with numba when
available and run as plain Python otherwise.  Gains are kept in flat arrays
with the per-move maximum found by scan, which at the instance sizes this
toolkit targets beats maintaining a bucket structure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import max_feasible_block_weight

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency, but keep a fallback
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


__all__ = ["FmConfig", "gain", "fm_pass", "fm_refine", "refine_genes", "repair_genes"]


@dataclass
class FmConfig:
    """Balance fraction, pass limit and rng seed for one refinement call."""

    epsilon: float = 0.1
    max_passes: int = 8
    seed: int = 0
    debug_check: bool = False

    def __post_init__(self):
        if self.max_passes < 1:
            raise ValueError("max_passes must be at least 1")
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")


# ---------------------------------------------------------------------------
# kernels (single source, jitted when numba is present)


def _gain_of_impl(v, genes, ew, inc_off, inc_dense, cnt):
    # +w for edges where v is the sole pin in its block, -w for edges fully
    # inside v's block; a single-pin edge hits both cases and nets zero
    g = 0
    b = genes[v]
    for ii in range(inc_off[v], inc_off[v + 1]):
        e = inc_dense[ii]
        if cnt[e, b] == 1:
            g += ew[e]
        if cnt[e, 1 - b] == 0:
            g -= ew[e]
    return g


_gain_of = njit(cache=True)(_gain_of_impl)


def _state_impl(genes, ew, pin_off, pin_dense, inc_off, inc_dense):
    m = ew.shape[0]
    n = genes.shape[0]
    cnt = np.zeros((m, 2), dtype=np.int64)
    for e in range(m):
        for p in range(pin_off[e], pin_off[e + 1]):
            cnt[e, genes[pin_dense[p]]] += 1
    cut = 0
    for e in range(m):
        if cnt[e, 0] > 0 and cnt[e, 1] > 0:
            cut += ew[e]
    gains = np.empty(n, dtype=np.int64)
    for v in range(n):
        gains[v] = _gain_of(v, genes, ew, inc_off, inc_dense, cnt)
    return cnt, cut, gains


_state = njit(cache=True)(_state_impl)


def _fm_pass_impl(genes, vw, ew, pin_off, pin_dense, inc_off, inc_dense,
                  W, limit_feas, limit_slack, tie, debug):
    n = genes.shape[0]
    cnt, cut0, gains = _state(genes, ew, pin_off, pin_dense, inc_off, inc_dense)
    locked = np.zeros(n, dtype=np.uint8)
    moves = np.empty(n, dtype=np.int64)
    n_moves = 0
    cur_cut = cut0
    feasible0 = max(W[0], W[1]) <= limit_feas
    best_cut = cut0 if feasible0 else np.int64(2) ** 62
    best_len = 0
    have_best = feasible0

    while True:
        best_v = -1
        best_gain = -(np.int64(2) ** 62)
        best_post = np.int64(0)
        best_tie = -1.0
        for v in range(n):
            if locked[v]:
                continue
            f = genes[v]
            wf = W[f] - vw[v]
            wt = W[1 - f] + vw[v]
            post = wf if wf > wt else wt
            if post > limit_slack:
                continue
            g = gains[v]
            if (g > best_gain
                    or (g == best_gain and post < best_post)
                    or (g == best_gain and post == best_post and tie[v] > best_tie)):
                best_v = v
                best_gain = g
                best_post = post
                best_tie = tie[v]
        if best_v < 0:
            break
        v = best_v
        f = genes[v]
        t = 1 - f
        genes[v] = t
        W[f] -= vw[v]
        W[t] += vw[v]
        locked[v] = 1
        cur_cut -= gains[v]
        moves[n_moves] = v
        n_moves += 1
        for ii in range(inc_off[v], inc_off[v + 1]):
            e = inc_dense[ii]
            cnt[e, f] -= 1
            cnt[e, t] += 1
        for ii in range(inc_off[v], inc_off[v + 1]):
            e = inc_dense[ii]
            for p in range(pin_off[e], pin_off[e + 1]):
                u = pin_dense[p]
                if locked[u] == 0:
                    gains[u] = _gain_of(u, genes, ew, inc_off, inc_dense, cnt)
        if debug:
            cnt2, cut2, gains2 = _state(genes, ew, pin_off, pin_dense, inc_off, inc_dense)
            if cut2 != cur_cut:
                return cut0, cur_cut, n_moves, 1
            for u in range(n):
                if locked[u] == 0 and gains2[u] != gains[u]:
                    return cut0, cur_cut, n_moves, 1
        mx = W[0] if W[0] > W[1] else W[1]
        if mx <= limit_feas and cur_cut < best_cut:
            best_cut = cur_cut
            best_len = n_moves
            have_best = True

    if not have_best:
        best_len = 0
        best_cut = cut0
    for s in range(n_moves - 1, best_len - 1, -1):
        v = moves[s]
        t = genes[v]
        f = 1 - t
        genes[v] = f
        W[t] -= vw[v]
        W[f] += vw[v]
    return cut0, best_cut, best_len, 0


_fm_pass_kernel = njit(cache=True)(_fm_pass_impl)


def _cleanup_impl(genes, vw, ew, pin_off, pin_dense, inc_off, inc_dense, W, limit_feas):
    # apply strictly feasible, strictly improving single moves until none
    # remain; ties broken by lowest vertex index (deterministic)
    n = genes.shape[0]
    cnt, cut, gains = _state(genes, ew, pin_off, pin_dense, inc_off, inc_dense)
    applied = 0
    while True:
        best_v = -1
        best_gain = np.int64(0)
        for v in range(n):
            g = gains[v]
            if g <= best_gain:
                continue
            f = genes[v]
            wf = W[f] - vw[v]
            wt = W[1 - f] + vw[v]
            post = wf if wf > wt else wt
            if post > limit_feas:
                continue
            best_v = v
            best_gain = g
        if best_v < 0:
            break
        v = best_v
        f = genes[v]
        t = 1 - f
        genes[v] = t
        W[f] -= vw[v]
        W[t] += vw[v]
        cut -= gains[v]
        applied += 1
        for ii in range(inc_off[v], inc_off[v + 1]):
            e = inc_dense[ii]
            cnt[e, f] -= 1
            cnt[e, t] += 1
        for ii in range(inc_off[v], inc_off[v + 1]):
            e = inc_dense[ii]
            for p in range(pin_off[e], pin_off[e + 1]):
                u = pin_dense[p]
                gains[u] = _gain_of(u, genes, ew, inc_off, inc_dense, cnt)
    return cut, applied


_cleanup_kernel = njit(cache=True)(_cleanup_impl)


# ---------------------------------------------------------------------------
# dense-level API (shared by the pool, EA, landscape and driver internals)


def _limits(view, epsilon):
    limit_feas = max_feasible_block_weight(view.total_weight, 2, epsilon)
    cmax = int(view.vertex_weight.max()) if view.num_nodes else 0
    return np.int64(limit_feas), np.int64(limit_feas + cmax)


def _weights_of(view, genes):
    W = np.zeros(2, dtype=np.int64)
    W[0] = int(view.vertex_weight[genes == 0].sum())
    W[1] = view.total_weight - W[0]
    return W


def cut_of_genes(view, genes):
    """Cut of a dense gene vector, computed from scratch."""
    _, cut, _ = _state(np.ascontiguousarray(genes), view.edge_weight,
                       view.pin_off, view.pin_dense, view.inc_off, view.inc_dense)
    return int(cut)


def refine_genes(view, genes, epsilon, rng, max_passes=8, debug=False):
    """FM refinement of dense genes, in place.  Returns the final cut.

    Runs passes until one neither improves the cut nor changes the
    partition, then greedily applies any remaining strictly feasible
    improving single moves so the result is a single-move local optimum.
    """
    if view.num_nodes == 0:
        return 0
    work = genes
    if genes.dtype != np.int8 or not genes.flags.c_contiguous:
        work = np.ascontiguousarray(genes, dtype=np.int8)
    cut = _refine_inner(view, work, epsilon, rng, max_passes, debug)
    if work is not genes:
        genes[:] = work
    return cut


def _refine_inner(view, genes, epsilon, rng, max_passes, debug):
    limit_feas, limit_slack = _limits(view, epsilon)
    W = _weights_of(view, genes)
    passes = 0
    while passes < max_passes:
        tie = rng.random(view.num_nodes)
        cut0, new_cut, kept, err = _fm_pass_kernel(
            genes, view.vertex_weight, view.edge_weight,
            view.pin_off, view.pin_dense, view.inc_off, view.inc_dense,
            W, limit_feas, limit_slack, tie, debug)
        if err:
            raise AssertionError("incremental FM gains diverged from scratch recomputation")
        passes += 1
        if new_cut < cut0:
            continue
        if kept > 0:
            continue  # feasibility recovered at equal or higher cut
        cut, applied = _cleanup_kernel(
            genes, view.vertex_weight, view.edge_weight,
            view.pin_off, view.pin_dense, view.inc_off, view.inc_dense,
            W, limit_feas)
        if applied == 0:
            return int(cut)
    cut, _ = _cleanup_kernel(
        genes, view.vertex_weight, view.edge_weight,
        view.pin_off, view.pin_dense, view.inc_off, view.inc_dense,
        W, limit_feas)
    return int(cut)


def repair_genes(view, genes, epsilon, rng):
    """Rebalance dense genes in place until feasible.

    Moves uniformly random vertices from the heavier to the lighter block.
    With non-unit weights a randomly drawn vertex may be too heavy to reduce
    the maximum block weight; the heaviest vertex that still does is moved
    instead.  Raises ValueError when no vertex move can make progress.
    """
    vw = view.vertex_weight
    total = view.total_weight
    limit = max_feasible_block_weight(total, 2, epsilon)
    W = _weights_of(view, genes)
    if W.max() <= limit:
        return genes
    if vw.max() == 1:
        # unit weights: every move from the heavier block reduces it by one,
        # so the vertices to move form a uniform random subset
        h = 0 if W[0] >= W[1] else 1
        need = int(W[h]) - limit
        members = np.flatnonzero(genes == h)
        chosen = rng.choice(members, size=need, replace=False)
        genes[chosen] = 1 - h
        return genes
    while W.max() > limit:
        h = 0 if W[0] >= W[1] else 1
        gap = int(W[h] - W[1 - h])
        members = np.flatnonzero(genes == h)
        v = int(members[rng.integers(len(members))])
        if vw[v] >= gap:
            movable = members[vw[members] < gap]
            if len(movable) == 0:
                raise ValueError("partition cannot be repaired: vertex weights too coarse")
            v = int(movable[np.argmax(vw[movable])])
        genes[v] = 1 - h
        W[h] -= vw[v]
        W[1 - h] += vw[v]
    return genes


# ---------------------------------------------------------------------------
# hypergraph-level API


def gain(hg, part, v):
    """Cut reduction from moving vertex ``v`` to the other block (k=2)."""
    if part.k != 2:
        raise ValueError("FM gain is defined for bipartitions only")
    b = part.block_of[v]
    if b < 0:
        raise ValueError(f"vertex {v} is unassigned")
    g = 0
    for e in hg.incident[v]:
        if not hg.enabled[e]:
            continue
        same = other = 0
        for u in hg.pins[e]:
            if u == v:
                continue
            if part.block_of[u] == b:
                same += 1
            else:
                other += 1
        if same == 0:
            g += hg.edge_weights[e]
        if other == 0:
            g -= hg.edge_weights[e]
    return g


def fm_pass(hg, part, cfg):
    """One FM pass with rewind.  Returns ``(partition, cut_improvement)``.

    The input partition is not modified.  For a feasible input the
    improvement is nonnegative; for an infeasible input the pass may trade
    cut for feasibility, in which case the improvement is the (possibly
    negative) actual cut delta.
    """
    if part.k != 2:
        raise ValueError("FM operates on bipartitions only")
    view = hg.dense_view()
    genes = view.partition_to_genes(part)
    if view.num_nodes == 0:
        return part.copy(), 0
    rng = np.random.default_rng(cfg.seed)
    limit_feas, limit_slack = _limits(view, cfg.epsilon)
    W = _weights_of(view, genes)
    tie = rng.random(view.num_nodes)
    cut0, new_cut, _, err = _fm_pass_kernel(
        genes, view.vertex_weight, view.edge_weight,
        view.pin_off, view.pin_dense, view.inc_off, view.inc_dense,
        W, limit_feas, limit_slack, tie, cfg.debug_check)
    if err:
        raise AssertionError("incremental FM gains diverged from scratch recomputation")
    out = view.genes_to_partition(hg.num_vertices, genes, 2)
    off_view = out.block_of < 0
    out.block_of[off_view] = part.block_of[off_view]
    return out, int(cut0 - new_cut)


def fm_refine(hg, part, cfg):
    """Iterated FM passes to a local optimum.  Returns a new Partition."""
    if part.k != 2:
        raise ValueError("FM operates on bipartitions only")
    view = hg.dense_view()
    genes = view.partition_to_genes(part)
    rng = np.random.default_rng(cfg.seed)
    refine_genes(view, genes, cfg.epsilon, rng,
                 max_passes=cfg.max_passes, debug=cfg.debug_check)
    out = view.genes_to_partition(hg.num_vertices, genes, 2)
    off_view = out.block_of < 0
    out.block_of[off_view] = part.block_of[off_view]
    return out
