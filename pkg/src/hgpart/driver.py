"""Multilevel partitioning driver: coarsen, initial partition, uncoarsen+refine.

The driver contracts the input hypergraph in place, runs the chosen initial
partitioner (pool portfolio or memetic EA) on the coarse hypergraph for the
full evaluation budget, then replays the contraction stack; each absorbed
vertex inherits its survivor's block and FM refinement runs after every
batch of expansions and always at the original level.  The hypergraph is
restored to its original state before the call returns, also on error.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .coarsening import CoarseningConfig, coarsen, uncontract
from .core import cut_size, imbalance, is_feasible, max_feasible_block_weight
from .ea import EaConfig, ea_run
from .fm import refine_genes
from .pool import PoolConfig, pool_run

__all__ = ["DriverConfig", "RunReport", "partition", "uncoarsen_refine"]


@dataclass
class DriverConfig:
    """Everything one partitioning run needs.  The pipeline is k=2 only."""

    k: int = 2
    epsilon: float = 0.1
    coarsening: CoarseningConfig = field(default_factory=CoarseningConfig)
    initial: str = "ea"  # "pool" | "ea"
    budget: int = 1000
    ea: EaConfig | None = None
    pool: PoolConfig | None = None
    seed: int = 0
    refine: bool = True
    refine_batch: int = 32  # 1 = refine after every single expansion
    fm_max_passes: int = 8

    def __post_init__(self):
        if self.k != 2:
            raise ValueError("the driver supports bipartitioning only (k=2)")
        if self.initial not in ("pool", "ea"):
            raise ValueError("initial partitioner must be 'pool' or 'ea'")
        if self.budget < 1:
            raise ValueError("evaluation budget must be positive")
        if self.refine_batch < 1:
            raise ValueError("refinement batch size must be positive")
        if self.coarsening.k != self.k:
            raise ValueError("coarsening config k does not match driver k")
        if self.ea is None:
            self.ea = EaConfig(epsilon=self.epsilon, fm_max_passes=self.fm_max_passes)
        if self.pool is None:
            self.pool = PoolConfig(epsilon=self.epsilon, fm_max_passes=self.fm_max_passes)


@dataclass
class RunReport:
    """Cut at handoff and at the original level, plus run bookkeeping.

    ``final_cut`` is recomputed from scratch on the emitted partition;
    ``initial_cut`` is measured on the coarse hypergraph right after the
    initial partitioner returns.
    """

    initial_cut: int
    final_cut: int
    coarse_vertex_count: int
    stop_reason: str
    wall_time: float
    evaluations: int
    algorithm: str
    threshold: int
    adaptive: bool
    seed: int
    final_imbalance: float
    feasible: bool
    log: list = field(default_factory=list, repr=False)

    CSV_HEADER = ("algorithm,threshold,adaptive,seed,evaluations,"
                  "coarse_vertices,stop_reason,initial_cut,final_cut,"
                  "final_imbalance,feasible,wall_time")

    def to_kv_text(self):
        pairs = [
            ("algorithm", self.algorithm),
            ("threshold", self.threshold),
            ("adaptive", self.adaptive),
            ("seed", self.seed),
            ("evaluations", self.evaluations),
            ("coarse_vertices", self.coarse_vertex_count),
            ("stop_reason", self.stop_reason),
            ("initial_cut", self.initial_cut),
            ("final_cut", self.final_cut),
            ("final_imbalance", round(self.final_imbalance, 6)),
            ("feasible", self.feasible),
            ("wall_time", round(self.wall_time, 4)),
        ]
        return "\n".join(f"{k}={v}" for k, v in pairs) + "\n"

    def to_csv_row(self):
        return (f"{self.algorithm},{self.threshold},{self.adaptive},{self.seed},"
                f"{self.evaluations},{self.coarse_vertex_count},{self.stop_reason},"
                f"{self.initial_cut},{self.final_cut},{self.final_imbalance:.6g},"
                f"{self.feasible},{self.wall_time:.4f}")


def uncoarsen_refine(hg, mementos, part, epsilon, rng, batch=32, refine=True,
                     fm_max_passes=8):
    """Replay the memento stack; absorbed vertices inherit survivor blocks.

    ``mementos`` is consumed in place (LIFO).  FM refinement runs on the
    current level after every ``batch`` expansions when ``refine`` is set,
    and once even when the stack is already empty.
    """
    part = part.copy()

    def _refine_level():
        view = hg.dense_view()
        genes = view.partition_to_genes(part)
        refine_genes(view, genes, epsilon, rng, fm_max_passes)
        part.block_of[view.node_ids] = genes

    if not mementos:
        if refine:
            _refine_level()
        return part
    while mementos:
        for _ in range(batch):
            if not mementos:
                break
            m = mementos.pop()
            uncontract(hg, m)
            part.block_of[m.absorbed] = part.block_of[m.survivor]
        if refine:
            _refine_level()
    return part


def partition(hg, cfg):
    """Full multilevel run.  Returns (Partition, RunReport)."""
    if hg.num_active < cfg.k:
        raise ValueError("hypergraph has fewer active vertices than blocks")
    limit = max_feasible_block_weight(hg.total_vertex_weight, cfg.k, cfg.epsilon)
    heaviest = max(hg.vertex_weights[v] for v in range(hg.num_vertices) if hg.active[v])
    if heaviest > limit:
        raise ValueError(
            f"infeasible configuration: vertex weight {heaviest} exceeds the "
            f"balance limit {limit} (epsilon too small)")

    start = time.perf_counter()
    result = coarsen(hg, cfg.coarsening, np.random.default_rng([cfg.seed, 11]))
    try:
        coarse_n = hg.num_active
        ip_rng = np.random.default_rng([cfg.seed, 22])
        if cfg.initial == "pool":
            res = pool_run(hg, cfg.pool, cfg.budget, ip_rng)
            best_genes = res.best_genes
            log = res.log
        else:
            res = ea_run(hg, cfg.ea, cfg.budget, ip_rng, pool_cfg=cfg.pool)
            best_genes = res.best.genes
            log = res.log
        view = hg.dense_view()
        part = view.genes_to_partition(hg.num_vertices, best_genes, cfg.k)
        initial_cut = cut_size(hg, part)
        part = uncoarsen_refine(hg, result.mementos, part, cfg.epsilon,
                                np.random.default_rng([cfg.seed, 33]),
                                batch=cfg.refine_batch, refine=cfg.refine,
                                fm_max_passes=cfg.fm_max_passes)
    finally:
        while result.mementos:
            uncontract(hg, result.mementos.pop())

    final_cut = cut_size(hg, part)
    report = RunReport(
        initial_cut=initial_cut,
        final_cut=final_cut,
        coarse_vertex_count=coarse_n,
        stop_reason=result.stop_reason,
        wall_time=time.perf_counter() - start,
        evaluations=len(log),
        algorithm=cfg.initial,
        threshold=cfg.coarsening.t,
        adaptive=cfg.coarsening.adaptive,
        seed=cfg.seed,
        final_imbalance=imbalance(hg, part),
        feasible=is_feasible(hg, part, cfg.epsilon),
        log=log,
    )
    return part, report
