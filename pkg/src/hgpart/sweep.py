"""Threshold sweeps: repeated driver runs across coarsening levels.

Every (threshold, algorithm, repetition) cell is one full multilevel run
with a seed derived from (master seed, threshold index, algorithm index,
repetition), so results are independent of execution order.  Per algorithm
the sweep reports the area under the mean-final-cut curve over thresholds,
and per threshold a rank-sum comparison of the first two algorithms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .coarsening import CoarseningConfig
from .driver import DriverConfig, partition
from .ea import EaConfig
from .pool import PoolConfig
from .stats import simpson_auc, wilcoxon

__all__ = ["SweepSpec", "SweepRow", "SweepResult", "sweep",
           "default_threshold_grid", "rows_to_csv"]


def default_threshold_grid(t_max, fine_step=250, coarse_step=5000, knee=5000):
    """Fine-stepped grid up to the knee, coarse-stepped above it."""
    grid = list(range(fine_step, min(knee, t_max) + 1, fine_step))
    grid += list(range(knee + coarse_step, t_max + 1, coarse_step))
    return tuple(grid)


@dataclass
class SweepSpec:
    thresholds: tuple
    repetitions: int = 20
    budget: int = 30000
    algorithms: tuple = ("pool", "ea")
    epsilon: float = 0.1
    adaptive: bool = False
    seed: int = 0
    mu: int = 100
    lam: int = 1000
    seed_multiplier: int = 100
    pool_r: int = 20
    fm_max_passes: int = 8
    refine_batch: int = 32

    def __post_init__(self):
        ts = tuple(self.thresholds)
        if not ts:
            raise ValueError("threshold grid must not be empty")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("thresholds must be strictly increasing")
        self.thresholds = ts
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")
        for alg in self.algorithms:
            if alg not in ("pool", "ea"):
                raise ValueError(f"unknown algorithm {alg!r}")


@dataclass
class SweepRow:
    threshold: int
    algorithm: str
    repetition: int
    seed: int
    initial_cut: int
    final_cut: int
    coarse_vertices: int
    stop_reason: str
    wall_time: float


@dataclass
class SweepResult:
    rows: list
    auc: dict  # algorithm -> area under mean final cut over thresholds
    wilcoxon_by_threshold: dict = field(default_factory=dict)

    def mean_final_cuts(self, algorithm):
        means = []
        for t in sorted({r.threshold for r in self.rows}):
            cuts = [r.final_cut for r in self.rows
                    if r.threshold == t and r.algorithm == algorithm]
            means.append(float(np.mean(cuts)))
        return means


def _cell_seed(master, t_index, a_index, repetition):
    ss = np.random.SeedSequence([int(master), t_index, a_index, repetition])
    return int(ss.generate_state(1)[0])


def _cell_config(spec, threshold, algorithm, seed):
    ccfg = CoarseningConfig(t=threshold, adaptive=spec.adaptive, k=2)
    ea = EaConfig(mu=spec.mu, lam=spec.lam, seed_multiplier=spec.seed_multiplier,
                  epsilon=spec.epsilon, fm_max_passes=spec.fm_max_passes)
    pool = PoolConfig(r=spec.pool_r, epsilon=spec.epsilon,
                      fm_max_passes=spec.fm_max_passes)
    return DriverConfig(k=2, epsilon=spec.epsilon, coarsening=ccfg,
                        initial=algorithm, budget=spec.budget, ea=ea, pool=pool,
                        seed=seed, refine_batch=spec.refine_batch,
                        fm_max_passes=spec.fm_max_passes)


def sweep(hg, spec):
    """Run the full (threshold x algorithm x repetition) grid."""
    rows = []
    for ti, threshold in enumerate(spec.thresholds):
        for ai, algorithm in enumerate(spec.algorithms):
            for rep in range(spec.repetitions):
                seed = _cell_seed(spec.seed, ti, ai, rep)
                cfg = _cell_config(spec, threshold, algorithm, seed)
                _, report = partition(hg, cfg)
                rows.append(SweepRow(
                    threshold=threshold, algorithm=algorithm, repetition=rep,
                    seed=seed, initial_cut=report.initial_cut,
                    final_cut=report.final_cut,
                    coarse_vertices=report.coarse_vertex_count,
                    stop_reason=report.stop_reason,
                    wall_time=report.wall_time))

    auc = {}
    if len(spec.thresholds) >= 2:
        xs = [float(t) for t in spec.thresholds]
        for algorithm in spec.algorithms:
            means = [float(np.mean([r.final_cut for r in rows
                                    if r.threshold == t and r.algorithm == algorithm]))
                     for t in spec.thresholds]
            auc[algorithm] = simpson_auc(xs, means)

    tests = {}
    if len(spec.algorithms) >= 2:
        a0, a1 = spec.algorithms[0], spec.algorithms[1]
        for t in spec.thresholds:
            sample0 = [r.final_cut for r in rows if r.threshold == t and r.algorithm == a0]
            sample1 = [r.final_cut for r in rows if r.threshold == t and r.algorithm == a1]
            tests[t] = wilcoxon(sample0, sample1, mode="rank-sum")
    return SweepResult(rows, auc, tests)


def rows_to_csv(rows):
    lines = ["threshold,algorithm,repetition,seed,initial_cut,final_cut,"
             "coarse_vertices,stop_reason,wall_time"]
    for r in rows:
        lines.append(f"{r.threshold},{r.algorithm},{r.repetition},{r.seed},"
                     f"{r.initial_cut},{r.final_cut},{r.coarse_vertices},"
                     f"{r.stop_reason},{r.wall_time:.4f}")
    return "\n".join(lines) + "\n"
