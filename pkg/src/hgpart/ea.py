"""Memetic (mu+lambda) evolutionary initial bipartitioner.

Each offspring is a clone of one uniformly drawn parent, crossed (with
probability ``crossover_prob``) with a second via label-symmetry-normalized
uniform crossover, mutated at its own self-adaptive per-gene rate, repaired
to feasibility, then improved with FM local search whose result the genes
keep (Lamarckian).  Survivors are the ``mu`` fittest of parents plus
offspring.  The population is seeded with ``mu * seed_multiplier`` pool
evaluations (or ``mu`` repaired-random FM starts when the multiplier is 0).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from .fm import refine_genes, repair_genes
from .pool import EvalRecord, PoolConfig, genes_imbalance, pool_stream, random_assignment

__all__ = [
    "Individual",
    "EaConfig",
    "EaResult",
    "mutation_ladder",
    "normalize_crossover",
    "mutate",
    "repair",
    "seed_population",
    "ea_run",
]


@dataclass
class Individual:
    """Bipartition genes, a per-individual mutation rate, and cached fitness."""

    genes: np.ndarray
    mut: float
    fitness: int | None = None
    imbalance: float | None = None


@dataclass
class EaConfig:
    mu: int = 100
    lam: int = 1000
    crossover_prob: float = 0.8
    adapt_prob: float = 0.1
    seed_multiplier: int = 100
    epsilon: float = 0.1
    seed: int = 0
    ladder: tuple | None = None  # defaults to mutation_ladder(|V'|) at run time
    fm_max_passes: int = 8

    def __post_init__(self):
        if self.mu < 1 or self.lam < 1:
            raise ValueError("mu and lambda must be at least 1")
        if not 0.0 <= self.crossover_prob <= 1.0:
            raise ValueError("crossover probability must lie in [0, 1]")
        if not 0.0 <= self.adapt_prob <= 1.0:
            raise ValueError("adaptation probability must lie in [0, 1]")
        if self.seed_multiplier < 0:
            raise ValueError("seed multiplier must be nonnegative")
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")


@dataclass
class EaResult:
    best: Individual
    log: list
    evaluations: int
    generations: int


def mutation_ladder(vertex_count):
    """Ten per-gene mutation rates spanning 1/(100 |V'|) to 100/|V'|.

    The base rate n = 1/|V'| appears twice, doubling its selection weight.
    Entries are clamped to at most 1.
    """
    if vertex_count < 1:
        raise ValueError("vertex count must be at least 1")
    n = 1.0 / vertex_count
    ladder = [n / 100, n / 10, n / 5, n / 2, n, n, 2 * n, 5 * n, 10 * n, 100 * n]
    return [min(rate, 1.0) for rate in ladder]


def _crossover_genes(g1, g2, rng):
    if len(g1) != len(g2):
        raise ValueError("parent gene lengths differ")
    n = len(g1)
    hamming = int((g1 != g2).sum())
    if 2 * hamming > n:  # strict: distance exactly n/2 is not normalized
        g2 = (1 - g2).astype(np.int8)
    mask = rng.random(n) < 0.5
    return np.where(mask, g1, g2).astype(np.int8)


def normalize_crossover(p1, p2, rng):
    """Uniform crossover after inverting p2 when Hamming distance exceeds N/2."""
    return _crossover_genes(p1.genes, p2.genes, rng)


def mutate(ind, cfg, rng):
    """Self-adaptive mutation: maybe reset the rate, then resample genes.

    With probability ``adapt_prob`` the rate is redrawn uniformly from the
    ladder.  Each gene is then independently resampled uniformly over {0, 1}
    with probability equal to the rate (resampling may keep the value).
    Returns a new, not yet evaluated Individual.
    """
    ladder = list(cfg.ladder) if cfg.ladder else mutation_ladder(len(ind.genes))
    mut = ind.mut
    if rng.random() < cfg.adapt_prob:
        mut = ladder[int(rng.integers(len(ladder)))]
    genes = ind.genes.copy()
    mask = rng.random(len(genes)) < mut
    hits = int(mask.sum())
    if hits:
        genes[mask] = rng.integers(0, 2, hits, dtype=np.int8)
    return Individual(genes, mut)


def repair(hg, genes, epsilon, rng):
    """Move random vertices from the heavier block until feasible."""
    view = hg.dense_view()
    out = np.array(genes, dtype=np.int8)
    repair_genes(view, out, epsilon, rng)
    return out


def _evaluate(view, genes, epsilon, rng, max_passes):
    repair_genes(view, genes, epsilon, rng)
    cut = refine_genes(view, genes, epsilon, rng, max_passes)
    return cut, genes_imbalance(view, genes)


def _seed(view, cfg, pool_cfg, rng, ladder):
    """Build the initial parent population; returns (population, log)."""
    root = int(rng.integers(2 ** 62))
    log = []
    best_cut = None
    picked = []
    if cfg.seed_multiplier == 0:
        for i in range(cfg.mu):
            r = np.random.default_rng([root, 0, i])
            genes = random_assignment(view, r)
            cut, imb = _evaluate(view, genes, cfg.epsilon, r, cfg.fm_max_passes)
            best_cut = cut if best_cut is None else min(best_cut, cut)
            log.append(EvalRecord(i, "random", cut, imb, best_cut))
            picked.append((cut, imb, i, genes))
        picked.sort(key=lambda t: t[:3])
    else:
        budget = cfg.mu * cfg.seed_multiplier
        stream = pool_stream(view, pool_cfg, np.random.default_rng([root, 1]))
        # max-heap (negated keys) of the mu fittest; duplicates are kept
        heap = []
        for _ in range(budget):
            index, member, genes, cut, imb = next(stream)
            best_cut = cut if best_cut is None else min(best_cut, cut)
            log.append(EvalRecord(index, member, cut, imb, best_cut))
            heapq.heappush(heap, (-cut, -imb, -index, genes))
            if len(heap) > cfg.mu:
                heapq.heappop(heap)
        picked = sorted((-nc, -ni, -nx, g) for nc, ni, nx, g in heap)
    population = []
    for j, (cut, imb, _, genes) in enumerate(picked):
        r = np.random.default_rng([root, 2, j])
        mut = ladder[int(r.integers(len(ladder)))]
        population.append(Individual(genes, mut, int(cut), float(imb)))
    return population, log


def seed_population(hg, cfg, pool_cfg, rng):
    """Seed ``mu`` individuals; returns (population, evaluations used, log).

    With a positive seed multiplier the pool is run for mu * multiplier
    evaluations and the mu fittest results kept; otherwise mu repaired
    random individuals are FM-refined directly.  Every individual draws its
    mutation rate uniformly from the ladder.
    """
    view = hg.dense_view()
    ladder = list(cfg.ladder) if cfg.ladder else mutation_ladder(view.num_nodes)
    population, log = _seed(view, cfg, pool_cfg, rng, ladder)
    return population, len(log), log


def ea_run(hg, cfg, budget, rng=None, pool_cfg=None):
    """Run the memetic EA for exactly ``budget`` evaluations.

    Seeding evaluations count against the budget; offspring creation stops
    mid-generation when the budget runs out.  Per-offspring rng streams are
    derived from (seed, generation, offspring index) so evaluation order
    cannot change results.  Returns the all-time best individual and the
    complete evaluation log.
    """
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    view = hg.dense_view()
    ladder = list(cfg.ladder) if cfg.ladder else mutation_ladder(view.num_nodes)
    seed_evals = cfg.mu * cfg.seed_multiplier if cfg.seed_multiplier > 0 else cfg.mu
    if budget < seed_evals:
        raise ValueError(
            f"budget {budget} cannot cover the {seed_evals} seeding evaluations")
    if pool_cfg is None:
        pool_cfg = PoolConfig(epsilon=cfg.epsilon, fm_max_passes=cfg.fm_max_passes)
    root = int(rng.integers(2 ** 62))
    population, log = _seed(view, cfg, pool_cfg, np.random.default_rng([root, 0]), ladder)
    evals = len(log)
    best = min(population, key=lambda a: (a.fitness, a.imbalance))
    best_cut = log[-1].best_cut if log else best.fitness

    generation = 0
    while evals < budget:
        generation += 1
        offspring = []
        for i in range(cfg.lam):
            if evals >= budget:
                break
            r = np.random.default_rng([root, generation, i])
            p1 = population[int(r.integers(cfg.mu))]
            p2 = population[int(r.integers(cfg.mu))]
            genes = p1.genes.copy()
            mut = p1.mut
            if r.random() < cfg.crossover_prob:
                genes = _crossover_genes(p1.genes, p2.genes, r)
                if p2.fitness < p1.fitness:  # rate follows the fitter parent
                    mut = p2.mut
            if r.random() < cfg.adapt_prob:
                mut = ladder[int(r.integers(len(ladder)))]
            mask = r.random(view.num_nodes) < mut
            hits = int(mask.sum())
            if hits:
                genes[mask] = r.integers(0, 2, hits, dtype=np.int8)
            cut, imb = _evaluate(view, genes, cfg.epsilon, r, cfg.fm_max_passes)
            child = Individual(genes, mut, cut, imb)
            offspring.append(child)
            best_cut = min(best_cut, cut)
            log.append(EvalRecord(evals, "ea", cut, imb, best_cut, mut))
            evals += 1
            if (cut, imb) < (best.fitness, best.imbalance):
                best = child
        merged = population + offspring
        merged.sort(key=lambda a: (a.fitness, a.imbalance))  # stable: parents first
        population = merged[:cfg.mu]
    return EaResult(best, log, evals, generation)
