"""Search-space characterization: local-optima sampling and FDC fitting.

``sample_local_optima`` coarsens a hypergraph to its threshold, runs FM from
many repaired random bipartitions and records the resulting local optima.
Distances to the quasi-global set (the minimum-cut records of the sample)
are label-symmetry aware: each candidate is compared both directly and
inverted, and the smaller Hamming distance kept, scaled to [0, 1].

The fitness-distance model is the through-origin regression
relative_cut = m * distance with an uncentered coefficient of determination;
an intercept-including ordinary fit is computed alongside for comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coarsening import coarsen, uncontract
from .fm import refine_genes, repair_genes
from .pool import random_assignment

__all__ = [
    "LocalOptimumRecord",
    "FdcModel",
    "sample_local_optima",
    "quasi_global_set",
    "scaled_distance",
    "min_scaled_distance",
    "landscape_distances",
    "fdc_fit",
    "export_landscape",
]


@dataclass
class LocalOptimumRecord:
    """One FM local optimum of the coarse hypergraph."""

    genes: np.ndarray
    cut: int
    relative_cut: float  # cut divided by the best cut observed in the sample


@dataclass
class FdcModel:
    """Through-origin fit plus a conventional intercept fit for comparison."""

    slope: float
    r_squared: float
    n_samples: int
    intercept_slope: float
    intercept: float
    intercept_r_squared: float


def sample_local_optima(hg, coarsening_cfg, n, rng, epsilon=0.1, fm_max_passes=8):
    """Coarsen, then record ``n`` FM local optima from random feasible starts.

    The hypergraph is restored to its input state before returning.  Samples
    use per-index derived rng streams, so they are order-independent.
    Duplicate optima are retained.
    """
    if n < 1:
        raise ValueError("sample count must be at least 1")
    root = int(rng.integers(2 ** 62))
    result = coarsen(hg, coarsening_cfg, np.random.default_rng([root, 0]))
    raw = []
    try:
        view = hg.dense_view()
        for i in range(n):
            r = np.random.default_rng([root, 1, i])
            genes = random_assignment(view, r)
            repair_genes(view, genes, epsilon, r)
            cut = refine_genes(view, genes, epsilon, r, fm_max_passes)
            raw.append((genes, cut))
    finally:
        while result.mementos:
            uncontract(hg, result.mementos.pop())
    best = min(cut for _, cut in raw)
    records = []
    for genes, cut in raw:
        if best > 0:
            rel = cut / best
        else:
            rel = 1.0 if cut == 0 else math.inf
        records.append(LocalOptimumRecord(genes, cut, rel))
    return records


def quasi_global_set(records):
    """Minimum-cut members of the sample (the estimated global optima)."""
    best = min(r.cut for r in records)
    return [r.genes for r in records if r.cut == best]


def scaled_distance(l, g):
    """Label-symmetry-aware Hamming distance scaled to [0, 1].

    The smaller of the distances from ``l`` and from its inverse to ``g``;
    for bipartition genes the inverse distance is N minus the direct one.
    """
    l = np.asarray(l)
    g = np.asarray(g)
    if l.shape != g.shape:
        raise ValueError("gene lengths differ")
    n = len(l)
    if n == 0:
        raise ValueError("empty genes")
    h = int((l != g).sum())
    return min(h, n - h) / n


def min_scaled_distance(l, quasi_set):
    """Smallest scaled distance from ``l`` to any quasi-global optimum."""
    return min(scaled_distance(l, g) for g in quasi_set)


def landscape_distances(records):
    """Per-record distance to the sample's quasi-global set."""
    quasi = quasi_global_set(records)
    return np.array([min_scaled_distance(r.genes, quasi) for r in records])


def fdc_fit(records, distances):
    """Fit relative_cut = slope * distance by through-origin least squares.

    ``records`` may be LocalOptimumRecord instances or plain response
    values.  The coefficient of determination is uncentered, consistent
    with the no-intercept model; the intercept-including ordinary fit is
    reported alongside with the usual centered R^2.
    """
    y = np.array([r.relative_cut if isinstance(r, LocalOptimumRecord) else float(r)
                  for r in records], dtype=float)
    x = np.asarray(distances, dtype=float)
    if len(x) != len(y):
        raise ValueError("records and distances differ in length")
    if len(x) < 2:
        raise ValueError("need at least two points to fit")
    sxx = float(x @ x)
    if sxx == 0.0:
        raise ValueError("all distances are zero")
    slope = float(x @ y) / sxx
    res = y - slope * x
    ss_res = float(res @ res)
    ss_tot = float(y @ y)
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot

    if np.ptp(x) == 0.0:
        islope, icept, ir2 = float("nan"), float("nan"), float("nan")
    else:
        islope, icept = np.polyfit(x, y, 1)
        ires = y - (islope * x + icept)
        ss_tot_c = float(((y - y.mean()) ** 2).sum())
        ir2 = 1.0 if ss_tot_c == 0.0 else 1.0 - float(ires @ ires) / ss_tot_c
    return FdcModel(slope, r_squared, len(x), float(islope), float(icept), float(ir2))


def export_landscape(records, distances):
    """Dataset rows for external plotting: distance, relative cut, raw cut."""
    if not records:
        raise ValueError("no records to export")
    if len(records) != len(distances):
        raise ValueError("records and distances differ in length")
    lines = ["distance,relative_cut,cut"]
    for r, d in zip(records, distances):
        lines.append(f"{d:.6g},{r.relative_cut:.6g},{r.cut}")
    return "\n".join(lines) + "\n"
