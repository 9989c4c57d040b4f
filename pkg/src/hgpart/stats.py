"""Statistics utilities: piecewise-composite Simpson AUC and Wilcoxon tests.

``simpson_auc`` integrates tabulated values whose abscissae form piecewise
uniform grids (the threshold sweeps use a fine grid below a knee and a
coarse one above); each maximal uniform segment gets the composite Simpson
rule, with a trapezoid picking up a leftover odd interval.

``wilcoxon`` computes two-sided p-values; small samples are handled exactly
by enumerating the permutation distribution of the rank statistic, larger
ones by the tie-corrected normal approximation.  Ties receive average
ranks; zero differences are dropped in the signed-rank mode.
"""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np

__all__ = ["simpson_auc", "wilcoxon", "EXACT_LIMIT"]

# largest combined sample size (rank-sum) / pair count (signed-rank) that is
# enumerated exactly; C(12, 6) = 924 and 2^12 = 4096 assignments
EXACT_LIMIT = 12


def _uniform_segments(xs, rel_tol=1e-9):
    """Split indices into maximal runs of (nearly) equal spacing."""
    diffs = np.diff(xs)
    scale = float(np.max(np.abs(diffs)))
    segments = []
    start = 0
    for i in range(1, len(diffs)):
        if abs(diffs[i] - diffs[start]) > rel_tol * scale:
            segments.append((start, i))
            start = i
    segments.append((start, len(diffs)))
    return segments  # half-open interval ranges [a, b) over interval indices


def simpson_auc(xs, ys):
    """Area under tabulated values via segment-wise composite Simpson.

    ``xs`` must be strictly increasing.  Within each maximal uniformly
    spaced segment the composite Simpson rule covers an even number of
    intervals; a leftover single interval is integrated by trapezoid.
    Exact for cubics on uniform even-count grids and for linear data on
    any grid.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or ys.ndim != 1 or len(xs) != len(ys):
        raise ValueError("xs and ys must be one-dimensional and equally long")
    if len(xs) < 2:
        raise ValueError("need at least two samples")
    if not np.all(np.diff(xs) > 0):
        raise ValueError("xs must be strictly increasing")
    area = 0.0
    for a, b in _uniform_segments(xs):
        h = xs[a + 1] - xs[a]
        n_int = b - a
        i = a
        while n_int >= 2:
            area += (h / 3.0) * (ys[i] + 4.0 * ys[i + 1] + ys[i + 2])
            i += 2
            n_int -= 2
        if n_int == 1:
            area += 0.5 * (xs[i + 1] - xs[i]) * (ys[i] + ys[i + 1])
    return float(area)


def _rankdata(values):
    """Average ranks (1-based); ties share the mean of their rank range."""
    values = np.asarray(values, dtype=float)
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=float)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i:j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def _norm_sf(z):
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def _two_sided(count_le, count_ge, total):
    return min(1.0, 2.0 * min(count_le, count_ge) / total)


def _rank_sum(a, b):
    n1, n2 = len(a), len(b)
    ranks = _rankdata(np.concatenate([a, b]))
    w_obs = float(ranks[:n1].sum())
    u_obs = w_obs - n1 * (n1 + 1) / 2.0
    if n1 + n2 <= EXACT_LIMIT:
        tol = 1e-9
        count_le = count_ge = 0
        total = 0
        for chosen in combinations(range(n1 + n2), n1):
            w = float(ranks[list(chosen)].sum())
            if w <= w_obs + tol:
                count_le += 1
            if w >= w_obs - tol:
                count_ge += 1
            total += 1
        return u_obs, _two_sided(count_le, count_ge, total)
    n = n1 + n2
    _, tie_counts = np.unique(ranks, return_counts=True)
    tie_term = float(((tie_counts ** 3) - tie_counts).sum())
    sigma_sq = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if sigma_sq <= 0:
        return u_obs, 1.0
    z = (u_obs - n1 * n2 / 2.0) / math.sqrt(sigma_sq)
    return u_obs, min(1.0, 2.0 * _norm_sf(abs(z)))


def _signed_rank(a, b):
    if len(a) != len(b):
        raise ValueError("signed-rank mode needs paired samples of equal length")
    d = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    d = d[d != 0.0]  # zero differences are dropped
    n = len(d)
    if n == 0:
        return 0.0, 1.0
    ranks = _rankdata(np.abs(d))
    w_obs = float(ranks[d > 0].sum())
    if n <= EXACT_LIMIT:
        tol = 1e-9
        count_le = count_ge = 0
        total = 1 << n
        for mask in range(total):
            w = 0.0
            for i in range(n):
                if mask >> i & 1:
                    w += ranks[i]
            if w <= w_obs + tol:
                count_le += 1
            if w >= w_obs - tol:
                count_ge += 1
        return w_obs, _two_sided(count_le, count_ge, total)
    mean = n * (n + 1) / 4.0
    _, tie_counts = np.unique(ranks, return_counts=True)
    tie_term = float(((tie_counts ** 3) - tie_counts).sum())
    sigma_sq = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term / 48.0
    if sigma_sq <= 0:
        return w_obs, 1.0
    z = (w_obs - mean) / math.sqrt(sigma_sq)
    return w_obs, min(1.0, 2.0 * _norm_sf(abs(z)))


def wilcoxon(a, b, mode="rank-sum"):
    """Two-sided Wilcoxon test; returns (statistic, p-value).

    mode "rank-sum": unpaired samples; the statistic is the Mann-Whitney U
    of the first sample.  Exact enumeration of all rank splits when the
    combined size is at most 12, tie-corrected normal approximation above.

    mode "signed-rank": paired samples of equal length; the statistic is
    the positive-difference rank sum W+.  Exact over all sign assignments
    for at most 12 nonzero pairs, normal approximation above.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if len(a) == 0 or len(b) == 0:
        raise ValueError("samples must be nonempty")
    if mode == "rank-sum":
        return _rank_sum(a, b)
    if mode == "signed-rank":
        return _signed_rank(a, b)
    raise ValueError(f"unknown mode {mode!r}")
