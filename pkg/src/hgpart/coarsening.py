"""n-level coarsening: reversible pairwise contraction with an adaptive stop.

Contraction absorbs vertex ``b`` into survivor ``a``: every enabled edge
containing ``b`` either rewrites the pin to ``a`` (if ``a`` was absent) or
drops it (if ``a`` was already a pin); edges reduced to one pin are
disabled.  Each contraction returns a :class:`ContractionMemento` that
restores the exact pre-contraction structure when popped in LIFO order.

The adaptive stopping rule samples the total pin count every ``t_s``
contractions once fewer than ``t_max * k`` vertices remain, keeps the last
``t_n`` samples, and stops coarsening when the squared correlation of a
least-squares line through them falls below ``t_r`` - i.e. when pin loss
turns from linear decline into decay.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "CoarseningConfig",
    "ContractionMemento",
    "CoarseningMonitor",
    "CoarsenResult",
    "rate_pair",
    "select_contraction_partner",
    "contract",
    "uncontract",
    "monitor_step",
    "window_r_squared",
    "coarsen",
    "format_trace",
]


@dataclass
class CoarseningConfig:
    """Thresholds and knobs for one coarsening run.

    ``t`` is the final threshold (coarsening always stops at ``t * k``
    active vertices), ``t_max`` the threshold below which the adaptive
    monitor starts sampling, ``t_s``/``t_n``/``t_r`` the sample stride,
    window length and squared-correlation cutoff of the monitor.
    ``max_node_weight`` defaults to ceil(c(V) / (t * k)) so no single
    supernode can make balance infeasible.
    """

    t: int = 150
    t_max: int = 15000
    t_s: int = 50
    t_n: int = 100
    t_r: float = 0.99
    k: int = 2
    max_node_weight: int | None = None
    adaptive: bool = False

    def __post_init__(self):
        if self.t < 1:
            raise ValueError("t must be at least 1")
        if self.t > self.t_max:
            raise ValueError("t must not exceed t_max")
        if self.t_s < 1:
            raise ValueError("t_s must be at least 1")
        if self.t_n < 3:
            raise ValueError("t_n must be at least 3")
        if not 0.0 < self.t_r <= 1.0:
            raise ValueError("t_r must lie in (0, 1]")
        if self.k < 2:
            raise ValueError("k must be at least 2")


@dataclass
class ContractionMemento:
    """Reversible record of one contraction of ``absorbed`` into ``survivor``.

    ``replaced`` lists (edge id, pin position) where the absorbed vertex was
    rewritten to the survivor, ``shrunk`` lists (edge id, pin position) where
    it was dropped because the survivor was already a pin, and ``removed``
    lists (edge id, former pin list) for edges that became single-pin and
    were disabled.  ``seq`` enforces LIFO discipline.
    """

    survivor: int
    absorbed: int
    replaced: list = field(default_factory=list)
    shrunk: list = field(default_factory=list)
    removed: list = field(default_factory=list)
    seq: int = 0


class CoarseningMonitor:
    """Sliding window of pin-count samples with regression state."""

    def __init__(self, cfg):
        self.window = deque(maxlen=cfg.t_n)
        self.contractions_since_sample = 0
        self.active = False


def window_r_squared(samples):
    """Squared Pearson correlation of (sample index, value).

    A window with zero value variance is treated as perfectly linear.
    """
    y = np.asarray(samples, dtype=float)
    x = np.arange(len(y), dtype=float)
    dy = y - y.mean()
    syy = float(dy @ dy)
    if syy == 0.0:
        return 1.0
    dx = x - x.mean()
    sxx = float(dx @ dx)
    sxy = float(dx @ dy)
    return (sxy * sxy) / (sxx * syy)


def monitor_step(mon, pins, cfg):
    """Record one contraction's pin count; True means stop coarsening.

    Appends a sample every ``t_s`` contractions; once the window holds
    ``t_n`` samples the regression is evaluated on each new sample.
    """
    mon.contractions_since_sample += 1
    if mon.contractions_since_sample < cfg.t_s:
        return False
    mon.contractions_since_sample = 0
    mon.window.append(int(pins))
    if len(mon.window) < cfg.t_n:
        return False
    return window_r_squared(mon.window) < cfg.t_r


def effective_max_node_weight(hg, cfg):
    if cfg.max_node_weight is not None:
        return cfg.max_node_weight
    return math.ceil(hg.total_vertex_weight / (cfg.t * cfg.k))


def rate_pair(hg, u, v):
    """Heavy-edge rating: sum of w(e)/(|e|-1) over enabled edges with both pins."""
    if u == v:
        raise ValueError("rating requires two distinct vertices")
    if not hg.active[u] or not hg.active[v]:
        raise ValueError("rating requires active vertices")
    total = 0.0
    for e in hg.incident[u]:
        if not hg.enabled[e]:
            continue
        pins = hg.pins[e]
        if len(pins) > 1 and v in pins:
            total += hg.edge_weights[e] / (len(pins) - 1)
    return total


def select_contraction_partner(hg, u, cfg, rng):
    """Adjacent vertex maximizing the heavy-edge rating, or None.

    Candidates whose combined weight with ``u`` exceeds the node-weight cap
    are skipped; ties are broken uniformly at random.
    """
    if not hg.active[u]:
        raise ValueError(f"vertex {u} is not active")
    cap = effective_max_node_weight(hg, cfg)
    wu = hg.vertex_weights[u]
    ratings = {}
    for e in hg.incident[u]:
        if not hg.enabled[e]:
            continue
        pins = hg.pins[e]
        if len(pins) < 2:
            continue
        r = hg.edge_weights[e] / (len(pins) - 1)
        for p in pins:
            if p != u:
                ratings[p] = ratings.get(p, 0.0) + r
    best_rating = 0.0
    candidates = []
    for v, r in ratings.items():
        if wu + hg.vertex_weights[v] > cap:
            continue
        if r > best_rating:
            best_rating = r
            candidates = [v]
        elif r == best_rating:
            candidates.append(v)
    if not candidates:
        return None
    if len(candidates) == 1:
        return candidates[0]
    return candidates[int(rng.integers(len(candidates)))]


def contract(hg, a, b):
    """Absorb vertex ``b`` into ``a`` in place; returns the memento."""
    if a == b:
        raise ValueError("cannot contract a vertex with itself")
    if not hg.active[a] or not hg.active[b]:
        raise ValueError("contraction requires two active vertices")
    memento = ContractionMemento(survivor=a, absorbed=b)
    for e in hg.incident[b]:
        if not hg.enabled[e]:
            continue
        pins = hg.pins[e]
        pos = pins.index(b)
        if a in pins:
            if len(pins) == 2:
                memento.removed.append((e, tuple(pins)))
                pins.pop(pos)
                hg.enabled[e] = False
                hg.total_pins -= 2
            else:
                memento.shrunk.append((e, pos))
                pins.pop(pos)
                hg.total_pins -= 1
        else:
            pins[pos] = a
            hg.incident[a].append(e)
            memento.replaced.append((e, pos))
    hg.vertex_weights[a] += hg.vertex_weights[b]
    hg.active[b] = False
    hg.num_active -= 1
    hg.version += 1
    hg.contraction_count += 1
    memento.seq = hg.contraction_count
    return memento


def uncontract(hg, memento):
    """Undo the contraction recorded by ``memento`` (LIFO order enforced)."""
    if memento.seq != hg.contraction_count:
        raise ValueError(
            f"out-of-order uncontraction: memento seq {memento.seq}, "
            f"hypergraph at {hg.contraction_count}")
    a, b = memento.survivor, memento.absorbed
    hg.vertex_weights[a] -= hg.vertex_weights[b]
    hg.active[b] = True
    hg.num_active += 1
    for e, former in memento.removed:
        hg.enabled[e] = True
        hg.pins[e] = list(former)
        hg.total_pins += len(former)
    for e, pos in memento.shrunk:
        hg.pins[e].insert(pos, b)
        hg.total_pins += 1
    if memento.replaced:
        n = len(memento.replaced)
        tail = hg.incident[a][-n:]
        if tail != [e for e, _ in memento.replaced]:
            raise ValueError("incidence tail does not match memento (stack corrupted)")
        del hg.incident[a][-n:]
        for e, pos in memento.replaced:
            hg.pins[e][pos] = b
    hg.version += 1
    hg.contraction_count -= 1


@dataclass
class CoarsenResult:
    """Memento stack (LIFO), why coarsening stopped, and an optional trace."""

    mementos: list
    stop_reason: str  # "threshold" | "adaptive" | "exhausted"
    trace: list | None = None


def coarsen(hg, cfg, rng, trace=None):
    """Contract vertex pairs until a stopping condition fires.

    Visits the active vertices in a fresh random order each round,
    contracting each with its selected partner.  Stops at ``t * k`` active
    vertices, when the adaptive monitor fires, or when a full round finds
    no admissible pair.  Pass a list as ``trace`` to collect one
    (survivor, absorbed, active count, pin count) tuple per contraction.
    """
    floor = cfg.t * cfg.k
    mementos = []
    monitor = CoarseningMonitor(cfg)
    stop_reason = None
    while stop_reason is None and hg.num_active > floor:
        order = rng.permutation(np.array(hg.active_vertices(), dtype=np.int64))
        progressed = False
        for u in order:
            if hg.num_active <= floor:
                stop_reason = "threshold"
                break
            u = int(u)
            if not hg.active[u]:
                continue
            v = select_contraction_partner(hg, u, cfg, rng)
            if v is None:
                continue
            mementos.append(contract(hg, u, v))
            progressed = True
            if trace is not None:
                trace.append((u, v, hg.num_active, hg.total_pins))
            if cfg.adaptive:
                if not monitor.active and hg.num_active < cfg.t_max * cfg.k:
                    monitor.active = True
                if monitor.active and monitor_step(monitor, hg.total_pins, cfg):
                    stop_reason = "adaptive"
                    break
        if stop_reason is None and not progressed:
            stop_reason = "exhausted"
    if stop_reason is None:
        stop_reason = "threshold"
    return CoarsenResult(mementos, stop_reason, trace)


def format_trace(trace):
    """Contraction trace as comma-separated text with a header row."""
    lines = ["survivor,absorbed,vertices,pins"]
    lines.extend(f"{s},{a},{nv},{np_}" for s, a, nv, np_ in trace)
    return "\n".join(lines) + "\n"
