"""Hypergraph data model, bipartition representation, quality metrics, file I/O.

The :class:`Hypergraph` stores a weighted vertex/hyperedge incidence
structure.  It additionally carries per-vertex "active" and per-edge
"enabled" flags so that the coarsening module can contract vertex pairs in
place and later undo every contraction exactly; a freshly constructed
hypergraph has all vertices active and all edges enabled.  Outside of the
coarsening module the structure should be treated as read-only.

Vertices are 0-indexed internally.  The hMetis file format (the only
on-disk hypergraph format supported) is 1-indexed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Hypergraph",
    "Partition",
    "PartitionConfig",
    "DenseView",
    "parse_hmetis",
    "write_hmetis",
    "write_partition",
    "read_partition",
    "cut_size",
    "km1",
    "imbalance",
    "block_weights",
    "ideal_block_weight",
    "max_feasible_block_weight",
    "is_feasible",
]


class Hypergraph:
    """Weighted hypergraph with support for reversible pairwise contraction.

    Attributes (read-only by convention):
        num_vertices: total number of vertices ever created (contraction never
            deletes slots, it only deactivates them).
        pins: list of pin lists, one per hyperedge, each a list of vertex ids.
        vertex_weights: per-vertex positive integer weight.
        edge_weights: per-edge positive integer weight.
        incident: per-vertex list of incident edge ids.  For active vertices
            this is exact up to disabled edges, which callers must skip.
        active: per-vertex flag; False once the vertex has been absorbed.
        enabled: per-edge flag; False once the edge shrank to a single pin.
    """

    def __init__(self, num_vertices, hyperedges, vertex_weights=None, edge_weights=None):
        if num_vertices < 0:
            raise ValueError("vertex count must be nonnegative")
        self.num_vertices = int(num_vertices)
        self.pins = []
        for i, edge in enumerate(hyperedges):
            edge = [int(v) for v in edge]
            if not edge:
                raise ValueError(f"hyperedge {i} has no pins")
            seen = set()
            for v in edge:
                if not 0 <= v < self.num_vertices:
                    raise ValueError(f"hyperedge {i}: pin {v} out of range [0, {self.num_vertices})")
                if v in seen:
                    raise ValueError(f"hyperedge {i}: duplicate pin {v}")
                seen.add(v)
            self.pins.append(edge)
        self.num_edges = len(self.pins)

        if vertex_weights is None:
            vertex_weights = [1] * self.num_vertices
        if edge_weights is None:
            edge_weights = [1] * self.num_edges
        if len(vertex_weights) != self.num_vertices:
            raise ValueError("vertex weight count mismatch")
        if len(edge_weights) != self.num_edges:
            raise ValueError("edge weight count mismatch")
        for w in vertex_weights:
            if w <= 0:
                raise ValueError(f"nonpositive vertex weight {w}")
        for w in edge_weights:
            if w <= 0:
                raise ValueError(f"nonpositive edge weight {w}")
        self.vertex_weights = [int(w) for w in vertex_weights]
        self.edge_weights = [int(w) for w in edge_weights]

        self.incident = [[] for _ in range(self.num_vertices)]
        for e, edge in enumerate(self.pins):
            for v in edge:
                self.incident[v].append(e)

        self.active = [True] * self.num_vertices
        self.enabled = [True] * self.num_edges
        self.num_active = self.num_vertices
        self.total_pins = sum(len(edge) for edge in self.pins)
        self.total_vertex_weight = sum(self.vertex_weights)
        # bumped on every contract/uncontract; used to invalidate cached views
        self.version = 0
        self.contraction_count = 0
        self._view_cache = None

    def degree(self, v):
        """Number of enabled hyperedges incident on vertex ``v``."""
        return sum(1 for e in self.incident[v] if self.enabled[e])

    def active_vertices(self):
        """Ids of the currently active vertices, in ascending order."""
        return [v for v in range(self.num_vertices) if self.active[v]]

    def neighbors(self, v):
        """Distinct active vertices sharing an enabled hyperedge with ``v``."""
        seen = set()
        for e in self.incident[v]:
            if not self.enabled[e]:
                continue
            for u in self.pins[e]:
                if u != v:
                    seen.add(u)
        return seen

    def copy(self):
        """Deep copy of the current (possibly contracted) state."""
        hg = Hypergraph.__new__(Hypergraph)
        hg.num_vertices = self.num_vertices
        hg.num_edges = self.num_edges
        hg.pins = [list(edge) for edge in self.pins]
        hg.vertex_weights = list(self.vertex_weights)
        hg.edge_weights = list(self.edge_weights)
        hg.incident = [list(es) for es in self.incident]
        hg.active = list(self.active)
        hg.enabled = list(self.enabled)
        hg.num_active = self.num_active
        hg.total_pins = self.total_pins
        hg.total_vertex_weight = self.total_vertex_weight
        hg.version = self.version
        hg.contraction_count = self.contraction_count
        hg._view_cache = None
        return hg

    def dense_view(self):
        """Flat CSR snapshot of the active/enabled state (cached per version)."""
        if self._view_cache is not None and self._view_cache.version == self.version:
            return self._view_cache
        view = DenseView.from_hypergraph(self)
        self._view_cache = view
        return view

    def __repr__(self):
        return (f"Hypergraph(|V|={self.num_vertices}, |E|={self.num_edges}, "
                f"active={self.num_active}, pins={self.total_pins})")


@dataclass
class Partition:
    """Vertex-to-block assignment.  ``block_of[v] == -1`` means unassigned.

    During multilevel partitioning only active vertices carry meaningful
    blocks; absorbed vertices are filled in as the contraction stack is
    replayed.
    """

    block_of: np.ndarray
    k: int

    def __post_init__(self):
        self.block_of = np.asarray(self.block_of, dtype=np.int64)
        if self.k < 1:
            raise ValueError("k must be positive")

    def copy(self):
        return Partition(self.block_of.copy(), self.k)


@dataclass
class PartitionConfig:
    """Target block count and allowed imbalance fraction."""

    k: int = 2
    epsilon: float = 0.1

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("k must be at least 2")
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")


class DenseView:
    """Immutable flat snapshot of a hypergraph's active/enabled structure.

    Active vertices and enabled edges are renumbered densely; pin and
    incidence lists are stored CSR-style so numerical kernels can run on
    plain integer arrays.
    """

    __slots__ = ("version", "node_ids", "edge_ids", "vertex_weight", "edge_weight",
                 "pin_off", "pin_dense", "inc_off", "inc_dense", "total_weight",
                 "num_nodes", "num_edges")

    @classmethod
    def from_hypergraph(cls, hg):
        view = cls.__new__(cls)
        view.version = hg.version
        node_ids = [v for v in range(hg.num_vertices) if hg.active[v]]
        edge_ids = [e for e in range(hg.num_edges) if hg.enabled[e]]
        view.node_ids = np.array(node_ids, dtype=np.int64)
        view.edge_ids = np.array(edge_ids, dtype=np.int64)
        view.num_nodes = len(node_ids)
        view.num_edges = len(edge_ids)
        dense = {v: i for i, v in enumerate(node_ids)}

        view.vertex_weight = np.array([hg.vertex_weights[v] for v in node_ids], dtype=np.int64)
        view.edge_weight = np.array([hg.edge_weights[e] for e in edge_ids], dtype=np.int64)
        view.total_weight = int(view.vertex_weight.sum())

        pin_off = np.zeros(view.num_edges + 1, dtype=np.int64)
        for i, e in enumerate(edge_ids):
            pin_off[i + 1] = pin_off[i] + len(hg.pins[e])
        pin_dense = np.empty(int(pin_off[-1]), dtype=np.int64)
        pos = 0
        for e in edge_ids:
            for v in hg.pins[e]:
                pin_dense[pos] = dense[v]
                pos += 1
        view.pin_off = pin_off
        view.pin_dense = pin_dense

        counts = np.zeros(view.num_nodes, dtype=np.int64)
        for i in range(view.num_edges):
            for p in range(pin_off[i], pin_off[i + 1]):
                counts[pin_dense[p]] += 1
        inc_off = np.zeros(view.num_nodes + 1, dtype=np.int64)
        np.cumsum(counts, out=inc_off[1:])
        inc_dense = np.empty(int(inc_off[-1]), dtype=np.int64)
        cursor = inc_off[:-1].copy()
        for i in range(view.num_edges):
            for p in range(pin_off[i], pin_off[i + 1]):
                v = pin_dense[p]
                inc_dense[cursor[v]] = i
                cursor[v] += 1
        view.inc_off = inc_off
        view.inc_dense = inc_dense
        return view

    def genes_to_partition(self, num_vertices, genes, k=2):
        """Expand dense per-node genes into a Partition over vertex ids."""
        block_of = np.full(num_vertices, -1, dtype=np.int64)
        block_of[self.node_ids] = genes
        return Partition(block_of, k)

    def partition_to_genes(self, part):
        """Extract dense genes for the active vertices from a Partition."""
        genes = part.block_of[self.node_ids].astype(np.int8)
        if (genes < 0).any():
            raise ValueError("partition does not cover all active vertices")
        return genes


# ---------------------------------------------------------------------------
# metrics


def _check_partition(hg, part):
    if len(part.block_of) != hg.num_vertices:
        raise ValueError(
            f"partition covers {len(part.block_of)} vertices, hypergraph has {hg.num_vertices}")


def _edge_blocks(hg, part, e):
    blocks = set()
    for v in hg.pins[e]:
        b = part.block_of[v]
        if b < 0:
            raise ValueError(f"vertex {v} is unassigned")
        blocks.add(int(b))
    return blocks


def cut_size(hg, part):
    """Sum of weights of enabled hyperedges whose pins touch >= 2 blocks."""
    _check_partition(hg, part)
    total = 0
    for e in range(hg.num_edges):
        if not hg.enabled[e]:
            continue
        if len(_edge_blocks(hg, part, e)) > 1:
            total += hg.edge_weights[e]
    return total


def km1(hg, part):
    """Connectivity metric: sum over edges of weight * (blocks touched - 1)."""
    _check_partition(hg, part)
    total = 0
    for e in range(hg.num_edges):
        if not hg.enabled[e]:
            continue
        total += hg.edge_weights[e] * (len(_edge_blocks(hg, part, e)) - 1)
    return total


def block_weights(hg, part):
    """Per-block sums of active-vertex weights."""
    _check_partition(hg, part)
    weights = np.zeros(part.k, dtype=np.int64)
    for v in range(hg.num_vertices):
        if not hg.active[v]:
            continue
        b = part.block_of[v]
        if b < 0:
            raise ValueError(f"vertex {v} is unassigned")
        weights[b] += hg.vertex_weights[v]
    return weights


def ideal_block_weight(total_weight, k):
    """Ceiling of total weight divided by the block count."""
    return -(-int(total_weight) // int(k))


def max_feasible_block_weight(total_weight, k, epsilon):
    """Largest integer block weight satisfying the balance constraint.

    A partition is feasible iff its heaviest block weighs at most
    (1 + epsilon) * ceil(total/k).  The small absolute nudge guards against
    binary representation of epsilon pushing an exact product just below an
    integer.
    """
    return int(math.floor((1.0 + epsilon) * ideal_block_weight(total_weight, k) + 1e-9))


def imbalance(hg, part):
    """Heaviest block weight over the ideal block weight, minus one."""
    weights = block_weights(hg, part)
    ideal = ideal_block_weight(hg.total_vertex_weight, part.k)
    return float(weights.max()) / ideal - 1.0


def is_feasible(hg, part, epsilon):
    limit = max_feasible_block_weight(hg.total_vertex_weight, part.k, epsilon)
    return int(block_weights(hg, part).max()) <= limit


# ---------------------------------------------------------------------------
# file I/O


def parse_hmetis(text):
    """Parse an hMetis-format hypergraph.

    Header: ``|E| |V| [fmt]`` with fmt 1 adding a leading weight column on
    every edge line, fmt 10 appending one vertex-weight line per vertex and
    fmt 11 both.  Lines starting with '%' are comments.  Pins are 1-indexed
    in the file and stored 0-indexed.
    """
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("%")]
    if not lines:
        raise ValueError("empty hMetis input")
    header = lines[0].split()
    if len(header) not in (2, 3):
        raise ValueError(f"malformed header: {lines[0]!r}")
    try:
        num_edges, num_vertices = int(header[0]), int(header[1])
        fmt = int(header[2]) if len(header) == 3 else 0
    except ValueError:
        raise ValueError(f"malformed header: {lines[0]!r}") from None
    if fmt not in (0, 1, 10, 11):
        raise ValueError(f"unsupported fmt flag {fmt}")
    if num_edges < 0 or num_vertices < 0:
        raise ValueError("negative counts in header")
    has_edge_weights = fmt in (1, 11)
    has_vertex_weights = fmt in (10, 11)

    expected = 1 + num_edges + (num_vertices if has_vertex_weights else 0)
    if len(lines) < expected:
        raise ValueError(f"expected {expected} content lines, found {len(lines)}")

    hyperedges = []
    edge_weights = []
    for i in range(num_edges):
        tokens = lines[1 + i].split()
        try:
            values = [int(t) for t in tokens]
        except ValueError:
            raise ValueError(f"edge line {i + 1}: non-integer token") from None
        if has_edge_weights:
            if len(values) < 2:
                raise ValueError(f"edge line {i + 1}: weight but no pins")
            weight, pins = values[0], values[1:]
        else:
            if not values:
                raise ValueError(f"edge line {i + 1}: no pins")
            weight, pins = 1, values
        if weight <= 0:
            raise ValueError(f"edge line {i + 1}: nonpositive weight {weight}")
        for p in pins:
            if not 1 <= p <= num_vertices:
                raise ValueError(f"edge line {i + 1}: pin {p} out of range [1, {num_vertices}]")
        edge_weights.append(weight)
        hyperedges.append([p - 1 for p in pins])

    vertex_weights = None
    if has_vertex_weights:
        vertex_weights = []
        for i in range(num_vertices):
            tokens = lines[1 + num_edges + i].split()
            if len(tokens) != 1:
                raise ValueError(f"vertex weight line {i + 1}: expected one value")
            try:
                w = int(tokens[0])
            except ValueError:
                raise ValueError(f"vertex weight line {i + 1}: non-integer") from None
            if w <= 0:
                raise ValueError(f"vertex weight line {i + 1}: nonpositive weight {w}")
            vertex_weights.append(w)

    # duplicate pins and pin-range violations surface in the constructor too,
    # but the loop above reports them with file coordinates first
    return Hypergraph(num_vertices, hyperedges, vertex_weights, edge_weights)


def write_hmetis(hg):
    """Serialize an uncontracted hypergraph back to hMetis format."""
    if hg.num_active != hg.num_vertices:
        raise ValueError("cannot serialize a contracted hypergraph")
    unit_edges = all(w == 1 for w in hg.edge_weights)
    unit_vertices = all(w == 1 for w in hg.vertex_weights)
    fmt = (0 if unit_edges else 1) + (0 if unit_vertices else 10)
    out = []
    header = f"{hg.num_edges} {hg.num_vertices}"
    if fmt:
        header += f" {fmt:02d}" if fmt == 10 or fmt == 11 else f" {fmt}"
    out.append(header)
    for e in range(hg.num_edges):
        pins = " ".join(str(v + 1) for v in hg.pins[e])
        if unit_edges:
            out.append(pins)
        else:
            out.append(f"{hg.edge_weights[e]} {pins}")
    if not unit_vertices:
        out.extend(str(w) for w in hg.vertex_weights)
    return "\n".join(out) + "\n"


def write_partition(part):
    """One block id per line, in vertex order."""
    return "".join(f"{int(b)}\n" for b in part.block_of)


def read_partition(text, k=2):
    values = [int(ln) for ln in text.splitlines() if ln.strip()]
    return Partition(np.array(values, dtype=np.int64), k)
