"""Directed interaction graphs, ego networks, relationship graphs, and the
network measures the social features are built from.

Graphs are treated as immutable once built; every operation here is a pure
query. Node iteration order is always insertion order (never hash order) so
downstream floating-point reductions are reproducible across processes.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

NodeId = str

EGO_ORDER_ONE = "1"
EGO_ORDER_ONE_POINT_FIVE = "1.5"


class DirectedGraph:
    """Directed graph with message-count edge weights and no self-loops.

    Duplicate edges collapse into a single edge whose weight counts the
    occurrences; self-loops are dropped at insertion and tallied in
    ``self_loops_dropped`` for diagnostics.
    """

    def __init__(self) -> None:
        # dict-of-dicts keeps deterministic (insertion) adjacency order
        self._succ: dict[NodeId, dict[NodeId, int]] = {}
        self._pred: dict[NodeId, dict[NodeId, int]] = {}
        self.self_loops_dropped = 0

    def add_node(self, node: NodeId) -> None:
        if node not in self._succ:
            self._succ[node] = {}
            self._pred[node] = {}

    def add_edge(self, u: NodeId, v: NodeId, weight: int = 1) -> None:
        self.add_node(u)
        self.add_node(v)
        if u == v:
            self.self_loops_dropped += 1
            return
        self._succ[u][v] = self._succ[u].get(v, 0) + weight
        self._pred[v][u] = self._pred[v].get(u, 0) + weight

    @property
    def node_count(self) -> int:
        return len(self._succ)

    @property
    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self._succ.values())

    def nodes(self) -> Iterator[NodeId]:
        return iter(self._succ)

    def edges(self) -> Iterator[tuple[NodeId, NodeId]]:
        for u, nbrs in self._succ.items():
            for v in nbrs:
                yield u, v

    def has_node(self, node: NodeId) -> bool:
        return node in self._succ

    def has_edge(self, u: NodeId, v: NodeId) -> bool:
        return u in self._succ and v in self._succ[u]

    def weight(self, u: NodeId, v: NodeId) -> int:
        return self._succ.get(u, {}).get(v, 0)

    def out_neighbors(self, node: NodeId) -> tuple[NodeId, ...]:
        self._require(node)
        return tuple(self._succ[node])

    def in_neighbors(self, node: NodeId) -> tuple[NodeId, ...]:
        self._require(node)
        return tuple(self._pred[node])

    def neighbors(self, node: NodeId) -> tuple[NodeId, ...]:
        """All in- and out-neighbors (the undirected view), insertion order."""
        self._require(node)
        seen: dict[NodeId, None] = {}
        for v in self._succ[node]:
            seen[v] = None
        for v in self._pred[node]:
            seen[v] = None
        return tuple(seen)

    def out_degree(self, node: NodeId) -> int:
        self._require(node)
        return len(self._succ[node])

    def in_degree(self, node: NodeId) -> int:
        self._require(node)
        return len(self._pred[node])

    def node_index(self) -> dict[NodeId, int]:
        """Dense 0-based index per node, assigned in insertion order."""
        return {node: i for i, node in enumerate(self._succ)}

    def _require(self, node: NodeId) -> None:
        if node not in self._succ:
            raise ValueError(f"unknown node: {node!r}")


@dataclass(frozen=True)
class EgoNetwork:
    ego: NodeId
    subgraph: DirectedGraph
    order: str  # EGO_ORDER_ONE or EGO_ORDER_ONE_POINT_FIVE


@dataclass(frozen=True)
class RelationshipGraph:
    """Union of the sender's and receiver's 1.5-ego networks."""

    sender: NodeId
    receiver: NodeId
    subgraph: DirectedGraph


def build_graph(edge_list: Iterable[tuple[NodeId, NodeId]]) -> DirectedGraph:
    """Build the global interaction graph from (sender, receiver) pairs.

    Duplicates accumulate as edge weight; self-loops are dropped (their
    endpoints are still registered as nodes).
    """
    g = DirectedGraph()
    for u, v in edge_list:
        g.add_edge(u, v)
    return g


def load_edge_list(path) -> list[tuple[NodeId, NodeId]]:
    """Plain-text edge list: one `sender_id,receiver_id` per line, UTF-8."""
    edges = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise ValueError(f"line {lineno}: expected 'sender_id,receiver_id'")
        edges.append((parts[0], parts[1]))
    return edges


def ego_network(graph: DirectedGraph, ego: NodeId, order: str = EGO_ORDER_ONE_POINT_FIVE) -> EgoNetwork:
    """Extract the 1-ego or 1.5-ego network of ``ego``.

    Order "1" keeps the ego, every in/out neighbor, and only ego-incident
    edges. Order "1.5" keeps the same nodes and additionally every edge
    among them.
    """
    if order not in (EGO_ORDER_ONE, EGO_ORDER_ONE_POINT_FIVE):
        raise ValueError(f"unknown ego-network order: {order!r}")
    graph._require(ego)
    members: dict[NodeId, None] = {ego: None}
    for v in graph.neighbors(ego):
        members[v] = None

    sub = DirectedGraph()
    for node in members:
        sub.add_node(node)
    for u in members:
        for v, w in graph._succ[u].items():
            if v not in members:
                continue
            if order == EGO_ORDER_ONE and ego not in (u, v):
                continue
            sub.add_edge(u, v, w)
    return EgoNetwork(ego=ego, subgraph=sub, order=order)


def relationship_graph(graph: DirectedGraph, sender: NodeId, receiver: NodeId) -> RelationshipGraph:
    """Union of the two endpoints' 1.5-ego networks."""
    if sender == receiver:
        raise ValueError(f"self-message has no relationship graph: {sender!r}")
    graph._require(sender)
    graph._require(receiver)
    ego_s = ego_network(graph, sender, EGO_ORDER_ONE_POINT_FIVE).subgraph
    ego_r = ego_network(graph, receiver, EGO_ORDER_ONE_POINT_FIVE).subgraph

    sub = DirectedGraph()
    for node in ego_s.nodes():
        sub.add_node(node)
    for node in ego_r.nodes():
        sub.add_node(node)
    for u, v in ego_s.edges():
        sub.add_edge(u, v, ego_s.weight(u, v))
    for u, v in ego_r.edges():
        if not sub.has_edge(u, v):
            sub.add_edge(u, v, ego_r.weight(u, v))
    return RelationshipGraph(sender=sender, receiver=receiver, subgraph=sub)


def _subgraph_of(rel) -> DirectedGraph:
    if isinstance(rel, (RelationshipGraph, EgoNetwork)):
        return rel.subgraph
    return rel


def degree_centrality(rel, node: NodeId, direction: str) -> float:
    """Directed degree of ``node`` divided by (n - 1); 0.0 for a single node."""
    g = _subgraph_of(rel)
    if direction not in ("in", "out"):
        raise ValueError(f"direction must be 'in' or 'out', got {direction!r}")
    deg = g.in_degree(node) if direction == "in" else g.out_degree(node)
    n = g.node_count
    if n <= 1:
        return 0.0
    return deg / (n - 1)


def _adjacency(g: DirectedGraph) -> tuple[np.ndarray, dict[NodeId, int]]:
    index = g.node_index()
    n = len(index)
    a = np.zeros((n, n))
    for u, v in g.edges():
        a[index[u], index[v]] = 1.0
    return a, index


def _apsp_counts(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """All-pairs hop distances and shortest-path counts, level-synchronous BFS.

    Returns (dist, sigma) where dist[s, t] is -1 for unreachable pairs and
    sigma[s, t] counts distinct shortest s->t paths.
    """
    n = a.shape[0]
    dist = np.full((n, n), -1, dtype=np.int64)
    np.fill_diagonal(dist, 0)
    sigma = np.eye(n)
    frontier = np.eye(n)
    level = 0
    while True:
        level += 1
        reached = frontier @ a
        newly = (dist < 0) & (reached > 0)
        if not newly.any():
            return dist, sigma
        dist[newly] = level
        sigma = np.where(newly, reached, sigma)
        frontier = np.where(newly, reached, 0.0)


def edge_betweenness(rel, u: NodeId, v: NodeId) -> float:
    """Fraction of all-ordered-pair shortest paths routed through edge u->v,
    normalized by n*(n-1) ordered pairs. Unweighted hop-count paths.
    """
    g = _subgraph_of(rel)
    g._require(u)
    g._require(v)
    if not g.has_edge(u, v):
        raise ValueError(f"no direct edge sender->receiver: {u!r}->{v!r}")
    a, index = _adjacency(g)
    n = a.shape[0]
    if n < 2:
        return 0.0
    dist, sigma = _apsp_counts(a)
    iu, iv = index[u], index[v]
    # paths s->t through u->v: sigma(s,u)*sigma(v,t) when the hop counts chain up
    numer = sigma[:, iu : iu + 1] * sigma[iv : iv + 1, :]
    chains = (
        (dist[:, iu : iu + 1] >= 0)
        & (dist[iv : iv + 1, :] >= 0)
        & (dist[:, iu : iu + 1] + 1 + dist[iv : iv + 1, :] == dist)
    )
    valid = chains & (dist > 0)
    total = float((numer[valid] / sigma[valid]).sum())
    return total / (n * (n - 1))


def _undirected_adjacency(g: DirectedGraph) -> dict[NodeId, dict[NodeId, None]]:
    adj: dict[NodeId, dict[NodeId, None]] = {node: {} for node in g.nodes()}
    for a, b in g.edges():
        adj[a][b] = None
        adj[b][a] = None
    return adj


def k_core_score(rel, node: NodeId) -> int:
    """Largest k such that the node survives iterative removal of all nodes
    with undirected degree < k.
    """
    g = _subgraph_of(rel)
    g._require(node)
    adj = _undirected_adjacency(g)
    degree = {n: len(nbrs) for n, nbrs in adj.items()}
    remaining = dict.fromkeys(adj)
    core: dict[NodeId, int] = {}
    k = 0
    while remaining:
        k += 1
        peeled = True
        while peeled:
            peeled = False
            for n in list(remaining):
                if degree[n] < k:
                    del remaining[n]
                    core[n] = k - 1
                    for m in adj[n]:
                        if m in remaining:
                            degree[m] -= 1
                    peeled = True
    return core[node]


def tie_strength(rel, sender: NodeId, receiver: NodeId) -> int:
    """Number of common neighbors of the two endpoints in the undirected view."""
    g = _subgraph_of(rel)
    g._require(sender)
    g._require(receiver)
    sender_nbrs = set(g.neighbors(sender))
    return sum(1 for n in g.neighbors(receiver) if n in sender_nbrs)
