"""Independent brute-force oracles used to check the library's fast paths.

Everything here is deliberately naive: explicit path enumeration, exhaustive
pair counting, dense grid search, and Monte Carlo simulation. None of it
shares code with the implementations under test.
"""

from collections import deque

import numpy as np

from egofair.graph import DirectedGraph


def random_directed_graph(rng, max_nodes=12, edge_prob=0.3) -> DirectedGraph:
    n = int(rng.integers(2, max_nodes + 1))
    g = DirectedGraph()
    for i in range(n):
        g.add_node(f"n{i}")
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < edge_prob:
                g.add_edge(f"n{i}", f"n{j}")
    return g


def brute_degree_centrality(g: DirectedGraph, node, direction) -> float:
    n = g.node_count
    if n <= 1:
        return 0.0
    if direction == "out":
        deg = sum(1 for u, v in g.edges() if u == node)
    else:
        deg = sum(1 for u, v in g.edges() if v == node)
    return deg / (n - 1)


def _all_shortest_paths(g: DirectedGraph, source, target):
    """Every shortest source->target path, by BFS distances + DFS backtrack."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in g.out_neighbors(u):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    if target not in dist:
        return []
    paths = []

    def expand(node, path):
        if node == target:
            paths.append(tuple(path))
            return
        if dist[node] >= dist[target]:
            return
        for v in g.out_neighbors(node):
            if dist.get(v) == dist[node] + 1:
                expand(v, path + [v])

    expand(source, [source])
    return paths


def brute_edge_betweenness(g: DirectedGraph, u, v) -> float:
    nodes = list(g.nodes())
    n = len(nodes)
    total = 0.0
    for s in nodes:
        for t in nodes:
            if s == t:
                continue
            paths = _all_shortest_paths(g, s, t)
            if not paths:
                continue
            through = sum(
                1
                for p in paths
                if any(p[i] == u and p[i + 1] == v for i in range(len(p) - 1))
            )
            total += through / len(paths)
    return total / (n * (n - 1))


def brute_k_core(g: DirectedGraph, node) -> int:
    """Largest k for which peeling to minimum undirected degree k keeps node."""
    und = {x: set() for x in g.nodes()}
    for a, b in g.edges():
        und[a].add(b)
        und[b].add(a)
    best = 0
    for k in range(0, g.node_count + 1):
        alive = set(und)
        changed = True
        while changed:
            changed = False
            for x in list(alive):
                if sum(1 for y in und[x] if y in alive) < k:
                    alive.discard(x)
                    changed = True
        if node in alive:
            best = k
        else:
            break
    return best


def brute_tie_strength(g: DirectedGraph, a, b) -> int:
    und = {x: set() for x in g.nodes()}
    for s, t in g.edges():
        und[s].add(t)
        und[t].add(s)
    return len(und[a] & und[b])


def brute_auc(labels, scores) -> float:
    wins = 0.0
    pairs = 0
    for yp, sp in zip(labels, scores):
        if yp != 1:
            continue
        for yn, sn in zip(labels, scores):
            if yn != 0:
                continue
            pairs += 1
            if sp > sn:
                wins += 1.0
            elif sp == sn:
                wins += 0.5
    return wins / pairs


def brute_confusion(labels, preds):
    tp = sum(1 for y, p in zip(labels, preds) if y == 1 and p == 1)
    fp = sum(1 for y, p in zip(labels, preds) if y == 0 and p == 1)
    tn = sum(1 for y, p in zip(labels, preds) if y == 0 and p == 0)
    fn = sum(1 for y, p in zip(labels, preds) if y == 1 and p == 0)
    return tp, fp, tn, fn


def _inside_region(f, t, fpr, tpr, tol=1e-9):
    """Membership in the achievable derived-rate quadrilateral of one group,
    tested against the four half-planes (or the diagonal segment when the
    region degenerates).
    """
    corners = [(0.0, 0.0), (fpr, tpr), (1.0 - fpr, 1.0 - tpr), (1.0, 1.0)]
    # degenerate: all corners on the diagonal
    if abs(tpr - fpr) < 1e-15:
        return abs(t - f) <= tol and -tol <= f <= 1 + tol
    hull = _hull(corners)
    for i in range(len(hull)):
        x1, y1 = hull[i]
        x2, y2 = hull[(i + 1) % len(hull)]
        if (x2 - x1) * (t - y1) - (y2 - y1) * (f - x1) < -tol:
            return False
    return True


def _hull(points):
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return hull if len(hull) >= 3 else pts


def grid_oracle_loss(rates, grid_size=201) -> float:
    """Dense search over common target rates kept inside both groups'
    achievable quadrilaterals, minimizing the expected loss.
    """
    axis = np.linspace(0.0, 1.0, grid_size)
    pooled = rates.low.mass * rates.low.base_rate + rates.high.mass * rates.high.base_rate
    best = None
    for f in axis:
        for t in axis:
            if not _inside_region(f, t, rates.low.fpr, rates.low.tpr):
                continue
            if not _inside_region(f, t, rates.high.fpr, rates.high.tpr):
                continue
            loss = pooled * (1.0 - t) + (1.0 - pooled) * f
            if best is None or loss < best:
                best = loss
    return best


def grid_oracle_loss_fast(rates, grid_size=201) -> float:
    """Vectorized version of grid_oracle_loss (same semantics)."""
    axis = np.linspace(0.0, 1.0, grid_size)
    F, T = np.meshgrid(axis, axis)
    mask = np.ones_like(F, dtype=bool)
    for entry in (rates.low, rates.high):
        fpr, tpr = entry.fpr, entry.tpr
        if abs(tpr - fpr) < 1e-15:
            mask &= np.abs(T - F) <= 1e-9
            continue
        hull = _hull([(0.0, 0.0), (fpr, tpr), (1.0 - fpr, 1.0 - tpr), (1.0, 1.0)])
        for i in range(len(hull)):
            x1, y1 = hull[i]
            x2, y2 = hull[(i + 1) % len(hull)]
            mask &= (x2 - x1) * (T - y1) - (y2 - y1) * (F - x1) >= -1e-9
    pooled = rates.low.mass * rates.low.base_rate + rates.high.mass * rates.high.base_rate
    losses = pooled * (1.0 - T) + (1.0 - pooled) * F
    return float(losses[mask].min())


def monte_carlo_loss(p, rates, samples, seed) -> float:
    """Simulate the derived predictor end to end and count mistakes."""
    rng = np.random.default_rng(seed)
    group_high = rng.random(samples) < rates.high.mass
    losses = 0
    for is_high in (False, True):
        idx = np.flatnonzero(group_high == is_high)
        entry = rates.high if is_high else rates.low
        p0, p1 = (p.p01, p.p11) if is_high else (p.p00, p.p10)
        y = rng.random(len(idx)) < entry.base_rate
        pred_rate = np.where(y, entry.tpr, entry.fpr)
        pred = rng.random(len(idx)) < pred_rate
        out_prob = np.where(pred, p1, p0)
        out = rng.random(len(idx)) < out_prob
        losses += int((out != y).sum())
    return losses / samples
