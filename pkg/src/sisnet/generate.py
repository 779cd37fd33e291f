"""Deterministic test-network generators.

All randomness flows through ``numpy.random.default_rng`` (the PCG64 bit
generator), so a family name plus a seed pins the produced model down to
the byte.  Curing rates are rescaled after the fact to hit a requested
basic reproduction number exactly: scaling every delta by c divides R0 by
c, so one spectral-radius evaluation suffices.
"""

from __future__ import annotations

import numpy as np

from .graph import Digraph
from .model import EpidemicNetwork
from .spectral import basic_reproduction_number, spectral_radius_nonneg

GD99C_NODES = 105
GD99C_CORE = 13
GD99C_DEPTH_CAP = 10  # keeps far-downstream infection levels well above 1e-6


def _rescaled(graph: Digraph, beta: np.ndarray, delta: np.ndarray, r0: float) -> EpidemicNetwork:
    net = EpidemicNetwork(graph, beta, delta)
    r0_raw = basic_reproduction_number(net)
    if r0_raw == 0.0:
        return net
    return EpidemicNetwork(graph, beta, delta * (r0_raw / r0))


def _block_rescale(adj: np.ndarray, beta, delta, nodes: list[int], r0: float) -> None:
    """Scale delta on one node set so the block's local R0 equals r0."""
    local = adj[np.ix_(nodes, nodes)]
    w = local.T * beta[nodes][None, :]
    r0_raw = spectral_radius_nonneg(w / delta[nodes][:, None])
    if r0_raw > 0.0:
        delta[nodes] *= r0_raw / r0


def ring_network(n: int = 20, seed: int = 0, r0: float = 2.0) -> EpidemicNetwork:
    """Ring of n nodes with edges in both directions and random rates."""
    if n < 3:
        raise ValueError("ring needs at least 3 nodes")
    rng = np.random.default_rng(seed)
    edges = []
    for i in range(n):
        j = (i + 1) % n
        w = rng.uniform(0.5, 1.5)
        edges.append((i, j, w))
        edges.append((j, i, w))
    graph = Digraph(n=n, edges=tuple(edges))
    beta = rng.uniform(0.5, 1.5, size=n)
    delta = rng.uniform(0.5, 1.5, size=n)
    return _rescaled(graph, beta, delta, r0)


def erdos_network(n: int = 100, edge_prob: float = 0.3, seed: int = 0, r0: float = 2.0) -> EpidemicNetwork:
    """Undirected Erdos-Renyi graph (each edge in both directions), random rates.

    If the draw happens to be disconnected, consecutive pieces are stitched
    together so the result is always connected.
    """
    if not (0.0 < edge_prob <= 1.0):
        raise ValueError("edge probability must be in (0, 1]")
    rng = np.random.default_rng(seed)
    present: set[tuple[int, int]] = set()
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < edge_prob:
                present.add((i, j))
    # stitch disconnected pieces with unit edges
    parent = list(range(n))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for i, j in present:
        parent[find(i)] = find(j)
    roots = sorted({find(v) for v in range(n)})
    for a, b in zip(roots, roots[1:]):
        present.add((min(a, b), max(a, b)))

    edges = []
    for i, j in sorted(present):
        w = rng.uniform(0.5, 1.5)
        edges.append((i, j, w))
        edges.append((j, i, w))
    graph = Digraph(n=n, edges=tuple(edges))
    beta = rng.uniform(0.5, 1.5, size=n)
    delta = rng.uniform(0.5, 1.5, size=n)
    return _rescaled(graph, beta, delta, r0)


def chain_network(n: int = 3, seed: int = 0) -> EpidemicNetwork:
    """Directed path 0 -> 1 -> ... -> n-1 with unit weights and rates."""
    del seed  # nothing random about a chain; kept for a uniform signature
    edges = tuple((i, i + 1, 1.0) for i in range(n - 1))
    return EpidemicNetwork.uniform(Digraph(n=n, edges=edges), beta=1.0, delta=1.0)


def two_scc_network(
    n: int = 6,
    seed: int = 0,
    r0_upstream: float = 2.0,
    r0_downstream: float = 0.5,
) -> EpidemicNetwork:
    """Two directed cycles joined by a single bridge, upstream feeding downstream."""
    if n < 4:
        raise ValueError("need at least 4 nodes for two cycles")
    rng = np.random.default_rng(seed)
    n_up = n // 2
    up = list(range(n_up))
    down = list(range(n_up, n))
    edges = [(up[i], up[(i + 1) % len(up)], rng.uniform(0.5, 1.5)) for i in range(len(up))]
    edges += [(down[i], down[(i + 1) % len(down)], rng.uniform(0.5, 1.5)) for i in range(len(down))]
    edges.append((int(rng.integers(0, len(up))), n_up + int(rng.integers(0, len(down))), 1.0))
    graph = Digraph(n=n, edges=tuple(edges))
    beta = rng.uniform(0.5, 1.5, size=n)
    adj = graph.adjacency()
    delta = rng.uniform(0.5, 1.5, size=n)
    _block_rescale(adj, beta, delta, up, r0_upstream)
    _block_rescale(adj, beta, delta, down, r0_downstream)
    return EpidemicNetwork(graph, beta, delta)


def gd99c_style_network(seed: int = 0) -> EpidemicNetwork:
    """105-node weakly connected network with 66 SCCs and one infected core.

    Structure: a 13-node core cycle with a few chords and low curing rate
    (so its local R0 is well above 1), 27 two-node cycles, and 38 singleton
    nodes.  Four singletons are pure sources with no incoming edges, so no
    path from the core reaches them; every other component is wired to
    receive a path from the core.  All weights and infection rates are 1 and
    every node outside the core gets ``delta_i = (weighted in-degree) + 0.5``,
    which keeps each non-core component's local R0 below 1.
    """
    rng = np.random.default_rng(seed)
    core = list(range(GD99C_CORE))
    pair_comps = [[13 + 2 * k, 14 + 2 * k] for k in range(27)]
    singles = list(range(67, GD99C_NODES))
    edge_set: set[tuple[int, int]] = set()

    for i in range(GD99C_CORE):
        edge_set.add((core[i], core[(i + 1) % GD99C_CORE]))
    chords = 0
    while chords < 3:
        u, v = rng.integers(0, GD99C_CORE, size=2)
        if u != v and (int(u), int(v)) not in edge_set:
            edge_set.add((int(u), int(v)))
            chords += 1
    for a, b in pair_comps:
        edge_set.add((a, b))
        edge_set.add((b, a))

    black = [singles[k] for k in rng.choice(len(singles), size=4, replace=False)]
    rest_comps: list[list[int]] = pair_comps + [[s] for s in singles if s not in black]
    order = rng.permutation(len(rest_comps))
    rest_comps = [rest_comps[k] for k in order]

    # Wire every non-black component below the core, capping the hop depth so
    # infection levels stay comfortably positive all the way downstream.
    depth = {-1: 0}  # pseudo-index -1 is the core
    pool = [-1]
    for k, comp in enumerate(rest_comps):
        n_parents = 1 + int(rng.integers(0, 3))
        parents = {int(pool[rng.integers(0, len(pool))]) for _ in range(n_parents)}
        d = 0
        for parent in parents:
            src_nodes = core if parent == -1 else rest_comps[parent]
            src = int(src_nodes[rng.integers(0, len(src_nodes))])
            dst = int(comp[rng.integers(0, len(comp))])
            edge_set.add((src, dst))
            d = max(d, depth[parent] + 1)
        depth[k] = d
        if d < GD99C_DEPTH_CAP:
            pool.append(k)

    # Black nodes only emit; with no in-edges they are unreachable from the core.
    for b in black:
        targets = core + [v for comp in rest_comps for v in comp]
        edge_set.add((b, int(targets[rng.integers(0, len(targets))])))

    edges = tuple((s, d, 1.0) for s, d in sorted(edge_set))
    graph = Digraph(n=GD99C_NODES, edges=edges)
    beta = np.ones(GD99C_NODES)
    in_load = graph.adjacency().T @ beta
    delta = in_load + 0.5
    delta[core] = 0.25
    return EpidemicNetwork(graph, beta, delta)


def random_strongly_connected(
    rng: np.random.Generator,
    n: int,
    r0: float,
    extra_edge_prob: float = 0.35,
) -> EpidemicNetwork:
    """Random strongly connected network with its R0 pinned to a target.

    A directed ring guarantees strong connectivity; extra directed edges are
    sprinkled on top.  Used by the test sweeps.
    """
    edges = {(i, (i + 1) % n): rng.uniform(0.5, 1.5) for i in range(n)}
    for i in range(n):
        for j in range(n):
            if i != j and (i, j) not in edges and rng.random() < extra_edge_prob:
                edges[(i, j)] = rng.uniform(0.5, 1.5)
    graph = Digraph(n=n, edges=tuple((s, d, w) for (s, d), w in sorted(edges.items())))
    beta = rng.uniform(0.5, 1.5, size=n)
    delta = rng.uniform(0.5, 1.5, size=n)
    return _rescaled(graph, beta, delta, r0)


def build_family(family: str, nodes: int, edge_prob: float, seed: int) -> tuple[EpidemicNetwork, dict]:
    """Dispatch used by the command line; returns the model plus header metadata."""
    if family == "ring":
        net = ring_network(n=nodes, seed=seed)
    elif family == "erdos":
        net = erdos_network(n=nodes, edge_prob=edge_prob, seed=seed)
    elif family == "chain":
        net = chain_network(n=nodes, seed=seed)
    elif family == "two-scc":
        net = two_scc_network(n=nodes, seed=seed)
    elif family == "gd99c-style":
        net = gd99c_style_network(seed=seed)
    else:
        raise ValueError(f"unknown family {family!r}")
    meta = {
        "family": family,
        "seed": seed,
        "nodes": net.n,
        "edge_count": len(net.graph.edges),
        "total_weight": float(sum(w for _, _, w in net.graph.edges)),
    }
    if family == "erdos":
        meta["edge_prob"] = edge_prob
    return net, meta
