"""Directed weighted graphs: validation, connectivity, and SCC condensation."""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass

import numpy as np

STRONGLY_CONNECTED = "StronglyConnected"
WEAKLY_CONNECTED = "WeaklyConnected"
DISCONNECTED = "Disconnected"


class ParseError(ValueError):
    """Malformed graph or model input; carries a 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Digraph:
    """Immutable weighted digraph on nodes 0..n-1.

    An edge ``(i, j, w)`` points from i to j with weight w > 0.  Self-loops
    are rejected rather than dropped: every coupling sum in the epidemic
    model excludes j == i, and a silently discarded loop would hide a
    modeling mistake.  At most one edge per ordered pair.
    """

    n: int
    edges: tuple[tuple[int, int, float], ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"node count must be >= 1, got {self.n}")
        edges = tuple((int(s), int(d), float(w)) for s, d, w in self.edges)
        object.__setattr__(self, "edges", edges)
        seen: set[tuple[int, int]] = set()
        for s, d, w in edges:
            if not (0 <= s < self.n and 0 <= d < self.n):
                raise ValueError(f"edge ({s}, {d}) out of range for n={self.n}")
            if s == d:
                raise ValueError(f"self-loop at node {s} is not allowed")
            if not (w > 0.0) or not np.isfinite(w):
                raise ValueError(f"edge ({s}, {d}) must have a positive finite weight, got {w}")
            if (s, d) in seen:
                raise ValueError(f"duplicate edge ({s}, {d})")
            seen.add((s, d))
        if self.labels is not None and len(self.labels) != self.n:
            raise ValueError("labels must have one entry per node")

    def adjacency(self) -> np.ndarray:
        """Dense adjacency matrix with ``A[i, j]`` = weight of edge (i, j)."""
        a = np.zeros((self.n, self.n))
        for s, d, w in self.edges:
            a[s, d] = w
        return a

    def successors(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for s, d, _ in self.edges:
            out[s].append(d)
        return out

    def predecessors(self) -> list[list[int]]:
        pre: list[list[int]] = [[] for _ in range(self.n)]
        for s, d, _ in self.edges:
            pre[d].append(s)
        return pre


@dataclass(frozen=True)
class SccDecomposition:
    """Condensation of a digraph into strongly connected components.

    ``components`` is stored directly in topological order, upstream first:
    if component a precedes component b there is no condensation edge
    b -> a.  The order is deterministic: components are first keyed by
    their smallest contained node id, and topological ties are broken by
    that same key.  Node sets within a component are sorted.
    """

    components: tuple[tuple[int, ...], ...]
    component_of: tuple[int, ...]
    condensation_edges: tuple[tuple[int, int], ...]
    reachable: tuple[frozenset[int], ...]

    @property
    def count(self) -> int:
        return len(self.components)

    def reaches(self, a: int, b: int) -> bool:
        """True when component b is reachable from component a (reflexive)."""
        return b in self.reachable[a]


def _tarjan(n: int, succ: list[list[int]]) -> list[list[int]]:
    """Iterative Tarjan SCC in O(n + m); recursion-free so deep chains are safe."""
    unvisited = -1
    index = [unvisited] * n
    low = [0] * n
    onstack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0

    for root in range(n):
        if index[root] != unvisited:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        onstack[root] = True
        work: list[tuple[int, object]] = [(root, iter(succ[root]))]
        while work:
            v, it = work[-1]
            child = next(it, None)  # type: ignore[arg-type]
            if child is not None:
                if index[child] == unvisited:
                    index[child] = low[child] = counter
                    counter += 1
                    stack.append(child)
                    onstack[child] = True
                    work.append((child, iter(succ[child])))
                elif onstack[child]:
                    low[v] = min(low[v], index[child])
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    onstack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def scc_decompose(g: Digraph) -> SccDecomposition:
    """Maximal strongly connected components plus their condensation DAG.

    The component list is topologically ordered with upstream components
    (condensation sources) first, so downstream consumers can be processed
    by a single left-to-right pass.
    """
    comps = [tuple(sorted(c)) for c in _tarjan(g.n, g.successors())]
    comps.sort(key=lambda c: c[0])
    comp_of = [0] * g.n
    for k, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = k

    edge_set: set[tuple[int, int]] = set()
    for s, d, _ in g.edges:
        cs, cd = comp_of[s], comp_of[d]
        if cs != cd:
            edge_set.add((cs, cd))

    # Kahn's algorithm; the heap breaks ties by smallest contained node id,
    # which is exactly the list position after the sort above.
    out: list[list[int]] = [[] for _ in comps]
    indeg = [0] * len(comps)
    for cs, cd in edge_set:
        out[cs].append(cd)
        indeg[cd] += 1
    ready = [k for k in range(len(comps)) if indeg[k] == 0]
    heapq.heapify(ready)
    order: list[int] = []
    while ready:
        k = heapq.heappop(ready)
        order.append(k)
        for m in out[k]:
            indeg[m] -= 1
            if indeg[m] == 0:
                heapq.heappush(ready, m)
    if len(order) != len(comps):
        raise AssertionError("condensation contained a cycle")

    pos = {old: new for new, old in enumerate(order)}
    components = tuple(comps[old] for old in order)
    component_of = tuple(pos[comp_of[v]] for v in range(g.n))
    cond_edges = tuple(sorted((pos[a], pos[b]) for a, b in edge_set))

    # Reachability closure by a reverse sweep: condensation edges only point
    # from lower to higher topological positions.
    succ_c: list[list[int]] = [[] for _ in components]
    for a, b in cond_edges:
        succ_c[a].append(b)
    reach: list[set[int]] = [set() for _ in components]
    for k in reversed(range(len(components))):
        acc = {k}
        for m in succ_c[k]:
            acc |= reach[m]
        reach[k] = acc

    return SccDecomposition(
        components=components,
        component_of=component_of,
        condensation_edges=cond_edges,
        reachable=tuple(frozenset(r) for r in reach),
    )


def connectivity_class(g: Digraph) -> str:
    """One of StronglyConnected, WeaklyConnected, or Disconnected."""
    if len(_tarjan(g.n, g.successors())) == 1:
        return STRONGLY_CONNECTED
    und: list[list[int]] = [[] for _ in range(g.n)]
    for s, d, _ in g.edges:
        und[s].append(d)
        und[d].append(s)
    seen = {0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w in und[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return WEAKLY_CONNECTED if len(seen) == g.n else DISCONNECTED


def sources_and_near_sources(g: Digraph) -> tuple[frozenset[int], frozenset[int]]:
    """Nodes with no incoming edges, and nodes fed directly by such a node."""
    pre = g.predecessors()
    sources = frozenset(i for i in range(g.n) if not pre[i])
    near = frozenset(d for s, d, _ in g.edges if s in sources)
    return sources, near


def support_components(m: np.ndarray) -> tuple[tuple[int, ...], ...]:
    """SCCs of the off-diagonal support digraph of a square matrix.

    Entry (i, j) != 0 with i != j is treated as an edge i -> j; the diagonal
    never affects strong connectivity.  Components are ordered by smallest
    contained node id.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    n = m.shape[0]
    succ = [[j for j in np.flatnonzero(m[i]) if j != i] for i in range(n)]
    comps = [tuple(sorted(c)) for c in _tarjan(n, succ)]
    comps.sort(key=lambda c: c[0])
    return tuple(comps)


def is_irreducible(m: np.ndarray) -> bool:
    """True when the support digraph of a nonnegative matrix is strongly connected.

    A 1x1 matrix counts as irreducible exactly when its single entry is
    nonzero.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if np.any(m < 0):
        raise ValueError("expected a nonnegative matrix")
    if m.shape[0] == 1:
        return m[0, 0] != 0
    return len(support_components(m)) == 1


def parse_edge_list(text: str) -> Digraph:
    """Parse the plain-text edge list format.

    One edge per line as ``src dst weight``; ``#`` starts a comment; blank
    lines are ignored.  An optional ``nodes N`` line fixes the node count,
    otherwise it is inferred as max id + 1.
    """
    n_declared: int | None = None
    edges: list[tuple[int, int, float]] = []
    max_id = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "nodes":
            if len(parts) != 2:
                raise ParseError("expected 'nodes N'", line=lineno)
            try:
                n_declared = int(parts[1])
            except ValueError:
                raise ParseError(f"invalid node count {parts[1]!r}", line=lineno) from None
            continue
        if len(parts) != 3:
            raise ParseError(f"expected 'src dst weight', got {line!r}", line=lineno)
        try:
            s, d, w = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError:
            raise ParseError(f"could not parse edge {line!r}", line=lineno) from None
        edges.append((s, d, w))
        max_id = max(max_id, s, d)
    n = n_declared if n_declared is not None else max_id + 1
    if n < 1:
        raise ParseError("edge list defines no nodes")
    try:
        return Digraph(n=n, edges=tuple(edges))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def format_edge_list(g: Digraph) -> str:
    lines = [f"nodes {g.n}"]
    lines += [f"{s} {d} {w!r}" for s, d, w in g.edges]
    return "\n".join(lines) + "\n"


def read_edge_list(path) -> Digraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_edge_list(fh.read())
