"""Shared test oracles, kept deliberately independent of the library's own paths."""

from __future__ import annotations

import numpy as np

from sisnet import Digraph, EpidemicNetwork


def random_digraph(rng: np.random.Generator, n: int, edge_prob: float) -> Digraph:
    edges = []
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < edge_prob:
                edges.append((i, j, float(rng.uniform(0.1, 2.0))))
    return Digraph(n=n, edges=tuple(edges))


def random_network(rng: np.random.Generator, n: int, edge_prob: float = 0.3) -> EpidemicNetwork:
    g = random_digraph(rng, n, edge_prob)
    return EpidemicNetwork(g, rng.uniform(0.5, 1.5, size=n), rng.uniform(0.3, 2.0, size=n))


def reachability_closure(n: int, edges) -> np.ndarray:
    """Reflexive-transitive closure by Floyd-Warshall on booleans."""
    reach = np.eye(n, dtype=bool)
    for s, d, *_ in edges:
        reach[s, d] = True
    for k in range(n):
        reach |= reach[:, k : k + 1] & reach[k : k + 1, :]
    return reach


def brute_force_scc(n: int, edges) -> list[frozenset[int]]:
    """SCCs straight from mutual reachability, no clever traversal."""
    reach = reachability_closure(n, edges)
    mutual = reach & reach.T
    seen: set[int] = set()
    comps = []
    for v in range(n):
        if v in seen:
            continue
        comp = frozenset(int(u) for u in np.flatnonzero(mutual[v]))
        seen |= comp
        comps.append(comp)
    return comps


def jacobi_eigenvalues(m: np.ndarray, sweeps: int = 100, tol: float = 1e-13) -> np.ndarray:
    """Symmetric eigenvalues via classical cyclic Jacobi rotations.

    Used to cross-check certificate eigenvalues through a path that shares
    nothing with LAPACK.
    """
    a = np.array(m, dtype=float)
    n = a.shape[0]
    assert np.allclose(a, a.T, atol=1e-12), "Jacobi oracle needs a symmetric matrix"
    scale = max(1.0, np.abs(a).max())
    for _ in range(sweeps):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
    return np.sort(np.diag(a))


def central_difference(f, x: np.ndarray, i: int, h: float = 1e-6) -> float:
    up = x.copy()
    dn = x.copy()
    up[i] += h
    dn[i] -= h
    return (f(up) - f(dn)) / (2.0 * h)
