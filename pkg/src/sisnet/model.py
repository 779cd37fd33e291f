"""The networked SIS mean-field model and its per-component subsystems.

State ``p`` holds one infection probability per node.  Node i is pressured
by its in-neighbors with ``xi_i = sum_{j != i} A[j, i] * beta_j * p_j`` and
evolves as ``dp_i/dt = -delta_i * p_i + (1 - p_i) * xi_i``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sparse

from .graph import Digraph, ParseError, SccDecomposition

DENSE_LIMIT = 512  # above this node count the weighted coupling matrix is kept sparse
STATE_SLACK = 1e-9  # tolerated numerical excursion outside [0, 1]


class EpidemicNetwork:
    """A digraph plus per-node infection rates ``beta`` and curing rates ``delta``.

    Both rate vectors must be strictly positive; a zero curing rate would
    make the endemic balance ``p_i = xi_i / (delta_i + xi_i)`` degenerate.
    Instances are immutable after construction and safe to share across
    threads.
    """

    def __init__(self, graph: Digraph, beta, delta):
        beta = np.asarray(beta, dtype=float)
        delta = np.asarray(delta, dtype=float)
        if beta.shape != (graph.n,) or delta.shape != (graph.n,):
            raise ValueError(
                f"rate vectors must have length {graph.n}, got beta {beta.shape}, delta {delta.shape}"
            )
        if not np.all(beta > 0):
            raise ValueError("all infection rates beta must be positive")
        if not np.all(delta > 0):
            raise ValueError("all curing rates delta must be positive")
        self.graph = graph
        self.beta = beta
        self.delta = delta
        # Weighted coupling matrix W = A^T B, so that (W p)_i = xi_i.  Kept
        # sparse for large graphs; the dense path is cheaper at desk scale.
        n = graph.n
        if n <= DENSE_LIMIT:
            w = np.zeros((n, n))
            for s, d, wt in graph.edges:
                w[d, s] = wt * beta[s]
            self._coupling = w
        else:
            rows = np.array([d for _, d, _ in graph.edges], dtype=int)
            cols = np.array([s for s, _, _ in graph.edges], dtype=int)
            data = np.array([wt * beta[s] for s, _, wt in graph.edges])
            self._coupling = sparse.csr_matrix((data, (rows, cols)), shape=(n, n))

    @property
    def n(self) -> int:
        return self.graph.n

    @classmethod
    def uniform(cls, graph: Digraph, beta: float, delta: float) -> "EpidemicNetwork":
        """Convenience constructor with one shared beta and delta for all nodes."""
        return cls(graph, np.full(graph.n, float(beta)), np.full(graph.n, float(delta)))

    def pressure(self, p: np.ndarray) -> np.ndarray:
        """Incoming infection pressure xi for a state vector (no validation)."""
        out = self._coupling @ p
        return np.asarray(out)

    def coupling_matrix(self, dense: bool = True) -> np.ndarray:
        """The matrix W = A^T B with ``(W)_{ij} = A[j, i] * beta_j``."""
        if dense and sparse.issparse(self._coupling):
            return self._coupling.toarray()
        if dense:
            return np.array(self._coupling)
        return self._coupling

    def field(self, p: np.ndarray) -> np.ndarray:
        """Raw state derivative without validation (integrator hot path)."""
        return (1.0 - p) * self.pressure(p) - self.delta * p


def check_state(net: EpidemicNetwork, p, slack: float = STATE_SLACK) -> np.ndarray:
    """Validate a state vector: right length, entries in [0, 1] up to slack."""
    p = np.asarray(p, dtype=float)
    if p.shape != (net.n,):
        raise ValueError(f"state must have length {net.n}, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("state entries must be finite")
    if p.min() < -slack or p.max() > 1.0 + slack:
        raise ValueError(
            f"state entries must lie in [0, 1] (slack {slack:g}); "
            f"got range [{p.min():g}, {p.max():g}]"
        )
    return p


def vector_field(net: EpidemicNetwork, p) -> np.ndarray:
    """State derivative of the SIS model at p.

    Componentwise equal to ``-delta_i * p_i + (1 - p_i) * xi_i``.
    """
    p = check_state(net, p)
    return net.field(p)


def steady_state_residual(net: EpidemicNetwork, p) -> float:
    """Max-abs value of the vector field; ~0 certifies an equilibrium."""
    return float(np.abs(vector_field(net, p)).max())


@dataclass(frozen=True)
class SubsystemView:
    """Dynamics of one strongly connected component driven by the rest.

    ``adjacency`` is the principal submatrix of A on the component's nodes;
    ``coupling(p_full)`` evaluates the steady input c fed by all nodes
    outside the component.  The local field is
    ``(1 - q) * (W_local q) - delta * q + (1 - q) * c``.
    """

    index: int
    nodes: tuple[int, ...]
    adjacency: np.ndarray
    beta: np.ndarray
    delta: np.ndarray
    cross: np.ndarray  # |nodes| x n, rows of W restricted to out-of-component columns

    @property
    def size(self) -> int:
        return len(self.nodes)

    def local_coupling(self) -> np.ndarray:
        """The within-component matrix W_local = A_local^T B_local."""
        return self.adjacency.T * self.beta[None, :]

    def coupling(self, p_full: np.ndarray) -> np.ndarray:
        """Input c from nodes outside the component, given the full state."""
        return self.cross @ np.asarray(p_full, dtype=float)

    def field(self, q: np.ndarray, c: np.ndarray) -> np.ndarray:
        """Local state derivative for component state q under input c."""
        q = np.asarray(q, dtype=float)
        xi = self.local_coupling() @ q
        return (1.0 - q) * xi - self.delta * q + (1.0 - q) * c

    def field_from_full(self, p_full: np.ndarray) -> np.ndarray:
        p_full = np.asarray(p_full, dtype=float)
        return self.field(p_full[list(self.nodes)], self.coupling(p_full))


def subsystem(net: EpidemicNetwork, decomp: SccDecomposition, i: int) -> SubsystemView:
    """Extract the i-th component's subsystem (topological component index)."""
    if not (0 <= i < decomp.count):
        raise IndexError(f"component index {i} out of range for {decomp.count} components")
    nodes = decomp.components[i]
    idx = list(nodes)
    a_full = net.graph.adjacency()
    a_local = a_full[np.ix_(idx, idx)]
    w_full = net.coupling_matrix(dense=True)
    cross = w_full[idx, :].copy()
    cross[:, idx] = 0.0
    return SubsystemView(
        index=i,
        nodes=nodes,
        adjacency=a_local,
        beta=net.beta[idx].copy(),
        delta=net.delta[idx].copy(),
        cross=cross,
    )


def to_json_dict(net: EpidemicNetwork) -> dict:
    return {
        "nodes": net.n,
        "edges": [[s, d, w] for s, d, w in net.graph.edges],
        "beta": net.beta.tolist(),
        "delta": net.delta.tolist(),
    }


def from_json_dict(doc: dict) -> EpidemicNetwork:
    """Build a network from the model JSON layout; unknown keys are ignored."""
    try:
        n = int(doc["nodes"])
        edges = tuple((int(s), int(d), float(w)) for s, d, w in doc["edges"])
        beta = [float(b) for b in doc["beta"]]
        delta = [float(x) for x in doc["delta"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed model document: {exc}") from exc
    try:
        graph = Digraph(n=n, edges=edges)
        return EpidemicNetwork(graph, beta, delta)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def read_model(path) -> EpidemicNetwork:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from exc
    return from_json_dict(doc)


def write_model(net: EpidemicNetwork, path, meta: dict | None = None) -> None:
    doc = to_json_dict(net)
    if meta:
        doc["meta"] = meta
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
