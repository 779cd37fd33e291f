"""Concave-game view of the SIS dynamics and distributed stability checks.

Each node i maximizes

    f_i(p) = -(delta_i / 2) p_i^2 + p_i (1 - p_i / 2) * xi_i,

whose own-variable gradient is exactly the node's entry of the vector
field, so the epidemic dynamics are the game's gradient flow.  Two cheap
per-node screens for the disease-free regime live here: a halved out-edge
load test each node can evaluate locally, and the two-sided curvature
dominance test.  Only the latter is actually sufficient for stability of
the healthy state (it puts every Gershgorin disc of the symmetrized
linearization in the left half-plane); the halved screen admits unstable
networks and is reported with explicit margins so callers can see how
close the call was.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import EpidemicNetwork, check_state


def objective(net: EpidemicNetwork, i: int, p) -> float:
    """Node i's payoff at state p."""
    p = check_state(net, p)
    if not (0 <= i < net.n):
        raise IndexError(f"node {i} out of range")
    xi = float(net.pressure(p)[i])
    return float(-0.5 * net.delta[i] * p[i] ** 2 + p[i] * (1.0 - 0.5 * p[i]) * xi)


def best_response_gradient(net: EpidemicNetwork, p) -> np.ndarray:
    """Own-variable payoff gradients; identical to the vector field."""
    p = check_state(net, p)
    return (1.0 - p) * net.pressure(p) - net.delta * p


def concavity_check(net: EpidemicNetwork, p) -> np.ndarray:
    """Second own-variable derivatives ``-delta_i - xi_i``; negative on the box."""
    p = check_state(net, p)
    return -net.delta - net.pressure(p)


@dataclass
class DistributedVerdict:
    """Per-node margins of the distributed half-load screen.

    The headline test at node i is ``0.5 * sum_j A[i, j] beta_j < delta_i``,
    read off the node's out-edges with the target's infection rate.  Because
    the coupling sums of the dynamics run over in-edges instead, the
    mirrored in-edge margins are reported alongside; on graphs that are not
    weight-symmetric the two differ and only the headline drives the
    verdict.  Neither variant is sufficient for disease-free stability on
    its own (the factor 1/2 is too generous); see
    ``diagonal_dominance_check`` for the sound test.
    """

    margins: np.ndarray  # delta_i - 0.5 * out-edge load (headline)
    margins_in: np.ndarray  # same with in-edges, for comparison
    passed: np.ndarray  # headline margins > 0
    all_pass: bool

    def to_json_dict(self) -> dict:
        return {
            "margins": self.margins.tolist(),
            "margins_in_edges": self.margins_in.tolist(),
            "passed": [bool(b) for b in self.passed],
            "all_pass": self.all_pass,
        }


def distributed_condition(net: EpidemicNetwork) -> DistributedVerdict:
    a = net.graph.adjacency()
    out_load = a @ net.beta  # sum_j A[i, j] beta_j
    in_load = a.T @ net.beta  # sum_j A[j, i] beta_j
    margins = net.delta - 0.5 * out_load
    margins_in = net.delta - 0.5 * in_load
    passed = margins > 0
    return DistributedVerdict(
        margins=margins,
        margins_in=margins_in,
        passed=passed,
        all_pass=bool(passed.all()),
    )


def diagonal_dominance_check(net: EpidemicNetwork) -> bool:
    """Concave-game curvature dominance test specialized to the SIS payoffs.

    Node i's own curvature is ``-delta_i - xi_i``; the mixed second
    derivatives of the two couplings tied to a pair (i, j) are
    ``(1 - p_i) A[j, i] beta_j`` and ``(1 - p_j) A[i, j] beta_i``.  Both are
    affine in p, so their worst case over the box sits at a vertex with each
    ``1 - p`` factor at 1, and the per-node test becomes

        2 delta_i > sum_j (A[i, j] beta_i + A[j, i] beta_j).

    Passing everywhere puts every Gershgorin disc of the symmetrized
    linearization at the origin strictly in the left half-plane, so the
    disease-free state is then globally asymptotically stable.
    """
    a = net.graph.adjacency()
    worst_coupling = (a @ np.ones(net.n)) * net.beta + a.T @ net.beta
    return bool(np.all(2.0 * net.delta > worst_coupling))
