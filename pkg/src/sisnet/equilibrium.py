"""Disease-free and endemic equilibria via a monotone fixed-point map.

The endemic balance of one strongly connected component with steady outside
input ``c`` is a fixed point of

    T(q) = (X q + y) / (1 + X q)   componentwise,

with ``X = G^{-1} W_local``, ``y = G^{-1} c`` and ``G = diag(delta + c)``.
T is monotone and maps the unit box into itself, so iterating from the
all-ones state descends componentwise to the greatest fixed point: the
strong endemic state when it exists, the origin otherwise.  A weakly
connected network is solved one component at a time in topological order,
feeding each component the steady input produced upstream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import SccDecomposition, scc_decompose
from .model import EpidemicNetwork, SubsystemView, steady_state_residual, subsystem
from .spectral import CRITICAL_BAND, component_reproduction_numbers

SOLVER_TOL = 1e-12
SOLVER_MAX_ITER = 2_000_000
RESIDUAL_TOL = 1e-9
POSITIVITY_EPS = 1e-10  # entries below this count as zero for classification

DISEASE_FREE = "DiseaseFree"
WEAK_ENDEMIC = "WeakEndemic"
STRONG_ENDEMIC = "StrongEndemic"

COMPONENT_DISEASE_FREE = "disease-free"
COMPONENT_ENDEMIC = "endemic"
COMPONENT_CRITICAL = "critical"


class ConvergenceError(RuntimeError):
    """A component's fixed-point iteration exhausted its budget."""


@dataclass(frozen=True)
class FixedPointProblem:
    """Data (X, y) of the map T(p) = (Xp + y) / (1 + Xp)."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.ndim != 2 or x.shape[0] != x.shape[1]:
            raise ValueError(f"X must be square, got shape {x.shape}")
        if y.shape != (x.shape[0],):
            raise ValueError(f"y must have length {x.shape[0]}, got shape {y.shape}")
        if np.any(x < 0):
            raise ValueError("X must be nonnegative")
        if np.any(y < 0) or np.any(y >= 1):
            raise ValueError("y must satisfy 0 <= y < 1 componentwise")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.x.shape[0]


def apply_T(fp: FixedPointProblem, p: np.ndarray) -> np.ndarray:
    """One application of the monotone map; maps [0,1]^n into [0,1)^n."""
    xp = fp.x @ np.asarray(p, dtype=float)
    return (xp + fp.y) / (1.0 + xp)


@dataclass
class FixedPointSolution:
    state: np.ndarray
    iterations: int
    gap: float
    converged: bool


def solve_fixed_point(
    fp: FixedPointProblem,
    tol: float = SOLVER_TOL,
    max_iter: int = SOLVER_MAX_ITER,
    p0: np.ndarray | None = None,
) -> FixedPointSolution:
    """Iterate T until the step gap drops below tol.

    Started from the all-ones state (the default), T(1) <= 1 and
    monotonicity make the sequence componentwise nonincreasing (asserted
    along the way) and bounded below by 0, hence convergent to the greatest
    fixed point.  An explicit ``p0`` in the unit box runs the plain
    iteration instead; any strictly positive start is sandwiched between a
    rising and a falling monotone sequence with the same limit, so it
    converges to the same point.  On budget exhaustion the best iterate is
    returned with ``converged=False`` rather than raising.
    """
    if p0 is None:
        p = np.ones(fp.n)
        descending = True
    else:
        p = np.asarray(p0, dtype=float).copy()
        if p.shape != (fp.n,) or p.min() < 0 or p.max() > 1:
            raise ValueError("start must lie in the unit box")
        descending = False
    gap = np.inf
    for k in range(1, max_iter + 1):
        q = apply_T(fp, p)
        if descending:
            assert np.all(q <= p + 1e-12), "monotone descent violated"
            np.minimum(q, p, out=q)  # keep the sequence exactly nonincreasing
        gap = float(np.abs(q - p).max())
        p = q
        if gap < tol:
            return FixedPointSolution(p, k, gap, True)
    return FixedPointSolution(p, max_iter, gap, False)


def endemic_state_scc(
    sub: SubsystemView,
    c_star: np.ndarray,
    r0: float | None = None,
    tol: float = SOLVER_TOL,
    max_iter: int = SOLVER_MAX_ITER,
) -> tuple[np.ndarray, int]:
    """Endemic state of one strongly connected component under steady input.

    With no input and R0 <= 1 (critical band included) the component is
    disease-free and the zero state is returned without iterating.
    Otherwise the fixed point of T is computed; the division by
    ``delta + c`` is safe because curing rates are strictly positive, and it
    also guarantees ``y < 1``.  Returns the state and the iteration count.
    """
    c_star = np.asarray(c_star, dtype=float)
    if c_star.shape != (sub.size,):
        raise ValueError(f"input must have length {sub.size}, got shape {c_star.shape}")
    if np.any(c_star < 0):
        raise ValueError("steady input must be nonnegative")
    if r0 is None:
        from .spectral import spectral_radius_nonneg

        r0 = spectral_radius_nonneg(sub.local_coupling() / sub.delta[:, None])
    if c_star.max() == 0.0 and r0 <= 1.0 + CRITICAL_BAND:
        return np.zeros(sub.size), 0
    g = sub.delta + c_star
    fp = FixedPointProblem(x=sub.local_coupling() / g[:, None], y=c_star / g)
    sol = solve_fixed_point(fp, tol=tol, max_iter=max_iter)
    if not sol.converged:
        raise ConvergenceError(
            f"component {sub.index}: fixed-point gap {sol.gap:.3e} after {sol.iterations} iterations"
        )
    return sol.state, sol.iterations


@dataclass
class EquilibriumReport:
    """Classified equilibrium of the whole network.

    ``components``/``r0``/``c_star``/``component_class``/``iterations`` are
    aligned with the decomposition's topological component order.  ``p_star``
    holds raw solver values; classification treats entries below
    ``POSITIVITY_EPS`` as zero.
    """

    decomposition: SccDecomposition
    r0: tuple[float, ...]
    c_star: tuple[np.ndarray, ...]
    component_class: tuple[str, ...]
    classification: str
    p_star: np.ndarray
    residual: float
    iterations: tuple[int, ...]

    @property
    def r0_global(self) -> float:
        return max(self.r0)

    def component_state(self, i: int) -> np.ndarray:
        return self.p_star[list(self.decomposition.components[i])]

    def to_json_dict(self) -> dict:
        return {
            "components": [list(c) for c in self.decomposition.components],
            "r0": list(self.r0),
            "c_star": [c.tolist() for c in self.c_star],
            "component_class": list(self.component_class),
            "classification": self.classification,
            "p_star": self.p_star.tolist(),
            "residual": self.residual,
            "iterations": list(self.iterations),
        }


def equilibrium_cascade(
    net: EpidemicNetwork,
    decomp: SccDecomposition | None = None,
    tol: float = SOLVER_TOL,
    max_iter: int = SOLVER_MAX_ITER,
    residual_tol: float = RESIDUAL_TOL,
) -> EquilibriumReport:
    """Solve every component in topological order and classify the result.

    Upstream components see no input; each solved state feeds the steady
    input of everything downstream.  The assembled state's residual against
    the full vector field is checked before returning.
    """
    if decomp is None:
        decomp = scc_decompose(net.graph)
    r0 = component_reproduction_numbers(net, decomp)
    p_star = np.zeros(net.n)
    c_stars: list[np.ndarray] = []
    classes: list[str] = []
    iterations: list[int] = []
    for i in range(decomp.count):
        sub = subsystem(net, decomp, i)
        c_i = sub.coupling(p_star)  # only already-solved upstream entries are nonzero
        q_i, iters = endemic_state_scc(sub, c_i, r0=r0[i], tol=tol, max_iter=max_iter)
        positive = q_i > POSITIVITY_EPS
        # A strongly connected component is all-or-nothing: one infected node
        # would infect every node it can reach, i.e. the whole component.
        assert positive.all() or not positive.any(), "mixed positivity inside one SCC"
        if positive.any():
            classes.append(COMPONENT_ENDEMIC)
        elif c_i.max() == 0.0 and abs(r0[i] - 1.0) <= CRITICAL_BAND:
            classes.append(COMPONENT_CRITICAL)
        else:
            classes.append(COMPONENT_DISEASE_FREE)
        c_stars.append(c_i)
        iterations.append(iters)
        p_star[list(sub.nodes)] = q_i

    positive = p_star > POSITIVITY_EPS
    if not positive.any():
        classification = DISEASE_FREE
    elif positive.all():
        classification = STRONG_ENDEMIC
    else:
        classification = WEAK_ENDEMIC

    residual = steady_state_residual(net, p_star)
    if residual > residual_tol:
        raise ConvergenceError(f"assembled equilibrium residual {residual:.3e} exceeds {residual_tol:g}")
    return EquilibriumReport(
        decomposition=decomp,
        r0=tuple(float(v) for v in r0),
        c_star=tuple(c_stars),
        component_class=tuple(classes),
        classification=classification,
        p_star=p_star,
        residual=residual,
        iterations=tuple(iterations),
    )


def jacobian_at(net: EpidemicNetwork, p_star) -> np.ndarray:
    """Jacobian of the vector field at an equilibrium with all entries < 1.

    Equals ``-(I - P)^{-1} D + (I - P) A^T B``; at the origin this reduces
    to ``A^T B - D``.
    """
    p_star = np.asarray(p_star, dtype=float)
    if p_star.shape != (net.n,):
        raise ValueError(f"state must have length {net.n}")
    s = 1.0 - p_star
    if s.min() <= 0:
        raise ValueError("Jacobian scaling is singular where p = 1")
    j = s[:, None] * net.coupling_matrix(dense=True)
    j -= np.diag(net.delta / s)
    return j
