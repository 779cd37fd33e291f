"""Fixed-step integration of the epidemic field with trajectory recording.

The field is smooth and bounded on the unit box, so a classical 4th-order
scheme with a fixed step is plenty at desk scale.  States are clamped back
into [0, 1] after every step; the box is exactly invariant analytically, so
any excursion is an integrator artifact and its total magnitude is logged
on the trajectory.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import EpidemicNetwork, check_state

DEFAULT_STEP = 1e-2
CONVERGENCE_TOL = 1e-9  # on the residual ||field(p)||_inf, not on state deltas
DEFAULT_T_MAX = 1e4


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # one row per recorded time
    lyapunov: np.ndarray | None = None
    converged: bool = False
    limit: np.ndarray | None = None
    clamp_total: float = 0.0

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def _rk4_step(net: EpidemicNetwork, p: np.ndarray, h: float) -> np.ndarray:
    k1 = net.field(p)
    k2 = net.field(p + 0.5 * h * k1)
    k3 = net.field(p + 0.5 * h * k2)
    k4 = net.field(p + h * k3)
    return p + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _clamped(p: np.ndarray) -> tuple[np.ndarray, float]:
    clipped = np.clip(p, 0.0, 1.0)
    return clipped, float(np.abs(p - clipped).sum())


def integrate(
    net: EpidemicNetwork,
    p0,
    t_end: float,
    step: float = DEFAULT_STEP,
    record_every: int = 1,
) -> Trajectory:
    """Integrate from p0 up to t_end, recording every record_every-th step.

    The final state is always recorded.  Raises FloatingPointError with the
    offending step and node should the state ever go nonfinite.
    """
    p = check_state(net, p0).copy()
    if step <= 0:
        raise ValueError("step must be positive")
    if record_every < 1:
        raise ValueError("record_every must be >= 1")
    nsteps = max(1, int(np.ceil(t_end / step - 1e-12)))
    times = [0.0]
    states = [p.copy()]
    clamp_total = 0.0
    for k in range(1, nsteps + 1):
        t_next = min(k * step, t_end)
        h = t_next - (k - 1) * step
        p = _rk4_step(net, p, h)
        if not np.all(np.isfinite(p)):
            bad = int(np.flatnonzero(~np.isfinite(p))[0])
            raise FloatingPointError(f"state went nonfinite at step {k} (t={t_next:g}), node {bad}")
        p, spill = _clamped(p)
        clamp_total += spill
        if k % record_every == 0 or k == nsteps:
            times.append(t_next)
            states.append(p.copy())
    return Trajectory(
        times=np.array(times),
        states=np.array(states),
        clamp_total=clamp_total,
    )


@dataclass
class ConvergeResult:
    state: np.ndarray
    time: float
    converged: bool
    residual: float


def converge(
    net: EpidemicNetwork,
    p0,
    tol: float = CONVERGENCE_TOL,
    t_max: float = DEFAULT_T_MAX,
    step: float = DEFAULT_STEP,
    check_every: int = 10,
) -> ConvergeResult:
    """Integrate until the field residual drops below tol (or t_max is hit).

    Convergence is declared on ``||field(p)||_inf``, which is independent of
    the step size.  Hitting t_max is flagged, not fatal.
    """
    p = check_state(net, p0).copy()
    residual = float(np.abs(net.field(p)).max())
    if residual <= tol:
        return ConvergeResult(p, 0.0, True, residual)
    nsteps = int(np.ceil(t_max / step))
    for k in range(1, nsteps + 1):
        p = _rk4_step(net, p, step)
        if not np.all(np.isfinite(p)):
            bad = int(np.flatnonzero(~np.isfinite(p))[0])
            raise FloatingPointError(f"state went nonfinite at step {k}, node {bad}")
        p, _ = _clamped(p)
        if k % check_every == 0 or k == nsteps:
            residual = float(np.abs(net.field(p)).max())
            if residual <= tol:
                return ConvergeResult(p, k * step, True, residual)
    return ConvergeResult(p, nsteps * step, False, residual)


def lyapunov_trace(traj: Trajectory, p_star, r: np.ndarray | None = None) -> np.ndarray:
    """Quadratic deviation energy per recorded sample.

    With no weighting this is ``0.5 * ||p - p*||^2``; with a certificate
    diagonal r it is ``sum_i r_i (p_i - p*_i)^2``.
    """
    p_star = np.asarray(p_star, dtype=float)
    if p_star.shape != (traj.states.shape[1],):
        raise ValueError(
            f"reference state must have length {traj.states.shape[1]}, got shape {p_star.shape}"
        )
    diff = traj.states - p_star[None, :]
    if r is None:
        return 0.5 * np.sum(diff * diff, axis=1)
    r = np.asarray(r, dtype=float)
    if r.shape != p_star.shape:
        raise ValueError("weight diagonal must match the state length")
    return np.sum(r[None, :] * diff * diff, axis=1)


def write_csv(traj: Trajectory, path) -> None:
    """Trajectory CSV: header ``t,p_0,...,p_{n-1}[,V]``, 17 significant digits."""
    n = traj.states.shape[1]
    header = "t," + ",".join(f"p_{i}" for i in range(n))
    if traj.lyapunov is not None:
        header += ",V"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for k, t in enumerate(traj.times):
            row = [f"{t:.17g}"] + [f"{v:.17g}" for v in traj.states[k]]
            if traj.lyapunov is not None:
                row.append(f"{traj.lyapunov[k]:.17g}")
            fh.write(",".join(row) + "\n")
