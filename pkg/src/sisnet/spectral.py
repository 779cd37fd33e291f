"""Spectral quantities: reproduction numbers, Metzler abscissa, Perron-Frobenius pairs.

Everything here reduces to power iteration on a shifted nonnegative matrix.
Adding ``s*I`` with a large enough shift makes a Metzler matrix nonnegative
with strictly positive diagonal, so the iteration converges geometrically on
every irreducible block; reducible inputs are handled one support-SCC at a
time, which also sidesteps defective dominant eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import is_irreducible, support_components
from .model import EpidemicNetwork, SccDecomposition, subsystem

PF_TOL = 1e-12
PF_MAX_ITER = 100_000
CRITICAL_BAND = 1e-9  # |R0 - 1| within this band is reported as critical


class ConvergenceError(RuntimeError):
    """Power iteration failed to settle within the iteration budget."""

    def __init__(self, message: str, iterations: int):
        super().__init__(f"{message} (after {iterations} iterations)")
        self.iterations = iterations


@dataclass(frozen=True)
class PfEigenpair:
    """Dominant eigenvalue with strictly positive left/right vectors.

    Vectors are normalized to unit max-entry.  ``value`` is the spectral
    radius for a nonnegative matrix and the spectral abscissa for a Metzler
    matrix.
    """

    value: float
    right: np.ndarray
    left: np.ndarray
    right_residual: float
    left_residual: float
    iterations: int


def _as_square(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {x.shape}")
    return x


def _power_iteration(y: np.ndarray, tol: float, max_iter: int) -> tuple[float, np.ndarray, int]:
    """Dominant eigenpair of a nonnegative matrix with positive diagonal.

    Normalizes to unit max-entry each sweep; with a positive diagonal the
    iterates stay strictly positive, so the max-entry equals the inf-norm.
    """
    v = np.ones(y.shape[0])
    for k in range(1, max_iter + 1):
        w = y @ v
        m = w.max()
        if m < 1e-300:
            return 0.0, v, k
        w /= m
        if np.abs(w - v).max() < tol:
            return float(m), w, k
        v = w
    raise ConvergenceError("power iteration did not converge", max_iter)


def _block_pf_value(block: np.ndarray, tol: float, max_iter: int) -> float:
    """Largest-real eigenvalue of an irreducible Metzler/nonnegative block."""
    if block.shape[0] == 1:
        return float(block[0, 0])
    shift = 1.0 + float(np.abs(np.diag(block)).max())
    lam, _, _ = _power_iteration(block + shift * np.eye(block.shape[0]), tol, max_iter)
    return lam - shift


def spectral_radius_nonneg(x, tol: float = PF_TOL, max_iter: int = PF_MAX_ITER) -> float:
    """Spectral radius of a nonnegative matrix.

    Computed per support-SCC: the spectrum of a block-triangular matrix is
    the union of its diagonal blocks' spectra, and each block is irreducible
    so its radius is a simple eigenvalue reachable by power iteration.
    Nilpotent inputs (DAG supports) fall out as 0 with no iteration at all.
    """
    x = _as_square(x)
    if np.any(x < 0):
        raise ValueError("expected a nonnegative matrix")
    best = 0.0
    for comp in support_components(x):
        idx = list(comp)
        best = max(best, _block_pf_value(x[np.ix_(idx, idx)], tol, max_iter))
    return best


def metzler_abscissa(x, tol: float = PF_TOL, max_iter: int = PF_MAX_ITER) -> float:
    """Spectral abscissa (largest real part) of a Metzler matrix.

    Uses the shift trick ``mu(X) = rho_PF(X + s I) - s`` on each support-SCC
    block; reducible inputs are therefore handled blockwise and the maximum
    over blocks is returned.
    """
    x = _as_square(x)
    off = x.copy()
    np.fill_diagonal(off, 0.0)
    if np.any(off < 0):
        raise ValueError("expected a Metzler matrix (nonnegative off-diagonal entries)")
    blocks = support_components(x)
    return max(_block_pf_value(x[np.ix_(list(c), list(c))], tol, max_iter) for c in blocks)


def pf_eigenpair(x, tol: float = PF_TOL, max_iter: int = PF_MAX_ITER) -> PfEigenpair:
    """Perron-Frobenius eigenpair of an irreducible Metzler or nonnegative matrix.

    Raises ValueError on reducible input and ConvergenceError past the
    iteration budget.  Strict positivity of both vectors is asserted after
    unit-max normalization.
    """
    x = _as_square(x)
    if not is_irreducible(np.abs(x)):
        raise ValueError("matrix is reducible; the Perron-Frobenius pair is not defined here")
    n = x.shape[0]
    if n == 1:
        one = np.ones(1)
        return PfEigenpair(float(x[0, 0]), one, one, 0.0, 0.0, 0)
    shift = 1.0 + float(np.abs(np.diag(x)).max())
    y = x + shift * np.eye(n)
    lam_r, right, it_r = _power_iteration(y, tol, max_iter)
    lam_l, left, it_l = _power_iteration(y.T, tol, max_iter)
    value = 0.5 * (lam_r + lam_l) - shift
    assert right.min() > 0 and left.min() > 0, "PF vectors of an irreducible matrix must be positive"
    r_res = float(np.abs(x @ right - value * right).max())
    l_res = float(np.abs(x.T @ left - value * left).max())
    return PfEigenpair(float(value), right, left, r_res, l_res, it_r + it_l)


def reproduction_matrix(net: EpidemicNetwork) -> np.ndarray:
    """The nonnegative next-generation matrix D^{-1} A^T B."""
    return net.coupling_matrix(dense=True) / net.delta[:, None]


def basic_reproduction_number(net: EpidemicNetwork) -> float:
    """R0 = rho(D^{-1} A^T B) for the whole network."""
    return spectral_radius_nonneg(reproduction_matrix(net))


def component_reproduction_numbers(net: EpidemicNetwork, decomp: SccDecomposition) -> np.ndarray:
    """Per-component R0, using each component's principal submatrices."""
    out = np.zeros(decomp.count)
    for i in range(decomp.count):
        sub = subsystem(net, decomp, i)
        local = sub.local_coupling() / sub.delta[:, None]
        out[i] = spectral_radius_nonneg(local)
    return out
