"""Diagonal Lyapunov certificates for disease-free and endemic equilibria.

A certificate is a positive diagonal R together with the verified sign of
the symmetrized product ``M = X^T R + R X`` for a target Metzler matrix X:
negative definite when X is Hurwitz, negative semidefinite when X sits
exactly on the stability boundary.  Both constructions pick R from a pair
of positive vectors ``nu`` (right) and ``xi`` (left) as ``r_i = xi_i/nu_i``:

* Hurwitz X: ``nu = -X^{-1} 1`` and ``xi = -(X^T)^{-1} 1`` are strictly
  positive, and then ``M nu = -(1 + r) << 0`` with M symmetric Metzler, so
  M is negative definite.
* boundary X (abscissa 0): nu and xi are the Perron vectors, giving
  ``M nu = 0`` and hence a negative semidefinite M.

Verification is never skipped: the largest eigenvalue of M is checked
against the regime's acceptance band and a failure raises rather than
emitting a bad certificate.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .equilibrium import (
    COMPONENT_CRITICAL,
    COMPONENT_ENDEMIC,
    DISEASE_FREE,
    POSITIVITY_EPS,
    EquilibriumReport,
    jacobian_at,
)
from .graph import is_irreducible
from .model import EpidemicNetwork, SubsystemView, subsystem
from .spectral import CRITICAL_BAND, metzler_abscissa, pf_eigenpair

NEGATIVE_DEFINITE = "NegativeDefinite"
NEGATIVE_SEMIDEFINITE = "NegativeSemidefinite"

SEMIDEFINITE_TOL = 1e-9  # lambda_max(M) acceptance in the boundary regime
DEFINITE_REL_TOL = 1e-12  # lambda_max(M) <= -DEFINITE_REL_TOL * ||M||_inf when Hurwitz
NULL_DIRECTION_TOL = 1e-9  # ||M nu||_inf acceptance for boundary certificates
MU_BAND = 1e-7  # how far from 0 the abscissa may sit for a boundary certificate

DISEASE_FREE_GAS = "DiseaseFreeGAS"
ENDEMIC_GAS = "EndemicGAS"


class CertificateError(RuntimeError):
    """A constructed certificate failed verification, or the analytic verdict
    and the certificate machinery disagree."""


@dataclass(frozen=True)
class LyapunovCertificate:
    diagonal: np.ndarray
    target: np.ndarray
    symmetrized: np.ndarray
    lambda_max: float
    regime: str
    equilibrium: str
    null_direction: np.ndarray | None = None

    def quadratic_form(self, v: np.ndarray) -> float:
        """V(v) = v^T R v for this certificate's diagonal."""
        v = np.asarray(v, dtype=float)
        return float(np.sum(self.diagonal * v * v))

    def to_json_dict(self) -> dict:
        digest = hashlib.sha256(np.ascontiguousarray(self.target).tobytes()).hexdigest()
        return {
            "diagonal": self.diagonal.tolist(),
            "lambda_max": self.lambda_max,
            "regime": self.regime,
            "equilibrium": self.equilibrium,
            "target_sha256": digest,
        }


def _check_metzler(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {x.shape}")
    off = x.copy()
    np.fill_diagonal(off, 0.0)
    if np.any(off < 0):
        raise ValueError("expected a Metzler matrix")
    return x


def _symmetrized(x: np.ndarray, r: np.ndarray) -> np.ndarray:
    return x.T * r[None, :] + r[:, None] * x


def lambda_endemic(net: EpidemicNetwork, p_star, check: bool = True) -> np.ndarray:
    """The Metzler matrix ``-D + (I - P*) A^T B`` governing deviations from p*.

    Multiplying it by p* reproduces the vector field at p*, so at an
    equilibrium p* is a null direction.  For a strongly connected network
    with strictly positive p* the abscissa is checked to vanish.
    """
    p_star = np.asarray(p_star, dtype=float)
    lam = (1.0 - p_star)[:, None] * net.coupling_matrix(dense=True)
    lam -= np.diag(net.delta)
    if check and p_star.min() > POSITIVITY_EPS and is_irreducible(net.graph.adjacency()):
        mu = metzler_abscissa(lam)
        if abs(mu) > MU_BAND:
            raise CertificateError(f"abscissa {mu:.3e} of the deviation matrix is not ~0")
    return lam


def lambda_tilde(sub: SubsystemView, q_star, c_star, check: bool = True) -> np.ndarray:
    """Per-component deviation matrix ``-D - diag(c*) + (I - Q*) W_local``.

    Satisfies ``lambda_tilde @ q* = -c*`` at the component's equilibrium
    (verified); its abscissa is 0 without outside input and strictly
    negative under positive input.
    """
    q_star = np.asarray(q_star, dtype=float)
    c_star = np.asarray(c_star, dtype=float)
    lam = (1.0 - q_star)[:, None] * sub.local_coupling()
    lam -= np.diag(sub.delta + c_star)
    if check:
        err = np.abs(lam @ q_star + c_star).max()
        scale = max(1.0, float(np.abs(c_star).max()))
        if err > 1e-8 * scale:
            raise CertificateError(
                f"component {sub.index}: deviation identity residual {err:.3e}"
            )
    return lam


def diag_certificate_hurwitz(x, equilibrium: str = "") -> LyapunovCertificate:
    """Negative-definite diagonal certificate for a Hurwitz Metzler matrix.

    The inverse of a Hurwitz Metzler matrix is nonpositive with no zero row,
    so both solves below give strictly positive vectors whenever the
    precondition holds; anything else surfaces as a CertificateError.
    """
    x = _check_metzler(x)
    ones = np.ones(x.shape[0])
    try:
        nu = np.linalg.solve(x, -ones)
        xi = np.linalg.solve(x.T, -ones)
    except np.linalg.LinAlgError as exc:
        raise CertificateError(f"target is singular: {exc}") from exc
    if nu.min() <= 0 or xi.min() <= 0:
        raise CertificateError("target is not Hurwitz: -X^{-1} 1 is not strictly positive")
    r = xi / nu
    m = _symmetrized(x, r)
    lam_max = float(np.linalg.eigvalsh(m)[-1])
    bound = -DEFINITE_REL_TOL * float(np.abs(m).sum(axis=1).max())
    if not lam_max <= bound:
        raise CertificateError(
            f"definite certificate failed: lambda_max(M) = {lam_max:.3e} > {bound:.3e}"
        )
    return LyapunovCertificate(
        diagonal=r,
        target=x,
        symmetrized=m,
        lambda_max=lam_max,
        regime=NEGATIVE_DEFINITE,
        equilibrium=equilibrium,
    )


def diag_certificate_critical(x, equilibrium: str = "", mu_band: float = MU_BAND) -> LyapunovCertificate:
    """Negative-semidefinite certificate for an irreducible Metzler matrix with abscissa 0.

    The Perron vectors give ``M nu = X^T xi = 0`` by construction, and a
    symmetric irreducible Metzler matrix with a positive null vector has its
    largest eigenvalue exactly there.
    """
    x = _check_metzler(x)
    pair = pf_eigenpair(x)
    if abs(pair.value) > mu_band:
        raise CertificateError(
            f"abscissa {pair.value:.3e} is outside the critical band {mu_band:g}"
        )
    r = pair.left / pair.right
    m = _symmetrized(x, r)
    lam_max = float(np.linalg.eigvalsh(m)[-1])
    if not lam_max <= SEMIDEFINITE_TOL:
        raise CertificateError(
            f"semidefinite certificate failed: lambda_max(M) = {lam_max:.3e}"
        )
    null_err = float(np.abs(m @ pair.right).max())
    if null_err > NULL_DIRECTION_TOL:
        raise CertificateError(f"null direction residual {null_err:.3e}")
    return LyapunovCertificate(
        diagonal=r,
        target=x,
        symmetrized=m,
        lambda_max=lam_max,
        regime=NEGATIVE_SEMIDEFINITE,
        equilibrium=equilibrium,
        null_direction=pair.right,
    )


def check_j_pstar_direction(net: EpidemicNetwork, p_star) -> bool:
    """True when J(p*) p* is strictly negative componentwise.

    For a Metzler J a strictly positive vector mapped strictly negative
    certifies Hurwitz stability without any eigensolve.
    """
    p_star = np.asarray(p_star, dtype=float)
    if p_star.min() <= 0:
        raise ValueError("the direction check needs a strictly positive equilibrium")
    j = jacobian_at(net, p_star)
    return bool(np.all(j @ p_star < -1e-12))


@dataclass
class StabilityVerdict:
    verdict: str
    certificates: tuple[LyapunovCertificate, ...]
    local_exponential: dict | None
    notes: tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "certificates": [c.to_json_dict() for c in self.certificates],
            "local_exponential": self.local_exponential,
            "notes": list(self.notes),
        }


def _component_free_certificate(sub: SubsystemView, r0: float, label: str) -> LyapunovCertificate:
    """Certificate for a disease-free component on its linearization W_local - D."""
    target = sub.local_coupling() - np.diag(sub.delta)
    if r0 < 1.0 - CRITICAL_BAND:
        return diag_certificate_hurwitz(target, equilibrium=label)
    if r0 <= 1.0 + CRITICAL_BAND:
        return diag_certificate_critical(target, equilibrium=label)
    raise CertificateError(f"{label}: claimed disease-free but R0 = {r0}")


def classify_stability(net: EpidemicNetwork, report: EquilibriumReport) -> StabilityVerdict:
    """Stability verdict for the computed equilibrium, with certificates attached.

    Disease-free is globally asymptotically stable exactly when every
    component's R0 is at most 1; otherwise the computed (weak or strong)
    endemic state is.  Each component gets the certificate matching its
    regime, and for a strongly connected endemic network the Jacobian at p*
    is additionally checked to be Hurwitz both by the cheap directional test
    and through its abscissa.  Disagreement between the analytic verdict and
    any certificate is a hard error.
    """
    decomp = report.decomposition
    strongly_connected = decomp.count == 1
    certs: list[LyapunovCertificate] = []
    notes: list[str] = []

    endemic = report.classification != DISEASE_FREE
    verdict = ENDEMIC_GAS if endemic else DISEASE_FREE_GAS
    if not endemic and any(c == COMPONENT_CRITICAL for c in report.component_class):
        notes.append("some components sit in the critical band R0 ~ 1")

    for i in range(decomp.count):
        sub = subsystem(net, decomp, i)
        label = f"component {i}"
        if report.component_class[i] == COMPONENT_ENDEMIC:
            q_i = report.component_state(i)
            c_i = report.c_star[i]
            target = lambda_tilde(sub, q_i, c_i)
            if c_i.max() == 0.0:
                certs.append(diag_certificate_critical(target, equilibrium=f"{label}: endemic, isolated"))
            else:
                certs.append(diag_certificate_hurwitz(target, equilibrium=f"{label}: endemic, driven"))
        else:
            certs.append(_component_free_certificate(sub, report.r0[i], f"{label}: disease-free"))

    local = None
    if endemic and strongly_connected:
        p_star = report.p_star
        direction_ok = check_j_pstar_direction(net, p_star)
        j = jacobian_at(net, p_star)
        mu_j = metzler_abscissa(j)
        if not direction_ok or not mu_j < 0:
            raise CertificateError(
                f"endemic verdict but Jacobian check failed (direction {direction_ok}, mu {mu_j:.3e})"
            )
        certs.append(diag_certificate_hurwitz(j, equilibrium="jacobian at p*"))
        local = {"mu": mu_j, "hurwitz": True, "direction_ok": direction_ok}

    return StabilityVerdict(
        verdict=verdict,
        certificates=tuple(certs),
        local_exponential=local,
        notes=tuple(notes),
    )
