import numpy as np
import pytest

from helpers import jacobi_eigenvalues
from sisnet import (
    CertificateError,
    Digraph,
    EpidemicNetwork,
    check_j_pstar_direction,
    classify_stability,
    diag_certificate_critical,
    diag_certificate_hurwitz,
    equilibrium_cascade,
    integrate,
    lambda_endemic,
    lambda_tilde,
    metzler_abscissa,
    scc_decompose,
    subsystem,
)
from sisnet.certificates import NEGATIVE_DEFINITE, NEGATIVE_SEMIDEFINITE
from sisnet.generate import random_strongly_connected, two_scc_network
from sisnet.simulate import lyapunov_trace


def symmetric_pair(delta: float = 0.5) -> EpidemicNetwork:
    g = Digraph(n=2, edges=((0, 1, 1.0), (1, 0, 1.0)))
    return EpidemicNetwork.uniform(g, beta=1.0, delta=delta)


def random_hurwitz_metzler(rng, n: int) -> np.ndarray:
    """Random irreducible Metzler matrix shifted just left of the boundary."""
    x = rng.uniform(0.1, 1.5, size=(n, n))
    np.fill_diagonal(x, rng.uniform(-1.0, 0.0, size=n))
    x -= (metzler_abscissa(x) + rng.uniform(0.05, 1.0)) * np.eye(n)
    return x


def test_lambda_endemic_examples():
    net = symmetric_pair(delta=0.5)
    p_star = np.array([0.5, 0.5])
    lam = lambda_endemic(net, p_star)
    assert lam == pytest.approx(np.array([[-0.5, 0.5], [0.5, -0.5]]))
    assert lam @ p_star == pytest.approx([0.0, 0.0], abs=1e-14)
    assert metzler_abscissa(lam) == pytest.approx(0.0, abs=1e-11)
    at_zero = lambda_endemic(net, np.zeros(2))
    assert at_zero == pytest.approx(net.coupling_matrix() - np.diag(net.delta))


def test_lambda_tilde_scalar_example():
    lonely = EpidemicNetwork.uniform(Digraph(n=1, edges=()), beta=1.0, delta=0.5)
    sub = subsystem(lonely, scc_decompose(lonely.graph), 0)
    lam = lambda_tilde(sub, np.array([0.5]), np.array([0.5]))
    assert lam == pytest.approx(np.array([[-1.0]]))


def test_lambda_tilde_reduces_to_lambda_endemic_without_input():
    net = symmetric_pair(delta=0.5)
    sub = subsystem(net, scc_decompose(net.graph), 0)
    q = np.array([0.5, 0.5])
    assert lambda_tilde(sub, q, np.zeros(2)) == pytest.approx(lambda_endemic(net, q))


def test_lambda_tilde_driven_component_is_hurwitz():
    net = two_scc_network(n=6, seed=3, r0_upstream=2.0, r0_downstream=2.0)
    report = equilibrium_cascade(net)
    d = report.decomposition
    sub = subsystem(net, d, 1)
    q = report.component_state(1)
    c = report.c_star[1]
    assert c.max() > 0
    lam = lambda_tilde(sub, q, c)
    assert np.abs(lam @ q + c).max() <= 1e-9
    assert metzler_abscissa(lam) < 0


def test_hurwitz_certificate_diagonal_target():
    cert = diag_certificate_hurwitz(np.diag([-1.0, -2.0]))
    assert cert.regime == NEGATIVE_DEFINITE
    assert cert.lambda_max == pytest.approx(-2.0, abs=1e-9)
    assert cert.diagonal == pytest.approx([1.0, 1.0])


def test_hurwitz_certificate_symmetric_example():
    x = np.array([[-2.0, 1.0], [1.0, -2.0]])
    cert = diag_certificate_hurwitz(x)
    assert cert.diagonal == pytest.approx([1.0, 1.0])
    assert cert.symmetrized == pytest.approx(2.0 * x)
    assert cert.lambda_max == pytest.approx(-2.0, abs=1e-9)


def test_hurwitz_certificate_endemic_jacobian():
    x = np.array([[-1.0, 0.5], [0.5, -1.0]])
    cert = diag_certificate_hurwitz(x)
    assert cert.symmetrized == pytest.approx(2.0 * x)
    assert cert.lambda_max == pytest.approx(-1.0, abs=1e-9)


def test_hurwitz_certificate_rejects_unstable_target():
    with pytest.raises(CertificateError):
        diag_certificate_hurwitz(np.array([[-0.5, 1.0], [1.0, -0.5]]))


def test_critical_certificate_symmetric():
    x = np.array([[-0.5, 0.5], [0.5, -0.5]])
    cert = diag_certificate_critical(x)
    assert cert.regime == NEGATIVE_SEMIDEFINITE
    assert cert.diagonal == pytest.approx([1.0, 1.0], abs=1e-9)
    assert cert.lambda_max == pytest.approx(0.0, abs=1e-10)


def test_critical_certificate_asymmetric_worked_case():
    # eigenvalues 0 and -2; right null vector (2, 1), left (1, 2)
    x = np.array([[-1.0, 2.0], [0.5, -1.0]])
    cert = diag_certificate_critical(x)
    assert cert.diagonal == pytest.approx([0.5, 2.0], rel=1e-8)
    assert cert.lambda_max <= 1e-10
    assert np.abs(cert.symmetrized @ cert.null_direction).max() <= 1e-9
    # frozen by hand: M = [[-1, 2], [2, -4]], eigenvalues {0, -5}
    assert cert.symmetrized == pytest.approx(np.array([[-1.0, 2.0], [2.0, -4.0]]), abs=1e-8)


def test_critical_certificate_survives_diagonal_similarity():
    rng = np.random.default_rng(0)
    x = np.array([[-1.0, 2.0], [0.5, -1.0]])
    for _ in range(20):
        d = rng.uniform(0.2, 2.0, size=2)
        y = np.diag(d) @ x @ np.diag(1.0 / d)
        cert = diag_certificate_critical(y)
        assert cert.lambda_max <= 1e-10


def test_critical_certificate_rejects_offband_abscissa():
    with pytest.raises(CertificateError, match="band"):
        diag_certificate_critical(np.array([[-2.0, 1.0], [1.0, -2.0]]))


def test_prop_equivalences_on_random_hurwitz_metzler():
    rng = np.random.default_rng(1)
    for _ in range(500):
        n = int(rng.integers(2, 9))
        x = random_hurwitz_metzler(rng, n)
        assert metzler_abscissa(x) < 0
        nu = np.linalg.solve(x, -np.ones(n))
        xi = np.linalg.solve(x.T, -np.ones(n))
        assert nu.min() > 0 and xi.min() > 0
        assert np.all(x @ nu < 0) and np.all(xi @ x < 0)
        cert = diag_certificate_hurwitz(x)
        assert cert.lambda_max < 0


def test_certificates_reverified_by_jacobi():
    rng = np.random.default_rng(2)
    for _ in range(40):
        n = int(rng.integers(2, 7))
        cert = diag_certificate_hurwitz(random_hurwitz_metzler(rng, n))
        jac = jacobi_eigenvalues(cert.symmetrized)
        assert jac[-1] == pytest.approx(cert.lambda_max, abs=1e-8)
        assert jac[-1] <= -1e-12 * np.abs(cert.symmetrized).sum(axis=1).max()


def test_direction_check_examples():
    net = symmetric_pair(delta=0.5)
    assert check_j_pstar_direction(net, np.array([0.5, 0.5]))
    with pytest.raises(ValueError, match="positive"):
        check_j_pstar_direction(net, np.zeros(2))
    rng = np.random.default_rng(3)
    for _ in range(50):
        n = int(rng.integers(2, 8))
        hot = random_strongly_connected(rng, n, r0=float(rng.uniform(1.2, 3.0)))
        report = equilibrium_cascade(hot)
        assert check_j_pstar_direction(hot, report.p_star)


def test_classify_disease_free_strongly_connected():
    net = symmetric_pair(delta=2.0)  # R0 = 0.5
    report = equilibrium_cascade(net)
    verdict = classify_stability(net, report)
    assert verdict.verdict == "DiseaseFreeGAS"
    assert len(verdict.certificates) == 1
    assert verdict.certificates[0].regime == NEGATIVE_DEFINITE


def test_classify_endemic_strongly_connected():
    net = symmetric_pair(delta=0.5)  # R0 = 2
    report = equilibrium_cascade(net)
    verdict = classify_stability(net, report)
    assert verdict.verdict == "EndemicGAS"
    regimes = [c.regime for c in verdict.certificates]
    assert regimes == [NEGATIVE_SEMIDEFINITE, NEGATIVE_DEFINITE]
    assert verdict.local_exponential["direction_ok"]
    assert verdict.local_exponential["mu"] < 0


def test_classify_weakly_connected_cascade():
    g = Digraph(n=3, edges=((0, 1, 1.0), (1, 0, 1.0), (1, 2, 1.0)))
    net = EpidemicNetwork.uniform(g, beta=1.0, delta=0.5)
    report = equilibrium_cascade(net)
    verdict = classify_stability(net, report)
    assert verdict.verdict == "EndemicGAS"
    assert [c.regime for c in verdict.certificates] == [NEGATIVE_SEMIDEFINITE, NEGATIVE_DEFINITE]


def test_classify_critical_band_notes():
    net = symmetric_pair(delta=1.0)  # R0 exactly 1
    report = equilibrium_cascade(net)
    verdict = classify_stability(net, report)
    assert verdict.verdict == "DiseaseFreeGAS"
    assert verdict.certificates[0].regime == NEGATIVE_SEMIDEFINITE
    assert any("critical" in n for n in verdict.notes)


def test_lyapunov_value_decays_along_trajectories():
    rng = np.random.default_rng(4)
    for _ in range(10):
        n = int(rng.integers(2, 7))
        net = random_strongly_connected(rng, n, r0=float(rng.uniform(1.3, 2.5)))
        report = equilibrium_cascade(net)
        verdict = classify_stability(net, report)
        cert = verdict.certificates[0]  # semidefinite certificate at p*
        traj = integrate(net, rng.uniform(0.1, 1.0, size=n), t_end=40.0, record_every=5)
        values = lyapunov_trace(traj, report.p_star, r=cert.diagonal)
        assert np.all(np.diff(values) <= 1e-9)


def test_lambda_endemic_rejects_non_equilibrium_positive_state():
    net = symmetric_pair(delta=0.5)
    with pytest.raises(CertificateError, match="abscissa"):
        lambda_endemic(net, np.array([0.3, 0.3]))
