import numpy as np
import pytest

from helpers import central_difference, random_network
from sisnet import (
    Digraph,
    EpidemicNetwork,
    best_response_gradient,
    concavity_check,
    diagonal_dominance_check,
    distributed_condition,
    metzler_abscissa,
    objective,
    vector_field,
)


def symmetric_pair(delta: float = 0.5) -> EpidemicNetwork:
    g = Digraph(n=2, edges=((0, 1, 1.0), (1, 0, 1.0)))
    return EpidemicNetwork.uniform(g, beta=1.0, delta=delta)


def linearization(net: EpidemicNetwork) -> np.ndarray:
    return net.coupling_matrix() - np.diag(net.delta)


def test_objective_examples():
    net = symmetric_pair(delta=0.5)
    assert objective(net, 0, np.zeros(2)) == 0.0
    # -(0.5/2)*0.25 + 0.5*0.75*0.5 = -0.0625 + 0.1875
    assert objective(net, 0, np.array([0.5, 0.5])) == pytest.approx(0.125)
    lonely = EpidemicNetwork.uniform(Digraph(n=1, edges=()), beta=1.0, delta=0.8)
    assert objective(lonely, 0, np.array([0.5])) == pytest.approx(-0.4 * 0.25)


def test_gradient_identity_with_vector_field():
    rng = np.random.default_rng(0)
    for _ in range(100):
        net = random_network(rng, int(rng.integers(1, 10)))
        p = rng.uniform(0.0, 1.0, size=net.n)
        grad = best_response_gradient(net, p)
        field = vector_field(net, p)
        assert np.abs(grad - field).max() <= 1e-14 * max(1.0, np.abs(field).max())
    assert best_response_gradient(net, np.zeros(net.n)) == pytest.approx(np.zeros(net.n))


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(1)
    for _ in range(100):
        net = random_network(rng, int(rng.integers(1, 8)))
        p = rng.uniform(0.05, 0.95, size=net.n)
        grad = best_response_gradient(net, p)
        for i in range(net.n):
            fd = central_difference(lambda q, i=i: objective(net, i, q), p, i)
            assert fd == pytest.approx(grad[i], abs=1e-6)


def test_concavity_examples_and_sweep():
    lonely = EpidemicNetwork.uniform(Digraph(n=1, edges=()), beta=1.0, delta=0.7)
    assert concavity_check(lonely, np.array([0.4])) == pytest.approx([-0.7])
    net = symmetric_pair(delta=0.5)
    assert concavity_check(net, np.array([0.5, 0.5])) == pytest.approx([-1.0, -1.0])
    rng = np.random.default_rng(2)
    for _ in range(100):
        rand_net = random_network(rng, int(rng.integers(1, 9)))
        p = rng.uniform(0.0, 1.0, size=rand_net.n)
        assert np.all(concavity_check(rand_net, p) < 0)


def test_distributed_condition_examples():
    passing = symmetric_pair(delta=1.0)
    verdict = distributed_condition(passing)
    assert verdict.all_pass
    assert verdict.margins == pytest.approx([0.5, 0.5])

    failing = symmetric_pair(delta=0.4)
    verdict = distributed_condition(failing)
    assert not verdict.all_pass
    assert not verdict.passed.any()
    assert verdict.margins == pytest.approx([-0.1, -0.1])


def test_distributed_condition_reports_both_edge_directions():
    g = Digraph(n=2, edges=((0, 1, 2.0),))
    net = EpidemicNetwork(g, [1.0, 3.0], [1.0, 1.0])
    verdict = distributed_condition(net)
    # out-edge load at node 0 is 2*beta_1 = 6; in-edge load there is 0
    assert verdict.margins == pytest.approx([1.0 - 3.0, 1.0])
    assert verdict.margins_in == pytest.approx([1.0, 1.0 - 1.0])


def test_distributed_condition_is_not_sufficient_for_stability():
    # A passing network whose disease-free state is unstable: the halved
    # screen leaves room for R0 up to ~2 on a symmetric pair.
    net = symmetric_pair(delta=0.51)
    verdict = distributed_condition(net)
    assert verdict.all_pass
    assert metzler_abscissa(linearization(net)) == pytest.approx(0.49)


def test_dominance_check_examples():
    lonely = EpidemicNetwork.uniform(Digraph(n=1, edges=()), beta=1.0, delta=0.1)
    assert diagonal_dominance_check(lonely)
    assert not diagonal_dominance_check(symmetric_pair(delta=0.1))
    assert not diagonal_dominance_check(symmetric_pair(delta=0.51))
    assert diagonal_dominance_check(symmetric_pair(delta=1.01))


def test_dominance_check_is_sound():
    # dominance pass => abscissa of the linearization at 0 is negative;
    # the ensemble hugs the pass boundary so the implication is exercised
    rng = np.random.default_rng(3)
    passes = 0
    for k in range(500):
        net = random_network(rng, int(rng.integers(2, 10)))
        a = net.graph.adjacency()
        load = (a @ np.ones(net.n)) * net.beta + a.T @ net.beta
        if k % 2 == 0:
            delta = 0.5 * load * rng.uniform(1.02, 1.8, size=net.n) + 1e-3
            net = EpidemicNetwork(net.graph, net.beta, delta)
        if diagonal_dominance_check(net):
            passes += 1
            assert metzler_abscissa(linearization(net)) < 0
    assert passes >= 100  # the sweep actually exercised the implication
