from fractions import Fraction

import pytest

from conftest import random_network
from modcert.brute import brute_force_max
from modcert.chains import (
    Chain,
    ChainError,
    ResidualScores,
    apply_chain,
    chain_penalty,
    find_penalized_chains,
    greedy_certify,
    has_remaining_penalized_chain,
)
from modcert.graph import build_network
from modcert.scores import ScoreMatrix, score_matrix

F = Fraction


def path_residual():
    sm = score_matrix(build_network([("a", "b", 1), ("b", "c", 1)]))
    return ResidualScores.fresh(sm)


def triangle_residual():
    # synthetic residuals (0.2, 0.3, closing -0.1)
    sm = ScoreMatrix(n=3, s={(0, 1): F(1, 5), (1, 2): F(3, 10), (0, 2): F(-1, 10)}, d=(F(0),) * 3)
    return ResidualScores.fresh(sm)


def test_chain_penalty_path():
    res = path_residual()
    assert chain_penalty(res, [0, 1, 2]) == F(1, 8)


def test_chain_penalty_triangle():
    # valid ordering: positive consecutive scores 0-1 and 1-2, closing 0-2
    res = triangle_residual()
    assert chain_penalty(res, [0, 1, 2]) == F(1, 10)


def test_chain_penalty_rejects_bad_patterns():
    res = path_residual()
    with pytest.raises(ChainError):
        chain_penalty(res, [0, 2, 1])  # interior (0,2) negative
    with pytest.raises(ChainError):
        chain_penalty(res, [0, 1])  # too short
    with pytest.raises(ChainError):
        chain_penalty(res, [0, 1, 0])  # repeated node
    zero = ScoreMatrix(n=3, s={(0, 1): F(0), (1, 2): F(1, 4), (0, 2): F(-1, 8)}, d=(F(0),) * 3)
    with pytest.raises(ChainError, match="not positive"):
        chain_penalty(ResidualScores.fresh(zero), [0, 1, 2])


def test_apply_chain_arithmetic():
    res = path_residual()
    ch = Chain(nodes=(0, 1, 2), penalty=F(1, 8))
    out = apply_chain(res, ch)
    assert out.residual(0, 1) == F(1, 8)
    assert out.residual(1, 2) == F(1, 8)
    assert out.residual(0, 2) == 0
    # original untouched (value semantics)
    assert res.residual(0, 1) == F(1, 4)
    assert res.delta() == {}
    assert out.delta() == {(0, 1): F(-1, 8), (1, 2): F(-1, 8), (0, 2): F(1, 8)}


def test_apply_chain_saturation_rejects_reuse():
    res = path_residual()
    ch = Chain(nodes=(0, 1, 2), penalty=F(1, 8))
    out = apply_chain(res, ch)
    with pytest.raises(ChainError):
        chain_penalty(out, [0, 1, 2])


def test_apply_triangle():
    res = triangle_residual()
    out = apply_chain(res, Chain(nodes=(0, 1, 2), penalty=F(1, 10)))
    assert out.residual(0, 1) == F(1, 10)
    assert out.residual(1, 2) == F(1, 5)
    assert out.residual(0, 2) == 0


def test_find_chains_path():
    res = path_residual()
    chains, truncated = find_penalized_chains(res, 3)
    assert not truncated
    assert [(c.nodes, c.penalty) for c in chains] == [((0, 1, 2), F(1, 8))]
    chains4, _ = find_penalized_chains(res, 4)
    assert chains4 == []


def test_find_chains_dyad_empty():
    sm = score_matrix(build_network([("a", "b", 1)]))
    chains, _ = find_penalized_chains(ResidualScores.fresh(sm), 3)
    assert chains == []


def test_find_chains_budget_truncates():
    sm = score_matrix(random_network(0, n=8, p=0.8))
    chains, truncated = find_penalized_chains(ResidualScores.fresh(sm), 5, path_budget=3)
    assert truncated


def test_has_remaining_transitions():
    res = path_residual()
    assert has_remaining_penalized_chain(res)
    out = apply_chain(res, Chain(nodes=(0, 1, 2), penalty=F(1, 8)))
    assert not has_remaining_penalized_chain(out)
    dyad = score_matrix(build_network([("a", "b", 1)]))
    assert not has_remaining_penalized_chain(ResidualScores.fresh(dyad))


def test_greedy_path_worked_example():
    sm = score_matrix(build_network([("a", "b", 1), ("b", "c", 1)]))
    cert = greedy_certify(sm)
    assert cert.trivial_bound == F(1, 8)
    assert len(cert.chains) == 1
    assert cert.chains[0].nodes == (0, 1, 2)
    assert cert.chains[0].penalty == F(1, 8)
    assert cert.total_penalty == F(1, 8)
    assert cert.bound == 0
    q, _ = brute_force_max(sm)
    assert cert.bound == q


def test_greedy_deterministic_and_seeded():
    sm = score_matrix(random_network(11, n=8))
    a = greedy_certify(sm)
    b = greedy_certify(sm)
    assert [c.nodes for c in a.chains] == [c.nodes for c in b.chains]
    r1 = greedy_certify(sm, strategy="random", seed=9)
    r2 = greedy_certify(sm, strategy="random", seed=9)
    assert [c.nodes for c in r1.chains] == [c.nodes for c in r2.chains]


def test_greedy_bound_arithmetic_invariant():
    for seed in range(10):
        sm = score_matrix(random_network(seed, n=7))
        cert = greedy_certify(sm)
        assert cert.bound == cert.trivial_bound - sum((c.penalty for c in cert.chains), F(0))
        assert not has_remaining_penalized_chain(cert.residual)
        # every appended chain strictly tightens the running bound
        assert all(c.penalty > 0 for c in cert.chains)


def test_greedy_validity_against_brute_force():
    for seed in range(20):
        net = random_network(seed, n=3 + seed % 6)
        sm = score_matrix(net)
        cert = greedy_certify(sm)
        q, _ = brute_force_max(sm)
        assert cert.bound >= q


def test_residual_sign_consistency_after_greedy():
    for seed in range(8):
        sm = score_matrix(random_network(seed, n=7))
        cert = greedy_certify(sm)
        den0, S0, _ = sm.scaled()
        res = cert.residual
        for a in range(sm.n):
            for b in range(a + 1, sm.n):
                r = res.num[a][b]
                s0 = S0[a][b]
                assert r * s0 >= 0
                assert abs(r) <= abs(s0)


def test_edge_disjoint_chains_bound_matches_plain_sum():
    # two separate path components: chains are edge-disjoint by construction
    sm = score_matrix(build_network([("a", "b", 1), ("b", "c", 1), ("x", "y", 1), ("y", "z", 1)]))
    cert = greedy_certify(sm)
    nodesets = [frozenset(c.nodes) for c in cert.chains]
    assert len(nodesets) == len(set(nodesets))
    assert cert.bound == cert.trivial_bound - sum((c.penalty for c in cert.chains), F(0))


def test_strategy_validation():
    sm = score_matrix(build_network([("a", "b", 1)]))
    with pytest.raises(ValueError):
        greedy_certify(sm, strategy="bogus")
