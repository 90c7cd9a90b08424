import itertools
import random
from fractions import Fraction

import pytest

from conftest import random_network
from modcert.brute import set_partitions
from modcert.chains import ResidualScores
from modcert.graph import build_network
from modcert.scores import ScoreMatrix, score_matrix
from modcert.subnets import (
    Subnetwork,
    enumerate_subnetworks,
    partial_brute_force,
    reduce_weights,
)

F = Fraction


def exhaustive_best(sub: Subnetwork) -> Fraction:
    """Full set-partition maximum of a subnetwork's scores (oracle)."""
    nodes = list(sub.nodes)
    idx = {v: i for i, v in enumerate(nodes)}
    best = None
    for rgs in set_partitions(len(nodes)):
        val = F(0)
        for (a, b), v in sub.scores.items():
            if rgs[idx[a]] == rgs[idx[b]]:
                val += v
        if best is None or val > best:
            best = val
    return best


def random_subnetwork(seed: int, size: int) -> Subnetwork | None:
    rng = random.Random(seed)
    nodes = tuple(range(size))
    scores = {}
    npos = nneg = 0
    for a, b in itertools.combinations(nodes, 2):
        r = rng.random()
        if r < 0.45:
            scores[(a, b)] = F(rng.randint(1, 12), rng.choice([4, 8, 16]))
            npos += 1
        elif r < 0.8:
            scores[(a, b)] = -F(rng.randint(1, 12), rng.choice([4, 8, 16]))
            nneg += 1
    if npos < 2 or nneg < 1:
        return None
    return Subnetwork(nodes=nodes, scores=scores)


def test_enumerate_path_single():
    sm = score_matrix(build_network([("a", "b", 1), ("b", "c", 1)]))
    subs = list(enumerate_subnetworks(ResidualScores.fresh(sm), max_size=3))
    assert len(subs) == 1
    assert subs[0].nodes == (0, 1, 2)


def test_enumerate_dyad_empty():
    sm = score_matrix(build_network([("a", "b", 1)]))
    assert list(enumerate_subnetworks(ResidualScores.fresh(sm), max_size=6)) == []


def test_enumerate_all_positive_empty():
    # 3-clique with nothing negative: synthetic all-positive scores
    sm = ScoreMatrix(n=3, s={(0, 1): F(1), (0, 2): F(1), (1, 2): F(1)}, d=(F(0),) * 3)
    assert list(enumerate_subnetworks(ResidualScores.fresh(sm), max_size=3)) == []


def test_enumerate_unique_and_complete():
    """Extension enumeration agrees with brute-force subset filtering."""
    for seed in range(8):
        net = random_network(seed, n=7, p=0.45)
        sm = score_matrix(net)
        res = ResidualScores.fresh(sm)
        got = [s.nodes for s in enumerate_subnetworks(res, max_size=5, adjacency="nonzero")]
        assert len(got) == len(set(got))

        adj = [[res.num[a][b] != 0 for b in range(sm.n)] for a in range(sm.n)]

        def connected(nodes):
            seen = {nodes[0]}
            stack = [nodes[0]]
            while stack:
                u = stack.pop()
                for v in nodes:
                    if v not in seen and adj[u][v]:
                        seen.add(v)
                        stack.append(v)
            return len(seen) == len(nodes)

        expect = []
        for size in (3, 4, 5):
            for combo in itertools.combinations(range(sm.n), size):
                if not connected(combo):
                    continue
                pos = neg = 0
                for a, b in itertools.combinations(combo, 2):
                    v = res.num[a][b]
                    pos += v > 0
                    neg += v < 0
                if pos >= 2 and neg >= 1:
                    expect.append(tuple(combo))
        assert sorted(got) == sorted(expect)


def test_positive_adjacency_mode_subset():
    for seed in range(5):
        sm = score_matrix(random_network(seed, n=7, p=0.5))
        res = ResidualScores.fresh(sm)
        pos_sets = {s.nodes for s in enumerate_subnetworks(res, max_size=4, adjacency="positive")}
        all_sets = {s.nodes for s in enumerate_subnetworks(res, max_size=4, adjacency="nonzero")}
        assert pos_sets <= all_sets


def test_partial_brute_force_triangle():
    sub = Subnetwork(nodes=(0, 1, 2), scores={(0, 1): F(1, 5), (0, 2): F(3, 10), (1, 2): F(-1, 10)})
    rs = partial_brute_force(sub)
    assert rs is not None
    assert rs.q_star_best == F(2, 5)
    assert rs.upper == rs.q_star_best
    assert rs.penalty == F(1, 10)
    assert rs.witness_partition == (0, 0, 0)


def test_partial_brute_force_path_pattern():
    sub = Subnetwork(nodes=(0, 1, 2), scores={(0, 1): F(1, 4), (1, 2): F(1, 4), (0, 2): F(-1, 8)})
    rs = partial_brute_force(sub)
    assert rs.q_star_best == F(3, 8)
    assert rs.penalty == F(1, 8)


def test_star_without_negative_has_zero_penalty():
    sub = Subnetwork(nodes=(0, 1, 2), scores={(0, 1): F(3, 10), (0, 2): F(3, 10)})
    rs = partial_brute_force(sub)
    assert rs is not None
    assert rs.penalty == 0


def test_exclusion_cap_returns_unresolved():
    sub = random_subnetwork(2, 6)
    assert sub is not None
    assert partial_brute_force(sub, exclusion_cap=-1) is None


def test_oracle_equivalence_random_subnetworks():
    checked = 0
    seed = 0
    while checked < 60:
        seed += 1
        sub = random_subnetwork(seed, 3 + seed % 4)
        if sub is None:
            continue
        rs = partial_brute_force(sub)
        if rs is None:
            continue
        assert rs.q_star_best == exhaustive_best(sub), f"seed {seed}"
        checked += 1


def test_discard_rule_never_changes_result():
    for seed in range(30):
        sub = random_subnetwork(seed + 1000, 5)
        if sub is None:
            continue
        rs = partial_brute_force(sub)
        rs_all = partial_brute_force(sub, _disable_discard=True)
        if rs is None or rs_all is None:
            continue
        assert rs.q_star_best == rs_all.q_star_best
        assert rs.penalty == rs_all.penalty


def test_reduce_triangle_canonical():
    sub = Subnetwork(nodes=(0, 1, 2), scores={(0, 1): F(1, 5), (0, 2): F(3, 10), (1, 2): F(-1, 10)})
    rs = partial_brute_force(sub)
    red = reduce_weights(rs)
    assert red.scores == {(0, 1): F(1, 10), (0, 2): F(1, 10), (1, 2): F(-1, 10)}


def test_reduce_path_pattern():
    sub = Subnetwork(nodes=(0, 1, 2), scores={(0, 1): F(1, 4), (1, 2): F(1, 4), (0, 2): F(-1, 8)})
    rs = partial_brute_force(sub)
    red = reduce_weights(rs)
    assert red.scores == {(0, 1): F(1, 8), (1, 2): F(1, 8), (0, 2): F(-1, 8)}


def test_reduce_fixed_point():
    sub = Subnetwork(nodes=(0, 1, 2), scores={(0, 1): F(1, 10), (0, 2): F(1, 10), (1, 2): F(-1, 10)})
    rs = partial_brute_force(sub)
    red = reduce_weights(rs)
    assert red.scores == sub.scores


def test_reduction_preserves_penalty_and_definition_bounds():
    checked = 0
    seed = 0
    while checked < 40:
        seed += 1
        sub = random_subnetwork(seed + 500, 3 + seed % 4)
        if sub is None:
            continue
        rs = partial_brute_force(sub)
        if rs is None or rs.penalty <= 0:
            continue
        red = reduce_weights(rs)
        for q, v in red.scores.items():
            orig = sub.scores[q]
            assert v * orig > 0
            assert abs(v) <= abs(orig)
        rcheck = partial_brute_force(red)
        assert rcheck is not None
        assert F(sum(v for v in red.scores.values() if v > 0)) - rcheck.q_star_best >= rs.penalty
        checked += 1
