"""Shared helpers: seeded random networks and convention-independent oracles."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from modcert.graph import Network, build_network

WEIGHT_CHOICES = [1, 1, 1, 2, 3, Fraction(1, 2), Fraction(3, 2), Fraction(5, 4)]


def random_network(seed: int, n: int | None = None, directed: bool = False,
                   p: float = 0.5, rational_weights: bool = True) -> Network:
    """Random weighted network with at least one edge, deterministic per seed."""
    rng = random.Random(seed)
    if n is None:
        n = rng.randint(3, 8)
    labels = [f"v{i}" for i in range(n)]
    triples = []
    for a in range(n):
        rng_b = range(n) if directed else range(a + 1, n)
        for b in rng_b:
            if a == b:
                continue
            if rng.random() < p:
                w = rng.choice(WEIGHT_CHOICES) if rational_weights else 1
                triples.append((labels[a], labels[b], w))
    present = {lab for t in triples for lab in t[:2]}
    for i, lab in enumerate(labels):
        if lab not in present:
            triples.append((labels[(i + 1) % n], lab, 1))
    return build_network(triples, directed=directed)


def modularity_ordered(net: Network, assignment) -> Fraction:
    """Ordered-pair modularity straight from the raw scores; shares no code
    with the ScoreMatrix implementation."""
    T = net.total_weight
    total = Fraction(0)
    for a in range(net.n):
        for b in range(net.n):
            if assignment[a] == assignment[b]:
                q = net.weight(a, b) / T - net.w_out(a) * net.w_in(b) / (T * T)
                total += q
    return total


def random_assignment(rng: random.Random, n: int, groups: int | None = None):
    g = groups or rng.randint(1, n)
    return [rng.randrange(g) for _ in range(n)]


def adjusted_rand_index(a, b) -> float:
    """Plain ARI from the pair-counting contingency table."""
    from collections import Counter
    from math import comb

    ct = Counter(zip(a, b))
    rows = Counter(a)
    cols = Counter(b)
    n = len(a)
    sum_ij = sum(comb(v, 2) for v in ct.values())
    sum_a = sum(comb(v, 2) for v in rows.values())
    sum_b = sum(comb(v, 2) for v in cols.values())
    expected = sum_a * sum_b / comb(n, 2)
    max_index = (sum_a + sum_b) / 2
    if max_index == expected:
        return 1.0
    return (sum_ij - expected) / (max_index - expected)
