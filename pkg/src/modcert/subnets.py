"""Small-subnetwork resolution: proven penalties beyond what chains capture.

A subnetwork is a node subset carrying per-pair scores no larger in magnitude
than (and matching the sign of) the scores it was cut from. Resolving one
means proving the exact maximum any partition of it can collect; the shortfall
against its all-positives sum is a penalty that can be charged against the
whole network. Reducing one shrinks its scores to the minimum weight that
still proves the same penalty, so that many subnetworks can be combined.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .chains import ResidualScores
from .scores import Pair

DEFAULT_MAX_SIZE = 6


@dataclass
class Subnetwork:
    nodes: tuple[int, ...]
    scores: dict[Pair, Fraction]

    def positive_pairs(self) -> list[Pair]:
        return sorted(p for p, v in self.scores.items() if v > 0)

    def negative_pairs(self) -> list[Pair]:
        return sorted(p for p, v in self.scores.items() if v < 0)

    def positive_total(self) -> Fraction:
        return sum((v for v in self.scores.values() if v > 0), Fraction(0))


@dataclass
class PartitionRecord:
    """One evaluated exclusion pattern: which pairs paid for it, and how much."""

    assignment: tuple[int, ...]
    contributing: tuple[Pair, ...]
    value: Fraction


@dataclass
class ResolvedSubnetwork:
    sub: Subnetwork
    q_star_best: Fraction
    upper: Fraction
    penalty: Fraction
    witness_partition: tuple[int, ...]
    proof_partitions: tuple[PartitionRecord, ...]
    final_m: int


def enumerate_subnetworks(
    res: ResidualScores,
    max_size: int = DEFAULT_MAX_SIZE,
    adjacency: str = "nonzero",
    budget: int | None = None,
) -> Iterator[Subnetwork]:
    """Connected induced subsets of size 3..max_size, each emitted once.

    Connectivity is over nonzero residual pairs by default; pass
    adjacency="positive" to restrict to positive pairs, which provably still
    reaches every subnetwork able to carry a positive penalty (a penalty needs
    a negative pair inside a positively-connected group, and penalties add
    over positively-connected parts). Only subsets with at least one negative
    and at least two positive internal pairs are emitted. Deterministic order;
    `budget` caps the number of emitted subnetworks.
    """
    if max_size < 3:
        raise ValueError("max_size must be >= 3")
    if adjacency not in ("nonzero", "positive"):
        raise ValueError(f"unknown adjacency mode: {adjacency!r}")
    n = res.n
    adj: list[set[int]] = [set() for _ in range(n)]
    for a in range(n):
        row = res.num[a]
        for b in range(a + 1, n):
            keep = row[b] > 0 if adjacency == "positive" else row[b] != 0
            if keep:
                adj[a].add(b)
                adj[b].add(a)

    emitted = 0

    def make(sub: list[int]) -> Subnetwork | None:
        nodes = tuple(sorted(sub))
        pos = neg = 0
        scores: dict[Pair, Fraction] = {}
        for a, b in itertools.combinations(nodes, 2):
            v = res.num[a][b]
            if v:
                scores[(a, b)] = Fraction(v, res.den)
                if v > 0:
                    pos += 1
                else:
                    neg += 1
        if neg >= 1 and pos >= 2:
            return Subnetwork(nodes=nodes, scores=scores)
        return None

    # extension enumeration anchored at the smallest node id; new candidates
    # are exclusive neighbors of the just-added node, so every connected
    # subset appears exactly once
    def extend(sub: list[int], sub_set: set[int], ext: list[int], anchor: int):
        nonlocal emitted
        if budget is not None and emitted >= budget:
            return
        if len(sub) >= 3:
            cand = make(sub)
            if cand is not None:
                emitted += 1
                yield cand
                if budget is not None and emitted >= budget:
                    return
        if len(sub) == max_size:
            return
        for i, w in enumerate(ext):
            extra = []
            for u in sorted(adj[w]):
                if u <= anchor or u in sub_set:
                    continue
                if any(u in adj[x] for x in sub):
                    continue
                extra.append(u)
            sub.append(w)
            sub_set.add(w)
            yield from extend(sub, sub_set, ext[i + 1:] + extra, anchor)
            sub.pop()
            sub_set.remove(w)

    for v in range(n):
        if budget is not None and emitted >= budget:
            return
        ext0 = sorted(u for u in adj[v] if u > v)
        yield from extend([v], {v}, ext0, v)


def _scaled_scores(sub: Subnetwork) -> tuple[int, dict[Pair, int]]:
    den = 1
    for v in sub.scores.values():
        den = math.lcm(den, v.denominator)
    return den, {p: v.numerator * (den // v.denominator) for p, v in sub.scores.items()}


def partial_brute_force(
    sub: Subnetwork, exclusion_cap: int = 64, _disable_discard: bool = False
) -> ResolvedSubnetwork | None:
    """Resolve a subnetwork by excluding m positive pairs and merging the rest.

    For m = 0, 1, ... every m-subset of positive pairs is dropped, the nodes
    joined by remaining positive pairs are merged and the resulting partition
    scored (kept positives plus negatives caught inside merged groups).
    Exclusion patterns whose dropped pair ends up inside one merged group
    duplicate a smaller-m pattern and are discarded. The search stops as
    proven-complete once even the cheapest m+1 exclusions cost more than the
    best value found; if m reaches exclusion_cap first the subnetwork stays
    unresolved and None is returned.
    """
    nodes = sub.nodes
    local = {v: i for i, v in enumerate(nodes)}
    nn = len(nodes)
    den, scaled = _scaled_scores(sub)
    positives = sorted((p for p, v in scaled.items() if v > 0), key=lambda p: (scaled[p], p))
    negatives = [p for p, v in scaled.items() if v < 0]
    pos_total = sum(scaled[p] for p in positives)
    pos_sorted_vals = [scaled[p] for p in positives]  # ascending

    singleton = tuple(range(nn))
    best_val = 0
    best_assignment = singleton
    records: list[PartitionRecord] = []

    def evaluate(excluded: tuple[Pair, ...]) -> None:
        nonlocal best_val, best_assignment
        parent = list(range(nn))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        excl = set(excluded)
        for p in positives:
            if p not in excl:
                a, b = local[p[0]], local[p[1]]
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[rb] = ra
        # discard: an excluded pair that still lands inside one group was
        # already covered with fewer exclusions
        if not _disable_discard:
            for p in excluded:
                if find(local[p[0]]) == find(local[p[1]]):
                    return
        value = pos_total - sum(scaled[p] for p in excluded)
        contributing = list(excluded)
        for p in negatives:
            if find(local[p[0]]) == find(local[p[1]]):
                value += scaled[p]
                contributing.append(p)
        assignment = tuple(find(i) for i in range(nn))
        records.append(
            PartitionRecord(
                assignment=assignment,
                contributing=tuple(sorted(contributing)),
                value=Fraction(value, den),
            )
        )
        if value > best_val:
            best_val = value
            best_assignment = assignment

    resolved = False
    final_m = 0
    for m in range(0, len(positives) + 1):
        if m > exclusion_cap:
            return None
        for combo in itertools.combinations(positives, m):
            evaluate(combo)
        final_m = m
        remaining = pos_total - sum(pos_sorted_vals[: m + 1])
        if remaining <= best_val:
            resolved = True
            break
    if not resolved:
        return None

    q_star = Fraction(best_val, den)
    penalty = Fraction(pos_total, den) - q_star
    from .scores import Partition

    return ResolvedSubnetwork(
        sub=sub,
        q_star_best=q_star,
        upper=q_star,
        penalty=penalty,
        witness_partition=Partition.canonical_assignment(best_assignment),
        proof_partitions=tuple(records),
        final_m=final_m,
    )


def _minimal_constraint_sets(rs: ResolvedSubnetwork) -> list[frozenset[Pair]]:
    """Deduplicated, inclusion-minimal contributing sets from the proof records."""
    sets = {frozenset(r.contributing) for r in rs.proof_partitions if r.contributing}
    minimal = []
    for s in sorted(sets, key=lambda s: (len(s), sorted(s))):
        if not any(t < s for t in minimal):
            minimal.append(s)
    return minimal


def reduce_weights(rs: ResolvedSubnetwork) -> Subnetwork:
    """Shrink a resolved subnetwork's scores while provably keeping its penalty.

    Minimizes total absolute score subject to: every evaluated partition still
    pays at least the penalty, and (added lazily as cutting planes) every
    (m+1)-subset of positive pairs sums to at least the penalty. The result is
    re-verified by a fresh resolution run; on any failure the original
    subnetwork is returned unchanged.
    """
    from .lp import minimize_totals_exact

    p = rs.penalty
    if p <= 0:
        return rs.sub
    sub = rs.sub
    all_pairs = sorted(sub.scores)
    ub = {q: abs(sub.scores[q]) for q in all_pairs}
    constraint_sets = _minimal_constraint_sets(rs)
    positives = sub.positive_pairs()
    m_plus_1 = rs.final_m + 1

    while True:
        x = minimize_totals_exact(all_pairs, ub, constraint_sets, p)
        if x is None:
            return rs.sub
        # lazily enforce: any m+1 positive pairs must sum to >= p
        if m_plus_1 <= len(positives):
            ranked = sorted(positives, key=lambda q: (x[q], q))
            cheapest = ranked[:m_plus_1]
            if sum(x[q] for q in cheapest) < p:
                cut = frozenset(cheapest)
                if cut in constraint_sets:
                    return rs.sub  # cannot happen with a sound solver; stay safe
                constraint_sets.append(cut)
                continue
        break

    reduced_scores = {}
    for q in all_pairs:
        if x[q] != 0:
            reduced_scores[q] = x[q] if sub.scores[q] > 0 else -x[q]
    reduced = Subnetwork(nodes=sub.nodes, scores=reduced_scores)
    check = partial_brute_force(reduced)
    if check is None or check.penalty < p:
        return rs.sub
    return reduced
