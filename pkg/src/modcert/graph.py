"""Weighted network container with exact rational edge weights.

All weights are stored as `fractions.Fraction` so that every quantity
derived from them (edge scores, modularity values, bounds) is exact.
Networks are value objects: construct once, then treat as read-only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Iterable, Sequence


class GraphError(ValueError):
    """Invalid network input: negative weights, empty networks, bad lines."""


def as_fraction(value) -> Fraction:
    """Convert ints, Fractions, Decimals and decimal strings to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(Decimal(value))
        except InvalidOperation:
            try:
                return Fraction(value)  # "3/4" style
            except (ValueError, ZeroDivisionError):
                raise GraphError(f"unparseable weight: {value!r}") from None
    if isinstance(value, float):
        # floats are accepted verbatim (every float is an exact binary rational)
        return Fraction(value)
    raise GraphError(f"unsupported weight type: {type(value).__name__}")


@dataclass
class Network:
    """Node-labelled weighted (di)graph.

    `edges` maps ordered dense-id pairs (a, b) to the weight e(a, b).
    Undirected networks store both orientations of every edge, so the
    total weight T counts each undirected edge twice (self-loops once).
    """

    node_labels: tuple[str, ...]
    edges: dict[tuple[int, int], Fraction]
    directed: bool
    total_weight: Fraction = field(init=False)
    _w_out: tuple[Fraction, ...] = field(init=False, repr=False)
    _w_in: tuple[Fraction, ...] = field(init=False, repr=False)

    def __post_init__(self):
        n = len(self.node_labels)
        w_out = [Fraction(0)] * n
        w_in = [Fraction(0)] * n
        total = Fraction(0)
        for (a, b), w in self.edges.items():
            if w < 0:
                raise GraphError(f"negative weight on edge ({a}, {b})")
            w_out[a] += w
            w_in[b] += w
            total += w
        if total <= 0:
            raise GraphError("network has zero total weight")
        self.total_weight = total
        self._w_out = tuple(w_out)
        self._w_in = tuple(w_in)

    @property
    def n(self) -> int:
        return len(self.node_labels)

    def weight(self, a: int, b: int) -> Fraction:
        return self.edges.get((a, b), Fraction(0))

    def w_out(self, a: int) -> Fraction:
        return self._w_out[a]

    def w_in(self, b: int) -> Fraction:
        return self._w_in[b]

    def label_index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.node_labels)}


def build_network(edge_list: Iterable[Sequence], directed: bool = False) -> Network:
    """Build a Network from (labelA, labelB, weight) triples.

    Labels are interned to dense ids in first-appearance order; duplicate
    (A, B) entries are summed. Undirected input stores both orientations.
    Raises GraphError on negative weights or zero total weight.
    """
    labels: list[str] = []
    index: dict[str, int] = {}

    def intern(lab) -> int:
        lab = str(lab)
        if lab not in index:
            index[lab] = len(labels)
            labels.append(lab)
        return index[lab]

    edges: dict[tuple[int, int], Fraction] = {}
    for lineno, item in enumerate(edge_list, start=1):
        if len(item) == 2:
            la, lb = item
            w = Fraction(1)
        else:
            la, lb, raw = item
            w = as_fraction(raw)
        if w < 0:
            raise GraphError(f"negative weight in entry {lineno}: {item!r}")
        a, b = intern(la), intern(lb)
        edges[(a, b)] = edges.get((a, b), Fraction(0)) + w
        if not directed and a != b:
            edges[(b, a)] = edges.get((b, a), Fraction(0)) + w
    if not edges:
        raise GraphError("no edges given")
    net = Network(node_labels=tuple(labels), edges=edges, directed=directed)
    return net
