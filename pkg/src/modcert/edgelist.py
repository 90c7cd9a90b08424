"""Edge-list text parsing: "<labelA> <labelB> [weight]" per line."""

from __future__ import annotations

from .graph import GraphError, Network, as_fraction, build_network


def parse_edge_list(text: str, directed: bool = False) -> Network:
    """Parse an edge list; weights default to 1, decimals are exact.

    '#' starts a comment (full line or trailing), blank lines are ignored.
    Malformed lines raise GraphError naming the line number.
    """
    triples = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) == 2:
            la, lb = parts
            w = 1
        elif len(parts) == 3:
            la, lb, tok = parts
            try:
                w = as_fraction(tok)
            except GraphError:
                raise GraphError(f"line {lineno}: bad weight {tok!r}") from None
        else:
            raise GraphError(f"line {lineno}: expected 2 or 3 fields, got {len(parts)}")
        if w < 0:
            raise GraphError(f"line {lineno}: negative weight {w}")
        triples.append((la, lb, w))
    if not triples:
        raise GraphError("no edges in input")
    return build_network(triples, directed=directed)
