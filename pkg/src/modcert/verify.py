"""Independent certificate checking.

Deliberately shares no code with certificate construction: permissibility is
re-accumulated pair by pair, chain penalties are re-derived from the min rule,
and subnetwork penalties are re-proven by enumerating every partition of the
component from scratch. A certificate that passes here is a proof regardless
of how it was produced.
"""

from __future__ import annotations

from fractions import Fraction

from .chains import ChainCertificate
from .lp import CertComponent, CombinedCertificate
from .scores import Pair, ScoreMatrix, pair_key

MAX_EXHAUSTIVE_NODES = 12


class Violation:
    PERMISSIBILITY = "permissibility"
    COMPONENT_PENALTY = "component-penalty"
    BOUND_ARITHMETIC = "bound-arithmetic"


def _normalize(cert) -> tuple[list[tuple[CertComponent, Fraction]], Fraction]:
    """(component, lambda) pairs plus the claimed bound, for either certificate kind."""
    if isinstance(cert, ChainCertificate):
        comps = [(CertComponent.from_chain(ch), Fraction(1)) for ch in cert.chains]
        return comps, cert.bound
    if isinstance(cert, CombinedCertificate):
        return list(cert.components), cert.bound
    raise TypeError(f"cannot verify object of type {type(cert).__name__}")


def _check_permissibility(components, sm: ScoreMatrix) -> str | None:
    loads: dict[Pair, Fraction] = {}
    for comp, lam in components:
        if lam < 0:
            return f"{Violation.PERMISSIBILITY}: negative multiplier {lam}"
        for q, v in comp.loads.items():
            key = pair_key(*q)
            base = sm.score(*key)
            if v * base < 0:
                return (
                    f"{Violation.PERMISSIBILITY}: load on pair {key} has sign "
                    f"{'+' if v > 0 else '-'} against score {base}"
                )
            loads[key] = loads.get(key, Fraction(0)) + lam * abs(v)
    for key in sorted(loads):
        cap = abs(sm.score(*key))
        if loads[key] > cap:
            return (
                f"{Violation.PERMISSIBILITY}: pair {key} carries load {loads[key]} "
                f"over capacity {cap}"
            )
    return None


def _chain_penalty_ok(comp: CertComponent) -> bool:
    nodes = comp.nodes
    if len(nodes) < 3 or len(set(nodes)) != len(nodes):
        return False
    interior = []
    for u, v in zip(nodes, nodes[1:]):
        val = comp.loads.get(pair_key(u, v))
        if val is None or val <= 0:
            return False
        interior.append(val)
    closing = comp.loads.get(pair_key(nodes[0], nodes[-1]))
    if closing is None or closing >= 0:
        return False
    return comp.penalty <= min(min(interior), -closing)


def _subnetwork_penalty_ok(comp: CertComponent) -> bool:
    nodes = sorted(set(comp.nodes))
    if len(nodes) > MAX_EXHAUSTIVE_NODES:
        return False  # cannot re-prove; refuse rather than trust
    index = {v: i for i, v in enumerate(nodes)}
    nn = len(nodes)
    for a, b in comp.loads:
        if a not in index or b not in index or a == b:
            return False
    pos_total = sum((v for v in comp.loads.values() if v > 0), Fraction(0))

    best = Fraction(0)  # all-singletons collects nothing
    assignment = [0] * nn

    def rec(i: int, mx: int):
        nonlocal best
        if i == nn:
            val = Fraction(0)
            for (a, b), v in comp.loads.items():
                if assignment[index[a]] == assignment[index[b]]:
                    val += v
            if val > best:
                best = val
            return
        for c in range(mx + 2):
            assignment[i] = c
            rec(i + 1, max(mx, c))

    if nn > 1:
        rec(1, 0)
    return comp.penalty <= pos_total - best


def verify_certificate(cert, sm: ScoreMatrix) -> tuple[bool, str | None]:
    """Check a certificate against the score matrix it claims to bound.

    Conditions, in order: (a) the lambda-weighted loads stay within every
    pair's score magnitude with matching signs; (b) each component's penalty
    survives independent re-proof; (c) the claimed bound equals the trivial
    bound minus the weighted penalties. Returns (ok, first_violation).
    """
    components, claimed_bound = _normalize(cert)

    msg = _check_permissibility(components, sm)
    if msg is not None:
        return False, msg

    for i, (comp, _lam) in enumerate(components):
        if comp.penalty <= 0:
            return False, f"{Violation.COMPONENT_PENALTY}: component {i} claims penalty {comp.penalty}"
        if comp.kind == "chain":
            ok = _chain_penalty_ok(comp)
        elif comp.kind == "subnetwork":
            ok = _subnetwork_penalty_ok(comp)
        else:
            ok = False
        if not ok:
            return False, (
                f"{Violation.COMPONENT_PENALTY}: component {i} ({comp.kind} on nodes "
                f"{comp.nodes}) does not prove penalty {comp.penalty}"
            )

    # independent trivial bound: positive pair mass plus all diagonal terms
    trivial = sum((v for v in sm.s.values() if v > 0), Fraction(0)) + sum(sm.d, Fraction(0))
    total = sum((lam * comp.penalty for comp, lam in components), Fraction(0))
    if trivial - total != claimed_bound:
        return False, (
            f"{Violation.BOUND_ARITHMETIC}: claimed bound {claimed_bound} != "
            f"trivial {trivial} - penalties {total}"
        )
    return True, None
