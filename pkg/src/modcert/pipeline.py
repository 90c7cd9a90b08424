"""End-to-end certification: optimize, bound, tighten, emit, self-verify."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import __version__ as _version
from .chains import (
    DEFAULT_PATH_BUDGET,
    ResidualScores,
    find_penalized_chains,
    greedy_certify,
)
from .document import CertificateDocument, build_document, document_to_certificate
from .graph import Network
from .lp import CertComponent, combine
from .optimizer import OptimizerConfig, optimize
from .scores import score_matrix, trivial_upper_bound
from .subnets import enumerate_subnetworks, partial_brute_force, reduce_weights
from .verify import verify_certificate

METHODS = ("chains", "subnets", "both")
DEFAULT_POOL_CHAIN_LENGTH = 4


class CertificationError(RuntimeError):
    """Emitted certificate failed its own verification (internal bug guard)."""


@dataclass
class BoundResult:
    components: list[tuple[CertComponent, Fraction]]  # (component, lambda)
    bound: Fraction
    greedy_bound: Fraction
    chains_applied: int
    pool_size: int


def chain_bound(
    sm,
    achieved: Fraction | None = None,
    strategy: str = "best",
    seed: int = 0,
    tries_per_k: int = 1,
    mixed_prob: float = 0.5,
    path_budget: int = DEFAULT_PATH_BUDGET,
    pool_chain_length: int = DEFAULT_POOL_CHAIN_LENGTH,
) -> BoundResult:
    """Chain-based bound: greedy accumulation plus exact re-weighting.

    The greedy pass follows the residual trajectory with unit multipliers.
    If a gap remains, the chains it found are pooled with every penalized
    chain of the fresh matrix up to pool_chain_length nodes and the
    multipliers re-optimized exactly; the result can only tighten, and stops
    early once the bound matches the achieved value.
    """
    cert = greedy_certify(
        sm, strategy=strategy, seed=seed, tries_per_k=tries_per_k,
        mixed_prob=mixed_prob, path_budget=path_budget,
    )
    components = [(CertComponent.from_chain(ch), Fraction(1)) for ch in cert.chains]
    result = BoundResult(
        components=components,
        bound=cert.bound,
        greedy_bound=cert.bound,
        chains_applied=len(cert.chains),
        pool_size=len(cert.chains),
    )
    if achieved is not None and cert.bound == achieved:
        return result

    pool = [comp for comp, _ in components]
    seen = {comp.dedupe_key() for comp in pool}
    fresh = ResidualScores.fresh(sm)
    for k in range(3, max(3, pool_chain_length) + 1):
        chains, _ = find_penalized_chains(fresh, k, path_budget)
        added = False
        for ch in chains:
            comp = CertComponent.from_chain(ch)
            key = comp.dedupe_key()
            if key not in seen:
                seen.add(key)
                pool.append(comp)
                added = True
        if not added:
            continue
        combined = combine(pool, sm, achieved=achieved)
        if combined.bound < result.bound:
            result.components = [(c, lam) for c, lam in combined.components]
            result.bound = combined.bound
        result.pool_size = len(pool)
        if achieved is not None and result.bound == achieved:
            break
    return result


def certify(
    net: Network,
    method: str = "both",
    max_subnet_size: int = 6,
    seed: int = 0,
    strategy: str = "best",
    tries_per_k: int = 1,
    restarts: int = 8,
    subnet_budget: int | None = None,
    path_budget: int = DEFAULT_PATH_BUDGET,
    pool_chain_length: int = DEFAULT_POOL_CHAIN_LENGTH,
    mixed_prob: float = 0.5,
) -> CertificateDocument:
    """Produce a verified certificate document for a network.

    Runs the partition search, then the chain certifier, and, if a gap
    remains and the method allows, resolves small subnetworks and
    re-optimizes all multipliers by LP. Budget exhaustion weakens the bound
    but never its validity. The emitted document is verified before return.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    sm = score_matrix(net)
    achieved = optimize(sm, OptimizerConfig(seed=seed, restarts=restarts))

    provenance = {
        "tool": f"modcert {_version}",
        "method": method,
        "seed": seed,
        "strategy": strategy,
        "tries_per_k": tries_per_k,
        "restarts": restarts,
        "max_subnet_size": max_subnet_size if method != "chains" else None,
    }

    components: list[tuple[CertComponent, Fraction]] = []
    bound = trivial_upper_bound(sm)

    if method in ("chains", "both"):
        chain_result = chain_bound(
            sm,
            achieved=achieved.modularity,
            strategy=strategy,
            seed=seed,
            tries_per_k=tries_per_k,
            mixed_prob=mixed_prob,
            path_budget=path_budget,
            pool_chain_length=pool_chain_length,
        )
        components = chain_result.components
        bound = chain_result.bound
        provenance["greedy_chain_bound"] = f"{chain_result.greedy_bound.numerator}/{chain_result.greedy_bound.denominator}"

    if method in ("subnets", "both") and bound != achieved.modularity:
        if max_subnet_size < 3:
            raise ValueError("max_subnet_size must be >= 3")
        pool = [comp for comp, _ in components]
        seen = {comp.dedupe_key() for comp in pool}
        res = ResidualScores.fresh(sm)
        spent = 0
        for size in range(3, max_subnet_size + 1):
            grown = False
            for sub in enumerate_subnetworks(res, max_size=size, adjacency="positive"):
                if len(sub.nodes) != size:
                    continue
                if subnet_budget is not None and spent >= subnet_budget:
                    break
                spent += 1
                resolved = partial_brute_force(sub)
                if resolved is None or resolved.penalty <= 0:
                    continue
                reduced = reduce_weights(resolved)
                comp = CertComponent.from_subnetwork(reduced, resolved.penalty)
                key = comp.dedupe_key()
                if key not in seen:
                    seen.add(key)
                    pool.append(comp)
                    grown = True
            if grown:
                combined = combine(pool, sm, achieved=achieved.modularity)
                if combined.bound < bound:
                    components = list(combined.components)
                    bound = combined.bound
                if bound == achieved.modularity:
                    break
            if subnet_budget is not None and spent >= subnet_budget:
                break
        provenance["subnetworks_examined"] = spent

    status = "optimal-proved" if bound == achieved.modularity else "gap"
    doc = build_document(
        net=net,
        achieved=achieved,
        components=components,
        bound=bound,
        status=status,
        provenance=provenance,
    )
    ok, why = verify_certificate(document_to_certificate(doc, net), sm)
    if not ok:
        raise CertificationError(f"emitted certificate failed verification: {why}")
    return doc
