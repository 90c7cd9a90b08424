"""Certificate documents: a lossless, human-diffable JSON serialization.

Every rational is written as an explicit "numerator/denominator" string so a
parsed document reproduces the exact values; a certificate whose meaning
depended on float parsing would not be a proof.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction

from .graph import Network
from .lp import CertComponent, CombinedCertificate
from .scores import Partition

FORMAT_VERSION = 1


def frac_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def parse_frac(s: str) -> Fraction:
    num, _, den = s.partition("/")
    return Fraction(int(num), int(den) if den else 1)


def network_fingerprint(net: Network) -> dict:
    """Stable identity of a network: counts plus a hash of its canonical form."""
    lines = [f"directed={int(net.directed)}"]
    for (a, b), w in sorted(net.edges.items()):
        lines.append(f"{net.node_labels[a]}\t{net.node_labels[b]}\t{frac_str(w)}")
    blob = "\n".join(lines).encode()
    return {
        "nodes": net.n,
        "edges": len(net.edges),
        "sha256": hashlib.sha256(blob).hexdigest(),
    }


@dataclass
class CertificateDocument:
    fingerprint: dict
    achieved_communities: list[list[str]]
    achieved_modularity: Fraction
    bound: Fraction
    components: list[dict]  # serialized form, labels not ids
    status: str
    gap: Fraction
    provenance: dict
    format_version: int = FORMAT_VERSION

    def to_json_dict(self) -> dict:
        return {
            "format_version": self.format_version,
            "network": dict(self.fingerprint),
            "achieved": {
                "communities": [list(c) for c in self.achieved_communities],
                "modularity": frac_str(self.achieved_modularity),
            },
            "bound": frac_str(self.bound),
            "components": [dict(c) for c in self.components],
            "status": self.status,
            "gap": frac_str(self.gap),
            "provenance": dict(self.provenance),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json_dict(cls, data: dict) -> "CertificateDocument":
        if data.get("format_version") != FORMAT_VERSION:
            raise ValueError(f"unsupported certificate format: {data.get('format_version')!r}")
        return cls(
            fingerprint=dict(data["network"]),
            achieved_communities=[list(c) for c in data["achieved"]["communities"]],
            achieved_modularity=parse_frac(data["achieved"]["modularity"]),
            bound=parse_frac(data["bound"]),
            components=[dict(c) for c in data["components"]],
            status=data["status"],
            gap=parse_frac(data["gap"]),
            provenance=dict(data["provenance"]),
        )

    @classmethod
    def loads(cls, text: str) -> "CertificateDocument":
        return cls.from_json_dict(json.loads(text))


def serialize_component(comp: CertComponent, lam: Fraction, labels) -> dict:
    entry = {
        "kind": comp.kind,
        "nodes": [labels[v] for v in comp.nodes],
        "penalty": frac_str(comp.penalty),
        "lambda": frac_str(lam),
    }
    if comp.kind == "subnetwork":
        entry["scores"] = [
            [labels[a], labels[b], frac_str(v)] for (a, b), v in sorted(comp.loads.items())
        ]
    return entry


def deserialize_component(entry: dict, label_to_id: dict) -> tuple[CertComponent, Fraction]:
    nodes = tuple(label_to_id[lab] for lab in entry["nodes"])
    lam = parse_frac(entry["lambda"])
    penalty = parse_frac(entry["penalty"])
    if entry["kind"] == "chain":
        from .chains import Chain

        comp = CertComponent.from_chain(Chain(nodes=nodes, penalty=penalty))
    elif entry["kind"] == "subnetwork":
        loads = {}
        for la, lb, val in entry["scores"]:
            a, b = label_to_id[la], label_to_id[lb]
            loads[(a, b) if a < b else (b, a)] = parse_frac(val)
        comp = CertComponent(kind="subnetwork", nodes=nodes, loads=loads, penalty=penalty)
    else:
        raise ValueError(f"unknown component kind: {entry['kind']!r}")
    return comp, lam


def build_document(
    net: Network,
    achieved: Partition,
    components: list[tuple[CertComponent, Fraction]],
    bound: Fraction,
    status: str,
    provenance: dict,
) -> CertificateDocument:
    labels = net.node_labels
    communities = [[labels[v] for v in group] for group in achieved.communities()]
    return CertificateDocument(
        fingerprint=network_fingerprint(net),
        achieved_communities=communities,
        achieved_modularity=achieved.modularity,
        bound=bound,
        components=[
            serialize_component(comp, lam, labels) for comp, lam in components if lam != 0
        ],
        status=status,
        gap=bound - achieved.modularity,
        provenance=provenance,
    )


def document_to_certificate(doc: CertificateDocument, net: Network) -> CombinedCertificate:
    """Rebuild a verifiable certificate object from a parsed document."""
    label_to_id = net.label_index()
    comps = []
    for entry in doc.components:
        comps.append(deserialize_component(entry, label_to_id))
    total = sum((lam * comp.penalty for comp, lam in comps), Fraction(0))
    return CombinedCertificate(
        components=tuple(comps),
        trivial_bound=doc.bound + total,
        total_penalty=total,
        bound=doc.bound,
        status=doc.status,
        gap=doc.gap,
    )
