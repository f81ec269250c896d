"""Stable JSON and DOT forms of subspaces, apartments, certificates, graphs and search reports.

Subspaces are stored as their canonical RREF rows, so equal subspaces give
equal JSON and files can be compared byte for byte.
"""
import logging
from importlib.metadata import PackageNotFoundError, version
from typing import Any, Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from .apartments import Apartment, EmbeddingMap
from .certificates import Certificate
from .errors import DimensionMismatch, PreconditionError
from .grassmann import GrassmannGraph, level_of
from .johnson import SignedSet, signed_key, signed_set, sorted_signed
from .polar import Frame, PolarSpace, SingularSubspace, build_polar_space, subspace_key
from .search import SearchReport
from .theorems import Verdict

logger = logging.getLogger("polaris.serialize")

try:
    __version__ = version("polaris")
except PackageNotFoundError:
    __version__ = "0.0.0"


def header(command: str, seed: Optional[int] = None) -> Dict[str, Any]:
    return {"polaris": {"version": __version__, "command": command, "seed": seed}}


# subspaces and vertices


def subspace_to_json(sub: SingularSubspace) -> Dict[str, Any]:
    return {"p": sub.p, "ambient": sub.ambient_dim, "rows": [list(r) for r in sub.rows]}


def subspace_from_json(polar: PolarSpace, data: Dict[str, Any]) -> SingularSubspace:
    """Rebuild a subspace of `polar`; rows are re-reduced and checked to be singular."""
    if data["p"] != polar.p or data["ambient"] != polar.ambient_dim:
        raise DimensionMismatch(
            f"Subspace over GF({data['p']})^{data['ambient']} does not fit GF({polar.p})^{polar.ambient_dim}"
        )
    if not data["rows"]:
        return polar.empty()
    return polar.singular(data["rows"])


def vertex_to_json(v: SignedSet) -> List[int]:
    return sorted_signed(v)


def vertex_from_json(data: Iterable[int]) -> SignedSet:
    return signed_set(*(int(j) for j in data))


def assign_to_json(assign: Dict[SignedSet, SingularSubspace]) -> List[Dict[str, Any]]:
    return [
        {"vertex": vertex_to_json(v), "subspace": subspace_to_json(assign[v])}
        for v in sorted(assign, key=signed_key)
    ]


def assign_from_json(polar: PolarSpace, data: Sequence[Dict[str, Any]]) -> Dict[SignedSet, SingularSubspace]:
    assign = {}
    for item in data:
        v = vertex_from_json(item["vertex"])
        if v in assign:
            raise PreconditionError(f"Vertex {sorted_signed(v)} is assigned twice", v)
        assign[v] = subspace_from_json(polar, item["subspace"])
    return assign


# apartments, certificates, verdicts


def apartment_to_json(a: Apartment) -> Dict[str, Any]:
    return {
        "k": a.k,
        "m": a.m,
        "l": a.l,
        "base": subspace_to_json(a.base),
        "members": assign_to_json(a.labels),
    }


def certificate_to_json(cert: Certificate) -> Dict[str, Any]:
    return {
        "N": subspace_to_json(cert.N),
        "Q": {str(j): subspace_to_json(cert.Q[j]) for j in sorted_signed(cert.Q)},
        "spanning_table": [
            [vertex_to_json(v), list(cert.spanning_table[v])] for v in sorted(cert.spanning_table, key=signed_key)
        ],
        "l": cert.l,
        "m": cert.m,
        "k": cert.k,
    }


def certificate_from_json(polar: PolarSpace, data: Dict[str, Any]) -> Certificate:
    """Rebuild a certificate; the frame is recovered by projecting the Q's onto the residue of N."""
    N = subspace_from_json(polar, data["N"])
    Q = {int(j): subspace_from_json(polar, sub) for j, sub in data["Q"].items()}
    l = int(data["l"])
    quotient = polar.quotient(N)
    frame = Frame.from_pairs([(quotient.project_point(Q[t]), quotient.project_point(Q[-t])) for t in range(1, l + 1)])
    table = {vertex_from_json(v): tuple(labels) for v, labels in data["spanning_table"]}
    return Certificate(N, Q, frame, table, l, int(data["m"]), int(data["k"]))


def verdict_to_json(verdict: Verdict) -> Dict[str, Any]:
    out: Dict[str, Any] = {
        "theorem": verdict.theorem,
        "accepted": verdict.accepted,
        "clause": verdict.clause,
        "message": verdict.message,
    }
    if verdict.certificate is not None:
        out["certificate"] = certificate_to_json(verdict.certificate)
        out["N_dim"] = verdict.certificate.N.proj_dim
    return out


# verifier inputs


def verify_input_to_json(
        polar: PolarSpace,
        members: Iterable[SingularSubspace],
        *,
        m: Optional[int] = None,
        l: Optional[int] = None,
        embedding: Optional[EmbeddingMap] = None,
    ) -> Dict[str, Any]:
    members = sorted(set(members), key=subspace_key)
    data: Dict[str, Any] = {
        "kind": polar.kind,
        "n": polar.rank,
        "p": polar.p,
        "k": level_of(members),
        "m": m,
        "l": l,
        "members": [subspace_to_json(x) for x in members],
    }
    if embedding is not None:
        data["assign"] = assign_to_json(embedding.assign)
    return data


def verify_input_from_json(
        data: Dict[str, Any],
    ) -> Tuple[PolarSpace, Dict[str, Optional[int]], List[SingularSubspace], Optional[EmbeddingMap]]:
    """(polar space, {k, m, l}, members, embedding or None) from a verifier input document."""
    for key in ("kind", "n", "p", "members"):
        if key not in data:
            raise ValueError(f"Verifier input is missing {key!r}")
    polar = build_polar_space(data["kind"], int(data["n"]), int(data["p"]))
    members = [subspace_from_json(polar, sub) for sub in data["members"]]
    params = {key: (None if data.get(key) is None else int(data[key])) for key in ("k", "m", "l")}
    if members and params["k"] is not None and level_of(members) != params["k"]:
        raise DimensionMismatch(f"Members have dimension {level_of(members)}, the input says k={params['k']}")
    embedding = None
    if data.get("assign"):
        if params["l"] is None or params["m"] is None:
            raise ValueError("An assignment needs l and m")
        embedding = EmbeddingMap(polar, params["l"], params["m"], level_of(members), assign_from_json(polar, data["assign"]))
    return polar, params, members, embedding


# graphs


def subspace_label(sub: SingularSubspace) -> str:
    return "|".join("".join(str(x) for x in row) for row in sub.rows)


def vertex_label(v: Hashable) -> str:
    if isinstance(v, frozenset):
        return "{" + ",".join(str(j) for j in sorted_signed(v)) + "}"
    if isinstance(v, tuple):
        return "".join(str(x) for x in v)
    return str(v)


def graph_order(graph: nx.Graph) -> List[Hashable]:
    """Stable vertex order: signed-set order for PJ graphs, natural order otherwise."""
    nodes = list(graph.nodes)
    if nodes and isinstance(nodes[0], frozenset):
        return sorted(nodes, key=signed_key)
    return sorted(nodes)


def _export_parts(
        graph: nx.Graph,
        order: Sequence[Hashable],
        label: Callable[[Hashable], str],
    ) -> Tuple[List[str], List[Tuple[int, int]]]:
    ids = {v: i for i, v in enumerate(order)}
    edges = sorted(tuple(sorted((ids[a], ids[b]))) for a, b in graph.edges)
    return [label(v) for v in order], edges


def graph_to_json(graph: nx.Graph, order: Sequence[Hashable], label: Callable[[Hashable], str]) -> Dict[str, Any]:
    labels, edges = _export_parts(graph, order, label)
    adjacency: Dict[str, List[int]] = {str(i): [] for i in range(len(labels))}
    for a, b in edges:
        adjacency[str(a)].append(b)
        adjacency[str(b)].append(a)
    return {
        "name": graph.graph.get("name", ""),
        "vertices": labels,
        "adjacency": {key: sorted(values) for key, values in adjacency.items()},
        "edges": [list(e) for e in edges],
    }


def graph_to_dot(graph: nx.Graph, order: Sequence[Hashable], label: Callable[[Hashable], str]) -> str:
    """Undirected DOT with integer ids in `order` and no layout attributes."""
    labels, edges = _export_parts(graph, order, label)
    name = graph.graph.get("name", "G")
    lines = [f'graph "{name}" {{']
    lines.extend(f'  {i} [label="{text}"];' for i, text in enumerate(labels))
    lines.extend(f"  {a} -- {b};" for a, b in edges)
    lines.append("}")
    return "\n".join(lines) + "\n"


def grassmann_export(gg: GrassmannGraph, fmt: str) -> Any:
    gg.graph.graph.setdefault("name", f"Gamma_{gg.k}({gg.polar.kind},{gg.polar.rank},{gg.polar.p})")
    order = list(range(len(gg.vertices)))

    def label(i: int) -> str:
        return subspace_label(gg.vertices[i])

    return graph_to_dot(gg.graph, order, label) if fmt == "dot" else graph_to_json(gg.graph, order, label)


def abstract_export(graph: nx.Graph, fmt: str) -> Any:
    order = graph_order(graph)
    return graph_to_dot(graph, order, vertex_label) if fmt == "dot" else graph_to_json(graph, order, vertex_label)


# search reports


def search_report_to_json(report: SearchReport) -> Dict[str, Any]:
    return {
        "pattern": report.pattern.name,
        "target": report.target,
        "k": report.k,
        "seed": report.seed,
        "trials": report.trials,
        "attempted": report.attempted,
        "truncated": report.truncated,
        "findings": [
            {
                "trial": finding.trial,
                "assign": assign_to_json(finding.assign),
                "info": dict(finding.info),
            }
            for finding in report.findings
        ],
    }
