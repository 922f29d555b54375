import sys
from pathlib import Path

import networkx as nx
from loguru import logger
from pydantic import ValidationError

from app.core.errors import QbafFormatError, UnknownArgumentError
from app.models.qbaf import GraphInfo, Qbaf
from app.schemas.qbaf import QbafDocument


def _describe(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        location = ".".join(str(part) for part in item["loc"])
        parts.append(f"{location}: {item['msg']}" if location else item["msg"])
    return "; ".join(parts)


def parse_qbaf(text: str | bytes) -> Qbaf:
    try:
        document = QbafDocument.model_validate_json(text)
        q = document.to_qbaf()
    except ValidationError as e:
        message = _describe(e)
        logger.error(f"Rejected framework document: {message}")
        raise QbafFormatError(message) from e
    logger.info(f"Parsed framework with {q.size} arguments and {q.edge_count} edges")
    return q


def serialize_qbaf(q: Qbaf) -> str:
    return QbafDocument.from_qbaf(q).model_dump_json(indent=2) + "\n"


def load_qbaf(path: str | Path) -> Qbaf:
    """Read a framework from a file, or from stdin when path is '-'."""
    if str(path) == "-":
        return parse_qbaf(sys.stdin.read())
    return parse_qbaf(Path(path).read_bytes())


def save_qbaf(q: Qbaf, path: str | Path) -> None:
    if str(path) == "-":
        sys.stdout.write(serialize_qbaf(q))
        return
    Path(path).write_text(serialize_qbaf(q), encoding="utf-8", newline="\n")


def parents(q: Qbaf, argument_id: str) -> tuple[tuple[str, ...], tuple[str, ...]]:
    if argument_id not in q:
        raise UnknownArgumentError(argument_id)
    return q.attackers(argument_id), q.supporters(argument_id)


def to_digraph(q: Qbaf) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(q.ids)
    graph.add_edges_from(q.attacks)
    graph.add_edges_from(q.supports)
    return graph


def _single_cycle_components(q: Qbaf, sccs: list[tuple[str, ...]]) -> bool:
    component = {}
    for index, members in enumerate(sccs):
        for member in members:
            component[member] = index

    # attack and support on the same pair are two distinct edges here
    inner_out = dict.fromkeys(q.ids, 0)
    inner_in = dict.fromkeys(q.ids, 0)
    for source, target, _ in q.edges():
        if component[source] == component[target]:
            inner_out[source] += 1
            inner_in[target] += 1

    for members in sccs:
        if len(members) == 1 and inner_out[members[0]] == 0:
            continue
        if any(inner_in[m] != 1 or inner_out[m] != 1 for m in members):
            return False
    return True


def analyze_graph(q: Qbaf) -> GraphInfo:
    graph = to_digraph(q)
    sccs = sorted(
        (tuple(sorted(members, key=q.position)) for members in nx.strongly_connected_components(graph)),
        key=lambda members: q.position(members[0]),
    )
    acyclic = nx.is_directed_acyclic_graph(graph)
    topo_order = tuple(nx.lexicographical_topological_sort(graph, key=q.position)) if acyclic else None
    return GraphInfo(
        acyclic=acyclic,
        topo_order=topo_order,
        max_in_degree=max((q.in_degree(a) for a in q.ids), default=0),
        sccs=tuple(sccs),
        at_most_one_cycle=_single_cycle_components(q, sccs),
    )
