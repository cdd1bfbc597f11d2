"""Minimum connected subgraph construction and receiver-side reconstruction.

The transmitter expands selected entities by one hop in the shared KG and
sends only the sorted node ids. The receiver discards ids that do not exist
in its KG copy, re-induces the edges, and keeps the largest connected
component (undirected) unless the ablation switch keeps them all.
"""

from dataclasses import dataclass

from .extraction import SelectedEntities
from .kg import KnowledgeGraph, NodeId, Triple


@dataclass(frozen=True)
class Mcsg:
    nodes: frozenset[NodeId]
    seed_nodes: frozenset[NodeId]
    edges: tuple[Triple, ...]  # sorted by (subject, relation, object)


def _induced_edges(kg: KnowledgeGraph, nodes: frozenset[NodeId]) -> tuple[Triple, ...]:
    edges = [t for t in kg.triples if t.subject in nodes and t.object in nodes]
    edges.sort(key=lambda t: (t.subject, t.relation, t.object))
    return tuple(edges)


def build_mcsg(selected: SelectedEntities, kg: KnowledgeGraph) -> Mcsg:
    """Seeds plus all one-hop neighbors (either edge direction), with every KG
    edge among those nodes. May be disconnected; may be empty for no seeds."""
    seeds = frozenset(selected.ids)
    for nid in seeds:
        if nid not in kg.entities:
            raise KeyError(f"selected id {nid} not in knowledge graph")
    nodes = set(seeds)
    for nid in seeds:
        nodes.update(other for _, other in kg.neighbors(nid))
    nodes_f = frozenset(nodes)
    return Mcsg(nodes=nodes_f, seed_nodes=seeds, edges=_induced_edges(kg, nodes_f))


def payload_of(mcsg: Mcsg) -> list[NodeId]:
    """Ascending list of distinct node ids; all the channel ever carries."""
    return sorted(mcsg.nodes)


def _components(nodes: frozenset[NodeId], edges: tuple[Triple, ...]) -> list[set[NodeId]]:
    adj: dict[NodeId, set[NodeId]] = {n: set() for n in nodes}
    for t in edges:
        adj[t.subject].add(t.object)
        adj[t.object].add(t.subject)
    seen: set[NodeId] = set()
    comps: list[set[NodeId]] = []
    for start in sorted(nodes):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            cur = stack.pop()
            for nxt in adj[cur]:
                if nxt not in comp:
                    comp.add(nxt)
                    stack.append(nxt)
        seen |= comp
        comps.append(comp)
    return comps


def reconstruct(received: list[NodeId], kg: KnowledgeGraph,
                keep_all_components: bool = False) -> Mcsg:
    """Receiver-side rebuild from (possibly corrupted) ids. Invalid ids are
    dropped; surviving nodes are induced against the KG; ties between equal
    largest components go to the one containing the smallest id."""
    valid = frozenset(i for i in received if i in kg.entities)
    edges = _induced_edges(kg, valid)
    if not keep_all_components and valid:
        comps = _components(valid, edges)
        comps.sort(key=lambda c: (-len(c), min(c)))
        chosen = frozenset(comps[0])
        edges = _induced_edges(kg, chosen)
    else:
        chosen = valid
    return Mcsg(nodes=chosen, seed_nodes=chosen, edges=edges)
