"""Knowledge graph store: entities with descriptions, communities, relation triples.

File format (UTF-8, one record per line, tab-separated, '#' comments ignored):

    C<TAB>community_id<TAB>label<TAB>summary
    E<TAB>node_id<TAB>name<TAB>community_id<TAB>description<TAB>alias1|alias2|...
    T<TAB>subject_id<TAB>relation<TAB>object_id

Description and aliases may be empty. An empty node_id field requests dense
auto-assignment (first free id starting at 0, in file order). dump() inverts
load(). Graphs are immutable after ingestion; all queries are read-only.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

NodeId = int
MAX_NODE_ID = 2**32 - 1


class KgFormatError(ValueError):
    """Malformed or inconsistent KG records."""


def canonical_name(name: str) -> str:
    """Case-folded, whitespace-collapsed form used for all name lookups."""
    return " ".join(name.split()).casefold()


@dataclass(frozen=True)
class Triple:
    subject: NodeId
    relation: str
    object: NodeId


@dataclass(frozen=True)
class Entity:
    node_id: NodeId
    name: str
    community: str
    description: str = ""
    aliases: tuple[str, ...] = ()


@dataclass(frozen=True)
class Community:
    community_id: str
    label: str = ""
    summary: str = ""


class KnowledgeGraph:
    """Immutable store of entities, communities, and directed labeled triples."""

    def __init__(self, entities: dict[NodeId, Entity], communities: dict[str, Community],
                 triples: list[Triple]):
        self.entities = entities
        self.communities = communities
        self.triples = triples
        self.name_index: dict[str, NodeId] = {}
        self._alias_index: dict[str, NodeId] = {}
        for ent in entities.values():
            self.name_index[canonical_name(ent.name)] = ent.node_id
        for ent in entities.values():
            for alias in ent.aliases:
                key = canonical_name(alias)
                if key not in self.name_index and key not in self._alias_index:
                    self._alias_index[key] = ent.node_id
        self._adjacency: dict[NodeId, set[tuple[str, NodeId]]] = {i: set() for i in entities}
        for t in triples:
            self._adjacency[t.subject].add((t.relation, t.object))
            self._adjacency[t.object].add((t.relation, t.subject))

    # -- queries ------------------------------------------------------------

    def entity_by_id(self, node_id: NodeId) -> Entity | None:
        return self.entities.get(node_id)

    def id_of(self, name: str) -> NodeId | None:
        key = canonical_name(name)
        hit = self.name_index.get(key)
        if hit is None:
            hit = self._alias_index.get(key)
        return hit

    def neighbors(self, node_id: NodeId) -> set[tuple[str, NodeId]]:
        """Edges touching node_id in either direction, as (relation, other) pairs."""
        if node_id not in self.entities:
            raise KeyError(f"unknown node id {node_id}")
        return set(self._adjacency[node_id])

    def names_and_aliases(self) -> Iterator[tuple[str, NodeId]]:
        """All canonical lookup keys (names first, then non-shadowed aliases)."""
        yield from self.name_index.items()
        yield from self._alias_index.items()

    def __len__(self) -> int:
        return len(self.entities)

    def __eq__(self, other) -> bool:
        if not isinstance(other, KnowledgeGraph):
            return NotImplemented
        return (self.entities == other.entities and self.communities == other.communities
                and self.triples == other.triples)

    # -- persistence ---------------------------------------------------------

    def to_records(self) -> list[str]:
        lines = []
        for cid in sorted(self.communities):
            c = self.communities[cid]
            lines.append(f"C\t{c.community_id}\t{c.label}\t{c.summary}")
        for nid in sorted(self.entities):
            e = self.entities[nid]
            lines.append(f"E\t{e.node_id}\t{e.name}\t{e.community}\t{e.description}\t"
                         f"{'|'.join(e.aliases)}")
        for t in self.triples:
            lines.append(f"T\t{t.subject}\t{t.relation}\t{t.object}")
        return lines

    def dump(self, path: str | Path) -> None:
        Path(path).write_text("\n".join(self.to_records()) + "\n", encoding="utf-8")


def _parse_node_id(text: str, lineno: int) -> NodeId:
    try:
        value = int(text)
    except ValueError:
        raise KgFormatError(f"line {lineno}: node id {text!r} is not an integer") from None
    if not 0 <= value <= MAX_NODE_ID:
        raise KgFormatError(f"line {lineno}: node id {value} outside unsigned 32-bit range")
    return value


def ingest(records: Iterable[str]) -> KnowledgeGraph:
    """Build a KnowledgeGraph from record lines. Two passes, so T lines may
    reference entities declared later in the stream."""
    entities: dict[NodeId, Entity] = {}
    communities: dict[str, Community] = {}
    names_seen: dict[str, int] = {}
    edge_lines: list[tuple[int, list[str]]] = []
    next_auto = 0

    lines = list(records)
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        kind = fields[0]
        if kind == "C":
            if len(fields) != 4:
                raise KgFormatError(f"line {lineno}: C record needs 4 fields, got {len(fields)}")
            _, cid, label, summary = fields
            if cid in communities:
                raise KgFormatError(f"line {lineno}: duplicate community id {cid!r}")
            communities[cid] = Community(cid, label, summary)
        elif kind == "E":
            if len(fields) not in (5, 6):
                raise KgFormatError(f"line {lineno}: E record needs 5 or 6 fields, got {len(fields)}")
            id_text, name, cid = fields[1], fields[2], fields[3]
            description = fields[4]
            aliases = tuple(a for a in (fields[5].split("|") if len(fields) == 6 else []) if a)
            if not name.strip():
                raise KgFormatError(f"line {lineno}: entity name is empty")
            if id_text.strip() == "":
                while next_auto in entities:
                    next_auto += 1
                nid = next_auto
                next_auto += 1
            else:
                nid = _parse_node_id(id_text, lineno)
            if nid in entities:
                raise KgFormatError(f"line {lineno}: duplicate node id {nid}")
            key = canonical_name(name)
            if key in names_seen:
                raise KgFormatError(
                    f"line {lineno}: duplicate canonical name {key!r} "
                    f"(first defined on line {names_seen[key]})")
            names_seen[key] = lineno
            entities[nid] = Entity(nid, name, cid, description, aliases)
        elif kind == "T":
            if len(fields) != 4:
                raise KgFormatError(f"line {lineno}: T record needs 4 fields, got {len(fields)}")
            edge_lines.append((lineno, fields))
        else:
            raise KgFormatError(f"line {lineno}: unknown record kind {kind!r}")

    for ent in entities.values():
        if ent.community not in communities:
            raise KgFormatError(
                f"entity {ent.node_id} ({ent.name!r}) references unknown community "
                f"{ent.community!r}")

    triples: list[Triple] = []
    seen: set[Triple] = set()
    for lineno, fields in edge_lines:
        _, s_text, relation, o_text = fields
        if not relation:
            raise KgFormatError(f"line {lineno}: empty relation label")
        s = _parse_node_id(s_text, lineno)
        o = _parse_node_id(o_text, lineno)
        for nid in (s, o):
            if nid not in entities:
                raise KgFormatError(
                    f"line {lineno}: edge ({s}, {relation!r}, {o}) references unknown node {nid}")
        t = Triple(s, relation, o)
        if t not in seen:
            seen.add(t)
            triples.append(t)

    return KnowledgeGraph(entities, communities, triples)


def load(path: str | Path) -> KnowledgeGraph:
    return ingest(Path(path).read_text(encoding="utf-8").splitlines())
