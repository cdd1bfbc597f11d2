"""Three-stage entity extraction against a shared knowledge graph.

Stage 1 recognizes mention spans with a gazetteer over KG names and aliases
(longest match, left to right, case-insensitive) plus a capitalized-span
fallback for out-of-KG names. Stage 2 expands each mention to candidate
entities via the hierarchical embedding index. Stage 3 selects the final ids,
either with a deterministic offline rule or a remote chat model.
"""

import re
import time
from dataclasses import dataclass, field

from .embedding import EmbeddingIndex
from .kg import KnowledgeGraph, NodeId, canonical_name

_TOKEN_RE = re.compile(r"[A-Za-z0-9][A-Za-z0-9'\-]*")


@dataclass(frozen=True)
class Mention:
    surface: str
    start: int
    end: int


@dataclass
class CandidateSet:
    candidates: set[NodeId]
    provenance: dict[NodeId, tuple[Mention, float]]
    # diagnostic: (mention, routed community, ranked (id, sim)) per mention
    per_mention: list[tuple[Mention, str, list[tuple[NodeId, float]]]] = field(default_factory=list)


@dataclass(frozen=True)
class SelectedEntities:
    ids: tuple[NodeId, ...]


@dataclass
class ExtractionConfig:
    embedder: object
    selector: object
    top_k: int = 3
    max_selected: int = 8
    similarity_threshold: float = 0.5


@dataclass
class ExtractionTrace:
    mentions: list[Mention]
    candidates: CandidateSet
    selected: SelectedEntities
    stage_seconds: dict[str, float]


def recognize(sentence: str, kg: KnowledgeGraph) -> list[Mention]:
    """Gazetteer pass over KG names/aliases, then capitalized runs of two or
    more tokens among the uncovered positions."""
    gazetteer = dict(kg.names_and_aliases())
    max_words = max((len(k.split()) for k in gazetteer), default=1)
    tokens = list(_TOKEN_RE.finditer(sentence))
    mentions: list[Mention] = []
    covered = [False] * len(tokens)

    i = 0
    while i < len(tokens):
        hit = None
        for j in range(min(i + max_words, len(tokens)) - 1, i - 1, -1):
            start, end = tokens[i].start(), tokens[j].end()
            if canonical_name(sentence[start:end]) in gazetteer:
                hit = (j, start, end)
                break
        if hit is not None:
            j, start, end = hit
            mentions.append(Mention(sentence[start:end], start, end))
            for t in range(i, j + 1):
                covered[t] = True
            i = j + 1
        else:
            i += 1

    # fallback: maximal runs of >=2 capitalized uncovered tokens
    run: list[int] = []
    for idx in range(len(tokens) + 1):
        is_cap = (idx < len(tokens) and not covered[idx]
                  and tokens[idx].group()[0].isupper())
        if is_cap:
            run.append(idx)
            continue
        if len(run) >= 2:
            start, end = tokens[run[0]].start(), tokens[run[-1]].end()
            mentions.append(Mention(sentence[start:end], start, end))
        run = []

    mentions.sort(key=lambda m: m.start)
    return mentions


def expand(mentions: list[Mention], index: EmbeddingIndex, embedder,
           k: int = 3) -> CandidateSet:
    """Route each mention to its best community, then take the top-k entities
    there. Provenance keeps the highest-similarity source mention per id."""
    cset = CandidateSet(candidates=set(), provenance={})
    for mention in mentions:
        query = embedder.embed_one(mention.surface)
        community = index.best_community(query)
        ranked = index.top_k_in_community(community, query, k=k)
        cset.per_mention.append((mention, community, ranked))
        for nid, sim in ranked:
            cset.candidates.add(nid)
            prev = cset.provenance.get(nid)
            if prev is None or sim > prev[1]:
                cset.provenance[nid] = (mention, sim)
    return cset


class StubSelector:
    """Deterministic offline stage 3: keep a candidate iff its canonical name
    occurs in the canonicalized sentence or its provenance similarity clears
    the threshold; cap the result by descending similarity."""

    def select(self, sentence: str, candidates: CandidateSet, kg: KnowledgeGraph,
               max_selected: int = 8, similarity_threshold: float = 0.5) -> SelectedEntities:
        canon_sentence = canonical_name(sentence)
        keep: list[tuple[float, NodeId]] = []
        for nid in candidates.candidates:
            sim = candidates.provenance[nid][1]
            name = kg.entities[nid].name
            if canonical_name(name) in canon_sentence or sim >= similarity_threshold:
                keep.append((sim, nid))
        keep.sort(key=lambda t: (-t[0], t[1]))
        chosen = sorted(nid for _, nid in keep[:max_selected])
        return SelectedEntities(ids=tuple(chosen))


class HttpSelector:
    """Stage 3 via a chat-completion endpoint. The model sees the sentence and
    the candidate list and answers with entity names, one per line or comma
    separated; unmatched and non-candidate names are dropped."""

    def __init__(self, config, prompt_template: str | None = None):
        from .prompts import load_prompt
        self.config = config
        self.template = prompt_template or load_prompt("selector_v1.txt")

    def select(self, sentence: str, candidates: CandidateSet, kg: KnowledgeGraph,
               max_selected: int = 8, similarity_threshold: float = 0.5) -> SelectedEntities:
        from .remote import chat_completion
        listing = "\n".join(
            f"- {kg.entities[nid].name}: {kg.entities[nid].description}"
            for nid in sorted(candidates.candidates))
        prompt = self.template.format(sentence=sentence, candidates=listing)
        reply = chat_completion(self.config, prompt)
        names = [p.strip() for chunk in reply.splitlines() for p in chunk.split(",")]
        chosen: set[NodeId] = set()
        for name in names:
            if not name:
                continue
            nid = kg.id_of(name.strip("-* \t"))
            if nid is not None and nid in candidates.candidates:
                chosen.add(nid)
        return SelectedEntities(ids=tuple(sorted(chosen)[:max_selected]))


def select(sentence: str, candidates: CandidateSet, kg: KnowledgeGraph,
           backend, max_selected: int = 8,
           similarity_threshold: float = 0.5) -> SelectedEntities:
    return backend.select(sentence, candidates, kg, max_selected=max_selected,
                          similarity_threshold=similarity_threshold)


def extract(sentence: str, kg: KnowledgeGraph, index: EmbeddingIndex,
            config: ExtractionConfig) -> SelectedEntities:
    return extract_trace(sentence, kg, index, config).selected


def extract_trace(sentence: str, kg: KnowledgeGraph, index: EmbeddingIndex,
                  config: ExtractionConfig) -> ExtractionTrace:
    t0 = time.perf_counter()
    mentions = recognize(sentence, kg)
    t1 = time.perf_counter()
    candidates = expand(mentions, index, config.embedder, k=config.top_k)
    t2 = time.perf_counter()
    selected = select(sentence, candidates, kg, config.selector,
                      max_selected=config.max_selected,
                      similarity_threshold=config.similarity_threshold)
    t3 = time.perf_counter()
    timings = {"recognize": t1 - t0, "expand": t2 - t1, "select": t3 - t2}
    return ExtractionTrace(mentions, candidates, selected, timings)
