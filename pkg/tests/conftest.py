"""Shared fixtures: the bundled sample KG/corpus and session-scoped
embedding machinery (building the index embeds every entity, so tests share
one instance)."""

from importlib import resources

import pytest

from kgsemcom import (
    EmbeddingIndex,
    KnowledgeGraph,
    TrigramEmbedder,
    ingest,
    load_corpus,
)
from kgsemcom import kg as kgmod


def data_path(name: str) -> str:
    return str(resources.files("kgsemcom").joinpath("data", name))


@pytest.fixture(scope="session")
def sample_kg_path() -> str:
    return data_path("sample_kg.tsv")


@pytest.fixture(scope="session")
def sample_corpus_path() -> str:
    return data_path("fixture_corpus.txt")


@pytest.fixture(scope="session")
def sample_kg(sample_kg_path) -> KnowledgeGraph:
    return kgmod.load(sample_kg_path)


@pytest.fixture(scope="session")
def sample_corpus(sample_corpus_path) -> list[str]:
    return load_corpus(sample_corpus_path)


@pytest.fixture(scope="session")
def embedder() -> TrigramEmbedder:
    return TrigramEmbedder()


@pytest.fixture(scope="session")
def sample_index(sample_kg, embedder) -> EmbeddingIndex:
    return EmbeddingIndex.build(sample_kg, embedder)


def tiny_kg(*, triples=("A r B", "B s C"), community="c0",
            extra_entities=()) -> KnowledgeGraph:
    """KG from shorthand 'Subject rel Object' strings; single community.
    Entity ids are assigned densely in first-appearance order."""
    names: list[str] = []
    for spec_line in triples:
        s, _, o = spec_line.split()
        for n in (s, o):
            if n not in names:
                names.append(n)
    for n in extra_entities:
        if n not in names:
            names.append(n)
    records = [f"C\t{community}\tlabel\tsummary"]
    records += [f"E\t\t{n}\t{community}\t\t" for n in names]
    for spec_line in triples:
        s, r, o = spec_line.split()
        records.append(f"T\t{names.index(s)}\t{r}\t{names.index(o)}")
    return ingest(records)
