"""Knowledge-graph grounded semantic communication toolkit.

Pipeline: extract entities from a sentence against a shared knowledge graph,
compress to a minimum connected subgraph of node ids, transmit the id payload
over a simulated noisy channel with importance-aware unequal error protection,
reconstruct the subgraph at the receiver, and regenerate text from it.
"""

__version__ = "0.1.0"

from .kg import (KnowledgeGraph, Entity, Community, Triple, NodeId,
                 KgFormatError, canonical_name, ingest, load)
from .embedding import TrigramEmbedder, RemoteEmbedder, EmbeddingIndex, cosine
from .extraction import (ExtractionConfig, ExtractionTrace, Mention,
                         CandidateSet, SelectedEntities, StubSelector,
                         HttpSelector, recognize, expand, select,
                         extract, extract_trace)
from .semgraph import Mcsg, build_mcsg, payload_of, reconstruct
from .importance import (ImportanceConfig, ImportanceTable, ThresholdPolicy,
                         DEFAULT_POLICY, degree_centrality,
                         betweenness_centrality, importance_scores,
                         partition_uep)
from .phy import (ChannelConfig, SymbolStream, TransmissionFrame, ParsedHeader,
                  TransmitResult, HuffmanTable, conv_encode, viterbi_decode,
                  qam16_modulate, qam16_demodulate, awgn, noise_generator,
                  serialize_frame, parse_coded_stream, channel_bit_cost,
                  transmit, transmit_many, huffman_build, huffman_encode,
                  huffman_decode, ids_to_bits, bits_to_ids)
from .generation import (Prompt, ReconstructedText, StubGenerator,
                         HttpGenerator, build_prompt, generate,
                         verbalize_relation, enrich_kg)
from .remote import RemoteConfig
from .harness import (ExperimentRecord, SweepConfig, PipelineContext,
                      SCHEMES, semantic_similarity, count_bits, run_pipeline,
                      run_sweep, baseline_records, render_report, write_report,
                      load_corpus, derive_seed)

__all__ = [
    "__version__",
    # knowledge graph
    "KnowledgeGraph", "Entity", "Community", "Triple", "NodeId",
    "KgFormatError", "canonical_name", "ingest", "load",
    # embeddings and retrieval
    "TrigramEmbedder", "RemoteEmbedder", "EmbeddingIndex", "cosine",
    # extraction
    "ExtractionConfig", "ExtractionTrace", "Mention", "CandidateSet",
    "SelectedEntities", "StubSelector", "HttpSelector", "recognize", "expand",
    "select", "extract", "extract_trace",
    # semantic subgraph
    "Mcsg", "build_mcsg", "payload_of", "reconstruct",
    # importance and UEP
    "ImportanceConfig", "ImportanceTable", "ThresholdPolicy", "DEFAULT_POLICY",
    "degree_centrality", "betweenness_centrality", "importance_scores",
    "partition_uep",
    # physical layer
    "ChannelConfig", "SymbolStream", "TransmissionFrame", "ParsedHeader",
    "TransmitResult", "HuffmanTable", "conv_encode", "viterbi_decode",
    "qam16_modulate", "qam16_demodulate", "awgn", "noise_generator",
    "serialize_frame", "parse_coded_stream", "channel_bit_cost", "transmit",
    "transmit_many", "huffman_build", "huffman_encode", "huffman_decode",
    "ids_to_bits", "bits_to_ids",
    # generation
    "Prompt", "ReconstructedText", "StubGenerator", "HttpGenerator",
    "build_prompt", "generate", "verbalize_relation", "enrich_kg",
    # remote backends
    "RemoteConfig",
    # experiment harness
    "ExperimentRecord", "SweepConfig", "PipelineContext", "SCHEMES",
    "semantic_similarity", "count_bits", "run_pipeline", "run_sweep",
    "baseline_records", "render_report", "write_report", "load_corpus",
    "derive_seed",
]
