"""Command-line front end.

Subcommands:
  build-kg  validate a KG file, optionally fill missing descriptions and
            community summaries through the chat backend, and rewrite it
  extract   run entity extraction on one sentence and show the stages
  send      one full transmission at a chosen SNR, stage-by-stage trace
  sweep     run a configured SNR sweep and write the CSV report
  baseline  text-only schemes over a corpus (no KG), CSV report

Success exits 0. Any failure prints a single JSON object on stderr
({"error": <kind>, "message": <text>}) and exits nonzero.
"""

import argparse
import json
import math
import sys

from . import kg as kgmod
from .embedding import EmbeddingIndex, TrigramEmbedder
from .extraction import ExtractionConfig, HttpSelector, StubSelector, extract_trace
from .generation import HttpGenerator, StubGenerator, build_prompt, enrich_kg
from .harness import (PipelineContext, SweepConfig, baseline_records, derive_seed,
                      load_corpus, run_pipeline, run_sweep, semantic_similarity,
                      write_report)
from .importance import ImportanceConfig, importance_scores, partition_uep
from .phy import ChannelConfig, TransmissionFrame, channel_bit_cost, transmit
from .semgraph import build_mcsg, payload_of, reconstruct


class CliError(Exception):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as the JSON error line."""

    def error(self, message):
        raise CliError("usage", message)


def _parse_snr(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise CliError("usage", f"invalid SNR value {text!r}") from None
    if math.isnan(value):
        raise CliError("usage", "SNR must not be NaN")
    return value


def _load_kg(path: str) -> kgmod.KnowledgeGraph:
    try:
        return kgmod.load(path)
    except FileNotFoundError:
        raise CliError("io", f"KG file not found: {path}") from None
    except kgmod.KgFormatError as exc:
        raise CliError("kg-format", str(exc)) from None


def _remote_config():
    from .remote import RemoteConfig
    try:
        return RemoteConfig.from_env()
    except (KeyError, ValueError) as exc:
        raise CliError("config", str(exc)) from None


def _cmd_build_kg(args) -> int:
    kg = _load_kg(args.input)
    if args.enrich:
        kg = enrich_kg(kg, _remote_config())
    kg.dump(args.out)
    print(f"wrote {len(kg.entities)} entities, {len(kg.communities)} communities, "
          f"{len(kg.triples)} triples to {args.out}")
    return 0


def _extraction_setup(kg, backend: str):
    embedder = TrigramEmbedder()
    index = EmbeddingIndex.build(kg, embedder)
    selector = HttpSelector(_remote_config()) if backend == "http" else StubSelector()
    return embedder, index, ExtractionConfig(embedder=embedder, selector=selector)


def _cmd_extract(args) -> int:
    kg = _load_kg(args.kg)
    _, index, config = _extraction_setup(kg, args.extract_backend)
    trace = extract_trace(args.sentence, kg, index, config)
    print(f"sentence: {args.sentence}")
    print(f"mentions ({len(trace.mentions)}):")
    for m in trace.mentions:
        print(f"  [{m.start}:{m.end}] {m.surface}")
    print(f"candidates ({len(trace.candidates.candidates)}):")
    for node_id in sorted(trace.candidates.candidates):
        ent = kg.entity_by_id(node_id)
        _, sim = trace.candidates.provenance[node_id]
        print(f"  {node_id}  {ent.name}  (similarity {sim:.4f})")
    print(f"selected ({len(trace.selected.ids)}):")
    for node_id in trace.selected.ids:
        print(f"  {node_id}  {kg.entity_by_id(node_id).name}")
    for stage, seconds in trace.stage_seconds.items():
        print(f"time[{stage}]: {seconds * 1e3:.2f} ms")
    return 0


def _cmd_send(args) -> int:
    kg = _load_kg(args.kg)
    embedder, index, ext_config = _extraction_setup(kg, args.extract_backend)
    snr_db = _parse_snr(args.snr)
    trace = extract_trace(args.sentence, kg, index, ext_config)
    print(f"[1 extract] selected ids: {list(trace.selected.ids)}")
    if not trace.selected.ids:
        print("nothing recognized; no transmission")
        return 0
    mcsg = build_mcsg(trace.selected, kg)
    payload = payload_of(mcsg)
    print(f"[2 subgraph] {len(mcsg.nodes)} nodes, {len(mcsg.edges)} edges; "
          f"payload ids: {payload}")
    imp_config = ImportanceConfig(alpha=args.alpha)
    table = importance_scores(mcsg, imp_config)
    protected, unprotected = partition_uep(table, snr_db, imp_config)
    tau = imp_config.threshold_policy.threshold(snr_db)
    print(f"[3 importance] threshold {tau:.3f} at {snr_db:g} dB")
    for node_id in payload:
        deg, btw, score = table.rows[node_id]
        mark = "P" if node_id in protected else "-"
        print(f"  {mark} {node_id}  {kg.entity_by_id(node_id).name}  "
              f"degree {deg:.0f}  betweenness {btw:.2f}  score {score:.4f}")
    frame = TransmissionFrame(tuple(protected), tuple(unprotected))
    n_p, n_u = len(protected), len(unprotected)
    print(f"[4 frame] {n_p} protected / {n_u} unprotected; "
          f"payload {32 + 32 * (n_p + n_u)} bits, channel {channel_bit_cost(n_p, n_u)} bits")
    result = transmit(frame, ChannelConfig(snr_db, args.seed))
    print(f"[5 channel] decoded info-bit errors {result.coded_bit_errors}/{32 + 32 * n_p}, "
          f"uncoded bit errors {result.uncoded_bit_errors}/{result.uncoded_channel_bits}, "
          f"header consistent: {result.header_consistent}")
    received = list(result.received_ids)
    print(f"[6 receive] ids: {received}")
    recon = reconstruct(received, kg)
    print(f"[7 reconstruct] kept {len(recon.nodes)} nodes, {len(recon.edges)} edges")
    if not recon.nodes:
        print("empty reconstruction; similarity 0.0")
        return 0
    generator = HttpGenerator(_remote_config()) if args.gen_backend == "http" \
        else StubGenerator()
    text = generator.generate(build_prompt(recon, kg)).text
    print(f"[8 generate] {text}")
    score = semantic_similarity(args.sentence, text, embedder)
    print(f"[9 similarity] {score:.4f}")
    return 0


def _cmd_sweep(args) -> int:
    try:
        config = SweepConfig.from_json(args.config)
    except FileNotFoundError:
        raise CliError("io", f"config file not found: {args.config}") from None
    except (ValueError, TypeError) as exc:
        raise CliError("config", str(exc)) from None
    records = run_sweep(config)
    write_report(records, config.snr_grid, args.out)
    print(f"wrote {len(records)} trial records to {args.out}")
    return 0


def _cmd_baseline(args) -> int:
    try:
        corpus = load_corpus(args.corpus)
    except FileNotFoundError:
        raise CliError("io", f"corpus file not found: {args.corpus}") from None
    except ValueError as exc:
        raise CliError("config", str(exc)) from None
    snr_grid = [_parse_snr(s) for s in args.snr] if args.snr else [math.inf]
    records = baseline_records(corpus, snr_grid, seed=args.seed)
    write_report(records, snr_grid, args.out)
    print(f"wrote {len(records)} trial records to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kgsemcom",
                     description="Knowledge-graph semantic communication toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-kg", help="validate and rewrite a KG file")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--enrich", choices=["http"],
                   help="fill missing descriptions/summaries via the chat backend")
    p.set_defaults(func=_cmd_build_kg)

    p = sub.add_parser("extract", help="entity extraction trace for one sentence")
    p.add_argument("--kg", required=True)
    p.add_argument("--sentence", required=True)
    p.add_argument("--extract-backend", choices=["stub", "http"], default="stub")
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("send", help="single transmission with a stage-by-stage trace")
    p.add_argument("--kg", required=True)
    p.add_argument("--sentence", required=True)
    p.add_argument("--snr", required=True, help="channel SNR in dB (inf for noiseless)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--extract-backend", choices=["stub", "http"], default="stub")
    p.add_argument("--gen-backend", choices=["stub", "http"], default="stub")
    p.set_defaults(func=_cmd_send)

    p = sub.add_parser("sweep", help="run a configured SNR sweep, write CSV")
    p.add_argument("--config", required=True, help="JSON file with SweepConfig fields")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("baseline", help="text-only schemes over a corpus, write CSV")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--snr", nargs="*", help="SNR grid in dB (default: noiseless)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_baseline)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(json.dumps({"error": exc.kind, "message": str(exc)}), file=sys.stderr)
        return 2
    except OSError as exc:
        print(json.dumps({"error": "io", "message": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
