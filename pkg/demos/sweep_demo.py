#!/usr/bin/env python3
"""Run a small SNR sweep over the bundled corpus and read the report back.

All three schemes share the channel: the id payload with importance-driven
protection, the Huffman-coded text, and plain 8-bit text. The full CSV lands
in --out; this script then prints the per-SNR mean-similarity summary and
the final cumulative bit totals, which show the id payload staying an order
of magnitude under both text schemes.

    python3 demos/sweep_demo.py --out sweep.csv --trials 3
"""

import argparse
import csv
import io
from importlib import resources

from kgsemcom.harness import SweepConfig, render_report, run_sweep, write_report

DATA = resources.files("kgsemcom") / "data"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="sweep.csv")
    parser.add_argument("--trials", type=int, default=2)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--snr", type=float, nargs="*", default=[0, 4, 8, 12])
    args = parser.parse_args()

    config = SweepConfig(kg_path=str(DATA / "sample_kg.tsv"),
                         corpus_path=str(DATA / "fixture_corpus.txt"),
                         snr_grid=list(args.snr),
                         trials_per_point=args.trials,
                         seed=args.seed)
    records = run_sweep(config)
    write_report(records, config.snr_grid, args.out)
    print(f"wrote {len(records)} trial records to {args.out}\n")

    rows = list(csv.reader(io.StringIO(render_report(records, config.snr_grid))))
    print("mean similarity by SNR and scheme:")
    for row in rows:
        if row[0] == "summary":
            print(f"  {row[2]:>4} dB  {row[3]:<17} {float(row[8]):.4f}  ({row[12]})")

    print("\ncumulative bits over the corpus (payload / channel at the last sentence):")
    last = {}
    for row in rows:
        if row[0] == "cumulative":
            last[(row[2], row[3])] = (int(row[6]), int(row[7]))
    for (snr, scheme), (payload, channel) in sorted(
            last.items(), key=lambda kv: (float(kv[0][0]), kv[0][1])):
        print(f"  {snr:>4} dB  {scheme:<17} {payload:>8} / {channel:>8}")


if __name__ == "__main__":
    main()
