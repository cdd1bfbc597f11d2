#!/usr/bin/env python3
"""Generate a larger synthetic corpus from a knowledge graph.

Each sentence is grown around a randomly chosen graph edge: the subject and
object names appear verbatim (so gazetteer extraction can find them), the
relation is verbalized, and filler clauses pad the sentence past a target
length. The output is one sentence per line, ready for `kgsemcom baseline
--corpus ...` or a SweepConfig's corpus_path.

    python3 demos/make_synthetic_corpus.py --sentences 250 --out big_corpus.txt
"""

import argparse
from importlib import resources

import numpy as np

from kgsemcom import kg as kgmod
from kgsemcom.generation import verbalize_relation

DATA = resources.files("kgsemcom") / "data"

OPENERS = (
    "According to the mission archive, {s} {r} {o}",
    "Records kept by the survey team confirm that {s} {r} {o}",
    "It is well documented that {s} {r} {o}",
    "Historians often note that {s} {r} {o}",
    "The exhibit catalogue explains that {s} {r} {o}",
)

FILLERS = (
    "a detail the curators repeat in every guided tour",
    "which the annual report discusses at considerable length",
    "though the precise circumstances took decades to establish",
    "a fact that still surprises first-time visitors",
    "as the commemorative plaque near the entrance records",
    "and the connection has been studied ever since",
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--kg", default=str(DATA / "sample_kg.tsv"))
    parser.add_argument("--out", default="synthetic_corpus.txt")
    parser.add_argument("--sentences", type=int, default=250)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--min-chars", type=int, default=130,
                        help="pad with filler clauses up to this length")
    args = parser.parse_args()

    kg = kgmod.load(args.kg)
    triples = sorted(kg.triples, key=lambda t: (t.subject, t.relation, t.object))
    if not triples:
        raise SystemExit("the graph has no edges to verbalize")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(args.seed)))

    lines = [f"# synthetic corpus: {args.sentences} sentences from "
             f"{len(kg.entities)} entities / {len(triples)} relations, seed {args.seed}"]
    for _ in range(args.sentences):
        t = triples[int(rng.integers(len(triples)))]
        subject = kg.entity_by_id(t.subject).name.replace("_", " ")
        obj = kg.entity_by_id(t.object).name.replace("_", " ")
        opener = OPENERS[int(rng.integers(len(OPENERS)))]
        sentence = opener.format(s=subject, r=verbalize_relation(t.relation), o=obj)
        order = rng.permutation(len(FILLERS))
        for k in order:
            if len(sentence) >= args.min_chars:
                break
            sentence += f", {FILLERS[int(k)]}"
        lines.append(sentence + ".")

    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    lengths = [len(s) for s in lines[1:]]
    print(f"wrote {args.sentences} sentences to {args.out} "
          f"(length {min(lengths)}-{max(lengths)} chars, "
          f"mean {sum(lengths) / len(lengths):.0f})")


if __name__ == "__main__":
    main()
