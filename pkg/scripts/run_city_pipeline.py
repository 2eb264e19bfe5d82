#!/usr/bin/env python3
"""Full pipeline over a real city crime feed, via the CLI stages.

Runs ingest -> preprocess -> stats -> mine -> train -> evaluate (and the
demographics comparison when a demographics CSV is supplied), leaving every
intermediate file in --outdir. Typical operating points: Denver at
--min-sup 0.0012, Los Angeles at --min-sup 0.0018.

    python3 scripts/run_city_pipeline.py --schema denver \
        --crimes denver.csv --demographics denver_demographics.csv \
        --min-sup 0.0012 --outdir denver_run
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from crimeminer.cli import main as cli


def run(args: list[str]) -> None:
    code = cli(args)
    if code != 0:
        raise SystemExit(f"step failed with exit code {code}: {' '.join(args)}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--schema", required=True, choices=["denver", "la"])
    parser.add_argument("--crimes", required=True, help="raw crime CSV")
    parser.add_argument("--demographics", help="neighborhood demographics CSV (optional)")
    parser.add_argument("--mapping", help="override the packaged type mapping")
    parser.add_argument("--min-sup", type=float, default=0.0012)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--outdir", default="city_run")
    args = parser.parse_args()

    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    raw = out / "raw.jsonl"
    unified = out / "unified.jsonl"

    run(["ingest", "--schema", args.schema, "--input", args.crimes,
         "--output", str(raw), "--report", str(out / "ingest_report.json")])
    print(f"filtered crime rows: {sum(1 for _ in open(raw))}")

    preprocess_args = ["preprocess", "--schema", args.schema, "--input", str(raw),
                       "--output", str(unified), "--report", str(out / "preprocess_report.json")]
    if args.mapping:
        preprocess_args += ["--mapping", args.mapping]
    run(preprocess_args)

    for attribute in ("month", "day", "time", "hour", "type"):
        run(["stats", "--dataset", str(unified), "--attribute", attribute,
             "--year", "2014", "--output", str(out / f"freq_{attribute}_2014.csv")])
    distinct_locations = len({json.loads(line)["location"] for line in open(unified)})
    top = bottom = min(3, distinct_locations // 3) or 1
    middle = min(4, max(distinct_locations - top - bottom, 0))
    if top + middle + bottom <= distinct_locations:
        run(["stats", "--dataset", str(unified), "--top", str(top), "--middle", str(middle),
             "--bottom", str(bottom), "--output", str(out / "location_ranking.csv")])
    run(["stats", "--dataset", str(unified), "--rows", "type", "--cols", "day",
         "--output", str(out / "type_by_day.csv")])

    run(["mine", "--dataset", str(unified), "--min-sup", str(args.min_sup),
         "--output", str(out / "patterns.csv")])
    n_patterns = len((out / "patterns.csv").read_text().splitlines()) - 1
    print(f"hotspot patterns at min_sup={args.min_sup}: {n_patterns}")

    for kind in ("nb", "dt"):
        run(["train", "--dataset", str(unified), "--model", kind, "--seed", str(args.seed),
             "--output", str(out / f"model_{kind}.json"),
             "--eval-report", str(out / f"holdout_{kind}.json")])
        run(["evaluate", "--dataset", str(unified), "--model", kind, "--folds", "5",
             "--seed", str(args.seed), "--output", str(out / f"cv_{kind}.json"),
             "--csv", str(out / f"cv_{kind}_metrics.csv")])
        accuracy = json.loads((out / f"cv_{kind}.json").read_text())["mean_accuracy"]
        print(f"{kind} 5-fold mean accuracy: {accuracy:.4f}")

    if args.demographics:
        run(["demographics", "--dataset", str(unified), "--demographics", args.demographics,
             "--output", str(out / "group_comparison.csv"),
             "--json", str(out / "group_comparison.json")])
        groups = json.loads((out / "group_comparison.json").read_text())
        print(f"dangerous: {groups['dangerous']}  safe: {groups['safe']}")

    print(f"all outputs in {out}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
