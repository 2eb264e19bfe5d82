#!/usr/bin/env python3
"""Regenerate the bundled synthetic dataset at tests/data/synthetic_crimes.jsonl.

The fixture is deterministic (fixed seed) so the file in the repository and
a fresh generation are byte-identical.
"""

from __future__ import annotations

import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from crimeminer.preprocess import write_unified_jsonl
from crimeminer.synthetic import generate_synthetic_dataset


def main() -> int:
    target = REPO / "tests" / "data" / "synthetic_crimes.jsonl"
    target.parent.mkdir(parents=True, exist_ok=True)
    records = generate_synthetic_dataset()
    with open(target, "w", encoding="utf-8", newline="") as fp:
        write_unified_jsonl(records, fp)
    print(f"wrote {len(records)} records to {target}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
