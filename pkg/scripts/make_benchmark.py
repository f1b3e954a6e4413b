"""Regenerate the bundled benchmark fixtures and golden outputs.

    python scripts/make_benchmark.py [--check]

Writes keywords.csv / edges.csv from benchmark/synth.json, a random BASE1
allocation over the MKOF target set (base1.json), and the golden
structure.json, trace.csv and comparison.csv under benchmark/golden/.
With --check nothing is written; the script exits 1 if any file would change.
"""

import argparse
import json
import sys
from pathlib import Path

from kwopt.baselines import compare, comparison_csv, random_allocation
from kwopt.config import load_run_config
from kwopt.dataio import SynthConfig, edges_csv, keywords_csv, synthesize
from kwopt.solver import solve

ROOT = Path(__file__).resolve().parents[1] / "benchmark"
BASE1_SEED = 7


def render_data() -> dict[Path, str]:
    ds = synthesize(SynthConfig.from_json(ROOT / "synth.json"))
    return {ROOT / "keywords.csv": keywords_csv(ds), ROOT / "edges.csv": edges_csv(ds)}


def render_outputs() -> dict[Path, str]:
    """Golden outputs from the data files currently on disk."""
    files = {}
    run = load_run_config(ROOT / "config.json")
    structure, trace = solve(run.plan, run.solve)
    alloc = random_allocation(structure.target, run.plan, BASE1_SEED)
    files[ROOT / "base1.json"] = json.dumps(alloc, indent=2) + "\n"
    rows = compare(run.plan, run.solve, None, alloc)
    files[ROOT / "golden" / "structure.json"] = structure.to_json(run.dataset.graph)
    files[ROOT / "golden" / "trace.csv"] = trace.to_csv()
    files[ROOT / "golden" / "comparison.csv"] = comparison_csv(rows)
    return files


def sync(files: dict[Path, str], check: bool) -> list[Path]:
    changed = [p for p, text in files.items() if not p.exists() or p.read_text() != text]
    if not check:
        for p in changed:
            p.parent.mkdir(parents=True, exist_ok=True)
            p.write_text(files[p])
    return changed


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--check", action="store_true")
    check = ap.parse_args().check
    changed = sync(render_data(), check)
    changed += sync(render_outputs(), check)
    for p in changed:
        print(("would change: " if check else "wrote: ") + str(p.relative_to(ROOT.parent)))
    sys.exit(1 if check and changed else 0)
