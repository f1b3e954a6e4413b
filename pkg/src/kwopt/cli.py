"""Command-line entry point: ``kwopt {optimize,synth,compare}``.

Errors print one line ``error:<kind>: <message>`` to stderr and exit with the
kind's code. Outputs are rendered in memory first and only then written, each
through a temp file and rename, so a failing run leaves no partial files.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .baselines import compare, comparison_csv
from .config import load_run_config
from .dataio import SynthConfig, atomic_write_text, edges_csv, keywords_csv, synthesize
from .errors import ConfigError, DataError, KwoptError, StructuralError
from .solver import solve

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_DATA = 4
EXIT_STRUCTURE = 5

STRUCTURE_FILE = "structure.json"
TRACE_FILE = "trace.csv"
COMPARISON_FILE = "comparison.csv"
KEYWORDS_FILE = "keywords.csv"
EDGES_FILE = "edges.csv"


def _write_outputs(out_dir: Path, files: dict[str, str]) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        atomic_write_text(out_dir / name, text)


def cmd_optimize(args: argparse.Namespace) -> int:
    run = load_run_config(args.config).with_seed(args.seed)
    structure, trace = solve(run.plan, run.solve)
    _write_outputs(Path(args.out), {
        STRUCTURE_FILE: structure.to_json(run.dataset.graph),
        TRACE_FILE: trace.to_csv(),
    })
    print(f"{trace.terminated_reason} after {len(trace.rows)} iterations: "
          f"{len(structure.target)} target keywords, f1={structure.f1:.6f}")
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    cfg = SynthConfig.from_json(args.config)
    if args.seed is not None:
        cfg = SynthConfig(**{**cfg.__dict__, "rng_seed": args.seed})
    ds = synthesize(cfg)
    _write_outputs(Path(args.out), {KEYWORDS_FILE: keywords_csv(ds), EDGES_FILE: edges_csv(ds)})
    print(f"{len(ds)} keywords, {len(ds.graph.edges())} edges")
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    run = load_run_config(args.config).with_seed(args.seed)
    n = args.base2_n if args.base2_n is not None else run.base2_n
    rows = compare(run.plan, run.solve, n, args.base1)
    _write_outputs(Path(args.out), {COMPARISON_FILE: comparison_csv(rows)})
    for r in rows:
        print(f"{r.strategy}: payoff={r.payoff / 1e6:.2f} f1={r.f1:.6f} target={r.target_size}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kwopt", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--config", required=True, help="JSON config path")
        sp.add_argument("--out", default=".", help="output directory")
        sp.add_argument("--seed", type=int, default=None, help="override the config RNG seed")

    sp = sub.add_parser("optimize", help="run the solver; write structure.json and trace.csv")
    common(sp)
    sp.set_defaults(func=cmd_optimize)

    sp = sub.add_parser("synth", help="generate a synthetic keywords.csv and edges.csv")
    common(sp)
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("compare", help="compare MKOF with the baselines; write comparison.csv")
    common(sp)
    sp.add_argument("--base2-n", type=int, default=None,
                    help="top-n size for BASE2-Ratio (default: config base2_n, else MKOF target size)")
    sp.add_argument("--base1", default=None, help="fixed-structure JSON for BASE1-Origin")
    sp.set_defaults(func=cmd_compare)
    return p


def _fail(kind: str, code: int, exc: BaseException) -> int:
    msg = " ".join(str(exc).split())
    print(f"error:{kind}: {msg}", file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        return _fail("config", EXIT_CONFIG, exc)
    except StructuralError as exc:
        return _fail("structure", EXIT_STRUCTURE, exc)
    except (DataError, KwoptError) as exc:
        return _fail("data", EXIT_DATA, exc)
    except json.JSONDecodeError as exc:
        return _fail("config", EXIT_CONFIG, exc)
    except OSError as exc:
        return _fail("io", EXIT_IO, exc)
    except (TypeError, ValueError) as exc:
        return _fail("config", EXIT_CONFIG, exc)


if __name__ == "__main__":
    sys.exit(main())
