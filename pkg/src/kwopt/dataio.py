"""Keyword performance data: CSV ingestion, export and seeded synthetic pools."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
import warnings
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError, DataError
from .graph import GraphError, KeywordGraph
from .money import format_micros, to_micros

KEYWORD_FIELDS = ["id", "text", "impressions", "clicks", "cpc", "ctr", "revenue_per_click"]
EDGE_FIELDS = ["source", "target"]
CTR_TOLERANCE = 1e-6


class CtrMismatchWarning(UserWarning):
    pass


@dataclass(frozen=True)
class KeywordRecord:
    """One keyword with its observed performance.

    Currency fields are integer micro-units; ``cpc`` and ``revenue_per_click``
    give the float view.
    """

    id: int
    text: str
    impressions: int
    clicks: int
    cpc_micros: int
    ctr: float
    rpc_micros: int

    def __post_init__(self) -> None:
        if self.id < 0:
            raise DataError(f"keyword id must be non-negative, got {self.id}")
        if self.impressions < 0 or self.clicks < 0:
            raise DataError(f"keyword {self.id}: negative impressions or clicks")
        if self.clicks > self.impressions:
            raise DataError(
                f"keyword {self.id}: clicks ({self.clicks}) exceed impressions ({self.impressions})"
            )
        if self.cpc_micros < 0 or self.rpc_micros < 0:
            raise DataError(f"keyword {self.id}: negative cpc or revenue_per_click")
        if not 0.0 <= self.ctr <= 1.0:
            raise DataError(f"keyword {self.id}: ctr {self.ctr} outside [0, 1]")
        if self.impressions > 0 and abs(self.ctr - self.clicks / self.impressions) > CTR_TOLERANCE:
            warnings.warn(
                f"keyword {self.id}: ctr {self.ctr} differs from clicks/impressions "
                f"{self.clicks / self.impressions:.6g}",
                CtrMismatchWarning,
                stacklevel=3,
            )

    @property
    def cpc(self) -> float:
        return self.cpc_micros / 1e6

    @property
    def revenue_per_click(self) -> float:
        return self.rpc_micros / 1e6

    @property
    def observed_ctr(self) -> float:
        """clicks/impressions, or 0 with no impressions."""
        return self.clicks / self.impressions if self.impressions else 0.0


@dataclass(frozen=True, eq=False)
class Dataset:
    records: tuple[KeywordRecord, ...]
    graph: KeywordGraph

    def __post_init__(self) -> None:
        if self.graph.node_count != len(self.records):
            raise DataError("graph node count differs from record count")
        for i, r in enumerate(self.records):
            if r.id != i:
                raise DataError(f"record at position {i} has id {r.id}")

    def __len__(self) -> int:
        return len(self.records)

    def __getitem__(self, k: int) -> KeywordRecord:
        return self.records[k]

    @property
    def ids(self) -> frozenset[int]:
        return frozenset(range(len(self.records)))

    def id_for_text(self, text: str) -> int:
        for r in self.records:
            if r.text == text:
                return r.id
        raise DataError(f"no keyword with text {text!r}")

    def content(self) -> tuple:
        """Order-normalized content, for equality checks."""
        return (self.records, tuple(self.graph.edges()))


def _parse_int(s: str, name: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise ValueError(f"{name} is not an integer: {s!r}") from None


def _parse_keyword_row(row: dict[str, str]) -> KeywordRecord:
    ctr = float(row["ctr"])
    if not math.isfinite(ctr):
        raise ValueError(f"ctr is not finite: {row['ctr']!r}")
    return KeywordRecord(
        id=_parse_int(row["id"], "id"),
        text=row["text"],
        impressions=_parse_int(row["impressions"], "impressions"),
        clicks=_parse_int(row["clicks"], "clicks"),
        cpc_micros=to_micros(row["cpc"]),
        ctr=ctr,
        rpc_micros=to_micros(row["revenue_per_click"]),
    )


def _read_csv(path: Path, fields: list[str]) -> list[tuple[int, dict[str, str]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != fields:
            raise DataError(f"{path}:1: expected header {','.join(fields)}")
        rows = []
        for row in reader:
            if not row:
                continue
            if len(row) != len(fields):
                raise DataError(
                    f"{path}:{reader.line_num}: expected {len(fields)} fields, got {len(row)}"
                )
            rows.append((reader.line_num, dict(zip(fields, (c.strip() for c in row)))))
    return rows


def load_dataset(keywords_file: str | os.PathLike, edges_file: str | os.PathLike) -> Dataset:
    """Read ``keywords.csv`` and ``edges.csv`` into a validated Dataset.

    Keyword ids must be exactly ``0..N-1`` (any row order). Raises
    ``FileNotFoundError`` for missing files and ``DataError`` (with the
    offending line number) for anything malformed.
    """
    kw_path, edge_path = Path(keywords_file), Path(edges_file)
    for p in (kw_path, edge_path):
        if not p.is_file():
            raise FileNotFoundError(f"no such file: {p}")

    by_id: dict[int, KeywordRecord] = {}
    for line, row in _read_csv(kw_path, KEYWORD_FIELDS):
        try:
            rec = _parse_keyword_row(row)
        except (ValueError, DataError) as exc:
            raise DataError(f"{kw_path}:{line}: {exc}") from None
        if rec.id in by_id:
            raise DataError(f"{kw_path}:{line}: duplicate keyword id {rec.id}")
        by_id[rec.id] = rec
    n = len(by_id)
    if set(by_id) != set(range(n)):
        raise DataError(f"{kw_path}: keyword ids must be exactly 0..{n - 1}")

    edges = []
    for line, row in _read_csv(edge_path, EDGE_FIELDS):
        try:
            a = _parse_int(row["source"], "source")
            b = _parse_int(row["target"], "target")
        except ValueError as exc:
            raise DataError(f"{edge_path}:{line}: {exc}") from None
        if a == b:
            raise DataError(f"{edge_path}:{line}: self-loop on keyword {a}")
        if a not in by_id or b not in by_id:
            raise DataError(f"{edge_path}:{line}: edge {a}-{b} references unknown keyword")
        edges.append((a, b))

    try:
        graph = KeywordGraph.from_edges(n, edges)
    except GraphError as exc:
        raise DataError(str(exc)) from None
    return Dataset(tuple(by_id[i] for i in range(n)), graph)


def keywords_csv(dataset: Dataset) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(KEYWORD_FIELDS)
    for r in dataset.records:
        w.writerow([r.id, r.text, r.impressions, r.clicks, format_micros(r.cpc_micros),
                    repr(r.ctr), format_micros(r.rpc_micros)])
    return buf.getvalue()


def edges_csv(dataset: Dataset) -> str:
    lines = [",".join(EDGE_FIELDS)] + [f"{a},{b}" for a, b in dataset.graph.edges()]
    return "\n".join(lines) + "\n"


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    """Write via a temp file in the same directory, then rename over ``path``."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_dataset(dataset: Dataset, keywords_file: str | os.PathLike,
                  edges_file: str | os.PathLike) -> None:
    atomic_write_text(keywords_file, keywords_csv(dataset))
    atomic_write_text(edges_file, edges_csv(dataset))


@dataclass(frozen=True)
class SynthConfig:
    """Planted-partition keyword pool. Ranges are inclusive ``[low, high]``."""

    n_keywords: int = 120
    rng_seed: int = 7
    n_clusters: int = 3
    intra_edge_prob: float = 0.3
    inter_edge_prob: float = 0.02
    clicks_range: tuple[int, int] = (0, 500)
    ctr_range: tuple[float, float] = (0.01, 0.10)
    cpc_range: tuple[float, float] = (0.20, 2.00)
    rpc_range: tuple[float, float] = (0.10, 3.00)
    price_tick: float = 0.01

    def validate(self) -> None:
        if self.n_keywords <= 0:
            raise ConfigError("n_keywords must be positive")
        if not 1 <= self.n_clusters <= self.n_keywords:
            raise ConfigError("n_clusters must lie in 1..n_keywords")
        for name in ("intra_edge_prob", "inter_edge_prob"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1]")
        if not self.intra_edge_prob > self.inter_edge_prob:
            raise ConfigError("intra_edge_prob must exceed inter_edge_prob")
        for name in ("clicks_range", "ctr_range", "cpc_range", "rpc_range"):
            lo, hi = getattr(self, name)
            if lo < 0 or hi < lo:
                raise ConfigError(f"{name} must satisfy 0 <= low <= high")
        if not (0 < self.ctr_range[0] and self.ctr_range[1] <= 1):
            raise ConfigError("ctr_range must lie in (0, 1]")
        try:
            tick = to_micros(self.price_tick)
        except ValueError as exc:
            raise ConfigError(f"price_tick: {exc}") from None
        if tick <= 0:
            raise ConfigError("price_tick must be positive")
        for name in ("cpc_range", "rpc_range"):
            lo, hi = (to_micros(v) for v in getattr(self, name))
            if -(-lo // tick) > hi // tick:
                raise ConfigError(f"{name} contains no multiple of price_tick")

    @classmethod
    def from_json(cls, path: str | os.PathLike) -> "SynthConfig":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise ConfigError("synth config must be a JSON object")
        unknown = set(raw) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise ConfigError(f"unknown synth config fields: {sorted(unknown)}")
        for k, v in raw.items():
            if k.endswith("_range"):
                raw[k] = tuple(v)
        return cls(**raw)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"


def planted_blocks(cfg: SynthConfig) -> list[int]:
    """Block label per keyword: contiguous, near-equal blocks."""
    return [i * cfg.n_clusters // cfg.n_keywords for i in range(cfg.n_keywords)]


def _prices(rng: np.random.Generator, lo: float, hi: float, tick: int, n: int) -> list[int]:
    """Uniform prices on the ``tick`` grid (micro-units) within ``[lo, hi]``."""
    lo_t = -(-to_micros(lo) // tick)
    hi_t = to_micros(hi) // tick
    return [int(t) * tick for t in rng.integers(lo_t, hi_t + 1, size=n)]


def synthesize(cfg: SynthConfig) -> Dataset:
    """Deterministic planted-partition pool; a pure function of ``cfg``."""
    cfg.validate()
    n = cfg.n_keywords
    rng = np.random.default_rng(cfg.rng_seed)
    blocks = np.array(planted_blocks(cfg))
    draws = rng.random((n, n))
    same = blocks[:, None] == blocks[None, :]
    prob = np.where(same, cfg.intra_edge_prob, cfg.inter_edge_prob)
    upper = np.triu(draws < prob, k=1)
    edges = [(int(a), int(b)) for a, b in zip(*np.nonzero(upper))]

    clicks = rng.integers(cfg.clicks_range[0], cfg.clicks_range[1] + 1, size=n)
    ctrs = rng.uniform(cfg.ctr_range[0], cfg.ctr_range[1], size=n)
    tick = to_micros(cfg.price_tick)
    cpcs = _prices(rng, *cfg.cpc_range, tick, n)
    rpcs = _prices(rng, *cfg.rpc_range, tick, n)
    records = []
    for i in range(n):
        c = int(clicks[i])
        imps = max(c, math.ceil(c / ctrs[i])) if c else 0
        records.append(KeywordRecord(
            id=i,
            text=f"keyword {i:04d}",
            impressions=imps,
            clicks=c,
            cpc_micros=cpcs[i],
            ctr=round(c / imps, 6) if imps else 0.0,
            rpc_micros=rpcs[i],
        ))
    return Dataset(tuple(records), KeywordGraph.from_edges(n, edges))
