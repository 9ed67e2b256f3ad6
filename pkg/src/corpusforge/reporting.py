"""Corpus statistics, token-weighted perplexity and the deployment
efficiency composite, plus byte-stable CSV/JSON report emission."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import Document, EmptyInputError, TokenizerProvider

RETRIEVAL_WEIGHT = 0.40
LEGAL_WEIGHT = 0.40
PARAMS_PENALTY = 0.05
INGEST_PENALTY = 0.05
SEQ_LEN_BONUS = 0.05  # applies when max_seq_len > 512, else same-size penalty
EMB_DIM_BONUS = 0.05  # applies when emb_dim < 2048, else same-size penalty
SEQ_LEN_CUTOFF = 512
EMB_DIM_CUTOFF = 2048


@dataclass
class TokenStats:
    doc_count: int
    token_total: int
    token_mean: float
    token_std: float
    token_min: float
    token_q25: float
    token_median: float
    token_q75: float
    token_max: float

    COLUMNS = (
        "doc_count", "token_total", "token_mean", "token_std", "token_min",
        "token_q25", "token_median", "token_q75", "token_max",
    )

    def row(self) -> list:
        return [getattr(self, col) for col in self.COLUMNS]


def token_stats_from_counts(counts: Sequence[int]) -> TokenStats:
    """Exact statistics; quartiles use linear interpolation between ranks."""
    if len(counts) == 0:
        raise EmptyInputError("empty_input")
    arr = np.asarray(counts, dtype=np.int64)
    q25, q50, q75 = np.percentile(arr, [25, 50, 75])
    return TokenStats(
        doc_count=int(arr.size),
        token_total=int(arr.sum()),
        token_mean=float(arr.mean()),
        token_std=float(arr.std()),
        token_min=float(arr.min()),
        token_q25=float(q25),
        token_median=float(q50),
        token_q75=float(q75),
        token_max=float(arr.max()),
    )


def compute_token_stats(
    docs: Iterable[Document], tokenizer: TokenizerProvider
) -> TokenStats:
    counts = [tokenizer.count_tokens(doc.text) for doc in docs]
    return token_stats_from_counts(counts)


@dataclass
class DomainPerplexity:
    domain: str
    ppl: float
    token_count: int

    def __post_init__(self):
        if self.ppl <= 0:
            raise ValueError("ppl must be positive")
        if self.token_count <= 0:
            raise ValueError("token_count must be positive")


def weighted_perplexity(rows: Sequence[DomainPerplexity]) -> float:
    """Token-weighted average across domains."""
    if not rows:
        raise EmptyInputError("empty_input")
    total_tokens = sum(r.token_count for r in rows)
    return sum(r.ppl * r.token_count for r in rows) / total_tokens


@dataclass
class EfficiencyInput:
    model: str
    retrieval: float
    legal: float
    params_millions: float
    avg_ingest_time_s: float
    max_seq_len: int
    emb_dim: int

    def __post_init__(self):
        numeric = (
            self.retrieval, self.legal, self.params_millions, self.avg_ingest_time_s,
        )
        if not all(np.isfinite(numeric)):
            raise ValueError("all numeric fields must be finite")
        if self.params_millions <= 0 or self.avg_ingest_time_s <= 0:
            raise ValueError("params and ingest time must be positive")
        if self.max_seq_len <= 0 or self.emb_dim <= 0:
            raise ValueError("max_seq_len and emb_dim must be positive")


def _minmax(values: np.ndarray) -> np.ndarray:
    lo, hi = float(values.min()), float(values.max())
    if hi == lo:
        # zero range: every model sits mid-scale
        return np.full(values.shape, 0.5)
    return (values - lo) / (hi - lo)


def degenerate_columns(models: Sequence[EfficiencyInput]) -> list[str]:
    """Names of normalization columns whose value range is zero."""
    names = ("retrieval", "legal", "params_millions", "avg_ingest_time_s")
    out = []
    for name in names:
        values = [getattr(m, name) for m in models]
        if max(values) == min(values):
            out.append(name)
    return out


def production_efficiency(
    models: Sequence[EfficiencyInput],
) -> list[tuple[str, float]]:
    """Composite deployment score, best model anchored at 100.00.

    Retrieval and legal scores contribute +40% each after min-max
    normalization over the supplied set; parameter count and ingestion
    time contribute -5% each; sequence length and embedding dimension add
    a fixed +-5% step around their cutoffs. Raw composites are scaled so
    the maximum equals 100; output is sorted descending.
    """
    if len(models) < 2:
        raise ValueError("need at least 2 models to normalize")
    ret = _minmax(np.array([m.retrieval for m in models], dtype=np.float64))
    legal = _minmax(np.array([m.legal for m in models], dtype=np.float64))
    params = _minmax(np.array([m.params_millions for m in models], dtype=np.float64))
    ingest = _minmax(np.array([m.avg_ingest_time_s for m in models], dtype=np.float64))
    raw = (
        RETRIEVAL_WEIGHT * ret
        + LEGAL_WEIGHT * legal
        - PARAMS_PENALTY * params
        - INGEST_PENALTY * ingest
        + np.array([
            SEQ_LEN_BONUS if m.max_seq_len > SEQ_LEN_CUTOFF else -SEQ_LEN_BONUS
            for m in models
        ])
        + np.array([
            EMB_DIM_BONUS if m.emb_dim < EMB_DIM_CUTOFF else -EMB_DIM_BONUS
            for m in models
        ])
    )
    # the retrieval-max model alone guarantees max(raw) >= 0.2 > 0
    scores = raw * (100.0 / float(raw.max()))
    ranked = sorted(zip((m.model for m in models), scores), key=lambda kv: -kv[1])
    return [(name, float(score)) for name, score in ranked]


# --- report emission --------------------------------------------------------


@dataclass
class ReportTable:
    name: str
    columns: Sequence[str]
    rows: Sequence[Sequence]


def format_cell(value) -> str:
    """Fixed formatting: floats at 6 significant digits, '.' separator."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def _json_value(value):
    if isinstance(value, float):
        return float(f"{value:.6g}")
    if isinstance(value, np.integer):
        return int(value)
    return value


def emit_report(sections: Sequence[ReportTable], out_dir: str | Path) -> list[Path]:
    """One CSV per table plus a combined ``report.json``.

    Byte-stable for identical inputs: fixed column order, fixed float
    formatting, no timestamps.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    combined: dict = {}
    for table in sections:
        csv_path = out_dir / f"{table.name}.csv"
        with open(csv_path, "w", encoding="utf-8") as fh:
            fh.write(",".join(table.columns) + "\n")
            for row in table.rows:
                fh.write(",".join(format_cell(v) for v in row) + "\n")
        written.append(csv_path)
        combined[table.name] = [
            {col: _json_value(v) for col, v in zip(table.columns, row)}
            for row in table.rows
        ]
    json_path = out_dir / "report.json"
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(combined, fh, ensure_ascii=False, indent=2)
        fh.write("\n")
    written.append(json_path)
    return written
