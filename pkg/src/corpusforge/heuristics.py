"""Structural quality metrics and filter (FineWeb-style indicators).

Three indicators with strict-exceed drop semantics: short-line ratio,
duplicated-character ratio and newline-to-token ratio. The shipped
thresholds (0.67 / 0.03 / 0.4) are the tuned production operating point.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import Document, EmptyInputError, StageDecision, dropped, passed

DEFAULT_SHORT_LINE = 0.67
DEFAULT_CHAR_DUPLICATES = 0.03
DEFAULT_NEW_LINE = 0.4
DEFAULT_SHORT_LINE_LENGTH = 30


def split_lines(text: str) -> list[str]:
    """Split on ``\\n`` only, with ``\\r`` stripped.

    A single trailing newline is a terminator, not an extra empty line;
    interior blank lines are real lines.
    """
    parts = text.replace("\r", "").split("\n")
    if len(parts) > 1 and parts[-1] == "":
        parts.pop()
    return parts


@dataclass
class HeuristicThresholds:
    short_line: float = DEFAULT_SHORT_LINE
    char_duplicates: float = DEFAULT_CHAR_DUPLICATES
    new_line: float = DEFAULT_NEW_LINE
    short_line_length: int = DEFAULT_SHORT_LINE_LENGTH

    def __post_init__(self):
        for name in ("short_line", "char_duplicates", "new_line"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")
        if self.short_line_length <= 0:
            raise ValueError("short_line_length must be positive")


@dataclass
class HeuristicMetrics:
    short_line_ratio: float
    char_dup_ratio: float
    newline_ratio: float
    line_count: int


def measure_heuristics(doc: Document, cfg: HeuristicThresholds) -> HeuristicMetrics:
    """Compute the three indicators.

    short_line_ratio: lines shorter than ``short_line_length`` / lines.
    char_dup_ratio: characters on lines whose exact content repeats / all
    line characters (newlines excluded from both sides).
    newline_ratio: newline count / whitespace-delimited tokens (floor 1).
    """
    text = doc.text.replace("\r", "")
    lines = split_lines(text)
    n_lines = len(lines)

    short = sum(1 for ln in lines if len(ln) < cfg.short_line_length)
    short_line_ratio = short / n_lines if n_lines else 0.0

    counts = Counter(lines)
    total_chars = sum(len(ln) for ln in lines)
    dup_chars = sum(len(ln) for ln in lines if counts[ln] > 1)
    char_dup_ratio = dup_chars / total_chars if total_chars else 0.0

    n_tokens = max(len(text.split()), 1)
    newline_ratio = text.count("\n") / n_tokens

    return HeuristicMetrics(
        short_line_ratio=short_line_ratio,
        char_dup_ratio=char_dup_ratio,
        newline_ratio=min(newline_ratio, 1.0),
        line_count=n_lines,
    )


def filter_heuristic(doc: Document, cfg: HeuristicThresholds) -> StageDecision:
    """Drop iff any metric strictly exceeds its threshold; the reason names
    the first violated metric in (short_line, char_duplicates, new_line)
    order."""
    m = measure_heuristics(doc, cfg)
    measurements = {
        "short_line_ratio": m.short_line_ratio,
        "char_dup_ratio": m.char_dup_ratio,
        "newline_ratio": m.newline_ratio,
    }
    if m.short_line_ratio > cfg.short_line:
        return dropped("heuristic_quality", "short_line", **measurements)
    if m.char_dup_ratio > cfg.char_duplicates:
        return dropped("heuristic_quality", "char_duplicates", **measurements)
    if m.newline_ratio > cfg.new_line:
        return dropped("heuristic_quality", "new_line", **measurements)
    return passed("heuristic_quality", **measurements)


def evaluate_grid(
    docs: Iterable[Document], configs: Sequence[HeuristicThresholds]
) -> list[tuple[HeuristicThresholds, float]]:
    """Drop ratio of every candidate configuration over the full dataset.

    Metrics are measured once per (document, short_line_length) pair and
    compared against each configuration, so the grid pass stays linear in
    the corpus size.
    """
    if not configs:
        raise ValueError("configs must be non-empty")
    doc_list = docs if isinstance(docs, list) else list(docs)
    if not doc_list:
        raise EmptyInputError("empty_input")

    lengths = sorted({cfg.short_line_length for cfg in configs})
    metrics_by_length = {
        length: [
            measure_heuristics(d, HeuristicThresholds(1, 1, 1, length))
            for d in doc_list
        ]
        for length in lengths
    }

    rows: list[tuple[HeuristicThresholds, float]] = []
    for cfg in configs:
        metrics = metrics_by_length[cfg.short_line_length]
        dropped_n = sum(
            1
            for m in metrics
            if m.short_line_ratio > cfg.short_line
            or m.char_dup_ratio > cfg.char_duplicates
            or m.newline_ratio > cfg.new_line
        )
        rows.append((cfg, dropped_n / len(doc_list)))
    return rows
