"""Morphology-driven quality metrics for agglutinative text.

Two per-document indicators drive the filter: the Shannon entropy of the
nominal-case distribution (varied case usage marks prose-like text) and
lemma diversity (distinct lemmas / analyzed tokens, low values mark
boilerplate). A rule-based case analyzer ships as the default backend;
a full morphological analyzer can be injected through the provider
interface.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import (
    Case,
    ConfigError,
    Document,
    EmptyInputError,
    MorphAnalysis,
    MorphAnalyzerProvider,
    Pos,
    StageDecision,
    TokenizerProvider,
    dropped,
    passed,
)

DEFAULT_TAU_SUFFIX = 0.75
DEFAULT_TAU_LEMMA = 0.50
DEFAULT_MIN_ANALYZED_TOKENS = 10

_TOKEN_RE = re.compile(r"[^\W\d_]+", re.UNICODE)

_BACK_VOWELS = frozenset("aıou")
_FRONT_VOWELS = frozenset("eiöü")
_VOWELS = _BACK_VOWELS | _FRONT_VOWELS

# case suffixes with their harmony class: 2-way classes "a"/"e", 4-way
# classes "ı"/"i"/"u"/"ü"; the class must agree with the stem's final vowel
_SUFFIX_TABLE: tuple[tuple[str, Case, str], ...] = (
    # accusative
    ("ı", Case.ACC, "ı"), ("i", Case.ACC, "i"), ("u", Case.ACC, "u"), ("ü", Case.ACC, "ü"),
    ("yı", Case.ACC, "ı"), ("yi", Case.ACC, "i"), ("yu", Case.ACC, "u"), ("yü", Case.ACC, "ü"),
    # dative
    ("a", Case.DAT, "a"), ("e", Case.DAT, "e"), ("ya", Case.DAT, "a"), ("ye", Case.DAT, "e"),
    # locative
    ("da", Case.LOC, "a"), ("de", Case.LOC, "e"), ("ta", Case.LOC, "a"), ("te", Case.LOC, "e"),
    # ablative
    ("dan", Case.ABL, "a"), ("den", Case.ABL, "e"), ("tan", Case.ABL, "a"), ("ten", Case.ABL, "e"),
    # genitive
    ("ın", Case.GEN, "ı"), ("in", Case.GEN, "i"), ("un", Case.GEN, "u"), ("ün", Case.GEN, "ü"),
    ("nın", Case.GEN, "ı"), ("nin", Case.GEN, "i"), ("nun", Case.GEN, "u"), ("nün", Case.GEN, "ü"),
    # instrumental
    ("la", Case.INS, "a"), ("le", Case.INS, "e"), ("yla", Case.INS, "a"), ("yle", Case.INS, "e"),
)

# longest suffixes first so e.g. "-dan" wins over "-a"
_SUFFIXES_BY_LENGTH = sorted(_SUFFIX_TABLE, key=lambda row: -len(row[0]))

_HARMONY_MATCH: dict[str, frozenset[str]] = {
    "a": _BACK_VOWELS,
    "e": _FRONT_VOWELS,
    "ı": frozenset("aı"),
    "i": frozenset("ei"),
    "u": frozenset("ou"),
    "ü": frozenset("öü"),
}


def turkish_lower(token: str) -> str:
    """Lowercase with the Turkic dotted/dotless i mapping."""
    return token.replace("İ", "i").replace("I", "ı").lower()


def _final_vowel(stem: str) -> str | None:
    for ch in reversed(stem):
        if ch in _VOWELS:
            return ch
    return None


def analyze_rule_based(token: str) -> MorphAnalysis | None:
    """Longest-suffix-match case analysis with vowel-harmony agreement.

    The matched suffix's harmony class must agree with the final vowel of
    the remaining stem, otherwise the candidate is rejected and shorter
    suffixes are tried. Unsuffixed tokens of length >= 2 are nominative.
    Tokens shorter than 2 characters or containing digits are unanalyzable.
    """
    if len(token) < 2 or any(ch.isdigit() for ch in token):
        return None
    word = turkish_lower(token)
    for suffix, case, harmony in _SUFFIXES_BY_LENGTH:
        if not word.endswith(suffix) or len(word) <= len(suffix):
            continue
        stem = word[: -len(suffix)]
        vowel = _final_vowel(stem)
        if vowel is None or vowel not in _HARMONY_MATCH[harmony]:
            continue
        return MorphAnalysis(lemma=stem, pos=Pos.NOUN, case=case)
    return MorphAnalysis(lemma=word, pos=Pos.NOUN, case=Case.NOM)


class RuleBasedAnalyzer:
    """Provider wrapper around :func:`analyze_rule_based`."""

    def analyze(self, token: str) -> MorphAnalysis | None:
        return analyze_rule_based(token)


@dataclass
class MorphMetrics:
    suffix_entropy: float  # nats
    suffix_entropy_norm: float
    lemma_diversity: float
    analyzed_token_count: int
    distinct_case_count: int


@dataclass
class MorphFilterConfig:
    tau_suffix: float = DEFAULT_TAU_SUFFIX
    tau_lemma: float = DEFAULT_TAU_LEMMA
    min_analyzed_tokens: int = DEFAULT_MIN_ANALYZED_TOKENS

    def __post_init__(self):
        for name in ("tau_suffix", "tau_lemma"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1]")
        if self.min_analyzed_tokens < 0:
            raise ConfigError("min_analyzed_tokens must be >= 0")


def case_entropy(case_counts: dict[Case, int] | Counter) -> tuple[float, float, int]:
    """(entropy in nats, normalized entropy, distinct case count).

    Normalized entropy divides by log of the distinct-tag count and is 0
    by convention when fewer than two tags are observed.
    """
    counts = [c for c in case_counts.values() if c > 0]
    total = sum(counts)
    n = len(counts)
    if total == 0 or n == 0:
        return 0.0, 0.0, 0
    entropy = -sum((c / total) * math.log(c / total) for c in counts)
    norm = entropy / math.log(n) if n >= 2 else 0.0
    return entropy, norm, n


def compute_morph_metrics(
    doc: Document, analyzer: MorphAnalyzerProvider
) -> MorphMetrics:
    """Tokenize, analyze and aggregate the per-document morphology scores.

    Documents with zero analyzable tokens get all-zero metrics rather than
    an error.
    """
    case_counts: Counter = Counter()
    lemmas: set[str] = set()
    analyzed = 0
    for token in _TOKEN_RE.findall(doc.text):
        analysis = analyzer.analyze(token)
        if analysis is None:
            continue
        analyzed += 1
        lemmas.add(analysis.lemma)
        if analysis.case is not None:
            case_counts[analysis.case] += 1
    entropy, norm, n_cases = case_entropy(case_counts)
    diversity = len(lemmas) / analyzed if analyzed else 0.0
    return MorphMetrics(
        suffix_entropy=entropy,
        suffix_entropy_norm=norm,
        lemma_diversity=diversity,
        analyzed_token_count=analyzed,
        distinct_case_count=n_cases,
    )


def filter_morph(
    doc: Document, cfg: MorphFilterConfig, analyzer: MorphAnalyzerProvider
) -> StageDecision:
    """Keep iff enough tokens analyze AND both scores strictly exceed their
    thresholds (the production operating point keeps norm > 0.75 and
    diversity > 0.50)."""
    m = compute_morph_metrics(doc, analyzer)
    measurements = {
        "suffix_entropy_norm": m.suffix_entropy_norm,
        "lemma_diversity": m.lemma_diversity,
        "analyzed_token_count": float(m.analyzed_token_count),
    }
    if m.analyzed_token_count < cfg.min_analyzed_tokens:
        return dropped("morph_quality", "insufficient_morphology", **measurements)
    if not m.suffix_entropy_norm > cfg.tau_suffix:
        return dropped("morph_quality", "low_suffix_entropy", **measurements)
    if not m.lemma_diversity > cfg.tau_lemma:
        return dropped("morph_quality", "low_lemma_diversity", **measurements)
    return passed("morph_quality", **measurements)


@dataclass
class SweepRow:
    tau_suffix: float
    tau_lemma: float
    surviving_docs: int
    surviving_tokens: int
    drop_ratio: float
    token_mean: float
    token_std: float
    token_min: float
    token_q25: float
    token_median: float
    token_q75: float
    token_max: float


@dataclass
class SweepReport:
    rows: list[SweepRow]

    COLUMNS = (
        "tau_suffix", "tau_lemma", "surviving_docs", "surviving_tokens",
        "drop_ratio", "token_mean", "token_std", "token_min", "token_q25",
        "token_median", "token_q75", "token_max",
    )


def _token_stats(counts: np.ndarray) -> tuple[float, ...]:
    if counts.size == 0:
        return (0.0,) * 7
    q25, q50, q75 = np.percentile(counts, [25, 50, 75])
    return (
        float(counts.mean()),
        float(counts.std()),
        float(counts.min()),
        float(q25),
        float(q50),
        float(q75),
        float(counts.max()),
    )


def sweep_thresholds(
    docs: Iterable[Document],
    suffix_grid: Sequence[float],
    lemma_grid: Sequence[float],
    tokenizer: TokenizerProvider,
    analyzer: MorphAnalyzerProvider | None = None,
    min_analyzed_tokens: int = DEFAULT_MIN_ANALYZED_TOKENS,
) -> SweepReport:
    """Coarse-to-fine threshold sweep.

    One row per (tau_suffix, tau_lemma) pair in grid-product order with
    retention and token-length statistics over the surviving documents.
    Morph metrics and token counts are computed once per document and
    reused across the whole grid.
    """
    if not suffix_grid or not lemma_grid:
        raise ConfigError("threshold grids must be non-empty")
    for value in (*suffix_grid, *lemma_grid):
        if not 0.0 <= value <= 1.0:
            raise ConfigError(f"grid values must be in [0, 1], got {value}")
    analyzer = analyzer or RuleBasedAnalyzer()

    doc_list = docs if isinstance(docs, list) else list(docs)
    if not doc_list:
        raise EmptyInputError("empty_input")

    norms = np.empty(len(doc_list))
    diversities = np.empty(len(doc_list))
    eligible = np.empty(len(doc_list), dtype=bool)
    token_counts = np.empty(len(doc_list), dtype=np.int64)
    for i, doc in enumerate(doc_list):
        m = compute_morph_metrics(doc, analyzer)
        norms[i] = m.suffix_entropy_norm
        diversities[i] = m.lemma_diversity
        eligible[i] = m.analyzed_token_count >= min_analyzed_tokens
        token_counts[i] = tokenizer.count_tokens(doc.text)

    total = len(doc_list)
    rows: list[SweepRow] = []
    for tau_s in suffix_grid:
        surviving_suffix = eligible & (norms > tau_s)
        for tau_l in lemma_grid:
            mask = surviving_suffix & (diversities > tau_l)
            surviving = int(mask.sum())
            survivor_tokens = token_counts[mask]
            stats = _token_stats(survivor_tokens)
            rows.append(
                SweepRow(
                    tau_suffix=float(tau_s),
                    tau_lemma=float(tau_l),
                    surviving_docs=surviving,
                    surviving_tokens=int(survivor_tokens.sum()),
                    drop_ratio=1.0 - surviving / total,
                    token_mean=stats[0],
                    token_std=stats[1],
                    token_min=stats[2],
                    token_q25=stats[3],
                    token_median=stats[4],
                    token_q75=stats[5],
                    token_max=stats[6],
                )
            )
    return SweepReport(rows)
