"""Exact-hash and embedding-based near-duplicate removal.

Both passes keep the first occurrence (first-seen representative policy)
and emit one decision per input document in input order, so re-running
either pass on its own output removes nothing. Exact matching hashes
NFC-normalized text bytes (128-bit BLAKE2) and confirms every hash hit by
byte comparison before dropping. Semantic matching drops a document when
its cosine similarity to any already-retained document reaches the
threshold (inclusive).
"""

from __future__ import annotations

import enum
import hashlib
import unicodedata
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from . import _kernels
from .core import ConfigError, Document, EmbeddingProvider

GENERAL_PROFILE_THRESHOLD = 0.75
LEGAL_PROFILE_THRESHOLD = 0.95

PROFILE_THRESHOLDS = {
    "general": GENERAL_PROFILE_THRESHOLD,
    "legal": LEGAL_PROFILE_THRESHOLD,
}


class DedupMode(enum.Enum):
    EXACT = "exact"
    SEMANTIC = "semantic"
    BOTH = "both"


@dataclass
class DedupConfig:
    mode: DedupMode = DedupMode.BOTH
    similarity_threshold: float = GENERAL_PROFILE_THRESHOLD
    keep_policy: str = "first_seen"

    def __post_init__(self):
        if isinstance(self.mode, str):
            self.mode = DedupMode(self.mode)
        if not 0.0 <= self.similarity_threshold <= 1.0:
            raise ConfigError("similarity_threshold must be in [0, 1]")
        if self.keep_policy != "first_seen":
            raise ConfigError("only the first_seen keep policy is implemented")

    @classmethod
    def for_profile(cls, profile: str, mode: DedupMode = DedupMode.BOTH) -> "DedupConfig":
        if profile not in PROFILE_THRESHOLDS:
            raise ConfigError(f"unknown profile {profile!r}; choose from {sorted(PROFILE_THRESHOLDS)}")
        return cls(mode=mode, similarity_threshold=PROFILE_THRESHOLDS[profile])


@dataclass
class DedupDecision:
    kept: bool
    mode: str = ""
    duplicate_of: str | None = None
    similarity: float | None = None
    error: str | None = None

    def to_json_obj(self, doc_id: str) -> dict:
        obj: dict = {"id": doc_id, "kept": self.kept}
        if self.duplicate_of is not None:
            obj["duplicate_of"] = self.duplicate_of
        if self.similarity is not None:
            obj["similarity"] = self.similarity
        if self.mode:
            obj["mode"] = self.mode
        if self.error:
            obj["error"] = self.error
        return obj


def _text_hash(text: str) -> bytes:
    normalized = unicodedata.normalize("NFC", text).encode("utf-8")
    return hashlib.blake2b(normalized, digest_size=16).digest()


def dedup_exact(
    docs: Iterable[Document],
) -> Iterator[tuple[Document, DedupDecision]]:
    """Drop byte-identical texts, keeping the first occurrence.

    Hash hits are confirmed by comparing the normalized text itself, so a
    hash collision can never delete a non-duplicate.
    """
    seen: dict[bytes, list[tuple[str, str]]] = {}
    for doc in docs:
        normalized = unicodedata.normalize("NFC", doc.text)
        key = _text_hash(doc.text)
        bucket = seen.get(key)
        duplicate_of = None
        if bucket is not None:
            for kept_id, kept_text in bucket:
                if kept_text == normalized:
                    duplicate_of = kept_id
                    break
        if duplicate_of is not None:
            yield doc, DedupDecision(kept=False, mode="exact", duplicate_of=duplicate_of)
            continue
        if bucket is None:
            seen[key] = [(doc.id, normalized)]
        else:
            bucket.append((doc.id, normalized))
        yield doc, DedupDecision(kept=True, mode="exact")


def dedup_semantic(
    docs: Iterable[Document],
    cfg: DedupConfig,
    embedder: EmbeddingProvider,
) -> Iterator[tuple[Document, DedupDecision]]:
    """Greedy first-seen near-duplicate removal in cosine space.

    Embeddings are L2-normalized; a document is dropped iff its maximum
    similarity to the already-retained set is >= the threshold, and
    ``duplicate_of`` names the most-similar retained document. Embedding
    failures keep the document (flagged ``embed_error``) — dedup must not
    silently delete.

    The input stream is materialized internally: embeddings are computed
    up front (that part may fan out), then the sequential decision scan
    runs as one kernel call.
    """
    doc_list = docs if isinstance(docs, list) else list(docs)
    n = len(doc_list)
    if n == 0:
        return

    dim = embedder.dimension
    embeddings = np.zeros((n, dim), dtype=np.float64)
    embed_errors: dict[int, str] = {}
    ok_rows: list[int] = []
    for i, doc in enumerate(doc_list):
        try:
            vec = np.asarray(embedder.embed(doc.text), dtype=np.float64)
            if vec.shape != (dim,):
                raise ValueError(f"expected dimension {dim}, got {vec.shape}")
            if not np.all(np.isfinite(vec)):
                raise ValueError("non-finite embedding component")
            norm = float(np.linalg.norm(vec))
            if norm == 0.0:
                raise ValueError("zero-norm embedding")
        except Exception as exc:
            embed_errors[i] = str(exc)
            continue
        embeddings[len(ok_rows)] = vec / norm
        ok_rows.append(i)

    dup_idx, best_sim = _kernels.greedy_dedup_scan(
        embeddings[: len(ok_rows)], cfg.similarity_threshold
    )

    decisions: dict[int, DedupDecision] = {}
    for row, doc_idx in enumerate(ok_rows):
        if dup_idx[row] < 0:
            decisions[doc_idx] = DedupDecision(kept=True, mode="semantic")
        else:
            keeper = doc_list[ok_rows[int(dup_idx[row])]]
            decisions[doc_idx] = DedupDecision(
                kept=False,
                mode="semantic",
                duplicate_of=keeper.id,
                similarity=float(best_sim[row]),
            )
    for i, doc in enumerate(doc_list):
        if i in embed_errors:
            yield doc, DedupDecision(kept=True, mode="semantic", error=f"embed_error: {embed_errors[i]}")
        else:
            yield doc, decisions[i]


def dedup_stream(
    docs: Iterable[Document],
    cfg: DedupConfig,
    embedder: EmbeddingProvider | None = None,
) -> Iterator[tuple[Document, DedupDecision]]:
    """Run the configured mode; Both = exact pass feeding the semantic pass.

    Emits one decision per input document (dropped docs keep their
    first-pass decision).
    """
    if cfg.mode in (DedupMode.SEMANTIC, DedupMode.BOTH) and embedder is None:
        raise ConfigError("semantic dedup requires an embedding provider")
    if cfg.mode == DedupMode.EXACT:
        yield from dedup_exact(docs)
        return
    if cfg.mode == DedupMode.SEMANTIC:
        yield from dedup_semantic(docs, cfg, embedder)
        return
    doc_list = docs if isinstance(docs, list) else list(docs)
    decisions: list[DedupDecision | None] = [None] * len(doc_list)
    survivor_indices: list[int] = []
    for i, (_, decision) in enumerate(dedup_exact(doc_list)):
        if decision.kept:
            survivor_indices.append(i)
        else:
            decisions[i] = decision
    survivors = [doc_list[i] for i in survivor_indices]
    for idx, (_, decision) in zip(survivor_indices, dedup_semantic(survivors, cfg, embedder)):
        decisions[idx] = decision
    for doc, decision in zip(doc_list, decisions):
        yield doc, decision


@dataclass
class DedupSummary:
    total: int = 0
    kept: int = 0
    dropped_exact: int = 0
    dropped_semantic: int = 0
    duplicate_ratio: float = 0.0

    def to_json_obj(self) -> dict:
        return {
            "total": self.total,
            "kept": self.kept,
            "dropped_exact": self.dropped_exact,
            "dropped_semantic": self.dropped_semantic,
            "duplicate_ratio": self.duplicate_ratio,
        }


def dedup_report(decisions: Iterable[DedupDecision]) -> DedupSummary:
    """Aggregate counts; kept + dropped == total always holds."""
    summary = DedupSummary()
    for decision in decisions:
        summary.total += 1
        if decision.kept:
            summary.kept += 1
        elif decision.mode == "exact":
            summary.dropped_exact += 1
        else:
            summary.dropped_semantic += 1
    if summary.total:
        summary.duplicate_ratio = (summary.total - summary.kept) / summary.total
    return summary
