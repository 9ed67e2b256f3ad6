"""Corpus data model and the provider interfaces consumed by every stage.

A corpus is a stream of :class:`Document` records. Stages are pure functions
``(Document, config, providers) -> StageDecision`` and never mutate their
input. Providers (tokenizer, language classifier, morphological analyzer,
embedder) are injected so the toolkit stays backend-agnostic; the bundled
implementations live in :mod:`corpusforge.providers`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Protocol, Sequence, runtime_checkable


class ForgeError(Exception):
    """Base class for toolkit errors."""


class ConfigError(ForgeError):
    """Invalid configuration; raised before any data is touched."""


class EmptyInputError(ForgeError):
    """An aggregate operation received an empty dataset."""


class SchemaError(ForgeError):
    """A record violates the dataset schema (missing/invalid field)."""


@dataclass
class RecordError:
    """Per-record failure report; carries the 1-based line number."""

    line: int
    stage: str
    reason: str

    def to_json_obj(self) -> dict:
        return {"line": self.line, "stage": self.stage, "reason": self.reason}


@dataclass(eq=True)
class Document:
    """One corpus record.

    ``text`` must be valid UTF-8 without NUL bytes. Multi-page records carry
    ``doc_group_id`` plus ``page_no``; ``metadata`` holds free-form string
    pairs that survive serialization round-trips.
    """

    id: str
    text: str
    url: str | None = None
    source: str | None = None
    language: str | None = None
    doc_group_id: str | None = None
    page_no: int | None = None
    metadata: dict[str, str] = field(default_factory=dict)

    def validate(self) -> None:
        """Raise SchemaError on invariant violations."""
        if not self.id:
            raise SchemaError("empty field id")
        if "\x00" in self.text:
            raise SchemaError("text contains NUL byte")
        try:
            self.text.encode("utf-8")
        except UnicodeEncodeError as exc:
            raise SchemaError(f"text is not valid UTF-8: {exc}") from exc
        if self.page_no is not None:
            if self.page_no < 0:
                raise SchemaError("page_no must be non-negative")
            if self.doc_group_id is None:
                raise SchemaError("page_no present without doc_group_id")


class Pos(enum.Enum):
    NOUN = "Noun"
    VERB = "Verb"
    OTHER = "Other"


class Case(enum.Enum):
    NOM = "Nom"
    ACC = "Acc"
    DAT = "Dat"
    LOC = "Loc"
    ABL = "Abl"
    GEN = "Gen"
    INS = "Ins"


@dataclass(frozen=True)
class MorphAnalysis:
    """Per-token morphological result: lemma, POS class, nominal case tag."""

    lemma: str
    pos: Pos
    case: Case | None = None

    def __post_init__(self):
        if not self.lemma:
            raise ValueError("lemma must be non-empty")
        if self.case is not None and self.pos not in (Pos.NOUN, Pos.VERB):
            raise ValueError("case tag only valid for noun/verb tokens")


@dataclass
class StageDecision:
    """Keep/drop verdict for one document at one stage.

    ``measurements`` holds the numeric values the decision was based on;
    ``notes`` holds string-valued context (e.g. the matched deny keyword).
    ``keep`` implies ``reason == "pass"``.
    """

    keep: bool
    stage: str
    reason: str
    measurements: dict[str, float] = field(default_factory=dict)
    notes: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.keep and self.reason != "pass":
            raise ValueError("keep decisions must carry reason 'pass'")


def passed(stage: str, **measurements: float) -> StageDecision:
    return StageDecision(True, stage, "pass", dict(measurements))


def dropped(stage: str, reason: str, **measurements: float) -> StageDecision:
    return StageDecision(False, stage, reason, dict(measurements))


@runtime_checkable
class TokenizerProvider(Protocol):
    """Token counting/encoding backend. ``count_tokens`` must equal
    ``len(tokenize(text))`` and ``tokenize("")`` yields no ids."""

    @property
    def vocab_size(self) -> int: ...

    def tokenize(self, text: str) -> Sequence[int]: ...

    def count_tokens(self, text: str) -> int: ...


@runtime_checkable
class LanguageClassifierProvider(Protocol):
    """Returns up to ``k`` (language code, confidence) pairs, confidence
    non-increasing, each confidence in [0, 1]. Codes pass through opaquely."""

    def classify(self, text: str, k: int = 1) -> list[tuple[str, float]]: ...


@runtime_checkable
class MorphAnalyzerProvider(Protocol):
    """Returns None (not an error) for unanalyzable tokens."""

    def analyze(self, token: str) -> MorphAnalysis | None: ...


@runtime_checkable
class EmbeddingProvider(Protocol):
    """Maps text to a fixed-dimension real vector with finite components."""

    @property
    def dimension(self) -> int: ...

    def embed(self, text: str): ...


@dataclass
class ProviderBundle:
    """The injected backends a pipeline run operates with."""

    tokenizer: TokenizerProvider | None = None
    classifier: LanguageClassifierProvider | None = None
    analyzer: MorphAnalyzerProvider | None = None
    embedder: EmbeddingProvider | None = None


def as_list(docs: Iterable[Document]) -> list[Document]:
    """Materialize a document stream (grouping/dedup stages need it)."""
    return docs if isinstance(docs, list) else list(docs)
