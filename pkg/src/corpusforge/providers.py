"""Bundled provider implementations.

These are deterministic, dependency-free backends good enough to run the
full pipeline at desk scale and to test every stage. Production runs are
expected to swap in real backends (a subword tokenizer, GlotLID-class
language ID, Zemberek-class morphology, a dense encoder) behind the same
interfaces.
"""

from __future__ import annotations

import hashlib
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .core import ConfigError

_WORD_RE = re.compile(r"\S+")


def _stable_hash(data: str, *, salt: bytes = b"") -> int:
    """64-bit hash independent of PYTHONHASHSEED."""
    digest = hashlib.blake2b(data.encode("utf-8"), digest_size=8, key=salt[:64])
    return int.from_bytes(digest.digest(), "little")


@dataclass
class WhitespaceTokenizer:
    """Whitespace-split tokens, ids from a salted 64-bit hash mod vocab."""

    vocab_size: int = 65536

    def __post_init__(self):
        if self.vocab_size <= 0:
            raise ConfigError("vocab_size must be positive")

    def tokenize(self, text: str) -> list[int]:
        return [_stable_hash(tok) % self.vocab_size for tok in _WORD_RE.findall(text)]

    def count_tokens(self, text: str) -> int:
        return len(_WORD_RE.findall(text))


@dataclass
class HashEmbedder:
    """Deterministic bag-of-tokens embedding (signed hashing trick).

    Each token hashes to one coordinate and a sign; the summed vector is
    L2-normalized. Texts sharing most tokens land near each other in cosine
    space, which is exactly the behaviour semantic-dedup tests need.
    """

    dim: int = 64
    seed: int = 0

    def __post_init__(self):
        if self.dim < 1:
            raise ConfigError("dim must be >= 1")
        self._salt = self.seed.to_bytes(8, "little", signed=False)

    @property
    def dimension(self) -> int:
        return self.dim

    def embed(self, text: str) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=np.float64)
        for tok in _WORD_RE.findall(text):
            h = _stable_hash(tok, salt=self._salt)
            idx = h % self.dim
            sign = 1.0 if (h >> 32) & 1 else -1.0
            vec[idx] += sign
        norm = math.sqrt(float(vec @ vec))
        if norm == 0.0:
            vec[0] = 1.0  # empty/whitespace-only text gets a fixed unit vector
            return vec
        return vec / norm


# character/stopword profiles for the desk-scale language classifier
_LANG_PROFILES: dict[str, tuple[frozenset[str], frozenset[str]]] = {
    # code -> (distinctive characters, high-frequency words)
    "tur": (
        frozenset("çğıöşüÇĞİÖŞÜ"),
        frozenset("ve bir bu da de için ile olarak daha çok en gibi".split()),
    ),
    "eng": (
        frozenset("wqx"),
        frozenset("the and of to in is for with that on as are was".split()),
    ),
    "deu": (
        frozenset("äßö"),
        frozenset("der die das und ist nicht mit für ein eine".split()),
    ),
}


@dataclass
class CharProfileLanguageClassifier:
    """Tiny deterministic language scorer over character/stopword profiles.

    A stand-in for a real classifier: scores each known language by
    distinctive-character density plus stopword hits, normalizes scores to
    confidences. Emits ("und", 0.0) when nothing matches.
    """

    profiles: dict[str, tuple[frozenset[str], frozenset[str]]] = field(
        default_factory=lambda: dict(_LANG_PROFILES)
    )

    def classify(self, text: str, k: int = 1) -> list[tuple[str, float]]:
        words = text.lower().split()
        if not words:
            return [("und", 0.0)]
        scores: dict[str, float] = {}
        for code, (chars, stopwords) in self.profiles.items():
            char_hits = sum(1 for ch in text if ch in chars)
            word_hits = sum(1 for w in words if w.strip(".,;:!?\"'()") in stopwords)
            scores[code] = 3.0 * char_hits / max(len(text), 1) + word_hits / len(words)
        total = sum(scores.values())
        if total <= 0.0:
            return [("und", 0.0)]
        ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
        return [(code, min(s / total, 1.0)) for code, s in ranked[:k]]


def build_provider(kind: str, name: str, settings: dict) -> object:
    """Instantiate a named provider; raises ConfigError for unknown names."""
    from .morphology import RuleBasedAnalyzer  # deferred: avoids cycle

    registry: dict[str, dict[str, type]] = {
        "tokenizer": {"whitespace": WhitespaceTokenizer},
        "embedder": {"hash": HashEmbedder},
        "classifier": {"char_profile": CharProfileLanguageClassifier},
        "analyzer": {"turkish_rule": RuleBasedAnalyzer},
    }
    kinds = registry.get(kind)
    if kinds is None:
        raise ConfigError(f"unknown provider kind {kind!r}")
    cls = kinds.get(name)
    if cls is None:
        raise ConfigError(
            f"unknown {kind} provider {name!r}; available: {sorted(kinds)}"
        )
    try:
        return cls(**settings)
    except TypeError as exc:
        raise ConfigError(f"bad settings for {kind} provider {name!r}: {exc}") from exc
