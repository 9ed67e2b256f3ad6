"""Record-level safety stages: cleaning, language ID, URL filtering, PII.

Every operation is a pure function of (document, config, provider output)
and returns a StageDecision; nothing here mutates documents except
``anonymize_pii``, which returns a modified copy.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from urllib.parse import urlsplit

from .core import (
    ConfigError,
    Document,
    LanguageClassifierProvider,
    StageDecision,
    dropped,
    passed,
)
from .heuristics import split_lines


@dataclass
class CleanConfig:
    min_chars: int = 64
    max_chars: int = 1_000_000
    max_table_line_ratio: float = 0.5
    max_image_link_ratio: float = 0.5

    def __post_init__(self):
        if self.min_chars <= 0 or self.max_chars <= 0:
            raise ConfigError("char bounds must be positive")
        if self.min_chars >= self.max_chars:
            raise ConfigError("min_chars must be < max_chars")
        for name in ("max_table_line_ratio", "max_image_link_ratio"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1]")


@dataclass
class UrlFilterConfig:
    """Allowlisted domains are exempt from keyword matching."""

    deny_keywords: frozenset[str] = frozenset()
    allow_domains: frozenset[str] = frozenset()

    def __post_init__(self):
        self.deny_keywords = frozenset(k.lower() for k in self.deny_keywords)
        self.allow_domains = frozenset(d.lower() for d in self.allow_domains)


@dataclass
class LangFilterConfig:
    target_languages: frozenset[str] = frozenset({"tur"})
    min_confidence: float = 0.40
    top_k: int = 3
    # keep when *any* of the top-k predictions matches, instead of top-1 only
    match_any_top_k: bool = False

    def __post_init__(self):
        if not self.target_languages:
            raise ConfigError("target_languages must be non-empty")
        if not 0.0 <= self.min_confidence <= 1.0:
            raise ConfigError("min_confidence must be in [0, 1]")
        if self.top_k <= 0:
            raise ConfigError("top_k must be positive")
        self.target_languages = frozenset(self.target_languages)


# a line that is nothing but an image/link reference (markdown, HTML or bare URL)
_IMAGE_LINK_LINE = re.compile(
    r"""^(?:
        !?\[[^\]]*\]\([^)]*\)      # markdown image/link
      | <img\b[^>]*>               # html image tag
      | (?:https?://|www\.)\S+     # bare url
    )$""",
    re.VERBOSE | re.IGNORECASE,
)


def _is_table_line(line: str) -> bool:
    return line.count("|") + line.count("\t") >= 2


def clean(doc: Document, cfg: CleanConfig) -> StageDecision:
    """Structural sanity filter.

    Drop reasons, checked in order: invalid_field (empty id, blank text,
    NUL/encoding failure), too_short, too_long, table_dominated
    (fraction of lines with >= 2 cell separators), image_dominated
    (fraction of lines that are pure image/link markup). Ratio thresholds
    use strict-exceed semantics.
    """
    text = doc.text
    char_count = float(len(text))
    lines = split_lines(text)
    table_ratio = (
        sum(1 for ln in lines if _is_table_line(ln)) / len(lines) if lines else 0.0
    )
    image_ratio = (
        sum(1 for ln in lines if _IMAGE_LINK_LINE.match(ln.strip())) / len(lines)
        if lines
        else 0.0
    )
    measurements = {
        "char_count": char_count,
        "table_line_ratio": table_ratio,
        "image_link_ratio": image_ratio,
    }

    invalid = (
        not doc.id
        or not text.strip()
        or "\x00" in text
    )
    if not invalid:
        try:
            text.encode("utf-8")
        except UnicodeEncodeError:
            invalid = True
    if invalid:
        return dropped("clean", "invalid_field", **measurements)
    if len(text) < cfg.min_chars:
        return dropped("clean", "too_short", **measurements)
    if len(text) > cfg.max_chars:
        return dropped("clean", "too_long", **measurements)
    if table_ratio > cfg.max_table_line_ratio:
        return dropped("clean", "table_dominated", **measurements)
    if image_ratio > cfg.max_image_link_ratio:
        return dropped("clean", "image_dominated", **measurements)
    return passed("clean", **measurements)


def filter_language(
    doc: Document, cfg: LangFilterConfig, clf: LanguageClassifierProvider
) -> StageDecision:
    """Keep documents whose top prediction matches a target language with
    sufficient confidence; classifier failures drop conservatively."""
    try:
        predictions = clf.classify(doc.text, k=cfg.top_k)
    except Exception as exc:  # provider contract: anything may fail
        decision = dropped("langid", "classifier_error")
        decision.notes["error"] = str(exc)
        return decision
    if not predictions:
        return dropped("langid", "classifier_error")

    top_code, top_conf = predictions[0]
    candidates = predictions if cfg.match_any_top_k else predictions[:1]
    matched = [
        (code, conf)
        for code, conf in candidates
        if code in cfg.target_languages and conf >= cfg.min_confidence
    ]
    if matched:
        decision = passed("langid", top1_confidence=top_conf)
        decision.notes["top1_language"] = top_code
        return decision

    any_target = any(code in cfg.target_languages for code, _ in candidates)
    reason = "low_confidence" if any_target else "wrong_language"
    decision = dropped("langid", reason, top1_confidence=top_conf)
    decision.notes["top1_language"] = top_code
    return decision


def _registrable_host(url: str) -> str | None:
    try:
        return urlsplit(url).hostname
    except ValueError:
        return None


def filter_url(doc: Document, cfg: UrlFilterConfig) -> StageDecision:
    """Deny-keyword filter with an allowlist that runs first.

    Documents without a URL pass vacuously. Unparseable URLs skip the
    allowlist check and are keyword-matched as opaque strings.
    """
    if doc.url is None:
        return passed("url_filter")
    url_lower = doc.url.lower()
    host = _registrable_host(url_lower)
    if host is not None:
        for domain in cfg.allow_domains:
            if host == domain or host.endswith("." + domain):
                decision = passed("url_filter")
                decision.notes["allowed_domain"] = domain
                return decision
    for keyword in sorted(cfg.deny_keywords):
        if keyword and keyword in url_lower:
            decision = dropped("url_filter", "url_denied")
            decision.notes["matched_keyword"] = keyword
            return decision
    return passed("url_filter")


# --- PII anonymization -----------------------------------------------------
#
# Fixed high-precision pattern rules. Replacement order matters: URLs are
# scrubbed before emails (userinfo parts look like emails), and long digit
# entities (IBAN, card, national id) before phones so the broad phone rule
# cannot truncate them.

_URL_RE = re.compile(r"(?:https?://|www\.)[^\s<>\"]+", re.IGNORECASE)
_EMAIL_RE = re.compile(r"[A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,}")
_IBAN_RE = re.compile(r"\b[A-Z]{2}\d{2}(?: ?[A-Z0-9]){10,30}\b")
_CARD_RE = re.compile(r"(?<![\d-])(?:\d{4}[ -]?){3}\d{4}(?![\d-])")
_TR_ID_RE = re.compile(r"(?<!\d)[1-9]\d{10}(?!\d)")
_PHONE_RE = re.compile(r"(?<![\d-])\+?\d(?:[ -]?\d){9,12}(?![\d-])")


def _luhn_valid(digits: str) -> bool:
    total = 0
    for i, ch in enumerate(reversed(digits)):
        d = ord(ch) - 48
        if i % 2 == 1:
            d *= 2
            if d > 9:
                d -= 9
        total += d
    return total % 10 == 0


def turkish_id_valid(digits: str) -> bool:
    """Checksum for 11-digit national identifiers (two check digits)."""
    if len(digits) != 11 or not digits.isdigit() or digits[0] == "0":
        return False
    d = [ord(c) - 48 for c in digits]
    odd = d[0] + d[2] + d[4] + d[6] + d[8]
    even = d[1] + d[3] + d[5] + d[7]
    if d[9] != (odd * 7 - even) % 10:
        return False
    return d[10] == sum(d[:10]) % 10


def _replace_card(match: re.Match) -> str:
    digits = re.sub(r"[ -]", "", match.group(0))
    return "<FIN_NUM>" if _luhn_valid(digits) else match.group(0)


def _replace_tr_id(match: re.Match) -> str:
    return "<NATIONAL_ID>" if turkish_id_valid(match.group(0)) else match.group(0)


def _replace_phone(match: re.Match) -> str:
    n_digits = sum(ch.isdigit() for ch in match.group(0))
    return "<PHONE>" if 10 <= n_digits <= 13 else match.group(0)


def anonymize_text(text: str) -> str:
    """Replace detected PII spans with placeholder tokens.

    Idempotent: placeholders contain nothing the detectors match, so a
    second application is the identity. Non-matched text is untouched.
    """
    text = _URL_RE.sub("<URL>", text)
    text = _EMAIL_RE.sub("<EMAIL>", text)
    text = _IBAN_RE.sub("<FIN_NUM>", text)
    text = _CARD_RE.sub(_replace_card, text)
    text = _TR_ID_RE.sub(_replace_tr_id, text)
    text = _PHONE_RE.sub(_replace_phone, text)
    return text


def anonymize_pii(doc: Document) -> Document:
    """Copy of ``doc`` with PII placeholders substituted into the text."""
    return replace(doc, text=anonymize_text(doc.text), metadata=dict(doc.metadata))
