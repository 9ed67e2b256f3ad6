"""Line-delimited JSON dataset IO.

One UTF-8 JSON object per ``\\n``-terminated line, required keys ``id`` and
``text``. Text is normalized to NFC on ingest so content hashes are stable
across encoders. Serialization uses a fixed key order (id, text, then the
optional fields alphabetically), which makes write -> read -> write
byte-stable.
"""

from __future__ import annotations

import json
import unicodedata
from pathlib import Path
from typing import Callable, Iterable, Iterator

from .core import Document, RecordError, SchemaError

# optional Document fields, alphabetical; fixes serialized key order
_OPTIONAL_KEYS = ("doc_group_id", "language", "metadata", "page_no", "source", "url")

ErrorSink = Callable[[RecordError], None]


def parse_record(obj: dict) -> Document:
    """Build a Document from a decoded JSON object; NFC-normalizes text."""
    if not isinstance(obj, dict):
        raise SchemaError("record is not an object")
    for key in ("id", "text"):
        if key not in obj:
            raise SchemaError(f"missing field {key}")
    if not isinstance(obj["id"], str) or not isinstance(obj["text"], str):
        raise SchemaError("id and text must be strings")
    page_no = obj.get("page_no")
    if page_no is not None and not isinstance(page_no, int):
        raise SchemaError("page_no must be an integer")
    doc = Document(
        id=obj["id"],
        text=unicodedata.normalize("NFC", obj["text"]),
        url=obj.get("url"),
        source=obj.get("source"),
        language=obj.get("language"),
        doc_group_id=obj.get("doc_group_id"),
        page_no=page_no,
        metadata=dict(obj.get("metadata") or {}),
    )
    if "\x00" in doc.text:
        raise SchemaError("text contains NUL byte")
    if doc.page_no is not None and doc.doc_group_id is None:
        raise SchemaError("page_no present without doc_group_id")
    return doc


def iter_records(path: str | Path) -> Iterator[tuple[int, Document | RecordError]]:
    """Yield (1-based line number, Document or RecordError) per input line.

    The low-level stream: callers decide whether an error skips the record
    or aborts the run. Blank lines are ignored.
    """
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                yield lineno, RecordError(lineno, "read", f"malformed json: {exc.msg}")
                continue
            try:
                yield lineno, parse_record(obj)
            except SchemaError as exc:
                yield lineno, RecordError(lineno, "read", str(exc))


def read_dataset(
    path: str | Path,
    on_error: str = "abort",
    error_sink: ErrorSink | None = None,
) -> Iterator[Document]:
    """Yield Documents in file order.

    ``on_error="abort"`` raises SchemaError at the first bad line;
    ``on_error="skip"`` reports it to ``error_sink`` (if given) and moves on.
    """
    if on_error not in ("abort", "skip"):
        raise ValueError(f"on_error must be 'abort' or 'skip', got {on_error!r}")
    for lineno, item in iter_records(path):
        if isinstance(item, RecordError):
            if on_error == "abort":
                raise SchemaError(f"line {lineno}: {item.reason}")
            if error_sink is not None:
                error_sink(item)
            continue
        yield item


def document_to_obj(doc: Document) -> dict:
    """Serializable dict with the fixed key order; omits absent optionals."""
    obj: dict = {"id": doc.id, "text": doc.text}
    for key in _OPTIONAL_KEYS:
        value = getattr(doc, key)
        if key == "metadata":
            if value:
                obj[key] = value
        elif value is not None:
            obj[key] = value
    return obj


def write_dataset(docs: Iterable[Document], path: str | Path) -> int:
    """Write one record per line; returns the record count.

    On IO failure the raised OSError gains a ``partial_file`` attribute so
    callers can flag the truncated output.
    """
    count = 0
    try:
        with open(path, "w", encoding="utf-8") as fh:
            for doc in docs:
                fh.write(json.dumps(document_to_obj(doc), ensure_ascii=False))
                fh.write("\n")
                count += 1
    except OSError as exc:
        exc.partial_file = True
        raise
    return count


def write_errors(errors: Iterable[RecordError], path: str | Path) -> int:
    """Error report file: one {line, stage, reason} object per line."""
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        for err in errors:
            fh.write(json.dumps(err.to_json_obj(), ensure_ascii=False))
            fh.write("\n")
            count += 1
    return count
