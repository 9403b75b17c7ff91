from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from pathlib import Path

from django.conf import settings

logger = logging.getLogger(__name__)

_ID_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_.]*$")
FIELD_SEPARATOR = "|"


class CorpusError(ValueError):
    def __init__(self, message: str, *, line_no: int, field: str):
        super().__init__(f"line {line_no}, field {field}: {message}")
        self.line_no = line_no
        self.field = field


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    printed: str
    note: str
    line_no: int


@dataclass(frozen=True)
class Corpus:
    version: str
    entries: tuple[CorpusEntry, ...]
    source: str = ""

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, entry_id: str) -> CorpusEntry | None:
        for entry in self.entries:
            if entry.id == entry_id:
                return entry
        return None


def parse_corpus(text: str, *, source: str = "<string>") -> Corpus:
    """
    One record per line: `id | printed | note`. Blank lines and `#` comments
    are skipped; `meta.version` sets the corpus version.
    """
    version = ""
    entries: list[CorpusEntry] = []
    seen: set[str] = set()
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(FIELD_SEPARATOR, 2)]
        if len(fields) < 2:
            raise CorpusError("expected `id | printed | note`", line_no=line_no, field="record")
        entry_id, printed = fields[0], fields[1]
        note = fields[2] if len(fields) > 2 else ""
        if not _ID_RE.match(entry_id):
            raise CorpusError(f"invalid id {entry_id!r}", line_no=line_no, field="id")
        if not printed:
            raise CorpusError(f"{entry_id} has no printed value", line_no=line_no, field="printed")
        if entry_id in seen:
            raise CorpusError(f"duplicate id {entry_id}", line_no=line_no, field="id")
        seen.add(entry_id)

        if entry_id.startswith("meta."):
            if entry_id != "meta.version":
                raise CorpusError(f"unknown meta record {entry_id}", line_no=line_no, field="id")
            version = printed
            continue
        entries.append(CorpusEntry(id=entry_id, printed=printed, note=note, line_no=line_no))

    if not version:
        raise CorpusError("missing meta.version record", line_no=0, field="meta.version")
    logger.debug("corpus %s parsed: %s entries, version %s", source, len(entries), version)
    return Corpus(version=version, entries=tuple(entries), source=source)


def load_corpus(path: str | Path | None = None) -> Corpus:
    path = Path(path or settings.CYCLOMETRIA_CORPUS)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot read {path}: {exc}", line_no=0, field="path") from exc
    return parse_corpus(text, source=str(path))
