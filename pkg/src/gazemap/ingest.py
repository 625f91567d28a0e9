"""Input parsing: gaze logs (JSONL and CSV), TLX questionnaires, source-tree
scanning, and file-to-module classification.

Parsers are pure functions of their input stream; callers may run many of
them concurrently. The JSONL format is the canonical log format; every
accepted record maps onto one GazeEvent.
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass
from fnmatch import fnmatchcase
from typing import IO, Iterable, Mapping, NamedTuple, Sequence

from gazemap.errors import (
    BadPath,
    BadValue,
    IoError,
    MalformedLine,
    MissingField,
    MissingHeader,
    RootNotFound,
)
from gazemap.model import (
    GazeEvent,
    ModuleMap,
    ModuleRule,
    Session,
    normalize_path,
    validate_session,
)

GAZE_CSV_HEADER = ["t_ms", "file", "line", "col", "token", "valid"]
TLX_CSV_HEADER = [
    "participant", "task",
    "md", "pd", "td", "pf", "ef", "fr",
    "w_md", "w_pd", "w_td", "w_pf", "w_ef", "w_fr",
]

# Annotation rules are listed before folder rules: a file's own annotation is
# more specific than where it happens to live.
DEFAULT_MODULE_RULES: tuple[ModuleRule, ...] = (
    ModuleRule("annotation", "Controller", "C"),
    ModuleRule("annotation", "RestController", "C"),
    ModuleRule("annotation", "Service", "S"),
    ModuleRule("annotation", "Repository", "R"),
    ModuleRule("annotation", "Entity", "E"),
    ModuleRule("annotation", "Configuration", "F"),
    ModuleRule("folder", "controller", "C"),
    ModuleRule("folder", "service", "S"),
    ModuleRule("folder", "dao", "R"),
    ModuleRule("folder", "repository", "R"),
    ModuleRule("folder", "entity", "E"),
    ModuleRule("folder", "model", "E"),
    ModuleRule("folder", "templates", "V"),
    ModuleRule("folder", "views", "V"),
    ModuleRule("folder", "webapp", "V"),
)

FALLBACK_LABEL = "O"

_LANGUAGES = {
    ".java": "java",
    ".html": "html",
    ".htm": "html",
    ".jsp": "jsp",
    ".xml": "xml",
    ".md": "markdown",
    ".properties": "properties",
    ".yml": "yaml",
    ".yaml": "yaml",
    ".sql": "sql",
    ".sh": "shell",
    ".bat": "batch",
    ".js": "javascript",
    ".ts": "typescript",
    ".css": "css",
    ".py": "python",
    ".json": "json",
}


class FileInfo(NamedTuple):
    line_count: int
    language: str


@dataclass(frozen=True, slots=True)
class FileInventory:
    """All scanned source files, keyed by path relative to root."""

    root: str
    files: Mapping[str, FileInfo]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "files", {p: FileInfo(*v) for p, v in self.files.items()}
        )


def _text_lines(stream: bytes | str | IO | Iterable[str]) -> list[str]:
    """Accept bytes, text, or a file-like object; return decoded lines."""
    if isinstance(stream, bytes):
        text = stream.decode("utf-8-sig")
    elif isinstance(stream, str):
        text = stream
    elif hasattr(stream, "read"):
        data = stream.read()
        text = data.decode("utf-8-sig") if isinstance(data, bytes) else data
    else:
        text = "".join(stream)
    return text.splitlines()


def _require_int(value: object, lineno: int, what: str, minimum: int) -> int:
    # bool is an int subclass and must not pass as a count
    if isinstance(value, bool) or not isinstance(value, int):
        raise BadValue(lineno, f"{what} must be an integer, got {value!r}")
    if value < minimum:
        raise BadValue(lineno, f"{what} must be >= {minimum}, got {value}")
    return value


def _event_from_fields(
    lineno: int,
    t: object,
    file: object,
    line: object,
    col: object = None,
    token: object = None,
    valid: object = True,
) -> GazeEvent:
    t_ms = _require_int(t, lineno, "t", 0)
    if not isinstance(file, str) or not file:
        raise BadValue(lineno, f"file must be a non-empty string, got {file!r}")
    try:
        path = normalize_path(file)
    except BadPath as exc:
        raise BadValue(lineno, str(exc)) from None
    line_no = _require_int(line, lineno, "line", 1)
    column = None if col is None else _require_int(col, lineno, "col", 1)
    if token is not None and not isinstance(token, str):
        raise BadValue(lineno, f"token must be a string, got {token!r}")
    if not isinstance(valid, bool):
        raise BadValue(lineno, f"valid must be a boolean, got {valid!r}")
    return GazeEvent(
        t_ms=t_ms, file=path, line=line_no, column=column, token=token, valid=valid
    )


def parse_gaze_jsonl(
    stream: bytes | str | IO | Iterable[str],
    participant_id: str,
    role: str,
    group: str,
    task_id: str,
) -> Session:
    """Parse the canonical JSONL gaze log into a validated Session.

    One JSON object per line with keys t, file, line and optional col,
    token, valid (default true). An optional line {"meta": {"duration_ms": N}}
    supplies the session duration; otherwise it is max(t) + 1.
    """
    events: list[GazeEvent] = []
    duration_ms: int | None = None
    for lineno, raw in enumerate(_text_lines(stream), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError:
            raise MalformedLine(lineno) from None
        if not isinstance(obj, dict):
            raise MalformedLine(lineno, "record is not a JSON object")
        if "meta" in obj:
            meta = obj["meta"]
            if not isinstance(meta, dict) or "duration_ms" not in meta:
                raise BadValue(lineno, "meta line must carry duration_ms")
            duration_ms = _require_int(meta["duration_ms"], lineno, "duration_ms", 1)
            continue
        for key in ("t", "file", "line"):
            if key not in obj:
                raise MissingField(lineno, key)
        events.append(
            _event_from_fields(
                lineno,
                obj["t"],
                obj["file"],
                obj["line"],
                obj.get("col"),
                obj.get("token"),
                obj.get("valid", True),
            )
        )
    if duration_ms is None:
        duration_ms = (max(e.t_ms for e in events) + 1) if events else 1
    session = Session(
        participant_id=participant_id,
        role=role,
        group=group,
        task_id=task_id,
        events=tuple(events),
        duration_ms=duration_ms,
    )
    return validate_session(session)


def serialize_gaze_jsonl(s: Session) -> str:
    """Inverse of parse_gaze_jsonl on the canonical subset."""
    lines = []
    for e in s.events:
        rec: dict[str, object] = {"t": e.t_ms, "file": e.file, "line": e.line}
        if e.column is not None:
            rec["col"] = e.column
        if e.token is not None:
            rec["token"] = e.token
        if not e.valid:
            rec["valid"] = False
        lines.append(json.dumps(rec, sort_keys=True, separators=(",", ":")))
    lines.append(json.dumps({"meta": {"duration_ms": s.duration_ms}}, sort_keys=True,
                            separators=(",", ":")))
    return "\n".join(lines) + "\n"


def parse_gaze_csv(
    stream: bytes | str | IO | Iterable[str],
    participant_id: str,
    role: str,
    group: str,
    task_id: str,
) -> Session:
    """Parse the CSV gaze log (header t_ms,file,line,col,token,valid).

    Empty col/token cells mean absent; empty valid means true. The duration
    is max(t) + 1 since the CSV format carries no metadata record.
    """
    lines = _text_lines(stream)
    if not lines:
        raise MissingHeader(",".join(GAZE_CSV_HEADER))
    rows = list(csv.reader(lines))
    if not rows or [c.strip() for c in rows[0]] != GAZE_CSV_HEADER:
        raise MissingHeader(",".join(GAZE_CSV_HEADER))
    events: list[GazeEvent] = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(GAZE_CSV_HEADER):
            raise MalformedLine(lineno, f"expected {len(GAZE_CSV_HEADER)} fields")
        t_raw, file, line_raw, col_raw, token_raw, valid_raw = (c.strip() for c in row)
        events.append(
            _event_from_fields(
                lineno,
                _parse_csv_int(t_raw, lineno, "t_ms"),
                file,
                _parse_csv_int(line_raw, lineno, "line"),
                _parse_csv_int(col_raw, lineno, "col") if col_raw else None,
                token_raw if token_raw else None,
                _parse_csv_bool(valid_raw, lineno) if valid_raw else True,
            )
        )
    duration_ms = (max(e.t_ms for e in events) + 1) if events else 1
    session = Session(
        participant_id=participant_id,
        role=role,
        group=group,
        task_id=task_id,
        events=tuple(events),
        duration_ms=duration_ms,
    )
    return validate_session(session)


def serialize_gaze_csv(s: Session) -> str:
    """Inverse of parse_gaze_csv on the canonical subset (duration must be
    max(t) + 1 to round-trip, since CSV has no metadata record)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(GAZE_CSV_HEADER)
    for e in s.events:
        writer.writerow(
            [
                e.t_ms,
                e.file,
                e.line,
                "" if e.column is None else e.column,
                "" if e.token is None else e.token,
                "true" if e.valid else "false",
            ]
        )
    return out.getvalue()


def _parse_csv_int(raw: str, lineno: int, what: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise BadValue(lineno, f"{what} must be an integer, got {raw!r}") from None


def _parse_csv_bool(raw: str, lineno: int) -> bool:
    lowered = raw.lower()
    if lowered == "true":
        return True
    if lowered == "false":
        return False
    raise BadValue(lineno, f"valid must be true or false, got {raw!r}")


def scan_source_tree(
    root: str,
    include_globs: Sequence[str] = ("*",),
    exclude_globs: Sequence[str] = (),
) -> FileInventory:
    """Record every matching regular file under root with its line count.

    Glob patterns containing a slash match the full relative path, others
    match the basename (so "*.java" finds nested files). Paths are emitted
    in sorted order for determinism.
    """
    if not os.path.isdir(root):
        raise RootNotFound(root)
    files: dict[str, FileInfo] = {}
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames.sort()
        for name in sorted(filenames):
            full = os.path.join(dirpath, name)
            rel = os.path.relpath(full, root).replace(os.sep, "/")
            if not _matches(rel, include_globs):
                continue
            if exclude_globs and _matches(rel, exclude_globs):
                continue
            try:
                with open(full, "rb") as fh:
                    data = fh.read()
            except OSError as exc:
                raise IoError(rel, exc) from None
            files[rel] = FileInfo(
                line_count=_count_lines(data),
                language=_LANGUAGES.get(os.path.splitext(name)[1].lower(), "other"),
            )
    return FileInventory(root=root, files=dict(sorted(files.items())))


def _matches(rel_path: str, patterns: Sequence[str]) -> bool:
    base = rel_path.rsplit("/", 1)[-1]
    for pat in patterns:
        target = rel_path if "/" in pat else base
        if fnmatchcase(target, pat):
            return True
    return False


def _count_lines(data: bytes) -> int:
    if not data:
        return 0
    count = data.count(b"\n")
    if not data.endswith(b"\n"):
        count += 1
    return count


def read_source_text(inventory: FileInventory, path: str) -> str:
    """Raw text of one inventoried file (UTF-8, invalid bytes replaced)."""
    if path not in inventory.files:
        raise IoError(path, None)
    full = os.path.join(inventory.root, path.replace("/", os.sep))
    try:
        with open(full, "rb") as fh:
            return fh.read().decode("utf-8", errors="replace")
    except OSError as exc:
        raise IoError(path, exc) from None


def strip_comments_and_strings(content: str) -> str:
    """Remove // and /* */ comments plus string/char literals so annotation
    matching cannot fire inside them. Removed spans become spaces, keeping
    offsets roughly stable."""
    out: list[str] = []
    i = 0
    n = len(content)
    while i < n:
        c = content[i]
        nxt = content[i + 1] if i + 1 < n else ""
        if c == "/" and nxt == "/":
            while i < n and content[i] != "\n":
                i += 1
        elif c == "/" and nxt == "*":
            i += 2
            while i + 1 < n and not (content[i] == "*" and content[i + 1] == "/"):
                i += 1
            i = min(i + 2, n)
            out.append(" ")
        elif c in ("\"", "'"):
            quote = c
            i += 1
            while i < n and content[i] != quote:
                i += 2 if content[i] == "\\" else 1
            i += 1
            out.append(" ")
        else:
            out.append(c)
            i += 1
    return "".join(out)


def _has_annotation(cleaned: str, name: str) -> bool:
    target = "@" + name
    start = 0
    while True:
        idx = cleaned.find(target, start)
        if idx < 0:
            return False
        after = idx + len(target)
        if after >= len(cleaned) or not (cleaned[after].isalnum() or cleaned[after] == "_"):
            return True
        start = idx + 1


def classify_module(
    path: str,
    content: str,
    rules: Sequence[ModuleRule] = DEFAULT_MODULE_RULES,
) -> str:
    """Label a file with its module character; the first matching rule wins.

    Annotation rules match @Name tokens outside comments and string
    literals; folder rules match any ancestor directory name
    case-insensitively. Unmatched files get the fallback label 'O'.
    """
    cleaned: str | None = None
    folders = [seg.lower() for seg in path.split("/")[:-1]]
    for rule in rules:
        if rule.kind == "annotation":
            if cleaned is None:
                cleaned = strip_comments_and_strings(content)
            if _has_annotation(cleaned, rule.pattern):
                return rule.label
        elif rule.kind == "folder":
            if rule.pattern.lower() in folders:
                return rule.label
        else:
            raise ValueError(f"unknown rule kind {rule.kind!r}")
    return FALLBACK_LABEL


def build_module_map(
    inventory: FileInventory,
    rules: Sequence[ModuleRule] = DEFAULT_MODULE_RULES,
) -> ModuleMap:
    """Classify every inventoried file."""
    entries = {
        path: classify_module(path, read_source_text(inventory, path), rules)
        for path in sorted(inventory.files)
    }
    return ModuleMap(entries=entries, rules=tuple(rules))


def load_module_rules(data: bytes | str) -> tuple[ModuleRule, ...]:
    """Read an ordered rule list from its JSON file form."""
    text = data.decode("utf-8-sig") if isinstance(data, bytes) else data
    raw = json.loads(text)
    if not isinstance(raw, list) or not raw:
        raise BadValue(1, "module rules must be a non-empty JSON array")
    rules = []
    for i, item in enumerate(raw):
        if (
            not isinstance(item, dict)
            or item.get("kind") not in ("annotation", "folder")
            or not isinstance(item.get("pattern"), str)
            or not isinstance(item.get("label"), str)
            or len(item["label"]) != 1
        ):
            raise BadValue(i + 1, f"bad module rule {item!r}")
        rules.append(ModuleRule(item["kind"], item["pattern"], item["label"]))
    return tuple(rules)


def parse_tlx_csv(stream: bytes | str | IO | Iterable[str]):
    """Parse TLX questionnaire rows; returns stats.TLXRecord objects.

    Ratings must be within the 20-point scale and weights non-negative
    integers. The weights-sum-to-15 rule is checked later, when scoring.
    """
    from gazemap.stats import TLXRecord

    lines = _text_lines(stream)
    if not lines:
        raise MissingHeader(",".join(TLX_CSV_HEADER))
    rows = list(csv.reader(lines))
    if not rows or [c.strip() for c in rows[0]] != TLX_CSV_HEADER:
        raise MissingHeader(",".join(TLX_CSV_HEADER))
    records = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(TLX_CSV_HEADER):
            raise MalformedLine(lineno, f"expected {len(TLX_CSV_HEADER)} fields")
        cells = [c.strip() for c in row]
        ratings = []
        for raw in cells[2:8]:
            try:
                value = float(raw)
            except ValueError:
                raise BadValue(lineno, f"rating must be a number, got {raw!r}") from None
            if not (0.0 <= value <= 20.0):
                raise BadValue(lineno, f"rating must be in [0, 20], got {value}")
            ratings.append(value)
        weights = []
        for raw in cells[8:14]:
            w = _parse_csv_int(raw, lineno, "weight")
            if w < 0:
                raise BadValue(lineno, f"weight must be >= 0, got {w}")
            weights.append(w)
        records.append(
            TLXRecord(
                participant=cells[0],
                task=cells[1],
                ratings=tuple(ratings),
                weights=tuple(weights),
            )
        )
    return records
