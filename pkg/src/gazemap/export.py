"""Stable, versioned serialization: gaze maps, sessions, and the viewer bundle.

Canonical JSON rules: keys sorted, floats rendered with exactly six decimal
places (negative zero normalized), UTF-8 bytes, LF line endings. Two
semantically equal documents therefore serialize to identical bytes on any
platform, which is what the golden-file tests pin down.
"""

from __future__ import annotations

import hashlib
import json
import os
from typing import IO, Mapping

from gazemap import __version__
from gazemap.errors import SchemaError, UnknownFile, UnsupportedVersion
from gazemap.ingest import FileInventory, read_source_text
from gazemap.model import (
    AttentionGrade,
    Block,
    GazeEvent,
    GazeMap,
    LineAttention,
    ModuleMap,
    ModuleRule,
    Session,
    validate_session,
)

FORMAT_VERSION = "1"


def _format_float(v: float) -> str:
    s = f"{v:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _canon(value: object, out: list[str]) -> None:
    if value is None:
        out.append("null")
    elif value is True:
        out.append("true")
    elif value is False:
        out.append("false")
    elif isinstance(value, int):
        out.append(str(value))
    elif isinstance(value, float):
        out.append(_format_float(value))
    elif isinstance(value, str):
        out.append(json.dumps(value, ensure_ascii=False))
    elif isinstance(value, (list, tuple)):
        out.append("[")
        for i, item in enumerate(value):
            if i:
                out.append(",")
            _canon(item, out)
        out.append("]")
    elif isinstance(value, Mapping):
        out.append("{")
        for i, key in enumerate(sorted(value)):
            if not isinstance(key, str):
                raise TypeError(f"canonical JSON keys must be strings, got {key!r}")
            if i:
                out.append(",")
            out.append(json.dumps(key, ensure_ascii=False))
            out.append(":")
            _canon(value[key], out)
        out.append("}")
    else:
        raise TypeError(f"cannot canonicalize {type(value).__name__}")


def canonical_json_bytes(value: object) -> bytes:
    """Serialize to canonical JSON: sorted keys, fixed-point floats, LF."""
    out: list[str] = []
    _canon(value, out)
    out.append("\n")
    return "".join(out).encode("utf-8")


# --- gaze map -----------------------------------------------------------------

def gazemap_to_doc(g: GazeMap) -> dict[str, object]:
    files = {
        path: {
            str(line): {
                "mean_norm_hits": att.mean_norm_hits,
                "grade": att.grade.label,
            }
            for line, att in lines.items()
        }
        for path, lines in g.files.items()
    }
    blocks = {
        path: [[b.start, b.end, b.grade.label] for b in bs]
        for path, bs in g.blocks.items()
        if bs
    }
    return {
        "format_version": FORMAT_VERSION,
        "project_id": g.project_id,
        "files": files,
        "ranking": [[path, total] for path, total in g.ranking],
        "blocks": blocks,
        "provenance": dict(g.provenance),
    }


def export_gazemap_json(g: GazeMap) -> bytes:
    return canonical_json_bytes(gazemap_to_doc(g))


def _expect(doc: Mapping, key: str, kind: type, where: str):
    if key not in doc:
        raise SchemaError(f"{where}.{key}", "missing")
    value = doc[key]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise SchemaError(f"{where}.{key}", f"expected number, got {value!r}")
        return float(value)
    if kind is int and isinstance(value, bool):
        raise SchemaError(f"{where}.{key}", f"expected int, got {value!r}")
    if not isinstance(value, kind):
        raise SchemaError(f"{where}.{key}", f"expected {kind.__name__}, got {value!r}")
    return value


def doc_to_gazemap(doc: Mapping) -> GazeMap:
    if not isinstance(doc, Mapping):
        raise SchemaError("$", "document is not a JSON object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise UnsupportedVersion(version)
    project_id = _expect(doc, "project_id", str, "$")
    raw_files = _expect(doc, "files", dict, "$")
    files: dict[str, dict[int, LineAttention]] = {}
    for path, lines in raw_files.items():
        if not isinstance(lines, Mapping):
            raise SchemaError(f"files.{path}", "expected object of lines")
        parsed: dict[int, LineAttention] = {}
        for line_str, att in lines.items():
            try:
                line = int(line_str)
            except ValueError:
                raise SchemaError(f"files.{path}.{line_str}", "line must be an integer") from None
            if line < 1:
                raise SchemaError(f"files.{path}.{line_str}", "line must be >= 1")
            if not isinstance(att, Mapping):
                raise SchemaError(f"files.{path}.{line_str}", "expected object")
            mean = _expect(att, "mean_norm_hits", float, f"files.{path}.{line_str}")
            grade_label = _expect(att, "grade", str, f"files.{path}.{line_str}")
            try:
                grade = AttentionGrade.from_label(grade_label)
                parsed[line] = LineAttention(mean_norm_hits=mean, grade=grade)
            except ValueError as exc:
                raise SchemaError(f"files.{path}.{line_str}", str(exc)) from None
        files[path] = parsed

    raw_ranking = _expect(doc, "ranking", list, "$")
    ranking = []
    for i, entry in enumerate(raw_ranking):
        if (
            not isinstance(entry, list)
            or len(entry) != 2
            or not isinstance(entry[0], str)
            or isinstance(entry[1], bool)
            or not isinstance(entry[1], (int, float))
        ):
            raise SchemaError(f"ranking[{i}]", f"expected [path, total], got {entry!r}")
        if entry[0] not in files:
            raise SchemaError(f"ranking[{i}]", f"unknown file {entry[0]!r}")
        ranking.append((entry[0], float(entry[1])))

    raw_blocks = doc.get("blocks", {})
    if not isinstance(raw_blocks, Mapping):
        raise SchemaError("blocks", "expected object")
    blocks: dict[str, tuple[Block, ...]] = {}
    for path, entries in raw_blocks.items():
        if path not in files:
            raise SchemaError(f"blocks.{path}", "unknown file")
        if not isinstance(entries, list):
            raise SchemaError(f"blocks.{path}", "expected array")
        parsed_blocks = []
        for i, b in enumerate(entries):
            if (
                not isinstance(b, list)
                or len(b) != 3
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in b[:2])
                or not isinstance(b[2], str)
            ):
                raise SchemaError(f"blocks.{path}[{i}]", f"expected [start, end, grade], got {b!r}")
            try:
                grade = AttentionGrade.from_label(b[2])
            except ValueError as exc:
                raise SchemaError(f"blocks.{path}[{i}]", str(exc)) from None
            parsed_blocks.append(Block(b[0], b[1], grade))
        blocks[path] = tuple(parsed_blocks)

    provenance = doc.get("provenance", {})
    if not isinstance(provenance, Mapping):
        raise SchemaError("provenance", "expected object")

    try:
        return GazeMap(
            project_id=project_id,
            files=files,
            ranking=tuple(ranking),
            blocks=blocks,
            provenance=provenance,
        )
    except ValueError as exc:
        raise SchemaError("$", str(exc)) from None


def import_gazemap_json(data: bytes | str | IO) -> GazeMap:
    if hasattr(data, "read"):
        data = data.read()
    text = data.decode("utf-8-sig") if isinstance(data, bytes) else data
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc}") from None
    return doc_to_gazemap(doc)


# --- sessions -----------------------------------------------------------------

def session_to_doc(s: Session) -> dict[str, object]:
    events = []
    for e in s.events:
        rec: dict[str, object] = {"t": e.t_ms, "file": e.file, "line": e.line}
        if e.column is not None:
            rec["col"] = e.column
        if e.token is not None:
            rec["token"] = e.token
        if not e.valid:
            rec["valid"] = False
        events.append(rec)
    return {
        "format_version": FORMAT_VERSION,
        "participant_id": s.participant_id,
        "role": s.role,
        "group": s.group,
        "task_id": s.task_id,
        "duration_ms": s.duration_ms,
        "events": events,
    }


def export_session_json(s: Session) -> bytes:
    return canonical_json_bytes(session_to_doc(s))


def import_session_json(data: bytes | str | IO) -> Session:
    if hasattr(data, "read"):
        data = data.read()
    text = data.decode("utf-8-sig") if isinstance(data, bytes) else data
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc}") from None
    if not isinstance(doc, Mapping):
        raise SchemaError("$", "document is not a JSON object")
    if doc.get("format_version") != FORMAT_VERSION:
        raise UnsupportedVersion(doc.get("format_version"))
    raw_events = _expect(doc, "events", list, "$")
    events = []
    for i, rec in enumerate(raw_events):
        if not isinstance(rec, Mapping):
            raise SchemaError(f"events[{i}]", "expected object")
        where = f"events[{i}]"
        col = rec.get("col")
        token = rec.get("token")
        valid = rec.get("valid", True)
        if col is not None and (isinstance(col, bool) or not isinstance(col, int)):
            raise SchemaError(where, f"col must be an int, got {col!r}")
        if token is not None and not isinstance(token, str):
            raise SchemaError(where, f"token must be a string, got {token!r}")
        if not isinstance(valid, bool):
            raise SchemaError(where, f"valid must be a boolean, got {valid!r}")
        try:
            events.append(
                GazeEvent(
                    t_ms=_expect(rec, "t", int, where),
                    file=_expect(rec, "file", str, where),
                    line=_expect(rec, "line", int, where),
                    column=col,
                    token=token,
                    valid=valid,
                )
            )
        except ValueError as exc:
            raise SchemaError(where, str(exc)) from None
    try:
        session = Session(
            participant_id=_expect(doc, "participant_id", str, "$"),
            role=_expect(doc, "role", str, "$"),
            group=_expect(doc, "group", str, "$"),
            task_id=_expect(doc, "task_id", str, "$"),
            events=tuple(events),
            duration_ms=_expect(doc, "duration_ms", int, "$"),
        )
    except ValueError as exc:
        raise SchemaError("$", str(exc)) from None
    return validate_session(session)


# --- viewer bundle --------------------------------------------------------------

def module_map_to_doc(m: ModuleMap) -> dict[str, object]:
    return {
        "entries": dict(m.entries),
        "rules": [
            {"kind": r.kind, "pattern": r.pattern, "label": r.label} for r in m.rules
        ],
    }


def export_viewer_bundle(
    g: GazeMap,
    inventory: FileInventory,
    module_map: ModuleMap,
    out_dir: str,
) -> dict[str, object]:
    """Write bundle.json, mirrored source assets under files/, and a
    manifest of sizes and content hashes. Returns the manifest.

    The bundle embeds source text so the viewer works from the single JSON
    document; the files/ assets carry the same bytes for direct serving.
    """
    source_files: dict[str, str] = {}
    for path in sorted(g.files):
        if path not in inventory.files:
            raise UnknownFile(path)
        text = read_source_text(inventory, path)
        line_count = inventory.files[path].line_count
        for line in g.files[path]:
            if line > line_count:
                raise SchemaError(
                    f"files.{path}", f"graded line {line} beyond line count {line_count}"
                )
        source_files[path] = text

    bundle_doc = {
        "format_version": FORMAT_VERSION,
        "gaze_map": gazemap_to_doc(g),
        "module_map": module_map_to_doc(module_map),
        "source_files": source_files,
        "provenance": {
            "tool": "gazemap",
            "version": __version__,
            **{k: v for k, v in g.provenance.items()},
        },
    }

    os.makedirs(out_dir, exist_ok=True)
    written: list[tuple[str, bytes]] = [("bundle.json", canonical_json_bytes(bundle_doc))]
    for path, text in source_files.items():
        written.append((f"files/{path}", text.encode("utf-8")))

    entries = []
    for rel, data in written:
        full = os.path.join(out_dir, rel.replace("/", os.sep))
        os.makedirs(os.path.dirname(full) or out_dir, exist_ok=True)
        with open(full, "wb") as fh:
            fh.write(data)
        entries.append(
            {"path": rel, "bytes": len(data), "sha256": hashlib.sha256(data).hexdigest()}
        )
    entries.sort(key=lambda e: e["path"])

    manifest = {"format_version": FORMAT_VERSION, "entries": entries}
    with open(os.path.join(out_dir, "manifest.json"), "wb") as fh:
        fh.write(canonical_json_bytes(manifest))
    return manifest
