"""Command-line front door.

Subcommands: ingest, map, seq dtw|nw, overlap, stats <test>, tlx.
Machine output goes to stdout (JSON or CSV via --format), diagnostics to
stderr. Exit codes: 0 success, 1 usage error, 2 data error. Defaults may be
supplied by a ./gazemap.json config file; explicit flags always win.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Sequence

from gazemap import __version__, aggregate, export, ingest, overlap, sequences, stats
from gazemap.errors import GazemapError
from gazemap.model import ModuleMap, StatResult

CONFIG_FILE = "gazemap.json"
CONFIG_KEYS = (
    "top_n",
    "skew_threshold",
    "min_dwell",
    "seed",
    "resamples",
    "exact_cutoff",
    "level",
    "format",
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; this tool reserves 2 for data errors."""

    def error(self, message: str):
        raise _UsageError(message)


def _supports_color(stream) -> bool:
    if os.environ.get("GAZEMAP_NO_COLOR"):
        return False
    return bool(getattr(stream, "isatty", lambda: False)())


def _print_error(message: str) -> None:
    if _supports_color(sys.stderr):
        message = f"\x1b[31m{message}\x1b[0m"
    print(f"gazemap: error: {message}", file=sys.stderr)


def _load_config(cwd: str = ".") -> dict:
    path = os.path.join(cwd, CONFIG_FILE)
    if not os.path.exists(path):
        return {}
    try:
        with open(path, "rb") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise GazemapError(f"bad config file {path}: {exc}") from None
    if not isinstance(raw, dict):
        raise GazemapError(f"bad config file {path}: expected a JSON object")
    return {k: raw[k] for k in CONFIG_KEYS if k in raw}


def _resolve(args: argparse.Namespace, config: dict, key: str, default):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in config:
        return config[key]
    return default


def _emit(payload, fmt: str, csv_rows=None, csv_header=None) -> None:
    """Write the machine-readable result to stdout."""
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(csv_header)
        writer.writerows(csv_rows)
        sys.stdout.write(out.getvalue())
    else:
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _stat_rows(results: Sequence[StatResult]):
    header = ["method", "statistic", "p_value", "effect_size", "ci_low", "ci_high", "n1", "n2", "notes"]
    rows = [
        [
            r.method,
            r.statistic,
            "" if r.p_value is None else r.p_value,
            "" if r.effect_size is None else r.effect_size,
            "" if r.ci_low is None else r.ci_low,
            "" if r.ci_high is None else r.ci_high,
            r.n1,
            r.n2,
            r.notes,
        ]
        for r in results
    ]
    return header, rows


def build_parser() -> _Parser:
    parser = _Parser(prog="gazemap", description=__doc__)
    parser.add_argument("--version", action="version", version=f"gazemap {__version__}")
    parser.add_argument(
        "--format", choices=("json", "csv"), default=None, help="machine output format"
    )
    sub = parser.add_subparsers(dest="command", metavar="command")

    p_ingest = sub.add_parser("ingest", help="parse gaze logs into validated session files")
    p_ingest.add_argument("logs", nargs="+", help="gaze logs (.jsonl or .csv)")
    p_ingest.add_argument("--participant", help="participant id (default: log file stem)")
    p_ingest.add_argument("--role", choices=("expert", "novice"), default="novice")
    p_ingest.add_argument(
        "--group", choices=("control", "experiment", "expert"), default="control"
    )
    p_ingest.add_argument("--task", default="task1")
    p_ingest.add_argument("--out-dir", default=".", help="where session files are written")

    p_map = sub.add_parser("map", help="aggregate sessions into a gaze map / viewer bundle")
    p_map.add_argument("sessions", nargs="+", help="session JSON files from `ingest`")
    p_map.add_argument("--root", required=True, help="source tree root")
    p_map.add_argument("--project-id", default=None)
    p_map.add_argument("--top-n", type=int, default=None, dest="top_n")
    p_map.add_argument("--skew-threshold", type=float, default=None, dest="skew_threshold")
    p_map.add_argument("--min-dwell", type=int, default=None, dest="min_dwell")
    p_map.add_argument("--include", action="append", default=None, help="include glob")
    p_map.add_argument("--exclude", action="append", default=None, help="exclude glob")
    p_map.add_argument("--module-rules", default=None, help="module rules JSON for the bundle")
    p_map.add_argument("--out", default=None, help="gaze map JSON path (default stdout)")
    p_map.add_argument("--bundle", default=None, help="also write a viewer bundle here")

    p_seq = sub.add_parser("seq", help="sequence comparisons")
    seq_sub = p_seq.add_subparsers(dest="seq_command", metavar="dtw|nw")

    p_dtw = seq_sub.add_parser("dtw", help="DTW distances to a reference sequence")
    p_dtw.add_argument("inputs", nargs="+", help="session or sequence JSON files")
    p_dtw.add_argument("--reference", required=True, help="reference session/sequence JSON")
    p_dtw.add_argument("--min-dwell", type=int, default=None, dest="min_dwell")
    p_dtw.add_argument(
        "--include-invalid", action="store_true",
        help="keep valid=false samples when extracting sequences",
    )

    p_nw = seq_sub.add_parser("nw", help="normalized alignment of two module sequences")
    p_nw.add_argument("--a", nargs="+", required=True, help="side A session/sequence files")
    p_nw.add_argument("--b", nargs="+", required=True, help="side B session/sequence files")
    p_nw.add_argument("--module-rules", default=None, help="module rules JSON")
    p_nw.add_argument("--root", default=None, help="source root to classify against")
    p_nw.add_argument("--module-map", default=None, help="precomputed path->label JSON")
    p_nw.add_argument("--min-dwell", type=int, default=None, dest="min_dwell")
    p_nw.add_argument(
        "--include-invalid", action="store_true",
        help="keep valid=false samples when extracting sequences",
    )

    p_overlap = sub.add_parser("overlap", help="line-level Jaccard overlap of two gaze maps")
    p_overlap.add_argument("map_a", help="gaze map JSON of group A")
    p_overlap.add_argument("map_b", help="gaze map JSON of group B")

    p_stats = sub.add_parser("stats", help="run one statistical test on CSV input")
    p_stats.add_argument(
        "test",
        choices=("mwu", "wilcoxon", "t", "bartlett", "cliffs", "bootstrap-diff", "bonferroni"),
    )
    p_stats.add_argument("data", nargs="?", help="input CSV (see docs/format.md)")
    p_stats.add_argument("--exact-cutoff", type=int, default=None, dest="exact_cutoff")
    p_stats.add_argument("--resamples", type=int, default=None)
    p_stats.add_argument("--seed", type=int, default=None)
    p_stats.add_argument("--level", type=float, default=None)
    p_stats.add_argument("--alpha", type=float, default=0.05)
    p_stats.add_argument("--m", type=int, default=None)

    p_tlx = sub.add_parser("tlx", help="score TLX questionnaire CSV")
    p_tlx.add_argument("data", help="TLX CSV file")

    return parser


# --- helpers ---------------------------------------------------------------------

def _read_bytes(path: str) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise GazemapError(f"cannot read {path}: {exc}") from None


def _load_sessions(paths: Sequence[str]):
    out = []
    for path in paths:
        try:
            out.append(export.import_session_json(_read_bytes(path)))
        except GazemapError as exc:
            raise GazemapError(f"{path}: {exc}") from None
    return out


def _load_sequence(
    path: str, min_dwell: int, include_invalid: bool = False
) -> sequences.FileSequence:
    """A sequence input is either a session file (events) or a plain
    sequence file ({"items": [...]})."""
    data = _read_bytes(path)
    try:
        doc = json.loads(data.decode("utf-8-sig"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise GazemapError(f"{path}: invalid JSON: {exc}") from None
    if isinstance(doc, dict) and "events" in doc:
        session = export.import_session_json(data)
        return sequences.file_sequence(
            session, min_dwell_ms=min_dwell, include_invalid=include_invalid
        )
    if isinstance(doc, dict) and "items" in doc:
        items = doc["items"]
        if not isinstance(items, list) or not all(isinstance(i, str) for i in items):
            raise GazemapError(f"{path}: items must be an array of strings")
        collapsed = []
        for item in items:
            if not collapsed or collapsed[-1] != item:
                collapsed.append(item)
        return sequences.FileSequence(
            items=tuple(collapsed),
            participant_id=str(doc.get("participant_id", "")),
            task_id=str(doc.get("task_id", "")),
        )
    raise GazemapError(f"{path}: expected a session file or a sequence file")


def _module_map_from_args(args, config) -> ModuleMap:
    if args.module_map:
        raw = json.loads(_read_bytes(args.module_map).decode("utf-8-sig"))
        if not isinstance(raw, dict) or not all(
            isinstance(k, str) and isinstance(v, str) and len(v) == 1 for k, v in raw.items()
        ):
            raise GazemapError(f"{args.module_map}: expected an object of path -> single-char label")
        return ModuleMap(entries=raw, rules=())
    if not args.root:
        raise _UsageError("seq nw requires either --module-map or --root")
    rules = (
        ingest.load_module_rules(_read_bytes(args.module_rules))
        if args.module_rules
        else ingest.DEFAULT_MODULE_RULES
    )
    inventory = ingest.scan_source_tree(args.root)
    return ingest.build_module_map(inventory, rules)


def _means_from_map(g) -> dict[tuple[str, int], float]:
    return {
        (path, line): att.mean_norm_hits
        for path, lines in g.files.items()
        for line, att in lines.items()
    }


def _two_sample_csv(data: bytes, path: str) -> tuple[list[float], list[float]]:
    """CSV with header group,value; the first-seen group label becomes x."""
    rows = list(csv.reader(data.decode("utf-8-sig").splitlines()))
    if not rows or [c.strip() for c in rows[0]] != ["group", "value"]:
        raise GazemapError(f"{path}: expected header group,value")
    order: list[str] = []
    samples: dict[str, list[float]] = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise GazemapError(f"{path}:{lineno}: expected 2 fields")
        label, raw = row[0].strip(), row[1].strip()
        try:
            value = float(raw)
        except ValueError:
            raise GazemapError(f"{path}:{lineno}: bad number {raw!r}") from None
        if label not in samples:
            order.append(label)
            samples[label] = []
        samples[label].append(value)
    if len(order) != 2:
        raise GazemapError(f"{path}: expected exactly 2 group labels, got {order}")
    return samples[order[0]], samples[order[1]]


def _paired_csv(data: bytes, path: str) -> tuple[list[float], list[float]]:
    rows = list(csv.reader(data.decode("utf-8-sig").splitlines()))
    if not rows or [c.strip() for c in rows[0]] != ["x", "y"]:
        raise GazemapError(f"{path}: expected header x,y")
    xs, ys = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise GazemapError(f"{path}:{lineno}: expected 2 fields")
        try:
            xs.append(float(row[0]))
            ys.append(float(row[1]))
        except ValueError:
            raise GazemapError(f"{path}:{lineno}: bad number") from None
    return xs, ys


def _p_values_csv(data: bytes, path: str) -> list[float]:
    rows = list(csv.reader(data.decode("utf-8-sig").splitlines()))
    if not rows or [c.strip() for c in rows[0]] != ["p"]:
        raise GazemapError(f"{path}: expected header p")
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        try:
            out.append(float(row[0]))
        except ValueError:
            raise GazemapError(f"{path}:{lineno}: bad number") from None
    return out


# --- subcommands ------------------------------------------------------------------

def _cmd_ingest(args, config, fmt) -> int:
    written = []
    for log in args.logs:
        stem = os.path.splitext(os.path.basename(log))[0]
        participant = args.participant or stem
        data = _read_bytes(log)
        if log.endswith(".csv"):
            session = ingest.parse_gaze_csv(
                data, participant_id=participant, role=args.role,
                group=args.group, task_id=args.task,
            )
        else:
            session = ingest.parse_gaze_jsonl(
                data, participant_id=participant, role=args.role,
                group=args.group, task_id=args.task,
            )
        os.makedirs(args.out_dir, exist_ok=True)
        out_path = os.path.join(args.out_dir, f"{participant}_{args.task}.session.json")
        with open(out_path, "wb") as fh:
            fh.write(export.export_session_json(session))
        written.append(
            {"input": log, "session": out_path, "events": len(session.events)}
        )
    _emit(
        written, fmt,
        csv_rows=[[w["input"], w["session"], w["events"]] for w in written],
        csv_header=["input", "session", "events"],
    )
    return 0


def _cmd_map(args, config, fmt) -> int:
    top_n = int(_resolve(args, config, "top_n", aggregate.DEFAULT_TOP_N))
    skew_threshold = float(
        _resolve(args, config, "skew_threshold", aggregate.DEFAULT_SKEW_THRESHOLD)
    )
    min_dwell = int(_resolve(args, config, "min_dwell", 0))
    sessions = _load_sessions(args.sessions)
    include = tuple(args.include) if args.include else ("*",)
    exclude = tuple(args.exclude) if args.exclude else ()
    inventory = ingest.scan_source_tree(args.root, include, exclude)
    # the kernel backend is deliberately NOT part of provenance: both
    # backends are exact, and output bytes must not depend on build flavor
    gaze_map = aggregate.build_gaze_map(
        sessions,
        inventory,
        top_n=top_n,
        skew_threshold=skew_threshold,
        project_id=args.project_id,
        extra_provenance={"min_dwell_ms": min_dwell},
    )
    payload = export.export_gazemap_json(gaze_map)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(payload)
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        sys.stdout.buffer.write(payload)
    if args.bundle:
        rules = (
            ingest.load_module_rules(_read_bytes(args.module_rules))
            if args.module_rules
            else ingest.DEFAULT_MODULE_RULES
        )
        module_map = ingest.build_module_map(inventory, rules)
        export.export_viewer_bundle(gaze_map, inventory, module_map, args.bundle)
        print(f"wrote bundle to {args.bundle}", file=sys.stderr)
    return 0


def _cmd_seq_dtw(args, config, fmt) -> int:
    min_dwell = int(_resolve(args, config, "min_dwell", 0))
    reference = _load_sequence(args.reference, min_dwell, args.include_invalid)
    participant_seqs = [
        _load_sequence(p, min_dwell, args.include_invalid) for p in args.inputs
    ]
    distances = sequences.group_dtw_distribution(participant_seqs, reference)
    rows = [
        {"participant_id": s.participant_id, "distance": d}
        for s, d in zip(participant_seqs, distances)
    ]
    payload = {
        "reference": reference.participant_id or args.reference,
        "min_dwell_ms": min_dwell,
        "distances": rows,
    }
    _emit(
        payload, fmt,
        csv_rows=[[r["participant_id"], r["distance"]] for r in rows],
        csv_header=["participant_id", "distance"],
    )
    return 0


def _cmd_seq_nw(args, config, fmt) -> int:
    min_dwell = int(_resolve(args, config, "min_dwell", 0))
    module_map = _module_map_from_args(args, config)
    side_a = [_load_sequence(p, min_dwell, args.include_invalid) for p in args.a]
    side_b = [_load_sequence(p, min_dwell, args.include_invalid) for p in args.b]
    seq_a = side_a[0] if len(side_a) == 1 else sequences.group_file_sequence(side_a)
    seq_b = side_b[0] if len(side_b) == 1 else sequences.group_file_sequence(side_b)
    mod_a = sequences.module_sequence(seq_a, module_map)
    mod_b = sequences.module_sequence(seq_b, module_map)
    result = sequences.nw_similarity(mod_a, mod_b)
    payload = {
        "a": mod_a.items,
        "b": mod_b.items,
        "score": result.score,
        "similarity": result.similarity,
        "distance": result.distance,
        "aggregation": "members concatenated in participant-id order, then collapsed",
        "min_dwell_ms": min_dwell,
    }
    _emit(
        payload, fmt,
        csv_rows=[[mod_a.items, mod_b.items, result.score, result.similarity, result.distance]],
        csv_header=["a", "b", "score", "similarity", "distance"],
    )
    return 0


def _cmd_overlap(args, config, fmt) -> int:
    map_a = export.import_gazemap_json(_read_bytes(args.map_a))
    map_b = export.import_gazemap_json(_read_bytes(args.map_b))
    report = overlap.per_file_overlap(_means_from_map(map_a), _means_from_map(map_b))
    payload = report.to_dict()
    _emit(
        payload, fmt,
        csv_rows=[[path, score] for path, score in sorted(report.per_file.items())]
        + [
            ["(aggregate)", report.aggregate],
            ["(per_file_mean)", report.per_file_mean],
            ["(zero_overlap_count)", report.zero_overlap_count],
            ["(full_overlap_count)", report.full_overlap_count],
        ],
        csv_header=["file", "jaccard"],
    )
    return 0


def _cmd_stats(args, config, fmt) -> int:
    seed = int(_resolve(args, config, "seed", 0))
    resamples = int(_resolve(args, config, "resamples", stats.DEFAULT_RESAMPLES))
    level = float(_resolve(args, config, "level", 0.95))

    if args.test == "bonferroni":
        if args.data:
            p_values = _p_values_csv(_read_bytes(args.data), args.data)
            m = args.m if args.m is not None else len(p_values)
            adjusted = stats.bonferroni(p_values, m)
            payload = {
                "m": m,
                "alpha": args.alpha,
                "threshold": stats.bonferroni_alpha(args.alpha, m),
                "adjusted": adjusted,
            }
            _emit(
                payload, fmt,
                csv_rows=[[p, a] for p, a in zip(p_values, adjusted)],
                csv_header=["p", "adjusted_p"],
            )
        else:
            if args.m is None:
                raise _UsageError("stats bonferroni needs --m or a CSV of p-values")
            threshold = stats.bonferroni_alpha(args.alpha, args.m)
            payload = {"m": args.m, "alpha": args.alpha, "threshold": threshold}
            _emit(payload, fmt, csv_rows=[[args.m, args.alpha, threshold]],
                  csv_header=["m", "alpha", "threshold"])
        return 0

    if not args.data:
        raise _UsageError(f"stats {args.test} needs an input CSV")
    data = _read_bytes(args.data)

    if args.test == "wilcoxon":
        x, y = _paired_csv(data, args.data)
        cutoff = int(_resolve(args, config, "exact_cutoff", stats.WILCOXON_EXACT_CUTOFF))
        result = stats.wilcoxon_signed_rank(x, y, exact_cutoff=cutoff)
    elif args.test == "mwu":
        x, y = _two_sample_csv(data, args.data)
        cutoff = int(_resolve(args, config, "exact_cutoff", stats.MWU_EXACT_CUTOFF))
        result = stats.mann_whitney_u(x, y, exact_cutoff=cutoff)
    elif args.test == "t":
        x, y = _two_sample_csv(data, args.data)
        result = stats.students_t(x, y)
    elif args.test == "bartlett":
        x, y = _two_sample_csv(data, args.data)
        result = stats.bartlett(x, y)
    elif args.test == "cliffs":
        x, y = _two_sample_csv(data, args.data)
        result = stats.cliffs_delta(x, y, level=level, resamples=resamples, seed=seed)
    else:  # bootstrap-diff
        x, y = _two_sample_csv(data, args.data)
        low, high, mean_diff = stats.bootstrap_ci_mean_diff(
            x, y, level=level, resamples=resamples, seed=seed
        )
        result = StatResult(
            method="bootstrap_ci_mean_diff",
            statistic=mean_diff,
            p_value=None,
            n1=len(x),
            n2=len(y),
            ci_low=low,
            ci_high=high,
            notes=f"percentile bootstrap, resamples={resamples}, seed={seed}, level={level}",
        )

    header, rows = _stat_rows([result])
    _emit(result.to_dict(), fmt, csv_rows=rows, csv_header=header)
    return 0


def _cmd_tlx(args, config, fmt) -> int:
    records = ingest.parse_tlx_csv(_read_bytes(args.data))
    rows = []
    for r in records:
        try:
            score = stats.nasa_tlx(r)
        except GazemapError as exc:
            raise GazemapError(f"{args.data}: participant {r.participant!r} task {r.task!r}: {exc}") from None
        rows.append({"participant": r.participant, "task": r.task, "score": score})
    _emit(
        rows, fmt,
        csv_rows=[[r["participant"], r["task"], r["score"]] for r in rows],
        csv_header=["participant", "task", "score"],
    )
    return 0


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise _UsageError("a subcommand is required")
        if args.command == "seq" and args.seq_command is None:
            raise _UsageError("seq requires a dtw or nw subcommand")
        config = _load_config()
        fmt = _resolve(args, config, "format", "json")
        if fmt not in ("json", "csv"):
            raise _UsageError(f"bad format {fmt!r}")
        if args.command == "ingest":
            return _cmd_ingest(args, config, fmt)
        if args.command == "map":
            return _cmd_map(args, config, fmt)
        if args.command == "seq":
            if args.seq_command == "dtw":
                return _cmd_seq_dtw(args, config, fmt)
            return _cmd_seq_nw(args, config, fmt)
        if args.command == "overlap":
            return _cmd_overlap(args, config, fmt)
        if args.command == "stats":
            return _cmd_stats(args, config, fmt)
        if args.command == "tlx":
            return _cmd_tlx(args, config, fmt)
        raise _UsageError(f"unknown command {args.command!r}")
    except _UsageError as exc:
        _print_error(str(exc))
        parser.print_usage(sys.stderr)
        return 1
    except SystemExit as exc:  # argparse --version/--help paths
        code = exc.code
        return 0 if code is None else int(code) if str(code).isdigit() else 1
    except GazemapError as exc:
        _print_error(str(exc))
        return 2


def entrypoint() -> None:
    sys.exit(run())


if __name__ == "__main__":
    entrypoint()
