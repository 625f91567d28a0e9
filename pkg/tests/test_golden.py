"""The committed fixture corpus must reproduce the committed golden outputs
byte for byte: this is the canonical-serialization determinism contract."""

import filecmp
import os

from gazemap import aggregate, export, ingest


def build_fixture_map(fixture_project, fixture_sessions):
    inventory = ingest.scan_source_tree(fixture_project)
    return (
        aggregate.build_gaze_map(
            fixture_sessions,
            inventory,
            project_id="fixture_project",
            extra_provenance={"min_dwell_ms": 0},
        ),
        inventory,
    )


def test_gazemap_json_matches_golden(fixture_project, fixture_sessions, golden_dir):
    gaze_map, _ = build_fixture_map(fixture_project, fixture_sessions)
    with open(os.path.join(golden_dir, "gazemap.json"), "rb") as fh:
        assert export.export_gazemap_json(gaze_map) == fh.read()


def test_bundle_matches_golden(fixture_project, fixture_sessions, golden_dir, tmp_path):
    gaze_map, inventory = build_fixture_map(fixture_project, fixture_sessions)
    module_map = ingest.build_module_map(inventory)
    out = tmp_path / "bundle"
    export.export_viewer_bundle(gaze_map, inventory, module_map, str(out))

    golden_bundle = os.path.join(golden_dir, "bundle")
    for dirpath, _dirnames, filenames in os.walk(golden_bundle):
        for name in filenames:
            golden_file = os.path.join(dirpath, name)
            rel = os.path.relpath(golden_file, golden_bundle)
            produced = out / rel
            assert produced.exists(), f"missing {rel}"
            assert filecmp.cmp(golden_file, produced, shallow=False), f"differs: {rel}"


def test_golden_import_roundtrip(golden_dir):
    with open(os.path.join(golden_dir, "gazemap.json"), "rb") as fh:
        data = fh.read()
    gaze_map = export.import_gazemap_json(data)
    assert export.export_gazemap_json(gaze_map) == data
    assert gaze_map.ranking[0][0].endswith("BookController.java")
