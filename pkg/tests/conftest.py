import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")
FIXTURE_PROJECT = os.path.join(DATA_DIR, "fixture_project")
SESSIONS_DIR = os.path.join(DATA_DIR, "sessions")
GOLDEN_DIR = os.path.join(DATA_DIR, "golden")


@pytest.fixture
def fixture_project() -> str:
    return FIXTURE_PROJECT


@pytest.fixture
def sessions_dir() -> str:
    return SESSIONS_DIR


@pytest.fixture
def golden_dir() -> str:
    return GOLDEN_DIR


@pytest.fixture
def fixture_sessions():
    from gazemap import ingest

    out = []
    for name in sorted(os.listdir(SESSIONS_DIR)):
        if not name.endswith(".jsonl"):
            continue
        with open(os.path.join(SESSIONS_DIR, name), "rb") as fh:
            out.append(
                ingest.parse_gaze_jsonl(
                    fh.read(),
                    participant_id=name.rsplit(".", 1)[0],
                    role="expert",
                    group="expert",
                    task_id="task1",
                )
            )
    return out
