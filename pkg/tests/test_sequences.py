import itertools
import random

import pytest

from gazemap import sequences
from gazemap.errors import BothEmpty, EmptySequence, UnclassifiedPath
from gazemap.model import GazeEvent, ModuleMap, Session
from oracles import dtw_unit_brute, lcs_brute


def make_session(visits, duration_ms=None, participant="p1"):
    """visits: list of (file, start_t); one event per visit entry."""
    events = tuple(
        GazeEvent(t_ms=t, file=f, line=1) for f, t in visits
    )
    if duration_ms is None:
        duration_ms = (events[-1].t_ms + 1000) if events else 1
    return Session(
        participant_id=participant,
        role="novice",
        group="control",
        task_id="t1",
        events=events,
        duration_ms=duration_ms,
    )


class TestFileSequence:
    def test_collapses_consecutive_duplicates(self):
        s = make_session([("A", 0), ("A", 10), ("B", 20), ("A", 30)])
        assert sequences.file_sequence(s).items == ("A", "B", "A")

    def test_empty_session(self):
        assert sequences.file_sequence(make_session([])).items == ()

    def test_short_visit_dropped_then_collapsed(self):
        # A for 2000ms, B for 100ms, A for 2000ms: B drops, A+A collapse
        s = make_session([("A", 0), ("B", 2000), ("A", 2100)], duration_ms=4100)
        assert sequences.file_sequence(s, min_dwell_ms=500).items == ("A",)

    def test_zero_dwell_keeps_everything(self):
        s = make_session([("A", 0), ("B", 5), ("C", 6)])
        assert sequences.file_sequence(s).items == ("A", "B", "C")

    def test_last_visit_dwell_until_session_end(self):
        s = make_session([("A", 0), ("B", 1000)], duration_ms=1100)
        assert sequences.file_sequence(s, min_dwell_ms=500).items == ("A",)
        s2 = make_session([("A", 0), ("B", 1000)], duration_ms=2000)
        assert sequences.file_sequence(s2, min_dwell_ms=500).items == ("A", "B")

    def test_invalid_events_excluded_by_default(self):
        events = (
            GazeEvent(t_ms=0, file="A", line=1),
            GazeEvent(t_ms=10, file="B", line=1, valid=False),
            GazeEvent(t_ms=20, file="A", line=1),
        )
        s = Session(
            participant_id="p", role="novice", group="control", task_id="t",
            events=events, duration_ms=1000,
        )
        assert sequences.file_sequence(s).items == ("A",)
        assert sequences.file_sequence(s, include_invalid=True).items == ("A", "B", "A")

    def test_constructor_rejects_uncollapsed(self):
        with pytest.raises(ValueError):
            sequences.FileSequence(items=("A", "A"))


class TestDtwDistance:
    def test_identical(self):
        assert sequences.dtw_distance(["A", "B", "C"], ["A", "B", "C"]) == 0.0

    def test_known_value(self):
        assert sequences.dtw_distance(["A", "B", "C"], ["A", "C"]) == 1.0

    def test_empty_raises(self):
        with pytest.raises(EmptySequence):
            sequences.dtw_distance([], ["A"])
        with pytest.raises(EmptySequence):
            sequences.dtw_distance(["A"], [])

    def test_symmetry_and_self_distance(self):
        rng = random.Random(11)
        for _ in range(100):
            a = [rng.choice("ABC") for _ in range(rng.randint(1, 6))]
            b = [rng.choice("ABC") for _ in range(rng.randint(1, 6))]
            d_ab = sequences.dtw_distance(a, b)
            assert d_ab == sequences.dtw_distance(b, a)
            assert sequences.dtw_distance(a, a) == 0.0
            assert d_ab >= 0 and d_ab == int(d_ab)

    def test_matches_brute_force_small(self):
        rng = random.Random(12)
        for _ in range(200):
            a = [rng.choice("ABC") for _ in range(rng.randint(1, 5))]
            b = [rng.choice("ABC") for _ in range(rng.randint(1, 5))]
            assert sequences.dtw_distance(a, b) == dtw_unit_brute(a, b)


class TestModuleSequence:
    MAP = ModuleMap(
        entries={"ctrlA": "C", "ctrlB": "C", "svc": "S"},
        rules=(),
    )

    def test_map_and_collapse(self):
        f = sequences.FileSequence(items=("ctrlA", "ctrlB", "svc"))
        assert sequences.module_sequence(f, self.MAP).items == "CS"

    def test_empty(self):
        f = sequences.FileSequence(items=())
        assert sequences.module_sequence(f, self.MAP).items == ""

    def test_unclassified_path(self):
        f = sequences.FileSequence(items=("mystery",))
        with pytest.raises(UnclassifiedPath):
            sequences.module_sequence(f, self.MAP)

    def test_length_bounded(self):
        rng = random.Random(13)
        for _ in range(50):
            raw = [rng.choice(["ctrlA", "ctrlB", "svc"]) for _ in range(rng.randint(0, 10))]
            collapsed = [k for k, _ in itertools.groupby(raw)]
            f = sequences.FileSequence(items=tuple(collapsed))
            assert len(sequences.module_sequence(f, self.MAP)) <= len(f)


class TestNwSimilarity:
    def test_identity(self):
        r = sequences.nw_similarity("ABC", "ABC")
        assert r.similarity == 1.0 and r.distance == 0.0

    def test_known_value(self):
        r = sequences.nw_similarity("CSE", "CE")
        assert r.score == 2
        assert r.similarity == pytest.approx(2 / 3)

    def test_disjoint(self):
        r = sequences.nw_similarity("AB", "CD")
        assert r.similarity == 0.0 and r.distance == 1.0

    def test_both_empty(self):
        with pytest.raises(BothEmpty):
            sequences.nw_similarity("", "")

    def test_one_empty(self):
        r = sequences.nw_similarity("AB", "")
        assert r.similarity == 0.0 and r.distance == 1.0

    def test_score_is_lcs_and_complementarity(self):
        rng = random.Random(14)
        for _ in range(300):
            a = "".join(rng.choice("ABCD") for _ in range(rng.randint(0, 10)))
            b = "".join(rng.choice("ABCD") for _ in range(rng.randint(0, 10)))
            if not a and not b:
                continue
            r = sequences.nw_similarity(a, b)
            assert r.score == lcs_brute(a, b)
            assert abs(r.similarity + r.distance - 1.0) < 1e-12

    def test_published_similarity_distance_pairs_are_complementary(self):
        # the pairs reported for group comparisons: similarity + distance = 1
        for sim, dist in [(0.45, 0.55), (0.62, 0.38), (0.34, 0.66), (0.50, 0.50)]:
            assert sim + dist == pytest.approx(1.0, abs=1e-12)


class TestGroupDtwDistribution:
    def test_identical_to_reference(self):
        ref = sequences.FileSequence(items=("A", "B"))
        seqs = [sequences.FileSequence(items=("A", "B")) for _ in range(3)]
        assert sequences.group_dtw_distribution(seqs, ref) == [0.0, 0.0, 0.0]

    def test_single_known_distance(self):
        ref = sequences.FileSequence(items=("A", "C"))
        seqs = [sequences.FileSequence(items=("A", "B", "C"))]
        assert sequences.group_dtw_distribution(seqs, ref) == [1.0]

    def test_empty_participant_list(self):
        ref = sequences.FileSequence(items=("A",))
        assert sequences.group_dtw_distribution([], ref) == []

    def test_empty_reference(self):
        with pytest.raises(EmptySequence):
            sequences.group_dtw_distribution([], sequences.FileSequence(items=()))


class TestGroupFileSequence:
    def test_concatenates_in_participant_order(self):
        f1 = sequences.FileSequence(items=("B", "A"), participant_id="p2")
        f2 = sequences.FileSequence(items=("A", "C"), participant_id="p1")
        merged = sequences.group_file_sequence([f1, f2])
        # p1 first, then p2; the A/A seam collapses
        assert merged.items == ("A", "C", "B", "A")

    def test_seam_collapse(self):
        f1 = sequences.FileSequence(items=("A",), participant_id="p1")
        f2 = sequences.FileSequence(items=("A", "B"), participant_id="p2")
        assert sequences.group_file_sequence([f1, f2]).items == ("A", "B")
