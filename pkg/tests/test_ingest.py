import json

from slidegram.ingest import (
    corpus_totals,
    mark_revalidations,
    parse_log,
    serialize_event,
    session_lines,
)

from conftest import make_session


def lines_for(*sessions):
    out = []
    for s in sessions:
        out.extend(session_lines(s))
    return out


class TestParseLog:
    def test_simple_session(self, ex_a):
        s = make_session("EX-A", (1, 3, 1), [
            ("move", 0, 2), ("move", 0, 1), ("move", 1, 1), ("validate", "correct"),
        ])
        sessions, errors = parse_log(lines_for(s))
        assert errors == []
        assert len(sessions) == 1
        assert len(sessions[0].events) == 4
        assert sessions[0].initial_vector == (1, 3, 1)
        assert sessions[0].consistent

    def test_position_zero_reported(self):
        line = json.dumps({
            "session_id": "s1", "student_id": "a", "exercise_id": "EX-A",
            "ts": "2025-04-03T09:14:05.120Z", "kind": "move",
            "slider_index": 0, "new_position": 0, "vector": [0, 1, 1],
        })
        sessions, errors = parse_log([line])
        assert sessions == []
        assert len(errors) == 1
        assert "position out of range" in errors[0].reason

    def test_malformed_lines_never_abort(self):
        good = make_session("EX-A", (1, 1, 1), [("validate", "correct")])
        lines = ["{not json", *lines_for(good), '{"kind":"jump"}']
        sessions, errors = parse_log(lines)
        assert len(sessions) == 1
        assert len(errors) == 2

    def test_interleaved_sessions(self):
        a = make_session("EX-A", (1, 3, 1), [("move", 1, 1), ("validate", "correct")],
                         session_id="sa", student_id="p1")
        b = make_session("EX-A", (2, 1, 1), [("move", 1, 3), ("validate", "correct")],
                         session_id="sb", student_id="p2")
        la, lb = lines_for(a), lines_for(b)
        interleaved = [la[0], lb[0], la[1], lb[1], la[2], lb[2]]
        sessions, errors = parse_log(interleaved)
        assert errors == []
        assert {s.session_id for s in sessions} == {"sa", "sb"}
        for s in sessions:
            assert [e.ts for e in s.events] == sorted(e.ts for e in s.events)

    def test_forbidden_fields(self):
        doc = {
            "session_id": "s1", "student_id": "a", "exercise_id": "EX-A",
            "ts": "2025-04-03T09:14:05.120Z", "kind": "validate",
            "vector": [1, 1, 1], "result": "correct", "slider_index": 0,
        }
        _, errors = parse_log([json.dumps(doc)])
        assert errors and "unknown fields" in errors[0].reason

    def test_timestamp_ties_normalized(self):
        base = {
            "session_id": "s1", "student_id": "a", "exercise_id": "EX-A",
            "ts": "2025-04-03T09:14:05.120Z",
        }
        lines = [
            json.dumps({**base, "kind": "start", "vector": [1, 3, 1]}),
            json.dumps({**base, "kind": "move", "slider_index": 1,
                        "new_position": 1, "vector": [1, 1, 1]}),
            json.dumps({**base, "kind": "validate", "vector": [1, 1, 1],
                        "result": "correct"}),
        ]
        sessions, errors = parse_log(lines)
        assert errors == []
        (s,) = sessions
        ts = [e.ts for e in s.events]
        assert ts[0] < ts[1]
        assert (ts[1] - ts[0]).total_seconds() == 0.001

    def test_replay_mismatch_flags_session(self):
        base = {
            "session_id": "s1", "student_id": "a", "exercise_id": "EX-A",
        }
        lines = [
            json.dumps({**base, "ts": "2025-04-03T09:00:00.000Z",
                        "kind": "start", "vector": [1, 1, 1]}),
            # claims to move slider 0 but the vector changes slider 1 too
            json.dumps({**base, "ts": "2025-04-03T09:00:01.000Z",
                        "kind": "move", "slider_index": 0,
                        "new_position": 2, "vector": [2, 2, 1]}),
        ]
        sessions, errors = parse_log(lines)
        assert errors == []
        assert not sessions[0].consistent
        assert "does not change exactly" in sessions[0].audit[0]

    def test_round_trip(self):
        s = make_session("EX-A", (1, 1, 2), [
            ("move", 0, 2), ("validate", "incorrect"), ("move", 0, 1),
            ("move", 2, 1), ("validate", "correct"),
        ])
        original = lines_for(s)
        sessions, errors = parse_log(original)
        assert errors == []
        assert lines_for(sessions[0]) == original


class TestRevalidations:
    def test_immediate_repeat_flagged(self):
        s = make_session("EX-A", (1, 1, 1), [
            ("validate", "correct"), ("validate", "correct"),
        ])
        marked = mark_revalidations(s)
        assert [e.revalidation for e in marked.events] == [False, True]

    def test_intervening_moves_not_flagged(self):
        s = make_session("EX-A", (1, 1, 1), [
            ("validate", "correct"),
            ("move", 0, 2), ("move", 0, 1),
            ("validate", "correct"),
        ])
        marked = mark_revalidations(s)
        flags = [e.revalidation for e in marked.events if e.kind == "validate"]
        assert flags == [False, False]

    def test_different_vectors_not_flagged(self):
        s = make_session("EX-A", (1, 1, 1), [
            ("validate", "correct"), ("move", 1, 2), ("validate", "incorrect"),
        ])
        marked = mark_revalidations(s)
        flags = [e.revalidation for e in marked.events if e.kind == "validate"]
        assert flags == [False, False]

    def test_idempotent(self):
        s = make_session("EX-A", (1, 1, 1), [
            ("validate", "correct"), ("validate", "correct"),
        ])
        once = mark_revalidations(s)
        assert mark_revalidations(once) == once


class TestCorpusTotals:
    def test_small_corpus(self):
        s = make_session("EX-A", (2, 1, 1), [
            *[("move", 0, 1 + (k % 2)) for k in range(10)],
            ("validate", "incorrect"),
            ("validate", "incorrect"),   # re-validation
            ("move", 0, 1),
            ("validate", "correct"),
            ("validate", "incorrect"),
        ])
        # last validate has same vector but different result; still counted net
        totals = corpus_totals([mark_revalidations(s)])
        assert totals.n_moves == 11
        assert totals.n_validations_attempted == 4
        assert totals.n_revalidations == 2
        assert totals.n_validations_net == 2
        assert totals.n_actions == totals.n_moves + totals.n_validations_attempted
        assert totals.n_correct + totals.n_incorrect == totals.n_validations_net

    def test_empty_corpus(self):
        totals = corpus_totals([])
        assert totals.n_sessions == 0
        assert totals.n_actions == 0
        assert totals.n_students == 0
