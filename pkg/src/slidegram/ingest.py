"""Event-log ingestion: line-delimited JSON to audited, immutable sessions.

Log schema (one JSON object per line, UTF-8):
  move:     session_id, student_id, exercise_id, ts, kind="move",
            slider_index, new_position, vector
  validate: session_id, student_id, exercise_id, ts, kind="validate",
            vector, result ("correct"|"incorrect")
  start:    session_id, student_id, exercise_id, ts, kind="start", vector
            (optional; carries the initial state m0)

Every event stores the full post-action vector so logs are self-checking:
replaying moves from m0 must reproduce each stored vector, and mismatches
flag the session inconsistent rather than being silently corrected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Iterable

MOVE = "move"
VALIDATE = "validate"
START = "start"

_COMMON_KEYS = {"session_id", "student_id", "exercise_id", "ts", "kind", "vector"}
_KEYS_BY_KIND = {
    MOVE: _COMMON_KEYS | {"slider_index", "new_position"},
    VALIDATE: _COMMON_KEYS | {"result"},
    START: _COMMON_KEYS,
}


@dataclass(frozen=True)
class ActionEvent:
    session_id: str
    student_id: str
    exercise_id: str
    ts: datetime
    kind: str
    vector: tuple[int, ...]
    slider_index: int | None = None
    new_position: int | None = None
    result: str | None = None
    revalidation: bool = False


@dataclass(frozen=True)
class LineError:
    line_no: int
    reason: str


@dataclass(frozen=True)
class Session:
    session_id: str
    student_id: str
    exercise_id: str
    started_at: datetime
    ended_at: datetime
    initial_vector: tuple[int, ...]
    events: tuple[ActionEvent, ...]
    audit: tuple[str, ...] = ()

    @property
    def consistent(self) -> bool:
        return not self.audit

    @property
    def n_moves(self) -> int:
        return sum(1 for e in self.events if e.kind == MOVE)


@dataclass(frozen=True)
class CorpusTotals:
    n_sessions: int
    n_students: int
    n_exercises: int
    n_actions: int
    n_moves: int
    n_validations_attempted: int
    n_revalidations: int
    n_validations_net: int
    n_correct: int
    n_incorrect: int


def format_ts(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%f")[:-3] + "Z"


def parse_ts(raw: str) -> datetime:
    ts = datetime.fromisoformat(raw.replace("Z", "+00:00"))
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts


def _parse_line(line_no: int, line: str):
    """One raw line to an (ActionEvent-or-start, kind) pair; raises ValueError."""
    try:
        doc = json.loads(line)
    except json.JSONDecodeError as e:
        raise ValueError(f"invalid JSON: {e.msg}")
    if not isinstance(doc, dict):
        raise ValueError("line is not a JSON object")
    kind = doc.get("kind")
    if kind not in _KEYS_BY_KIND:
        raise ValueError(f"unknown kind {kind!r}")
    allowed = _KEYS_BY_KIND[kind]
    unknown = set(doc) - allowed
    if unknown:
        raise ValueError(f"unknown fields for {kind}: {sorted(unknown)}")
    missing = allowed - set(doc)
    if missing:
        raise ValueError(f"missing fields for {kind}: {sorted(missing)}")
    vector = doc["vector"]
    if not isinstance(vector, list) or not all(isinstance(p, int) for p in vector):
        raise ValueError("vector must be an array of ints")
    if any(p < 1 for p in vector):
        raise ValueError("position out of range: positions are 1-based")
    ev = ActionEvent(
        session_id=str(doc["session_id"]),
        student_id=str(doc["student_id"]),
        exercise_id=str(doc["exercise_id"]),
        ts=parse_ts(doc["ts"]),
        kind=kind,
        vector=tuple(vector),
        slider_index=doc.get("slider_index"),
        new_position=doc.get("new_position"),
        result=doc.get("result"),
    )
    if kind == MOVE:
        if not isinstance(ev.slider_index, int) or ev.slider_index < 0:
            raise ValueError("slider_index must be a non-negative int")
        if not isinstance(ev.new_position, int) or ev.new_position < 1:
            raise ValueError("position out of range: new_position is 1-based")
        if ev.slider_index >= len(vector):
            raise ValueError("slider_index beyond vector length")
        if vector[ev.slider_index] != ev.new_position:
            raise ValueError("vector does not reflect its own move")
    if kind == VALIDATE and ev.result not in ("correct", "incorrect"):
        raise ValueError("result must be 'correct' or 'incorrect'")
    return ev


def _derive_initial(first: ActionEvent) -> tuple[int, ...]:
    """m0 when no start record exists: undo the first event's own move.

    The pre-move position is not recorded, so the moved coordinate defaults
    to the lowest position distinct from the landing one.
    """
    if first.kind != MOVE:
        return first.vector
    v = list(first.vector)
    i = first.slider_index
    v[i] = 1 if first.new_position != 1 else 2
    return tuple(v)


def _audit_replay(initial: tuple[int, ...], events: tuple[ActionEvent, ...]) -> list[str]:
    issues = []
    state = initial
    for k, ev in enumerate(events):
        if ev.kind == MOVE:
            diffs = [i for i, (a, b) in enumerate(zip(state, ev.vector)) if a != b]
            if len(ev.vector) != len(state):
                issues.append(f"event {k}: vector length changed")
            elif diffs != [ev.slider_index]:
                issues.append(
                    f"event {k}: move does not change exactly slider "
                    f"{ev.slider_index} (changed {diffs})"
                )
            state = ev.vector
        else:
            if ev.vector != state:
                issues.append(f"event {k}: validate vector differs from replayed state")
    return issues


def parse_log(
    lines: Iterable[str],
) -> tuple[list[Session], list[LineError]]:
    """Group well-formed lines into time-ordered, replay-audited sessions.

    Malformed lines are reported with their line number and never abort the
    batch.  Timestamp ties are broken by file order and normalized to +1 ms
    offsets (classroom tablets have clock jitter; we repair, not reject).
    """
    errors: list[LineError] = []
    by_session: dict[str, list[ActionEvent]] = {}
    starts: dict[str, ActionEvent] = {}
    for line_no, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            ev = _parse_line(line_no, line)
        except ValueError as e:
            errors.append(LineError(line_no=line_no, reason=str(e)))
            continue
        bucket = by_session.setdefault(ev.session_id, [])
        if ev.kind == START:
            if ev.session_id in starts:
                errors.append(
                    LineError(line_no=line_no, reason="duplicate start record")
                )
            else:
                starts[ev.session_id] = ev
        else:
            if bucket and (
                ev.student_id != bucket[0].student_id
                or ev.exercise_id != bucket[0].exercise_id
            ):
                errors.append(
                    LineError(
                        line_no=line_no,
                        reason="student/exercise id mismatch within session",
                    )
                )
                continue
            bucket.append(ev)

    sessions: list[Session] = []
    for sid, events in by_session.items():
        start = starts.get(sid)
        if not events:
            if start is not None:
                sessions.append(
                    Session(
                        session_id=sid,
                        student_id=start.student_id,
                        exercise_id=start.exercise_id,
                        started_at=start.ts,
                        ended_at=start.ts,
                        initial_vector=start.vector,
                        events=(),
                    )
                )
            continue
        # stable sort keeps file order on equal timestamps
        ordered = sorted(events, key=lambda e: e.ts)
        normalized: list[ActionEvent] = []
        for ev in ordered:
            if normalized and ev.ts <= normalized[-1].ts:
                ev = replace(ev, ts=normalized[-1].ts + timedelta(milliseconds=1))
            normalized.append(ev)
        initial = start.vector if start is not None else _derive_initial(normalized[0])
        audit = _audit_replay(initial, tuple(normalized))
        sessions.append(
            Session(
                session_id=sid,
                student_id=normalized[0].student_id,
                exercise_id=normalized[0].exercise_id,
                started_at=(start.ts if start is not None else normalized[0].ts),
                ended_at=normalized[-1].ts,
                initial_vector=initial,
                events=tuple(normalized),
                audit=tuple(audit),
            )
        )
    sessions.sort(key=lambda s: (s.started_at, s.session_id))
    return sessions, errors


def mark_revalidations(s: Session) -> Session:
    """Flag validate events repeating an already-validated vector.

    A validate is a re-validation iff an earlier validate in the session has
    an identical vector with no move event between them.  Flagged events stay
    in the stream (replays keep them) but are excluded from validation counts
    and error analytics.  Idempotent.
    """
    seen_since_move: set[tuple[int, ...]] = set()
    out = []
    for ev in s.events:
        if ev.kind == MOVE:
            seen_since_move.clear()
            out.append(replace(ev, revalidation=False))
        elif ev.kind == VALIDATE:
            flag = ev.vector in seen_since_move
            seen_since_move.add(ev.vector)
            out.append(replace(ev, revalidation=flag))
        else:
            out.append(ev)
    return replace(s, events=tuple(out))


def corpus_totals(sessions: Iterable[Session]) -> CorpusTotals:
    sessions = list(sessions)
    n_moves = 0
    n_attempted = 0
    n_reval = 0
    n_correct = 0
    n_incorrect = 0
    for s in sessions:
        for ev in s.events:
            if ev.kind == MOVE:
                n_moves += 1
            elif ev.kind == VALIDATE:
                n_attempted += 1
                if ev.revalidation:
                    n_reval += 1
                elif ev.result == "correct":
                    n_correct += 1
                else:
                    n_incorrect += 1
    return CorpusTotals(
        n_sessions=len(sessions),
        n_students=len({s.student_id for s in sessions}),
        n_exercises=len({s.exercise_id for s in sessions}),
        n_actions=n_moves + n_attempted,
        n_moves=n_moves,
        n_validations_attempted=n_attempted,
        n_revalidations=n_reval,
        n_validations_net=n_attempted - n_reval,
        n_correct=n_correct,
        n_incorrect=n_incorrect,
    )


def serialize_event(ev: ActionEvent) -> str:
    doc = {
        "session_id": ev.session_id,
        "student_id": ev.student_id,
        "exercise_id": ev.exercise_id,
        "ts": format_ts(ev.ts),
        "kind": ev.kind,
        "vector": list(ev.vector),
    }
    if ev.kind == MOVE:
        doc["slider_index"] = ev.slider_index
        doc["new_position"] = ev.new_position
    elif ev.kind == VALIDATE:
        doc["result"] = ev.result
    return json.dumps(doc, separators=(",", ":"), sort_keys=True)


def session_lines(s: Session) -> list[str]:
    """Session back to log lines, starting with its start record."""
    start = ActionEvent(
        session_id=s.session_id,
        student_id=s.student_id,
        exercise_id=s.exercise_id,
        ts=s.started_at,
        kind=START,
        vector=s.initial_vector,
    )
    return [serialize_event(start)] + [serialize_event(e) for e in s.events]


def write_log(sessions: Iterable[Session], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for s in sessions:
            for line in session_lines(s):
                fh.write(line + "\n")


def read_log_files(paths: Iterable[str | Path]) -> tuple[list[Session], list[LineError]]:
    """Parse several log files as one corpus (sessions may not span files)."""
    lines: list[str] = []
    for p in paths:
        lines.extend(Path(p).read_text(encoding="utf-8").splitlines())
    return parse_log(lines)
