"""HTTP facade: live play, replay payloads, scaffolding hints, analytics.

Correctness feedback deliberately mirrors the game's design: validate answers
only "correct"/"incorrect", never which or how many sliders are wrong, and
exercise payloads carry surfaces only (features stay server-side).

Persistence is append-only log files in the ingest line format (one file per
day) inside ``data_dir``; restarting the service re-ingests its own logs and
reconstructs identical session state, making the service its own data source
for batch analytics.
"""

from __future__ import annotations

import asyncio
import itertools
import json
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.responses import StreamingResponse
from pydantic import BaseModel

from .errors import EmptySelectionError, SlidegramError
from .grammar import Exercise, GoldSet, check_grammatical, enumerate_solutions, load_pack
from .ingest import (
    MOVE,
    START,
    VALIDATE,
    ActionEvent,
    Session,
    mark_revalidations,
    read_log_files,
    serialize_event,
)
from .report import build_summary, canonical_json, curve_to_dict
from .scaffold import ScaffoldConfig, ScaffoldEngine
from .seqstats import aggregate_convergence, exercise_predicate, trajectory


@dataclass
class ServiceConfig:
    pack_path: str
    data_dir: str
    port: int = 8000
    scaffold_config_path: str | None = None
    hints_enabled: bool = True


def load_service_config(path: str | Path) -> ServiceConfig:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    known = {"pack_path", "data_dir", "port", "scaffold_config_path", "hints_enabled"}
    unknown = set(doc) - known
    if unknown:
        raise ValueError(f"unknown service config fields {sorted(unknown)}")
    return ServiceConfig(**doc)


class CreateSessionBody(BaseModel):
    exercise_id: str
    student_id: str


class MoveBody(BaseModel):
    slider_index: int
    new_position: int


@dataclass
class LiveSession:
    session_id: str
    student_id: str
    exercise_id: str
    initial_vector: tuple[int, ...]
    vector: tuple[int, ...]
    started_at: datetime
    events: list[ActionEvent] = field(default_factory=list)
    engine: ScaffoldEngine | None = None
    pending_triggers: list = field(default_factory=list)


def _default_initial_vector(ex: Exercise, gs: GoldSet) -> tuple[int, ...]:
    """First non-gold vector in lexicographic order (all-ones if all gold)."""
    ranges = [range(1, len(s.forms) + 1) for s in ex.sliders]
    for v in itertools.product(*ranges):
        if v not in gs:
            return v
    return tuple(1 for _ in ex.sliders)


def create_app(config: ServiceConfig) -> FastAPI:
    app = FastAPI(title="slidegram service")
    data_dir = Path(config.data_dir)
    data_dir.mkdir(parents=True, exist_ok=True)

    _, exercise_list = load_pack(config.pack_path)
    exercises: dict[str, Exercise] = {ex.id: ex for ex in exercise_list}
    # fail fast on capacity errors: gold sets are computed eagerly at startup
    goldsets: dict[str, GoldSet] = {
        ex.id: enumerate_solutions(ex) for ex in exercise_list
    }
    scaffold_cfg = (
        ScaffoldConfig.from_json(config.scaffold_config_path)
        if config.scaffold_config_path
        else ScaffoldConfig()
    )
    sessions: dict[str, LiveSession] = {}

    def log_paths() -> list[Path]:
        return sorted(data_dir.glob("events-*.jsonl"))

    def append_event(ev: ActionEvent) -> None:
        path = data_dir / f"events-{ev.ts:%Y%m%d}.jsonl"
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(serialize_event(ev) + "\n")

    def make_engine(live: LiveSession) -> ScaffoldEngine:
        engine = ScaffoldEngine(
            exercises[live.exercise_id],
            goldsets[live.exercise_id],
            config=scaffold_cfg,
            session_id=live.session_id,
        )
        engine.begin(live.initial_vector)
        return engine

    def restore_from_logs() -> None:
        paths = log_paths()
        if not paths:
            return
        restored, _ = read_log_files(paths)
        for s in restored:
            if s.exercise_id not in exercises:
                continue
            live = LiveSession(
                session_id=s.session_id,
                student_id=s.student_id,
                exercise_id=s.exercise_id,
                initial_vector=s.initial_vector,
                vector=s.events[-1].vector if s.events else s.initial_vector,
                started_at=s.started_at,
                events=list(s.events),
            )
            live.engine = make_engine(live)
            for ev in s.events:
                triggers = live.engine.on_event(ev)
                if config.hints_enabled:
                    live.pending_triggers.extend(triggers)
            sessions[s.session_id] = live

    restore_from_logs()

    def get_session(session_id: str) -> LiveSession:
        if session_id not in sessions:
            raise HTTPException(status_code=404, detail="unknown session")
        return sessions[session_id]

    @app.get("/exercises")
    def list_exercises():
        return [
            {"id": ex.id, "n_sliders": ex.n_sliders}
            for ex in exercise_list
        ]

    @app.get("/exercises/{exercise_id}")
    def get_exercise(exercise_id: str):
        if exercise_id not in exercises:
            raise HTTPException(status_code=404, detail="unknown exercise")
        ex = exercises[exercise_id]
        # surfaces only: feature bundles stay server-side
        return {
            "id": ex.id,
            "sliders": [
                {"label": s.label, "surfaces": [f.surface for f in s.forms]}
                for s in ex.sliders
            ],
        }

    @app.post("/sessions")
    def create_session(body: CreateSessionBody):
        if body.exercise_id not in exercises:
            raise HTTPException(status_code=404, detail="unknown exercise")
        ex = exercises[body.exercise_id]
        session_id = uuid.uuid4().hex
        initial = _default_initial_vector(ex, goldsets[ex.id])
        now = datetime.now(timezone.utc)
        live = LiveSession(
            session_id=session_id,
            student_id=body.student_id,
            exercise_id=body.exercise_id,
            initial_vector=initial,
            vector=initial,
            started_at=now,
        )
        live.engine = make_engine(live)
        sessions[session_id] = live
        append_event(
            ActionEvent(
                session_id=session_id,
                student_id=body.student_id,
                exercise_id=body.exercise_id,
                ts=now,
                kind=START,
                vector=initial,
            )
        )
        return {"session_id": session_id, "initial_vector": list(initial)}

    def record(live: LiveSession, ev: ActionEvent) -> None:
        live.events.append(ev)
        append_event(ev)
        triggers = live.engine.on_event(ev)
        if config.hints_enabled:
            live.pending_triggers.extend(triggers)

    @app.post("/sessions/{session_id}/move")
    def move(session_id: str, body: MoveBody):
        live = get_session(session_id)
        ex = exercises[live.exercise_id]
        i = body.slider_index
        if not 0 <= i < ex.n_sliders:
            raise HTTPException(status_code=409, detail="illegal move: no such slider")
        if not 1 <= body.new_position <= len(ex.sliders[i].forms):
            raise HTTPException(status_code=409, detail="illegal move: position out of range")
        if live.vector[i] == body.new_position:
            raise HTTPException(status_code=409, detail="illegal move: slider already there")
        vec = list(live.vector)
        vec[i] = body.new_position
        live.vector = tuple(vec)
        record(
            live,
            ActionEvent(
                session_id=live.session_id,
                student_id=live.student_id,
                exercise_id=live.exercise_id,
                ts=datetime.now(timezone.utc),
                kind=MOVE,
                vector=live.vector,
                slider_index=i,
                new_position=body.new_position,
            ),
        )
        return {"vector": list(live.vector)}

    @app.post("/sessions/{session_id}/validate")
    def validate(session_id: str):
        live = get_session(session_id)
        ex = exercises[live.exercise_id]
        result = "correct" if check_grammatical(ex, live.vector) else "incorrect"
        record(
            live,
            ActionEvent(
                session_id=live.session_id,
                student_id=live.student_id,
                exercise_id=live.exercise_id,
                ts=datetime.now(timezone.utc),
                kind=VALIDATE,
                vector=live.vector,
                result=result,
            ),
        )
        # no per-slider disclosure, by design
        return {"result": result}

    @app.get("/sessions/{session_id}/hints")
    async def hints(session_id: str, request: Request):
        live = get_session(session_id)

        async def stream():
            while True:
                while live.pending_triggers:
                    trig = live.pending_triggers.pop(0)
                    yield f"event: trigger\ndata: {trig.to_json()}\n\n"
                if await request.is_disconnected():
                    return
                await asyncio.sleep(0.2)

        return StreamingResponse(stream(), media_type="text/event-stream")

    @app.get("/sessions/{session_id}/replay")
    def replay(session_id: str):
        live = get_session(session_id)
        s = mark_revalidations(
            Session(
                session_id=live.session_id,
                student_id=live.student_id,
                exercise_id=live.exercise_id,
                started_at=live.started_at,
                ended_at=live.events[-1].ts if live.events else live.started_at,
                initial_vector=live.initial_vector,
                events=tuple(live.events),
            )
        )
        traj = trajectory(s, goldsets[s.exercise_id])
        ex = exercises[s.exercise_id]
        return {
            "session_id": s.session_id,
            "student_id": s.student_id,
            "exercise_id": s.exercise_id,
            "initial_vector": list(s.initial_vector),
            "points": [
                {
                    "step": p.step,
                    "distance": p.distance,
                    "gold_changed": p.gold_changed_from_prev,
                    "vector": list(v),
                    "sentence": ex.render(v),
                }
                for p, v in zip(
                    traj.points,
                    [s.initial_vector]
                    + [e.vector for e in s.events if e.kind == MOVE],
                )
            ],
            "validations": [
                {"step": m.step, "result": m.result, "revalidation": m.revalidation}
                for m in traj.validations
            ],
            "events": [json.loads(serialize_event(e)) for e in s.events],
        }

    def corpus_sessions() -> list[Session]:
        paths = log_paths()
        if not paths:
            return []
        parsed, _ = read_log_files(paths)
        return [s for s in parsed if s.exercise_id in exercises]

    @app.get("/analytics/summary")
    def analytics_summary():
        summary = build_summary(corpus_sessions(), exercises, goldsets)
        return Response(
            content=canonical_json(summary) + "\n", media_type="application/json"
        )

    @app.get("/analytics/convergence")
    def analytics_convergence(exercise: str):
        if exercise not in exercises:
            raise HTTPException(status_code=404, detail="unknown exercise")
        trajectories = [
            trajectory(s, goldsets[s.exercise_id])
            for s in corpus_sessions()
            if s.consistent
        ]
        try:
            curve = aggregate_convergence(
                trajectories, predicate=exercise_predicate(exercise)
            )
            doc = curve_to_dict(curve)
        except EmptySelectionError:
            doc = {"mean": [], "std": [], "support": [], "slope": 0.0, "intercept": 0.0}
        return Response(
            content=canonical_json(doc) + "\n", media_type="application/json"
        )

    return app
