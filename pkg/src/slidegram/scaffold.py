"""Real-time scaffolding rules over a live session's trajectory.

Four advisory scenarios:
  diverge_after_converge  distance strictly decreased for >= k_converge moves,
                          then increased
  far_from_solution       distance stayed at/above a slider-count fraction for
                          far_persistence consecutive moves
  strategy_hint           after a probe window, a verb slider still matches no
                          gold while at least two other sliders were moved
  engagement              rapid-fire validations, or an idle gap

Every scenario fires at most once per session; a correct validation resets
the engine so later struggles can re-trigger.  All thresholds are config
parameters; the defaults here were calibrated on synthetic cohorts.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields
from datetime import datetime
from pathlib import Path
from typing import Sequence

from .errors import SequencingError
from .grammar import Exercise, GoldSet, StateVector
from .ingest import MOVE, VALIDATE, ActionEvent, Session
from .metrics import hamming, nearest_gold

DIVERGE_AFTER_CONVERGE = "diverge_after_converge"
FAR_FROM_SOLUTION = "far_from_solution"
STRATEGY_HINT = "strategy_hint"
ENGAGEMENT = "engagement"
SCENARIOS = (DIVERGE_AFTER_CONVERGE, FAR_FROM_SOLUTION, STRATEGY_HINT, ENGAGEMENT)


@dataclass(frozen=True)
class ScaffoldConfig:
    k_converge: int = 3
    far_threshold_fraction: float = 0.5
    far_persistence: int = 5
    strategy_probe_moves: int = 4
    rapid_validate_ms: int = 2000
    rapid_validate_count: int = 3
    idle_ms: int = 60000

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise ValueError(f"scaffold config field {f.name} must be positive")

    @classmethod
    def from_json(cls, path: str | Path) -> "ScaffoldConfig":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown scaffold config fields {sorted(unknown)}")
        return cls(**doc)


@dataclass(frozen=True)
class ScaffoldTrigger:
    scenario: str
    session_id: str
    step: int
    payload: dict

    def to_json(self) -> str:
        return json.dumps(
            {
                "scenario": self.scenario,
                "session_id": self.session_id,
                "step": self.step,
                "payload": self.payload,
            },
            sort_keys=True,
            separators=(",", ":"),
        )


def closest_previous_vector(
    vectors: Sequence[StateVector], distances: Sequence[int]
) -> tuple[StateVector, int]:
    """Earliest previous state at minimal distance (current state excluded)."""
    best_i = 0
    for i in range(len(vectors) - 1):
        if distances[i] < distances[best_i]:
            best_i = i
    return vectors[best_i], distances[best_i]


def best_fix_slider(vector: StateVector, gs: GoldSet) -> int:
    """Slider whose correction (toward the chosen gold) most reduces distance.

    Ties resolve to the lowest index.
    """
    ng = nearest_gold(vector, gs)
    best = None
    best_d = None
    for i, (pv, gv) in enumerate(zip(vector, ng.chosen)):
        if pv == gv:
            continue
        candidate = list(vector)
        candidate[i] = gv
        d = nearest_gold(tuple(candidate), gs).distance
        if best_d is None or d < best_d:
            best, best_d = i, d
    return best


class ScaffoldEngine:
    """One engine instance per live session; events must arrive in order."""

    def __init__(
        self,
        exercise: Exercise,
        gold_set: GoldSet,
        config: ScaffoldConfig | None = None,
        session_id: str = "",
    ):
        self.exercise = exercise
        self.gold_set = gold_set
        self.config = config or ScaffoldConfig()
        self.session_id = session_id
        self._vectors: list[StateVector] = []
        self._distances: list[int] = []
        self._moved: set[int] = set()
        self._validate_ts: list[datetime] = []
        self._last_ts: datetime | None = None
        self._far_run = 0
        self._fired: set[str] = set()
        self._verb_indices = tuple(
            s.index for s in exercise.sliders if s.label == "ver"
        )
        self._far_threshold = math.ceil(
            self.config.far_threshold_fraction * exercise.n_sliders
        )

    def begin(self, initial_vector: Sequence[int]) -> None:
        v = tuple(initial_vector)
        self._vectors = [v]
        self._distances = [nearest_gold(v, self.gold_set).distance]

    @property
    def step(self) -> int:
        """Number of move steps processed so far."""
        return len(self._vectors) - 1

    def _fire(self, scenario: str, payload: dict) -> list[ScaffoldTrigger]:
        if scenario in self._fired:
            return []
        self._fired.add(scenario)
        return [
            ScaffoldTrigger(
                scenario=scenario,
                session_id=self.session_id,
                step=self.step,
                payload=payload,
            )
        ]

    def _reset(self) -> None:
        self._fired.clear()
        self._far_run = 0
        self._validate_ts.clear()

    def on_event(self, ev: ActionEvent) -> list[ScaffoldTrigger]:
        if not self._vectors:
            raise SequencingError("engine not started: call begin() with m0 first")
        if self._last_ts is not None and ev.ts < self._last_ts:
            raise SequencingError("event delivered out of session order")
        triggers: list[ScaffoldTrigger] = []

        # idle gap applies to any event kind
        if (
            self._last_ts is not None
            and (ev.ts - self._last_ts).total_seconds() * 1000 >= self.config.idle_ms
        ):
            triggers += self._fire(ENGAGEMENT, {"reason": "idle"})
        self._last_ts = ev.ts

        if ev.kind == MOVE:
            if hamming(self._vectors[-1], ev.vector) != 1:
                raise SequencingError("move event does not follow current state")
            self._vectors.append(ev.vector)
            d = nearest_gold(ev.vector, self.gold_set).distance
            self._distances.append(d)
            self._moved.add(ev.slider_index)
            triggers += self._check_diverge()
            triggers += self._check_far(d)
            triggers += self._check_strategy(ev.vector)
        elif ev.kind == VALIDATE:
            self._validate_ts.append(ev.ts)
            triggers += self._check_rapid()
            if ev.result == "correct":
                self._reset()
        return triggers

    def _check_diverge(self) -> list[ScaffoldTrigger]:
        k = self.config.k_converge
        d = self._distances
        if len(d) < k + 2 or d[-1] <= d[-2]:
            return []
        # a strictly decreasing run of length >= k right before the increase
        for j in range(2, 2 + k):
            if d[-j] >= d[-j - 1]:
                return []
        vec, dist = closest_previous_vector(self._vectors, self._distances)
        return self._fire(
            DIVERGE_AFTER_CONVERGE,
            {"come_back_vector": list(vec), "come_back_distance": dist},
        )

    def _check_far(self, d: int) -> list[ScaffoldTrigger]:
        if d >= self._far_threshold:
            self._far_run += 1
        else:
            self._far_run = 0
        if self._far_run < self.config.far_persistence:
            return []
        idx = best_fix_slider(self._vectors[-1], self.gold_set)
        return self._fire(FAR_FROM_SOLUTION, {"fix_slider_index": idx})

    def _check_strategy(self, vector: StateVector) -> list[ScaffoldTrigger]:
        if self.step < self.config.strategy_probe_moves or not self._verb_indices:
            return []
        for vi in self._verb_indices:
            gold_positions = {g[vi] for g in self.gold_set}
            others_moved = len(self._moved - {vi})
            if vector[vi] not in gold_positions and others_moved >= 2:
                return self._fire(STRATEGY_HINT, {"verb_slider_index": vi})
        return []

    def _check_rapid(self) -> list[ScaffoldTrigger]:
        n = self.config.rapid_validate_count
        ts = self._validate_ts
        if len(ts) < n:
            return []
        window = ts[-n:]
        gaps_ok = all(
            (b - a).total_seconds() * 1000 <= self.config.rapid_validate_ms
            for a, b in zip(window, window[1:])
        )
        if not gaps_ok:
            return []
        return self._fire(ENGAGEMENT, {"reason": "rapid_validation"})


def hint_payload(
    trigger: ScaffoldTrigger,
    vectors: Sequence[StateVector],
    distances: Sequence[int],
    gold_set: GoldSet,
) -> dict:
    """Recompute the hint for a scenario 1 or 2 trigger from trajectory data."""
    if trigger.scenario == DIVERGE_AFTER_CONVERGE:
        vec, dist = closest_previous_vector(vectors, distances)
        return {"come_back_vector": list(vec), "come_back_distance": dist}
    if trigger.scenario == FAR_FROM_SOLUTION:
        return {"fix_slider_index": best_fix_slider(vectors[-1], gold_set)}
    raise ValueError(f"no hint payload for scenario {trigger.scenario}")


def run_session(
    exercise: Exercise,
    gold_set: GoldSet,
    session: Session,
    config: ScaffoldConfig | None = None,
) -> list[ScaffoldTrigger]:
    """Replay a recorded session through a fresh engine; returns all triggers."""
    engine = ScaffoldEngine(
        exercise, gold_set, config=config, session_id=session.session_id
    )
    engine.begin(session.initial_vector)
    triggers: list[ScaffoldTrigger] = []
    for ev in session.events:
        triggers.extend(engine.on_event(ev))
    return triggers
