"""Deterministic synthetic-cohort generator with ground-truth counters.

Strategies encode testable player behaviors: guided descent to the nearest
solution, left-to-right fixing, verb-first fixing with extra determiner
churn, and an aimless random walk.  A fixed seed yields byte-identical logs
(the RNG is Python's Mersenne Twister, seeded per session from a master
stream), and the generator counts everything the analytics must reproduce.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, asdict
from datetime import datetime, timedelta, timezone
from typing import Iterable

from .errors import NoSolutionError
from .grammar import Exercise, GoldSet, StateVector, enumerate_solutions
from .ingest import MOVE, VALIDATE, ActionEvent, Session
from .metrics import nearest_gold

LEFT_TO_RIGHT = "left_to_right"
VERB_FIRST = "verb_first"
RANDOM_WALK = "random_walk"
ORACLE_GUIDED = "oracle_guided"
STRATEGIES = (LEFT_TO_RIGHT, VERB_FIRST, RANDOM_WALK, ORACLE_GUIDED)

VALIDATE_WHEN_BELIEVED_CORRECT = "validate_when_believed_correct"
VALIDATE_EVERY_K_MOVES = "validate_every_k_moves"

_BASE_TIME = datetime(2025, 4, 1, 8, 0, 0, tzinfo=timezone.utc)
_EVENT_GAP = timedelta(milliseconds=1500)
_REVALIDATE_PROB = 0.25


@dataclass(frozen=True)
class ValidationsPolicy:
    kind: str = VALIDATE_WHEN_BELIEVED_CORRECT
    k: int | None = None

    def __post_init__(self):
        if self.kind not in (VALIDATE_WHEN_BELIEVED_CORRECT, VALIDATE_EVERY_K_MOVES):
            raise ValueError(f"unknown validations policy {self.kind!r}")
        if self.kind == VALIDATE_EVERY_K_MOVES and (self.k is None or self.k < 1):
            raise ValueError("validate_every_k_moves requires k >= 1")


@dataclass(frozen=True)
class StrategyProfile:
    name: str
    error_rate: float = 0.0
    seed: int = 0
    validations_policy: ValidationsPolicy = ValidationsPolicy()

    def __post_init__(self):
        if self.name not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.name!r}")
        if not 0.0 <= self.error_rate <= 1.0:
            raise ValueError("error_rate must be in [0, 1]")

    @classmethod
    def from_dict(cls, doc: dict) -> "StrategyProfile":
        policy = doc.get("validations_policy", {})
        if isinstance(policy, str):
            policy = {"kind": policy}
        return cls(
            name=doc["name"],
            error_rate=float(doc.get("error_rate", 0.0)),
            seed=int(doc.get("seed", 0)),
            validations_policy=ValidationsPolicy(
                kind=policy.get("kind", VALIDATE_WHEN_BELIEVED_CORRECT),
                k=policy.get("k"),
            ),
        )


@dataclass(frozen=True)
class GroundTruth:
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
    moves_by_label: dict

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2)


def _start_vector(ex: Exercise, gs: GoldSet, rng: random.Random) -> StateVector:
    for _ in range(64):
        v = tuple(rng.randint(1, len(s.forms)) for s in ex.sliders)
        if v not in gs:
            return v
    return tuple(rng.randint(1, len(s.forms)) for s in ex.sliders)


def _wrong_position(
    slider_len: int, avoid: Iterable[int], rng: random.Random
) -> int | None:
    options = [p for p in range(1, slider_len + 1) if p not in set(avoid)]
    return rng.choice(options) if options else None


def _plan_oracle(ex, gs, rng, start, error_rate):
    moves = []
    current = list(start)
    while tuple(current) not in gs:
        if error_rate > 0 and len(moves) < 100 and rng.random() < error_rate:
            candidates = [i for i, s in enumerate(ex.sliders) if len(s.forms) > 1]
            i = rng.choice(candidates)
            pos = _wrong_position(len(ex.sliders[i].forms), [current[i]], rng)
        else:
            chosen = nearest_gold(tuple(current), gs).chosen
            mismatched = [i for i in range(len(current)) if current[i] != chosen[i]]
            i = rng.choice(mismatched)
            pos = chosen[i]
        moves.append((i, pos))
        current[i] = pos
    return moves


def _plan_fixers(ex, gs, rng, start, error_rate, verb_first):
    target = rng.choice(gs.vectors)
    order = list(range(ex.n_sliders))
    det_boost = 0.0
    if verb_first:
        verbs = [s.index for s in ex.sliders if s.label == "ver"]
        if verbs:
            order = verbs + [i for i in order if i not in verbs]
            det_boost = 0.5
    moves = []
    current = list(start)
    for i in order:
        slider = ex.sliders[i]
        is_verb = verb_first and slider.label == "ver"
        err_prob = 0.0 if is_verb else max(error_rate, det_boost if slider.label == "det" else 0.0)
        wiggle = err_prob > 0 and rng.random() < err_prob
        if wiggle:
            wrong = _wrong_position(len(slider.forms), [current[i], target[i]], rng)
            if wrong is None and current[i] == target[i]:
                wrong = _wrong_position(len(slider.forms), [current[i]], rng)
            if wrong is not None:
                moves.append((i, wrong))
                current[i] = wrong
        if current[i] != target[i]:
            moves.append((i, target[i]))
            current[i] = target[i]
    return moves


def _plan_walk(ex, rng, start):
    movable = [i for i, s in enumerate(ex.sliders) if len(s.forms) > 1]
    if not movable:
        return []
    moves = []
    current = list(start)
    for _ in range(8 + rng.randrange(8)):
        i = rng.choice(movable)
        pos = _wrong_position(len(ex.sliders[i].forms), [current[i]], rng)
        moves.append((i, pos))
        current[i] = pos
    return moves


def generate(
    ex: Exercise,
    profile: StrategyProfile,
    n_sessions: int,
    gold_set: GoldSet | None = None,
) -> tuple[list[Session], GroundTruth]:
    """Generate sessions for one exercise under a strategy profile.

    Returns sessions that satisfy every ingest invariant, plus ground-truth
    counters that corpus_totals must reproduce exactly.
    """
    gs = gold_set if gold_set is not None else enumerate_solutions(ex)
    if len(gs) == 0:
        raise NoSolutionError(f"exercise {ex.id} has no solutions; cannot generate")
    master = random.Random(profile.seed)
    student_pool = max(1, min(50, n_sessions))

    sessions: list[Session] = []
    gt_moves = 0
    gt_attempted = 0
    gt_reval = 0
    gt_correct = 0
    gt_incorrect = 0
    moves_by_label: dict[str, int] = {}
    students = set()

    for si in range(n_sessions):
        rng = random.Random(master.getrandbits(64))
        start = _start_vector(ex, gs, rng)
        if profile.name == ORACLE_GUIDED:
            plan = _plan_oracle(ex, gs, rng, start, profile.error_rate)
        elif profile.name == LEFT_TO_RIGHT:
            plan = _plan_fixers(ex, gs, rng, start, profile.error_rate, verb_first=False)
        elif profile.name == VERB_FIRST:
            plan = _plan_fixers(ex, gs, rng, start, profile.error_rate, verb_first=True)
        else:
            plan = _plan_walk(ex, rng, start)

        session_id = f"{profile.name}-{profile.seed}-{si:05d}"
        student_id = f"stu{si % student_pool:03d}"
        students.add(student_id)
        ts = _BASE_TIME + timedelta(minutes=10 * si)
        started_at = ts

        def make_event(kind, vector, **kw):
            nonlocal ts
            ts = ts + _EVENT_GAP
            return ActionEvent(
                session_id=session_id,
                student_id=student_id,
                exercise_id=ex.id,
                ts=ts,
                kind=kind,
                vector=tuple(vector),
                **kw,
            )

        events: list[ActionEvent] = []
        current = list(start)
        policy = profile.validations_policy

        def emit_validate():
            nonlocal gt_attempted, gt_reval, gt_correct, gt_incorrect
            result = "correct" if tuple(current) in gs else "incorrect"
            events.append(make_event(VALIDATE, current, result=result))
            gt_attempted += 1
            if result == "correct":
                gt_correct += 1
            else:
                gt_incorrect += 1
                if rng.random() < _REVALIDATE_PROB:
                    events.append(make_event(VALIDATE, current, result=result))
                    gt_attempted += 1
                    gt_reval += 1

        for mi, (i, pos) in enumerate(plan, start=1):
            current[i] = pos
            events.append(
                make_event(MOVE, current, slider_index=i, new_position=pos)
            )
            gt_moves += 1
            lbl = ex.sliders[i].label
            moves_by_label[lbl] = moves_by_label.get(lbl, 0) + 1
            if policy.kind == VALIDATE_EVERY_K_MOVES and mi % policy.k == 0 and mi < len(plan):
                emit_validate()
        emit_validate()

        sessions.append(
            Session(
                session_id=session_id,
                student_id=student_id,
                exercise_id=ex.id,
                started_at=started_at,
                ended_at=events[-1].ts,
                initial_vector=start,
                events=tuple(events),
            )
        )

    gt = GroundTruth(
        n_sessions=n_sessions,
        n_students=len(students),
        n_exercises=1 if n_sessions else 0,
        n_actions=gt_moves + gt_attempted,
        n_moves=gt_moves,
        n_validations_attempted=gt_attempted,
        n_revalidations=gt_reval,
        n_validations_net=gt_attempted - gt_reval,
        n_correct=gt_correct,
        n_incorrect=gt_incorrect,
        moves_by_label=dict(sorted(moves_by_label.items())),
    )
    return sessions, gt
