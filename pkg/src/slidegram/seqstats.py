"""Session trajectories and corpus-level tables.

A trajectory has one point per *state* (the initial state m0 plus one per
move); validations never add points, they are overlay markers for the
replayer.  Aggregation aligns trajectories by step and exposes the number of
contributing sessions per step as ``support`` instead of truncating thin
tails.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

import numpy as np

from .errors import EmptySelectionError, InconsistentSessionError
from .grammar import FEATURES, LABEL_ORDER, Exercise, GoldSet, StateVector
from .ingest import MOVE, VALIDATE, Session, mark_revalidations
from .metrics import (
    IMPROVED,
    UNCHANGED,
    WORSENED,
    classify_move,
    classify_validation_errors,
    nearest_gold,
)


@dataclass(frozen=True)
class TrajectoryPoint:
    step: int
    distance: int
    chosen_gold: StateVector
    gold_changed_from_prev: bool


@dataclass(frozen=True)
class ValidationMark:
    step: int
    result: str
    revalidation: bool


@dataclass(frozen=True)
class Trajectory:
    session_id: str
    student_id: str
    exercise_id: str
    points: tuple[TrajectoryPoint, ...]
    validations: tuple[ValidationMark, ...]

    @property
    def distances(self) -> tuple[int, ...]:
        return tuple(p.distance for p in self.points)


@dataclass(frozen=True)
class ImpactRow:
    improved_pct: float
    worsened_pct: float
    unchanged_pct: float
    total: int


@dataclass(frozen=True)
class ConvergenceCurve:
    mean_distance: tuple[float, ...]
    std_distance: tuple[float, ...]
    support: tuple[int, ...]
    slope: float
    intercept: float


@dataclass(frozen=True)
class HeatMap:
    rows: tuple[str, ...]
    cols: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.counts)


def trajectory(s: Session, gs: GoldSet) -> Trajectory:
    """Per-state nearest-gold distance series for one session."""
    if not s.consistent:
        raise InconsistentSessionError(s.session_id, s.audit)
    ng = nearest_gold(s.initial_vector, gs)
    points = [
        TrajectoryPoint(
            step=0, distance=ng.distance, chosen_gold=ng.chosen,
            gold_changed_from_prev=False,
        )
    ]
    marks: list[ValidationMark] = []
    prev = ng
    step = 0
    for ev in s.events:
        if ev.kind == MOVE:
            step += 1
            ng = nearest_gold(ev.vector, gs)
            points.append(
                TrajectoryPoint(
                    step=step,
                    distance=ng.distance,
                    chosen_gold=ng.chosen,
                    gold_changed_from_prev=prev.chosen not in ng.golds,
                )
            )
            prev = ng
        elif ev.kind == VALIDATE:
            marks.append(
                ValidationMark(step=step, result=ev.result, revalidation=ev.revalidation)
            )
    return Trajectory(
        session_id=s.session_id,
        student_id=s.student_id,
        exercise_id=s.exercise_id,
        points=tuple(points),
        validations=tuple(marks),
    )


def aggregate_convergence(
    trajectories: Iterable[Trajectory],
    predicate: Callable[[Trajectory], bool] | None = None,
    trend: str = "pooled",
) -> ConvergenceCurve:
    """Per-step mean/std/support plus a linear trend.

    ``trend="pooled"`` fits ordinary least squares over all (step, distance)
    pairs so thin high-step means do not dominate; ``trend="mean_curve"``
    fits the per-step mean series instead.
    """
    sel = [t for t in trajectories if predicate is None or predicate(t)]
    if not sel:
        raise EmptySelectionError("no trajectories after filtering")
    max_len = max(len(t.points) for t in sel)
    means, stds, support = [], [], []
    for step in range(max_len):
        vals = [t.points[step].distance for t in sel if len(t.points) > step]
        support.append(len(vals))
        means.append(float(np.mean(vals)))
        stds.append(float(np.std(vals)))
    if trend == "pooled":
        xs = np.array([p.step for t in sel for p in t.points], dtype=float)
        ys = np.array([p.distance for t in sel for p in t.points], dtype=float)
    elif trend == "mean_curve":
        xs = np.arange(max_len, dtype=float)
        ys = np.array(means)
    else:
        raise ValueError(f"unknown trend mode {trend!r}")
    if len(set(xs.tolist())) < 2 or np.all(ys == ys[0]):
        # constant series: report the exact zero slope OLS would approximate
        slope, intercept = 0.0, float(np.mean(ys))
    else:
        slope, intercept = (float(c) for c in np.polyfit(xs, ys, 1))
    return ConvergenceCurve(
        mean_distance=tuple(means),
        std_distance=tuple(stds),
        support=tuple(support),
        slope=slope,
        intercept=intercept,
    )


def _label_of(ex: Exercise, slider_index: int) -> str:
    return ex.sliders[slider_index].label


def _ordered(table: dict) -> dict:
    known = [lbl for lbl in LABEL_ORDER if lbl in table]
    extra = sorted(set(table) - set(LABEL_ORDER))
    return {lbl: table[lbl] for lbl in known + extra}


def moves_by_label(
    sessions: Iterable[Session], exercises: Mapping[str, Exercise]
) -> dict[str, int]:
    """Move counts grouped by the moved slider's label, fixed label order."""
    counts: dict[str, int] = {}
    for s in sessions:
        ex = exercises[s.exercise_id]
        for ev in s.events:
            if ev.kind == MOVE:
                lbl = _label_of(ex, ev.slider_index)
                counts[lbl] = counts.get(lbl, 0) + 1
    return _ordered(counts)


def split_label_table(table: Mapping) -> tuple[dict, dict]:
    """Split one label-keyed table into (category labels, function labels)."""
    cats = {k: v for k, v in table.items() if k not in ("GS", "Pred")}
    funcs = {k: v for k, v in table.items() if k in ("GS", "Pred")}
    return cats, funcs


def _iter_moves(sessions, exercises, goldsets):
    """Yield (label, MoveImpact) for every move event, replaying each session."""
    for s in sessions:
        ex = exercises[s.exercise_id]
        gs = goldsets[s.exercise_id]
        state = s.initial_vector
        for ev in s.events:
            if ev.kind != MOVE:
                continue
            impact = classify_move(state, ev.vector, gs)
            yield _label_of(ex, ev.slider_index), impact
            state = ev.vector


def impact_table(
    sessions: Iterable[Session],
    exercises: Mapping[str, Exercise],
    goldsets: Mapping[str, GoldSet],
) -> dict[str, ImpactRow]:
    """Per-label improved/worsened/unchanged percentages over all moves.

    Every move event counts (the initial state m0 is a state, not a move, so
    it contributes no row); percentages per label sum to 100 up to rounding.
    """
    counts: dict[str, dict[str, int]] = {}
    for label, impact in _iter_moves(sessions, exercises, goldsets):
        row = counts.setdefault(label, {IMPROVED: 0, WORSENED: 0, UNCHANGED: 0})
        row[impact.kind] += 1
    table = {}
    for label, row in counts.items():
        total = sum(row.values())
        table[label] = ImpactRow(
            improved_pct=100.0 * row[IMPROVED] / total,
            worsened_pct=100.0 * row[WORSENED] / total,
            unchanged_pct=100.0 * row[UNCHANGED] / total,
            total=total,
        )
    return _ordered(table)


def gold_change_table(
    sessions: Iterable[Session],
    exercises: Mapping[str, Exercise],
    goldsets: Mapping[str, GoldSet],
) -> dict[str, tuple[int, int]]:
    """Per-label (gold_changed count, total moves)."""
    counts: dict[str, list[int]] = {}
    for label, impact in _iter_moves(sessions, exercises, goldsets):
        row = counts.setdefault(label, [0, 0])
        row[0] += int(impact.gold_changed)
        row[1] += 1
    return _ordered({k: (v[0], v[1]) for k, v in counts.items()})


def error_heatmap(
    sessions: Iterable[Session],
    exercises: Mapping[str, Exercise],
    goldsets: Mapping[str, GoldSet],
) -> HeatMap:
    """Error counts (slider label x feature) over net incorrect validations.

    Re-validations are excluded; sessions are annotated defensively here
    since mark_revalidations is idempotent.
    """
    labels = []
    present = {s.label for ex in exercises.values() for s in ex.sliders}
    for lbl in LABEL_ORDER:
        if lbl in present:
            labels.append(lbl)
    counts = {lbl: {f: 0 for f in FEATURES} for lbl in labels}
    for s in sessions:
        s = mark_revalidations(s)
        ex = exercises[s.exercise_id]
        gs = goldsets[s.exercise_id]
        for ev in s.events:
            if ev.kind != VALIDATE or ev.revalidation or ev.result != "incorrect":
                continue
            for rec in classify_validation_errors(ex, ev.vector, gs):
                counts[rec.category][rec.feature] += 1
    return HeatMap(
        rows=tuple(labels),
        cols=FEATURES,
        counts=tuple(
            tuple(counts[lbl][f] for f in FEATURES) for lbl in labels
        ),
    )


def verb_chain_predicate(exercises: Mapping[str, Exercise]) -> Callable[[Trajectory], bool]:
    """Filter for exercises whose principal (verb-bearing) chain is set."""
    return lambda t: exercises[t.exercise_id].has_verb_chain


def exercise_predicate(exercise_id: str) -> Callable[[Trajectory], bool]:
    return lambda t: t.exercise_id == exercise_id


def student_exercise_predicate(student_id: str, exercise_id: str) -> Callable[[Trajectory], bool]:
    return lambda t: t.student_id == student_id and t.exercise_id == exercise_id
