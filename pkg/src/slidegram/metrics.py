"""Distance metrics over state vectors: nearest gold, move impact, error records.

Distance is positional (number of sliders whose positions differ), so two
surface-identical forms at different slider positions still count as a
difference.  All nearest-gold tie-breaks pick the lexicographically smallest
vector so analytics are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidVectorError, NoSolutionError, NotAMoveError
from .grammar import (
    FEATURES,
    UNSPECIFIED,
    Exercise,
    GoldSet,
    StateVector,
    check_grammatical,
    validate_vector,
)

IMPROVED = "improved"
WORSENED = "worsened"
UNCHANGED = "unchanged"
MOVE_KINDS = (IMPROVED, WORSENED, UNCHANGED)


@dataclass(frozen=True)
class NearestGold:
    distance: int
    golds: frozenset[StateVector]
    chosen: StateVector


@dataclass(frozen=True)
class MoveImpact:
    kind: str
    gold_changed: bool
    d_before: int
    d_after: int


@dataclass(frozen=True)
class ErrorRecord:
    slider_index: int
    category: str
    feature: str
    chosen_surface: str
    gold_surface: str


def hamming(a: Sequence[int], b: Sequence[int]) -> int:
    """Number of positions where the two vectors differ."""
    if len(a) != len(b):
        raise InvalidVectorError(
            f"cannot compare vectors of lengths {len(a)} and {len(b)}"
        )
    return sum(1 for x, y in zip(a, b) if x != y)


def nearest_gold(v: Sequence[int], gs: GoldSet) -> NearestGold:
    """Minimal distance over the gold set, with the full tie set.

    ``chosen`` is the lexicographically smallest tied gold; since the gold
    set is stored sorted, the first gold at minimal distance is the one.
    """
    if len(gs) == 0:
        raise NoSolutionError(f"exercise {gs.exercise_id} has no solutions")
    vec = tuple(v)
    best = None
    ties: list[StateVector] = []
    for g in gs.vectors:
        d = hamming(vec, g)
        if best is None or d < best:
            best = d
            ties = [g]
        elif d == best:
            ties.append(g)
    return NearestGold(distance=best, golds=frozenset(ties), chosen=ties[0])


def classify_move(
    prev: Sequence[int], nxt: Sequence[int], gs: GoldSet
) -> MoveImpact:
    """Impact of one single-slider move on nearest-gold distance.

    ``gold_changed`` is set-wise: the previously chosen gold is no longer in
    the new minimal-distance set.
    """
    if hamming(prev, nxt) != 1:
        raise NotAMoveError(
            "vectors must differ in exactly one position to form a move"
        )
    before = nearest_gold(prev, gs)
    after = nearest_gold(nxt, gs)
    if after.distance < before.distance:
        kind = IMPROVED
    elif after.distance > before.distance:
        kind = WORSENED
    else:
        kind = UNCHANGED
    return MoveImpact(
        kind=kind,
        gold_changed=before.chosen not in after.golds,
        d_before=before.distance,
        d_after=after.distance,
    )


def enforced_features(ex: Exercise, slider_index: int) -> tuple[str, ...]:
    """Features enforced on a slider by any chain containing it, in fixed order."""
    feats = set()
    for chain in ex.chains:
        if slider_index in chain.members:
            feats |= chain.enforced
    return tuple(f for f in FEATURES if f in feats)


def classify_validation_errors(
    ex: Exercise, v: Sequence[int], gs: GoldSet
) -> list[ErrorRecord]:
    """Per-feature error records for an incorrect validation.

    Attribution is against the nearest gold only: for every slider differing
    from it, one record per enforced feature on which the two forms disagree
    (both specified).  A single slider can carry up to three records, e.g. the
    person+number double error of a 2nd-singular verb form against a plural
    3rd-person subject.
    """
    vec = validate_vector(ex, v)
    if check_grammatical(ex, vec):
        return []
    gold = nearest_gold(vec, gs).chosen
    records: list[ErrorRecord] = []
    for i, (pv, gv) in enumerate(zip(vec, gold)):
        if pv == gv:
            continue
        chosen_form = ex.sliders[i].forms[pv - 1]
        gold_form = ex.sliders[i].forms[gv - 1]
        for feat in enforced_features(ex, i):
            cf = chosen_form.features.get(feat)
            gf = gold_form.features.get(feat)
            if cf != UNSPECIFIED and gf != UNSPECIFIED and cf != gf:
                records.append(
                    ErrorRecord(
                        slider_index=i,
                        category=ex.sliders[i].label,
                        feature=feat,
                        chosen_surface=chosen_form.surface,
                        gold_surface=gold_form.surface,
                    )
                )
    return records
