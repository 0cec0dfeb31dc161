"""Exercise model: sliders of word forms, agreement chains, grammaticality, enumeration.

An exercise is a row of sliders; each slider carries an ordered list of word
forms and the player's job is to pick one form per slider (a state vector,
1-based positions) so that every agreement chain is satisfied.  Agreement is
equality of specified feature values within a chain; ``unspecified`` acts as a
wildcard (invariable forms such as plural determiners serving both genders).
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from math import prod
from pathlib import Path
from typing import Iterable, Sequence

from .errors import CapacityError, InvalidVectorError, PackError

GENDER_VALUES = ("masc", "fem", "unspecified")
NUMBER_VALUES = ("sing", "plur", "unspecified")
PERSON_VALUES = ("p1", "p2", "p3", "unspecified")
FEATURES = ("gender", "number", "person")
CATEGORY_LABELS = ("det", "nom", "adj", "ver", "other")
FUNCTION_LABELS = ("GS", "Pred")
SLIDER_LABELS = CATEGORY_LABELS + FUNCTION_LABELS
#: Fixed label order used by every report table (diff-stable output).
LABEL_ORDER = ("det", "nom", "adj", "ver", "other", "GS", "Pred")
UNSPECIFIED = "unspecified"

DEFAULT_ENUMERATION_CAP = 10_000_000

StateVector = tuple[int, ...]


@dataclass(frozen=True)
class FeatureBundle:
    gender: str = UNSPECIFIED
    number: str = UNSPECIFIED
    person: str = UNSPECIFIED

    def __post_init__(self):
        if self.gender not in GENDER_VALUES:
            raise PackError(f"bad gender value {self.gender!r}")
        if self.number not in NUMBER_VALUES:
            raise PackError(f"bad number value {self.number!r}")
        if self.person not in PERSON_VALUES:
            raise PackError(f"bad person value {self.person!r}")

    def get(self, feature: str) -> str:
        if feature not in FEATURES:
            raise KeyError(feature)
        return getattr(self, feature)


@dataclass(frozen=True)
class WordForm:
    surface: str
    lemma: str
    category: str
    features: FeatureBundle

    def __post_init__(self):
        if not self.surface:
            raise PackError("word form surface must be non-empty")
        if self.category not in CATEGORY_LABELS:
            raise PackError(f"bad word category {self.category!r}")
        # Finite verb forms carry both person and number.
        if (
            self.category == "ver"
            and self.features.person != UNSPECIFIED
            and self.features.number == UNSPECIFIED
        ):
            raise PackError(
                f"verb form {self.surface!r} specifies person but not number"
            )


@dataclass(frozen=True)
class Slider:
    index: int
    label: str
    forms: tuple[WordForm, ...]

    def __post_init__(self):
        if self.label not in SLIDER_LABELS:
            raise PackError(f"bad slider label {self.label!r}")
        if not self.forms:
            raise PackError(f"slider {self.index} has no forms")

    def __len__(self) -> int:
        return len(self.forms)


@dataclass(frozen=True)
class AgreementChain:
    members: frozenset[int]
    enforced: frozenset[str]

    def __post_init__(self):
        if len(self.members) < 2:
            raise PackError("agreement chain needs at least 2 members")
        if not self.enforced:
            raise PackError("agreement chain enforces no feature")
        bad = self.enforced - set(FEATURES)
        if bad:
            raise PackError(f"unknown enforced features {sorted(bad)}")


@dataclass(frozen=True)
class Exercise:
    id: str
    sliders: tuple[Slider, ...]
    chains: tuple[AgreementChain, ...]
    principal_chain: AgreementChain | None = field(default=None)

    def __post_init__(self):
        if not self.id:
            raise PackError("exercise id must be non-empty")
        for i, s in enumerate(self.sliders):
            if s.index != i:
                raise PackError(
                    f"exercise {self.id}: slider indices must be contiguous 0..n-1"
                )
        n = len(self.sliders)
        for c in self.chains:
            if not c.members <= set(range(n)):
                raise PackError(f"exercise {self.id}: chain member out of range")
        verb_indices = {s.index for s in self.sliders if s.label == "ver"}
        if self.principal_chain is None and verb_indices:
            for c in self.chains:
                if c.members & verb_indices:
                    object.__setattr__(self, "principal_chain", c)
                    break
            else:
                raise PackError(
                    f"exercise {self.id}: has a verb slider but no chain contains it"
                )

    @property
    def n_sliders(self) -> int:
        return len(self.sliders)

    @property
    def raw_space(self) -> int:
        """Number of raw slider combinations (Cartesian product size)."""
        return prod(len(s.forms) for s in self.sliders)

    @property
    def has_verb_chain(self) -> bool:
        return self.principal_chain is not None

    def selected_forms(self, v: StateVector) -> tuple[WordForm, ...]:
        return tuple(s.forms[p - 1] for s, p in zip(self.sliders, v))

    def render(self, v: StateVector) -> str:
        """Surface rendering of a state vector as a sentence."""
        return " ".join(f.surface for f in self.selected_forms(v))


@dataclass(frozen=True)
class GoldSet:
    """All grammatical state vectors of one exercise, lexicographically sorted."""

    exercise_id: str
    vectors: tuple[StateVector, ...]

    def __post_init__(self):
        object.__setattr__(self, "vectors", tuple(sorted(self.vectors)))
        object.__setattr__(self, "_members", frozenset(self.vectors))

    def __contains__(self, v) -> bool:
        return tuple(v) in self._members

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)


def validate_vector(ex: Exercise, v: Sequence[int]) -> StateVector:
    """Check dimension and 1-based position ranges; return the tuple form."""
    vec = tuple(int(p) for p in v)
    if len(vec) != ex.n_sliders:
        raise InvalidVectorError(
            f"exercise {ex.id}: vector has {len(vec)} positions, "
            f"expected {ex.n_sliders}"
        )
    for i, p in enumerate(vec):
        if not 1 <= p <= len(ex.sliders[i].forms):
            raise InvalidVectorError(
                f"exercise {ex.id}: position {p} out of range on slider {i}"
            )
    return vec


def check_grammatical(ex: Exercise, v: Sequence[int]) -> bool:
    """True iff every chain's enforced features agree across its members.

    A form with ``unspecified`` on a feature is exempt from that feature's
    agreement; agreement means all specified values are equal.
    """
    vec = validate_vector(ex, v)
    forms = ex.selected_forms(vec)
    for chain in ex.chains:
        for feat in chain.enforced:
            value = None
            for m in chain.members:
                fv = forms[m].features.get(feat)
                if fv == UNSPECIFIED:
                    continue
                if value is None:
                    value = fv
                elif fv != value:
                    return False
    return True


def enumerate_solutions(
    ex: Exercise, cap: int = DEFAULT_ENUMERATION_CAP
) -> GoldSet:
    """Enumerate every grammatical vector, in lexicographic order.

    Depth-first assignment in slider order; a partial assignment is abandoned
    as soon as two specified values clash on any (chain, feature).
    """
    if ex.raw_space > cap:
        raise CapacityError(
            f"exercise {ex.id}: raw combination space {ex.raw_space} "
            f"exceeds cap {cap}"
        )
    n = ex.n_sliders
    # participation[i] = [(chain_index, feature), ...] the slider takes part in
    participation: list[list[tuple[int, str]]] = [[] for _ in range(n)]
    for ci, chain in enumerate(ex.chains):
        for m in sorted(chain.members):
            for feat in FEATURES:
                if feat in chain.enforced:
                    participation[m].append((ci, feat))

    solutions: list[StateVector] = []
    positions = [0] * n
    established: dict[tuple[int, str], str] = {}

    def assign(i: int) -> None:
        if i == n:
            solutions.append(tuple(p + 1 for p in positions))
            return
        for p, form in enumerate(ex.sliders[i].forms):
            pinned: list[tuple[int, str]] = []
            ok = True
            for key in participation[i]:
                fv = form.features.get(key[1])
                if fv == UNSPECIFIED:
                    continue
                cur = established.get(key)
                if cur is None:
                    established[key] = fv
                    pinned.append(key)
                elif cur != fv:
                    ok = False
                    break
            if ok:
                positions[i] = p
                assign(i + 1)
            for key in pinned:
                del established[key]

    assign(0)
    return GoldSet(exercise_id=ex.id, vectors=tuple(solutions))


@dataclass(frozen=True)
class PackEntry:
    exercise_id: str
    n_sliders: int
    n_solutions: int
    warnings: tuple[str, ...]


@dataclass(frozen=True)
class PackReport:
    pack_id: str
    entries: tuple[PackEntry, ...]

    @property
    def slider_histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(e.n_sliders for e in self.entries).items()))

    @property
    def solution_histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(e.n_solutions for e in self.entries).items()))

    @property
    def has_warnings(self) -> bool:
        return any(e.warnings for e in self.entries)


def validate_exercise_pack(
    pack: Iterable[Exercise],
    pack_id: str = "pack",
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> PackReport:
    """Per-exercise slider/solution counts plus playability warnings.

    Warns on 0 solutions (unplayable) and on exactly 1 solution (low solution
    counts are a known difficulty driver for players).
    """
    exercises = list(pack)
    ids = [ex.id for ex in exercises]
    dupes = sorted({i for i in ids if ids.count(i) > 1})
    if dupes:
        raise PackError(f"duplicate exercise ids: {dupes}")
    entries = []
    for ex in exercises:
        gs = enumerate_solutions(ex, cap=cap)
        warnings = []
        if len(gs) == 0:
            warnings.append("0 solutions: exercise is unplayable")
        elif len(gs) == 1:
            warnings.append("1 solution: expect slow, erratic convergence")
        entries.append(
            PackEntry(
                exercise_id=ex.id,
                n_sliders=ex.n_sliders,
                n_solutions=len(gs),
                warnings=tuple(warnings),
            )
        )
    return PackReport(pack_id=pack_id, entries=tuple(entries))


# ---------------------------------------------------------------------------
# Pack file parsing (strict: unknown fields rejected at every level)

_FORM_KEYS = {"surface", "lemma", "category", "gender", "number", "person"}
_FORM_REQUIRED = {"surface", "lemma", "category"}


def _check_keys(obj: dict, allowed: set, required: set, where: str) -> None:
    if not isinstance(obj, dict):
        raise PackError(f"{where}: expected an object")
    unknown = set(obj) - allowed
    if unknown:
        raise PackError(f"{where}: unknown fields {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise PackError(f"{where}: missing fields {sorted(missing)}")


def _parse_form(doc: dict, where: str) -> WordForm:
    _check_keys(doc, _FORM_KEYS, _FORM_REQUIRED, where)
    category = doc["category"]
    person = doc.get("person")
    if person is None:
        # Nouns default to 3rd person so subject-verb chains can enforce person.
        person = "p3" if category == "nom" else UNSPECIFIED
    return WordForm(
        surface=doc["surface"],
        lemma=doc["lemma"],
        category=category,
        features=FeatureBundle(
            gender=doc.get("gender", UNSPECIFIED),
            number=doc.get("number", UNSPECIFIED),
            person=person,
        ),
    )


def parse_exercise(doc: dict) -> Exercise:
    _check_keys(doc, {"id", "sliders", "chains"}, {"id", "sliders", "chains"}, "exercise")
    ex_id = doc["id"]
    sliders = []
    for i, sdoc in enumerate(doc["sliders"]):
        where = f"exercise {ex_id} slider {i}"
        _check_keys(sdoc, {"label", "forms"}, {"label", "forms"}, where)
        forms = tuple(
            _parse_form(fdoc, f"{where} form {j}")
            for j, fdoc in enumerate(sdoc["forms"])
        )
        sliders.append(Slider(index=i, label=sdoc["label"], forms=forms))
    chains = []
    for j, cdoc in enumerate(doc["chains"]):
        where = f"exercise {ex_id} chain {j}"
        _check_keys(cdoc, {"members", "enforced"}, {"members", "enforced"}, where)
        chains.append(
            AgreementChain(
                members=frozenset(int(m) for m in cdoc["members"]),
                enforced=frozenset(cdoc["enforced"]),
            )
        )
    return Exercise(id=ex_id, sliders=tuple(sliders), chains=tuple(chains))


def parse_pack(doc: dict) -> tuple[str, list[Exercise]]:
    _check_keys(doc, {"pack_id", "exercises"}, {"pack_id", "exercises"}, "pack")
    exercises = [parse_exercise(e) for e in doc["exercises"]]
    ids = [ex.id for ex in exercises]
    dupes = sorted({i for i in ids if ids.count(i) > 1})
    if dupes:
        raise PackError(f"duplicate exercise ids: {dupes}")
    return doc["pack_id"], exercises


def load_pack(path: str | Path) -> tuple[str, list[Exercise]]:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return parse_pack(doc)
