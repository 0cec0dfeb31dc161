import itertools
import json
from datetime import datetime, timedelta, timezone

import pytest

from slidegram.grammar import (
    AgreementChain,
    Exercise,
    FeatureBundle,
    Slider,
    WordForm,
    check_grammatical,
    enumerate_solutions,
)
from slidegram.ingest import MOVE, VALIDATE, ActionEvent, Session

T0 = datetime(2025, 4, 3, 9, 0, 0, tzinfo=timezone.utc)


def form(surface, category, gender="unspecified", number="unspecified",
         person="unspecified", lemma=None):
    return WordForm(
        surface=surface,
        lemma=lemma or surface,
        category=category,
        features=FeatureBundle(gender=gender, number=number, person=person),
    )


@pytest.fixture
def ex_a():
    """3-slider determiner/noun/verb exercise with 3 solutions."""
    return Exercise(
        id="EX-A",
        sliders=(
            Slider(0, "det", (
                form("le", "det", gender="masc", number="sing"),
                form("la", "det", gender="fem", number="sing"),
                form("les", "det", number="plur"),
            )),
            Slider(1, "nom", (
                form("chat", "nom", gender="masc", number="sing", person="p3"),
                form("chats", "nom", gender="masc", number="plur", person="p3"),
                form("chatte", "nom", gender="fem", number="sing", person="p3"),
            )),
            Slider(2, "ver", (
                form("dort", "ver", number="sing", person="p3"),
                form("dorment", "ver", number="plur", person="p3"),
            )),
        ),
        chains=(
            AgreementChain(frozenset({0, 1}), frozenset({"gender", "number"})),
            AgreementChain(frozenset({1, 2}), frozenset({"number"})),
        ),
    )


@pytest.fixture
def gs_a(ex_a):
    return enumerate_solutions(ex_a)


@pytest.fixture
def ex_b():
    """Plural subject + 2nd-singular/3rd-plural verb slider (double error)."""
    return Exercise(
        id="EX-B",
        sliders=(
            Slider(0, "det", (form("les", "det", number="plur"),)),
            Slider(1, "nom", (
                form("enfants", "nom", gender="masc", number="plur", person="p3"),
            )),
            Slider(2, "ver", (
                form("manges", "ver", number="sing", person="p2", lemma="manger"),
                form("mangent", "ver", number="plur", person="p3", lemma="manger"),
            )),
        ),
        chains=(
            AgreementChain(frozenset({0, 1}), frozenset({"gender", "number"})),
            AgreementChain(frozenset({1, 2}), frozenset({"number", "person"})),
        ),
    )


@pytest.fixture
def gs_b(ex_b):
    return enumerate_solutions(ex_b)


def brute_solutions(ex):
    """Independent enumeration oracle: filter the full Cartesian product."""
    ranges = [range(1, len(s.forms) + 1) for s in ex.sliders]
    return sorted(
        v for v in itertools.product(*ranges) if check_grammatical(ex, v)
    )


def make_session(exercise_id, initial, actions, session_id="s1", student_id="stu1"):
    """Build a Session from ("move", i, pos) / ("validate", result) actions."""
    events = []
    vec = list(initial)
    ts = T0
    for act in actions:
        ts = ts + timedelta(seconds=2)
        if act[0] == "move":
            _, i, pos = act
            vec[i] = pos
            events.append(ActionEvent(
                session_id=session_id, student_id=student_id,
                exercise_id=exercise_id, ts=ts, kind=MOVE,
                vector=tuple(vec), slider_index=i, new_position=pos,
            ))
        else:
            _, result = act
            events.append(ActionEvent(
                session_id=session_id, student_id=student_id,
                exercise_id=exercise_id, ts=ts, kind=VALIDATE,
                vector=tuple(vec), result=result,
            ))
    return Session(
        session_id=session_id, student_id=student_id, exercise_id=exercise_id,
        started_at=T0, ended_at=events[-1].ts if events else T0,
        initial_vector=tuple(initial), events=tuple(events),
    )


def ex_a_pack_doc():
    """EX-A as a pack-file JSON document."""
    return {
        "pack_id": "test-pack",
        "exercises": [{
            "id": "EX-A",
            "sliders": [
                {"label": "det", "forms": [
                    {"surface": "le", "lemma": "le", "category": "det",
                     "gender": "masc", "number": "sing"},
                    {"surface": "la", "lemma": "le", "category": "det",
                     "gender": "fem", "number": "sing"},
                    {"surface": "les", "lemma": "le", "category": "det",
                     "number": "plur"},
                ]},
                {"label": "nom", "forms": [
                    {"surface": "chat", "lemma": "chat", "category": "nom",
                     "gender": "masc", "number": "sing"},
                    {"surface": "chats", "lemma": "chat", "category": "nom",
                     "gender": "masc", "number": "plur"},
                    {"surface": "chatte", "lemma": "chat", "category": "nom",
                     "gender": "fem", "number": "sing"},
                ]},
                {"label": "ver", "forms": [
                    {"surface": "dort", "lemma": "dormir", "category": "ver",
                     "number": "sing", "person": "p3"},
                    {"surface": "dorment", "lemma": "dormir", "category": "ver",
                     "number": "plur", "person": "p3"},
                ]},
            ],
            "chains": [
                {"members": [0, 1], "enforced": ["gender", "number"]},
                {"members": [1, 2], "enforced": ["number"]},
            ],
        }],
    }


@pytest.fixture
def pack_file(tmp_path):
    path = tmp_path / "pack.json"
    path.write_text(json.dumps(ex_a_pack_doc()), encoding="utf-8")
    return path
