import pytest

from slidegram.errors import NoSolutionError
from slidegram.grammar import AgreementChain, Exercise, Slider
from slidegram.ingest import (
    corpus_totals,
    mark_revalidations,
    parse_log,
    session_lines,
)
from slidegram.seqstats import moves_by_label, trajectory
from slidegram.simgen import (
    StrategyProfile,
    ValidationsPolicy,
    generate,
)

from conftest import form


def totals_of(sessions):
    return corpus_totals([mark_revalidations(s) for s in sessions])


class TestDeterminism:
    def test_same_seed_same_bytes(self, ex_a):
        profile = StrategyProfile(name="random_walk", seed=42)
        a, _ = generate(ex_a, profile, 5)
        b, _ = generate(ex_a, profile, 5)
        lines_a = [l for s in a for l in session_lines(s)]
        lines_b = [l for s in b for l in session_lines(s)]
        assert lines_a == lines_b

    def test_different_seed_differs(self, ex_a):
        a, _ = generate(ex_a, StrategyProfile(name="random_walk", seed=1), 5)
        b, _ = generate(ex_a, StrategyProfile(name="random_walk", seed=2), 5)
        assert [s.events for s in a] != [s.events for s in b]


class TestOracleGuided:
    def test_strictly_decreasing_to_zero(self, ex_a, gs_a):
        sessions, _ = generate(
            ex_a, StrategyProfile(name="oracle_guided", error_rate=0.0, seed=7), 20
        )
        for s in sessions:
            t = trajectory(s, gs_a)
            d = t.distances
            assert d[-1] == 0
            assert all(b == a - 1 for a, b in zip(d, d[1:]))
            last = s.events[-1]
            assert last.kind == "validate" and last.result == "correct"


class TestIngestCompatibility:
    def test_generated_logs_pass_replay_audit(self, ex_a):
        for name in ("left_to_right", "verb_first", "random_walk", "oracle_guided"):
            sessions, _ = generate(
                ex_a,
                StrategyProfile(name=name, error_rate=0.3, seed=11,
                                validations_policy=ValidationsPolicy(
                                    "validate_every_k_moves", 3)),
                10,
            )
            lines = [l for s in sessions for l in session_lines(s)]
            parsed, errors = parse_log(lines)
            assert errors == []
            assert all(s.consistent for s in parsed)

    def test_totals_match_ground_truth(self, ex_a):
        sessions, gt = generate(
            ex_a,
            StrategyProfile(name="random_walk", error_rate=0.5, seed=3,
                            validations_policy=ValidationsPolicy(
                                "validate_every_k_moves", 2)),
            40,
        )
        totals = totals_of(sessions)
        assert totals.n_sessions == gt.n_sessions
        assert totals.n_students == gt.n_students
        assert totals.n_actions == gt.n_actions
        assert totals.n_moves == gt.n_moves
        assert totals.n_validations_attempted == gt.n_validations_attempted
        assert totals.n_revalidations == gt.n_revalidations
        assert totals.n_validations_net == gt.n_validations_net
        assert totals.n_correct == gt.n_correct
        assert totals.n_incorrect == gt.n_incorrect

    def test_totals_match_after_round_trip(self, ex_a):
        sessions, gt = generate(
            ex_a, StrategyProfile(name="left_to_right", error_rate=0.4, seed=9), 25
        )
        lines = [l for s in sessions for l in session_lines(s)]
        parsed, errors = parse_log(lines)
        assert errors == []
        totals = totals_of(parsed)
        assert totals.n_actions == gt.n_actions
        assert totals.n_revalidations == gt.n_revalidations

    def test_moves_by_label_matches_ground_truth(self, ex_a):
        sessions, gt = generate(
            ex_a, StrategyProfile(name="verb_first", error_rate=0.2, seed=5), 30
        )
        table = moves_by_label(sessions, {"EX-A": ex_a})
        assert dict(table) == gt.moves_by_label


class TestStrategies:
    def test_verb_first_moves_verb_less_than_det(self, ex_a):
        sessions, gt = generate(
            ex_a, StrategyProfile(name="verb_first", error_rate=0.2, seed=13), 200
        )
        assert gt.moves_by_label.get("ver", 0) < gt.moves_by_label["det"]

    def test_unsolvable_exercise_refused(self):
        ex = Exercise(
            id="stuck",
            sliders=(
                Slider(0, "det", (form("le", "det", gender="masc", number="sing"),)),
                Slider(1, "nom", (form("chatte", "nom", gender="fem", number="sing"),)),
            ),
            chains=(AgreementChain(frozenset({0, 1}), frozenset({"gender"})),),
        )
        with pytest.raises(NoSolutionError):
            generate(ex, StrategyProfile(name="random_walk", seed=1), 1)

    def test_fixer_strategies_end_correct(self, ex_a, gs_a):
        for name in ("left_to_right", "verb_first"):
            sessions, _ = generate(
                ex_a, StrategyProfile(name=name, error_rate=0.5, seed=17), 20
            )
            for s in sessions:
                assert s.events[-1].kind == "validate"
                assert s.events[-1].result == "correct"
                assert tuple(s.events[-1].vector) in gs_a


class TestProfileParsing:
    def test_from_dict(self):
        profile = StrategyProfile.from_dict({
            "name": "oracle_guided", "error_rate": 0.1, "seed": 99,
            "validations_policy": {"kind": "validate_every_k_moves", "k": 4},
        })
        assert profile.validations_policy.k == 4

    def test_bad_strategy_rejected(self):
        with pytest.raises(ValueError):
            StrategyProfile(name="psychic")

    def test_bad_error_rate_rejected(self):
        with pytest.raises(ValueError):
            StrategyProfile(name="random_walk", error_rate=1.5)
