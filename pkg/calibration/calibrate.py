"""Record convergence slopes for the reference simulated cohorts.

Generates two 1000-session cohorts on the reference three-slider exercise
with fixed seeds, fits the pooled trend, and freezes the slopes into
``convergence_calibration.json``.  The acceptance suite regenerates the same
cohorts and checks both the discrimination thresholds and that the slopes
still match this artifact.

Run from the repository root:

    python3 calibration/calibrate.py
"""

from __future__ import annotations

import json
from pathlib import Path

from slidegram.grammar import (
    AgreementChain,
    Exercise,
    FeatureBundle,
    Slider,
    WordForm,
    enumerate_solutions,
)
from slidegram.seqstats import aggregate_convergence, trajectory
from slidegram.simgen import StrategyProfile, generate

N_SESSIONS = 1000
SEED = 20250401
COHORTS = {
    "oracle_guided": StrategyProfile(name="oracle_guided", error_rate=0.1, seed=SEED),
    "random_walk": StrategyProfile(name="random_walk", seed=SEED),
}
THRESHOLDS = {
    "oracle_guided_slope_max": -0.2,
    "random_walk_abs_slope_max": 0.05,
}


def _form(surface, category, gender="unspecified", number="unspecified",
          person="unspecified"):
    return WordForm(surface, surface, category,
                    FeatureBundle(gender, number, person))


def reference_exercise() -> Exercise:
    """Determiner/noun/verb sliders with three gold vectors."""
    return Exercise(
        id="EX-A",
        sliders=(
            Slider(0, "det", (
                _form("le", "det", gender="masc", number="sing"),
                _form("la", "det", gender="fem", number="sing"),
                _form("les", "det", number="plur"),
            )),
            Slider(1, "nom", (
                _form("chat", "nom", gender="masc", number="sing", person="p3"),
                _form("chats", "nom", gender="masc", number="plur", person="p3"),
                _form("chatte", "nom", gender="fem", number="sing", person="p3"),
            )),
            Slider(2, "ver", (
                _form("dort", "ver", number="sing", person="p3"),
                _form("dorment", "ver", number="plur", person="p3"),
            )),
        ),
        chains=(
            AgreementChain(frozenset({0, 1}), frozenset({"gender", "number"})),
            AgreementChain(frozenset({1, 2}), frozenset({"number", "person"})),
        ),
    )


def main() -> None:
    ex = reference_exercise()
    gs = enumerate_solutions(ex)
    doc = {
        "exercise_id": ex.id,
        "n_sessions": N_SESSIONS,
        "seed": SEED,
        "thresholds": THRESHOLDS,
        "cohorts": {},
    }
    for name, profile in COHORTS.items():
        sessions, _ = generate(ex, profile, N_SESSIONS)
        curve = aggregate_convergence(trajectory(s, gs) for s in sessions)
        doc["cohorts"][name] = {
            "error_rate": profile.error_rate,
            "slope": round(curve.slope, 6),
            "intercept": round(curve.intercept, 6),
            "max_steps": len(curve.mean_distance),
        }
        print(f"{name}: slope {curve.slope:+.6f}")
    out = Path(__file__).with_name("convergence_calibration.json")
    out.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
