"""Batch command line: pack checks, log analysis, replay, cohort generation."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .errors import SlidegramError
from .grammar import enumerate_solutions, load_pack, validate_exercise_pack
from .ingest import MOVE, VALIDATE, mark_revalidations, read_log_files, write_log
from .metrics import nearest_gold
from .report import write_report
from .simgen import StrategyProfile, generate


@click.group()
def main():
    """Agreement-slider exercises: validation, analytics, replay, simulation."""


@main.group()
def pack():
    """Exercise pack inspection."""


@pack.command("validate")
@click.argument("pack_path", type=click.Path(exists=True))
def pack_validate(pack_path):
    """Per-exercise slider/solution counts with playability warnings."""
    try:
        pack_id, exercises = load_pack(pack_path)
        report = validate_exercise_pack(exercises, pack_id=pack_id)
    except SlidegramError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(1)
    click.echo(f"pack {report.pack_id}: {len(report.entries)} exercises")
    click.echo(f"{'exercise':<20} {'sliders':>7} {'solutions':>9}  warnings")
    for e in report.entries:
        click.echo(
            f"{e.exercise_id:<20} {e.n_sliders:>7} {e.n_solutions:>9}  "
            + ("; ".join(e.warnings) if e.warnings else "-")
        )
    click.echo("\nsliders histogram (n_sliders: exercises)")
    for k, v in report.slider_histogram.items():
        click.echo(f"  {k}: {v}")
    click.echo("solutions histogram (n_solutions: exercises)")
    for k, v in report.solution_histogram.items():
        click.echo(f"  {k}: {v}")


@pack.command("solutions")
@click.argument("pack_path", type=click.Path(exists=True))
@click.option("--exercise", "exercise_id", required=True)
def pack_solutions(pack_path, exercise_id):
    """Gold vectors of one exercise, one per line."""
    try:
        _, exercises = load_pack(pack_path)
        by_id = {ex.id: ex for ex in exercises}
        if exercise_id not in by_id:
            raise SlidegramError(f"unknown exercise {exercise_id!r}")
        gs = enumerate_solutions(by_id[exercise_id])
    except SlidegramError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(1)
    for v in gs.vectors:
        click.echo(json.dumps(list(v)))


@main.command()
@click.argument("logs", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("--pack", "pack_path", required=True, type=click.Path(exists=True))
@click.option("--out", "outdir", required=True, type=click.Path())
@click.option("--trend", type=click.Choice(["pooled", "mean_curve"]), default="pooled")
@click.option("--figures/--no-figures", default=True)
def analyze(logs, pack_path, outdir, trend, figures):
    """Analyze event logs against a pack; write tables, figures, summary."""
    try:
        _, exercises = load_pack(pack_path)
        ex_map = {ex.id: ex for ex in exercises}
        goldsets = {ex.id: enumerate_solutions(ex) for ex in exercises}
        sessions, line_errors = read_log_files(logs)
    except SlidegramError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(1)
    for err in line_errors:
        click.echo(f"line {err.line_no}: {err.reason}", err=True)
    unknown = [s for s in sessions if s.exercise_id not in ex_map]
    for s in unknown:
        click.echo(f"session {s.session_id}: unknown exercise {s.exercise_id}", err=True)
    sessions = [s for s in sessions if s.exercise_id in ex_map]
    for s in sessions:
        if not s.consistent:
            click.echo(f"session {s.session_id} inconsistent: {'; '.join(s.audit)}", err=True)
    write_report(outdir, sessions, ex_map, goldsets, trend=trend, figures=figures)
    click.echo(f"wrote report to {outdir}")
    if line_errors or unknown:
        sys.exit(1)


@main.command()
@click.argument("logs", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("--session", "session_id", required=True)
@click.option("--pack", "pack_path", required=True, type=click.Path(exists=True))
def replay(logs, session_id, pack_path):
    """Step through a recorded session as textual frames."""
    try:
        _, exercises = load_pack(pack_path)
        ex_map = {ex.id: ex for ex in exercises}
        sessions, _ = read_log_files(logs)
        match = [s for s in sessions if s.session_id == session_id]
        if not match:
            raise SlidegramError(f"unknown session {session_id!r}")
        s = mark_revalidations(match[0])
        if s.exercise_id not in ex_map:
            raise SlidegramError(f"session references unknown exercise {s.exercise_id!r}")
        ex = ex_map[s.exercise_id]
        gs = enumerate_solutions(ex)
    except SlidegramError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(1)

    click.echo(f"session {s.session_id} student {s.student_id} exercise {s.exercise_id}")

    def frame(step, vector, gold_changed):
        ng = nearest_gold(vector, gs)
        click.echo(
            f"[{step:>3}] {list(vector)}  \"{ex.render(vector)}\"  "
            f"distance={ng.distance}"
            + ("  gold-changed" if gold_changed else "")
        )

    prev = nearest_gold(s.initial_vector, gs)
    frame(0, s.initial_vector, False)
    step = 0
    for ev in s.events:
        if ev.kind == MOVE:
            step += 1
            ng = nearest_gold(ev.vector, gs)
            frame(step, ev.vector, prev.chosen not in ng.golds)
            prev = ng
        elif ev.kind == VALIDATE:
            suffix = " (re-validation)" if ev.revalidation else ""
            click.echo(f"      validate -> {ev.result}{suffix}")


@main.command("simgen")
@click.option("--pack", "pack_path", required=True, type=click.Path(exists=True))
@click.option("--profile", "profile_path", required=True, type=click.Path(exists=True))
@click.option("--n", "n_sessions", required=True, type=int)
@click.option("--seed", type=int, default=None, help="Overrides the profile seed.")
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--exercise", "exercise_id", default=None,
              help="Exercise to generate for (default: first in pack).")
def simgen_cmd(pack_path, profile_path, n_sessions, seed, out_path, exercise_id):
    """Generate a synthetic cohort log plus a ground-truth sidecar JSON."""
    try:
        _, exercises = load_pack(pack_path)
        doc = json.loads(Path(profile_path).read_text(encoding="utf-8"))
        if seed is not None:
            doc["seed"] = seed
        profile = StrategyProfile.from_dict(doc)
        if exercise_id is None:
            ex = exercises[0]
        else:
            by_id = {e.id: e for e in exercises}
            if exercise_id not in by_id:
                raise SlidegramError(f"unknown exercise {exercise_id!r}")
            ex = by_id[exercise_id]
        sessions, truth = generate(ex, profile, n_sessions)
    except (SlidegramError, ValueError, KeyError) as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(1)
    write_log(sessions, out_path)
    sidecar = Path(str(out_path) + ".truth.json")
    sidecar.write_text(truth.to_json() + "\n", encoding="utf-8")
    click.echo(f"wrote {len(sessions)} sessions to {out_path} (+ {sidecar.name})")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
def serve(config_path):
    """Run the HTTP play/replay/analytics service."""
    import uvicorn

    from .service import create_app, load_service_config

    cfg = load_service_config(config_path)
    app = create_app(cfg)
    uvicorn.run(app, host="0.0.0.0", port=cfg.port)


if __name__ == "__main__":
    main()
