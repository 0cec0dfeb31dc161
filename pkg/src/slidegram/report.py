"""Report rendering: delimited tables, a JSON summary bundle, and figures.

Every table is written as UTF-8 CSV with a header row, in the fixed label
order (det, nom, adj, ver, other, GS, Pred) so outputs are diff-stable.
Figures are matplotlib PNGs rendered alongside the CSVs.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict
from pathlib import Path
from typing import Mapping

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .errors import EmptySelectionError
from .grammar import Exercise, GoldSet
from .ingest import CorpusTotals, Session, corpus_totals, mark_revalidations
from .seqstats import (
    ConvergenceCurve,
    HeatMap,
    aggregate_convergence,
    error_heatmap,
    gold_change_table,
    impact_table,
    moves_by_label,
    split_label_table,
    trajectory,
    verb_chain_predicate,
)


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def write_totals_csv(path: Path, totals: CorpusTotals) -> None:
    doc = asdict(totals)
    _write_csv(path, ["metric", "value"], [[k, v] for k, v in doc.items()])


def write_moves_csv(path: Path, table: Mapping[str, int]) -> None:
    _write_csv(path, ["label", "moves"], [[k, v] for k, v in table.items()])


def write_impact_csv(path: Path, table) -> None:
    rows = [
        [k, f"{r.improved_pct:.1f}", f"{r.worsened_pct:.1f}",
         f"{r.unchanged_pct:.1f}", r.total]
        for k, r in table.items()
    ]
    _write_csv(
        path,
        ["label", "improved_pct", "worsened_pct", "unchanged_pct", "total"],
        rows,
    )


def write_gold_change_csv(path: Path, table) -> None:
    rows = [[k, c, t] for k, (c, t) in table.items()]
    _write_csv(path, ["label", "gold_changed", "total"], rows)


def write_heatmap_csv(path: Path, hm: HeatMap) -> None:
    rows = [[lbl, *counts] for lbl, counts in zip(hm.rows, hm.counts)]
    _write_csv(path, ["label", *hm.cols], rows)


def write_convergence_csv(path: Path, curve: ConvergenceCurve) -> None:
    rows = [
        [step, f"{m:.6f}", f"{s:.6f}", n]
        for step, (m, s, n) in enumerate(
            zip(curve.mean_distance, curve.std_distance, curve.support)
        )
    ]
    _write_csv(path, ["step", "mean", "std", "support"], rows)


# ---------------------------------------------------------------------------
# Figures

def fig_convergence(path: Path, curve: ConvergenceCurve, title: str) -> None:
    steps = np.arange(len(curve.mean_distance))
    mean = np.array(curve.mean_distance)
    std = np.array(curve.std_distance)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(steps, mean, marker="o", markersize=3, lw=1.2, label="mean distance")
    ax.fill_between(steps, mean - std, mean + std, alpha=0.2, label="±1 std")
    ax.plot(
        steps,
        curve.intercept + curve.slope * steps,
        "--",
        color="tab:red",
        label=f"trend (slope {curve.slope:+.3f})",
    )
    ax.set_xlabel("move step")
    ax.set_ylabel("nearest-solution distance")
    ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def fig_heatmap(path: Path, hm: HeatMap) -> None:
    data = np.array(hm.counts) if hm.counts else np.zeros((1, 3))
    fig, ax = plt.subplots(figsize=(5, 0.6 * max(2, len(hm.rows)) + 1.5))
    im = ax.imshow(data, cmap="YlOrRd", aspect="auto")
    ax.set_xticks(range(len(hm.cols)), hm.cols)
    ax.set_yticks(range(len(hm.rows)), hm.rows)
    for i in range(len(hm.rows)):
        for j in range(len(hm.cols)):
            ax.text(j, i, str(data[i, j]), ha="center", va="center", fontsize=8)
    fig.colorbar(im, ax=ax, shrink=0.8)
    ax.set_title("errors by slider label and feature")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def fig_bars(path: Path, table: Mapping[str, int], title: str, ylabel: str) -> None:
    fig, ax = plt.subplots(figsize=(6, 3.5))
    labels = list(table)
    ax.bar(labels, [table[k] for k in labels], color="tab:blue")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


# ---------------------------------------------------------------------------
# Summary bundle

def build_summary(
    sessions: list[Session],
    exercises: Mapping[str, Exercise],
    goldsets: Mapping[str, GoldSet],
) -> dict:
    """All corpus tables as one JSON-ready dict (deterministic content)."""
    sessions = [mark_revalidations(s) for s in sessions]
    totals = corpus_totals(sessions)
    moves = moves_by_label(sessions, exercises)
    moves_cat, moves_func = split_label_table(moves)
    impact = impact_table(sessions, exercises, goldsets)
    gold_change = gold_change_table(sessions, exercises, goldsets)
    hm = error_heatmap(sessions, exercises, goldsets)
    return {
        "totals": asdict(totals),
        "moves_by_category": moves_cat,
        "moves_by_function": moves_func,
        "impact": {
            k: {
                "improved_pct": round(r.improved_pct, 4),
                "worsened_pct": round(r.worsened_pct, 4),
                "unchanged_pct": round(r.unchanged_pct, 4),
                "total": r.total,
            }
            for k, r in impact.items()
        },
        "gold_change": {k: {"gold_changed": c, "total": t} for k, (c, t) in gold_change.items()},
        "error_heatmap": {
            "rows": list(hm.rows),
            "cols": list(hm.cols),
            "counts": [list(r) for r in hm.counts],
        },
    }


def curve_to_dict(curve: ConvergenceCurve) -> dict:
    return {
        "mean": [round(m, 6) for m in curve.mean_distance],
        "std": [round(s, 6) for s in curve.std_distance],
        "support": list(curve.support),
        "slope": round(curve.slope, 6),
        "intercept": round(curve.intercept, 6),
    }


def write_report(
    outdir: str | Path,
    sessions: list[Session],
    exercises: Mapping[str, Exercise],
    goldsets: Mapping[str, GoldSet],
    trend: str = "pooled",
    figures: bool = True,
) -> dict:
    """Write the full analysis bundle; returns the JSON summary dict."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    sessions = [mark_revalidations(s) for s in sessions]
    summary = build_summary(sessions, exercises, goldsets)

    write_totals_csv(out / "totals.csv", corpus_totals(sessions))
    moves = moves_by_label(sessions, exercises)
    moves_cat, moves_func = split_label_table(moves)
    write_moves_csv(out / "moves_by_category.csv", moves_cat)
    write_moves_csv(out / "moves_by_function.csv", moves_func)
    impact = impact_table(sessions, exercises, goldsets)
    impact_cat, impact_func = split_label_table(impact)
    write_impact_csv(out / "impact_by_category.csv", impact_cat)
    write_impact_csv(out / "impact_by_function.csv", impact_func)
    gold_change = gold_change_table(sessions, exercises, goldsets)
    gc_cat, gc_func = split_label_table(gold_change)
    write_gold_change_csv(out / "gold_change_by_category.csv", gc_cat)
    write_gold_change_csv(out / "gold_change_by_function.csv", gc_func)
    hm = error_heatmap(sessions, exercises, goldsets)
    write_heatmap_csv(out / "error_heatmap.csv", hm)

    trajectories = [
        trajectory(s, goldsets[s.exercise_id]) for s in sessions if s.consistent
    ]
    curves = {}
    if trajectories:
        curves["all"] = aggregate_convergence(trajectories, trend=trend)
        write_convergence_csv(out / "convergence_all.csv", curves["all"])
        try:
            curves["verb_chain"] = aggregate_convergence(
                trajectories, predicate=verb_chain_predicate(exercises), trend=trend
            )
            write_convergence_csv(out / "convergence_verb_chain.csv", curves["verb_chain"])
        except EmptySelectionError:
            pass
    summary["convergence"] = {k: curve_to_dict(c) for k, c in curves.items()}

    (out / "summary.json").write_text(
        canonical_json(summary) + "\n", encoding="utf-8"
    )

    if figures:
        for name, curve in curves.items():
            fig_convergence(
                out / f"convergence_{name}.png", curve, f"convergence ({name})"
            )
        fig_heatmap(out / "error_heatmap.png", hm)
        if moves_cat:
            fig_bars(out / "moves_by_category.png", moves_cat,
                     "moves by grammatical category", "moves")
        if moves_func:
            fig_bars(out / "moves_by_function.png", moves_func,
                     "moves by syntactic function", "moves")
        row_totals = {lbl: sum(row) for lbl, row in zip(hm.rows, hm.counts)}
        if row_totals:
            fig_bars(out / "errors_by_category.png", row_totals,
                     "errors by slider label", "error records")
        col_totals = {
            c: sum(row[j] for row in hm.counts) for j, c in enumerate(hm.cols)
        }
        fig_bars(out / "errors_by_feature.png", col_totals,
                 "errors by feature", "error records")
    return summary
