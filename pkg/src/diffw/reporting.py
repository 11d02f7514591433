"""Report emission: JSON records, CSV flattening, and figure rendering.

Reports are machine-diffable: for a fixed configuration and seed the JSON
bytes are identical run to run.  Figures are optional companions written
next to the delimited output; the records always carry the raw numbers.
"""

from __future__ import annotations

import csv
import json
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["build_report", "write_json", "write_csv", "render_figures"]

CSV_COLUMNS = ("suite", "name", "property", "residual", "tolerance", "pass")


def build_report(cfg, records, passed: bool) -> dict:
    return {
        "suite": cfg.suite,
        "dim": cfg.dim,
        "seed": cfg.seed,
        "tolerance_override": cfg.tol,
        "checks": records,
        "all_pass": bool(passed),
    }


def write_json(report: dict, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_csv(report: dict, path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for rec in report["checks"]:
            writer.writerow([rec.get(c, "") for c in CSV_COLUMNS])


def _margin(rec) -> float:
    res = max(rec["residual"], 1e-18)
    tol = max(rec["tolerance"], 1e-18)
    return np.log10(res / tol)


def render_figures(report: dict, directory: str) -> list:
    """Render one residual-margin chart per suite, plus the counterexample
    value curve when those checks are present.  Returns the written paths."""
    os.makedirs(directory, exist_ok=True)
    written = []
    by_suite = {}
    for rec in report["checks"]:
        by_suite.setdefault(rec.get("suite", report["suite"]), []).append(rec)

    for suite, recs in sorted(by_suite.items()):
        fig, ax = plt.subplots(figsize=(8, max(2.0, 0.3 * len(recs) + 1.2)))
        names = [r["name"] for r in recs]
        margins = [_margin(r) for r in recs]
        colors = ["#2a7e43" if r["pass"] else "#b0322a" for r in recs]
        y = np.arange(len(recs))
        ax.barh(y, margins, color=colors)
        ax.axvline(0.0, color="k", lw=1)
        ax.set_yticks(y)
        ax.set_yticklabels(names, fontsize=7)
        ax.invert_yaxis()
        ax.set_xlabel("log10(residual / tolerance)   (left of 0 = pass)")
        ax.set_title(f"suite: {suite}")
        fig.tight_layout()
        path = os.path.join(directory, f"{suite}_residuals.png")
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)

    counter = [
        r for r in report["checks"] if r["name"].startswith("counterexample-n")
    ]
    if counter:
        counter.sort(key=lambda r: r["name"])
        ns = np.arange(1, len(counter) + 1)
        vals = [r.get("value", np.nan) for r in counter]
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot(ns, vals, "o-", color="#1f4e79")
        ax.axhline(1.0, color="#b0322a", ls="--", label="asserted lower bound")
        ax.set_xlabel("n")
        ax.set_ylabel("sup |sin((1+1/2n) x) - sin x|")
        ax.set_xticks(ns[::2])
        ax.legend()
        fig.tight_layout()
        path = os.path.join(directory, "counterexample_values.png")
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)
    return written
