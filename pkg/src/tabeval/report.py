"""Write a metric report to disk: summary JSON, CSV series, and figures.

Output is byte-stable: keys are sorted, floats use their shortest exact
representation, and figures carry no timestamps, so two runs over the same
corpus produce identical directories.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from .evaluate import MetricReport

SECTIONS = ("detection", "calibration", "tsr", "te")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_text(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)


def _csv(path: Path, header: Iterable[str], rows: Iterable[Iterable]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    _write_text(path, "\n".join(lines) + "\n")


def emit_report(report: MetricReport, outdir: str | Path,
                sections: Iterable[str] = SECTIONS, figures: bool = True) -> Path:
    """Write the report under outdir and return that path.

    sections picks which metric families appear; series and figures that
    belong to an omitted section are skipped entirely.
    """
    wanted = set(sections)
    unknown = wanted.difference(SECTIONS)
    if unknown:
        raise ValueError(f"unknown report sections: {sorted(unknown)}")
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    summary = report.summary_dict()
    if "detection" not in wanted:
        summary.pop("detection", None)
        summary.pop("macro", None)
    elif "calibration" not in wanted:
        summary["detection"].pop("d_ece", None)
    if "calibration" not in wanted and "detection" not in wanted:
        summary.pop("detection", None)
    if "calibration" in wanted and "detection" not in wanted:
        summary["detection"] = {"d_ece": report.detection["d_ece"]}
    if "tsr" not in wanted:
        summary.pop("tsr", None)
    if "te" not in wanted:
        summary.pop("te", None)
    _write_text(outdir / "summary.json",
                json.dumps(summary, indent=2, sort_keys=True, allow_nan=False) + "\n")

    if "detection" in wanted:
        _csv(outdir / "series" / "pr_curve.csv",
             ("threshold", "precision", "recall"),
             ((p.theta_c, p.precision, p.recall) for p in report.pr_points))
    if "calibration" in wanted:
        _csv(outdir / "series" / "reliability.csv",
             ("lo", "hi", "count", "mean_confidence", "precision"),
             ((b.lo, b.hi, b.count, b.mean_confidence, b.precision)
              for b in report.reliability))
    if "te" in wanted and report.te_points is not None:
        names = sorted(report.te_points)
        header = ["threshold"]
        for name in names:
            header += [f"precision_{name}", f"recall_{name}"]
        length = len(next(iter(report.te_points.values())))
        rows = []
        for i in range(length):
            row = [report.te_points[names[0]][i].theta_c]
            for name in names:
                point = report.te_points[name][i]
                row += [point.precision, point.recall]
            rows.append(row)
        _csv(outdir / "series" / "te_curve.csv", header, rows)

    _csv(outdir / "pages.csv",
         ("page_id", "n_gt", "n_predictions", "n_positive", "tp", "fp", "fn",
          "precision", "recall", "f1", "tsr_topology", "tsr_content", "tsr_teds",
          "n_warnings"),
         ((d.page_id, d.n_gt, d.n_predictions, d.n_positive, d.tp, d.fp, d.fn,
           d.precision, d.recall, d.f1, d.tsr["topology"], d.tsr["content"],
           d.tsr["teds"], len(d.warnings)) for d in report.pages))

    if figures:
        _render_figures(report, outdir, wanted)
    return outdir


def _render_figures(report: MetricReport, outdir: Path, wanted: set[str]) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    figdir = outdir / "figures"
    figdir.mkdir(parents=True, exist_ok=True)
    save = dict(dpi=150, metadata={"Software": None})

    if "detection" in wanted:
        fig, ax = plt.subplots(figsize=(6, 4.5))
        ax.plot([p.recall for p in report.pr_points],
                [p.precision for p in report.pr_points],
                marker="o", markersize=3, linewidth=1.2)
        ax.set_xlabel("recall")
        ax.set_ylabel("precision")
        ax.set_title(f"precision/recall, AP = {report.detection['ap']:.4f}")
        ax.set_xlim(-0.02, 1.02)
        ax.set_ylim(-0.02, 1.02)
        ax.grid(alpha=0.3)
        fig.tight_layout()
        fig.savefig(figdir / "pr_curve.png", **save)
        plt.close(fig)

    if "calibration" in wanted:
        fig, ax = plt.subplots(figsize=(6, 4.5))
        centers = [(b.lo + b.hi) / 2 for b in report.reliability]
        width = (centers[1] - centers[0]) * 0.9 if len(centers) > 1 else 0.09
        ax.bar(centers, [b.precision for b in report.reliability],
               width=width, label="precision", alpha=0.8, edgecolor="black")
        ax.plot([0, 1], [0, 1], linestyle="--", color="gray", label="perfect calibration")
        ax.set_xlabel("confidence")
        ax.set_ylabel("precision")
        ax.set_title(f"reliability, D-ECE = {report.detection['d_ece']:.4f}")
        ax.set_xlim(0, 1)
        ax.set_ylim(0, 1.05)
        ax.legend(loc="upper left")
        ax.grid(alpha=0.3)
        fig.tight_layout()
        fig.savefig(figdir / "reliability.png", **save)
        plt.close(fig)

    if "te" in wanted and report.te_points is not None:
        fig, ax = plt.subplots(figsize=(6, 4.5))
        for name in sorted(report.te_points):
            points = report.te_points[name]
            ax.plot([p.recall for p in points], [p.precision for p in points],
                    marker="o", markersize=3, linewidth=1.2, label=name)
        ax.set_xlabel("weighted recall")
        ax.set_ylabel("weighted precision")
        ax.set_title("extraction precision/recall by structure weighting")
        ax.set_xlim(-0.02, 1.02)
        ax.set_ylim(-0.02, 1.02)
        ax.legend()
        ax.grid(alpha=0.3)
        fig.tight_layout()
        fig.savefig(figdir / "te_curve.png", **save)
        plt.close(fig)
