"""Render framealign result CSVs into figures.

Three plot kinds, one per emitted schema: the fidelity scaling curve
(log-log infidelity against communication with the closed-form floor
column overlaid and the fitted slope annotated), vignette fidelity
bars, and QPE outcome histograms. The renderer consumes CSV values
only and never recomputes any physics.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "framealign-plots"   # stable element ids

import matplotlib.pyplot as plt
import numpy as np

SWEEP_COLUMNS = ["k", "epsilon", "n_stage", "roundtrips_formula", "oneway_qubits",
                 "trials", "f_min", "f_mean", "f_bound_paper", "seed"]
VIGNETTE_COLUMNS = ["vignette", "trials", "avg_fidelity", "stderr", "fwd_qubits",
                    "bwd_qubits", "fwd_cbits", "bwd_cbits", "seed"]
QPE_COLUMNS = ["y", "probability"]

KINDS = ("scaling", "vignettes", "qpe-hist")


class SchemaError(ValueError):
    """Input CSV header does not match the expected schema."""


@dataclass(frozen=True)
class PlotJob:
    input_csv: str
    kind: str
    output_image: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"unknown plot kind {self.kind!r}")


def _read_rows(path, expected_columns):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, expected header "
                              f"{','.join(expected_columns)}") from None
        if header != expected_columns:
            raise SchemaError(f"{path}: header {','.join(header)!r} does not "
                              f"match {','.join(expected_columns)!r}")
        return [row for row in reader if row]


def _new_axes(title, xlabel, ylabel):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    return fig, ax


def _save(fig, path):
    # strip the date metadata so identical inputs give identical bytes
    kwargs = {"metadata": {"Date": None}} if path.endswith(".svg") else {}
    fig.savefig(path, dpi=150, **kwargs)
    plt.close(fig)


def render_scaling(path, out):
    rows = _read_rows(path, SWEEP_COLUMNS)
    fig, ax = _new_axes("worst-case infidelity vs communication",
                        "log2(round trips)", "log2(1 - fidelity)")
    if rows:
        n = np.array([float(r[3]) for r in rows])
        f_min = np.array([float(r[6]) for r in rows])
        f_bound = np.array([float(r[8]) for r in rows])
        x = np.log2(n)
        y = np.log2(np.maximum(1.0 - f_min, 1e-18))
        ax.plot(x, y, "o-", color="#1f5fa8", label="measured (min over frames)")
        yb = np.log2(np.maximum(1.0 - f_bound, 1e-18))
        ax.plot(x, yb, "s--", color="#a84a1f", label="closed-form floor column")
        if len(rows) >= 2:
            slope = np.polyfit(x, y, 1)[0]
            ax.annotate(f"fitted slope {slope:.3f}", xy=(0.05, 0.08),
                        xycoords="axes fraction")
        ax.legend(loc="upper right")
    _save(fig, out)
    return out


def render_vignettes(path, out):
    rows = _read_rows(path, VIGNETTE_COLUMNS)
    fig, ax = _new_axes("vignette average fidelities", "", "average fidelity")
    if rows:
        names = [r[0] for r in rows]
        fids = [float(r[2]) for r in rows]
        errs = [float(r[3]) for r in rows]
        pos = np.arange(len(rows))
        ax.bar(pos, fids, yerr=errs, color="#4a7f4a", capsize=3)
        ax.set_xticks(pos)
        ax.set_xticklabels(names, rotation=30, ha="right", fontsize=8)
        ax.axhline(0.5, color="#888888", linewidth=0.8)  # random-guess line
        ax.set_ylim(0.0, 1.0)
        fig.tight_layout()
    _save(fig, out)
    return out


def render_qpe_hist(path, out):
    rows = _read_rows(path, QPE_COLUMNS)
    fig, ax = _new_axes("register outcome distribution", "outcome y", "probability")
    if rows:
        ys = [int(r[0]) for r in rows]
        ps = [float(r[1]) for r in rows]
        ax.bar(ys, ps, width=0.9, color="#6a4a7f")
    _save(fig, out)
    return out


_RENDERERS = {
    "scaling": render_scaling,
    "vignettes": render_vignettes,
    "qpe-hist": render_qpe_hist,
}


def render(job):
    """Render one PlotJob; returns the written image path."""
    return _RENDERERS[job.kind](job.input_csv, job.output_image)


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="framealign-plots",
        description="Render framealign result CSVs into figures.")
    parser.add_argument("input_csv")
    parser.add_argument("--kind", choices=KINDS, required=True)
    parser.add_argument("--out", required=True,
                        help="output image path (.svg or .png)")
    args = parser.parse_args(argv)
    try:
        render(PlotJob(args.input_csv, args.kind, args.out))
    except (SchemaError, OSError) as exc:
        sys.stderr.write(f"framealign-plots: {exc}\n")
        return 2
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
