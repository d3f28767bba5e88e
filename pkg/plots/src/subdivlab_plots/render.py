"""Render static figures from subdivlab CSV artifacts.

Two figure kinds are supported, one per documented CSV schema:

- ``scan-ratio``: threshold-scan output
  (m,n,s,t,exponent,trial,seed,p,edges_before,copies,edges_after,ratio);
  plots the mean edges/|V| ratio against m, one curve per (s,t,exponent).
- ``exponents``: exponent-calculator output
  (s,grid_x_exponent,grid_y_exponent,grid_total_exponent and optionally
  distance_lower_exponent,energy_upper_exponent); plots each exponent
  column against s.

No mathematics is recomputed here: values are read from the CSV, parsed as
exact "num/den" rationals, and only converted to floats for drawing.
Rendering is deterministic: fixed figure geometry, no timestamps in the
output metadata.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

KINDS = ("scan-ratio", "exponents")

SCAN_COLUMNS = ["m", "n", "s", "t", "exponent", "trial", "seed", "p",
                "edges_before", "copies", "edges_after", "ratio"]
EXPONENT_COLUMNS = ["s", "grid_x_exponent", "grid_y_exponent",
                    "grid_total_exponent"]
EXPONENT_EXTRA_COLUMNS = ["distance_lower_exponent", "energy_upper_exponent"]

FIGSIZE = (7.0, 4.5)
DPI = 110


class SchemaError(ValueError):
    """The CSV does not match the documented schema for the figure kind."""


@dataclass(frozen=True)
class PlotSpec:
    input_csv: str
    kind: str
    output_image: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}; "
                              f"expected one of {KINDS}")


def _read_rows(path: str, required: list[str]) -> list[dict]:
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None:
                raise SchemaError(f"{path}: empty input, no header row")
            missing = [c for c in required if c not in reader.fieldnames]
            if missing:
                raise SchemaError(f"{path}: missing columns {missing}")
            rows = list(reader)
    except FileNotFoundError as exc:
        raise SchemaError(f"no such file: {path}") from exc
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def _rat(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad rational value {text!r}") from exc


def _render_scan_ratio(rows: list[dict], ax) -> None:
    # group trials by (s, t, exponent), then by m
    groups: dict[tuple, dict[int, list[Fraction]]] = {}
    for row in rows:
        try:
            key = (int(row["s"]), int(row["t"]), _rat(row["exponent"]))
            m = int(row["m"])
            ratio = _rat(row["ratio"])
        except (KeyError, ValueError) as exc:
            raise SchemaError(f"bad scan row {row!r}") from exc
        groups.setdefault(key, {}).setdefault(m, []).append(ratio)
    for (s, t, exponent), by_m in sorted(groups.items()):
        ms = sorted(by_m)
        means = [float(sum(by_m[m]) / len(by_m[m])) for m in ms]
        ax.plot(ms, means, marker="o",
                label=f"s={s}, t={t}, exponent={exponent}")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("m (left side size)")
    ax.set_ylabel("mean edges / |V|")
    ax.set_title("Threshold scan: edge density after deletion")
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.3)


def _render_exponents(rows: list[dict], ax) -> None:
    ss: list[int] = []
    series: dict[str, list[float]] = {}
    present_extras = [c for c in EXPONENT_EXTRA_COLUMNS if c in rows[0]]
    columns = EXPONENT_COLUMNS[1:] + present_extras
    for row in rows:
        try:
            ss.append(int(row["s"]))
            for col in columns:
                series.setdefault(col, []).append(float(_rat(row[col])))
        except (KeyError, ValueError, TypeError) as exc:
            raise SchemaError(f"bad exponents row {row!r}") from exc
    order = sorted(range(len(ss)), key=lambda i: ss[i])
    xs = [ss[i] for i in order]
    for col in columns:
        ys = [series[col][i] for i in order]
        ax.plot(xs, ys, marker="o", label=col.replace("_", " "))
    ax.axhline(4.0 / 3.0, linestyle="--", linewidth=0.8, color="gray")
    ax.set_xlabel("s")
    ax.set_ylabel("exponent")
    ax.set_title("Exponent formulas against s")
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.3)


def render(spec: PlotSpec) -> str:
    """Render the figure and return the output path.

    Output bytes are a pure function of the CSV bytes: fixed figure size,
    fixed dpi, no timestamp metadata.
    """
    if spec.kind == "scan-ratio":
        rows = _read_rows(spec.input_csv, SCAN_COLUMNS)
    else:
        rows = _read_rows(spec.input_csv, EXPONENT_COLUMNS)

    fig, ax = plt.subplots(figsize=FIGSIZE, dpi=DPI)
    try:
        if spec.kind == "scan-ratio":
            _render_scan_ratio(rows, ax)
        else:
            _render_exponents(rows, ax)
        fig.tight_layout()
        out = Path(spec.output_image)
        out.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out, format="png", metadata={"Software": None})
    finally:
        plt.close(fig)
    return str(spec.output_image)
