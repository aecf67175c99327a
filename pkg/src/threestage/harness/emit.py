"""Result emission: per-record and summary CSVs, a JSON bundle, and a
standalone SVG line chart.

All emitters are pure functions of their inputs (no timestamps, fixed
column orders, shortest-round-trip float formatting), so identical results
serialize to byte-identical files.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict
from pathlib import Path
from typing import Sequence

from .runner import BurstRecord, ExperimentResult, SummaryRow

RECORD_COLUMNS = ("trial", "topology", "burst_size", "link_km", "bit_index",
                  "sent", "decoded", "decode_status", "received_count",
                  "success_fraction")
SUMMARY_COLUMNS = ("topology", "burst_size", "link_km",
                   "mean_success_qubit_pct", "mean_bit_decode_pct",
                   "surviving_qubit_pct", "trials", "seed")


class ChartDataError(ValueError):
    """Chart input outside the valid percentage range."""


def _cell(value: object) -> str:
    if value is None:
        return ""
    return str(value)


def emit_csv(summary: Sequence[SummaryRow], records: Sequence[BurstRecord],
             out_dir: str | Path, prefix: str = "run") -> tuple[Path, Path]:
    """Write {prefix}_records.csv and {prefix}_summary.csv under out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    records_path = out / f"{prefix}_records.csv"
    summary_path = out / f"{prefix}_summary.csv"

    with open(records_path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(RECORD_COLUMNS)
        for r in records:
            row = asdict(r)
            writer.writerow([_cell(row[c]) for c in RECORD_COLUMNS])

    with open(summary_path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(SUMMARY_COLUMNS)
        for s in summary:
            row = asdict(s)
            writer.writerow([_cell(row[c]) for c in SUMMARY_COLUMNS])

    return records_path, summary_path


def load_records_csv(path: str | Path) -> list[BurstRecord]:
    """Parse a records CSV back into BurstRecord values (round-trip check)."""
    out: list[BurstRecord] = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        for row in csv.DictReader(handle):
            out.append(BurstRecord(
                trial=int(row["trial"]),
                topology=row["topology"],
                burst_size=int(row["burst_size"]),
                link_km=float(row["link_km"]),
                bit_index=int(row["bit_index"]),
                sent=int(row["sent"]),
                decoded=int(row["decoded"]) if row["decoded"] != "" else None,
                decode_status=row["decode_status"],
                received_count=int(row["received_count"]),
                success_fraction=float(row["success_fraction"]),
            ))
    return out


def emit_json(result: ExperimentResult, path: str | Path) -> Path:
    """Write the full result (meta, summary, records) as one JSON document."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "meta": result.meta,
        "summary": [asdict(s) for s in result.summary],
        "records": [asdict(r) for r in result.records],
    }
    with open(target, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")
    return target


# -- SVG chart ---------------------------------------------------------------

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
_WIDTH, _HEIGHT = 720, 480
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 70, 180, 40, 55

_AXIS_TITLES = {
    "burst_size": "multi-photon burst size",
    "link_km": "link length (km)",
    "mean_success_qubit_pct": "successful qubits per bit (%)",
    "mean_bit_decode_pct": "correctly decoded bits (%)",
    "surviving_qubit_pct": "surviving qubits (%)",
}


def emit_chart(rows: Sequence[SummaryRow], path: str | Path,
               x_field: str = "burst_size",
               y_field: str = "mean_success_qubit_pct",
               title: str | None = None) -> Path:
    """Render one line chart: x = sweep value, one series per topology.

    Y values must be percentages in [0, 100]; anything else raises
    :class:`ChartDataError` instead of producing a misleading plot.
    """
    if not rows:
        raise ChartDataError("no rows to chart")
    if x_field not in ("burst_size", "link_km"):
        raise ChartDataError(f"unsupported x_field {x_field!r}")
    if y_field not in ("mean_success_qubit_pct", "mean_bit_decode_pct",
                       "surviving_qubit_pct"):
        raise ChartDataError(f"unsupported y_field {y_field!r}")

    series: dict[str, list[tuple[float, float]]] = {}
    for row in rows:
        y = getattr(row, y_field)
        if not (0.0 <= y <= 100.0):
            raise ChartDataError(
                f"{y_field} out of [0, 100] for topology {row.topology!r}: {y!r}")
        series.setdefault(row.topology, []).append(
            (float(getattr(row, x_field)), float(y)))
    for points in series.values():
        points.sort(key=lambda p: p[0])

    xs = [x for pts in series.values() for x, _ in pts]
    x_min, x_max = min(xs), max(xs)
    if x_max == x_min:
        x_min, x_max = x_min - 1.0, x_max + 1.0
    plot_w = _WIDTH - _MARGIN_L - _MARGIN_R
    plot_h = _HEIGHT - _MARGIN_T - _MARGIN_B

    def sx(x: float) -> float:
        return _MARGIN_L + (x - x_min) / (x_max - x_min) * plot_w

    def sy(y: float) -> float:
        return _MARGIN_T + (100.0 - y) / 100.0 * plot_h

    parts: list[str] = []
    parts.append(f'<svg xmlns="http://www.w3.org/2000/svg" '
                 f'width="{_WIDTH}" height="{_HEIGHT}" '
                 f'viewBox="0 0 {_WIDTH} {_HEIGHT}">')
    parts.append(f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>')
    if title:
        parts.append(f'<text x="{_WIDTH / 2:.1f}" y="24" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="16">{title}</text>')

    # gridlines and y ticks at 0, 20, ..., 100
    for tick in range(0, 101, 20):
        y = sy(tick)
        parts.append(f'<line x1="{_MARGIN_L}" y1="{y:.2f}" '
                     f'x2="{_MARGIN_L + plot_w}" y2="{y:.2f}" '
                     f'stroke="#dddddd" stroke-width="1"/>')
        parts.append(f'<text x="{_MARGIN_L - 8}" y="{y + 4:.2f}" '
                     f'text-anchor="end" font-family="sans-serif" '
                     f'font-size="12">{tick}</text>')
    # x ticks at five evenly spaced values
    for i in range(5):
        x_val = x_min + (x_max - x_min) * i / 4
        x = sx(x_val)
        parts.append(f'<line x1="{x:.2f}" y1="{_MARGIN_T + plot_h}" '
                     f'x2="{x:.2f}" y2="{_MARGIN_T + plot_h + 5}" '
                     f'stroke="black" stroke-width="1"/>')
        parts.append(f'<text x="{x:.2f}" y="{_MARGIN_T + plot_h + 20}" '
                     f'text-anchor="middle" font-family="sans-serif" '
                     f'font-size="12">{x_val:g}</text>')
    # axes
    parts.append(f'<line x1="{_MARGIN_L}" y1="{_MARGIN_T}" x2="{_MARGIN_L}" '
                 f'y2="{_MARGIN_T + plot_h}" stroke="black" stroke-width="1"/>')
    parts.append(f'<line x1="{_MARGIN_L}" y1="{_MARGIN_T + plot_h}" '
                 f'x2="{_MARGIN_L + plot_w}" y2="{_MARGIN_T + plot_h}" '
                 f'stroke="black" stroke-width="1"/>')
    # axis labels
    parts.append(f'<text x="{_MARGIN_L + plot_w / 2:.1f}" y="{_HEIGHT - 12}" '
                 f'text-anchor="middle" font-family="sans-serif" font-size="13">'
                 f'{_AXIS_TITLES[x_field]}</text>')
    parts.append(f'<text x="18" y="{_MARGIN_T + plot_h / 2:.1f}" '
                 f'text-anchor="middle" font-family="sans-serif" font-size="13" '
                 f'transform="rotate(-90 18 {_MARGIN_T + plot_h / 2:.1f})">'
                 f'{_AXIS_TITLES[y_field]}</text>')

    # series and legend
    legend_x = _MARGIN_L + plot_w + 16
    for idx, (label, points) in enumerate(series.items()):
        color = _PALETTE[idx % len(_PALETTE)]
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in points)
        parts.append(f'<polyline points="{coords}" fill="none" '
                     f'stroke="{color}" stroke-width="2"/>')
        legend_y = _MARGIN_T + 10 + idx * 22
        parts.append(f'<line x1="{legend_x}" y1="{legend_y}" '
                     f'x2="{legend_x + 24}" y2="{legend_y}" '
                     f'stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{legend_x + 30}" y="{legend_y + 4}" '
                     f'font-family="sans-serif" font-size="12">{label}</text>')

    parts.append("</svg>")
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text("\n".join(parts) + "\n", encoding="utf-8")
    return target
