"""Deterministic result persistence: CSV tables, a manifest, simple SVG plots.

CSV is the canonical format: fixed column order, one header row, floats
rendered with shortest round-trip formatting so identical runs produce byte
identical files. SVG output is a convenience view of the same data and
carries no acceptance weight.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInput

_PALETTE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#17becf",
    "#7f7f7f",
    "#bcbd22",
)

_W, _H = 640, 420
_ML, _MR, _MT, _MB = 64, 16, 34, 46  # plot margins


def format_value(value) -> str:
    """Shortest round-trip text for one CSV cell."""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, str):
        if any(c in value for c in ",\n\""):
            raise InvalidInput("CSV cells must not contain separators or quotes")
        return value
    raise InvalidInput(f"unsupported CSV cell type: {type(value).__name__}")


def write_csv(path: str, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        if len(row) != len(header):
            raise InvalidInput("row width does not match header")
        lines.append(",".join(format_value(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_manifest(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


@dataclass
class ResultBundle:
    """Locations and headline numbers of one scenario run."""

    scenario: str
    out_dir: str
    manifest_path: str
    csv_paths: dict[str, str] = field(default_factory=dict)
    svg_paths: dict[str, str] = field(default_factory=dict)
    summary: dict = field(default_factory=dict)


def _finite(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float).ravel()
    return arr[np.isfinite(arr)]


def _axis_range(arr: np.ndarray) -> tuple[float, float]:
    if arr.size == 0:
        return 0.0, 1.0
    lo, hi = float(arr.min()), float(arr.max())
    if hi - lo < 1e-300:
        pad = max(abs(hi), 1.0) * 0.05
        return lo - pad, hi + pad
    pad = 0.04 * (hi - lo)
    return lo - pad, hi + pad


def _fmt_tick(v: float) -> str:
    return f"{v:.6g}"


class _Canvas:
    def __init__(self, title: str, xlabel: str, ylabel: str,
                 xlim: tuple[float, float], ylim: tuple[float, float]):
        self.parts: list[str] = []
        self.xlim, self.ylim = xlim, ylim
        self.parts.append(
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
            f'viewBox="0 0 {_W} {_H}" font-family="monospace" font-size="12">'
        )
        self.parts.append(f'<rect width="{_W}" height="{_H}" fill="white"/>')
        x0, y0 = _ML, _H - _MB
        x1, y1 = _W - _MR, _MT
        self.parts.append(
            f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}" '
            f'fill="none" stroke="black" stroke-width="1"/>'
        )
        self.parts.append(
            f'<text x="{_W / 2:.1f}" y="20" text-anchor="middle">{title}</text>'
        )
        self.parts.append(
            f'<text x="{(x0 + x1) / 2:.1f}" y="{_H - 10}" text-anchor="middle">{xlabel}</text>'
        )
        self.parts.append(
            f'<text x="14" y="{(y0 + y1) / 2:.1f}" text-anchor="middle" '
            f'transform="rotate(-90 14 {(y0 + y1) / 2:.1f})">{ylabel}</text>'
        )
        for frac in (0.0, 0.5, 1.0):
            xv = xlim[0] + frac * (xlim[1] - xlim[0])
            yv = ylim[0] + frac * (ylim[1] - ylim[0])
            px = x0 + frac * (x1 - x0)
            py = y0 - frac * (y0 - y1)
            self.parts.append(
                f'<text x="{px:.1f}" y="{y0 + 16}" text-anchor="middle">{_fmt_tick(xv)}</text>'
            )
            self.parts.append(
                f'<text x="{x0 - 6}" y="{py + 4:.1f}" text-anchor="end">{_fmt_tick(yv)}</text>'
            )

    def to_px(self, x: float, y: float) -> tuple[float, float]:
        fx = (x - self.xlim[0]) / (self.xlim[1] - self.xlim[0])
        fy = (y - self.ylim[0]) / (self.ylim[1] - self.ylim[0])
        return _ML + fx * (_W - _ML - _MR), (_H - _MB) - fy * (_H - _MB - _MT)

    def polyline(self, xs, ys, color: str) -> None:
        pts = []
        for x, y in zip(xs, ys):
            if math.isfinite(x) and math.isfinite(y):
                px, py = self.to_px(x, y)
                pts.append(f"{px:.2f},{py:.2f}")
        if len(pts) >= 2:
            self.parts.append(
                f'<polyline points="{" ".join(pts)}" fill="none" '
                f'stroke="{color}" stroke-width="1.5"/>'
            )

    def segment(self, x0, y0, x1, y1, color: str) -> None:
        if not all(math.isfinite(v) for v in (x0, y0, x1, y1)):
            return
        p0, p1 = self.to_px(x0, y0), self.to_px(x1, y1)
        self.parts.append(
            f'<line x1="{p0[0]:.2f}" y1="{p0[1]:.2f}" x2="{p1[0]:.2f}" y2="{p1[1]:.2f}" '
            f'stroke="{color}" stroke-width="1.2"/>'
        )
        # arrowhead dot at the tip
        self.parts.append(
            f'<circle cx="{p1[0]:.2f}" cy="{p1[1]:.2f}" r="1.6" fill="{color}"/>'
        )

    def legend(self, names: list[str]) -> None:
        for i, name in enumerate(names):
            color = _PALETTE[i % len(_PALETTE)]
            y = _MT + 14 + 14 * i
            self.parts.append(
                f'<line x1="{_W - _MR - 120}" y1="{y - 4}" x2="{_W - _MR - 100}" '
                f'y2="{y - 4}" stroke="{color}" stroke-width="2"/>'
            )
            self.parts.append(f'<text x="{_W - _MR - 94}" y="{y}">{name}</text>')

    def write(self, path: str) -> None:
        self.parts.append("</svg>")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(self.parts) + "\n")


def svg_line_plot(path: str, x, series: dict[str, np.ndarray],
                  title: str, xlabel: str, ylabel: str) -> None:
    """Multi-series line plot with a fixed palette and a small legend."""
    xs = np.asarray(x, dtype=float)
    all_y = np.concatenate([_finite(v) for v in series.values()]) if series else np.array([])
    canvas = _Canvas(title, xlabel, ylabel, _axis_range(_finite(xs)), _axis_range(all_y))
    for i, (name, ys) in enumerate(series.items()):
        canvas.polyline(xs, np.asarray(ys, dtype=float), _PALETTE[i % len(_PALETTE)])
    canvas.legend(list(series))
    canvas.write(path)


def svg_quiver_plot(path: str, xs, ys, us, vs, title: str,
                    xlabel: str = "X", ylabel: str = "Y",
                    arrow_scale: float = 1.0) -> None:
    """Planar arrow field; non-finite anchor points are skipped."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    us = np.asarray(us, dtype=float) * arrow_scale
    vs = np.asarray(vs, dtype=float) * arrow_scale
    span_x = _axis_range(np.concatenate([_finite(xs), _finite(xs + us)]))
    span_y = _axis_range(np.concatenate([_finite(ys), _finite(ys + vs)]))
    canvas = _Canvas(title, xlabel, ylabel, span_x, span_y)
    for x, y, u, v in zip(xs, ys, us, vs):
        canvas.segment(x, y, x + u, y + v, _PALETTE[0])
    canvas.write(path)


def ensure_dir(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path
