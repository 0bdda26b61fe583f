"""Diagnostic figures rendered directly to SVG.

Two figure types, each with transmitted and received panels side by
side: an I/Q constellation built from the amplitude-ratio reconstruction
of each qubit state, and a Bloch sphere in a fixed orthographic
projection.  All output is deterministic: fixed element order, fixed
coordinate formatting, no timestamps.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .states import BlochVector, DensityMatrix, bloch_vector, leading_qubit_block

# tab20-style cycle; the erasure label -1 gets its own dark gray.
_PALETTE = (
    "#1f77b4", "#aec7e8", "#ff7f0e", "#ffbb78", "#2ca02c",
    "#98df8a", "#d62728", "#ff9896", "#9467bd", "#c5b0d5",
    "#8c564b", "#c49c94", "#e377c2", "#f7b6d2", "#7f7f7f",
    "#c7c7c7", "#bcbd22", "#dbdb8d", "#17becf", "#9edae5",
)
_ERASURE_COLOR = "#404040"

_AZIMUTH = np.deg2rad(30.0)
_ELEVATION = np.deg2rad(20.0)


@dataclass(frozen=True)
class ConstellationPlotPoint:
    """One plotted I/Q point; ``clipped`` marks a diverging reconstruction."""

    i: float
    q: float
    label: int
    clipped: bool = False


def constellation_point(
    rho: DensityMatrix,
    power_scale: float = 1.0,
    rho00_floor: float = 1e-9,
    clip_radius: float = 1.5,
    label: int = 0,
) -> ConstellationPlotPoint:
    """Reconstruct the complex amplitude of a (possibly enlarged) qubit state.

    The estimate is rho_10 / rho_00 of the renormalized leading 2x2
    block, divided by ``power_scale`` to land back on the constellation
    grid.  When rho_00 falls below ``rho00_floor`` the ratio diverges,
    so the point is pinned at ``clip_radius`` along the direction of
    rho_10 (or along +I if even that vanishes) and flagged.
    """
    block, _ = leading_qubit_block(rho)
    r00 = float(block.mat[0, 0].real)
    r10 = complex(block.mat[1, 0])
    if r00 < rho00_floor:
        direction = r10 / abs(r10) if abs(r10) > 0.0 else 1.0 + 0.0j
        alpha = clip_radius * direction
        return ConstellationPlotPoint(
            i=float(alpha.real), q=float(alpha.imag), label=label, clipped=True
        )
    alpha = (r10 / r00) / power_scale
    return ConstellationPlotPoint(i=float(alpha.real), q=float(alpha.imag), label=label)


def bloch_points(
    states: Sequence[DensityMatrix],
) -> list[tuple[BlochVector, float]]:
    """Bloch vector of each state's renormalized qubit block, with its trace.

    The trace reports how much weight survived in the qubit subspace
    (below 1 after erasure), letting callers discount depleted points.
    """
    out = []
    for rho in states:
        block, t = leading_qubit_block(rho)
        out.append((bloch_vector(block), t))
    return out


def _project(x: float, y: float, z: float) -> tuple[float, float]:
    """Orthographic view direction azimuth 30 deg, elevation 20 deg."""
    u = -np.sin(_AZIMUTH) * x + np.cos(_AZIMUTH) * y
    v = (
        -np.sin(_ELEVATION) * np.cos(_AZIMUTH) * x
        - np.sin(_ELEVATION) * np.sin(_AZIMUTH) * y
        + np.cos(_ELEVATION) * z
    )
    return float(u), float(v)


def _fmt(x: float) -> str:
    # Avoid "-0.00" so output is byte-stable across sign-of-zero differences.
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _color(label: int) -> str:
    if label < 0:
        return _ERASURE_COLOR
    return _PALETTE[label % len(_PALETTE)]


def _legend(parts: list[str], labels: Sequence[int], x: float, y: float) -> None:
    seen = sorted(set(labels), key=lambda v: (v < 0, v))
    for k, label in enumerate(seen):
        lx = x + 62.0 * k
        name = "erased" if label < 0 else f"s{label}"
        parts.append(
            f'<rect x="{_fmt(lx)}" y="{_fmt(y)}" width="10" height="10" '
            f'fill="{_color(label)}"/>'
        )
        parts.append(
            f'<text x="{_fmt(lx + 14)}" y="{_fmt(y + 9)}" font-size="11" '
            f'fill="#333">{name}</text>'
        )


def _marker(parts: list[str], px: float, py: float, color: str, clipped: bool) -> None:
    if clipped:
        for dx, dy in ((-4, -4), (-4, 4)):
            parts.append(
                f'<line x1="{_fmt(px + dx)}" y1="{_fmt(py + dy)}" '
                f'x2="{_fmt(px - dx)}" y2="{_fmt(py - dy)}" '
                f'stroke="{color}" stroke-width="1.5"/>'
            )
    else:
        parts.append(
            f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="4" fill="{color}" '
            f'fill-opacity="0.75"/>'
        )


_PANEL = 380.0
_MARGIN = 50.0
_GAP = 60.0
_WIDTH = int(2 * _PANEL + 2 * _MARGIN + _GAP)
_HEIGHT = int(_PANEL + 2 * _MARGIN + 40)


def _write_svg(path: Path, parts: list[str]) -> None:
    body = "\n".join(parts)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(body)
        fh.write("\n")


def render_constellation_svg(
    tx_points: Sequence[ConstellationPlotPoint],
    rx_points: Sequence[ConstellationPlotPoint],
    path: str | Path,
    title: str = "",
) -> None:
    """Two-panel I/Q scatter; clipped reconstructions drawn as crosses."""
    if not tx_points or not rx_points:
        raise ValueError("constellation rendering needs nonempty tx and rx point lists")
    all_points = list(tx_points) + list(rx_points)
    reach = max([1.0] + [max(abs(p.i), abs(p.q)) for p in all_points])
    half = 1.05 * reach

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" '
        f'height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        "<!-- constellation reconstruction; axis half-range "
        f"{_fmt(half)} -->",
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="#ffffff"/>',
    ]
    if title:
        parts.append(
            f'<text x="{_fmt(_WIDTH / 2)}" y="26" font-size="15" fill="#111" '
            f'text-anchor="middle">{_esc(title)}</text>'
        )

    def draw_panel(points: Sequence[ConstellationPlotPoint], x0: float, name: str) -> None:
        y0 = _MARGIN
        parts.append(
            f'<rect x="{_fmt(x0)}" y="{_fmt(y0)}" width="{_fmt(_PANEL)}" '
            f'height="{_fmt(_PANEL)}" fill="none" stroke="#888"/>'
        )
        cx, cy = x0 + _PANEL / 2, y0 + _PANEL / 2
        parts.append(
            f'<line x1="{_fmt(x0)}" y1="{_fmt(cy)}" x2="{_fmt(x0 + _PANEL)}" '
            f'y2="{_fmt(cy)}" stroke="#ddd"/>'
        )
        parts.append(
            f'<line x1="{_fmt(cx)}" y1="{_fmt(y0)}" x2="{_fmt(cx)}" '
            f'y2="{_fmt(y0 + _PANEL)}" stroke="#ddd"/>'
        )
        parts.append(
            f'<text x="{_fmt(cx)}" y="{_fmt(y0 - 8)}" font-size="13" fill="#333" '
            f'text-anchor="middle">{name}</text>'
        )
        parts.append(
            f'<text x="{_fmt(x0 + _PANEL - 4)}" y="{_fmt(cy - 6)}" font-size="10" '
            f'fill="#999" text-anchor="end">I {_fmt(half)}</text>'
        )
        parts.append(
            f'<text x="{_fmt(cx + 6)}" y="{_fmt(y0 + 12)}" font-size="10" '
            f'fill="#999">Q {_fmt(half)}</text>'
        )
        for p in points:
            px = x0 + (p.i + half) / (2 * half) * _PANEL
            py = y0 + (half - p.q) / (2 * half) * _PANEL
            _marker(parts, px, py, _color(p.label), p.clipped)

    draw_panel(tx_points, _MARGIN, "transmitted")
    draw_panel(rx_points, _MARGIN + _PANEL + _GAP, "received")
    _legend(parts, [p.label for p in all_points], _MARGIN, _MARGIN + _PANEL + 18)
    parts.append("</svg>")
    _write_svg(Path(path), parts)


def _sphere_wireframe(parts: list[str], cx: float, cy: float, r: float) -> None:
    parts.append(
        f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(r)}" fill="none" '
        f'stroke="#aaa"/>'
    )
    circles = (
        lambda t: (np.cos(t), np.sin(t), 0.0),  # equator
        lambda t: (np.cos(t), 0.0, np.sin(t)),  # x-z meridian
        lambda t: (0.0, np.cos(t), np.sin(t)),  # y-z meridian
    )
    for circle in circles:
        coords = []
        for k in range(73):
            t = 2.0 * np.pi * k / 72.0
            u, v = _project(*circle(t))
            coords.append(f"{_fmt(cx + r * u)},{_fmt(cy - r * v)}")
        parts.append(
            f'<polyline points="{" ".join(coords)}" fill="none" stroke="#ddd"/>'
        )
    for axis, name in (((1.1, 0, 0), "x"), ((0, 1.1, 0), "y"), ((0, 0, 1.1), "z")):
        u, v = _project(*axis)
        parts.append(
            f'<text x="{_fmt(cx + r * u)}" y="{_fmt(cy - r * v)}" font-size="11" '
            f'fill="#666" text-anchor="middle">{name}</text>'
        )


def render_bloch_svg(
    tx_points: Sequence[tuple[BlochVector, int]],
    rx_points: Sequence[tuple[BlochVector, int]],
    path: str | Path,
    title: str = "",
) -> None:
    """Two-panel Bloch sphere scatter in the fixed orthographic view."""
    if not tx_points or not rx_points:
        raise ValueError("Bloch rendering needs nonempty tx and rx point lists")
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" '
        f'height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        "<!-- Bloch sphere, orthographic projection, azimuth 30 deg, "
        "elevation 20 deg -->",
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="#ffffff"/>',
    ]
    if title:
        parts.append(
            f'<text x="{_fmt(_WIDTH / 2)}" y="26" font-size="15" fill="#111" '
            f'text-anchor="middle">{_esc(title)}</text>'
        )

    radius = _PANEL / 2 - 14.0

    def draw_panel(points: Sequence[tuple[BlochVector, int]], x0: float, name: str) -> None:
        cx, cy = x0 + _PANEL / 2, _MARGIN + _PANEL / 2
        _sphere_wireframe(parts, cx, cy, radius)
        parts.append(
            f'<text x="{_fmt(cx)}" y="{_fmt(_MARGIN - 8)}" font-size="13" '
            f'fill="#333" text-anchor="middle">{name}</text>'
        )
        for vec, label in points:
            u, v = _project(vec.x, vec.y, vec.z)
            _marker(parts, cx + radius * u, cy - radius * v, _color(label), False)

    draw_panel(tx_points, _MARGIN, "transmitted")
    draw_panel(rx_points, _MARGIN + _PANEL + _GAP, "received")
    _legend(
        parts,
        [label for _, label in list(tx_points) + list(rx_points)],
        _MARGIN,
        _MARGIN + _PANEL + 18,
    )
    parts.append("</svg>")
    _write_svg(Path(path), parts)
