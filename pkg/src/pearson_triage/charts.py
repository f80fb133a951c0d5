"""Self-contained SVG 1.1 bar charts with byte-stable output."""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

from .coupling import CboTable, SymptomCoupling, cbo_histogram
from .model import SYMPTOM_NAMES

WIDTH = 640
HEIGHT = 400
MARGIN_LEFT = 50
MARGIN_RIGHT = 20
MARGIN_TOP = 40
MARGIN_BOTTOM = 90
BAR_FILL = "#4a6fa5"


def _num(x: float) -> str:
    return f"{x:.2f}".rstrip("0").rstrip(".")


def bar_chart(labels: Sequence[str], values: Sequence[int], title: str) -> str:
    if not values:
        raise ValueError("nothing to plot")
    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    top = max(values) or 1
    slot = plot_w / len(values)
    bar_w = slot * 0.7
    base_y = MARGIN_TOP + plot_h

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        f'<text x="{WIDTH / 2:g}" y="24" font-family="sans-serif" font-size="16" '
        f'text-anchor="middle">{escape(title)}</text>',
        f'<line x1="{MARGIN_LEFT}" y1="{base_y}" x2="{WIDTH - MARGIN_RIGHT}" y2="{base_y}" stroke="#000000"/>',
        f'<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP}" x2="{MARGIN_LEFT}" y2="{base_y}" stroke="#000000"/>',
    ]
    for i, (label, value) in enumerate(zip(labels, values)):
        h = plot_h * value / top
        x = MARGIN_LEFT + i * slot + (slot - bar_w) / 2
        cx = x + bar_w / 2
        out.append(
            f'<rect class="bar" x="{_num(x)}" y="{_num(base_y - h)}" width="{_num(bar_w)}" '
            f'height="{_num(h)}" fill="{BAR_FILL}" data-label="{escape(label)}" data-value="{value}"/>'
        )
        out.append(
            f'<text x="{_num(cx)}" y="{_num(base_y - h - 4)}" font-family="sans-serif" '
            f'font-size="12" text-anchor="middle">{value}</text>'
        )
        out.append(
            f'<text x="{_num(cx)}" y="{base_y + 14}" font-family="sans-serif" font-size="11" '
            f'text-anchor="end" transform="rotate(-40 {_num(cx)} {base_y + 14})">{escape(label)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def symptom_counts_chart(rows: Sequence[SymptomCoupling]) -> str:
    """Patients per symptom, in column order."""
    rows = sorted(rows, key=lambda s: s.symptom_index)
    return bar_chart(
        [SYMPTOM_NAMES[s.symptom_index - 1] for s in rows],
        [s.count for s in rows],
        "Patients per symptom (single symptom coupling)",
    )


def cbo_histogram_chart(table: CboTable) -> str:
    hist = cbo_histogram(table)
    return bar_chart(
        [f"CBO {v}" for v, _ in hist],
        [n for _, n in hist],
        "Patients per CBO metric value",
    )
