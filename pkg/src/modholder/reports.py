"""Output files: atomic writes, estimate reports and SVG line plots."""

from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np


def atomic_write(path, text: str) -> Path:
    """Write through a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=path.name + ".", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def verdict(estimate, expected, tol, kind: str = "abs") -> str:
    """pass|fail|inapplicable for an estimate against a prediction."""
    if expected is None or estimate is None or (isinstance(estimate, float) and math.isnan(estimate)):
        return "inapplicable"
    if kind == "min":
        return "pass" if estimate >= expected else "fail"
    return "pass" if abs(float(estimate) - float(expected)) <= tol else "fail"


def estimate_report(series: str, alpha, point: str, prediction: dict, estimated: dict, verdict_: str,
                    **extra) -> dict:
    return {
        "series": series,
        "alpha": None if alpha is None else str(alpha),
        "point": point,
        "predicted": prediction,
        "estimated": estimated,
        "verdict": verdict_,
        **extra,
    }


# ---------------------------------------------------------------------------
# SVG

WIDTH, HEIGHT = 900, 600
MARGIN = dict(left=80, right=30, top=40, bottom=90)


def _nice_ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-12 * step:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


def _fmt_tick(v: float) -> str:
    return f"{v:.6g}"


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def svg_line_plot(x, y, caption: str, metadata: dict) -> str:
    """Fixed 900x600 polyline plot with axes, ticks and a caption.

    ``metadata`` is embedded verbatim (as JSON) in a leading comment so the
    data can be regenerated from the file alone.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x0, x1 = float(x.min()), float(x.max())
    y0, y1 = float(y.min()), float(y.max())
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad
    L, R, T, B = MARGIN["left"], WIDTH - MARGIN["right"], MARGIN["top"], HEIGHT - MARGIN["bottom"]

    def px(v):
        return L + (v - x0) / (x1 - x0) * (R - L)

    def py(v):
        return B - (v - y0) / (y1 - y0) * (B - T)

    meta = json.dumps(metadata, sort_keys=True).replace("--", "- -")
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<!-- modholder figure {meta} -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<g stroke="black" stroke-width="1" fill="none">'
        f'<line x1="{L}" y1="{B}" x2="{R}" y2="{B}"/><line x1="{L}" y1="{B}" x2="{L}" y2="{T}"/></g>',
    ]
    ticks = ['<g font-family="sans-serif" font-size="12" fill="black">']
    for t in _nice_ticks(x0, x1):
        X = px(t)
        ticks.append(f'<line x1="{X:.2f}" y1="{B}" x2="{X:.2f}" y2="{B + 5}" stroke="black"/>'
                     f'<text x="{X:.2f}" y="{B + 20}" text-anchor="middle">{_fmt_tick(t)}</text>')
    for t in _nice_ticks(y0, y1):
        Y = py(t)
        ticks.append(f'<line x1="{L - 5}" y1="{Y:.2f}" x2="{L}" y2="{Y:.2f}" stroke="black"/>'
                     f'<text x="{L - 8}" y="{Y + 4:.2f}" text-anchor="end">{_fmt_tick(t)}</text>')
    if y0 < 0 < y1:
        ticks.append(f'<line x1="{L}" y1="{py(0.0):.2f}" x2="{R}" y2="{py(0.0):.2f}" '
                     'stroke="#999" stroke-dasharray="4 4"/>')
    ticks.append("</g>")
    out.extend(ticks)
    pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y))
    out.append(f'<polyline fill="none" stroke="#1f4e9c" stroke-width="0.8" points="{pts}"/>')
    out.append(f'<text x="{WIDTH / 2:.0f}" y="{HEIGHT - 30}" font-family="sans-serif" font-size="14" '
               f'text-anchor="middle">{_esc(caption)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _float_or_inf(v):
    v = float(v)
    return "inf" if math.isinf(v) else v
