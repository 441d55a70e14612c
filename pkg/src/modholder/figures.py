"""The six figure presets and their rendering to CSV + SVG."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import modcoeffs
from .reports import atomic_write, svg_line_plot
from .series_eval import Flavor, SampleGrid, SeriesSpec, eval_grid_direct, eval_grid_fft, grid_csv


@dataclass(frozen=True)
class FigurePreset:
    id: str
    series: str
    alpha: Fraction
    flavor: Flavor
    x_range: tuple
    samples: int
    caption: str
    N: int | None = None


F = Fraction
PRESETS = {
    "fig1": FigurePreset("fig1", "elliptic14", F(7, 4), Flavor.SINE, (F(0), F(1, 2)), 8192,
                         "sum a_n n^(-7/4) sin(2 pi n x), a_n of the conductor-14 curve, 0 <= x <= 1/2"),
    "fig2": FigurePreset("fig2", "elliptic14", F(7, 4), Flavor.SINE, (F("0.4042"), F("0.4242")), 4096,
                         "same series, zoom [0.4042, 0.4242]"),
    "fig3": FigurePreset("fig3", "elliptic14", F(7, 4), Flavor.SINE, (F("-0.05"), F("0.05")), 4096,
                         "same series, zoom [-0.05, 0.05]"),
    "fig4": FigurePreset("fig4", "theta12", F(1), Flavor.COSINE, (F(0), F("0.02")), 4096,
                         "theta cusp form (character mod 12), alpha = 1 in the square index (delta = 2), "
                         "cosine, [0, 0.02]"),
    "fig5": FigurePreset("fig5", "jacobi", F(1), Flavor.SINE, (F(0), F("0.02")), 4096,
                         "Riemann's example sum 2 sin(2 pi n^2 x)/n^2 (detail); window [0, 0.02] "
                         "chosen to match the theta cusp form panel"),
    "fig6": FigurePreset("fig6", "harmonic", F(13, 4), Flavor.COSINE, (F(-1, 2), F(1, 2)), 8192,
                         "harmonic theta series for x^4+y^4-6x^2y^2, alpha = 13/4, cosine, [-1/2, 1/2]; "
                         "2 pi inside the cosine (the variable is rescaled by 2 pi)"),
}


def preset_spec(preset: FigurePreset, cache_dir=None) -> SeriesSpec:
    seq = modcoeffs.cached(preset.series, cache_dir=cache_dir)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return SeriesSpec(seq, preset.alpha, preset.flavor)


def sample_window(spec: SeriesSpec, lo: Fraction, hi: Fraction, samples: int, N: int | None = None) -> SampleGrid:
    """samples + 1 equispaced values on [lo, hi], endpoints included.

    When 1/step is an integer the values are a strided slice of one FFT
    grid fine enough to hold all N frequencies; otherwise direct sums.
    """
    N = N or spec.coeffs.N
    lo, hi = Fraction(lo), Fraction(hi)
    step = (hi - lo) / samples
    count = samples + 1
    if (1 / step).denominator == 1:
        M_grid = int(1 / step)
        stride = 1 << max(0, math.ceil(math.log2((2 * N + 2) / M_grid)))
        full = eval_grid_fft(spec, M_grid * stride, N, x_start=lo)
        # a window spanning a whole period wraps onto the grid start
        vals = np.take(np.asarray(full.values), stride * np.arange(count), mode="wrap")
        return SampleGrid(float(lo), float(step), count, vals, N, meta={"path": "fft", "M": M_grid * stride})
    grid = eval_grid_direct(spec, float(lo), float(step), count, N)
    grid.meta["path"] = "direct"
    return grid


def metadata(preset: FigurePreset, grid: SampleGrid) -> dict:
    return {
        "preset": preset.id,
        "series": preset.series,
        "alpha": str(preset.alpha),
        "flavor": preset.flavor.value,
        "N": grid.truncation_N,
        "range": [str(preset.x_range[0]), str(preset.x_range[1])],
        "samples": preset.samples,
    }


def render(preset: FigurePreset, cache_dir=None) -> tuple[str, str]:
    """(csv text, svg text) for one preset."""
    spec = preset_spec(preset, cache_dir)
    grid = sample_window(spec, *preset.x_range, preset.samples, preset.N)
    meta = metadata(preset, grid)
    y = np.real(grid.values)
    svg = svg_line_plot(grid.x, y, f"{preset.id}: {preset.caption}", meta)
    return grid_csv(grid), svg


def write_preset(preset: FigurePreset, out_prefix, cache_dir=None) -> tuple[Path, Path]:
    csv_text, svg_text = render(preset, cache_dir)
    out_prefix = Path(out_prefix)
    return (atomic_write(out_prefix.with_suffix(".svg"), svg_text),
            atomic_write(out_prefix.with_suffix(".csv"), csv_text))


def write_all(out_dir, cache_dir=None) -> list[tuple[Path, Path]]:
    out_dir = Path(out_dir)
    return [write_preset(p, out_dir / p.id, cache_dir) for p in PRESETS.values()]
