"""Scale scans and least-squares slope fits."""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

SENTINEL = -math.inf


class ScanKind(str, enum.Enum):
    CONE = "cone"
    MICROLOCAL = "microlocal"
    OSCILLATION = "oscillation"
    VERTICAL = "vertical"
    PARTIAL_SUM = "partial_sum"
    LOCAL_PAIR = "local_pair"
    RESTRICTED = "restricted"


class FitError(ValueError):
    pass


class DegenerateScanError(ValueError):
    pass


@dataclass
class ScaleScan:
    """(j, log2 scale, log2 modulus) triples, finest scale last.

    Moduli that are zero or below the numerical floor are stored as -inf
    and never enter a fit.
    """

    j: np.ndarray
    log2_scale: np.ndarray
    log2_modulus: np.ndarray
    scan_kind: ScanKind
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.j = np.asarray(self.j, dtype=float)
        self.log2_scale = np.asarray(self.log2_scale, dtype=float)
        self.log2_modulus = np.asarray(self.log2_modulus, dtype=float)
        self.scan_kind = ScanKind(self.scan_kind)
        if not (self.j.shape == self.log2_scale.shape == self.log2_modulus.shape):
            raise ValueError("scan columns differ in length")
        if self.j.size > 1 and np.any(np.diff(self.log2_scale) >= 0):
            raise ValueError("log2_scale must be strictly decreasing")
        bad = np.isnan(self.log2_modulus) | (self.log2_modulus == math.inf)
        if bad.any():
            raise ValueError("scan moduli must be finite or the -inf sentinel")

    @property
    def usable(self) -> np.ndarray:
        return np.isfinite(self.log2_modulus)

    def __len__(self):
        return self.j.size

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["j", "log2_scale", "log2_modulus"])
        for j, s, m in zip(self.j, self.log2_scale, self.log2_modulus):
            w.writerow([_num(j), f"{s:.17g}", "-inf" if m == SENTINEL else f"{m:.17g}"])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, scan_kind, params=None) -> "ScaleScan":
        rows = list(csv.reader(io.StringIO(text)))[1:]
        cols = np.array([[float(v) for v in r] for r in rows]).reshape(-1, 3)
        return cls(cols[:, 0], cols[:, 1], cols[:, 2], scan_kind, params or {})


def _num(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else f"{v:.17g}"


@dataclass(frozen=True)
class ExponentEstimate:
    slope: float
    stderr: float
    r_squared: float
    fit_range: tuple
    n_points: int

    def __post_init__(self):
        if self.n_points < 4:
            raise FitError("an estimate needs at least 4 points")

    def as_dict(self) -> dict:
        return {
            "value": self.slope,
            "stderr": self.stderr,
            "r2": self.r_squared,
            "window": list(self.fit_range),
        }


def ols(x, y) -> tuple[float, float, float, float]:
    """slope, intercept, slope stderr, r^2 by ordinary least squares."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 3 or np.ptp(x) == 0:
        raise FitError("degenerate regression window")
    res = stats.linregress(x, y)
    resid = y - (res.intercept + res.slope * x)
    # linregress reports nan r on a perfectly flat y; that fit is exact
    r2 = float(res.rvalue**2) if np.isfinite(res.rvalue) else 1.0
    if np.all(resid == 0):
        return float(res.slope), float(res.intercept), 0.0, 1.0
    return float(res.slope), float(res.intercept), float(res.stderr), min(max(r2, 0.0), 1.0)


def fit_slope(scan: ScaleScan, j_window=None, finest: int | None = 8) -> ExponentEstimate:
    """Decay exponent: slope of log2 modulus against log2 scale.

    Positive means the modulus shrinks at fine scales. With ``j_window``
    = (j0, j1) only those j enter; otherwise the finest ``finest`` usable
    points are used (all of them if ``finest`` is None).
    """
    mask = scan.usable.copy()
    if j_window is not None:
        j0, j1 = j_window
        mask &= (scan.j >= j0) & (scan.j <= j1)
    idx = np.flatnonzero(mask)
    if j_window is None and finest is not None:
        idx = idx[-finest:]
    if idx.size < 4:
        raise FitError(f"only {idx.size} usable points in the fit window (need 4)")
    x, y = scan.log2_scale[idx], scan.log2_modulus[idx]
    if np.ptp(x) == 0:
        raise FitError("all points share one scale")
    slope, _, se, r2 = ols(x, y)
    return ExponentEstimate(slope, se, r2, (float(scan.j[idx[0]]), float(scan.j[idx[-1]])), int(idx.size))


# ---------------------------------------------------------------------------
# decay-model selection for vertical scans


class DecayModel(str, enum.Enum):
    POWER_LAW = "power_law"
    EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class DecayFit:
    """Winning model of a vertical scan.

    power_law: exponent of |f| ~ y^exponent.
    exponential: K in |f| ~ exp(-K / y).
    ``ambiguous`` is set when neither r^2 beats the other by the margin;
    the power law is then reported and both fits are kept.
    """

    model: DecayModel
    exponent_or_rate: float
    r_squared: float
    power_fit: tuple = ()
    exponential_fit: tuple = ()
    ambiguous: bool = False
    window: tuple = ()

    def as_dict(self) -> dict:
        return {
            "model": self.model.value,
            "exponent_or_rate": self.exponent_or_rate,
            "r2": self.r_squared,
            "ambiguous": self.ambiguous,
            "power_law": {"exponent": self.power_fit[0], "r2": self.power_fit[1]} if self.power_fit else None,
            "exponential": {"rate": self.exponential_fit[0], "r2": self.exponential_fit[1]}
            if self.exponential_fit else None,
            "window": list(self.window),
        }


R2_MARGIN = 0.05


def select_decay_model(log2_y, log2_mod, margin: float = R2_MARGIN, window=()) -> DecayFit:
    """Fit log2|f| against log2 y (power law) and against 1/y (exponential)."""
    log2_y = np.asarray(log2_y, dtype=float)
    log2_mod = np.asarray(log2_mod, dtype=float)
    if log2_y.size < 4:
        raise FitError("need at least 4 points to compare decay models")
    p_slope, _, _, p_r2 = ols(log2_y, log2_mod)
    e_slope, _, _, e_r2 = ols(2.0**-log2_y, log2_mod)
    rate = -e_slope * math.log(2.0)
    if e_r2 - p_r2 >= margin and rate > 0:
        return DecayFit(DecayModel.EXPONENTIAL, rate, e_r2, (p_slope, p_r2), (rate, e_r2), False, window)
    ambiguous = abs(e_r2 - p_r2) < margin
    return DecayFit(DecayModel.POWER_LAW, p_slope, p_r2, (p_slope, p_r2), (rate, e_r2), ambiguous, window)
