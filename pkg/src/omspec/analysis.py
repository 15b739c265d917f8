"""Peak/dip detection, classification against the resonance ladder, and
inversion of spectral geometry into coupling-strength estimates.

The inversion chain mirrors how one would read a measured spectrum: the
sub-peak spacing inside one sideband cluster gives the quadratic coupling,
the zero-phonon line position gives the ground-level shift, and the two
together give the linear coupling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import find_peaks

from .errors import DomainError, GridError, InferenceError
from .model import ModelParams
from .emission import SpectrumGrid

__all__ = [
    "Peak",
    "Dip",
    "PeakReport",
    "ResolutionCheck",
    "QuadraticCouplingEstimate",
    "find_extrema",
    "infer_g2",
    "infer_c_and_g1",
    "check_resolution",
    "analyze_spectrum",
]

PEAK_CLASSES = ("main_sideband", "sub_peak", "zero_phonon", "unclassified")


@dataclass(frozen=True)
class Peak:
    location: float
    height: float
    prominence: float
    kind: str = "unclassified"


@dataclass(frozen=True)
class Dip:
    location: float
    depth: float


@dataclass(frozen=True)
class ResolutionCheck:
    ok: bool
    margin: float
    spacing: float


@dataclass(frozen=True)
class QuadraticCouplingEstimate:
    """Exact inversion of the sub-peak spacing, plus the quick spacing/2 read."""

    exact: float
    small_g2: float


@dataclass
class PeakReport:
    """Everything read off one spectrum: extrema, classes, inferred couplings."""

    peaks: list[Peak] = field(default_factory=list)
    dips: list[Dip] = field(default_factory=list)
    zero_phonon_location: float | None = None
    sub_peak_spacing: float | None = None
    inferred_c: float | None = None
    inferred_g2: float | None = None
    inferred_g2_small: float | None = None
    inferred_g1: float | None = None
    resolution_ok: bool = False
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "peaks": [{"location": q.location, "height": q.height,
                       "prominence": q.prominence, "class": q.kind}
                      for q in self.peaks],
            "dips": [{"location": d.location, "depth": d.depth}
                     for d in self.dips],
            "zero_phonon_location": self.zero_phonon_location,
            "sub_peak_spacing": self.sub_peak_spacing,
            "inferred_C": self.inferred_c,
            "inferred_g2": self.inferred_g2,
            "inferred_g2_small": self.inferred_g2_small,
            "inferred_g1": self.inferred_g1,
            "resolution_ok": self.resolution_ok,
            "notes": list(self.notes),
        }


def _refine(x: np.ndarray, y: np.ndarray, i: int) -> tuple[float, float]:
    """Parabolic refinement of an extremum through three uniform samples."""
    if i <= 0 or i >= len(y) - 1:
        return float(x[i]), float(y[i])
    ym, y0, yp = y[i - 1], y[i], y[i + 1]
    curv = ym - 2.0 * y0 + yp
    if curv == 0.0:
        return float(x[i]), float(y0)
    off = 0.5 * (ym - yp) / curv
    h = x[1] - x[0]
    return float(x[i] + off * h), float(y0 - 0.25 * (ym - yp) * off)


def find_extrema(spec: SpectrumGrid, prominence_frac: float = 0.005,
                 kappa: float | None = None) -> tuple[list[Peak], list[Dip]]:
    """Local maxima and minima with prominence above a fraction of max(S).

    Positions are refined by quadratic interpolation through the three
    nearest samples, so they are good to a small fraction of the grid
    step.  Passing ``kappa`` enables the sampling check: extrema positions
    are unreliable when the spacing exceeds kappa/5.
    """
    x = spec.deltas
    y = spec.values
    steps = np.diff(x)
    h = float(steps[0])
    if np.max(np.abs(steps - h)) > 1e-6 * h:
        raise GridError("extremum refinement needs a uniform detuning grid")
    if kappa is not None and h > kappa / 5.0:
        raise GridError(
            f"grid spacing {h:.3g} too coarse for kappa = {kappa:.3g}; "
            "need spacing <= kappa/5")
    top = float(np.max(y)) if len(y) else 0.0
    if top <= 0.0:
        return [], []
    thresh = prominence_frac * top
    idx, props = find_peaks(y, prominence=thresh)
    peaks = []
    for i, prom in zip(idx, props["prominences"]):
        loc, height = _refine(x, y, int(i))
        peaks.append(Peak(location=loc, height=height, prominence=float(prom)))
    idx_d, props_d = find_peaks(-y, prominence=thresh)
    dips = []
    for i, prom in zip(idx_d, props_d["prominences"]):
        loc, _ = _refine(x, -y, int(i))
        dips.append(Dip(location=loc, depth=float(prom)))
    peaks.sort(key=lambda q: q.location)
    dips.sort(key=lambda d: d.location)
    return peaks, dips


def infer_g2(sub_spacing: float, omega_m: float = 1.0) -> QuadraticCouplingEstimate:
    """Invert the sub-peak spacing into the quadratic coupling.

    spacing = omega_m (sqrt(1 + 4 g2/omega_m) - 1) inverts exactly to
    g2 = omega_m ((1 + spacing/omega_m)^2 - 1) / 4; spacing/2 is the
    common small-g2 shortcut.
    """
    if sub_spacing < 0:
        raise DomainError(f"sub-peak spacing must be >= 0, got {sub_spacing}")
    exact = omega_m * ((1.0 + sub_spacing / omega_m) ** 2 - 1.0) / 4.0
    return QuadraticCouplingEstimate(exact=exact, small_g2=sub_spacing / 2.0)


def infer_c_and_g1(zero_phonon_location: float, g2_hat: float,
                   omega_m: float = 1.0) -> tuple[float, float]:
    """Shift and linear coupling from the zero-phonon line and g2 estimate.

    C_hat = -Delta_zp, and g1 follows from the closed form of C:
    g1 = sqrt(omega_m e^{4 r1} (C + g2 e^{-2 r1} + omega_m sinh^2 r1)).
    A negative radicand means the supposed zero-phonon line cannot belong
    to the given g2, which is reported as an inconsistency.
    """
    c_hat = -zero_phonon_location
    if 4.0 * g2_hat / omega_m + 1.0 <= 0.0:
        raise DomainError("g2 estimate outside the allowed window")
    r1 = 0.25 * math.log(4.0 * g2_hat / omega_m + 1.0)
    radicand = omega_m * math.exp(4.0 * r1) * (
        c_hat + g2_hat * math.exp(-2.0 * r1) + omega_m * math.sinh(r1) ** 2)
    if radicand < 0.0:
        raise InferenceError(
            f"no real linear coupling reproduces C = {c_hat:.6g} with "
            f"g2 = {g2_hat:.6g}; the zero-phonon line is likely misidentified")
    return c_hat, math.sqrt(radicand)


def check_resolution(p: ModelParams) -> ResolutionCheck:
    """Can sub peaks be resolved at these parameters?

    Requires the resolved-sideband condition omega_m > kappa and the
    sub-peak condition omega_m (e^{2 r1} - 1) > kappa.  The margin is the
    spacing-to-linewidth ratio.
    """
    from .model import sub_peak_spacing
    spacing = sub_peak_spacing(p).exact
    ok = (p.omega_m > p.kappa) and (spacing > p.kappa)
    return ResolutionCheck(ok=ok, margin=spacing / p.kappa, spacing=spacing)


def _classify(peaks: list[Peak], c_hat: float, g2_hat: float, omega_m: float,
              kappa: float, span: tuple[float, float]) -> list[Peak]:
    """Attach ladder classes to peaks within kappa/2 of a resonance."""
    a = omega_m * math.sqrt(1.0 + 4.0 * g2_hat / omega_m)
    lo, hi = span
    n_top = max(2, int((hi + c_hat) / max(a - omega_m, 1e-12)) + 2) if a > omega_m else 12
    n_top = min(n_top, 40)
    m_top = max(2, int((a * n_top - lo - c_hat) / omega_m) + 2)
    ladder = {}
    for n in range(n_top + 1):
        for m in range(m_top + 1):
            loc = a * n - omega_m * m - c_hat
            if lo - omega_m <= loc <= hi + omega_m:
                ladder[(n, m)] = loc
    out = []
    keys = list(ladder)
    locs = np.array([ladder[k] for k in keys])
    for q in peaks:
        j = int(np.argmin(np.abs(locs - q.location)))
        if abs(locs[j] - q.location) <= kappa / 2.0:
            n, m = keys[j]
            if n == 0 and m == 0:
                kind = "zero_phonon"
            elif n == 0:
                kind = "main_sideband"
            else:
                kind = "sub_peak"
        else:
            kind = "unclassified"
        out.append(Peak(q.location, q.height, q.prominence, kind))
    return out


def analyze_spectrum(spec: SpectrumGrid, omega_m: float, kappa: float,
                     prominence_frac: float = 0.005,
                     candidate_frac: float = 0.3,
                     deep_blue_limit: float = 0.04) -> PeakReport:
    """Full read of one emission-type spectrum.

    Finds extrema, identifies the zero-phonon line (strongest-candidate red
    peak closest to zero detuning), measures the sub-peak spacing inside
    its cluster, inverts both into (C, g2, g1), and classifies every peak
    against the inferred ladder.

    The identification rule assumes a near-ground initial mechanical state.
    Initial excitation shows up as spectral weight beyond Delta = +omega_m
    (emission that absorbs more than the dressing can supply), so spectra
    carrying more than ``deep_blue_limit`` of their mass there are flagged
    and left uninverted, as are spectra whose zero-phonon candidate fails
    to be the global maximum.
    """
    report = PeakReport()
    peaks, dips = find_extrema(spec, prominence_frac, kappa=kappa)
    report.peaks = peaks
    report.dips = dips
    if not peaks:
        report.notes.append("no peaks above the prominence threshold")
        return report

    total = spec.integral()
    deep = spec.deltas > omega_m
    if total > 0 and float(spec.deltas[-1]) > omega_m + 3.0 * kappa:
        deep_mass = float(np.trapezoid(spec.values[deep], spec.deltas[deep])) \
            if np.count_nonzero(deep) > 1 else 0.0
        if deep_mass / total > deep_blue_limit:
            report.notes.append(
                f"spectral weight {deep_mass / total:.3f} beyond +omega_m "
                "indicates an excited initial mechanical state; coupling "
                "inference skipped")
            return report
    else:
        report.notes.append(
            "grid does not extend past +omega_m; initial-excitation check "
            "skipped")

    red = [q for q in peaks if q.location < 0]
    if not red:
        report.notes.append("no red-sideband peaks; coupling inference skipped")
        return report
    prom_top = max(q.prominence for q in red)
    candidates = [q for q in red if q.prominence >= candidate_frac * prom_top]
    zp = max(candidates, key=lambda q: q.location)
    gmax = max(peaks, key=lambda q: q.height)
    if abs(zp.location - gmax.location) > 1e-9:
        report.notes.append(
            "zero-phonon candidate is not the global maximum; the "
            "ground-state identification rule does not apply, coupling "
            "inference skipped")
        return report
    report.zero_phonon_location = zp.location

    cluster = sorted(q.location for q in peaks
                     if abs(q.location - zp.location) < omega_m / 2.0)
    gaps = np.diff(cluster)
    if len(gaps) >= 1:
        spacing = float(np.median(gaps))
        report.sub_peak_spacing = spacing
        est = infer_g2(spacing, omega_m)
        report.inferred_g2 = est.exact
        report.inferred_g2_small = est.small_g2
        try:
            c_hat, g1_hat = infer_c_and_g1(zp.location, est.exact, omega_m)
            report.inferred_c = c_hat
            report.inferred_g1 = g1_hat
        except InferenceError as exc:
            report.notes.append(str(exc))
        report.resolution_ok = (omega_m > kappa) and (spacing > kappa)
    else:
        report.inferred_c = -zp.location
        report.notes.append(
            "single peak in the zero-phonon cluster; sub peaks unresolved, "
            "g2 and g1 not inferred")
        report.resolution_ok = False

    if report.inferred_c is not None and report.inferred_g2 is not None:
        span = (float(spec.deltas[0]), float(spec.deltas[-1]))
        report.peaks = _classify(peaks, report.inferred_c, report.inferred_g2,
                                 omega_m, kappa, span)
    return report
