"""Long-time single-photon emission amplitudes and spectra.

A photon prepared inside the cavity leaks out through a flat vacuum bath
(density of modes set to 1, so mode couplings obey xi^2 = kappa/(2 pi)).
Each emission channel |1, n~(1)> -> |0, m> contributes a Lorentzian of
width kappa centered on the corresponding sideband location; the channel
weights are Franck-Condon overlap products, and the initial mechanical
state sets how the weight is distributed.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, NormalizationError, TruncationError
from .model import ModelParams, energy_shift, squeeze_param
from .overlaps import TransitionMatrix, transition_matrix

__all__ = [
    "MechanicalInitState",
    "SpectrumGrid",
    "make_init_state",
    "emission_amplitude",
    "emission_spectrum",
    "detuning_grid",
]

DEFAULT_N_MAX = 60


@dataclass(frozen=True)
class MechanicalInitState:
    """Initial mechanical state, either pure amplitudes or mixture weights.

    Exactly one of ``amplitudes`` (C_m0 over number states, pure case) and
    ``weights`` (P_m0, mixed case) is set; both are stored truncated and
    renormalized.
    """

    kind: str
    n_max: int
    amplitudes: np.ndarray | None = None
    weights: np.ndarray | None = None
    label: dict = field(default_factory=dict)

    def __post_init__(self):
        if (self.amplitudes is None) == (self.weights is None):
            raise DomainError(
                "exactly one of amplitudes / weights must be populated")
        if self.amplitudes is not None:
            total = float(np.sum(np.abs(self.amplitudes) ** 2))
        else:
            w = np.asarray(self.weights)
            if np.any(w < -1e-15):
                raise DomainError("mixture weights must be non-negative")
            total = float(np.sum(w))
        if abs(total - 1.0) > 1e-10:
            raise NormalizationError(
                f"initial state not normalized: total = {total}")

    @property
    def is_pure(self) -> bool:
        return self.amplitudes is not None


@dataclass(frozen=True)
class SpectrumGrid:
    """Sampled spectral density S(Delta) over an ordered detuning axis."""

    deltas: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.deltas) != len(self.values):
            raise DomainError("deltas and values must have equal length")
        if np.any(np.diff(self.deltas) <= 0):
            raise DomainError("detuning samples must be strictly increasing")
        if np.any(self.values < -1e-12):
            raise DomainError("spectral density must be non-negative")

    def integral(self) -> float:
        return float(np.trapezoid(self.values, self.deltas))


def detuning_grid(lo: float, hi: float, step: float) -> np.ndarray:
    """Uniform detuning samples covering [lo, hi] with the given step."""
    if not (hi > lo and step > 0):
        raise DomainError("need hi > lo and step > 0")
    n = int(round((hi - lo) / step)) + 1
    return lo + step * np.arange(n)


def make_init_state(kind: str, n_max: int = DEFAULT_N_MAX, *,
                    m0: int = 0, beta: complex = 1.0, nbar: float = 1.0,
                    trans: TransitionMatrix | None = None,
                    params: ModelParams | None = None,
                    tail_tol: float = 1e-8) -> MechanicalInitState:
    """Construct one of the supported initial mechanical states.

    kind = "number"    : Fock state |m0>
    kind = "sd_ground" : single-photon squeezed displaced ground state
                         |0~(1)> (needs ``trans`` or ``params``)
    kind = "coherent"  : coherent state with complex amplitude ``beta``
    kind = "thermal"   : thermal mixture with mean occupation ``nbar``

    Distributions are truncated at ``n_max`` and renormalized; if the
    discarded tail exceeds ``tail_tol`` the truncation is refused.
    """
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    if kind == "number":
        if not (0 <= m0 < n_max):
            raise DomainError(f"m0 = {m0} outside [0, {n_max})")
        c = np.zeros(n_max)
        c[m0] = 1.0
        return MechanicalInitState("number", n_max, amplitudes=c,
                                   label={"m0": int(m0)})
    if kind == "sd_ground":
        if trans is None:
            if params is None:
                raise DomainError("sd_ground needs a transition matrix or params")
            trans = transition_matrix(params, n_max)
        c = trans.entries[:n_max, 0].astype(float).copy()
        tail = abs(1.0 - float(np.sum(c ** 2)))
        if tail > tail_tol:
            raise TruncationError(
                f"sd_ground tail {tail:.2e} exceeds {tail_tol:.0e} at n_max={n_max}")
        c /= math.sqrt(float(np.sum(c ** 2)))
        return MechanicalInitState("sd_ground", n_max, amplitudes=c,
                                   label={})
    if kind == "coherent":
        beta = complex(beta)
        ns = np.arange(n_max)
        if beta == 0:
            c = np.zeros(n_max, dtype=complex)
            c[0] = 1.0
        else:
            logmag = -abs(beta) ** 2 / 2.0 + ns * math.log(abs(beta))
            c = (np.exp(logmag - 0.5 * gammaln(ns + 1.0))
                 * np.exp(1j * np.angle(beta) * ns))
        tail = abs(1.0 - float(np.sum(np.abs(c) ** 2)))
        if tail > tail_tol:
            raise TruncationError(
                f"coherent tail {tail:.2e} exceeds {tail_tol:.0e} at n_max={n_max}")
        c = c / math.sqrt(float(np.sum(np.abs(c) ** 2)))
        return MechanicalInitState("coherent", n_max, amplitudes=c,
                                   label={"beta": beta})
    if kind == "thermal":
        if nbar < 0:
            raise DomainError("nbar must be >= 0")
        ns = np.arange(n_max)
        if nbar == 0:
            w = np.zeros(n_max)
            w[0] = 1.0
        else:
            ratio = nbar / (nbar + 1.0)
            w = ratio ** ns / (nbar + 1.0)
        tail = abs(1.0 - float(np.sum(w)))
        if tail > tail_tol:
            raise TruncationError(
                f"thermal tail {tail:.2e} exceeds {tail_tol:.0e} at n_max={n_max}")
        w = w / float(np.sum(w))
        return MechanicalInitState("thermal", n_max, weights=w,
                                   label={"nbar": float(nbar)})
    raise DomainError(f"unknown initial-state kind {kind!r}")


def _locations(p: ModelParams, n_idx: np.ndarray, m: int) -> np.ndarray:
    """Sideband locations Delta(n, m) for a vector of n at fixed m."""
    r1 = squeeze_param(1, p)
    return (p.omega_m * math.exp(2.0 * r1) * n_idx
            - p.omega_m * m - energy_shift(p))


def emission_amplitude(m0: int, m: int, delta, p: ModelParams,
                       trans: TransitionMatrix,
                       numer_cut: float = 1e-14) -> complex | np.ndarray:
    """Long-time bath amplitude B_{m0, m}(Delta) for one emission channel.

    B = sum_n xi T[m, n] T[m0, n] / (Delta - Delta(n, m) + i kappa/2) with
    xi = sqrt(kappa / 2 pi).  The n-sum stops where the numerator falls
    below ``numer_cut``; a tail estimate above 1e-10 triggers a warning.
    """
    t = trans.entries
    n_max = trans.n_max
    if not (0 <= m < n_max and 0 <= m0 < n_max):
        raise DomainError("phonon indices outside transition-matrix range")
    numer = t[m, :] * t[m0, :]
    mags = np.abs(numer)
    keep = np.nonzero(mags >= numer_cut)[0]
    if len(keep) == 0:
        n_top = 0
    else:
        n_top = int(keep[-1]) + 1
        dropped = float(np.sum(mags[n_top:]))
        if dropped > 1e-10:
            warnings.warn(
                f"emission n-sum tail {dropped:.2e} above 1e-10", stacklevel=2)
    xi = math.sqrt(p.kappa / (2.0 * math.pi))
    n_idx = np.arange(n_top, dtype=float)
    locs = _locations(p, n_idx, m)
    d = np.atleast_1d(np.asarray(delta, dtype=float))
    denom = d[:, None] - locs[None, :] + 1j * (p.kappa / 2.0)
    out = xi * np.sum(numer[:n_top][None, :] / denom, axis=1)
    return out if np.ndim(delta) else complex(out[0])


def _pure_spectrum(c, deltas, p, t):
    """S(Delta) = sum_m |sum_m0 C_m0 B_{m0,m}|^2 via the dressed weights."""
    n_max = t.shape[0]
    w = t.T @ c                         # <n~(1)|psi_0>
    xi2 = p.kappa / (2.0 * math.pi)
    n_idx = np.arange(n_max, dtype=float)
    s = np.zeros(len(deltas))
    for m in range(n_max):
        locs = _locations(p, n_idx, m)
        denom = deltas[:, None] - locs[None, :] + 1j * (p.kappa / 2.0)
        amp = (t[m, :] * w)[None, :] / denom
        s += np.abs(np.sum(amp, axis=1)) ** 2
    return xi2 * s


def _mixed_spectrum(weights, deltas, p, t, weight_cut=1e-14):
    """S(Delta) = sum_m0 P_m0 sum_m |B_{m0,m}|^2, dense over channels."""
    n_max = t.shape[0]
    sel = np.nonzero(weights > weight_cut)[0]
    t_sub = t[sel, :]                   # (M0, N)
    xi2 = p.kappa / (2.0 * math.pi)
    n_idx = np.arange(n_max, dtype=float)
    s = np.zeros(len(deltas))
    for m in range(n_max):
        locs = _locations(p, n_idx, m)
        denom = deltas[:, None] - locs[None, :] + 1j * (p.kappa / 2.0)
        bmat = (t[m, :][None, :] / denom) @ t_sub.T    # (G, M0)
        s += np.abs(bmat) ** 2 @ weights[sel]
    return xi2 * s


def emission_spectrum(init: MechanicalInitState, deltas, p: ModelParams,
                      trans: TransitionMatrix | None = None, *,
                      check_integral: bool = True,
                      integral_tol: float = 5e-3) -> SpectrumGrid:
    """Single-photon emission spectrum for the given initial state.

    The spectral density uses the unit-density-of-modes convention, so it
    integrates to the total emission probability 1; a trapezoid integral
    off unity by more than ``integral_tol`` raises, which signals a grid or
    truncation problem.
    """
    deltas = np.asarray(deltas, dtype=float)
    if trans is None:
        trans = transition_matrix(p, init.n_max)
    if trans.n_max < init.n_max:
        raise DomainError("transition matrix smaller than the initial state")
    t = trans.entries
    if init.is_pure:
        c = np.zeros(trans.n_max, dtype=complex)
        c[:init.n_max] = init.amplitudes
        values = _pure_spectrum(c, deltas, p, t)
    else:
        w = np.zeros(trans.n_max)
        w[:init.n_max] = init.weights
        values = _mixed_spectrum(w, deltas, p, t)
    grid = SpectrumGrid(deltas=deltas, values=values, meta={
        "kind": "emission",
        "params": p,
        "state": {"kind": init.kind, **init.label},
    })
    total = grid.integral()
    grid.meta["integral"] = total
    grid.meta["integral_ok"] = abs(total - 1.0) <= integral_tol
    if check_integral and not grid.meta["integral_ok"]:
        raise NormalizationError(
            f"emission spectrum integrates to {total:.6f}; widen the grid "
            "or increase the truncation")
    return grid
