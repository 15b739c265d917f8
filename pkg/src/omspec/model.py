"""Closed-form level structure of a mixed optomechanical cavity.

The cavity couples to a mechanical mode both linearly, g1 * a'a (b' + b),
and quadratically, g2 * a'a (b' + b)^2.  Conditioned on the photon number n
the mechanical mode is squeezed and displaced, which makes the full level
structure available in closed form.  Everything here is a pure function of
an immutable :class:`ModelParams`; energies are reported in the rotating
frame (optical carrier removed) and carry the units of ``omega_m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "ModelParams",
    "SqueezeDisplaceParams",
    "EigenLevel",
    "SubPeakSpacing",
    "squeeze_param",
    "displace_param",
    "squeeze_displace_params",
    "eigen_energy",
    "eigen_level",
    "energy_shift",
    "sideband_location",
    "sub_peak_spacing",
]


@dataclass(frozen=True)
class ModelParams:
    """The four physical rates of the model, all in the same units.

    omega_m : mechanical resonance frequency (the reference scale, usually 1.0)
    g1      : linear (radiation-pressure) coupling strength
    g2      : quadratic coupling strength
    kappa   : cavity-field decay rate
    """

    g1: float
    g2: float
    kappa: float
    omega_m: float = 1.0

    def __post_init__(self):
        for name in ("g1", "g2", "kappa", "omega_m"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v!r}")
        if self.omega_m <= 0:
            raise DomainError(f"omega_m must be positive, got {self.omega_m}")
        if self.kappa <= 0:
            raise DomainError(f"kappa must be positive, got {self.kappa}")
        # single-photon squeeze parameter must exist: ln(4 g2/omega_m + 1)
        if 4.0 * self.g2 / self.omega_m + 1.0 <= 0.0:
            raise DomainError(
                f"g2 = {self.g2} lies outside the allowed window "
                f"g2 > -omega_m/4 = {-self.omega_m / 4}"
            )


@dataclass(frozen=True)
class SqueezeDisplaceParams:
    """Photon-number conditioned squeeze and displacement of the mechanics."""

    n: int
    r_n: float
    alpha_n: float


@dataclass(frozen=True)
class EigenLevel:
    """One rotating-frame eigenlevel: n photons, m phonons."""

    n: int
    m: int
    energy: float


@dataclass(frozen=True)
class SubPeakSpacing:
    """Exact sub-peak spacing and its small-g2 approximation 2*g2."""

    exact: float
    small_g2: float


def _check_indices(n: int, m: int | None = None):
    if n < 0 or int(n) != n:
        raise DomainError(f"photon number must be a non-negative integer, got {n}")
    if m is not None and (m < 0 or int(m) != m):
        raise DomainError(f"phonon number must be a non-negative integer, got {m}")


def squeeze_param(n: int, p: ModelParams) -> float:
    """Squeeze parameter r_n = ln(4 g2 n / omega_m + 1) / 4.

    Negative g2 is only meaningful in the window -omega_m/4 < g2 < 0 and
    only for the zero- and one-photon sectors; higher sectors are rejected
    because the logarithm argument eventually turns non-positive.
    """
    _check_indices(n)
    if n >= 2 and p.g2 < 0:
        raise DomainError(
            "negative g2 is restricted to the n <= 1 photon sectors "
            f"(requested n = {n})"
        )
    arg = 4.0 * p.g2 * n / p.omega_m + 1.0
    if arg <= 0.0:
        raise DomainError(
            f"squeeze parameter undefined: 4*g2*n/omega_m + 1 = {arg} <= 0"
        )
    return 0.25 * math.log(arg)


def displace_param(n: int, p: ModelParams) -> float:
    """Displacement alpha_n = -g1 e^{-3 r_n} n / omega_m."""
    r = squeeze_param(n, p)
    return -p.g1 * math.exp(-3.0 * r) * n / p.omega_m


def squeeze_displace_params(n: int, p: ModelParams) -> SqueezeDisplaceParams:
    """Bundle (r_n, alpha_n) for the n-photon sector."""
    return SqueezeDisplaceParams(n=n, r_n=squeeze_param(n, p),
                                 alpha_n=displace_param(n, p))


def eigen_energy(n: int, m: int, p: ModelParams) -> float:
    """Rotating-frame eigenvalue of the (n photon, m phonon) level.

    E'_{n,m} = g2 e^{-2 r_n} n + omega_m sinh^2 r_n + omega_m e^{2 r_n} m
               - (g1^2 e^{-4 r_n} / omega_m) n^2

    For n = 0 this reduces to omega_m * m exactly.
    """
    _check_indices(n, m)
    r = squeeze_param(n, p)
    return (p.g2 * math.exp(-2.0 * r) * n
            + p.omega_m * math.sinh(r) ** 2
            + p.omega_m * math.exp(2.0 * r) * m
            - (p.g1 ** 2) * math.exp(-4.0 * r) / p.omega_m * n ** 2)


def eigen_level(n: int, m: int, p: ModelParams) -> EigenLevel:
    """As :func:`eigen_energy`, packaged with its quantum numbers."""
    return EigenLevel(n=n, m=m, energy=eigen_energy(n, m, p))


def energy_shift(p: ModelParams) -> float:
    """Single-photon shift C of the mechanical ground level.

    C = g1^2 e^{-4 r_1}/omega_m - g2 e^{-2 r_1} - omega_m sinh^2 r_1,
    which equals -E'_{1,0}.  The zero-phonon emission line sits at
    detuning -C.
    """
    r1 = squeeze_param(1, p)
    return ((p.g1 ** 2) * math.exp(-4.0 * r1) / p.omega_m
            - p.g2 * math.exp(-2.0 * r1)
            - p.omega_m * math.sinh(r1) ** 2)


def sideband_location(n: int, m: int, p: ModelParams) -> float:
    """Detuning of the emission resonance |1, n~> -> |0, m>.

    Delta = omega_m e^{2 r_1} n - omega_m m - C, identical to
    eigen_energy(1, n) - eigen_energy(0, m).
    """
    _check_indices(n, m)
    r1 = squeeze_param(1, p)
    return (p.omega_m * math.exp(2.0 * r1) * n
            - p.omega_m * m
            - energy_shift(p))


def sub_peak_spacing(p: ModelParams) -> SubPeakSpacing:
    """Distance between neighboring sub peaks.

    Exact value omega_m (e^{2 r_1} - 1) = omega_m (sqrt(1 + 4 g2/omega_m) - 1);
    for g2/omega_m << 1 this is approximately 2 g2, which is the quantity a
    quick reading of a measured spectrum gives.
    """
    r1 = squeeze_param(1, p)
    return SubPeakSpacing(exact=p.omega_m * (math.exp(2.0 * r1) - 1.0),
                          small_g2=2.0 * p.g2)
