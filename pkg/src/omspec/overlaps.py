"""Overlaps <m| S(zeta) D(beta) |n> between bare and squeezed-displaced
number states, and the single-photon transition matrix built from them.

The closed form is a finite Hermite-polynomial sum.  Its prefactors contain
factorials and fractional powers whose magnitudes overflow double precision
long before the overlap itself does, so every factor is accumulated as
(log-magnitude, unit phase).  Fractional powers of negative reals use the
principal branch throughout; the resulting signed values are checked against
a matrix-exponential oracle rather than re-derived analytically.  For the
model's case (theta = 0, real displacement) all phases are exact quarter
turns, so the computed overlaps are exactly real.

The squeeze convention matching the closed form is
S(zeta) = exp[(zeta b^2 - zeta* b'^2)/2], D(beta) = exp(beta b' - beta* b),
with zeta = s e^{i theta}; for real zeta this is the conditioned-mechanics
transformation of the model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

from .errors import DomainError
from .model import ModelParams, displace_param, squeeze_param

__all__ = [
    "SqueezeDisplaceSpec",
    "TransitionMatrix",
    "hermite",
    "overlap_sd",
    "transition_matrix",
]

# unit phases of e^{i pi q/2} for integer q
_QUARTER = np.array([1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j])

# below this squeeze magnitude the general formula is abandoned for the
# displaced-number closed form (the formula divides by mu*nu)
_S_SWITCH = 1e-12


@dataclass(frozen=True)
class SqueezeDisplaceSpec:
    """Squeeze magnitude/phase and complex displacement of one transformation."""

    s: float
    theta: float = 0.0
    beta: complex = 0.0 + 0.0j

    def __post_init__(self):
        if self.s < 0:
            raise DomainError(f"squeeze magnitude must be >= 0, got {self.s}")

    @property
    def mu(self) -> float:
        return math.cosh(self.s)

    @property
    def nu(self) -> complex:
        # keep nu exactly on the real axis when theta == 0 so that phase
        # bookkeeping downstream stays exact
        if self.theta == 0.0:
            return complex(math.sinh(self.s), 0.0)
        return np.exp(-1j * self.theta) * math.sinh(self.s)


def hermite(k: int, z: complex) -> complex:
    """Physicists' Hermite polynomial H_k(z) by the three-term recurrence.

    No overflow protection: for large k the values exceed double range and
    come back non-finite, which the caller must check.  The log-scaled
    ladder used internally by :func:`overlap_sd` is the safe variant.
    """
    if k < 0 or int(k) != k:
        raise DomainError(f"Hermite order must be a non-negative integer, got {k}")
    if k == 0:
        return 1.0 + 0.0j
    h_prev, h = 1.0 + 0.0j, 2.0 * complex(z)
    for j in range(1, k):
        h_prev, h = h, 2.0 * z * h - 2.0 * j * h_prev
    return h


def _split(z: complex) -> tuple[float, complex]:
    """(log|z|, unit phase), with exact +-1 / +-i phases for axis-aligned z."""
    zr, zi = z.real, z.imag
    if zi == 0.0:
        if zr == 0.0:
            return -math.inf, 1.0 + 0.0j
        return math.log(abs(zr)), (1.0 + 0.0j) if zr > 0 else (-1.0 + 0.0j)
    if zr == 0.0:
        return math.log(abs(zi)), (1.0j) if zi > 0 else (-1.0j)
    a = abs(z)
    return math.log(a), z / a


def _hermite_ladder(jmax: int, z: complex) -> tuple[np.ndarray, np.ndarray]:
    """All H_j(z), j = 0..jmax, as (unit-phase mantissa, log magnitude).

    The recurrence is renormalized each step, so arbitrarily high orders
    stay representable.  Exact zeros keep mantissa 0 and log -inf.
    """
    mant = np.zeros(jmax + 1, dtype=complex)
    logm = np.full(jmax + 1, -math.inf)
    mant[0], logm[0] = 1.0, 0.0
    if jmax == 0:
        return mant, logm
    val = 2.0 * complex(z)
    a = abs(val)
    if a > 0.0:
        mant[1], logm[1] = val / a, math.log(a)
    prev_m, prev_l = mant[0], logm[0]
    cur_m, cur_l = mant[1], logm[1]
    for j in range(1, jmax):
        # evaluate both recurrence terms below the larger of the two scales
        ref = max(cur_l, prev_l)
        c = cur_m * math.exp(cur_l - ref) if cur_l > -math.inf else 0.0
        q = prev_m * math.exp(prev_l - ref) if prev_l > -math.inf else 0.0
        val = 2.0 * z * c - 2.0 * j * q
        a = abs(val)
        if a > 0.0:
            nxt_m, nxt_l = val / a, ref + math.log(a)
        else:
            nxt_m, nxt_l = 0.0 + 0.0j, -math.inf
        mant[j + 1], logm[j + 1] = nxt_m, nxt_l
        prev_m, prev_l, cur_m, cur_l = cur_m, cur_l, nxt_m, nxt_l
    return mant, logm


def _halfpow_arrays(base: complex, twoq: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """base**(twoq/2) on the principal branch: (log magnitudes, unit phases)."""
    lm, ph = _split(base)
    logs = lm * (twoq / 2.0)
    if ph.imag == 0.0 and ph.real < 0.0:
        phases = _QUARTER[np.mod(twoq, 4)]
    elif ph == 1.0 + 0.0j:
        phases = np.ones(len(twoq), dtype=complex)
    else:
        phases = np.exp(1j * np.angle(ph) * (twoq / 2.0))
    return logs, phases


class _SDKernel:
    """Evaluator of <m|S D|n> for all m, n up to a fixed maximum index.

    Ladders and log-gamma tables are built once; each entry then costs one
    vectorized sum over k = 0..min(m, n).
    """

    def __init__(self, spec: SqueezeDisplaceSpec, jmax: int):
        self.spec = spec
        self.jmax = jmax
        mu, nu, beta = spec.mu, spec.nu, complex(spec.beta)
        self.mu, self.nu, self.beta = mu, nu, beta
        z1 = beta / np.sqrt(2.0 * mu * nu)
        z2 = (beta * np.conj(nu) - np.conj(beta) * mu) / np.sqrt(-2.0 * mu * np.conj(nu))
        self.h1_m, self.h1_l = _hermite_ladder(jmax, z1)
        self.h2_m, self.h2_l = _hermite_ladder(jmax, z2)
        self.lgam = gammaln(np.arange(jmax + 2, dtype=float) + 1.0)
        self.lm_2munu, self.ph_2munu = _split(2.0 * mu * nu)
        self.u = -np.conj(nu) / (2.0 * mu)
        # exp(-|beta|^2/2 + nu* beta^2 / (2 mu)) as (logmag, phase)
        arg = -abs(beta) ** 2 / 2.0 + np.conj(nu) * beta ** 2 / (2.0 * mu)
        self.pref_lm = arg.real
        self.pref_ph = np.exp(1j * arg.imag) if arg.imag != 0.0 else 1.0 + 0.0j

    def entry(self, m: int, n: int) -> complex:
        mu, nu = self.mu, self.nu
        k = np.arange(min(m, n) + 1)
        lg = self.lgam
        logmag = (lg[n] - lg[k] - lg[n - k]          # binomial C(n, k)
                  + k * math.log(2.0)
                  + lg[m] - lg[m - k])               # m!/(m-k)!
        # (2 mu nu)^{-k/2}
        p_lm, p_ph = _halfpow_arrays(2.0 * mu * nu, k)
        logmag -= p_lm
        phases = np.conj(p_ph)
        # (-nu*/(2 mu))^{(n-k)/2}
        q_lm, q_ph = _halfpow_arrays(self.u, n - k)
        logmag += q_lm
        phases = phases * q_ph
        # Hermite factors
        logmag = logmag + self.h1_l[m - k] + self.h2_l[n - k]
        phases = phases * self.h1_m[m - k] * self.h2_m[n - k]

        live = np.isfinite(logmag)
        if not np.any(live):
            ksum_lm, ksum_ph = -math.inf, 1.0 + 0.0j
        else:
            top = np.max(logmag[live])
            acc = np.sum(phases[live] * np.exp(logmag[live] - top))
            a_lm, a_ph = _split(complex(acc))
            ksum_lm, ksum_ph = top + a_lm, a_ph

        # prefactor (m! n! mu)^{-1/2} (nu/2mu)^{m/2} exp(...)
        w_lm, w_ph = _halfpow_arrays(nu / (2.0 * mu), np.array([m]))
        total_lm = (-0.5 * (lg[m] + lg[n] + math.log(mu))
                    + w_lm[0] + self.pref_lm + ksum_lm)
        total_ph = w_ph[0] * self.pref_ph * ksum_ph
        if total_lm == -math.inf:
            return 0.0 + 0.0j
        if total_lm > 700.0:
            raise OverflowError(
                f"overlap magnitude exp({total_lm:.1f}) exceeds double range "
                f"at (m, n) = ({m}, {n})"
            )
        return total_ph * math.exp(total_lm)


def _overlap_displaced(m: int, n: int, beta: complex) -> complex:
    """<m|D(beta)|n> via the associated-Laguerre closed form (s = 0 case)."""
    beta = complex(beta)
    if beta == 0.0:
        return (1.0 + 0.0j) if m == n else 0.0 + 0.0j
    b2 = abs(beta) ** 2
    if m >= n:
        lag = eval_genlaguerre(n, m - n, b2)
        base_lm, base_ph = _split(beta)
        diff = m - n
    else:
        lag = eval_genlaguerre(m, n - m, b2)
        base_lm, base_ph = _split(-np.conj(beta))
        diff = n - m
    lo, hi = min(m, n), max(m, n)
    logmag = 0.5 * (gammaln(lo + 1) - gammaln(hi + 1)) + diff * base_lm - b2 / 2.0
    sign_lag = 1.0 if lag >= 0 else -1.0
    if lag == 0.0:
        return 0.0 + 0.0j
    logmag += math.log(abs(lag))
    return sign_lag * base_ph ** diff * math.exp(logmag)


def overlap_sd(m: int, n: int, spec: SqueezeDisplaceSpec) -> complex:
    """Overlap <m| S(zeta) D(beta) |n> for a single index pair.

    At s = 0 the Hermite form is indeterminate (it divides by mu*nu) and the
    displaced-number closed form is used instead.
    """
    if m < 0 or n < 0 or int(m) != m or int(n) != n:
        raise DomainError(f"state indices must be non-negative integers, got ({m}, {n})")
    if spec.s < _S_SWITCH:
        return _overlap_displaced(m, n, spec.beta)
    return _SDKernel(spec, max(m, n)).entry(m, n)


@dataclass(frozen=True)
class TransitionMatrix:
    """Dense table T[m, n] = <m | n~(1)> for the single-photon sector.

    Rows index the bare phonon number m, columns the squeezed-displaced
    index n.  Entries are real for this model (theta = 0, real
    displacement); columns are orthonormal up to truncation.
    """

    n_max: int
    entries: np.ndarray = field(repr=False)
    params: ModelParams

    def column_norm_defect(self, n: int) -> float:
        """|sum_m T[m,n]^2 - 1| for column n."""
        return abs(float(np.sum(self.entries[:, n] ** 2)) - 1.0)

    @property
    def r1(self) -> float:
        return squeeze_param(1, self.params)

    @property
    def alpha1(self) -> float:
        return displace_param(1, self.params)


def transition_matrix(p: ModelParams, n_max: int) -> TransitionMatrix:
    """Build the n_max x n_max single-photon transition matrix.

    Entries are computed with the log-space Hermite kernel and stored as
    real numbers; any imaginary residue beyond 1e-12 aborts, since for this
    model the exact values are real.
    """
    if n_max < 1:
        raise DomainError(f"n_max must be >= 1, got {n_max}")
    spec = SqueezeDisplaceSpec(s=squeeze_param(1, p), theta=0.0,
                               beta=complex(displace_param(1, p), 0.0))
    out = np.empty((n_max, n_max))
    if spec.s < _S_SWITCH:
        for m in range(n_max):
            for n in range(n_max):
                v = _overlap_displaced(m, n, spec.beta)
                if abs(v.imag) > 1e-12:
                    raise AssertionError(
                        f"non-real overlap {v} at (m, n) = ({m}, {n})")
                out[m, n] = v.real
    else:
        kern = _SDKernel(spec, n_max - 1)
        for m in range(n_max):
            for n in range(n_max):
                v = kern.entry(m, n)
                if abs(v.imag) > 1e-12:
                    raise AssertionError(
                        f"non-real overlap {v} at (m, n) = ({m}, {n})")
                out[m, n] = v.real
    return TransitionMatrix(n_max=n_max, entries=out, params=p)
