"""Brute-force verification engine on truncated Fock spaces.

Nothing in this module reuses the closed forms being checked: overlaps come
from dense matrix exponentials, eigenvalues from direct diagonalization of
the coupled Hamiltonian, and bath dynamics from propagating the amplitude
equations of motion with a Chebyshev expansion of the exact propagator of
the discretized system.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import jv

from .errors import ConvergenceError, DomainError, NormalizationError, TruncationError
from .model import ModelParams, displace_param, squeeze_param
from .overlaps import TransitionMatrix, transition_matrix

__all__ = [
    "annihilation",
    "expm_normal",
    "squeeze_matrix",
    "displace_matrix",
    "oracle_overlap",
    "oracle_overlap_matrix",
    "diagonalize_sector",
    "BathDiscretization",
    "AmplitudeSnapshot",
    "evolve_amplitudes",
]


def annihilation(dim: int) -> np.ndarray:
    """Truncated annihilation operator, b[m, m+1] = sqrt(m+1)."""
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1)


def expm_normal(gen: np.ndarray) -> np.ndarray:
    """exp(gen) for an anti-Hermitian generator, via eigh of i*gen.

    Both the squeeze and displacement generators are anti-Hermitian up to
    truncation, so this is exact to rounding and cheaper than Pade at the
    sizes used here.
    """
    herm = 1j * gen
    w, v = np.linalg.eigh(herm)
    return (v * np.exp(-1j * w)) @ v.conj().T


def squeeze_matrix(zeta: complex, dim: int) -> np.ndarray:
    """S(zeta) = exp[(zeta b^2 - zeta* b'^2)/2] on a dim-level space."""
    b = annihilation(dim).astype(complex)
    bd = b.conj().T
    return expm_normal((zeta * (b @ b) - np.conj(zeta) * (bd @ bd)) / 2.0)


def displace_matrix(beta: complex, dim: int) -> np.ndarray:
    """D(beta) = exp(beta b' - beta* b) on a dim-level space."""
    b = annihilation(dim).astype(complex)
    bd = b.conj().T
    return expm_normal(beta * bd - np.conj(beta) * b)


def oracle_overlap_matrix(p: ModelParams, trunc: int) -> np.ndarray:
    """Full matrix <m| S(r1) D(alpha1) |n> by dense matrix exponentials."""
    r1 = squeeze_param(1, p)
    a1 = displace_param(1, p)
    return squeeze_matrix(r1, trunc) @ displace_matrix(a1, trunc)


def oracle_overlap(m: int, n: int, p: ModelParams, trunc: int = 200,
                   tol: float = 1e-10, max_trunc: int = 1600) -> complex:
    """Single overlap <m| S(r1) D(alpha1) |n>, certified by N-doubling.

    The truncation is doubled until the requested entry moves by less than
    ``tol``; failure to converge below ``max_trunc`` raises.
    """
    if not (m < trunc / 4 and n < trunc / 4):
        raise DomainError(
            f"indices ({m}, {n}) too close to truncation {trunc}; "
            "need m, n < trunc/4")
    val = oracle_overlap_matrix(p, trunc)[m, n]
    while True:
        trunc *= 2
        val2 = oracle_overlap_matrix(p, trunc)[m, n]
        if abs(val2 - val) < tol:
            return val2
        if trunc >= max_trunc:
            raise ConvergenceError(
                f"overlap ({m}, {n}) still moving by {abs(val2 - val):.2e} "
                f"at truncation {trunc}")
        val = val2


def diagonalize_sector(n_photon: int, p: ModelParams, trunc: int) -> np.ndarray:
    """Ascending eigenvalues of the n-photon sector Hamiltonian.

    H_n = omega_m b'b + g1 n (b' + b) + g2 n (b' + b)^2 as a dense
    symmetric matrix on ``trunc`` phonon levels.
    """
    if n_photon not in (0, 1) and p.g2 < 0:
        raise DomainError("negative g2 restricted to n <= 1 sectors")
    b = annihilation(trunc)
    x = b + b.T
    h = (p.omega_m * np.diag(np.arange(trunc, dtype=float))
         + p.g1 * n_photon * x
         + p.g2 * n_photon * (x @ x))
    return np.linalg.eigvalsh(h)


@dataclass(frozen=True)
class BathDiscretization:
    """Uniform flat discretization of the cavity's vacuum bath.

    Mode couplings satisfy xi_k^2 = kappa * dDelta / (2 pi), which makes the
    discrete density of modes 1/dDelta reproduce the continuum decay rate.
    """

    n_modes: int
    delta_min: float
    delta_max: float
    detunings: np.ndarray = field(repr=False)
    couplings: np.ndarray = field(repr=False)

    @property
    def spacing(self) -> float:
        return (self.delta_max - self.delta_min) / (self.n_modes - 1)

    @classmethod
    def flat(cls, p: ModelParams, delta_min: float, delta_max: float,
             n_modes: int) -> "BathDiscretization":
        if n_modes < 2 or delta_max <= delta_min:
            raise DomainError("need n_modes >= 2 and delta_max > delta_min")
        detunings = np.linspace(delta_min, delta_max, n_modes)
        d_delta = detunings[1] - detunings[0]
        xi = math.sqrt(p.kappa * d_delta / (2.0 * math.pi))
        return cls(n_modes=n_modes, delta_min=delta_min, delta_max=delta_max,
                   detunings=detunings,
                   couplings=np.full(n_modes, xi))


@dataclass
class AmplitudeSnapshot:
    """State of the single-photon amplitude system at one instant.

    ``a[m]`` multiplies |1 photon, m~(1)>, ``b[m, k]`` multiplies
    |0 photons, m phonons, one photon in bath mode k>.
    """

    t: float
    a: np.ndarray
    b: np.ndarray
    bath: BathDiscretization
    params: ModelParams
    norm_history: list[tuple[float, float]] = field(default_factory=list)

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.a) ** 2) + np.sum(np.abs(self.b) ** 2))

    def bath_spectrum(self, bin_modes: int = 1) -> tuple[np.ndarray, np.ndarray]:
        """Bath spectral density from mode populations.

        Populations are divided by the mode spacing (the discrete density of
        modes); with ``bin_modes`` > 1 adjacent modes are aggregated, which
        averages out the finite-time interference ripple.
        """
        pk = np.sum(np.abs(self.b) ** 2, axis=0)
        dens = pk / self.bath.spacing
        if bin_modes <= 1:
            return self.bath.detunings.copy(), dens
        k = (len(pk) // bin_modes) * bin_modes
        centers = self.bath.detunings[:k].reshape(-1, bin_modes).mean(axis=1)
        vals = dens[:k].reshape(-1, bin_modes).mean(axis=1)
        return centers, vals


def _hamiltonian_pieces(p: ModelParams, bath: BathDiscretization,
                        trans: TransitionMatrix):
    n_max = trans.n_max
    r1 = squeeze_param(1, p)
    m_idx = np.arange(n_max, dtype=float)
    # the amplitude equations of motion are written in the dressed basis, so
    # their diagonal IS the sector eigenvalue; what this propagation checks
    # independently is the long-time amplitude formula, not the eigenvalues
    # (those have their own oracle in diagonalize_sector)
    e1 = (p.g2 * math.exp(-2.0 * r1) + p.omega_m * math.sinh(r1) ** 2
          + p.omega_m * math.exp(2.0 * r1) * m_idx
          - (p.g1 ** 2) * math.exp(-4.0 * r1) / p.omega_m)
    e0 = p.omega_m * m_idx
    return e1, e0


def _make_matvec(e1, e0, bath: BathDiscretization, t_mat: np.ndarray):
    xi = bath.couplings
    deltas = bath.detunings
    diag_b = e0[:, None] + deltas[None, :]

    def matvec(a, b):
        ya = e1 * a + t_mat.T @ (b @ xi)
        yb = diag_b * b + np.outer(t_mat @ a, xi)
        return ya, yb

    return matvec


def _chebyshev_step(matvec, a, b, dt, center, half_width, tol=1e-12):
    """One segment of exp(-i H dt) applied with a Chebyshev expansion.

    Requires the spectrum of H inside [center - half_width, center +
    half_width]; the Bessel coefficient tail is truncated at ``tol``.
    """
    x = half_width * dt
    n_terms = int(x + 12.0 * x ** (1.0 / 3.0) + 30)
    orders = np.arange(n_terms + 1)
    bess = jv(orders, x)
    coef = np.where(orders == 0, 1.0, 2.0) * (-1j) ** orders * bess
    keep = np.nonzero(np.abs(bess) > tol)[0]
    last = int(keep[-1]) if len(keep) else n_terms

    inv_w = 1.0 / half_width

    def scaled(av, bv):
        ya, yb = matvec(av, bv)
        return (ya - center * av) * inv_w, (yb - center * bv) * inv_w

    pa, pb = a, b                      # T_0 v
    ca, cb = scaled(a, b)              # T_1 v
    out_a = coef[0] * pa + coef[1] * ca
    out_b = coef[0] * pb + coef[1] * cb
    for j in range(2, last + 1):
        sa, sb = scaled(ca, cb)
        na = 2.0 * sa - pa
        nb = 2.0 * sb - pb
        pa, pb, ca, cb = ca, cb, na, nb
        out_a += coef[j] * ca
        out_b += coef[j] * cb
    phase = np.exp(-1j * center * dt)
    return phase * out_a, phase * out_b


def evolve_amplitudes(p: ModelParams, bath: BathDiscretization,
                      init_amplitudes: np.ndarray, t_final: float,
                      n_max: int = 40, photon_in_cavity: bool = True,
                      bath_init: np.ndarray | None = None,
                      trans: TransitionMatrix | None = None,
                      n_checkpoints: int = 8,
                      norm_tol: float = 1e-5) -> AmplitudeSnapshot:
    """Propagate the coupled amplitude equations to ``t_final``.

    The system is linear with a time-independent Hermitian generator, so the
    exact propagator is applied in Chebyshev-expanded segments; the expansion
    is converged to machine precision whenever the spectral bounds hold,
    which the norm-conservation check enforces.

    Parameters
    ----------
    init_amplitudes : complex array
        Amplitudes C_m0 of the initial mechanical state over number states.
    photon_in_cavity : bool
        True for the emission configuration (photon starts inside, bath
        empty).  False places the photon in the bath; ``bath_init`` must
        then give the (n_modes,) wavepacket amplitudes over bath modes.
    """
    if t_final < 0:
        raise DomainError("t_final must be >= 0")
    if trans is None:
        trans = transition_matrix(p, n_max)
    elif trans.n_max != n_max:
        raise DomainError("transition matrix size does not match n_max")
    t_mat = trans.entries
    c0 = np.asarray(init_amplitudes, dtype=complex)
    if len(c0) > n_max:
        raise DomainError("initial state longer than phonon truncation")
    c_full = np.zeros(n_max, dtype=complex)
    c_full[:len(c0)] = c0

    a = np.zeros(n_max, dtype=complex)
    b = np.zeros((n_max, bath.n_modes), dtype=complex)
    if photon_in_cavity:
        # A_m(0) = <m~(1)|psi_0> = sum_m0 C_m0 T[m0, m]
        a[:] = t_mat.T @ c_full
    else:
        if bath_init is None:
            raise DomainError("bath_init required when the photon starts outside")
        wk = np.asarray(bath_init, dtype=complex)
        if wk.shape != (bath.n_modes,):
            raise DomainError("bath_init must have one amplitude per bath mode")
        b[:] = np.outer(c_full, wk)
    nrm = math.sqrt(float(np.sum(np.abs(a) ** 2) + np.sum(np.abs(b) ** 2)))
    if abs(nrm - 1.0) > 1e-6:
        raise NormalizationError(f"initial amplitude norm {nrm} is not 1")
    a /= nrm
    b /= nrm

    snapshot = AmplitudeSnapshot(t=0.0, a=a, b=b, bath=bath, params=p)
    snapshot.norm_history.append((0.0, snapshot.norm))
    if t_final == 0.0:
        return snapshot

    e1, e0 = _hamiltonian_pieces(p, bath, trans)
    matvec = _make_matvec(e1, e0, bath, t_mat)

    # rigorous-enough spectral bounds: diagonal extremes plus the coupling
    # operator norm, with margin
    v_norm = float(np.linalg.norm(bath.couplings)) * float(np.linalg.norm(t_mat, 2))
    lo = min(float(np.min(e1)), float(np.min(e0)) + bath.delta_min) - v_norm - 0.5
    hi = max(float(np.max(e1)), float(np.max(e0)) + bath.delta_max) + v_norm + 0.5
    center = 0.5 * (hi + lo)
    half_width = 0.5 * (hi - lo)

    dt = t_final / max(1, n_checkpoints)
    t = 0.0
    for _ in range(max(1, n_checkpoints)):
        a, b = _chebyshev_step(matvec, a, b, dt, center, half_width)
        t += dt
        nrm2 = float(np.sum(np.abs(a) ** 2) + np.sum(np.abs(b) ** 2))
        snapshot.norm_history.append((t, nrm2))
        if abs(nrm2 - 1.0) > norm_tol:
            raise NormalizationError(
                f"norm drifted to {nrm2} at t = {t}; propagation unreliable")

    if n_max >= 10:
        k = max(2, n_max // 10)
        tail = float(np.sum(np.abs(a[-k:]) ** 2) + np.sum(np.abs(b[-k:, :]) ** 2))
        if tail > 1e-8:
            warnings.warn(
                f"population {tail:.2e} in the top phonon levels; increase n_max",
                stacklevel=2)

    snapshot.t = t
    snapshot.a = a
    snapshot.b = b
    return snapshot


def lorentzian_bath_init(bath: BathDiscretization, delta0: float,
                         epsilon: float, renormalize: bool = True) -> np.ndarray:
    """Discretized Lorentzian wavepacket amplitudes over the bath modes.

    b_k = sqrt(eps * dDelta / pi) / (Delta_k - delta0 + i eps).  The window
    truncation removes some tail mass, so by default the vector is
    renormalized to unit probability.
    """
    if epsilon <= 0:
        raise DomainError("wavepacket width must be positive")
    d = bath.spacing
    amp = math.sqrt(epsilon * d / math.pi) / (bath.detunings - delta0 + 1j * epsilon)
    if renormalize:
        amp = amp / math.sqrt(float(np.sum(np.abs(amp) ** 2)))
    return amp
