"""Dynamical phases and the transport coefficient.

The single-band propagator is generated by two scalar functions of time,

    eta(t) = integral_0^t f(tau) dtau              (site-phase ramp)
    chi(t) = g * integral_0^t e^{-i eta(tau)} dtau (hopping phase)

and every observable follows from them.  chi splits into a linear part
gamma*t/2 and a bounded oscillating part; the complex coefficient
gamma = 2*chi(T)/T is nonzero only for resonant driving and sets the
quasienergy band eps(kappa) = |gamma| cos(kappa*d + arg gamma).

For mono-, bi- and polychromatic profiles chi is evaluated from Bessel
series (the default path); a deterministic panel quadrature serves as the
fallback for undeclared arithmetic and as an independent oracle.  Both
eta(0) = 0 and chi(0) = 0 hold exactly: closed forms are definite
integrals from 0, including the phase-shifted two-color term.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .model import (
    Bichromatic,
    DriveProfile,
    Flipped,
    Fourier,
    Incommensurable,
    Mono,
    ResonanceClass,
    Static,
    period,
    solve_diophantine,
)
from .specialfn import (
    bessel_j,
    bessel_jn_all,
    bessel_tail_index,
    gen_bessel_2d,
    inf_var_bessel,
    inf_var_bessel_table,
    _signed_orders,
)


class QuadratureError(RuntimeError):
    """Quadrature failed to reach the requested tolerance."""

    def __init__(self, message: str, estimate: float):
        super().__init__(message)
        self.estimate = estimate


class MissingResonanceError(ValueError):
    """The profile carries no declared frequency arithmetic."""


@dataclass(frozen=True)
class PhasePair:
    """eta and chi at one time; chi = |chi| e^{-i phi}."""

    eta: float
    chi: complex
    t: float

    @property
    def abs_chi(self) -> float:
        return abs(self.chi)

    @property
    def phi(self) -> float:
        return -cmath.phase(self.chi)


@dataclass(frozen=True)
class TransportCoefficient:
    """gamma = 2 chi(T)/T plus the derived band quantities."""

    gamma: complex
    period: Optional[float]
    resonant: bool

    @property
    def abs_gamma(self) -> float:
        return abs(self.gamma)

    @property
    def arg_gamma(self) -> float:
        return cmath.phase(self.gamma)


# ---------------------------------------------------------------------------
# field and eta closed forms (vectorized over t)
# ---------------------------------------------------------------------------


def field_value(profile: DriveProfile, t):
    """Drive field f(t); accepts scalars or arrays."""
    t = np.asarray(t, dtype=float)
    if isinstance(profile, Static):
        out = np.full(t.shape, profile.f0)
    elif isinstance(profile, Mono):
        out = profile.f0 - profile.f1 * np.cos(profile.omega1 * t)
    elif isinstance(profile, Bichromatic):
        out = (
            profile.f0
            - profile.f1 * np.cos(profile.omega1 * t)
            - profile.f2 * np.cos(profile.omega2 * t + profile.delta)
        )
    elif isinstance(profile, Flipped):
        tau = np.mod(t, profile.T)
        out = np.where(tau < profile.a * profile.T, profile.f1, profile.f2)
    elif isinstance(profile, Fourier):
        out = np.full(t.shape, profile.f0)
        for m, fm in enumerate(profile.amplitudes, start=1):
            out = out - fm * np.cos(m * profile.omega * t)
    else:
        raise TypeError(f"not a drive profile: {profile!r}")
    return out if out.shape else float(out)


def eta(profile: DriveProfile, t):
    """Accumulated site phase, the exact antiderivative of f with eta(0)=0."""
    t = np.asarray(t, dtype=float)
    if isinstance(profile, Static):
        out = profile.f0 * t
    elif isinstance(profile, Mono):
        u = profile.f1 / profile.omega1
        out = profile.f0 * t - u * np.sin(profile.omega1 * t)
    elif isinstance(profile, Bichromatic):
        u = profile.f1 / profile.omega1
        v = profile.f2 / profile.omega2
        out = (
            profile.f0 * t
            - u * np.sin(profile.omega1 * t)
            - v * (np.sin(profile.omega2 * t + profile.delta) - math.sin(profile.delta))
        )
    elif isinstance(profile, Flipped):
        f1, f2, a, T = profile.f1, profile.f2, profile.a, profile.T
        eta_T = profile.f0 * T
        k = np.floor(t / T)
        tau = t - k * T
        seg = np.where(
            tau <= a * T,
            f1 * tau,
            f1 * a * T + f2 * (tau - a * T),
        )
        out = k * eta_T + seg
    elif isinstance(profile, Fourier):
        out = profile.f0 * t
        for m, fm in enumerate(profile.amplitudes, start=1):
            out = out - fm / (m * profile.omega) * np.sin(m * profile.omega * t)
    else:
        raise TypeError(f"not a drive profile: {profile!r}")
    return out if out.shape else float(out)


# ---------------------------------------------------------------------------
# Bessel-series data for the periodic profiles
# ---------------------------------------------------------------------------


def _declared(profile) -> bool:
    """Does the profile declare enough arithmetic for the series route?"""
    if isinstance(profile, Mono):
        return profile.ratio_b1 is not None
    if isinstance(profile, Bichromatic):
        return profile.ratio_21 is not None and profile.ratio_b1 is not None
    if isinstance(profile, Fourier):
        return profile.ratio_b is not None
    return False


def _guard_nonzero(omegas: np.ndarray, profile) -> None:
    if np.any(omegas == 0.0):
        raise ValueError(
            "a declared-incommensurable ratio produced an exactly resonant "
            f"frequency; the declaration on {profile!r} is inconsistent"
        )


@lru_cache(maxsize=128)
def _series_data(profile):
    """Per-profile series coefficients at unit coupling.

    Returns (gamma1, osc_coef, osc_omega) such that

        chi(t) = g * (gamma1*t/2 + sum_j osc_coef[j] *
                      e^{-i w_j t/2} sin(w_j t/2) / w_j).

    Membership of the resonant set is decided by the declared integer
    arithmetic, never by comparing floats; near-resonant terms stay in the
    oscillating sum no matter how small their frequency.
    """
    if isinstance(profile, Mono):
        u = profile.f1 / profile.omega1
        ku = bessel_tail_index(u)
        mus = np.arange(-ku, ku + 1)
        coef = _signed_orders(mus, bessel_jn_all(ku, u))
        ratio = profile.ratio_b1
        if isinstance(ratio, Fraction):
            num = ratio.numerator - ratio.denominator * mus
            omegas = profile.omega1 * num / ratio.denominator
            res = num == 0
        else:
            omegas = profile.f0 - mus * profile.omega1
            _guard_nonzero(omegas, profile)
            res = np.zeros(mus.shape, dtype=bool)
        gamma1 = 2.0 * complex(np.sum(coef[res]))
        keep = ~res & (np.abs(coef) > 1e-18)
        return gamma1, 2.0 * coef[keep].astype(complex), omegas[keep]

    if isinstance(profile, Bichromatic):
        u = profile.f1 / profile.omega1
        v = profile.f2 / profile.omega2
        ku = bessel_tail_index(u)
        kv = bessel_tail_index(v)
        mus = np.arange(-ku, ku + 1)
        nus = np.arange(-kv, kv + 1)
        ju = _signed_orders(mus, bessel_jn_all(ku, u))
        jv_ = _signed_orders(nus, bessel_jn_all(kv, v))
        phase = np.exp(1j * nus * profile.delta)
        # definite integral from 0 leaves a constant phase for delta != 0
        const = cmath.exp(-1j * v * math.sin(profile.delta))
        coef = const * np.outer(ju, jv_ * phase)
        r21, rb1 = profile.ratio_21, profile.ratio_b1
        if isinstance(r21, Fraction) and isinstance(rb1, Fraction):
            p, q = r21.denominator, r21.numerator
            combo = p * mus[:, None] + q * nus[None, :]
            num = p * rb1.numerator - rb1.denominator * combo
            omegas = profile.omega1 * num / (p * rb1.denominator)
            res = num == 0
        else:
            omegas = (
                profile.f0
                - mus[:, None] * profile.omega1
                - nus[None, :] * profile.omega2
            )
            _guard_nonzero(omegas, profile)
            res = np.zeros(omegas.shape, dtype=bool)
        gamma1 = 2.0 * complex(np.sum(coef[res]))
        keep = ~res & (np.abs(coef) > 1e-18)
        return gamma1, 2.0 * coef[keep], omegas[keep]

    if isinstance(profile, Fourier):
        offset, table = inf_var_bessel_table(profile.betas)
        nus = offset + np.arange(table.size)
        ratio = profile.ratio_b
        if isinstance(ratio, Fraction):
            num = ratio.numerator - ratio.denominator * nus
            omegas = profile.omega * num / ratio.denominator
            res = num == 0
        else:
            omegas = profile.f0 - nus * profile.omega
            _guard_nonzero(omegas, profile)
            res = np.zeros(nus.shape, dtype=bool)
        gamma1 = 2.0 * complex(np.sum(table[res]))
        keep = ~res & (np.abs(table) > 1e-18)
        return gamma1, 2.0 * table[keep].astype(complex), omegas[keep]

    raise TypeError(f"no series form for {profile!r}")


def _series_chi(profile, t, g: float):
    gamma1, coef, omegas = _series_data(profile)
    t = np.asarray(t, dtype=float)
    tt = t[..., None]
    osc = np.sum(
        coef * np.exp(-0.5j * omegas * tt) * np.sin(0.5 * omegas * tt) / omegas,
        axis=-1,
    )
    out = g * (0.5 * gamma1 * t + osc)
    return out if out.shape else complex(out)


# ---------------------------------------------------------------------------
# flipped-field closed form
# ---------------------------------------------------------------------------


def _flipped_segment(f: float, tau, g: float):
    """g * integral_0^tau e^{-i f s} ds, elementwise."""
    tau = np.asarray(tau, dtype=float)
    if f == 0.0:
        return g * tau.astype(complex)
    return (g / (1j * f)) * (1.0 - np.exp(-1j * f * tau))


def _flipped_chi_period(profile: Flipped, g: float) -> complex:
    aT = profile.a * profile.T
    bT = profile.T - aT
    seg1 = complex(_flipped_segment(profile.f1, aT, g))
    phase1 = cmath.exp(-1j * profile.f1 * aT)
    seg2 = phase1 * complex(_flipped_segment(profile.f2, bT, g))
    return seg1 + seg2


def _flipped_chi(profile: Flipped, t, g: float):
    f1, f2, a, T = profile.f1, profile.f2, profile.a, profile.T
    t = np.asarray(t, dtype=float)
    k = np.floor(t / T)
    tau = t - k * T
    aT = a * T
    seg1_full = complex(_flipped_segment(f1, aT, g))
    phase1 = cmath.exp(-1j * f1 * aT)
    chi_tau = np.where(
        tau <= aT,
        _flipped_segment(f1, np.minimum(tau, aT), g),
        seg1_full + phase1 * _flipped_segment(f2, np.maximum(tau - aT, 0.0), g),
    )
    chi_T = _flipped_chi_period(profile, g)
    if profile.bloch_cycles is not None:
        # declared resonance: e^{-i eta_T} = 1 exactly
        out = chi_tau + k * chi_T
    else:
        ephase = cmath.exp(-1j * profile.f0 * T)
        if ephase == 1.0:
            geom = k.astype(complex)
        else:
            geom = (1.0 - ephase**k) / (1.0 - ephase)
        out = ephase**k * chi_tau + chi_T * geom
    return out if out.shape else complex(out)


# ---------------------------------------------------------------------------
# quadrature fallback / oracle
# ---------------------------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)


def _max_field(profile) -> float:
    if isinstance(profile, Static):
        return abs(profile.f0)
    if isinstance(profile, Mono):
        return abs(profile.f0) + abs(profile.f1)
    if isinstance(profile, Bichromatic):
        return abs(profile.f0) + abs(profile.f1) + abs(profile.f2)
    if isinstance(profile, Flipped):
        return max(abs(profile.f1), abs(profile.f2))
    if isinstance(profile, Fourier):
        return abs(profile.f0) + sum(abs(a) for a in profile.amplitudes)
    raise TypeError(f"not a drive profile: {profile!r}")


def _panel_edges(profile, t: float, n_panels: int) -> np.ndarray:
    edges = np.linspace(0.0, t, n_panels + 1)
    if isinstance(profile, Flipped):
        # keep the field kinks on panel boundaries
        T, aT = profile.T, profile.a * profile.T
        kinks = []
        k = 0
        while k * T < abs(t):
            for cand in (k * T + aT, (k + 1) * T):
                if 0.0 < cand < abs(t):
                    kinks.append(math.copysign(cand, t))
            k += 1
        edges = np.unique(np.concatenate([edges, np.asarray(kinks)]))
    return edges


def _gl_integral(profile, edges: np.ndarray, g: float) -> complex:
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = np.exp(-1j * eta(profile, nodes))
    return g * complex(np.sum(half[:, None] * _GL_WEIGHTS[None, :] * vals))


def quadrature_chi(
    profile: DriveProfile, t: float, g: float = 1.0, tol: float = 1e-10
) -> complex:
    """Adaptive panel quadrature of g * e^{-i eta}; series-independent.

    Panel count keeps at least 20 panels per shortest field oscillation;
    the result is accepted only if doubling the panel count moves it by
    less than ``tol``.
    """
    t = float(t)
    if t == 0.0:
        return 0.0 + 0.0j
    rate = _max_field(profile)
    n1 = max(16, int(math.ceil(20.0 * rate * abs(t) / (2.0 * math.pi))))
    coarse = _gl_integral(profile, _panel_edges(profile, t, n1), g)
    fine = _gl_integral(profile, _panel_edges(profile, t, 2 * n1), g)
    err = abs(fine - coarse)
    if err > tol:
        extra = _gl_integral(profile, _panel_edges(profile, t, 4 * n1), g)
        err = abs(extra - fine)
        fine = extra
        if err > tol:
            raise QuadratureError(
                f"chi quadrature did not converge: error estimate {err:.3e} "
                f"exceeds tol {tol:.3e}",
                estimate=err,
            )
    return fine


# ---------------------------------------------------------------------------
# chi and gamma
# ---------------------------------------------------------------------------


def chi_values(profile: DriveProfile, ts, g: float = 1.0):
    """chi at an array of times (closed form or series; quadrature last)."""
    ts = np.asarray(ts, dtype=float)
    if isinstance(profile, Static):
        f0 = profile.f0
        if f0 == 0.0:
            return g * ts.astype(complex)
        return (g / (1j * f0)) * (1.0 - np.exp(-1j * f0 * ts))
    if isinstance(profile, Flipped):
        return _flipped_chi(profile, ts, g)
    if _declared(profile):
        return _series_chi(profile, ts, g)
    flat = np.atleast_1d(ts)
    out = np.array([quadrature_chi(profile, t, g) for t in flat])
    return out.reshape(ts.shape) if ts.shape else complex(out[0])


def chi(profile: DriveProfile, t: float, g: float = 1.0) -> PhasePair:
    """eta and chi at time t."""
    t = float(t)
    return PhasePair(eta=float(eta(profile, t)), chi=complex(chi_values(profile, t, g)), t=t)


def _resonance_for(profile: Bichromatic, resonance: Optional[ResonanceClass]):
    """Validate or derive the resonance class of a two-color profile."""
    r21, rb1 = profile.ratio_21, profile.ratio_b1
    if resonance is not None:
        if isinstance(r21, Fraction):
            if (resonance.p, resonance.q) != (r21.denominator, r21.numerator):
                raise ValueError(
                    f"resonance (p={resonance.p}, q={resonance.q}) does not match "
                    f"declared omega2/omega1 = {r21}"
                )
        return resonance
    if r21 is None or rb1 is None:
        raise MissingResonanceError(
            "two-color transport needs declared frequency ratios "
            "(or an explicit ResonanceClass)"
        )
    if isinstance(r21, Incommensurable) or isinstance(rb1, Incommensurable):
        return None
    p, q = r21.denominator, r21.numerator
    n_frac = rb1 * p
    if n_frac.denominator != 1:
        return None
    return solve_diophantine(p, q, int(n_frac))


def gamma(
    profile: DriveProfile,
    resonance: Optional[ResonanceClass] = None,
    g: float = 1.0,
) -> TransportCoefficient:
    """Transport coefficient gamma = 2 chi(T)/T from the closed forms.

    Non-resonant profiles give gamma = 0 exactly; resonance is read from
    the declared arithmetic (or the supplied class), never from floats.
    """
    T = period(profile)
    if isinstance(profile, Static):
        if profile.f0 == 0.0:
            return TransportCoefficient(gamma=2.0 * g, period=None, resonant=True)
        return TransportCoefficient(
            gamma=0.0j, period=2.0 * math.pi / abs(profile.f0), resonant=False
        )
    if isinstance(profile, Mono):
        ratio = profile.ratio_b1
        if ratio is None:
            raise MissingResonanceError(
                "monochromatic transport needs a declared omega_B/omega1"
            )
        if isinstance(ratio, Fraction) and ratio.denominator == 1:
            mu = int(ratio)
            value = 2.0 * g * bessel_j(mu, profile.f1 / profile.omega1)
            return TransportCoefficient(gamma=complex(value), period=T, resonant=True)
        return TransportCoefficient(gamma=0.0j, period=T, resonant=False)
    if isinstance(profile, Bichromatic):
        rc = _resonance_for(profile, resonance)
        if rc is None or not rc.resonant:
            return TransportCoefficient(gamma=0.0j, period=T, resonant=False)
        if T is None:
            T = 2.0 * math.pi * rc.p / profile.omega1
        z = cmath.exp(1j * rc.p * profile.delta)
        value = (
            2.0
            * g
            * cmath.exp(-1j * profile.v * math.sin(profile.delta))
            * cmath.exp(1j * rc.N * profile.delta)
            * gen_bessel_2d(rc, profile.u, profile.v, z)
        )
        return TransportCoefficient(gamma=value, period=T, resonant=True)
    if isinstance(profile, Flipped):
        if profile.bloch_cycles is None:
            return TransportCoefficient(gamma=0.0j, period=T, resonant=False)
        value = 2.0 * _flipped_chi_period(profile, g) / profile.T
        return TransportCoefficient(gamma=value, period=T, resonant=True)
    if isinstance(profile, Fourier):
        ratio = profile.ratio_b
        if ratio is None:
            raise MissingResonanceError(
                "polychromatic transport needs a declared omega_B/omega"
            )
        if isinstance(ratio, Fraction) and ratio.denominator == 1:
            value = 2.0 * g * inf_var_bessel(int(ratio), profile.betas)
            return TransportCoefficient(gamma=complex(value), period=T, resonant=True)
        return TransportCoefficient(gamma=0.0j, period=T, resonant=False)
    raise TypeError(f"not a drive profile: {profile!r}")


def quasienergy(coefficient: TransportCoefficient, kappa, d: float = 1.0):
    """Quasienergy band eps(kappa) = |gamma| cos(kappa d + arg gamma)."""
    kappa = np.asarray(kappa, dtype=float)
    out = abs(coefficient.gamma) * np.cos(kappa * d + coefficient.arg_gamma)
    return out if out.shape else float(out)


def transport_velocity(coefficient: TransportCoefficient, kappa, d: float = 1.0):
    """Mean drift velocity -|gamma| sin(kappa d + arg gamma) = eps'(kappa)/d."""
    kappa = np.asarray(kappa, dtype=float)
    out = -abs(coefficient.gamma) * np.sin(kappa * d + coefficient.arg_gamma)
    return out if out.shape else float(out)


# ---------------------------------------------------------------------------
# localization zeros
# ---------------------------------------------------------------------------


def bichromatic_gamma_slice(
    p: int, q: int, n: int, v: float, g: float = 1.0
) -> Callable[[float], float]:
    """Real gamma(u) for a zero-phase two-color drive at fixed v.

    With delta = 0 the coefficient is real, and its sign gives the
    transport direction, so localization points are sign-change zeros.
    """
    rc = solve_diophantine(p, q, n)
    if not rc.resonant:
        raise ValueError(f"(p={p}, q={q}, n={n}) admits no resonant drive")

    def gamma_u(u: float) -> float:
        return 2.0 * g * gen_bessel_2d(rc, u, v, 1.0).real

    return gamma_u


def find_localization_zeros(
    fn: Callable[[float], float],
    u_min: float,
    u_max: float,
    tol: float = 1e-6,
    samples: Optional[int] = None,
) -> list:
    """All sign-change zeros of a real scan function on [u_min, u_max].

    The interval is sampled densely (default step <= 0.05), each bracket is
    bisected well past ``tol`` so the returned points sit on the zero to
    float resolution.
    """
    if not (math.isfinite(u_min) and math.isfinite(u_max)) or u_max <= u_min:
        raise ValueError("scan range must be a finite nonempty interval")
    if samples is None:
        samples = max(41, int(math.ceil((u_max - u_min) / 0.05)) + 1)
    us = np.linspace(u_min, u_max, samples)
    vals = np.array([fn(u) for u in us])
    zeros = []
    for i in range(samples - 1):
        a, b = us[i], us[i + 1]
        fa, fb = vals[i], vals[i + 1]
        if fa == 0.0:
            if not zeros or abs(zeros[-1] - a) > tol:
                zeros.append(float(a))
            continue
        if fa * fb >= 0.0:
            continue
        width_goal = min(tol, 1e-12 * max(1.0, abs(a), abs(b)))
        for _ in range(200):
            m = 0.5 * (a + b)
            fm = fn(m)
            if fm == 0.0:
                a = b = m
                break
            if fa * fm < 0.0:
                b = m
            else:
                a, fa = m, fm
            if b - a < width_goal:
                break
        zeros.append(0.5 * (a + b))
    if vals[-1] == 0.0 and (not zeros or abs(zeros[-1] - us[-1]) > tol):
        zeros.append(float(us[-1]))
    return zeros


# ---------------------------------------------------------------------------
# support for window sizing in the lattice propagator
# ---------------------------------------------------------------------------


def chi_max_bound(profile: DriveProfile, t: float, g: float = 1.0) -> float:
    """Cheap upper bound for max_{0<=s<=t} |chi(s)|."""
    t = abs(float(t))
    if isinstance(profile, Static):
        if profile.f0 == 0.0:
            return abs(g) * t
        return 2.0 * abs(g / profile.f0)
    if isinstance(profile, Flipped):
        T = profile.T
        tau = np.linspace(0.0, min(t, T), 257)
        m0 = float(np.max(np.abs(_flipped_chi(profile, tau, g))))
        reps = math.ceil(t / T)
        return m0 + reps * abs(_flipped_chi_period(profile, g))
    if _declared(profile):
        gamma1, coef, omegas = _series_data(profile)
        osc = float(np.sum(np.abs(coef) / np.abs(omegas)))
        return abs(g) * (0.5 * abs(gamma1) * t + osc)
    return abs(g) * t
