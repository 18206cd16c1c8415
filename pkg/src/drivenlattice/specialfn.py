"""Bessel functions used by the transport theory.

Three kinds appear: ordinary J_nu, the two-dimensional one-parameter sums

    J(u, v; z) = sum_k J_{M-q k}(u) * J_{N+p k}(v) * z^k,   |z| = 1,

indexed by a resonance class (p, q, n) with particular solution (M, N),
and the many-variable coefficients J_nu({beta_m}) of the expansion

    exp(i * sum_m beta_m sin(m*theta)) = sum_nu J_nu({beta_m}) e^{i nu theta}.

All sums are truncated deterministically from the super-exponential decay
of J_nu(x) for nu > |x| (tail bound 1e-16 per term), so results are
reproducible and testable.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .model import ResonanceClass

_TAIL_TOL = 1e-16


def bessel_j(nu: int, x: float) -> float:
    """Ordinary Bessel function of the first kind, integer order.

    Uses the symmetry J_{-nu}(x) = (-1)^nu J_nu(x); absolute error below
    1e-13 for |x| <= 200.
    """
    nu = int(nu)
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("argument must be finite")
    a = abs(nu)
    value = float(kernels.jn_array(a, x)[a])
    if nu < 0 and nu % 2 != 0:
        value = -value
    return value


def bessel_jn_all(nmax: int, x: float) -> np.ndarray:
    """J_0(x)..J_nmax(x), one recurrence pass."""
    return kernels.jn_array(nmax, x)


def bessel_tail_index(x: float, tol: float = _TAIL_TOL) -> int:
    """Smallest order beyond which |J_nu(x)| stays below ``tol``.

    From the large-order estimate J_nu(x) ~ (2 pi nu)^(-1/2) (e x / 2 nu)^nu,
    iterated upward; intentionally a slight overestimate.
    """
    ax = abs(float(x))
    if ax == 0.0:
        return 1
    log_tol = math.log(tol)
    nu = max(2, int(math.ceil(ax)) + 2)
    while True:
        log_est = -0.5 * math.log(2.0 * math.pi * nu) + nu * (
            1.0 + math.log(ax / 2.0) - math.log(nu)
        )
        if log_est < log_tol:
            return nu
        nu += max(1, nu // 16)


def _signed_orders(orders: np.ndarray, table: np.ndarray) -> np.ndarray:
    """Look up J_order from a table of J_0..J_nmax using the parity rule."""
    a = np.abs(orders)
    vals = table[a]
    flip = (orders < 0) & (a % 2 == 1)
    return np.where(flip, -vals, vals)


@dataclass(frozen=True)
class BesselSum2D:
    """Prepared bilinear Bessel sum for one resonance class and arguments.

    ``k_min``/``k_max`` bound the retained terms; every dropped term has
    |J_{M-qk}(u) J_{N+pk}(v)| < 1e-16 because one factor is already below
    the tail bound on its own.
    """

    p: int
    q: int
    n: int
    M: int
    N: int
    u: float
    v: float
    z: complex
    k_min: int
    k_max: int

    @classmethod
    def prepare(
        cls, resonance: ResonanceClass, u: float, v: float, z: complex = 1.0
    ) -> "BesselSum2D":
        if not resonance.resonant:
            raise ValueError("non-resonant class: the bilinear sum is undefined")
        z = complex(z)
        if abs(abs(z) - 1.0) > 1e-12:
            raise ValueError(f"z must lie on the unit circle, got |z|={abs(z)!r}")
        p, q, M, N = resonance.p, resonance.q, resonance.M, resonance.N
        ku = bessel_tail_index(u)
        kv = bessel_tail_index(v)
        # |M - q k| <= ku  intersected with  |N + p k| <= kv
        lo = max(math.ceil((M - ku) / q), math.ceil((-N - kv) / p))
        hi = min(math.floor((M + ku) / q), math.floor((-N + kv) / p))
        return cls(
            p=p, q=q, n=resonance.n, M=M, N=N,
            u=float(u), v=float(v), z=z, k_min=lo, k_max=hi,
        )

    def value(self) -> complex:
        if self.k_min > self.k_max:
            return 0.0 + 0.0j
        ks = np.arange(self.k_min, self.k_max + 1)
        iu = self.M - self.q * ks
        iv = self.N + self.p * ks
        ju = _signed_orders(iu, bessel_jn_all(int(np.max(np.abs(iu))), self.u))
        jv_ = _signed_orders(iv, bessel_jn_all(int(np.max(np.abs(iv))), self.v))
        zk = np.power(self.z, ks)
        return complex(np.sum(ju * jv_ * zk))


def gen_bessel_2d(
    resonance: ResonanceClass, u: float, v: float, z: complex = 1.0
) -> complex:
    """Two-dimensional one-parameter Bessel sum for a resonant class.

    For z = 1 the value is independent of which particular solution (M, N)
    represents the class; in general a different representative changes the
    value by an exact power of z.
    """
    return BesselSum2D.prepare(resonance, u, v, z).value()


def gen_bessel_2d_slice(
    resonance: ResonanceClass, us, v: float, z: complex = 1.0
) -> np.ndarray:
    """Vectorized ``gen_bessel_2d`` over an array of u at fixed v."""
    us = np.asarray(us, dtype=float)
    if not resonance.resonant:
        raise ValueError("non-resonant class: the bilinear sum is undefined")
    z = complex(z)
    if abs(abs(z) - 1.0) > 1e-12:
        raise ValueError("z must lie on the unit circle")
    p, q, M, N = resonance.p, resonance.q, resonance.M, resonance.N
    ku = bessel_tail_index(float(np.max(np.abs(us))) if us.size else 0.0)
    kv = bessel_tail_index(v)
    lo = max(math.ceil((M - ku) / q), math.ceil((-N - kv) / p))
    hi = min(math.floor((M + ku) / q), math.floor((-N + kv) / p))
    out = np.zeros(us.shape, dtype=complex)
    if lo > hi or us.size == 0:
        return out
    ks = np.arange(lo, hi + 1)
    iu = M - q * ks
    iv = N + p * ks
    jv_ = _signed_orders(iv, bessel_jn_all(int(np.max(np.abs(iv))), v))
    weights = jv_ * np.power(z, ks)
    table = kernels.jn_array_batch(int(np.max(np.abs(iu))), us)
    au = np.abs(iu)
    cols = table[:, au]
    flip = (iu < 0) & (au % 2 == 1)
    if flip.any():
        cols = cols * np.where(flip, -1.0, 1.0)
    return cols @ weights


def inf_var_bessel_table(betas) -> tuple:
    """All nonzero coefficients J_nu({beta_m}) as (nu_min, values).

    Built by convolving the single-harmonic coefficient sequences: harmonic
    m contributes J_j(beta_m) at frequency offset m*j.  Each factor is
    truncated at the 1e-16 tail.
    """
    betas = [float(b) for b in betas]
    while betas and betas[-1] == 0.0:
        betas.pop()
    coeffs = np.array([1.0])
    offset = 0  # frequency index of coeffs[0]
    for m, beta in enumerate(betas, start=1):
        if beta == 0.0:
            continue
        km = bessel_tail_index(beta)
        base = bessel_jn_all(km, beta)
        kernel = np.zeros(2 * m * km + 1)
        js = np.arange(-km, km + 1)
        vals = _signed_orders(js, base)
        kernel[m * (js + km)] = vals
        coeffs = np.convolve(coeffs, kernel)
        offset -= m * km
    return offset, coeffs


def inf_var_bessel(nu: int, betas) -> float:
    """Coefficient of e^{i nu theta} in exp(i sum_m beta_m sin(m theta)).

    An empty (or all-zero) amplitude list gives the Kronecker delta
    J_nu({}) = delta_{nu,0}; a single nonzero beta_1 reduces to the
    ordinary J_nu(beta_1).
    """
    nu = int(nu)
    offset, coeffs = inf_var_bessel_table(betas)
    idx = nu - offset
    if idx < 0 or idx >= coeffs.size:
        return 0.0
    return float(coeffs[idx])


def asymptotic_zero_estimates(n: int, v: float, j_max: int) -> list:
    """Large-argument estimates for the u-zeros of the bilinear sum at
    fixed v (the dynamic-localization points of a strongly driven lattice).

    The zero family solves u*sqrt(1/2 - n/(4v)) = c_j with c_j = (2j+1)pi/2
    (n even) or j*pi (n odd) when n < 2|v|, and c_j = (n+2j)*pi/2 when
    n >= 2|v| with v < 0.  Returns the ``j_max`` smallest positive u,
    ascending.
    """
    n = int(n)
    if n < 0:
        raise ValueError("n must be nonnegative")
    v = float(v)
    if v == 0.0:
        raise ValueError("v must be nonzero")
    if j_max < 1:
        raise ValueError("j_max must be positive")
    disc = 0.5 - n / (4.0 * v)
    if disc <= 0.0:
        raise ValueError(
            f"branch domain error: 1/2 - n/(4v) = {disc!r} is not positive"
        )
    root = math.sqrt(disc)
    if n < 2.0 * abs(v):
        if n % 2 == 0:
            targets = [(2 * j + 1) * math.pi / 2.0 for j in range(j_max)]
        else:
            targets = [j * math.pi for j in range(1, j_max + 1)]
    else:
        if v >= 0.0:
            raise ValueError("branch n >= 2|v| requires v < 0")
        j0 = -((n - 1) // 2)  # smallest j with n + 2j > 0
        targets = [(n + 2 * j) * math.pi / 2.0 for j in range(j0, j0 + j_max)]
    return sorted(t / root for t in targets)
