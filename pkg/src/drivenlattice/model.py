"""Model data for a biased, periodically driven 1D tight-binding lattice.

Everything is expressed in reduced units (hbar = 1, lattice period d = 1
unless stated otherwise): the bias and drive enter through the scalar
field f(t) = d F(t) / hbar, the hopping through g = -G/4 where G is the
width of the undriven Bloch band.  The dc component f0 equals the Bloch
frequency omega_B.

Whether a drive can transport at all is a question of integer arithmetic
between omega_B and the drive frequencies.  Frequency ratios are therefore
*declared* (as exact rationals, or tagged incommensurable), never detected
from floating-point values.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields
from enum import Enum
from fractions import Fraction
from typing import Optional, Union


class Incommensurable:
    """Declared irrational frequency ratio.

    This is an arithmetic class, not a numeric test: a float cannot certify
    irrationality, so the caller states it.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INCOMMENSURABLE"


INCOMMENSURABLE = Incommensurable()

#: A declared frequency ratio: an exact rational or the incommensurable tag.
FrequencyRatio = Union[Fraction, Incommensurable]


def parse_ratio(text: str) -> FrequencyRatio:
    """Parse 'q/p', an integer, or 'irrational'/'incommensurable'."""
    t = text.strip().lower()
    if t in ("irrational", "incommensurable"):
        return INCOMMENSURABLE
    try:
        return Fraction(t)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse frequency ratio {text!r}") from exc


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


def _ratio_consistent(name: str, ratio, value: float, reference: float) -> None:
    """Declared rational ratios must agree with the stored float fields."""
    if isinstance(ratio, Fraction):
        expected = float(ratio) * reference
        scale = max(abs(value), abs(reference), 1.0)
        if abs(value - expected) > 1e-9 * scale:
            raise ValueError(
                f"declared {name}={ratio} inconsistent with stored value "
                f"{value!r} (expected {expected!r})"
            )


@dataclass(frozen=True)
class LatticeModel:
    """Lattice parameters: hopping g (g = -G/4, hbar = 1) and period d."""

    g: float
    d: float = 1.0

    def __post_init__(self):
        _require_finite("g", self.g)
        _require_finite("d", self.d)
        if self.g == 0.0:
            raise ValueError("coupling g must be nonzero")
        if self.d <= 0.0:
            raise ValueError("lattice period d must be positive")

    @property
    def band_width(self) -> float:
        """Width G of the undriven Bloch band, G = 4|g|."""
        return 4.0 * abs(self.g)


# ---------------------------------------------------------------------------
# drive profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Static:
    """Constant field f(t) = f0 (pure Bloch-oscillation case for f0 != 0)."""

    f0: float

    def __post_init__(self):
        _require_finite("f0", self.f0)


@dataclass(frozen=True)
class Mono:
    """Monochromatic drive f(t) = f0 - f1*cos(omega1*t).

    ``ratio_b1`` declares omega_B/omega1 = f0/omega1.  Resonance (a nonzero
    average drift) requires it to be an integer.
    """

    f0: float
    f1: float
    omega1: float
    ratio_b1: Optional[FrequencyRatio] = None

    def __post_init__(self):
        _require_finite("f0", self.f0)
        _require_finite("f1", self.f1)
        _require_finite("omega1", self.omega1)
        if self.omega1 <= 0.0:
            raise ValueError("omega1 must be positive")
        _ratio_consistent("ratio_b1", self.ratio_b1, self.f0, self.omega1)

    @classmethod
    def resonant(cls, mu: int, u: float, omega1: float = 1.0) -> "Mono":
        """Drive with omega_B = mu*omega1 and scaled amplitude u = f1/omega1."""
        return cls(
            f0=mu * omega1, f1=u * omega1, omega1=omega1, ratio_b1=Fraction(mu)
        )


@dataclass(frozen=True)
class Bichromatic:
    """Two-color drive f(t) = f0 - f1*cos(omega1*t) - f2*cos(omega2*t + delta).

    ``ratio_21`` declares omega2/omega1 (= q/p in lowest terms when rational)
    and ``ratio_b1`` declares omega_B/omega1.  Scaled amplitudes are
    u = f1/omega1 and v = f2/omega2.
    """

    f0: float
    f1: float
    omega1: float
    f2: float
    omega2: float
    delta: float = 0.0
    ratio_21: Optional[FrequencyRatio] = None
    ratio_b1: Optional[FrequencyRatio] = None

    def __post_init__(self):
        for name in ("f0", "f1", "omega1", "f2", "omega2", "delta"):
            _require_finite(name, getattr(self, name))
        if self.omega1 <= 0.0 or self.omega2 <= 0.0:
            raise ValueError("drive frequencies must be positive")
        if isinstance(self.ratio_21, Fraction) and self.ratio_21 <= 0:
            raise ValueError("ratio_21 must be positive")
        _ratio_consistent("ratio_21", self.ratio_21, self.omega2, self.omega1)
        _ratio_consistent("ratio_b1", self.ratio_b1, self.f0, self.omega1)

    @classmethod
    def resonant(
        cls,
        p: int,
        q: int,
        n: int,
        u: float,
        v: float,
        delta: float = 0.0,
        omega1: float = 1.0,
    ) -> "Bichromatic":
        """Commensurate drive omega2/omega1 = q/p with omega_B = (n/p)*omega1."""
        if p < 1 or q < 1:
            raise ValueError("p and q must be positive integers")
        if math.gcd(p, q) != 1:
            raise ValueError("p and q must be coprime")
        omega2 = omega1 * q / p
        return cls(
            f0=omega1 * n / p,
            f1=u * omega1,
            omega1=omega1,
            f2=v * omega2,
            omega2=omega2,
            delta=delta,
            ratio_21=Fraction(q, p),
            ratio_b1=Fraction(n, p),
        )

    @property
    def u(self) -> float:
        return self.f1 / self.omega1

    @property
    def v(self) -> float:
        return self.f2 / self.omega2


@dataclass(frozen=True)
class Flipped:
    """Piecewise-constant periodic field: f1 for a fraction a of each period
    T, then f2 for the rest.

    The time average f0 = a*f1 + (1-a)*f2 is derived, not stored.
    ``bloch_cycles`` declares resonance, f0*T = 2*pi*bloch_cycles; None means
    the drive is treated as non-resonant.
    """

    f1: float
    f2: float
    a: float
    T: float
    bloch_cycles: Optional[int] = None

    def __post_init__(self):
        _require_finite("f1", self.f1)
        _require_finite("f2", self.f2)
        _require_finite("a", self.a)
        _require_finite("T", self.T)
        if not 0.0 < self.a < 1.0:
            raise ValueError("duty fraction a must lie strictly between 0 and 1")
        if self.T <= 0.0:
            raise ValueError("period T must be positive")
        if self.bloch_cycles is not None:
            target = 2.0 * math.pi * self.bloch_cycles
            scale = max(abs(self.f1) * self.T, abs(self.f2) * self.T, 1.0)
            if abs(self.f0 * self.T - target) > 1e-9 * scale:
                raise ValueError(
                    f"declared bloch_cycles={self.bloch_cycles} inconsistent "
                    f"with f0*T={self.f0 * self.T!r}"
                )

    @property
    def f0(self) -> float:
        return self.a * self.f1 + (1.0 - self.a) * self.f2

    @classmethod
    def half_flip(cls, f: float) -> "Flipped":
        """Sign-flip a static field after each half Bloch period (f0 = 0)."""
        return cls(f1=f, f2=-f, a=0.5, T=2.0 * math.pi / abs(f), bloch_cycles=0)

    @classmethod
    def quarter_flip(cls, f: float) -> "Flipped":
        """Doubled period with duty a = 1/4 (average field -f/2, one Bloch
        cycle per drive period)."""
        return cls(
            f1=f, f2=-f, a=0.25, T=4.0 * math.pi / abs(f),
            bloch_cycles=-1 if f > 0 else 1,
        )


@dataclass(frozen=True)
class Fourier:
    """Symmetric polychromatic drive f(t) = f0 - sum_m f_m cos(m*omega*t).

    ``amplitudes[m-1]`` holds f_m.  ``ratio_b`` declares omega_B/omega;
    resonance requires an integer value.
    """

    f0: float
    amplitudes: tuple
    omega: float
    ratio_b: Optional[FrequencyRatio] = None

    def __post_init__(self):
        _require_finite("f0", self.f0)
        _require_finite("omega", self.omega)
        if self.omega <= 0.0:
            raise ValueError("omega must be positive")
        amps = tuple(_require_finite("f_m", a) for a in self.amplitudes)
        object.__setattr__(self, "amplitudes", amps)
        _ratio_consistent("ratio_b", self.ratio_b, self.f0, self.omega)

    @classmethod
    def resonant(cls, n: int, betas, omega: float = 1.0) -> "Fourier":
        """Drive with omega_B = n*omega, given scaled amplitudes
        beta_m = f_m/(m*omega)."""
        amps = tuple(b * (m + 1) * omega for m, b in enumerate(betas))
        return cls(f0=n * omega, amplitudes=amps, omega=omega, ratio_b=Fraction(n))

    @property
    def betas(self) -> tuple:
        return tuple(f / ((m + 1) * self.omega) for m, f in enumerate(self.amplitudes))


DriveProfile = Union[Static, Mono, Bichromatic, Flipped, Fourier]

_PROFILE_TYPES = {
    "static": Static,
    "mono": Mono,
    "bichromatic": Bichromatic,
    "flipped": Flipped,
    "fourier": Fourier,
}
_TYPE_NAMES = {cls: name for name, cls in _PROFILE_TYPES.items()}


def period(profile: DriveProfile) -> Optional[float]:
    """Fundamental period of f(t), or None when no period is declared.

    A Static profile is constant (every T is a period); a Bichromatic
    profile is periodic only for a declared rational omega2/omega1.
    """
    if isinstance(profile, Static):
        return None
    if isinstance(profile, Mono):
        return 2.0 * math.pi / profile.omega1
    if isinstance(profile, Bichromatic):
        if isinstance(profile.ratio_21, Fraction):
            return 2.0 * math.pi * profile.ratio_21.denominator / profile.omega1
        return None
    if isinstance(profile, Flipped):
        return profile.T
    if isinstance(profile, Fourier):
        return 2.0 * math.pi / profile.omega
    raise TypeError(f"not a drive profile: {profile!r}")


# ---------------------------------------------------------------------------
# JSON serialization
# ---------------------------------------------------------------------------


def _ratio_to_json(ratio):
    if ratio is None:
        return None
    if isinstance(ratio, Incommensurable):
        return "incommensurable"
    return {"num": ratio.numerator, "den": ratio.denominator}


def _ratio_from_json(obj):
    if obj is None:
        return None
    if obj == "incommensurable":
        return INCOMMENSURABLE
    return Fraction(int(obj["num"]), int(obj["den"]))


def profile_to_dict(profile: DriveProfile) -> dict:
    """JSON-ready dict with a 'type' discriminator."""
    doc = {"type": _TYPE_NAMES[type(profile)]}
    for f in fields(profile):
        value = getattr(profile, f.name)
        if f.name.startswith("ratio"):
            value = _ratio_to_json(value)
        elif f.name == "amplitudes":
            value = list(value)
        doc[f.name] = value
    return doc


def profile_from_dict(doc: dict) -> DriveProfile:
    doc = dict(doc)
    try:
        kind = doc.pop("type")
    except KeyError:
        raise ValueError("profile document lacks a 'type' discriminator")
    try:
        cls = _PROFILE_TYPES[kind]
    except KeyError:
        raise ValueError(f"unknown profile type {kind!r}")
    names = {f.name for f in fields(cls)}
    unknown = set(doc) - names
    if unknown:
        raise ValueError(f"unknown fields for {kind!r} profile: {sorted(unknown)}")
    kwargs = {}
    for name, value in doc.items():
        if name.startswith("ratio"):
            value = _ratio_from_json(value)
        elif name == "amplitudes":
            value = tuple(value)
        kwargs[name] = value
    return cls(**kwargs)


def profile_to_json(profile: DriveProfile) -> str:
    return json.dumps(profile_to_dict(profile), sort_keys=True)


def profile_from_json(text: str) -> DriveProfile:
    return profile_from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# resonance arithmetic
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResonanceClass:
    """Verdict of the resonance equation p*mu + q*nu = n.

    For commensurate drives with omega2/omega1 = q/p the resonant index
    pairs form the one-parameter family (M - q*k, N + p*k).  ``M``/``N``
    hold the canonical particular solution (minimal |M|, ties broken
    toward the positive M).
    """

    p: int
    q: int
    n: int
    resonant: bool
    M: Optional[int] = None
    N: Optional[int] = None

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise ValueError("p and q must be positive integers")
        if self.resonant:
            if self.M is None or self.N is None:
                raise ValueError("resonant class needs a particular solution")
            if self.p * self.M + self.q * self.N != self.n:
                raise ValueError("particular solution does not solve p*M+q*N=n")

    def family(self, k: int) -> tuple:
        """k-th member (mu, nu) of the solution family."""
        if not self.resonant:
            raise ValueError("non-resonant class has no solution family")
        return (self.M - self.q * k, self.N + self.p * k)


def _xgcd(a: int, b: int) -> tuple:
    """Extended Euclid: returns (g, s, t) with a*s + b*t = g = gcd(a, b)."""
    r0, r1 = a, b
    s0, s1 = 1, 0
    t0, t1 = 0, 1
    while r1 != 0:
        quot = r0 // r1
        r0, r1 = r1, r0 - quot * r1
        s0, s1 = s1, s0 - quot * s1
        t0, t1 = t1, t0 - quot * t1
    return r0, s0, t0


def solve_diophantine(p: int, q: int, n: int) -> ResonanceClass:
    """Solve p*M + q*N = n over the integers.

    Returns a non-resonant verdict when gcd(p, q) does not divide n (that is
    a valid outcome, not an error).  Otherwise the canonical solution
    minimizes |M| over the full solution set, preferring the larger M on a
    tie, which makes downstream output reproducible.
    """
    if p < 1 or q < 1:
        raise ValueError("p and q must be positive integers")
    n = int(n)
    g, s, _ = _xgcd(p, q)
    if n % g != 0:
        return ResonanceClass(p=p, q=q, n=n, resonant=False)
    scale = n // g
    m0 = s * scale
    step = q // g  # M changes in multiples of q/gcd over the solution set
    k0 = round(m0 / step)
    best = None
    for k in (k0 - 1, k0, k0 + 1):
        m = m0 - step * k
        key = (abs(m), -m)
        if best is None or key < best[0]:
            best = (key, m)
    m_best = best[1]
    n_best = (n - p * m_best) // q
    return ResonanceClass(p=p, q=q, n=n, resonant=True, M=m_best, N=n_best)


class TransportVerdict(Enum):
    """Coarse transport taxonomy for a bichromatically driven biased lattice."""

    LOCALIZED = "localized"
    LOCALIZED_TRANSPORT_POSSIBLE = "localized-transport-possible"
    TRANSPORT = "transport"


def classify_transport(
    ratio_21: FrequencyRatio, ratio_b1: FrequencyRatio
) -> TransportVerdict:
    """Classify by the declared arithmetic of omega2/omega1 and omega_B/omega1.

    Both ratios rational: transport, provided the resonance integer
    n = p*omega_B/omega1 exists (localization is still possible at zeros of
    the transport coefficient).  Both irrational: localized, except for
    measure-zero tuned combinations.  Mixed: localized.
    """
    r21_rational = isinstance(ratio_21, Fraction)
    rb1_rational = isinstance(ratio_b1, Fraction)
    if not r21_rational and not rb1_rational:
        return TransportVerdict.LOCALIZED_TRANSPORT_POSSIBLE
    if r21_rational != rb1_rational:
        return TransportVerdict.LOCALIZED
    p = ratio_21.denominator
    if (ratio_b1 * p).denominator != 1:
        return TransportVerdict.LOCALIZED
    return TransportVerdict.TRANSPORT
