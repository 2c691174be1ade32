"""
Distance Family
L_p distances (finite p of either sign, plus the ±infinity limits) and the
geometric L_0 distance |xy|, with order-preserving comparison keys
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from lpvoronoi.errors import EmptyVector, InvalidExponent, NonFiniteInput

# Components outside this band make a direct product over/underflow.
_L0_LOG_HIGH = 1e150
_L0_LOG_LOW = 1e-150


class ExponentKind(Enum):
    FINITE = 'finite'
    GEOMETRIC_ZERO = 'geometric_zero'
    POS_INF = 'pos_inf'
    NEG_INF = 'neg_inf'


class Ordering(Enum):
    CLOSER_TO_A = 'CloserToA'
    CLOSER_TO_B = 'CloserToB'
    EQUIDISTANT = 'Equidistant'


@dataclass(frozen=True)
class Exponent:
    """Selects one member of the distance family"""

    kind: ExponentKind
    p: Optional[float] = None

    def __post_init__(self):
        if self.kind is ExponentKind.FINITE:
            if self.p is None or not math.isfinite(self.p):
                raise InvalidExponent(f"finite exponent needs a finite p, got {self.p!r}")
            if self.p == 0:
                raise InvalidExponent("p = 0 is not a finite exponent; use GeometricZero")
        elif self.p is not None:
            raise InvalidExponent(f"{self.kind.value} exponent takes no p value")

    @classmethod
    def finite(cls, p: float) -> 'Exponent':
        return cls(ExponentKind.FINITE, float(p))

    @classmethod
    def geometric_zero(cls) -> 'Exponent':
        return cls(ExponentKind.GEOMETRIC_ZERO)

    @classmethod
    def pos_inf(cls) -> 'Exponent':
        return cls(ExponentKind.POS_INF)

    @classmethod
    def neg_inf(cls) -> 'Exponent':
        return cls(ExponentKind.NEG_INF)

    @classmethod
    def parse(cls, text: str) -> 'Exponent':
        """
        Parse an exponent token

        Accepts `p=<real>`, `p=inf`, `p=-inf` and bare numbers. Any spelling of
        zero (`p=0`, `p=0.0`) means the geometric L_0 distance.

        Raises:
            InvalidExponent: if the token is not a number or is NaN
        """
        token = text.strip()
        if token.lower().startswith('p='):
            token = token[2:]
        lowered = token.strip().lower()
        if lowered in ('inf', '+inf', 'infinity', '+infinity'):
            return cls.pos_inf()
        if lowered in ('-inf', '-infinity'):
            return cls.neg_inf()
        try:
            value = float(lowered)
        except ValueError:
            raise InvalidExponent(f"cannot parse exponent {text!r}")
        if math.isnan(value):
            raise InvalidExponent(f"cannot parse exponent {text!r}")
        if math.isinf(value):
            return cls.pos_inf() if value > 0 else cls.neg_inf()
        if value == 0:
            return cls.geometric_zero()
        return cls.finite(value)

    @property
    def is_finite(self) -> bool:
        return self.kind is ExponentKind.FINITE

    def __str__(self) -> str:
        if self.kind is ExponentKind.FINITE:
            return f"p={self.p!r}"
        if self.kind is ExponentKind.GEOMETRIC_ZERO:
            return "p=0"
        return "p=inf" if self.kind is ExponentKind.POS_INF else "p=-inf"


@dataclass(frozen=True)
class Vec2:
    """A point or a coordinate difference in the plane"""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise NonFiniteInput(f"non-finite coordinates ({self.x}, {self.y})")

    def __sub__(self, other: 'Vec2') -> 'Vec2':
        return Vec2(self.x - other.x, self.y - other.y)

    def __add__(self, other: 'Vec2') -> 'Vec2':
        return Vec2(self.x + other.x, self.y + other.y)

    def __neg__(self) -> 'Vec2':
        return Vec2(-self.x, -self.y)

    def scaled(self, c: float) -> 'Vec2':
        return Vec2(c * self.x, c * self.y)

    def as_tuple(self) -> tuple:
        return (self.x, self.y)

    @classmethod
    def parse(cls, text: str) -> 'Vec2':
        """Parse `x,y`; raises NonFiniteInput on anything else"""
        parts = text.split(',')
        if len(parts) != 2:
            raise NonFiniteInput(f"expected x,y but got {text!r}")
        try:
            return cls(float(parts[0]), float(parts[1]))
        except ValueError:
            raise NonFiniteInput(f"expected x,y but got {text!r}")


def _log_power_sum(ax: float, ay: float, p: float) -> float:
    """ln(ax^p + ay^p); a zero coordinate adds -inf for p > 0 and +inf for p < 0"""
    terms = [p * math.log(t) if t > 0 else (-math.inf if p > 0 else math.inf) for t in (ax, ay)]
    return float(np.logaddexp(*terms))


def _power_sum_root(ax: float, ay: float, p: float) -> float:
    """(ax^p + ay^p)^(1/p) for ax, ay > 0, falling back to log space on overflow"""
    try:
        return (ax ** p + ay ** p) ** (1.0 / p)
    except OverflowError:
        log_sum = _log_power_sum(ax, ay, p)
        try:
            return math.exp(log_sum / p)
        except OverflowError:
            return math.inf


def lp_norm(v: Vec2, e: Exponent) -> float:
    """
    Distance of v from the origin under e

    Args:
        v: coordinate difference
        e: family member

    Returns:
        Nonnegative distance. For p < 0 any zero coordinate gives 0.
    """
    ax, ay = abs(v.x), abs(v.y)
    if e.kind is ExponentKind.GEOMETRIC_ZERO:
        return ax * ay
    if e.kind is ExponentKind.POS_INF:
        return max(ax, ay)
    if e.kind is ExponentKind.NEG_INF:
        return min(ax, ay)

    p = e.p
    if p < 0:
        if ax == 0 or ay == 0:
            return 0.0
        return _power_sum_root(ax, ay, p)
    # corner points come out exact
    if ax == 0:
        return ay
    if ay == 0:
        return ax
    return _power_sum_root(ax, ay, p)


def l0_norm_nd(v: Sequence[float]) -> float:
    """
    Geometric L_0 norm |x_1 * ... * x_d| of a d-dimensional vector

    Raises:
        EmptyVector: for d = 0
        NonFiniteInput: for NaN or infinite components
    """
    comps = [float(c) for c in v]
    if not comps:
        raise EmptyVector("L_0 norm needs at least one component")
    if not all(math.isfinite(c) for c in comps):
        raise NonFiniteInput(f"non-finite component in {comps}")
    mags = [abs(c) for c in comps]
    if any(m == 0 for m in mags):
        return 0.0
    if any(m > _L0_LOG_HIGH or m < _L0_LOG_LOW for m in mags):
        log_prod = math.fsum(math.log(m) for m in mags)
        try:
            return math.exp(log_prod)
        except OverflowError:
            return math.inf
    return abs(math.prod(comps))


def pow_diff(a: float, b: float, p: float) -> float:
    """
    a^p - b^p for a, b >= 0 without cancellation near p = 0

    Uses exp(p ln b) * expm1(p (ln a - ln b)) when both are positive.
    A zero argument with p < 0 raises ZeroDivisionError like 0.0 ** p does.
    Past float range the magnitude is rebuilt in log space; a difference that
    itself overflows comes back as a signed infinity.
    """
    if a > 0 and b > 0:
        lb = math.log(b)
        t = p * (math.log(a) - lb)
        try:
            return math.exp(p * lb) * math.expm1(t)
        except OverflowError:
            if t == 0:
                return 0.0
            log_mag = p * lb + (t + math.log(-math.expm1(-t)) if t > 0 else math.log(-math.expm1(t)))
            return math.copysign(math.exp(log_mag) if log_mag < 709 else math.inf, t)
    try:
        return a ** p - b ** p
    except OverflowError:
        return math.inf if a > b else -math.inf


def distance_key(v: Vec2, e: Exponent) -> float:
    """
    Scalar whose natural order is the distance order under e (smaller = closer)

    For finite p it is the inner sum |x|^p + |y|^p, negated for p < 0 since
    t -> t^(1/p) is decreasing there. A zero coordinate under p < 0 is a
    distance of exactly 0 and maps to -inf.
    """
    ax, ay = abs(v.x), abs(v.y)
    if e.kind is ExponentKind.GEOMETRIC_ZERO:
        return ax * ay
    if e.kind is ExponentKind.POS_INF:
        return max(ax, ay)
    if e.kind is ExponentKind.NEG_INF:
        return min(ax, ay)
    p = e.p
    if p > 0:
        try:
            return ax ** p + ay ** p
        except OverflowError:
            return math.inf
    if ax == 0 or ay == 0:
        return -math.inf
    try:
        return -(ax ** p + ay ** p)
    except OverflowError:
        return -math.inf


def distance_key_array(dx: np.ndarray, dy: np.ndarray, e: Exponent) -> np.ndarray:
    """Vectorized distance_key over coordinate-difference arrays"""
    ax, ay = np.abs(dx), np.abs(dy)
    if e.kind is ExponentKind.GEOMETRIC_ZERO:
        return ax * ay
    if e.kind is ExponentKind.POS_INF:
        return np.maximum(ax, ay)
    if e.kind is ExponentKind.NEG_INF:
        return np.minimum(ax, ay)
    p = e.p
    if p > 0:
        return ax ** p + ay ** p
    with np.errstate(divide='ignore', over='ignore'):
        sums = ax ** p + ay ** p
    return np.where((ax == 0) | (ay == 0), -np.inf, -sums)


def lp_norm_array(dx: np.ndarray, dy: np.ndarray, e: Exponent) -> np.ndarray:
    """Vectorized lp_norm; overflow saturates to inf"""
    ax, ay = np.abs(np.asarray(dx, dtype=float)), np.abs(np.asarray(dy, dtype=float))
    if e.kind is ExponentKind.GEOMETRIC_ZERO:
        return ax * ay
    if e.kind is ExponentKind.POS_INF:
        return np.maximum(ax, ay)
    if e.kind is ExponentKind.NEG_INF:
        return np.minimum(ax, ay)
    p = e.p
    with np.errstate(divide='ignore', over='ignore', invalid='ignore'):
        values = (ax ** p + ay ** p) ** (1.0 / p)
    if p < 0:
        return np.where((ax == 0) | (ay == 0), 0.0, values)
    values = np.where(ax == 0, ay, values)
    return np.where(ay == 0, ax, values)


def _log_distance_key(v: Vec2, p: float) -> float:
    """Order-equivalent to distance_key for finite p, in log space"""
    log_sum = _log_power_sum(abs(v.x), abs(v.y), p)
    return log_sum if p > 0 else -log_sum


def compare_distance(q: Vec2, a: Vec2, b: Vec2, e: Exponent) -> Ordering:
    """
    Which of a, b is closer to q under e

    Compares inner sums rather than distances, so no 1/p power is ever taken.
    Sums that overflow or underflow are compared as logs instead.
    """
    key_a = distance_key(q - a, e)
    key_b = distance_key(q - b, e)
    if e.is_finite and any(key == 0 or math.isinf(key) for key in (key_a, key_b)):
        key_a = _log_distance_key(q - a, e.p)
        key_b = _log_distance_key(q - b, e.p)
    if key_a < key_b:
        return Ordering.CLOSER_TO_A
    if key_b < key_a:
        return Ordering.CLOSER_TO_B
    return Ordering.EQUIDISTANT
