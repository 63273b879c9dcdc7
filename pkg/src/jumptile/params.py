"""Parameter validation, digit sets and the companion realization of A.

A planar expanding matrix with characteristic polynomial x^2 + p x + q and a
base vector v with {v, Av} independent is, up to an affine change of
coordinates, the companion matrix acting on coordinates in the basis {v, Av}.
Everything downstream works in those coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .errors import BadJump, DeterminantTooSmall, NotExpanding

Matrix2 = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]


@dataclass(frozen=True)
class FractalParams:
    """Characteristic polynomial coefficients (p, q) plus jump offset m."""

    p: int
    q: int
    m: int

    @property
    def discriminant(self) -> int:
        return self.p * self.p - 4 * self.q

    @property
    def det(self) -> int:
        return self.q

    @property
    def max_digit(self) -> int:
        return abs(self.q) + self.m

    def negated(self) -> FractalParams:
        """Parameters of -A (same q, opposite p)."""
        return FractalParams(-self.p, self.q, self.m)

    def as_dict(self) -> dict:
        return {"p": self.p, "q": self.q, "m": self.m}


def satisfies_expanding_inequality(p: int, q: int) -> bool:
    """The coefficient-inequality form of the expanding condition."""
    if q >= 2:
        return abs(p) <= q
    if q <= -2:
        return abs(p) <= abs(q + 2)
    return False


def validate_params(p: int, q: int, m: int) -> FractalParams:
    if abs(q) <= 1:
        raise DeterminantTooSmall(f"|q| must be at least 2, got q={q}")
    if m < -1:
        raise BadJump(f"jump offset m must be >= -1, got m={m}")
    if not satisfies_expanding_inequality(p, q):
        bound = q if q > 0 else abs(q + 2)
        raise NotExpanding(f"x^2 + {p}x + {q} is not expanding (|p|={abs(p)} > {bound})")
    return FractalParams(int(p), int(q), int(m))


def is_expanding(p: int, q: int) -> bool:
    """True iff both roots of x^2 + p x + q have modulus > 1.

    Decided with integer arithmetic only: for complex roots |root|^2 = q; for
    real roots we look at the signs of f(1), f(-1) and the vertex position.
    """
    disc = p * p - 4 * q
    if disc < 0:
        return q > 1
    f_plus, f_minus = 1 + p + q, 1 - p + q
    if f_plus == 0 or f_minus == 0:
        return False
    if f_plus < 0 and f_minus < 0:
        # roots straddle [-1, 1]
        return True
    if f_plus > 0 and f_minus > 0:
        # both roots on one side; outside [-1, 1] iff the vertex -p/2 is
        return abs(p) > 2
    return False


def expanding_crosscheck(params: FractalParams) -> bool:
    return is_expanding(params.p, params.q)


@dataclass(frozen=True)
class DigitSet:
    digits: tuple[int, ...]
    differences: tuple[int, ...]
    max_abs: int
    _diff_set: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_diff_set", frozenset(self.differences))

    def __contains__(self, b: int) -> bool:
        return b in self._diff_set

    def by_preference(self) -> tuple[int, ...]:
        """ΔD ordered by |b|, negative first on ties."""
        return tuple(sorted(self.differences, key=lambda b: (abs(b), b)))


def digit_set(params: FractalParams) -> DigitSet:
    n = abs(params.q)
    digits = sorted(set(range(n - 1)) | {n + params.m})
    differences = sorted({a - b for a in digits for b in digits})
    return DigitSet(tuple(digits), tuple(differences), max(abs(d) for d in differences))


@dataclass(frozen=True)
class CompanionRealization:
    """M = [[0, -q], [1, -p]] on coordinates w.r.t. {v, Av}; v is (1, 0)."""

    entries: tuple[int, int, int, int]
    base_vector: tuple[int, int] = (1, 0)

    @classmethod
    def of(cls, params: FractalParams) -> CompanionRealization:
        return cls((0, -params.q, 1, -params.p))

    @property
    def trace(self) -> int:
        a, _, _, d = self.entries
        return a + d

    @property
    def det(self) -> int:
        a, b, c, d = self.entries
        return a * d - b * c

    def rows(self) -> Matrix2:
        a, b, c, d = (Fraction(x) for x in self.entries)
        return ((a, b), (c, d))

    @cached_property
    def inverse(self) -> Matrix2:
        return mat_inv(self.rows())

    def as_float(self):
        import numpy as np

        return np.array(self.entries, dtype=float).reshape(2, 2)


def companion(params: FractalParams) -> CompanionRealization:
    return CompanionRealization.of(params)


# exact 2x2 helpers over Fraction


def mat_mul(x: Matrix2, y: Matrix2) -> Matrix2:
    return (
        (x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]),
        (x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]),
    )


def mat_vec(x: Matrix2, v: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    return (x[0][0] * v[0] + x[0][1] * v[1], x[1][0] * v[0] + x[1][1] * v[1])


def mat_inv(x: Matrix2) -> Matrix2:
    det = x[0][0] * x[1][1] - x[0][1] * x[1][0]
    if det == 0:
        raise ZeroDivisionError("singular 2x2 matrix")
    return ((x[1][1] / det, -x[0][1] / det), (-x[1][0] / det, x[0][0] / det))


def mat_sub(x: Matrix2, y: Matrix2) -> Matrix2:
    return (
        (x[0][0] - y[0][0], x[0][1] - y[0][1]),
        (x[1][0] - y[1][0], x[1][1] - y[1][1]),
    )


IDENTITY: Matrix2 = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
