"""Coordinates of A^{-i} v in the basis {v, Av} and bounds on their sums.

Writing A^{-i} v = alpha_i v + beta_i A v, both sequences obey
q x_{i+2} + p x_{i+1} + x_i = 0.  The absolute sums alpha~ = sum |alpha_i| and
beta~ = sum |beta_i| bound the coordinates of every point of T - T, which is
what makes the neighbor search finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import TailNotConverged
from .params import FractalParams

# Finer than any quoted bound we compare against (0.43 for (2, 4) is within
# 0.0015 of the true value).
TAIL_TOLERANCE = Fraction(1, 10**9)
TERM_CAP = 512
# Final bounds are rounded up onto this grid to keep them printable.
ROUNDING_DENOMINATOR = 10**12
_SQRT_SCALE = 2**64


@dataclass(frozen=True)
class AlphaBetaSequence:
    params: FractalParams
    terms: tuple[tuple[Fraction, Fraction], ...]
    partial_abs_sums: tuple[Fraction, Fraction]

    @property
    def alphas(self) -> list[Fraction]:
        return [a for a, _ in self.terms]

    @property
    def betas(self) -> list[Fraction]:
        return [b for _, b in self.terms]


@dataclass(frozen=True)
class BoundsBox:
    alpha_tilde_ub: Fraction
    beta_tilde_ub: Fraction
    gamma_max: int
    delta_max: int
    tail_index: int | None = None

    @property
    def n_states(self) -> int:
        return (2 * self.gamma_max + 1) * (2 * self.delta_max + 1)

    def contains(self, gamma: int, delta: int) -> bool:
        return abs(gamma) <= self.gamma_max and abs(delta) <= self.delta_max

    def inflated(self, pad: int) -> BoundsBox:
        return BoundsBox(
            self.alpha_tilde_ub,
            self.beta_tilde_ub,
            self.gamma_max + pad,
            self.delta_max + pad,
            self.tail_index,
        )


def alpha_beta(params: FractalParams, n: int) -> AlphaBetaSequence:
    """The first n exact terms (alpha_i, beta_i), i = 1..n."""
    if n < 2:
        raise ValueError("n must be at least 2")
    p, q = params.p, params.q
    alphas = [Fraction(-p, q), Fraction(p * p - q, q * q)]
    betas = [Fraction(-1, q), Fraction(p, q * q)]
    for _ in range(n - 2):
        alphas.append(-(p * alphas[-1] + alphas[-2]) / q)
        betas.append(-(p * betas[-1] + betas[-2]) / q)
    alphas, betas = alphas[:n], betas[:n]
    sums = (sum(map(abs, alphas), Fraction(0)), sum(map(abs, betas), Fraction(0)))
    return AlphaBetaSequence(params, tuple(zip(alphas, betas)), sums)


def _sqrt_lower(n: int) -> Fraction:
    """Rational r with r <= sqrt(n), r > 0 for n >= 1."""
    return Fraction(math.isqrt(n * _SQRT_SCALE * _SQRT_SCALE), _SQRT_SCALE)


def _round_up(x: Fraction) -> Fraction:
    d = ROUNDING_DENOMINATOR
    return Fraction(-((-x.numerator * d) // x.denominator), d)


def _closed_form_sums(params: FractalParams) -> tuple[Fraction, Fraction]:
    p, q = abs(params.p), params.q
    if q > 0:
        return Fraction(p - 1, q - p + 1), Fraction(1, q - p + 1)
    return Fraction(p + 1, -q - p - 1), Fraction(1, -q - p - 1)


def _tail_sums(params: FractalParams, tol: Fraction, cap: int) -> tuple[Fraction, Fraction, int]:
    # complex conjugate roots: |alpha_i| <= 2 q^{-(i-1)/2} / sqrt(4q - p^2),
    # |beta_i| <= 2 q^{-i/2} / sqrt(4q - p^2); the tail from index n is geometric.
    p, q = params.p, params.q
    r = 1 / _sqrt_lower(q)  # >= q^{-1/2}
    scale = 2 / ((1 - r) * _sqrt_lower(4 * q - p * p))
    # invariant: a_cur = alpha_n, sum_a = sum_{i < n} |alpha_i| (same for beta)
    a_prev, a_cur = Fraction(-p, q), Fraction(p * p - q, q * q)
    b_prev, b_cur = Fraction(-1, q), Fraction(p, q * q)
    sum_a, sum_b = abs(a_prev), abs(b_prev)  # sums over i = 1..n-1 with n = 2
    n = 2
    r_pow = r  # r^{n-1}
    while True:
        tail_a = scale * r_pow
        tail_b = scale * r_pow * r
        if tail_a < tol and tail_b < tol:
            return sum_a + tail_a, sum_b + tail_b, n
        if n >= cap:
            raise TailNotConverged(f"tail bound above {tol} after {cap} terms for {params}")
        sum_a += abs(a_cur)
        sum_b += abs(b_cur)
        a_prev, a_cur = a_cur, -(p * a_cur + a_prev) / q
        b_prev, b_cur = b_cur, -(p * b_cur + b_prev) / q
        n += 1
        r_pow *= r


def coefficient_box(params: FractalParams, bounds: BoundsBox) -> tuple[int, int]:
    """|gamma| <= max|b| alpha~ and |delta| <= max|b| beta~ for l in T - T."""
    scale = params.max_digit
    return math.floor(scale * bounds.alpha_tilde_ub), math.floor(scale * bounds.beta_tilde_ub)


def tilde_bounds(
    params: FractalParams, tol: Fraction = TAIL_TOLERANCE, cap: int = TERM_CAP
) -> BoundsBox:
    """Certified rational upper bounds for alpha~ and beta~, plus the search box.

    Real roots (discriminant >= 0) use the exact closed forms.  Complex roots
    use exact partial sums plus an outward-rounded geometric tail.
    """
    if params.discriminant >= 0:
        alpha_ub, beta_ub = _closed_form_sums(params)
        tail_index = None
    else:
        alpha_ub, beta_ub, tail_index = _tail_sums(params, tol, cap)
        alpha_ub, beta_ub = _round_up(alpha_ub), _round_up(beta_ub)
    box = BoundsBox(alpha_ub, beta_ub, 0, 0, tail_index)
    gamma_max, delta_max = coefficient_box(params, box)
    return BoundsBox(alpha_ub, beta_ub, gamma_max, delta_max, tail_index)
