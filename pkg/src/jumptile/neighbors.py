"""Exact membership of lattice points in T - T.

A lattice point l = gamma v + delta A v lies in T - T iff it has an expansion
l = sum_i b_i A^{-i} v with b_i in ΔD.  Shifting one digit off the expansion
(l -> A l - b_1 v) maps (gamma, delta) to (-q delta - b_1, gamma - p delta), and
every shifted point stays inside the coefficient box.  So T - T restricted to
the lattice is the greatest set of boxed states in which every state has a
successor: we start from the full box and prune states without one.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import BadDigit, BoxTooLarge, SingularPeriodMatrix
from .params import (
    IDENTITY,
    DigitSet,
    FractalParams,
    companion,
    digit_set,
    mat_inv,
    mat_mul,
    mat_sub,
    mat_vec,
)
from .sequences import BoundsBox, tilde_bounds

DEFAULT_STATE_CAP = 10**7
STATE_CAP_ENV = "JUMPTILE_STATE_CAP"


def state_cap() -> int:
    raw = os.environ.get(STATE_CAP_ENV)
    return int(raw) if raw else DEFAULT_STATE_CAP


@dataclass(frozen=True, order=True)
class LatticePoint:
    gamma: int
    delta: int

    def __neg__(self) -> LatticePoint:
        return LatticePoint(-self.gamma, -self.delta)


@dataclass(frozen=True)
class ExpansionWord:
    """Eventually periodic digit word: preperiod followed by period repeated."""

    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "preperiod", tuple(int(b) for b in self.preperiod))
        object.__setattr__(self, "period", tuple(int(b) for b in self.period))
        if not self.period:
            raise ValueError("period must be nonempty")

    def letters(self, n: int) -> list[int]:
        """First n letters of the infinite word."""
        out = list(self.preperiod[:n])
        while len(out) < n:
            out.extend(self.period[: n - len(out)])
        return out

    def as_dict(self) -> dict:
        return {"preperiod": list(self.preperiod), "period": list(self.period)}

    @classmethod
    def from_dict(cls, data: dict) -> ExpansionWord:
        pre, per = data["preperiod"], data["period"]
        if not isinstance(pre, list) or not isinstance(per, list):
            raise TypeError("preperiod and period must be lists")
        if not all(isinstance(b, int) and not isinstance(b, bool) for b in pre + per):
            raise TypeError("letters must be integers")
        return cls(tuple(pre), tuple(per))


def step(params: FractalParams, state: LatticePoint, b: int, digits: DigitSet | None = None) -> LatticePoint:
    """One-digit shift A l - b v, expressed in the basis {v, Av}."""
    digits = digits or digit_set(params)
    if b not in digits:
        raise BadDigit(f"{b} is not in the difference set {list(digits.differences)}")
    return LatticePoint(-params.q * state.delta - b, state.gamma - params.p * state.delta)


@dataclass(frozen=True)
class MembershipTable:
    params: FractalParams
    box: BoundsBox
    members: frozenset[LatticePoint]
    generation_log: int | None = None
    digits: DigitSet = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.digits is None:
            object.__setattr__(self, "digits", digit_set(self.params))

    def __contains__(self, point: LatticePoint) -> bool:
        return point in self.members

    def successors(self, point: LatticePoint) -> list[tuple[int, LatticePoint]]:
        """Surviving (digit, successor) pairs, in witness preference order."""
        p, q = self.params.p, self.params.q
        out = []
        for b in self.digits.by_preference():
            nxt = LatticePoint(-q * point.delta - b, point.gamma - p * point.delta)
            if nxt in self.members:
                out.append((b, nxt))
        return out

    def witness(self, point: LatticePoint) -> ExpansionWord | None:
        """Walk the surviving successor graph until a state repeats."""
        if point not in self.members:
            return None
        seen: dict[LatticePoint, int] = {}
        word: list[int] = []
        state = point
        while state not in seen:
            seen[state] = len(word)
            b, state = self.successors(state)[0]
            word.append(b)
        start = seen[state]
        return ExpansionWord(tuple(word[:start]), tuple(word[start:]))


def _prune(
    params: FractalParams, box: BoundsBox, digits: DigitSet, lifo: bool = False
) -> tuple[set[tuple[int, int]], int]:
    p, q = params.p, params.q
    G, H = box.gamma_max, box.delta_max
    letters = digits.differences

    def in_box(g: int, d: int) -> bool:
        return -G <= g <= G and -H <= d <= H

    alive = {(g, d) for g in range(-G, G + 1) for d in range(-H, H + 1)}
    count: dict[tuple[int, int], int] = {}
    queue: deque[tuple[tuple[int, int], int]] = deque()
    for g, d in alive:
        d1 = g - p * d
        if -H <= d1 <= H:
            base = -q * d
            n = sum(1 for b in letters if -G <= base - b <= G)
        else:
            n = 0
        count[(g, d)] = n
        if n == 0:
            queue.append(((g, d), 1))

    # deterministic processing order regardless of set iteration
    queue = deque(sorted(queue))
    rounds = 0
    pop = queue.pop if lifo else queue.popleft
    while queue:
        (g1, d1), gen = pop()
        if (g1, d1) not in alive:
            continue
        alive.discard((g1, d1))
        rounds = max(rounds, gen)
        # predecessors (g, d) with -q d - b = g1 and g - p d = d1
        for b in letters:
            num = g1 + b
            if num % q:
                continue
            d = -num // q
            g = d1 + p * d
            if (g, d) in alive and in_box(g, d):
                count[(g, d)] -= 1
                if count[(g, d)] == 0:
                    queue.append(((g, d), gen + 1))
    return alive, rounds


def membership_table(
    params: FractalParams,
    *,
    pad: int = 0,
    cap: int | None = None,
    lifo: bool = False,
) -> MembershipTable:
    """Greatest fixed point of the pruning operator over the coefficient box.

    ``pad`` enlarges the box in both axes (used to check box stability);
    ``lifo`` switches the deletion order, which must not change the result.
    """
    box = tilde_bounds(params)
    if pad:
        box = box.inflated(pad)
    cap = state_cap() if cap is None else cap
    if box.n_states > cap:
        raise BoxTooLarge(f"box has {box.n_states} states, cap is {cap}")
    digits = digit_set(params)
    alive, rounds = _prune(params, box, digits, lifo=lifo)
    members = frozenset(LatticePoint(g, d) for g, d in alive)
    return MembershipTable(params, box, members, rounds, digits)


def is_member(
    params: FractalParams, point: LatticePoint, table: MembershipTable | None = None
) -> tuple[bool, ExpansionWord | None]:
    if table is None:
        box = tilde_bounds(params)
        if not box.contains(point.gamma, point.delta):
            return False, None
        table = membership_table(params)
    elif not table.box.contains(point.gamma, point.delta):
        return False, None
    if point not in table:
        return False, None
    return True, table.witness(point)


def _neg_powers(params: FractalParams, n: int):
    inv = companion(params).inverse
    power = IDENTITY
    for _ in range(n):
        power = mat_mul(power, inv)
        yield power


def expansion_value(params: FractalParams, word: ExpansionWord) -> tuple[Fraction, Fraction]:
    """Exact sum of sum_i b_i A^{-i} v for an eventually periodic word.

    Preperiod of length K, period of length P:
        sum_{i<=K} b_i M^{-i} e1 + M^{-K} (I - M^{-P})^{-1} sum_{j<=P} b_{K+j} M^{-j} e1
    """
    e1 = (Fraction(1), Fraction(0))
    K, P = len(word.preperiod), len(word.period)
    powers = list(_neg_powers(params, max(K, P)))
    head = [Fraction(0), Fraction(0)]
    for b, mk in zip(word.preperiod, powers):
        col = mat_vec(mk, e1)
        head[0] += b * col[0]
        head[1] += b * col[1]
    cycle = [Fraction(0), Fraction(0)]
    for b, mj in zip(word.period, powers):
        col = mat_vec(mj, e1)
        cycle[0] += b * col[0]
        cycle[1] += b * col[1]
    try:
        resolvent = mat_inv(mat_sub(IDENTITY, powers[P - 1]))
    except ZeroDivisionError as exc:
        raise SingularPeriodMatrix(f"I - M^-{P} is singular for {params}") from exc
    tail = mat_vec(resolvent, (cycle[0], cycle[1]))
    if K:
        tail = mat_vec(powers[K - 1], tail)
    return head[0] + tail[0], head[1] + tail[1]


def verify_expansion(params: FractalParams, word: ExpansionWord, point: LatticePoint) -> bool:
    digits = digit_set(params)
    bad = [b for b in word.preperiod + word.period if b not in digits]
    if bad:
        raise BadDigit(f"letters {bad} are not in the difference set")
    return expansion_value(params, word) == (Fraction(point.gamma), Fraction(point.delta))


def axis_memberships(table: MembershipTable) -> dict[int, bool]:
    """Membership of k v for every k in the gamma range of the box."""
    G = table.box.gamma_max
    return {k: LatticePoint(k, 0) in table for k in range(-G, G + 1)}


def reflect(points: Iterable[LatticePoint]) -> frozenset[LatticePoint]:
    """Coordinates w.r.t. {v, (-A)v} of points given w.r.t. {v, Av}."""
    return frozenset(LatticePoint(pt.gamma, -pt.delta) for pt in points)
