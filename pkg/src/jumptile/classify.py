"""Connectedness deciders and the parameter sweep harness.

Two routes that share nothing but the parameter type:

* ``classify_theorem`` evaluates the closed-form characterization;
* ``classify_search`` applies the neighbor criterion (v and (m + c) v in
  T - T for some c in {2, ..., |q|}) using the exact membership engine.
"""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .errors import InvalidParams, JumptileError, TheoremOutOfScope
from .neighbors import ExpansionWord, LatticePoint, MembershipTable, membership_table
from .params import FractalParams, validate_params

SPORADIC_CONNECTED = frozenset(
    {(1, -3), (-1, -3), (2, 3), (-2, 3), (3, 3), (-3, 3), (4, 4), (-4, 4)}
)


class Verdict(str, enum.Enum):
    CONNECTED = "connected"
    DISCONNECTED = "disconnected"


class Method(str, enum.Enum):
    THEOREM = "theorem"
    SEARCH = "search"


@dataclass(frozen=True)
class SearchEvidence:
    """Witness words for v and (m + c) v, or the c values that were refuted."""

    v_witness: ExpansionWord | None
    c: int | None
    multiple: int | None
    multiple_witness: ExpansionWord | None
    refuted: tuple[int, ...]

    def as_dict(self) -> dict:
        return {
            "v": self.v_witness.as_dict() if self.v_witness else None,
            "c": self.c,
            "multiple": self.multiple,
            "multiple_witness": self.multiple_witness.as_dict() if self.multiple_witness else None,
            "refuted_c": list(self.refuted),
        }


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    method: Method
    evidence: SearchEvidence | None = None

    @property
    def connected(self) -> bool:
        return self.verdict is Verdict.CONNECTED


def theorem_connected_m0(p: int, q: int) -> bool:
    return 2 * abs(p) == abs(q + 2) or (p, q) in SPORADIC_CONNECTED


def classify_theorem(params: FractalParams) -> Classification:
    if params.m == -1:
        # consecutive digits: always connected
        return Classification(Verdict.CONNECTED, Method.THEOREM)
    if abs(params.q) < 3:
        raise TheoremOutOfScope(f"closed form needs |q| >= 3 when m >= 0, got q={params.q}")
    if params.m >= 1:
        return Classification(Verdict.DISCONNECTED, Method.THEOREM)
    verdict = Verdict.CONNECTED if theorem_connected_m0(params.p, params.q) else Verdict.DISCONNECTED
    return Classification(verdict, Method.THEOREM)


def classify_search(params: FractalParams, table: MembershipTable | None = None) -> Classification:
    """Decide connectedness from membership of v and (m + c) v in T - T."""
    if abs(params.q) < 3:
        raise TheoremOutOfScope(f"neighbor criterion needs |q| >= 3, got q={params.q}")
    table = table or membership_table(params)
    one = LatticePoint(1, 0)
    v_witness = table.witness(one)
    found, refuted = None, []
    for c in range(2, abs(params.q) + 1):
        point = LatticePoint(params.m + c, 0)
        if point in table:
            found = found or (c, point)
        else:
            refuted.append(c)
    if found is None:
        evidence = SearchEvidence(v_witness, None, None, None, tuple(refuted))
    else:
        c, point = found
        evidence = SearchEvidence(v_witness, c, point.gamma, table.witness(point), tuple(refuted))
    connected = v_witness is not None and found is not None
    verdict = Verdict.CONNECTED if connected else Verdict.DISCONNECTED
    return Classification(verdict, Method.SEARCH, evidence)


@dataclass(frozen=True)
class SweepRow:
    params: FractalParams
    theorem: Classification | None
    search: Classification | None
    error: str | None = None

    @property
    def agree(self) -> bool:
        return (
            self.theorem is not None
            and self.search is not None
            and self.theorem.verdict is self.search.verdict
        )

    def as_record(self) -> dict:
        return {
            "p": self.params.p,
            "q": self.params.q,
            "m": self.params.m,
            "theorem": self.theorem.verdict.value if self.theorem else "error",
            "search": self.search.verdict.value if self.search else "error",
            "agree": self.agree,
        }


def _sweep_cell(params: FractalParams) -> SweepRow:
    errors = []
    try:
        theorem = classify_theorem(params)
    except JumptileError as exc:
        theorem, errors = None, errors + [f"theorem: {exc.code}"]
    try:
        search = classify_search(params)
    except JumptileError as exc:
        search, errors = None, errors + [f"search: {exc.code}"]
    return SweepRow(params, theorem, search, "; ".join(errors) or None)


def sweep_grid(
    p_range: tuple[int, int], q_range: tuple[int, int], m_values
) -> tuple[list[FractalParams], list[tuple[int, int, int]]]:
    """Valid grid cells in (m, q, p) order, plus the skipped invalid triples."""
    valid, skipped = [], []
    for m in m_values:
        for q in range(q_range[0], q_range[1] + 1):
            for p in range(p_range[0], p_range[1] + 1):
                try:
                    valid.append(validate_params(p, q, m))
                except InvalidParams:
                    skipped.append((p, q, m))
    return valid, skipped


def sweep(
    p_range: tuple[int, int],
    q_range: tuple[int, int],
    m_values,
    jobs: int = 1,
) -> list[SweepRow]:
    cells, _ = sweep_grid(p_range, q_range, m_values)
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_cell, cells, chunksize=8))
    else:
        rows = [_sweep_cell(c) for c in cells]
    return sorted(rows, key=lambda r: (r.params.m, r.params.q, r.params.p))
