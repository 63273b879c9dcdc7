import pytest
from hypothesis import given, settings

from jumptile.classify import (
    Method,
    Verdict,
    classify_search,
    classify_theorem,
    sweep,
    sweep_grid,
    theorem_connected_m0,
)
from jumptile.errors import TheoremOutOfScope
from jumptile.neighbors import LatticePoint, verify_expansion
from jumptile.params import validate_params

from oracles import params_strategy

C, D = Verdict.CONNECTED, Verdict.DISCONNECTED


@pytest.mark.parametrize(
    "p,q,m,verdict",
    [
        (4, 6, 0, C),
        (4, 5, 0, D),
        (2, 3, 0, C),
        (1, 3, 0, D),
        (1, -3, 0, C),
        (3, 4, 7, D),
        (5, -12, -1, C),
        (-4, 4, 0, C),
        (0, 5, 0, D),
    ],
)
def test_theorem_examples(p, q, m, verdict):
    result = classify_theorem(validate_params(p, q, m))
    assert result.verdict is verdict and result.method is Method.THEOREM


@pytest.mark.parametrize("p", [-2, 0, 2])
def test_theorem_rejects_q_two(p):
    with pytest.raises(TheoremOutOfScope):
        classify_theorem(validate_params(p, 2, 0))
    assert classify_theorem(validate_params(p, 2, -1)).verdict is C


def test_search_4_4_witnesses():
    params = validate_params(4, 4, 0)
    result = classify_search(params)
    assert result.verdict is C and result.method is Method.SEARCH
    ev = result.evidence
    assert ev.c == 2 and ev.multiple == 2
    assert verify_expansion(params, ev.v_witness, LatticePoint(1, 0))
    assert verify_expansion(params, ev.multiple_witness, LatticePoint(2, 0))


def test_search_3_4_jump_refutes_everything():
    result = classify_search(validate_params(3, 4, 1))
    assert result.verdict is D
    assert result.evidence.refuted == (2, 3, 4)
    assert result.evidence.c is None


@pytest.mark.parametrize("p", range(3, 9))
def test_search_line_family(p):
    assert classify_search(validate_params(p, 2 * p - 2, 0)).verdict is C


def test_search_rejects_q_two():
    with pytest.raises(TheoremOutOfScope):
        classify_search(validate_params(1, 2, 0))


@settings(max_examples=40, deadline=None)
@given(params_strategy(min_abs_q=3, m_values=(-1, 0, 1, 2, 5)))
def test_theorem_and_search_agree(params):
    assert classify_theorem(params).verdict is classify_search(params).verdict


@settings(max_examples=40, deadline=None)
@given(params_strategy(min_abs_q=3))
def test_search_symmetric_in_sign_of_p(params):
    assert classify_search(params).verdict is classify_search(params.negated()).verdict


@settings(max_examples=40, deadline=None)
@given(params_strategy(min_abs_q=3, m_values=(1, 2, 3, 5)))
def test_positive_jump_never_connected(params):
    assert classify_search(params).verdict is D


def test_negative_q_line():
    for q in range(-9, -2):
        for p in range(-9, 10):
            try:
                params = validate_params(p, q, 0)
            except Exception:
                continue
            expected = abs(q) == 2 * abs(p) + 2 or (p, q) in {(1, -3), (-1, -3)}
            assert theorem_connected_m0(p, q) == expected
            assert classify_search(params).connected == expected


def test_sweep_rows_sorted_and_agree():
    rows = sweep((-9, 9), (-9, 9), [0])
    valid = [r for r in rows if abs(r.params.q) >= 3]
    assert all(r.agree for r in valid)
    keys = [(r.params.m, r.params.q, r.params.p) for r in rows]
    assert keys == sorted(keys)


def test_sweep_records_q_two_as_errors():
    rows = sweep((-2, 2), (2, 2), [0])
    assert rows and all(r.error and not r.agree for r in rows)


def test_sweep_skips_invalid_points():
    cells, skipped = sweep_grid((-9, 9), (-1, 1), [0])
    assert cells == [] and len(skipped) == 19 * 3


def test_sweep_parallel_matches_serial():
    serial = [r.as_record() for r in sweep((-4, 4), (-5, 5), [0, 1])]
    parallel = [r.as_record() for r in sweep((-4, 4), (-5, 5), [0, 1], jobs=2)]
    assert serial == parallel


def test_sweep_empty_range():
    assert sweep((3, 2), (-9, 9), [0]) == []
