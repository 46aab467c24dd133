from fractions import Fraction as F

import pytest

from ktasep.exactalg import P, X, rf, schur_poly
from ktasep.kernels import CaseId, ParamBinding, single_step_closed_form
from ktasep.multipoint import (
    ContourSpec,
    MultiPointQuery,
    SingularParameterError,
    boundary_condition_gap,
    continuous_kernel,
    contour_entry_residue,
    master_equation_residual,
    mp_blocking,
    mp_blocking_contour,
    mp_blocking_series,
    mp_canonical,
    mp_event_sum,
    mp_pushing,
)
from ktasep.partitions import Partition, partitions_in_box

P_ = Partition
RATES = [F(1, 2), F(1, 3), F(1, 7)]


def small_binding(n):
    return ParamBinding.numeric(x=[F(1, 10), F(1, 12)][:n], rates=RATES)


def test_direction_validation():
    b = small_binding(1)
    with pytest.raises(ValueError):
        MultiPointQuery(CaseId.A, "ge", 1, P_([1]), P_([]), 2, b)
    with pytest.raises(ValueError):
        MultiPointQuery(CaseId.C, "le", 1, P_([1]), P_([]), 2, b)


def test_trivial_certain_events():
    b = small_binding(1)
    # empty thresholds with empty start: nothing asked
    q = MultiPointQuery(CaseId.A, "le", 1, P_([3, 3]), P_([3, 3]), 2,
                        ParamBinding.numeric(x=[F(1, 10)], rates=RATES))
    # all particles start at the thresholds and may not exceed them: this
    # is P(no movement), not 1; the certain event is thresholds >= anything
    qc = MultiPointQuery(CaseId.C, "ge", 1, P_([2, 1]), P_([2, 1]), 2, b)
    v, bound = mp_blocking(qc)
    assert abs(float(v) - 1.0) <= float(bound)
    qb = MultiPointQuery(CaseId.B, "ge", 1, P_([2, 1]), P_([2, 1]), 2, b)
    v, bound = mp_blocking(qb)
    assert v == 1 and bound == 0


def test_pushing_case_a_schur_identity():
    # the worked determinant expansion for lam=(2,1), nu=empty, ell=2
    bsym = ParamBinding(x=[X(1), X(2)], rates=[P(1), P(2)])
    q = MultiPointQuery(CaseId.A, "le", 2, P_([2, 1]), P_([]), 2, bsym)
    val = rf(mp_pushing(q))
    pref = rf(1)
    for i in (1, 2):
        for j in (1, 2):
            pref = pref * rf(1 - P(i) * X(j))
    core = val / pref
    expect = (
        (P(1) ** 2 * P(2)) * schur_poly((2, 1), 2)
        + (P(1) * P(2) + P(1) ** 2) * schur_poly((2,), 2)
        + (P(1) * P(2)) * schur_poly((1, 1), 2)
        + (P(1) + P(2)) * schur_poly((1,), 2)
        + 1
    )
    assert core == rf(expect)


def test_pushing_case_d_schur_identity():
    bsym = ParamBinding(x=[X(1), X(2), X(3)], rates=[P(1), P(2), P(3)])
    q = MultiPointQuery(CaseId.D, "le", 3, P_([2, 1, 1]), P_([1]), 3, bsym)
    val = rf(mp_pushing(q))
    pref = rf(1)
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            pref = pref / rf(1 + P(i) * X(j))
    core = val / pref
    r1, r2, r3 = P(1), P(2), P(3)
    expect = (
        (r1 * r2 * r3) * (schur_poly((3,), 3) + schur_poly((2, 1), 3))
        + (r1 * r2 + r1 * r3 + r2 * r3) * schur_poly((2,), 3)
        + (r1 * r2 + r1 * r3) * schur_poly((1, 1), 3)
        + (r1 + r2 + r3) * schur_poly((1,), 3)
        + 1
    )
    assert core == rf(expect)


def test_pushing_event_sums_exact():
    for case in (CaseId.A, CaseId.D):
        for n in (1, 2):
            b = small_binding(n)
            for start in [P_([]), P_([1])]:
                for thr in [P_([1]), P_([2, 1]), P_([2, 2, 1])]:
                    if not thr.contains(start):
                        continue
                    q = MultiPointQuery(case, "le", n, thr, start, 3, b)
                    ev, tail = mp_event_sum(q, cap=10)
                    assert tail == 0 or case is CaseId.A
                    v = mp_pushing(q)
                    assert v == ev, (case, n, start, thr)


def test_blocking_event_sums():
    for case in (CaseId.C, CaseId.B):
        for n in (1, 2):
            b = small_binding(n)
            for start in [P_([]), P_([1, 1])]:
                for thr in [P_([1]), P_([2, 1]), P_([1, 1, 1])]:
                    q = MultiPointQuery(case, "ge", n, thr, start, 3, b)
                    ev, tail = mp_event_sum(q, cap=13)
                    v, bound = mp_blocking(q, trunc=70)
                    if case is CaseId.B:
                        assert v == ev
                    else:
                        assert abs(float(v - ev)) <= float(tail) + float(bound) + 1e-25


def test_blocking_series_vs_contour_modes():
    # the two determinant forms agree to 1e-10 at rational bindings
    b = small_binding(2)
    q = MultiPointQuery(CaseId.C, "ge", 2, P_([2, 1]), P_([]), 2, b)
    sv, _ = mp_blocking_series(q, trunc=70)
    cv = mp_blocking_contour(q)
    assert abs(float(sv - cv)) < 1e-10
    quad = mp_blocking_contour(q, ContourSpec(radius=F(3), mode="quadrature"))
    assert abs(float(cv) - quad) < 1e-10


def test_contour_radius_validation():
    b = small_binding(1)
    q = MultiPointQuery(CaseId.C, "ge", 1, P_([1]), P_([]), 2, b)
    with pytest.raises(ValueError):
        mp_blocking_contour(q, ContourSpec(radius=F(1, 100), mode="residue"))


def test_singular_parameters_error():
    with pytest.raises(SingularParameterError):
        contour_entry_residue([], [F(1, 2), F(1, 2)], [F(1, 10)], 1)


def test_canonical_reduction_and_events():
    alpha = lambda k: F(1, 4 + k) if k >= 1 else F(0)
    for n in (1, 2):
        b0 = ParamBinding.numeric(
            x=[F(1, 10), F(1, 12)][:n], rates=RATES, alpha=lambda k: F(0)
        )
        b = ParamBinding.numeric(x=[F(1, 10), F(1, 12)][:n], rates=RATES, alpha=alpha)
        for thr in [P_([1]), P_([2, 1])]:
            qc = MultiPointQuery(CaseId.C, "ge", n, thr, P_([]), 3, small_binding(n))
            q0 = MultiPointQuery(CaseId.CANONICAL_C, "ge", n, thr, P_([]), 3, b0)
            a, _ = mp_blocking_series(qc, 60)
            c, _ = mp_canonical(q0, 60)
            assert a == c
            q = MultiPointQuery(CaseId.CANONICAL_C, "ge", n, thr, P_([]), 3, b)
            ev, tail = mp_event_sum(q, cap=13)
            v, bound = mp_canonical(q, trunc=70)
            assert abs(float(v - ev)) <= float(tail) + float(bound) + 1e-25


def test_canonical_complement_identity():
    alpha = lambda k: F(1, 4 + k)
    b1 = ParamBinding.numeric(x=[F(1, 10)], rates=[F(1, 2)], alpha=alpha)
    q = MultiPointQuery(CaseId.CANONICAL_C, "ge", 1, P_([1]), P_([]), 1, b1)
    v, bound = mp_canonical(q, 60)
    want = 1 - single_step_closed_form(CaseId.CANONICAL_C, P_([]), P_([]), 1, b1, 1)
    assert abs(float(v - want)) <= float(bound) + 1e-25


def test_continuous_poisson():
    import math

    for k in range(4):
        v = continuous_kernel(CaseId.C, 2.0, P_([]), P_([k]), 1, [F(1)])
        want = math.exp(-2.0) * 2.0**k / math.factorial(k)
        assert abs(float(v) - want) < 1e-12


def test_continuous_delta_limit():
    for case in (CaseId.C, CaseId.A):
        v = continuous_kernel(case, 1e-6, P_([1, 1]), P_([1, 1]), 2, [F(1), F(2, 3)])
        assert abs(float(v) - 1.0) < 1e-4


def test_continuous_master_equation():
    for case in (CaseId.C, CaseId.A):
        r = master_equation_residual(case, 1.0, P_([]), P_([2, 1]), 2, [F(1), F(2, 3)], h=1e-4)
        assert float(r) < 1e-6, case


def test_continuous_boundary_conditions():
    g = boundary_condition_gap(CaseId.C, 1.0, P_([]), P_([2, 2]), 1, 2, [F(1), F(2, 3)])
    assert float(g) < 1e-12
    g = boundary_condition_gap(CaseId.A, 1.0, P_([]), P_([2, 2]), 1, 2, [F(1), F(2, 3)])
    assert float(g) < 1e-12


def test_continuous_residue_vs_quadrature():
    for case in (CaseId.C, CaseId.A):
        v1 = continuous_kernel(case, 0.8, P_([]), P_([2, 1]), 2, [F(1), F(2, 3)], mode="residue")
        v2 = continuous_kernel(case, 0.8, P_([]), P_([2, 1]), 2, [F(1), F(2, 3)], mode="quadrature")
        assert abs(v1 - v2) < 1e-10
