"""The extremal norm: closed forms, norm axioms, and decomposition certificates."""

import math
from fractions import Fraction

import pytest

from sunorm.errors import UsageError
from sunorm.extremal import (
    build_S,
    closed_form_check,
    decomposition_problem,
    extremal_m1,
    extremal_p_bounds,
)
from sunorm.heights import delta, h_p
from sunorm.projections import build_alpha_v_system, proj_field, proj_sunits
from sunorm import lp_core

from conftest import ball_close, random_combo, random_supported_element

GOLDEN = (1 + math.sqrt(5)) / 2
LOG2 = math.log(2)


def test_build_s_examples(qsqrt2, qsqrt2_ext):
    assert build_S(qsqrt2, qsqrt2.element("silver")) == {0, 1}
    assert build_S(qsqrt2, qsqrt2.element("sqrt2")) == {0, 1, 2}
    # Galois closure pulls in the conjugate place over 7
    assert build_S(qsqrt2_ext, qsqrt2_ext.element("gen7")) == {0, 1, 3, 4}


def test_golden_ratio_value(qsqrt5):
    res = extremal_m1(qsqrt5, qsqrt5.element("golden"))
    assert ball_close(res.total, 2 * math.log(GOLDEN), 1e-9)
    assert len(res.parts) == 1
    assert res.parts[0].subfield.name == "Q(sqrt5)"
    assert res.certified


def test_surd_values(qsqrt2, qbiquad):
    res = extremal_m1(qsqrt2, qsqrt2.element("sqrt2"))
    assert ball_close(res.total, LOG2, 1e-9)
    assert [p.subfield.name for p in res.parts] == ["Q"]
    res6 = extremal_m1(qbiquad, qbiquad.element("sqrt6"))
    assert ball_close(res6.total, math.log(6), 1e-9)
    assert [p.subfield.name for p in res6.parts] == ["Q"]


def test_zero_vector(qsqrt2):
    res = extremal_m1(qsqrt2, qsqrt2.zero_vector())
    assert float(res.total.mid) == 0.0
    assert res.parts == []


def test_norm_seven_example(qsqrt2_ext):
    # m(3+sqrt2) = deg * h1 = 2 log 7; both conjugates exceed 1 in modulus
    res = extremal_m1(qsqrt2_ext, qsqrt2_ext.element("gen7"))
    assert ball_close(res.total, 2 * math.log(7), 1e-9)
    assert res.certified


def test_pisot_values_match_closed_form(qsqrt5, qsqrt2, qbiquad):
    cases = [
        (qsqrt5, "golden"),
        (qsqrt2, "silver"),
        (qbiquad, "unit23"),
        (qbiquad, "pisot6"),
    ]
    for fix, name in cases:
        res = extremal_m1(fix, fix.element(name))
        expect = closed_form_check(fix.element(name), "pisot_salem", fix.pisot_houses[name])
        assert abs(float(res.total.mid - expect.mid)) <= 1e-9


def test_closed_form_surd(qsqrt2, q):
    assert ball_close(closed_form_check(qsqrt2.element("sqrt2"), "surd"), LOG2, 1e-12)
    assert ball_close(closed_form_check(q.element("two"), "surd"), 2 * LOG2, 1e-12)
    with pytest.raises(UsageError):
        closed_form_check(qsqrt2.element("silver"), "surd")
    with pytest.raises(UsageError):
        closed_form_check(qsqrt2.element("silver"), "pisot_salem")
    with pytest.raises(UsageError):
        closed_form_check(qsqrt2.element("silver"), "nonsense")


def test_sandwich_bounds(qbiquad, rng):
    for _ in range(10):
        vec = random_combo(qbiquad, rng)
        res = extremal_m1(qbiquad, vec)
        lo = float(res.sandwich_low.mid)
        hi = float(res.sandwich_high.mid)
        tot = float(res.total.mid)
        assert lo - 1e-9 <= tot <= hi + 1e-9


def test_homogeneity(qsqrt5, rng):
    for _ in range(6):
        vec = random_combo(qsqrt5, rng)
        r = Fraction(rng.randint(1, 9), rng.randint(1, 5))
        base = float(extremal_m1(qsqrt5, vec).total.mid)
        scaled = float(extremal_m1(qsqrt5, vec.power(r)).total.mid)
        assert abs(scaled - float(r) * base) <= 1e-9
        neg = float(extremal_m1(qsqrt5, vec.power(-r)).total.mid)
        assert abs(neg - float(r) * base) <= 1e-9


def test_triangle(qbiquad, rng):
    for _ in range(6):
        a = random_combo(qbiquad, rng)
        b = random_combo(qbiquad, rng)
        va = float(extremal_m1(qbiquad, a).total.mid)
        vb = float(extremal_m1(qbiquad, b).total.mid)
        vab = float(extremal_m1(qbiquad, a * b).total.mid)
        assert vab <= va + vb + 1e-9


def test_projection_compatibility(qsqrt2_ext, rng):
    system = build_alpha_v_system(qsqrt2_ext, qsqrt2_ext.core_s)
    for _ in range(6):
        vec = random_supported_element(qsqrt2_ext, rng)
        base = float(extremal_m1(qsqrt2_ext, vec).total.mid)
        for sf in qsqrt2_ext.subfields:
            proj = proj_sunits(qsqrt2_ext, qsqrt2_ext.core_s, system, proj_field(sf, vec))
            val = float(extremal_m1(qsqrt2_ext, proj).total.mid)
            assert val <= base + 1e-9


def test_parts_multiply_back(qbiquad, rng):
    for _ in range(6):
        vec = random_combo(qbiquad, rng)
        res = extremal_m1(qbiquad, vec)
        acc = qbiquad.zero_vector()
        for part in res.parts:
            acc = acc * part.vector
        for w in sorted(set(acc.support()) | vec.support()):
            d = acc.log_coord(w) - vec.log_coord(w)
            assert abs(float(d.mid)) <= float(d.rad) + 1e-30


def test_certificates_hold_after_repair(qbiquad, qsqrt2_ext, rng):
    for fix in (qbiquad, qsqrt2_ext):
        for _ in range(8):
            vec = random_combo(fix, rng)
            res = extremal_m1(fix, vec)
            assert res.certified, [
                (p.subfield.name, p.certificates) for p in res.parts
            ]


def test_repair_changes_nothing_about_total(qsqrt2_ext, rng):
    for _ in range(6):
        vec = random_supported_element(qsqrt2_ext, rng)
        with_repair = extremal_m1(qsqrt2_ext, vec, repair=True)
        without = extremal_m1(qsqrt2_ext, vec, repair=False)
        assert abs(float(with_repair.total.mid - without.total.mid)) <= 1e-9
        assert with_repair.lp_value == without.lp_value


def test_lp_total_matches_subgradient_oracle(qsqrt5, rng):
    for _ in range(5):
        vec = random_combo(qsqrt5, rng)
        S = build_S(qsqrt5, vec)
        prob, _, _ = decomposition_problem(qsqrt5, vec, S)
        exact = float(lp_core.solve_simplex(prob).value)
        approx = lp_core.solve_subgradient(prob).value
        assert abs(exact - approx) <= 1e-9
        res = extremal_m1(qsqrt5, vec)
        assert abs(float(res.total.mid) - exact) <= 1e-9


def test_s_expansion_retry(qsqrt2):
    # passing an arch-only S with a 2-supported element expands S once
    res = extremal_m1(qsqrt2, qsqrt2.element("sqrt2"), S={0, 1})
    assert ball_close(res.total, LOG2, 1e-9)
    assert 2 in res.s_used


def test_p_bounds(qsqrt5):
    lo, hi = extremal_p_bounds(qsqrt5.element("golden"), 2)
    assert float(hi.mid) == pytest.approx(2 * float(lo.mid))
    lo1, hi1 = extremal_p_bounds(qsqrt5.element("golden"), "inf")
    assert float(lo1.mid) == pytest.approx(math.log(GOLDEN))
