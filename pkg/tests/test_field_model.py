"""Fixture loading, validation errors, the Galois action, and subfield data."""

import math
from fractions import Fraction

import pytest

from sunorm.errors import (
    FixtureParseError,
    InvariantViolation,
    PrecisionError,
    UsageError,
)
from sunorm.field_model import (
    act,
    enumerate_subgroups,
    load_fixture,
    shipped_fixture_path,
    subfield_lattice,
)
from sunorm.heights import h_p

from conftest import ball_close, raw_fixture, random_combo

LOG_SQRT2 = math.log(2) / 2


def test_all_shipped_fixtures_load(fixtures):
    for name, fix in fixtures.items():
        assert len(fix.s_unit_basis) == len(fix.core_s) - 1
        assert len(fix.action) == fix.degree


def test_q_fixture_dimension(q):
    # dim V_{Q,{inf,2}} = #S - 1 = 1
    assert len(q.s_unit_basis) == 1
    assert subfield_lattice(q)[0].degree == 1
    assert len(subfield_lattice(q)) == 1


def test_local_degree_sums(qsqrt2):
    over2 = [qsqrt2.place(w) for w in qsqrt2.places_over[2]]
    assert sum(p.local_degree for p in over2) == 2
    assert sum(qsqrt2.place(w).local_degree for w in qsqrt2.arch_ids) == 2


def test_product_formula_violation_rejected():
    raw = raw_fixture("qsqrt2")
    # knock the silver unit's first archimedean log off by 1e-3
    bad = raw["s_unit_basis"][0]["arch"]["0"]
    raw["s_unit_basis"][0]["arch"]["0"] = bad[:10] + "9" + bad[11:]
    with pytest.raises(InvariantViolation) as err:
        load_fixture(raw)
    assert "product formula" in str(err.value)
    assert "s_unit_basis[0]" in str(err.value)


def test_insufficient_precision_rejected():
    raw = raw_fixture("qsqrt2")
    # six-digit logs cannot certify the product formula at 1e-12
    raw["s_unit_basis"][0]["arch"] = {"0": "0.881374", "1": "-0.881374"}
    with pytest.raises(PrecisionError):
        load_fixture(raw)


def test_degree_sum_violation_rejected():
    raw = raw_fixture("qsqrt2")
    raw["places"][2]["local_degree"] = 1
    with pytest.raises(InvariantViolation) as err:
        load_fixture(raw)
    assert "local degree sum" in str(err.value)


def test_bad_permutation_rejected():
    raw = raw_fixture("qsqrt2")
    raw["galois"]["generators"] = [[1, 1, 2]]
    with pytest.raises(InvariantViolation):
        load_fixture(raw)


def test_fiber_breaking_permutation_rejected():
    raw = raw_fixture("qsqrt2")
    raw["galois"]["generators"] = [[2, 1, 0]]  # moves an arch place onto the 2-adic one
    with pytest.raises(InvariantViolation) as err:
        load_fixture(raw)
    assert "galois" in str(err.value)


def test_incomplete_subgroup_list_rejected():
    raw = raw_fixture("qbiquad")
    raw["subgroups"] = raw["subgroups"][:3]
    with pytest.raises(InvariantViolation) as err:
        load_fixture(raw)
    assert "subgroup list" in str(err.value)


def test_dependent_basis_rejected():
    raw = raw_fixture("qbiquad")
    # replace sqrt3 by sqrt2 (duplicate direction, same fin support as sqrt2)
    raw["s_unit_basis"][4] = raw["s_unit_basis"][3]
    with pytest.raises(InvariantViolation):
        load_fixture(raw)


def test_parse_error():
    with pytest.raises(FixtureParseError):
        load_fixture("{not json")
    with pytest.raises(FixtureParseError):
        load_fixture({"label": "x"})


def test_act_identity(qsqrt2):
    silver = qsqrt2.element("silver")
    assert act(qsqrt2.action.identity_index, silver).eq3(silver) is True


def test_act_swaps_conjugate_logs(qsqrt2):
    # sigma(1+sqrt2) = 1-sqrt2 whose modulus is sqrt2-1
    silver = qsqrt2.element("silver")
    moved = act(1, silver)  # the non-identity element
    assert 1 != qsqrt2.action.identity_index
    assert ball_close(moved.arch[0], -math.log(1 + math.sqrt(2)), 1e-14)
    assert ball_close(moved.arch[1], math.log(1 + math.sqrt(2)), 1e-14)


def test_act_fixes_sqrt2(qsqrt2):
    s2 = qsqrt2.element("sqrt2")
    for sigma in range(len(qsqrt2.action)):
        assert act(sigma, s2).eq3(s2) is True


def test_act_preserves_heights(qsqrt2, rng):
    for _ in range(10):
        vec = random_combo(qsqrt2, rng)
        h0 = h_p(vec, 1).value
        for sigma in range(len(qsqrt2.action)):
            h1 = h_p(act(sigma, vec), 1).value
            d = h1 - h0
            assert abs(float(d.mid)) <= float(d.rad) + 1e-12


def test_subfield_lattice_sizes(fixtures):
    assert len(subfield_lattice(fixtures["qsqrt2"])) == 2
    assert len(subfield_lattice(fixtures["qsqrt5"])) == 2
    lattice = subfield_lattice(fixtures["qbiquad"])
    assert len(lattice) == 5
    assert [sf.degree for sf in lattice] == [1, 2, 2, 2, 4]


def test_enumerate_subgroups_matches_brute_force(qbiquad):
    subs = enumerate_subgroups(qbiquad.action)
    assert len(subs) == 5
    assert {len(s) for s in subs} == {1, 2, 4}
    listed = {sf.elements for sf in qbiquad.subfields}
    assert set(subs) == listed


def test_membership_by_fiber_constancy(qbiquad):
    silver = qbiquad.element("silver")  # lives in Q(sqrt2)
    f_sqrt2 = qbiquad.subfield_by("Q(sqrt2)")
    f_sqrt3 = qbiquad.subfield_by("Q(sqrt3)")
    f_q = qbiquad.subfield_by("Q")
    assert f_sqrt2.constant_on_fibers(silver)
    assert not f_sqrt3.constant_on_fibers(silver)
    assert not f_q.constant_on_fibers(silver)
    assert f_q.constant_on_fibers(qbiquad.element("sqrt6"))


def test_w_basis_dimension(qbiquad):
    # dim W_F over the core S equals (#fibers in S) - 1
    for sf in qbiquad.subfields:
        basis = sf.w_basis(qbiquad.core_s)
        assert len(basis) == len(sf.fibers_within(qbiquad.core_s)) - 1


def test_basis_product_formula_all_fixtures(fixtures):
    for fix in fixtures.values():
        for vec in fix.s_unit_basis:
            resid = vec.product_formula_residual()
            assert abs(float(resid.mid)) <= float(resid.rad) + 1e-12


def test_element_resolution(qsqrt2):
    by_name = qsqrt2.element("sqrt2")
    by_coords = qsqrt2.element("0,1")
    assert by_name.eq3(by_coords) is True
    with pytest.raises(UsageError):
        qsqrt2.element("nope")
    with pytest.raises(UsageError):
        qsqrt2.combo([1])


def test_vector_algebra(qsqrt2):
    s2 = qsqrt2.element("sqrt2")
    silver = qsqrt2.element("silver")
    two = qsqrt2.element("two")
    assert (s2 * s2).eq3(two) is True
    assert (two.power(Fraction(1, 2))).close_to(s2, 1e-45)
    assert (silver / silver).close_to(qsqrt2.zero_vector(), 1e-45)
    prod = s2 * silver
    assert prod.fin == {2: Fraction(1)}
    assert prod.basis_coords == (Fraction(1), Fraction(1))


def test_prime_generator_validation():
    raw = raw_fixture("qsqrt2")
    raw["prime_generators"]["2"]["vector"] = {
        "fin": {"2": "-1"},
        "arch": raw["prime_generators"]["2"]["vector"]["arch"],
    }
    with pytest.raises(InvariantViolation) as err:
        load_fixture(raw)
    assert "prime generator" in str(err.value)
