"""Matroidal enumeration, critical primes, extension fields, coercion."""

from fractions import Fraction

import pytest

from chainflow.errors import InputError
from chainflow.flows import classify
from chainflow.monomial import order_complex_resolution, render_monomial
from chainflow.scalars import GF, QQ, FunctionField
from chainflow.splittings import (
    build_extension_field, build_stratum_splitting, coerce_complex,
    coerce_homotopy, critical_analysis, enumerate_matroidal, matroidal_count,
    stratum_core, weight_name,
)
from chainflow import cyclefam
import golden_data as G


@pytest.fixture(scope="module")
def cycle3_strata():
    I = cyclefam.build_Ip(3).ideal
    s = order_complex_resolution(I, QQ)
    out = {}
    for a in s.occupied():
        tag = render_monomial(I.names, s.poset.elements[a])
        out[tag] = s.stratum(a).complex
    return out


class TestMatroidalEnumeration:
    def test_counts_match_golden(self, cycle3_strata):
        for tag, want in G.MATROIDAL_COUNTS.items():
            assert matroidal_count(cycle3_strata[tag]) == want, tag

    def test_enumeration_is_deterministic_and_sized(self, cycle3_strata):
        hexagon = cycle3_strata[G.MTOP]
        enum1 = enumerate_matroidal(hexagon)
        enum2 = enumerate_matroidal(hexagon)
        assert len(enum1) == 72
        assert [c for c, _ in enum1] == [c for c, _ in enum2]

    def test_each_choice_is_a_splitting(self, cycle3_strata):
        edge = cycle3_strata[G.M12]
        for choice, D in enumerate_matroidal(edge):
            cls = classify(edge, D)
            assert cls.is_splitting, choice


class TestCriticalAnalysis:
    def test_cycle3_golden(self):
        crit = critical_analysis(dict(G.MATROIDAL_COUNTS))
        assert crit["critical_primes"] == G.CRITICAL_PRIMES
        for p in (2, 3):
            per = crit["per_prime"][p]
            assert per["critical_strata"] == G.CRITICAL_STRATA[p]
            assert per["transcendence_degree"] == G.TRANSCENDENCE_DEGREE[p]

    def test_with_characteristic(self):
        crit = critical_analysis(dict(G.MATROIDAL_COUNTS), 3)
        assert crit["critical_strata"] == G.CRITICAL_STRATA[3]
        assert crit["transcendence_degree"] == 71
        crit5 = critical_analysis(dict(G.MATROIDAL_COUNTS), 5)
        assert crit5["critical_strata"] == []
        assert crit5["transcendence_degree"] == 0


class TestExtensionField:
    def test_no_critical_stratum_stays_prime_field(self):
        field, plan = build_extension_field({"a": 3}, 2, ["a"])
        assert field is GF(2)
        assert plan.weights["a"] == [field.inv(3 % 2)] * 3

    def test_critical_stratum_gets_affine_weights(self):
        field, plan = build_extension_field({"a": 4, "b": 3}, 2, ["a", "b"])
        assert isinstance(field, FunctionField)
        assert field.names == tuple(weight_name("a", j) for j in (1, 2, 3))
        ws = plan.weights["a"]
        assert len(ws) == 4
        total = field.zero
        for w in ws:
            total = field.add(total, w)
        assert field.eq(total, field.one)
        # non-critical stratum keeps the constant weight 1/3 = 1 in GF(2)
        for w in plan.weights["b"]:
            assert field.eq(w, field.one)

    def test_transcendence_degrees_match_golden(self):
        for p in (2, 3):
            field, plan = build_extension_field(
                dict(G.MATROIDAL_COUNTS), p, list(G.MATROIDAL_COUNTS))
            assert plan.transcendence_degree == G.TRANSCENDENCE_DEGREE[p]
            assert len(field.names) == G.TRANSCENDENCE_DEGREE[p]

    def test_nonprime_rejected(self):
        with pytest.raises(InputError):
            build_extension_field({"a": 2}, 4, ["a"])


class TestCoercion:
    def test_rationals_do_not_coerce_to_char_p(self, cycle3_strata):
        field, _ = build_extension_field({"a": 2}, 2, ["a"])
        with pytest.raises(InputError):
            coerce_complex(cycle3_strata[G.M12], field)

    def test_prime_field_complex_coerces(self):
        I = cyclefam.build_Ip(3).ideal
        s = order_complex_resolution(I, GF(2))
        field, _ = build_extension_field({"a": 2}, 2, ["a"])
        for a in s.occupied():
            c = s.stratum(a).complex
            if c.ranks == [1, 2]:
                cc = coerce_complex(c, field)
                assert cc.ring.field is field
                assert cc.validate() == []
                for _, D in enumerate_matroidal(c):
                    DD = coerce_homotopy(D, cc)
                    assert classify(cc, DD).is_splitting
                return
        pytest.fail("no edge-pair stratum found")


class TestStratumCore:
    def test_core_ranks_are_homology_ranks(self, cycle3_strata):
        from chainflow.complexes import homology_ranks
        for tag, c in cycle3_strata.items():
            sp = build_stratum_splitting(c, 0, "matroidal_average")
            cores = stratum_core(c, sp.homotopy)
            hom = homology_ranks(c)
            assert [len(v) for v in cores] == hom, tag

    def test_core_vectors_are_cycles(self, cycle3_strata):
        hexagon = cycle3_strata[G.MTOP]
        sp = build_stratum_splitting(hexagon, 0, "matroidal_average")
        cores = stratum_core(hexagon, sp.homotopy)
        field = hexagon.ring.field
        for n in range(1, hexagon.top + 1):
            d = hexagon.d(n).scalar_rows()
            for v in cores[n]:
                img = [sum((field.mul(row[j], v[j]) for j in range(len(v))),
                           field.zero if hasattr(field, "zero") else 0)
                       for row in d]
                assert all(field.is_zero(x) for x in img)
