"""Tests for coefficient rings: membership, traces over A and the radical / non-Artinian probes."""

import pytest

from jacres.errors import InvalidInputError
from jacres.models import Outcome
from jacres.parser import load_system, parse_polynomial
from jacres.poly import Field, Ring, constant_term, format_poly, to_fraction
from jacres.relative import (
    CoeffKind,
    CoeffRingSpec,
    apolar_coefficient_ring,
    relative_member,
    relative_quotient,
    specialized_trace,
    theorem31_check,
    theorem33_probe,
    trace_over_A,
)


def _load(corpus_dir, name):
    return load_system(corpus_dir / f"{name}.sys")


def _poly(system, text):
    return parse_polynomial(text, system.ambient)


class TestCoefficientRings:
    """Kinds, Gorenstein detection and apolar rings."""

    def test_kinds(self, corpus_dir):
        assert _load(corpus_dir, "rel_u").coeff.kind is CoeffKind.DOMAIN_POLYNOMIAL
        assert _load(corpus_dir, "rel_art1").coeff.kind is CoeffKind.ARTINIAN_QUOTIENT
        assert CoeffRingSpec(Field()).kind is CoeffKind.FIELD

    def test_apolar_ring(self):
        uring = Ring(("u", "v"))
        delta = parse_polynomial("u^2 + v^2", uring)
        A = apolar_coefficient_ring(uring, delta)
        assert A.algebra().dim == 4
        assert A.is_gorenstein()

    def test_apolar_needs_nonzero(self):
        uring = Ring(("u",))
        with pytest.raises(InvalidInputError, match="nonzero"):
            apolar_coefficient_ring(uring, uring.poly_ring.zero)

    def test_non_gorenstein(self, make_system):
        system = make_system("Q[x]", "x^2", coeff="Q[u,v]/(u^2, u*v, v^2)")
        assert not system.coeff.is_gorenstein()


class TestMembership:
    """g in (F)A[[X]] through the flattened ideal."""

    def test_nilpotent_coefficient(self, make_system):
        system = make_system("Q[x]", "x^2", coeff="Q[u]/(u^2)")
        F, A = system.generators, system.coeff
        assert not relative_member(_poly(system, "2*x*u"), F, A)[0]
        assert relative_member(_poly(system, "x^2*u + u^2"), F, A)[0]

    def test_domain_coefficient(self, corpus_dir):
        system = _load(corpus_dir, "rel_u")
        assert relative_member(_poly(system, "x^4 - u^2"), system.generators, system.coeff)[0]
        assert not relative_member(_poly(system, "x"), system.generators, system.coeff)[0]


class TestTraceOverA:
    """Tr_{P/A}(g) on a free P."""

    def test_domain_truncated(self, corpus_dir):
        system = _load(corpus_dir, "rel_u")
        one = trace_over_A(system.generators, system.coeff, _poly(system, "1"))
        assert format_poly(one.trace) == "2"
        assert one.rank == 2
        assert one.precision == 6
        x2 = trace_over_A(system.generators, system.coeff, _poly(system, "x^2"))
        assert format_poly(x2.trace) == "2*u"

    def test_artinian(self, corpus_dir):
        system = _load(corpus_dir, "rel_art_x2")
        rt = trace_over_A(system.generators, system.coeff, _poly(system, "u"))
        assert format_poly(rt.trace) == "2*u"
        assert rt.precision is None

    @pytest.mark.parametrize(
        "name, rank, dim_a",
        [("rel_u", 2, 6), ("rel_art_x2", 2, 2), ("rel_art1", 2, 2), ("rel_apolar", 2, 4)],
    )
    def test_free_dimension(self, corpus_dir, name, rank, dim_a):
        system = _load(corpus_dir, name)
        rq = relative_quotient(system.generators, system.coeff)
        assert rq.free
        assert rq.rank == rank
        assert len(rq.coefficient_basis) == dim_a
        assert rq.algebra.dim == rank * dim_a

    def test_not_free(self, make_system):
        system = make_system("Q[x]", "x^2", "u*x", coeff="Q[u]/(u^2)")
        assert not relative_quotient(system.generators, system.coeff).free
        with pytest.raises(InvalidInputError, match="not free"):
            trace_over_A(system.generators, system.coeff, _poly(system, "1"))

    def test_specialized_trace_is_constant_term(self, corpus_dir):
        system = _load(corpus_dir, "rel_u")
        F, A = system.generators, system.coeff
        for text in ["1", "x^2", "1 + x"]:
            g = _poly(system, text)
            special = specialized_trace(F, A, g)
            over_a = trace_over_A(F, A, g).trace
            domain = over_a.ring.domain
            assert to_fraction(special, domain) == to_fraction(constant_term(over_a), domain)


class TestRadicalCheck:
    """J * sqrt(I) in I and J not in I."""

    def test_domain_asserted(self, corpus_dir):
        system = _load(corpus_dir, "rel_u")
        verdict = theorem31_check(system.generators, system.coeff, [_poly(system, "x^2 - u")])
        assert verdict.asserted
        assert verdict.outcome is Outcome.OBSERVED
        assert format_poly(verdict.jacobian) == "2*x"
        assert verdict.witnesses[0].power == 1

    def test_field(self, x2y3):
        x = x2y3.ring.gens[0]
        verdict = theorem31_check(x2y3.generators, CoeffRingSpec(x2y3.field), [x])
        assert verdict.asserted
        assert verdict.rank == 6
        assert verdict.witnesses[0].power == 2
        assert verdict.outcome is Outcome.OBSERVED

    def test_artinian_reported(self, corpus_dir):
        system = _load(corpus_dir, "rel_art1")
        verdict = theorem31_check(system.generators, system.coeff, [_poly(system, "u")])
        assert not verdict.asserted
        assert verdict.witnesses[0].power == 2
        assert not verdict.witnesses[0].jw_in_ideal
        assert verdict.outcome is Outcome.NOT_OBSERVED

    def test_infinite_fibre_not_applicable(self, corpus_dir):
        system = _load(corpus_dir, "rel_art2")
        verdict = theorem31_check(system.generators, system.coeff, [])
        assert verdict.rank is None
        assert verdict.outcome is Outcome.NOT_APPLICABLE

    def test_witness_outside_radical(self, make_system):
        system = make_system("Q[x,y]", "x^2", "y^2")
        with pytest.raises(InvalidInputError, match="has no power"):
            theorem31_check(system.generators, CoeffRingSpec(system.field), [_poly(system, "x + 1")])


class TestNonArtinianProbe:
    """J in I when R/I is not Artinian, for Artinian Gorenstein A."""

    def test_not_observed(self, corpus_dir):
        system = _load(corpus_dir, "rel_art2")
        report = theorem33_probe(system.generators, system.coeff)
        assert not report.artinian
        assert format_poly(report.jacobian) == "u"
        assert report.non_artinian_outcome is Outcome.NOT_OBSERVED
        assert report.equivalence_outcome is Outcome.NOT_OBSERVED
        assert report.note

    def test_observed(self, corpus_dir):
        system = _load(corpus_dir, "rel_art3")
        report = theorem33_probe(system.generators, system.coeff)
        assert not report.artinian
        assert report.jacobian_in_ideal
        assert report.non_artinian_outcome is Outcome.OBSERVED
        assert report.equivalence_outcome is Outcome.OBSERVED
        assert report.note is None

    def test_apolar_artinian(self, corpus_dir):
        system = _load(corpus_dir, "rel_apolar")
        report = theorem33_probe(system.generators, system.coeff)
        assert report.artinian
        assert not report.jacobian_in_ideal
        assert report.non_artinian_outcome is Outcome.NOT_APPLICABLE
        assert report.equivalence_outcome is Outcome.OBSERVED

    def test_field_delegates_to_jacobian_test(self, make_system):
        system = make_system("Q[x,y]", "x", "x*y")
        report = theorem33_probe(system.generators, CoeffRingSpec(system.field))
        assert not report.artinian
        assert report.non_artinian_outcome is Outcome.OBSERVED

    def test_domain_rejected(self, corpus_dir):
        system = _load(corpus_dir, "rel_u")
        with pytest.raises(InvalidInputError, match="Artinian coefficient ring"):
            theorem33_probe(system.generators, system.coeff)

    def test_non_gorenstein_rejected(self, make_system):
        system = make_system("Q[x]", "x^2", coeff="Q[u,v]/(u^2, u*v, v^2)")
        with pytest.raises(InvalidInputError, match="not Gorenstein"):
            theorem33_probe(system.generators, system.coeff)
