"""Tests for arcs, Samuel bounds, the Jacobian closure certificate and the Hessian criterion."""

import math
from fractions import Fraction

import pytest

from jacres.closure import arc_report, default_arcs, hessian_criterion, loja_certificate, samuel_bounds
from jacres.config import ComputeLimits
from jacres.errors import InvalidInputError
from jacres.models import LojaCase
from jacres.parser import load_system, parse_arcs, parse_polynomial
from jacres.poly import Field, format_poly


def _arc(text, field=Field()):
    return parse_arcs(f"arc: {text}\n", field)[0]


class TestArcReport:
    """Orders along an arc and the Cramer identity."""

    def test_orders(self, x2y3):
        report = arc_report(x2y3.generators, _arc("t^2, t^3"))
        assert report.generator_orders == (4, 9)
        assert report.min_order == 4
        assert report.u_order == 8
        assert report.ratio == 2
        assert report.cramer_ok is True

    def test_ratio(self, x2y3):
        report = arc_report(x2y3.generators, _arc("t^3, t^2"))
        assert report.generator_orders == (6, 6)
        assert report.ratio == Fraction(7, 6)

    def test_non_monomial_arc(self, x2y3):
        report = arc_report(x2y3.generators, _arc("t + t^2, 2*t"))
        assert report.min_order == 2
        assert report.cramer_ok is True

    def test_unit_element(self, make_system):
        system = make_system("Q[x,y]", "x", "y")
        report = arc_report(system.generators, _arc("t, t^2"), u=system.ring.poly_ring.one)
        assert report.u_order == 0
        assert report.ratio == 0

    def test_arc_inside_zero_set(self, make_system):
        system = make_system("Q[x,y]", "x - y", "x^2 - y^2")
        report = arc_report(system.generators, _arc("t, t"))
        assert report.min_order == math.inf
        assert report.ratio is None

    def test_non_square_needs_u(self, make_system):
        system = make_system("Q[x,y]", "x^2")
        with pytest.raises(InvalidInputError, match="as many generators"):
            arc_report(system.generators, _arc("t, t"))
        u = parse_polynomial("x*y", system.ring)
        report = arc_report(system.generators, _arc("t, t"), u=u)
        assert report.cramer_ok is None
        assert report.ratio == 1


class TestDefaultArcs:
    """Monomial arcs with coprime weights."""

    def test_weights(self):
        arcs = default_arcs(2, Field(), ComputeLimits(max_arc_weight=2))
        assert [str(a) for a in arcs] == ["(t, 2*t)", "(t, 2*t^2)", "(t^2, 2*t)"]

    def test_prime_field_coefficients_nonzero(self):
        arcs = default_arcs(3, Field(2), ComputeLimits(max_arc_weight=1))
        assert len(arcs) == 1
        assert all(c for c in arcs[0].components)


class TestSamuelBounds:
    """lower <= v(u) <= upper, exact for monomial ideals."""

    def test_sandwich_meets(self, make_system):
        system = make_system("Q[x,y]", "x^3", "y^3")
        u = parse_polynomial("9*x^2*y^2", system.ring)
        bounds = samuel_bounds(system.generators, u, [_arc("t, t")], mcap=3)
        assert bounds.lower == Fraction(4, 3)
        assert bounds.lower_power == 3
        assert bounds.upper == Fraction(4, 3)
        assert bounds.exact == Fraction(4, 3)
        assert bounds.value == Fraction(4, 3)

    def test_small_mcap_gives_weaker_lower_bound(self, make_system):
        system = make_system("Q[x,y]", "x^3", "y^3")
        u = parse_polynomial("x^2*y^2", system.ring)
        bounds = samuel_bounds(system.generators, u, [], mcap=2)
        assert bounds.lower == 1
        assert bounds.upper == math.inf
        assert bounds.value == Fraction(4, 3)

    def test_non_monomial_has_no_exact_value(self, make_system):
        system = make_system("Q[x,y]", "x^2 + y^2", "x*y")
        u = parse_polynomial("x^2", system.ring)
        bounds = samuel_bounds(system.generators, u, [_arc("t, 2*t")], mcap=2)
        # x^2 is integral over I but x^4 is not in I^2
        assert bounds.exact is None
        assert bounds.lower == Fraction(1, 2)
        assert bounds.upper == 1
        assert bounds.value is None

    def test_zero(self, x2y3):
        bounds = samuel_bounds(x2y3.generators, x2y3.ring.poly_ring.zero)
        assert bounds.lower == math.inf

    def test_mcap_must_be_positive(self, x2y3):
        with pytest.raises(InvalidInputError, match="mcap"):
            samuel_bounds(x2y3.generators, x2y3.ring.gens[0], mcap=0)


class TestLojaCertificate:
    """theta with J in the closure of I^theta."""

    def test_order_three_generators(self, corpus_dir):
        cert = loja_certificate(load_system(corpus_dir / "x3y3.sys").generators)
        assert cert.case is LojaCase.TWO
        assert cert.s == 5
        assert cert.strict
        assert cert.theta_lb == Fraction(6, 5)
        assert cert.theta_refined == Fraction(6, 5)
        assert cert.jacobian_in_closure
        assert cert.bounds.exact == Fraction(4, 3)

    def test_order_two_generators(self, corpus_dir):
        cert = loja_certificate(load_system(corpus_dir / "x2y2.sys").generators)
        assert cert.theta_lb == 1
        assert not cert.strict
        assert cert.bounds.exact == 1

    def test_three_variables(self, corpus_dir):
        cert = loja_certificate(load_system(corpus_dir / "x2y2z2.sys").generators)
        assert cert.case is LojaCase.HIGHER
        assert cert.s == 4
        assert cert.theta_lb == Fraction(5, 4)
        assert cert.bounds.exact == Fraction(3, 2)

    def test_no_statement(self, corpus_dir):
        cert = loja_certificate(load_system(corpus_dir / "x_y2.sys").generators)
        assert cert.case is LojaCase.NO_STATEMENT
        assert cert.theta_lb is None
        assert cert.note

    def test_coordinate_reduction(self, corpus_dir):
        cert = loja_certificate(load_system(corpus_dir / "x_y2_z2.sys").generators)
        assert cert.rank0 == 1
        assert cert.case is LojaCase.TWO
        assert cert.reduced_variables == ("x",)
        assert cert.s == 3
        assert cert.theta_lb == 1
        assert cert.jacobian_in_closure

    def test_non_coordinate_rank_needs_reduction(self, make_system):
        system = make_system("Q[x,y,z]", "x + y^2", "y^2", "z^2")
        with pytest.raises(InvalidInputError, match="reduction required"):
            loja_certificate(system.generators)

    def test_explicit_arcs(self, corpus_dir):
        system = load_system(corpus_dir / "x3y3.sys")
        cert = loja_certificate(system.generators, arcs=[_arc("t, t")], mcap=3)
        assert cert.bounds.upper == Fraction(4, 3)
        assert cert.bounds.arcs_used == 1

    def test_prime_field_rejected(self, corpus_dir):
        with pytest.raises(InvalidInputError, match="characteristic 0"):
            loja_certificate(load_system(corpus_dir / "f5_x2y3.sys").generators)

    def test_positive_dimension_rejected(self, make_system):
        system = make_system("Q[x,y,z]", "x^2", "y^2", "x*z^2 - y*z^2")
        with pytest.raises(InvalidInputError, match="m-primary"):
            loja_certificate(system.generators)


class TestHessianCriterion:
    """Isolated iff the Hessian is outside the Jacobian ideal."""

    @pytest.mark.parametrize("k", [2, 3, 4, 5])
    def test_morse_type_family(self, make_system, k):
        f = make_system("Q[x,y,z]", f"x^2 + y^2 + z^{k}").generators[0]
        verdict = hessian_criterion(f)
        assert verdict.isolated
        assert not verdict.hessian_in_jacobian_ideal
        assert verdict.milnor_number == k - 1
        assert verdict.jacobian_ideal_closed is True
        assert verdict.morse_type

    def test_hessian_value(self, corpus_dir):
        verdict = hessian_criterion(load_system(corpus_dir / "hess_z3.sys").generators[0])
        assert format_poly(verdict.hessian) == "24*z"
        assert verdict.hessian_rank0 == 2

    def test_cusp(self, corpus_dir):
        verdict = hessian_criterion(load_system(corpus_dir / "cusp.sys").generators[0])
        assert verdict.isolated
        assert verdict.milnor_number == 2
        assert verdict.jacobian_ideal_closed is True

    def test_not_closed_when_hessian_degenerate(self, make_system):
        verdict = hessian_criterion(make_system("Q[x,y]", "x^3 + y^3").generators[0])
        assert verdict.isolated
        assert verdict.milnor_number == 4
        assert verdict.jacobian_ideal_closed is False
        assert not verdict.morse_type

    def test_non_isolated(self, corpus_dir):
        verdict = hessian_criterion(load_system(corpus_dir / "hess_line.sys").generators[0])
        assert not verdict.isolated
        assert verdict.hessian_in_jacobian_ideal
        assert verdict.milnor_number is None
        assert verdict.jacobian_ideal_closed is None

    @pytest.mark.parametrize(
        "text, message",
        [
            ("x + y^2", "smooth"),
            ("1 + x^2", "vanish"),
            ("0", "zero polynomial"),
        ],
    )
    def test_rejected(self, make_system, text, message):
        f = make_system("Q[x,y]", text).generators[0]
        with pytest.raises(InvalidInputError, match=message):
            hessian_criterion(f)

    def test_prime_field_rejected(self, make_system):
        f = make_system("F5[x,y]", "x^2 + y^3").generators[0]
        with pytest.raises(InvalidInputError, match="characteristic 0"):
            hessian_criterion(f)
