"""Tests for fields, rings, printing, Jacobians and arcs."""

import math
from fractions import Fraction

import pytest

from jacres.errors import InvalidInputError
from jacres.parser import parse_polynomial
from jacres.poly import (
    Arc,
    Field,
    FieldKind,
    Ring,
    arc_ring,
    compose_arc,
    embed,
    format_poly,
    hessian_det,
    hessian_rank0,
    jacobian_data,
    monomials_of_degree,
    order,
    restrict,
    truncate,
)


class TestField:
    """Q and prime fields."""

    def test_rationals(self):
        field = Field()
        assert field.kind is FieldKind.RATIONALS
        assert str(field) == "Q"

    def test_prime_field(self):
        field = Field(7)
        assert field.kind is FieldKind.PRIME
        assert str(field) == "F7"
        assert field.element(9) == field.domain(2)

    def test_non_prime_rejected(self):
        with pytest.raises(InvalidInputError, match="prime"):
            Field(6)

    def test_non_invertible_denominator(self):
        with pytest.raises(InvalidInputError, match="not defined"):
            Field(5).element(Fraction(1, 5))


class TestRing:
    """Ordered variable lists."""

    def test_str(self):
        assert str(Ring(("x", "y"))) == "Q[x,y]"
        assert str(Ring(("u",), Field(3))) == "F3[u]"

    def test_duplicate_variables(self):
        with pytest.raises(InvalidInputError, match="duplicate"):
            Ring(("x", "x"))

    def test_no_variables(self):
        with pytest.raises(InvalidInputError):
            Ring(())

    def test_extend(self):
        assert Ring(("x",)).extend(["u", "v"]).variables == ("x", "u", "v")


class TestFormatPoly:
    """Canonical printing."""

    @pytest.mark.parametrize(
        "text, expected",
        [
            ("x^2 - y^3", "-y^3 + x^2"),
            ("6*x*y^2", "6*x*y^2"),
            ("0", "0"),
            ("1/2*x + 3", "1/2*x + 3"),
            ("-x", "-x"),
        ],
    )
    def test_canonical_text(self, text, expected):
        ring = Ring(("x", "y"))
        assert format_poly(parse_polynomial(text, ring)) == expected

    def test_prime_field_residues(self):
        ring = Ring(("x",), Field(5))
        assert format_poly(parse_polynomial("-x", ring)) == "4*x"


class TestTruncationAndOrder:
    """m-adic order and truncation."""

    def test_order(self):
        ring = Ring(("x", "y"))
        assert order(parse_polynomial("x^3 + x*y", ring)) == 2
        assert order(ring.poly_ring.zero) == math.inf

    def test_truncate(self):
        ring = Ring(("x", "y"))
        p = parse_polynomial("1 + x + x*y + y^3", ring)
        assert truncate(p, 2) == parse_polynomial("1 + x", ring)

    def test_monomials_of_degree(self):
        assert monomials_of_degree(2, 2) == [(2, 0), (1, 1), (0, 2)]


class TestEmbedRestrict:
    """Moving polynomials between rings by variable name."""

    def test_embed_then_restrict(self):
        small = Ring(("x",))
        big = Ring(("x", "u"))
        p = parse_polynomial("x^2 + 3*x", small)
        q = embed(p, big.poly_ring)
        assert format_poly(q) == "x^2 + 3*x"
        assert restrict(q, small.poly_ring) == p

    def test_restrict_drops_terms_with_missing_variables(self):
        big = Ring(("x", "u"))
        small = Ring(("x",))
        p = parse_polynomial("x^2 - u + x*u", big)
        assert format_poly(restrict(p, small.poly_ring)) == "x^2"

    def test_embed_unknown_variable(self):
        p = parse_polynomial("y", Ring(("y",)))
        with pytest.raises(InvalidInputError, match="not in"):
            embed(p, Ring(("x",)).poly_ring)


class TestJacobian:
    """Jacobian determinant, minors and rank at 0."""

    def test_monomial_system(self, x2y3):
        data = jacobian_data(x2y3.generators)
        assert format_poly(data.det) == "6*x*y^2"
        assert data.rank0 == 0
        assert format_poly(data.minors[0][0]) == "3*y^2"
        assert format_poly(data.minors[1][1]) == "2*x"

    def test_rank_at_origin(self, make_system):
        system = make_system("Q[x,y]", "x", "y^2")
        assert jacobian_data(system.generators).rank0 == 1

    def test_non_square_rejected(self, make_system):
        system = make_system("Q[x,y]", "x^2")
        with pytest.raises(InvalidInputError, match="as many generators"):
            jacobian_data(system.generators)

    def test_selected_variables(self, make_system):
        system = make_system("Q[x]", "x^2 - u*x", coeff="Q[u]")
        data = jacobian_data(system.generators, variables=[0])
        assert format_poly(data.det) == "2*x - u"

    def test_hessian(self, make_system):
        f = make_system("Q[x,y,z]", "x^2 + y^2 + z^3").generators[0]
        assert format_poly(hessian_det(f)) == "24*z"
        assert hessian_rank0(f) == 2


class TestArcs:
    """Polynomial arcs through the origin."""

    def test_monomial_arc(self):
        arc = Arc.monomial(Field(), (1, 2), (1, 2))
        assert str(arc) == "(t, 2*t^2)"
        assert arc.order == 1

    def test_compose(self, x2y3):
        arc = Arc.monomial(Field(), (2, 3), (1, 1))
        composite, k = compose_arc(x2y3.generators[1], arc)
        assert format_poly(composite) == "t^9"
        assert k == 9

    def test_compose_to_zero(self, make_system):
        p = make_system("Q[x,y]", "x - y").generators[0]
        arc = Arc.monomial(Field(), (1, 1), (1, 1))
        composite, k = compose_arc(p, arc)
        assert not composite
        assert k == math.inf

    def test_constant_component_rejected(self):
        T = arc_ring(Field())
        with pytest.raises(InvalidInputError, match="constant term"):
            Arc((T.one + T.gens[0], T.gens[0]))

    def test_zero_arc_rejected(self):
        T = arc_ring(Field())
        with pytest.raises(InvalidInputError, match="nonzero component"):
            Arc((T.zero, T.zero))

    def test_arity_mismatch(self, x2y3):
        arc = Arc.monomial(Field(), (1,), (1,))
        with pytest.raises(InvalidInputError, match="components"):
            compose_arc(x2y3.generators[0], arc)
