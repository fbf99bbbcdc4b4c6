import random
from fractions import Fraction

import pytest

from crnkit import Polynomial, PolynomialParseError, PolynomialSystem, parse_polynomial, parse_system

from .support import random_polynomial

X = Polynomial.variable(2, 0)
Y = Polynomial.variable(2, 1)


def test_constructors_agree():
    assert Polynomial.monomial(2, (1, 0)) == X
    assert Polynomial.constant(2, Fraction(0)) == Polynomial.zero(2)
    assert X + X == Polynomial.monomial(2, (1, 0), 2)


def test_ring_axioms_randomized():
    rng = random.Random(20230817)
    for _ in range(60):
        p = random_polynomial(rng, 3)
        q = random_polynomial(rng, 3)
        r = random_polynomial(rng, 3)
        assert p + q == q + p
        assert p * q == q * p
        assert (p + q) + r == p + (q + r)
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r
        assert p - p == Polynomial.zero(3)
        assert p * Polynomial.constant(3, 1) == p


def test_power():
    assert (X + Y) ** 2 == X * X + X * Y * 2 + Y * Y
    assert (X + Y) ** 0 == Polynomial.constant(2, 1)


def test_derivative_product_rule_randomized():
    rng = random.Random(5)
    for _ in range(40):
        p = random_polynomial(rng, 2)
        q = random_polynomial(rng, 2)
        i = rng.randrange(2)
        assert (p * q).derivative(i) == p.derivative(i) * q + p * q.derivative(i)


def test_derivative_matches_finite_difference():
    rng = random.Random(99)
    h = 1e-5
    for _ in range(20):
        p = random_polynomial(rng, 2, max_degree=3)
        point = [Fraction(rng.randint(-2, 2)), Fraction(rng.randint(-2, 2))]
        for i in range(2):
            exact = float(p.derivative(i).evaluate(point))
            hi = [float(v) for v in point]
            lo = [float(v) for v in point]
            hi[i] += h
            lo[i] -= h
            approx = (_eval_float(p, hi) - _eval_float(p, lo)) / (2 * h)
            assert abs(approx - exact) <= 1e-4 * max(1.0, abs(exact))


def _eval_float(p: Polynomial, point) -> float:
    total = 0.0
    for exps, coeff in p.sorted_terms():
        term = float(coeff)
        for value, e in zip(point, exps):
            term *= value**e
        total += term
    return total


def test_substitute_scalar():
    p = X * X + Y * 3
    assert p.substitute({0: Fraction(2)}) == Polynomial.constant(2, 4) + Y * 3


def test_substitute_polynomial():
    p = X * Y
    # y := 2x turns xy into 2x^2
    assert p.substitute({1: X * 2}) == Polynomial.monomial(2, (2, 0), 2)


def test_evaluate_exact():
    p = X * X * Fraction(1, 2) + Y
    assert p.evaluate([Fraction(3), Fraction(1, 4)]) == Fraction(19, 4)


def test_render_canonical_order():
    p = Polynomial.monomial(2, (0, 2), 2) + Polynomial.monomial(2, (1, 1), -3)
    assert p.render(("x", "y")) == "-3*x*y + 2*y^2"


def test_render_zero_and_ones():
    assert Polynomial.zero(1).render(("x",)) == "0"
    assert (Polynomial.variable(1, 0) * -1).render(("x",)) == "-x"
    assert Polynomial.monomial(1, (2,), Fraction(5, 3)).render(("x",)) == "5/3*x^2"


def test_parse_round_trip_randomized():
    rng = random.Random(7)
    names = ("x", "y", "z")
    for _ in range(50):
        p = random_polynomial(rng, 3)
        assert parse_polynomial(p.render(names), names) == p


def test_parse_implicit_multiplication_and_powers():
    names = ("x", "y")
    assert parse_polynomial("2x y^2", names) == Polynomial.monomial(2, (1, 2), 2)
    assert parse_polynomial("x(x + y)", names) == X * X + X * Y
    assert parse_polynomial("3/2 x", names) == X * Fraction(3, 2)


def test_parse_unknown_variable():
    with pytest.raises(PolynomialParseError, match="unknown variable"):
        parse_polynomial("x + q", ("x", "y"))


def test_parse_malformed():
    for bad in ("x +", "^2", "(x", "x^-1"):
        with pytest.raises(PolynomialParseError):
            parse_polynomial(bad, ("x", "y"))


def test_system_from_strings_and_render():
    sys_ = PolynomialSystem.from_strings(("x", "y"), ["y^2 - x*y", "x^2"])
    assert sys_.render() == "{-x*y + y^2, x^2}"


def test_system_text_round_trip():
    text = "vars x y\n# comment\n-3*x*y + 2*y^2\n3*x^2 - 2*x*y\n"
    sys_ = parse_system(text)
    assert sys_.variables == ("x", "y")
    assert sys_.components[0].coefficient((1, 1)) == -3
    again = parse_system(
        "vars " + " ".join(sys_.variables) + "\n"
        + "\n".join(c.render(sys_.variables) for c in sys_.components)
    )
    assert again == sys_


def test_system_json_round_trip(example_system):
    data = example_system.to_dict()
    assert PolynomialSystem.from_dict(data) == example_system


def test_system_dimension_mismatch():
    with pytest.raises(ValueError):
        PolynomialSystem(("x",), (Polynomial.zero(2),))
