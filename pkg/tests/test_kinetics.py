import random
from fractions import Fraction
from itertools import product

import pytest

from crnkit import (
    NotKineticError,
    Polynomial,
    PolynomialSystem,
    UnboundParameterError,
    canonical_realization,
    divergence,
    induced_kinetic_ode,
    negative_cross_effect,
    no_periodic_orbit_certificate,
    ode_variable_names,
    parse_network,
)

from .support import plant_cross_effect_violation, random_kinetic_system, random_network


def sys2(f1: str, f2: str) -> PolynomialSystem:
    return PolynomialSystem.from_strings(("x", "y"), [f1, f2])


# -- induced ODE ------------------------------------------------------------

def test_example_ode_integer_binding(example_network):
    system = induced_kinetic_ode(example_network, {"a": Fraction(2), "b": Fraction(3)})
    assert system == sys2("2*y^2 - 3*x*y", "3*x^2 - 2*x*y")


def test_example_ode_fractional_binding(example_network):
    system = induced_kinetic_ode(
        example_network, {"a": Fraction(1, 3), "b": Fraction(7, 5)}
    )
    assert system == sys2("1/3*y^2 - 7/5*x*y", "7/5*x^2 - 1/3*x*y")


def test_unbound_parameter_raises(example_network):
    with pytest.raises(UnboundParameterError, match="a"):
        induced_kinetic_ode(example_network, {"b": Fraction(1)})


def test_nonpositive_binding_rejected(example_network):
    with pytest.raises(ValueError):
        induced_kinetic_ode(example_network, {"a": Fraction(0), "b": Fraction(1)})


def test_inflow_only_network():
    system = induced_kinetic_ode(parse_network("0 ->[1] X"))
    assert system.components[0] == Polynomial.constant(1, 1)


def test_second_order_step():
    system = induced_kinetic_ode(parse_network("2X ->[3] Y"))
    assert system == PolynomialSystem.from_strings(("x", "y"), ["-6*x^2", "3*x^2"])


def test_variable_naming_lowercases_species():
    assert ode_variable_names(("X", "Y")) == ("x", "y")
    assert ode_variable_names(("A", "J")) == ("a", "j")
    # collision keeps original names
    assert ode_variable_names(("X", "x")) == ("X", "x")


# -- negative cross-effect --------------------------------------------------

def test_induced_odes_are_kinetic_randomized():
    rng = random.Random(314)
    for _ in range(40):
        system = random_kinetic_system(rng)
        assert negative_cross_effect(system).is_kinetic


def test_harmonic_oscillator_not_kinetic(oscillator_system):
    report = negative_cross_effect(oscillator_system)
    assert not report.is_kinetic
    violation = report.violations[0]
    assert violation.component == 1
    assert violation.exponents == (1, 0)
    assert violation.coefficient == -1


def test_lorenz_not_kinetic():
    system = PolynomialSystem.from_strings(
        ("x", "y", "z"),
        ["10*y - 10*x", "28*x - x*z - y", "x*y - 8/3*z"],
    )
    report = negative_cross_effect(system)
    assert not report.is_kinetic
    flagged = {(v.component, v.exponents) for v in report.violations}
    # -x*z in component 2 lacks a y factor
    assert (1, (1, 0, 1)) in flagged


def test_four_component_sign_fixture():
    # f = {d, c - 4x^2 y + 5xy + 6z + 7w, ax + 2y, -b xy}; kinetic exactly
    # when d >= 0, c >= 0, a >= 0 and -b >= 0
    for d, c, a, b in product((-1, 1), repeat=4):
        system = PolynomialSystem.from_strings(
            ("x", "y", "z", "w"),
            [
                str(d),
                f"{c} - 4*x^2*y + 5*x*y + 6*z + 7*w",
                f"{a}*x + 2*y",
                f"{-b}*x*y",
            ],
        )
        expected = d >= 0 and c >= 0 and a >= 0 and -b >= 0
        assert negative_cross_effect(system).is_kinetic == expected


def test_inward_pointing_field_can_still_violate():
    # {c2 + c2^2 - 2 c2 c3 + c3^2, 0, 0}: nonnegative on the boundary yet the
    # -2 c2 c3 term is a violation, so the classifier must reject it
    system = PolynomialSystem.from_strings(
        ("c1", "c2", "c3"),
        ["c2 + c2^2 - 2*c2*c3 + c3^2", "0", "0"],
    )
    report = negative_cross_effect(system)
    assert not report.is_kinetic
    assert report.violations[0].exponents == (0, 1, 1)
    # spot-check the sign claim: the flagged component is nonnegative on c1=0
    f = system.components[0]
    for c2 in (0, 1, 2):
        for c3 in (0, 1, 2):
            assert f.evaluate([Fraction(0), Fraction(c2), Fraction(c3)]) >= 0


def test_planted_violation_detected_and_witnessed():
    rng = random.Random(2718)
    for _ in range(25):
        base = random_kinetic_system(rng)
        system, m, exps = plant_cross_effect_violation(rng, base)
        report = negative_cross_effect(system)
        assert not report.is_kinetic
        assert any(
            v.component == m and v.exponents == exps for v in report.violations
        )


def test_kinetic_slice_is_nonnegative_randomized():
    # semantic direction: a kinetic f_m restricted to x_m = 0 only keeps
    # nonnegative coefficients, hence is nonnegative on the closed orthant
    rng = random.Random(161)
    for _ in range(25):
        system = random_kinetic_system(rng)
        for m, component in enumerate(system.components):
            for exps, coeff in component.sorted_terms():
                if exps[m] == 0:
                    assert coeff > 0


def test_report_json(example_system, oscillator_system):
    good = negative_cross_effect(example_system).to_dict()
    assert good["is_kinetic"] is True and good["violations"] == []
    bad = negative_cross_effect(oscillator_system).to_dict()
    assert bad["is_kinetic"] is False
    assert bad["violations"][0]["component"] == 2


# -- canonical realization --------------------------------------------------

def test_realization_round_trip_example(example_system):
    network = canonical_realization(example_system)
    assert induced_kinetic_ode(network) == example_system


def test_realization_step_shape(example_system):
    network = canonical_realization(example_system)
    # component order first, then descending graded-lex within a component
    rendered = network.render().splitlines()
    assert rendered == [
        "X + Y ->[3] Y",
        "2Y ->[2] X + 2Y",
        "2X ->[3] 2X + Y",
        "X + Y ->[2] X",
    ]


def test_realization_round_trip_randomized():
    rng = random.Random(777)
    for _ in range(30):
        system = random_kinetic_system(rng)
        network = canonical_realization(system)
        assert induced_kinetic_ode(network) == system


def test_realization_rejects_non_kinetic(oscillator_system):
    with pytest.raises(NotKineticError) as info:
        canonical_realization(oscillator_system)
    assert info.value.report.violations


def test_realization_zero_system():
    zero = PolynomialSystem.from_strings(("x", "y"), ["0", "0"])
    network = canonical_realization(zero)
    assert network.steps == ()
    assert not network.is_proper


def test_realization_capitalizes_variables():
    system = PolynomialSystem.from_strings(("u", "v"), ["v", "u"])
    network = canonical_realization(system)
    assert network.species == ("U", "V")
    # and the induced ODE maps back to the original variable names
    assert induced_kinetic_ode(network).variables == ("u", "v")


# -- divergence and periodic-orbit certificate ------------------------------

def test_divergence_three_species_instance():
    from crnkit import DiagonalParams, generate_diagonal_system

    params = DiagonalParams(
        (Fraction(1), Fraction(1), Fraction(1)),
        (
            (Fraction(0), Fraction(2), Fraction(3)),
            (Fraction(4), Fraction(0), Fraction(5)),
            (Fraction(6), Fraction(7), Fraction(0)),
        ),
    )
    system = generate_diagonal_system(params)
    assert divergence(system).render(system.variables) == "-5*x - 9*y - 13*z"


def test_no_periodic_orbit_positive_case():
    from crnkit import DiagonalParams, generate_diagonal_system

    params = DiagonalParams(
        (Fraction(1), Fraction(1), Fraction(1)),
        (
            (Fraction(0), Fraction(2), Fraction(3)),
            (Fraction(4), Fraction(0), Fraction(5)),
            (Fraction(6), Fraction(7), Fraction(0)),
        ),
    )
    cert = no_periodic_orbit_certificate(generate_diagonal_system(params))
    assert cert.holds
    assert cert.verdict == "yes"
    assert cert.divergence_negative
    assert cert.first_integral is not None


def test_no_periodic_orbit_inconclusive_without_integral():
    # negative divergence alone is not enough
    system = PolynomialSystem.from_strings(("x", "y"), ["x^2 - x", "y"])
    cert = no_periodic_orbit_certificate(system)
    assert cert.verdict == "inconclusive"


def test_no_periodic_orbit_inconclusive_zero_divergence(oscillator_system):
    cert = no_periodic_orbit_certificate(oscillator_system)
    assert cert.verdict == "inconclusive"
    assert not cert.divergence_negative
    assert cert.first_integral is not None


def test_no_periodic_orbit_rejects_bad_invariant(example_system):
    from crnkit import QuadraticCandidate

    wrong = QuadraticCandidate.diagonal((Fraction(1), Fraction(2)))
    with pytest.raises(ValueError):
        no_periodic_orbit_certificate(example_system, wrong)
