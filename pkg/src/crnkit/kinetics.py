"""From networks to polynomial dynamics and back.

The induced mass-action ODE of a network assigns each species the polynomial

    f_m = sum over steps r of (beta[m,r] - alpha[m,r]) * k_r * prod_p x_p^alpha[p,r]

A polynomial system arises this way from some network exactly when no
component f_m carries a negatively-signed term whose monomial omits x_m (a
"negative cross-effect").  The constructive converse realizes each term as a
single reaction step, which fixes one canonical network per kinetic system.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .network import Complex, Rate, ReactionNetwork, ReactionStep, _rate_parts
from .numbers import format_rational, parse_rational
from .poly import Exponents, Polynomial, PolynomialSystem, grlex_key


class UnboundParameterError(ValueError):
    """A symbolic rate was used without a numeric binding."""

    def __init__(self, name: str):
        super().__init__(f"rate parameter {name!r} is not bound")
        self.name = name


def resolve_rate(rate: Rate, binding: Mapping[str, Fraction] | None = None) -> Fraction:
    """Resolve a literal or parameter (or '+'-joined sum) to a Fraction."""
    if isinstance(rate, Fraction):
        return rate
    total = Fraction(0)
    for part in _rate_parts(rate):
        if part[:1].isdigit():
            total += parse_rational(part)
        else:
            if binding is None or part not in binding:
                raise UnboundParameterError(part)
            total += Fraction(binding[part])
    return total


def ode_variable_names(species: Sequence[str]) -> tuple[str, ...]:
    """Concentration variable names for a species list.

    Species written in the conventional uppercase style (X, Y, NO2) get
    lowercase concentration names; anything else is kept verbatim.  The
    lowering is skipped entirely if it would collide.
    """
    if all(name[:1].isupper() for name in species):
        lowered = tuple(name.lower() for name in species)
        if len(set(lowered)) == len(lowered):
            return lowered
    return tuple(species)


def species_names_for_variables(variables: Sequence[str]) -> tuple[str, ...]:
    """Inverse convention of `ode_variable_names` for realized networks."""
    if all(name[:1].islower() for name in variables):
        raised = tuple(name[0].upper() + name[1:] for name in variables)
        if len(set(raised)) == len(raised):
            return raised
    return tuple(variables)


def induced_kinetic_ode(
    network: ReactionNetwork, params: Mapping[str, Fraction] | None = None
) -> PolynomialSystem:
    """Mass-action ODE system of a network, with all rates bound to rationals.

    Raises UnboundParameterError for unbound symbolic rates and ValueError for
    nonpositive bound values.
    """
    m = network.num_species
    variables = ode_variable_names(network.species)
    terms: list[dict[Exponents, Fraction]] = [dict() for _ in range(m)]
    for step in network.steps:
        k = resolve_rate(step.rate, params)
        if k <= 0:
            raise ValueError(
                f"rate of step {step.render(network.species)} resolves to {k}; must be positive"
            )
        exponents = [0] * m
        for index, coeff in step.reactant.entries:
            exponents[index] = int(coeff)
        mono = tuple(exponents)
        for index in range(m):
            gamma = step.product.coefficient(index) - step.reactant.coefficient(index)
            if gamma != 0:
                bucket = terms[index]
                bucket[mono] = bucket.get(mono, Fraction(0)) + gamma * k
    components = tuple(Polynomial(m, t) for t in terms)
    return PolynomialSystem(variables, components)


# -- negative cross-effects -------------------------------------------------

@dataclass(frozen=True)
class CrossEffectViolation:
    """A negatively-signed term whose monomial omits the component's variable."""

    component: int  # 0-based index into the system
    exponents: Exponents
    coefficient: Fraction

    def describe(self, variables: Sequence[str]) -> str:
        mono = Polynomial.monomial(len(variables), self.exponents).render(variables)
        return (
            f"component {self.component + 1}: term {format_rational(self.coefficient)}"
            f"*{mono} has no {variables[self.component]} factor"
        )


@dataclass(frozen=True)
class CrossEffectReport:
    """Outcome of the term-wise negative-cross-effect test."""

    variables: tuple[str, ...]
    violations: tuple[CrossEffectViolation, ...]

    @property
    def is_kinetic(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "is_kinetic": self.is_kinetic,
            "violations": [
                {
                    "component": v.component + 1,
                    "monomial": Polynomial.monomial(
                        len(self.variables), v.exponents
                    ).render(self.variables),
                    "coefficient": format_rational(v.coefficient),
                }
                for v in self.violations
            ],
        }


def negative_cross_effect(system: PolynomialSystem) -> CrossEffectReport:
    """Find every negative term of f_m whose monomial has x_m-exponent zero."""
    violations = []
    for m, component in enumerate(system.components):
        for expts, coeff in component.sorted_terms():
            if coeff < 0 and expts[m] == 0:
                violations.append(CrossEffectViolation(m, expts, coeff))
    return CrossEffectReport(system.variables, tuple(violations))


class NotKineticError(ValueError):
    """The system has negative cross-effects and admits no realization."""

    def __init__(self, report: CrossEffectReport):
        details = "; ".join(
            v.describe(report.variables) for v in report.violations
        )
        super().__init__(f"system is not kinetic: {details}")
        self.report = report


def canonical_realization(system: PolynomialSystem) -> ReactionNetwork:
    """The one-step-per-term network whose induced ODE is `system`.

    A positive term c*x^alpha of f_m becomes  alpha -> alpha + e_m  with rate
    c; a negative term becomes  alpha -> alpha - e_m  with rate -c (the
    cross-effect condition guarantees alpha_m >= 1).  Steps are ordered by
    component, then by descending graded-lex monomial.  The zero system maps
    to a network with no steps, flagged improper.
    """
    report = negative_cross_effect(system)
    if not report.is_kinetic:
        raise NotKineticError(report)
    species = species_names_for_variables(system.variables)
    m = system.dim
    steps: list[ReactionStep] = []
    for index, component in enumerate(system.components):
        for expts, coeff in component.sorted_terms():
            for e in expts:
                if e != int(e):  # pragma: no cover - exponents are ints
                    raise ValueError("non-integer exponent")
            reactant = Complex.from_mapping(
                {i: Fraction(e) for i, e in enumerate(expts) if e}
            )
            product_coeffs = {i: Fraction(e) for i, e in enumerate(expts) if e}
            if coeff > 0:
                product_coeffs[index] = product_coeffs.get(index, Fraction(0)) + 1
                rate = coeff
            else:
                product_coeffs[index] = product_coeffs.get(index, Fraction(0)) - 1
                rate = -coeff
            steps.append(
                ReactionStep(reactant, Complex.from_mapping(product_coeffs), rate)
            )
    return ReactionNetwork(species, steps)


# -- divergence and periodic orbits ----------------------------------------

def divergence(system: PolynomialSystem) -> Polynomial:
    """Sum of the partial derivatives d f_m / d x_m."""
    total = Polynomial.zero(system.dim)
    for index, component in enumerate(system.components):
        total = total + component.derivative(index)
    return total


@dataclass(frozen=True)
class NoPeriodicOrbitCertificate:
    """Witness that no periodic orbit lies in the open positive orthant.

    The verdict is "yes" only when the divergence is nonzero with every
    coefficient nonpositive (hence strictly negative on the open orthant)
    and a nonconstant first integral is known; both facts are recorded
    separately so an inconclusive answer shows which leg failed.
    """

    verdict: str  # "yes" | "inconclusive"
    divergence: Polynomial
    divergence_negative: bool
    first_integral: "object | None"  # QuadraticCandidate, avoids import cycle

    @property
    def holds(self) -> bool:
        return self.verdict == "yes"


def no_periodic_orbit_certificate(
    system: PolynomialSystem, invariant=None
) -> NoPeriodicOrbitCertificate:
    """Try to certify absence of periodic orbits in the open positive orthant.

    If `invariant` (a QuadraticCandidate) is given it is verified; otherwise
    a quadratic first integral is searched for.
    """
    from .qfi import find_quadratic_first_integrals, is_first_integral

    div = divergence(system)
    div_negative = (not div.is_zero()) and all(
        coeff <= 0 for _, coeff in div.sorted_terms()
    )
    if invariant is not None:
        if not is_first_integral(invariant, system):
            raise ValueError("supplied invariant is not a first integral of the system")
        integral = invariant
    else:
        report = find_quadratic_first_integrals(system)
        integral = report.basis[0] if report.basis else None
    verdict = "yes" if (div_negative and integral is not None) else "inconclusive"
    return NoPeriodicOrbitCertificate(
        verdict=verdict,
        divergence=div,
        divergence_negative=div_negative,
        first_integral=integral,
    )
