"""Mass-conservation analysis, stoichiometric and kinetic.

A network conserves mass stoichiometrically when some strictly positive
vector rho satisfies rho^T gamma = 0 for its net stoichiometric matrix.  A
polynomial system conserves mass kinetically when some strictly positive rho
makes sum_m rho_m f_m the zero polynomial.  The first implies the second for
the induced ODE, but not conversely; both searches reduce to finding a
strictly positive vector in an exactly computed null space.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import nullspace_basis, positive_vector_in_span
from .network import ReactionNetwork
from .numbers import format_rational, primitive_integer_vector
from .poly import Exponents, Polynomial, PolynomialSystem


@dataclass(frozen=True)
class ConservationVector:
    """A strictly positive witness vector with its interpretation mode."""

    rho: tuple[Fraction, ...]
    mode: str  # "stoichiometric" | "kinetic"

    def __post_init__(self):
        object.__setattr__(self, "rho", tuple(Fraction(v) for v in self.rho))
        if self.mode not in ("stoichiometric", "kinetic"):
            raise ValueError(f"unknown conservation mode {self.mode!r}")
        if not self.rho or any(v <= 0 for v in self.rho):
            raise ValueError("conservation vector must be strictly positive")

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "rho": [format_rational(v) for v in self.rho],
        }


def stoichiometric_residual(
    rho: Sequence[Fraction], network: ReactionNetwork
) -> list[Fraction]:
    """rho^T gamma, one entry per reaction step."""
    if len(rho) != network.num_species:
        raise ValueError(
            f"vector length {len(rho)} does not match {network.num_species} species"
        )
    _, _, gamma = network.stoichiometric_matrices()
    return [
        sum((Fraction(rho[i]) * gamma[i][j] for i in range(len(rho))), Fraction(0))
        for j in range(network.num_steps)
    ]


def kinetic_residual(rho: Sequence[Fraction], system: PolynomialSystem) -> Polynomial:
    """The polynomial sum_m rho_m f_m."""
    if len(rho) != system.dim:
        raise ValueError(
            f"vector length {len(rho)} does not match {system.dim} variables"
        )
    total = Polynomial.zero(system.dim)
    for value, component in zip(rho, system.components):
        total = total + component * Fraction(value)
    return total


def _normalized(rho: Sequence[Fraction], mode: str) -> ConservationVector:
    ints = primitive_integer_vector(rho)
    return ConservationVector(tuple(Fraction(v) for v in ints), mode)


def stoichiometric_conservation(network: ReactionNetwork) -> ConservationVector | None:
    """Search for strictly positive rho with rho^T gamma = 0.

    Returns an integer witness with collective gcd 1, or None when the left
    null space of gamma misses the open positive orthant.
    """
    _, _, gamma = network.stoichiometric_matrices()
    m = network.num_species
    if m == 0:
        return None
    gamma_t = [
        [gamma[i][j] for i in range(m)] for j in range(network.num_steps)
    ]
    basis = nullspace_basis(gamma_t, m)
    if not basis:
        return None
    result = positive_vector_in_span(basis, m)
    if result.vector is None:
        return None
    return _normalized(result.vector, "stoichiometric")


def kinetic_conservation_matrix(system: PolynomialSystem) -> tuple[list[list[Fraction]], list[Exponents]]:
    """Matrix whose rows are monomial coefficients across components.

    Row for monomial mu has entries coeff(f_m, mu); rho is a kinetic witness
    exactly when this matrix maps it to zero.
    """
    monomials: set[Exponents] = set()
    for component in system.components:
        monomials |= component.monomials()
    ordered = sorted(monomials)
    rows = [
        [component.coefficient(mono) for component in system.components]
        for mono in ordered
    ]
    return rows, ordered


def kinetic_conservation(system: PolynomialSystem) -> ConservationVector | None:
    """Search for strictly positive rho with sum_m rho_m f_m identically zero."""
    m = system.dim
    if m == 0:
        return None
    rows, _ = kinetic_conservation_matrix(system)
    basis = nullspace_basis(rows, m)
    if not basis:
        return None
    result = positive_vector_in_span(basis, m)
    if result.vector is None:
        return None
    return _normalized(result.vector, "kinetic")


def verify_conservation(
    candidate: ConservationVector, target: ReactionNetwork | PolynomialSystem
) -> bool:
    """Exactly check a candidate witness against a network or system.

    A stoichiometric candidate requires a ReactionNetwork target, a kinetic
    one a PolynomialSystem; mixing them raises TypeError.
    """
    if candidate.mode == "stoichiometric":
        if not isinstance(target, ReactionNetwork):
            raise TypeError("stoichiometric candidates verify against a network")
        return all(v == 0 for v in stoichiometric_residual(candidate.rho, target))
    if not isinstance(target, PolynomialSystem):
        raise TypeError("kinetic candidates verify against a polynomial system")
    return kinetic_residual(candidate.rho, target).is_zero()


def conservation_report(
    target: ReactionNetwork | PolynomialSystem,
    mode: str,
    candidate: ConservationVector | None = None,
) -> dict:
    """JSON-friendly summary used by the command line."""
    if mode == "stoichiometric":
        found = (
            stoichiometric_conservation(target)
            if isinstance(target, ReactionNetwork)
            else None
        )
    elif mode == "kinetic":
        found = (
            kinetic_conservation(target)
            if isinstance(target, PolynomialSystem)
            else None
        )
    else:
        raise ValueError(f"unknown conservation mode {mode!r}")
    report: dict = {"mode": mode, "exists": found is not None}
    if found is not None:
        report["witness"] = [format_rational(v) for v in found.rho]
    if candidate is not None:
        ok = verify_conservation(candidate, target)
        report["candidate"] = [format_rational(v) for v in candidate.rho]
        report["candidate_valid"] = ok
        if candidate.mode == "stoichiometric" and isinstance(target, ReactionNetwork):
            report["residual"] = [
                format_rational(v)
                for v in stoichiometric_residual(candidate.rho, target)
            ]
        elif candidate.mode == "kinetic" and isinstance(target, PolynomialSystem):
            report["residual"] = kinetic_residual(candidate.rho, target).render(
                target.variables
            )
    return report
