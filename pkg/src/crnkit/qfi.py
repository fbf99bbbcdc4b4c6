"""Quadratic first integrals of kinetic polynomial systems.

A quadratic candidate V(x) = x^T Q x + b^T x + c is a first integral of
x' = f(x) when its Lie derivative sum_m (dV/dx_m) f_m vanishes identically.
Since the Lie derivative is linear in (Q, b), the search for first integrals
is an exact null-space computation; strict sign conditions (for instance a
positive-definite diagonal V) are decided by a rational simplex over that
null space.

The generators in this module produce, for each supported shape of V, the
full coefficient family of kinetic quadratic systems conserving it; each
generated system is verified (kinetic, Lie derivative exactly zero) before
being returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .conservation import ConservationVector, kinetic_conservation
from .kinetics import negative_cross_effect
from .linalg import nullspace_basis, positive_vector_in_span, symmetric_inertia
from .numbers import format_rational, leading_sign_normalized
from .poly import (
    Polynomial,
    PolynomialSystem,
    default_variable_names,
    grlex_key,
)

Scalar = Fraction | int


def _frac(value: Scalar) -> Fraction:
    return Fraction(value)


@dataclass(frozen=True)
class QuadraticCandidate:
    """V(x) = x^T Q x + linear . x + constant with exact entries."""

    q: tuple[tuple[Fraction, ...], ...]
    linear: tuple[Fraction, ...]
    constant: Fraction = Fraction(0)

    def __post_init__(self):
        q = tuple(tuple(_frac(v) for v in row) for row in self.q)
        linear = tuple(_frac(v) for v in self.linear)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "linear", linear)
        object.__setattr__(self, "constant", _frac(self.constant))
        n = len(q)
        if any(len(row) != n for row in q):
            raise ValueError("Q must be square")
        if len(linear) != n:
            raise ValueError("linear part length must match Q")
        for i in range(n):
            for j in range(i + 1, n):
                if q[i][j] != q[j][i]:
                    raise ValueError("Q must be symmetric")

    @property
    def dim(self) -> int:
        return len(self.q)

    @classmethod
    def diagonal(cls, coeffs: Sequence[Scalar]) -> "QuadraticCandidate":
        n = len(coeffs)
        q = tuple(
            tuple(_frac(coeffs[i]) if i == j else Fraction(0) for j in range(n))
            for i in range(n)
        )
        return cls(q, (Fraction(0),) * n)

    @classmethod
    def binary_form(cls, a: Scalar, b: Scalar, c: Scalar) -> "QuadraticCandidate":
        """V = a x^2 + 2 b x y + c y^2."""
        return cls(
            ((_frac(a), _frac(b)), (_frac(b), _frac(c))),
            (Fraction(0), Fraction(0)),
        )

    @classmethod
    def shifted_sum_of_squares(cls, a: Scalar, b: Scalar) -> "QuadraticCandidate":
        """V = (x + a)^2 + (y + b)^2."""
        a, b = _frac(a), _frac(b)
        return cls(
            ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))),
            (2 * a, 2 * b),
            a * a + b * b,
        )

    def as_polynomial(self) -> Polynomial:
        n = self.dim
        terms: dict[tuple[int, ...], Fraction] = {}

        def add(expts, coeff):
            if coeff:
                terms[expts] = terms.get(expts, Fraction(0)) + coeff

        # x^T Q x: the (i, j) and (j, i) entries land on the same monomial,
        # so off-diagonal monomials pick up 2 q[i][j]
        for i in range(n):
            for j in range(n):
                expts = tuple(
                    (2 if k == i else 0) if i == j else (1 if k in (i, j) else 0)
                    for k in range(n)
                )
                add(expts, self.q[i][j])
        for i in range(n):
            add(tuple(1 if k == i else 0 for k in range(n)), self.linear[i])
        add((0,) * n, self.constant)
        return Polynomial(n, terms)

    def gradient(self) -> list[Polynomial]:
        poly = self.as_polynomial()
        return [poly.derivative(i) for i in range(self.dim)]

    def is_diagonal(self) -> bool:
        return all(
            self.q[i][j] == 0
            for i in range(self.dim)
            for j in range(self.dim)
            if i != j
        ) and all(v == 0 for v in self.linear)

    def signature(self) -> str:
        """One of: positive-definite diagonal, definite, indefinite, degenerate."""
        if self.is_diagonal() and all(self.q[i][i] > 0 for i in range(self.dim)):
            return "positive-definite diagonal"
        pos, zero, neg = symmetric_inertia(self.q)
        if zero > 0:
            return "degenerate"
        if pos == self.dim or neg == self.dim:
            return "definite"
        return "indefinite"

    def render(self, names: Sequence[str] | None = None) -> str:
        names = tuple(names) if names is not None else default_variable_names(self.dim)
        return self.as_polynomial().render(names)

    def coefficient_vector(self) -> list[Fraction]:
        """Upper-triangle of Q (row major), then the linear part."""
        vec = []
        for i in range(self.dim):
            for j in range(i, self.dim):
                vec.append(self.q[i][j])
        vec.extend(self.linear)
        return vec


def lie_derivative(candidate: QuadraticCandidate, system: PolynomialSystem) -> Polynomial:
    """grad(V) . f, computed exactly."""
    if candidate.dim != system.dim:
        raise ValueError(
            f"candidate dimension {candidate.dim} does not match system dimension {system.dim}"
        )
    total = Polynomial.zero(system.dim)
    for partial, component in zip(candidate.gradient(), system.components):
        total = total + partial * component
    return total


def is_first_integral(candidate: QuadraticCandidate, system: PolynomialSystem) -> bool:
    return lie_derivative(candidate, system).is_zero()


# -- exhaustive search ------------------------------------------------------

def _unit_candidates(dim: int, diagonal_only: bool) -> list[QuadraticCandidate]:
    """Basis of the candidate space in the order of `coefficient_vector`.

    Constants are excluded: they never influence the Lie derivative, and
    reported candidates pin the constant to zero.
    """
    out = []
    if diagonal_only:
        for i in range(dim):
            q = [[Fraction(0)] * dim for _ in range(dim)]
            q[i][i] = Fraction(1)
            out.append(QuadraticCandidate(tuple(map(tuple, q)), (Fraction(0),) * dim))
        return out
    for i in range(dim):
        for j in range(i, dim):
            q = [[Fraction(0)] * dim for _ in range(dim)]
            q[i][j] = Fraction(1)
            q[j][i] = Fraction(1)
            out.append(QuadraticCandidate(tuple(map(tuple, q)), (Fraction(0),) * dim))
    for i in range(dim):
        linear = tuple(Fraction(1 if k == i else 0) for k in range(dim))
        out.append(
            QuadraticCandidate(
                tuple(tuple(Fraction(0) for _ in range(dim)) for _ in range(dim)),
                linear,
            )
        )
    return out


def _combine(units: list[QuadraticCandidate], weights: Sequence[Fraction]) -> QuadraticCandidate:
    dim = units[0].dim
    q = [[Fraction(0)] * dim for _ in range(dim)]
    linear = [Fraction(0)] * dim
    for w, unit in zip(weights, units):
        if w == 0:
            continue
        for i in range(dim):
            for j in range(dim):
                q[i][j] += w * unit.q[i][j]
            linear[i] += w * unit.linear[i]
    return QuadraticCandidate(tuple(map(tuple, q)), tuple(linear))


def _normalized_candidate(units, weights) -> QuadraticCandidate:
    ints = leading_sign_normalized(weights)
    return _combine(units, [Fraction(v) for v in ints])


@dataclass(frozen=True)
class FirstIntegralReport:
    """Result of the quadratic first-integral search."""

    found: bool
    candidate: QuadraticCandidate | None
    basis: tuple[QuadraticCandidate, ...]
    signature: str | None

    def to_dict(self, variables: Sequence[str] | None = None) -> dict:
        return {
            "found": self.found,
            "candidate": self.candidate.render(variables) if self.candidate else None,
            "basis": [c.render(variables) for c in self.basis],
            "signature": self.signature,
        }


def _solution_weights(system: PolynomialSystem, units) -> list[list[Fraction]]:
    lie_polys = [lie_derivative(unit, system) for unit in units]
    monomials = sorted(
        {mono for poly in lie_polys for mono in poly.monomials()},
        key=grlex_key,
    )
    rows = [
        [poly.coefficient(mono) for poly in lie_polys] for mono in monomials
    ]
    return nullspace_basis(rows, len(units))


def find_quadratic_first_integrals(
    system: PolynomialSystem, signature_filter: str | None = None
) -> FirstIntegralReport:
    """Compute the space of quadratic-plus-linear first integrals.

    Without a filter, returns the full exact null-space basis (each element
    gcd-normalized with positive leading coefficient) and the first basis
    element as representative candidate.  With signature_filter
    "positive-diagonal", restricts to diagonal quadratic forms and decides
    exactly whether the solution space meets the open positive-coefficient
    orthant, returning a strictly positive witness if so.
    """
    if signature_filter not in (None, "positive-diagonal", "positive_diagonal"):
        raise ValueError(f"unknown signature filter {signature_filter!r}")
    diagonal_only = signature_filter is not None
    units = _unit_candidates(system.dim, diagonal_only)
    weights = _solution_weights(system, units)
    basis = tuple(_normalized_candidate(units, w) for w in weights)
    if not diagonal_only:
        candidate = basis[0] if basis else None
        return FirstIntegralReport(
            found=bool(basis),
            candidate=candidate,
            basis=basis,
            signature=candidate.signature() if candidate else None,
        )
    if not weights:
        return FirstIntegralReport(False, None, basis, None)
    result = positive_vector_in_span(weights, system.dim)
    if result.vector is None:
        return FirstIntegralReport(False, None, basis, None)
    candidate = _normalized_candidate(units, result.vector)
    return FirstIntegralReport(
        found=True,
        candidate=candidate,
        basis=basis,
        signature=candidate.signature(),
    )


# -- generator families -----------------------------------------------------

class GeneratorConstraintError(ValueError):
    """A generator parameter violates its family's admissibility condition."""


def _require(condition: bool, message: str):
    if not condition:
        raise GeneratorConstraintError(message)


def _verify_generated(system: PolynomialSystem, invariant: QuadraticCandidate):
    report = negative_cross_effect(system)
    assert report.is_kinetic, "generated system must be kinetic"
    assert is_first_integral(invariant, system), "generated system must conserve V"


@dataclass(frozen=True)
class DiagonalParams:
    """Family conserving V = sum_m a_m x_m^2 with all a_m > 0.

    `coupling` is a nonnegative matrix K with zero diagonal; the system is

        f_m = sum_{p != m} a_p K[m][p] x_p^2  -  sum_{p != m} a_p K[p][m] x_m x_p
    """

    weights: tuple[Fraction, ...]
    coupling: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        weights = tuple(_frac(v) for v in self.weights)
        coupling = tuple(tuple(_frac(v) for v in row) for row in self.coupling)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "coupling", coupling)
        n = len(weights)
        _require(n >= 1, "at least one species required")
        _require(all(a > 0 for a in weights), "weights must be strictly positive")
        _require(
            len(coupling) == n and all(len(row) == n for row in coupling),
            "coupling matrix must be square of matching size",
        )
        _require(
            all(coupling[i][i] == 0 for i in range(n)),
            "coupling diagonal must be zero",
        )
        _require(
            all(v >= 0 for row in coupling for v in row),
            "coupling entries must be nonnegative",
        )

    @property
    def dim(self) -> int:
        return len(self.weights)

    def invariant(self) -> QuadraticCandidate:
        return QuadraticCandidate.diagonal(self.weights)


def generate_diagonal_system(
    params: DiagonalParams, variables: Sequence[str] | None = None
) -> PolynomialSystem:
    """Build the full kinetic family conserving a positive-diagonal V."""
    n = params.dim
    a, k = params.weights, params.coupling
    names = tuple(variables) if variables is not None else default_variable_names(n)
    components = []
    for m in range(n):
        poly = Polynomial.zero(n)
        for p in range(n):
            if p == m:
                continue
            sq = tuple(2 if i == p else 0 for i in range(n))
            cross = tuple(1 if i in (m, p) else 0 for i in range(n))
            poly = poly + Polynomial.monomial(n, sq, a[p] * k[m][p])
            poly = poly - Polynomial.monomial(n, cross, a[p] * k[p][m])
        components.append(poly)
    system = PolynomialSystem(names, tuple(components))
    _verify_generated(system, params.invariant())
    return system


@dataclass(frozen=True)
class MixedSignParams:
    """Family conserving the indefinite V = sum a_k x_k^2 - sum b_l y_l^2.

    With coupling matrix A >= 0 (K x L) the dynamics are

        x_k' = sum_l b_l A[k][l] y_l z
        y_l' = sum_k a_k A[k][l] x_k z
        z'   = -(sum_k rho_x[k] x_k' + sum_l rho_y[l] y_l') / rho_z

    so the system is kinetic and conserves mass with weights
    (rho_x, rho_y, rho_z).  If either block is empty the system is zero.
    """

    plus_weights: tuple[Fraction, ...]
    minus_weights: tuple[Fraction, ...]
    coupling: tuple[tuple[Fraction, ...], ...]
    rho_plus: tuple[Fraction, ...]
    rho_minus: tuple[Fraction, ...]
    rho_z: Fraction = Fraction(1)

    def __post_init__(self):
        plus = tuple(_frac(v) for v in self.plus_weights)
        minus = tuple(_frac(v) for v in self.minus_weights)
        coupling = tuple(tuple(_frac(v) for v in row) for row in self.coupling)
        rho_plus = tuple(_frac(v) for v in self.rho_plus)
        rho_minus = tuple(_frac(v) for v in self.rho_minus)
        object.__setattr__(self, "plus_weights", plus)
        object.__setattr__(self, "minus_weights", minus)
        object.__setattr__(self, "coupling", coupling)
        object.__setattr__(self, "rho_plus", rho_plus)
        object.__setattr__(self, "rho_minus", rho_minus)
        object.__setattr__(self, "rho_z", _frac(self.rho_z))
        kk, ll = len(plus), len(minus)
        _require(all(v > 0 for v in plus + minus), "weights must be strictly positive")
        _require(
            len(coupling) == kk and all(len(row) == ll for row in coupling),
            "coupling must be K x L",
        )
        _require(
            all(v >= 0 for row in coupling for v in row),
            "coupling entries must be nonnegative",
        )
        _require(
            len(rho_plus) == kk and len(rho_minus) == ll,
            "conservation weights must match block sizes",
        )
        _require(
            all(v > 0 for v in rho_plus + rho_minus) and self.rho_z > 0,
            "conservation weights must be strictly positive",
        )

    @property
    def block_sizes(self) -> tuple[int, int]:
        return len(self.plus_weights), len(self.minus_weights)

    def variable_names(self) -> tuple[str, ...]:
        kk, ll = self.block_sizes
        xs = ("x",) if kk == 1 else tuple(f"x{i + 1}" for i in range(kk))
        ys = ("y",) if ll == 1 else tuple(f"y{i + 1}" for i in range(ll))
        return xs + ys + ("z",)

    def invariant(self) -> QuadraticCandidate:
        kk, ll = self.block_sizes
        diag = list(self.plus_weights) + [-v for v in self.minus_weights] + [Fraction(0)]
        return QuadraticCandidate.diagonal(diag)

    def conservation(self) -> ConservationVector:
        return ConservationVector(
            self.rho_plus + self.rho_minus + (self.rho_z,), "kinetic"
        )


def generate_mixed_sign_system(params: MixedSignParams) -> PolynomialSystem:
    """Build the kinetic family conserving a two-block indefinite diagonal V."""
    kk, ll = params.block_sizes
    n = kk + ll + 1
    z = n - 1
    a, b, coupling = params.plus_weights, params.minus_weights, params.coupling

    def mono(i: int) -> tuple[int, ...]:
        # y_l z or x_k z monomials
        return tuple(1 if t in (i, z) else 0 for t in range(n))

    components = []
    for k_i in range(kk):
        poly = Polynomial.zero(n)
        for l_i in range(ll):
            poly = poly + Polynomial.monomial(
                n, mono(kk + l_i), b[l_i] * coupling[k_i][l_i]
            )
        components.append(poly)
    for l_i in range(ll):
        poly = Polynomial.zero(n)
        for k_i in range(kk):
            poly = poly + Polynomial.monomial(
                n, mono(k_i), a[k_i] * coupling[k_i][l_i]
            )
        components.append(poly)
    z_poly = Polynomial.zero(n)
    for k_i in range(kk):
        z_poly = z_poly - components[k_i] * params.rho_plus[k_i]
    for l_i in range(ll):
        z_poly = z_poly - components[kk + l_i] * params.rho_minus[l_i]
    z_poly = z_poly * (1 / params.rho_z)
    components.append(z_poly)
    system = PolynomialSystem(params.variable_names(), tuple(components))
    _verify_generated(system, params.invariant())
    assert kinetic_residual_is_zero(params.conservation(), system)
    return system


def kinetic_residual_is_zero(candidate: ConservationVector, system: PolynomialSystem) -> bool:
    from .conservation import kinetic_residual

    return kinetic_residual(candidate.rho, system).is_zero()


BINARY_FORM_FAMILIES = (
    "ellipse_hyperbola",
    "parabolic_plus",
    "parabolic_minus",
    "indefinite",
    "rank_one",
)


@dataclass(frozen=True)
class BinaryFormParams:
    """Planar families conserving a binary quadratic form.

    The families, their conserved forms and admissible parameters:

    - ellipse_hyperbola: V = a x^2 + 2b xy + c y^2, a > 0, c > 0,
      ac - b^2 != 0; free parameters k, l >= 0.
    - parabolic_plus: same V with a, b, c > 0 and ac = b^2; free parameters
      k, l, m, n >= 0 and s unrestricted.
    - parabolic_minus: V = a x^2 - 2b xy + c y^2, a, b, c > 0, ac = b^2;
      free parameters k, l, m, n, r >= 0 and s unrestricted.
    - indefinite: V = a x^2 + 2b xy - c y^2, a > 0, c > 0, b != 0; free
      parameters k, l, m >= 0.
    - rank_one: V = a x^2 + 2b xy, a > 0, b != 0 (c must stay 0); free
      parameters k, m >= 0 and s unrestricted.

    Every instance is kinetic and conserves its V; setting all free
    parameters to zero gives the zero system.
    """

    family: str
    a: Fraction
    b: Fraction
    c: Fraction = Fraction(0)
    k: Fraction = Fraction(0)
    l: Fraction = Fraction(0)
    m: Fraction = Fraction(0)
    n: Fraction = Fraction(0)
    r: Fraction = Fraction(0)
    s: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("a", "b", "c", "k", "l", "m", "n", "r", "s"):
            object.__setattr__(self, name, _frac(getattr(self, name)))
        fam = self.family
        _require(fam in BINARY_FORM_FAMILIES, f"unknown family {fam!r}")
        a, b, c = self.a, self.b, self.c
        if fam == "ellipse_hyperbola":
            _require(a > 0, "ellipse_hyperbola requires a > 0")
            _require(c > 0, "ellipse_hyperbola requires c > 0")
            _require(a * c - b * b != 0, "ellipse_hyperbola requires ac - b^2 != 0")
            self._only("k", "l")
        elif fam == "parabolic_plus":
            _require(a > 0 and b > 0 and c > 0, "parabolic_plus requires a, b, c > 0")
            _require(a * c == b * b, "parabolic_plus requires ac - b^2 = 0")
            self._only("k", "l", "m", "n", "s")
        elif fam == "parabolic_minus":
            _require(a > 0 and b > 0 and c > 0, "parabolic_minus requires a, b, c > 0")
            _require(a * c == b * b, "parabolic_minus requires ac - b^2 = 0")
            self._only("k", "l", "m", "n", "r", "s")
        elif fam == "indefinite":
            _require(a > 0, "indefinite requires a > 0")
            _require(c > 0, "indefinite requires c > 0")
            _require(b != 0, "indefinite requires b != 0")
            self._only("k", "l", "m")
        else:  # rank_one
            _require(a > 0, "rank_one requires a > 0")
            _require(b != 0, "rank_one requires b != 0")
            _require(c == 0, "rank_one fixes c = 0")
            self._only("k", "m", "s")
        for name in ("k", "l", "m", "n", "r"):
            _require(
                getattr(self, name) >= 0,
                f"free parameter {name} must be nonnegative",
            )

    def _only(self, *allowed: str):
        for name in ("k", "l", "m", "n", "r", "s"):
            if name not in allowed:
                _require(
                    getattr(self, name) == 0,
                    f"family {self.family} does not use parameter {name}",
                )

    def invariant(self) -> QuadraticCandidate:
        if self.family == "parabolic_minus":
            return QuadraticCandidate.binary_form(self.a, -self.b, self.c)
        if self.family == "indefinite":
            return QuadraticCandidate.binary_form(self.a, self.b, -self.c)
        return QuadraticCandidate.binary_form(self.a, self.b, self.c)


def generate_binary_form_system(
    params: BinaryFormParams, variables: Sequence[str] = ("x", "y")
) -> PolynomialSystem:
    """Build the planar family conserving the given binary form."""
    a, b, c = params.a, params.b, params.c
    k, l, m, n, r, s = params.k, params.l, params.m, params.n, params.r, params.s
    fam = params.family
    if fam == "ellipse_hyperbola":
        fx = {(2, 0): -b * k, (1, 1): -c * k + b * l, (0, 2): c * l}
        fy = {(2, 0): a * k, (1, 1): b * k - a * l, (0, 2): -b * l}
    elif fam == "parabolic_plus":
        fx = {(2, 0): -b * k, (1, 1): c * s, (0, 2): c * l, (1, 0): -b * m, (0, 1): c * n}
        fy = {(2, 0): a * k, (1, 1): -b * s, (0, 2): -b * l, (1, 0): a * m, (0, 1): -b * n}
    elif fam == "parabolic_minus":
        fx = {
            (2, 0): b * k,
            (1, 1): c * s,
            (0, 2): c * l,
            (1, 0): b * m,
            (0, 1): c * n,
            (0, 0): c * r,
        }
        fy = {
            (2, 0): a * k,
            (1, 1): b * s,
            (0, 2): b * l,
            (1, 0): a * m,
            (0, 1): b * n,
            (0, 0): b * r,
        }
    elif fam == "indefinite":
        fx = {(2, 0): -b * k, (1, 1): c * k - b * l, (0, 2): c * l, (1, 0): -b * m, (0, 1): c * m}
        fy = {(2, 0): a * k, (1, 1): b * k + a * l, (0, 2): b * l, (1, 0): a * m, (0, 1): b * m}
    else:  # rank_one
        fx = {(2, 0): -b * k, (1, 1): -b * s, (1, 0): -b * m}
        fy = {(2, 0): a * k, (1, 1): b * k + a * s, (0, 2): b * s, (1, 0): a * m, (0, 1): b * m}
    system = PolynomialSystem(
        tuple(variables), (Polynomial(2, fx), Polynomial(2, fy))
    )
    _verify_generated(system, params.invariant())
    return system


def generate_shifted_system(
    A: Scalar, B: Scalar, a: Scalar, b: Scalar
) -> PolynomialSystem:
    """Planar kinetic family conserving V = (x + a)^2 + (y + b)^2.

        x' = A y (y + b) - B x (y + b)
        y' = B x (x + a) - A y (x + a)

    Requires A, B >= 0; a negative shift disables the corresponding rate
    (a < 0 forces B = 0, b < 0 forces A = 0) to keep the system kinetic.
    """
    A, B, a, b = _frac(A), _frac(B), _frac(a), _frac(b)
    _require(A >= 0 and B >= 0, "rates A and B must be nonnegative")
    if a < 0:
        _require(B == 0, "negative shift a requires B = 0")
    if b < 0:
        _require(A == 0, "negative shift b requires A = 0")
    fx = {(0, 2): A, (1, 1): -B, (1, 0): -b * B, (0, 1): b * A}
    fy = {(2, 0): B, (1, 1): -A, (1, 0): a * B, (0, 1): -a * A}
    system = PolynomialSystem(
        ("x", "y"), (Polynomial(2, fx), Polynomial(2, fy))
    )
    invariant = QuadraticCandidate.shifted_sum_of_squares(a, b)
    _verify_generated(system, invariant)
    return system


# -- structural checks ------------------------------------------------------

def equilibria_on_line_check(
    params: BinaryFormParams, system: PolynomialSystem | None = None
) -> bool:
    """Check the off-origin equilibrium set of an ellipse_hyperbola instance.

    For k != 0 != l the set is the line y = (k/l) x; if one parameter
    vanishes it degenerates to a coordinate axis, and for k = l = 0 the whole
    plane is stationary.  Returns True when both components vanish
    identically on that set.
    """
    if params.family != "ellipse_hyperbola":
        raise ValueError("equilibrium line analysis applies to ellipse_hyperbola only")
    sys_ = system if system is not None else generate_binary_form_system(params)
    if params.k != 0 and params.l != 0:
        line = Polynomial.variable(2, 0) * (params.k / params.l)
        substitution = {1: line}
    elif params.l == 0 and params.k != 0:
        substitution = {0: Fraction(0)}
    elif params.k == 0 and params.l != 0:
        substitution = {1: Fraction(0)}
    else:
        substitution = {}
    return all(
        component.substitute(substitution).is_zero()
        for component in sys_.components
    )


@dataclass(frozen=True)
class DiagonalCollapseResult:
    """Outcome of the conserving-diagonal collapse check.

    For kinetic systems that conserve mass kinetically and admit a
    positive-definite diagonal quadratic first integral, the dynamics must be
    identically zero.  `applies` records whether all three hypotheses hold;
    `consistent` is False only if they hold and the system is nonzero.
    """

    applies: bool
    consistent: bool
    is_zero: bool
    conservation: ConservationVector | None
    integral: QuadraticCandidate | None


def diagonal_collapse_check(system: PolynomialSystem) -> DiagonalCollapseResult:
    report = negative_cross_effect(system)
    if not report.is_kinetic:
        return DiagonalCollapseResult(False, True, system.is_zero(), None, None)
    conservation = kinetic_conservation(system)
    if conservation is None:
        return DiagonalCollapseResult(False, True, system.is_zero(), None, None)
    integral_report = find_quadratic_first_integrals(system, "positive-diagonal")
    if not integral_report.found:
        return DiagonalCollapseResult(False, True, system.is_zero(), conservation, None)
    zero = system.is_zero()
    return DiagonalCollapseResult(
        applies=True,
        consistent=zero,
        is_zero=zero,
        conservation=conservation,
        integral=integral_report.candidate,
    )


# -- logarithmic first integral (planar predator-prey) ----------------------

def lotka_volterra_log_check(system: PolynomialSystem) -> bool:
    """Does x + y - ln x - ln y stay constant along the flow?

    Vanishing of the Lie derivative on the open positive quadrant is
    equivalent to the polynomial identity
    y (x - 1) f_1 + x (y - 1) f_2 = 0, which is checked exactly.
    """
    if system.dim != 2:
        raise ValueError("log-integral check is for planar systems")
    x = Polynomial.variable(2, 0)
    y = Polynomial.variable(2, 1)
    one = Polynomial.constant(2, 1)
    f1, f2 = system.components
    expr = y * (x - one) * f1 + x * (y - one) * f2
    return expr.is_zero()


_QUAD_MONOMIALS = [(2, 0), (1, 1), (0, 2), (1, 0), (0, 1), (0, 0)]


def solve_log_integral_family() -> list[PolynomialSystem]:
    """All planar quadratic systems conserving x + y - ln x - ln y.

    Treats the 12 coefficients of (f_1, f_2) as unknowns and solves the
    identity y (x - 1) f_1 + x (y - 1) f_2 = 0 exactly.  The solution space
    is returned as a basis of normalized systems; time reversal stays inside
    the family since it only flips the overall sign.
    """
    x = Polynomial.variable(2, 0)
    y = Polynomial.variable(2, 1)
    one = Polynomial.constant(2, 1)
    left = y * (x - one)
    right = x * (y - one)
    columns: list[Polynomial] = []
    for comp in range(2):
        multiplier = left if comp == 0 else right
        for mono in _QUAD_MONOMIALS:
            columns.append(multiplier * Polynomial.monomial(2, mono))
    monomials = sorted(
        {m for col in columns for m in col.monomials()}, key=grlex_key
    )
    rows = [[col.coefficient(m) for col in columns] for m in monomials]
    basis = nullspace_basis(rows, len(columns))
    systems = []
    for vec in basis:
        ints = leading_sign_normalized(vec)
        f1 = Polynomial(
            2, {mono: Fraction(ints[i]) for i, mono in enumerate(_QUAD_MONOMIALS)}
        )
        f2 = Polynomial(
            2,
            {
                mono: Fraction(ints[6 + i])
                for i, mono in enumerate(_QUAD_MONOMIALS)
            },
        )
        systems.append(PolynomialSystem(("x", "y"), (f1, f2)))
    return systems
