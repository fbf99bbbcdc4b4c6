"""Exact multivariate polynomials over the rationals.

A polynomial in M variables is stored as a mapping from exponent tuples of
length M to nonzero Fraction coefficients.  Printing, hashing and iteration
use descending graded-lexicographic term order, so rendered forms are stable
and parse(render(p)) == p.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence, Union

from .numbers import format_rational, parse_rational

Exponents = tuple[int, ...]
Scalar = Union[Fraction, int]


def grlex_key(exponents: Exponents) -> tuple[int, Exponents]:
    """Sort key for graded-lexicographic order (degree first, then lex)."""
    return (sum(exponents), exponents)


def default_variable_names(dim: int) -> tuple[str, ...]:
    """Conventional names: x / x,y / x,y,z / x,y,z,w, then x1..xM."""
    if 1 <= dim <= 4:
        return tuple("xyzw"[:dim])
    return tuple(f"x{i + 1}" for i in range(dim))


class Polynomial:
    """Immutable polynomial with exact rational coefficients."""

    __slots__ = ("dim", "_terms", "_hash")

    def __init__(self, dim: int, terms: Mapping[Exponents, Scalar] | None = None):
        if dim < 0:
            raise ValueError("dimension must be nonnegative")
        cleaned: dict[Exponents, Fraction] = {}
        for expts, coeff in (terms or {}).items():
            expts = tuple(int(e) for e in expts)
            if len(expts) != dim:
                raise ValueError(
                    f"exponent tuple {expts} does not match dimension {dim}"
                )
            if any(e < 0 for e in expts):
                raise ValueError(f"negative exponent in {expts}")
            c = Fraction(coeff)
            if c != 0:
                cleaned[expts] = c
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "_terms", cleaned)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("Polynomial is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, dim: int) -> "Polynomial":
        return cls(dim, {})

    @classmethod
    def constant(cls, dim: int, value: Scalar) -> "Polynomial":
        return cls(dim, {(0,) * dim: value})

    @classmethod
    def variable(cls, dim: int, index: int) -> "Polynomial":
        if not 0 <= index < dim:
            raise ValueError(f"variable index {index} out of range for dim {dim}")
        expts = tuple(1 if i == index else 0 for i in range(dim))
        return cls(dim, {expts: 1})

    @classmethod
    def monomial(cls, dim: int, exponents: Sequence[int], coeff: Scalar = 1) -> "Polynomial":
        return cls(dim, {tuple(exponents): coeff})

    # -- term access ------------------------------------------------------

    def coefficient(self, exponents: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exponents), Fraction(0))

    def sorted_terms(self) -> list[tuple[Exponents, Fraction]]:
        """Terms in descending graded-lex order."""
        return sorted(self._terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def monomials(self) -> set[Exponents]:
        return set(self._terms)

    def __iter__(self) -> Iterator[tuple[Exponents, Fraction]]:
        return iter(self.sorted_terms())

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "Polynomial | None":
        if isinstance(other, Polynomial):
            if other.dim != self.dim:
                raise ValueError(
                    f"dimension mismatch: {self.dim} vs {other.dim}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.dim, other)
        return None

    def __add__(self, other) -> "Polynomial":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        terms = dict(self._terms)
        for expts, coeff in rhs._terms.items():
            terms[expts] = terms.get(expts, Fraction(0)) + coeff
        return Polynomial(self.dim, terms)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.dim, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other) -> "Polynomial":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return rhs + (-self)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return Polynomial(self.dim, {e: v * c for e, v in self._terms.items()})
        if isinstance(other, Polynomial):
            if other.dim != self.dim:
                raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
            terms: dict[Exponents, Fraction] = {}
            for e1, c1 in self._terms.items():
                for e2, c2 in other._terms.items():
                    key = tuple(a + b for a, b in zip(e1, e2))
                    terms[key] = terms.get(key, Fraction(0)) + c1 * c2
            return Polynomial(self.dim, terms)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Polynomial.constant(self.dim, 1)
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- calculus and evaluation ------------------------------------------

    def derivative(self, index: int) -> "Polynomial":
        """Partial derivative with respect to variable `index`."""
        if not 0 <= index < self.dim:
            raise ValueError(f"variable index {index} out of range for dim {self.dim}")
        terms: dict[Exponents, Fraction] = {}
        for expts, coeff in self._terms.items():
            e = expts[index]
            if e == 0:
                continue
            new = list(expts)
            new[index] = e - 1
            key = tuple(new)
            terms[key] = terms.get(key, Fraction(0)) + coeff * e
        return Polynomial(self.dim, terms)

    def substitute(self, assignments: Mapping[int, "Scalar | Polynomial"]) -> "Polynomial":
        """Substitute values or polynomials (same dimension) for variables."""
        for i in assignments:
            if not 0 <= i < self.dim:
                raise ValueError(f"variable index {i} out of range for dim {self.dim}")
        result = Polynomial.zero(self.dim)
        for expts, coeff in self._terms.items():
            scalar = coeff
            poly_factor: Polynomial | None = None
            residual = [0] * self.dim
            for i, e in enumerate(expts):
                if e == 0:
                    continue
                if i in assignments:
                    val = assignments[i]
                    if isinstance(val, Polynomial):
                        if val.dim != self.dim:
                            raise ValueError(
                                f"substituted polynomial has dimension {val.dim}, expected {self.dim}"
                            )
                        piece = val ** e
                        poly_factor = piece if poly_factor is None else poly_factor * piece
                    else:
                        scalar *= Fraction(val) ** e
                else:
                    residual[i] = e
            term = Polynomial(self.dim, {tuple(residual): scalar})
            if poly_factor is not None:
                term = term * poly_factor
            result = result + term
        return result

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        """Exact value at a rational point."""
        if len(point) != self.dim:
            raise ValueError(f"point has length {len(point)}, expected {self.dim}")
        values = [Fraction(p) for p in point]
        total = Fraction(0)
        for expts, coeff in self._terms.items():
            v = coeff
            for x, e in zip(values, expts):
                if e:
                    v *= x ** e
            total += v
        return total

    # -- equality and rendering -------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.dim == other.dim and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(
                self, "_hash", hash((self.dim, tuple(self.sorted_terms())))
            )
        return self._hash

    def render(self, names: Sequence[str] | None = None) -> str:
        """Canonical text form, e.g. "5/3*x1^2*x3" or "-3*x*y + 2*y^2"."""
        if names is None:
            names = default_variable_names(self.dim)
        if len(names) != self.dim:
            raise ValueError(f"{len(names)} names for dimension {self.dim}")
        if not self._terms:
            return "0"
        pieces: list[str] = []
        for pos, (expts, coeff) in enumerate(self.sorted_terms()):
            factors = []
            for name, e in zip(names, expts):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mag = abs(coeff)
            if not factors:
                body = format_rational(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([format_rational(mag)] + factors)
            if pos == 0:
                pieces.append(body if coeff > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"Polynomial({self.dim}, {self.render()!r})"


# -- parsing ---------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<number>\d+(?:\.\d+)?)
      | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


class PolynomialParseError(ValueError):
    """Raised for malformed polynomial expressions."""


def _tokenize_poly(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise PolynomialParseError(
                f"unexpected character {text[pos]!r} at column {pos + 1}"
            )
        pos = m.end()
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), m.start()))
    return tokens


class _PolyParser:
    def __init__(self, tokens: list[tuple[str, str, int]], variables: Sequence[str]):
        self.tokens = tokens
        self.index = {name: i for i, name in enumerate(variables)}
        self.dim = len(variables)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise PolynomialParseError("unexpected end of expression")
        self.pos += 1
        return tok

    def parse(self) -> Polynomial:
        result = self.parse_sum()
        tok = self.peek()
        if tok is not None:
            raise PolynomialParseError(
                f"unexpected token {tok[1]!r} at column {tok[2] + 1}"
            )
        return result

    def parse_sum(self) -> Polynomial:
        sign = 1
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        total = self.parse_product() * sign
        while True:
            tok = self.peek()
            if tok is None or tok[0] != "op" or tok[1] not in "+-":
                break
            self.take()
            sign = -1 if tok[1] == "-" else 1
            total = total + self.parse_product() * sign
        return total

    def parse_product(self) -> Polynomial:
        result = self.parse_factor()
        while True:
            tok = self.peek()
            if tok is None:
                break
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                result = result * self.parse_factor()
            elif tok[0] in ("number", "ident") or (tok[0] == "op" and tok[1] == "("):
                # implicit multiplication, e.g. "2x", "x y" or "x(x + y)"
                result = result * self.parse_factor()
            else:
                break
        return result

    def parse_factor(self) -> Polynomial:
        tok = self.take()
        if tok[0] == "op" and tok[1] == "(":
            inner = self.parse_sum()
            closing = self.take()
            if closing[0] != "op" or closing[1] != ")":
                raise PolynomialParseError(
                    f"expected ')' at column {closing[2] + 1}"
                )
            nxt = self.peek()
            if nxt and nxt[0] == "op" and nxt[1] == "^":
                self.take()
                exp_tok = self.take()
                if exp_tok[0] != "number" or "." in exp_tok[1]:
                    raise PolynomialParseError(
                        f"expected integer exponent at column {exp_tok[2] + 1}"
                    )
                return inner ** int(exp_tok[1])
            return inner
        if tok[0] == "number":
            value = parse_rational(tok[1])
            nxt = self.peek()
            if nxt and nxt[0] == "op" and nxt[1] == "/":
                self.take()
                den_tok = self.take()
                if den_tok[0] != "number":
                    raise PolynomialParseError(
                        f"expected denominator at column {den_tok[2] + 1}"
                    )
                den = parse_rational(den_tok[1])
                if den == 0:
                    raise PolynomialParseError("division by zero in coefficient")
                value = value / den
            return Polynomial.constant(self.dim, value)
        if tok[0] == "ident":
            name = tok[1]
            if name not in self.index:
                known = ", ".join(self.index) or "(none)"
                raise PolynomialParseError(
                    f"unknown variable {name!r} (known: {known})"
                )
            base = Polynomial.variable(self.dim, self.index[name])
            nxt = self.peek()
            if nxt and nxt[0] == "op" and nxt[1] == "^":
                self.take()
                exp_tok = self.take()
                if exp_tok[0] != "number" or "." in exp_tok[1]:
                    raise PolynomialParseError(
                        f"expected integer exponent at column {exp_tok[2] + 1}"
                    )
                return base ** int(exp_tok[1])
            return base
        raise PolynomialParseError(
            f"unexpected token {tok[1]!r} at column {tok[2] + 1}"
        )


def parse_polynomial(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse an expression like "2*y^2 - 3*x*y" over the given variables."""
    tokens = _tokenize_poly(text)
    if not tokens:
        raise PolynomialParseError("empty polynomial expression")
    return _PolyParser(tokens, variables).parse()


# -- systems ---------------------------------------------------------------

@dataclass(frozen=True)
class PolynomialSystem:
    """An autonomous ODE right-hand side: one polynomial per variable."""

    variables: tuple[str, ...]
    components: tuple[Polynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "components", tuple(self.components))
        if len(self.variables) != len(self.components):
            raise ValueError(
                f"{len(self.components)} components for {len(self.variables)} variables"
            )
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        for comp in self.components:
            if comp.dim != len(self.variables):
                raise ValueError(
                    f"component dimension {comp.dim} does not match {len(self.variables)} variables"
                )

    @property
    def dim(self) -> int:
        return len(self.variables)

    @classmethod
    def from_strings(cls, variables: Sequence[str], exprs: Sequence[str]) -> "PolynomialSystem":
        vars_t = tuple(variables)
        return cls(vars_t, tuple(parse_polynomial(e, vars_t) for e in exprs))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def render(self) -> str:
        return "{" + ", ".join(c.render(self.variables) for c in self.components) + "}"

    def to_dict(self) -> dict:
        return {
            "variables": list(self.variables),
            "components": [c.render(self.variables) for c in self.components],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PolynomialSystem":
        try:
            variables = data["variables"]
            components = data["components"]
        except (KeyError, TypeError) as exc:
            raise ValueError("system JSON needs 'variables' and 'components'") from exc
        return cls.from_strings(variables, components)


def parse_system(text: str) -> PolynomialSystem:
    """Parse the plain-text system format.

    The first meaningful line is "vars x y ..."; each following line is one
    polynomial component.  Lines starting with '#' are comments.
    """
    lines = []
    for raw in text.splitlines():
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append(stripped)
    if not lines:
        raise ValueError("empty system description")
    header = lines[0].split()
    if header[0] != "vars" or len(header) < 2:
        raise ValueError('system must start with a "vars x y ..." line')
    variables = tuple(header[1:])
    if len(set(variables)) != len(variables):
        raise ValueError("duplicate variable names in vars line")
    body = lines[1:]
    if len(body) != len(variables):
        raise ValueError(
            f"expected {len(variables)} component lines, found {len(body)}"
        )
    return PolynomialSystem.from_strings(variables, body)
