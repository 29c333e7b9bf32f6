"""Exact sparse multivariate polynomials and normalized inequality decisions.

Coefficients are exact rationals (`fractions.Fraction`), so two polynomials
represent the same function exactly when their canonical term maps coincide.
That exactness is what makes diagram node sharing and the solver's structural
convergence test reliable; nothing in this module ever rounds.

Variables are plain symbol strings.  A trailing apostrophe marks the
next-state ("primed") copy of a state variable, e.g. ``x1'`` is the primed
twin of ``x1``.  Boolean state variables never occur inside polynomials; they
appear only as their own decisions.

Monomials are ordered by a fixed graded-lexicographic order (total degree
first, then symbol order), which fixes a unique printed form and a unique
normalization for inequality decisions.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Literal, Mapping, Union

RationalLike = Union[int, Fraction]

#: A monomial is a tuple of (symbol, exponent) pairs, symbol-sorted, exps > 0.
Monomial = tuple[tuple[str, int], ...]

PRIME_SUFFIX = "'"


def prime(symbol: str) -> str:
    """Return the primed (next-state) twin of a variable symbol."""
    if symbol.endswith(PRIME_SUFFIX):
        raise ValueError(f"symbol {symbol!r} is already primed")
    return symbol + PRIME_SUFFIX


def unprime(symbol: str) -> str:
    if not symbol.endswith(PRIME_SUFFIX):
        raise ValueError(f"symbol {symbol!r} is not primed")
    return symbol[: -len(PRIME_SUFFIX)]


def is_primed(symbol: str) -> bool:
    return symbol.endswith(PRIME_SUFFIX)


@dataclass(frozen=True)
class VarId:
    """Identity of a state variable: base name, kind, and primed flag."""

    name: str
    kind: Literal["bool", "cont"]
    primed: bool = False

    @property
    def symbol(self) -> str:
        return self.name + PRIME_SUFFIX if self.primed else self.name

    def primed_twin(self) -> "VarId":
        if self.primed:
            raise ValueError(f"{self.symbol} is already primed")
        return VarId(self.name, self.kind, primed=True)


class ConstantComparisonError(ValueError):
    """A comparison folded to a constant; callers must fold to `truth`."""

    def __init__(self, message: str, truth: bool):
        super().__init__(message)
        self.truth = truth


def _mono_key(mono: Monomial) -> tuple[int, Monomial]:
    return (sum(e for _, e in mono), mono)


class Polynomial:
    """Immutable canonical sparse polynomial with exact rational coefficients.

    No zero coefficients are stored and terms are kept in descending monomial
    order, so equal functions compare and hash equal.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, RationalLike] | None = None):
        cleaned: dict[Monomial, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                c = Fraction(coeff)
                if c == 0:
                    continue
                if any(e <= 0 for _, e in mono):
                    raise ValueError(f"non-positive exponent in monomial {mono}")
                if list(mono) != sorted(mono):
                    mono = tuple(sorted(mono))
                prev = cleaned.get(mono)
                cleaned[mono] = c if prev is None else prev + c
                if cleaned[mono] == 0:
                    del cleaned[mono]
        ordered = tuple(
            sorted(cleaned.items(), key=lambda kv: _mono_key(kv[0]), reverse=True)
        )
        object.__setattr__(self, "_terms", ordered)
        object.__setattr__(self, "_hash", hash(ordered))

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("Polynomial is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def const(value: RationalLike) -> "Polynomial":
        return Polynomial({(): Fraction(value)})

    @staticmethod
    def var(symbol: str) -> "Polynomial":
        return Polynomial({((symbol, 1),): Fraction(1)})

    # -- inspection --------------------------------------------------------

    @property
    def terms(self) -> tuple[tuple[Monomial, Fraction], ...]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and self._terms[0][0] == ())

    def constant_value(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms[0][1]

    def total_degree(self) -> int:
        return max((sum(e for _, e in m) for m, _ in self._terms), default=0)

    def is_linear(self) -> bool:
        return self.total_degree() <= 1

    def variables(self) -> frozenset[str]:
        return frozenset(sym for mono, _ in self._terms for sym, _ in mono)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        out = dict(self._terms)
        for mono, coeff in other._terms:
            out[mono] = out.get(mono, Fraction(0)) + coeff
        return Polynomial(out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        out = dict(self._terms)
        for mono, coeff in other._terms:
            out[mono] = out.get(mono, Fraction(0)) - coeff
        return Polynomial(out)

    def __neg__(self) -> "Polynomial":
        return Polynomial({m: -c for m, c in self._terms})

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms:
            for m2, c2 in other._terms:
                exps: dict[str, int] = dict(m1)
                for sym, e in m2:
                    exps[sym] = exps.get(sym, 0) + e
                mono = tuple(sorted(exps.items()))
                out[mono] = out.get(mono, Fraction(0)) + c1 * c2
        return Polynomial(out)

    def __pow__(self, exponent: int) -> "Polynomial":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("polynomial exponents must be non-negative integers")
        result = Polynomial.const(1)
        for _ in range(exponent):
            result = result * self
        return result

    def scale(self, factor: RationalLike) -> "Polynomial":
        """Multiply every coefficient by an exact rational factor."""
        f = Fraction(factor)
        if f == 0:
            return Polynomial()
        return Polynomial({m: c * f for m, c in self._terms})

    def substitute(self, sigma: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Replace variables by polynomials and expand.

        No substituted variable may occur in any replacement polynomial
        (simultaneous substitution; sequential effects would be ambiguous).
        """
        if not sigma:
            return self
        rhs_vars: set[str] = set()
        for repl in sigma.values():
            rhs_vars |= repl.variables()
        clash = rhs_vars & set(sigma)
        if clash:
            raise ValueError(
                f"substitution keys occur in replacement polynomials: {sorted(clash)}"
            )
        power_cache: dict[tuple[str, int], Polynomial] = {}
        total = Polynomial()
        for mono, coeff in self._terms:
            prod = Polynomial.const(coeff)
            for sym, exp in mono:
                base = sigma.get(sym)
                if base is None:
                    prod = prod * Polynomial({((sym, exp),): Fraction(1)})
                    continue
                cached = power_cache.get((sym, exp))
                if cached is None:
                    cached = base**exp
                    power_cache[(sym, exp)] = cached
                prod = prod * cached
            total = total + prod
        return total

    def evaluate(self, assignment: Mapping[str, RationalLike]) -> Fraction:
        """Exact value at a point; every variable must be assigned."""
        total = Fraction(0)
        for mono, coeff in self._terms:
            term = coeff
            for sym, exp in mono:
                try:
                    value = assignment[sym]
                except KeyError:
                    raise ValueError(f"no value assigned for variable {sym!r}") from None
                term *= Fraction(value) ** exp
            total += term
        return total

    # -- normalization -----------------------------------------------------

    def normalized_direction(self) -> tuple["Polynomial", bool]:
        """Scale to coprime integer coefficients with positive leading term.

        Returns the scaled polynomial and whether the sign was flipped.  The
        leading term is the largest monomial in the graded-lex order.
        """
        if self.is_constant():
            raise ValueError("constant polynomial has no direction")
        denominator_lcm = lcm(*(c.denominator for _, c in self._terms))
        numerator_gcd = gcd(*(abs((c * denominator_lcm).numerator) for _, c in self._terms))
        factor = Fraction(denominator_lcm, numerator_gcd)
        leading = self._terms[0][1]
        if leading < 0:
            return self.scale(-factor), True
        return self.scale(factor), False

    # -- equality / printing ------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self._terms == other._terms

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for i, (mono, coeff) in enumerate(self._terms):
            body = "*".join(
                sym if exp == 1 else f"{sym}^{exp}" for sym, exp in mono
            )
            mag = abs(coeff)
            if body and mag == 1:
                text = body
            elif body:
                text = f"{mag}*{body}"
            else:
                text = str(mag)
            if i == 0:
                parts.append(text if coeff > 0 else f"-{text}")
            else:
                parts.append(f"+ {text}" if coeff > 0 else f"- {text}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r})"


# -- decisions -------------------------------------------------------------


@dataclass(frozen=True)
class BoolDec:
    """Decision testing a boolean state variable."""

    var: str

    def __str__(self) -> str:
        return self.var


@dataclass(frozen=True)
class IneqDec:
    """Decision `poly > 0` (strict) or `poly >= 0` (non-strict).

    Stored decisions are always normalized: coprime integer coefficients with
    a positive leading coefficient.  The semantic negation of a stored
    decision is represented by the same object plus a flip flag.
    """

    poly: Polynomial
    strict: bool

    def __str__(self) -> str:
        return f"{self.poly} {'>' if self.strict else '>='} 0"

    def is_normalized(self) -> bool:
        direction, negated = self.poly.normalized_direction()
        return not negated and direction == self.poly


Decision = Union[BoolDec, IneqDec]


def normalize_ineq(poly: Polynomial, strict: bool) -> tuple[IneqDec, bool]:
    """Canonicalize the atom `poly > 0` (strict) or `poly >= 0`.

    Returns (decision, flipped); the atom holds iff the decision holds when
    not flipped, and iff the decision fails when flipped.  Negating flips the
    strictness: not(p >= 0) is (-p > 0).
    """
    if poly.is_constant():
        c = poly.constant_value()
        truth = c > 0 if strict else c >= 0
        raise ConstantComparisonError(
            f"comparison over constant {c} must be folded by the caller", truth
        )
    direction, negated = poly.normalized_direction()
    if negated:
        return IneqDec(direction, not strict), True
    return IneqDec(direction, strict), False


_OP_TO_DIFF = {
    "<": (True, True),    # lhs < rhs  ==  rhs - lhs > 0
    "<=": (True, False),  # lhs <= rhs ==  rhs - lhs >= 0
    ">": (False, True),
    ">=": (False, False),
}


def normalize_cmp(lhs: Polynomial, op: str, rhs: Polynomial) -> tuple[IneqDec, bool]:
    """Canonicalize `lhs op rhs` for op in {<, <=, >, >=}.

    The original comparison is equivalent to the returned decision when
    flipped is False and to its negation when flipped is True.
    """
    try:
        swap, strict = _OP_TO_DIFF[op]
    except KeyError:
        raise ValueError(f"unsupported comparison operator {op!r}") from None
    diff = rhs - lhs if swap else lhs - rhs
    return normalize_ineq(diff, strict)
