"""Exact parameter polynomials and Laurent polynomials in phi = G'/G^2.

:class:`ParamPoly` is a polynomial with rational coefficients in named
symbols (``lambda``, ``mu``, ``beta``, ``gamma``, ``kappa`` and the ansatz
unknowns ``a0, a1, ..., b1, b2, ...``).  Exponents may be negative, which
allows exact division by monomials such as ``beta``; general division is
deliberately not offered.

:class:`PhiLaurent` is a Laurent polynomial in ``phi`` whose coefficients are
:class:`ParamPoly` values.  Differentiation with respect to the wave variable
uses the Riccati relation ``phi' = mu + lambda*phi^2``.
"""

from __future__ import annotations

import functools
import math
import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

__all__ = [
    "PARAMETERS",
    "ParamPoly",
    "PhiLaurent",
    "poly_add",
    "poly_mul",
    "phi_derivative",
    "coefficient_of",
]

PARAMETERS = ("lambda", "mu", "beta", "gamma", "kappa")

Monomial = tuple[tuple[str, int], ...]
Scalar = Union[int, Fraction]

_UNKNOWN_RE = re.compile(r"^([ab])(\d+)$")
_IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*$")


@functools.lru_cache(maxsize=None)
def symbol_rank(name: str) -> tuple:
    """Sort key fixing the canonical symbol order."""
    if name in PARAMETERS:
        return (0, PARAMETERS.index(name), 0)
    m = _UNKNOWN_RE.match(name)
    if m:
        return (1, 0 if m.group(1) == "a" else 1, int(m.group(2)))
    return (2, 0, name)


def _canonical_monomial(pairs: Iterable[tuple[str, int]]) -> Monomial:
    acc: dict[str, int] = {}
    for name, exp in pairs:
        acc[name] = acc.get(name, 0) + exp
    return tuple(sorted(((n, e) for n, e in acc.items() if e != 0), key=lambda p: symbol_rank(p[0])))


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    return _canonical_monomial(m1 + m2)


def _lex_cmp(m1: Monomial, m2: Monomial) -> int:
    """Lexicographic comparison over the global symbol order."""
    i = j = 0
    while i < len(m1) or j < len(m2):
        if j == len(m2) or (i < len(m1) and symbol_rank(m1[i][0]) < symbol_rank(m2[j][0])):
            name, e1, e2 = m1[i][0], m1[i][1], 0
            i += 1
        elif i == len(m1) or symbol_rank(m2[j][0]) < symbol_rank(m1[i][0]):
            name, e1, e2 = m2[j][0], 0, m2[j][1]
            j += 1
        else:
            name, e1, e2 = m1[i][0], m1[i][1], m2[j][1]
            i += 1
            j += 1
        if e1 != e2:
            return 1 if e1 > e2 else -1
    return 0


_lex_key = functools.cmp_to_key(_lex_cmp)


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n != q.numerator or d * d != q.denominator:
        return None
    return Fraction(n, d)


def _format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class ParamPoly:
    """Immutable multivariate (Laurent) polynomial with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        acc: dict[Monomial, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            key = _canonical_monomial(mono)
            acc[key] = acc.get(key, Fraction(0)) + Fraction(coeff)
        self._terms = {m: c for m, c in acc.items() if c != 0}
        self._hash = None

    # -- construction -------------------------------------------------

    @classmethod
    def const(cls, value: Scalar) -> ParamPoly:
        return cls({(): value})

    @classmethod
    def symbol(cls, name: str, exp: int = 1) -> ParamPoly:
        if not _IDENT_RE.match(name):
            raise ValueError(f"invalid symbol name {name!r}")
        return cls({((name, exp),): 1})

    @classmethod
    def coerce(cls, value) -> ParamPoly:
        if isinstance(value, ParamPoly):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.const(value)
        if isinstance(value, str):
            return cls.parse(value)
        raise TypeError(f"cannot convert {type(value).__name__} to ParamPoly")

    @classmethod
    def parse(cls, text: str) -> ParamPoly:
        """Parse ``+ - * / ^ ( )`` expressions over rationals and symbols.

        Division is only accepted by monomials.
        """
        return _Parser(text).parse()

    # -- inspection ---------------------------------------------------

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(sorted(self._terms.items(), key=lambda mc: _lex_key(mc[0]), reverse=True))

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(not m for m in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((), Fraction(0))

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_polynomial(self) -> bool:
        """True when no exponent is negative."""
        return all(e >= 0 for m in self._terms for _, e in m)

    def symbols(self) -> set[str]:
        return {n for m in self._terms for n, _ in m}

    def degree_in(self, name: str) -> int:
        if not self._terms:
            return -1
        return max(dict(m).get(name, 0) for m in self._terms)

    def coefficients_in(self, name: str) -> dict[int, ParamPoly]:
        """Split into ``{exponent: coefficient}`` with respect to one symbol."""
        groups: dict[int, dict[Monomial, Fraction]] = {}
        for mono, coeff in self._terms.items():
            e = dict(mono).get(name, 0)
            rest = tuple((n, k) for n, k in mono if n != name)
            groups.setdefault(e, {})[rest] = coeff
        return {e: ParamPoly(t) for e, t in groups.items()}

    def leading_term(self) -> tuple[Monomial, Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        return next(iter(self))

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other) -> ParamPoly:
        try:
            other = ParamPoly.coerce(other)
        except TypeError:
            return NotImplemented
        acc = dict(self._terms)
        for m, c in other._terms.items():
            acc[m] = acc.get(m, Fraction(0)) + c
        return ParamPoly(acc)

    __radd__ = __add__

    def __neg__(self) -> ParamPoly:
        return ParamPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> ParamPoly:
        try:
            other = ParamPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> ParamPoly:
        return ParamPoly.coerce(other) - self

    def __mul__(self, other) -> ParamPoly:
        try:
            other = ParamPoly.coerce(other)
        except TypeError:
            return NotImplemented
        acc: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                acc[m] = acc.get(m, Fraction(0)) + c1 * c2
        return ParamPoly(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> ParamPoly:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ParamPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> ParamPoly:
        """Exact inverse; defined for nonzero monomials only."""
        if not self.is_monomial():
            raise ZeroDivisionError(f"{self} is not an invertible monomial")
        (mono, coeff), = self._terms.items()
        return ParamPoly({tuple((n, -e) for n, e in mono): 1 / coeff})

    def __truediv__(self, other) -> ParamPoly:
        try:
            other = ParamPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ParamPoly.const(other)
        if not isinstance(other, ParamPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- substitution and evaluation ----------------------------------

    def subs(self, mapping: Mapping[str, object]) -> ParamPoly:
        """Replace symbols by ParamPoly (or rational) values."""
        values = {k: ParamPoly.coerce(v) for k, v in mapping.items()}
        powers: dict[tuple[str, int], ParamPoly] = {}
        result = ParamPoly()
        for mono, coeff in self._terms.items():
            term = ParamPoly.const(coeff)
            kept = []
            for name, e in mono:
                if name in values:
                    key = (name, e)
                    if key not in powers:
                        powers[key] = values[name] ** e
                    term = term * powers[key]
                else:
                    kept.append((name, e))
            result = result + term * ParamPoly({tuple(kept): 1})
        return result

    def subs_square(self, name: str, square: object) -> ParamPoly:
        """Replace ``name**2`` by ``square``; odd powers of ``name`` are rejected."""
        square = ParamPoly.coerce(square)
        result = ParamPoly()
        for e, coeff in self.coefficients_in(name).items():
            if e % 2:
                raise ValueError(f"odd power {name}^{e} cannot be expressed through {name}^2")
            result = result + coeff * square ** (e // 2)
        return result

    def evaluate(self, values: Mapping[str, object]):
        """Numeric value; exact when every value is an int or Fraction."""
        exact = all(isinstance(values[n], (int, Fraction)) for n in self.symbols())
        total = Fraction(0) if exact else 0.0
        for mono, coeff in self._terms.items():
            term = coeff if exact else float(coeff)
            for name, e in mono:
                v = values[name]
                term = term * (Fraction(v) ** e if exact else float(v) ** e)
            total = total + term
        return total

    # -- exact square root --------------------------------------------

    def sqrt_exact(self) -> ParamPoly | None:
        """Return ``r`` with ``r*r == self`` (sign fixed by the leading term), or None."""
        if self.is_zero():
            return ParamPoly()
        mono, coeff = self.leading_term()
        if any(e % 2 for _, e in mono):
            return None
        c = _rational_sqrt(coeff)
        if c is None:
            return None
        lead = ParamPoly({tuple((n, e // 2) for n, e in mono): c})
        twice_lead_inv = (2 * lead).inverse()
        root = lead
        last = lead.leading_term()[0]
        for _ in range(4 * len(self) + 8):
            rem = self - root * root
            if rem.is_zero():
                return root
            step = ParamPoly(dict([rem.leading_term()])) * twice_lead_inv
            step_mono = step.leading_term()[0]
            if _lex_cmp(step_mono, last) >= 0:
                return None
            root = root + step
            last = step_mono
        return None

    # -- text ---------------------------------------------------------

    def to_text(self) -> str:
        """Canonical, deterministic text form (parsable by :meth:`parse`)."""
        if not self._terms:
            return "0"
        out = []
        for i, (mono, coeff) in enumerate(self):
            sign = "-" if coeff < 0 else "+"
            mag = abs(coeff)
            factors = [n if e == 1 else f"{n}^{e}" for n, e in mono if e > 0]
            divisors = [n if e == -1 else f"{n}^{-e}" for n, e in mono if e < 0]
            if mag != 1 or not factors:
                factors.insert(0, _format_fraction(mag))
            body = "*".join(factors) + "".join(f"/{d}" for d in divisors)
            if i == 0:
                out.append(body if sign == "+" else f"-{body}")
            else:
                out.append(f" {sign} {body}")
        return "".join(out)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"ParamPoly({self.to_text()!r})"


_TOKEN_RE = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str]] = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            m = _TOKEN_RE.match(stripped, pos)
            if not m:
                raise ValueError(f"unexpected character at {pos} in {text!r}")
            num, ident, op = m.groups()
            if num is not None:
                self.tokens.append(("num", num))
            elif ident is not None:
                self.tokens.append(("ident", ident))
            else:
                self.tokens.append(("op", "^" if op == "**" else op))
            pos = m.end()
        self.i = 0

    def _peek(self) -> tuple[str, str] | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def _take(self) -> tuple[str, str]:
        tok = self._peek()
        if tok is None:
            raise ValueError(f"unexpected end of input in {self.text!r}")
        self.i += 1
        return tok

    def _is_op(self, *ops: str) -> bool:
        tok = self._peek()
        return tok is not None and tok[0] == "op" and tok[1] in ops

    def parse(self) -> ParamPoly:
        result = self._expr()
        if self._peek() is not None:
            raise ValueError(f"trailing input {self._peek()[1]!r} in {self.text!r}")
        return result

    def _expr(self) -> ParamPoly:
        result = self._term()
        while self._is_op("+", "-"):
            op = self._take()[1]
            rhs = self._term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def _term(self) -> ParamPoly:
        result = self._unary()
        while self._is_op("*", "/"):
            op = self._take()[1]
            rhs = self._unary()
            result = result * rhs if op == "*" else result / rhs
        return result

    def _unary(self) -> ParamPoly:
        if self._is_op("-"):
            self._take()
            return -self._unary()
        if self._is_op("+"):
            self._take()
            return self._unary()
        return self._power()

    def _power(self) -> ParamPoly:
        base = self._atom()
        if self._is_op("^"):
            self._take()
            sign = 1
            if self._is_op("-"):
                self._take()
                sign = -1
            kind, value = self._take()
            if kind != "num" or "." in value:
                raise ValueError(f"exponent must be an integer in {self.text!r}")
            base = base ** (sign * int(value))
        return base

    def _atom(self) -> ParamPoly:
        kind, value = self._take()
        if kind == "num":
            return ParamPoly.const(Fraction(value))
        if kind == "ident":
            return ParamPoly.symbol(value)
        if value == "(":
            inner = self._expr()
            if self._take() != ("op", ")"):
                raise ValueError(f"missing ')' in {self.text!r}")
            return inner
        raise ValueError(f"unexpected {value!r} in {self.text!r}")


LAMBDA = ParamPoly.symbol("lambda")
MU = ParamPoly.symbol("mu")


class PhiLaurent:
    """Laurent polynomial ``sum_n c_n * phi^n`` with ParamPoly coefficients."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        acc: dict[int, ParamPoly] = {}
        for n, c in (coeffs or {}).items():
            c = ParamPoly.coerce(c)
            acc[int(n)] = acc.get(int(n), ParamPoly()) + c
        self._coeffs = {n: c for n, c in sorted(acc.items()) if not c.is_zero()}

    @classmethod
    def phi(cls, n: int = 1) -> PhiLaurent:
        return cls({n: 1})

    @classmethod
    def const(cls, value) -> PhiLaurent:
        return cls({0: value})

    @property
    def coeffs(self) -> dict[int, ParamPoly]:
        return dict(self._coeffs)

    def coefficient(self, n: int) -> ParamPoly:
        return self._coeffs.get(n, ParamPoly())

    def half_width(self) -> int:
        """Smallest N with every exponent in [-N, N]."""
        return max((abs(n) for n in self._coeffs), default=0)

    def window(self) -> tuple[int, int]:
        n = self.half_width()
        return (-n, n)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __add__(self, other) -> PhiLaurent:
        other = _as_laurent(other)
        acc = dict(self._coeffs)
        for n, c in other._coeffs.items():
            acc[n] = acc[n] + c if n in acc else c
        return PhiLaurent(acc)

    __radd__ = __add__

    def __neg__(self) -> PhiLaurent:
        return PhiLaurent({n: -c for n, c in self._coeffs.items()})

    def __sub__(self, other) -> PhiLaurent:
        return self + (-_as_laurent(other))

    def __rsub__(self, other) -> PhiLaurent:
        return _as_laurent(other) - self

    def __mul__(self, other) -> PhiLaurent:
        other = _as_laurent(other)
        acc: dict[int, ParamPoly] = {}
        for n1, c1 in self._coeffs.items():
            for n2, c2 in other._coeffs.items():
                acc[n1 + n2] = acc.get(n1 + n2, ParamPoly()) + c1 * c2
        return PhiLaurent(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> PhiLaurent:
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = PhiLaurent.const(1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, PhiLaurent):
            try:
                other = _as_laurent(other)
            except TypeError:
                return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self._coeffs.items()))

    def derivative(self, lam=LAMBDA, mu=MU) -> PhiLaurent:
        """d/d(eps) using d(phi^n) = n*mu*phi^(n-1) + n*lambda*phi^(n+1)."""
        lam, mu = ParamPoly.coerce(lam), ParamPoly.coerce(mu)
        acc: dict[int, ParamPoly] = {}
        for n, c in self._coeffs.items():
            if n == 0:
                continue
            acc[n - 1] = acc.get(n - 1, ParamPoly()) + n * mu * c
            acc[n + 1] = acc.get(n + 1, ParamPoly()) + n * lam * c
        return PhiLaurent(acc)

    def map_coefficients(self, fn) -> PhiLaurent:
        return PhiLaurent({n: fn(c) for n, c in self._coeffs.items()})

    def subs(self, mapping: Mapping[str, object]) -> PhiLaurent:
        return self.map_coefficients(lambda c: c.subs(mapping))

    def to_dict(self) -> dict[str, str]:
        return {str(n): c.to_text() for n, c in self._coeffs.items()}

    @classmethod
    def from_dict(cls, data: Mapping[str, str]) -> PhiLaurent:
        return cls({int(n): ParamPoly.parse(text) for n, text in data.items()})

    def to_text(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for n, c in self._coeffs.items():
            parts.append(f"({c.to_text()})" if n == 0 else f"({c.to_text()})*phi^{n}")
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"PhiLaurent({self.to_text()!r})"


def _as_laurent(value) -> PhiLaurent:
    if isinstance(value, PhiLaurent):
        return value
    return PhiLaurent.const(ParamPoly.coerce(value))


def poly_add(p: PhiLaurent, q: PhiLaurent) -> PhiLaurent:
    return p + q


def poly_mul(p: PhiLaurent, q: PhiLaurent) -> PhiLaurent:
    return p * q


def phi_derivative(p: PhiLaurent) -> PhiLaurent:
    return p.derivative()


def coefficient_of(p: PhiLaurent, n: int) -> ParamPoly:
    return p.coefficient(n)
