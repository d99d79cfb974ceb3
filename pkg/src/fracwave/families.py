"""Closed-form phi for the three Riccati cases and the resulting wave solutions.

Numeric routines accept a ``lib`` argument: :mod:`math` for ordinary
floats, or MPFR numbers when residuals are taken by high-order finite
differences and need extra digits.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .engine import CandidateSet
from .errors import CaseMismatch, ComplexWaveSpeed, PoleOfInverse, SingularPoint
from .reduction import reduce_coupled

__all__ = [
    "PhiKind",
    "PhiCase",
    "ClosedFormSolution",
    "SingularityReport",
    "phi_value",
    "phi_parts",
    "assemble_solution",
    "evaluate_u",
    "evaluate_v",
    "singularities",
    "SINGULAR_TOL",
]

SINGULAR_TOL = 1e-9


class PhiKind(str, enum.Enum):
    TRIG = "trig"
    HYPERBOLIC = "hyp"
    RATIONAL = "rational"

    @classmethod
    def parse(cls, text: str) -> PhiKind:
        aliases = {"trig": cls.TRIG, "hyp": cls.HYPERBOLIC, "hyperbolic": cls.HYPERBOLIC, "rational": cls.RATIONAL}
        try:
            return aliases[text.lower()]
        except KeyError:
            raise ValueError(f"unknown case {text!r}; expected trig, hyp or rational") from None


@dataclass(frozen=True)
class PhiCase:
    kind: PhiKind
    C: float = 1.0
    D: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", PhiKind(self.kind))
        if self.C == 0 or self.D == 0:
            raise ValueError("C and D must be nonzero")

    def check(self, lam, mu) -> None:
        if lam == 0:
            raise CaseMismatch("lambda must be nonzero")
        if self.kind is PhiKind.TRIG and not lam * mu > 0:
            raise CaseMismatch(f"trigonometric case needs lambda*mu > 0, got {lam * mu}")
        if self.kind is PhiKind.HYPERBOLIC and not lam * mu < 0:
            raise CaseMismatch(f"hyperbolic case needs lambda*mu < 0, got {lam * mu}")
        if self.kind is PhiKind.RATIONAL and mu != 0:
            raise CaseMismatch(f"rational case needs mu = 0, got {mu}")


def _num(x, lib):
    if lib is math:
        return float(x)
    if isinstance(x, Fraction):
        return lib.mpf(x.numerator) / x.denominator
    return lib.mpf(x)


def phi_parts(case: PhiCase, lam, mu, eps, lib=math):
    """Numerator and denominator of the closed-form phi at ``eps``."""
    lam, mu = _num(lam, lib), _num(mu, lib)
    C, D = _num(case.C, lib), _num(case.D, lib)
    if case.kind is PhiKind.TRIG:
        s = lib.sqrt(mu * lam)
        c, sn = lib.cos(s * eps), lib.sin(s * eps)
        return lib.sqrt(mu / lam) * (C * c + D * sn), D * c - C * sn
    if case.kind is PhiKind.HYPERBOLIC:
        s = lib.sqrt(abs(mu * lam))
        w = C * lib.exp(2 * s * eps)  # C*(sinh + cosh)
        return -(s / lam) * (w + D), w - D
    return -C, lam * (C * eps + D)


def _is_small(value, other) -> bool:
    return abs(value) < SINGULAR_TOL * (1 + abs(other))


def phi_value(case: PhiCase, lam, mu, eps, lib=math):
    case.check(lam, mu)
    num, den = phi_parts(case, lam, mu, eps, lib)
    if _is_small(den, num):
        raise SingularPoint(f"phi is singular at eps={eps}")
    return num / den


@dataclass(frozen=True)
class SingularityReport:
    window: tuple[float, float]
    points: tuple[float, ...] = ()

    def near(self, eps, margin: float) -> bool:
        return any(abs(float(eps) - p) <= margin for p in self.points)


_COUPLING = reduce_coupled()[1]


@dataclass(frozen=True)
class ClosedFormSolution:
    """A candidate set bound to a phi case, numeric parameters and a kappa sign."""

    candidate: CandidateSet
    case: PhiCase
    params: Mapping[str, Fraction]
    kappa_sign: int
    alpha: float
    kappa_squared: Fraction
    coefficients: Mapping[int, Fraction] = field(default_factory=dict)
    degenerate: bool = False

    @property
    def coupled(self) -> bool:
        return self.candidate.equation == "coupled"

    @property
    def has_positive_powers(self) -> bool:
        return any(n > 0 for n in self.coefficients)

    @property
    def has_negative_powers(self) -> bool:
        return any(n < 0 for n in self.coefficients)

    def kappa(self, lib=math):
        return self.kappa_sign * lib.sqrt(_num(self.kappa_squared, lib))

    def epsilon(self, x, t, lib=math):
        if not t > 0:
            raise ValueError(f"t must be positive, got {t}")
        alpha = _num(self.alpha, lib)
        return x + self.kappa(lib) * t**alpha / alpha

    def profile(self, eps, lib=math):
        """U(eps) = sum_n c_n * phi^n."""
        total = _num(self.coefficients.get(0, 0), lib)
        if not (self.has_positive_powers or self.has_negative_powers):
            return total
        num, den = phi_parts(self.case, self.params["lambda"], self.params["mu"], eps, lib)
        if self.has_positive_powers and _is_small(den, num):
            raise SingularPoint(f"phi is singular at eps={eps}")
        if self.has_negative_powers and _is_small(num, den):
            raise PoleOfInverse(f"phi vanishes at eps={eps}")
        for n, c in self.coefficients.items():
            if n > 0:
                total += _num(c, lib) * (num / den) ** n
            elif n < 0:
                total += _num(c, lib) * (den / num) ** (-n)
        return total

    def coupling_factor(self, lib=math):
        """``c`` in ``v = c*u``."""
        k = self.kappa(lib)
        total = 0
        for mono, coeff in _COUPLING:
            term = _num(coeff, lib)
            for name, e in mono:
                term *= (k if name == "kappa" else _num(self.params[name], lib)) ** e
            total += term
        return total

    def u(self, x, t, lib=math):
        return self.profile(self.epsilon(x, t, lib), lib)

    def compiled(self, lib=math):
        """Fast ``u(x, t)`` with constants converted once (for dense sampling).

        With multiprecision numbers, build it under the working precision it will be
        used at.
        """
        kind = self.case.kind
        lam, mu = _num(self.params["lambda"], lib), _num(self.params["mu"], lib)
        C, D = _num(self.case.C, lib), _num(self.case.D, lib)
        alpha = _num(self.alpha, lib)
        speed = self.kappa(lib) / alpha
        a0 = _num(self.coefficients.get(0, 0), lib)
        pos = [(n, _num(c, lib)) for n, c in self.coefficients.items() if n > 0]
        neg = [(-n, _num(c, lib)) for n, c in self.coefficients.items() if n < 0]
        if kind is PhiKind.TRIG:
            s, scale = lib.sqrt(mu * lam), lib.sqrt(mu / lam)
        elif kind is PhiKind.HYPERBOLIC:
            s = lib.sqrt(abs(mu * lam))
            scale = -s / lam
            s = 2 * s
        else:
            s, scale = None, None
        shifts: dict = {}
        exp = lib.exp
        if hasattr(lib, "cos_sin"):
            cos_sin = lib.cos_sin
        else:
            def cos_sin(z):
                return lib.cos(z), lib.sin(z)

        def u(x, t):
            shift = shifts.get(t)
            if shift is None:
                if not t > 0:
                    raise ValueError(f"t must be positive, got {t}")
                shift = shifts[t] = speed * t**alpha
            eps = x + shift
            if not (pos or neg):
                return a0
            if kind is PhiKind.TRIG:
                c, sn = cos_sin(s * eps)
                num, den = scale * (C * c + D * sn), D * c - C * sn
            elif kind is PhiKind.HYPERBOLIC:
                w = C * exp(s * eps)
                num, den = scale * (w + D), w - D
            else:
                num, den = -C, lam * (C * eps + D)
            if pos and _is_small(den, num):
                raise SingularPoint(f"phi is singular at eps={eps}")
            if neg and _is_small(num, den):
                raise PoleOfInverse(f"phi vanishes at eps={eps}")
            total = a0
            if pos:
                p = num / den
                for n, c in pos:
                    total += c * p**n
            if neg:
                q = den / num
                for n, c in neg:
                    total += c * q**n
            return total

        return u

    def v(self, x, t, lib=math):
        if not self.coupled:
            raise ValueError("v is only defined for the coupled system")
        return self.coupling_factor(lib) * self.u(x, t, lib)

    def singularities(self, window) -> SingularityReport:
        return singularities(self, window)


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


def assemble_solution(
    candidate: CandidateSet,
    case: PhiCase,
    params: Mapping[str, object],
    kappa_sign: int = 1,
    alpha: float = 0.5,
) -> ClosedFormSolution:
    if kappa_sign not in (1, -1):
        raise ValueError("kappa_sign must be +1 or -1")
    if not 0 < alpha <= 1:
        raise ValueError(f"fractional order must satisfy 0 < alpha <= 1, got {alpha}")
    exact = {k: _to_fraction(v) for k, v in params.items()}
    exact.setdefault("beta", Fraction(1))
    exact.setdefault("gamma", Fraction(1))
    for name in ("lambda", "mu"):
        if name not in exact:
            raise ValueError(f"missing parameter {name}")
    if candidate.equation == "coupled" and exact["beta"] == 0:
        raise ValueError("beta must be nonzero")
    case.check(exact["lambda"], exact["mu"])

    if candidate.kappa_free:
        if "kappa" not in exact:
            raise ValueError("this candidate leaves kappa free; pass a 'kappa' parameter")
        kappa_squared = exact["kappa"] ** 2
        kappa_sign = 1 if exact["kappa"] >= 0 else -1
    else:
        kappa_squared = candidate.kappa_squared.evaluate(exact)
    if kappa_squared < 0:
        raise ComplexWaveSpeed(f"kappa^2 = {kappa_squared} < 0 at the given parameters")
    exact.setdefault("kappa", Fraction(0))

    coefficients = {}
    for name, power in (("a0", 0), ("a1", 1), ("a2", 2), ("b1", -1), ("b2", -2)):
        c = candidate.value(name).evaluate(exact)
        if c != 0:
            coefficients[power] = c
    if case.kind is PhiKind.RATIONAL and any(n < 0 for n in coefficients):
        raise CaseMismatch("rational case cannot carry negative powers of phi")
    degenerate = not any(n != 0 for n in coefficients)
    return ClosedFormSolution(candidate, case, exact, kappa_sign, alpha, kappa_squared, coefficients, degenerate)


def evaluate_u(sol: ClosedFormSolution, x, t, lib=math):
    return sol.u(x, t, lib)


def evaluate_v(sol: ClosedFormSolution, x, t, lib=math):
    return sol.v(x, t, lib)


def _periodic_roots(theta: float, s: float, lo: float, hi: float) -> list[float]:
    k0 = math.ceil((s * lo - theta) / math.pi)
    k1 = math.floor((s * hi - theta) / math.pi)
    return [(theta + k * math.pi) / s for k in range(k0, k1 + 1)]


def singularities(sol: ClosedFormSolution, window) -> SingularityReport:
    """Poles of the solution (zeros of phi's denominator, and of phi when
    negative powers appear) inside ``window``."""
    lo, hi = float(window[0]), float(window[1])
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo:
        raise ValueError(f"invalid window {window}")
    lam, mu = float(sol.params["lambda"]), float(sol.params["mu"])
    C, D = float(sol.case.C), float(sol.case.D)
    points: list[float] = []
    want_den, want_num = sol.has_positive_powers, sol.has_negative_powers
    kind = sol.case.kind
    if kind is PhiKind.TRIG:
        s = math.sqrt(mu * lam)
        if want_den:
            points += _periodic_roots(math.atan(D / C), s, lo, hi)
        if want_num:
            points += _periodic_roots(math.atan(-C / D), s, lo, hi)
    elif kind is PhiKind.HYPERBOLIC:
        s = math.sqrt(abs(mu * lam))
        if want_den and D / C > 0:
            points.append(math.log(D / C) / (2 * s))
        if want_num and -D / C > 0:
            points.append(math.log(-D / C) / (2 * s))
    elif want_den:
        points.append(-D / C)
    inside = sorted(p for p in points if lo <= p <= hi)
    return SingularityReport((lo, hi), tuple(inside))
