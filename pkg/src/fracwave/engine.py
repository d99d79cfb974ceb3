"""Ansatz construction, coefficient systems and the structured M=2 solver.

For an ODE ``c2*U'' + c1*U + c0*U^2 = 0`` and the ansatz
``U = a0 + sum_i (a_i*phi^i + b_i*phi^-i)`` the coefficients of every
power of phi must vanish.  At M=2 the system has a rigid shape:

* powers +-4 are quadratics in a2 (resp. b2) alone,
* powers +-3 are linear in a1 (resp. b1) once a2, b2 are fixed,
* the remaining powers involve only a0 and kappa (through kappa^2).

The solver walks that shape branch by branch instead of calling a general
polynomial-system solver.  kappa^2 is treated as one unknown.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

from .errors import UnsupportedForm
from .phi_algebra import ParamPoly, PhiLaurent
from .reduction import ReducedODE, ode_balancing_number, reduce_boussinesq, reduce_coupled

__all__ = [
    "AnsatzSpec",
    "CoefficientSystem",
    "CandidateSet",
    "VerificationReport",
    "build_ansatz",
    "derive_coefficient_system",
    "solve_quadratic_form",
    "verify_candidate",
    "label_candidates",
    "KNOWN_SETS",
    "EQUATIONS",
    "reduced_ode",
    "coefficient_system",
    "candidate_sets",
    "find_set",
]

KAPPA_SQUARED = ParamPoly.symbol("kappa", 2)


@dataclass(frozen=True)
class AnsatzSpec:
    M: int

    def __post_init__(self):
        if self.M < 1:
            raise ValueError(f"balancing number must be positive, got {self.M}")

    @property
    def unknowns(self) -> tuple[str, ...]:
        return ("a0",) + tuple(f"a{i}" for i in range(1, self.M + 1)) + tuple(f"b{i}" for i in range(1, self.M + 1))


def build_ansatz(spec: AnsatzSpec) -> PhiLaurent:
    coeffs = {0: ParamPoly.symbol("a0")}
    for i in range(1, spec.M + 1):
        coeffs[i] = ParamPoly.symbol(f"a{i}")
        coeffs[-i] = ParamPoly.symbol(f"b{i}")
    return PhiLaurent(coeffs)


@dataclass(frozen=True)
class CoefficientSystem:
    """Nonzero phi-power coefficients of the ODE left-hand side."""

    equations: Mapping[int, ParamPoly]
    unknowns: tuple[str, ...]
    name: str = ""

    def __post_init__(self):
        if any(p.is_zero() for p in self.equations.values()):
            raise ValueError("coefficient systems store nonzero equations only")

    @property
    def powers(self) -> list[int]:
        return sorted(self.equations)

    def equation(self, power: int) -> ParamPoly:
        return self.equations.get(power, ParamPoly())

    def to_dict(self) -> dict:
        return {
            "equation": self.name,
            "unknowns": list(self.unknowns),
            "equations": {str(n): self.equations[n].to_text() for n in self.powers},
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> CoefficientSystem:
        return cls(
            {int(n): ParamPoly.parse(t) for n, t in data["equations"].items()},
            tuple(data["unknowns"]),
            data.get("equation", ""),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        return "\n".join(f"phi^{n}: {self.equations[n].to_text()} = 0" for n in self.powers)


def derive_coefficient_system(ode: ReducedODE, ansatz: PhiLaurent, name: str = "") -> CoefficientSystem:
    lhs = ode.apply(ansatz)
    unknowns = sorted({s for c in ansatz.coeffs.values() for s in c.symbols()}, key=_unknown_key)
    return CoefficientSystem(lhs.coeffs, tuple(unknowns), name)


@dataclass(frozen=True)
class CandidateSet:
    """Ansatz coefficients plus the kappa^2 they require.

    ``kappa_squared`` equal to the bare monomial ``kappa^2`` means the wave
    speed is left free (this only happens for degenerate constant solutions).
    """

    kappa_squared: ParamPoly
    values: Mapping[str, ParamPoly]
    label: str = ""
    degenerate: bool = False
    equation: str = ""

    def value(self, name: str) -> ParamPoly:
        return self.values.get(name, ParamPoly())

    @property
    def kappa_free(self) -> bool:
        return self.kappa_squared == KAPPA_SQUARED

    def same_solution(self, other: CandidateSet) -> bool:
        names = set(self.values) | set(other.values)
        return self.kappa_squared == other.kappa_squared and all(
            self.value(n) == other.value(n) for n in names
        )

    def with_values(self, **changes) -> CandidateSet:
        values = dict(self.values)
        values.update({k: ParamPoly.coerce(v) for k, v in changes.items()})
        return CandidateSet(self.kappa_squared, values, self.label, self.degenerate, self.equation)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "equation": self.equation,
            "kappa_squared": self.kappa_squared.to_text(),
            "values": {n: self.values[n].to_text() for n in sorted(self.values, key=_unknown_key)},
            "degenerate": self.degenerate,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> CandidateSet:
        return cls(
            ParamPoly.parse(data["kappa_squared"]),
            {n: ParamPoly.parse(t) for n, t in data["values"].items()},
            data.get("label", ""),
            bool(data.get("degenerate", False)),
            data.get("equation", ""),
        )


def _unknown_key(name: str):
    return (name[0], int(name[1:]) if name[1:].isdigit() else 0)


@dataclass(frozen=True)
class VerificationReport:
    passed: bool
    residuals: Mapping[int, ParamPoly] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "residuals": {str(n): r.to_text() for n, r in sorted(self.residuals.items())},
        }


def _substitute(poly: ParamPoly, cand: CandidateSet) -> ParamPoly:
    return poly.subs_square("kappa", cand.kappa_squared).subs(cand.values)


def verify_candidate(system: CoefficientSystem, cand: CandidateSet) -> VerificationReport:
    missing = [u for u in system.unknowns if u not in cand.values]
    values = dict(cand.values)
    for u in missing:
        values[u] = ParamPoly()
    full = CandidateSet(cand.kappa_squared, values, cand.label, cand.degenerate, cand.equation)
    residuals = {n: _substitute(eq, full) for n, eq in system.equations.items()}
    nonzero = {n: r for n, r in residuals.items() if not r.is_zero()}
    return VerificationReport(not nonzero, nonzero)


# -- structured solver --------------------------------------------------


def _roots(eq: ParamPoly, var: str) -> list[ParamPoly]:
    """Exact roots of ``eq`` viewed as a polynomial of degree <= 2 in ``var``."""
    coeffs = eq.coefficients_in(var)
    if min(coeffs) < 0:
        raise UnsupportedForm(f"negative power of {var} in {eq}")
    deg = max(coeffs)
    if deg == 0:
        raise UnsupportedForm(f"{eq} does not constrain {var}")
    if deg > 2:
        raise UnsupportedForm(f"{eq} has degree {deg} in {var}")
    a = coeffs.get(2, ParamPoly())
    b = coeffs.get(1, ParamPoly())
    c = coeffs.get(0, ParamPoly())
    if deg == 1:
        if not b.is_monomial():
            raise UnsupportedForm(f"cannot divide by {b}")
        return [-c / b]
    if not a.is_monomial():
        raise UnsupportedForm(f"cannot divide by {a}")
    s = (b * b - 4 * a * c).sqrt_exact()
    if s is None:
        raise UnsupportedForm(f"discriminant of {eq} in {var} is not a perfect square")
    out: list[ParamPoly] = []
    for r in ((-b + s) / (2 * a), (-b - s) / (2 * a)):
        if r not in out:
            out.append(r)
    return out


def _forced(eq: ParamPoly, var: str, sub: Mapping[str, ParamPoly]) -> ParamPoly:
    e = eq.subs(sub)
    others = {s for s in e.symbols() if s.startswith(("a", "b")) and s != var and s[1:].isdigit()}
    if e.is_zero() or others or e.degree_in(var) != 1:
        raise UnsupportedForm(f"equation {eq} does not force a unique {var}")
    return _roots(e, var)[0]


def _lowest_degree(eqs: list[ParamPoly], var: str) -> ParamPoly | None:
    usable = [e for e in eqs if e.degree_in(var) >= 1]
    return min(usable, key=lambda e: (e.degree_in(var), len(e))) if usable else None


def _solve_a0_kappa(eqs: list[ParamPoly]) -> list[tuple[ParamPoly, ParamPoly]]:
    eqs = [e for e in eqs if not e.is_zero()]
    if not eqs:
        raise UnsupportedForm("a0 and kappa are unconstrained")
    for e in eqs:
        split = e.coefficients_in("kappa")
        if set(split) != {0, 2}:
            continue
        k_coeff = split[2]
        if "a0" in k_coeff.symbols() or not k_coeff.is_monomial():
            continue
        k_expr = -split[0] / k_coeff
        others = [o.subs_square("kappa", k_expr) for o in eqs if o is not e]
        others = [o for o in others if not o.is_zero()]
        pivot = _lowest_degree(others, "a0")
        if pivot is None:
            raise UnsupportedForm("a0 is unconstrained once kappa^2 is eliminated")
        out = []
        for r in _roots(pivot, "a0"):
            if all(o.subs({"a0": r}).is_zero() for o in others):
                out.append((r, k_expr.subs({"a0": r})))
        return out
    pivot = _lowest_degree(eqs, "a0")
    if pivot is None:
        raise UnsupportedForm("a0 is unconstrained")
    return [
        (r, KAPPA_SQUARED)
        for r in _roots(pivot, "a0")
        if all(e.subs({"a0": r}).is_zero() for e in eqs)
    ]


def solve_quadratic_form(system: CoefficientSystem) -> list[CandidateSet]:
    """All solutions of an M=2 coefficient system, each verified exactly.

    Constant and zero solutions are included with ``degenerate=True``.
    """
    expected = ("a0", "a1", "a2", "b1", "b2")
    if tuple(system.unknowns) != expected or any(abs(n) > 4 for n in system.powers):
        raise UnsupportedForm("solver handles the M=2 ansatz only")
    top, bottom = system.equation(4), system.equation(-4)
    if top.symbols() & set(expected) != {"a2"} or bottom.symbols() & set(expected) != {"b2"}:
        raise UnsupportedForm("corner equations must involve a2 and b2 alone")
    found: list[CandidateSet] = []
    for a2 in _roots(top, "a2"):
        for b2 in _roots(bottom, "b2"):
            sub = {"a2": a2, "b2": b2}
            sub["a1"] = _forced(system.equation(3), "a1", sub)
            sub["b1"] = _forced(system.equation(-3), "b1", sub)
            rest = [system.equation(n).subs(sub) for n in range(-2, 3)]
            for a0, k2 in _solve_a0_kappa(rest):
                values = dict(sub, a0=a0)
                degenerate = all(values[n].is_zero() for n in ("a1", "a2", "b1", "b2"))
                cand = CandidateSet(k2, values, degenerate=degenerate, equation=system.name)
                report = verify_candidate(system, cand)
                if not report.passed:
                    raise AssertionError(f"solver produced an unverified set: {cand.to_dict()}")
                if not any(cand.same_solution(f) for f in found):
                    found.append(cand)
    return found


# -- reference table and labelling --------------------------------------

_B = {"a1": "0", "b1": "0"}

KNOWN_SETS: dict[str, list[tuple[str, str, dict[str, str]]]] = {
    "boussinesq": [
        ("Set1", "16*lambda*mu + 1", dict(_B, a0="12*lambda*mu", a2="6*lambda^2", b2="6*mu^2")),
        ("Set2", "4*lambda*mu + 1", dict(_B, a0="6*lambda*mu", a2="6*lambda^2", b2="0")),
        ("Set3", "4*lambda*mu + 1", dict(_B, a0="6*lambda*mu", a2="0", b2="6*mu^2")),
        ("Set4", "1 - 4*lambda*mu", dict(_B, a0="2*lambda*mu", a2="6*lambda^2", b2="0")),
        ("Set5", "1 - 4*lambda*mu", dict(_B, a0="2*lambda*mu", a2="0", b2="6*mu^2")),
        ("Set6", "1 - 16*lambda*mu", dict(_B, a0="-4*lambda*mu", a2="6*lambda^2", b2="6*mu^2")),
    ],
    "coupled": [
        ("Set1", "4*lambda*gamma*mu", dict(_B, a0="6*lambda*gamma*mu/beta", a2="6*lambda^2*gamma/beta", b2="0")),
        ("Set2", "4*lambda*gamma*mu", dict(_B, a0="6*lambda*gamma*mu/beta", a2="0", b2="6*mu^2*gamma/beta")),
        ("Set3", "-4*lambda*gamma*mu", dict(_B, a0="2*lambda*gamma*mu/beta", a2="6*lambda^2*gamma/beta", b2="0")),
        ("Set4", "-4*lambda*gamma*mu", dict(_B, a0="2*lambda*gamma*mu/beta", a2="0", b2="6*mu^2*gamma/beta")),
        ("Set5", "16*lambda*gamma*mu", dict(_B, a0="12*lambda*gamma*mu/beta", a2="6*lambda^2*gamma/beta", b2="6*mu^2*gamma/beta")),
        ("Set6", "-16*lambda*gamma*mu", dict(_B, a0="-4*lambda*gamma*mu/beta", a2="6*lambda^2*gamma/beta", b2="6*mu^2*gamma/beta")),
    ],
}


def known_set(equation: str, label: str) -> CandidateSet:
    for name, k2, values in KNOWN_SETS[equation]:
        if name == label:
            return CandidateSet(
                ParamPoly.parse(k2), {n: ParamPoly.parse(v) for n, v in values.items()}, name, False, equation
            )
    raise KeyError(f"no set {label!r} for {equation!r}")


def label_candidates(cands: list[CandidateSet], equation: str) -> list[CandidateSet]:
    """Attach reference labels (Set1..Set6); unmatched sets become ExtraN/DegenerateN."""
    reference = [known_set(equation, name) for name, _, _ in KNOWN_SETS.get(equation, [])]
    labelled, extras, degenerate = [], [], []
    for c in cands:
        match = next((r for r in reference if r.same_solution(c)), None)
        if match is not None:
            labelled.append((int(match.label[3:]), match.label, c))
        elif c.degenerate:
            degenerate.append(c)
        else:
            extras.append(c)
    out = [CandidateSet(c.kappa_squared, c.values, lab, c.degenerate, equation) for _, lab, c in sorted(labelled, key=lambda x: x[0])]
    out += [CandidateSet(c.kappa_squared, c.values, f"Extra{i}", False, equation) for i, c in enumerate(extras, 1)]
    out += [CandidateSet(c.kappa_squared, c.values, f"Degenerate{i}", True, equation) for i, c in enumerate(degenerate, 1)]
    return out


# -- per-equation pipeline ----------------------------------------------

EQUATIONS = ("boussinesq", "coupled")


def reduced_ode(equation: str) -> ReducedODE:
    if equation == "boussinesq":
        return reduce_boussinesq()
    if equation == "coupled":
        return reduce_coupled()[0]
    raise ValueError(f"unknown equation {equation!r}; expected one of {EQUATIONS}")


@lru_cache(maxsize=None)
def coefficient_system(equation: str) -> CoefficientSystem:
    ode = reduced_ode(equation)
    spec = AnsatzSpec(ode_balancing_number(ode))
    return derive_coefficient_system(ode, build_ansatz(spec), equation)


@lru_cache(maxsize=None)
def _solved(equation: str) -> tuple[CandidateSet, ...]:
    return tuple(label_candidates(solve_quadratic_form(coefficient_system(equation)), equation))


def candidate_sets(equation: str, include_degenerate: bool = False) -> list[CandidateSet]:
    return [c for c in _solved(equation) if include_degenerate or not c.degenerate]


def find_set(equation: str, label: str) -> CandidateSet:
    for c in _solved(equation):
        if c.label.lower() == label.lower():
            return c
    raise KeyError(f"no candidate set {label!r} for {equation!r}")
