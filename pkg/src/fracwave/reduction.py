"""Traveling-wave reduction of the two target PDEs and degree balancing.

A PDE is held as data: a list of terms ``coeff * D_t^(j*alpha) D_x^k (field^p)``.
Under ``eps = x + kappa*t^alpha/alpha`` each conformable time derivative
becomes ``kappa*d/deps`` and each x-derivative becomes ``d/deps``, so a term
maps to ``coeff * kappa^j * d^(j+k)/deps^(j+k) (field^p)``.  The
reduced ODEs are obtained by integrating in eps with zero constants.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .errors import NoIntegerBalance, UnsupportedForm
from .phi_algebra import ParamPoly, PhiLaurent

__all__ = [
    "PDETerm",
    "FractionalPDE",
    "ODETerm",
    "WaveTransform",
    "ReducedODE",
    "BOUSSINESQ",
    "COUPLED_BOUSSINESQ",
    "apply_transform",
    "integrate",
    "differentiate",
    "reduce_boussinesq",
    "reduce_coupled",
    "balancing_number",
    "ode_balancing_number",
]

KAPPA = ParamPoly.symbol("kappa")


@dataclass(frozen=True)
class PDETerm:
    coeff: ParamPoly
    field: str
    power: int
    t_order: int  # number of conformable time derivatives D_t^alpha
    x_order: int
    label: str


@dataclass(frozen=True)
class FractionalPDE:
    name: str
    fields: tuple[str, ...]
    equations: tuple[tuple[PDETerm, ...], ...]


def _term(coeff, field, power, t_order, x_order, label):
    return PDETerm(ParamPoly.coerce(coeff), field, power, t_order, x_order, label)


BOUSSINESQ = FractionalPDE(
    name="boussinesq",
    fields=("u",),
    equations=(
        (
            _term(1, "u", 1, 2, 0, "d2alpha_t_u"),
            _term(-1, "u", 1, 0, 2, "u_xx"),
            _term(-1, "u", 2, 0, 2, "u2_xx"),
            _term(1, "u", 1, 0, 4, "u_xxxx"),
        ),
    ),
)

COUPLED_BOUSSINESQ = FractionalPDE(
    name="coupled",
    fields=("u", "v"),
    equations=(
        (
            _term(1, "u", 1, 1, 0, "dalpha_t_u"),
            _term(1, "v", 1, 0, 1, "v_x"),
        ),
        (
            _term(1, "v", 1, 1, 0, "dalpha_t_v"),
            _term("beta", "u", 2, 0, 1, "u2_x"),
            _term("-gamma", "u", 1, 0, 3, "u_xxx"),
        ),
    ),
)


@dataclass(frozen=True)
class ODETerm:
    """``coeff * d^order/deps^order (field^power)``."""

    coeff: ParamPoly
    field: str
    power: int
    order: int


@dataclass(frozen=True)
class WaveTransform:
    """``eps = x + kappa * t^alpha / alpha``."""

    kappa: ParamPoly = KAPPA
    alpha: float | None = None

    def __post_init__(self):
        if ParamPoly.coerce(self.kappa).is_zero():
            raise ValueError("wave speed kappa must be nonzero")
        if self.alpha is not None and not 0 < self.alpha <= 1:
            raise ValueError(f"fractional order must satisfy 0 < alpha <= 1, got {self.alpha}")

    def epsilon(self, x, t, kappa_value=None):
        if self.alpha is None:
            raise ValueError("numeric evaluation needs alpha")
        k = kappa_value if kappa_value is not None else ParamPoly.coerce(self.kappa).constant_value()
        return x + k * t**self.alpha / self.alpha


def _collect(terms) -> tuple[ODETerm, ...]:
    acc: dict[tuple[str, int, int], ParamPoly] = {}
    for t in terms:
        key = (t.field, t.power, t.order)
        acc[key] = acc.get(key, ParamPoly()) + t.coeff
    return tuple(
        ODETerm(c, f, p, o) for (f, p, o), c in sorted(acc.items(), key=lambda kv: (kv[0][0], -kv[0][2], kv[0][1]))
        if not c.is_zero()
    )


def apply_transform(pde: FractionalPDE, wave: WaveTransform = WaveTransform()) -> list[tuple[ODETerm, ...]]:
    kappa = ParamPoly.coerce(wave.kappa)
    return [
        _collect(ODETerm(t.coeff * kappa**t.t_order, t.field, t.power, t.t_order + t.x_order) for t in eq)
        for eq in pde.equations
    ]


def integrate(eq, times: int = 1) -> tuple[ODETerm, ...]:
    """Integrate in eps ``times`` times with every constant of integration zero."""
    if any(t.order < times for t in eq):
        raise UnsupportedForm("cannot integrate: a term has too low a derivative order")
    return _collect(replace(t, order=t.order - times) for t in eq)


def differentiate(eq, times: int = 1) -> tuple[ODETerm, ...]:
    return _collect(replace(t, order=t.order + times) for t in eq)


def _eliminate(eq, field_name: str, coupling: ParamPoly, into: str = "u") -> tuple[ODETerm, ...]:
    out = []
    for t in eq:
        if t.field == field_name:
            if t.power != 1:
                raise UnsupportedForm(f"cannot eliminate nonlinear occurrence of {field_name}")
            out.append(ODETerm(t.coeff * coupling, into, 1, t.order))
        else:
            out.append(t)
    return _collect(out)


@dataclass(frozen=True)
class ReducedODE:
    """``c2*U'' + c1*U + c0*U^2 = 0``."""

    c2: ParamPoly
    c1: ParamPoly
    c0: ParamPoly
    provenance: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.c2.is_zero() or self.c0.is_zero():
            raise UnsupportedForm("reduced ODE needs nonzero U'' and U^2 coefficients")

    @classmethod
    def from_terms(cls, eq, provenance=()) -> ReducedODE:
        slots = {("u", 1, 2): ParamPoly(), ("u", 1, 0): ParamPoly(), ("u", 2, 0): ParamPoly()}
        for t in eq:
            key = (t.field, t.power, t.order)
            if key not in slots:
                raise UnsupportedForm(f"term {t} does not fit c2*U'' + c1*U + c0*U^2")
            slots[key] = slots[key] + t.coeff
        return cls(slots[("u", 1, 2)], slots[("u", 1, 0)], slots[("u", 2, 0)], tuple(provenance))

    def as_terms(self) -> tuple[ODETerm, ...]:
        return _collect([
            ODETerm(self.c2, "u", 1, 2),
            ODETerm(self.c1, "u", 1, 0),
            ODETerm(self.c0, "u", 2, 0),
        ])

    def apply(self, U: PhiLaurent, lam="lambda", mu="mu") -> PhiLaurent:
        """Left-hand side evaluated on a phi-expansion."""
        d2 = U.derivative(lam, mu).derivative(lam, mu)
        return d2 * self.c2 + U * self.c1 + U * U * self.c0

    def subs(self, mapping) -> ReducedODE:
        return ReducedODE(self.c2.subs(mapping), self.c1.subs(mapping), self.c0.subs(mapping), self.provenance)


def reduce_boussinesq() -> ReducedODE:
    (eq,) = apply_transform(BOUSSINESQ)
    reduced = integrate(eq, 2)
    return ReducedODE.from_terms(
        reduced,
        provenance=(
            "traveling-wave transform eps = x + kappa*t^alpha/alpha",
            "integrated twice in eps, both integration constants set to 0",
        ),
    )


def reduce_coupled() -> tuple[ReducedODE, ParamPoly]:
    """Return the reduced ODE for U and the coupling factor ``c`` in ``V = c*U``."""
    first, second = (integrate(eq, 1) for eq in apply_transform(COUPLED_BOUSSINESQ))
    v_terms = [t for t in first if t.field == "v"]
    u_terms = [t for t in first if t.field == "u"]
    if len(v_terms) != 1 or v_terms[0].order or len(u_terms) != 1 or u_terms[0].order or u_terms[0].power != 1:
        raise UnsupportedForm("first equation is not of the form a*U + b*V = 0")
    coupling = -u_terms[0].coeff / v_terms[0].coeff
    reduced = _eliminate(second, "v", coupling)
    ode = ReducedODE.from_terms(
        reduced,
        provenance=(
            "traveling-wave transform eps = x + kappa*t^alpha/alpha",
            "each equation integrated once in eps, integration constant set to 0",
            f"first equation solved for V = ({coupling.to_text()})*U and substituted",
        ),
    )
    return ode, coupling


def balancing_number(highest_derivative_order: int, r: int, s: int = 0, q_prime: int = 0) -> int:
    """Solve ``M + q = M*r + s*(q' + M)`` for a positive integer M."""
    q = highest_derivative_order
    denom = 1 - r - s
    if denom == 0:
        raise NoIntegerBalance(f"degrees M+{q} and M*{r}+{s}*(M+{q_prime}) never balance")
    m = Fraction(s * q_prime - q, denom)
    if m.denominator != 1 or m <= 0:
        raise NoIntegerBalance(f"balance gives M = {m}, not a positive integer")
    return int(m)


def ode_balancing_number(ode: ReducedODE) -> int:
    """Balance U'' against U^2, the only pairing in ``c2*U'' + c1*U + c0*U^2``."""
    return balancing_number(2, 2, 0, 0)
