"""Independent checks of candidate solutions.

Two channels:

* exact residuals of the reduced ODE on the phi-expansion (no floating point);
* numeric residuals of the original fractional PDEs on a space-time grid,
  where every derivative is a central finite difference of the closed form.

The PDE channel runs in MPFR (through :mod:`gmpy2`) at ``dps`` digits.  A five-point
fourth derivative at ``h = 1e-4`` divides by ``h**4 = 1e-16``, so double
precision would leave nothing but rounding noise.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable

import math

import gmpy2
import numpy as np

from .conformable import d_alpha_classical
from .engine import AnsatzSpec, CandidateSet, build_ansatz
from .errors import DegenerateGrid
from .families import ClosedFormSolution
from .phi_algebra import ParamPoly
from .reduction import BOUSSINESQ, COUPLED_BOUSSINESQ, PDETerm, ReducedODE

__all__ = [
    "GridSpec",
    "ResidualReport",
    "central_difference",
    "x_derivative",
    "ode_residual_symbolic",
    "pde_residual_numeric",
    "chain_rule_crosscheck",
    "DEFAULT_FD_STEP",
    "DEFAULT_TOLERANCE",
]

DEFAULT_FD_STEP = 1e-4
DEFAULT_TOLERANCE = 1e-5
DEFAULT_MASK_MARGIN = 0.2
DEFAULT_DPS = 50
MIN_AXIS_POINTS = 5

# weights for offsets -2..2, second-order accurate
_STENCILS = {
    0: (0, 0, 1, 0, 0),
    1: (0, -0.5, 0, 0.5, 0),
    2: (0, 1, -2, 1, 0),
    3: (-0.5, 1, 0, -1, 0.5),
    4: (1, -4, 6, -4, 1),
}


@dataclass(frozen=True)
class GridSpec:
    x0: float
    x1: float
    nx: int
    t0: float
    t1: float
    nt: int

    def __post_init__(self):
        if self.nx < 2 or self.nt < 2:
            raise DegenerateGrid(f"grid needs at least two points per axis, got {self.nx}x{self.nt}")
        if not self.t0 > 0:
            raise ValueError(f"t0 must be positive (conformable derivatives need t > 0), got {self.t0}")
        if not self.x1 > self.x0:
            raise ValueError("x1 must exceed x0")
        if not self.t1 > self.t0:
            raise ValueError("t1 must exceed t0")

    def xs(self) -> np.ndarray:
        return np.linspace(self.x0, self.x1, self.nx)

    def ts(self) -> np.ndarray:
        return np.linspace(self.t0, self.t1, self.nt)

    @property
    def cells(self) -> int:
        return self.nx * self.nt


@dataclass
class ResidualReport:
    max_abs: float
    max_rel: float
    masked_cells: int
    total_cells: int
    terms: dict[str, float] = field(default_factory=dict)

    def passed(self, tol: float = DEFAULT_TOLERANCE) -> bool:
        return self.max_rel <= tol

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def central_difference(f: Callable, s, h):
    return (f(s + h) - f(s - h)) / (2 * h)


def x_derivative(f: Callable, x, h, order: int):
    """Central difference of ``order`` 0..4 with five points at most."""
    weights = _STENCILS[order]
    total = 0
    for k, w in zip(range(-2, 3), weights):
        if w:
            total += w * f(x + k * h)
    return total / h**order if order else total


def ode_residual_symbolic(cand: CandidateSet, ode: ReducedODE) -> dict[int, ParamPoly]:
    """Per-power residual of the reduced ODE with the candidate substituted."""
    spec = AnsatzSpec(2)
    U = build_ansatz(spec).subs({n: cand.value(n) for n in spec.unknowns})
    concrete = ReducedODE(
        ode.c2.subs_square("kappa", cand.kappa_squared),
        ode.c1.subs_square("kappa", cand.kappa_squared),
        ode.c0.subs_square("kappa", cand.kappa_squared),
        ode.provenance,
    )
    lhs = concrete.apply(U)
    return {n: lhs.coefficient(n) for n in range(-4, 5)}


class _MPFR:
    """The handful of functions the closed forms need, over ``gmpy2.mpfr``."""

    mpf = staticmethod(gmpy2.mpfr)
    sqrt = staticmethod(gmpy2.sqrt)
    exp = staticmethod(gmpy2.exp)
    cos = staticmethod(gmpy2.cos)
    sin = staticmethod(gmpy2.sin)

    @staticmethod
    def cos_sin(z):
        s, c = gmpy2.sin_cos(z)
        return c, s


def _mp_param(poly: ParamPoly, params):
    value = poly.evaluate(params)
    return gmpy2.mpfr(value.numerator) / value.denominator


def pde_residual_numeric(
    sol: ClosedFormSolution,
    grid: GridSpec,
    fd_step: float = DEFAULT_FD_STEP,
    mask_margin: float = DEFAULT_MASK_MARGIN,
    dps: int = DEFAULT_DPS,
) -> ResidualReport:
    """Residual statistics of the original PDE(s) on ``grid``.

    A cell is masked when any of its stencil points lies within
    ``mask_margin`` (in eps) of a pole reported by ``sol.singularities``.
    Where the time stencil covers more eps than the x stencil (fast waves,
    small t), the margin is widened by the same factor.
    ``max_rel`` is, per equation, the largest residual over unmasked cells
    divided by the largest term magnitude over the same cells; the worst
    equation is reported. A per-cell ratio would be meaningless where every
    term of an equation passes through zero together (U' = 0 in the
    first-order coupled system).
    """
    if grid.nx < MIN_AXIS_POINTS or grid.nt < MIN_AXIS_POINTS:
        raise DegenerateGrid(f"need at least {MIN_AXIS_POINTS} points per axis, got {grid.nx}x{grid.nt}")
    if not fd_step > 0:
        raise ValueError("fd_step must be positive")
    pde = COUPLED_BOUSSINESQ if sol.coupled else BOUSSINESQ
    params = dict(sol.params)

    bits = int(math.ceil(dps * math.log2(10))) + 4
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        lib = _MPFR
        h = lib.mpf(fd_step)
        h_in = h / 10
        alpha = lib.mpf(sol.alpha)
        reach_t = h + h_in
        if not grid.t0 - reach_t > 0:
            raise ValueError("fd_step too large for t0: stencil reaches t <= 0")
        coupling = sol.coupling_factor(lib) if sol.coupled else None
        fast_u = sol.compiled(lib)
        coeffs = {t.label: _mp_param(t.coeff, params) for eq in pde.equations for t in eq}

        eps_corners = [
            float(sol.epsilon(x, t))
            for x in (grid.x0 - 2 * fd_step, grid.x1 + 2 * fd_step)
            for t in (grid.t0 - float(reach_t), grid.t1 + float(reach_t))
        ]
        reach = mask_margin * _stretch(sol, grid.t0 - float(reach_t))
        poles = sol.singularities((min(eps_corners) - reach, max(eps_corners) + reach))

        max_abs = 0.0
        eq_res = [0.0] * len(pde.equations)
        eq_scale = [0.0] * len(pde.equations)
        masked = 0
        term_max = {t.label: 0.0 for eq in pde.equations for t in eq}

        for tv in grid.ts():
            t = lib.mpf(float(tv))
            for xv in grid.xs():
                x = lib.mpf(float(xv))
                if poles.points and _cell_near_pole(sol, x, t, h, reach_t, poles, mask_margin):
                    masked += 1
                    continue
                cache: dict = {}

                def u(xx, tt):
                    key = (xx, tt)
                    if key not in cache:
                        cache[key] = fast_u(xx, tt)
                    return cache[key]

                fields = {"u": u, "v": (lambda xx, tt: coupling * u(xx, tt))}
                for i, eq in enumerate(pde.equations):
                    values = {term.label: coeffs[term.label] * _term_value(term, fields, x, t, h, h_in, alpha) for term in eq}
                    residual = float(abs(sum(values.values())))
                    max_abs = max(max_abs, residual)
                    eq_res[i] = max(eq_res[i], residual)
                    eq_scale[i] = max(eq_scale[i], max(float(abs(v)) for v in values.values()))
                    for label, val in values.items():
                        term_max[label] = max(term_max[label], float(abs(val)))

    if masked == grid.cells:
        raise DegenerateGrid("every grid cell is masked by a singularity")
    max_rel = max(
        (r / s if s else (0.0 if r == 0 else math.inf)) for r, s in zip(eq_res, eq_scale)
    )
    return ResidualReport(max_abs, max_rel, masked, grid.cells, term_max)


def _stretch(sol, t) -> float:
    """How much farther in eps a time step reaches than an equal x step."""
    return max(1.0, abs(sol.kappa()) * float(t) ** (sol.alpha - 1))


def _cell_near_pole(sol, x, t, h, reach_t, poles, margin) -> bool:
    # the margin grows with the time stencil's reach in eps, so the
    # truncation error just outside the mask is about the same everywhere
    x, t, h, reach_t = float(x), float(t), float(h), float(reach_t)
    pts = [sol.epsilon(x + k * h, t) for k in (-2, 2)]
    pts += [sol.epsilon(x, t + s) for s in (-reach_t, reach_t)]
    lo, hi = min(pts), max(pts)
    m = margin * _stretch(sol, t - reach_t)
    return any(lo - m <= p <= hi + m for p in poles.points)


def _term_value(term: PDETerm, fields, x, t, h, h_in, alpha):
    base = fields[term.field]

    def F(xx, tt):
        return base(xx, tt) ** term.power

    if term.t_order and term.x_order:
        raise NotImplementedError("mixed space-time derivatives are not needed by the target PDEs")
    if term.t_order == 0:
        return x_derivative(lambda xx: F(xx, t), x, h, term.x_order)
    if term.t_order == 1:
        return d_alpha_classical(lambda s: central_difference(lambda r: F(x, r), s, h), t, alpha)
    if term.t_order == 2:
        def inner(s):
            return d_alpha_classical(lambda r: central_difference(lambda q: F(x, q), r, h_in), s, alpha)

        return d_alpha_classical(lambda s: central_difference(inner, s, h), t, alpha)
    raise NotImplementedError(f"time order {term.t_order} alpha")


def chain_rule_crosscheck(sol: ClosedFormSolution, samples: Iterable[tuple[float, float]], fd_step: float = 1e-5) -> float:
    """Max deviation between D_t^alpha u (differenced in t) and kappa*U'(eps)."""
    kappa = sol.kappa()
    worst = 0.0
    for x, t in samples:
        lhs = d_alpha_classical(lambda s: central_difference(lambda r: sol.u(x, r), s, fd_step), t, sol.alpha)
        eps = sol.epsilon(x, t)
        rhs = kappa * central_difference(sol.profile, eps, fd_step)
        worst = max(worst, abs(lhs - rhs))
    return worst

