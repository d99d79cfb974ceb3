"""Exact traveling-wave solutions of conformable time-fractional Boussinesq
equations by the (G'/G^2)-expansion method.

Typical use::

    from fracwave import find_set, assemble_solution, PhiCase
    sol = assemble_solution(find_set("boussinesq", "Set2"), PhiCase("trig"), {"lambda": 1, "mu": 1})
    sol.u(0.3, 1.0)
"""

from .conformable import FractionalOrder, d2_alpha_classical, d_alpha_chain, d_alpha_classical, d_alpha_limit
from .engine import (
    EQUATIONS,
    AnsatzSpec,
    CandidateSet,
    CoefficientSystem,
    build_ansatz,
    candidate_sets,
    coefficient_system,
    derive_coefficient_system,
    find_set,
    reduced_ode,
    solve_quadratic_form,
    verify_candidate,
)
from .errors import (
    CaseMismatch,
    ComplexWaveSpeed,
    DegenerateGrid,
    FracWaveError,
    NoIntegerBalance,
    PoleOfInverse,
    SingularPoint,
    UnsupportedForm,
)
from .families import ClosedFormSolution, PhiCase, PhiKind, assemble_solution, phi_value, singularities
from .phi_algebra import ParamPoly, PhiLaurent, coefficient_of, phi_derivative
from .reduction import BOUSSINESQ, COUPLED_BOUSSINESQ, ReducedODE, balancing_number, reduce_boussinesq, reduce_coupled
from .verifier import GridSpec, ResidualReport, ode_residual_symbolic, pde_residual_numeric

__version__ = "0.1.0"
