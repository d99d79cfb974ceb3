import math

import pytest

from fracwave.engine import candidate_sets, find_set, reduced_ode
from fracwave.errors import DegenerateGrid
from fracwave.families import PhiCase, assemble_solution
from fracwave.phi_algebra import ParamPoly
from fracwave.verifier import (
    GridSpec,
    ResidualReport,
    central_difference,
    chain_rule_crosscheck,
    ode_residual_symbolic,
    pde_residual_numeric,
    x_derivative,
)

P = ParamPoly.parse
SMALL = GridSpec(0.0, 0.6, 8, 0.5, 1.0, 8)


def set2_trig(alpha=0.5):
    return assemble_solution(find_set("boussinesq", "Set2"), PhiCase("trig"), {"lambda": 1, "mu": 1}, 1, alpha)


def test_grid_validation():
    with pytest.raises(ValueError):
        GridSpec(0, 1, 10, 0.0, 1, 10)
    with pytest.raises(ValueError):
        GridSpec(1, 0, 10, 0.5, 1, 10)
    with pytest.raises(DegenerateGrid):
        GridSpec(0, 1, 1, 0.5, 1, 10)
    with pytest.raises(DegenerateGrid):
        pde_residual_numeric(set2_trig(), GridSpec(0, 1, 4, 0.5, 1, 10))


def test_stencils_on_polynomials():
    f = lambda x: x**4
    assert x_derivative(f, 1.5, 1e-2, 0) == f(1.5)
    assert x_derivative(f, 1.5, 1e-2, 2) == pytest.approx(12 * 1.5**2, rel=1e-4)
    assert x_derivative(f, 1.5, 1e-2, 4) == pytest.approx(24, rel=1e-6)
    assert x_derivative(lambda x: x**3, 0.7, 1e-2, 3) == pytest.approx(6, rel=1e-6)
    assert central_difference(math.sin, 0.4, 1e-5) == pytest.approx(math.cos(0.4), rel=1e-9)


def test_symbolic_residuals():
    ode = reduced_ode("boussinesq")
    assert all(r.is_zero() for r in ode_residual_symbolic(find_set("boussinesq", "Set1"), ode).values())
    zero = [c for c in candidate_sets("boussinesq", include_degenerate=True) if c.value("a0").is_zero() and c.degenerate][0]
    assert all(r.is_zero() for r in ode_residual_symbolic(zero, ode).values())
    wrong_speed = find_set("boussinesq", "Set2")
    wrong_speed = type(wrong_speed)(P("1"), wrong_speed.values, "x", equation="boussinesq")
    res = ode_residual_symbolic(wrong_speed, ode)
    assert not res[0].is_zero() and not res[2].is_zero()


def test_set2_trig_documented_grid():
    report = pde_residual_numeric(set2_trig(), GridSpec(0.0, 0.6, 50, 0.5, 1.5, 50), 1e-4)
    assert report.max_rel <= 1e-6
    assert 0 < report.masked_cells < report.total_cells


def test_zero_field_has_zero_residual():
    zero = [c for c in candidate_sets("coupled", include_degenerate=True) if c.degenerate and c.value("a0").is_zero()][0]
    sol = assemble_solution(zero, PhiCase("hyp"), {"lambda": 0.5, "mu": -0.3, "kappa": 1.0})
    report = pde_residual_numeric(sol, SMALL)
    assert report.max_abs == 0
    assert report.max_rel == 0


def test_corrupted_solution_is_caught():
    good = set2_trig()
    coeffs = dict(good.coefficients)
    coeffs[0] = coeffs[0] * 11 / 10
    bad = type(good)(good.candidate, good.case, good.params, good.kappa_sign, good.alpha, good.kappa_squared, coeffs)
    assert pde_residual_numeric(good, SMALL).max_rel < 1e-5
    assert pde_residual_numeric(bad, SMALL).max_rel > 1e-2


def test_extremum_of_coupled_profile_is_not_flagged():
    # at eps = 3*pi/4 the profile has U' = 0, so every first-equation term vanishes
    # together; the grid-wide scale keeps truncation noise there from reading as failure
    sol = assemble_solution(
        find_set("coupled", "Set3"), PhiCase("trig"), {"lambda": 1, "mu": 1, "beta": 1, "gamma": -1}, 1, 0.75
    )
    assert sol.epsilon(0.1, 0.8) == pytest.approx(3 * math.pi / 4, abs=1e-3)
    report = pde_residual_numeric(sol, GridSpec(0.09, 0.11, 5, 0.79, 0.81, 5))
    assert report.masked_cells == 0
    assert report.max_rel <= 1e-5


def test_coupled_report_has_both_equations():
    sol = assemble_solution(find_set("coupled", "Set4"), PhiCase("hyp"), {"lambda": 0.5, "mu": -0.3, "beta": 1, "gamma": 1})
    report = pde_residual_numeric(sol, SMALL)
    assert set(report.terms) == {"dalpha_t_u", "v_x", "dalpha_t_v", "u2_x", "u_xxx"}
    assert report.passed()


def test_mask_soundness():
    # a grid straddling the pole curve of u4 must mask some cells and still pass
    sol = set2_trig()
    poles = sol.singularities((0, 10)).points
    report = pde_residual_numeric(sol, GridSpec(-0.5, 0.5, 12, 0.5, 1.0, 12), mask_margin=0.2)
    assert report.masked_cells > 0
    assert report.passed()
    assert poles


def test_everything_masked():
    sol = set2_trig()
    with pytest.raises(DegenerateGrid):
        pde_residual_numeric(sol, GridSpec(0.0, 0.01, 5, 0.5, 0.51, 5), mask_margin=5.0)


def test_convergence_is_second_order():
    sol = assemble_solution(find_set("boussinesq", "Set2"), PhiCase("hyp"), {"lambda": 0.5, "mu": -0.3}, 1, 0.75)
    grid = GridSpec(0.0, 0.5, 6, 0.5, 1.0, 6)
    a = pde_residual_numeric(sol, grid, 2e-3).max_abs
    b = pde_residual_numeric(sol, grid, 1e-3).max_abs
    assert 3.5 <= a / b <= 4.5


def test_report_json_fields():
    report = pde_residual_numeric(set2_trig(1.0), SMALL)
    d = report.to_dict()
    assert {"max_abs", "max_rel", "masked_cells", "terms"} <= set(d)
    assert ResidualReport(**d) == report
    assert '"max_rel"' in report.to_json()


@pytest.mark.parametrize("alpha", [0.5, 1.0])
def test_chain_rule_crosscheck(alpha):
    u6 = assemble_solution(find_set("boussinesq", "Set2"), PhiCase("rational"), {"lambda": 1, "mu": 0}, 1, alpha)
    assert chain_rule_crosscheck(u6, [(0.0, 1.0)]) <= 1e-6
    stationary = assemble_solution(find_set("coupled", "Set3"), PhiCase("rational"), {"lambda": 1, "mu": 0, "beta": 1, "gamma": -1})
    assert chain_rule_crosscheck(stationary, [(0.5, 1.0), (2.0, 0.3)]) <= 1e-9
