import math

import pytest

from fracwave.conformable import d_alpha_chain
from fracwave.errors import NoIntegerBalance, UnsupportedForm
from fracwave.phi_algebra import ParamPoly
from fracwave.reduction import (
    BOUSSINESQ,
    COUPLED_BOUSSINESQ,
    ODETerm,
    ReducedODE,
    WaveTransform,
    apply_transform,
    balancing_number,
    differentiate,
    integrate,
    ode_balancing_number,
    reduce_boussinesq,
    reduce_coupled,
)

P = ParamPoly.parse


def test_boussinesq_reduced_form():
    ode = reduce_boussinesq()
    assert (ode.c2, ode.c1, ode.c0) == (P("1"), P("kappa^2 - 1"), P("-1"))
    assert len(ode.provenance) == 2
    assert "0" in ode.provenance[1]


def test_boussinesq_c1_substitutions():
    ode = reduce_boussinesq()
    assert ode.c1.subs({"kappa": P("1")}).is_zero()
    assert ode.c1.subs_square("kappa", P("16*lambda*mu + 1")) == P("16*lambda*mu")


def test_coupled_reduced_form():
    ode, coupling = reduce_coupled()
    assert (ode.c2, ode.c1, ode.c0) == (P("-gamma"), P("-kappa^2"), P("beta"))
    assert coupling == P("-kappa")
    assert coupling.subs({"kappa": P("0")}).is_zero()
    unit = ode.subs({"beta": P("1"), "gamma": P("1")})
    # -U'' - k^2 U + U^2 = 0, i.e. U'' = -k^2 U + U^2
    assert (unit.c2, unit.c1, unit.c0) == (P("-1"), P("-kappa^2"), P("1"))


def _as_map(terms):
    return {(t.field, t.power, t.order): t.coeff for t in terms}


def test_boussinesq_expands_back():
    (pre,) = apply_transform(BOUSSINESQ)
    assert _as_map(differentiate(reduce_boussinesq().as_terms(), 2)) == _as_map(pre)
    assert _as_map(pre) == {
        ("u", 1, 4): P("1"),
        ("u", 1, 2): P("kappa^2 - 1"),
        ("u", 2, 2): P("-1"),
    }


def test_coupled_expands_back():
    first_pre, second_pre = apply_transform(COUPLED_BOUSSINESQ)
    assert _as_map(first_pre) == {("u", 1, 1): P("kappa"), ("v", 1, 1): P("1")}
    assert _as_map(second_pre) == {("v", 1, 1): P("kappa"), ("u", 2, 1): P("beta"), ("u", 1, 3): P("-gamma")}
    ode, coupling = reduce_coupled()
    # put V = c*U back into the second equation and differentiate once
    restored = differentiate(ode.as_terms(), 1)
    expected = {("u", 1, 1): P("kappa") * coupling, ("u", 2, 1): P("beta"), ("u", 1, 3): P("-gamma")}
    assert _as_map(restored) == expected


def test_integration_needs_derivatives():
    with pytest.raises(UnsupportedForm):
        integrate([ODETerm(P("1"), "u", 1, 0)], 1)


def test_reduced_ode_rejects_degenerate():
    with pytest.raises(UnsupportedForm):
        ReducedODE(P("0"), P("1"), P("1"))
    with pytest.raises(UnsupportedForm):
        ReducedODE(P("1"), P("1"), P("0"))


def test_wave_transform():
    with pytest.raises(ValueError):
        WaveTransform(P("0"))
    w = WaveTransform(P("2"), alpha=0.5)
    assert w.epsilon(1.0, 4.0) == pytest.approx(1 + 2 * 2 / 0.5)


@pytest.mark.parametrize("q,r,s,qp,expected", [(2, 2, 0, 0, 2), (4, 2, 0, 0, 4)])
def test_balancing(q, r, s, qp, expected):
    assert balancing_number(q, r, s, qp) == expected


@pytest.mark.parametrize("q,r", [(3, 3), (1, 1), (2, 4)])
def test_balancing_rejects(q, r):
    with pytest.raises(NoIntegerBalance):
        balancing_number(q, r)


def test_balancing_of_both_odes():
    assert ode_balancing_number(reduce_boussinesq()) == 2
    assert ode_balancing_number(reduce_coupled()[0]) == 2


@pytest.mark.parametrize("x,t,alpha,kappa", [(0.3, 1.2, 0.5, 2.0), (-1.0, 0.4, 0.8, -0.7), (0.2, 0.7, 1.0, 1.5)])
def test_operator_identity(x, t, alpha, kappa):
    g = lambda s: x + kappa * s**alpha / alpha
    dg = lambda s: kappa * s ** (alpha - 1)
    U, dU = (lambda e: math.tanh(e)), (lambda e: 1 - math.tanh(e) ** 2)
    h = 1e-6
    numeric = t ** (1 - alpha) * (U(g(t + h)) - U(g(t - h))) / (2 * h)
    assert d_alpha_chain(g, dg, dU, t, alpha) == pytest.approx(kappa * dU(g(t)), rel=1e-12)
    assert numeric == pytest.approx(kappa * dU(g(t)), rel=1e-6)
