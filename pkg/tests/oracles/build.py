"""Regenerate the frozen oracle data in this directory.

Independent of the package: sympy does the traveling-wave reduction and the
phi expansion, mpmath evaluates the closed forms (sinh/cosh written out).

    python3 tests/oracles/build.py
"""

import json
from pathlib import Path

import mpmath
import sympy as sp

HERE = Path(__file__).resolve().parent

lam, mu, beta, gamma, k = sp.symbols("lam mu beta gamma k")
a0, a1, a2, b1, b2 = sp.symbols("a0 a1 a2 b1 b2")
x, t, alpha, phi = sp.symbols("x t alpha phi", positive=True)
SYMBOLS = {s.name: s for s in (lam, mu, beta, gamma, k, a0, a1, a2, b1, b2)}


def conformable_dt(expr):
    return sp.simplify(t ** (1 - alpha) * sp.diff(expr, t))


def reduced_odes():
    """Check the wave reductions in sympy and return U'' , U -> ODE lhs builders."""
    U, V = sp.Function("U"), sp.Function("V")
    eps = x + k * t**alpha / alpha
    e = sp.Symbol("e")
    u, v = U(eps), V(eps)

    # Boussinesq: check that the PDE equals d^2/de^2 of the reduced form
    pde = conformable_dt(conformable_dt(u)) - sp.diff(u, x, 2) - sp.diff(u**2, x, 2) + sp.diff(u, x, 4)
    reduced = U(e).diff(e, 2) + (k**2 - 1) * U(e) - U(e) ** 2
    assert sp.simplify(pde - reduced.diff(e, 2).subs(e, eps)) == 0

    # coupled system: first equation gives V = -k U, second then reduces
    first = conformable_dt(u) + sp.diff(v, x)
    assert sp.simplify(first - (k * U(e) + V(e)).diff(e).subs(e, eps)) == 0
    second = conformable_dt(v) + beta * sp.diff(u**2, x) - gamma * sp.diff(u, x, 3)
    integrated = k * V(e) + beta * U(e) ** 2 - gamma * U(e).diff(e, 2)
    assert sp.simplify(second - integrated.diff(e).subs(e, eps)) == 0
    coupled = integrated.subs(V(e), -k * U(e)).doit()
    return {"boussinesq": (reduced, U, e), "coupled": (coupled, U, e)}


def expand_in_phi(ode, U, e):
    ansatz = a0 + a1 * phi + a2 * phi**2 + b1 / phi + b2 / phi**2
    dphi = mu + lam * phi**2

    def d(expr):
        return sp.diff(expr, phi) * dphi

    expr = ode.subs(U(e).diff(e, 2), d(d(ansatz))).subs(U(e), ansatz)
    poly = sp.Poly(sp.expand(expr * phi**4), phi)
    out = {}
    for (power,), coeff in poly.terms():
        coeff = sp.expand(coeff)
        if coeff != 0:
            out[str(power - 4)] = str(coeff)
    return out


def coefficient_systems():
    return {name: expand_in_phi(*args) for name, args in reduced_odes().items()}


# closed forms written directly from the trig / hyperbolic / rational phi


def phi_closed(kind, L, M, C, D, eps):
    if kind == "trig":
        s = mpmath.sqrt(M * L)
        return mpmath.sqrt(M / L) * (C * mpmath.cos(s * eps) + D * mpmath.sin(s * eps)) / (
            D * mpmath.cos(s * eps) - C * mpmath.sin(s * eps)
        )
    if kind == "hyp":
        s = mpmath.sqrt(abs(M * L))
        w = C * mpmath.sinh(2 * s * eps) + C * mpmath.cosh(2 * s * eps)
        return -s / L * (w + D) / (w - D)
    return -C / (L * (C * eps + D))


PRESETS = {
    # id: equation, case, lambda, mu, beta, gamma
    "1a": ("boussinesq", "trig", 1, 1, 1, 1),
    "1b": ("boussinesq", "hyp", mpmath.mpf("0.5"), mpmath.mpf("-0.3"), 1, 1),
    "1c": ("boussinesq", "rational", 1, 0, 1, 1),
    "2a": ("coupled", "trig", 1, 1, 1, -1),
    "2b": ("coupled", "hyp", mpmath.mpf("0.5"), mpmath.mpf("-0.3"), 1, 1),
    "2c": ("coupled", "rational", 1, 0, 1, -1),
}

SPOT_POINTS = [(0.0, 1.0), (-2.5, 0.25), (1.75, 1.5), (0.5, 0.5)]


def preset_value(pid, xv, tv, a=mpmath.mpf("0.5"), C=1, D=1):
    eq, kind, L, M, B, G = PRESETS[pid]
    if eq == "boussinesq":  # 4 lambda mu + 1, a0 = 6 lambda mu, a2 = 6 lambda^2
        kk = mpmath.sqrt(4 * L * M + 1)
        A0, A2 = 6 * L * M, 6 * L**2
    else:  # -4 lambda gamma mu, a0 = 2 lambda gamma mu / beta, a2 = 6 lambda^2 gamma / beta
        kk = mpmath.sqrt(-4 * L * G * M)
        A0, A2 = 2 * L * G * M / mpmath.mpf(B), 6 * L**2 * G / mpmath.mpf(B)
    eps = xv + kk * mpmath.mpf(tv) ** a / a
    uu = A0 + A2 * phi_closed(kind, L, M, C, D, eps) ** 2
    return uu, -kk * uu


def spot_values():
    out = {}
    with mpmath.workdps(50):
        for pid in PRESETS:
            rows = []
            for xv, tv in SPOT_POINTS:
                uu, vv = preset_value(pid, mpmath.mpf(xv), mpmath.mpf(tv))
                row = {"x": xv, "t": tv, "u": mpmath.nstr(uu, 30)}
                if PRESETS[pid][0] == "coupled":
                    row["v"] = mpmath.nstr(vv, 30)
                rows.append(row)
            out[pid] = rows
    return out


def main():
    (HERE / "coefficient_systems.json").write_text(json.dumps(coefficient_systems(), indent=2, sort_keys=True) + "\n")
    (HERE / "spot_values.json").write_text(json.dumps(spot_values(), indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
