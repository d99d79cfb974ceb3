"""Conformable fractional derivative operators.

All functions work with plain floats and equally with multiprecision numbers,
so the residual checks can run them in extended precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

__all__ = [
    "FractionalOrder",
    "d_alpha_limit",
    "d_alpha_classical",
    "d2_alpha_classical",
    "d_alpha_chain",
]

RealFn = Callable[[float], float]


@dataclass(frozen=True)
class FractionalOrder:
    """Order ``alpha`` of a conformable derivative, ``0 < alpha <= 1``."""

    alpha: float

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise ValueError(f"fractional order must satisfy 0 < alpha <= 1, got {self.alpha}")


OrderLike = Union[FractionalOrder, float]


def _alpha(order: OrderLike):
    if isinstance(order, FractionalOrder):
        return order.alpha
    return FractionalOrder(order).alpha


def _check_t(t) -> None:
    if not t > 0:
        raise ValueError(f"conformable derivatives need t > 0, got {t}")


def d_alpha_limit(f: RealFn, t, order: OrderLike, eps=None):
    """Forward-difference quotient ``(f(t + eps*t^(1-alpha)) - f(t)) / eps``.

    This is the limit definition taken at a finite ``eps`` (default
    ``1e-6 * max(1, t)``); the error is O(eps).
    """
    alpha = _alpha(order)
    _check_t(t)
    if eps is None:
        eps = 1e-6 * max(1.0, float(t))
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    return (f(t + eps * t ** (1 - alpha)) - f(t)) / eps


def d_alpha_classical(df: RealFn, t, order: OrderLike):
    """``t^(1-alpha) * df(t)`` for a differentiable target with derivative ``df``."""
    alpha = _alpha(order)
    _check_t(t)
    return t ** (1 - alpha) * df(t)


def d2_alpha_classical(df: RealFn, d2f: RealFn, t, order: OrderLike):
    """Composed operator D^alpha(D^alpha f) from the first two classical derivatives.

    Expanding ``t^(1-a) d/dt (t^(1-a) f')`` gives
    ``(1-a) t^(1-2a) f' + t^(2-2a) f''``.
    """
    alpha = _alpha(order)
    _check_t(t)
    return (1 - alpha) * t ** (1 - 2 * alpha) * df(t) + t ** (2 - 2 * alpha) * d2f(t)


def d_alpha_chain(g: RealFn, dg: RealFn, df_outer: RealFn, t, order: OrderLike):
    """Conformable derivative of ``f(g(t))``: ``t^(1-alpha) g'(t) f'(g(t))``."""
    alpha = _alpha(order)
    _check_t(t)
    return t ** (1 - alpha) * dg(t) * df_outer(g(t))
