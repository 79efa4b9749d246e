"""Bounds on single- and multi-photon weights implied by g2 and the vacuum weight.

Notation: ``p = q_1``, ``q = sum_{n>=2} q_n``, ``x = q_0`` and
``ge = (1 - x) g2`` the effective correlation. The central quantity is the
ratio bound ``C(ge) = 2 s / (1 - s)`` with ``s = sqrt(1 - 2 ge)``, valid for
``ge < 1/2``. Expressions are rearranged so they stay accurate for ``ge``
near zero, where ``1 - s`` cancels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .correlations import effective_g2
from .errors import DomainError, InfeasibleError

_SQRT_SLACK = 1e-14


def _root(ge: float) -> float:
    """``sqrt(1 - 2 ge)`` with a guard against tiny negative arguments."""
    arg = 1.0 - 2.0 * ge
    if arg < -_SQRT_SLACK:
        raise DomainError(f"effective g2 {ge!r} exceeds 1/2")
    return math.sqrt(min(1.0, max(0.0, arg)))


def _check_g2(g2_val, name="g2"):
    if not g2_val >= 0:
        raise DomainError(f"{name} must be >= 0, got {g2_val}")


def _check_x(x):
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"vacuum weight must lie in [0, 1], got {x}")


def ratio_lower_bound(g2_eff: float) -> float:
    """Lower bound ``C`` on ``p/q`` from the effective g2.

    ``inf`` at ``g2_eff = 0`` and ``0`` for ``g2_eff >= 1/2`` (no conclusion).
    """
    _check_g2(g2_eff, "effective g2")
    if g2_eff == 0.0:
        return math.inf
    if g2_eff >= 0.5:
        return 0.0
    s = _root(g2_eff)
    # 2s/(1-s) with 1-s = 2g/(1+s)
    return s * (1.0 + s) / g2_eff


def ratio_lower_bound_with_q(
    g2_val: float, q: float, n2: float = 2.0, g2_comp: float = 0.5
) -> float:
    """``p/q >= n2 [sqrt(g2_comp / (g2 q)) - 1]`` for a known multi-photon weight ``q``.

    ``n2`` and ``g2_comp`` describe the multi-photon part of the state; the
    defaults (``|2>``) give the weakest bound.
    """
    if not (0.0 < q <= 1.0):
        raise DomainError(f"q must lie in (0, 1], got {q}")
    if not g2_val > 0:
        raise DomainError(f"g2 must be > 0, got {g2_val}; use ratio_lower_bound")
    if n2 < 2:
        raise DomainError(f"n2 must be >= 2, got {n2}")
    if g2_comp < 0.5:
        raise DomainError(f"g2 of the multi-photon part must be >= 1/2, got {g2_comp}")
    return max(0.0, n2 * (math.sqrt(g2_comp / (g2_val * q)) - 1.0))


def required_g2_for_ratio(N: float) -> float:
    """Largest effective g2 that still guarantees ``p/q >= N``."""
    if N < 0:
        raise DomainError(f"N must be >= 0, got {N}")
    if math.isinf(N):
        return 0.0
    return 2.0 * (N + 1.0) / (N + 2.0) ** 2


def ratio_lower_bound_approx(g2_eff: float) -> float:
    """Small-g2 expansion ``2/g2_eff - 3`` of :func:`ratio_lower_bound`."""
    if not g2_eff > 0:
        raise DomainError(f"effective g2 must be > 0, got {g2_eff}")
    return 2.0 / g2_eff - 3.0


def effective_purity_bound(g2_eff: float) -> float:
    """Lower bound on ``p/(p+q)``: ``C/(1+C) = 2s/(1+s)``."""
    _check_g2(g2_eff, "effective g2")
    if g2_eff >= 0.5:
        return 0.0
    s = _root(g2_eff)
    return 2.0 * s / (1.0 + s)


def multiphoton_upper_bound(g2_eff: float) -> float:
    """Upper bound on ``q``: ``1/(1+C) = 2 g2_eff / (1+s)**2``.

    Equivalently ``x + p >= C/(1+C)``.
    """
    _check_g2(g2_eff, "effective g2")
    if g2_eff >= 0.5:
        return 1.0
    s = _root(g2_eff)
    return 2.0 * g2_eff / (1.0 + s) ** 2


def p_absolute_bounds(g2_val: float, x: float) -> tuple[float, float]:
    """Interval ``(1-x) C/(1+C) <= p <= 1-x`` for the single-photon weight."""
    _check_g2(g2_val)
    _check_x(x)
    p_max = 1.0 - x
    return p_max * effective_purity_bound(effective_g2(g2_val, x)), p_max


def qn_upper_bound_meanlimit(n: int) -> float:
    """``q_n <= 2/[n(n-1)]``, from ``<n>**2 g2 <= 2`` when ``g2 <= 1/2``."""
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    return min(1.0, 2.0 / (n * (n - 1)))


def _check_one_n_range(g2_val, n):
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    top = 1.0 - 1.0 / n
    if not (0.0 <= g2_val <= top + 1e-15):
        raise InfeasibleError(
            f"g2={g2_val!r} is not realizable by a |1>/|{n}> state; "
            f"allowed range is [0, {top!r}]",
            feasible=(0.0, top),
        )


def qn_upper_bound_refined(g2_val: float, n: int) -> float:
    """Largest ``q_n`` compatible with ``g2``, attained by ``p|1> + (1-p)|n>``.

    ``q_n = (1 - w) / [(n - 1)(1 + w)]`` with ``w = sqrt(1 - 4 g2 / n)``,
    which is the closed-form ``1 - p`` written without cancellation.
    """
    _check_one_n_range(g2_val, n)
    w = math.sqrt(max(0.0, 1.0 - 4.0 * g2_val / n))
    return (1.0 - w) / ((n - 1) * (1.0 + w))


def qn_upper_bound_with_vacuum(g2_val: float, x: float, n: int) -> tuple[float, float]:
    """Vacuum-aware ``q_n`` bound.

    Returns ``(q_rel, q_abs)``: the largest ``n``-photon weight of the
    vacuum-free part of the state, and the same weight in the full state,
    ``q_abs = (1 - x) q_rel``.
    """
    _check_g2(g2_val)
    if not (0.0 <= x < 1.0):
        raise DomainError(f"vacuum weight must lie in [0, 1), got {x}")
    q_rel = qn_upper_bound_refined(effective_g2(g2_val, x), n)
    return q_rel, (1.0 - x) * q_rel


def two_component_feasible_q(g2_val: float) -> tuple[float, float]:
    """Interval of ``q`` for which ``(1-p-q)|0> + p|1> + q|2>`` can reach ``g2``."""
    if not g2_val > 0:
        raise DomainError(f"g2 must be > 0, got {g2_val}")
    if g2_val > 0.5:
        return 0.0, min(1.0, 1.0 / (2.0 * g2_val))
    # p + q <= 1 <=> w**2 - a w + 1 >= 0 with w = sqrt(q), a = sqrt(2/g2)
    a = math.sqrt(2.0 / g2_val)
    w1 = 2.0 / (a + math.sqrt(max(0.0, a * a - 4.0)))
    return 0.0, w1 * w1


def invert_two_component(g2_val: float, q: float) -> float:
    """Single-photon weight ``p = sqrt(2q/g2) - 2q`` of the |0>,|1>,|2> state."""
    if not g2_val > 0:
        raise DomainError(f"g2 must be > 0, got {g2_val}")
    if not (0.0 <= q <= 1.0):
        raise DomainError(f"q must lie in [0, 1], got {q}")
    p = math.sqrt(2.0 * q / g2_val) - 2.0 * q
    lo, hi = two_component_feasible_q(g2_val)
    if p < -1e-15 or p + q > 1.0 + 1e-12:
        raise InfeasibleError(
            f"no |0>,|1>,|2> state has g2={g2_val!r} with q={q!r}; "
            f"feasible q interval is [{lo!r}, {hi!r}]",
            feasible=(lo, hi),
        )
    return min(max(p, 0.0), 1.0 - q)


def invert_one_n(g2_val: float, n: int) -> float:
    """Single-photon weight ``p`` of ``p|1> + (1-p)|n>`` with the given g2."""
    return 1.0 - qn_upper_bound_refined(g2_val, n)


def classical_state_bounds(kind: str, mean_n: float) -> tuple[float, Optional[float]]:
    """Exact ``p/q`` and the g2-based bound for coherent or thermal light.

    Returns ``(exact, bound)``; ``bound`` is ``None`` beyond the mean photon
    number where the effective g2 reaches 1/2 (``ln 2`` coherent, ``1/3``
    thermal).
    """
    if not mean_n > 0:
        raise DomainError(f"mean photon number must be > 0, got {mean_n}")
    if kind == "coherent":
        exact = mean_n / (math.expm1(mean_n) - mean_n)
        ge = -math.expm1(-mean_n)
        limit = math.log(2.0)
    elif kind == "thermal":
        exact = 1.0 / mean_n
        ge = 2.0 * mean_n / (1.0 + mean_n)
        limit = 1.0 / 3.0
    else:
        raise DomainError(f"kind must be 'coherent' or 'thermal', got {kind!r}")
    if mean_n > limit:
        return exact, None
    return exact, ratio_lower_bound(min(ge, 0.5))


@dataclass(frozen=True)
class BoundsReport:
    g2: float
    x: float
    g2_eff: float
    ratio_lower: float
    p_min: float
    p_max: float
    purity_lower: float
    q_upper: float
    conclusive: bool


def full_report(g2_val: float, x: float = 0.0) -> BoundsReport:
    """All bounds for one measured ``(g2, x)`` pair."""
    _check_g2(g2_val)
    _check_x(x)
    ge = effective_g2(g2_val, x)
    p_min, p_max = p_absolute_bounds(g2_val, x)
    return BoundsReport(
        g2=g2_val,
        x=x,
        g2_eff=ge,
        ratio_lower=ratio_lower_bound(ge),
        p_min=p_min,
        p_max=p_max,
        purity_lower=effective_purity_bound(ge),
        q_upper=multiphoton_upper_bound(ge),
        conclusive=ge < 0.5,
    )
