"""Moments, zero-delay g2, effective g2 and two-state mixture analysis."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericUnderflowError
from .fockspace import PhotonNumberDistribution

VACUUM_G2 = 1.0
_MEAN_FLOOR = 1e-300


@dataclass(frozen=True)
class MixtureComponent:
    """Summary statistics of one constituent of a two-state mixture."""

    g: float
    n_mean: float
    weight: float = 1.0

    def __post_init__(self):
        if self.g < 0:
            raise DomainError(f"component g2 must be >= 0, got {self.g}")
        if self.n_mean < 0:
            raise DomainError(f"component mean must be >= 0, got {self.n_mean}")
        if not (0.0 <= self.weight <= 1.0):
            raise DomainError(f"component weight must lie in [0, 1], got {self.weight}")


@dataclass(frozen=True)
class CorrelationSummary:
    """Photon statistics of a single state.

    ``g2_is_convention`` marks the exact vacuum, whose g2 is the
    coherent-limit value 1 rather than a computed ratio; bound routines
    should not draw conclusions from it.
    """

    mean_n: float
    g2: float
    vacuum_x: float
    g2_eff: float
    smpp_exact: float
    g2_is_convention: bool = False


def mean_photon_number(dist: PhotonNumberDistribution) -> float:
    n = np.arange(dist.probs.size)
    return math.fsum(n * dist.probs)


def second_factorial_moment(dist: PhotonNumberDistribution) -> float:
    """``<a^dag^2 a^2> = sum n (n - 1) q_n``."""
    n = np.arange(dist.probs.size, dtype=np.float64)
    return math.fsum(n * (n - 1.0) * dist.probs)


def is_vacuum(dist: PhotonNumberDistribution) -> bool:
    return not np.any(dist.probs[1:])


def g2(dist: PhotonNumberDistribution) -> float:
    """Zero-delay second-order correlation ``sum n(n-1) q_n / (sum n q_n)**2``.

    The exact vacuum returns ``VACUUM_G2`` (the coherent-state limit).
    """
    if is_vacuum(dist):
        return VACUUM_G2
    mean = mean_photon_number(dist)
    if mean < _MEAN_FLOOR:
        raise NumericUnderflowError(f"mean photon number {mean!r} too small for g2")
    return second_factorial_moment(dist) / (mean * mean)


def effective_g2(g2_val: float, x: float) -> float:
    """Vacuum-corrected correlation ``(1 - x) g2``."""
    if g2_val < 0:
        raise DomainError(f"g2 must be >= 0, got {g2_val}")
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"vacuum weight must lie in [0, 1], got {x}")
    return (1.0 - x) * g2_val


def smpp_exact(dist: PhotonNumberDistribution) -> float:
    """Single-to-multi-photon ratio ``q_1 / sum_{n>=2} q_n``.

    Returns ``inf`` for states without multi-photon weight and ``nan`` when
    both weights vanish.
    """
    p = dist.single
    q = dist.multi
    if q == 0.0:
        return math.inf if p > 0 else math.nan
    return p / q


def mixture_g2(c1: MixtureComponent, c2: MixtureComponent, s: float) -> float:
    """g2 of ``s rho_1 + (1 - s) rho_2`` from the components' (g, n) values.

    The same expression holds for coherent superpositions of states with
    disjoint photon-number support.
    """
    if not (0.0 <= s <= 1.0):
        raise DomainError(f"s must lie in [0, 1], got {s}")
    if c1.n_mean == 0 and c2.n_mean == 0:
        raise DomainError("at least one component needs a nonzero mean photon number")
    num = s * c1.n_mean**2 * c1.g + (1 - s) * c2.n_mean**2 * c2.g
    den = s * c1.n_mean + (1 - s) * c2.n_mean
    if den == 0.0:
        # all weight on a zero-mean component
        return c1.g if s == 1 else c2.g
    return num / (den * den)


def mixture_g2_slope(r: float, t: float, s: float) -> float:
    """``(1/g_1) dg2/ds`` for ``r = n_2/n_1`` and ``t = g_2/g_1``."""
    if r <= 0:
        raise DomainError(f"mean ratio r must be > 0, got {r}")
    if not (0.0 <= s <= 1.0):
        raise DomainError(f"s must lie in [0, 1], got {s}")
    num = r * (t * (1 - r) ** 2 - t + 1) - (1 - r) * (1 - r * r * t) * s
    return num / (s + (1 - s) * r) ** 3


def mixture_g2_max(r: float, g1: float = 1.0) -> tuple[float, float]:
    """Location and height of the maximum for equal-g components.

    Returns ``(s_star, g2max)`` with ``s_star = r/(1+r)`` and
    ``g2max = g1 (1+r)**2 / (4r)``.
    """
    if r <= 0:
        raise DomainError(f"mean ratio r must be > 0, got {r}")
    return r / (1 + r), g1 * (1 + r) ** 2 / (4 * r)


def summarize(dist: PhotonNumberDistribution) -> CorrelationSummary:
    x = dist.vacuum
    vac = is_vacuum(dist)
    g = g2(dist)
    return CorrelationSummary(
        mean_n=mean_photon_number(dist),
        g2=g,
        vacuum_x=x,
        g2_eff=effective_g2(g, x),
        smpp_exact=smpp_exact(dist),
        g2_is_convention=vac,
    )
