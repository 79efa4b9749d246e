"""Photon-number distributions of single-mode states.

Every quantity in this package depends only on the Fock-diagonal weights
``q_n = <n|rho|n>``, so a state is stored as that probability vector plus a
certified bound on the probability mass lost to truncation.
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, DomainError, MalformedInputError

DEFAULT_TAIL_TOL = 1e-12
MAX_CUTOFF = 4096
NORM_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class PhotonNumberDistribution:
    """Diagonal Fock-space weights ``probs[n]`` for ``n = 0..cutoff``.

    ``tail_mass_bound`` is an upper bound on the weight of all photon
    numbers above ``cutoff`` that were dropped by truncation.
    """

    probs: np.ndarray
    tail_mass_bound: float = 0.0

    def __post_init__(self):
        probs = np.array(self.probs, dtype=np.float64, copy=True).reshape(-1)
        if probs.size == 0:
            raise DomainError("a distribution needs at least the n=0 weight")
        if not np.all(np.isfinite(probs)):
            raise DomainError("probabilities must be finite")
        if np.any(probs < 0.0) or np.any(probs > 1.0):
            raise DomainError("every probability must lie in [0, 1]")
        tail = float(self.tail_mass_bound)
        if not (0.0 <= tail <= 1.0):
            raise DomainError(f"tail_mass_bound must lie in [0, 1], got {tail}")
        total = math.fsum(probs)
        if abs(total - 1.0) > tail + NORM_SLACK:
            raise DomainError(
                f"probabilities sum to {total!r}; normalization violated beyond "
                f"tail bound {tail:g}"
            )
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "tail_mass_bound", tail)

    @property
    def cutoff(self) -> int:
        return self.probs.size - 1

    def __getitem__(self, n: int) -> float:
        """Weight of the ``n``-photon Fock state; zero above the cutoff."""
        if n < 0:
            raise IndexError("photon numbers are nonnegative")
        return float(self.probs[n]) if n <= self.cutoff else 0.0

    @property
    def vacuum(self) -> float:
        return float(self.probs[0])

    @property
    def single(self) -> float:
        return self[1]

    @property
    def multi(self) -> float:
        """Total weight of two or more photons."""
        return math.fsum(self.probs[2:])

    def __repr__(self):
        head = ", ".join(f"{p:.4g}" for p in self.probs[:6])
        more = ", ..." if self.cutoff > 5 else ""
        return (
            f"PhotonNumberDistribution([{head}{more}], cutoff={self.cutoff}, "
            f"tail_mass_bound={self.tail_mass_bound:.3g})"
        )


def _check_tail_tol(tail_tol):
    if not (0.0 < tail_tol <= 1e-9):
        raise DomainError(f"tail_tol must lie in (0, 1e-9], got {tail_tol}")


def make_fock(n: int) -> PhotonNumberDistribution:
    if n < 0:
        raise DomainError(f"photon number must be >= 0, got {n}")
    probs = np.zeros(n + 1)
    probs[n] = 1.0
    return PhotonNumberDistribution(probs)


def make_coherent(
    mean_n: float, tail_tol: float = DEFAULT_TAIL_TOL, max_cutoff: int = MAX_CUTOFF
) -> PhotonNumberDistribution:
    """Poissonian weights ``exp(-m) m**n / n!`` truncated with a certified tail.

    Past ``n >= m`` successive weights shrink at least by ``m / (K + 2)``,
    so the dropped tail is bounded by a geometric series starting at
    ``q[K+1]``. The cutoff ``K`` is the smallest one for which the tail, and
    the relative error it causes in the first two factorial moments, are
    all below ``tail_tol``.
    """
    if mean_n < 0 or not math.isfinite(mean_n):
        raise DomainError(f"mean photon number must be finite and >= 0, got {mean_n}")
    _check_tail_tol(tail_tol)
    if mean_n == 0:
        return make_fock(0)

    n = np.arange(max_cutoff + 2, dtype=np.float64)
    logq = -mean_n + n * math.log(mean_n) - np.array([math.lgamma(k + 1) for k in n])
    q = np.exp(logq)
    K = n[:-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = mean_n / (K + 2)
        tail = np.where(ratio < 1, q[1:] / (1 - ratio), np.inf)
    # E[n; n > K] = m P(N >= K) and E[n(n-1); n > K] = m**2 P(N >= K - 1)
    prev = np.concatenate([[0.0], q[:-2]])
    rel_mean_deficit = q[:-1] + tail
    rel_fact2_deficit = prev + q[:-1] + tail
    ok = (
        (K >= math.floor(mean_n))
        & (tail < tail_tol)
        & (rel_mean_deficit <= tail_tol)
        & (rel_fact2_deficit <= tail_tol)
    )
    hits = np.flatnonzero(ok)
    if hits.size == 0:
        raise CapacityError(
            f"coherent state with mean {mean_n:g} needs a cutoff above {max_cutoff}"
        )
    cutoff = int(hits[0])
    # log-space rounding grows with the mean; fix the scale with the
    # computed mass, everything beyond it being below tail_tol
    q = q / math.fsum(q)
    return PhotonNumberDistribution(q[: cutoff + 1], float(tail[cutoff]))


def make_thermal(
    mean_n: float, tail_tol: float = DEFAULT_TAIL_TOL, max_cutoff: int = MAX_CUTOFF
) -> PhotonNumberDistribution:
    """Bose-Einstein weights ``m**n / (1 + m)**(n + 1)``; the tail is exact.

    Above ``K`` the distribution is ``K + 1`` plus a copy of itself, scaled
    by ``theta**(K+1)`` with ``theta = m / (1 + m)``, which gives the moment
    deficits in closed form. The cutoff rule matches :func:`make_coherent`.
    """
    if mean_n < 0 or not math.isfinite(mean_n):
        raise DomainError(f"mean photon number must be finite and >= 0, got {mean_n}")
    _check_tail_tol(tail_tol)
    if mean_n == 0:
        return make_fock(0)

    theta = mean_n / (1.0 + mean_n)
    log_theta = math.log(theta)
    cutoff = max(0, math.ceil(math.log(tail_tol) / log_theta) - 1)
    m = mean_n
    while True:
        if cutoff > max_cutoff:
            raise CapacityError(
                f"thermal state with mean {mean_n:g} needs a cutoff above {max_cutoff}"
            )
        tail = math.exp((cutoff + 1) * log_theta)
        mean_deficit = tail * (cutoff + 1 + m)
        fact2_deficit = tail * (cutoff * (cutoff + 1) + 2 * (cutoff + 1) * m + 2 * m * m)
        if (
            tail < tail_tol
            and mean_deficit <= tail_tol * m
            and fact2_deficit <= tail_tol * 2 * m * m
        ):
            break
        cutoff += 1
    n = np.arange(cutoff + 1)
    probs = np.exp(n * log_theta) / (1.0 + mean_n)
    return PhotonNumberDistribution(probs, tail)


def make_two_component(p: float, q: float) -> PhotonNumberDistribution:
    """Weights ``(1 - p - q, p, q)`` on ``|0>, |1>, |2>``."""
    if p < 0 or q < 0:
        raise DomainError(f"p and q must be >= 0, got p={p}, q={q}")
    if p + q > 1 + NORM_SLACK:
        raise DomainError(f"p + q must not exceed 1, got {p + q!r}")
    return PhotonNumberDistribution([max(0.0, 1.0 - p - q), p, q])


def make_one_n(p: float, n: int) -> PhotonNumberDistribution:
    """Weight ``p`` on ``|1>`` and ``1 - p`` on ``|n>``, ``n >= 2``."""
    if n < 2:
        raise DomainError(f"the multi-photon Fock number must be >= 2, got {n}")
    if not (0.0 <= p <= 1.0):
        raise DomainError(f"p must lie in [0, 1], got {p}")
    probs = np.zeros(n + 1)
    probs[1] = p
    probs[n] = 1.0 - p
    return PhotonNumberDistribution(probs)


def mix(
    components: Iterable[tuple[PhotonNumberDistribution, float]],
) -> PhotonNumberDistribution:
    """Incoherent mixture ``sum_i w_i rho_i``.

    Each entry is summed with ``math.fsum`` so the result does not depend on
    the order of the components.
    """
    components = list(components)
    if not components:
        raise DomainError("mix needs at least one component")
    weights = [float(w) for _, w in components]
    if any(w < 0 for w in weights):
        raise DomainError("mixture weights must be >= 0")
    if abs(math.fsum(weights) - 1.0) > 1e-12:
        raise DomainError(f"mixture weights sum to {math.fsum(weights)!r}, not 1")
    size = max(d.probs.size for d, _ in components)
    stacked = np.zeros((len(components), size))
    for row, (d, w) in enumerate(components):
        stacked[row, : d.probs.size] = w * d.probs
    probs = np.array([math.fsum(stacked[:, k]) for k in range(size)])
    tail = math.fsum(w * d.tail_mass_bound for d, w in components)
    return PhotonNumberDistribution(np.clip(probs, 0.0, 1.0), tail)


def add_vacuum(dist: PhotonNumberDistribution, x: float) -> PhotonNumberDistribution:
    """Mix in vacuum with weight ``x``: ``x |0><0| + (1 - x) rho``."""
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"vacuum weight must lie in [0, 1], got {x}")
    probs = (1.0 - x) * dist.probs
    probs[0] += x
    return PhotonNumberDistribution(np.clip(probs, 0.0, 1.0), (1.0 - x) * dist.tail_mass_bound)


def from_probs(probs: Sequence[float], tol: float = DEFAULT_TAIL_TOL) -> PhotonNumberDistribution:
    """Build a distribution from explicit weights, attributing any missing
    mass (at most ``tol``) to the truncated tail."""
    probs = np.asarray(probs, dtype=np.float64)
    missing = 1.0 - math.fsum(probs)
    if missing > tol + NORM_SLACK:
        raise DomainError(f"weights sum to {1.0 - missing!r}; missing mass exceeds {tol:g}")
    return PhotonNumberDistribution(probs, max(0.0, missing))


def write_csv(dist: PhotonNumberDistribution, path: str | os.PathLike | io.TextIOBase) -> None:
    """Write ``n,prob`` rows; values use ``repr`` so reading back is exact."""
    if isinstance(path, (str, os.PathLike)):
        with open(path, "w", newline="") as fh:
            write_csv(dist, fh)
        return
    writer = csv.writer(path, lineterminator="\n")
    writer.writerow(["n", "prob"])
    for n, p in enumerate(dist.probs):
        writer.writerow([n, repr(float(p))])


def read_csv(
    path: str | os.PathLike | io.TextIOBase, tol: float = DEFAULT_TAIL_TOL
) -> PhotonNumberDistribution:
    """Read an ``n,prob`` file. Rows must have strictly increasing ``n``;
    omitted photon numbers have weight zero."""
    if isinstance(path, (str, os.PathLike)):
        with open(path, newline="") as fh:
            return read_csv(fh, tol)
    rows = csv.reader(line for line in path if line.strip() and not line.startswith("#"))
    header = next(rows, None)
    if header is None or [h.strip() for h in header] != ["n", "prob"]:
        raise MalformedInputError(f"expected header 'n,prob', got {header!r}")
    entries: dict[int, float] = {}
    last = -1
    for i, row in enumerate(rows, start=1):
        if len(row) != 2:
            raise MalformedInputError(f"expected 2 fields, got {len(row)}", row=i)
        try:
            n = int(row[0])
            p = float(row[1])
        except ValueError as exc:
            raise MalformedInputError(str(exc), row=i) from None
        if n <= last:
            raise MalformedInputError("photon numbers must be strictly increasing", row=i)
        if not (0.0 <= p <= 1.0):
            raise MalformedInputError(f"probability {p!r} outside [0, 1]", row=i)
        entries[n] = p
        last = n
    if not entries:
        raise MalformedInputError("no data rows")
    probs = np.zeros(last + 1)
    for n, p in entries.items():
        probs[n] = p
    try:
        return from_probs(probs, tol)
    except DomainError as exc:
        raise MalformedInputError(str(exc)) from None
