"""Monte Carlo photon counting and estimation of g2, vacuum weight and effective g2.

Shots are drawn from a photon-number distribution with a counter-based
generator (see ``_sampling_py``), so any shot range can be produced
independently and the record does not depend on how the work is split.
Optional binomial loss and a 50/50 beam splitter model an HBT setup; the
vacuum weight is read off as the fraction of shots with no click.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import kernels
from .errors import CapacityError, DomainError, EstimationError, MalformedInputError
from .fockspace import MAX_CUTOFF, PhotonNumberDistribution

_BOOTSTRAP_TAG = 0xB0075
_CHUNK = 1 << 18


@dataclass(frozen=True)
class SimulationConfig:
    shots: int
    seed: int
    efficiency: float = 1.0
    split: bool = False
    bootstrap_resamples: int = 1000
    workers: int = 1

    def __post_init__(self):
        if self.shots < 1:
            raise DomainError(f"shots must be >= 1, got {self.shots}")
        if not (0.0 < self.efficiency <= 1.0):
            raise DomainError(f"efficiency must lie in (0, 1], got {self.efficiency}")
        if self.bootstrap_resamples < 2:
            raise DomainError("bootstrap_resamples must be >= 2")
        if self.workers < 1:
            raise DomainError("workers must be >= 1")

    def echo(self) -> dict:
        """Provenance fields; ``workers`` is omitted because it cannot
        change the record."""
        d = asdict(self)
        del d["workers"]
        return d


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Per-shot photon counts, shape ``(M,)`` or ``(M, 2)`` when split.

    ``shot_index`` keeps the original shot numbers, so a post-selected
    record still knows where its shots came from; ``shots_total`` is the
    size of the record before any selection.
    """

    counts: np.ndarray
    config: SimulationConfig
    shot_index: np.ndarray = field(default=None)
    shots_total: int = None

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.ndim not in (1, 2) or (counts.ndim == 2 and counts.shape[1] != 2):
            raise DomainError("counts must have shape (M,) or (M, 2)")
        if np.any(counts < 0):
            raise DomainError("counts must be >= 0")
        idx = self.shot_index
        idx = np.arange(counts.shape[0]) if idx is None else np.asarray(idx, dtype=np.int64)
        if idx.shape[0] != counts.shape[0]:
            raise DomainError("shot_index length does not match counts")
        counts.setflags(write=False)
        idx.setflags(write=False)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "shot_index", idx)
        if self.shots_total is None:
            object.__setattr__(self, "shots_total", counts.shape[0])

    @property
    def shots(self) -> int:
        return self.counts.shape[0]

    @property
    def split(self) -> bool:
        return self.counts.ndim == 2

    @property
    def totals(self) -> np.ndarray:
        return self.counts.sum(axis=1) if self.split else self.counts

    @property
    def histogram(self) -> np.ndarray:
        """Number of shots with each total photon count."""
        return np.bincount(self.totals, minlength=1)


@dataclass(frozen=True)
class EstimateResult:
    value: float
    std_error: float
    shots_used: int


def _sampling_cdf(dist: PhotonNumberDistribution) -> np.ndarray:
    if dist.cutoff > MAX_CUTOFF:
        raise CapacityError(f"sampling table for cutoff {dist.cutoff} exceeds {MAX_CUTOFF}")
    cdf = np.cumsum(dist.probs)
    # truncated tail mass is assigned to the cutoff
    cdf[-1] = 1.0
    return cdf


def sample(dist: PhotonNumberDistribution, config: SimulationConfig, backend: str | None = None) -> SampleSet:
    """Draw ``config.shots`` shots. The result is a pure function of
    ``(dist, shots, seed, efficiency, split)``."""
    cdf = _sampling_cdf(dist)
    bounds = [(s, min(s + _CHUNK, config.shots)) for s in range(0, config.shots, _CHUNK)]

    def run(span):
        return kernels.draw_counts(
            cdf, config.seed, span[0], span[1], config.efficiency, config.split, backend
        )

    if config.workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(config.workers) as pool:
            parts = list(pool.map(run, bounds))
    else:
        parts = [run(b) for b in bounds]
    return SampleSet(np.concatenate(parts), config)


def _bootstrap_rng(samples: SampleSet, tag: int) -> np.random.Generator:
    seed = int(samples.config.seed) & ((1 << 64) - 1)
    return np.random.default_rng([seed, _BOOTSTRAP_TAG, tag])


def _outcome_table(samples: SampleSet):
    """Distinct per-shot outcomes and their multiplicities."""
    counts = samples.counts if samples.split else samples.counts[:, None]
    outcomes, freq = np.unique(counts, axis=0, return_counts=True)
    return outcomes.astype(np.float64), freq


def _resample_weights(freq, resamples, rng):
    # Resampling M shots with replacement only changes how often each
    # distinct outcome occurs, which is a multinomial draw over the table.
    m = int(freq.sum())
    return rng.multinomial(m, freq / m, size=resamples).astype(np.float64)


def _g2_from_sums(s_pair, s_a, s_b, m):
    with np.errstate(divide="ignore", invalid="ignore"):
        return m * s_pair / (s_a * s_b)


def _g2_stats(outcomes, split):
    """Per-outcome terms (pair term, first factor, second factor)."""
    if split:
        a, b = outcomes[:, 0], outcomes[:, 1]
        return a * b, a, b
    n = outcomes[:, 0]
    return n * (n - 1.0), n, n


def _std(values):
    values = values[np.isfinite(values)]
    return float(np.std(values, ddof=1)) if values.size > 1 else math.nan


def estimate_g2(samples: SampleSet) -> EstimateResult:
    """Plug-in g2 with a bootstrap standard error.

    Unsplit records use ``mean(n(n-1)) / mean(n)**2``; split records use the
    coincidence form ``mean(n_a n_b) / (mean(n_a) mean(n_b))``.
    """
    if samples.shots == 0 or not np.any(samples.counts):
        raise EstimationError("record has no detected photons; g2 is undefined")
    outcomes, freq = _outcome_table(samples)
    pair, fa, fb = _g2_stats(outcomes, samples.split)
    m = samples.shots
    value = float(_g2_from_sums(freq @ pair, freq @ fa, freq @ fb, m))
    if not math.isfinite(value):
        raise EstimationError("one detector arm recorded no photons; coincidence g2 is undefined")
    w = _resample_weights(freq, samples.config.bootstrap_resamples, _bootstrap_rng(samples, 1))
    boot = _g2_from_sums(w @ pair, w @ fa, w @ fb, m)
    return EstimateResult(value, _std(boot), m)


def estimate_g2_plugin(samples: SampleSet) -> EstimateResult:
    """Factorial-moment g2 of the total counts, ignoring any split."""
    if not samples.split:
        return estimate_g2(samples)
    return estimate_g2(SampleSet(samples.totals, samples.config, samples.shot_index, samples.shots_total))


def estimate_vacuum(samples: SampleSet) -> EstimateResult:
    """Fraction of shots without a click, with its binomial standard error."""
    m = samples.shots
    if m == 0:
        raise EstimationError("empty record")
    x = float(np.count_nonzero(samples.totals == 0)) / m
    return EstimateResult(x, math.sqrt(x * (1.0 - x) / m), m)


def post_select(samples: SampleSet) -> SampleSet:
    """Keep only shots with at least one detected photon."""
    keep = samples.totals > 0
    if not np.any(keep):
        raise EstimationError("no shot survives post-selection; the input looks like pure vacuum")
    return SampleSet(samples.counts[keep], samples.config, samples.shot_index[keep], samples.shots_total)


@dataclass(frozen=True)
class EffectiveG2Measurement:
    g2_raw: EstimateResult
    x_hat: EstimateResult
    g2_eff_direct: EstimateResult
    g2_eff_scaled: EstimateResult

    @property
    def combined_std_error(self) -> float:
        return math.hypot(self.g2_eff_direct.std_error, self.g2_eff_scaled.std_error)


def scaled_effective_g2(samples: SampleSet, g2_raw: EstimateResult, x_hat: EstimateResult) -> EstimateResult:
    """``(1 - x_hat) g2_raw`` with a bootstrap error from joint resamples."""
    outcomes, freq = _outcome_table(samples)
    pair, fa, fb = _g2_stats(outcomes, samples.split)
    clicked = (outcomes.sum(axis=1) > 0).astype(np.float64)
    m = samples.shots
    w = _resample_weights(freq, samples.config.bootstrap_resamples, _bootstrap_rng(samples, 2))
    boot = (w @ clicked / m) * _g2_from_sums(w @ pair, w @ fa, w @ fb, m)
    return EstimateResult((1.0 - x_hat.value) * g2_raw.value, _std(boot), m)


def measure_effective_g2(
    dist: PhotonNumberDistribution, config: SimulationConfig, backend: str | None = None
) -> EffectiveG2Measurement:
    """Estimate the effective g2 twice from one record: as the g2 of the
    post-selected shots and as ``(1 - x_hat)`` times the raw g2."""
    samples = sample(dist, config, backend)
    g2_raw = estimate_g2(samples)
    x_hat = estimate_vacuum(samples)
    direct = estimate_g2(post_select(samples))
    scaled = scaled_effective_g2(samples, g2_raw, x_hat)
    return EffectiveG2Measurement(g2_raw, x_hat, direct, scaled)


def write_samples(samples: SampleSet, path: str | os.PathLike | io.TextIOBase) -> None:
    """CSV ``shot,count`` (or ``shot,count_a,count_b``) preceded by a
    ``# {json config}`` provenance line."""
    if isinstance(path, (str, os.PathLike)):
        with open(path, "w", newline="") as fh:
            write_samples(samples, fh)
        return
    path.write("# " + json.dumps(samples.config.echo(), sort_keys=True) + "\n")
    writer = csv.writer(path, lineterminator="\n")
    if samples.split:
        writer.writerow(["shot", "count_a", "count_b"])
        writer.writerows(zip(samples.shot_index.tolist(), *samples.counts.T.tolist()))
    else:
        writer.writerow(["shot", "count"])
        writer.writerows(zip(samples.shot_index.tolist(), samples.counts.tolist()))


def read_samples(path: str | os.PathLike | io.TextIOBase) -> SampleSet:
    if isinstance(path, (str, os.PathLike)):
        with open(path, newline="") as fh:
            return read_samples(fh)
    first = path.readline()
    if not first.startswith("# "):
        raise MalformedInputError("missing '# {config}' provenance line")
    try:
        config = SimulationConfig(**json.loads(first[2:]))
    except (ValueError, TypeError) as exc:
        raise MalformedInputError(f"bad provenance line: {exc}") from None
    reader = csv.reader(path)
    header = next(reader, None)
    expected = ["shot", "count_a", "count_b"] if config.split else ["shot", "count"]
    if header != expected:
        raise MalformedInputError(f"expected header {','.join(expected)}, got {header!r}")
    rows = []
    for i, row in enumerate(reader, start=1):
        try:
            values = [int(v) for v in row]
        except ValueError as exc:
            raise MalformedInputError(str(exc), row=i) from None
        if len(values) != len(expected):
            raise MalformedInputError(f"expected {len(expected)} fields", row=i)
        rows.append(values)
    data = np.array(rows, dtype=np.int64).reshape(-1, len(expected))
    counts = data[:, 1:] if config.split else data[:, 1]
    return SampleSet(counts, config, data[:, 0], config.shots)
