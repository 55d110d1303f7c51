"""Seeded Monte Carlo replication of assignment statistics.

Replicate ``r`` draws its matrix from ``RandomStream(seed, r)``, so every
replicate is reproducible on its own and the reduction (always performed in
replicate order) does not depend on how replicates were spread over threads.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .asymptotics import PredictionRecord, predict
from .distributions import DistributionSpec, RandomStream, sample_array
from .greedy import _greedy, _row_max_sum
from .solver import _lap_min, _row_order_sum

EXACT_N_LIMIT = 4096


class Statistic(str, Enum):
    EXACT_MAX = "exact-max"
    EXACT_MIN = "exact-min"
    GREEDY_TOTAL = "greedy-total"
    ROW_MAX_SUM = "row-max-sum"
    IID_MAX = "iid-max"


_EXACT = {Statistic.EXACT_MAX, Statistic.EXACT_MIN}


class ConfigError(ValueError):
    pass


class SandwichViolation(AssertionError):
    """greedy total <= exact maximum <= row-max sum failed on a replicate."""


@dataclass(frozen=True)
class ExperimentConfig:
    spec: DistributionSpec
    n: int
    reps: int
    statistic: Statistic = Statistic.EXACT_MAX
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "statistic", Statistic(self.statistic))
        if self.n < 1:
            raise ConfigError("n must be >= 1")
        if self.reps < 2:
            raise ConfigError("reps must be >= 2")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")


@dataclass(frozen=True)
class McEstimate:
    mean: float
    sample_stddev: float
    stderr: float
    ci95_low: float
    ci95_high: float
    reps: int

    @classmethod
    def from_values(cls, values: np.ndarray) -> "McEstimate":
        reps = len(values)
        if reps < 2:
            raise ConfigError("need at least two replicate values")
        mean = math.fsum(values) / reps
        var = math.fsum((values - mean) ** 2) / (reps - 1)
        sd = math.sqrt(var)
        se = sd / math.sqrt(reps)
        return cls(mean, sd, se, mean - 1.96 * se, mean + 1.96 * se, reps)


def _replicate(spec, n, seed, r, stats):
    stream = RandomStream(seed, r)
    if stats == (Statistic.IID_MAX,):
        return (float(sample_array(spec, stream, n).max()),)
    a = sample_array(spec, stream, (n, n))
    out = []
    for s in stats:
        if s is Statistic.EXACT_MAX:
            out.append(_row_order_sum(a, _lap_min(-a)))
        elif s is Statistic.EXACT_MIN:
            out.append(_row_order_sum(a, _lap_min(a)))
        elif s is Statistic.GREEDY_TOTAL:
            out.append(_greedy(a)[2])
        elif s is Statistic.ROW_MAX_SUM:
            out.append(_row_max_sum(a))
        else:  # iid max alongside matrix statistics: first row of the matrix
            out.append(a[0].max())
    return tuple(out)


def _check_sandwich(values: dict, seed: int) -> None:
    chain = [s for s in (Statistic.GREEDY_TOTAL, Statistic.EXACT_MAX, Statistic.ROW_MAX_SUM)
             if s in values]
    for lo, hi in zip(chain, chain[1:]):
        bad = np.flatnonzero(values[lo] > values[hi])
        if bad.size:
            r = int(bad[0])
            raise SandwichViolation(
                f"replicate {r} (seed {seed}): {lo.value}={values[lo][r]!r} > "
                f"{hi.value}={values[hi][r]!r}"
            )


def replicate_values(config: ExperimentConfig,
                     statistics: Iterable[Statistic | str] | None = None) -> dict:
    """Per-replicate values of each statistic, all computed on the same matrix.

    Returns ``{Statistic: ndarray of length reps}``, indexed by replicate.
    """
    stats = (config.statistic,) if statistics is None else statistics
    stats = tuple(dict.fromkeys(Statistic(s) for s in stats))
    if not stats:
        raise ConfigError("no statistics requested")
    if _EXACT.intersection(stats) and config.n > EXACT_N_LIMIT:
        raise ConfigError(f"exact statistics limited to n <= {EXACT_N_LIMIT}")
    table = np.empty((config.reps, len(stats)))

    def work(lo, hi):
        for r in range(lo, hi):
            table[r] = _replicate(config.spec, config.n, config.seed, r, stats)

    if config.workers == 1:
        work(0, config.reps)
    else:
        chunk = max(1, -(-config.reps // (4 * config.workers)))
        with ThreadPoolExecutor(config.workers) as pool:
            futures = [pool.submit(work, lo, min(lo + chunk, config.reps))
                       for lo in range(0, config.reps, chunk)]
            for f in futures:
                f.result()
    values = {s: table[:, k].copy() for k, s in enumerate(stats)}
    _check_sandwich(values, config.seed)
    return values


def run(config: ExperimentConfig) -> McEstimate:
    return McEstimate.from_values(replicate_values(config)[config.statistic])


def run_paired(config: ExperimentConfig,
               statistics: Iterable[Statistic | str]) -> dict:
    """Estimate several statistics on common random matrices.

    Raises SandwichViolation if any replicate breaks
    greedy total <= exact max <= row-max sum.
    """
    values = replicate_values(config, statistics)
    return {s: McEstimate.from_values(v) for s, v in values.items()}


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    estimate: McEstimate
    prediction: PredictionRecord
    ratio: float


def convergence_scan(spec: DistributionSpec, ns: Sequence[int],
                     reps_per_n: int | Sequence[int], seed: int,
                     workers: int = 1) -> list[ConvergenceRow]:
    """Exact-max estimates against ``n g(1/n)`` for increasing n."""
    ns = list(ns)
    if ns != sorted(ns):
        raise ConfigError("ns must be sorted ascending")
    if isinstance(reps_per_n, int):
        reps = [reps_per_n] * len(ns)
    else:
        reps = list(reps_per_n)
        if len(reps) != len(ns):
            raise ConfigError("reps_per_n must match ns in length")
    rows = []
    for n, r in zip(ns, reps):
        pred = predict(spec, n)
        est = run(ExperimentConfig(spec, n, r, Statistic.EXACT_MAX, seed, workers))
        rows.append(ConvergenceRow(n, est, pred, est.mean / pred.em_assignment_predicted))
    return rows
