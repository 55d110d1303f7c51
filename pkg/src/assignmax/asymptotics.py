"""Leading-order predictions for E M_n and E max_pi S(pi), and the exact
finite-n values known for minimum assignments."""
from __future__ import annotations

import math
import operator
from dataclasses import dataclass

from .distributions import (
    DistributionSpec,
    Kind,
    asymptotic_tail_quantile,
    tail_quantile,
)

ZETA2 = math.pi**2 / 6.0
ZETA3 = 1.2020569031595942
EULER_GAMMA = 0.5772156649015329

_HARMONIC_DIRECT_MAX = 10**6


class AssumptionError(ValueError):
    """The law or size does not meet the growth theorem's hypotheses."""


@dataclass(frozen=True)
class PredictionRecord:
    n: int
    g_of_inv_n: float
    em_n_predicted: float
    em_assignment_predicted: float
    exact_em_n: float | None
    notes: str = ""


def harmonic(n: int) -> float:
    if n < 1:
        return 0.0
    if n <= _HARMONIC_DIRECT_MAX:
        return math.fsum(1.0 / k for k in range(1, n + 1))
    return math.log(n) + EULER_GAMMA + 1.0 / (2.0 * n)


def parisi_sum(n: int) -> float:
    """sum_{k=1}^n 1/k^2: exact E min_pi S(pi) for Exp(1) entries."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.fsum(1.0 / (k * k) for k in range(1, n + 1))


def mezard_parisi_expansion(n: int) -> float:
    """zeta(2) - (zeta(2)/2 + 2 zeta(3))/n, the uniform-entry minimum to O(1/n^2)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return ZETA2 - (ZETA2 / 2.0 + 2.0 * ZETA3) / n


def exact_iid_max_mean(spec: DistributionSpec, n: int) -> float | None:
    """E max of n i.i.d. draws where an elementary closed form exists, else None."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if spec.kind is Kind.EXP:
        return harmonic(n) / spec.params[0]
    if spec.kind is Kind.GUMBEL:
        loc, scale = spec.params
        return loc + scale * (math.log(n) + EULER_GAMMA)
    if spec.kind is Kind.UNIFORM01:
        return n / (n + 1.0)
    return None


def predict(spec: DistributionSpec, n: int) -> PredictionRecord:
    """Leading terms ``g(1/n)`` and ``n g(1/n)``.

    Raises AssumptionError for uniform01, whose tail quantile stays bounded
    (the theorem needs g to tend to infinity and vary slowly at zero).
    """
    if spec.kind is Kind.UNIFORM01:
        raise AssumptionError(
            "uniform01 violates the theorem assumption that the tail quantile "
            "g(p) tends to infinity as p -> 0 (here g(p) = 1 - p is bounded)"
        )
    try:
        n = operator.index(n)
    except TypeError:
        raise AssumptionError(f"n must be an integer, got {n!r}") from None
    if n < 2:
        raise AssumptionError(f"n must be >= 2, got {n}")
    g = tail_quantile(spec, 1.0 / n).value
    notes = ""
    if spec.kind is Kind.POISSON:
        if 1.0 / n < math.exp(-math.e):
            asym = asymptotic_tail_quantile(spec, 1.0 / n)
            notes = f"asymptotic g(1/n)={asym:.12g}"
        else:
            notes = "asymptotic g(1/n) undefined for n <= e^e"
    return PredictionRecord(
        n=n,
        g_of_inv_n=g,
        em_n_predicted=g,
        em_assignment_predicted=n * g,
        exact_em_n=exact_iid_max_mean(spec, n),
        notes=notes,
    )
