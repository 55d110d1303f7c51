"""Entry laws for the random matrices: parsing, samplers, tail probabilities and
tail quantile functions ``g(p) = inf{r : P(X >= r) <= p}``."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numba
import numpy as np

QUANTILE_TOL = 1e-8

_SQRT2 = math.sqrt(2.0)


class DistributionError(ValueError):
    """Bad distribution string, parameter, or probability argument."""


class Kind(str, Enum):
    NORMAL = "normal"
    EXP = "exp"
    GUMBEL = "gumbel"
    LAPLACE = "laplace"
    POISSON = "poisson"
    UNIFORM01 = "uniform01"


_ARITY = {
    Kind.NORMAL: 0,
    Kind.EXP: 1,
    Kind.GUMBEL: 2,
    Kind.LAPLACE: 2,
    Kind.POISSON: 1,
    Kind.UNIFORM01: 0,
}


@dataclass(frozen=True)
class DistributionSpec:
    """Law of the matrix entries.

    ``params`` holds ``(rate,)`` for exp, ``(location, scale)`` for gumbel and
    laplace, ``(lam,)`` for poisson and nothing for normal/uniform01.
    """

    kind: Kind
    params: tuple[float, ...] = ()

    def __post_init__(self):
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        params = tuple(float(x) for x in self.params)
        object.__setattr__(self, "params", params)
        if len(params) != _ARITY[kind]:
            raise DistributionError(
                f"{kind.value} takes {_ARITY[kind]} parameter(s), got {len(params)}"
            )
        if not all(math.isfinite(x) for x in params):
            raise DistributionError("distribution parameters must be finite")
        if kind in (Kind.EXP, Kind.POISSON) and params[0] <= 0:
            raise DistributionError(f"{kind.value} parameter must be positive")
        if kind in (Kind.GUMBEL, Kind.LAPLACE) and params[1] <= 0:
            raise DistributionError(f"{kind.value} scale must be positive")

    @classmethod
    def parse(cls, text: str) -> "DistributionSpec":
        """Parse ``normal``, ``exp:1.0``, ``gumbel:0:1``, ``laplace:0:1``,
        ``poisson:4.0`` or ``uniform01``. No aliases are accepted."""
        name, *fields = text.strip().split(":")
        try:
            kind = Kind(name)
        except ValueError:
            raise DistributionError(
                f"unknown distribution {name!r}; expected one of "
                + ", ".join(k.value for k in Kind)
            ) from None
        try:
            params = tuple(float(f) for f in fields)
        except ValueError:
            raise DistributionError(f"bad numeric parameter in {text!r}") from None
        return cls(kind, params)

    def __str__(self) -> str:
        return ":".join([self.kind.value, *(f"{x:g}" for x in self.params)])

    @property
    def is_continuous(self) -> bool:
        return self.kind is not Kind.POISSON


def normal() -> DistributionSpec:
    return DistributionSpec(Kind.NORMAL)


def exponential(rate: float = 1.0) -> DistributionSpec:
    return DistributionSpec(Kind.EXP, (rate,))


def gumbel(location: float = 0.0, scale: float = 1.0) -> DistributionSpec:
    return DistributionSpec(Kind.GUMBEL, (location, scale))


def laplace(location: float = 0.0, scale: float = 1.0) -> DistributionSpec:
    return DistributionSpec(Kind.LAPLACE, (location, scale))


def poisson(lam: float) -> DistributionSpec:
    return DistributionSpec(Kind.POISSON, (lam,))


def uniform01() -> DistributionSpec:
    return DistributionSpec(Kind.UNIFORM01)


# --------------------------------------------------------------------------
# inverse complementary error function

# Acklam's rational approximation of the standard normal quantile
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


@numba.njit(cache=True)
def _lower_normal_quantile_approx(q):
    # approximate Phi^{-1}(q) for 0 < q <= 1/2; result <= 0
    if q < _P_LOW:
        t = math.sqrt(-2.0 * math.log(q))
        num = ((((_C[0] * t + _C[1]) * t + _C[2]) * t + _C[3]) * t + _C[4]) * t + _C[5]
        den = (((_D[0] * t + _D[1]) * t + _D[2]) * t + _D[3]) * t + 1.0
        return num / den
    s = q - 0.5
    r = s * s
    num = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * s
    den = ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
    return num / den


@numba.njit(cache=True)
def _erfcinv_scalar(y):
    if y <= 0.0:
        return math.inf
    if y >= 2.0:
        return -math.inf
    if y == 1.0:
        return 0.0
    # erfc(x) = y is symmetric about y = 1: erfcinv(2 - y) = -erfcinv(y)
    sign = 1.0
    if y > 1.0:
        y = 2.0 - y
        sign = -1.0
    x = -_lower_normal_quantile_approx(0.5 * y) / _SQRT2
    for _ in range(2):
        dens = math.exp(-x * x)
        if dens == 0.0:
            break
        x += (math.erfc(x) - y) / (2.0 / math.sqrt(math.pi) * dens)
    return sign * x


@numba.njit(cache=True)
def _erfcinv_array(y, out):
    for i in range(y.size):
        out[i] = _erfcinv_scalar(y[i])


def erfcinv(y):
    """Inverse of ``math.erfc`` on ``(0, 2)``; scalar or array input."""
    arr = np.asarray(y, dtype=np.float64)
    if arr.ndim == 0:
        return float(_erfcinv_scalar(float(arr)))
    out = np.empty(arr.size)
    _erfcinv_array(np.ascontiguousarray(arr).ravel(), out)
    return out.reshape(arr.shape)


# --------------------------------------------------------------------------
# tail probabilities

def _poisson_log_pmf(k: int, lam: float) -> float:
    return k * math.log(lam) - lam - math.lgamma(k + 1.0)


def _poisson_scan_cap(lam: float) -> int:
    return int(math.ceil(lam + 40.0 * math.sqrt(lam) + 50.0))


def _poisson_tail(k: int, lam: float) -> float:
    """P(X >= k) for integer k, summing whichever side is the small one."""
    if k <= 0:
        return 1.0
    if k <= lam:
        return 1.0 - math.fsum(math.exp(_poisson_log_pmf(j, lam)) for j in range(k))
    terms = []
    j = k
    while True:
        t = math.exp(_poisson_log_pmf(j, lam))
        terms.append(t)
        if t < 1e-300 or (j > lam + 1 and t < 1e-20 * terms[0]):
            break
        j += 1
    return math.fsum(terms)


def tail_probability(spec: DistributionSpec, r: float) -> float:
    """Exact upper tail ``P(X >= r)``."""
    kind, par = spec.kind, spec.params
    if math.isnan(r):
        raise DistributionError("r must not be NaN")
    if kind is Kind.EXP:
        return 1.0 if r <= 0 else math.exp(-par[0] * r)
    if kind is Kind.GUMBEL:
        z = (r - par[0]) / par[1]
        return -math.expm1(-math.exp(-z))
    if kind is Kind.LAPLACE:
        z = (r - par[0]) / par[1]
        return 0.5 * math.exp(-z) if z >= 0 else 1.0 - 0.5 * math.exp(z)
    if kind is Kind.NORMAL:
        return 0.5 * math.erfc(r / _SQRT2)
    if kind is Kind.UNIFORM01:
        return min(1.0, max(0.0, 1.0 - r))
    if kind is Kind.POISSON:
        if r == math.inf:
            return 0.0
        return _poisson_tail(math.ceil(r), par[0])
    raise AssertionError(kind)


# --------------------------------------------------------------------------
# tail quantiles

@dataclass(frozen=True)
class QuantileValue:
    p: float
    value: float


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DistributionError(f"probability must lie in (0, 1), got {p!r}")
    return p


def _poisson_quantile(p: float, lam: float) -> float:
    cap = _poisson_scan_cap(lam)
    for k in range(1, cap + 1):
        if _poisson_tail(k, lam) <= p:
            return float(k)
    raise DistributionError(
        f"poisson({lam:g}) quantile for p={p:g} lies beyond scan cap {cap}"
    )


def _continuous_quantile(kind: Kind, par: tuple[float, ...], p: float) -> float:
    if kind is Kind.EXP:
        return -math.log(p) / par[0]
    if kind is Kind.GUMBEL:
        return par[0] - par[1] * math.log(-math.log1p(-p))
    if kind is Kind.LAPLACE:
        if p < 0.5:
            return par[0] - par[1] * math.log(2.0 * p)
        return par[0] + par[1] * math.log(2.0 * (1.0 - p))
    if kind is Kind.NORMAL:
        return _SQRT2 * float(_erfcinv_scalar(2.0 * p))
    if kind is Kind.UNIFORM01:
        return 1.0 - p
    raise AssertionError(kind)


def tail_quantile(spec: DistributionSpec, p: float) -> QuantileValue:
    """Tail quantile ``g(p)``.

    Continuous laws use closed forms (the normal one through :func:`erfcinv`).
    Poisson returns the smallest integer ``k`` with ``P(X >= k) <= p``.
    """
    p = _check_p(p)
    if spec.kind is Kind.POISSON:
        return QuantileValue(p, _poisson_quantile(p, spec.params[0]))
    return QuantileValue(p, _continuous_quantile(spec.kind, spec.params, p))


def asymptotic_tail_quantile(spec: DistributionSpec, p: float) -> float:
    """Leading-order tail quantile; differs from :func:`tail_quantile` only for
    Poisson, where it is ``log(1/p) / log log(1/p)`` (independent of lambda)."""
    p = _check_p(p)
    if spec.kind is not Kind.POISSON:
        return tail_quantile(spec, p).value
    if not p < math.exp(-math.e):
        raise DistributionError(
            f"poisson asymptotic quantile needs p < exp(-e) ~ {math.exp(-math.e):.4f} "
            f"so that log log(1/p) > 1; got p={p!r}"
        )
    log_inv = -math.log(p)
    return log_inv / math.log(log_inv)


# --------------------------------------------------------------------------
# sampling

class RandomStream:
    """Deterministic uniform source keyed by ``(seed, replicate_index)``.

    The pair is hashed by :class:`numpy.random.SeedSequence` into a PCG64
    state, so distinct replicate indices give independent streams.
    """

    def __init__(self, seed: int, replicate_index: int = 0):
        if seed < 0 or seed >= 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if replicate_index < 0:
            raise ValueError("replicate_index must be non-negative")
        self.seed = int(seed)
        self.replicate_index = int(replicate_index)
        self._gen = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence([self.seed, self.replicate_index]))
        )

    def uniform(self, size=None):
        """Uniforms on the open interval (0, 1), midpoints of a 2**-53 grid."""
        k = self._gen.integers(0, 2**53, size=size, dtype=np.int64)
        return (k + 0.5) * 2.0**-53

    def random(self, size=None):
        """Uniforms on [0, 1)."""
        return self._gen.random(size)


@numba.njit(cache=True)
def _normal_from_uniform(u, out):
    for i in range(u.size):
        out[i] = _SQRT2 * _erfcinv_scalar(2.0 * u[i])


def _poisson_table_inverse(u: np.ndarray, lam: float) -> np.ndarray:
    # sequential search, vectorised: first k with CDF(k) > u
    cap = _poisson_scan_cap(lam)
    pmf = np.array([math.exp(_poisson_log_pmf(k, lam)) for k in range(cap + 1)])
    cdf = np.cumsum(pmf)
    k = np.searchsorted(cdf, u, side="right")
    return np.minimum(k, cap).astype(np.float64)


def _poisson_ptrs(stream: RandomStream, lam: float, size: int) -> np.ndarray:
    # Hormann's transformed rejection with squeeze (PTRS), batch form
    slam = math.sqrt(lam)
    loglam = math.log(lam)
    b = 0.931 + 2.53 * slam
    a = -0.059 + 0.02483 * b
    inv_alpha = 1.1239 + 1.1328 / (b - 3.4)
    v_r = 0.9277 - 3.6224 / (b - 2.0)
    out = np.empty(size)
    pending = np.arange(size)
    while pending.size:
        m = pending.size
        u = stream.uniform(m) - 0.5
        v = stream.uniform(m)
        us = 0.5 - np.abs(u)
        k = np.floor((2.0 * a / us + b) * u + lam + 0.43)
        quick = (us >= 0.07) & (v <= v_r)
        ok = quick.copy()
        rest = ~quick & (k >= 0) & ~((us < 0.013) & (v > us))
        if rest.any():
            kr = k[rest]
            lhs = np.log(v[rest]) + np.log(inv_alpha) - np.log(a / us[rest] ** 2 + b)
            log_fact = np.array([math.lgamma(x + 1.0) for x in kr])
            rhs = -lam + kr * loglam - log_fact
            ok[rest] = lhs <= rhs
        out[pending[ok]] = k[ok]
        pending = pending[~ok]
    return out


def sample_array(spec: DistributionSpec, stream: RandomStream, size) -> np.ndarray:
    """Draw an array of i.i.d. variates of ``spec`` from ``stream``."""
    shape = (size,) if isinstance(size, (int, np.integer)) else tuple(size)
    count = int(np.prod(shape))
    kind, par = spec.kind, spec.params
    if kind is Kind.POISSON and par[0] > 30:
        return _poisson_ptrs(stream, par[0], count).reshape(shape)
    u = stream.uniform(count)
    if kind is Kind.EXP:
        x = -np.log(u) / par[0]
    elif kind is Kind.GUMBEL:
        x = par[0] - par[1] * np.log(-np.log1p(-u))
    elif kind is Kind.LAPLACE:
        low = u < 0.5
        x = np.empty(count)
        x[low] = par[0] - par[1] * np.log(2.0 * u[low])
        x[~low] = par[0] + par[1] * np.log(2.0 * (1.0 - u[~low]))
    elif kind is Kind.NORMAL:
        x = np.empty(count)
        _normal_from_uniform(u, x)
    elif kind is Kind.UNIFORM01:
        x = 1.0 - u
    elif kind is Kind.POISSON:
        x = _poisson_table_inverse(u, par[0])
    else:
        raise AssertionError(kind)
    return x.reshape(shape)


def sample(spec: DistributionSpec, stream: RandomStream) -> float:
    """One variate of ``spec``."""
    return float(sample_array(spec, stream, 1)[0])
