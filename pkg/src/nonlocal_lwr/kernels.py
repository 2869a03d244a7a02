"""Look-ahead kernel families, normalization, decay bounds, sampling.

Five families with support [0, d):

* constant:             eta(s) = 1/d
* linear:               eta(s) = (2/d) (1 - s/d)
* exponential:          eta(s) = exp(-s/d) / (d (1 - e^-1))
* shifted_exponential:  eta(s) = (exp(-s/d) - e^-1) / (d (1 - 2 e^-1))
* smooth_exponential:   eta(s) = K exp(-1/(s-d)^2), K by adaptive quadrature

All satisfy integral_0^d eta = 1. Every family except the constant obeys
the decay bound eta'(s) <= -beta * eta(s) on (0, d) for a positive beta.

Discrete kernels are sampled at left endpoints i*dx and renormalized by a
single scalar so the discrete mass is exactly one; without that, a
constant density would not be a fixed point of the discrete nonlocal
operator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, QuadratureError, UnsupportedError

CONSTANT = "constant"
LINEAR = "linear"
EXPONENTIAL = "exponential"
SHIFTED_EXPONENTIAL = "shifted_exponential"
SMOOTH_EXPONENTIAL = "smooth_exponential"

FAMILIES = (CONSTANT, LINEAR, EXPONENTIAL, SHIFTED_EXPONENTIAL,
            SMOOTH_EXPONENTIAL)


@lru_cache(maxsize=None)
def _smooth_mass(d: float) -> float:
    """integral_0^d exp(-1/(s-d)^2) ds, by adaptive quadrature.

    With u = d - s the integrand is exp(-1/u^2), flat and essentially
    zero near u = 0; adaptive quadrature is required to keep digits.
    """
    def integrand(u):
        t = u * u
        return math.exp(-1.0 / t) if t > 0 else 0.0

    val, err = quad(integrand, 0.0, d, epsabs=0.0, epsrel=1e-12, limit=200)
    if not math.isfinite(val) or val <= 0 or err > 1e-8 * val:
        raise QuadratureError(
            f"smooth-kernel normalization failed for d={d} "
            f"(value={val}, err={err})")
    return val


def normalization_constant(family: str, d: float) -> float:
    """Constant K (1/ft) that makes the family integrate to one on [0, d]."""
    if d <= 0:
        raise DomainError(f"require d > 0, got {d}")
    if family == CONSTANT:
        return 1.0 / d
    if family == LINEAR:
        return 2.0 / d
    if family == EXPONENTIAL:
        return 1.0 / (d * (1.0 - math.exp(-1.0)))
    if family == SHIFTED_EXPONENTIAL:
        return 1.0 / (d * (1.0 - 2.0 * math.exp(-1.0)))
    if family == SMOOTH_EXPONENTIAL:
        return 1.0 / _smooth_mass(d)
    raise DomainError(f"unknown kernel family {family!r}")


@dataclass(frozen=True)
class Kernel:
    """A kernel family instance with derived normalization and decay bound."""

    family: str
    d: float
    K: float = field(init=False)
    beta: float | None = field(init=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown kernel family {self.family!r}")
        if self.d <= 0:
            raise DomainError(f"require d > 0, got {self.d}")
        object.__setattr__(self, "K",
                           normalization_constant(self.family, self.d))
        object.__setattr__(self, "beta", _beta_closed_form(self))

    def __call__(self, s):
        return evaluate(self, s)


def make_kernel(family: str, d: float) -> Kernel:
    return Kernel(family, float(d))


def evaluate(kernel: Kernel, s):
    """Kernel weight eta(s); zero for s >= d.

    Accepts scalars or arrays; raises DomainError for s < 0.
    """
    scalar = np.isscalar(s) or np.ndim(s) == 0
    arr = np.atleast_1d(np.asarray(s, dtype=float))
    if np.any(arr < 0):
        raise DomainError("kernel offset s must be >= 0")
    d, K = kernel.d, kernel.K
    inside = arr < d
    out = np.zeros_like(arr)
    fam = kernel.family
    if fam == CONSTANT:
        out[inside] = 1.0 / d
    elif fam == LINEAR:
        out[inside] = (2.0 / d) * (1.0 - arr[inside] / d)
    elif fam == EXPONENTIAL:
        out[inside] = np.exp(-arr[inside] / d) / (d * (1.0 - math.exp(-1.0)))
    elif fam == SHIFTED_EXPONENTIAL:
        out[inside] = ((np.exp(-arr[inside] / d) - math.exp(-1.0))
                       / (d * (1.0 - 2.0 * math.exp(-1.0))))
    else:  # smooth exponential
        u = arr[inside] - d
        with np.errstate(divide="ignore"):
            out[inside] = K * np.exp(-1.0 / (u * u))
    return float(out[0]) if scalar else out


def _beta_closed_form(kernel: Kernel) -> float | None:
    """inf over (0, d) of -eta'(s)/eta(s); None for the constant kernel.

    Closed forms (the infimum sits at s -> 0 for every family):
        linear               1/d
        exponential          1/d
        shifted exponential  1/(d (1 - e^-1))
        smooth exponential   2/d^3
    """
    d = kernel.d
    fam = kernel.family
    if fam == CONSTANT:
        return None
    if fam in (LINEAR, EXPONENTIAL):
        return 1.0 / d
    if fam == SHIFTED_EXPONENTIAL:
        return 1.0 / (d * (1.0 - math.exp(-1.0)))
    return 2.0 / d ** 3


def beta_bound(kernel: Kernel) -> float:
    """Decay rate beta with eta'(s) <= -beta * eta(s) on (0, d).

    Raises UnsupportedError for the constant family (eta' = 0, so no
    positive beta exists).
    """
    if kernel.beta is None:
        raise UnsupportedError("constant kernel has no decay bound")
    return kernel.beta


def gamma_max(v_f: float, vprime_sup: float, beta: float,
              eta0: float) -> float:
    """Admissible delay bound min{1/(3(v_f + ||v'||)), beta/(eta(0) ||v'||)}.

    Advisory: callers compare the configured gamma against it and warn,
    they do not abort.
    """
    if min(v_f, vprime_sup, beta, eta0) <= 0:
        raise DomainError("gamma_max arguments must all be positive")
    return min(1.0 / (3.0 * (v_f + vprime_sup)),
               beta / (eta0 * vprime_sup))


@dataclass(frozen=True)
class DiscreteKernel:
    """Left-endpoint samples of a kernel, renormalized to unit mass.

    ``weights`` are densities (1/ft) with sum(weights) * dx = 1;
    ``probs`` are the corresponding cell masses weights * dx, normalized
    so they sum to one (probs[0] == 1.0 exactly when n_d == 1, which
    makes the single-cell kernel reduce the nonlocal operator to the
    local one bit-for-bit).
    """

    weights: np.ndarray
    dx: float

    @property
    def n_d(self) -> int:
        return len(self.weights)

    @property
    def probs(self) -> np.ndarray:
        return self._probs

    def __post_init__(self):
        object.__setattr__(self, "_probs", self.weights * self.dx)


def sample(kernel: Kernel, dx: float) -> DiscreteKernel:
    """Sample a kernel at offsets i*dx, i = 0..n_d-1, n_d = round(d/dx).

    Raises DomainError if dx > d (n_d would vanish; variable-length
    handling in the boundary module covers that regime).
    """
    if dx <= 0:
        raise DomainError(f"require dx > 0, got {dx}")
    if dx > kernel.d:
        raise DomainError(f"dx={dx} exceeds kernel length d={kernel.d}")
    n_d = max(int(round(kernel.d / dx)), 1)
    raw = evaluate(kernel, np.arange(n_d) * dx)
    total = float(np.sum(raw))
    if total <= 0:
        raise DomainError("kernel samples sum to zero; support under-resolved")
    probs = raw / total
    dk = DiscreteKernel(weights=probs / dx, dx=float(dx))
    # exact unit mass for the reduction chain (n_d == 1 -> probs == [1.0])
    object.__setattr__(dk, "_probs", probs)
    return dk
