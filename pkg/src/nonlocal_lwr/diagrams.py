"""Fundamental diagrams: speed-density and flux-density laws.

Two families are supported on the normalized density range [0, 1]:

* Greenshields: v(rho) = v_f * (1 - rho), linear speed-density.
* Underwood:    v(rho) = v_f * exp(-rho / rho_c), exponential decay.

Underwood has no finite jam density; the normalized domain is still
capped at 1 and the non-vanishing flux at rho = 1 is a property of the
law, not forced to zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

GREENSHIELDS = "greenshields"
UNDERWOOD = "underwood"


@dataclass(frozen=True)
class FundamentalDiagram:
    family: str
    v_f: float
    rho_c: float = 0.5  # Underwood only

    def __post_init__(self):
        if self.family not in (GREENSHIELDS, UNDERWOOD):
            raise DomainError(f"unknown diagram family {self.family!r}")
        if self.v_f <= 0:
            raise DomainError(f"require v_f > 0, got {self.v_f}")
        if self.family == UNDERWOOD and not (0 < self.rho_c <= 1):
            raise DomainError(f"require rho_c in (0, 1], got {self.rho_c}")


def greenshields(v_f: float) -> FundamentalDiagram:
    return FundamentalDiagram(GREENSHIELDS, float(v_f))


def underwood(v_f: float, rho_c: float) -> FundamentalDiagram:
    return FundamentalDiagram(UNDERWOOD, float(v_f), float(rho_c))


def _check_rho(rho):
    arr = np.asarray(rho, dtype=float)
    if np.any(arr < 0) or np.any(arr > 1) or not np.all(np.isfinite(arr)):
        raise DomainError("density outside [0, 1]")
    return arr


def velocity(fd: FundamentalDiagram, rho):
    """Speed at normalized density rho; always in [0, v_f]."""
    arr = _check_rho(rho)
    if fd.family == GREENSHIELDS:
        out = fd.v_f * (1.0 - arr)
    else:
        out = fd.v_f * np.exp(-arr / fd.rho_c)
    return float(out) if np.ndim(rho) == 0 else out


def flux(fd: FundamentalDiagram, rho):
    """Flow f(rho) = rho * v(rho); f(0) = 0 for all families."""
    arr = _check_rho(rho)
    out = arr * velocity(fd, arr)
    return float(out) if np.ndim(rho) == 0 else out


def char_speed(fd: FundamentalDiagram, rho):
    """Characteristic speed f'(rho)."""
    arr = _check_rho(rho)
    if fd.family == GREENSHIELDS:
        out = fd.v_f * (1.0 - 2.0 * arr)
    else:
        out = fd.v_f * np.exp(-arr / fd.rho_c) * (1.0 - arr / fd.rho_c)
    return float(out) if np.ndim(rho) == 0 else out


def vprime_sup(fd: FundamentalDiagram) -> float:
    """sup over rho in [0, 1] of |v'(rho)|."""
    if fd.family == GREENSHIELDS:
        return fd.v_f
    # |v'| = (v_f / rho_c) exp(-rho/rho_c), maximized at rho = 0
    return fd.v_f / fd.rho_c


def char_speed_sup(fd: FundamentalDiagram) -> float:
    """Uniform bound on |f'(rho)| over [0, 1], used for CFL control."""
    if fd.family == GREENSHIELDS:
        return fd.v_f
    rho = np.linspace(0.0, 1.0, 2001)
    return float(np.max(np.abs(char_speed(fd, rho))))
