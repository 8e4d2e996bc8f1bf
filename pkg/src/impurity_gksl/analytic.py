"""Closed-form qubit coherence in the pure-dephasing limit (Delta = 0).

``lambda_local`` and ``lambda_global`` give the factor Lambda(t) such that
rho^Q_01(t) = Lambda(t) rho^Q_01(0) for the local and global secular
master equations respectively.
"""

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .model import thermal_rates

__all__ = [
    "CrossoverClass",
    "LocalSolutionParams",
    "local_solution_params",
    "lambda_local",
    "lambda_local_modulus_oscillatory",
    "lambda_global",
    "crossover_class",
    "BOUNDARY_TOL",
]

BOUNDARY_TOL = 1e-12


class CrossoverClass(enum.Enum):
    Monotonic = "monotonic"
    Revivals = "revivals"
    Boundary = "boundary"


@dataclass(frozen=True)
class LocalSolutionParams:
    """Coefficients of the two-exponential local solution.

    ``A`` is None exactly at alpha = 0 (g = 1 with zero rate imbalance),
    where the two exponentials merge.
    """

    A: Optional[complex]
    alpha: complex
    g: float
    gamma: float
    delta_p_bar: float
    delta_p0: float
    epsilon: float


def local_solution_params(p):
    gm, gp = thermal_rates(p)
    gamma = gm + gp
    g = 2.0 * p.v / gamma
    dpb = (gm - gp) / gamma
    # numpy's complex sqrt is the principal branch (Re >= 0)
    alpha = complex(np.sqrt(complex(1.0 - g * g, 2.0 * g * dpb)))
    A = None if alpha == 0 else ((1.0 + alpha) + 1j * g * p.delta_p0) / (2.0 * alpha)
    return LocalSolutionParams(A, alpha, g, gamma, dpb, p.delta_p0, p.epsilon)


def lambda_local(t, p):
    """Lambda_L(t) = e^{i eps t} [A e^{-gamma(1-alpha)t/2} + (1-A) e^{-gamma(1+alpha)t/2}].

    Evaluated in the equivalent form
    e^{i eps t} e^{-gamma t/2} [cosh(x) + (1 + i g dp0) (gamma t/2) sinh(x)/x],
    x = gamma alpha t / 2, which stays finite through alpha = 0.
    """
    s = local_solution_params(p)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be >= 0")
    half = 0.5 * s.gamma * t
    x = s.alpha * half
    slow = np.exp(-half * (1.0 - s.alpha))
    fast = np.exp(-half * (1.0 + s.alpha))
    cosh_part = 0.5 * (slow + fast)
    small = np.abs(x) < 1e-3
    safe_x = np.where(small, 1.0, x)
    sinhc_part = np.where(
        small,
        np.exp(-half) * (1.0 + x * x / 6.0 + x**4 / 120.0),
        0.5 * (slow - fast) / safe_x,
    )
    out = np.exp(1j * s.epsilon * t) * (cosh_part + (1.0 + 1j * s.g * s.delta_p0) * half * sinhc_part)
    return out if out.ndim else complex(out)


def lambda_local_modulus_oscillatory(t, g, gamma):
    """[cos(gamma d t/2) + sin(gamma d t/2)/d] e^{-gamma t/2}, d = sqrt(g^2 - 1).

    Valid for g > 1 with no rate or initial imbalance. Returned as written,
    so it is negative between its zeros; compare its absolute value.
    """
    if not g > 1:
        raise ValueError(f"oscillatory modulus needs g > 1, got {g}")
    d = np.sqrt(g * g - 1.0)
    t = np.asarray(t, dtype=float)
    phi = 0.5 * gamma * d * t
    out = (np.cos(phi) + np.sin(phi) / d) * np.exp(-0.5 * gamma * t)
    return out if out.ndim else float(out)


def lambda_global(t, p):
    """Lambda_G(t) = e^{i eps t} [p0 e^{ivt} e^{-gamma_+ t} + p1 e^{-ivt} e^{-gamma_- t}].

    p0, p1 are the initial impurity populations, so Lambda_G(0) = 1.
    """
    gm, gp = thermal_rates(p)
    p0, p1 = p.impurity_populations0
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be >= 0")
    out = np.exp(1j * p.epsilon * t) * (
        p0 * np.exp((1j * p.v - gp) * t) + p1 * np.exp((-1j * p.v - gm) * t)
    )
    return out if out.ndim else complex(out)


def crossover_class(g):
    if g < 0:
        raise ValueError(f"g must be >= 0, got {g}")
    if abs(g - 1.0) <= BOUNDARY_TOL:
        return CrossoverClass.Boundary
    return CrossoverClass.Monotonic if g < 1 else CrossoverClass.Revivals
