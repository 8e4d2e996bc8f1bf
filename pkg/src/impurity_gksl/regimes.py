"""Where in the (v, gamma) plane each secular scheme yields a GKSL equation.

Local scheme: needs weak coupling, v <= eta * min(Omega, eps_I).
Global scheme: needs a resolved spectrum, |Omega_0 - Omega_1| > gamma.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .model import ParameterError

__all__ = [
    "RegimeLabel",
    "DiagramSpec",
    "RegimeDiagram",
    "DEFAULT_ETA",
    "local_valid",
    "global_valid",
    "classify",
    "regime_diagram",
]

DEFAULT_ETA = 0.1


class RegimeLabel(enum.Enum):
    LocalOnly = "local_only"
    GlobalOnly = "global_only"
    Both = "both"
    Neither = "neither"

    @classmethod
    def from_bits(cls, local, global_):
        if local and global_:
            return cls.Both
        if local:
            return cls.LocalOnly
        if global_:
            return cls.GlobalOnly
        return cls.Neither


def local_valid(v, p, eta=DEFAULT_ETA):
    return v <= eta * min(p.omega, p.epsilon_I)


def global_valid(v, gamma, p):
    return p.replace(v=v).splitting_gap > gamma


def classify(v, gamma, p, eta=DEFAULT_ETA):
    """Regime label at coupling ``v`` and total rate ``gamma``.

    Only epsilon, delta and epsilon_I are read from ``p``.
    """
    if v < 0:
        raise ValueError(f"v must be >= 0, got {v}")
    if gamma <= 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    return RegimeLabel.from_bits(local_valid(v, p, eta), global_valid(v, gamma, p))


def _check_range(name, rng):
    lo, hi, steps = rng
    if int(steps) != steps or steps < 1:
        raise ParameterError(f"{name}: steps must be a positive integer, got {steps}")
    if not (np.isfinite(lo) and np.isfinite(hi)):
        raise ParameterError(f"{name}: bounds must be finite")
    if hi < lo:
        raise ParameterError(f"{name}: inverted range ({lo} > {hi})")
    if steps == 1 and hi != lo:
        raise ParameterError(f"{name}: a single step needs min == max")
    if steps > 1 and hi == lo:
        raise ParameterError(f"{name}: more than one step needs min < max")


@dataclass(frozen=True)
class DiagramSpec:
    """Grid ranges as ``(min, max, steps)``; ``fixed`` supplies eps, Delta, eps_I."""

    v_range: tuple
    gamma_range: tuple
    fixed: object
    eta: float = DEFAULT_ETA

    def __post_init__(self):
        _check_range("v_range", self.v_range)
        _check_range("gamma_range", self.gamma_range)
        if self.v_range[0] < 0:
            raise ParameterError("v_range must be non-negative")
        if self.gamma_range[0] <= 0:
            raise ParameterError("gamma_range must be positive")
        if not self.eta > 0:
            raise ParameterError(f"eta must be > 0, got {self.eta}")

    def axes(self):
        v = np.linspace(self.v_range[0], self.v_range[1], int(self.v_range[2]))
        gamma = np.linspace(self.gamma_range[0], self.gamma_range[1], int(self.gamma_range[2]))
        return v, gamma


@dataclass
class RegimeDiagram:
    v: np.ndarray
    gamma: np.ndarray
    labels: list  # labels[i][j] at (v[i], gamma[j])
    eta: float

    def rows(self):
        """Row-major (v, gamma, label) triples, v outermost."""
        for i, v in enumerate(self.v):
            for j, gamma in enumerate(self.gamma):
                yield float(v), float(gamma), self.labels[i][j]

    def present(self):
        return {lab for row in self.labels for lab in row}


def regime_diagram(spec):
    v_axis, gamma_axis = spec.axes()
    labels = [[classify(v, gm, spec.fixed, spec.eta) for gm in gamma_axis] for v in v_axis]
    return RegimeDiagram(v_axis, gamma_axis, labels, spec.eta)
