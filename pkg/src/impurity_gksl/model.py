"""Physical parameters, Hamiltonian and initial states of the qubit-impurity pair.

Basis convention (shared by every module): product basis ``|q> (x) |i>``
ordered ``|00>, |01>, |10>, |11>`` with the qubit first. ``sigma_z|0> = +|0>``
and ``tau_z|0> = +|0>``, so with ``epsilon_I > 0`` the impurity ground state
is ``|0>`` and ``tau_- = |0><1|`` lowers into it.

Units: hbar = k_B = 1. Energies and rates share one arbitrary unit.
"""

import math
from dataclasses import asdict, dataclass, replace

import numpy as np

from .densemath import kron

__all__ = [
    "INFINITE_TEMPERATURE",
    "ParameterError",
    "SystemParams",
    "SIGMA_X",
    "SIGMA_Z",
    "SIGMA_PLUS",
    "SIGMA_MINUS",
    "I2",
    "build_hamiltonian",
    "thermal_rates",
    "initial_state",
    "figure_params",
]

#: ``beta`` value meaning infinite temperature (gamma_+ == gamma_- exactly).
INFINITE_TEMPERATURE = 0.0

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
# |0><1| lowers into the tau_z = +1 state, which is the impurity ground state
SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_PLUS = SIGMA_MINUS.T.copy()


class ParameterError(ValueError):
    """Raised for physically invalid parameters or configuration."""


@dataclass(frozen=True)
class SystemParams:
    """Model parameters.

    ``beta`` is the inverse temperature; ``INFINITE_TEMPERATURE`` (0.0) is the
    infinite-temperature point. ``gamma_minus`` is the impurity emission rate,
    taken as an input. ``delta_p0`` is the initial impurity population
    imbalance ``rho^I_00(0) - rho^I_11(0)``.
    """

    epsilon: float = 20.0
    delta: float = 0.0
    v: float = 1.0
    epsilon_I: float = 20.0
    beta: float = INFINITE_TEMPERATURE
    gamma_minus: float = 0.5
    delta_p0: float = 0.0

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ParameterError(f"{name} must be a finite number, got {value!r}")
        if self.gamma_minus <= 0:
            raise ParameterError(f"gamma_minus must be > 0, got {self.gamma_minus}")
        if self.epsilon_I <= 0:
            raise ParameterError(f"epsilon_I must be > 0, got {self.epsilon_I}")
        if not -1.0 <= self.delta_p0 <= 1.0:
            raise ParameterError(f"delta_p0 must lie in [-1, 1], got {self.delta_p0}")

    def replace(self, **changes):
        return replace(self, **changes)

    def as_dict(self):
        return asdict(self)

    @property
    def omega(self):
        """Bare qubit splitting sqrt(eps^2 + Delta^2)."""
        return math.hypot(self.epsilon, self.delta)

    def omega_tau(self, tau):
        """Qubit splitting conditioned on the impurity state ``tau`` in {0, 1}."""
        if tau not in (0, 1):
            raise ValueError("tau must be 0 or 1")
        return math.hypot(self.epsilon + self.v * (1 - 2 * tau), self.delta)

    @property
    def splitting_gap(self):
        """|Omega_0 - Omega_1|, computed without cancellation."""
        o0, o1 = self.omega_tau(0), self.omega_tau(1)
        if o0 + o1 == 0.0:
            return 0.0
        # Omega_0^2 - Omega_1^2 = 4 eps v
        return abs(4.0 * self.epsilon * self.v) / (o0 + o1)

    @property
    def gamma_plus(self):
        return thermal_rates(self)[1]

    @property
    def gamma(self):
        gm, gp = thermal_rates(self)
        return gm + gp

    @property
    def g(self):
        return 2.0 * self.v / self.gamma

    @property
    def delta_p_bar(self):
        gm, gp = thermal_rates(self)
        return (gm - gp) / (gm + gp)

    @property
    def impurity_populations0(self):
        return (0.5 * (1.0 + self.delta_p0), 0.5 * (1.0 - self.delta_p0))


def thermal_rates(p):
    """Return ``(gamma_minus, gamma_plus)`` obeying detailed balance.

    gamma_+ = exp(-beta * epsilon_I) * gamma_-; at ``INFINITE_TEMPERATURE``
    the two are returned identical.
    """
    if p.beta == INFINITE_TEMPERATURE:
        return p.gamma_minus, p.gamma_minus
    return p.gamma_minus, math.exp(-p.beta * p.epsilon_I) * p.gamma_minus


def build_hamiltonian(p):
    """4x4 qubit-impurity Hamiltonian.

    H = -(eps/2) sz.I - (Delta/2) sx.I - (v/2) sz.tz - (eps_I/2) I.tz
    """
    return (
        -0.5 * p.epsilon * kron(SIGMA_Z, I2)
        - 0.5 * p.delta * kron(SIGMA_X, I2)
        - 0.5 * p.v * kron(SIGMA_Z, SIGMA_Z)
        - 0.5 * p.epsilon_I * kron(I2, SIGMA_Z)
    )


def initial_state(p, qubit_coherence0=0.5, qubit_pop0=0.5):
    """Product state rho^Q(0) (x) diag(p_0, p_1) of the impurity.

    ``qubit_pop0`` is rho^Q_00(0) and ``qubit_coherence0`` is rho^Q_01(0).
    The impurity populations follow from ``p.delta_p0``.
    """
    pop = float(qubit_pop0)
    coh = complex(qubit_coherence0)
    if not 0.0 <= pop <= 1.0:
        raise ParameterError(f"qubit population must be in [0, 1], got {pop}")
    if abs(coh) ** 2 > pop * (1.0 - pop) + 1e-14:
        raise ParameterError(
            f"qubit block is not positive: |coherence|^2={abs(coh) ** 2:.6g} "
            f"> pop(1-pop)={pop * (1 - pop):.6g}"
        )
    if not -1.0 <= p.delta_p0 <= 1.0:
        raise ParameterError(f"delta_p0 must lie in [-1, 1], got {p.delta_p0}")
    rho_q = np.array([[pop, coh], [coh.conjugate(), 1.0 - pop]], dtype=complex)
    rho_i = np.diag(p.impurity_populations0).astype(complex)
    return kron(rho_q, rho_i)


def figure_params(g, gamma=1.0, **overrides):
    """Crossover-figure parameters: eps = eps_I = 20, Delta = 0, infinite T.

    ``v`` is chosen so that ``2 v / gamma == g`` with ``gamma_- = gamma_+ =
    gamma / 2``.
    """
    base = dict(
        epsilon=20.0,
        delta=0.0,
        epsilon_I=20.0,
        beta=INFINITE_TEMPERATURE,
        gamma_minus=0.5 * gamma,
        v=0.5 * g * gamma,
        delta_p0=0.0,
    )
    base.update(overrides)
    return SystemParams(**base)
