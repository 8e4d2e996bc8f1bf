"""Jump operators for the local and global secular master equations.

Local operators act on the impurity alone. Global operators connect
eigenstates of the full Hamiltonian; they are given in closed form through
the mixing angles, and can also be recovered numerically with
:func:`secular_decompose`, which splits any coupling operator into its
Bohr-frequency (eigenoperator) components.
"""

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .densemath import dagger, frobenius, hermitian_eigensystem, kron
from .model import I2, SIGMA_MINUS, SIGMA_PLUS, build_hamiltonian, thermal_rates

__all__ = [
    "JumpLabel",
    "JumpOperator",
    "MixingAngles",
    "DegenerateAngle",
    "AmbiguousClustering",
    "local_jump_operators",
    "mixing_angles",
    "conditioned_qubit_eigenstates",
    "global_jump_operators",
    "secular_decompose",
    "thermal_rate_map",
    "default_tol_bohr",
    "phase_aligned_distance",
    "secular_jump_operators",
]


class DegenerateAngle(ValueError):
    """Mixing angle undefined: Delta = 0 and eps + v(1 - 2 tau) = 0."""


class AmbiguousClustering(ValueError):
    """Two Bohr frequencies are neither clearly equal nor clearly distinct."""


class JumpLabel(enum.Enum):
    LocalEmission = "local_emission"
    LocalAbsorption = "local_absorption"
    GlobalDecay1 = "global_decay_1"
    GlobalDecay2 = "global_decay_2"
    GlobalAbsorb1 = "global_absorb_1"
    GlobalAbsorb2 = "global_absorb_2"
    DerivedSecular = "derived_secular"


_NEEDS_BOHR = {
    JumpLabel.GlobalDecay1,
    JumpLabel.GlobalDecay2,
    JumpLabel.GlobalAbsorb1,
    JumpLabel.GlobalAbsorb2,
    JumpLabel.DerivedSecular,
}


@dataclass(frozen=True)
class JumpOperator:
    matrix: np.ndarray
    rate: float
    label: JumpLabel
    bohr_frequency: Optional[float] = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        if m.shape != (4, 4):
            raise ValueError(f"jump operator must be 4x4, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("jump operator has non-finite entries")
        # zero-temperature absorption legitimately has rate 0
        if not (math.isfinite(self.rate) and self.rate >= 0):
            raise ValueError(f"rate must be finite and >= 0, got {self.rate}")
        if self.label in _NEEDS_BOHR and self.bohr_frequency is None:
            raise ValueError(f"{self.label.name} operators need a bohr_frequency")


@dataclass(frozen=True)
class MixingAngles:
    theta0: float
    theta1: float
    c: float


def local_jump_operators(p):
    """I (x) tau_- with rate gamma_-, and I (x) tau_+ with rate gamma_+."""
    gm, gp = thermal_rates(p)
    return [
        JumpOperator(kron(I2, SIGMA_MINUS), gm, JumpLabel.LocalEmission),
        JumpOperator(kron(I2, SIGMA_PLUS), gp, JumpLabel.LocalAbsorption),
    ]


def mixing_angles(p):
    thetas = []
    for tau in (0, 1):
        bias = p.epsilon + p.v * (1 - 2 * tau)
        if p.delta == 0.0 and bias == 0.0:
            raise DegenerateAngle(f"mixing angle undefined for tau={tau}: Delta = 0 and eps + v(1-2tau) = 0")
        thetas.append(math.atan2(p.delta, bias))
    theta0, theta1 = thetas
    return MixingAngles(theta0, theta1, math.cos(0.5 * (theta0 - theta1)))


def _fix_phase(vec):
    k = int(np.argmax(np.abs(vec)))
    return vec * (abs(vec[k]) / vec[k])


def conditioned_qubit_eigenstates(p):
    """Qubit eigenvectors of -(1/2)(eps + v(1-2tau)) sz - (1/2) Delta sx.

    Returns ``{tau: (plus, minus)}``; ``plus`` has energy -Omega_tau/2 and
    reduces to |0> for Delta = 0 and positive bias. Phase: largest-magnitude
    component real positive.
    """
    ang = mixing_angles(p)
    out = {}
    for tau, theta in ((0, ang.theta0), (1, ang.theta1)):
        c, s = math.cos(0.5 * theta), math.sin(0.5 * theta)
        plus = np.array([c, s], dtype=complex)
        minus = np.array([-s, c], dtype=complex)
        out[tau] = (_fix_phase(plus), _fix_phase(minus))
    return out


def _level_energy(p, branch, tau):
    # branch +1 -> |+_tau>, energy -Omega_tau/2; impurity energy -(eps_I/2)(1-2tau)
    return -0.5 * branch * p.omega_tau(tau) - 0.5 * p.epsilon_I * (1 - 2 * tau)


def global_jump_operators(p):
    """Closed-form global operators c|+-_0,0><+-_1,1| and their adjoints.

    Decay operators carry rate gamma_- and the positive Bohr frequency of the
    transition |+-_1,1> -> |+-_0,0>; absorption operators are their adjoints
    with rate gamma_+ and the opposite frequency. A ``RuntimeWarning`` is
    issued when |Omega_0 - Omega_1| <= gamma (non-degeneracy fails).
    """
    ang = mixing_angles(p)
    gm, gp = thermal_rates(p)
    if not p.splitting_gap > gm + gp:
        warnings.warn(
            f"non-degeneracy condition |Omega_0 - Omega_1| > gamma fails "
            f"({p.splitting_gap:.6g} <= {gm + gp:.6g}); global secular operators "
            "are not justified here",
            RuntimeWarning,
            stacklevel=2,
        )
    states = conditioned_qubit_eigenstates(p)
    imp0 = np.array([1, 0], dtype=complex)
    imp1 = np.array([0, 1], dtype=complex)
    ops = []
    labels = (
        (0, +1, JumpLabel.GlobalDecay1, JumpLabel.GlobalAbsorb1),
        (1, -1, JumpLabel.GlobalDecay2, JumpLabel.GlobalAbsorb2),
    )
    decays = []
    for idx, branch, dlabel, alabel in labels:
        ket = np.kron(states[0][idx], imp0)
        bra = np.kron(states[1][idx], imp1)
        mat = ang.c * np.outer(ket, bra.conj())
        omega = _level_energy(p, branch, 1) - _level_energy(p, branch, 0)
        decays.append((mat, omega, dlabel, alabel))
    for mat, omega, dlabel, _ in decays:
        ops.append(JumpOperator(mat, gm, dlabel, omega))
    for mat, omega, _, alabel in decays:
        ops.append(JumpOperator(dagger(mat), gp, alabel, -omega))
    return ops


def default_tol_bohr(p):
    return 1e-9 * max(abs(p.epsilon) + abs(p.delta) + abs(p.v) + abs(p.epsilon_I), 1.0)


def thermal_rate_map(p):
    """Rate lookup for this model: gamma_- for omega > 0, gamma_+ otherwise."""
    gm, gp = thermal_rates(p)

    def rate(omega):
        return gm if omega > 0 else gp

    return rate


def _cluster(values, tol, what):
    """Group sorted-by-value indices into clusters of spread <= tol."""
    order = np.argsort(values, kind="stable")
    clusters = []
    current = [order[0]] if len(order) else []
    for a, b in zip(order[:-1], order[1:]):
        gap = values[b] - values[a]
        if gap <= tol:
            current.append(b)
            continue
        if gap < 10 * tol:
            raise AmbiguousClustering(
                f"{what} {values[a]:.17g} and {values[b]:.17g} differ by {gap:.3g}, "
                f"between tol={tol:.3g} and 10*tol"
            )
        clusters.append(current)
        current = [b]
    if current:
        clusters.append(current)
    return clusters


def secular_decompose(H, coupling, rate_map: Callable[[float], float], tol_bohr):
    """Split ``coupling`` into eigenoperators of ``H``.

    A(omega) = sum over level pairs with E' - E = omega of P(E) A P(E'), so
    that [H, A(omega)] = -omega A(omega) and sum_omega A(omega) = A. Levels
    and Bohr frequencies are both clustered with ``tol_bohr``. Components
    with Frobenius norm below 1e-12 are dropped. Output is sorted by
    descending Bohr frequency.
    """
    if tol_bohr <= 0:
        raise ValueError("tol_bohr must be positive")
    A = np.asarray(coupling, dtype=complex)
    w, V = hermitian_eigensystem(H)
    levels = _cluster(w, tol_bohr, "eigenvalues")
    energies = [float(np.mean(w[c])) for c in levels]
    projectors = [V[:, c] @ V[:, c].conj().T for c in levels]

    pieces, omegas = [], []
    for i, Pi in enumerate(projectors):
        for j, Pj in enumerate(projectors):
            piece = Pi @ A @ Pj
            if frobenius(piece) < 1e-12:
                continue
            pieces.append(piece)
            omegas.append(energies[j] - energies[i])
    if not pieces:
        return []
    omegas = np.array(omegas)
    ops = []
    for members in _cluster(omegas, tol_bohr, "Bohr frequencies"):
        mat = sum(pieces[k] for k in members)
        if frobenius(mat) < 1e-12:
            continue
        omega = float(np.mean(omegas[members]))
        ops.append(JumpOperator(mat, float(rate_map(omega)), JumpLabel.DerivedSecular, omega))
    ops.sort(key=lambda op: -op.bohr_frequency)
    return ops


def secular_jump_operators(p, tol_bohr=None):
    """Full-secular operators of I (x) tau_- and I (x) tau_+ for ``p``."""
    if tol_bohr is None:
        tol_bohr = default_tol_bohr(p)
    H = build_hamiltonian(p)
    rates = thermal_rate_map(p)
    emission = secular_decompose(H, kron(I2, SIGMA_MINUS), rates, tol_bohr)
    absorption = secular_decompose(H, kron(I2, SIGMA_PLUS), rates, tol_bohr)
    return emission + absorption


def phase_aligned_distance(a, b):
    """min over global phase phi of ||a - e^{i phi} b||_F."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    overlap = np.vdot(b, a)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return frobenius(a - phase * b)
