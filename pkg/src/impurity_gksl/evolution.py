"""GKSL generators, propagation, reduced states and CPTP diagnostics.

Vectorisation is column stacking: ``vec(rho)[a + n*b] = rho[a, b]``, so
``vec(A rho B) = (B^T kron A) vec(rho)``. Dissipator convention:
D[L] rho = L rho L^dag - 1/2 {L^dag L, rho}.
"""

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .densemath import dagger, expm

__all__ = [
    "SuperKind",
    "Superoperator",
    "Trajectory",
    "PhysicsViolation",
    "CPReport",
    "vec",
    "unvec",
    "build_liouvillian",
    "apply_rhs",
    "propagate",
    "apply",
    "evolve",
    "state_diagnostics",
    "partial_trace_impurity",
    "partial_trace_qubit",
    "qubit_coherence",
    "choi_matrix",
    "is_completely_positive",
]

STATE_TOL = 1e-10


class PhysicsViolation(RuntimeError):
    """An evolved state left the set of density matrices beyond tolerance."""


class SuperKind(enum.Enum):
    Generator = "generator"
    Propagator = "propagator"


@dataclass(frozen=True)
class Superoperator:
    matrix: np.ndarray
    kind: SuperKind

    @property
    def dim(self):
        return int(round(np.sqrt(self.matrix.shape[0])))


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (n_times, 4, 4)
    coherence: np.ndarray = field(init=False)
    qubit_populations: np.ndarray = field(init=False)
    impurity_populations: np.ndarray = field(init=False)
    trace_deviation: np.ndarray = field(init=False)
    hermiticity_deviation: np.ndarray = field(init=False)
    min_eigenvalue: np.ndarray = field(init=False)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.states = np.asarray(self.states, dtype=complex)
        rq = np.array([partial_trace_impurity(r) for r in self.states])
        ri = np.array([partial_trace_qubit(r) for r in self.states])
        self.coherence = rq[:, 0, 1].copy()
        self.qubit_populations = np.real(np.stack([rq[:, 0, 0], rq[:, 1, 1]], axis=1))
        self.impurity_populations = np.real(np.stack([ri[:, 0, 0], ri[:, 1, 1]], axis=1))
        diag = np.array([state_diagnostics(r) for r in self.states]).reshape(-1, 3)
        self.trace_deviation, self.hermiticity_deviation, self.min_eigenvalue = diag.T

    def __len__(self):
        return len(self.times)


def vec(rho):
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def unvec(x, n=None):
    x = np.asarray(x)
    if n is None:
        n = int(round(np.sqrt(x.size)))
    return x.reshape((n, n), order="F")


def build_liouvillian(H, jumps):
    """Generator of rho' = -i[H, rho] + sum_k rate_k D[L_k] rho."""
    H = np.asarray(H, dtype=complex)
    n = H.shape[0]
    if H.shape != (n, n):
        raise ValueError(f"Hamiltonian must be square, got {H.shape}")
    eye = np.eye(n, dtype=complex)
    gen = -1j * (np.kron(eye, H) - np.kron(H.T, eye))
    for op in jumps:
        L = op.matrix
        if L.shape != (n, n):
            raise ValueError(f"jump operator shape {L.shape} does not match H {H.shape}")
        LdL = dagger(L) @ L
        gen += op.rate * (
            np.kron(L.conj(), L) - 0.5 * np.kron(eye, LdL) - 0.5 * np.kron(LdL.T, eye)
        )
    return Superoperator(gen, SuperKind.Generator)


def apply_rhs(H, jumps, rho):
    """Right-hand side evaluated matrix-wise, without vectorisation."""
    out = -1j * (H @ rho - rho @ H)
    for op in jumps:
        L = op.matrix
        LdL = dagger(L) @ L
        out = out + op.rate * (L @ rho @ dagger(L) - 0.5 * (LdL @ rho + rho @ LdL))
    return out


def propagate(gen, t):
    if gen.kind is not SuperKind.Generator:
        raise ValueError("propagate needs a generator")
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    return Superoperator(expm(t * gen.matrix), SuperKind.Propagator)


def apply(sop, rho):
    rho = np.asarray(rho, dtype=complex)
    return unvec(sop.matrix @ vec(rho), rho.shape[0])


def state_diagnostics(rho):
    """(|tr rho - 1|, ||rho - rho^dag||_max, min eigenvalue of the Hermitian part)."""
    rho = np.asarray(rho, dtype=complex)
    herm = 0.5 * (rho + rho.conj().T)
    return (
        abs(np.trace(rho) - 1.0),
        float(np.max(np.abs(rho - rho.conj().T))),
        float(np.linalg.eigvalsh(herm)[0]),
    )


def _rk_states(gen, rho0, times, rtol, atol):
    x0 = vec(rho0)
    M = gen.matrix

    def rhs(_t, x):
        return M @ x

    sol = solve_ivp(
        rhs,
        (0.0, float(times[-1])),
        x0,
        method="DOP853",
        t_eval=times,
        rtol=rtol,
        atol=atol,
    )
    if not sol.success:
        raise RuntimeError(f"Runge-Kutta integration failed: {sol.message}")
    return np.array([unvec(sol.y[:, k]) for k in range(len(times))])


def evolve(rho0, gen, times, method="expm", tol=STATE_TOL, check=True, rtol=1e-10, atol=1e-12):
    """Evolve ``rho0`` under ``gen`` onto the time grid ``times``.

    ``method="expm"`` applies exp(t L) at each grid time; ``method="rk"``
    integrates the vectorised equation with an embedded 8(5,3) Runge-Kutta
    pair and is meant as an independent cross-check. With ``check`` set, a
    state whose trace, Hermiticity or smallest eigenvalue is off by more
    than ``tol`` raises :class:`PhysicsViolation`.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("time grid must be a non-empty 1-D sequence")
    if times[0] < 0 or np.any(np.diff(times) <= 0):
        raise ValueError("time grid must be non-negative and strictly increasing")
    rho0 = np.asarray(rho0, dtype=complex)
    tr, herm, mineig = state_diagnostics(rho0)
    if tr > tol or herm > tol or mineig < -tol:
        raise ValueError(f"initial state invalid: trace dev {tr:.3g}, herm dev {herm:.3g}, min eig {mineig:.3g}")

    if method == "expm":
        states = np.array([apply(propagate(gen, t), rho0) for t in times])
    elif method == "rk":
        states = _rk_states(gen, rho0, times, rtol, atol)
    else:
        raise ValueError(f"unknown method {method!r}")

    traj = Trajectory(times, states)
    if check:
        bad = (
            (traj.trace_deviation > tol)
            | (traj.hermiticity_deviation > tol)
            | (traj.min_eigenvalue < -tol)
        )
        if np.any(bad):
            k = int(np.argmax(bad))
            raise PhysicsViolation(
                f"state invariant violated at t={times[k]:.17g}: "
                f"trace dev {traj.trace_deviation[k]:.3g}, "
                f"herm dev {traj.hermiticity_deviation[k]:.3g}, "
                f"min eigenvalue {traj.min_eigenvalue[k]:.3g}"
            )
    return traj


def partial_trace_impurity(rho):
    """rho^Q = Tr_I rho."""
    return np.einsum("ijkj->ik", np.asarray(rho).reshape(2, 2, 2, 2))


def partial_trace_qubit(rho):
    """rho^I = Tr_Q rho."""
    return np.einsum("ijik->jk", np.asarray(rho).reshape(2, 2, 2, 2))


def qubit_coherence(rho):
    return complex(partial_trace_impurity(rho)[0, 1])


def choi_matrix(prop):
    """Choi matrix sum_{cd} |c><d| (x) Phi(|c><d|), input factor first."""
    n = prop.dim
    s4 = prop.matrix.reshape(n, n, n, n, order="F")  # s4[a, b, c, d] = Phi(|c><d|)[a, b]
    return s4.transpose(2, 0, 3, 1).reshape(n * n, n * n)


@dataclass(frozen=True)
class CPReport:
    completely_positive: bool
    min_eigenvalue: float
    trace_preservation_error: float
    tol: float

    def __bool__(self):
        return self.completely_positive


def is_completely_positive(prop, tol=STATE_TOL):
    """CP check on the Choi spectrum plus the trace-preservation residual.

    ``completely_positive`` is decided on the Choi spectrum alone; the
    residual ||Tr_out C - I|| is reported alongside.
    """
    if prop.kind is not SuperKind.Propagator:
        raise ValueError("is_completely_positive needs a propagator")
    n = prop.dim
    C = choi_matrix(prop)
    herm = 0.5 * (C + C.conj().T)
    lam = float(np.linalg.eigvalsh(herm)[0])
    tr_out = np.einsum("cada->cd", C.reshape(n, n, n, n))
    tp_err = float(np.max(np.abs(tr_out - np.eye(n))))
    return CPReport(lam >= -tol, lam, tp_err, tol)
