import numpy as np
import pytest

from impurity_gksl.densemath import kron
from impurity_gksl.dissipators import JumpLabel, JumpOperator, global_jump_operators, local_jump_operators
from impurity_gksl.evolution import (
    PhysicsViolation,
    SuperKind,
    Superoperator,
    apply,
    apply_rhs,
    build_liouvillian,
    choi_matrix,
    evolve,
    is_completely_positive,
    partial_trace_impurity,
    partial_trace_qubit,
    propagate,
    qubit_coherence,
    unvec,
    vec,
)
from impurity_gksl.model import build_hamiltonian, figure_params, initial_state


def random_state(rng, n=4, rank=None):
    rank = rank or n
    a = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def local_generator(p):
    return build_liouvillian(build_hamiltonian(p), local_jump_operators(p))


def test_vec_is_column_stacking():
    rho = np.arange(16).reshape(4, 4)
    x = vec(rho)
    assert x[1] == rho[1, 0] and x[4] == rho[0, 1]
    np.testing.assert_array_equal(unvec(x), rho)
    A, B = np.arange(16).reshape(4, 4), np.eye(4)[::-1]
    np.testing.assert_array_equal(vec(A @ rho @ B), np.kron(B.T, A) @ x)


def test_zero_generator():
    gen = build_liouvillian(np.zeros((4, 4)), [])
    np.testing.assert_array_equal(gen.matrix, np.zeros((16, 16)))
    assert gen.kind is SuperKind.Generator


@pytest.mark.filterwarnings("ignore:non-degeneracy")
@pytest.mark.parametrize("g", [0.5, 2.0, 6.0])
def test_liouvillian_matches_matrix_rhs(g):
    p = figure_params(g, beta=0.03, delta_p0=0.2)
    H = build_hamiltonian(p)
    rng = np.random.default_rng(7)
    for jumps in (local_jump_operators(p), global_jump_operators(p)):
        gen = build_liouvillian(H, jumps)
        for _ in range(3):
            rho = random_state(rng)
            np.testing.assert_allclose(unvec(gen.matrix @ vec(rho)), apply_rhs(H, jumps, rho), atol=1e-12)


def test_liouvillian_dimension_mismatch():
    with pytest.raises(ValueError):
        build_liouvillian(np.eye(2), [JumpOperator(np.eye(4), 1.0, JumpLabel.LocalEmission)])


def test_generator_is_trace_preserving_in_dual_sense():
    p = figure_params(2.0, delta=3.0, beta=0.1)
    for jumps in (local_jump_operators(p), global_jump_operators(p)):
        gen = build_liouvillian(build_hamiltonian(p), jumps)
        np.testing.assert_allclose(vec(np.eye(4)).conj() @ gen.matrix, 0.0, atol=1e-12)


def test_unitary_limit_preserves_spectrum():
    p = figure_params(2.0, delta=4.0)
    gen = build_liouvillian(build_hamiltonian(p), [])
    rho = random_state(np.random.default_rng(8))
    for t in (0.3, 2.0, 7.5):
        out = apply(propagate(gen, t), rho)
        np.testing.assert_allclose(np.linalg.eigvalsh(out), np.linalg.eigvalsh(rho), atol=1e-12)


def test_propagate_identity_and_semigroup():
    gen = local_generator(figure_params(2.0))
    np.testing.assert_array_equal(propagate(gen, 0.0).matrix, np.eye(16))
    a, b = propagate(gen, 0.7), propagate(gen, 1.9)
    np.testing.assert_allclose(a.matrix @ b.matrix, propagate(gen, 2.6).matrix, atol=1e-10)
    with pytest.raises(ValueError):
        propagate(gen, -1.0)
    with pytest.raises(ValueError):
        propagate(a, 1.0)


def test_propagator_trace_preservation():
    p = figure_params(6.0, delta=2.0)
    rho = random_state(np.random.default_rng(9))
    for jumps in (local_jump_operators(p), global_jump_operators(p)):
        gen = build_liouvillian(build_hamiltonian(p), jumps)
        for t in (0.1, 1.0, 4.0, 10.0):
            assert abs(np.trace(apply(propagate(gen, t), rho)) - 1.0) <= 1e-10


def test_evolve_zero_generator_constant():
    rho = random_state(np.random.default_rng(10))
    traj = evolve(rho, build_liouvillian(np.zeros((4, 4)), []), np.linspace(0, 5, 11))
    for s in traj.states:
        np.testing.assert_allclose(s, rho, atol=1e-15)


@pytest.mark.parametrize("g", [0.5, 1.0, 2.0, 6.0])
def test_local_pure_dephasing_populations(g):
    p = figure_params(g, beta=0.05, delta_p0=-0.3)
    traj = evolve(initial_state(p, 0.2 + 0.1j, 0.7), local_generator(p), np.linspace(0, 10, 200))
    assert np.max(np.abs(traj.qubit_populations - [0.7, 0.3])) <= 1e-10


@pytest.mark.filterwarnings("ignore:non-degeneracy")
@pytest.mark.parametrize("g", [0.5, 6.0])
def test_expm_and_runge_kutta_agree(g):
    p = figure_params(g)
    rho0 = initial_state(p)
    times = np.linspace(0, 10, 200)
    for jumps in (local_jump_operators(p), global_jump_operators(p)):
        gen = build_liouvillian(build_hamiltonian(p), jumps)
        a = evolve(rho0, gen, times)
        b = evolve(rho0, gen, times, method="rk")
        assert np.max(np.abs(a.states - b.states)) <= 1e-8


def test_trajectory_fields_and_invariants():
    p = figure_params(2.0, delta=1.0)
    times = np.linspace(0, 5, 30)
    traj = evolve(initial_state(p), local_generator(p), times)
    assert len(traj) == 30
    for arr in (traj.states, traj.coherence, traj.qubit_populations, traj.impurity_populations):
        assert len(arr) == 30
    assert np.max(traj.trace_deviation) <= 1e-10
    assert np.max(traj.hermiticity_deviation) <= 1e-10
    assert np.min(traj.min_eigenvalue) >= -1e-10


def test_evolve_rejects_bad_grids_and_states():
    gen = local_generator(figure_params(2.0))
    rho = initial_state(figure_params(2.0))
    for grid in ([], [0.0, 0.0], [1.0, 0.5], [-1.0, 0.0]):
        with pytest.raises(ValueError):
            evolve(rho, gen, grid)
    with pytest.raises(ValueError):
        evolve(2 * rho, gen, [0.0])


def test_evolve_reports_invariant_violation():
    p = figure_params(2.0)
    good = local_generator(p).matrix
    # reversed dissipation is not a valid generator and drives states out of the PSD cone
    bad = Superoperator(2 * build_liouvillian(build_hamiltonian(p), []).matrix - good, SuperKind.Generator)
    with pytest.raises(PhysicsViolation, match="min eigenvalue"):
        evolve(initial_state(p, 0.5, 0.5), bad, np.linspace(0, 3, 20))


def test_partial_traces():
    rng = np.random.default_rng(11)
    rq, ri = random_state(rng, 2), random_state(rng, 2)
    rho = kron(rq, ri)
    np.testing.assert_allclose(partial_trace_impurity(rho), rq, atol=1e-15)
    np.testing.assert_allclose(partial_trace_qubit(rho), ri, atol=1e-15)
    np.testing.assert_allclose(partial_trace_impurity(np.eye(4) / 4), np.eye(2) / 2)
    np.testing.assert_allclose(partial_trace_qubit(np.eye(4) / 4), np.eye(2) / 2)
    bell = np.zeros(4)
    bell[[0, 3]] = 2**-0.5
    proj = np.outer(bell, bell)
    np.testing.assert_allclose(partial_trace_impurity(proj), np.eye(2) / 2, atol=1e-15)
    np.testing.assert_allclose(partial_trace_qubit(proj), np.eye(2) / 2, atol=1e-15)


def test_partial_trace_qubit_reads_impurity_axis():
    # |0>_q|1>_i has impurity in |1>
    rho = np.zeros((4, 4))
    rho[1, 1] = 1.0
    np.testing.assert_array_equal(partial_trace_qubit(rho), np.diag([0.0, 1.0]))
    np.testing.assert_array_equal(partial_trace_impurity(rho), np.diag([1.0, 0.0]))


def test_qubit_coherence():
    plus = 0.5 * np.ones((2, 2))
    assert qubit_coherence(kron(plus, np.eye(2) / 2)) == pytest.approx(0.5)
    assert qubit_coherence(np.diag([0.1, 0.2, 0.3, 0.4])) == 0


def test_choi_identity_and_unitary():
    ident = Superoperator(np.eye(16, dtype=complex), SuperKind.Propagator)
    C = choi_matrix(ident)
    omega = vec(np.eye(4))  # sum_i |ii>
    np.testing.assert_array_equal(C, np.outer(omega, omega))
    rep = is_completely_positive(ident)
    assert rep and abs(rep.min_eigenvalue) < 1e-12 and rep.trace_preservation_error == 0
    gen = build_liouvillian(build_hamiltonian(figure_params(2.0, delta=3.0)), [])
    U = propagate(gen, 1.3)
    C = choi_matrix(U)
    assert np.linalg.matrix_rank(C, tol=1e-9) == 1
    assert is_completely_positive(U)


def test_choi_matches_direct_construction():
    gen = local_generator(figure_params(2.0, beta=0.2))
    prop = propagate(gen, 0.8)
    direct = np.zeros((16, 16), dtype=complex)
    for c in range(4):
        for d in range(4):
            e = np.zeros((4, 4))
            e[c, d] = 1.0
            direct += np.kron(e, apply(prop, e))
    np.testing.assert_allclose(choi_matrix(prop), direct, atol=1e-14)


@pytest.mark.parametrize("t", [0.1, 1.0, 10.0])
def test_generators_are_completely_positive(t):
    p = figure_params(2.0)
    for jumps in (local_jump_operators(p), global_jump_operators(p)):
        rep = is_completely_positive(propagate(build_liouvillian(build_hamiltonian(p), jumps), t / p.gamma))
        assert rep.completely_positive and rep.min_eigenvalue >= -1e-10
        assert rep.trace_preservation_error <= 1e-10


def test_transpose_map_is_not_cp():
    # transpose is positive but not completely positive
    T = np.zeros((16, 16))
    for a in range(4):
        for b in range(4):
            T[b + 4 * a, a + 4 * b] = 1.0
    rep = is_completely_positive(Superoperator(T, SuperKind.Propagator))
    assert not rep and rep.min_eigenvalue == pytest.approx(-1.0)
