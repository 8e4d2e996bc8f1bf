import math

import numpy as np
import pytest
from scipy.optimize import brentq

from impurity_gksl.analytic import (
    CrossoverClass,
    crossover_class,
    lambda_global,
    lambda_local,
    lambda_local_modulus_oscillatory,
    local_solution_params,
)
from impurity_gksl.dissipators import global_jump_operators, local_jump_operators
from impurity_gksl.evolution import build_liouvillian, evolve
from impurity_gksl.model import SystemParams, build_hamiltonian, figure_params, initial_state

pytestmark = pytest.mark.filterwarnings("ignore:non-degeneracy")


def numeric_lambda(p, times, approach="local"):
    jumps = local_jump_operators(p) if approach == "local" else global_jump_operators(p)
    gen = build_liouvillian(build_hamiltonian(p), jumps)
    traj = evolve(initial_state(p, 0.5, 0.5), gen, times)
    return traj.coherence / 0.5


@pytest.mark.parametrize(
    "p",
    [figure_params(0.5), figure_params(1.0), figure_params(6.0), figure_params(2.0, beta=0.04, delta_p0=0.6), SystemParams(v=0.3, beta=1.0, delta_p0=-1.0)],
)
def test_lambdas_start_at_one(p):
    assert lambda_local(0.0, p) == pytest.approx(1.0, abs=1e-15)
    assert lambda_global(0.0, p) == pytest.approx(1.0, abs=1e-15)


def test_solution_params_branch_and_amplitude():
    s = local_solution_params(figure_params(3.0))
    assert s.alpha == pytest.approx(1j * math.sqrt(8.0))
    s = local_solution_params(figure_params(0.6))
    assert s.alpha == pytest.approx(0.8)
    p = figure_params(2.0, beta=0.05, delta_p0=0.3)
    s = local_solution_params(p)
    assert s.alpha.real >= 0
    assert s.alpha**2 == pytest.approx(1 + 2j * s.g * s.delta_p_bar - s.g**2)
    assert s.A == pytest.approx(((1 + s.alpha) + 1j * s.g * 0.3) / (2 * s.alpha))
    assert local_solution_params(figure_params(1.0)).A is None


@pytest.mark.parametrize("p", [figure_params(0.5), figure_params(2.0, beta=0.04, delta_p0=0.6), figure_params(6.0, beta=0.01, delta_p0=-0.5)])
def test_literal_two_exponential_form(p):
    s = local_solution_params(p)
    t = np.linspace(0, 10, 50)
    literal = np.exp(1j * p.epsilon * t) * (
        s.A * np.exp(-0.5 * s.gamma * (1 - s.alpha) * t) + (1 - s.A) * np.exp(-0.5 * s.gamma * (1 + s.alpha) * t)
    )
    np.testing.assert_allclose(lambda_local(t, p), literal, atol=1e-13)


@pytest.mark.parametrize(
    "p",
    [figure_params(0.5), figure_params(1.0), figure_params(2.0, beta=0.04, delta_p0=0.6), figure_params(6.0, beta=0.01, delta_p0=-0.5)],
)
def test_lambda_local_matches_numeric_evolution(p):
    t = np.linspace(0, 10 / p.gamma, 120)
    np.testing.assert_allclose(numeric_lambda(p, t), lambda_local(t, p), atol=1e-8)


def test_lambda_local_continuous_through_alpha_zero():
    t = np.linspace(0, 10, 101)
    at = lambda_local(t, figure_params(1.0))
    for g in (1 - 1e-9, 1 + 1e-9):
        np.testing.assert_allclose(lambda_local(t, figure_params(g)), at, atol=1e-7)


@pytest.mark.parametrize("g", [0.1, 0.5, 0.9, 0.999])
def test_monotone_decay_below_crossover(g):
    p = figure_params(g)
    t = np.arange(0, 10 + 1e-12, 1e-3)
    y = np.abs(lambda_local(t, p))
    assert np.max(np.diff(y)) <= 1e-12


@pytest.mark.parametrize("g", [0.3, 1.0, 1.5, 4.0, 10.0])
def test_contractive(g):
    t = np.linspace(0, 30, 3001)
    assert np.max(np.abs(lambda_local(t, figure_params(g)))) <= 1 + 1e-12


@pytest.mark.parametrize("g", [1.2, 2.0, 6.0])
def test_revival_exists_above_crossover(g):
    d = math.sqrt(g * g - 1)
    t = np.linspace(0, 3 * math.pi / d, 3001)
    y = np.abs(lambda_local(t, figure_params(g)))
    interior = (y[1:-1] < y[:-2]) & (y[1:-1] <= y[2:])
    assert interior.any()


def test_no_coupling_no_dephasing():
    t = np.linspace(0, 10, 200)
    np.testing.assert_allclose(np.abs(lambda_local(t, figure_params(0.0))), 1.0, atol=1e-12)


def test_oscillatory_modulus_at_quarter_period():
    # g = 2, gamma = 1: delta = sqrt(3), and at t = pi/sqrt(3) the phase gamma delta t / 2 is pi/2
    t = math.pi / math.sqrt(3)
    expected = (1 / math.sqrt(3)) * math.exp(-t / 2)
    assert abs(lambda_local(t, figure_params(2.0))) == pytest.approx(expected, abs=1e-14)
    assert lambda_local_modulus_oscillatory(t, 2.0, 1.0) == pytest.approx(expected, abs=1e-14)


def test_oscillatory_modulus_zero_bracketing():
    g, gamma = 2.0, 1.0
    d = math.sqrt(g * g - 1)
    lo, hi = math.pi / (gamma * d), 2 * math.pi / (gamma * d)
    f = lambda t: lambda_local_modulus_oscillatory(t, g, gamma)  # noqa: E731
    assert f(lo) * f(hi) < 0
    root = brentq(f, lo, hi, xtol=1e-14)
    assert math.tan(0.5 * gamma * d * root) == pytest.approx(-d, rel=1e-9)
    assert abs(lambda_local(root, figure_params(g, gamma=gamma))) < 1e-12


def test_oscillatory_modulus_identity_g6():
    t = np.linspace(0, 10, 200)
    assert lambda_local_modulus_oscillatory(0.0, 6.0, 1.0) == 1.0
    diff = np.abs(lambda_local_modulus_oscillatory(t, 6.0, 1.0)) - np.abs(lambda_local(t, figure_params(6.0)))
    assert np.max(np.abs(diff)) <= 1e-12


def test_oscillatory_modulus_domain():
    for g in (1.0, 0.5):
        with pytest.raises(ValueError):
            lambda_local_modulus_oscillatory(1.0, g, 1.0)


def test_global_infinite_temperature_zeros_and_modulus():
    p = figure_params(6.0)  # v = 3
    t = np.linspace(0, 10, 500)
    np.testing.assert_allclose(np.abs(lambda_global(t, p)), np.exp(-t / 2) * np.abs(np.cos(p.v * t)), atol=1e-14)
    zeros = (2 * np.arange(10) + 1) * math.pi / (2 * p.v)
    assert np.max(np.abs(lambda_global(zeros, p))) < 1e-14


@pytest.mark.parametrize("p", [figure_params(6.0), figure_params(3.0, beta=0.03, delta_p0=0.4), figure_params(0.5, beta=0.1, delta_p0=-0.2)])
def test_lambda_global_matches_numeric_evolution(p):
    t = np.linspace(0, 10 / p.gamma, 150)
    np.testing.assert_allclose(numeric_lambda(p, t, "global"), lambda_global(t, p), atol=1e-8)


def test_global_local_gap_shrinks_with_g():
    t = np.linspace(0, 10, 20001)
    gaps = [np.max(np.abs(np.abs(lambda_global(t, figure_params(g))) - np.abs(lambda_local(t, figure_params(g))))) for g in (2, 4, 6, 10)]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))


def test_negative_time_rejected():
    with pytest.raises(ValueError):
        lambda_local(-1.0, figure_params(2.0))
    with pytest.raises(ValueError):
        lambda_global(-1.0, figure_params(2.0))


def test_crossover_class():
    assert crossover_class(0.5) is CrossoverClass.Monotonic
    assert crossover_class(6.0) is CrossoverClass.Revivals
    assert crossover_class(1.0) is CrossoverClass.Boundary
    assert crossover_class(1.0 + 1e-13) is CrossoverClass.Boundary
    assert crossover_class(1.0 + 1e-9) is CrossoverClass.Revivals
    with pytest.raises(ValueError):
        crossover_class(-0.1)
