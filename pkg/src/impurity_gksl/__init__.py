"""Local and global GKSL master equations for a qubit coupled to a dissipative
two-level impurity: jump operators, Liouvillian propagation, closed-form
coherence, and the validity diagram of both secular schemes."""

__version__ = "0.1.0"

from .analytic import CrossoverClass, crossover_class, lambda_global, lambda_local, lambda_local_modulus_oscillatory
from .dissipators import (
    JumpLabel,
    JumpOperator,
    global_jump_operators,
    local_jump_operators,
    mixing_angles,
    secular_decompose,
    secular_jump_operators,
)
from .evolution import build_liouvillian, evolve, is_completely_positive, propagate, qubit_coherence
from .model import INFINITE_TEMPERATURE, SystemParams, build_hamiltonian, figure_params, initial_state, thermal_rates
from .regimes import DiagramSpec, RegimeLabel, classify, regime_diagram
