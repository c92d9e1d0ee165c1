"""Variational diagonalization of density matrices from computational-basis
probabilities: simulator, objectives, training loops and analytic checks."""

from .ansatz import (AnsatzDescriptor, AnsatzKind, AnsatzParams, brick_wall_block, brick_wall_circuit,
                     build_unitary, single_qubit_gate, universal_pauli_circuit)
from .errors import InvalidInputError, TrainingAborted
from .objectives import (Objective, ObjectiveKind, evaluate, global_objective, local_objective,
                         single_qubit_objective)
from .state import (BasisDistribution, DensityMatrix, basis_probabilities, evolve,
                    off_diagonal_average, purity, qubit_zero_probability, random_density_matrix,
                    sample_probabilities)
from .trainer import TrainConfig, grow_depth, train, verify_diagonalization

__version__ = "0.1.0"
