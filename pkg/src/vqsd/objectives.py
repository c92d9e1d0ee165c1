"""Objective functions built from computational-basis probabilities.

``global-d``         sum of squared basis probabilities, maximised
``local-l``          polynomial in the single-qubit zero probabilities, minimised
``single-qubit-pi``  zero probability of a one-qubit state, minimised

:class:`Objective` wraps a state, an ansatz and a kind into a loss that is
always minimised (``global-d`` is negated).
"""

from __future__ import annotations

import enum

import numpy as np

from . import ansatz as _ansatz
from .ansatz import AnsatzDescriptor, AnsatzParams
from .errors import InvalidInputError
from .state import (BasisDistribution, DensityMatrix, basis_probabilities, evolve,
                    sample_frequencies, zero_probabilities)


class ObjectiveKind(str, enum.Enum):
    GLOBAL_D = "global-d"
    LOCAL_L = "local-l"
    SINGLE_QUBIT_PI = "single-qubit-pi"

    @property
    def maximize(self) -> bool:
        return self is ObjectiveKind.GLOBAL_D


def global_objective(dist: BasisDistribution) -> float:
    return float(np.sum(dist.probs**2))


def _local_weights(n: int) -> list[np.ndarray]:
    return [np.arange(1, n - q + 1) for q in range(n)]


def local_objective(pi) -> float:
    """Double sum over qubits ``q`` and powers ``1..N-q+1`` of ``pi_q**power``."""
    pi = np.asarray(pi, dtype=float).ravel()
    if pi.size == 0:
        raise InvalidInputError("need at least one zero-state probability")
    if np.any(pi < -1e-9) or np.any(pi > 1 + 1e-9):
        raise InvalidInputError("zero-state probabilities must lie in [0, 1]")
    return float(_local_batch(pi[None, :])[0])


def _local_batch(pi: np.ndarray) -> np.ndarray:
    n = pi.shape[-1]
    total = np.zeros(pi.shape[:-1])
    for q, powers in enumerate(_local_weights(n)):
        total = total + np.sum(pi[..., q, None] ** powers, axis=-1)
    return total


def single_qubit_objective(rho_prime: DensityMatrix) -> float:
    if rho_prime.n_qubits != 1:
        raise InvalidInputError("the single-qubit objective needs a one-qubit state")
    return float(rho_prime.matrix[0, 0].real)


def objective_from_probs(kind: ObjectiveKind, n: int, probs: np.ndarray) -> np.ndarray:
    """Objective values for basis distributions of shape ``(..., 2**n)``."""
    if kind is ObjectiveKind.GLOBAL_D:
        return np.sum(probs**2, axis=-1)
    if kind is ObjectiveKind.LOCAL_L:
        return _local_batch(zero_probabilities(n, probs))
    return probs[..., 0]


def check_compatible(kind: ObjectiveKind, descriptor: AnsatzDescriptor, n_qubits: int) -> None:
    if descriptor.n_qubits != n_qubits:
        raise InvalidInputError(
            f"ansatz acts on {descriptor.n_qubits} qubits but the state has {n_qubits}")
    if kind is ObjectiveKind.SINGLE_QUBIT_PI and n_qubits != 1:
        raise InvalidInputError("single-qubit-pi requires a one-qubit state")


def evaluate(rho: DensityMatrix, params: AnsatzParams, kind: ObjectiveKind | str,
             shots: int = 0, seed: int | np.random.Generator = 0) -> float:
    """Objective value (in its natural direction) of ``U(params) rho U^dag``."""
    kind = ObjectiveKind(kind)
    check_compatible(kind, params.descriptor, rho.n_qubits)
    rho_prime = evolve(rho, _ansatz.build_unitary(params))
    probs = basis_probabilities(rho_prime).probs
    if shots:
        probs = sample_frequencies(probs, shots, seed)
    return float(objective_from_probs(kind, rho.n_qubits, probs))


class Objective:
    """Loss ``theta -> +-objective`` for a fixed state, ansatz and kind.

    With ``shots > 0`` every evaluation draws fresh samples from a generator
    seeded once at construction.
    """

    def __init__(self, rho: DensityMatrix, descriptor: AnsatzDescriptor,
                 kind: ObjectiveKind | str, shots: int = 0, seed: int = 0):
        self.kind = ObjectiveKind(kind)
        check_compatible(self.kind, descriptor, rho.n_qubits)
        if shots < 0:
            raise InvalidInputError("shots must be >= 0")
        self.rho = rho
        self.descriptor = descriptor
        self.shots = shots
        self._sign = -1.0 if self.kind.maximize else 1.0
        self._rng = np.random.default_rng(seed)

    def probabilities(self, unitaries: np.ndarray) -> np.ndarray:
        """Diagonals of ``U rho U^dag`` for a stack of unitaries ``(k, d, d)``."""
        u = np.asarray(unitaries)
        return np.einsum("kij,kij->ki", u @ self.rho.matrix, u.conj()).real

    def values_from_unitaries(self, unitaries: np.ndarray) -> np.ndarray:
        probs = self.probabilities(unitaries)
        if self.shots:
            probs = sample_frequencies(probs, self.shots, self._rng)
        return objective_from_probs(self.kind, self.rho.n_qubits, probs)

    def value(self, theta) -> float:
        u = _ansatz.build_unitary(AnsatzParams(self.descriptor, theta))
        return float(self.values_from_unitaries(u[None])[0])

    def __call__(self, theta) -> float:
        return self._sign * self.value(theta)

    def gradient(self, theta, h: float = 1e-4, chunk: int = 512) -> np.ndarray:
        """Central-difference gradient of the loss, evaluated as one batch."""
        theta = np.asarray(theta, dtype=float)
        p = theta.size
        us = _ansatz.perturbed_unitaries(self.descriptor, theta, h)
        vals = np.concatenate([self.values_from_unitaries(us[i:i + chunk])
                               for i in range(0, 2 * p, chunk)])
        return self._sign * (vals[:p] - vals[p:]) / (2.0 * h)
