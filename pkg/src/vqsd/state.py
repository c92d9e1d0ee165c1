"""Density matrices and the metrics computed on them.

Bit convention: qubit 1 is the most significant bit of a basis index, so the
basis label of index ``b`` is ``format(b, f"0{n}b")``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import InvalidInputError

TRACE_TOL = 1e-10
PSD_TOL = 1e-9


@dataclass(frozen=True)
class DensityMatrix:
    n_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        if self.n_qubits < 1:
            raise InvalidInputError("n_qubits must be >= 1")
        m = linalg.as_matrix(self.matrix)
        dim = 2**self.n_qubits
        if m.shape != (dim, dim):
            raise InvalidInputError(f"expected a {dim}x{dim} matrix, got {m.shape}")
        if linalg.hermitian_deviation(m) > linalg.HERMITIAN_TOL:
            raise InvalidInputError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > TRACE_TOL:
            raise InvalidInputError(f"density matrix trace is {np.trace(m).real:.12g}, not 1")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    @classmethod
    def from_matrix(cls, matrix) -> "DensityMatrix":
        m = linalg.as_matrix(matrix)
        n = int(round(np.log2(m.shape[0])))
        if 2**n != m.shape[0]:
            raise InvalidInputError(f"dimension {m.shape[0]} is not a power of two")
        return cls(n, m)

    def is_positive(self, tol: float = PSD_TOL) -> bool:
        return float(np.linalg.eigvalsh(self.matrix)[0]) >= -tol

    def to_dict(self) -> dict:
        d = linalg.matrix_to_dict(self.matrix)
        d["n_qubits"] = self.n_qubits
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "DensityMatrix":
        if "n_qubits" not in d:
            raise InvalidInputError("density matrix record lacks 'n_qubits'")
        rho = cls(int(d["n_qubits"]), linalg.matrix_from_dict(d))
        if not rho.is_positive():
            raise InvalidInputError("density matrix is not positive semidefinite")
        return rho


@dataclass(frozen=True)
class BasisDistribution:
    n_qubits: int
    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float).ravel()
        if p.size != 2**self.n_qubits:
            raise InvalidInputError(f"expected {2**self.n_qubits} probabilities, got {p.size}")
        if np.any(p < -1e-12) or np.any(p > 1 + 1e-12):
            raise InvalidInputError("probabilities outside [0, 1]")
        p = np.clip(p, 0.0, 1.0)
        total = p.sum()
        if abs(total - 1.0) > 1e-9:
            raise InvalidInputError(f"probabilities sum to {total:.12g}")
        p = p / total
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    def labels(self) -> list[str]:
        return [format(b, f"0{self.n_qubits}b") for b in range(self.probs.size)]

    def to_rows(self) -> list[tuple[str, float]]:
        return list(zip(self.labels(), self.probs.tolist()))


def basis_state(bits: str) -> DensityMatrix:
    """Projector onto a computational basis state, e.g. ``basis_state("011")``."""
    n = len(bits)
    m = np.zeros((2**n, 2**n), dtype=np.complex128)
    b = int(bits, 2)
    m[b, b] = 1.0
    return DensityMatrix(n, m)


def maximally_mixed(n: int) -> DensityMatrix:
    return DensityMatrix(n, np.eye(2**n, dtype=np.complex128) / 2**n)


def random_density_matrix(n: int, rank: int | None = None, seed: int = 0) -> DensityMatrix:
    """Ginibre state ``G G^dag / Tr(G G^dag)`` with ``G`` of shape ``(2**n, rank)``."""
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    dim = 2**n
    rank = dim if rank is None else rank
    if not 1 <= rank <= dim:
        raise InvalidInputError(f"rank must be in [1, {dim}], got {rank}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ g.conj().T
    m = (m + m.conj().T) / 2.0
    return DensityMatrix(n, m / np.trace(m).real)


def evolve(rho: DensityMatrix, u) -> DensityMatrix:
    """``U rho U^dag``."""
    u = linalg.as_matrix(u)
    if u.shape != rho.matrix.shape:
        raise InvalidInputError(f"unitary shape {u.shape} does not match state {rho.matrix.shape}")
    if not linalg.is_unitary(u, tol=1e-8):
        raise InvalidInputError("evolution operator is not unitary")
    m = u @ rho.matrix @ u.conj().T
    return DensityMatrix(rho.n_qubits, (m + m.conj().T) / 2.0)


def purity(rho: DensityMatrix) -> float:
    # Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
    return float(np.sum(np.abs(rho.matrix) ** 2))


def basis_probabilities(rho: DensityMatrix) -> BasisDistribution:
    return BasisDistribution(rho.n_qubits, rho.matrix.diagonal().real)


def zero_probabilities(n: int, probs: np.ndarray) -> np.ndarray:
    """Per-qubit zero-outcome marginals of basis distribution(s).

    ``probs`` has shape ``(..., 2**n)``; the result has shape ``(..., n)``
    ordered qubit 1 first.
    """
    p = np.asarray(probs).reshape(probs.shape[:-1] + (2,) * n)
    lead = p.ndim - n
    out = []
    for q in range(n):
        axes = tuple(lead + k for k in range(n) if k != q)
        out.append(p.sum(axis=axes)[..., 0])
    return np.stack(out, axis=-1)


def qubit_zero_probability(rho: DensityMatrix, q: int) -> float:
    """Probability that qubit ``q`` (1-based, 1 = most significant) reads 0."""
    if not 1 <= q <= rho.n_qubits:
        raise InvalidInputError(f"qubit index {q} outside [1, {rho.n_qubits}]")
    probs = basis_probabilities(rho).probs
    return float(zero_probabilities(rho.n_qubits, probs)[q - 1])


def off_diagonal_average(rho: DensityMatrix) -> float:
    m = np.abs(rho.matrix)
    dim = m.shape[0]
    return float((m.sum() - np.trace(m)) / (dim * (dim - 1)))


def sample_probabilities(rho: DensityMatrix, shots: int, seed: int | np.random.Generator = 0
                         ) -> BasisDistribution:
    """Empirical frequencies from ``shots`` computational-basis measurements."""
    return BasisDistribution(rho.n_qubits, sample_frequencies(
        basis_probabilities(rho).probs, shots, seed))


def sample_frequencies(probs: np.ndarray, shots: int, seed: int | np.random.Generator = 0
                       ) -> np.ndarray:
    if shots < 1:
        raise InvalidInputError(f"shots must be >= 1, got {shots}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    p = np.clip(np.asarray(probs, dtype=float), 0.0, None)
    p = p / p.sum(axis=-1, keepdims=True)
    return rng.multinomial(shots, p) / shots
