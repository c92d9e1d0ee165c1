"""N-qubit Pauli strings and the Hermitian generator of the universal ansatz."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

from .errors import InvalidInputError

MAX_QUBITS = 6

_SINGLE = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}
_ALPHABET = "IXYZ"


@dataclass(frozen=True)
class PauliString:
    """A word over ``IXYZ``; letter 0 acts on qubit 1 (most significant)."""

    letters: str
    index: int | None = None

    def __post_init__(self):
        if not self.letters or any(c not in _ALPHABET for c in self.letters):
            raise InvalidInputError(f"invalid Pauli string {self.letters!r}")

    @property
    def n_qubits(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return self.letters


def enumerate_pauli_group(n: int) -> list[PauliString]:
    """All ``4**n - 1`` non-identity strings in base-4 counting order (I<X<Y<Z)."""
    if not 1 <= n <= MAX_QUBITS:
        raise InvalidInputError(f"qubit count must be in [1, {MAX_QUBITS}], got {n}")
    words = itertools.product(_ALPHABET, repeat=n)
    next(words)  # all-identity word
    return [PauliString("".join(w), g) for g, w in enumerate(words, start=1)]


def pauli_to_matrix(p: PauliString | str) -> np.ndarray:
    letters = p.letters if isinstance(p, PauliString) else PauliString(p).letters
    return reduce(np.kron, (_SINGLE[c] for c in letters))


@lru_cache(maxsize=None)
def _pauli_stack(n: int) -> np.ndarray:
    stack = np.stack([pauli_to_matrix(p) for p in enumerate_pauli_group(n)])
    stack.setflags(write=False)
    return stack


def pauli_stack(n: int) -> np.ndarray:
    """Read-only array of shape ``(4**n - 1, 2**n, 2**n)`` in canonical order."""
    return _pauli_stack(n)


def build_generator(thetas, strings) -> np.ndarray:
    """Dense ``sum_g thetas[g] * P_g``."""
    thetas = np.asarray(thetas, dtype=float).ravel()
    strings = list(strings)
    if thetas.size != len(strings):
        raise InvalidInputError(
            f"{thetas.size} weights given for {len(strings)} Pauli strings")
    if not strings:
        raise InvalidInputError("at least one Pauli string is required")
    n = PauliString(str(strings[0])).n_qubits
    canonical = enumerate_pauli_group(n) if n <= MAX_QUBITS else None
    if canonical is not None and [str(s) for s in strings] == [str(s) for s in canonical]:
        return np.tensordot(thetas, pauli_stack(n), axes=1)
    dim = 2**n
    h = np.zeros((dim, dim), dtype=np.complex128)
    for w, s in zip(thetas, strings):
        m = pauli_to_matrix(str(s))
        if m.shape != h.shape:
            raise InvalidInputError("Pauli strings have inconsistent lengths")
        h += w * m
    return h
