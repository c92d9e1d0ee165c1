"""Parameterised unitaries: the universal Pauli exponential and the
hardware-efficient brick-wall circuit.

Brick-wall parameters are packed block-major, then qubit, then
``(phi, theta, omega)``.  Block 1 acts on the state first.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

from . import linalg, pauli
from .errors import InvalidInputError


class AnsatzKind(str, enum.Enum):
    UNIVERSAL_PAULI = "universal-pauli"
    BRICK_WALL = "brick-wall"


@dataclass(frozen=True)
class AnsatzDescriptor:
    kind: AnsatzKind
    n_qubits: int
    blocks: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", AnsatzKind(self.kind))
        if self.n_qubits < 1:
            raise InvalidInputError("n_qubits must be >= 1")
        if self.kind is AnsatzKind.BRICK_WALL and self.blocks < 1:
            raise InvalidInputError("a brick-wall ansatz needs at least one block")
        if self.kind is AnsatzKind.UNIVERSAL_PAULI and self.n_qubits > pauli.MAX_QUBITS:
            raise InvalidInputError(f"universal ansatz supports at most {pauli.MAX_QUBITS} qubits")

    @property
    def n_params(self) -> int:
        if self.kind is AnsatzKind.UNIVERSAL_PAULI:
            return 4**self.n_qubits - 1
        return 3 * self.n_qubits * self.blocks

    def with_blocks(self, blocks: int) -> "AnsatzDescriptor":
        return AnsatzDescriptor(self.kind, self.n_qubits, blocks)

    def to_dict(self) -> dict:
        d = {"kind": self.kind.value, "n_qubits": self.n_qubits}
        if self.kind is AnsatzKind.BRICK_WALL:
            d["blocks"] = self.blocks
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "AnsatzDescriptor":
        try:
            return cls(AnsatzKind(d["kind"]), int(d["n_qubits"]), int(d.get("blocks", 0)))
        except (KeyError, ValueError) as exc:
            raise InvalidInputError(f"malformed ansatz descriptor: {exc}") from exc


@dataclass(frozen=True)
class AnsatzParams:
    descriptor: AnsatzDescriptor
    theta: np.ndarray

    def __post_init__(self):
        t = np.array(self.theta, dtype=float).ravel()
        if t.size != self.descriptor.n_params:
            raise InvalidInputError(
                f"{self.descriptor.kind.value} ansatz expects {self.descriptor.n_params} "
                f"parameters, got {t.size}")
        if not np.all(np.isfinite(t)):
            raise InvalidInputError("parameters must be finite")
        t.setflags(write=False)
        object.__setattr__(self, "theta", t)

    @classmethod
    def zeros(cls, descriptor: AnsatzDescriptor) -> "AnsatzParams":
        return cls(descriptor, np.zeros(descriptor.n_params))

    def to_dict(self) -> dict:
        return {"descriptor": self.descriptor.to_dict(), "theta": self.theta.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "AnsatzParams":
        if "descriptor" not in d or "theta" not in d:
            raise InvalidInputError("parameter record needs 'descriptor' and 'theta'")
        return cls(AnsatzDescriptor.from_dict(d["descriptor"]), np.asarray(d["theta"], dtype=float))


def single_qubit_gates(phi, theta, omega) -> np.ndarray:
    """Vectorised general single-qubit unitary; output shape ``(..., 2, 2)``."""
    phi, theta, omega = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (phi, theta, omega)))
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    plus, minus = (phi + omega) / 2, (phi - omega) / 2
    g = np.empty(phi.shape + (2, 2), dtype=np.complex128)
    g[..., 0, 0] = c * np.exp(-1j * plus)
    g[..., 0, 1] = -s * np.exp(1j * minus)
    g[..., 1, 0] = s * np.exp(-1j * minus)
    g[..., 1, 1] = c * np.exp(1j * plus)
    return g


def single_qubit_gate(phi: float, theta: float, omega: float) -> np.ndarray:
    return single_qubit_gates(phi, theta, omega)


def cnot(n: int, control: int, target: int) -> np.ndarray:
    """CNOT on ``n`` qubits, 1-based indices, qubit 1 most significant."""
    dim = 2**n
    idx = np.arange(dim)
    cbit = (idx >> (n - control)) & 1
    flipped = idx ^ (cbit << (n - target))
    u = np.zeros((dim, dim), dtype=np.complex128)
    u[flipped, idx] = 1.0
    return u


@lru_cache(maxsize=None)
def _ladder(n: int) -> np.ndarray:
    u = np.eye(2**n, dtype=np.complex128)
    for q in range(1, n):
        u = cnot(n, q, q + 1) @ u
    u.setflags(write=False)
    return u


def cnot_ladder(n: int) -> np.ndarray:
    """CNOT(1->2) first, CNOT(N-1->N) last."""
    return _ladder(n)


def _kron_all(mats) -> np.ndarray:
    return reduce(np.kron, mats)


def _block_gates(n: int, block_params: np.ndarray) -> np.ndarray:
    triples = np.asarray(block_params, dtype=float).reshape(n, 3)
    return single_qubit_gates(triples[:, 0], triples[:, 1], triples[:, 2])


def brick_wall_block(n: int, block_params) -> np.ndarray:
    """One building block: a layer of single-qubit gates, then the CNOT ladder."""
    block_params = np.asarray(block_params, dtype=float).ravel()
    if block_params.size != 3 * n:
        raise InvalidInputError(f"a {n}-qubit block takes {3 * n} parameters, got {block_params.size}")
    return cnot_ladder(n) @ _kron_all(_block_gates(n, block_params))


def brick_wall_blocks(n: int, theta: np.ndarray) -> list[np.ndarray]:
    per = 3 * n
    return [brick_wall_block(n, theta[j * per:(j + 1) * per]) for j in range(theta.size // per)]


def brick_wall_circuit(params: AnsatzParams) -> np.ndarray:
    d = params.descriptor
    if d.kind is not AnsatzKind.BRICK_WALL:
        raise InvalidInputError("brick_wall_circuit needs a brick-wall descriptor")
    u = np.eye(2**d.n_qubits, dtype=np.complex128)
    for b in brick_wall_blocks(d.n_qubits, params.theta):
        u = b @ u
    return u


def universal_pauli_circuit(params: AnsatzParams) -> np.ndarray:
    d = params.descriptor
    if d.kind is not AnsatzKind.UNIVERSAL_PAULI:
        raise InvalidInputError("universal_pauli_circuit needs a universal-pauli descriptor")
    h = np.tensordot(params.theta, pauli.pauli_stack(d.n_qubits), axes=1)
    return linalg.expm_hermitian_generator(h)


def build_unitary(params: AnsatzParams) -> np.ndarray:
    if params.descriptor.kind is AnsatzKind.UNIVERSAL_PAULI:
        return universal_pauli_circuit(params)
    return brick_wall_circuit(params)


def _batched_kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    k, m, n = a.shape[0], a.shape[1], b.shape[1]
    return np.einsum("kij,kab->kiajb", a, b).reshape(k, m * n, m * n)


def perturbed_unitaries(descriptor: AnsatzDescriptor, theta: np.ndarray, h: float,
                        ) -> np.ndarray:
    """Unitaries at ``theta + h e_i`` (rows ``0..p-1``) and ``theta - h e_i``
    (rows ``p..2p-1``), built by exploiting each ansatz's structure."""
    theta = np.asarray(theta, dtype=float)
    p = descriptor.n_params
    n = descriptor.n_qubits
    if descriptor.kind is AnsatzKind.UNIVERSAL_PAULI:
        stack = pauli.pauli_stack(n)
        gen = np.tensordot(theta, stack, axes=1)
        out = np.empty((2 * p,) + gen.shape, dtype=np.complex128)
        for sign, rows in ((1.0, slice(0, p)), (-1.0, slice(p, 2 * p))):
            out[rows] = linalg.expm_hermitian_batch(gen[None] + (sign * h) * stack)
        return out

    per = 3 * n
    m = descriptor.blocks
    dim = 2**n
    blocks = brick_wall_blocks(n, theta)
    prefix = [np.eye(dim, dtype=np.complex128)]
    for b in blocks[:-1]:
        prefix.append(b @ prefix[-1])
    suffix = [np.eye(dim, dtype=np.complex128)]
    for b in reversed(blocks[1:]):
        suffix.append(suffix[-1] @ b)
    suffix.reverse()
    ladder = cnot_ladder(n)
    out = np.empty((2 * p, dim, dim), dtype=np.complex128)
    shifts = np.concatenate([np.eye(3) * h, -np.eye(3) * h])  # (6, 3)
    for j in range(m):
        triples = theta[j * per:(j + 1) * per].reshape(n, 3)
        gates = single_qubit_gates(triples[:, 0], triples[:, 1], triples[:, 2])
        for q in range(n):
            moved = triples[q] + shifts
            g = single_qubit_gates(moved[:, 0], moved[:, 1], moved[:, 2])
            if q > 0:
                left = _kron_all(gates[:q])
                g = _batched_kron(np.broadcast_to(left, (6,) + left.shape), g)
            if q < n - 1:
                right = _kron_all(gates[q + 1:])
                g = _batched_kron(g, np.broadcast_to(right, (6,) + right.shape))
            u = suffix[j] @ (ladder @ g) @ prefix[j]
            base = j * per + 3 * q
            out[base:base + 3] = u[:3]
            out[p + base:p + base + 3] = u[3:]
    return out


def universal_params_from_unitary(u) -> AnsatzParams:
    """Universal-ansatz angles reproducing ``u`` up to a global phase.

    Takes the principal logarithm through a complex Schur form (diagonal for
    a unitary) and projects the generator onto the Pauli basis.
    """
    from scipy.linalg import schur

    u = linalg.as_matrix(u)
    if not linalg.is_unitary(u, tol=1e-8):
        raise InvalidInputError("matrix is not unitary")
    dim = u.shape[0]
    n = int(round(np.log2(dim)))
    if 2**n != dim:
        raise InvalidInputError(f"dimension {dim} is not a power of two")
    t, z = schur(u, output="complex")
    angles = np.angle(np.diag(t))
    gen = (z * -angles) @ z.conj().T  # exp(-i gen) = u
    gen = (gen + gen.conj().T) / 2
    theta = np.einsum("gij,ji->g", pauli.pauli_stack(n), gen).real / dim
    return AnsatzParams(AnsatzDescriptor(AnsatzKind.UNIVERSAL_PAULI, n), theta)


def diagonalizing_unitary(rho_matrix, method: str = "jacobi") -> np.ndarray:
    """``V^dag`` from the eigendecomposition, so ``V^dag rho V`` is diagonal."""
    return linalg.eigh(rho_matrix, method=method).eigenvectors.conj().T
