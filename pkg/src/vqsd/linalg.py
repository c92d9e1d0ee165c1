"""Dense complex matrix helpers, a Jacobi Hermitian eigensolver and the
spectral exponential of Hermitian generators.

Matrices are plain 2-D ``numpy`` arrays of ``complex128``.  Everything here
is a pure function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import InvalidInputError

HERMITIAN_TOL = 1e-10

_JACOBI_MAX_SWEEPS = 60


def as_matrix(a: Any) -> np.ndarray:
    """Coerce ``a`` to a finite 2-D complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise InvalidInputError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidInputError("matrix has non-finite entries")
    return m


def _require_square(m: np.ndarray) -> None:
    if m.shape[0] != m.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {m.shape}")


def mul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise InvalidInputError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def adjoint(a) -> np.ndarray:
    return as_matrix(a).conj().T


def trace(a) -> complex:
    a = as_matrix(a)
    _require_square(a)
    return complex(np.trace(a))


def kron(a, b) -> np.ndarray:
    """Kronecker product; ``a`` carries the slower (more significant) index."""
    return np.kron(as_matrix(a), as_matrix(b))


def hermitian_deviation(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - a.conj().T))) / 2.0


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    a = as_matrix(a)
    return a.shape[0] == a.shape[1] and hermitian_deviation(a) <= tol


def is_unitary(u, tol: float = 1e-10) -> bool:
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        return False
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))) <= tol


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _round_robin(n: int) -> list[list[tuple[int, int]]]:
    # Tournament schedule: every pair appears exactly once per sweep and the
    # pairs of one round are disjoint, so their rotations commute.
    players = list(range(n)) + ([-1] if n % 2 else [])
    size = len(players)
    rounds = []
    for _ in range(size - 1):
        pairs = []
        for k in range(size // 2):
            p, q = players[k], players[size - 1 - k]
            if p >= 0 and q >= 0:
                pairs.append((min(p, q), max(p, q)))
        rounds.append(pairs)
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _jacobi(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = h.shape[0]
    a = h.copy()
    v = np.eye(n, dtype=np.complex128)
    if n == 1:
        return a.diagonal().real.copy(), v
    schedule = [(np.array([p for p, _ in r]), np.array([q for _, q in r]))
                for r in _round_robin(n)]
    scale = max(float(np.linalg.norm(a)), np.finfo(float).tiny)
    for _ in range(_JACOBI_MAX_SWEEPS):
        off = np.linalg.norm(a - np.diag(a.diagonal()))
        if off <= 1e-15 * scale:
            break
        for p, q in schedule:
            apq = a[p, q]
            r = np.abs(apq)
            active = r > 1e-300
            if not np.any(active):
                continue
            phase = np.where(active, apq / np.where(active, r, 1.0), 1.0)
            app, aqq = a[p, p].real, a[q, q].real
            # Real symmetric Jacobi angle on the phase-stripped 2x2 block.
            with np.errstate(divide="ignore", invalid="ignore"):
                tau = np.where(active, (aqq - app) / (2.0 * np.where(active, r, 1.0)), 0.0)
            t = np.where(active,
                         np.sign(tau + (tau == 0)) / (np.abs(tau) + np.sqrt(tau * tau + 1.0)),
                         0.0)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            j = np.eye(n, dtype=np.complex128)
            j[p, p] = c
            j[p, q] = s
            j[q, p] = -s * phase.conj()
            j[q, q] = c * phase.conj()
            a = j.conj().T @ a @ j
            a[p, q] = 0.0
            a[q, p] = 0.0
            v = v @ j
    return a.diagonal().real.copy(), v


def eigh(h, method: str = "jacobi") -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    ``method="jacobi"`` runs the in-house cyclic Jacobi solver (the oracle
    path); ``method="lapack"`` defers to ``numpy.linalg.eigh`` for speed.
    """
    h = as_matrix(h)
    _require_square(h)
    dev = hermitian_deviation(h)
    if dev > HERMITIAN_TOL:
        raise InvalidInputError(f"matrix is not Hermitian (deviation {dev:.3g})")
    h = (h + h.conj().T) / 2.0
    if method == "jacobi":
        w, v = _jacobi(h)
        order = np.argsort(w, kind="stable")
        return EigenDecomposition(w[order], v[:, order])
    if method == "lapack":
        w, v = np.linalg.eigh(h)
        return EigenDecomposition(w, v)
    raise InvalidInputError(f"unknown eigensolver {method!r}")


def expm_hermitian_generator(h, method: str = "lapack") -> np.ndarray:
    """Return ``exp(-i h)`` for Hermitian ``h`` through its spectrum."""
    dec = eigh(h, method=method)
    v = dec.eigenvectors
    return (v * np.exp(-1j * dec.eigenvalues)) @ v.conj().T


def expm_hermitian_batch(hs: np.ndarray) -> np.ndarray:
    """Vectorised ``exp(-i h)`` over a stack of Hermitian generators (no checks)."""
    w, v = np.linalg.eigh(hs)
    return (v * np.exp(-1j * w)[:, None, :]) @ np.swapaxes(v, -1, -2).conj()


def matrix_to_dict(a) -> dict:
    a = as_matrix(a)
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "re": a.real.ravel().tolist(),
        "im": a.imag.ravel().tolist(),
    }


def matrix_from_dict(d: dict) -> np.ndarray:
    try:
        rows, cols = int(d["rows"]), int(d["cols"])
        re = np.asarray(d["re"], dtype=float)
        im = np.asarray(d["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"malformed matrix record: {exc}") from exc
    if re.size != rows * cols or im.size != rows * cols:
        raise InvalidInputError(
            f"matrix record has {re.size}/{im.size} entries, expected {rows * cols}")
    return as_matrix((re + 1j * im).reshape(rows, cols))
