"""Closed-form results for one qubit under the general single-qubit gate.

Deliberately independent of :mod:`vqsd.linalg` and the simulator: every
function here is elementwise arithmetic, so the functions double as an
oracle for the numerical path.  They accept scalars or broadcastable arrays
of angles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidInputError

_TOL = 1e-12


@dataclass(frozen=True)
class SingleQubitState:
    rho11: float
    rho22: float
    rho12: complex

    def __post_init__(self):
        if abs(self.rho11 + self.rho22 - 1.0) > _TOL:
            raise InvalidInputError("diagonal entries must sum to 1")
        if min(self.rho11, self.rho22) < -_TOL:
            raise InvalidInputError("diagonal entries must be non-negative")
        if self.rho11 * self.rho22 - abs(self.rho12) ** 2 < -_TOL:
            raise InvalidInputError("state is not positive semidefinite")

    @property
    def rho21(self) -> complex:
        return complex(self.rho12).conjugate()

    @property
    def real_part(self) -> float:
        return complex(self.rho12).real

    @property
    def imag_part(self) -> float:
        return complex(self.rho12).imag

    @classmethod
    def from_matrix(cls, m) -> "SingleQubitState":
        m = np.asarray(m, dtype=complex)
        if m.shape != (2, 2):
            raise InvalidInputError("expected a 2x2 matrix")
        return cls(float(m[0, 0].real), float(m[1, 1].real), complex(m[0, 1]))

    def to_matrix(self) -> np.ndarray:
        return np.array([[self.rho11, self.rho12], [self.rho21, self.rho22]], dtype=complex)


def pi_surface(s: SingleQubitState, theta, phi):
    """Zero-state probability after the gate; independent of ``omega``."""
    half_diff = (s.rho11 - s.rho22) / 2
    return (0.5 + half_diff * np.cos(theta)
            - s.real_part * np.sin(theta) * np.cos(phi)
            - s.imag_part * np.sin(theta) * np.sin(phi))


def _radius(s: SingleQubitState) -> float:
    # rho12 * rho21 = |rho12|**2 for a Hermitian state.
    return math.sqrt((s.rho11 - s.rho22) ** 2 / 4 + abs(s.rho12) ** 2)


def eigenvalues_2x2(s: SingleQubitState) -> tuple[float, float]:
    r = _radius(s)
    return 0.5 - r, 0.5 + r


def pi_extrema(s: SingleQubitState) -> tuple[float, float]:
    """Minimum and maximum of :func:`pi_surface` over all angles."""
    r = _radius(s)
    return 0.5 - r, 0.5 + r


def evolved_offdiag(s: SingleQubitState, theta, phi, omega):
    """Upper off-diagonal entry of the evolved state."""
    diff = s.rho11 - s.rho22
    return np.exp(-1j * omega) / 2 * (
        diff * np.sin(theta)
        + s.rho12 * (1 + np.cos(theta)) * np.exp(-1j * phi)
        - s.rho21 * (1 - np.cos(theta)) * np.exp(1j * phi))


class ExtremumAngles(NamedTuple):
    minus: tuple[float, float]
    plus: tuple[float, float]
    degenerate: bool


def extremum_angles(s: SingleQubitState) -> ExtremumAngles:
    """``(theta, phi)`` pairs where the zero probability is minimal / maximal.

    ``phi`` aligns with the phase of ``rho12``; ``theta`` then solves the
    one-dimensional problem ``1/2 + a cos(theta) - r sin(theta)``.  For a
    diagonal input the phase is arbitrary and set to 0, and ``degenerate``
    is true; for ``I/2`` every angle is extremal and both branches return
    ``theta = 0``.
    """
    a = (s.rho11 - s.rho22) / 2
    r = abs(s.rho12)
    degenerate = r <= _TOL
    phi = 0.0 if degenerate else math.atan2(s.imag_part, s.real_part)
    r = 0.0 if degenerate else r
    if degenerate and abs(a) <= _TOL:
        return ExtremumAngles((0.0, 0.0), (0.0, 0.0), True)
    theta_minus = math.atan2(r, -a)
    theta_plus = math.atan2(-r, a)
    return ExtremumAngles((theta_minus, phi), (theta_plus, phi), degenerate)
