"""Training loops: fixed-ansatz optimisation, brick-wall depth growth and
post-hoc verification of the diagonalisation."""

from __future__ import annotations

import dataclasses
import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import linalg
from .ansatz import AnsatzDescriptor, AnsatzKind, AnsatzParams, build_unitary
from .errors import InvalidInputError, TrainingAborted
from .objectives import Objective, ObjectiveKind, check_compatible
from .optimizer import AdamState, adam_step
from .state import (DensityMatrix, basis_probabilities, evolve, off_diagonal_average, purity,
                    random_density_matrix)

log = logging.getLogger(__name__)


@dataclass
class TrainConfig:
    n_qubits: int = 2
    ansatz: AnsatzKind = AnsatzKind.UNIVERSAL_PAULI
    blocks: int = 0
    objective: ObjectiveKind = ObjectiveKind.GLOBAL_D
    epochs: int = 2000
    lr: float = 0.01
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    fd_step: float = 1e-4
    shots: int = 0
    seed: int = 0
    tol: float = 1e-8
    window: int = 50
    log_every: int = 1
    init_scale: float = 0.1
    # State source: a JSON file, or a Ginibre draw with the given rank/seed.
    state_path: str | None = None
    state_rank: int | None = None
    state_seed: int = 0
    # Depth growth (brick-wall only).
    m_start: int = 5
    m_step: int = 5
    m_max: int = 70
    tau_depth: float = 1e-4
    new_block_scale: float = 1e-3
    warm_start: bool = True

    def __post_init__(self):
        self.ansatz = AnsatzKind(self.ansatz)
        self.objective = ObjectiveKind(self.objective)
        if self.epochs < 1:
            raise InvalidInputError("epochs must be >= 1")
        if not self.tol > 0:
            raise InvalidInputError("tol must be > 0")
        if self.window < 1 or self.log_every < 1:
            raise InvalidInputError("window and log_every must be >= 1")
        if not self.fd_step > 0:
            raise InvalidInputError("fd_step must be > 0")
        if self.shots < 0:
            raise InvalidInputError("shots must be >= 0")
        self.descriptor()  # validates n_qubits / blocks

    def descriptor(self, blocks: int | None = None) -> AnsatzDescriptor:
        if self.ansatz is AnsatzKind.UNIVERSAL_PAULI:
            return AnsatzDescriptor(self.ansatz, self.n_qubits)
        if blocks is None:
            blocks = self.blocks or self.m_start  # a sweep config may leave blocks unset
        return AnsatzDescriptor(self.ansatz, self.n_qubits, blocks)

    def adam(self, size: int) -> AdamState:
        return AdamState.fresh(size, lr=self.lr, beta1=self.beta1, beta2=self.beta2, eps=self.eps)

    def load_state(self) -> DensityMatrix:
        if self.state_path:
            from .io import load_density_matrix
            rho = load_density_matrix(Path(self.state_path))
            if rho.n_qubits != self.n_qubits:
                raise InvalidInputError(
                    f"state file has {rho.n_qubits} qubits, config says {self.n_qubits}")
            return rho
        return random_density_matrix(self.n_qubits, self.state_rank, self.state_seed)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["ansatz"] = self.ansatz.value
        d["objective"] = self.objective.value
        return d


@dataclass(frozen=True)
class EpochRow:
    epoch: int
    objective: float
    d_over_p: float
    off_diagonal_average: float
    wall_clock: float


@dataclass
class TrainRecord:
    rows: list[EpochRow] = field(default_factory=list)

    COLUMNS = ("epoch", "objective", "d_over_p", "off_diagonal_average", "wall_clock")

    def __len__(self):
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])

    @property
    def last(self) -> EpochRow:
        return self.rows[-1]


@dataclass
class TrainResult:
    record: TrainRecord
    params: AnsatzParams
    evolved: DensityMatrix
    converged: bool
    best_objective: float

    def __iter__(self):
        return iter((self.record, self.params, self.evolved))


def _metrics(rho: DensityMatrix, p: float, params: AnsatzParams) -> tuple[DensityMatrix, float, float]:
    rho_prime = evolve(rho, build_unitary(params))
    d = float(np.sum(basis_probabilities(rho_prime).probs ** 2))
    return rho_prime, d / p, off_diagonal_average(rho_prime)


def train(config: TrainConfig, rho: DensityMatrix | None = None,
          initial_theta: np.ndarray | None = None,
          descriptor: AnsatzDescriptor | None = None) -> TrainResult:
    """Optimise the ansatz parameters with Adam on central-difference gradients.

    Stops after ``config.epochs`` updates or once the objective moved by less
    than ``config.tol`` over the last ``config.window`` epochs.  Returns the
    parameters with the lowest loss seen.
    """
    rho = config.load_state() if rho is None else rho
    descriptor = config.descriptor() if descriptor is None else descriptor
    check_compatible(config.objective, descriptor, rho.n_qubits)
    objective = Objective(rho, descriptor, config.objective, shots=config.shots, seed=config.seed)
    sign = -1.0 if config.objective.maximize else 1.0

    if initial_theta is None:
        rng = np.random.default_rng(config.seed)
        theta = rng.uniform(-config.init_scale, config.init_scale, descriptor.n_params)
    else:
        theta = np.array(initial_theta, dtype=float)
        if theta.size != descriptor.n_params:
            raise InvalidInputError(
                f"initial parameters have length {theta.size}, ansatz needs {descriptor.n_params}")

    p = purity(rho)
    adam = config.adam(descriptor.n_params)
    record = TrainRecord()
    history: list[float] = []
    best_loss, best_theta = math.inf, theta.copy()
    converged = False
    start = time.perf_counter()

    for epoch in range(config.epochs + 1):
        loss = objective(theta)
        if not math.isfinite(loss):
            raise TrainingAborted(f"non-finite objective at epoch {epoch}", record)
        if loss < best_loss:
            best_loss, best_theta = loss, theta.copy()
        history.append(loss)
        if epoch % config.log_every == 0 or epoch == config.epochs:
            _, ratio, off = _metrics(rho, p, AnsatzParams(descriptor, theta))
            record.rows.append(EpochRow(epoch, sign * loss, ratio, off, time.perf_counter() - start))
        if len(history) > config.window and abs(history[-1] - history[-1 - config.window]) < config.tol:
            converged = True
            break
        if epoch == config.epochs:
            break
        grad = objective.gradient(theta, config.fd_step)
        if not np.all(np.isfinite(grad)):
            raise TrainingAborted(f"non-finite gradient at epoch {epoch}", record)
        adam, theta = adam_step(adam, theta, grad)

    if record.last.epoch != epoch:
        _, ratio, off = _metrics(rho, p, AnsatzParams(descriptor, theta))
        record.rows.append(EpochRow(epoch, sign * history[-1], ratio, off, time.perf_counter() - start))
    params = AnsatzParams(descriptor, best_theta)
    evolved = evolve(rho, build_unitary(params))
    log.info("trained %s/%s N=%d: %d epochs, objective %.10g, converged=%s",
             config.objective.value, descriptor.kind.value, rho.n_qubits, epoch,
             sign * best_loss, converged)
    return TrainResult(record, params, evolved, converged, sign * best_loss)


@dataclass(frozen=True)
class DepthStage:
    blocks: int
    objective: float
    d_over_p: float
    off_diagonal_average: float
    params: AnsatzParams
    record: TrainRecord


@dataclass
class DepthSweepResult:
    stages: list[DepthStage]
    converged: bool

    @property
    def final(self) -> DepthStage:
        return self.stages[-1]


def grow_depth(config: TrainConfig, m_start: int | None = None, m_step: int | None = None,
               m_max: int | None = None, tau_depth: float | None = None,
               rho: DensityMatrix | None = None) -> DepthSweepResult:
    """Train brick-wall circuits of increasing depth until the converged
    objective changes by less than ``tau_depth`` between stages.

    New blocks are appended after the existing ones (acting last on the
    state) with small random angles; earlier blocks restart from the
    previous optimum unless ``config.warm_start`` is false.
    """
    m_start = config.m_start if m_start is None else m_start
    m_step = config.m_step if m_step is None else m_step
    m_max = config.m_max if m_max is None else m_max
    tau_depth = config.tau_depth if tau_depth is None else tau_depth
    if config.ansatz is not AnsatzKind.BRICK_WALL:
        raise InvalidInputError("depth growth needs a brick-wall ansatz")
    if m_start < 1 or m_step < 1:
        raise InvalidInputError("m_start and m_step must be >= 1")
    rho = config.load_state() if rho is None else rho
    p = purity(rho)
    rng = np.random.default_rng(config.seed + 1)
    per = 3 * config.n_qubits

    stages: list[DepthStage] = []
    converged = False
    m = m_start
    theta = None
    while m <= m_max:
        descriptor = config.descriptor(m)
        if theta is None or not config.warm_start:
            init = None
        else:
            fresh = rng.uniform(-config.new_block_scale, config.new_block_scale,
                                (m - theta.size // per) * per)
            init = np.concatenate([theta, fresh])
        result = train(config, rho, initial_theta=init, descriptor=descriptor)
        theta = np.array(result.params.theta)
        _, ratio, off = _metrics(rho, p, result.params)
        stages.append(DepthStage(m, result.best_objective, ratio, off, result.params, result.record))
        log.info("depth %d: objective %.10g, D/P %.6f, off-diagonal %.3g",
                 m, result.best_objective, ratio, off)
        if len(stages) > 1 and abs(stages[-1].objective - stages[-2].objective) < tau_depth:
            converged = True
            break
        m += m_step
    return DepthSweepResult(stages, converged)


@dataclass(frozen=True)
class VerificationReport:
    eigenvalues: np.ndarray
    diagonal: np.ndarray  # basis order, so the ordering the objective settled on is visible
    sorted_diagonal: np.ndarray
    eigenvalue_gap: float
    off_diagonal_average: float
    d_minus_p: float
    eigenvalue_tol: float
    off_diagonal_tol: float

    @property
    def passed(self) -> bool:
        return self.eigenvalue_gap <= self.eigenvalue_tol and self.off_diagonal_average <= self.off_diagonal_tol

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "eigenvalue_gap": self.eigenvalue_gap,
            "off_diagonal_average": self.off_diagonal_average,
            "d_minus_p": self.d_minus_p,
            "eigenvalue_tol": self.eigenvalue_tol,
            "off_diagonal_tol": self.off_diagonal_tol,
            "eigenvalues": self.eigenvalues.tolist(),
            "diagonal": self.diagonal.tolist(),
            "sorted_diagonal": self.sorted_diagonal.tolist(),
        }

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (f"{verdict}: eigenvalue gap {self.eigenvalue_gap:.3e} (tol {self.eigenvalue_tol:g}), "
                f"off-diagonal average {self.off_diagonal_average:.3e} (tol {self.off_diagonal_tol:g}), "
                f"D - P {self.d_minus_p:.3e}")


def verify_diagonalization(rho: DensityMatrix, params: AnsatzParams | np.ndarray,
                           eigenvalue_tol: float = 1e-3, off_diagonal_tol: float = 1e-3
                           ) -> VerificationReport:
    """Compare the evolved diagonal with the Jacobi eigenvalues of ``rho``.

    ``params`` may also be an explicit unitary matrix.
    """
    u = build_unitary(params) if isinstance(params, AnsatzParams) else linalg.as_matrix(params)
    rho_prime = evolve(rho, u)
    eigenvalues = linalg.eigh(rho.matrix, method="jacobi").eigenvalues
    raw = basis_probabilities(rho_prime).probs
    diag = np.sort(raw)
    d = float(np.sum(diag**2))
    return VerificationReport(
        eigenvalues=eigenvalues,
        diagonal=raw,
        sorted_diagonal=diag,
        eigenvalue_gap=float(np.max(np.abs(diag - eigenvalues))),
        off_diagonal_average=off_diagonal_average(rho_prime),
        d_minus_p=d - purity(rho),
        eigenvalue_tol=eigenvalue_tol,
        off_diagonal_tol=off_diagonal_tol,
    )
