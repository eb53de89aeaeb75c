"""States, Kraus channels and their unitary dilation.

The dilation uses the minimal environment (one level per Kraus operator)
and the ordering system ⊗ environment, so that

    U (|j> ⊗ |0_E>) = sum_i (A_i |j>) ⊗ |i_E>.

Bob's view traces out the environment, Eve's view traces out the system;
Eve always holds the whole environment.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import CapacityError, DomainError, ShapeError
from .linalg import (
    as_matrix,
    dagger,
    eigvalsh,
    frobenius,
    gram_schmidt_complete,
    hermitian_residual,
    partial_trace,
    tensor,
)

STATE_TOL = 1e-9
COMPLETENESS_TOL = 1e-9
MAX_COLLECTIVE_QUBITS = 10


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Unit-trace positive semidefinite Hermitian matrix."""

    matrix: np.ndarray
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if m.shape[0] != m.shape[1]:
            raise ShapeError(f"density matrix must be square, got {m.shape}")
        if self.validate:
            scale = max(1.0, frobenius(m))
            res = hermitian_residual(m)
            if res > STATE_TOL * scale:
                raise DomainError(f"density matrix is not Hermitian (residual {res:.3e})")
            tr = np.trace(m)
            if abs(tr - 1.0) > STATE_TOL:
                raise DomainError(f"density matrix trace is {tr.real:.12g}, expected 1")
            m = 0.5 * (m + dagger(m))
            low = float(eigvalsh(m)[-1])
            if low < -STATE_TOL:
                raise DomainError(f"density matrix has negative eigenvalue {low:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_ket(cls, psi) -> "DensityMatrix":
        v = as_matrix(psi).reshape(-1, 1)
        n = np.linalg.norm(v)
        if n == 0:
            raise DomainError("cannot build a state from the zero vector")
        v = v / n
        return cls(v @ dagger(v))

    @classmethod
    def basis(cls, index: int, dim: int) -> "DensityMatrix":
        m = np.zeros((dim, dim), dtype=np.complex128)
        m[index, index] = 1.0
        return cls(m)

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim, dtype=np.complex128) / dim)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


def random_density(rng: np.random.Generator, dim: int, rank: int | None = None) -> DensityMatrix:
    """Ginibre-distributed random state of the given rank (full rank by default)."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ dagger(g)
    return DensityMatrix(m / np.trace(m).real)


@dataclass(frozen=True, eq=False)
class QuantumChannel:
    """Finite Kraus set with sum_i A_i^H A_i = I."""

    kraus: tuple
    label: str = ""

    def __post_init__(self):
        ops = tuple(as_matrix(a) for a in self.kraus)
        if not ops:
            raise ShapeError("a channel needs at least one Kraus operator")
        d = ops[0].shape[0]
        for i, a in enumerate(ops):
            if a.shape != (d, d):
                raise ShapeError(f"Kraus operator {i} has shape {a.shape}, expected ({d}, {d})")
            a.setflags(write=False)
        res = self.completeness_residual_of(ops)
        if res > COMPLETENESS_TOL * max(1.0, np.sqrt(d)):
            raise DomainError(f"Kraus operators are not complete (||sum A^H A - I||_F = {res:.3e})")
        object.__setattr__(self, "kraus", ops)

    @staticmethod
    def completeness_residual_of(ops) -> float:
        d = ops[0].shape[1]
        acc = sum(dagger(a) @ a for a in ops)
        return frobenius(acc - np.eye(d))

    @property
    def completeness_residual(self) -> float:
        return self.completeness_residual_of(self.kraus)

    @property
    def dim_in(self) -> int:
        return self.kraus[0].shape[0]

    def __len__(self):
        return len(self.kraus)


def _matrix_of(rho) -> np.ndarray:
    return rho.matrix if isinstance(rho, DensityMatrix) else as_matrix(rho)


def _check_dim(expected: int, rho: np.ndarray, what: str = "state") -> None:
    if rho.shape != (expected, expected):
        raise ShapeError(f"{what} of shape {rho.shape} does not match channel dimension {expected}")


def apply_kraus(channel: QuantumChannel, m: np.ndarray) -> np.ndarray:
    """sum_i A_i m A_i^H for any square operator ``m`` (no state validation)."""
    m = _matrix_of(m)
    _check_dim(channel.dim_in, m)
    return sum(a @ m @ dagger(a) for a in channel.kraus)


def apply(channel: QuantumChannel, rho: DensityMatrix) -> DensityMatrix:
    return DensityMatrix(apply_kraus(channel, rho))


@dataclass(frozen=True, eq=False)
class DilatedChannel:
    channel: QuantumChannel
    unitary: np.ndarray

    @property
    def dim_in(self) -> int:
        return self.channel.dim_in

    @property
    def env_dim(self) -> int:
        return len(self.channel.kraus)

    @cached_property
    def env_initial(self) -> DensityMatrix:
        return DensityMatrix.basis(0, self.env_dim)

    @cached_property
    def _isometry(self) -> np.ndarray:
        # columns U(|j> ⊗ |0_E>), the only part of U that ever sees an input
        return np.ascontiguousarray(self.unitary[:, :: self.env_dim])

    def unitarity_residual(self) -> float:
        u = self.unitary
        return frobenius(dagger(u) @ u - np.eye(u.shape[0]))

    def embedding_residual(self) -> float:
        d, e = self.dim_in, self.env_dim
        worst = 0.0
        for j in range(d):
            target = sum(tensor(a[:, [j]], np.eye(e)[:, [i]]) for i, a in enumerate(self.channel.kraus))
            worst = max(worst, frobenius(self.unitary[:, [j * e]] - target))
        return worst

    def joint_state(self, rho) -> np.ndarray:
        """U (rho ⊗ |0_E><0_E|) U^H on system ⊗ environment."""
        m = _matrix_of(rho)
        _check_dim(self.dim_in, m)
        w = self._isometry
        return w @ m @ dagger(w)


def dilate(channel: QuantumChannel) -> DilatedChannel:
    d, e = channel.dim_in, len(channel.kraus)
    # entry k*e + i of column j is A_i[k, j]
    cols = [np.stack([a[:, j] for a in channel.kraus], axis=1).reshape(-1) for j in range(d)]
    q = gram_schmidt_complete(cols, d * e)
    u = np.empty_like(q)
    embed = [j * e for j in range(d)]
    rest = [c for c in range(d * e) if c % e]
    u[:, embed] = q[:, :d]
    u[:, rest] = q[:, d:]
    u.setflags(write=False)
    return DilatedChannel(channel, u)


def bob_state(d: DilatedChannel, rho) -> DensityMatrix:
    return DensityMatrix(partial_trace(d.joint_state(rho), (d.dim_in, d.env_dim), keep="A"))


def eve_state(d: DilatedChannel, rho) -> DensityMatrix:
    return DensityMatrix(partial_trace(d.joint_state(rho), (d.dim_in, d.env_dim), keep="B"))


def eve_state_direct(channel: QuantumChannel, rho) -> np.ndarray:
    """Environment state from the entry formula Tr[A_i rho A_j^H]."""
    m = _matrix_of(rho)
    ops = channel.kraus
    return np.array([[np.trace(a @ m @ dagger(b)) for b in ops] for a in ops])


# built-in channels


def hamming_weights(n_qubits: int) -> np.ndarray:
    idx = np.arange(2**n_qubits)
    return np.array([bin(i).count("1") for i in idx])


def collective_sz(n_qubits: int) -> np.ndarray:
    """Total sigma_z = sum over qubits, diagonal entries n - 2*weight."""
    w = hamming_weights(n_qubits)
    return np.diag((n_qubits - 2 * w).astype(np.complex128))


def builtin_collective_dephasing(n_qubits: int) -> QuantumChannel:
    """Phase-averaged collective dephasing: Kraus set = Hamming-weight projectors."""
    if not 1 <= n_qubits <= MAX_COLLECTIVE_QUBITS:
        raise CapacityError(f"n_qubits must be in [1, {MAX_COLLECTIVE_QUBITS}], got {n_qubits}")
    w = hamming_weights(n_qubits)
    ops = [np.diag((w == k).astype(np.complex128)) for k in range(n_qubits + 1)]
    return QuantumChannel(tuple(ops), label=f"collective-dephasing-{n_qubits}")


def identity_channel(dim: int) -> QuantumChannel:
    return QuantumChannel((np.eye(dim, dtype=np.complex128),), label=f"identity-{dim}")


def unitary_channel(v, label: str = "unitary") -> QuantumChannel:
    return QuantumChannel((as_matrix(v),), label=label)


def amplitude_damping(gamma: float) -> QuantumChannel:
    if not 0.0 <= gamma <= 1.0:
        raise DomainError(f"damping probability must be in [0, 1], got {gamma}")
    a0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1 - gamma)]], dtype=np.complex128)
    a1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]], dtype=np.complex128)
    return QuantumChannel((a0, a1), label=f"amplitude-damping-{gamma:g}")


def builtin_channels() -> list[QuantumChannel]:
    """Every channel the package ships, at the sizes used by the test suites."""
    chans = [builtin_collective_dephasing(n) for n in range(1, 5)]
    chans += [identity_channel(2), identity_channel(4), amplitude_damping(0.3)]
    return chans


def ensure_state(rho) -> DensityMatrix:
    return rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho)


def states_of(items: Sequence) -> list[DensityMatrix]:
    return [ensure_state(r) for r in items]
