"""Decoherence-free subspaces: search, certification and error-avoiding codes.

A subspace is decoherence-free for a set of system operators when every
operator acts on it as a scalar. :func:`find_dfs` returns the maximal joint
eigenspaces of a set of normal operators; :func:`verify_invariance` checks
the channel-level property independently by pushing random states through
the Kraus map.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channel import DensityMatrix, QuantumChannel, apply_kraus, random_density
from .errors import CapacityError, DomainError, NumericalError, ShapeError, UnsupportedOperatorError
from .linalg import as_matrix, canonical_basis, dagger, frobenius, hermitian_eig

NORMAL_TOL = 1e-9
CLUSTER_TOL = 1e-8
CERTIFICATE_TOL = 1e-8
ORTHONORMAL_TOL = 1e-9
INVARIANCE_TOL = 1e-8
# squared sine of the largest principal angle still counted as "inside" an eigenspace
ANGLE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SystemOperatorSet:
    operators: tuple
    source: str = "explicit"

    def __post_init__(self):
        ops = tuple(as_matrix(s) for s in self.operators)
        if not ops:
            raise ShapeError("operator set is empty")
        d = ops[0].shape[0]
        for j, s in enumerate(ops):
            if s.shape != (d, d):
                raise ShapeError(f"operator {j} has shape {s.shape}, expected ({d}, {d})")
        if self.source not in ("explicit", "derived-from-kraus"):
            raise ValueError(f"unknown operator source {self.source!r}")
        object.__setattr__(self, "operators", ops)

    @classmethod
    def from_channel(cls, channel: QuantumChannel) -> "SystemOperatorSet":
        return cls(channel.kraus, source="derived-from-kraus")

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]


@dataclass(frozen=True, eq=False)
class DfsSubspace:
    """Orthonormal basis (columns) of a subspace plus the scalar each operator takes on it."""

    basis: np.ndarray
    eigenvalues: tuple = ()

    def __post_init__(self):
        b = as_matrix(self.basis)
        res = frobenius(dagger(b) @ b - np.eye(b.shape[1]))
        if res > ORTHONORMAL_TOL:
            raise DomainError(f"subspace basis is not orthonormal (residual {res:.3e})")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)
        object.__setattr__(self, "eigenvalues", tuple(complex(c) for c in self.eigenvalues))

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def projector(self) -> np.ndarray:
        return self.basis @ dagger(self.basis)

    def certificate_residual(self, ops: SystemOperatorSet) -> float:
        """max over operators and basis vectors of ||S_j v - c_j v||."""
        if len(ops.operators) != len(self.eigenvalues):
            raise ShapeError(f"{len(ops.operators)} operators but {len(self.eigenvalues)} eigenvalues")
        worst = 0.0
        for s, c in zip(ops.operators, self.eigenvalues):
            r = s @ self.basis - c * self.basis
            worst = max(worst, float(np.max(np.linalg.norm(r, axis=0), initial=0.0)))
        return worst

    def contains(self, v, tol: float = 1e-9) -> bool:
        v = as_matrix(v).reshape(-1, 1)
        return frobenius(v - self.projector @ v) <= tol * max(1.0, frobenius(v))


def _check_normal(ops: SystemOperatorSet) -> None:
    for j, s in enumerate(ops.operators):
        res = frobenius(s @ dagger(s) - dagger(s) @ s)
        if res > NORMAL_TOL * max(1.0, frobenius(s) ** 2):
            raise UnsupportedOperatorError(f"operator {j} is not normal (||SS^H - S^H S||_F = {res:.3e})")


def _eigen_clusters(h: np.ndarray) -> list[tuple[float, np.ndarray]]:
    """Group the eigenvectors of a Hermitian matrix by eigenvalue."""
    w, v = hermitian_eig(h)
    tol = CLUSTER_TOL * max(1.0, frobenius(h))
    clusters = []
    start = 0
    for i in range(1, len(w) + 1):
        # eigenvalues are sorted, so a gap to the previous one ends a cluster
        if i == len(w) or w[i - 1] - w[i] > tol:
            clusters.append((float(np.mean(w[start:i])), v[:, start:i]))
            start = i
    return clusters


def _intersect(basis: np.ndarray, eigvecs: np.ndarray) -> np.ndarray:
    """Orthonormal basis of span(basis) ∩ span(eigvecs)."""
    m = dagger(eigvecs) @ basis
    w, y = hermitian_eig(dagger(m) @ m)
    keep = 1.0 - w <= ANGLE_TOL
    return basis @ y[:, keep]


def _refine(parts, h):
    out = []
    clusters = _eigen_clusters(h)
    for basis, prefix in parts:
        for value, vecs in clusters:
            sub = _intersect(basis, vecs)
            if sub.shape[1]:
                out.append((sub, prefix))
    return out


def find_dfs(ops: SystemOperatorSet) -> list[DfsSubspace]:
    """All maximal joint eigenspaces of a set of normal operators.

    Each operator is split into commuting Hermitian parts (S + S^H)/2 and
    (S - S^H)/2i; the whole space is then refined one part at a time by
    intersecting every current piece with each eigenspace. Pieces that are
    not joint eigenspaces vanish, so an empty list is a valid answer.
    """
    _check_normal(ops)
    n = ops.dim
    parts = [(np.eye(n, dtype=np.complex128), ())]
    for j, s in enumerate(ops.operators):
        herm = 0.5 * (s + dagger(s))
        anti = -0.5j * (s - dagger(s))
        parts = _refine(parts, herm)
        if frobenius(anti) > CLUSTER_TOL * max(1.0, frobenius(s)):
            parts = _refine(parts, anti)
        if not parts:
            return []

    result = []
    for basis, _ in parts:
        b = canonical_basis(basis)
        cs = tuple(complex(np.mean(np.diag(dagger(b) @ s @ b))) for s in ops.operators)
        result.append(DfsSubspace(b, cs))

    for sub in result:
        res = sub.certificate_residual(ops)
        scale = max(1.0, max(frobenius(s) for s in ops.operators))
        if res > CERTIFICATE_TOL * scale:
            raise NumericalError(f"joint eigenspace fails its certificate (residual {res:.3e})")

    # descending eigenvalue tuple (real part, then imaginary), ties by larger dimension
    def key(sub):
        return (tuple(x for c in sub.eigenvalues for x in (-round(c.real, 9), -round(c.imag, 9))), -sub.dim)

    return sorted(result, key=key)


@dataclass(frozen=True)
class InvarianceReport:
    max_residual: float
    trials: int
    passed: bool


def invariance_residual(channel: QuantumChannel, subspace: DfsSubspace) -> float:
    """Worst ||E(|a><b|) - |a><b||| over basis pairs.

    The channel is linear, so this bounds the action on every operator
    supported on the subspace.
    """
    if channel.dim_in != subspace.ambient_dim:
        raise ShapeError(f"channel dimension {channel.dim_in} does not match subspace ambient {subspace.ambient_dim}")
    b = subspace.basis
    worst = 0.0
    for a in range(subspace.dim):
        for c in range(subspace.dim):
            op = b[:, [a]] @ dagger(b[:, [c]])
            worst = max(worst, frobenius(apply_kraus(channel, op) - op))
    return worst


def verify_invariance(channel: QuantumChannel, subspace: DfsSubspace, trials: int = 20, seed: int = 0) -> InvarianceReport:
    if channel.dim_in != subspace.ambient_dim:
        raise ShapeError(f"channel dimension {channel.dim_in} does not match subspace ambient {subspace.ambient_dim}")
    rng = np.random.default_rng(seed)
    b = subspace.basis
    worst = 0.0
    for _ in range(trials):
        sigma = random_density(rng, subspace.dim).matrix
        rho = b @ sigma @ dagger(b)
        worst = max(worst, frobenius(apply_kraus(channel, rho) - rho))
    return InvarianceReport(worst, trials, worst <= INVARIANCE_TOL)


@dataclass(frozen=True, eq=False)
class WiretapCode:
    """Codeword states, one decoding POVM element per message, and the code length n."""

    codewords: tuple
    povm: tuple
    length: int

    def __post_init__(self):
        cws = tuple(c if isinstance(c, DensityMatrix) else DensityMatrix(c) for c in self.codewords)
        elems = tuple(as_matrix(p) for p in self.povm)
        if not cws:
            raise ShapeError("a code needs at least one codeword")
        if len(elems) != len(cws):
            raise ShapeError(f"{len(cws)} codewords but {len(elems)} decoding elements")
        d = cws[0].dim
        for u, (c, p) in enumerate(zip(cws, elems)):
            if c.dim != d or p.shape != (d, d):
                raise ShapeError(f"message {u}: codeword/decoder dimension mismatch")
        if self.length < 1:
            raise DomainError(f"code length must be positive, got {self.length}")
        object.__setattr__(self, "codewords", cws)
        object.__setattr__(self, "povm", elems)

    @property
    def num_messages(self) -> int:
        return len(self.codewords)

    @property
    def dim(self) -> int:
        return self.codewords[0].dim

    @property
    def complement(self) -> np.ndarray:
        return np.eye(self.dim) - sum(self.povm)

    @property
    def message_bits(self) -> float:
        return float(np.log2(self.num_messages))

    @property
    def rate(self) -> float:
        """log2|U| / n."""
        return self.message_bits / self.length


@dataclass(frozen=True, eq=False)
class Qeac(WiretapCode):
    """Error-avoiding code: orthogonal codewords inside a DFS with projective decoding."""

    subspace: DfsSubspace = None
    kets: tuple = ()

    @property
    def decoding_povm(self) -> list:
        return list(self.povm) + [self.complement]

    @property
    def rate_per_dimension(self) -> float:
        """log2|U| / dim of the subspace."""
        return self.message_bits / self.subspace.dim


def default_code_length(ambient_dim: int, subspace_dim: int) -> int:
    """Number of physical qubits when the ambient space is a qubit register, else dim of the subspace."""
    n = int(round(np.log2(ambient_dim))) if ambient_dim > 0 else 0
    return n if n >= 1 and 2**n == ambient_dim else subspace_dim


def build_qeac(subspace: DfsSubspace, num_messages: int, length: int | None = None) -> Qeac:
    if num_messages < 1:
        raise DomainError(f"need at least one message, got {num_messages}")
    if num_messages > subspace.dim:
        raise CapacityError(
            f"{num_messages} messages cannot exceed subspace dimension {subspace.dim}"
        )
    kets = tuple(subspace.basis[:, [u]] for u in range(num_messages))
    projs = tuple(k @ dagger(k) for k in kets)
    if length is None:
        length = default_code_length(subspace.ambient_dim, subspace.dim)
    return Qeac(
        codewords=tuple(DensityMatrix(p) for p in projs),
        povm=projs,
        length=length,
        subspace=subspace,
        kets=kets,
    )


def code_from_kets(kets: Sequence, length: int) -> WiretapCode:
    """Code with codewords |k_u><k_u| and projective decoding on the same kets."""
    projs = []
    for k in kets:
        v = as_matrix(k).reshape(-1, 1)
        v = v / np.linalg.norm(v)
        projs.append(v @ dagger(v))
    return WiretapCode(tuple(projs), tuple(projs), length)
