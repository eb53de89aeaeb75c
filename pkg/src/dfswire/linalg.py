"""Dense complex linear algebra used by every other module.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``;
:func:`as_matrix` is the single validating constructor.
"""

from typing import NamedTuple, Sequence

import numpy as np

from . import _kernels
from .errors import CapacityError, DegeneracyError, DomainError, NumericalError, ShapeError

MAX_DIM = 4096
HERMITIAN_TOL = 1e-9
PHASE_TOL = 1e-8
JACOBI_MAX_SWEEPS = 100
JACOBI_OFF_TOL = 1e-12
INDEPENDENCE_TOL = 1e-10


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # real, descending
    eigenvectors: np.ndarray  # orthonormal columns


def as_matrix(entries, rows=None, cols=None) -> np.ndarray:
    """Coerce ``entries`` to a finite 2-D complex array.

    A 1-D input is reshaped to ``(rows, cols)`` in row-major order when both
    are given, otherwise treated as a column vector.
    """
    m = np.array(entries, dtype=np.complex128)
    if m.ndim == 1:
        if rows is not None and cols is not None:
            if m.size != rows * cols:
                raise ShapeError(f"expected {rows * cols} entries for a {rows}x{cols} matrix, got {m.size}")
            m = m.reshape(rows, cols)
        else:
            m = m.reshape(-1, 1)
    elif m.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got {m.ndim} dimensions")
    elif rows is not None and cols is not None and m.shape != (rows, cols):
        raise ShapeError(f"expected shape ({rows}, {cols}), got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DomainError("matrix has non-finite entries")
    return m


def _check_dim(n: int) -> None:
    if n > MAX_DIM:
        raise CapacityError(f"dimension {n} exceeds the configured maximum {MAX_DIM}")


def frobenius(m) -> float:
    return float(np.linalg.norm(m))


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros((dim, 1), dtype=np.complex128)
    v[index, 0] = 1.0
    return v


def projector(v) -> np.ndarray:
    v = as_matrix(v)
    return v @ dagger(v)


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product ``a ⊗ b`` (row index ``i*rb + k``)."""
    a, b = as_matrix(a), as_matrix(b)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    _check_dim(max(rows, cols))
    return np.kron(a, b)


def partial_trace(m: np.ndarray, dims: Sequence[int], keep: str) -> np.ndarray:
    """Trace out one factor of a bipartite operator.

    ``dims`` is ``(dimA, dimB)`` and ``keep`` is ``"A"`` or ``"B"``.
    """
    m = as_matrix(m)
    da, db = (int(d) for d in dims)
    if m.shape != (da * db, da * db):
        raise ShapeError(f"matrix of shape {m.shape} does not match dims ({da}, {db})")
    t = m.reshape(da, db, da, db)
    if keep == "A":
        return np.einsum("ikjk->ij", t)
    if keep == "B":
        return np.einsum("kikj->ij", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def fix_phase(v: np.ndarray, tol: float = PHASE_TOL) -> np.ndarray:
    """Make the first entry of magnitude > tol real and nonnegative."""
    v = np.array(v, dtype=np.complex128)
    idx = np.flatnonzero(np.abs(v) > tol)
    if idx.size:
        z = v[idx[0]]
        v = v * (abs(z) / z)
        v[idx[0]] = abs(z)
    return v


def hermitian_residual(m: np.ndarray) -> float:
    return frobenius(m - dagger(m))


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and hermitian_residual(m) <= tol * max(1.0, frobenius(m))


def hermitian_eig(m, backend=None) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Inputs within the Hermiticity tolerance are symmetrized first. Eigenvalues
    come back in descending order; each eigenvector follows the phase
    convention of :func:`fix_phase`.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got {m.shape}")
    _check_dim(m.shape[0])
    scale = max(1.0, frobenius(m))
    res = hermitian_residual(m)
    if res > HERMITIAN_TOL * scale:
        raise DomainError(f"matrix is not Hermitian (||M - M^H||_F = {res:.3e})")
    h = 0.5 * (m + dagger(m))
    n = h.shape[0]
    if n == 0:
        return EigenDecomposition(np.zeros(0), np.zeros((0, 0), dtype=np.complex128))
    tol = JACOBI_OFF_TOL * scale
    d, v, off, _ = _kernels.jacobi(h, JACOBI_MAX_SWEEPS, tol, backend=backend)
    if off > tol:
        raise NumericalError(
            f"Jacobi iteration did not converge in {JACOBI_MAX_SWEEPS} sweeps (off-diagonal norm {off:.3e})"
        )
    order = np.argsort(-d, kind="stable")
    vecs = v[:, order]
    for j in range(n):
        vecs[:, j] = fix_phase(vecs[:, j])
    return EigenDecomposition(d[order], vecs)


def eigvalsh(m, backend=None) -> np.ndarray:
    return hermitian_eig(m, backend=backend).eigenvalues


def matrix_function(m, fn, backend=None) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix through its spectrum."""
    w, v = hermitian_eig(m, backend=backend)
    return (v * fn(w)) @ dagger(v)


def _orthogonalize(v: np.ndarray, q: np.ndarray) -> np.ndarray:
    # two passes of classical Gram-Schmidt keep the loss of orthogonality at rounding level
    for _ in range(2):
        if q.shape[1]:
            v = v - q @ (dagger(q) @ v)
    return v


def gram_schmidt_complete(columns, target_dim: int) -> np.ndarray:
    """Orthonormalize ``columns`` in order and extend them to a unitary.

    The given columns keep their own phase; completion vectors are drawn from
    the standard basis in index order and follow :func:`fix_phase`.
    """
    _check_dim(target_dim)
    cols = [as_matrix(c).reshape(-1) for c in columns]
    if len(cols) > target_dim:
        raise DegeneracyError(f"{len(cols)} columns cannot be independent in dimension {target_dim}")
    q = np.zeros((target_dim, 0), dtype=np.complex128)
    for j, c in enumerate(cols):
        if c.shape[0] != target_dim:
            raise ShapeError(f"column {j} has length {c.shape[0]}, expected {target_dim}")
        norm0 = np.linalg.norm(c)
        r = _orthogonalize(c.reshape(-1, 1), q)
        nr = np.linalg.norm(r)
        if nr <= INDEPENDENCE_TOL * max(1.0, norm0):
            raise DegeneracyError(f"column {j} is linearly dependent on the preceding columns")
        q = np.hstack([q, r / nr])
    # any standard basis vector skipped here keeps a residual below the
    # threshold forever, and a residual of at least 1/sqrt(dim) always exists
    accept = 0.5 / np.sqrt(target_dim)
    k = 0
    while q.shape[1] < target_dim:
        if k >= target_dim:
            raise NumericalError("failed to complete the orthonormal basis")
        e = np.zeros((target_dim, 1), dtype=np.complex128)
        e[k, 0] = 1.0
        r = _orthogonalize(e, q)
        nr = np.linalg.norm(r)
        if nr > accept:
            q = np.hstack([q, fix_phase(r / nr)])
        k += 1
    return q


def canonical_basis(basis: np.ndarray) -> np.ndarray:
    """A reproducible orthonormal basis for the column span of ``basis``.

    Projections of the standard basis vectors onto the span are
    orthonormalized in index order, so coordinate-aligned subspaces come back
    as sorted standard basis vectors.
    """
    b = as_matrix(basis)
    dim, k = b.shape
    accept = 0.5 / np.sqrt(max(dim, 1))
    q = np.zeros((dim, 0), dtype=np.complex128)
    for idx in range(dim):
        if q.shape[1] == k:
            break
        e = (b @ dagger(b)[:, idx]).reshape(-1, 1)
        r = _orthogonalize(e, q)
        nr = np.linalg.norm(r)
        if nr > accept:
            q = np.hstack([q, fix_phase(r / nr)])
    if q.shape[1] != k:
        raise NumericalError(f"canonical basis has {q.shape[1]} columns, expected {k}")
    return q
