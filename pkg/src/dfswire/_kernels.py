"""Cyclic Jacobi eigensolver for complex Hermitian matrices.

Two interchangeable implementations of the same sweep: a numba ``@njit``
kernel with scalar inner loops, and a pure-numpy version that applies each
rotation as a 2-column slice update. The numba path is used unless the
environment variable ``DFSWIRE_DISABLE_NUMBA`` is set to a true value or
numba cannot be imported.

Both return ``(diag, vectors, off_norm, sweeps)`` with the diagonal left
unsorted; ordering and phase conventions live in :mod:`dfswire.linalg`.
"""

import math
import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False


def _flag(name):
    return os.environ.get(name, "").strip().lower() in {"1", "true", "yes", "on"}


USE_NUMBA = HAVE_NUMBA and not _flag("DFSWIRE_DISABLE_NUMBA")


def _rotation(app, aqq, apq):
    """2x2 unitary that zeroes the (p, q) entry of a Hermitian block.

    The block is first made real by a phase on the q axis, then a real Jacobi
    rotation with the smaller-angle root is applied.
    """
    mag = abs(apq)
    ph = apq / mag
    theta = (aqq - app) / (2.0 * mag)
    if theta >= 0.0:
        t = 1.0 / (theta + math.sqrt(theta * theta + 1.0))
    else:
        t = -1.0 / (-theta + math.sqrt(theta * theta + 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c
    phc = ph.conjugate()
    return c + 0j, s + 0j, -s * phc, c * phc, t * mag


def _off_norm_numpy(a):
    off = a[~np.eye(a.shape[0], dtype=bool)]
    return float(np.sqrt(np.sum(off.real**2 + off.imag**2)))


def jacobi_numpy(a, max_sweeps, tol):
    a = np.array(a, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    skip = tol / max(n, 1)
    off = _off_norm_numpy(a)
    sweeps = 0
    while off > tol and sweeps < max_sweeps:
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= skip:
                    continue
                app, aqq = a[p, p].real, a[q, q].real
                g00, g01, g10, g11, shift = _rotation(app, aqq, apq)
                g = np.array([[g00, g01], [g10, g11]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                v[:, idx] = v[:, idx] @ g
                a[p, p] = app - shift
                a[q, q] = aqq + shift
                a[p, q] = 0.0
                a[q, p] = 0.0
        off = _off_norm_numpy(a)
    return np.diag(a).real.copy(), v, off, sweeps


def _jacobi_scalar(a, max_sweeps, tol):
    a = a.copy()
    n = a.shape[0]
    v = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        v[i, i] = 1.0
    skip = tol / max(n, 1)

    off = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                off += a[i, j].real ** 2 + a[i, j].imag ** 2
    off = math.sqrt(off)

    sweeps = 0
    while off > tol and sweeps < max_sweeps:
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= skip:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                ph = apq / mag
                theta = (aqq - app) / (2.0 * mag)
                if theta >= 0.0:
                    t = 1.0 / (theta + math.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                phc = ph.conjugate()
                g00 = c + 0j
                g01 = s + 0j
                g10 = -s * phc
                g11 = c * phc
                for k in range(n):
                    x = a[k, p]
                    y = a[k, q]
                    a[k, p] = x * g00 + y * g10
                    a[k, q] = x * g01 + y * g11
                for k in range(n):
                    x = a[p, k]
                    y = a[q, k]
                    a[p, k] = g00.conjugate() * x + g10.conjugate() * y
                    a[q, k] = g01.conjugate() * x + g11.conjugate() * y
                for k in range(n):
                    x = v[k, p]
                    y = v[k, q]
                    v[k, p] = x * g00 + y * g10
                    v[k, q] = x * g01 + y * g11
                a[p, p] = app - t * mag
                a[q, q] = aqq + t * mag
                a[p, q] = 0.0
                a[q, p] = 0.0
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j].real ** 2 + a[i, j].imag ** 2
        off = math.sqrt(off)

    d = np.empty(n)
    for i in range(n):
        d[i] = a[i, i].real
    return d, v, off, sweeps


if HAVE_NUMBA:
    jacobi_numba = njit(cache=True)(_jacobi_scalar)
else:  # pragma: no cover
    jacobi_numba = None


def jacobi(a, max_sweeps=100, tol=1e-12, backend=None):
    """Dispatch to the selected backend ("numba" or "numpy")."""
    if backend is None:
        backend = "numba" if USE_NUMBA else "numpy"
    a = np.ascontiguousarray(a, dtype=np.complex128)
    if backend == "numba":
        if jacobi_numba is None:  # pragma: no cover
            raise RuntimeError("numba backend requested but numba is not installed")
        d, v, off, sweeps = jacobi_numba(a, max_sweeps, tol)
        return d, v, float(off), int(sweeps)
    if backend == "numpy":
        return jacobi_numpy(a, max_sweeps, tol)
    raise ValueError(f"unknown backend {backend!r}")
