"""Dense complex-matrix primitives used throughout the toolkit.

Hermitian eigendecompositions, Takagi factorization of complex symmetric
matrices, Haar-random unitary sampling, and smallest-eigenvalue queries.
All functions are pure and operate on copies of their inputs.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, NotHermitian, NotSymmetric, NotUnitary

DEFAULT_TOL = 1e-9


def _as_square(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DimensionMismatch("matrix entries must be finite")
    return m


def is_hermitian(m, tol: float = DEFAULT_TOL) -> bool:
    m = np.asarray(m, dtype=complex)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and np.max(np.abs(m - m.conj().T)) <= tol


def is_symmetric(m, tol: float = DEFAULT_TOL) -> bool:
    m = np.asarray(m, dtype=complex)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and np.max(np.abs(m - m.T)) <= tol


def is_unitary(u, tol: float = DEFAULT_TOL) -> bool:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= tol


def require_hermitian(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    m = _as_square(m)
    dev = np.max(np.abs(m - m.conj().T))
    if dev > tol:
        raise NotHermitian(f"matrix deviates from Hermiticity by {dev:.3e}")
    return m


def require_symmetric(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    m = _as_square(m)
    dev = np.max(np.abs(m - m.T))
    if dev > tol:
        raise NotSymmetric(f"matrix deviates from symmetry by {dev:.3e}")
    return m


def require_unitary(u, tol: float = DEFAULT_TOL) -> np.ndarray:
    u = _as_square(u)
    dev = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if dev > tol:
        raise NotUnitary(f"matrix deviates from unitarity by {dev:.3e}")
    return u


def hermitian_eigendecomposition(m, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecompose a Hermitian matrix.

    Args:
        m: Hermitian matrix (within ``tol``).

    Returns:
        ``(eigenvalues, basis)`` with eigenvalues real and descending and
        ``basis`` unitary such that ``basis† @ m @ basis = diag(eigenvalues)``.
    """
    m = require_hermitian(m, tol)
    w, v = np.linalg.eigh(m)
    return np.ascontiguousarray(w[::-1]), np.ascontiguousarray(v[:, ::-1])


def min_eigenvalue_hermitian(m, tol: float = DEFAULT_TOL) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    m = require_hermitian(m, tol)
    return float(np.linalg.eigvalsh(m)[0])


def _takagi_congruence(a: np.ndarray, cluster_tol: float) -> tuple[np.ndarray, np.ndarray]:
    # A = u diag(s) vh. For symmetric A the matrix z = u† vh^T is unitary and
    # block diagonal across distinct singular values; a blockwise symmetric
    # square root absorbs it into u, giving A = V diag(s) V^T.
    u, s, vh = np.linalg.svd(a)
    z = u.conj().T @ vh.T

    n = a.shape[0]
    root = np.zeros((n, n), dtype=complex)
    start = 0
    for stop in range(1, n + 1):
        if stop < n and s[stop - 1] - s[stop] <= cluster_tol:
            continue
        block = z[start:stop, start:stop]
        block = 0.5 * (block + block.T)
        y = scipy.linalg.sqrtm(block)
        root[start:stop, start:stop] = 0.5 * (y + y.T)
        start = stop
    return s, u @ root


def takagi_factorize(a, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Takagi factorization of a complex symmetric matrix.

    Args:
        a: complex symmetric matrix (within ``tol``).

    Returns:
        ``(singular_values, congruence)`` with singular values descending and
        ``congruence`` unitary such that ``V @ diag(s) @ V.T = a``. The
        singular values coincide with the ordinary SVD singular values.
    """
    a = require_symmetric(a, tol)
    n = a.shape[0]
    scale = max(1.0, float(np.max(np.abs(a))) if n else 1.0)
    cluster_tol = 1e-8 * scale

    best_v = None
    best_res = np.inf
    # A global phase moves sqrtm branch points; retry if the first pass is poor.
    for phase in (0.0, 0.5, 1.3):
        rot = np.exp(1j * phase)
        s, v = _takagi_congruence(rot * a, cluster_tol)
        v = v * np.exp(-0.5j * phase)
        res = np.max(np.abs((v * s) @ v.T - a)) if n else 0.0
        if res < best_res:
            best_res, best_v, best_s = res, v, s
        if best_res <= 1e-12 * scale:
            break
    return best_s, best_v


def haar_random_unitary(n: int, seed) -> np.ndarray:
    """Haar-distributed random unitary, deterministic per seed.

    Args:
        n: matrix size, at least 1.
        seed: integer seed or a ``numpy.random.Generator``.
    """
    if n < 1:
        raise DimensionMismatch(f"unitary size must be >= 1, got {n}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def trace_norm(m) -> float:
    """Sum of singular values."""
    m = np.asarray(m, dtype=complex)
    if m.size == 0:
        return 0.0
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def random_hermitian(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * 0.5 * (g + g.conj().T)


def random_complex_symmetric(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * 0.5 * (g + g.T)
