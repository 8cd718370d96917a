"""Cyclic Jacobi routines for tiny dense matrices (dimension <= 4 or so).

``jacobi_svd`` is the one-sided (Hestenes) variant: it applies the Jacobi
rotations that would diagonalize A*A directly to the columns of A, which
keeps small singular values accurate to working precision instead of the
square-rooted precision of forming A*A explicitly.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NumericalFailure

OFF_TOL = 1e-15
MAX_SWEEPS = 60


def _phase(z: complex) -> complex:
    a = abs(z)
    return z / a if a > 0 else 1.0


def _off_mass(A: np.ndarray) -> float:
    """Frobenius norm of the off-diagonal part."""
    return float(np.linalg.norm(A - np.diag(np.diag(A))))


def jacobi_eigh(H: np.ndarray, tol: float = OFF_TOL, max_sweeps: int = MAX_SWEEPS):
    """Eigen-decomposition of a Hermitian matrix.

    Returns ``(w, U)`` with ``w`` ascending and ``H = U diag(w) U^*``.
    """
    A = np.array(H, dtype=complex)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("jacobi_eigh needs a square matrix")
    A = 0.5 * (A + A.conj().T)
    U = np.eye(n, dtype=complex)
    scale = max(np.linalg.norm(A), 1e-300)
    for _ in range(max_sweeps):
        off = _off_mass(A)
        if off <= tol * scale:
            break
        for i in range(n - 1):
            for j in range(i + 1, n):
                g = A[i, j]
                if abs(g) <= 1e-300:
                    continue
                ph = _phase(g)
                zeta = (A[j, j].real - A[i, i].real) / (2 * abs(g))
                t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + math.hypot(1.0, zeta))
                c = 1 / math.sqrt(1 + t * t)
                s = c * t
                # same rotation as jacobi_svd applies to the columns of A
                G = np.eye(n, dtype=complex)
                G[i, i] = c
                G[j, i] = -s / ph
                G[i, j] = s
                G[j, j] = c / ph
                A = G.conj().T @ A @ G
                U = U @ G
    else:
        raise NumericalFailure("Jacobi eigen-iteration did not converge", _off_mass(A))
    w = np.diag(A).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], U[:, order]


def jacobi_svd(A: np.ndarray, tol: float = OFF_TOL, max_sweeps: int = MAX_SWEEPS):
    """Thin SVD by one-sided Jacobi.

    Returns ``(U, s, V)`` with ``s`` nonincreasing (length ``cols``),
    ``A = U diag(s) V^*``, ``V`` unitary.  Columns of ``U`` belonging to
    zero singular values are zero vectors.
    """
    W = np.array(A, dtype=complex)
    m, n = W.shape
    # work at unit scale so inner products neither underflow nor overflow
    big = float(np.abs(W).max()) if W.size else 0.0
    e = int(np.frexp(big)[1]) if big > 0 else 0
    W = np.ldexp(W.real, -e) + 1j * np.ldexp(W.imag, -e)
    scale = math.ldexp(1.0, e)
    V = np.eye(n, dtype=complex)
    # columns below this squared length are numerically zero; rotating them
    # only chases rounding noise
    tiny = (4 * np.finfo(float).eps * max(np.linalg.norm(W), 1.0)) ** 2
    converged = False
    worst = 0.0
    for _ in range(max_sweeps):
        worst = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                alpha = float(np.vdot(W[:, i], W[:, i]).real)
                beta = float(np.vdot(W[:, j], W[:, j]).real)
                gamma = np.vdot(W[:, i], W[:, j])
                ag = abs(gamma)
                if ag == 0.0 or alpha <= tiny or beta <= tiny:
                    continue
                rel = ag / math.sqrt(alpha * beta)
                worst = max(worst, rel)
                if rel <= tol:
                    continue
                ph = gamma / ag
                zeta = (beta - alpha) / (2 * ag)
                t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + math.hypot(1.0, zeta))
                c = 1 / math.sqrt(1 + t * t)
                s = c * t
                wi = W[:, i].copy()
                wj = W[:, j] / ph
                W[:, i] = c * wi - s * wj
                W[:, j] = s * wi + c * wj
                vi = V[:, i].copy()
                vj = V[:, j] / ph
                V[:, i] = c * vi - s * vj
                V[:, j] = s * vi + c * vj
        if worst <= tol:
            converged = True
            break
    if not converged:
        raise NumericalFailure("one-sided Jacobi did not converge", worst)
    s = np.sqrt(np.einsum("ij,ij->j", W.conj(), W).real)
    order = np.argsort(-s, kind="stable")
    s = s[order]
    W = W[:, order]
    V = V[:, order]
    U = np.zeros_like(W)
    nz = s > 0
    U[:, nz] = W[:, nz] / s[nz]
    return U, s * scale, V


def singular_values(A: np.ndarray) -> np.ndarray:
    return jacobi_svd(A)[1]
