"""Dense kernel for the small symmetric matrices used throughout the package.

Everything targets matrices of order <= 8: eigenvalues by cyclic Jacobi
rotations, positive definiteness by Cholesky pivots, inversion by
Gauss-Jordan elimination with partial pivoting.  The routines are
deliberately self-contained so that certificate verification never shares
numerics with the search that produced the certificate.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidInputError, SingularMatrixError

# Sweeping stops once the off-diagonal Frobenius norm falls below this
# fraction of the full Frobenius norm.
JACOBI_TOL_FACTOR = 1e-12
_MAX_SWEEPS = 60

# Condition estimates at or above this threshold are treated as singular.
MAX_CONDITION = 1e12


def as_matrix(m) -> np.ndarray:
    """Coerce to a float matrix, rejecting non-finite entries."""
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise InvalidInputError(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise InvalidInputError("matrix entries must be finite")
    return a


def symmetrize(m) -> np.ndarray:
    """Return (M + M^T)/2 so downstream code sees an exactly symmetric array."""
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise InvalidInputError(f"cannot symmetrize a {a.shape} matrix")
    return (a + a.T) / 2.0


def transpose(a) -> np.ndarray:
    return as_matrix(a).T.copy()


def matmul(a, b) -> np.ndarray:
    am = as_matrix(a)
    bm = as_matrix(b)
    if am.shape[1] != bm.shape[0]:
        raise InvalidInputError(
            f"inner dimensions disagree: {am.shape} times {bm.shape}"
        )
    return am @ bm


def sym_eigh(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns (eigenvalues ascending, eigenvectors as matching columns).
    The input is symmetrized first, so tiny asymmetries from floating
    rounding are tolerated.
    """
    a = symmetrize(m)
    n = a.shape[0]
    v = np.eye(n)
    scale = float(np.sqrt((a * a).sum()))
    if scale == 0.0:
        return np.zeros(n), v
    threshold = JACOBI_TOL_FACTOR * scale
    off_mask = ~np.eye(n, dtype=bool)
    for _ in range(_MAX_SWEEPS):
        # summed directly over the off-diagonal entries; the subtraction
        # form (full norm minus diagonal) cancels to zero too early
        off = np.sqrt((a[off_mask] ** 2).sum())
        if off <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = 1.0 / (tau - np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                app, aqq = a[p, p], a[q, q]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = a[q, p] = 0.0
                for r in range(n):
                    if r == p or r == q:
                        continue
                    arp, arq = a[r, p], a[r, q]
                    a[r, p] = a[p, r] = c * arp - s * arq
                    a[r, q] = a[q, r] = s * arp + c * arq
                for r in range(n):
                    vrp, vrq = v[r, p], v[r, q]
                    v[r, p] = c * vrp - s * vrq
                    v[r, q] = s * vrp + c * vrq
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def sym_eigenvalues(m) -> np.ndarray:
    """Eigenvalues of a symmetric matrix, sorted ascending."""
    return sym_eigh(m)[0]


def is_positive_definite(m) -> bool:
    """True iff the Cholesky factorization succeeds with all pivots > 0."""
    a = symmetrize(m)
    n = a.shape[0]
    chol = np.zeros_like(a)
    for j in range(n):
        pivot = a[j, j] - float(chol[j, :j] @ chol[j, :j])
        if not (np.isfinite(pivot) and pivot > 0.0):
            return False
        d = np.sqrt(pivot)
        chol[j, j] = d
        for i in range(j + 1, n):
            chol[i, j] = (a[i, j] - float(chol[i, :j] @ chol[j, :j])) / d
    return True


def condition_estimate(m) -> float:
    """Ratio of extreme singular values, via the eigenvalues of M^T M."""
    a = as_matrix(m)
    gram = a.T @ a
    w = sym_eigenvalues(gram)
    largest = float(w[-1])
    smallest = float(w[0])
    if largest <= 0.0 or smallest <= largest * 1e-32:
        return float("inf")
    return float(np.sqrt(largest / smallest))


def invert(m) -> np.ndarray:
    """Inverse by Gauss-Jordan elimination with partial pivoting.

    Raises SingularMatrixError when the condition estimate reaches 1e12.
    """
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise InvalidInputError(f"cannot invert a {a.shape} matrix")
    cond = condition_estimate(a)
    if not cond < MAX_CONDITION:
        raise SingularMatrixError("matrix is singular or near-singular", cond)
    n = a.shape[0]
    work = np.hstack([a.copy(), np.eye(n)])
    for col in range(n):
        pivot_row = col + int(np.argmax(np.abs(work[col:, col])))
        if work[pivot_row, col] == 0.0:
            raise SingularMatrixError("zero pivot during elimination", cond)
        if pivot_row != col:
            work[[col, pivot_row]] = work[[pivot_row, col]]
        work[col] /= work[col, col]
        for r in range(n):
            if r != col and work[r, col] != 0.0:
                work[r] -= work[r, col] * work[col]
    return work[:, n:].copy()
