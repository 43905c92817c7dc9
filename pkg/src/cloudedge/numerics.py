# cloudedge/numerics.py
"""Complex Hermitian helpers and the two log-det functionals behind every
rate expression and convex surrogate in this package.

All matrices are small (dimension <= 8 at desk scale), so eigendecomposition
is the canonical route for square roots and PSD projection.
"""
from __future__ import annotations

import numpy as np

LN2 = float(np.log(2.0))

__all__ = [
    "LN2",
    "psi",
    "phi",
    "logdet2",
    "hermitian_sqrt",
    "symmetrize",
]


def _as_matrix(a) -> np.ndarray:
    """Promote scalars/vectors to 2-D complex arrays."""
    m = np.atleast_2d(np.asarray(a, dtype=complex))
    return m


def symmetrize(m) -> np.ndarray:
    """Project onto the Hermitian PSD cone: (M + M^H)/2 with negative
    eigenvalues clipped to zero.

    Hermitian PSD input is returned unchanged (bitwise), so repeated calls
    are idempotent. Solver round-off otherwise compounds across iterations.
    """
    m = _as_matrix(m)
    h = 0.5 * (m + m.conj().T)
    w, v = np.linalg.eigh(h)
    if w.size == 0 or w[0] >= 0.0:
        return h
    w = np.clip(w, 0.0, None)
    return (v * w) @ v.conj().T


def logdet2(m) -> float:
    """Base-2 log-determinant of a Hermitian positive definite matrix via
    Cholesky (numerically stable; raises on non-PD input)."""
    m = _as_matrix(m)
    try:
        chol = np.linalg.cholesky(m)
    except np.linalg.LinAlgError as exc:
        raise ValueError("logdet2 requires a positive definite matrix") from exc
    return float(2.0 * np.sum(np.log2(np.real(np.diag(chol)))))


def psi(a, b) -> float:
    """log2 det(I + B^{-1} A) for Hermitian PSD A and Hermitian PD B.

    This is the mutual-information value of a Gaussian signal with
    covariance A observed in Gaussian noise of covariance B.
    """
    a = _as_matrix(a)
    b = _as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    val = logdet2(b + a) - logdet2(b)
    # A PSD guarantees nonnegativity; clip round-off residue.
    return max(val, 0.0)


def phi(a, b, c, d) -> float:
    """Concave lower bound on psi used by the matrix quadratic transform.

    phi(A, B, C, D) = log2 det(I + A) - tr(A)/ln2
                      + Re tr((I + A)(2 C^H B - B^H D B)) / ln2

    For the closed-form auxiliary values (A = SINR-like matrix, B = MMSE-like
    receive matrix) it coincides with the matched psi value; for any other
    (A, B) it lies below. The trace term picks the real part: the imaginary
    residue of 2 C^H B is a numerical artifact of a real-valued quantity.
    """
    a = _as_matrix(a)
    b = _as_matrix(b)
    c = _as_matrix(c)
    d = _as_matrix(d)
    if b.shape != c.shape:
        raise ValueError(f"B and C must share a shape: {b.shape} vs {c.shape}")
    m = a.shape[0]
    if a.shape[1] != m or b.shape[1] != m or d.shape[0] != d.shape[1] or d.shape[0] != b.shape[0]:
        raise ValueError("phi arguments are not conformable")
    eye_a = np.eye(m) + a
    inner = 2.0 * (c.conj().T @ b) - b.conj().T @ d @ b
    val = (
        logdet2(symmetrize(eye_a))
        - float(np.real(np.trace(a))) / LN2
        + float(np.real(np.trace(eye_a @ inner))) / LN2
    )
    return val


def reg_solve(m, rhs) -> np.ndarray:
    """Solve M x = rhs for Hermitian (near-)PD M, adding 1e-12 * trace * I
    when the condition number exceeds 1e12."""
    h = 0.5 * (_as_matrix(m) + _as_matrix(m).conj().T)
    if np.linalg.cond(h) > 1e12:
        bump = 1e-12 * max(float(np.real(np.trace(h))), np.finfo(float).tiny)
        h = h + bump * np.eye(h.shape[0])
    return np.linalg.solve(h, np.asarray(rhs, dtype=complex))


def hermitian_sqrt(m) -> np.ndarray:
    """Hermitian PSD square root S with S @ S = M.

    Raises on inputs that are not PSD beyond round-off (smallest eigenvalue
    below -1e-10 relative to the largest).
    """
    m = _as_matrix(m)
    h = 0.5 * (m + m.conj().T)
    w, v = np.linalg.eigh(h)
    scale = max(float(w[-1]), 0.0) if w.size else 0.0
    if w.size and float(w[0]) < -1e-10 * max(scale, 1.0):
        raise ValueError("hermitian_sqrt requires a PSD matrix")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T
