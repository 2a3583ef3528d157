"""Dense real symmetric linear algebra.

Everything here works on small numpy arrays. The eigensolver is a cyclic
Jacobi sweep so that the spectral machinery has no dependency beyond numpy
array arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from projeu.exceptions import ConvergenceError, InvariantError

__all__ = [
    "SpectralDecomposition",
    "inner",
    "normalize",
    "sym_matrix",
    "is_orthonormal",
    "eigh",
    "reconstruct",
]

# Asymmetry accepted (and averaged away) by sym_matrix, relative to scale.
SYMMETRY_TOL = 1e-12
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def inner(x, y) -> float:
    """Euclidean inner product of two equal-length real vectors."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or y.ndim != 1:
        raise InvariantError("inner expects one-dimensional vectors")
    if x.shape != y.shape:
        raise InvariantError(f"length mismatch: {x.shape[0]} vs {y.shape[0]}")
    return float(math.fsum(x * y))


def normalize(x) -> np.ndarray:
    """Return ``x / ||x||``; raises on the zero vector."""
    x = np.asarray(x, dtype=float)
    norm = float(np.linalg.norm(x))
    if norm == 0.0 or not np.isfinite(norm):
        raise InvariantError("cannot normalize a zero or non-finite vector")
    return x / norm


def sym_matrix(entries, tol: float = SYMMETRY_TOL) -> np.ndarray:
    """Validate a square real matrix and return an exactly symmetric copy.

    Asymmetries up to ``tol`` (relative to the largest entry) are treated as
    rounding and averaged out; anything larger is rejected. The returned
    array is read-only.
    """
    m = np.array(entries, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise InvariantError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvariantError("matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(m))))
    asym = float(np.max(np.abs(m - m.T)))
    if asym > tol * scale:
        raise InvariantError(f"matrix is not symmetric (max |m_ij - m_ji| = {asym:.3g})")
    return _frozen(0.5 * (m + m.T))


def is_orthonormal(rows, tol: float = 1e-10) -> bool:
    """True if the rows of a square matrix are pairwise orthonormal."""
    rows = np.asarray(rows, dtype=float)
    if rows.ndim != 2 or rows.shape[0] != rows.shape[1]:
        return False
    gram = rows @ rows.T
    return bool(np.max(np.abs(gram - np.eye(rows.shape[0]))) <= tol)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in descending order with matching eigenvector rows.

    ``eigenvectors[i]`` belongs to ``eigenvalues[i]``, so the source matrix is
    ``eigenvectors.T @ diag(eigenvalues) @ eigenvectors``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", _frozen(self.eigenvalues))
        object.__setattr__(self, "eigenvectors", _frozen(self.eigenvectors))
        n = self.eigenvalues.shape[0]
        if self.eigenvalues.ndim != 1 or self.eigenvectors.shape != (n, n):
            raise InvariantError("eigenvalue/eigenvector shapes do not match")

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        return reconstruct(self)


def _off_norm(a):
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def _fix_signs(rows):
    # First nonzero component of each row made nonnegative.
    for r in rows:
        nz = np.flatnonzero(np.abs(r) > 1e-14)
        if nz.size and r[nz[0]] < 0:
            r *= -1.0
    return rows


def eigh(m, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS) -> SpectralDecomposition:
    """Spectral decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps stop once the Frobenius norm of the off-diagonal part drops below
    ``tol`` times ``max(1, ||m||_F)``.

    Raises
    ------
    ConvergenceError
        If ``max_sweeps`` sweeps do not reach the threshold.
    """
    a = np.array(sym_matrix(m), dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    threshold = tol * max(1.0, float(np.linalg.norm(a)))

    sweeps = 0
    while _off_norm(a) > threshold:
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi iteration did not converge in {max_sweeps} sweeps",
                state=a,
                residual=_off_norm(a),
            )
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                app, aqq = a[p, p], a[q, q]
                # Below rounding level of the diagonal: drop instead of rotating.
                if abs(apq) <= 1e-18 * (abs(app) + abs(aqq)) or abs(apq) < 1e-300:
                    a[p, q] = a[q, p] = 0.0
                    continue
                tau = (aqq - app) / (2.0 * apq)
                if abs(tau) > 1e150:
                    t = 0.5 / tau
                else:
                    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c

                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0

                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq

    values = np.diag(a).copy()
    order = np.argsort(-values, kind="stable")
    rows = _fix_signs(v.T[order].copy())
    return SpectralDecomposition(values[order], rows, sweeps)


def reconstruct(d: SpectralDecomposition) -> np.ndarray:
    """Rebuild ``P' D P`` from a decomposition, as a symmetric read-only array."""
    p = d.eigenvectors
    m = p.T @ (d.eigenvalues[:, None] * p)
    return _frozen(0.5 * (m + m.T))
