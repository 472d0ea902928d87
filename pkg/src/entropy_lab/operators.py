"""Hermitian linear algebra on small finite-dimensional spaces.

Operators are square numpy arrays (real or complex).  Eigendecompositions
come from LAPACK's Hermitian solver; accuracy is pinned by the
reconstruction tests rather than by the choice of algorithm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .kernel import DomainError, ShapeError

MAX_DIM = 64
HERMITIAN_TOL = 1e-12
# eigenvalues >= -POSITIVE_TOL * lambda_max are clamped to zero
POSITIVE_TOL = 1e-12
# eigenvalues <= SUPPORT_TOL * lambda_max are outside the support
SUPPORT_TOL = 1e-12
# eigenvalues closer than CLUSTER_TOL * lambda_max share a projector
CLUSTER_TOL = 1e-9
TRACE_TOL = 1e-12


def as_hermitian(X) -> np.ndarray:
    """Validate a square Hermitian matrix and return its symmetrized copy.

    Hermiticity is judged entrywise against the largest entry magnitude.
    """
    X = np.asarray(X)
    if X.ndim != 2 or X.shape[0] != X.shape[1] or X.shape[0] == 0:
        raise ShapeError(f"operator must be a non-empty square matrix, got shape {X.shape}")
    if X.shape[0] > MAX_DIM:
        raise DomainError(f"dimension {X.shape[0]} exceeds the cap of {MAX_DIM}")
    X = X.astype(complex if np.iscomplexobj(X) else float, copy=False)
    mag = float(np.abs(X).max())
    if not math.isfinite(mag):
        raise DomainError("operator entries must be finite")
    H = X.conj().T
    if float(np.abs(X - H).max()) > HERMITIAN_TOL * max(1.0, mag):
        raise DomainError("operator is not Hermitian")
    return 0.5 * (X + H)


def _eigh(X: np.ndarray):
    w, V = np.linalg.eigh(X)
    return w, V


def _positive_spectrum(A: np.ndarray):
    """Clamped eigenvalues, eigenvectors and support mask of a PSD operator."""
    w, V = _eigh(A)
    top = max(abs(float(w[0])), abs(float(w[-1])))
    if w[0] < -POSITIVE_TOL * top:
        raise DomainError(f"operator is not positive semidefinite (eigenvalue {w[0]:.3e})")
    w = np.where(w > SUPPORT_TOL * top, w, 0.0)
    return w, V, w > 0


def as_positive(A) -> np.ndarray:
    A = as_hermitian(A)
    _positive_spectrum(A)
    return A


def as_density(rho) -> np.ndarray:
    rho = as_positive(rho)
    tr = float(np.trace(rho).real)
    if abs(tr - 1.0) > TRACE_TOL:
        raise DomainError(f"density operator has trace {tr!r}, not 1")
    return rho


def _same_dim(X, Y):
    if X.shape != Y.shape:
        raise ShapeError(f"dimension mismatch: {X.shape} vs {Y.shape}")


@dataclass
class SpectralDecomposition:
    """Distinct eigenvalues (descending) and their orthogonal projectors."""

    eigenvalues: np.ndarray
    projectors: List[np.ndarray]
    multiplicities: List[int]
    support_rank: int
    eigvecs: np.ndarray = field(repr=False)

    def reconstruct(self) -> np.ndarray:
        return sum(a * P for a, P in zip(self.eigenvalues, self.projectors))


def eigendecompose(X) -> SpectralDecomposition:
    X = as_hermitian(X)
    w, V = _eigh(X)
    order = np.argsort(w)[::-1]
    w, V = w[order], V[:, order]
    top = float(np.max(np.abs(w)))
    tol = CLUSTER_TOL * top
    groups: List[List[int]] = [[0]]
    for k in range(1, len(w)):
        if w[groups[-1][-1]] - w[k] <= tol:
            groups[-1].append(k)
        else:
            groups.append([k])
    values, projs, mult = [], [], []
    for g in groups:
        vecs = V[:, g]
        values.append(float(np.mean(w[g])))
        projs.append(vecs @ vecs.conj().T)
        mult.append(len(g))
    rank = int(np.sum(np.abs(w) > SUPPORT_TOL * top))
    return SpectralDecomposition(np.array(values), projs, mult, rank, V)


def power_on_support(A, exponent: float) -> np.ndarray:
    """``A**exponent`` with the power taken on the support only.

    Exponent 0 gives the support projector and -1 the generalized inverse.
    """
    A = as_hermitian(A)
    w, V, sup = _positive_spectrum(A)
    d = np.zeros_like(w)
    d[sup] = w[sup] ** exponent
    return (V * d) @ V.conj().T


def trace_norm(X) -> float:
    X = as_hermitian(X)
    return float(np.abs(np.linalg.eigvalsh(X)).sum())


def trace_distance_quantum(X, Y) -> float:
    """Half the trace norm of ``X - Y``."""
    X, Y = as_hermitian(X), as_hermitian(Y)
    _same_dim(X, Y)
    return 0.5 * float(np.abs(np.linalg.eigvalsh(X - Y)).sum())


def hs_inner(X, Y) -> complex:
    """Hilbert-Schmidt inner product ``tr(X* Y)``."""
    X, Y = np.asarray(X), np.asarray(Y)
    _same_dim(X, Y)
    return complex(np.vdot(X, Y))


def jordan_basis(X, Y) -> Tuple[np.ndarray, int]:
    """Eigenbasis of ``X - Y`` ordered nonnegative-first.

    Returns the unitary whose columns are the eigenvectors and the number
    of leading columns spanning the nonnegative part.  Zero eigenvalues
    (within ``SUPPORT_TOL`` of the operator scale) go to the nonnegative
    part.
    """
    X, Y = as_hermitian(X), as_hermitian(Y)
    _same_dim(X, Y)
    w, V = _eigh(X - Y)
    scale = max(float(np.max(np.abs(np.linalg.eigvalsh(X)))),
                float(np.max(np.abs(np.linalg.eigvalsh(Y)))))
    plus = w >= -SUPPORT_TOL * scale
    idx = np.concatenate([np.flatnonzero(plus), np.flatnonzero(~plus)])
    return V[:, idx], int(plus.sum())


def jordan_projectors(X, Y) -> Tuple[np.ndarray, np.ndarray]:
    """Projectors onto the nonnegative and negative eigenspaces of ``X - Y``.

    They sum to the identity.
    """
    U, n_plus = jordan_basis(X, Y)
    Up, Um = U[:, :n_plus], U[:, n_plus:]
    return Up @ Up.conj().T, Um @ Um.conj().T


def _check_basis(basis: np.ndarray, d: int):
    if basis.shape != (d, d):
        raise DomainError(f"basis must be {d}x{d} with one vector per column, got {basis.shape}")
    if np.linalg.norm(basis.conj().T @ basis - np.eye(d)) > 1e-10:
        raise DomainError("basis is not orthonormal and complete")


def pinching_map(X, basis) -> np.ndarray:
    """Keep only the diagonal of ``X`` in the orthonormal basis given by
    the columns of ``basis``.
    """
    X = as_hermitian(X)
    basis = np.asarray(basis)
    _check_basis(basis, X.shape[0])
    diag = np.einsum("ik,ij,jk->k", basis.conj(), X, basis).real
    return (basis * diag) @ basis.conj().T


def _check_projector(P: np.ndarray, name: str):
    if np.linalg.norm(P @ P - P) > 1e-10 or np.linalg.norm(P - P.conj().T) > 1e-10:
        raise DomainError(f"{name} is not an orthogonal projector")


def coarse_grain_two_point(X, plus, minus) -> Tuple[float, float]:
    """Two-outcome statistics ``(tr(P+ X), tr(P- X))`` for a complementary
    pair of projectors.
    """
    X = as_hermitian(X)
    plus, minus = np.asarray(plus), np.asarray(minus)
    _same_dim(X, plus)
    _same_dim(X, minus)
    _check_projector(plus, "plus projector")
    _check_projector(minus, "minus projector")
    if np.linalg.norm(plus + minus - np.eye(X.shape[0])) > 1e-10:
        raise DomainError("projectors do not sum to the identity")
    return float(np.trace(plus @ X).real), float(np.trace(minus @ X).real)
