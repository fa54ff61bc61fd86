"""Dense linear-algebra primitives used by the transforms and the solver.

Everything works on plain float64 ndarrays. Decompositions pin a sign
convention (first non-negligible entry of each vector positive) so repeated
runs of the same build give bit-identical results.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import (
    NoConvergenceError,
    NonSymmetricError,
    SingularShiftError,
    SizeOverflowError,
)

# Elements allowed in a Kronecker product result (2**26 doubles = 512 MiB).
KRON_ELEMENT_BUDGET = 1 << 26


def as_matrix(a, name="matrix"):
    """Validate and convert to a nonempty, finite, 2-D float64 array."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"{name} must be a nonempty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf")
    return arr


class SymEig(NamedTuple):
    values: np.ndarray   # eigenvalues, descending
    vectors: np.ndarray  # orthonormal columns paired with `values`


class ThinSvd(NamedTuple):
    u: np.ndarray        # m x r, column-orthonormal
    sigma: np.ndarray    # r nonnegative values, descending
    v: np.ndarray        # n x r, column-orthonormal


def _column_sign_flips(vectors, rel_tol=1e-12):
    """Signs that make the first non-negligible entry of each column positive."""
    mags = np.abs(vectors)
    tops = mags.max(axis=0)
    signs = np.ones(vectors.shape[1])
    for j, top in enumerate(tops):
        if top == 0.0:
            continue
        lead = int(np.argmax(mags[:, j] > rel_tol * top))
        if vectors[lead, j] < 0.0:
            signs[j] = -1.0
    return signs


def sym_eig(a):
    """Eigendecomposition of a symmetric matrix, eigenvalues descending.

    Raises NonSymmetricError when the input fails the symmetry check and
    NoConvergenceError if the underlying QR iteration gives up.
    """
    a = as_matrix(a, "A")
    m, n = a.shape
    if m != n:
        raise NonSymmetricError(f"expected a square matrix, got {m}x{n}")
    scale = np.abs(a).max()
    if scale > 0.0 and np.abs(a - a.T).max() > 1e-10 * scale:
        raise NonSymmetricError("matrix is not symmetric within 1e-10 relative")
    try:
        values, vectors = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NoConvergenceError(str(exc)) from exc
    order = np.argsort(-values, kind="stable")  # ties keep eigh's order
    values = values[order]
    vectors = vectors[:, order]
    vectors = vectors * _column_sign_flips(vectors)
    return SymEig(values, vectors)


def thin_svd(a):
    """Thin SVD with r = min(m, n) and the shared sign convention on U."""
    a = as_matrix(a, "A")
    try:
        u, sigma, vt = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NoConvergenceError(str(exc)) from exc
    signs = _column_sign_flips(u)
    return ThinSvd(u * signs, sigma, vt.T * signs)


def kronecker(a, b, max_elements=KRON_ELEMENT_BUDGET):
    """Kronecker product A (x) B with an output-size budget."""
    a = as_matrix(a, "A")
    b = as_matrix(b, "B")
    out_elems = a.size * b.size
    if out_elems > max_elements:
        raise SizeOverflowError(
            f"kronecker result would hold {out_elems} elements "
            f"(budget {max_elements})"
        )
    return np.kron(a, b)


def solve_shifted_gram(z, rho, m_rhs, svd=None):
    """Solve (2*rho*I - 2*Z*Z^T) W = M without forming the m-by-m system.

    With Z = U diag(s) V^T this is

        W = M/(2 rho) + U [diag(1/(2 rho - 2 s_i^2)) - I/(2 rho)] U^T M,

    O(mnk) instead of O(m^3). Pass a precomputed ``svd`` of Z to amortize
    the factorization across repeated solves with the same Z.
    """
    z = as_matrix(z, "Z")
    m_rhs = as_matrix(m_rhs, "M")
    m, n = z.shape
    if n > m:
        raise ValueError(f"Z must be tall or square, got {m}x{n}")
    if m_rhs.shape[0] != m:
        raise ValueError(f"M has {m_rhs.shape[0]} rows, expected {m}")
    if not rho > 0.0:
        raise ValueError("rho must be positive")
    if svd is None:
        svd = thin_svd(z)
    sig2 = svd.sigma**2
    denom = 2.0 * rho - 2.0 * sig2
    gap_floor = 1e-10 * max(2.0 * rho, 2.0 * float(sig2[0]))
    if np.abs(denom).min() < gap_floor:
        raise SingularShiftError(
            "2*rho is within the relative gap of a squared singular value"
        )
    coeff = 1.0 / denom - 1.0 / (2.0 * rho)
    ut_m = svd.u.T @ m_rhs
    return m_rhs / (2.0 * rho) + svd.u @ (coeff[:, None] * ut_m)
