"""Dense complex linear algebra on spaces of matrices.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  A linear
subspace of ``B(H, K)`` (``dim K x dim H`` matrices) is stored as an
:class:`OperatorSubspace`, an orthonormal basis for the Hilbert-Schmidt
inner product ``<A, B> = trace(A^* B)``.

Vectorization is row-major throughout: ``vec(A) = A.reshape(-1)``, so that
``<A, B> = vdot(vec(A), vec(B))`` and ``vec(A X B) = kron(A, B.T) vec(X)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ShapeError


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by every comparison in the package.

    rank_tol
        Relative singular-value cutoff (always relative to the largest one).
    membership_tol
        Relative residual bound for subspace membership.
    eq_tol
        Absolute entrywise / Frobenius bound for matrix identities.
    """

    rank_tol: float = 1e-10
    membership_tol: float = 1e-8
    eq_tol: float = 1e-9

    def __post_init__(self):
        for name in ("rank_tol", "membership_tol", "eq_tol"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")

    def as_dict(self) -> dict:
        return {"rank_tol": self.rank_tol, "membership_tol": self.membership_tol,
                "eq_tol": self.eq_tol}


DEFAULT_TOL = Tolerances()


def as_matrix(m) -> np.ndarray:
    """Coerce ``m`` to a finite 2-d complex array, rejecting anything else."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ShapeError(f"expected a 2-d matrix, got array of shape {a.shape}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ShapeError(f"matrix must have positive dimensions, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def matrix_unit(i: int, j: int, rows: int, cols: int | None = None) -> np.ndarray:
    """The matrix unit ``E_ij`` (0-based) of the given shape."""
    cols = rows if cols is None else cols
    e = np.zeros((rows, cols), dtype=complex)
    e[i, j] = 1.0
    return e


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def frobenius(m: np.ndarray) -> float:
    return float(np.linalg.norm(np.ravel(m)))


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product ``trace(a^* b)``, antilinear in ``a``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")
    return complex(np.vdot(a.ravel(), b.ravel()))


def kron(a, b) -> np.ndarray:
    """Kronecker product; entry ``(i*rows_b + k, j*cols_b + l)`` is ``a[i,j] b[k,l]``."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


@dataclass(frozen=True, eq=False)
class OperatorSubspace:
    """Orthonormal basis of a subspace of ``B(C^domain_dim, C^codomain_dim)``.

    ``basis`` has shape ``(k, codomain_dim, domain_dim)``.  Construct through
    :func:`orthonormalize` (or the helpers below) unless the basis is already
    known to be orthonormal.
    """

    domain_dim: int
    codomain_dim: int
    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=complex).reshape(-1, self.codomain_dim, self.domain_dim)
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def shape(self) -> tuple:
        """Shape of the member matrices, ``(codomain_dim, domain_dim)``."""
        return (self.codomain_dim, self.domain_dim)

    @property
    def ambient_dim(self) -> int:
        return self.codomain_dim * self.domain_dim

    @property
    def vectors(self) -> np.ndarray:
        """Basis as rows of vectorized matrices, shape ``(k, codomain*domain)``."""
        return self.basis.reshape(self.dim, -1)

    def __len__(self):
        return self.dim

    def __iter__(self):
        return iter(self.basis)

    def __repr__(self):
        return (f"OperatorSubspace(dim={self.dim}, shape={self.codomain_dim}x{self.domain_dim})")


def zero_subspace(shape) -> OperatorSubspace:
    rows, cols = shape
    return OperatorSubspace(cols, rows, np.zeros((0, rows, cols), dtype=complex))


def full_subspace(shape) -> OperatorSubspace:
    """All of ``B(C^cols, C^rows)``, basis of matrix units in row-major order."""
    rows, cols = shape
    return OperatorSubspace(cols, rows, np.eye(rows * cols, dtype=complex).reshape(-1, rows, cols))


def _check_shape(s: OperatorSubspace, m: np.ndarray):
    if m.shape[-2:] != s.shape:
        raise ShapeError(f"matrix of shape {m.shape[-2:]} does not live in a {s.shape} subspace")


def orthonormalize(vectors: Iterable, shape=None, tol: Tolerances = DEFAULT_TOL) -> OperatorSubspace:
    """Orthonormal basis for the span of ``vectors``.

    Gram-Schmidt with one re-orthogonalization pass.  An input whose residual
    after projection is at most ``rank_tol`` times the largest input norm is
    dropped; the surviving directions keep their first-appearance order.
    ``shape`` is needed only when ``vectors`` is empty.
    """
    mats = vectors if isinstance(vectors, np.ndarray) else list(vectors)
    if len(mats) == 0:
        if shape is None:
            raise ShapeError("cannot infer the shape of an empty input; pass shape=")
        return zero_subspace(shape)
    try:
        stack = np.asarray(mats, dtype=complex)
    except ValueError:
        raise ShapeError("all inputs must be matrices of the same shape") from None
    if stack.ndim != 3:
        raise ShapeError("all inputs must be matrices of the same shape")
    rows, cols = stack.shape[1:]
    if rows < 1 or cols < 1:
        raise ShapeError(f"matrices must have positive dimensions, got {(rows, cols)}")
    if shape is not None and tuple(shape) != (rows, cols):
        raise ShapeError(f"inputs have shape {(rows, cols)}, expected {tuple(shape)}")

    x = stack.reshape(len(stack), -1)
    n = x.shape[1]
    norms = np.linalg.norm(x, axis=1)
    cutoff = tol.rank_tol * norms.max()
    q = np.zeros((n, n), dtype=complex)
    k = 0
    for v in x:
        if k == n:
            break
        r = v.copy()
        for _ in range(2):
            if k:
                qk = q[:k]
                r -= qk.T @ (qk.conj() @ r)
        nr = np.linalg.norm(r)
        if nr > cutoff:
            q[k] = r / nr
            k += 1
    return OperatorSubspace(cols, rows, q[:k].reshape(k, rows, cols))


def span(*subspaces: OperatorSubspace, tol: Tolerances = DEFAULT_TOL) -> OperatorSubspace:
    """Span of the union of several subspaces of the same ambient space."""
    shape = subspaces[0].shape
    for s in subspaces[1:]:
        if s.shape != shape:
            raise ShapeError(f"shape mismatch: {s.shape} vs {shape}")
    return orthonormalize(np.concatenate([s.basis for s in subspaces]), shape=shape, tol=tol)


def project(s: OperatorSubspace, m) -> np.ndarray:
    """Orthogonal projection of ``m`` (or a stack of matrices) onto ``s``."""
    m = np.asarray(m, dtype=complex)
    _check_shape(s, m)
    if s.dim == 0:
        return np.zeros_like(m)
    q = s.vectors
    flat = m.reshape(-1, s.ambient_dim)
    return ((flat @ q.conj().T) @ q).reshape(m.shape)


def membership_residuals(s: OperatorSubspace, ms) -> np.ndarray:
    """``||m - P m||_F / max(1, ||m||_F)`` for each matrix in the stack ``ms``."""
    ms = np.asarray(ms, dtype=complex).reshape(-1, *s.shape)
    if ms.shape[1:] != s.shape:
        raise ShapeError(f"matrices of shape {ms.shape[1:]} do not live in a {s.shape} subspace")
    if len(ms) == 0:
        return np.zeros(0)
    diff = (ms - project(s, ms)).reshape(len(ms), -1)
    return np.linalg.norm(diff, axis=1) / np.maximum(1.0, np.linalg.norm(ms.reshape(len(ms), -1), axis=1))


def contains(s: OperatorSubspace, m, tol: Tolerances = DEFAULT_TOL) -> bool:
    m = np.asarray(m, dtype=complex)
    _check_shape(s, m)
    return bool(membership_residuals(s, m)[0] <= tol.membership_tol)


def inclusion_residual(a: OperatorSubspace, b: OperatorSubspace) -> float:
    """Largest relative membership residual of a basis element of ``a`` in ``b``."""
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")
    if a.dim == 0:
        return 0.0
    return float(membership_residuals(b, a.basis).max())


def subspace_leq(a: OperatorSubspace, b: OperatorSubspace, tol: Tolerances = DEFAULT_TOL) -> bool:
    return inclusion_residual(a, b) <= tol.membership_tol


def subspace_eq(a: OperatorSubspace, b: OperatorSubspace, tol: Tolerances = DEFAULT_TOL) -> bool:
    return (a.dim == b.dim and subspace_leq(a, b, tol) and subspace_leq(b, a, tol))


def equality_residual(a: OperatorSubspace, b: OperatorSubspace) -> float:
    """Symmetric inclusion residual; ``inf`` when the dimensions differ."""
    if a.dim != b.dim:
        return float("inf")
    return max(inclusion_residual(a, b), inclusion_residual(b, a))


def null_vectors(m, tol: Tolerances = DEFAULT_TOL, scale: float = 0.0) -> np.ndarray:
    """Orthonormal columns spanning ``ker m``.

    A singular value counts as zero iff it is at most ``rank_tol`` times the
    largest one, or times ``scale`` if that is bigger.  Callers that assemble
    ``m`` from unit-norm operators pass ``scale=1`` so that a matrix made of
    rounding noise alone is recognized as zero.  The zero matrix has the whole
    space as kernel.
    """
    m = np.asarray(m, dtype=complex)
    n = m.shape[1]
    if m.shape[0] == 0 or not np.any(m):
        return np.eye(n, dtype=complex)
    # only V is needed; a reduced SVD already gives all of it for tall m
    _, s, vh = np.linalg.svd(m, full_matrices=m.shape[0] < n)
    rank = int(np.count_nonzero(s > tol.rank_tol * max(s[0], scale)))
    return vh[rank:].conj().T


def null_space(m, tol: Tolerances = DEFAULT_TOL, scale: float = 0.0) -> OperatorSubspace:
    """Kernel of ``m`` as a subspace of column vectors (``n x 1`` matrices)."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise ShapeError(f"expected a 2-d matrix, got shape {m.shape}")
    v = null_vectors(m, tol, scale)
    n = m.shape[1]
    return OperatorSubspace(1, n, v.T.reshape(-1, n, 1))


def subspace_from_null_vectors(v: np.ndarray, shape, tol: Tolerances = DEFAULT_TOL) -> OperatorSubspace:
    """Turn kernel columns of a vectorized linear map back into matrices."""
    rows, cols = shape
    return orthonormalize(v.T.reshape(-1, rows, cols), shape=shape, tol=tol)


def intersect(a: OperatorSubspace, b: OperatorSubspace, tol: Tolerances = DEFAULT_TOL) -> OperatorSubspace:
    """``a`` intersected with ``b``: the common kernel of ``1 - P_a`` and ``1 - P_b``."""
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")
    if a.dim == 0 or b.dim == 0:
        return zero_subspace(a.shape)
    eye = np.eye(a.ambient_dim, dtype=complex)
    pa = a.vectors.T @ a.vectors.conj()
    pb = b.vectors.T @ b.vectors.conj()
    v = null_vectors(np.vstack([eye - pa, eye - pb]), tol, scale=1.0)
    return subspace_from_null_vectors(v, a.shape, tol)


def polar_partial_isometry(m, tol: Tolerances = DEFAULT_TOL):
    """Polar decomposition ``m = u |m|`` with ``u`` a partial isometry.

    Singular values at most ``rank_tol`` times the largest are discarded, so
    ``u^* u`` is the support projection of ``|m|``.  Returns ``(u, |m|)``.
    """
    m = as_matrix(m)
    if frobenius(m) <= tol.rank_tol:
        raise ValueError("polar decomposition of a zero matrix has no partial isometry")
    uu, s, vh = np.linalg.svd(m, full_matrices=False)
    r = int(np.count_nonzero(s > tol.rank_tol * s[0]))
    ur, sr, vr = uu[:, :r], s[:r], vh[:r]
    u = ur @ vr
    absm = (vr.conj().T * sr) @ vr
    return u, absm


def products(a: OperatorSubspace, b: OperatorSubspace) -> np.ndarray:
    """All ``a_i b_j`` as a stack, ``i`` major."""
    if a.domain_dim != b.codomain_dim:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    return np.einsum("aij,bjk->abik", a.basis, b.basis).reshape(-1, a.codomain_dim, b.domain_dim)


def product_span(a: OperatorSubspace, b: OperatorSubspace, tol: Tolerances = DEFAULT_TOL) -> OperatorSubspace:
    """Span of ``{x y : x in a, y in b}``."""
    return orthonormalize(products(a, b), shape=(a.codomain_dim, b.domain_dim), tol=tol)


def adjoint_subspace(a: OperatorSubspace, tol: Tolerances = DEFAULT_TOL) -> OperatorSubspace:
    return orthonormalize(dagger(a.basis), shape=(a.domain_dim, a.codomain_dim), tol=tol)


def coordinates(s: OperatorSubspace, m) -> np.ndarray:
    """Coefficients of the projection of ``m`` (or a stack) in the basis of ``s``."""
    m = np.asarray(m, dtype=complex)
    _check_shape(s, m)
    return m.reshape(-1, s.ambient_dim) @ s.vectors.conj().T


def kron_subspace(a: OperatorSubspace, b: OperatorSubspace, tol: Tolerances = DEFAULT_TOL) -> OperatorSubspace:
    """Span of ``{kron(x, y)}``; Kronecker products of orthonormal bases stay orthonormal."""
    mats = [kron(x, y) for x in a.basis for y in b.basis]
    shape = (a.codomain_dim * b.codomain_dim, a.domain_dim * b.domain_dim)
    return orthonormalize(mats, shape=shape, tol=tol)


def subspace_of(mats: Sequence, shape=None, tol: Tolerances = DEFAULT_TOL) -> OperatorSubspace:
    """Shorthand for :func:`orthonormalize` accepting a single matrix too."""
    if isinstance(mats, np.ndarray) and mats.ndim == 2:
        mats = [mats]
    return orthonormalize(mats, shape=shape, tol=tol)
