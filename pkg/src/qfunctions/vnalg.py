"""Finite-dimensional von Neumann algebras and their commutants.

Every von Neumann algebra on ``C^d`` is, up to a unitary change of basis, a
direct sum of blocks ``M_n (x) 1_m``.  :func:`from_blocks` builds that form
exactly; :func:`from_generators` accepts arbitrary generators and computes
the generated unital *-algebra numerically.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from . import matkernel as mk
from .errors import ShapeError
from .matkernel import DEFAULT_TOL, OperatorSubspace, Tolerances


@dataclass(frozen=True, eq=False)
class VonNeumannAlgebra:
    hilbert_dim: int
    algebra: OperatorSubspace
    commutant: OperatorSubspace
    label: Optional[str] = None
    # (n_i, m_i) pairs when the algebra is literally in block form
    blocks: Optional[Tuple[Tuple[int, int], ...]] = None

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def identity(self) -> np.ndarray:
        return np.eye(self.hilbert_dim, dtype=complex)

    def __repr__(self):
        name = f" {self.label!r}" if self.label else ""
        return (f"VonNeumannAlgebra{name}(hilbert_dim={self.hilbert_dim}, "
                f"dim={self.algebra.dim}, commutant_dim={self.commutant.dim})")


def block_offsets(blocks) -> list:
    offsets, o = [], 0
    for n, m in blocks:
        offsets.append(o)
        o += n * m
    return offsets


def _check_blocks(blocks):
    blocks = tuple((int(n), int(m)) for n, m in blocks)
    if not blocks:
        raise ValueError("block spec must be nonempty")
    for n, m in blocks:
        if n < 1 or m < 1:
            raise ValueError(f"block sizes and multiplicities must be positive, got {(n, m)}")
    return blocks


def _embed(mat: np.ndarray, offset: int, dim: int) -> np.ndarray:
    out = np.zeros((dim, dim), dtype=complex)
    k = mat.shape[0]
    out[offset:offset + k, offset:offset + k] = mat
    return out


def from_blocks(blocks: Sequence[Tuple[int, int]], label: Optional[str] = None) -> VonNeumannAlgebra:
    """The algebra ``(+)_i M_{n_i} (x) 1_{m_i}`` on ``(+)_i C^{n_i} (x) C^{m_i}``.

    The algebra basis is the matrix units of each ``M_{n_i}`` tensored with
    the identity, normalized; the commutant basis is ``1_{n_i} (x) E_jk``,
    normalized.  Both are written down directly rather than computed.
    """
    blocks = _check_blocks(blocks)
    dim = sum(n * m for n, m in blocks)
    alg, com = [], []
    for (n, m), off in zip(blocks, block_offsets(blocks)):
        eye_m, eye_n = np.eye(m), np.eye(n)
        for j in range(n):
            for k in range(n):
                alg.append(_embed(mk.kron(mk.matrix_unit(j, k, n), eye_m), off, dim) / np.sqrt(m))
        for j in range(m):
            for k in range(m):
                com.append(_embed(mk.kron(eye_n, mk.matrix_unit(j, k, m)), off, dim) / np.sqrt(n))
    return VonNeumannAlgebra(
        hilbert_dim=dim,
        algebra=OperatorSubspace(dim, dim, np.array(alg)),
        commutant=OperatorSubspace(dim, dim, np.array(com)),
        label=label,
        blocks=blocks,
    )


def _commutator_map(generators: np.ndarray, dim: int) -> np.ndarray:
    # rows of X -> X g - g X, row-major vec: (1 (x) g^T - g (x) 1) vec(X)
    eye = np.eye(dim)
    rows = []
    for g in generators:
        for h in (g, g.conj().T):
            rows.append(np.kron(eye, h.T) - np.kron(h, eye))
    return np.vstack(rows)


def commutant_of(generators, dim: int, tol: Tolerances = DEFAULT_TOL) -> OperatorSubspace:
    """Everything commuting with each generator and with its adjoint."""
    gens = [np.asarray(g, dtype=complex) for g in generators]
    for g in gens:
        if g.shape != (dim, dim):
            raise ShapeError(f"generator of shape {g.shape} is not {dim}x{dim}")
    if not gens:
        return mk.full_subspace((dim, dim))
    scale = max(mk.frobenius(g) for g in gens)
    v = mk.null_vectors(_commutator_map(np.array(gens), dim), tol, scale=scale)
    return mk.subspace_from_null_vectors(v, (dim, dim), tol)


def generated_algebra(generators, dim: int, tol: Tolerances = DEFAULT_TOL) -> OperatorSubspace:
    """Smallest subspace holding 1, the generators and their adjoints, closed under products."""
    gens = [np.asarray(g, dtype=complex) for g in generators]
    for g in gens:
        if g.shape != (dim, dim):
            raise ShapeError(f"generator of shape {g.shape} is not {dim}x{dim}")
    seed = [np.eye(dim, dtype=complex)] + gens + [g.conj().T for g in gens]
    current = mk.orthonormalize(seed, shape=(dim, dim), tol=tol)
    for _ in range(dim * dim):
        grown = mk.span(current, mk.product_span(current, current, tol), tol=tol)
        if grown.dim == current.dim:
            return current
        current = grown
    raise AssertionError("algebra generation did not stabilize within dim^2 rounds")


def from_generators(generators, dim: int, label: Optional[str] = None,
                    tol: Tolerances = DEFAULT_TOL) -> VonNeumannAlgebra:
    algebra = generated_algebra(generators, dim, tol)
    commutant = commutant_of(algebra.basis, dim, tol)
    bicommutant = commutant_of(commutant.basis, dim, tol)
    if not mk.subspace_eq(bicommutant, algebra, tol):
        raise AssertionError("double commutant check failed for generated algebra")
    return VonNeumannAlgebra(dim, algebra, commutant, label=label)


def from_subspaces(algebra: OperatorSubspace, commutant: OperatorSubspace,
                   label: Optional[str] = None) -> VonNeumannAlgebra:
    """Wrap a precomputed algebra/commutant pair without recomputation."""
    if algebra.shape != commutant.shape or algebra.codomain_dim != algebra.domain_dim:
        raise ShapeError("algebra and commutant must be square and of equal size")
    return VonNeumannAlgebra(algebra.domain_dim, algebra, commutant, label=label)


def conjugate(m: VonNeumannAlgebra, u: np.ndarray, label: Optional[str] = None) -> VonNeumannAlgebra:
    """The algebra ``u M u^*`` for a unitary ``u``; orthonormality survives conjugation."""
    u = mk.as_matrix(u)
    if u.shape != (m.hilbert_dim, m.hilbert_dim):
        raise ShapeError(f"unitary of shape {u.shape} does not act on C^{m.hilbert_dim}")
    d = m.hilbert_dim
    alg = OperatorSubspace(d, d, u @ m.algebra.basis @ u.conj().T)
    com = OperatorSubspace(d, d, u @ m.commutant.basis @ u.conj().T)
    return VonNeumannAlgebra(d, alg, com, label=label if label is not None else m.label)


def scalars(dim: int) -> VonNeumannAlgebra:
    return from_blocks([(1, dim)], label=f"C_{dim}")


def full_matrices(dim: int) -> VonNeumannAlgebra:
    return from_blocks([(dim, 1)], label=f"M_{dim}")


def center(m: VonNeumannAlgebra, tol: Tolerances = DEFAULT_TOL) -> OperatorSubspace:
    return mk.intersect(m.algebra, m.commutant, tol)


def same_algebra(a: VonNeumannAlgebra, b: VonNeumannAlgebra, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Equality as sets of operators on the same Hilbert space; labels are ignored."""
    return a.hilbert_dim == b.hilbert_dim and mk.subspace_eq(a.algebra, b.algebra, tol)


def algebra_residuals(m: VonNeumannAlgebra) -> dict:
    """Residuals of the structural invariants, all zero for an exact algebra."""
    one = m.identity
    alg, com = m.algebra, m.commutant
    res = {
        "unit_in_algebra": float(mk.membership_residuals(alg, one)[0]),
        "unit_in_commutant": float(mk.membership_residuals(com, one)[0]),
        "adjoint_closed": float(mk.membership_residuals(alg, mk.dagger(alg.basis)).max()),
        "product_closed": float(mk.membership_residuals(alg, mk.products(alg, alg)).max()),
    }
    comm = (np.einsum("aij,bjk->abik", alg.basis, com.basis)
            - np.einsum("bij,ajk->abik", com.basis, alg.basis))
    res["commutation"] = float(np.linalg.norm(comm.reshape(-1, m.hilbert_dim ** 2), axis=1).max())
    return res


def is_consistent(m: VonNeumannAlgebra, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Check unitality, *-closure, product closure, commutation and the double commutant."""
    r = algebra_residuals(m)
    if r["commutation"] > tol.eq_tol:
        return False
    if any(r[k] > tol.membership_tol for k in ("unit_in_algebra", "unit_in_commutant",
                                                "adjoint_closed", "product_closed")):
        return False
    return mk.subspace_eq(commutant_of(m.commutant.basis, m.hilbert_dim, tol), m.algebra, tol)
