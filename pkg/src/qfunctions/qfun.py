"""Quantum functions and their correspondence with unital *-homomorphisms.

Orientation used everywhere: a homomorphism ``pi: N -> M`` with ``N`` on
``K`` and ``M`` on ``H`` corresponds to the quantum function

    G(pi) = {v in B(H, K) : b v = v pi(b) for all b in N}

running from ``M`` to ``N`` (members are ``dim K x dim H`` matrices).  In the
other direction a quantum function ``V`` from ``M`` to ``N`` gives back

    G^-1(V)(b) = sum_a u_a^* b u_a

for any family of partial isometries ``u_a`` in ``V`` with
``u_a u_b^* = 0`` (a != b) and ``sum u_a^* u_a = 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import matkernel as mk
from .errors import (IllConditionedError, InvalidHomomorphismError, NotAQuantumFunctionError,
                     NotComposableError, ShapeError)
from .matkernel import DEFAULT_TOL, OperatorSubspace, Tolerances
from .qrel import QuantumRelation, compose, diagonal
from .vnalg import VonNeumannAlgebra, same_algebra


# -- homomorphisms ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Homomorphism:
    """Linear map ``pi: source -> B(H)`` given by the images of the source basis.

    ``images[i]`` is ``pi`` of ``source.algebra.basis[i]``.
    """

    source: VonNeumannAlgebra
    target: VonNeumannAlgebra
    images: np.ndarray

    def __post_init__(self):
        h = self.target.hilbert_dim
        imgs = np.asarray(self.images, dtype=complex)
        if imgs.shape != (self.source.dim, h, h):
            raise ShapeError(f"expected {self.source.dim} images of shape {h}x{h}, "
                             f"got array of shape {imgs.shape}")
        imgs = imgs.copy()
        imgs.setflags(write=False)
        object.__setattr__(self, "images", imgs)

    def __call__(self, b) -> np.ndarray:
        """Apply ``pi``; ``b`` may be a single matrix or a stack.

        Inputs are first projected onto the source algebra.
        """
        b = np.asarray(b, dtype=complex)
        c = mk.coordinates(self.source.algebra, b)
        h = self.target.hilbert_dim
        out = np.tensordot(c, self.images, axes=(1, 0))
        return out.reshape(h, h) if b.ndim == 2 else out.reshape(-1, h, h)


def homomorphism_from_values(source: VonNeumannAlgebra, target: VonNeumannAlgebra,
                             elements, values, tol: Tolerances = DEFAULT_TOL) -> Homomorphism:
    """Linear map determined by ``pi(elements[i]) = values[i]``.

    ``elements`` must lie in and span the source algebra.
    """
    elements = np.asarray(elements, dtype=complex)
    values = np.asarray(values, dtype=complex)
    if len(elements) != len(values):
        raise ShapeError("need one value per element")
    c = mk.coordinates(source.algebra, elements)          # (len, dim N)
    if np.linalg.matrix_rank(c, tol=tol.rank_tol * max(1.0, np.abs(c).max())) < source.dim:
        raise InvalidHomomorphismError("elements do not span the source algebra")
    resid = mk.membership_residuals(source.algebra, elements)
    if resid.size and resid.max() > tol.membership_tol:
        raise InvalidHomomorphismError("an element lies outside the source algebra")
    h = target.hilbert_dim
    # solve c @ X = values for the basis images X
    x, *_ = np.linalg.lstsq(c, values.reshape(len(values), -1), rcond=None)
    return Homomorphism(source, target, x.reshape(-1, h, h))


def identity_hom(m: VonNeumannAlgebra) -> Homomorphism:
    return Homomorphism(m, m, m.algebra.basis)


def hom_residuals(pi: Homomorphism) -> dict:
    """Frobenius residuals of the unital *-homomorphism axioms and of ``pi(N) <= M``."""
    basis = pi.source.algebra.basis
    img = pi.images
    h = pi.target.hilbert_dim
    one_k = pi.source.identity
    prod = np.einsum("aij,bjk->abik", basis, basis).reshape(-1, *basis.shape[1:])
    pi_prod = pi(prod)
    img_prod = np.einsum("aij,bjk->abik", img, img).reshape(-1, h, h)
    com = pi.target.commutant.basis
    comm = (np.einsum("aij,cjk->acik", img, com) - np.einsum("cij,ajk->acik", com, img))

    def worst(x):
        x = x.reshape(-1, h * h)
        return float(np.linalg.norm(x, axis=1).max()) if len(x) else 0.0

    return {
        "unital": mk.frobenius(pi(one_k) - np.eye(h)),
        "star": worst(pi(mk.dagger(basis)) - mk.dagger(img)),
        "multiplicative": worst(pi_prod - img_prod),
        "range_in_target": worst(comm),
    }


def validate_hom(pi: Homomorphism, tol: Tolerances = DEFAULT_TOL) -> bool:
    return all(x <= tol.eq_tol for x in hom_residuals(pi).values())


def require_hom(pi: Homomorphism, tol: Tolerances = DEFAULT_TOL) -> Homomorphism:
    res = hom_residuals(pi)
    bad = {k: x for k, x in res.items() if x > tol.eq_tol}
    if bad:
        detail = ", ".join(f"{k}={x:.3g}" for k, x in bad.items())
        raise InvalidHomomorphismError(f"not a unital *-homomorphism into the target: {detail}")
    return pi


def compose_hom(pi0: Homomorphism, pi1: Homomorphism, tol: Tolerances = DEFAULT_TOL) -> Homomorphism:
    """``pi0 o pi1``: apply ``pi1`` first."""
    if not same_algebra(pi1.target, pi0.source, tol):
        raise NotComposableError("target of the inner homomorphism differs from "
                                 "source of the outer homomorphism")
    return require_hom(Homomorphism(pi1.source, pi0.target, pi0(pi1.images)), tol)


def hom_distance(a: Homomorphism, b: Homomorphism) -> float:
    """Largest Frobenius distance between images of the (shared) source basis."""
    if a.images.shape != b.images.shape:
        raise ShapeError("homomorphisms have different shapes")
    other = b(a.source.algebra.basis)
    return float(np.linalg.norm((a.images - other).reshape(len(other), -1), axis=1).max())


# -- quantum functions --------------------------------------------------------

def quantum_function_residuals(r: QuantumRelation, tol: Tolerances = DEFAULT_TOL) -> dict:
    """Residuals of ``M' <= V^* V`` (totality) and ``V V^* <= N'`` (single-valuedness)."""
    v = r.space
    vstar = mk.adjoint_subspace(v, tol)
    return {
        "totality": mk.inclusion_residual(r.source.commutant, mk.product_span(vstar, v, tol)),
        "single_valued": mk.inclusion_residual(mk.product_span(v, vstar, tol), r.target.commutant),
    }


INCLUSION_NAMES = {
    "totality": "source commutant <= V* V",
    "single_valued": "V V* <= target commutant",
}


def is_quantum_function(r: QuantumRelation, tol: Tolerances = DEFAULT_TOL) -> bool:
    return all(x <= tol.membership_tol for x in quantum_function_residuals(r, tol).values())


def require_quantum_function(r: QuantumRelation, tol: Tolerances = DEFAULT_TOL) -> QuantumRelation:
    for name, x in quantum_function_residuals(r, tol).items():
        if x > tol.membership_tol:
            raise NotAQuantumFunctionError(
                f"not a quantum function: {INCLUSION_NAMES[name]} fails (residual {x:.3g})",
                inclusion=name)
    return r


def g_forward(pi: Homomorphism, tol: Tolerances = DEFAULT_TOL) -> QuantumRelation:
    """The quantum function ``{v : b v = v pi(b)}`` from ``pi.target`` to ``pi.source``."""
    require_hom(pi, tol)
    k, h = pi.source.hilbert_dim, pi.target.hilbert_dim
    basis = pi.source.algebra.basis
    bs = np.concatenate([basis, mk.dagger(basis)])
    imgs = np.concatenate([pi.images, mk.dagger(pi.images)])
    eye_k, eye_h = np.eye(k), np.eye(h)
    # b v - v pi(b) in row-major vec: (b (x) 1_H - 1_K (x) pi(b)^T) vec(v)
    blocks = [np.kron(b, eye_h) - np.kron(eye_k, p.T) for b, p in zip(bs, imgs)]
    v = mk.null_vectors(np.vstack(blocks), tol, scale=1.0)
    space = mk.subspace_from_null_vectors(v, (k, h), tol)
    return QuantumRelation(pi.target, pi.source, space)


# -- partial isometry families --------------------------------------------------

@dataclass(frozen=True, eq=False)
class PartialIsometryFamily:
    """Partial isometries ``u_a`` in ``B(H, K)``, stacked with shape ``(n, dim K, dim H)``."""

    members: np.ndarray
    source_dim: int
    target_dim: int

    def __post_init__(self):
        m = np.asarray(self.members, dtype=complex).reshape(-1, self.target_dim, self.source_dim)
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "members", m)

    def __len__(self):
        return len(self.members)

    def padded(self, size: int) -> "PartialIsometryFamily":
        """Append zero partial isometries up to ``size`` members."""
        extra = size - len(self)
        if extra < 0:
            raise ValueError(f"family already has {len(self)} > {size} members")
        zeros = np.zeros((extra, self.target_dim, self.source_dim), dtype=complex)
        return PartialIsometryFamily(np.concatenate([self.members, zeros]),
                                     self.source_dim, self.target_dim)

    def residuals(self) -> dict:
        u = self.members
        ud = mk.dagger(u)
        n = len(u)
        pi = u @ ud @ u - u
        cross = np.einsum("aij,bjk->abik", u, ud)
        off = cross[~np.eye(n, dtype=bool)] if n > 1 else np.zeros((0,))
        total = np.einsum("aij,ajk->ik", ud, u) if n else np.zeros((self.source_dim,) * 2)
        norms = lambda x: float(np.linalg.norm(x.reshape(len(x), -1), axis=1).max()) if len(x) else 0.0
        return {
            "partial_isometry": norms(pi),
            "orthogonal_ranges": norms(off) if n > 1 else 0.0,
            "completeness": mk.frobenius(total - np.eye(self.source_dim)),
        }

    def is_valid(self, tol: Tolerances = DEFAULT_TOL) -> bool:
        return all(x <= tol.eq_tol for x in self.residuals().values())


def extract_family(r: QuantumRelation, order: Optional[Sequence[int]] = None,
                   tol: Tolerances = DEFAULT_TOL) -> PartialIsometryFamily:
    """Greedy family of partial isometries in ``V`` with orthogonal ranges summing to 1.

    With ``p = 1 - sum u^* u`` the uncovered part, each round picks the
    element ``v_i p`` of largest Frobenius norm (ties to the lowest index;
    ``order`` permutes the basis of ``V`` first) and adds the partial
    isometry of its polar decomposition.  ``u^* u <= p`` and its rank is at
    least one, so at most ``dim H`` rounds are needed.
    """
    require_quantum_function(r, tol)
    v = r.space
    h, k = r.source.hilbert_dim, r.target.hilbert_dim
    basis = v.basis if order is None else v.basis[list(order)]
    if order is not None and sorted(order) != list(range(v.dim)):
        raise ValueError("order must be a permutation of the basis indices")
    members = []
    covered = np.zeros((h, h), dtype=complex)
    for _ in range(h + 1):
        p = np.eye(h) - covered
        if mk.frobenius(p) <= tol.rank_tol:
            break
        vp = basis @ p
        norms = np.linalg.norm(vp.reshape(len(vp), -1), axis=1)
        if norms.size == 0 or norms.max() <= tol.rank_tol:
            raise NotAQuantumFunctionError(
                "V p vanishes while p != 1 - sum u*u is nonzero: not a quantum function",
                inclusion="totality")
        best = int(np.flatnonzero(norms >= norms.max() - tol.eq_tol)[0])
        u, _ = mk.polar_partial_isometry(vp[best], tol)
        if not mk.contains(v, u, tol):
            raise IllConditionedError("partial isometry from polar decomposition left V")
        for prior in members:
            if mk.frobenius(u @ prior.conj().T) > tol.eq_tol:
                raise IllConditionedError("new partial isometry overlaps an earlier one")
        members.append(u)
        covered = covered + u.conj().T @ u
    else:
        raise IllConditionedError("greedy extraction did not terminate within dim H rounds")
    return PartialIsometryFamily(np.array(members).reshape(-1, k, h), h, k)


def g_inverse(r: QuantumRelation, family: Optional[PartialIsometryFamily] = None,
              tol: Tolerances = DEFAULT_TOL) -> Homomorphism:
    """The homomorphism ``b -> sum u^* b u`` from ``r.target`` to ``r.source``."""
    if family is None:
        family = extract_family(r, tol=tol)
    else:
        require_quantum_function(r, tol)
    u = family.members
    basis = r.target.algebra.basis
    images = np.einsum("aji,bjk,akl->bil", u.conj(), basis, u)
    return require_hom(Homomorphism(r.target, r.source, images), tol)


# -- dilations -----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DilationIsometry:
    """``w`` in ``B(H, K (x) l2(I))`` with rows indexed ``k * index_size + a``."""

    w: np.ndarray
    index_size: int

    def __post_init__(self):
        w = mk.as_matrix(self.w)
        if self.index_size < 1 or w.shape[0] % self.index_size:
            raise ShapeError(f"row count {w.shape[0]} is not a multiple of index size {self.index_size}")
        object.__setattr__(self, "w", w)

    @property
    def source_dim(self) -> int:
        return self.w.shape[1]

    @property
    def target_dim(self) -> int:
        return self.w.shape[0] // self.index_size

    def padded(self, size: int) -> "DilationIsometry":
        """Zero-pad the index space to ``size``; ``w`` stays an isometry."""
        if size < self.index_size:
            raise ValueError("cannot shrink the index space")
        k, h = self.target_dim, self.source_dim
        blocks = self.w.reshape(k, self.index_size, h)
        out = np.zeros((k, size, h), dtype=complex)
        out[:, :self.index_size] = blocks
        return DilationIsometry(out.reshape(k * size, h), size)

    def isometry_residual(self) -> float:
        return mk.frobenius(self.w.conj().T @ self.w - np.eye(self.source_dim))


def isometry_from_family(family: PartialIsometryFamily) -> DilationIsometry:
    """``w = sum_a kron(u_a, e_a)``."""
    n = len(family)
    w = sum(mk.kron(u, mk.matrix_unit(a, 0, n, 1)) for a, u in enumerate(family.members))
    return DilationIsometry(np.asarray(w), n)


def dilation(pi: Homomorphism, order: Optional[Sequence[int]] = None,
             tol: Tolerances = DEFAULT_TOL) -> DilationIsometry:
    """An isometry ``w`` with ``pi(b) = w^* (b (x) 1) w``, built from a family in ``G(pi)``."""
    return isometry_from_family(extract_family(g_forward(pi, tol), order=order, tol=tol))


def _amplified(pi: Homomorphism, size: int) -> np.ndarray:
    eye = np.eye(size)
    return np.array([mk.kron(b, eye) for b in pi.source.algebra.basis])


def _check_dilation_shape(w: DilationIsometry, pi: Homomorphism):
    if w.source_dim != pi.target.hilbert_dim or w.target_dim != pi.source.hilbert_dim:
        raise ShapeError("isometry does not map the homomorphism's target space into "
                         "source space (x) l2(I)")


def compression_residual(w: DilationIsometry, pi: Homomorphism) -> float:
    """Largest ``||w^* (b (x) 1) w - pi(b)||_F`` over the source basis."""
    _check_dilation_shape(w, pi)
    amp = _amplified(pi, w.index_size)
    diff = w.w.conj().T @ amp @ w.w - pi.images
    return float(np.linalg.norm(diff.reshape(len(diff), -1), axis=1).max())


def intertwine_residual(w: DilationIsometry, pi: Homomorphism) -> float:
    """Largest ``||(b (x) 1) w - w pi(b)||_F`` over the source basis."""
    _check_dilation_shape(w, pi)
    amp = _amplified(pi, w.index_size)
    diff = amp @ w.w - w.w @ pi.images
    return float(np.linalg.norm(diff.reshape(len(diff), -1), axis=1).max())


def verify_intertwine(w: DilationIsometry, pi: Homomorphism, tol: Tolerances = DEFAULT_TOL) -> bool:
    return intertwine_residual(w, pi) <= tol.eq_tol


def range_projection_residual(w: DilationIsometry, pi: Homomorphism) -> float:
    """How far ``w w^*`` is from commuting with every ``b (x) 1``."""
    _check_dilation_shape(w, pi)
    amp = _amplified(pi, w.index_size)
    proj = w.w @ w.w.conj().T
    diff = amp @ proj - proj @ amp
    return float(np.linalg.norm(diff.reshape(len(diff), -1), axis=1).max())


def homotopy_residual(w0: DilationIsometry, w1: DilationIsometry, pi: Homomorphism) -> float:
    """How far ``w0 w1^*`` is from commuting with ``N (x) 1``, after padding to a common index size."""
    size = max(w0.index_size, w1.index_size)
    w0, w1 = w0.padded(size), w1.padded(size)
    if w0.w.shape != w1.w.shape:
        raise ShapeError(f"isometries have shapes {w0.w.shape} and {w1.w.shape}")
    _check_dilation_shape(w0, pi)
    amp = _amplified(pi, size)
    x = w0.w @ w1.w.conj().T
    diff = amp @ x - x @ amp
    return float(np.linalg.norm(diff.reshape(len(diff), -1), axis=1).max())


def verify_homotopy(w0: DilationIsometry, w1: DilationIsometry, pi: Homomorphism,
                    tol: Tolerances = DEFAULT_TOL) -> bool:
    return homotopy_residual(w0, w1, pi) <= tol.eq_tol


def generation_spaces(r: QuantumRelation, w: DilationIsometry, tol: Tolerances = DEFAULT_TOL):
    """Both sides of ``(N (x) C)' w M' = V (x) B(C, l2(I))`` as explicit subspaces."""
    n_idx = w.index_size
    k, h = r.target.hilbert_dim, r.source.hilbert_dim
    if w.w.shape != (k * n_idx, h):
        raise ShapeError(f"isometry of shape {w.w.shape} does not match the relation")
    # (N (x) C_I)' = N' (x) B(l2(I)) in finite dimension
    left = mk.kron_subspace(r.target.commutant, mk.full_subspace((n_idx, n_idx)), tol)
    lw = mk.product_span(left, mk.subspace_of(w.w, tol=tol), tol)
    lhs = mk.product_span(lw, r.source.commutant, tol)
    rhs = mk.kron_subspace(r.space, mk.full_subspace((n_idx, 1)), tol)
    return lhs, rhs


def generation_residual(r: QuantumRelation, w: DilationIsometry, tol: Tolerances = DEFAULT_TOL) -> float:
    lhs, rhs = generation_spaces(r, w, tol)
    return mk.equality_residual(lhs, rhs)


def verify_generation(r: QuantumRelation, w: DilationIsometry, tol: Tolerances = DEFAULT_TOL) -> bool:
    lhs, rhs = generation_spaces(r, w, tol)
    return mk.subspace_eq(lhs, rhs, tol)


def g_identity_check(m: VonNeumannAlgebra, tol: Tolerances = DEFAULT_TOL) -> bool:
    """``G(identity on M)`` equals the diagonal relation ``M'``."""
    return mk.subspace_eq(g_forward(identity_hom(m), tol).space, diagonal(m).space, tol)


def functor_residual(pi0: Homomorphism, pi1: Homomorphism, tol: Tolerances = DEFAULT_TOL) -> float:
    """Distance between ``G(pi0 o pi1)`` and ``G(pi1) G(pi0)``."""
    lhs = g_forward(compose_hom(pi0, pi1, tol), tol)
    rhs = compose(g_forward(pi1, tol), g_forward(pi0, tol), tol)
    return mk.equality_residual(lhs.space, rhs.space)
