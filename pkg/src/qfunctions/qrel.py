"""Quantum relations: commutant bimodules ``V`` in ``B(H, K)`` with ``N' V M' <= V``.

A relation runs from ``source`` (``M`` on ``H``) to ``target`` (``N`` on
``K``), so members of ``space`` are ``dim K x dim H`` matrices.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matkernel as mk
from .errors import InvalidRelationError, NotComposableError, ShapeError
from .matkernel import DEFAULT_TOL, OperatorSubspace, Tolerances
from .vnalg import VonNeumannAlgebra, same_algebra


@dataclass(frozen=True, eq=False)
class QuantumRelation:
    source: VonNeumannAlgebra
    target: VonNeumannAlgebra
    space: OperatorSubspace

    def __post_init__(self):
        expected = (self.target.hilbert_dim, self.source.hilbert_dim)
        if self.space.shape != expected:
            raise ShapeError(f"relation space has shape {self.space.shape}, "
                             f"expected {expected} (dim K x dim H)")

    @property
    def dim(self) -> int:
        return self.space.dim


@dataclass(frozen=True)
class RelationProperties:
    reflexive: bool
    symmetric: bool
    antisymmetric: bool
    transitive: bool

    def as_dict(self) -> dict:
        return {"reflexive": self.reflexive, "symmetric": self.symmetric,
                "antisymmetric": self.antisymmetric, "transitive": self.transitive}


def bimodule_residual(r: QuantumRelation) -> float:
    """Largest relative residual of ``n' v m'`` outside ``V``, over all basis triples."""
    v = r.space
    if v.dim == 0:
        return 0.0
    left = r.target.commutant.basis
    right = r.source.commutant.basis
    worst = 0.0
    # chunk over the left factor to bound memory
    for n in left:
        triples = np.einsum("ij,bjk,ckl->bcil", n, v.basis, right).reshape(-1, *v.shape)
        worst = max(worst, float(mk.membership_residuals(v, triples).max()))
    return worst


def validate(r: QuantumRelation, tol: Tolerances = DEFAULT_TOL) -> bool:
    return bimodule_residual(r) <= tol.membership_tol


def relation(source: VonNeumannAlgebra, target: VonNeumannAlgebra, mats,
             tol: Tolerances = DEFAULT_TOL) -> QuantumRelation:
    """Relation spanned by ``mats``; no bimodule closure is taken."""
    shape = (target.hilbert_dim, source.hilbert_dim)
    return QuantumRelation(source, target, mk.subspace_of(mats, shape=shape, tol=tol))


def bimodule_closure(source: VonNeumannAlgebra, target: VonNeumannAlgebra, seed,
                     tol: Tolerances = DEFAULT_TOL) -> QuantumRelation:
    """The smallest quantum relation containing ``seed``.

    One sweep of ``n' s m'`` is enough since both commutants are unital algebras.
    """
    shape = (target.hilbert_dim, source.hilbert_dim)
    seed = mk.subspace_of(seed, shape=shape, tol=tol)
    mats = np.einsum("aij,bjk,ckl->abcil", target.commutant.basis, seed.basis,
                     source.commutant.basis).reshape(-1, *shape)
    r = QuantumRelation(source, target, mk.orthonormalize(mats, shape=shape, tol=tol))
    if not validate(r, tol):
        raise AssertionError("bimodule closure is not a bimodule")
    return r


def diagonal(m: VonNeumannAlgebra) -> QuantumRelation:
    return QuantumRelation(m, m, m.commutant)


def zero_relation(source: VonNeumannAlgebra, target: VonNeumannAlgebra) -> QuantumRelation:
    return QuantumRelation(source, target, mk.zero_subspace((target.hilbert_dim, source.hilbert_dim)))


def inverse(r: QuantumRelation, tol: Tolerances = DEFAULT_TOL) -> QuantumRelation:
    return QuantumRelation(r.target, r.source, mk.adjoint_subspace(r.space, tol))


def compose(r1: QuantumRelation, r0: QuantumRelation, tol: Tolerances = DEFAULT_TOL) -> QuantumRelation:
    """``r1 o r0 = span(r1 r0)``: first ``r0``, then ``r1``."""
    if not same_algebra(r1.source, r0.target, tol):
        raise NotComposableError("source algebra of the outer relation differs from "
                                 "target algebra of the inner relation")
    return QuantumRelation(r0.source, r1.target, mk.product_span(r1.space, r0.space, tol))


def intersection(a: QuantumRelation, b: QuantumRelation, tol: Tolerances = DEFAULT_TOL) -> QuantumRelation:
    if not (same_algebra(a.source, b.source, tol) and same_algebra(a.target, b.target, tol)):
        raise NotComposableError("relations between different algebras")
    return QuantumRelation(a.source, a.target, mk.intersect(a.space, b.space, tol))


def _require_endo(r: QuantumRelation, tol: Tolerances):
    if not same_algebra(r.source, r.target, tol):
        raise NotComposableError("property requires a relation on a single algebra")


def is_reflexive(r: QuantumRelation, tol: Tolerances = DEFAULT_TOL) -> bool:
    _require_endo(r, tol)
    return mk.subspace_leq(r.source.commutant, r.space, tol)


def is_symmetric(r: QuantumRelation, tol: Tolerances = DEFAULT_TOL) -> bool:
    _require_endo(r, tol)
    return mk.subspace_eq(mk.adjoint_subspace(r.space, tol), r.space, tol)


def is_antisymmetric(r: QuantumRelation, tol: Tolerances = DEFAULT_TOL) -> bool:
    _require_endo(r, tol)
    both = mk.intersect(r.space, mk.adjoint_subspace(r.space, tol), tol)
    return mk.subspace_leq(both, r.source.commutant, tol)


def is_transitive(r: QuantumRelation, tol: Tolerances = DEFAULT_TOL) -> bool:
    _require_endo(r, tol)
    return mk.subspace_leq(mk.product_span(r.space, r.space, tol), r.space, tol)


def property_residuals(r: QuantumRelation, tol: Tolerances = DEFAULT_TOL) -> dict:
    """Inclusion residuals behind each of the four predicates."""
    _require_endo(r, tol)
    v, diag = r.space, r.source.commutant
    vstar = mk.adjoint_subspace(v, tol)
    return {
        "reflexive": mk.inclusion_residual(diag, v),
        "symmetric": mk.equality_residual(vstar, v),
        "antisymmetric": mk.inclusion_residual(mk.intersect(v, vstar, tol), diag),
        "transitive": mk.inclusion_residual(mk.product_span(v, v, tol), v),
    }


def properties(r: QuantumRelation, tol: Tolerances = DEFAULT_TOL) -> RelationProperties:
    res = property_residuals(r, tol)
    return RelationProperties(**{k: bool(x <= tol.membership_tol) for k, x in res.items()})


def require_valid(r: QuantumRelation, tol: Tolerances = DEFAULT_TOL) -> QuantumRelation:
    res = bimodule_residual(r)
    if res > tol.membership_tol:
        raise InvalidRelationError(f"space is not a commutant bimodule (residual {res:.3g})")
    return r


def same_relation(a: QuantumRelation, b: QuantumRelation, tol: Tolerances = DEFAULT_TOL) -> bool:
    return (same_algebra(a.source, b.source, tol) and same_algebra(a.target, b.target, tol)
            and mk.subspace_eq(a.space, b.space, tol))
