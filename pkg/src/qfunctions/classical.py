"""Finite sets as diagonal algebras.

Direction conventions, fixed package-wide:

* a relation ``F`` between ``X`` and ``Y`` is a set of pairs ``(y, x)``; its
  quantum image is ``span{E_yx}`` in ``B(C^X, C^Y)``, a quantum relation from
  ``l_inf(X)`` to ``l_inf(Y)``;
* a function ``f: X -> Y`` is the relation ``{(f(x), x)}``; it corresponds to
  the pullback homomorphism ``l_inf(Y) -> l_inf(X)``, ``g -> g o f``, whose
  quantum function runs from ``l_inf(X)`` to ``l_inf(Y)``.

Composition ``G o F`` means "first ``F``, then ``G``", as for functions.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import FrozenSet, Iterator, Tuple

import numpy as np

from . import matkernel as mk
from .matkernel import DEFAULT_TOL, Tolerances
from .qfun import Homomorphism
from .qrel import QuantumRelation, RelationProperties
from .vnalg import VonNeumannAlgebra, from_blocks


@dataclass(frozen=True)
class ClassicalRelation:
    x_size: int
    y_size: int
    pairs: FrozenSet[Tuple[int, int]]

    def __post_init__(self):
        if self.x_size < 1 or self.y_size < 1:
            raise ValueError("set sizes must be positive")
        pairs = frozenset((int(y), int(x)) for y, x in self.pairs)
        for y, x in pairs:
            if not (0 <= y < self.y_size and 0 <= x < self.x_size):
                raise ValueError(f"pair {(y, x)} out of range for sizes {(self.x_size, self.y_size)}")
        object.__setattr__(self, "pairs", pairs)

    def inverse(self) -> "ClassicalRelation":
        return ClassicalRelation(self.y_size, self.x_size, frozenset((x, y) for y, x in self.pairs))

    def is_function(self) -> bool:
        counts = [0] * self.x_size
        for _, x in self.pairs:
            counts[x] += 1
        return all(c == 1 for c in counts)


@dataclass(frozen=True)
class ClassicalFunction:
    x_size: int
    y_size: int
    map: Tuple[int, ...]

    def __post_init__(self):
        m = tuple(int(y) for y in self.map)
        if self.x_size < 1 or self.y_size < 1:
            raise ValueError("set sizes must be positive")
        if len(m) != self.x_size:
            raise ValueError(f"map has {len(m)} entries, expected {self.x_size}")
        if any(not 0 <= y < self.y_size for y in m):
            raise ValueError("map value out of range")
        object.__setattr__(self, "map", m)

    def graph(self) -> ClassicalRelation:
        return ClassicalRelation(self.x_size, self.y_size, frozenset((y, x) for x, y in enumerate(self.map)))

    def then(self, g: "ClassicalFunction") -> "ClassicalFunction":
        """``g o self``."""
        if g.x_size != self.y_size:
            raise ValueError("functions are not composable")
        return ClassicalFunction(self.x_size, g.y_size, tuple(g.map[y] for y in self.map))


def compose_relations(g: ClassicalRelation, f: ClassicalRelation) -> ClassicalRelation:
    """``g o f = {(z, x) : (z, y) in g and (y, x) in f for some y}``."""
    if g.x_size != f.y_size:
        raise ValueError("relations are not composable")
    out = {(z, x) for z, y1 in g.pairs for y2, x in f.pairs if y1 == y2}
    return ClassicalRelation(f.x_size, g.y_size, frozenset(out))


def classical_predicates(f: ClassicalRelation) -> RelationProperties:
    if f.x_size != f.y_size:
        raise ValueError("predicates need a relation on a single set")
    pairs = f.pairs
    n = f.x_size
    return RelationProperties(
        reflexive=all((x, x) in pairs for x in range(n)),
        symmetric=all((x, y) in pairs for y, x in pairs),
        antisymmetric=all(x == y for y, x in pairs if (x, y) in pairs),
        transitive=compose_relations(f, f).pairs <= pairs,
    )


def all_relations(x_size: int, y_size: int) -> Iterator[ClassicalRelation]:
    cells = [(y, x) for y in range(y_size) for x in range(x_size)]
    for mask in range(1 << len(cells)):
        yield ClassicalRelation(x_size, y_size, frozenset(c for i, c in enumerate(cells) if mask >> i & 1))


def all_functions(x_size: int, y_size: int) -> Iterator[ClassicalFunction]:
    for m in itertools.product(range(y_size), repeat=x_size):
        yield ClassicalFunction(x_size, y_size, m)


# -- bridge ---------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def diag_algebra(n: int) -> VonNeumannAlgebra:
    """``l_inf(n)``: all diagonal ``n x n`` matrices; basis ``E_00, E_11, ...``."""
    if n < 1:
        raise ValueError("n must be positive")
    return from_blocks([(1, 1)] * n, label=f"l_inf({n})")


def is_diag_algebra(m: VonNeumannAlgebra, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff ``m`` is the full algebra of diagonal matrices."""
    b = m.algebra.basis
    d = m.hilbert_dim
    off = b * (1 - np.eye(d))
    return m.dim == d and float(np.abs(off).max(initial=0.0)) <= tol.eq_tol


def relation_to_quantum(f: ClassicalRelation) -> QuantumRelation:
    shape = (f.y_size, f.x_size)
    units = [mk.matrix_unit(y, x, *shape) for y, x in sorted(f.pairs)]
    space = mk.orthonormalize(units, shape=shape)
    return QuantumRelation(diag_algebra(f.x_size), diag_algebra(f.y_size), space)


def quantum_to_relation(r: QuantumRelation, tol: Tolerances = DEFAULT_TOL) -> ClassicalRelation:
    """Read off ``{(y, x) : E_yx in V}``; exact for bimodules over diagonal algebras."""
    if not (is_diag_algebra(r.source, tol) and is_diag_algebra(r.target, tol)):
        raise ValueError("both algebras must be full diagonal algebras")
    k, h = r.target.hilbert_dim, r.source.hilbert_dim
    units = np.array([mk.matrix_unit(y, x, k, h) for y in range(k) for x in range(h)])
    inside = mk.membership_residuals(r.space, units) <= tol.membership_tol
    pairs = [(y, x) for (y, x), ok in zip(itertools.product(range(k), range(h)), inside) if ok]
    return ClassicalRelation(h, k, frozenset(pairs))


def function_to_hom(f: ClassicalFunction) -> Homomorphism:
    """The pullback ``l_inf(Y) -> l_inf(X)``; ``E_y`` goes to the indicator of ``f^-1(y)``."""
    src, tgt = diag_algebra(f.y_size), diag_algebra(f.x_size)
    images = np.zeros((f.y_size, f.x_size, f.x_size), dtype=complex)
    for x, y in enumerate(f.map):
        images[y, x, x] = 1.0
    return Homomorphism(src, tgt, images)


def hom_to_function(pi: Homomorphism, tol: Tolerances = DEFAULT_TOL) -> ClassicalFunction:
    if not (is_diag_algebra(pi.source, tol) and is_diag_algebra(pi.target, tol)):
        raise ValueError("both algebras must be full diagonal algebras")
    ny, nx = pi.source.hilbert_dim, pi.target.hilbert_dim
    diag = np.array([np.diag(pi(mk.matrix_unit(y, y, ny))) for y in range(ny)])   # (ny, nx)
    out = []
    for x in range(nx):
        hits = [y for y in range(ny) if abs(diag[y, x] - 1) <= tol.eq_tol]
        rest_zero = all(abs(diag[y, x]) <= tol.eq_tol for y in range(ny) if y not in hits)
        if len(hits) != 1 or not rest_zero:
            raise ValueError(f"no unique image for point {x}: not a pullback homomorphism")
        out.append(hits[0])
    return ClassicalFunction(nx, ny, tuple(out))
