import numpy as np
import pytest
from hypothesis import given, strategies as st

from qfunctions import matkernel as mk
from qfunctions import vnalg
from qfunctions.errors import ShapeError
from qfunctions.sampling import random_blocks, random_unitary

from conftest import rand_c

E = mk.matrix_unit


def brute_commutant_dim(gens, d):
    """Oracle: null space of the commutator map, built entry by entry."""
    cols = []
    for i in range(d):
        for j in range(d):
            x = E(i, j, d)
            cols.append(np.concatenate([(g @ x - x @ g).ravel() for g in gens]
                                       + [(g.conj().T @ x - x @ g.conj().T).ravel() for g in gens]))
    a = np.array(cols).T
    return d * d - np.linalg.matrix_rank(a, tol=1e-9)


def test_one_by_one():
    m = vnalg.from_blocks([(1, 1)])
    assert m.hilbert_dim == 1 and m.dim == 1 and m.commutant.dim == 1


def test_full_m2():
    m = vnalg.from_blocks([(2, 1)])
    assert m.dim == 4
    assert mk.subspace_eq(m.commutant, mk.subspace_of([np.eye(2)]))


def test_block_2_2_commutant_matches_numeric():
    m = vnalg.from_blocks([(2, 2)])
    assert m.commutant.dim == 4
    assert mk.subspace_eq(vnalg.commutant_of(m.algebra.basis, 4), m.commutant)
    assert brute_commutant_dim(list(m.algebra.basis), 4) == 4


@pytest.mark.parametrize("blocks", [[(1, 3)], [(2, 3)], [(1, 1), (2, 1)], [(2, 1), (1, 2)],
                                    [(1, 2), (1, 1), (2, 1)]])
def test_structured_commutant_matches_numeric(blocks):
    m = vnalg.from_blocks(blocks)
    d = m.hilbert_dim
    assert m.dim == sum(n * n for n, _ in blocks)
    assert m.commutant.dim == sum(k * k for _, k in blocks)
    assert mk.subspace_eq(vnalg.commutant_of(m.algebra.basis, d), m.commutant)
    assert mk.subspace_eq(vnalg.commutant_of(m.commutant.basis, d), m.algebra)
    assert vnalg.is_consistent(m)


def test_bad_blocks():
    with pytest.raises(ValueError):
        vnalg.from_blocks([])
    with pytest.raises(ValueError):
        vnalg.from_blocks([(0, 1)])


def test_commutant_of_examples():
    assert vnalg.commutant_of([], 3).dim == 9
    full = vnalg.from_blocks([(2, 1)]).algebra.basis
    assert mk.subspace_eq(vnalg.commutant_of(full, 2), mk.subspace_of([np.eye(2)]))


def test_commutant_of_linf3_by_enumeration():
    gens = [E(i, i, 3) for i in range(3)]
    c = vnalg.commutant_of(gens, 3)
    # a matrix unit commutes with every diagonal projection iff it is diagonal
    units = [E(i, j, 3) for i in range(3) for j in range(3)
             if all(np.allclose(g @ E(i, j, 3), E(i, j, 3) @ g) for g in gens)]
    assert c.dim == len(units) == 3
    assert mk.subspace_eq(c, mk.subspace_of(units))


def test_commutant_shape_error():
    with pytest.raises(ShapeError):
        vnalg.commutant_of([np.eye(2)], 3)


def test_from_generators_examples():
    assert vnalg.from_generators([np.eye(3)], 3).dim == 1
    m = vnalg.from_generators([E(0, 1, 2)], 2)
    assert m.dim == 4


def test_from_generators_hermitian_masa(rng):
    a = rand_c(rng, 3, 3)
    h = a + a.conj().T
    m = vnalg.from_generators([h], 3)
    w, vecs = np.linalg.eigh(h)
    assert len(np.unique(np.round(w, 8))) == 3
    projections = [np.outer(vecs[:, i], vecs[:, i].conj()) for i in range(3)]
    assert m.dim == 3
    assert mk.subspace_eq(m.algebra, mk.subspace_of(projections))
    assert mk.subspace_eq(m.commutant, m.algebra)


def test_center_examples():
    assert vnalg.center(vnalg.from_blocks([(2, 1)])).dim == 1
    linf = vnalg.from_blocks([(1, 1)] * 3)
    assert mk.subspace_eq(vnalg.center(linf), linf.algebra)
    m = vnalg.from_blocks([(2, 1), (3, 1)])
    z = vnalg.center(m)
    ids = [np.diag([1, 1, 0, 0, 0]), np.diag([0, 0, 1, 1, 1])]
    assert z.dim == 2 and mk.subspace_eq(z, mk.subspace_of(ids))


@given(st.integers(0, 2 ** 31 - 1))
def test_rotated_block_algebra_is_consistent(seed):
    rng = np.random.default_rng(seed)
    blocks = random_blocks(rng, 5)
    m = vnalg.from_blocks(blocks)
    r = vnalg.conjugate(m, random_unitary(rng, m.hilbert_dim))
    assert vnalg.is_consistent(r)
    assert mk.subspace_eq(vnalg.commutant_of(r.algebra.basis, r.hilbert_dim), r.commutant)
    # center dimension is the number of blocks
    assert vnalg.center(r).dim == len(blocks)


def test_generators_roundtrip_through_from_generators(rng):
    m = vnalg.conjugate(vnalg.from_blocks([(2, 1), (1, 2)]), random_unitary(rng, 4))
    again = vnalg.from_generators(m.algebra.basis, 4)
    assert vnalg.same_algebra(m, again)
    assert mk.subspace_eq(again.commutant, m.commutant)


def test_scalars_and_full():
    assert vnalg.scalars(3).dim == 1 and vnalg.scalars(3).commutant.dim == 9
    assert vnalg.full_matrices(3).dim == 9
