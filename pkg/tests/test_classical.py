import itertools

import numpy as np
import pytest

from qfunctions import classical as cl
from qfunctions import matkernel as mk
from qfunctions import qfun, qrel, vnalg
from qfunctions.classical import ClassicalFunction, ClassicalRelation

SIZES = list(itertools.product((1, 2, 3), repeat=2))


def test_diag_algebra_examples():
    one = cl.diag_algebra(1)
    assert one.hilbert_dim == 1 and one.dim == 1
    two = cl.diag_algebra(2)
    assert two.commutant.dim == 2
    three = cl.diag_algebra(3)
    assert mk.subspace_eq(vnalg.commutant_of(three.algebra.basis, 3), three.commutant)
    assert cl.is_diag_algebra(three)
    assert not cl.is_diag_algebra(vnalg.full_matrices(2))
    assert not cl.is_diag_algebra(vnalg.scalars(2))


def test_relation_to_quantum_examples():
    assert cl.relation_to_quantum(ClassicalRelation(2, 3, frozenset())).dim == 0
    full = ClassicalRelation(2, 3, frozenset(itertools.product(range(3), range(2))))
    assert cl.relation_to_quantum(full).dim == 6
    ident = ClassicalRelation(3, 3, frozenset((x, x) for x in range(3)))
    assert qrel.same_relation(cl.relation_to_quantum(ident), qrel.diagonal(cl.diag_algebra(3)))


def test_relation_bridge_exhaustive():
    count = 0
    for nx, ny in SIZES:
        for f in cl.all_relations(nx, ny):
            q = cl.relation_to_quantum(f)
            assert q.dim == len(f.pairs)
            assert qrel.validate(q)
            assert cl.quantum_to_relation(q) == f
            assert qfun.is_quantum_function(q) == f.is_function()
            count += 1
    assert count == sum(2 ** (a * b) for a, b in SIZES)


def test_quantum_to_relation_examples():
    l3 = cl.diag_algebra(3)
    assert cl.quantum_to_relation(qrel.zero_relation(l3, l3)).pairs == frozenset()
    assert cl.quantum_to_relation(qrel.diagonal(l3)).pairs == {(x, x) for x in range(3)}
    with pytest.raises(ValueError):
        cl.quantum_to_relation(qrel.diagonal(vnalg.full_matrices(2)))


def test_function_to_hom_examples():
    ident = cl.function_to_hom(ClassicalFunction(3, 3, (0, 1, 2)))
    assert qfun.hom_distance(ident, qfun.identity_hom(cl.diag_algebra(3))) == 0
    const = cl.function_to_hom(ClassicalFunction(3, 2, (1, 1, 1)))
    assert np.array_equal(const(mk.matrix_unit(1, 1, 2)), np.eye(3))
    assert np.array_equal(const(mk.matrix_unit(0, 0, 2)), np.zeros((3, 3)))


def test_functions_two_to_three():
    homs = [cl.function_to_hom(f) for f in cl.all_functions(2, 3)]
    assert len(homs) == 9
    assert all(qfun.validate_hom(h) for h in homs)
    for a, b in itertools.combinations(homs, 2):
        assert qfun.hom_distance(a, b) > 0.5


def test_function_bridge_exhaustive():
    for nx, ny in SIZES:
        for f in cl.all_functions(nx, ny):
            assert cl.hom_to_function(cl.function_to_hom(f)) == f
    assert cl.hom_to_function(qfun.identity_hom(cl.diag_algebra(3))).map == (0, 1, 2)
    assert cl.hom_to_function(cl.function_to_hom(ClassicalFunction(3, 2, (0, 0, 0)))).map == (0, 0, 0)


def test_hom_to_function_rejects_non_diagonal():
    with pytest.raises(ValueError):
        cl.hom_to_function(qfun.identity_hom(vnalg.full_matrices(2)))


def test_predicate_examples():
    ident = ClassicalRelation(3, 3, frozenset((x, x) for x in range(3)))
    assert cl.classical_predicates(ident) == qrel.RelationProperties(True, True, True, True)
    full = ClassicalRelation(2, 2, frozenset(itertools.product(range(2), repeat=2)))
    assert cl.classical_predicates(full) == qrel.RelationProperties(True, True, False, True)
    strict = ClassicalRelation(3, 3, frozenset({(1, 0), (2, 0), (2, 1)}))
    assert cl.classical_predicates(strict) == qrel.RelationProperties(False, False, True, True)


def test_compose_relations():
    f = ClassicalRelation(2, 3, frozenset({(0, 0), (2, 1)}))
    g = ClassicalRelation(3, 2, frozenset({(1, 0), (0, 2), (1, 2)}))
    assert cl.compose_relations(g, f).pairs == {(1, 0), (0, 1), (1, 1)}
    with pytest.raises(ValueError):
        cl.compose_relations(f, f)


def test_classical_validation():
    with pytest.raises(ValueError):
        ClassicalRelation(2, 2, frozenset({(2, 0)}))
    with pytest.raises(ValueError):
        ClassicalFunction(2, 2, (0,))
    with pytest.raises(ValueError):
        ClassicalFunction(2, 2, (0, 5))
