"""Finite-dimensional quantum relations and the quantum function / homomorphism correspondence.

Operators act between finite-dimensional Hilbert spaces and are stored as
dense complex ``numpy`` arrays.  The main entry points:

* :mod:`qfunctions.matkernel` - operator subspaces under the Hilbert-Schmidt inner product
* :mod:`qfunctions.vnalg` - von Neumann algebras as (algebra, commutant) pairs
* :mod:`qfunctions.qrel` - quantum relations, their calculus and predicates
* :mod:`qfunctions.qfun` - homomorphisms, ``G``, ``G^-1`` and dilations
* :mod:`qfunctions.classical` - the bridge to finite sets
* :mod:`qfunctions.cli` - the ``qfunctions`` command
"""
from .errors import (IllConditionedError, InvalidHomomorphismError, InvalidRelationError,
                     NotAQuantumFunctionError, NotComposableError, ShapeError)
from .matkernel import DEFAULT_TOL, OperatorSubspace, Tolerances
from .qfun import (DilationIsometry, Homomorphism, PartialIsometryFamily, dilation,
                   extract_family, g_forward, g_inverse, is_quantum_function)
from .qrel import QuantumRelation, compose, diagonal, inverse
from .vnalg import VonNeumannAlgebra, commutant_of, from_blocks, from_generators

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL", "DilationIsometry", "Homomorphism", "IllConditionedError",
    "InvalidHomomorphismError", "InvalidRelationError", "NotAQuantumFunctionError",
    "NotComposableError", "OperatorSubspace", "PartialIsometryFamily", "QuantumRelation",
    "ShapeError", "Tolerances", "VonNeumannAlgebra", "commutant_of", "compose", "diagonal",
    "dilation", "extract_family", "from_blocks", "from_generators", "g_forward", "g_inverse",
    "inverse", "is_quantum_function",
]
