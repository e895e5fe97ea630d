import numpy as np
from hypothesis import given, strategies as st

from qfunctions import battery, qfun, vnalg
from qfunctions.matkernel import Tolerances
from qfunctions.sampling import (_multiplicities, random_block_hom, random_blocks,
                                 random_composable_pair, random_unitary)

seeds = st.integers(0, 2 ** 31 - 1)


@given(seeds, st.integers(1, 6))
def test_random_blocks_fit(seed, max_dim):
    blocks = random_blocks(np.random.default_rng(seed), max_dim)
    assert 1 <= sum(n * m for n, m in blocks) <= max_dim


@given(seeds, st.integers(1, 6))
def test_random_homs_are_valid(seed, max_dim):
    data = random_block_hom(np.random.default_rng(seed), max_dim)
    sizes = [n for n, _ in data.source_blocks]
    for (p, _), row in zip(data.target_blocks, data.multiplicity):
        assert int(np.dot(row, sizes)) == p
    pi = data.homomorphism()
    assert pi.source.hilbert_dim <= max_dim and pi.target.hilbert_dim <= max_dim
    assert qfun.validate_hom(pi)


def test_unitary_is_unitary(rng):
    u = random_unitary(rng, 4)
    assert np.allclose(u.conj().T @ u, np.eye(4))


def test_multiplicities_enumeration():
    # M_1 (+) M_1 into M_2: A = [2,0], [1,1], [0,2]
    got = sorted(tuple(a.ravel()) for a in _multiplicities(((1, 1), (1, 1)), ((2, 1),)))
    assert got == [(0, 2), (1, 1), (2, 0)]
    assert _multiplicities(((2, 1),), ((3, 1),)) == []


@given(seeds)
def test_composable_pair_shares_middle_algebra(seed):
    pi0, pi1 = random_composable_pair(np.random.default_rng(seed), 4)
    assert vnalg.same_algebra(pi0.source, pi1.target)
    assert qfun.validate_hom(qfun.compose_hom(pi0, pi1))


def test_certificate_plumbing():
    c = battery.Certificate("x", "sha256:0", Tolerances(),
                            [battery.Check("a", True, 0.0, 1), battery.Check("b", False, float("inf"), 1)])
    d = c.as_dict()
    assert d["overall"] is False and c.overall is False
    assert d["checks"][1]["residual"] == 1e300
    assert battery.Certificate("x", "sha256:0", Tolerances()).overall


def test_corrupted_fixture_fails():
    c = battery.check_corrupted_fixture()
    assert not c.passed and c.residual > 0.1


def test_battery_is_deterministic():
    a = [x.as_dict() for x in battery.run_battery(seed=3, max_dim=3, count=10, pair_count=5,
                                                  classical_points=2)]
    b = [x.as_dict() for x in battery.run_battery(seed=3, max_dim=3, count=10, pair_count=5,
                                                  classical_points=2)]
    assert a == b and all(x["passed"] for x in a)


def test_small_dimension_skips_injectivity():
    checks = {c.name: c for c in battery.run_battery(seed=0, max_dim=1, count=5, pair_count=5,
                                                     classical_points=1)}
    inj = checks["injectivity: distinct pi give distinct G(pi)"]
    assert inj.passed and inj.cases == 0
