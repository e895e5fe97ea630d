"""Seeded random instances: block algebras and unital *-homomorphisms between them.

A unital *-homomorphism ``(+)_i M_{n_i} (x) 1_{m_i} -> (+)_j M_{p_j} (x) 1_{q_j}``
is determined up to unitary equivalence inside the target by a multiplicity
matrix ``A`` with ``sum_i A[j, i] n_i = p_j``; on target block ``j`` it sends
``b`` to ``U_j (+)_i (b_i (x) 1_{A[j, i]}) U_j^* (x) 1_{q_j}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from . import matkernel as mk
from .qfun import Homomorphism
from .vnalg import VonNeumannAlgebra, block_offsets, conjugate, from_blocks


def random_matrix(rng: np.random.Generator, rows: int, cols: Optional[int] = None) -> np.ndarray:
    cols = rows if cols is None else cols
    return (rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))) / np.sqrt(2)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-distributed unitary via QR with the phase fix on R's diagonal."""
    q, r = np.linalg.qr(random_matrix(rng, n))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    a = random_matrix(rng, n)
    return (a + a.conj().T) / 2


def random_blocks(rng: np.random.Generator, max_dim: int) -> Tuple[Tuple[int, int], ...]:
    """Random block spec with total Hilbert dimension between 1 and ``max_dim``."""
    total = int(rng.integers(1, max_dim + 1))
    blocks = []
    left = total
    while left > 0:
        n = int(rng.integers(1, left + 1))
        m = int(rng.integers(1, left // n + 1))
        blocks.append((n, m))
        left -= n * m
    return tuple(blocks)


def extract_blocks(blocks, b: np.ndarray) -> List[np.ndarray]:
    """The ``n_i x n_i`` components of ``b`` in the unrotated block algebra."""
    out = []
    for (n, m), off in zip(blocks, block_offsets(blocks)):
        sub = b[off:off + n * m, off:off + n * m]
        out.append(sub[::m, ::m])
    return out


@dataclass(frozen=True, eq=False)
class BlockHomData:
    """Structured description of a homomorphism between block algebras."""

    source_blocks: tuple
    target_blocks: tuple
    multiplicity: np.ndarray          # (len(target_blocks), len(source_blocks))
    unitaries: tuple                  # one p_j x p_j unitary per target block
    source_frame: np.ndarray          # unitary rotating the source algebra
    target_frame: np.ndarray          # unitary rotating the target algebra

    def apply(self, b: np.ndarray) -> np.ndarray:
        b = self.source_frame.conj().T @ b @ self.source_frame
        comps = extract_blocks(self.source_blocks, b)
        parts = []
        for j, (p, q) in enumerate(self.target_blocks):
            diag = [mk.kron(comps[i], np.eye(a)) for i, a in enumerate(self.multiplicity[j]) if a]
            d = _block_diag(diag)
            u = self.unitaries[j]
            parts.append(mk.kron(u @ d @ u.conj().T, np.eye(q)))
        out = _block_diag(parts)
        return self.target_frame @ out @ self.target_frame.conj().T

    def algebras(self) -> Tuple[VonNeumannAlgebra, VonNeumannAlgebra]:
        src = conjugate(from_blocks(self.source_blocks), self.source_frame)
        tgt = conjugate(from_blocks(self.target_blocks), self.target_frame)
        return src, tgt

    def homomorphism(self, source: VonNeumannAlgebra = None, target: VonNeumannAlgebra = None) -> Homomorphism:
        if source is None or target is None:
            source, target = self.algebras()
        images = np.array([self.apply(b) for b in source.algebra.basis])
        return Homomorphism(source, target, images)


def _block_diag(mats) -> np.ndarray:
    n = sum(m.shape[0] for m in mats)
    out = np.zeros((n, n), dtype=complex)
    o = 0
    for m in mats:
        k = m.shape[0]
        out[o:o + k, o:o + k] = m
        o += k
    return out


def _random_target(rng, source_blocks, max_dim):
    """Target blocks built from sums of source block sizes, so a homomorphism exists."""
    sizes = [n for n, _ in source_blocks]
    smallest = min(sizes)
    budget = int(rng.integers(smallest, max_dim + 1))
    rows, blocks = [], []
    while budget >= smallest:
        row = np.zeros(len(sizes), dtype=int)
        p = 0
        cap = int(rng.integers(smallest, budget + 1))
        # at least one summand, then keep adding while it fits
        while True:
            fits = [i for i, n in enumerate(sizes) if p + n <= cap]
            if not fits or (p and rng.random() < 0.4):
                break
            i = int(rng.choice(fits))
            row[i] += 1
            p += sizes[i]
        q = int(rng.integers(1, budget // p + 1))
        rows.append(row)
        blocks.append((p, q))
        budget -= p * q
        if rng.random() < 0.4:
            break
    return tuple(blocks), np.array(rows)


def random_block_hom(rng: np.random.Generator, max_dim: int, source_blocks=None,
                     rotate: Optional[bool] = None) -> BlockHomData:
    """Random homomorphism with both Hilbert dimensions at most ``max_dim``."""
    if source_blocks is None:
        source_blocks = random_blocks(rng, max_dim)
    tgt_blocks, mult = _random_target(rng, source_blocks, max_dim)
    return _with_frames(rng, source_blocks, tgt_blocks, mult, rotate)


def _with_frames(rng, source_blocks, target_blocks, mult, rotate, source_frame=None):
    if rotate is None:
        rotate = bool(rng.random() < 0.5)
    k = sum(n * m for n, m in source_blocks)
    h = sum(p * q for p, q in target_blocks)
    us = tuple(random_unitary(rng, p) for p, _ in target_blocks)
    if source_frame is None:
        source_frame = random_unitary(rng, k) if rotate else np.eye(k, dtype=complex)
    target_frame = random_unitary(rng, h) if rotate else np.eye(h, dtype=complex)
    return BlockHomData(tuple(source_blocks), tuple(target_blocks), mult, us, source_frame, target_frame)


def random_homomorphism(rng: np.random.Generator, max_dim: int) -> Homomorphism:
    return random_block_hom(rng, max_dim).homomorphism()


def random_composable_pair(rng: np.random.Generator, max_dim: int):
    """``(pi0, pi1)`` with ``pi1: M2 -> M1`` and ``pi0: M1 -> M0``, all dims at most ``max_dim``."""
    inner = random_block_hom(rng, max_dim)
    m2, m1 = inner.algebras()
    pi1 = inner.homomorphism(m2, m1)
    outer = random_block_hom(rng, max_dim, source_blocks=inner.target_blocks)
    # reuse the middle algebra's frame so both maps see literally the same M1
    outer = BlockHomData(outer.source_blocks, outer.target_blocks, outer.multiplicity,
                         outer.unitaries, inner.target_frame, outer.target_frame)
    _, m0 = outer.algebras()
    pi0 = outer.homomorphism(m1, m0)
    return pi0, pi1


def random_distinct_pair(rng: np.random.Generator, max_dim: int, min_distance: float = 1e-3,
                         attempts: int = 50):
    """Two homomorphisms between the same algebras whose images differ, or None.

    The second map is either the first conjugated by a random unitary of the
    target algebra or a map with a different multiplicity matrix.
    """
    for _ in range(attempts):
        data = random_block_hom(rng, max_dim)
        src, tgt = data.algebras()
        pi = data.homomorphism(src, tgt)
        if rng.random() < 0.5:
            other = _with_frames(rng, data.source_blocks, data.target_blocks, data.multiplicity,
                                 rotate=False)
            other = BlockHomData(other.source_blocks, other.target_blocks, other.multiplicity,
                                 other.unitaries, data.source_frame, data.target_frame)
        else:
            alt = [a for a in _multiplicities(data.source_blocks, data.target_blocks)
                   if not np.array_equal(a, data.multiplicity)]
            if not alt:
                continue
            mult = alt[int(rng.integers(len(alt)))]
            other = _with_frames(rng, data.source_blocks, data.target_blocks, mult, rotate=False)
            other = BlockHomData(other.source_blocks, other.target_blocks, mult,
                                 other.unitaries, data.source_frame, data.target_frame)
        sigma = other.homomorphism(src, tgt)
        dist = float(np.linalg.norm((pi.images - sigma.images).ravel()))
        if dist > min_distance:
            return pi, sigma
    return None


def _multiplicities(source_blocks, target_blocks):
    """Every multiplicity matrix giving a unital homomorphism between the block algebras."""
    sizes = [n for n, _ in source_blocks]

    def rows_for(p, i=0):
        if i == len(sizes):
            if p == 0:
                yield []
            return
        for a in range(p // sizes[i] + 1):
            for rest in rows_for(p - a * sizes[i], i + 1):
                yield [a] + rest

    per_block = [list(rows_for(p)) for p, _ in target_blocks]
    out = []

    def build(j, acc):
        if j == len(per_block):
            out.append(np.array(acc))
            return
        for row in per_block[j]:
            build(j + 1, acc + [row])

    build(0, [])
    return out
