"""Randomized and exhaustive verification battery.

Each ``check_*`` function returns one or more :class:`Check` records.  The
``selftest`` command and the acceptance tests both run these; everything is
driven by explicit seeds so repeated runs agree bit for bit.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from . import classical as cl
from . import matkernel as mk
from . import qfun, qrel
from .matkernel import DEFAULT_TOL, Tolerances
from .sampling import random_composable_pair, random_distinct_pair, random_homomorphism
from .vnalg import from_blocks

# thresholds fixed by the acceptance criteria
ROUNDTRIP_TOL = 1e-8
WELL_DEFINED_TOL = 1e-8
ISOMETRY_TOL = 1e-9
INTERTWINE_TOL = 1e-8


@dataclass
class Check:
    name: str
    passed: bool
    residual: float
    cases: int = 0
    note: str = ""

    def as_dict(self) -> dict:
        d = {"name": self.name, "passed": bool(self.passed),
             "residual": _finite(self.residual), "cases": int(self.cases)}
        if self.note:
            d["note"] = self.note
        return d


def _finite(x: float) -> float:
    # certificates are strict JSON; a dimension mismatch has no finite residual
    x = float(x)
    return x if np.isfinite(x) else 1.0e300


@dataclass
class Certificate:
    command: str
    inputs_digest: str
    tolerances: Tolerances
    checks: List[Check] = field(default_factory=list)

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {"command": self.command, "inputs_digest": self.inputs_digest,
                "tolerances": self.tolerances.as_dict(),
                "checks": [c.as_dict() for c in self.checks], "overall": self.overall}


def _max(values, default=0.0) -> float:
    values = [float(v) for v in values]
    return max(values) if values else default


# -- random instances ----------------------------------------------------------

def sample_homomorphisms(seed: int, count: int, max_dim: int):
    rng = np.random.default_rng(seed)
    return [random_homomorphism(rng, max_dim) for _ in range(count)]


def sample_composable(seed: int, count: int, max_dim: int):
    rng = np.random.default_rng(seed)
    return [random_composable_pair(rng, max_dim) for _ in range(count)]


def sample_distinct(seed: int, count: int, max_dim: int):
    """Pairs of distinct homomorphisms; empty when ``max_dim < 2`` (every map is unique there)."""
    if max_dim < 2:
        return []
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        pair = random_distinct_pair(rng, max_dim)
        if pair is not None:
            out.append(pair)
    return out


# -- criteria over homomorphisms --------------------------------------------------------

def check_roundtrip(homs, tol: Tolerances = DEFAULT_TOL) -> Check:
    worst = 0.0
    for pi in homs:
        back = qfun.g_inverse(qfun.g_forward(pi, tol), tol=tol)
        worst = max(worst, qfun.hom_distance(back, pi))
    return Check("roundtrip: G^-1(G(pi)) = pi", worst <= ROUNDTRIP_TOL, worst, len(homs))


def check_quantum_function(homs, tol: Tolerances = DEFAULT_TOL) -> List[Check]:
    bimod, qf = [], []
    for pi in homs:
        r = qfun.g_forward(pi, tol)
        bimod.append(qrel.bimodule_residual(r))
        qf.append(_max(qfun.quantum_function_residuals(r, tol).values()))
    return [
        Check("G(pi) is a quantum relation", _max(bimod) <= tol.membership_tol, _max(bimod), len(homs)),
        Check("G(pi) is a quantum function", _max(qf) <= tol.membership_tol, _max(qf), len(homs)),
    ]


def check_well_defined(homs, seed: int, tol: Tolerances = DEFAULT_TOL) -> Check:
    """``G^-1`` from a permuted basis order, and from a zero-padded family, matches the default."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for pi in homs:
        r = qfun.g_forward(pi, tol)
        first = qfun.g_inverse(r, tol=tol)
        order = rng.permutation(r.dim) if r.dim > 1 else None
        if order is not None and np.array_equal(order, np.arange(r.dim)):
            order = order[::-1]
        fam = qfun.extract_family(r, order=order, tol=tol)
        second = qfun.g_inverse(r, fam, tol=tol)
        third = qfun.g_inverse(r, fam.padded(len(fam) + 2), tol=tol)
        worst = max(worst, qfun.hom_distance(first, second), qfun.hom_distance(first, third))
    return Check("well-definedness: G^-1 independent of family", worst <= WELL_DEFINED_TOL,
                 worst, len(homs))


def check_dilation(homs, seed: int, tol: Tolerances = DEFAULT_TOL) -> List[Check]:
    rng = np.random.default_rng(seed)
    iso, inter, comp, proj, homo = [], [], [], [], []
    for pi in homs:
        r = qfun.g_forward(pi, tol)
        w = qfun.isometry_from_family(qfun.extract_family(r, tol=tol))
        iso.append(w.isometry_residual())
        inter.append(qfun.intertwine_residual(w, pi))
        comp.append(qfun.compression_residual(w, pi))
        proj.append(qfun.range_projection_residual(w, pi))
        order = rng.permutation(r.dim)
        w1 = qfun.isometry_from_family(qfun.extract_family(r, order=order, tol=tol))
        homo.append(qfun.homotopy_residual(w, w1, pi))
    n = len(homs)
    return [
        Check("dilation: w*w = 1", _max(iso) <= ISOMETRY_TOL, _max(iso), n),
        Check("dilation: (b x 1) w = w pi(b)", _max(inter) <= INTERTWINE_TOL, _max(inter), n),
        Check("dilation: pi(b) = w*(b x 1) w", _max(comp) <= INTERTWINE_TOL, _max(comp), n),
        Check("dilation: w w* commutes with N x 1", _max(proj) <= tol.eq_tol, _max(proj), n),
        Check("homotopy: w0 w1* in (N x C)'", _max(homo) <= tol.eq_tol, _max(homo), n),
    ]


def check_generation(homs, max_dim: int = 4, tol: Tolerances = DEFAULT_TOL) -> Check:
    worst, cases = 0.0, 0
    for pi in homs:
        if pi.source.hilbert_dim > max_dim or pi.target.hilbert_dim > max_dim:
            continue
        r = qfun.g_forward(pi, tol)
        w = qfun.isometry_from_family(qfun.extract_family(r, tol=tol))
        worst = max(worst, qfun.generation_residual(r, w, tol))
        cases += 1
    return Check("generation: (N x C)' w M' = V x B(C, l2(I))", worst <= tol.membership_tol, worst, cases)


# -- criteria over composable pairs -------------------------------------------------------

def check_functoriality(pairs, tol: Tolerances = DEFAULT_TOL) -> List[Check]:
    comp, ident = [], []
    for pi0, pi1 in pairs:
        comp.append(qfun.functor_residual(pi0, pi1, tol))
        for m in (pi1.source, pi1.target, pi0.target):
            g = qfun.g_forward(qfun.identity_hom(m), tol)
            ident.append(mk.equality_residual(g.space, qrel.diagonal(m).space))
    n = len(pairs)
    return [
        Check("functor: G(pi0 o pi1) = G(pi1) G(pi0)", _max(comp) <= tol.membership_tol, _max(comp), n),
        Check("functor: G(id_M) = M'", _max(ident) <= tol.membership_tol, _max(ident), len(ident)),
    ]


def check_composition_closure(pairs, tol: Tolerances = DEFAULT_TOL) -> Check:
    worst = 0.0
    for pi0, pi1 in pairs:
        v = qrel.compose(qfun.g_forward(pi1, tol), qfun.g_forward(pi0, tol), tol)
        worst = max(worst, _max(qfun.quantum_function_residuals(v, tol).values()),
                    qrel.bimodule_residual(v))
    return Check("composition of quantum functions is a quantum function",
                 worst <= tol.membership_tol, worst, len(pairs))


def check_injectivity(pairs, tol: Tolerances = DEFAULT_TOL) -> Check:
    """Distinct homomorphisms must give different quantum functions."""
    collisions = 0
    gap = float("inf")
    for a, b in pairs:
        va, vb = qfun.g_forward(a, tol).space, qfun.g_forward(b, tol).space
        if mk.subspace_eq(va, vb, tol):
            collisions += 1
        gap = min(gap, mk.equality_residual(va, vb))
    note = f"smallest separation {gap:.3g}" if pairs else ""
    return Check("injectivity: distinct pi give distinct G(pi)", collisions == 0,
                 float(collisions), len(pairs), note)


# -- classical oracle ---------------------------------------------------------------------

def check_classical(max_points: int = 3, tol: Tolerances = DEFAULT_TOL) -> List[Check]:
    """Exhaustive comparison of the quantum constructions with set-theoretic ones."""
    sizes = range(1, max_points + 1)
    round_trip = predicate = qf_iff = bimodule = 0
    n_rel = n_pred = 0
    for x, y in itertools.product(sizes, sizes):
        for f in cl.all_relations(x, y):
            n_rel += 1
            q = cl.relation_to_quantum(f)
            if not qrel.validate(q, tol):
                bimodule += 1
            if cl.quantum_to_relation(q, tol) != f:
                round_trip += 1
            if qfun.is_quantum_function(q, tol) != f.is_function():
                qf_iff += 1
            if x == y:
                n_pred += 1
                if qrel.properties(q, tol) != cl.classical_predicates(f):
                    predicate += 1

    fun_round = g_match = ginv_match = n_fun = 0
    for x, y in itertools.product(sizes, sizes):
        for f in cl.all_functions(x, y):
            n_fun += 1
            pi = cl.function_to_hom(f)
            if not qfun.validate_hom(pi, tol) or cl.hom_to_function(pi, tol) != f:
                fun_round += 1
            g = qfun.g_forward(pi, tol)
            if cl.quantum_to_relation(g, tol) != f.graph():
                g_match += 1
            back = qfun.g_inverse(cl.relation_to_quantum(f.graph()), tol=tol)
            if qfun.hom_distance(back, pi) > tol.eq_tol or cl.hom_to_function(back, tol) != f:
                ginv_match += 1

    return [
        Check("classical: relation bridge round trip", round_trip == 0, float(round_trip), n_rel),
        Check("classical: relation images are bimodules", bimodule == 0, float(bimodule), n_rel),
        Check("classical: four predicates match", predicate == 0, float(predicate), n_pred),
        Check("classical: quantum function iff graph of a function", qf_iff == 0, float(qf_iff), n_rel),
        Check("classical: function bridge round trip", fun_round == 0, float(fun_round), n_fun),
        Check("classical: G(pullback f) = graph of f", g_match == 0, float(g_match), n_fun),
        Check("classical: G^-1(graph of f) = pullback f", ginv_match == 0, float(ginv_match), n_fun),
    ]


def check_corrupted_fixture(tol: Tolerances = DEFAULT_TOL) -> Check:
    """Negative control: a deliberately broken homomorphism must be rejected."""
    m = from_blocks([(2, 1)])
    bad = qfun.Homomorphism(m, m, 1.1 * m.algebra.basis)
    res = _max(qfun.hom_residuals(bad).values())
    return Check("fixture: identity on M_2 is a homomorphism", res <= tol.eq_tol, res, 1,
                 "corrupted on purpose")


# -- driver -----------------------------------------------------------------------------------

def run_battery(seed: int = 0, max_dim: int = 6, count: int = 200, pair_count: int = 100,
                classical_points: int = 3, corrupt: bool = False,
                tol: Tolerances = DEFAULT_TOL) -> List[Check]:
    """All acceptance checks, in a fixed order, from one seed."""
    seeds = [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(6)]
    homs = sample_homomorphisms(seeds[0], count, max_dim)
    pairs = sample_composable(seeds[1], pair_count, max_dim)
    distinct = sample_distinct(seeds[2], pair_count, max_dim)
    checks = [check_roundtrip(homs, tol)]
    checks += check_quantum_function(homs, tol)
    checks.append(check_well_defined(homs, seeds[3], tol))
    checks += check_functoriality(pairs, tol)
    checks.append(check_composition_closure(pairs, tol))
    checks += check_dilation(homs, seeds[4], tol)
    checks.append(check_generation(homs, min(4, max_dim), tol))
    checks += check_classical(classical_points, tol)
    checks.append(check_injectivity(distinct, tol))
    if corrupt:
        checks.append(check_corrupted_fixture(tol))
    return checks
