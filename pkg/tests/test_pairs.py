import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ccrkit.characters import faithful_characters, parse_character
from ccrkit.errors import CapacityError, PreconditionError, StructureError
from ccrkit.pairs import (CCRPair, PhaseRep, ccr_phase_table, conjugate,
                          direct_sum, inflate, modulated_pair, pair_defect,
                          pair_trace, random_instance, regular_pair,
                          representation_defect, schrodinger_pair,
                          shifted_pair, verify_ccr)
from ccrkit.linalg import random_unitary
from ccrkit.rings import parse_ring

CASES = [("zmod:2", 1), ("zmod:2", 2), ("zmod:3", 1), ("zmod:4", 1),
         ("zmod:6", 1), ("gf:5", 1), ("gf:7", 1), ("mat:2:gf:2", 1),
         ("zmod:2*zmod:3", 1)]


def first_faithful(spec):
    ring = parse_ring(spec)
    return ring, faithful_characters(ring)[0]


def dense_ccr_residual(pair):
    """Quadratic-scan oracle, built from dense matrices only."""
    g = pair.space.order
    worst = 0.0
    lam = pair.lam
    for a in range(g):
        ua = pair.u.mat(a)
        for b in range(g):
            vb = pair.v.mat(b)
            phase = lam.value(pair.ring.coords(pair.space.dot(a, b)))
            diff = ua @ vb - phase * (vb @ ua)
            worst = max(worst, float(np.linalg.norm(diff, 2)))
    return worst


@pytest.mark.parametrize("spec,d", CASES)
def test_schrodinger_ccr_exact(spec, d):
    ring, lam = first_faithful(spec)
    pair = schrodinger_pair(ring, d, lam)
    assert verify_ccr(pair) == 0.0
    assert representation_defect(pair.u) == 0.0
    assert representation_defect(pair.v) == 0.0
    assert pair.dim == ring.order ** d


@pytest.mark.parametrize("spec,d", CASES[:6])
def test_verify_ccr_agrees_with_dense_oracle(spec, d):
    ring, lam = first_faithful(spec)
    pair = schrodinger_pair(ring, d, lam)
    assert dense_ccr_residual(pair) < 1e-13
    reg = regular_pair(ring, d, lam)
    if reg.dim <= 64:
        assert dense_ccr_residual(reg) < 1e-13


@pytest.mark.parametrize("spec,d", CASES)
def test_regular_ccr_exact(spec, d):
    ring, lam = first_faithful(spec)
    pair = regular_pair(ring, d, lam)
    assert verify_ccr(pair) == 0.0
    assert pair.dim == ring.order ** (2 * d)


def test_schrodinger_action_convention():
    # U(a) f(x) = f(x + a): column a of the permutation sends basis vector
    # e_x to e_{x - a}; V(b) is diagonal with phases lam(x . b)
    ring, lam = first_faithful("zmod:5")
    pair = schrodinger_pair(ring, 1, lam)
    u1 = pair.u.mat(1)
    f = np.zeros(5)
    f[2] = 1.0
    shifted = u1 @ f
    assert shifted[1] == 1.0  # (U(1) e_2)(1) = e_2(1 + 1)
    v1 = pair.v.mat(1)
    expected = np.diag([np.exp(2j * np.pi * x / 5) for x in range(5)])
    np.testing.assert_allclose(v1, expected, atol=1e-14)


def test_braid_phase_table_values():
    ring, lam = first_faithful("zmod:4")
    pair = schrodinger_pair(ring, 1, lam)
    table = ccr_phase_table(pair)
    for a in range(4):
        for b in range(4):
            assert table[a, b] == (a * b) % 4


def test_verify_ccr_detects_broken_translation():
    ring, lam = first_faithful("zmod:4")
    p = schrodinger_pair(ring, 1, lam)
    taus = p.u.taus.copy()
    taus[1, 0], taus[1, 1] = taus[1, 1], taus[1, 0]
    bad = CCRPair(ring, 1, lam, p.space, p.dim,
                  PhaseRep(p.space, taus, p.u.nums, p.u.den), p.v)
    exact = verify_ccr(bad)
    dense = dense_ccr_residual(bad)
    assert exact > 0.5
    assert abs(exact - dense) < 1e-12


def test_representation_defect_detects_phase_corruption():
    ring, lam = first_faithful("zmod:4")
    p = schrodinger_pair(ring, 1, lam)
    nums = p.u.nums.copy()
    nums[2, 0] = (nums[2, 0] + 1) % p.u.den
    bad = PhaseRep(p.space, p.u.taus, nums, p.u.den)
    assert representation_defect(bad) > 0.5


def test_shifted_and_modulated_pairs_still_ccr():
    ring, lam = first_faithful("zmod:3")
    pair = schrodinger_pair(ring, 1, lam)
    sh = shifted_pair(pair)
    md = modulated_pair(pair)
    assert verify_ccr(sh) == 0.0
    assert verify_ccr(md) == 0.0
    assert sh.dim == pair.dim * 9
    assert md.dim == pair.dim * 9


def test_inflate_and_direct_sum():
    ring, lam = first_faithful("zmod:3")
    pair = schrodinger_pair(ring, 1, lam)
    tripled = inflate(pair, 3)
    assert tripled.dim == 9
    assert verify_ccr(tripled) == 0.0
    both = direct_sum(pair, inflate(pair, 2))
    assert both.dim == 9
    assert verify_ccr(both) == 0.0
    # inflation is block-first: the first dim rows hold one whole copy
    np.testing.assert_allclose(tripled.u.mat(1)[:3, :3], pair.u.mat(1),
                               atol=1e-14)


def test_conjugate_preserves_ccr_and_checks_unitarity():
    ring, lam = first_faithful("zmod:4")
    pair = schrodinger_pair(ring, 1, lam)
    w = random_unitary(4, seed=9)
    moved = conjugate(pair, w)
    assert verify_ccr(moved) < 1e-13
    with pytest.raises(PreconditionError):
        conjugate(pair, 2.0 * w)


def test_random_instance_deterministic_and_ccr():
    ring, lam = first_faithful("zmod:3")
    a = random_instance(ring, 1, lam, 2, seed=3)
    b = random_instance(ring, 1, lam, 2, seed=3)
    c = random_instance(ring, 1, lam, 2, seed=4)
    assert a.dim == 6
    np.testing.assert_array_equal(a.u.mats, b.u.mats)
    assert not np.allclose(a.u.mats, c.u.mats)
    assert verify_ccr(a) < 1e-13
    assert pair_defect(a) < 1e-13


def test_pair_trace_matches_dense():
    ring, lam = first_faithful("zmod:4")
    pair = schrodinger_pair(ring, 1, lam)
    for a in range(4):
        for b in range(4):
            direct = complex(np.trace(pair.v.mat(b) @ pair.u.mat(a)))
            assert abs(pair_trace(pair, a, b) - direct) < 1e-12


@given(st.integers(0, 10 ** 6))
@settings(max_examples=20, deadline=None)
def test_conjugation_leaves_traces_fixed(seed):
    ring, lam = first_faithful("zmod:3")
    pair = schrodinger_pair(ring, 1, lam)
    moved = conjugate(pair, random_unitary(3, seed=seed))
    for a in range(3):
        for b in range(3):
            assert abs(pair_trace(pair, a, b) - pair_trace(moved, a, b)) < 1e-12


def test_dimension_cap_enforced():
    ring, lam = first_faithful("zmod:8")
    with pytest.raises(CapacityError):
        shifted_pair(regular_pair(ring, 2, lam))


def test_mismatched_character_rejected():
    ring = parse_ring("zmod:4")
    other = parse_ring("zmod:2*zmod:3")
    lam = parse_character(other.additive_factors, "1,1")
    with pytest.raises(StructureError):
        schrodinger_pair(ring, 1, lam)
