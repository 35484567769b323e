import numpy as np
import pytest

from ccrkit.characters import dual_group, faithful_characters
from ccrkit.errors import CapacityError, StructureError
from ccrkit.heisenberg import (central_character_defect, group_order,
                               heis_group, heis_inv, heis_mul, induced_rep,
                               multiplication_table, pair_from_rep,
                               regular_rep, rep_from_pair,
                               rep_homomorphism_defect, schrodinger_rep,
                               trace_table)
from ccrkit.pairs import schrodinger_pair
from ccrkit.rings import parse_ring


def tuple_mul(ring, g, h):
    """Coordinate-level oracle for the twisted product, d = 1."""
    a = ring.add(g[0], h[0])
    b = ring.add(g[1], h[1])
    c = ring.add(ring.add(g[2], h[2]), ring.mul(g[0], h[1]))
    return (a, b, c)


@pytest.mark.parametrize("spec", ["zmod:4", "zmod:6", "mat:2:gf:2"])
def test_group_law_matches_tuple_oracle(spec):
    ring = parse_ring(spec)
    group = heis_group(ring, 1)
    els = list(group.elements())
    stride = max(1, len(els) // 40)
    sample = els[::stride]
    for g in sample:
        for h in sample:
            got = group.mul(g, h)
            assert (got.a, got.b, got.c) == tuple_mul(ring, (g.a, g.b, g.c),
                                                      (h.a, h.b, h.c))


def test_group_axioms_brute():
    ring = parse_ring("zmod:3")
    group = heis_group(ring, 1)
    els = list(group.elements())
    e = group.identity()
    for g in els:
        assert group.mul(g, e) == g == group.mul(e, g)
        assert group.mul(g, group.inv(g)) == e
        assert group.mul(group.inv(g), g) == e
    for g in els[::3]:
        for h in els[::3]:
            for k in els[::3]:
                assert (group.mul(group.mul(g, h), k)
                        == group.mul(g, group.mul(h, k)))


def test_center_is_exactly_the_central_copy():
    group = heis_group(parse_ring("zmod:3"), 1)
    els = list(group.elements())
    commuting = [z for z in els
                 if all(group.mul(z, g) == group.mul(g, z) for g in els)]
    assert sorted((z.a, z.b, z.c) for z in commuting) == \
        sorted((z.a, z.b, z.c) for z in group.center())
    assert len(group.center()) == 3


def test_commutator_recovers_the_dot_product():
    # [(a,0,0), (0,b,0)] = (0, 0, a.b): the group remembers the pairing
    ring = parse_ring("mat:2:gf:2")
    group = heis_group(ring, 1)
    for a in list(ring.elements())[:6]:
        for b in list(ring.elements())[:6]:
            k = group.commutator(group.elem(a, 0, 0), group.elem(0, b, 0))
            assert (k.a, k.b, k.c) == (0, 0, ring.mul(a, b))


def test_noncommutative_twist():
    ring = parse_ring("mat:2:gf:2")
    group = heis_group(ring, 1)
    g = group.elem(1, 0, 0)
    h = group.elem(0, 2, 0)
    assert group.mul(g, h) != group.mul(h, g)


def test_mul_rejects_mixed_groups():
    g = heis_group(parse_ring("zmod:2"), 1).identity()
    h = heis_group(parse_ring("zmod:3"), 1).identity()
    with pytest.raises(StructureError):
        heis_mul(g, h)
    assert heis_inv(g) == g


def test_group_order_and_cap():
    assert group_order(parse_ring("zmod:5"), 1) == 125
    assert group_order(parse_ring("zmod:2"), 3) == 128
    big = heis_group(parse_ring("zmod:8"), 2)
    with pytest.raises(CapacityError):
        list(big.elements())


@pytest.mark.parametrize("spec,d", [("zmod:3", 1), ("zmod:4", 1),
                                    ("zmod:2", 2)])
def test_standard_reps_are_exact_homomorphisms(spec, d):
    ring = parse_ring(spec)
    lam = faithful_characters(ring)[0]
    for rep in (schrodinger_rep(ring, d, lam), regular_rep(ring, d, lam),
                induced_rep(ring, d, lam)):
        assert rep_homomorphism_defect(rep) == 0.0
        assert central_character_defect(rep) < 1e-13


def test_sampled_defect_path_on_a_larger_group():
    # order 216 exceeds limit=64, forcing the seeded-sample branch
    ring = parse_ring("zmod:2*zmod:3")
    lam = faithful_characters(ring)[0]
    rep = schrodinger_rep(ring, 1, lam)
    assert rep_homomorphism_defect(rep, limit=64, seed=1) == 0.0
    assert central_character_defect(rep) < 1e-13


def test_hom_defect_catches_a_broken_rep():
    ring = parse_ring("zmod:3")
    lam = faithful_characters(ring)[0]
    good = schrodinger_rep(ring, 1, lam)
    swap = np.eye(3)[[1, 0, 2]]

    bad = type(good)(good.group, lam, good.dim,
                     lambda g: swap @ good.mat(g) if g.a == 1 else good.mat(g))
    assert rep_homomorphism_defect(bad) > 0.5


@pytest.mark.parametrize("spec", ["zmod:2", "zmod:3", "zmod:4", "zmod:6"])
def test_induced_and_regular_have_the_same_character(spec):
    ring = parse_ring(spec)
    for lam in dual_group(ring.additive_factors):
        reg = trace_table(regular_rep(ring, 1, lam))
        ind = trace_table(induced_rep(ring, 1, lam))
        assert reg.keys() == ind.keys()
        worst = max(abs(reg[g] - ind[g]) for g in reg)
        assert worst < 1e-10


def test_character_values_of_the_schrodinger_rep():
    ring = parse_ring("zmod:5")
    lam = faithful_characters(ring)[0]
    rep = schrodinger_rep(ring, 1, lam)
    for g in rep.group.elements():
        tr = rep.trace(g)
        if g.a == 0 and g.b == 0:
            assert abs(tr - 5 * lam.value(ring.coords(g.c))) < 1e-12
        elif g.a != 0:
            assert abs(tr) < 1e-12  # fixed-point-free translation part


def test_pair_rep_round_trip_is_bitwise():
    ring = parse_ring("zmod:4")
    lam = faithful_characters(ring)[0]
    pair = schrodinger_pair(ring, 1, lam)
    back = pair_from_rep(rep_from_pair(pair))
    assert back.u.den == pair.u.den
    np.testing.assert_array_equal(back.u.taus, pair.u.taus)
    np.testing.assert_array_equal(back.u.nums, pair.u.nums)
    np.testing.assert_array_equal(back.v.taus, pair.v.taus)
    np.testing.assert_array_equal(back.v.nums, pair.v.nums)


def test_rep_from_pair_orders_factors_v_then_u():
    ring = parse_ring("zmod:4")
    lam = faithful_characters(ring)[0]
    pair = schrodinger_pair(ring, 1, lam)
    rep = rep_from_pair(pair)
    for a in range(4):
        for b in range(4):
            want = pair.v.mat(b) @ pair.u.mat(a)
            np.testing.assert_allclose(rep.mat(rep.group.elem(a, b, 0)), want,
                                       atol=1e-13)


def test_multiplication_table_is_a_cayley_table():
    group = heis_group(parse_ring("zmod:2"), 1)
    table = multiplication_table(group)
    n = group.order
    assert len(table) == n == len(table[0])
    for row in table:
        assert sorted(row) == list(range(n))
    cols = list(zip(*table))
    for col in cols:
        assert sorted(col) == list(range(n))
    els = list(group.elements())
    ident = els.index(group.identity())
    assert table[ident] == list(range(n))
    assert [row[ident] for row in table] == list(range(n))
    # associativity through the table itself
    for i in range(0, n, 3):
        for j in range(0, n, 3):
            for k in range(0, n, 3):
                assert table[table[i][j]][k] == table[i][table[j][k]]
