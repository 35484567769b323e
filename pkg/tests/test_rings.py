import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ccrkit.errors import StructureError
from ccrkit.rings import (MatrixRing, PrimeField, ProductRing, RingPower,
                          ZmodRing, parse_ring, ring_from_descriptor)

SMALL_SPECS = ["zmod:2", "zmod:3", "zmod:4", "zmod:6", "gf:3", "gf:5",
               "mat:2:gf:2", "zmod:2*zmod:3"]


@pytest.mark.parametrize("spec", SMALL_SPECS)
def test_ring_axioms_brute(spec):
    ring = parse_ring(spec)
    n = ring.order
    els = range(n)
    zero = ring.zero
    one = ring.one
    for a in els:
        assert ring.add(a, zero) == a
        assert ring.mul(a, one) == a
        assert ring.mul(one, a) == a
        assert ring.add(a, ring.neg(a)) == zero
    if n <= 8:
        triples = [(a, b, c) for a in els for b in els for c in els]
    else:
        rng = np.random.default_rng(0)
        triples = [tuple(rng.integers(0, n, 3)) for _ in range(500)]
    for a, b, c in triples:
        assert ring.add(ring.add(a, b), c) == ring.add(a, ring.add(b, c))
        assert ring.mul(ring.mul(a, b), c) == ring.mul(a, ring.mul(b, c))
        assert ring.mul(a, ring.add(b, c)) == ring.add(ring.mul(a, b), ring.mul(a, c))
        assert ring.mul(ring.add(a, b), c) == ring.add(ring.mul(a, c), ring.mul(b, c))


def test_zmod_is_plain_modular_arithmetic():
    ring = ZmodRing(6)
    for a in range(6):
        for b in range(6):
            assert ring.add(a, b) == (a + b) % 6
            assert ring.mul(a, b) == (a * b) % 6


def test_matrix_ring_against_manual_2x2():
    ring = MatrixRing(2, PrimeField(2))
    # element index encodes entries row-major base 2
    def decode(i):
        return [(i >> 3) & 1, (i >> 2) & 1, (i >> 1) & 1, i & 1]

    def encode(e):
        return (e[0] << 3) | (e[1] << 2) | (e[2] << 1) | e[3]

    for i in range(16):
        for j in range(16):
            a, b = decode(i), decode(j)
            prod = [(a[0] * b[0] + a[1] * b[2]) % 2,
                    (a[0] * b[1] + a[1] * b[3]) % 2,
                    (a[2] * b[0] + a[3] * b[2]) % 2,
                    (a[2] * b[1] + a[3] * b[3]) % 2]
            assert ring.mul(i, j) == encode(prod)
    assert not all(ring.mul(i, j) == ring.mul(j, i)
                   for i in range(16) for j in range(16))


def test_product_ring_componentwise():
    ring = parse_ring("zmod:2*zmod:3")
    z2, z3 = ZmodRing(2), ZmodRing(3)
    assert ring.order == 6
    for i in range(6):
        for j in range(6):
            a2, a3 = divmod(i, 3)
            b2, b3 = divmod(j, 3)
            expect = 3 * z2.mul(a2, b2) + z3.mul(a3, b3)
            assert ring.mul(i, j) == expect


@pytest.mark.parametrize("spec", SMALL_SPECS)
def test_descriptor_round_trip(spec):
    ring = parse_ring(spec)
    again = ring_from_descriptor(ring.descriptor())
    assert again == ring
    assert again.order == ring.order


def test_parse_ring_rejects_garbage():
    with pytest.raises(StructureError):
        parse_ring("octonions:8")


def test_additive_factors_multiply_to_order():
    for spec in SMALL_SPECS:
        ring = parse_ring(spec)
        prod = 1
        for m in ring.additive_factors:
            prod *= m
        assert prod == ring.order


def test_ring_power_indexing_round_trip():
    space = RingPower(parse_ring("zmod:4"), 2)
    assert space.order == 16
    for idx in range(16):
        assert space.encode(space.decode(idx)) == idx


@given(st.integers(0, 15), st.integers(0, 15))
@settings(max_examples=60, deadline=None)
def test_ring_power_add_is_componentwise(a, b):
    ring = parse_ring("zmod:4")
    space = RingPower(ring, 2)
    s = space.add(a, b)
    ea, eb, es = space.decode(a), space.decode(b), space.decode(s)
    assert all(ring.add(x, y) == z for x, y, z in zip(ea, eb, es))


@given(st.integers(0, 15), st.integers(0, 15))
@settings(max_examples=60, deadline=None)
def test_ring_power_dot_left_linear(a, b):
    ring = parse_ring("mat:2:gf:2")
    space = RingPower(ring, 1)
    # dot over R^1 is plain ring multiplication, left factor first
    assert space.dot(a, b) == ring.mul(a, b)


def test_prime_field_inverses():
    ring = PrimeField(7)
    for a in range(1, 7):
        assert any(ring.mul(a, b) == ring.one for b in range(1, 7))
