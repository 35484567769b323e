"""Heisenberg group over a finite ring and its unitary representations.

Elements are triples (a, b, c) with a, b in R^d and c in R, multiplied by
(a, b, c)(a', b', c') = (a + a', b + b', c + c' + a . b').  The center
contains {(0, 0, c)} and a pair (U, V) with character lam induces the
representation pi(a, b, c) = lam(c) V(b) U(a) with central character lam.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

import numpy as np

from .characters import Character
from .errors import CapacityError, StructureError
from .linalg import MonomialMatrix
from .pairs import CCRPair, PhaseRep, DenseRep, schrodinger_pair, regular_pair
from .rings import FiniteRing, RingPower

GROUP_CAP = 4096


class HeisGroup:
    """H(R, d) = R^d x R^d x R with the twisted product."""

    def __init__(self, ring: FiniteRing, d: int):
        self.ring = ring
        self.d = d
        self.space = RingPower(ring, d)
        self.order = self.space.order ** 2 * ring.order

    def __eq__(self, other) -> bool:
        return (isinstance(other, HeisGroup)
                and self.ring == other.ring and self.d == other.d)

    def __hash__(self) -> int:
        return hash(("heis", self.ring, self.d))

    def __repr__(self) -> str:
        return f"HeisGroup({self.ring.short_name()}, d={self.d})"

    def elem(self, a: int, b: int, c: int) -> "HeisElem":
        return HeisElem(self, a, b, c)

    def mul(self, g: "HeisElem", h: "HeisElem") -> "HeisElem":
        sp, r = self.space, self.ring
        return HeisElem(self, sp.add(g.a, h.a), sp.add(g.b, h.b),
                        r.add(r.add(g.c, h.c), sp.dot(g.a, h.b)))

    def inv(self, g: "HeisElem") -> "HeisElem":
        sp, r = self.space, self.ring
        return HeisElem(self, sp.neg(g.a), sp.neg(g.b),
                        r.add(r.neg(g.c), sp.dot(g.a, g.b)))

    def identity(self) -> "HeisElem":
        return HeisElem(self, 0, 0, 0)

    def center(self) -> list["HeisElem"]:
        return [HeisElem(self, 0, 0, c) for c in self.ring.elements()]

    def elements(self) -> Iterator["HeisElem"]:
        if self.order > GROUP_CAP:
            raise CapacityError(f"group order {self.order} exceeds cap {GROUP_CAP}")
        for a in self.space.elements():
            for b in self.space.elements():
                for c in self.ring.elements():
                    yield HeisElem(self, a, b, c)

    def commutator(self, g: "HeisElem", h: "HeisElem") -> "HeisElem":
        return self.mul(self.mul(g, h), self.inv(self.mul(h, g)))


@dataclass(frozen=True)
class HeisElem:
    group: HeisGroup
    a: int
    b: int
    c: int

    def coords(self) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
        sp = self.group.space
        return (sp.coords(self.a), sp.coords(self.b),
                self.group.ring.coords(self.c))


def heis_group(ring: FiniteRing, d: int) -> HeisGroup:
    return HeisGroup(ring, d)


def heis_mul(g: HeisElem, h: HeisElem) -> HeisElem:
    if g.group != h.group:
        raise StructureError("elements live in different Heisenberg groups")
    return g.group.mul(g, h)


def heis_inv(g: HeisElem) -> HeisElem:
    return g.group.inv(g)


def center(ring: FiniteRing, d: int) -> list[HeisElem]:
    return HeisGroup(ring, d).center()


def group_order(ring: FiniteRing, d: int) -> int:
    return ring.order ** (2 * d + 1)


class GroupRep:
    """Unitary representation of HeisGroup given by a matrix-valued callable."""

    def __init__(self, group: HeisGroup, lam: Character, dim: int,
                 mat: Callable[[HeisElem], np.ndarray],
                 mono: Optional[Callable[[HeisElem], MonomialMatrix]] = None):
        self.group = group
        self.lam = lam
        self.dim = dim
        self._mat = mat
        self._mono = mono

    @property
    def exact(self) -> bool:
        return self._mono is not None

    def mat(self, g: HeisElem) -> np.ndarray:
        return self._mat(g)

    def mono(self, g: HeisElem) -> MonomialMatrix:
        if self._mono is None:
            raise StructureError("representation has no exact monomial form")
        return self._mono(g)

    def trace(self, g: HeisElem) -> complex:
        if self._mono is not None:
            return self._mono(g).trace()
        return complex(np.trace(self._mat(g)))


def rep_from_pair(pair: CCRPair) -> GroupRep:
    """pi(a, b, c) = lam(c) V(b) U(a); skips exact-identity factors so that
    pair_from_rep(rep_from_pair(p)) returns bitwise-equal tables."""
    group = HeisGroup(pair.ring, pair.d)
    M = pair.lam.modulus

    if pair.is_exact:
        u, v = pair.u, pair.v

        def mono(g: HeisElem) -> MonomialMatrix:
            m = u.mono(g.a)
            if g.b:
                m = v.mono(g.b) @ m
            if g.c:
                m = m.phase_shift(pair.lam.phase_num(pair.ring.coords(g.c)), M)
            return m

        return GroupRep(group, pair.lam, pair.dim, lambda g: mono(g).to_dense(), mono)

    def mat(g: HeisElem) -> np.ndarray:
        m = pair.u.mat(g.a)
        if g.b:
            m = pair.v.mat(g.b) @ m
        if g.c:
            m = pair.lam.value(pair.ring.coords(g.c)) * m
        return m

    return GroupRep(group, pair.lam, pair.dim, mat)


def pair_from_rep(rep: GroupRep) -> CCRPair:
    """Restrict to the two coordinate subgroups."""
    group = rep.group
    ring, d, space = group.ring, group.d, group.space
    if rep.exact:
        taus_u, nums_u, taus_v, nums_v = [], [], [], []
        dens = set()
        for a in space.elements():
            dens.add(rep.mono(group.elem(a, 0, 0)).den)
            dens.add(rep.mono(group.elem(0, a, 0)).den)
        den = math.lcm(*dens)
        for a in space.elements():
            mu = rep.mono(group.elem(a, 0, 0)).rescale(den)
            mv = rep.mono(group.elem(0, a, 0)).rescale(den)
            taus_u.append(mu.tau); nums_u.append(mu.num)
            taus_v.append(mv.tau); nums_v.append(mv.num)
        u = PhaseRep(space, np.stack(taus_u), np.stack(nums_u), den)
        v = PhaseRep(space, np.stack(taus_v), np.stack(nums_v), den)
        return CCRPair(ring, d, rep.lam, space, rep.dim, u, v)
    mats_u = np.stack([rep.mat(group.elem(a, 0, 0)) for a in space.elements()])
    mats_v = np.stack([rep.mat(group.elem(0, b, 0)) for b in space.elements()])
    return CCRPair(ring, d, rep.lam, space, rep.dim,
                   DenseRep(space, mats_u), DenseRep(space, mats_v))


def schrodinger_rep(ring: FiniteRing, d: int, lam: Character) -> GroupRep:
    return rep_from_pair(schrodinger_pair(ring, d, lam))


def regular_rep(ring: FiniteRing, d: int, lam: Character) -> GroupRep:
    return rep_from_pair(regular_pair(ring, d, lam))


def induced_rep(ring: FiniteRing, d: int, lam: Character) -> GroupRep:
    """Induction of the central character lam to the full group.

    Carrier: functions on the cosets of the center, identified with
    R^d x R^d via the transversal t(x, y) = (x, y, 0) in element-encoding
    order.  For h in H the matrix has entry lam(kappa) at (row z, column w)
    where h t(w) = t(z) (0, 0, kappa).
    """
    group = HeisGroup(ring, d)
    big = RingPower(ring, 2 * d)
    if big.order > GROUP_CAP:
        raise CapacityError("induced representation dimension exceeds cap")
    nd = group.space.order
    dim = big.order
    M = lam.modulus

    def mono(h: HeisElem) -> MonomialMatrix:
        tau = np.empty(dim, dtype=np.int64)
        num = np.empty(dim, dtype=np.int64)
        for w in range(dim):
            wa, wb = divmod(w, nd)
            prod = group.mul(h, group.elem(wa, wb, 0))
            z = prod.a * nd + prod.b
            tau[z] = w
            num[z] = lam.phase_num(ring.coords(prod.c))
        return MonomialMatrix(tau, num, M)

    return GroupRep(group, lam, dim, lambda g: mono(g).to_dense(), mono)


def rep_homomorphism_defect(rep: GroupRep, limit: int = 512, seed: int = 0) -> float:
    """Max residual of pi(g)pi(h) = pi(gh) over all pairs, or a seeded sample
    when the group is larger than `limit`."""
    from .linalg import monomial_diff_norm

    group = rep.group
    els = list(group.elements())
    if group.order <= limit:
        pairs = [(g, h) for g in els for h in els]
    else:
        rng = np.random.default_rng(seed)
        pairs = [(els[rng.integers(len(els))], els[rng.integers(len(els))])
                 for _ in range(2048)]
    worst = 0.0
    for g, h in pairs:
        gh = group.mul(g, h)
        if rep.exact:
            worst = max(worst, monomial_diff_norm(rep.mono(g) @ rep.mono(h), rep.mono(gh)))
        else:
            diff = rep.mat(g) @ rep.mat(h) - rep.mat(gh)
            worst = max(worst, float(np.linalg.svd(diff, compute_uv=False)[0]))
    return worst


def central_character_defect(rep: GroupRep) -> float:
    """Max residual of pi(0, 0, c) = lam(c) I."""
    worst = 0.0
    eye = np.eye(rep.dim)
    for c in rep.group.ring.elements():
        phase = rep.lam.value(rep.group.ring.coords(c))
        diff = rep.mat(rep.group.elem(0, 0, c)) - phase * eye
        worst = max(worst, float(np.linalg.norm(diff, 2)))
    return worst


def trace_table(rep: GroupRep) -> dict[HeisElem, complex]:
    return {g: rep.trace(g) for g in rep.group.elements()}


def multiplication_table(group: HeisGroup) -> list[list[int]]:
    """Cayley table on element indices in enumeration order."""
    els = list(group.elements())
    index = {e: i for i, e in enumerate(els)}
    return [[index[group.mul(g, h)] for h in els] for g in els]
