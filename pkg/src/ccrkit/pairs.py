"""Pairs of unitary families satisfying the twisted commutation rule.

A pair assigns unitaries U(a), V(b) to elements a, b of R^d such that
U(a) V(b) = lam(a . b) V(b) U(a) for a fixed character lam of (R, +), and
both families are representations of the additive group.  The built-in
constructions (translation/modulation on functions over R^d, and the same
on the doubled index set R^d x R^d) are stored exactly as permutations with
rational phases; conjugated and random pairs fall back to dense tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .characters import Character, pairing_character
from .errors import CapacityError, PreconditionError, StructureError
from .linalg import (MonomialMatrix, max_phase_gap, monomial_diff_norm,
                     phase_values, random_unitary)
from .rings import FiniteRing, RingPower

PAIR_DIM_CAP = 4096
DENSE_TABLE_ENTRIES_CAP = 1 << 25


def _coord_table(space: RingPower) -> np.ndarray:
    """(order, ncoords) additive coordinates, cached on the space."""
    tab = getattr(space, "_coord_tab", None)
    if tab is None:
        tab = np.array([space.coords(i) for i in space.elements()], dtype=np.int64)
        space._coord_tab = tab
    return tab


def _radix_weights(space: RingPower) -> np.ndarray:
    w = np.ones(len(space.additive_factors), dtype=np.int64)
    for j in range(len(space.additive_factors) - 2, -1, -1):
        w[j] = w[j + 1] * space.additive_factors[j + 1]
    return w


def translation_perm(space: RingPower, a: int) -> np.ndarray:
    """Permutation x -> x + a as an index array."""
    coords = _coord_table(space)
    facs = np.array(space.additive_factors, dtype=np.int64)
    shifted = (coords + coords[a]) % facs
    return shifted @ _radix_weights(space)


def dot_phase_nums(space: RingPower, lam: Character, rows, cols) -> np.ndarray:
    """Integer phases of lam(x . b) over lam.modulus, for x in rows, b in cols."""
    ring = space.ring
    out = np.empty((len(rows), len(cols)), dtype=np.int64)
    for i, x in enumerate(rows):
        for j, b in enumerate(cols):
            out[i, j] = lam.phase_num(ring.coords(space.dot(x, b)))
    return out


class PhaseRep:
    """Exact group-to-monomial-unitary table over a RingPower group."""

    exact = True

    def __init__(self, group: RingPower, taus: np.ndarray, nums: np.ndarray, den: int):
        self.group = group
        self.taus = np.asarray(taus, dtype=np.int64)
        self.nums = np.mod(np.asarray(nums, dtype=np.int64), den)
        self.den = int(den)
        self.dim = self.taus.shape[1]

    def mono(self, a: int) -> MonomialMatrix:
        return MonomialMatrix(self.taus[a], self.nums[a], self.den)

    def mat(self, a: int) -> np.ndarray:
        return self.mono(a).to_dense()

    def trace(self, a: int) -> complex:
        return self.mono(a).trace()


class DenseRep:
    """Dense group-to-unitary table."""

    exact = False

    def __init__(self, group: RingPower, mats: np.ndarray):
        self.group = group
        self.mats = np.asarray(mats, dtype=np.complex128)
        self.dim = self.mats.shape[1]
        if self.mats.size > DENSE_TABLE_ENTRIES_CAP:
            raise CapacityError("dense representation table exceeds the memory cap")

    def mat(self, a: int) -> np.ndarray:
        return self.mats[a]

    def trace(self, a: int) -> complex:
        return complex(np.trace(self.mats[a]))


Rep = Union[PhaseRep, DenseRep]


@dataclass
class CCRPair:
    ring: FiniteRing
    d: int
    lam: Character
    space: RingPower
    dim: int
    u: Rep
    v: Rep

    @property
    def is_exact(self) -> bool:
        return self.u.exact and self.v.exact

    def u_mat(self, a: int) -> np.ndarray:
        return self.u.mat(a)

    def v_mat(self, b: int) -> np.ndarray:
        return self.v.mat(b)

    def same_shape(self, other: "CCRPair") -> bool:
        return (self.ring == other.ring and self.d == other.d
                and self.lam == other.lam and self.dim == other.dim)

    def label(self) -> str:
        return (f"{self.ring.short_name()} d={self.d} "
                f"lam=({self.lam.short_name()}) dim={self.dim}")


def _check_inputs(ring: FiniteRing, d: int, lam: Character) -> RingPower:
    if lam.factors != ring.additive_factors:
        raise StructureError("character does not live on the ring's additive group")
    space = RingPower(ring, d)
    if space.order > PAIR_DIM_CAP:
        raise CapacityError(f"|R|^d = {space.order} exceeds the pair dimension cap")
    return space


def schrodinger_pair(ring: FiniteRing, d: int, lam: Character) -> CCRPair:
    """Translations U(a) f(x) = f(x + a) and modulations V(b) f(x) = lam(x . b) f(x)."""
    space = _check_inputs(ring, d, lam)
    n = space.order
    M = lam.modulus
    taus_u = np.stack([translation_perm(space, a) for a in space.elements()])
    nums_u = np.zeros((n, n), dtype=np.int64)
    taus_v = np.tile(np.arange(n, dtype=np.int64), (n, 1))
    nums_v = dot_phase_nums(space, lam, list(space.elements()), list(space.elements())).T.copy()
    # nums_v[b, x] = phase of lam(x . b)
    u = PhaseRep(space, taus_u, nums_u, M)
    v = PhaseRep(space, taus_v, nums_v, M)
    return CCRPair(ring, d, lam, space, n, u, v)


def doubled_space(pair_or_space, d: int | None = None) -> RingPower:
    if isinstance(pair_or_space, CCRPair):
        return RingPower(pair_or_space.ring, 2 * pair_or_space.d)
    return RingPower(pair_or_space, 2 * d)


def regular_pair(ring: FiniteRing, d: int, lam: Character) -> CCRPair:
    """Translation in the first index slot, modulated translation in the second.

    Acts on functions over R^d x R^d:
    U(a) xi(x, y) = xi(x + a, y) and V(b) xi(x, y) = lam(x . b) xi(x, y + b).
    """
    space = _check_inputs(ring, d, lam)
    big = RingPower(ring, 2 * d)
    if big.order > PAIR_DIM_CAP:
        raise CapacityError(f"|R|^2d = {big.order} exceeds the pair dimension cap")
    nd, M = space.order, lam.modulus
    dim = big.order
    ar = np.arange(nd, dtype=np.int64)
    taus_u, taus_v, nums_v = [], [], []
    xdot = dot_phase_nums(space, lam, list(space.elements()), list(space.elements()))
    # xdot[x, b] = phase of lam(x . b)
    for g in space.elements():
        t = translation_perm(space, g)
        taus_u.append((t[:, None] * nd + ar[None, :]).reshape(-1))
        taus_v.append((ar[:, None] * nd + t[None, :]).reshape(-1))
        nums_v.append(np.repeat(xdot[:, g], nd))
    u = PhaseRep(space, np.stack(taus_u), np.zeros((nd, dim), dtype=np.int64), M)
    v = PhaseRep(space, np.stack(taus_v), np.stack(nums_v), M)
    return CCRPair(ring, d, lam, space, dim, u, v)


# -- derived pairs -------------------------------------------------------------


def _embed_first(space: RingPower, big: RingPower, a: int) -> int:
    """(a, 0) as an element of R^d x R^d."""
    return a * space.order


def _embed_second(space: RingPower, big: RingPower, b: int) -> int:
    return b


def shifted_pair(pair: CCRPair) -> CCRPair:
    """Blocks over the doubled index set, translated and acted on.

    U~(a) F(x, y) = U(a) F(x + a, y) and V~(b) F(x, y) = V(b) F(x, y + b);
    dimension grows to |R|^2d * dim.
    """
    space, big = pair.space, doubled_space(pair)
    n, s = pair.dim, big.order
    if n * s > PAIR_DIM_CAP:
        raise CapacityError("shifted pair dimension exceeds the cap")
    if pair.is_exact:
        taus_u, nums_u, taus_v, nums_v = [], [], [], []
        for g in space.elements():
            pu = translation_perm(big, _embed_first(space, big, g))
            pv = translation_perm(big, _embed_second(space, big, g))
            taus_u.append((pu[:, None] * n + pair.u.taus[g][None, :]).reshape(-1))
            nums_u.append(np.tile(pair.u.nums[g], s))
            taus_v.append((pv[:, None] * n + pair.v.taus[g][None, :]).reshape(-1))
            nums_v.append(np.tile(pair.v.nums[g], s))
        u = PhaseRep(space, np.stack(taus_u), np.stack(nums_u), pair.u.den)
        v = PhaseRep(space, np.stack(taus_v), np.stack(nums_v), pair.v.den)
        return CCRPair(pair.ring, pair.d, pair.lam, space, n * s, u, v)
    mats_u, mats_v = [], []
    for g in space.elements():
        pu = _perm_dense(translation_perm(big, _embed_first(space, big, g)))
        pv = _perm_dense(translation_perm(big, _embed_second(space, big, g)))
        mats_u.append(np.kron(pu, pair.u.mat(g)))
        mats_v.append(np.kron(pv, pair.v.mat(g)))
    return CCRPair(pair.ring, pair.d, pair.lam, space, n * s,
                   DenseRep(space, np.stack(mats_u)), DenseRep(space, np.stack(mats_v)))


def modulated_pair(pair: CCRPair) -> CCRPair:
    """Phase-modulated block copies over the doubled index set.

    U^(a) F(x, y) = lam(a . x) U(a) F(x, y) and
    V^(b) F(x, y) = lam(y . b) V(b) F(x, y).
    """
    space, big = pair.space, doubled_space(pair)
    n, s, nd = pair.dim, big.order, space.order
    if n * s > PAIR_DIM_CAP:
        raise CapacityError("modulated pair dimension exceeds the cap")
    M = pair.lam.modulus
    # lam(a . x): rows a, cols x; lam(y . b): rows y, cols b
    adotx = dot_phase_nums(space, pair.lam, list(space.elements()), list(space.elements()))
    diag_u = np.stack([np.repeat(adotx[g, :], nd) for g in space.elements()])
    diag_v = np.stack([np.tile(adotx[:, g], nd) for g in space.elements()])
    if pair.is_exact:
        den = math.lcm(M, pair.u.den, pair.v.den)
        sc = den // M
        taus_u, nums_u, taus_v, nums_v = [], [], [], []
        base = np.arange(s, dtype=np.int64)[:, None] * n
        for g in space.elements():
            ur, vr = pair.u.mono(g).rescale(den), pair.v.mono(g).rescale(den)
            taus_u.append((base + ur.tau[None, :]).reshape(-1))
            nums_u.append((diag_u[g][:, None] * sc + ur.num[None, :]).reshape(-1))
            taus_v.append((base + vr.tau[None, :]).reshape(-1))
            nums_v.append((diag_v[g][:, None] * sc + vr.num[None, :]).reshape(-1))
        u = PhaseRep(space, np.stack(taus_u), np.stack(nums_u), den)
        v = PhaseRep(space, np.stack(taus_v), np.stack(nums_v), den)
        return CCRPair(pair.ring, pair.d, pair.lam, space, n * s, u, v)
    mats_u, mats_v = [], []
    for g in space.elements():
        du = np.diag(phase_values(diag_u[g], M))
        dv = np.diag(phase_values(diag_v[g], M))
        mats_u.append(np.kron(du, pair.u.mat(g)))
        mats_v.append(np.kron(dv, pair.v.mat(g)))
    return CCRPair(pair.ring, pair.d, pair.lam, space, n * s,
                   DenseRep(space, np.stack(mats_u)), DenseRep(space, np.stack(mats_v)))


def _perm_dense(perm: np.ndarray) -> np.ndarray:
    n = perm.shape[0]
    out = np.zeros((n, n), dtype=np.complex128)
    out[np.arange(n), perm] = 1.0
    return out


# -- combinators ---------------------------------------------------------------


def inflate(pair: CCRPair, k: int) -> CCRPair:
    """k block-diagonal copies."""
    if k < 1:
        raise StructureError("multiplicity must be >= 1")
    n = pair.dim
    if n * k > PAIR_DIM_CAP:
        raise CapacityError("inflated dimension exceeds the cap")

    def _inflate_rep(rep: Rep) -> Rep:
        if rep.exact:
            offs = np.arange(k, dtype=np.int64)[:, None] * n
            taus = np.stack([(offs + rep.taus[g][None, :]).reshape(-1)
                             for g in rep.group.elements()])
            nums = np.stack([np.tile(rep.nums[g], k) for g in rep.group.elements()])
            return PhaseRep(rep.group, taus, nums, rep.den)
        eye = np.eye(k)
        return DenseRep(rep.group, np.stack([np.kron(eye, rep.mats[g])
                                             for g in rep.group.elements()]))

    return CCRPair(pair.ring, pair.d, pair.lam, pair.space, n * k,
                   _inflate_rep(pair.u), _inflate_rep(pair.v))


def direct_sum(a: CCRPair, b: CCRPair) -> CCRPair:
    if not (a.ring == b.ring and a.d == b.d and a.lam == b.lam):
        raise StructureError("direct sum requires matching ring, d, and character")
    if a.is_exact and b.is_exact:
        den = math.lcm(a.u.den, a.v.den, b.u.den, b.v.den)

        def _cat(ra: PhaseRep, rb: PhaseRep) -> PhaseRep:
            taus = np.concatenate([ra.taus, rb.taus + ra.dim], axis=1)
            nums = np.concatenate([ra.nums * (den // ra.den), rb.nums * (den // rb.den)], axis=1)
            return PhaseRep(ra.group, taus, nums, den)

        return CCRPair(a.ring, a.d, a.lam, a.space, a.dim + b.dim,
                       _cat(a.u, b.u), _cat(a.v, b.v))

    def _cat_dense(ra: Rep, rb: Rep) -> DenseRep:
        mats = []
        for g in ra.group.elements():
            m = np.zeros((a.dim + b.dim, a.dim + b.dim), dtype=np.complex128)
            m[:a.dim, :a.dim] = ra.mat(g)
            m[a.dim:, a.dim:] = rb.mat(g)
            mats.append(m)
        return DenseRep(ra.group, np.stack(mats))

    return CCRPair(a.ring, a.d, a.lam, a.space, a.dim + b.dim,
                   _cat_dense(a.u, b.u), _cat_dense(a.v, b.v))


def conjugate(pair: CCRPair, w: np.ndarray, tol: float = 1e-10) -> CCRPair:
    """Replace each operator by W M W*."""
    w = np.asarray(w, dtype=np.complex128)
    if w.shape != (pair.dim, pair.dim):
        raise StructureError("conjugating unitary has the wrong shape")
    defect = np.linalg.norm(w.conj().T @ w - np.eye(pair.dim), 2)
    if defect > tol:
        raise PreconditionError(f"conjugating matrix is not unitary (defect {defect:.2e})")
    wh = w.conj().T

    def _conj(rep: Rep) -> DenseRep:
        return DenseRep(rep.group, np.stack([w @ rep.mat(g) @ wh
                                             for g in rep.group.elements()]))

    return CCRPair(pair.ring, pair.d, pair.lam, pair.space, pair.dim,
                   _conj(pair.u), _conj(pair.v))


def random_instance(ring: FiniteRing, d: int, lam: Character, mult: int, seed: int) -> CCRPair:
    """Seeded dense pair unitarily equivalent to `mult` translation/modulation copies."""
    base = inflate(schrodinger_pair(ring, d, lam), mult)
    return conjugate(base, random_unitary(base.dim, seed))


# -- verification ---------------------------------------------------------------


def ccr_phase_table(pair: CCRPair) -> np.ndarray:
    """Integer phases of lam(a . b) over lam.modulus for all a, b in R^d."""
    els = list(pair.space.elements())
    return dot_phase_nums(pair.space, pair.lam, els, els)


def _exact_rep_generator_scan(rep: Rep) -> bool:
    """Exact check of rho(0) = I and rho(a + e) = rho(a) rho(e) for every a
    and every additive basis element e.

    Clean generator relations force the full homomorphism table by induction
    on generator words, so a True here certifies defect 0 without the
    quadratic scan.
    """
    group = rep.group
    g = group.order
    taus, nums, den = rep.taus, rep.nums, rep.den
    if not (np.array_equal(taus[0], np.arange(rep.dim)) and not nums[0].any()):
        return False
    for e in group.additive_basis():
        add_col = np.fromiter((group.add(a, e) for a in range(g)),
                              dtype=np.int64, count=g)
        tau_p = taus[e][taus]
        num_p = (nums + nums[e][taus]) % den
        if not (np.array_equal(tau_p, taus[add_col])
                and np.array_equal(num_p, nums[add_col])):
            return False
    return True


def _exact_braid_generator_scan(pair: CCRPair, ccr_n: np.ndarray, den: int,
                                tu, nu, tv, nv) -> bool:
    """Exact braid relation on generator pairs only.

    Together with clean generator scans of both families this extends
    biadditively to every (a, b), since both the measured commutator scalar
    and lam(a . b) are biadditive once the representation property is exact.
    """
    gens = pair.space.additive_basis()
    for a in gens:
        for b in gens:
            tau_l = tv[b][tu[a]]
            num_l = (nu[a] + nv[b][tu[a]]) % den
            tau_r = tu[a][tv[b]]
            num_r = (nv[b] + nu[a][tv[b]] + ccr_n[a, b]) % den
            if not (np.array_equal(tau_l, tau_r)
                    and np.array_equal(num_l, num_r)):
                return False
    return True


def verify_ccr(pair: CCRPair) -> float:
    """Max operator-norm residual of U(a) V(b) - lam(a . b) V(b) U(a), all a, b."""
    g = pair.space.order
    ccr = ccr_phase_table(pair)
    if pair.is_exact:
        den = math.lcm(pair.u.den, pair.v.den, pair.lam.modulus)
        tu = pair.u.taus
        nu = pair.u.nums * (den // pair.u.den)
        tv = pair.v.taus
        nv = pair.v.nums * (den // pair.v.den)
        ccr_n = ccr * (den // pair.lam.modulus)
        if (_exact_rep_generator_scan(pair.u) and _exact_rep_generator_scan(pair.v)
                and _exact_braid_generator_scan(pair, ccr_n, den, tu, nu, tv, nv)):
            return 0.0
        worst = 0.0
        for a in range(g):
            # left = U(a) V(b), right = lam(a.b) V(b) U(a), batched over b
            tau_l = tv[:, tu[a]]
            num_l = (nu[a][None, :] + nv[:, tu[a]]) % den
            tau_r = tu[a][tv]
            num_r = (nv + nu[a][tv] + ccr_n[a][:, None]) % den
            same = np.array_equal(tau_l, tau_r)
            if same and np.array_equal(num_l, num_r):
                continue
            mism = np.nonzero(np.any(tau_l != tau_r, axis=1) | np.any(num_l != num_r, axis=1))[0]
            for b in mism:
                left = MonomialMatrix(tau_l[b], num_l[b], den)
                right = MonomialMatrix(tau_r[b], num_r[b], den)
                worst = max(worst, monomial_diff_norm(left, right))
        return worst
    worst = 0.0
    lam_vals = phase_values(ccr, pair.lam.modulus)
    for a in range(g):
        ua = pair.u.mat(a)
        for b in range(g):
            vb = pair.v.mat(b)
            diff = ua @ vb - lam_vals[a, b] * (vb @ ua)
            worst = max(worst, float(np.linalg.svd(diff, compute_uv=False)[0]))
    return worst


def representation_defect(rep: Rep) -> float:
    """Max residual of rho(a + b) = rho(a) rho(b) plus the identity at 0."""
    group = rep.group
    g = group.order
    if rep.exact and _exact_rep_generator_scan(rep):
        return 0.0
    add = np.array([[group.add(a, b) for b in range(g)] for a in range(g)], dtype=np.int64)
    if rep.exact:
        worst = 0.0
        ident = MonomialMatrix.identity(rep.dim, rep.den)
        worst = max(worst, monomial_diff_norm(rep.mono(0), ident))
        for a in range(g):
            tau_p = rep.taus[:, rep.taus[a]]
            num_p = (rep.nums[a][None, :] + rep.nums[:, rep.taus[a]]) % rep.den
            tau_e = rep.taus[add[a]]
            num_e = rep.nums[add[a]]
            if np.array_equal(tau_p, tau_e) and np.array_equal(num_p, num_e):
                continue
            mism = np.nonzero(np.any(tau_p != tau_e, axis=1) | np.any(num_p != num_e, axis=1))[0]
            for b in mism:
                worst = max(worst, monomial_diff_norm(
                    MonomialMatrix(tau_e[b], num_e[b], rep.den),
                    MonomialMatrix(tau_p[b], num_p[b], rep.den)))
        return worst
    worst = float(np.linalg.norm(rep.mat(0) - np.eye(rep.dim), 2))
    for a in range(g):
        ma = rep.mat(a)
        for b in range(g):
            diff = rep.mat(add[a, b]) - ma @ rep.mat(b)
            worst = max(worst, float(np.linalg.svd(diff, compute_uv=False)[0]))
    return worst


def pair_defect(pair: CCRPair) -> float:
    """Max of the CCR residual and both representation defects."""
    return max(verify_ccr(pair),
               representation_defect(pair.u),
               representation_defect(pair.v))


def pair_trace(pair: CCRPair, a: int, b: int) -> complex:
    """tr(V(b) U(a))."""
    if pair.is_exact:
        return (pair.v.mono(b) @ pair.u.mono(a)).trace()
    return complex(np.trace(pair.v.mat(b) @ pair.u.mat(a)))


def reconstruct_isom_check(pair: CCRPair) -> list[int]:
    """Kernel of a -> (x -> lam(x . a)) on R^d; empty means the map is injective."""
    ker = [a for a in pair.space.elements()
           if pairing_character(pair.space, pair.lam, a).is_trivial()]
    return [a for a in ker if a != 0]
