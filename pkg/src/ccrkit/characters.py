"""Unitary characters of finite abelian groups, with exact rational phases.

A character of a group with additive factors (m_1, ..., m_r) is stored as an
exponent vector (e_1, ..., e_r); its value on coordinates (x_1, ..., x_r) is
exp(2 pi i sum_j e_j x_j / m_j).  Phases stay exact rationals (reduced mod 1)
until a complex number is actually requested.
"""

from __future__ import annotations

import cmath
import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .errors import StructureError
from .rings import FiniteRing, RingPower


@dataclass(frozen=True)
class Character:
    factors: tuple[int, ...]
    exponents: tuple[int, ...]

    def __post_init__(self):
        if len(self.factors) != len(self.exponents):
            raise StructureError("exponent count does not match factor count")
        if any(not (0 <= e < m) for e, m in zip(self.exponents, self.factors)):
            raise StructureError("exponents must satisfy 0 <= e_j < m_j")

    @property
    def modulus(self) -> int:
        """Common denominator of all phases this character can produce."""
        return math.lcm(*self.factors)

    def phase(self, coords: Sequence[int]) -> Fraction:
        """Exact phase in [0, 1): the character value is exp(2 pi i phase)."""
        if len(coords) != len(self.factors):
            raise StructureError("coordinate length does not match character group")
        M = self.modulus
        num = sum(e * x * (M // m) for e, x, m in zip(self.exponents, coords, self.factors))
        return Fraction(num % M, M)

    def phase_num(self, coords: Sequence[int]) -> int:
        """Numerator of the phase over the common modulus (unreduced)."""
        M = self.modulus
        return sum(e * x * (M // m) for e, x, m in zip(self.exponents, coords, self.factors)) % M

    def value(self, coords: Sequence[int]) -> complex:
        return cmath.exp(2j * cmath.pi * float(self.phase(coords)))

    def is_trivial(self) -> bool:
        return all(e == 0 for e in self.exponents)

    def descriptor(self) -> dict:
        return {"exponents": list(self.exponents)}

    def short_name(self) -> str:
        return ",".join(str(e) for e in self.exponents)


def trivial_character(factors: Sequence[int]) -> Character:
    return Character(tuple(factors), tuple(0 for _ in factors))


def character_from_descriptor(factors: Sequence[int], desc: dict) -> Character:
    return Character(tuple(factors), tuple(int(e) for e in desc["exponents"]))


def parse_character(factors: Sequence[int], spec: str) -> Character:
    """Parse a JSON descriptor or a comma-separated exponent list."""
    spec = spec.strip()
    if spec.startswith("{"):
        return character_from_descriptor(factors, json.loads(spec))
    exps = tuple(int(p) % m for p, m in zip(spec.split(","), factors))
    if spec.count(",") + 1 != len(factors):
        raise StructureError(
            f"character needs {len(factors)} exponents for factors {tuple(factors)}")
    return Character(tuple(factors), exps)


def dual_group(factors: Sequence[int]) -> Iterator[Character]:
    """All characters of the group with the given additive factors."""
    for exps in itertools.product(*(range(m) for m in factors)):
        yield Character(tuple(factors), exps)


def pairing_character(space: RingPower, lam: Character, a: int) -> Character:
    """The character x -> lam(x . a) of R^d, for a in R^d.

    lam must be a character of (R, +).  The exponents are read off on the
    additive basis of R^d; divisibility is exact because each basis element
    has additive order equal to its factor.
    """
    if lam.factors != space.ring.additive_factors:
        raise StructureError("character does not live on the ring's additive group")
    M = lam.modulus
    exps = []
    for b, m in zip(space.additive_basis(), space.additive_factors):
        num = lam.phase_num(space.ring.coords(space.dot(b, a)))
        if (num * m) % M:
            raise StructureError("character phase is not compatible with the basis order")
        exps.append((num * m // M) % m)
    return Character(space.additive_factors, tuple(exps))


def symplectic_character(space: RingPower, lam: Character, a: int, b: int) -> Character:
    """The character (x, y) -> lam(x . a) lam(y . b) on R^d x R^d."""
    ca = pairing_character(space, lam, a)
    cb = pairing_character(space, lam, b)
    return Character(ca.factors + cb.factors, ca.exponents + cb.exponents)


def pairing_kernel(space: RingPower, lam: Character) -> list[int]:
    """Elements a of R^d whose pairing character x -> lam(x . a) is trivial."""
    return [a for a in space.elements() if pairing_character(space, lam, a).is_trivial()]


def two_sided_ideal(ring: FiniteRing, a: int) -> frozenset[int]:
    """The two-sided ideal generated by a: additive closure of {r a s}."""
    seed = {ring.mul(r, ring.mul(a, s)) for r in ring.elements() for s in ring.elements()}
    ideal = set(seed)
    frontier = list(seed)
    while frontier:
        x = frontier.pop()
        for y in list(ideal):
            z = ring.add(x, y)
            if z not in ideal:
                ideal.add(z)
                frontier.append(z)
    return frozenset(ideal)


@dataclass
class ConditionReport:
    """Verdicts for the three character conditions on a ring.

    sym: lam(ab) = lam(ba) for all a, b.
    iso: a -> (x -> lam(x a)) is injective (hence bijective, finite case).
    faith: no nonzero two-sided ideal is contained in ker(lam).
    A witness field is populated exactly when its flag is False.
    """

    sym: bool
    iso: bool
    faith: bool
    sym_counterexample: Optional[tuple[int, int]] = None
    iso_kernel: Optional[list[int]] = None
    faith_witness_ideal: Optional[list[int]] = None

    def to_dict(self) -> dict:
        return {
            "sym": self.sym,
            "iso": self.iso,
            "faith": self.faith,
            "sym_counterexample": list(self.sym_counterexample) if self.sym_counterexample else None,
            "iso_kernel": self.iso_kernel,
            "faith_witness_ideal": self.faith_witness_ideal,
        }


def check_conditions(ring: FiniteRing, lam: Character) -> ConditionReport:
    """Evaluate sym/iso/faith for a character of the ring's additive group."""
    if lam.factors != ring.additive_factors:
        raise StructureError("character does not live on the ring's additive group")

    sym, sym_ce = True, None
    for a in ring.elements():
        for b in ring.elements():
            if lam.phase_num(ring.coords(ring.mul(a, b))) != lam.phase_num(ring.coords(ring.mul(b, a))):
                sym, sym_ce = False, (a, b)
                break
        if not sym:
            break

    space = RingPower(ring, 1)
    kernel = pairing_kernel(space, lam)
    iso = len(kernel) == 1
    iso_kernel = None if iso else kernel

    faith, faith_witness = True, None
    for a in ring.elements():
        if a == 0:
            continue
        ideal = two_sided_ideal(ring, a)
        if all(lam.phase_num(ring.coords(x)) == 0 for x in ideal):
            faith, faith_witness = False, sorted(ideal)
            break

    return ConditionReport(sym, iso, faith, sym_ce, iso_kernel, faith_witness)


def faithful_characters(ring: FiniteRing) -> list[Character]:
    return [lam for lam in dual_group(ring.additive_factors) if check_conditions(ring, lam).faith]


def sym_iso_characters(ring: FiniteRing) -> list[Character]:
    out = []
    for lam in dual_group(ring.additive_factors):
        rep = check_conditions(ring, lam)
        if rep.sym and rep.iso:
            out.append(lam)
    return out
