"""Finite unital rings with enumerable elements.

Elements are handled as integer indices 0..order-1.  The index is the
mixed-radix encoding of the element's additive coordinates, so index 0 is
the ring zero and addition is coordinate-wise modular addition.  Four
constructors are provided: Z/n, prime fields, full matrix rings over a
commutative base, and finite direct products.
"""

from __future__ import annotations

import json
import math
from functools import reduce
from typing import Iterator, Sequence

from .errors import CapacityError, StructureError

ENUM_CAP = 4096

_PRIME_CACHE: dict[int, bool] = {}


def _is_prime(n: int) -> bool:
    if n not in _PRIME_CACHE:
        _PRIME_CACHE[n] = n >= 2 and all(n % k for k in range(2, int(n**0.5) + 1))
    return _PRIME_CACHE[n]


class FiniteRing:
    """Base class; subclasses fill in order, additive factors, one, and mul."""

    kind = "abstract"
    order: int
    # (m_1, ..., m_r) with (R, +) isomorphic to the direct sum of Z/m_j
    additive_factors: tuple[int, ...]
    is_commutative: bool
    one: int

    # -- additive structure, shared by every constructor ------------------

    def coords(self, idx: int) -> tuple[int, ...]:
        """Additive coordinates of an element index (mixed radix, factor order)."""
        out = []
        for m in reversed(self.additive_factors):
            out.append(idx % m)
            idx //= m
        return tuple(reversed(out))

    def from_coords(self, coords: Sequence[int]) -> int:
        if len(coords) != len(self.additive_factors):
            raise StructureError("coordinate length does not match additive rank")
        idx = 0
        for c, m in zip(coords, self.additive_factors):
            idx = idx * m + (c % m)
        return idx

    @property
    def zero(self) -> int:
        return 0

    def add(self, i: int, j: int) -> int:
        a, b = self.coords(i), self.coords(j)
        return self.from_coords([x + y for x, y in zip(a, b)])

    def neg(self, i: int) -> int:
        return self.from_coords([-x for x in self.coords(i)])

    def sub(self, i: int, j: int) -> int:
        return self.add(i, self.neg(j))

    def additive_basis(self) -> list[int]:
        """Indices of the coordinate unit vectors; entry j has order m_j."""
        r = len(self.additive_factors)
        return [self.from_coords([1 if k == j else 0 for k in range(r)]) for j in range(r)]

    # -- multiplicative structure, per constructor ------------------------

    def mul(self, i: int, j: int) -> int:
        raise NotImplementedError

    def elements(self) -> Iterator[int]:
        if self.order > ENUM_CAP:
            raise CapacityError(f"ring order {self.order} exceeds enumeration cap {ENUM_CAP}")
        return iter(range(self.order))

    # -- descriptor handling ----------------------------------------------

    def descriptor(self) -> dict:
        raise NotImplementedError

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteRing) and self.descriptor() == other.descriptor()

    def __hash__(self) -> int:
        return hash(json.dumps(self.descriptor(), sort_keys=True))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.short_name()})"

    def short_name(self) -> str:
        raise NotImplementedError


class ZmodRing(FiniteRing):
    kind = "zmod"

    def __init__(self, n: int):
        if n < 2:
            raise StructureError("zmod modulus must be >= 2")
        self.n = n
        self.order = n
        self.additive_factors = (n,)
        self.is_commutative = True
        self.one = 1 % n

    def mul(self, i: int, j: int) -> int:
        return (i * j) % self.n

    def descriptor(self) -> dict:
        return {"kind": "zmod", "n": self.n}

    def short_name(self) -> str:
        return f"zmod:{self.n}"


class PrimeField(ZmodRing):
    kind = "prime_field"

    def __init__(self, p: int):
        if not _is_prime(p):
            raise StructureError(f"{p} is not prime")
        super().__init__(p)

    def descriptor(self) -> dict:
        return {"kind": "prime_field", "p": self.n}

    def short_name(self) -> str:
        return f"gf:{self.n}"


class MatrixRing(FiniteRing):
    """n x n matrices over a commutative finite ring, entries row-major."""

    kind = "matrix"

    def __init__(self, n: int, base: FiniteRing):
        if n < 1:
            raise StructureError("matrix size must be >= 1")
        if not base.is_commutative:
            raise StructureError("matrix ring base must be commutative")
        self.n = n
        self.base = base
        self.order = base.order ** (n * n)
        if self.order > ENUM_CAP:
            raise CapacityError(f"matrix ring order {self.order} exceeds cap {ENUM_CAP}")
        self.additive_factors = base.additive_factors * (n * n)
        self.is_commutative = n == 1 and base.is_commutative
        eye = [[base.one if r == c else 0 for c in range(n)] for r in range(n)]
        self.one = self.from_entries(eye)

    def entries(self, idx: int) -> list[list[int]]:
        """Element as an n x n array of base-ring indices."""
        co = self.coords(idx)
        r = len(self.base.additive_factors)
        flat = [self.base.from_coords(co[k * r:(k + 1) * r]) for k in range(self.n * self.n)]
        return [flat[i * self.n:(i + 1) * self.n] for i in range(self.n)]

    def from_entries(self, rows: Sequence[Sequence[int]]) -> int:
        co: list[int] = []
        for row in rows:
            for e in row:
                co.extend(self.base.coords(e))
        return self.from_coords(co)

    def mul(self, i: int, j: int) -> int:
        a, b = self.entries(i), self.entries(j)
        n, base = self.n, self.base
        out = [[0] * n for _ in range(n)]
        for r in range(n):
            for c in range(n):
                acc = 0
                for k in range(n):
                    acc = base.add(acc, base.mul(a[r][k], b[k][c]))
                out[r][c] = acc
        return self.from_entries(out)

    def descriptor(self) -> dict:
        return {"kind": "matrix", "n": self.n, "base": self.base.descriptor()}

    def short_name(self) -> str:
        return f"mat:{self.n}:{self.base.short_name()}"


class ProductRing(FiniteRing):
    kind = "product"

    def __init__(self, factors: Sequence[FiniteRing]):
        if not factors:
            raise StructureError("product needs at least one factor")
        self.factors = tuple(factors)
        self.order = math.prod(f.order for f in factors)
        if self.order > ENUM_CAP:
            raise CapacityError(f"product ring order {self.order} exceeds cap {ENUM_CAP}")
        self.additive_factors = reduce(lambda a, f: a + f.additive_factors, factors, ())
        self.is_commutative = all(f.is_commutative for f in factors)
        self.one = self.from_components([f.one for f in factors])

    def components(self, idx: int) -> tuple[int, ...]:
        co = self.coords(idx)
        out, pos = [], 0
        for f in self.factors:
            r = len(f.additive_factors)
            out.append(f.from_coords(co[pos:pos + r]))
            pos += r
        return tuple(out)

    def from_components(self, comps: Sequence[int]) -> int:
        co: list[int] = []
        for f, c in zip(self.factors, comps):
            co.extend(f.coords(c))
        return self.from_coords(co)

    def mul(self, i: int, j: int) -> int:
        a, b = self.components(i), self.components(j)
        return self.from_components([f.mul(x, y) for f, x, y in zip(self.factors, a, b)])

    def descriptor(self) -> dict:
        return {"kind": "product", "factors": [f.descriptor() for f in self.factors]}

    def short_name(self) -> str:
        return "*".join(f.short_name() for f in self.factors)


def ring_from_descriptor(desc: dict) -> FiniteRing:
    kind = desc.get("kind")
    if kind == "zmod":
        return ZmodRing(int(desc["n"]))
    if kind == "prime_field":
        return PrimeField(int(desc["p"]))
    if kind == "matrix":
        return MatrixRing(int(desc["n"]), ring_from_descriptor(desc["base"]))
    if kind == "product":
        return ProductRing([ring_from_descriptor(d) for d in desc["factors"]])
    raise StructureError(f"unknown ring kind {kind!r}")


def parse_ring(spec: str) -> FiniteRing:
    """Parse a JSON descriptor or the compact form.

    Compact grammar: ``zmod:N``, ``gf:P``, ``mat:N:<base>``, and ``*``-joined
    products of those, e.g. ``zmod:2*zmod:3``.
    """
    spec = spec.strip()
    if spec.startswith("{"):
        return ring_from_descriptor(json.loads(spec))
    if "*" in spec:
        return ProductRing([parse_ring(part) for part in spec.split("*")])
    head, _, rest = spec.partition(":")
    if head == "zmod":
        return ZmodRing(int(rest))
    if head in ("gf", "fp", "prime_field"):
        return PrimeField(int(rest))
    if head in ("mat", "matrix"):
        n, _, base = rest.partition(":")
        return MatrixRing(int(n), parse_ring(base))
    raise StructureError(f"cannot parse ring spec {spec!r}")


class RingPower:
    """The free module R^d with mixed-radix element indices.

    A vector is a tuple of d ring element indices; its index is big-endian
    base-|R| over the entries.  The additive group of R^d is the d-fold
    repetition of the ring's additive factors, and `coords` exposes that
    group isomorphism for character evaluation.
    """

    def __init__(self, ring: FiniteRing, d: int):
        if d < 1:
            raise StructureError("power exponent d must be >= 1")
        self.ring = ring
        self.d = d
        self.order = ring.order ** d
        if self.order > ENUM_CAP:
            raise CapacityError(f"|R|^d = {self.order} exceeds enumeration cap {ENUM_CAP}")
        self.additive_factors = ring.additive_factors * d

    def decode(self, idx: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.d):
            out.append(idx % self.ring.order)
            idx //= self.ring.order
        return tuple(reversed(out))

    def encode(self, entries: Sequence[int]) -> int:
        if len(entries) != self.d:
            raise StructureError("entry count does not match d")
        idx = 0
        for e in entries:
            idx = idx * self.ring.order + e
        return idx

    def coords(self, idx: int) -> tuple[int, ...]:
        out: list[int] = []
        for e in self.decode(idx):
            out.extend(self.ring.coords(e))
        return tuple(out)

    def from_coords(self, coords: Sequence[int]) -> int:
        r = len(self.ring.additive_factors)
        ents = [self.ring.from_coords(coords[k * r:(k + 1) * r]) for k in range(self.d)]
        return self.encode(ents)

    def add(self, i: int, j: int) -> int:
        a, b = self.decode(i), self.decode(j)
        return self.encode([self.ring.add(x, y) for x, y in zip(a, b)])

    def neg(self, i: int) -> int:
        return self.encode([self.ring.neg(x) for x in self.decode(i)])

    def dot(self, i: int, j: int) -> int:
        """sum_k a_k b_k in R, left factors taken from the first operand."""
        a, b = self.decode(i), self.decode(j)
        acc = 0
        for x, y in zip(a, b):
            acc = self.ring.add(acc, self.ring.mul(x, y))
        return acc

    def elements(self) -> range:
        return range(self.order)

    def additive_basis(self) -> list[int]:
        r = len(self.additive_factors)
        return [self.from_coords([1 if k == j else 0 for k in range(r)]) for j in range(r)]

    def __eq__(self, other) -> bool:
        return isinstance(other, RingPower) and self.ring == other.ring and self.d == other.d

    def __hash__(self) -> int:
        return hash((self.ring, self.d))

    def __repr__(self) -> str:
        return f"RingPower({self.ring.short_name()}, d={self.d})"
