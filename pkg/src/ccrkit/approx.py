"""Certified approximate-equivalence bounds for the integer-ring pair family.

Everything here lives on the dual torus: grid partitions of [0,1)^2d, orbit
sampling of n -> theta n mod 1 into the cells, and a closed-form certificate
eps = max over cells, coordinates, and a in K of
sup_x |e(2 pi i x a) - e(2 pi i alpha a)| with alpha the sampled phase.  The
infinite-dimensional conjugating unitary is never materialized; the bound is
the deliverable.

Rational theta is handled in exact fraction arithmetic.  Float theta gets
outward-rounded intervals: a candidate whose interval straddles a cell wall
is skipped rather than guessed, so recorded memberships are always sound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from .errors import CapacityError, CoverageError, PreconditionError, StructureError

CELL_CAP = 1 << 16
WINDOW_CAP = 1_000_000
# one product rounding plus slack; fmod itself is exact
FLOAT_PHASE_ERR = 2.0 ** -50


# -- theta ---------------------------------------------------------------------


@dataclass(frozen=True)
class Theta:
    """Rotation number with exactness metadata.

    frac is set when the value is exactly rational; convergents are
    continued-fraction approximants of the float value either way.
    """
    value: float
    frac: Optional[Fraction]
    convergents: tuple[Fraction, ...]
    label: str

    @property
    def is_rational(self) -> bool:
        return self.frac is not None

    def phase(self, n: int) -> tuple[float, float]:
        """theta*n mod 1 as (value, outward error bound)."""
        if self.frac is not None:
            f = (self.frac * n) % 1
            return float(f), 0.0
        x = math.fmod(n * self.value, 1.0)
        if x < 0:
            x += 1.0
        return x, abs(n) * FLOAT_PHASE_ERR

    def phase_fraction(self, n: int) -> Fraction:
        if self.frac is None:
            raise StructureError("exact phases require a rational theta")
        return (self.frac * n) % 1


def parse_theta(spec: Union[str, float, Fraction]) -> Theta:
    """Accepts "golden", "p/q", decimal strings, floats, and Fractions."""
    if isinstance(spec, Theta):
        return spec
    if isinstance(spec, Fraction):
        f = spec % 1
        return Theta(float(f), f, (f,), str(spec))
    if isinstance(spec, float):
        return Theta(spec % 1.0, None, _cf_convergents(spec % 1.0), repr(spec))
    text = str(spec).strip()
    if text == "golden":
        val = (math.sqrt(5.0) - 1.0) / 2.0
        return Theta(val, None, _cf_convergents(val), "golden")
    if "/" in text:
        num, den = text.split("/", 1)
        f = Fraction(int(num), int(den)) % 1
        return Theta(float(f), f, (f,), text)
    try:
        val = float(text)
    except ValueError as exc:
        raise StructureError(f"cannot parse rotation number {text!r}") from exc
    if val == int(val):
        f = Fraction(int(val)) % 1
        return Theta(float(f), f, (f,), text)
    return Theta(val % 1.0, None, _cf_convergents(val % 1.0), text)


def _cf_convergents(x: float, depth: int = 20) -> tuple[Fraction, ...]:
    """Standard continued-fraction convergents of a float in [0, 1)."""
    p0, q0, p1, q1 = 0, 1, 1, 0
    out = []
    rem = x
    for _ in range(depth):
        a = math.floor(rem)
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        if q1 > 10 ** 8:
            break
        out.append(Fraction(p1, q1))
        frac = rem - a
        if frac < 1e-12:
            break
        rem = 1.0 / frac
    return tuple(out)


# -- partitions ------------------------------------------------------------------


@dataclass(frozen=True)
class TorusPartition:
    """Half-open grid boxes [k/g, (k+1)/g)^dims tiling [0,1)^dims.

    Disjointness and cover are structural; every cell has flat-torus
    diameter sqrt(dims)/g.
    """
    resolution: int
    dims: int = 2

    def __post_init__(self):
        if self.resolution < 1:
            raise StructureError("resolution must be >= 1")
        if self.dims < 1:
            raise StructureError("dimension must be >= 1")
        if self.resolution ** self.dims > CELL_CAP:
            raise CapacityError("cell count exceeds the cap")

    @property
    def cell_count(self) -> int:
        return self.resolution ** self.dims

    def diameter(self) -> float:
        return math.sqrt(self.dims) / self.resolution

    def cells(self) -> Iterator[tuple[int, ...]]:
        g = self.resolution
        for flat in range(self.cell_count):
            idx = []
            for _ in range(self.dims):
                flat, r = divmod(flat, g)
                idx.append(r)
            yield tuple(reversed(idx))

    def cell_box(self, cell: tuple[int, ...]) -> list[tuple[Fraction, Fraction]]:
        g = self.resolution
        return [(Fraction(k, g), Fraction(k + 1, g)) for k in cell]

    def representative(self, cell: tuple[int, ...]) -> tuple[Fraction, ...]:
        g = self.resolution
        return tuple(Fraction(2 * k + 1, 2 * g) for k in cell)

    def locate(self, point: Sequence[Union[float, Fraction]]) -> tuple[int, ...]:
        if len(point) != self.dims:
            raise StructureError("point dimension mismatch")
        g = self.resolution
        out = []
        for x in point:
            if isinstance(x, Fraction):
                k = int((x % 1) * g)
            else:
                k = int(math.floor((x % 1.0) * g))
            out.append(min(k, g - 1))
        return tuple(out)


def build_grid_partition(resolution: int, dims: int = 2) -> TorusPartition:
    return TorusPartition(resolution, dims)


@dataclass(frozen=True)
class EpsNeighborhood:
    """Symmetric neighborhood of 0 in a cyclic model group."""
    modulus: int
    elements: frozenset[int]

    def __post_init__(self):
        norm = frozenset(e % self.modulus for e in self.elements)
        object.__setattr__(self, "elements", norm)
        if 0 not in norm:
            raise StructureError("neighborhood must contain 0")
        if any((-e) % self.modulus not in norm for e in norm):
            raise StructureError("neighborhood must be symmetric")

    def doubled(self) -> frozenset[int]:
        return frozenset((a + b) % self.modulus
                         for a in self.elements for b in self.elements)


@dataclass
class ModelPartition:
    """Greedy translate-minus-union blocks on a finite cyclic model group."""
    modulus: int
    neighborhood: EpsNeighborhood
    centers: list[int]
    blocks: list[frozenset[int]]

    def satisfies_separation(self) -> bool:
        """Any two members of a block differ by an element of the doubled
        neighborhood."""
        dd = self.neighborhood.doubled()
        return all((x - y) % self.modulus in dd
                   for blk in self.blocks for x in blk for y in blk)


def translate_partition(points: Sequence[int], modulus: int,
                    neighborhood: Union[EpsNeighborhood, Sequence[int]]) -> ModelPartition:
    """Recursive block construction on a cyclic model group.

    Block i+1 is (d_{i+1} + V) minus everything already taken, for the given
    dense sequence d_1, d_2, ...  Raises when the translates fail to cover.
    """
    if not isinstance(neighborhood, EpsNeighborhood):
        neighborhood = EpsNeighborhood(modulus, frozenset(neighborhood))
    taken: set[int] = set()
    centers, blocks = [], []
    for d in points:
        block = frozenset((d + v) % modulus
                          for v in neighborhood.elements) - taken
        if block:
            centers.append(d % modulus)
            blocks.append(block)
            taken |= block
    uncovered = sorted(set(range(modulus)) - taken)
    if uncovered:
        raise CoverageError(
            f"translates do not cover the group; missing {uncovered}")
    return ModelPartition(modulus, neighborhood, centers, blocks)


# -- orbit sampling ---------------------------------------------------------------


@dataclass(frozen=True)
class EdgeSample:
    """Best orbit point landing in one grid edge [k/g, (k+1)/g)."""
    index: int
    n: int
    alpha: float
    err: float
    alpha_frac: Optional[Fraction]
    inside: bool          # False for nearest-point fills of uncovered edges


def _signed_order(window: int) -> Iterator[int]:
    yield 0
    for m in range(1, window + 1):
        yield -m
        yield m


def _edge_of_phase(theta: Theta, n: int, g: int) -> Optional[int]:
    """Grid edge containing theta*n mod 1, or None when boundary-ambiguous."""
    if theta.is_rational:
        f = theta.phase_fraction(n)
        return int(f * g)
    x, err = theta.phase(n)
    lo = math.floor((x - err) * g)
    hi = math.floor((x + err) * g)
    if lo != hi:
        return None
    return lo % g


def _edge_table(theta: Theta, g: int, window: int) -> list[Optional[EdgeSample]]:
    """First orbit point per edge in (|n|, n) order; shared by all axes."""
    if window < 1:
        raise StructureError("window must be >= 1")
    if window > WINDOW_CAP:
        raise CapacityError("window exceeds the cap")
    table: list[Optional[EdgeSample]] = [None] * g
    remaining = g
    # rational phases repeat with period q; searching past it gains nothing
    if theta.is_rational:
        window = min(window, theta.frac.denominator)
    for n in _signed_order(window):
        k = _edge_of_phase(theta, n, g)
        if k is None or table[k] is not None:
            continue
        x, err = theta.phase(n)
        fr = theta.phase_fraction(n) if theta.is_rational else None
        table[k] = EdgeSample(k, n, x, err, fr, True)
        remaining -= 1
        if not remaining:
            break
    return table


@dataclass
class SampleAssignment:
    """Per-cell integer tuples whose orbit image lands in the cell.

    The torus coordinates are independent copies of the same rotation, so the
    per-edge table is shared by every axis and a cell's sample is the tuple
    of its edges' entries.
    """
    theta: Theta
    partition: TorusPartition
    window: int
    edges: list[Optional[EdgeSample]]

    @property
    def covered(self) -> bool:
        return all(e is not None and e.inside for e in self.edges)

    def covered_edges(self) -> int:
        return sum(1 for e in self.edges if e is not None)

    def uncovered_cells(self) -> list[tuple[int, ...]]:
        return [cell for cell in self.partition.cells()
                if any(self.edges[k] is None or not self.edges[k].inside
                       for k in cell)]

    def sample_for(self, cell: tuple[int, ...]) -> tuple[int, ...]:
        out = []
        for k in cell:
            e = self.edges[k]
            if e is None:
                raise CoverageError(f"edge {k} has no orbit sample")
            out.append(e.n)
        return tuple(out)

    def fill_nearest(self) -> "SampleAssignment":
        """Assign every empty edge the covered edge sample with the closest
        phase (circular distance); fills are marked as outside points."""
        have = [e for e in self.edges if e is not None]
        if not have:
            raise CoverageError("no orbit samples at all; cannot fill")
        g = self.partition.resolution
        edges = list(self.edges)
        for k in range(g):
            if edges[k] is not None:
                continue
            mid = (k + 0.5) / g
            best = min(have, key=lambda e: _circ_dist(e.alpha, mid))
            edges[k] = EdgeSample(k, best.n, best.alpha, best.err,
                                  best.alpha_frac, False)
        return SampleAssignment(self.theta, self.partition, self.window, edges)


def _circ_dist(x: float, y: float) -> float:
    d = abs(x - y) % 1.0
    return min(d, 1.0 - d)


def sample_orbit(theta: Union[Theta, str, float, Fraction],
                 partition: TorusPartition, window: int) -> SampleAssignment:
    """Smallest orbit points (ordered by |n|, then n) landing in each cell.

    Uncovered cells are data, not an error: rational rotations have finite
    image and always leave cells empty once the grid outresolves them.
    """
    theta = parse_theta(theta)
    table = _edge_table(theta, partition.resolution, window)
    return SampleAssignment(theta, partition, window, table)


# -- the certificate ---------------------------------------------------------------


def _sup_circle_gap(a: int, lo: Fraction, hi: Fraction, alpha: Fraction) -> float:
    """sup over x in [lo, hi] of 2|sin(pi a (x - alpha))|, exact endpoints.

    The function has peaks of value 2 exactly at half-integer arguments; if
    none falls in the scaled interval the sup sits at an endpoint.
    """
    if a == 0:
        return 0.0
    t0 = a * (lo - alpha)
    t1 = a * (hi - alpha)
    if t1 < t0:
        t0, t1 = t1, t0
    # odd multiple of 1/2 inside [t0, t1]?
    if math.floor(2 * t1) - math.ceil(2 * t0) >= 0:
        lo2, hi2 = math.ceil(2 * t0), math.floor(2 * t1)
        if lo2 % 2 != 0 or hi2 % 2 != 0 or hi2 > lo2:
            return 2.0
    v0 = abs(math.sin(math.pi * float(t0 % 1)))
    v1 = abs(math.sin(math.pi * float(t1 % 1)))
    return 2.0 * max(v0, v1)


def _edge_sup(theta: Theta, g: int, edge: EdgeSample, k_values: Sequence[int]) -> float:
    lo = Fraction(edge.index, g)
    hi = Fraction(edge.index + 1, g)
    if edge.alpha_frac is not None:
        alpha = edge.alpha_frac
        return max(_sup_circle_gap(a, lo, hi, alpha) for a in k_values)
    worst = 0.0
    for a in k_values:
        if a == 0:
            continue
        # outward-rounded interval around the float phase
        pad = Fraction(edge.err).limit_denominator(1 << 60) + Fraction(1, 1 << 48)
        alpha = Fraction(edge.alpha).limit_denominator(1 << 52)
        worst = max(worst,
                    _sup_circle_gap(a, lo - pad, hi + pad, alpha))
    return worst


def _edge_distance(edge: EdgeSample, g: int) -> float:
    """Sup over x in the edge arc of circular distance to the sample phase."""
    lo, hi = edge.index / g, (edge.index + 1) / g
    alpha = edge.alpha
    d = max(_circ_dist(lo, alpha), _circ_dist(hi, alpha))
    anti = (alpha + 0.5) % 1.0
    if lo <= anti < hi:
        return 0.5
    return min(d + edge.err, 0.5)


@dataclass
class EpsCertificate:
    """Exact sup bound eps plus the crude linear comparison bound.

    For fully covered assignments the bound uses the invariant cell diameter
    sqrt(dims)/g, so it halves exactly as g doubles; nearest-point fills
    enlarge delta to the distance actually realized.
    """
    theta: Theta
    resolution: int
    dims: int
    k_values: tuple[int, ...]
    eps: float
    eps_bound: float
    delta: float
    edge_sups: np.ndarray
    uncovered: list[tuple[int, ...]] = field(default_factory=list)

    def cell_sup(self, cell: tuple[int, ...]) -> float:
        return float(max(self.edge_sups[k] for k in cell))


def certify_epsilon(theta: Union[Theta, str, float, Fraction],
                    assignment: SampleAssignment,
                    k_values: Sequence[int],
                    allow_fills: bool = False) -> EpsCertificate:
    """Closed-form sup of the per-cell character gap over the window K.

    Every coordinate of every cell contributes sup_x 2|sin(pi a (x - alpha))|
    over its arc; the maximum over cells, coordinates, and a in K is eps.
    Requires full coverage unless nearest-point fills are explicitly allowed.
    """
    theta = parse_theta(theta)
    if theta.value != assignment.theta.value:
        raise StructureError("assignment was sampled with a different theta")
    part = assignment.partition
    g = part.resolution
    if any(e is None for e in assignment.edges):
        raise CoverageError(
            f"assignment leaves {g - assignment.covered_edges()} of {g} edges "
            "empty; enlarge the window or fill explicitly")
    if not assignment.covered and not allow_fills:
        raise CoverageError("assignment contains nearest-point fills; pass "
                            "allow_fills=True to certify anyway")
    ks = tuple(int(a) for a in k_values)
    sups = np.zeros(g)
    dists = np.zeros(g)
    for k in range(g):
        edge = assignment.edges[k]
        sups[k] = _edge_sup(theta, g, edge, ks)
        dists[k] = _edge_distance(edge, g)
    eps = float(sups.max())
    kmax = max((abs(a) for a in ks), default=0)
    delta_actual = math.sqrt(part.dims) * float(dists.max())
    delta = max(part.diameter(), delta_actual) if not assignment.covered \
        else part.diameter()
    bound = min(2.0, 2.0 * math.pi * kmax * delta)
    return EpsCertificate(theta, g, part.dims, ks, eps, bound, delta,
                          sups, assignment.uncovered_cells())


@dataclass
class StudyRow:
    resolution: int
    window_used: int
    eps_exact: float
    eps_bound: float
    uncovered_cells: int

    def as_csv(self) -> str:
        return (f"{self.resolution},{self.window_used},"
                f"{self.eps_exact:.12g},{self.eps_bound:.12g},{self.uncovered_cells}")


CSV_HEADER = "g,W,eps_exact,eps_bound,uncovered_cells"


def convergence_study(theta: Union[Theta, str, float, Fraction],
                      k_values: Sequence[int],
                      resolutions: Sequence[int],
                      window: Optional[int] = None,
                      dims: int = 2) -> list[StudyRow]:
    """Certificate table over increasing grid resolutions.

    The search window grows until the orbit covers every edge or the cap is
    reached; rational rotations plateau at their finite-image floor, with
    uncovered cells assigned their nearest orbit point.
    """
    theta = parse_theta(theta)
    if list(resolutions) != sorted(resolutions):
        raise PreconditionError("resolutions must be ascending")
    rows = []
    for g in resolutions:
        part = build_grid_partition(g, dims)
        w = window if window is not None else max(4 * g, 64)
        assignment = sample_orbit(theta, part, w)
        while window is None and not assignment.covered and w < WINDOW_CAP:
            if theta.is_rational and w >= theta.frac.denominator:
                break
            w = min(2 * w, WINDOW_CAP)
            assignment = sample_orbit(theta, part, w)
        filled = assignment if assignment.covered else assignment.fill_nearest()
        cert = certify_epsilon(theta, filled, k_values, allow_fills=True)
        rows.append(StudyRow(g, w, cert.eps, cert.eps_bound,
                             len(cert.uncovered)))
    return rows
