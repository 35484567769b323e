"""Plancherel-normalized transform on the doubled index set R^d x R^d.

The transform matrix has entries |S|^(-1/2) lam(t . x) lam(s . y) at row
(x, y), column (t, s).  It is unitary exactly when the pairing map of lam is
injective, and then conjugates the phase-modulated pair into the shifted
pair; its square is the parity permutation (x, y) -> (-x, -y).
"""

from __future__ import annotations

import numpy as np

from .characters import Character
from .errors import CapacityError, PreconditionError, StructureError
from .linalg import KronLeftOp
from .pairs import dot_phase_nums
from .rings import FiniteRing, RingPower

TRANSFORM_DIM_CAP = 4096
UNITARY_TOL = 1e-10


class PlancherelTransform:
    """Dense |S| x |S| transform built from an exact integer phase table."""

    def __init__(self, ring: FiniteRing, d: int, lam: Character):
        if lam.factors != ring.additive_factors:
            raise StructureError("character does not live on the ring's additive group")
        self.ring, self.d, self.lam = ring, d, lam
        self.space = RingPower(ring, d)
        self.big = RingPower(ring, 2 * d)
        if self.big.order > TRANSFORM_DIM_CAP:
            raise CapacityError(f"|S| = {self.big.order} exceeds the transform cap")
        self.dim = self.big.order

    def half_phase_nums(self) -> np.ndarray:
        """Integer phases of lam(t . x) over lam.modulus, rows x, cols t."""
        els = list(self.space.elements())
        return dot_phase_nums(self.space, self.lam, els, els).T.copy()

    def phase_nums(self) -> np.ndarray:
        """Full |S| x |S| integer phase table: (x,y),(t,s) -> t.x phase + s.y phase."""
        half = self.half_phase_nums()
        nd = self.space.order
        ones = np.ones((nd, nd), dtype=np.int64)
        return (np.kron(half, ones) + np.kron(ones, half)) % self.lam.modulus

    def matrix(self) -> np.ndarray:
        half = np.exp((2j * np.pi / self.lam.modulus)
                      * self.half_phase_nums().astype(np.float64))
        return np.kron(half, half) / np.sqrt(self.dim)

    def unitarity_defect(self) -> float:
        f = self.matrix()
        g = f.conj().T @ f
        return float(np.linalg.norm(g - np.eye(self.dim), 2))

    def is_unitary(self, tol: float = UNITARY_TOL) -> bool:
        return self.unitarity_defect() <= tol

    def rank(self, tol: float = 1e-8) -> int:
        return int(np.linalg.matrix_rank(self.matrix(), tol=tol))

    def parity_defect(self) -> float:
        """|| F^2 - P || with P the parity permutation (x, y) -> (-x, -y)."""
        f = self.matrix()
        neg = np.array([self.big.neg(i) for i in range(self.dim)], dtype=np.int64)
        p = np.zeros((self.dim, self.dim), dtype=np.complex128)
        p[np.arange(self.dim), neg] = 1.0
        return float(np.linalg.norm(f @ f - p, 2))


def plancherel_dft(ring: FiniteRing, d: int, lam: Character) -> PlancherelTransform:
    return PlancherelTransform(ring, d, lam)


def extend_to_vectors(transform: PlancherelTransform, n: int) -> KronLeftOp:
    """Block extension acting as the transform on the doubled index and as the
    identity on an n-dimensional carrier."""
    if n < 1:
        raise StructureError("carrier dimension must be >= 1")
    defect = transform.unitarity_defect()
    if defect > UNITARY_TOL:
        raise PreconditionError(
            f"transform is not unitary (defect {defect:.2e}); the pairing map "
            "of the character must be injective")
    if transform.dim * n > TRANSFORM_DIM_CAP:
        raise CapacityError("extended transform dimension exceeds the cap")
    return KronLeftOp(transform.matrix(), n)
