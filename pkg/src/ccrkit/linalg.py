"""Dense and structured operator helpers.

Two workhorses live here.  MonomialMatrix is a unitary with exactly one
unit-modulus entry per row and column, stored as a permutation plus exact
rational phases; products, adjoints, and operator norms of differences are
computed in integer arithmetic.  The LinOp classes give matrix-free matvec
access to block-structured unitaries so norms at dimension ~4096 never
materialize dense matrices.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import CapacityError, StructureError

DENSE_SVD_DIM = 512
POWER_TOL = 1e-3
POWER_MAXITER = 300
DENSE_CAP = 4096


def phase_values(nums: np.ndarray, den: int) -> np.ndarray:
    """exp(2 pi i num/den) elementwise."""
    return np.exp((2j * np.pi / den) * np.asarray(nums, dtype=np.float64))


class MonomialMatrix:
    """Row form: (M v)[i] = exp(2 pi i num[i]/den) * v[tau[i]]."""

    __slots__ = ("dim", "tau", "num", "den")

    def __init__(self, tau: np.ndarray, num: np.ndarray, den: int):
        self.tau = np.asarray(tau, dtype=np.int64)
        self.num = np.mod(np.asarray(num, dtype=np.int64), den)
        self.den = int(den)
        self.dim = self.tau.shape[0]
        if self.num.shape != self.tau.shape:
            raise StructureError("tau and num must have the same length")

    @classmethod
    def identity(cls, dim: int, den: int = 1) -> "MonomialMatrix":
        return cls(np.arange(dim), np.zeros(dim, dtype=np.int64), den)

    def rescale(self, den: int) -> "MonomialMatrix":
        if den % self.den:
            raise StructureError("new denominator must be a multiple of the old one")
        return MonomialMatrix(self.tau, self.num * (den // self.den), den)

    def __matmul__(self, other: "MonomialMatrix") -> "MonomialMatrix":
        if self.dim != other.dim:
            raise StructureError("dimension mismatch")
        den = math.lcm(self.den, other.den)
        a, b = self.rescale(den), other.rescale(den)
        return MonomialMatrix(b.tau[a.tau], a.num + b.num[a.tau], den)

    def adjoint(self) -> "MonomialMatrix":
        inv = np.argsort(self.tau)
        return MonomialMatrix(inv, -self.num[inv], self.den)

    def phase_shift(self, num: int, den: int) -> "MonomialMatrix":
        """Multiply by the global phase exp(2 pi i num/den)."""
        d = math.lcm(self.den, den)
        m = self.rescale(d)
        return MonomialMatrix(m.tau, m.num + num * (d // den), d)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        return phase_values(self.num, self.den) * v[..., self.tau]

    def to_dense(self) -> np.ndarray:
        if self.dim > DENSE_CAP:
            raise CapacityError(f"dense materialization at dim {self.dim} exceeds cap")
        out = np.zeros((self.dim, self.dim), dtype=np.complex128)
        out[np.arange(self.dim), self.tau] = phase_values(self.num, self.den)
        return out

    def trace(self) -> complex:
        fixed = self.tau == np.arange(self.dim)
        return complex(np.sum(phase_values(self.num[fixed], self.den)))

    def equals(self, other: "MonomialMatrix") -> bool:
        den = math.lcm(self.den, other.den)
        a, b = self.rescale(den), other.rescale(den)
        return bool(np.array_equal(a.tau, b.tau) and np.array_equal(a.num, b.num))


def monomial_diff_norm(m1: MonomialMatrix, m2: MonomialMatrix) -> float:
    """Exact operator norm of m1 - m2.

    Both are unitary, so ||m1 - m2|| = ||m2* m1 - I||, and a monomial unitary
    is normal: the norm is the largest spectral distance to 1.  On each cycle
    of length L with phase holonomy h/den the eigenphases are (h/den + k)/L.
    """
    m = m2.adjoint() @ m1
    best = 0.0
    seen = np.zeros(m.dim, dtype=bool)
    for start in range(m.dim):
        if seen[start]:
            continue
        holonomy, length, i = 0, 0, start
        while not seen[i]:
            seen[i] = True
            holonomy += int(m.num[i])
            length += 1
            i = int(m.tau[i])
        q = (holonomy % m.den) / m.den
        for k in range(length):
            best = max(best, 2.0 * abs(math.sin(math.pi * (q + k) / length)))
            if best >= 2.0 - 1e-15:
                return 2.0
    return best


def max_phase_gap(num1: np.ndarray, num2: np.ndarray, den: int) -> float:
    """max_i |exp(2 pi i num1/den) - exp(2 pi i num2/den)|, exactly."""
    diff = np.mod(np.asarray(num1, np.int64) - np.asarray(num2, np.int64), den)
    if diff.size == 0:
        return 0.0
    # 2|sin(pi q)| is maximized by the residue closest to den/2
    best = diff.flat[np.argmin(np.abs(diff.astype(np.float64) - den / 2.0))]
    return 2.0 * abs(math.sin(math.pi * int(best) / den))


# -- structured operators ----------------------------------------------------


class LinOp:
    """Square operator with matvec/rmatvec; vectors are 1-d complex arrays."""

    dim: int

    def matvec(self, v: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def rmatvec(self, v: np.ndarray) -> np.ndarray:
        """Adjoint applied to v."""
        raise NotImplementedError

    def to_dense(self) -> np.ndarray:
        if self.dim > DENSE_CAP:
            raise CapacityError(f"dense materialization at dim {self.dim} exceeds cap")
        out = np.empty((self.dim, self.dim), dtype=np.complex128)
        e = np.zeros(self.dim, dtype=np.complex128)
        for j in range(self.dim):
            e[j] = 1.0
            out[:, j] = self.matvec(e)
            e[j] = 0.0
        return out


class DenseOp(LinOp):
    def __init__(self, mat: np.ndarray):
        self.mat = np.asarray(mat, dtype=np.complex128)
        self.dim = self.mat.shape[0]

    def matvec(self, v):
        return self.mat @ v

    def rmatvec(self, v):
        return self.mat.conj().T @ v

    def to_dense(self):
        return self.mat


class MonomialOp(LinOp):
    def __init__(self, m: MonomialMatrix):
        self.m = m
        self.adj = m.adjoint()
        self.dim = m.dim

    def matvec(self, v):
        return self.m.matvec(v)

    def rmatvec(self, v):
        return self.adj.matvec(v)

    def to_dense(self):
        return self.m.to_dense()


class BlockDiagOp(LinOp):
    """Block diagonal with B equal-size square blocks, stacked (B, n, n)."""

    def __init__(self, blocks: np.ndarray):
        self.blocks = np.asarray(blocks, dtype=np.complex128)
        b, n, n2 = self.blocks.shape
        if n != n2:
            raise StructureError("blocks must be square")
        self.nblocks, self.block_dim = b, n
        self.dim = b * n

    def matvec(self, v):
        w = v.reshape(self.nblocks, self.block_dim)
        return np.einsum("bij,bj->bi", self.blocks, w).reshape(-1)

    def rmatvec(self, v):
        w = v.reshape(self.nblocks, self.block_dim)
        return np.einsum("bji,bj->bi", self.blocks.conj(), w).reshape(-1)


class KronLeftOp(LinOp):
    """F kron I_n: mixes the block index by the dense matrix F."""

    def __init__(self, mat: np.ndarray, n: int):
        self.mat = np.asarray(mat, dtype=np.complex128)
        self.n = n
        self.dim = self.mat.shape[0] * n

    def matvec(self, v):
        w = v.reshape(self.mat.shape[0], self.n)
        return (self.mat @ w).reshape(-1)

    def rmatvec(self, v):
        w = v.reshape(self.mat.shape[0], self.n)
        return (self.mat.conj().T @ w).reshape(-1)


class ComposeOp(LinOp):
    """Product ops[0] @ ops[1] @ ... @ ops[-1]."""

    def __init__(self, ops: Sequence[LinOp]):
        if not ops:
            raise StructureError("empty composition")
        if len({op.dim for op in ops}) != 1:
            raise StructureError("dimension mismatch in composition")
        self.ops = list(ops)
        self.dim = ops[0].dim

    def matvec(self, v):
        for op in reversed(self.ops):
            v = op.matvec(v)
        return v

    def rmatvec(self, v):
        for op in self.ops:
            v = op.rmatvec(v)
        return v


class SumOp(LinOp):
    def __init__(self, ops: Sequence[LinOp], coeffs: Sequence[complex]):
        if len({op.dim for op in ops}) != 1:
            raise StructureError("dimension mismatch in sum")
        self.ops, self.coeffs = list(ops), list(coeffs)
        self.dim = ops[0].dim

    def matvec(self, v):
        acc = np.zeros(self.dim, dtype=np.complex128)
        for c, op in zip(self.coeffs, self.ops):
            acc += c * op.matvec(v)
        return acc

    def rmatvec(self, v):
        acc = np.zeros(self.dim, dtype=np.complex128)
        for c, op in zip(self.coeffs, self.ops):
            acc += np.conj(c) * op.rmatvec(v)
        return acc


class ShiftedOp(LinOp):
    """op + shift * I, used for unitarity defects."""

    def __init__(self, op: LinOp, shift: complex):
        self.op, self.shift = op, shift
        self.dim = op.dim

    def matvec(self, v):
        return self.op.matvec(v) + self.shift * v

    def rmatvec(self, v):
        return self.op.rmatvec(v) + np.conj(self.shift) * v


class GramOp(LinOp):
    """op* op, for unitarity checks."""

    def __init__(self, op: LinOp):
        self.op = op
        self.dim = op.dim

    def matvec(self, v):
        return self.op.rmatvec(self.op.matvec(v))

    def rmatvec(self, v):
        return self.matvec(v)


def operator_norm(op, seed: int = 0) -> float:
    """Largest singular value.

    Dense SVD below DENSE_SVD_DIM; otherwise power iteration on A*A with
    relative tolerance POWER_TOL and deterministic seeded start.
    """
    if isinstance(op, np.ndarray):
        if op.shape[0] < DENSE_SVD_DIM:
            return float(np.linalg.svd(op, compute_uv=False)[0]) if op.size else 0.0
        op = DenseOp(op)
    if op.dim < DENSE_SVD_DIM:
        return float(np.linalg.svd(op.to_dense(), compute_uv=False)[0])
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(op.dim) + 1j * rng.standard_normal(op.dim)
    v /= np.linalg.norm(v)
    sigma = 0.0
    for _ in range(POWER_MAXITER):
        w = op.matvec(v)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        u = op.rmatvec(w)
        nu = np.linalg.norm(u)
        new_sigma = nu / nw if nw else 0.0
        v = u / nu if nu else v
        if abs(new_sigma - sigma) <= POWER_TOL * new_sigma + 1e-16:
            return float(new_sigma)
        sigma = new_sigma
    return float(sigma)


def unitarity_defect(op, seed: int = 0) -> float:
    """||W* W - I||."""
    if isinstance(op, np.ndarray):
        w = np.asarray(op, dtype=np.complex128)
        if w.shape[0] < DENSE_SVD_DIM:
            g = w.conj().T @ w
            return operator_norm(g - np.eye(g.shape[0]))
        op = DenseOp(w)
    return operator_norm(ShiftedOp(GramOp(op), -1.0), seed=seed)


def random_unitary(dim: int, seed: int) -> np.ndarray:
    """Seeded Haar-ish unitary: QR of a complex Gaussian, diagonal phase fixed."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r).copy()
    d[d == 0] = 1.0
    return q * (d.conj() / np.abs(d))
