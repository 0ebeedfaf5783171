"""Dense matrices over F_p and exact Gaussian elimination.

Over F_2 the elimination runs on bit-packed rows (8 columns per byte, one
vectorized XOR per pivot); other primes use int64 row operations.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from galg.errors import DimensionError, IncompatibleOperandsError, ParseError, SingularMatrixError
from galg.field import PrimeField


class FieldMatrix:
    """Immutable ``rows x cols`` matrix with entries in ``[0, p)``."""

    __slots__ = ("data", "p")

    def __init__(self, data, p: int):
        arr = np.array(data, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DimensionError(f"matrix must be 2-D with positive dimensions, got shape {arr.shape}")
        PrimeField(int(p))
        arr %= p
        arr.setflags(write=False)
        self.data = arr
        self.p = int(p)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def T(self) -> "FieldMatrix":
        return FieldMatrix(self.data.T, self.p)

    def is_zero(self) -> bool:
        return not self.data.any()

    def _check(self, other: "FieldMatrix") -> None:
        if not isinstance(other, FieldMatrix):
            raise TypeError(f"expected FieldMatrix, got {type(other).__name__}")
        if other.p != self.p:
            raise IncompatibleOperandsError(f"field mismatch: F_{self.p} vs F_{other.p}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.data, other.data)

    __hash__ = None

    def __add__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check(other)
        if other.shape != self.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return FieldMatrix(self.data + other.data, self.p)

    def __sub__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check(other)
        if other.shape != self.shape:
            raise DimensionError(f"cannot subtract {self.shape} and {other.shape}")
        return FieldMatrix(self.data - other.data, self.p)

    def __neg__(self) -> "FieldMatrix":
        return FieldMatrix(-self.data, self.p)

    def __mul__(self, scalar: int) -> "FieldMatrix":
        if not isinstance(scalar, (int, np.integer)):
            return NotImplemented
        return FieldMatrix(self.data * (int(scalar) % self.p), self.p)

    __rmul__ = __mul__

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        return matrix_mul(self, other)

    def __repr__(self) -> str:
        return f"FieldMatrix({self.rows}x{self.cols}, p={self.p})"

    def to_text(self) -> str:
        """Text form: ``rows cols p`` then one line of residues per row."""
        lines = [f"{self.rows} {self.cols} {self.p}"]
        lines.extend(" ".join(str(v) for v in row) for row in self.data.tolist())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "FieldMatrix":
        lines = [ln for ln in text.splitlines()]
        if not lines or not lines[0].strip():
            raise ParseError("missing 'rows cols p' header", line=1)
        try:
            rows, cols, p = (int(tok) for tok in lines[0].split())
        except ValueError:
            raise ParseError("header must be three integers 'rows cols p'", line=1) from None
        values: list[int] = []
        for lineno, line in enumerate(lines[1:], start=2):
            for tok in line.split():
                try:
                    v = int(tok)
                except ValueError:
                    raise ParseError(f"non-integer entry {tok!r}", line=lineno) from None
                if not 0 <= v < p:
                    raise ParseError(f"entry {v} outside [0, {p})", line=lineno)
                values.append(v)
        if len(values) != rows * cols:
            raise ParseError(f"expected {rows * cols} entries, found {len(values)}", line=len(lines))
        return cls(np.array(values, dtype=np.int64).reshape(rows, cols), p)


def identity(n: int, p: int) -> FieldMatrix:
    return FieldMatrix(np.eye(n, dtype=np.int64), p)


def zeros(rows: int, cols: int, p: int) -> FieldMatrix:
    return FieldMatrix(np.zeros((rows, cols), dtype=np.int64), p)


def _matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # float64 BLAS is exact while inner * (p-1)^2 < 2^53
    if a.shape[1] * (p - 1) ** 2 < 2**53:
        return np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64) % p
    return (a @ b) % p


def matrix_mul(A: FieldMatrix, B: FieldMatrix) -> FieldMatrix:
    A._check(B)
    if A.cols != B.rows:
        raise DimensionError(f"cannot multiply {A.shape} by {B.shape}")
    return FieldMatrix(_matmul_mod(A.data, B.data, A.p), A.p)


def _rref_gf2(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    rows, cols = a.shape
    packed = np.packbits(a.astype(np.uint8), axis=1)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        byte, shift = c >> 3, 7 - (c & 7)
        column = (packed[:, byte] >> shift) & 1
        below = np.flatnonzero(column[r:])
        if below.size == 0:
            continue
        piv = r + int(below[0])
        if piv != r:
            packed[[r, piv]] = packed[[piv, r]]
            column[[r, piv]] = column[[piv, r]]
        hit = column.astype(bool)
        hit[r] = False
        packed[hit] ^= packed[r]
        pivots.append(c)
        r += 1
    return np.unpackbits(packed, axis=1, count=cols).astype(np.int64), pivots


def _rref_modp(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    work = a.astype(np.int64) % p
    rows, cols = work.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        below = np.flatnonzero(work[r:, c])
        if below.size == 0:
            continue
        piv = r + int(below[0])
        if piv != r:
            work[[r, piv]] = work[[piv, r]]
        work[r] = (work[r] * pow(int(work[r, c]), -1, p)) % p
        factors = work[:, c].copy()
        factors[r] = 0
        hit = np.flatnonzero(factors)
        if hit.size:
            work[hit] = (work[hit] - factors[hit, None] * work[r]) % p
        pivots.append(c)
        r += 1
    return work, pivots


def rref_array(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of a residue array and its pivot columns."""
    if p == 2:
        return _rref_gf2(a)
    return _rref_modp(a, p)


def rref(A: FieldMatrix) -> tuple[FieldMatrix, list[int]]:
    R, pivots = rref_array(A.data, A.p)
    return FieldMatrix(R, A.p), pivots


def rank(A: FieldMatrix) -> int:
    return len(rref_array(A.data, A.p)[1])


def solve(A: FieldMatrix, b: Sequence[int]) -> np.ndarray | None:
    """Return some ``x`` with ``A x = b``, or ``None`` when the system is inconsistent."""
    b = np.asarray(b, dtype=np.int64).reshape(-1) % A.p
    if b.shape[0] != A.rows:
        raise DimensionError(f"right-hand side has length {b.shape[0]}, matrix has {A.rows} rows")
    R, pivots = rref_array(np.hstack([A.data, b[:, None]]), A.p)
    if pivots and pivots[-1] == A.cols:
        return None
    x = np.zeros(A.cols, dtype=np.int64)
    for r, c in enumerate(pivots):
        x[c] = R[r, A.cols]
    return x


def kernel(A: FieldMatrix) -> list[np.ndarray]:
    """A basis of the right null space ``{x : A x = 0}``."""
    R, pivots = rref_array(A.data, A.p)
    pivot_set = set(pivots)
    basis = []
    for free in range(A.cols):
        if free in pivot_set:
            continue
        x = np.zeros(A.cols, dtype=np.int64)
        x[free] = 1
        for r, c in enumerate(pivots):
            x[c] = (-R[r, free]) % A.p
        basis.append(x)
    return basis


def matrix_inverse(A: FieldMatrix) -> FieldMatrix:
    if A.rows != A.cols:
        raise DimensionError(f"only square matrices are invertible, got {A.shape}")
    n = A.rows
    R, pivots = rref_array(np.hstack([A.data, np.eye(n, dtype=np.int64)]), A.p)
    if len(pivots) < n or pivots[n - 1] != n - 1:
        raise SingularMatrixError(f"{n}x{n} matrix over F_{A.p} is singular")
    return FieldMatrix(R[:, n:], A.p)


def kronecker(A: FieldMatrix, B: FieldMatrix) -> FieldMatrix:
    """Block matrix whose ``(i, j)`` block is ``A[i, j] * B``."""
    A._check(B)
    return FieldMatrix(np.kron(A.data, B.data), A.p)


def permutation_matrix(perm: Sequence[int], p: int) -> FieldMatrix:
    """Matrix ``P`` with column ``k`` equal to ``e_{perm[k]}``, so ``(A P)[:, k] = A[:, perm[k]]``."""
    perm = np.asarray(perm, dtype=np.int64)
    n = perm.shape[0]
    if not np.array_equal(np.sort(perm), np.arange(n)):
        raise DimensionError("not a permutation")
    P = np.zeros((n, n), dtype=np.int64)
    P[perm, np.arange(n)] = 1
    return FieldMatrix(P, p)


def permutation_conjugate(A: FieldMatrix, perm: Sequence[int]) -> FieldMatrix:
    """``P^-1 A P`` for the column-reindexing permutation matrix of ``perm``.

    Entry ``(k, l)`` of the result is ``A[perm[k], perm[l]]``; this is the
    representation matrix in the basis reordered as ``g'_k = g_{perm[k]}``.
    """
    if A.rows != A.cols or len(perm) != A.rows:
        raise DimensionError("permutation_conjugate needs a square matrix and a matching permutation")
    P = permutation_matrix(perm, A.p)
    return matrix_mul(matrix_mul(P.T, A), P)
