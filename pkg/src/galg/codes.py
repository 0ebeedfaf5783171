"""Binary parity-check matrices built from group-algebra elements.

Covers the two-block MDPC layout, the generalized and classical Tanner
layouts, syndromes, a bit-flipping decoder and the alist text format.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from galg import linalg
from galg.algebra import AlgebraElement, is_unit, unit_order
from galg.errors import (
    DimensionError,
    IncompatibleOperandsError,
    InvalidParameterError,
    NotAUnitError,
    ParseError,
    UnsupportedFieldError,
)
from galg.field import is_prime
from galg.groups import cyclic_group

THRESHOLD_RULES = ("max", "majority")
DEFAULT_MAX_ITERS = 100


class ParityCheck:
    """Sparse binary ``rows x cols`` matrix stored by column supports.

    ``block_meta`` optionally maps ``(block_row, block_col)`` to a text
    description of the algebra element that generated that block.
    """

    def __init__(
        self,
        rows: int,
        cols: int,
        col_supports: Sequence[Sequence[int]],
        block_meta: Mapping[tuple[int, int], str] | None = None,
        block_size: int | None = None,
    ):
        if rows < 1 or cols < 1:
            raise DimensionError(f"parity-check dimensions must be positive, got {rows}x{cols}")
        if len(col_supports) != cols:
            raise DimensionError(f"{len(col_supports)} column supports for {cols} columns")
        supports = []
        for c, sup in enumerate(col_supports):
            sup = tuple(sorted(int(r) for r in sup))
            if len(set(sup)) != len(sup):
                raise DimensionError(f"column {c} repeats a row index")
            if sup and not (0 <= sup[0] and sup[-1] < rows):
                raise DimensionError(f"column {c} has a row index outside [0, {rows})")
            supports.append(sup)
        self.rows = rows
        self.cols = cols
        self.col_supports: tuple[tuple[int, ...], ...] = tuple(supports)
        self.block_meta = dict(block_meta or {})
        self.block_size = block_size
        lengths = np.fromiter((len(s) for s in supports), dtype=np.int64, count=cols)
        self._col_of = np.repeat(np.arange(cols, dtype=np.int64), lengths)
        self._row_of = np.fromiter((r for s in supports for r in s), dtype=np.int64, count=int(lengths.sum()))
        self.col_weights = lengths
        self.row_weights = np.bincount(self._row_of, minlength=rows)

    @property
    def row_supports(self) -> tuple[tuple[int, ...], ...]:
        order = np.lexsort((self._col_of, self._row_of))
        cols_sorted = self._col_of[order].tolist()
        bounds = np.concatenate([[0], np.cumsum(self.row_weights)]).tolist()
        return tuple(tuple(cols_sorted[bounds[r]:bounds[r + 1]]) for r in range(self.rows))

    @property
    def nnz(self) -> int:
        return int(self._row_of.shape[0])

    @classmethod
    def from_dense(cls, dense) -> "ParityCheck":
        arr = np.asarray(dense) % 2
        if arr.ndim != 2:
            raise DimensionError("dense parity-check matrix must be 2-D")
        return cls(arr.shape[0], arr.shape[1], [np.flatnonzero(arr[:, c]).tolist() for c in range(arr.shape[1])])

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.int64)
        out[self._row_of, self._col_of] = 1
        return out

    def to_matrix(self) -> linalg.FieldMatrix:
        return linalg.FieldMatrix(self.to_dense(), 2)

    def block(self, s: int, i: int) -> np.ndarray:
        """Dense copy of block ``(s, i)`` for block-structured matrices."""
        if self.block_size is None:
            raise InvalidParameterError("matrix carries no block structure")
        b = self.block_size
        return self.to_dense()[s * b:(s + 1) * b, i * b:(i + 1) * b]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ParityCheck):
            return NotImplemented
        return (self.rows, self.cols, self.col_supports) == (other.rows, other.cols, other.col_supports)

    __hash__ = None

    def __repr__(self) -> str:
        return f"ParityCheck({self.rows}x{self.cols}, nnz={self.nnz})"


def _block_columns(h: AlgebraElement) -> np.ndarray:
    """Row supports of every column of ``M(h)``; shape ``(n, wt(h))``."""
    G, n = h.group, h.group.order
    sup = np.flatnonzero(h.coeffs)
    rows = G.mul_idx(sup[:, None], np.arange(n, dtype=np.int64)[None, :])
    return np.sort(np.asarray(rows).reshape(sup.size, n), axis=0).T


def _from_grid(grid: list[list[AlgebraElement]]) -> ParityCheck:
    n = grid[0][0].group.order
    nrows, ncols = len(grid), len(grid[0])
    col_supports: list[list[int]] = []
    meta = {}
    for i in range(ncols):
        per_block = [_block_columns(grid[s][i]) + s * n for s in range(nrows)]
        stacked = np.hstack(per_block)
        col_supports.extend(stacked.tolist())
        for s in range(nrows):
            meta[(s, i)] = repr(grid[s][i])
    return ParityCheck(n * nrows, n * ncols, col_supports, block_meta=meta, block_size=n)


def _require_binary(elements: Sequence[AlgebraElement]) -> None:
    first = elements[0]
    for h in elements:
        if h.group != first.group or h.field != first.field:
            raise IncompatibleOperandsError("all blocks must share group and field")
    if first.p != 2:
        raise UnsupportedFieldError(f"parity-check matrices are binary; got F_{first.p}")


def mdpc_parity(h_list: Sequence[AlgebraElement]) -> ParityCheck:
    """``[M(h_1) | M(h_2) | ...]``."""
    if not h_list:
        raise InvalidParameterError("need at least one block")
    _require_binary(h_list)
    return _from_grid([list(h_list)])


def tanner_parity(a: AlgebraElement, b: AlgebraElement, include_zero_exponent: bool = True) -> ParityCheck:
    """Block grid with block ``(s, i) = M(a^i b^s)``.

    ``s`` runs over ``0..o(b)-1`` and ``i`` over ``0..o(a)-1``, or
    ``1..o(a)-1`` when ``include_zero_exponent`` is false.
    """
    _require_binary([a, b])
    for name, u in (("a", a), ("b", b)):
        if not is_unit(u):
            raise NotAUnitError(f"{name} = {u!r} is not a unit")
    k, j = unit_order(a), unit_order(b)
    exponents = range(0 if include_zero_exponent else 1, k)
    if not exponents:
        raise InvalidParameterError("a has order 1, so excluding a^0 leaves no block columns")
    a_pows = [a ** i for i in exponents]
    b_pows = [b ** s for s in range(j)]
    return _from_grid([[ai * bs for ai in a_pows] for bs in b_pows])


def multiplicative_order(a: int, p: int) -> int:
    a %= p
    d, cur = 1, a
    while cur != 1:
        cur = cur * a % p
        d += 1
    return d


def tanner_exponents(p: int, a: int, b: int) -> list[list[int]]:
    """Shift table ``a^i b^s mod p``, one row per power of ``b``."""
    if not is_prime(p):
        raise InvalidParameterError(f"p = {p} is not prime")
    if a % p == 0 or b % p == 0:
        raise InvalidParameterError("a and b must be nonzero modulo p")
    k, j = multiplicative_order(a, p), multiplicative_order(b, p)
    return [[pow(a, i, p) * pow(b, s, p) % p for i in range(k)] for s in range(j)]


def tanner_classic(p: int, a: int, b: int) -> ParityCheck:
    """Tanner's array code over ``F_2[C_p]``: block ``(s, i) = M(x^(a^i b^s mod p))``."""
    table = tanner_exponents(p, a, b)
    G = cyclic_group(p)
    grid = [[AlgebraElement.basis(G, 2, e) for e in row] for row in table]
    return _from_grid(grid)


def gf2_rank(H: ParityCheck) -> int:
    return linalg.rank(H.to_matrix())


def syndrome(H: ParityCheck, e) -> np.ndarray:
    """``H e`` over F_2."""
    e = np.asarray(e, dtype=np.int64).reshape(-1)
    if e.shape[0] != H.cols:
        raise DimensionError(f"error vector has length {e.shape[0]}, H has {H.cols} columns")
    hit = (e[H._col_of] & 1).astype(bool)
    return np.bincount(H._row_of[hit], minlength=H.rows) % 2


@dataclass(frozen=True)
class DecodeResult:
    error_vector: np.ndarray | None
    iterations: int
    syndrome_weight_trace: tuple[int, ...]

    @property
    def success(self) -> bool:
        return self.error_vector is not None


def bitflip_decode(
    H: ParityCheck,
    s,
    t: int | None = None,
    max_iters: int = DEFAULT_MAX_ITERS,
    threshold_rule: str = "max",
) -> DecodeResult:
    """Hard-decision bit flipping.

    Each iteration counts, per column, the unsatisfied checks in its support
    and flips the columns selected by ``threshold_rule``: ``"max"`` flips
    every column attaining the maximum count, ``"majority"`` flips columns
    whose count is at least ``ceil((col_weight + 1) / 2)``. ``t`` is only a
    hint; success means the residual syndrome is exactly zero.
    """
    if threshold_rule not in THRESHOLD_RULES:
        raise InvalidParameterError(f"unknown threshold rule {threshold_rule!r}")
    target = np.asarray(s, dtype=np.int64).reshape(-1) % 2
    if target.shape[0] != H.rows:
        raise DimensionError(f"syndrome has length {target.shape[0]}, H has {H.rows} rows")
    residual = target.copy()
    e = np.zeros(H.cols, dtype=np.int64)
    majority = (H.col_weights + 2) // 2
    trace = [int(residual.sum())]
    iterations = 0
    while trace[-1] and iterations < max_iters:
        iterations += 1
        counters = np.bincount(H._col_of, weights=residual[H._row_of], minlength=H.cols)
        if threshold_rule == "max":
            flip = counters == counters.max()
            flip &= counters > 0
        else:
            flip = counters >= majority
        if not flip.any():
            break
        e[flip] ^= 1
        touched = flip[H._col_of]
        residual = (residual + np.bincount(H._row_of[touched], minlength=H.rows)) % 2
        trace.append(int(residual.sum()))
    if trace[-1] or not np.array_equal(syndrome(H, e), target):
        return DecodeResult(None, iterations, tuple(trace))
    return DecodeResult(e, iterations, tuple(trace))


def alist_export(H: ParityCheck) -> str:
    """Alist text: dimensions, max weights, weight lists, then 1-based zero-padded supports."""
    col_w, row_w = H.col_weights.tolist(), H.row_weights.tolist()
    max_c, max_r = max(col_w), max(row_w)
    lines = [f"{H.cols} {H.rows}", f"{max_c} {max_r}", " ".join(map(str, col_w)), " ".join(map(str, row_w))]
    for sup in H.col_supports:
        lines.append(" ".join(str(v) for v in [r + 1 for r in sup] + [0] * (max_c - len(sup))))
    for sup in H.row_supports:
        lines.append(" ".join(str(v) for v in [c + 1 for c in sup] + [0] * (max_r - len(sup))))
    return "\n".join(lines) + "\n"


def _ints(line: str, lineno: int, count: int | None = None) -> list[int]:
    try:
        values = [int(tok) for tok in line.split()]
    except ValueError:
        raise ParseError(f"non-integer token in {line!r}", line=lineno) from None
    if count is not None and len(values) != count:
        raise ParseError(f"expected {count} integers, found {len(values)}", line=lineno)
    return values


def alist_import(text: str) -> ParityCheck:
    lines = text.splitlines()
    # blank lines are tolerated only at the end
    while lines and not lines[-1].strip():
        lines.pop()

    def line(k: int) -> str:
        if k >= len(lines):
            raise ParseError("unexpected end of file", line=k + 1)
        return lines[k]

    cols, rows = _ints(line(0), 1, 2)
    if rows < 1 or cols < 1:
        raise ParseError("dimensions must be positive", line=1)
    max_c, max_r = _ints(line(1), 2, 2)
    col_w = _ints(line(2), 3, cols)
    row_w = _ints(line(3), 4, rows)
    if max(col_w) != max_c or max(row_w) != max_r:
        raise ParseError("declared maximum weights disagree with weight lists", line=2)
    col_supports = []
    for c in range(cols):
        k = 4 + c
        entries = _ints(line(k), k + 1)
        sup = [v - 1 for v in entries if v != 0]
        if len(sup) != col_w[c] or any(not 0 <= r < rows for r in sup):
            raise ParseError(f"column {c + 1} support inconsistent with its weight", line=k + 1)
        col_supports.append(sup)
    H = ParityCheck(rows, cols, col_supports)
    for r, expected in enumerate(H.row_supports):
        k = 4 + cols + r
        entries = _ints(line(k), k + 1)
        sup = tuple(sorted(v - 1 for v in entries if v != 0))
        if sup != expected:
            raise ParseError(f"row {r + 1} support disagrees with the column lists", line=k + 1)
    if len(lines) > 4 + cols + rows:
        raise ParseError("trailing content after row lists", line=5 + cols + rows)
    return H


def code_dimension(H: ParityCheck) -> int:
    return H.cols - gf2_rank(H)

