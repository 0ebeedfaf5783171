"""Golden checks against the worked examples, used by ``galg selftest``."""

from __future__ import annotations

from typing import Callable

import numpy as np

from galg import codes, linalg
from galg.algebra import AlgebraElement, is_unit
from galg.groups import cyclic_group, dihedral_group, product_group
from galg.matrep import abelian_decompose, decomposition_to_matrix, representation_matrix, shift_matrix
from galg.mdpc import derive_params

# 1-based coefficient indices of each entry; D_4 uses b_i = coefficient of g_{4+i}
Z2xZ4_MATRIX = [
    [1, 4, 3, 2, 5, 8, 7, 6],
    [2, 1, 4, 3, 6, 5, 8, 7],
    [3, 2, 1, 4, 7, 6, 5, 8],
    [4, 3, 2, 1, 8, 7, 6, 5],
    [5, 8, 7, 6, 1, 4, 3, 2],
    [6, 5, 8, 7, 2, 1, 4, 3],
    [7, 6, 5, 8, 3, 2, 1, 4],
    [8, 7, 6, 5, 4, 3, 2, 1],
]

D4_MATRIX = [
    [1, 4, 3, 2, 5, 6, 7, 8],
    [2, 1, 4, 3, 6, 7, 8, 5],
    [3, 2, 1, 4, 7, 8, 5, 6],
    [4, 3, 2, 1, 8, 5, 6, 7],
    [5, 6, 7, 8, 1, 4, 3, 2],
    [6, 7, 8, 5, 2, 1, 4, 3],
    [7, 8, 5, 6, 3, 2, 1, 4],
    [8, 5, 6, 7, 4, 3, 2, 1],
]

TANNER_EXPONENTS = [[1, 2, 4, 8, 16], [5, 10, 20, 9, 18], [25, 19, 7, 14, 28]]


def symbolic_matches(group, golden) -> bool:
    """``M(g_k)`` is the indicator of the golden entries equal to ``k``, for every ``k``."""
    golden = np.asarray(golden)
    for k in range(group.order):
        M = representation_matrix(AlgebraElement.basis(group, 2, k)).data
        if not np.array_equal(M, (golden == k + 1).astype(np.int64)):
            return False
    return True


def _example_z2xz4() -> bool:
    return symbolic_matches(product_group(cyclic_group(2), cyclic_group(4)), Z2xZ4_MATRIX)


def _example_d4() -> bool:
    G = dihedral_group(4)
    labels_ok = G.labels == ("1", "x", "x^2", "x^3", "y", "xy", "x^2y", "x^3y")
    return labels_ok and symbolic_matches(G, D4_MATRIX)


def _example_decomposition() -> bool:
    G = product_group(cyclic_group(2), cyclic_group(4))
    printed_shifts = {
        1: [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
        2: [[0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]],
        3: [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]],
        4: [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0]],
    }
    if any(shift_matrix(4, i).data.tolist() != m for i, m in printed_shifts.items()):
        return False
    for k in range(8):
        d = abelian_decompose(AlgebraElement.basis(G, 2, k))
        seed = (1, 0) if k < 4 else (0, 1)
        if dict(d.blocks) != {(k % 4 + 1,): seed}:
            return False
    f = AlgebraElement(G, 3, [1, 2, 0, 1, 1, 0, 2, 2])
    return decomposition_to_matrix(abelian_decompose(f)) == representation_matrix(f)


def _example_non_unit() -> bool:
    G = cyclic_group(3)
    f = AlgebraElement.from_support(G, 2, [0, 1, 2])
    return f.weight == 3 and not is_unit(f)


def _tanner() -> bool:
    H = codes.tanner_classic(31, 2, 5)
    exps = [[int(np.flatnonzero(H.block(s, i)[:, 0])[0]) for i in range(5)] for s in range(3)]
    return exps == TANNER_EXPONENTS and (H.rows, H.cols) == (93, 155) and codes.gf2_rank(H) == 91


def _params() -> bool:
    p = derive_params("cyclic:1013")
    return (p.w, p.t) == (23, 45)


def _homomorphism_sample() -> bool:
    rng = np.random.default_rng(0)
    G = dihedral_group(4)
    for _ in range(20):
        f = AlgebraElement(G, 3, rng.integers(0, 3, 8))
        g = AlgebraElement(G, 3, rng.integers(0, 3, 8))
        if representation_matrix(f * g) != linalg.matrix_mul(representation_matrix(f), representation_matrix(g)):
            return False
    return True


CHECKS: list[tuple[str, Callable[[], bool]]] = [
    ("repmat-z2xz4", _example_z2xz4),
    ("repmat-d4", _example_d4),
    ("kronecker-decomposition", _example_decomposition),
    ("odd-weight-non-unit", _example_non_unit),
    ("tanner-155-64", _tanner),
    ("mdpc-params-1013", _params),
    ("repmat-multiplicative", _homomorphism_sample),
]


def run_selftest() -> list[tuple[str, bool]]:
    return [(name, bool(check())) for name, check in CHECKS]
