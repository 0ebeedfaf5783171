"""Matrix representation of group-algebra elements and its Kronecker structure.

Column ``j`` of ``representation_matrix(f)`` holds the coordinates of
``f * g_j``, so entry ``(i, j)`` is the coefficient of ``g_i`` in ``f g_j``.
For ``C_n`` this is the circulant matrix with first column ``f``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

import numpy as np

from galg.algebra import AlgebraElement
from galg.errors import DimensionError, IncompatibleOperandsError, ParseError, UnsupportedStructureError
from galg.groups import product_group
from galg.linalg import FieldMatrix, kronecker, zeros


def representation_matrix(f: AlgebraElement) -> FieldMatrix:
    """The ``n x n`` matrix of left multiplication by ``f`` in the group's basis."""
    G, n = f.group, f.group.order
    idx = np.arange(n, dtype=np.int64)
    M = np.zeros((n, n), dtype=np.int64)
    for i in np.flatnonzero(f.coeffs):
        M[G.mul_idx(i, idx), idx] += f.coeffs[i]
    return FieldMatrix(M, f.p)


def circulant(coeffs: Sequence[int], p: int = 2) -> FieldMatrix:
    """``C(a_0 + ... + a_{n-1} x^{n-1})``: entry ``(r, c)`` is ``a_{(r - c) mod n}``."""
    a = np.asarray(coeffs, dtype=np.int64).reshape(-1)
    n = a.shape[0]
    if n == 0:
        raise DimensionError("circulant needs at least one coefficient")
    r = np.arange(n)
    return FieldMatrix(a[(r[:, None] - r[None, :]) % n], p)


def shift_matrix(n: int, i: int, p: int = 2) -> FieldMatrix:
    """``P_{n,i} = C(x^(i-1))`` for ``1 <= i <= n``."""
    if not 1 <= i <= n:
        raise IndexError(f"shift index {i} outside [1, {n}]")
    seed = np.zeros(n, dtype=np.int64)
    seed[i - 1] = 1
    return circulant(seed, p)


def tensor(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """``a (x) b`` as an element of ``k[G x H]`` under the product ordering."""
    if a.field != b.field:
        raise IncompatibleOperandsError("tensor factors must share the field")
    G = product_group(a.group, b.group)
    return AlgebraElement(G, a.field, np.outer(a.coeffs, b.coeffs).reshape(-1))


@dataclass(frozen=True)
class KroneckerDecomposition:
    """``M(f) = sum C(seed) (x) P_{a_2,i_2} (x) ... (x) P_{a_k,i_k}``.

    ``blocks`` maps 1-based multi-indices ``(i_2, ..., i_k)`` to length-``a_1``
    circulant seeds; multi-indices with an all-zero seed are omitted.
    """

    factors: tuple[int, ...]
    p: int
    blocks: Mapping[tuple[int, ...], tuple[int, ...]] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return int(np.prod(self.factors))

    def summands(self) -> Iterator[FieldMatrix]:
        for index, seed in sorted(self.blocks.items()):
            term = circulant(seed, self.p)
            for a, i in zip(self.factors[1:], index):
                term = kronecker(term, shift_matrix(a, i, self.p))
            yield term

    def to_dict(self) -> dict:
        return {
            "factors": list(self.factors),
            "p": self.p,
            "blocks": [
                {"index": list(index), "seed": list(seed)} for index, seed in sorted(self.blocks.items())
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "KroneckerDecomposition":
        try:
            factors = tuple(int(a) for a in data["factors"])
            p = int(data["p"])
            raw = data["blocks"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"decomposition JSON needs 'factors', 'p' and 'blocks': {exc}") from None
        if not factors or any(a < 1 for a in factors):
            raise ParseError("factors must be positive integers")
        blocks = {}
        for entry in raw:
            index = tuple(int(i) for i in entry["index"])
            seed = tuple(int(v) % p for v in entry["seed"])
            if len(index) != len(factors) - 1 or any(not 1 <= i <= a for i, a in zip(index, factors[1:])):
                raise ParseError(f"block index {list(index)} does not fit factors {list(factors)}")
            if len(seed) != factors[0]:
                raise ParseError(f"seed length {len(seed)} != a_1 = {factors[0]}")
            if index in blocks:
                raise ParseError(f"duplicate block index {list(index)}")
            if any(seed):
                blocks[index] = seed
        return cls(factors, p, blocks)


def abelian_decompose(f: AlgebraElement, check_chain: bool = False) -> KroneckerDecomposition:
    """Regroup ``f`` over ``C_{a_1} x ... x C_{a_k}`` into circulant-times-shift blocks.

    The group must be a product of cyclic groups in the canonical product
    ordering. With ``check_chain`` the factors must also form an
    invariant-factor chain ``a_1 | a_2 | ... | a_k``.
    """
    factors = f.group.cyclic_factors
    if factors is None:
        raise UnsupportedStructureError(
            f"{f.group.spec} is not presented as a product of cyclic groups"
        )
    if check_chain and any(b % a for a, b in zip(factors, factors[1:])):
        raise UnsupportedStructureError(f"factors {factors} are not an invariant-factor chain")
    lam = f.coeffs.reshape(factors)
    blocks = {}
    for index in itertools.product(*(range(a) for a in factors[1:])):
        seed = lam[(slice(None),) + index]
        if seed.any():
            blocks[tuple(i + 1 for i in index)] = tuple(int(v) for v in seed)
    return KroneckerDecomposition(tuple(factors), f.p, blocks)


def decomposition_to_matrix(d: KroneckerDecomposition) -> FieldMatrix:
    out = zeros(d.size, d.size, d.p)
    for term in d.summands():
        out = out + term
    return out


def summands_disjoint(d: KroneckerDecomposition) -> bool:
    """Whether the materialized summands have pairwise disjoint nonzero positions."""
    seen = np.zeros((d.size, d.size), dtype=bool)
    for term in d.summands():
        mask = term.data != 0
        if (seen & mask).any():
            return False
        seen |= mask
    return True
