"""Finite groups with a fixed element ordering, plus group homomorphisms.

Elements are identified with indices ``0..n-1`` and index 0 is always the
identity. The ordering is part of the group object: every matrix built
downstream is expressed in this basis.

Cyclic, dihedral and product groups multiply by index arithmetic, so large
groups never need a Cayley table. Custom groups are given by an explicit
table that is validated on construction.
"""

from __future__ import annotations

import functools
import itertools
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from galg.errors import (
    GroupSizeError,
    GroupSpecError,
    InvalidGroupError,
    InvalidOrderError,
    MalformedHomError,
)

DEFAULT_MAX_GROUP_ORDER = 2**20
# Cayley tables above this order are never materialized (n^2 entries).
TABLE_CAP = 2048
# Exhaustive associativity check up to this order, sampled above it.
EXHAUSTIVE_ASSOC_ORDER = 64

_GENERATOR_NAMES = "xyzuvw"


def max_group_order() -> int:
    """Size cap for constructed groups; ``GALG_MAX_GROUP_ORDER`` overrides it."""
    value = os.environ.get("GALG_MAX_GROUP_ORDER")
    if value is None:
        return DEFAULT_MAX_GROUP_ORDER
    try:
        return int(value)
    except ValueError as exc:
        raise GroupSizeError(f"GALG_MAX_GROUP_ORDER is not an integer: {value!r}") from exc


def _power_label(name: str, k: int) -> str:
    if k == 0:
        return ""
    if k == 1:
        return name
    return f"{name}^{k}"


class FiniteGroup:
    """A finite group on the indices ``0..order-1`` with identity 0.

    Subclasses implement :meth:`mul_idx` and :meth:`inv_idx`, both of which
    broadcast over numpy integer arrays.
    """

    order: int
    spec: str

    def mul_idx(self, a, b):
        raise NotImplementedError

    def inv_idx(self, a):
        raise NotImplementedError

    @property
    def structure_tag(self) -> tuple:
        raise NotImplementedError

    @property
    def identity(self) -> int:
        return 0

    def mul(self, i: int, j: int) -> int:
        return int(self.mul_idx(np.int64(i), np.int64(j)))

    def inv(self, i: int) -> int:
        return int(self.inv_idx(np.int64(i)))

    def elements(self) -> range:
        return range(self.order)

    def power(self, i: int, d: int) -> int:
        out = 0
        for _ in range(d):
            out = self.mul(out, i)
        return out

    @functools.cached_property
    def labels(self) -> tuple[str, ...]:
        return tuple(str(i) for i in range(self.order))

    def index(self, label: str) -> int:
        """Index of the element printed as ``label``."""
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"no element labelled {label!r} in {self.spec}") from None

    @functools.cached_property
    def mul_table(self) -> np.ndarray:
        if self.order > TABLE_CAP:
            raise GroupSizeError(
                f"refusing to materialize a {self.order}x{self.order} Cayley table "
                f"(cap {TABLE_CAP})"
            )
        idx = np.arange(self.order, dtype=np.int64)
        table = self.mul_idx(idx[:, None], idx[None, :]).astype(np.int64)
        table.setflags(write=False)
        return table

    @functools.cached_property
    def inv_table(self) -> np.ndarray:
        table = self.inv_idx(np.arange(self.order, dtype=np.int64)).astype(np.int64)
        table.setflags(write=False)
        return table

    @property
    def cyclic_factors(self) -> tuple[int, ...] | None:
        """Orders ``(a_1, ..., a_k)`` when the group is a canonical product of cyclics."""
        return None

    @functools.cached_property
    def is_abelian(self) -> bool:
        idx = np.arange(self.order, dtype=np.int64)
        for i in range(self.order):
            if not np.array_equal(self.mul_idx(i, idx), self.mul_idx(idx, i)):
                return False
        return True

    def _key(self) -> tuple:
        return (type(self).__name__, self.spec)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.spec!r}, order={self.order})"


class CyclicGroup(FiniteGroup):
    """``C_n = <x>`` ordered as ``1, x, ..., x^(n-1)``."""

    def __init__(self, n: int):
        self.order = n
        self.spec = f"cyclic:{n}"

    def mul_idx(self, a, b):
        return (a + b) % self.order

    def inv_idx(self, a):
        return (-a) % self.order

    @property
    def structure_tag(self) -> tuple:
        return ("cyclic", self.order)

    @property
    def cyclic_factors(self) -> tuple[int, ...]:
        return (self.order,)

    @functools.cached_property
    def labels(self) -> tuple[str, ...]:
        return tuple(_power_label("x", k) or "1" for k in range(self.order))

    @property
    def is_abelian(self) -> bool:
        return True


class DihedralGroup(FiniteGroup):
    """Dihedral group of order ``2m`` with ``x^m = y^2 = (xy)^2 = 1``.

    Ordered as ``1, x, ..., x^(m-1), y, xy, ..., x^(m-1)y``; index ``s*m + r``
    is the element ``x^r y^s``.
    """

    def __init__(self, m: int):
        self.m = m
        self.order = 2 * m
        self.spec = f"dihedral:{m}"

    def mul_idx(self, a, b):
        m = self.m
        s1, r1 = np.divmod(a, m)
        s2, r2 = np.divmod(b, m)
        # y x^r = x^-r y
        r = (r1 + np.where(s1 == 1, -r2, r2)) % m
        return ((s1 + s2) % 2) * m + r

    def inv_idx(self, a):
        s, r = np.divmod(a, self.m)
        return np.where(s == 1, a, (-r) % self.m)

    @property
    def structure_tag(self) -> tuple:
        return ("dihedral", self.m)

    @functools.cached_property
    def labels(self) -> tuple[str, ...]:
        rot = [_power_label("x", r) for r in range(self.m)]
        return tuple([r or "1" for r in rot] + [r + "y" for r in rot])


class ProductGroup(FiniteGroup):
    """Direct product ``G x H``; ``(g_i, h_j)`` has index ``i*|H| + j``."""

    def __init__(self, left: FiniteGroup, right: FiniteGroup):
        self.left = left
        self.right = right
        self.order = left.order * right.order
        self.spec = f"product:{_wrap(left.spec)},{_wrap(right.spec)}"

    def mul_idx(self, a, b):
        q = self.right.order
        ag, ah = np.divmod(a, q)
        bg, bh = np.divmod(b, q)
        return self.left.mul_idx(ag, bg) * q + self.right.mul_idx(ah, bh)

    def inv_idx(self, a):
        q = self.right.order
        ag, ah = np.divmod(a, q)
        return self.left.inv_idx(ag) * q + self.right.inv_idx(ah)

    @property
    def structure_tag(self) -> tuple:
        return ("product", (self.left, self.right))

    @property
    def cyclic_factors(self) -> tuple[int, ...] | None:
        lf, rf = self.left.cyclic_factors, self.right.cyclic_factors
        if lf is None or rf is None:
            return None
        # C_1 factors carry no structure
        return tuple(a for a in lf + rf if a > 1) or (1,)

    @functools.cached_property
    def labels(self) -> tuple[str, ...]:
        factors = self.cyclic_factors
        if factors is not None and len(factors) <= len(_GENERATOR_NAMES):
            names = _GENERATOR_NAMES
            out = []
            for digits in itertools.product(*(range(a) for a in factors)):
                text = "".join(_power_label(names[k], d) for k, d in enumerate(digits))
                out.append(text or "1")
            return tuple(out)
        return tuple(f"({g},{h})" for g in self.left.labels for h in self.right.labels)

    @functools.cached_property
    def is_abelian(self) -> bool:
        return self.left.is_abelian and self.right.is_abelian


class TableGroup(FiniteGroup):
    """Group given by an explicit Cayley table; validated on construction."""

    def __init__(self, table, spec: str | None = None):
        table = np.array(table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise InvalidGroupError(f"Cayley table must be a non-empty square, got shape {table.shape}")
        self.order = table.shape[0]
        if self.order > max_group_order():
            raise GroupSizeError(f"group order {self.order} exceeds cap {max_group_order()}")
        table.setflags(write=False)
        self._table = table
        inv = np.full(self.order, -1, dtype=np.int64)
        rows, cols = np.nonzero(table == 0)
        inv[rows] = cols
        self._inv = inv
        self.spec = spec if spec is not None else "table:<inline>"
        validate_group(self)

    def mul_idx(self, a, b):
        return self._table[a, b]

    def inv_idx(self, a):
        return self._inv[a]

    @property
    def mul_table(self) -> np.ndarray:
        return self._table

    @property
    def structure_tag(self) -> tuple:
        return ("custom",)

    def _key(self) -> tuple:
        return ("TableGroup", self._table.tobytes())


def _wrap(spec: str) -> str:
    return f"({spec})" if spec.startswith("product:") else spec


def cyclic_group(n: int) -> CyclicGroup:
    """The cyclic group of order ``n``."""
    if n < 1:
        raise InvalidOrderError(f"cyclic group order must be >= 1, got {n}")
    return CyclicGroup(int(n))


def dihedral_group(m: int) -> DihedralGroup:
    """The dihedral group of order ``2m``."""
    if m < 1:
        raise InvalidOrderError(f"dihedral parameter must be >= 1, got {m}")
    if 2 * m > max_group_order():
        raise GroupSizeError(f"group order {2 * m} exceeds cap {max_group_order()}")
    return DihedralGroup(int(m))


def product_group(*groups: FiniteGroup) -> FiniteGroup:
    """Direct product, first factor slowest in the ordering.

    More than two factors are folded left to right, which yields the
    lexicographic ordering on tuples.
    """
    if not groups:
        raise InvalidOrderError("product_group needs at least one factor")
    out = groups[0]
    for g in groups[1:]:
        order = out.order * g.order
        if order > max_group_order():
            raise GroupSizeError(f"product order {order} exceeds cap {max_group_order()}")
        out = ProductGroup(out, g)
    return out


def element_order(G: FiniteGroup, i: int) -> int:
    """Smallest ``d >= 1`` with ``g_i^d = 1``."""
    if not 0 <= i < G.order:
        raise IndexError(f"element index {i} out of range for order {G.order}")
    d, cur = 1, i
    while cur != 0:
        cur = G.mul(cur, i)
        d += 1
    return d


def validate_group(G: FiniteGroup, rng: np.random.Generator | None = None, samples: int = 20000) -> None:
    """Raise :class:`InvalidGroupError` unless ``G`` satisfies the group axioms.

    Checks the Latin-square property, the identity at index 0, inverses, and
    associativity (exhaustive up to order 64, randomly sampled beyond).
    """
    n = G.order
    idx = np.arange(n, dtype=np.int64)
    table = G.mul_table
    if table.min() < 0 or table.max() >= n:
        raise InvalidGroupError("Cayley table entries out of range")
    if not (np.array_equal(table[0], idx) and np.array_equal(table[:, 0], idx)):
        raise InvalidGroupError("index 0 is not a two-sided identity")
    ref = np.sort(table, axis=1)
    if not (np.all(ref == idx) and np.all(np.sort(table, axis=0) == idx[:, None])):
        raise InvalidGroupError("Cayley table is not a Latin square")
    inv = G.inv_table
    if not (np.all(table[idx, inv] == 0) and np.all(table[inv, idx] == 0)):
        raise InvalidGroupError("inverse table inconsistent")
    if n <= EXHAUSTIVE_ASSOC_ORDER:
        a, b, c = np.meshgrid(idx, idx, idx, indexing="ij")
    else:
        rng = rng if rng is not None else np.random.default_rng(0)
        a, b, c = rng.integers(0, n, size=(3, samples))
    if not np.array_equal(table[table[a, b], c], table[a, table[b, c]]):
        raise InvalidGroupError("multiplication is not associative")


def load_table_file(path: str | os.PathLike) -> TableGroup:
    """Read a group from a file holding ``n`` and then ``n*n`` indices."""
    text = Path(path).read_text()
    try:
        values = [int(tok) for tok in text.split()]
    except ValueError as exc:
        raise GroupSpecError(f"{path}: non-integer token in Cayley table file") from exc
    if not values:
        raise GroupSpecError(f"{path}: empty Cayley table file")
    n = values[0]
    if n < 1 or len(values) != 1 + n * n:
        raise GroupSpecError(f"{path}: expected {n}*{n} table entries, got {len(values) - 1}")
    return TableGroup(np.array(values[1:]).reshape(n, n), spec=f"table:{path}")


def _split_top_level(text: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for pos, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise GroupSpecError(f"unbalanced parentheses in {text!r}")
        elif ch == "," and depth == 0:
            parts.append(text[start:pos])
            start = pos + 1
    if depth != 0:
        raise GroupSpecError(f"unbalanced parentheses in {text!r}")
    parts.append(text[start:])
    return parts


def _outer_parens(text: str) -> bool:
    if not (text.startswith("(") and text.endswith(")")):
        return False
    depth = 0
    for ch in text[:-1]:
        depth += ch == "("
        depth -= ch == ")"
        if depth == 0:
            return False
    return True


def parse_group_spec(text: str) -> FiniteGroup:
    """Build a group from ``cyclic:n``, ``dihedral:m``, ``product:a,b,...`` or ``table:path``.

    Nested products inside a product may be parenthesized, e.g.
    ``product:(product:cyclic:2,cyclic:3),cyclic:4``.
    """
    text = text.strip()
    while _outer_parens(text):
        text = text[1:-1].strip()
    kind, sep, rest = text.partition(":")
    if not sep:
        raise GroupSpecError(f"group spec {text!r} lacks a 'kind:' prefix")
    if kind in ("cyclic", "dihedral"):
        try:
            value = int(rest)
        except ValueError:
            raise GroupSpecError(f"bad integer in group spec {text!r}") from None
        return cyclic_group(value) if kind == "cyclic" else dihedral_group(value)
    if kind == "product":
        parts = [p for p in _split_top_level(rest)]
        if not parts or any(not p.strip() for p in parts):
            raise GroupSpecError(f"empty factor in group spec {text!r}")
        return product_group(*(parse_group_spec(p) for p in parts))
    if kind == "table":
        return load_table_file(rest)
    raise GroupSpecError(f"unknown group kind {kind!r}")


@dataclass(frozen=True)
class GroupHom:
    """A candidate homomorphism given by its table ``map[i] = index of psi(g_i)``."""

    domain: FiniteGroup
    codomain: FiniteGroup
    map: tuple[int, ...]

    def __init__(self, domain: FiniteGroup, codomain: FiniteGroup, map: Sequence[int]):
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "codomain", codomain)
        object.__setattr__(self, "map", tuple(int(v) for v in map))

    @property
    def is_injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    @classmethod
    def identity(cls, G: FiniteGroup) -> "GroupHom":
        return cls(G, G, range(G.order))


def check_hom(candidate: GroupHom) -> bool:
    """Exhaustively check the homomorphism law; size problems raise."""
    G, H, table = candidate.domain, candidate.codomain, candidate.map
    if len(table) != G.order:
        raise MalformedHomError(f"map has {len(table)} entries, domain has order {G.order}")
    if any(not 0 <= v < H.order for v in table):
        raise MalformedHomError("map entries out of codomain range")
    psi = np.asarray(table, dtype=np.int64)
    if psi[0] != 0:
        return False
    idx = np.arange(G.order, dtype=np.int64)
    for i in range(G.order):
        lhs = psi[G.mul_idx(i, idx)]
        rhs = H.mul_idx(psi[i], psi)
        if not np.array_equal(lhs, rhs):
            return False
    return True
