"""Group algebras k[G] over prime fields.

An element is a dense coefficient vector indexed by the group ordering:
``coeffs[i]`` is the coefficient of ``g_i``.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Mapping

import numpy as np

from galg import linalg
from galg.errors import (
    GalgError,
    IncompatibleOperandsError,
    MalformedHomError,
    NotAUnitError,
    NotInvertibleError,
    OddWeightRequiredError,
    OrderCapExceededError,
    ParseError,
    SamplingFailureError,
    WeightOutOfRangeError,
)
from galg.field import PrimeField, as_field
from galg.groups import CyclicGroup, FiniteGroup, GroupHom, check_hom, parse_group_spec

DEFAULT_MAX_ATTEMPTS = 1000
DEFAULT_ORDER_CAP = 10_000


class AlgebraElement:
    """Immutable element ``sum_i coeffs[i] * g_i`` of ``F_p[G]``."""

    __slots__ = ("group", "field", "coeffs")

    def __init__(self, group: FiniteGroup, field: PrimeField | int, coeffs):
        field = as_field(field)
        arr = np.array(coeffs, dtype=np.int64).reshape(-1)
        if arr.shape[0] != group.order:
            raise IncompatibleOperandsError(
                f"coefficient vector has length {arr.shape[0]}, group has order {group.order}"
            )
        arr %= field.p
        arr.setflags(write=False)
        self.group = group
        self.field = field
        self.coeffs = arr

    # construction helpers

    @classmethod
    def zero(cls, group: FiniteGroup, field: PrimeField | int = 2) -> "AlgebraElement":
        return cls(group, field, np.zeros(group.order, dtype=np.int64))

    @classmethod
    def one(cls, group: FiniteGroup, field: PrimeField | int = 2) -> "AlgebraElement":
        return cls.basis(group, field, 0)

    @classmethod
    def basis(cls, group: FiniteGroup, field: PrimeField | int, i: int) -> "AlgebraElement":
        """The group element ``g_i`` viewed in ``k[G]``."""
        coeffs = np.zeros(group.order, dtype=np.int64)
        coeffs[i] = 1
        return cls(group, field, coeffs)

    @classmethod
    def from_support(
        cls, group: FiniteGroup, field: PrimeField | int, support: Iterable
    ) -> "AlgebraElement":
        """Build from indices (coefficient 1) or ``(index, coeff)`` pairs."""
        coeffs = np.zeros(group.order, dtype=np.int64)
        for item in support:
            if isinstance(item, (list, tuple)):
                i, c = item
            else:
                i, c = item, 1
            if not 0 <= int(i) < group.order:
                raise IndexError(f"index {i} out of range for group of order {group.order}")
            coeffs[int(i)] += int(c)
        return cls(group, field, coeffs)

    @classmethod
    def from_terms(
        cls, group: FiniteGroup, field: PrimeField | int, terms: Mapping[str | int, int]
    ) -> "AlgebraElement":
        """Build from ``{label_or_index: coeff}``, e.g. ``{"1": 1, "x^3y": 1}``."""
        pairs = [(group.index(k) if isinstance(k, str) else k, c) for k, c in terms.items()]
        return cls.from_support(group, field, pairs)

    # queries

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.coeffs))

    @property
    def support(self) -> list[int]:
        return np.flatnonzero(self.coeffs).tolist()

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and np.count_nonzero(self.coeffs) == 1

    def _compatible(self, other: "AlgebraElement") -> None:
        if not isinstance(other, AlgebraElement):
            raise TypeError(f"expected AlgebraElement, got {type(other).__name__}")
        if other.field != self.field or other.group != self.group:
            raise IncompatibleOperandsError(
                f"operands live in different algebras: {self.field}[{self.group.spec}] "
                f"vs {other.field}[{other.group.spec}]"
            )

    # arithmetic

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        return add(self, other)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._compatible(other)
        return AlgebraElement(self.group, self.field, self.coeffs - other.coeffs)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.group, self.field, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return scale(self, int(other))
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, np.integer)):
            return scale(self, int(other))
        return NotImplemented

    def __pow__(self, d: int) -> "AlgebraElement":
        if d < 0:
            return invert(self) ** (-d)
        result = AlgebraElement.one(self.group, self.field)
        base = self
        while d:
            if d & 1:
                result = result * base
            base = base * base
            d >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return (
            self.field == other.field
            and self.group == other.group
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def __hash__(self) -> int:
        return hash((self.field.p, self.group, self.coeffs.tobytes()))

    def __repr__(self) -> str:
        if self.is_zero():
            return "0"
        labels = self.group.labels
        terms = []
        for i in self.support:
            c = int(self.coeffs[i])
            terms.append(labels[i] if c == 1 else f"{c}*{labels[i]}")
        return " + ".join(terms)

    # serialization

    def to_dict(self) -> dict:
        return {
            "group": self.group.spec,
            "p": self.p,
            "support": [[i, int(self.coeffs[i])] for i in self.support],
        }

    @classmethod
    def from_dict(cls, data: Mapping, group: FiniteGroup | None = None) -> "AlgebraElement":
        try:
            spec, p, support = data["group"], int(data["p"]), data["support"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"element JSON needs 'group', 'p' and 'support': {exc}") from None
        if group is None:
            group = parse_group_spec(spec)
        elif group.spec != spec:
            raise IncompatibleOperandsError(f"element declares group {spec!r}, expected {group.spec!r}")
        pairs = []
        last = -1
        for item in support:
            if not isinstance(item, (list, tuple)) or len(item) != 2:
                raise ParseError(f"support entries must be [index, coeff] pairs, got {item!r}")
            i, c = int(item[0]), int(item[1])
            if i <= last:
                raise ParseError("support indices must be strictly ascending")
            last = i
            pairs.append((i, c))
        return cls.from_support(group, p, pairs)


def _check_pair(f: AlgebraElement, g: AlgebraElement) -> None:
    if not isinstance(f, AlgebraElement):
        raise TypeError(f"expected AlgebraElement, got {type(f).__name__}")
    f._compatible(g)


def add(f: AlgebraElement, g: AlgebraElement) -> AlgebraElement:
    _check_pair(f, g)
    return AlgebraElement(f.group, f.field, f.coeffs + g.coeffs)


def scale(f: AlgebraElement, lam: int) -> AlgebraElement:
    return AlgebraElement(f.group, f.field, f.coeffs * (lam % f.p))


def mul(f: AlgebraElement, g: AlgebraElement) -> AlgebraElement:
    """Product ``f g``; loops over the support of the sparser operand."""
    _check_pair(f, g)
    G, n = f.group, f.group.order
    idx = np.arange(n, dtype=np.int64)
    out = np.zeros(n, dtype=np.int64)
    fs, gs = np.flatnonzero(f.coeffs), np.flatnonzero(g.coeffs)
    if fs.size <= gs.size:
        for i in fs:
            # g_i g_j for all j is a permutation of the indices, so += never collides
            out[G.mul_idx(i, idx)] += f.coeffs[i] * g.coeffs
    else:
        for j in gs:
            out[G.mul_idx(idx, j)] += f.coeffs * g.coeffs[j]
    return AlgebraElement(G, f.field, out)


def weight(f: AlgebraElement) -> int:
    return f.weight


def support(f: AlgebraElement) -> list[int]:
    return f.support


# F_2[x]/(x^n - 1) fast path, polynomials packed into Python ints (bit i = coeff of x^i)


def _to_poly(f: AlgebraElement) -> int:
    packed = np.packbits(f.coeffs.astype(np.uint8), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def _from_poly(poly: int, f: AlgebraElement) -> AlgebraElement:
    n = f.group.order
    raw = np.frombuffer(poly.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return AlgebraElement(f.group, f.field, np.unpackbits(raw, bitorder="little", count=n))


def _clmul(a: int, b: int) -> int:
    if a.bit_count() > b.bit_count():
        a, b = b, a
    out = 0
    while a:
        low = a & -a
        out ^= b << (low.bit_length() - 1)
        a ^= low
    return out


def _poly_divmod(a: int, b: int) -> tuple[int, int]:
    db = b.bit_length()
    q = 0
    while a.bit_length() >= db:
        s = a.bit_length() - db
        q ^= 1 << s
        a ^= b << s
    return q, a


def _poly_mod(a: int, m: int) -> int:
    return _poly_divmod(a, m)[1]


def _poly_egcd(f: int, m: int) -> tuple[int, int]:
    """Return ``(gcd(f, m), s)`` with ``s * f = gcd mod m``."""
    r0, r1 = m, _poly_mod(f, m)
    s0, s1 = 0, 1
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 ^ _clmul(q, s1)
    return r0, _poly_mod(s0, m)


def _uses_euclid(f: AlgebraElement, method: str) -> bool:
    if method not in ("auto", "generic", "euclid"):
        raise ValueError(f"unknown method {method!r}")
    fast_ok = isinstance(f.group, CyclicGroup) and f.p == 2
    if method == "euclid" and not fast_ok:
        raise IncompatibleOperandsError("the Euclid path needs F_2[C_n]")
    return method == "euclid" or (method == "auto" and fast_ok)


def is_unit(f: AlgebraElement, method: str = "auto") -> bool:
    """Whether ``f`` is invertible, i.e. its representation matrix has full rank."""
    if _uses_euclid(f, method):
        n = f.group.order
        g, _ = _poly_egcd(_to_poly(f), (1 << n) | 1)
        return g == 1
    from galg.matrep import representation_matrix

    return linalg.rank(representation_matrix(f)) == f.group.order


def invert(f: AlgebraElement, method: str = "auto") -> AlgebraElement:
    """Two-sided inverse of a unit.

    Non-units raise :class:`NotInvertibleError` whose ``witness`` is a
    nonzero ``h`` with ``f*h = 0``.
    """
    if _uses_euclid(f, method):
        n = f.group.order
        m = (1 << n) | 1
        g, s = _poly_egcd(_to_poly(f), m)
        if g != 1:
            witness = _from_poly(_poly_divmod(m, g)[0], f)
            raise NotInvertibleError(f"{f!r} is not a unit", witness=witness)
        inv = _from_poly(s, f)
    else:
        from galg.matrep import representation_matrix

        M = representation_matrix(f)
        target = np.zeros(f.group.order, dtype=np.int64)
        target[0] = 1
        z = linalg.solve(M, target)
        if z is None:
            basis = linalg.kernel(M)
            witness = AlgebraElement(f.group, f.field, basis[0]) if basis else None
            raise NotInvertibleError(f"{f!r} is not a unit", witness=witness)
        inv = AlgebraElement(f.group, f.field, z)
    if not ((f * inv).is_one() and (inv * f).is_one()):
        raise GalgError("inverse failed its two-sided self-check")
    return inv


def unit_order(f: AlgebraElement, cap: int = DEFAULT_ORDER_CAP) -> int:
    """Multiplicative order of a unit, provided it is at most ``cap``."""
    if not is_unit(f):
        raise NotAUnitError(f"{f!r} is not a unit")
    cur, d = f, 1
    while not cur.is_one():
        d += 1
        if d > cap:
            raise OrderCapExceededError(f"order of {f!r} exceeds cap {cap}")
        cur = cur * f
    return d


def induced_map(psi: GroupHom, f: AlgebraElement) -> AlgebraElement:
    """Image of ``f`` under the algebra map induced by ``psi``."""
    if f.group != psi.domain:
        raise IncompatibleOperandsError("element does not live over the homomorphism's domain")
    if not check_hom(psi):
        raise MalformedHomError("map is not a group homomorphism")
    out = np.zeros(psi.codomain.order, dtype=np.int64)
    np.add.at(out, np.asarray(psi.map, dtype=np.int64), f.coeffs)
    return AlgebraElement(psi.codomain, f.field, out)


def random_weight_w(
    group: FiniteGroup, field: PrimeField | int, w: int, rng: np.random.Generator
) -> AlgebraElement:
    """Uniform support of size ``w`` with uniform nonzero coefficients."""
    field = as_field(field)
    n = group.order
    if not 0 <= w <= n:
        raise WeightOutOfRangeError(f"weight {w} outside [0, {n}]")
    positions = rng.choice(n, size=w, replace=False)
    coeffs = np.zeros(n, dtype=np.int64)
    coeffs[positions] = 1 if field.p == 2 else rng.integers(1, field.p, size=w)
    return AlgebraElement(group, field, coeffs)


def random_unit_of_weight(
    group: FiniteGroup,
    field: PrimeField | int,
    w: int,
    rng: np.random.Generator,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> AlgebraElement:
    """Rejection-sample a unit of weight exactly ``w``."""
    field = as_field(field)
    if field.p == 2 and w % 2 == 0:
        raise OddWeightRequiredError(f"units of F_2[G] have odd weight; got w={w}")
    for _ in range(max_attempts):
        f = random_weight_w(group, field, w, rng)
        if is_unit(f):
            return f
    raise SamplingFailureError(
        f"no unit of weight {w} found in {max_attempts} attempts", attempts=max_attempts
    )


def elements(group: FiniteGroup, field: PrimeField | int = 2) -> Iterable[AlgebraElement]:
    """Every element of ``F_p[G]`` (``p^n`` of them); for exhaustive checks on tiny groups."""
    field = as_field(field)
    for coeffs in itertools.product(range(field.p), repeat=group.order):
        yield AlgebraElement(group, field, coeffs)

