"""BIKE-style MDPC cryptosystem over a group algebra F_2[G].

Private key: two units ``h1, h2`` of odd weight ``w``. Public key:
``h = h1^-1 h2`` and the error weight ``t``. A message is a pair
``(e1, e2)`` with ``wt(e1) + wt(e2) = t``; the ciphertext is ``e1 + h e2``.
Decryption multiplies by ``h1`` and bit-flip decodes against
``[M(h1) | M(h2)]``.

This is a research skeleton for decoding experiments: no hashing, no CCA
transform, no constant-time guarantees.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from galg.algebra import AlgebraElement, invert, random_unit_of_weight
from galg.codes import DEFAULT_MAX_ITERS, THRESHOLD_RULES, DecodeResult, bitflip_decode, mdpc_parity
from galg.errors import CapacityError, InvalidErrorVectorError, InvalidParameterError, ParseError
from galg.field import GF2
from galg.groups import FiniteGroup, parse_group_spec


def nearest_odd_sqrt(q: Fraction | int) -> int:
    """Nearest odd integer to ``sqrt(q)``, ties broken upward; exact arithmetic."""
    q = Fraction(q)
    root_floor = math.isqrt(q.numerator // q.denominator)
    odd = root_floor if root_floor % 2 else root_floor - 1
    # sqrt(q) lies in [odd, odd + 2); the midpoint odd + 1 decides
    return odd + 2 if q >= (odd + 1) ** 2 else odd


@dataclass(frozen=True)
class SchemeParams:
    group_spec: str
    n: int
    w: int
    t: int
    threshold_rule: str = "max"
    max_iters: int = DEFAULT_MAX_ITERS

    def __post_init__(self):
        if self.w % 2 == 0 or self.t % 2 == 0:
            raise InvalidParameterError(f"w and t must be odd, got w={self.w}, t={self.t}")
        if not (1 <= self.w <= self.n and 1 <= self.t <= self.n):
            raise InvalidParameterError(f"need 1 <= w, t <= n = {self.n}")
        if self.threshold_rule not in THRESHOLD_RULES:
            raise InvalidParameterError(f"unknown threshold rule {self.threshold_rule!r}")

    @property
    def group(self) -> FiniteGroup:
        return parse_group_spec(self.group_spec)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping) -> "SchemeParams":
        try:
            return cls(**{k: data[k] for k in ("group_spec", "n", "w", "t")},
                       threshold_rule=data.get("threshold_rule", "max"),
                       max_iters=int(data.get("max_iters", DEFAULT_MAX_ITERS)))
        except KeyError as exc:
            raise ParseError(f"params block lacks {exc}") from None


def derive_params(
    group_spec: str, threshold_rule: str = "max", max_iters: int = DEFAULT_MAX_ITERS
) -> SchemeParams:
    """``w`` = nearest odd to ``sqrt(2n)/2`` and ``t`` = nearest odd to ``sqrt(2n)``."""
    n = parse_group_spec(group_spec).order
    if n < 9:
        raise InvalidParameterError(f"group order {n} too small; need n >= 9")
    w = nearest_odd_sqrt(Fraction(n, 2))
    t = nearest_odd_sqrt(2 * n)
    return SchemeParams(group_spec, n, w, t, threshold_rule, max_iters)


@dataclass(frozen=True)
class PrivateKey:
    params: SchemeParams
    h1: AlgebraElement
    h2: AlgebraElement

    def to_dict(self) -> dict:
        return {"params": self.params.to_dict(), "h1": self.h1.to_dict(), "h2": self.h2.to_dict()}

    @classmethod
    def from_dict(cls, data: Mapping) -> "PrivateKey":
        params = SchemeParams.from_dict(data["params"])
        G = params.group
        return cls(params, AlgebraElement.from_dict(data["h1"], G), AlgebraElement.from_dict(data["h2"], G))


@dataclass(frozen=True)
class PublicKey:
    params: SchemeParams
    h: AlgebraElement

    @property
    def t(self) -> int:
        return self.params.t

    def to_dict(self) -> dict:
        return {"params": self.params.to_dict(), "h": self.h.to_dict(), "t": self.t}

    @classmethod
    def from_dict(cls, data: Mapping) -> "PublicKey":
        params = SchemeParams.from_dict(data["params"])
        return cls(params, AlgebraElement.from_dict(data["h"], params.group))


@dataclass(frozen=True)
class Ciphertext:
    s: AlgebraElement

    def to_dict(self) -> dict:
        return {"s": self.s.to_dict()}

    @classmethod
    def from_dict(cls, data: Mapping, group: FiniteGroup | None = None) -> "Ciphertext":
        return cls(AlgebraElement.from_dict(data["s"], group))


@dataclass(frozen=True)
class DecryptResult:
    """``e1, e2`` are set only on success; ``reason`` explains a failure."""

    e1: AlgebraElement | None
    e2: AlgebraElement | None
    decode: DecodeResult
    reason: str | None = None

    @property
    def success(self) -> bool:
        return self.e1 is not None


def keygen(params: SchemeParams, rng: np.random.Generator) -> tuple[PrivateKey, PublicKey]:
    G = params.group
    h1 = random_unit_of_weight(G, GF2, params.w, rng)
    h2 = random_unit_of_weight(G, GF2, params.w, rng)
    h = invert(h1) * h2
    return PrivateKey(params, h1, h2), PublicKey(params, h)


def encrypt(pk: PublicKey, e1: AlgebraElement, e2: AlgebraElement) -> Ciphertext:
    total = e1.weight + e2.weight
    if total != pk.t:
        raise InvalidErrorVectorError(f"wt(e1) + wt(e2) = {total}, expected t = {pk.t}")
    return Ciphertext(e1 + pk.h * e2)


def random_error(params: SchemeParams, rng: np.random.Generator) -> tuple[AlgebraElement, AlgebraElement]:
    """A uniformly random weight-``t`` vector of length ``2n`` split into ``(e1, e2)``."""
    G, n = params.group, params.n
    positions = rng.choice(2 * n, size=params.t, replace=False)
    return _split(G, n, positions)


def _split(G: FiniteGroup, n: int, positions) -> tuple[AlgebraElement, AlgebraElement]:
    positions = np.asarray(positions, dtype=np.int64)
    e1 = AlgebraElement.from_support(G, GF2, positions[positions < n].tolist())
    e2 = AlgebraElement.from_support(G, GF2, (positions[positions >= n] - n).tolist())
    return e1, e2


def decrypt(sk: PrivateKey, c: Ciphertext, params: SchemeParams | None = None) -> DecryptResult:
    """Recover ``(e1, e2)`` from ``s = e1 + h e2``.

    Decoding failures are reported in the result, never raised. A decoded
    pair is accepted only if its weight is ``t`` and ``h1 (s + e1) = h2 e2``,
    which is ``e1 = s + h e2`` rewritten without inverting ``h1``.
    """
    params = params or sk.params
    n = params.n
    H = mdpc_parity([sk.h1, sk.h2])
    synd = (sk.h1 * c.s).coeffs
    res = bitflip_decode(H, synd, t=params.t, max_iters=params.max_iters, threshold_rule=params.threshold_rule)
    if not res.success:
        return DecryptResult(None, None, res, reason="decode-failure")
    e = res.error_vector
    e1, e2 = _split(sk.h1.group, n, np.flatnonzero(e))
    if e1.weight + e2.weight != params.t:
        return DecryptResult(None, None, res, reason="weight-mismatch")
    if sk.h1 * (c.s + e1) != sk.h2 * e2:
        return DecryptResult(None, None, res, reason="consistency-check")
    return DecryptResult(e1, e2, res)


# constant-weight message encoding via combinadics (lexicographic t-subsets of 2n positions)


def message_capacity(n: int, t: int) -> int:
    """Number of message bits that fit in one weight-``t`` error of length ``2n``."""
    return math.comb(2 * n, t).bit_length() - 1


def rank_subset(subset: Sequence[int], N: int) -> int:
    """Lexicographic rank of a sorted ``t``-subset of ``range(N)``."""
    t = len(subset)
    r, prev = 0, -1
    for k, c in enumerate(subset):
        for skipped in range(prev + 1, c):
            r += math.comb(N - 1 - skipped, t - 1 - k)
        prev = c
    return r


def unrank_subset(r: int, N: int, t: int) -> list[int]:
    """Inverse of :func:`rank_subset`."""
    if not 0 <= r < math.comb(N, t):
        raise CapacityError(f"rank {r} out of range for C({N}, {t})")
    out = []
    c = 0
    for k in range(t):
        while True:
            block = math.comb(N - 1 - c, t - 1 - k)
            if r < block:
                break
            r -= block
            c += 1
        out.append(c)
        c += 1
    return out


def encode_message(bits: Sequence[int], n: int, t: int) -> tuple[list[int], list[int]]:
    """Map a bit string to supports ``(e1, e2)``: positions ``< n`` and ``>= n`` (shifted)."""
    cap = message_capacity(n, t)
    if len(bits) > cap:
        raise CapacityError(f"{len(bits)} bits exceed capacity {cap} for n={n}, t={t}")
    value = int("".join(str(int(b) & 1) for b in bits) or "0", 2)
    positions = unrank_subset(value, 2 * n, t)
    return [p for p in positions if p < n], [p - n for p in positions if p >= n]


def decode_message(e1: Sequence[int], e2: Sequence[int], n: int, nbits: int) -> list[int]:
    """Inverse of :func:`encode_message` for supports ``e1``, ``e2``."""
    positions = sorted(list(e1) + [p + n for p in e2])
    value = rank_subset(positions, 2 * n)
    if value >> nbits:
        raise CapacityError(f"decoded value does not fit in {nbits} bits")
    return [int(b) for b in format(value, f"0{nbits}b")] if nbits else []


def encode_message_elements(bits: Sequence[int], params: SchemeParams) -> tuple[AlgebraElement, AlgebraElement]:
    s1, s2 = encode_message(bits, params.n, params.t)
    G = params.group
    return AlgebraElement.from_support(G, GF2, s1), AlgebraElement.from_support(G, GF2, s2)


def decode_message_elements(e1: AlgebraElement, e2: AlgebraElement, nbits: int) -> list[int]:
    return decode_message(e1.support, e2.support, e1.group.order, nbits)


def dfr_trial(params: SchemeParams, seed: int) -> DecryptResult:
    """One keygen, encrypt, decrypt round with its own seed."""
    rng = np.random.default_rng(seed)
    sk, pk = keygen(params, rng)
    e1, e2 = random_error(params, rng)
    result = decrypt(sk, encrypt(pk, e1, e2), params)
    if result.success and (result.e1 != e1 or result.e2 != e2):
        return DecryptResult(None, None, result.decode, reason="wrong-decoding")
    return result

