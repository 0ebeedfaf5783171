"""Prime fields F_p."""

from __future__ import annotations

from dataclasses import dataclass

from galg.errors import UnsupportedFieldError

MAX_PRIME = 2**16


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field of residues modulo a prime ``p < 2**16``."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not 2 <= self.p < MAX_PRIME or not is_prime(self.p):
            raise UnsupportedFieldError(f"field modulus must be a prime below {MAX_PRIME}, got {self.p!r}")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(a, -1, self.p)

    def __repr__(self) -> str:
        return f"F_{self.p}"


GF2 = PrimeField(2)


def as_field(field: PrimeField | int) -> PrimeField:
    return field if isinstance(field, PrimeField) else PrimeField(int(field))
