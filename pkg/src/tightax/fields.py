"""Exact coefficient fields: prime fields F_p and the rationals.

Prime-field elements are plain ``int`` values in ``range(p)``; rationals are
``fractions.Fraction``.  Nothing in the package ever touches a float.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from sympy import isprime, nthroot_mod


@dataclass(frozen=True)
class FieldSpec:
    """A coefficient field: ``FieldSpec(p)`` is F_p, ``FieldSpec(0)`` is QQ."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0 and not isprime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(int(p))

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(0)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Accept ``F7``, ``GF(7)``, ``7``, ``QQ`` or ``Q``."""
        t = text.strip()
        if t.upper() in ("QQ", "Q", "RATIONALS"):
            return cls(0)
        m = re.fullmatch(r"(?:F_?|GF\(?)?(\d+)\)?", t, flags=re.IGNORECASE)
        if not m:
            raise ValueError(f"unknown field {text!r}")
        return cls(int(m.group(1)))

    @property
    def is_prime_field(self) -> bool:
        return self.p != 0

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def name(self) -> str:
        return f"F{self.p}" if self.p else "QQ"

    def __str__(self):
        return self.name

    # element arithmetic

    def __call__(self, value) -> int | Fraction:
        """Coerce an int, Fraction or numeric string into the field."""
        if isinstance(value, str):
            value = Fraction(value)
        if self.p:
            if isinstance(value, Fraction):
                if value.denominator % self.p == 0:
                    raise ZeroDivisionError(f"{value} has no image in {self.name}")
                return value.numerator * pow(value.denominator, -1, self.p) % self.p
            return int(value) % self.p
        return Fraction(value)

    @property
    def zero(self):
        return 0 if self.p else Fraction(0)

    @property
    def one(self):
        return 1 if self.p else Fraction(1)

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(a, -1, self.p)
        return 1 / a

    def signed(self, a) -> int | Fraction:
        """Representative of smallest absolute value, used for printing."""
        if self.p and a > self.p // 2:
            return a - self.p
        return a

    def nth_roots(self, a, n: int) -> list[int]:
        """All solutions of ``x**n == a`` in F_p, sorted."""
        if not self.p:
            raise ValueError("root extraction only over prime fields")
        a = self(a)
        if a == 0:
            return [0]
        roots = nthroot_mod(a, n, self.p, all_roots=True) or []
        return sorted(int(r) for r in roots)

    def roots_of_unity(self, m: int) -> list[int]:
        return self.nth_roots(1, m)


QQ = FieldSpec(0)


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)
