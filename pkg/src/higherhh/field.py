"""Exact ground fields: the rationals and prime fields.

Elements are plain Python objects (``Fraction`` for Q, ``int`` in
``range(p)`` for F_p) so that matrices can store them directly in dicts.
"""

from __future__ import annotations

from fractions import Fraction


class FieldError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Field:
    """Exact field of characteristic ``char`` (0 means Q)."""

    def __init__(self, char: int = 0):
        char = int(char)
        if char != 0 and not _is_prime(char):
            raise FieldError(f"characteristic {char} is not 0 or a prime")
        self.char = char
        self.zero = self(0)
        self.one = self(1)

    def __call__(self, x) -> object:
        if self.char == 0:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.char == 0:
                raise FieldError(f"{x} has no image in F_{self.char}")
            return x.numerator * pow(x.denominator, -1, self.char) % self.char
        return int(x) % self.char

    def __eq__(self, other):
        return isinstance(other, Field) and other.char == self.char

    def __hash__(self):
        return hash(("Field", self.char))

    def __repr__(self):
        return "Q" if self.char == 0 else f"F_{self.char}"

    @property
    def name(self) -> str:
        return "Q" if self.char == 0 else f"F{self.char}"

    def add(self, a, b):
        if self.char:
            return (a + b) % self.char
        return a + b

    def sub(self, a, b):
        if self.char:
            return (a - b) % self.char
        return a - b

    def mul(self, a, b):
        if self.char:
            return a * b % self.char
        return a * b

    def neg(self, a):
        if self.char:
            return -a % self.char
        return -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.char:
            return pow(a, -1, self.char)
        return 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def to_str(self, a) -> str:
        return str(a)

    def parse(self, s) -> object:
        if isinstance(s, str):
            return self(Fraction(s))
        return self(s)

    @classmethod
    def from_name(cls, name) -> "Field":
        """Accepts ``"Q"``, ``"F3"``, ``"F_3"``, ``"GF(3)"``, ``0`` or ``3``."""
        if isinstance(name, Field):
            return name
        if isinstance(name, int):
            return cls(name)
        s = str(name).strip().upper().replace("_", "")
        if s in ("Q", "QQ", "0"):
            return cls(0)
        for prefix in ("GF(", "F", "GF"):
            if s.startswith(prefix):
                s = s[len(prefix):].rstrip(")")
                break
        try:
            return cls(int(s))
        except ValueError:
            raise FieldError(f"unknown field {name!r}") from None


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)
