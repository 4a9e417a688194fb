"""Exact scalar fields: the rationals (default) and prime fields Z/p."""

from __future__ import annotations

import os
from fractions import Fraction


class RationalField:
    """The field of rational numbers, realised by :class:`fractions.Fraction`."""

    name = "Q"
    characteristic = 0

    def __init__(self) -> None:
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def __call__(self, value) -> Fraction:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, bool):
            raise TypeError("booleans are not scalars")
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            return _parse_rational(value)
        raise TypeError(f"cannot coerce {type(value).__name__} into Q exactly")

    def parse(self, text: str) -> Fraction:
        return self(text)

    def format(self, value) -> str:
        return str(self(value))

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("Q")

    def __repr__(self) -> str:
        return "Q"


def _parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text or any(ch in text for ch in "eE."):
        raise ValueError(f"not a rational of the form p/q: {text!r}")
    return Fraction(text)


class Residue:
    """An element of Z/p; mixes freely with Python ints."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int) -> None:
        self.v = v % p
        self.p = p

    def _other(self, o):
        if isinstance(o, Residue):
            if o.p != self.p:
                raise ValueError("residues of different characteristic")
            return o.v
        if isinstance(o, int) and not isinstance(o, bool):
            return o
        return None

    def __add__(self, o):
        x = self._other(o)
        return NotImplemented if x is None else Residue(self.v + x, self.p)

    __radd__ = __add__

    def __sub__(self, o):
        x = self._other(o)
        return NotImplemented if x is None else Residue(self.v - x, self.p)

    def __rsub__(self, o):
        x = self._other(o)
        return NotImplemented if x is None else Residue(x - self.v, self.p)

    def __mul__(self, o):
        x = self._other(o)
        return NotImplemented if x is None else Residue(self.v * x, self.p)

    __rmul__ = __mul__

    def __truediv__(self, o):
        x = self._other(o)
        if x is None:
            return NotImplemented
        if x % self.p == 0:
            raise ZeroDivisionError("division by zero in Z/p")
        return Residue(self.v * pow(x, -1, self.p), self.p)

    def __rtruediv__(self, o):
        x = self._other(o)
        if x is None:
            return NotImplemented
        if self.v == 0:
            raise ZeroDivisionError("division by zero in Z/p")
        return Residue(x * pow(self.v, -1, self.p), self.p)

    def __neg__(self):
        return Residue(-self.v, self.p)

    def __pos__(self):
        return self

    def __bool__(self) -> bool:
        return self.v != 0

    def __eq__(self, o) -> bool:
        x = self._other(o)
        return x is not None and (self.v - x) % self.p == 0

    def __hash__(self) -> int:
        return hash((self.v, self.p))

    def __repr__(self) -> str:
        return f"{self.v} mod {self.p}"

    def __str__(self) -> str:
        return str(self.v)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class PrimeField:
    """The field Z/p for a prime p."""

    characteristic: int

    def __init__(self, p: int) -> None:
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.characteristic = p
        self.name = str(p)
        self.zero = Residue(0, p)
        self.one = Residue(1, p)

    def __call__(self, value) -> Residue:
        p = self.characteristic
        if isinstance(value, Residue):
            if value.p != p:
                raise ValueError("residue from a different prime field")
            return value
        if isinstance(value, bool):
            raise TypeError("booleans are not scalars")
        if isinstance(value, int):
            return Residue(value, p)
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise ZeroDivisionError(f"denominator divisible by {p}")
            return Residue(value.numerator * pow(value.denominator, -1, p), p)
        if isinstance(value, str):
            return self(_parse_rational(value))
        raise TypeError(f"cannot coerce {type(value).__name__} into Z/{p}")

    def parse(self, text: str) -> Residue:
        return self(text)

    def format(self, value) -> str:
        return str(self(value).v)

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.characteristic == self.characteristic

    def __hash__(self) -> int:
        return hash(("Z/p", self.characteristic))

    def __repr__(self) -> str:
        return f"Z/{self.characteristic}"


QQ = RationalField()

Field = RationalField | PrimeField


def field_from_name(name: str | None) -> Field:
    """``"Q"`` (or empty) gives the rationals, a prime number gives Z/p."""
    if name is None or name.strip() in ("", "Q", "QQ"):
        return QQ
    try:
        p = int(name)
    except ValueError as exc:
        raise ValueError(f"unknown field {name!r}; use Q or a prime") from exc
    return PrimeField(p)


def field_from_env() -> Field:
    return field_from_name(os.environ.get("AINF_FIELD"))
