"""Exact scalars: half-integers, signs, and Laurent polynomials in q.

Exponents in the level-raising formulas can be half-integral, so
:class:`QLaurent` is keyed by :class:`HalfInt`.  Coefficients are plain
Python integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Union

HalfIntLike = Union["HalfInt", int, Fraction, str]


@total_ordering
@dataclass(frozen=True)
class HalfInt:
    """A number in (1/2)Z, stored as twice its value."""

    twice_value: int

    def __post_init__(self) -> None:
        if isinstance(self.twice_value, bool) or not isinstance(self.twice_value, int):
            raise TypeError(f"twice_value must be int, got {self.twice_value!r}")

    @classmethod
    def of(cls, value: HalfIntLike) -> "HalfInt":
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, bool):
            raise TypeError("booleans are not half-integers")
        if isinstance(value, int):
            return cls(2 * value)
        if isinstance(value, str):
            value = Fraction(value.strip())
        if isinstance(value, Rational):
            twice = Fraction(value) * 2
            if twice.denominator != 1:
                raise ValueError(f"{value} is not a half-integer")
            return cls(int(twice))
        raise TypeError(f"cannot make a half-integer from {value!r}")

    @property
    def is_integer(self) -> bool:
        return self.twice_value % 2 == 0

    def to_fraction(self) -> Fraction:
        return Fraction(self.twice_value, 2)

    def to_int(self) -> int:
        if not self.is_integer:
            raise ValueError(f"{self} is not an integer")
        return self.twice_value // 2

    def __add__(self, other: HalfIntLike) -> "HalfInt":
        return HalfInt(self.twice_value + HalfInt.of(other).twice_value)

    __radd__ = __add__

    def __sub__(self, other: HalfIntLike) -> "HalfInt":
        return HalfInt(self.twice_value - HalfInt.of(other).twice_value)

    def __rsub__(self, other: HalfIntLike) -> "HalfInt":
        return HalfInt.of(other) - self

    def __neg__(self) -> "HalfInt":
        return HalfInt(-self.twice_value)

    def __mul__(self, k: int) -> "HalfInt":
        if isinstance(k, bool) or not isinstance(k, int):
            return NotImplemented
        return HalfInt(self.twice_value * k)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, HalfInt):
            return self.twice_value == other.twice_value
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.to_fraction() == other
        return NotImplemented

    def __lt__(self, other: HalfIntLike) -> bool:
        if isinstance(other, HalfInt):
            return self.twice_value < other.twice_value
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.to_fraction() < other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("HalfInt", self.twice_value))

    def __str__(self) -> str:
        if self.is_integer:
            return str(self.twice_value // 2)
        return f"{self.twice_value}/2"

    def __repr__(self) -> str:
        return f"HalfInt({self})"

    def to_json(self) -> Union[int, str]:
        return self.twice_value // 2 if self.is_integer else str(self)


HALF = HalfInt(1)
ZERO = HalfInt(0)


@dataclass(frozen=True)
class UnitSign:
    value: int

    def __post_init__(self) -> None:
        if self.value not in (1, -1):
            raise ValueError(f"a unit sign is +1 or -1, got {self.value!r}")

    @classmethod
    def of(cls, value: Union["UnitSign", int]) -> "UnitSign":
        return value if isinstance(value, UnitSign) else cls(int(value))

    def __mul__(self, other: "UnitSign") -> "UnitSign":
        if not isinstance(other, UnitSign):
            return NotImplemented
        return UnitSign(self.value * other.value)

    def __neg__(self) -> "UnitSign":
        return UnitSign(-self.value)

    def __pow__(self, k: int) -> "UnitSign":
        return UnitSign(self.value ** (k % 2))

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return "+1" if self.value == 1 else "-1"


PLUS = UnitSign(1)
MINUS = UnitSign(-1)


class QLaurent:
    """Finite sum  sum_e c_e q^e  with e in (1/2)Z and integer c_e."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, coeffs: Union[Mapping[HalfIntLike, int], Iterable[tuple[HalfIntLike, int]], None] = None):
        acc: dict[HalfInt, int] = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else (coeffs or ())
        for e, c in items:
            if isinstance(c, bool) or not isinstance(c, int):
                raise TypeError(f"coefficients must be integers, got {c!r}")
            key = HalfInt.of(e)
            acc[key] = acc.get(key, 0) + c
        self._terms: tuple[tuple[HalfInt, int], ...] = tuple(
            sorted(((e, c) for e, c in acc.items() if c != 0), key=lambda t: t[0].twice_value)
        )
        self._hash = hash(self._terms)

    @classmethod
    def monomial(cls, exponent: HalfIntLike, coeff: int = 1) -> "QLaurent":
        return cls({exponent: coeff})

    @classmethod
    def constant(cls, c: int) -> "QLaurent":
        return cls({0: c})

    @property
    def coeffs(self) -> dict[HalfInt, int]:
        return dict(self._terms)

    def terms(self) -> Iterator[tuple[HalfInt, int]]:
        return iter(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, exponent: HalfIntLike) -> int:
        return self.coeffs.get(HalfInt.of(exponent), 0)

    def degree(self) -> HalfInt:
        if not self._terms:
            raise ValueError("the zero polynomial has no degree")
        return self._terms[-1][0]

    def low_degree(self) -> HalfInt:
        if not self._terms:
            raise ValueError("the zero polynomial has no degree")
        return self._terms[0][0]

    @staticmethod
    def _coerce(other: object) -> "QLaurent":
        if isinstance(other, QLaurent):
            return other
        if isinstance(other, UnitSign):
            return QLaurent.constant(other.value)
        if isinstance(other, int) and not isinstance(other, bool):
            return QLaurent.constant(other)
        raise TypeError(f"cannot combine QLaurent with {other!r}")

    def __add__(self, other: object) -> "QLaurent":
        o = self._coerce(other)
        return QLaurent(list(self._terms) + list(o._terms))

    __radd__ = __add__

    def __neg__(self) -> "QLaurent":
        return QLaurent([(e, -c) for e, c in self._terms])

    def __sub__(self, other: object) -> "QLaurent":
        return self + (-self._coerce(other))

    def __rsub__(self, other: object) -> "QLaurent":
        return self._coerce(other) - self

    def __mul__(self, other: object) -> "QLaurent":
        o = self._coerce(other)
        return QLaurent([(e1 + e2, c1 * c2) for e1, c1 in self._terms for e2, c2 in o._terms])

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "QLaurent":
        if k < 0:
            if len(self._terms) != 1 or abs(self._terms[0][1]) != 1:
                raise ValueError("only unit monomials can be inverted")
            (e, c), = self._terms
            return QLaurent.monomial(-e * (-k), c ** (-k))
        out = QLaurent.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self) -> int:
        return self._hash

    def evaluate(self, q: int) -> Fraction:
        """Exact value at an integer q > 1; every exponent must be integral."""
        if isinstance(q, bool) or not isinstance(q, int) or q < 2:
            raise ValueError(f"q must be an integer > 1, got {q!r}")
        total = Fraction(0)
        for e, c in self._terms:
            if not e.is_integer:
                raise ValueError(f"exponent {e} is not integral; cannot evaluate at q={q}")
            total += c * Fraction(q) ** e.to_int()
        return total

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in reversed(self._terms):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                pw = "q" if e == 1 else f"q^{e}" if e.is_integer and e > 0 else f"q^({e})"
                body = pw if mag == 1 else f"{mag}*{pw}"
            parts.append(("-" if c < 0 else "+", body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"QLaurent({self})"

    def to_json(self) -> list[list]:
        return [[e.to_json(), c] for e, c in self._terms]

    @classmethod
    def from_json(cls, data: Iterable[Iterable]) -> "QLaurent":
        return cls([(HalfInt.of(e), int(c)) for e, c in data])


def qlaurent_mul(a: QLaurent, b: QLaurent) -> QLaurent:
    return a * b


Q = QLaurent.monomial(1)
ONE = QLaurent.constant(1)
