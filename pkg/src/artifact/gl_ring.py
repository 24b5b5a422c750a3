"""GL-side calculus: segments, the comultiplication M*, derivatives,
unramified constituents and Hecke eigenvalues.

A label is stored with a twist z (rho = rho^u |.|^z).  Segments fold the
twist into their exponents on construction, so every stored segment has
an untwisted label and  Delta_{rho^u|.|^z}[x, y] == Delta_{rho^u}[x+z, y+z].
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from functools import lru_cache
from math import prod
from typing import Generic, Hashable, Iterable, Iterator, Optional, Sequence, TypeVar, Union

from .errors import InputError
from .symbolics import HalfInt, HalfIntLike, QLaurent, UnitSign, ZERO

ORTHOGONAL = "orthogonal"
SYMPLECTIC = "symplectic"
NONE = "none"
SELFDUAL_KINDS = (ORTHOGONAL, SYMPLECTIC, NONE)


@dataclass(frozen=True)
class SupercuspidalLabel:
    name: str
    dim_k: int
    ramified: bool
    selfdual_kind: str
    unram_sign: Optional[UnitSign] = None
    base_conductor: int = 0
    twist: HalfInt = ZERO

    def __post_init__(self) -> None:
        object.__setattr__(self, "twist", HalfInt.of(self.twist))
        if self.unram_sign is not None:
            object.__setattr__(self, "unram_sign", UnitSign.of(self.unram_sign))
        if not isinstance(self.dim_k, int) or self.dim_k < 1:
            raise InputError(f"label {self.name}: dim_k must be a positive integer")
        if self.selfdual_kind not in SELFDUAL_KINDS:
            raise InputError(f"label {self.name}: unknown selfdual_kind {self.selfdual_kind!r}")
        if self.base_conductor < 0:
            raise InputError(f"label {self.name}: base_conductor must be non-negative")
        if self.ramified:
            if self.unram_sign is not None:
                raise InputError(f"label {self.name}: a ramified label has no unramified sign")
            if self.base_conductor < 1:
                raise InputError(f"label {self.name}: a ramified label needs base_conductor >= 1")
        else:
            if self.dim_k != 1 or self.selfdual_kind != ORTHOGONAL or self.unram_sign is None:
                raise InputError(
                    f"label {self.name}: an unramified label is a quadratic character "
                    "(dim_k = 1, orthogonal, with unram_sign)"
                )
            if self.base_conductor != 0:
                raise InputError(f"label {self.name}: an unramified label has base_conductor 0")
        if self.selfdual_kind == SYMPLECTIC and self.dim_k % 2:
            raise InputError(f"label {self.name}: a symplectic label has even dim_k")

    @property
    def is_unramified(self) -> bool:
        return not self.ramified

    def unitary(self) -> "SupercuspidalLabel":
        return self if self.twist == 0 else replace(self, twist=ZERO)

    def twisted(self, z: HalfIntLike) -> "SupercuspidalLabel":
        return replace(self, twist=self.twist + HalfInt.of(z))

    def dual(self) -> "SupercuspidalLabel":
        return replace(self, twist=-self.twist)

    def sort_key(self) -> tuple:
        sign = 0 if self.unram_sign is None else self.unram_sign.value
        return (self.ramified, -sign, self.name, self.dim_k, self.selfdual_kind,
                self.base_conductor, self.twist.twice_value)

    def __str__(self) -> str:
        return self.name if self.twist == 0 else f"{self.name}|.|^{self.twist}"


def unramified_character(name: str, sign: Union[UnitSign, int]) -> SupercuspidalLabel:
    """An unramified quadratic character with chi(varpi) = sign."""
    return SupercuspidalLabel(name, 1, False, ORTHOGONAL, UnitSign.of(sign), 0)


def ramified_label(name: str, dim_k: int, selfdual_kind: str, base_conductor: int = 1) -> SupercuspidalLabel:
    return SupercuspidalLabel(name, dim_k, True, selfdual_kind, None, base_conductor)


@dataclass(frozen=True)
class Segment:
    label: SupercuspidalLabel
    x: HalfInt
    y: HalfInt

    def __post_init__(self) -> None:
        x, y = HalfInt.of(self.x), HalfInt.of(self.y)
        z = self.label.twist
        if not (x - y).is_integer:
            raise InputError(f"segment [{x}, {y}]: x - y must be an integer")
        object.__setattr__(self, "label", self.label.unitary())
        object.__setattr__(self, "x", x + z)
        object.__setattr__(self, "y", y + z)

    @property
    def is_empty(self) -> bool:
        return self.x < self.y

    @property
    def length(self) -> int:
        return max((self.x - self.y).to_int() + 1, 0)

    @property
    def dim(self) -> int:
        return self.length * self.label.dim_k

    def dual(self) -> "Segment":
        return Segment(self.label.dual(), -self.y, -self.x)

    def central_exponent(self):
        return (self.x + self.y).to_fraction() / 2

    def sort_key(self) -> tuple:
        return (self.label.sort_key(), self.x.twice_value, self.y.twice_value)

    def __str__(self) -> str:
        return f"D_{self.label.name}[{self.x},{self.y}]"


class SegmentProduct:
    """Commutative product of segments in the Grothendieck ring.

    Empty segments are the unit and are dropped; factors are kept sorted.
    """

    __slots__ = ("factors", "_hash")

    def __init__(self, factors: Iterable[Segment] = ()):
        fs = tuple(sorted((f for f in factors if not f.is_empty), key=Segment.sort_key))
        self.factors: tuple[Segment, ...] = fs
        self._hash = hash(fs)

    @classmethod
    def of(cls, *factors: Segment) -> "SegmentProduct":
        return cls(factors)

    def __mul__(self, other: "SegmentProduct") -> "SegmentProduct":
        return SegmentProduct(self.factors + other.factors)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SegmentProduct) and self.factors == other.factors

    def __hash__(self) -> int:
        return self._hash

    def __iter__(self) -> Iterator[Segment]:
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    @property
    def dim(self) -> int:
        return sum(f.dim for f in self.factors)

    def __str__(self) -> str:
        return " x ".join(map(str, self.factors)) if self.factors else "1"

    def __repr__(self) -> str:
        return f"SegmentProduct({self})"


UNIT = SegmentProduct()

K = TypeVar("K", bound=Hashable)


class FormalSum(Generic[K]):
    """Z-linear combination of hashable basis terms; zero multiplicities dropped."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Union[Iterable[tuple[K, int]], dict, None] = None):
        acc: Counter = Counter()
        items = terms.items() if isinstance(terms, dict) else (terms or ())
        for key, mult in items:
            acc[key] += mult
        self._terms: dict[K, int] = {k: v for k, v in acc.items() if v != 0}

    def items(self):
        return self._terms.items()

    def __iter__(self):
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def multiplicity(self, key: K) -> int:
        return self._terms.get(key, 0)

    def total_multiplicity(self) -> int:
        return sum(self._terms.values())

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: "FormalSum[K]") -> "FormalSum[K]":
        return type(self)(list(self._terms.items()) + list(other._terms.items()))

    def __neg__(self) -> "FormalSum[K]":
        return type(self)((k, -v) for k, v in self._terms.items())

    def __sub__(self, other: "FormalSum[K]") -> "FormalSum[K]":
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FormalSum) and self._terms == other._terms

    def __repr__(self) -> str:
        body = " + ".join(f"{v}*{k}" for k, v in self._terms.items()) or "0"
        return f"{type(self).__name__}({body})"


class GLFormalSum(FormalSum[SegmentProduct]):
    def __mul__(self, other: "GLFormalSum") -> "GLFormalSum":
        return GLFormalSum(
            (a * b, m * n) for a, m in self._terms.items() for b, n in other._terms.items()
        )

    @classmethod
    def of(cls, p: SegmentProduct, mult: int = 1) -> "GLFormalSum":
        return cls([(p, mult)])


Tensor = tuple[SegmentProduct, SegmentProduct]


class TensorFormalSum(FormalSum[Tensor]):
    def __mul__(self, other: "TensorFormalSum") -> "TensorFormalSum":
        return TensorFormalSum(
            ((a1 * a2, b1 * b2), m * n)
            for (a1, b1), m in self._terms.items()
            for (a2, b2), n in other._terms.items()
        )

    @classmethod
    def unit(cls) -> "TensorFormalSum":
        return cls([((UNIT, UNIT), 1)])


# --- unramified constituents -------------------------------------------------


def is_unramified_segment(seg: Segment) -> bool:
    if seg.x < seg.y:
        return True
    return seg.x == seg.y and seg.label.is_unramified


def has_unramified_constituent(p: Union[SegmentProduct, Iterable[Segment]]) -> bool:
    return all(is_unramified_segment(f) for f in p)


# --- comultiplication --------------------------------------------------------


def _m_star_terms(seg: Segment) -> Iterator[tuple[int, int, Tensor]]:
    """Yield (i, j, left (x) right) for the double sum of M*(seg)."""
    rho, x, y = seg.label, seg.x, seg.y
    L = (x - y).to_int()
    rho_dual = rho.dual()
    for i in range(L + 2):
        for j in range(i + 1):
            left = SegmentProduct.of(
                Segment(rho_dual, -y, -y + (i - L)),
                Segment(rho, x, x + (1 - j)),
            )
            right = SegmentProduct.of(Segment(rho, x - j, x + (1 - i)))
            yield i, j, (left, right)


def comult_M_star(seg: Segment) -> TensorFormalSum:
    if seg.is_empty:
        return TensorFormalSum.unit()
    return TensorFormalSum((t, 1) for _, _, t in _m_star_terms(seg))


def M_star_product(p: Union[SegmentProduct, Iterable[Segment]]) -> TensorFormalSum:
    out = TensorFormalSum.unit()
    for f in p:
        out = out * comult_M_star(f)
    return out


@lru_cache(maxsize=4096)
def _ur_part(seg: Segment) -> TensorFormalSum:
    if seg.is_empty:
        return TensorFormalSum.unit()
    return TensorFormalSum(
        (t, 1) for _, _, t in _m_star_terms(seg) if has_unramified_constituent(t[0])
    )


def M_star_ur_part(p: Union[SegmentProduct, Iterable[Segment]]) -> TensorFormalSum:
    """Terms of M*(p) whose left factor has an unramified constituent.

    The left factor of a product term is the product of the factor-wise left
    parts, and the unramified criterion is factor-wise, so filtering before
    multiplying gives the same terms as filtering the full expansion.
    """
    out = TensorFormalSum.unit()
    for f in p:
        out = out * _ur_part(f)
    return out


def M_star_ur_count(p: Union[SegmentProduct, Iterable[Segment]]) -> int:
    # multiplicities are positive, so the total multiplicity of a product of
    # formal sums is the product of the totals
    return prod(_ur_part(f).total_multiplicity() for f in p)


# --- derivatives -------------------------------------------------------------


def _as_product(obj: Union[Segment, SegmentProduct]) -> SegmentProduct:
    return SegmentProduct.of(obj) if isinstance(obj, Segment) else obj


def _derivative(obj, at: SupercuspidalLabel, left: bool) -> GLFormalSum:
    target, z = at.unitary(), at.twist
    factors = _as_product(obj).factors
    out = GLFormalSum()
    for k, f in enumerate(factors):
        if f.label != target:
            continue
        if left and f.x == z:
            new = Segment(f.label, f.x - 1, f.y)
        elif not left and f.y == z:
            new = Segment(f.label, f.x, f.y + 1)
        else:
            continue
        rest = factors[:k] + (new,) + factors[k + 1:]
        out = out + GLFormalSum.of(SegmentProduct(rest))
    return out


def left_derivative(obj: Union[Segment, SegmentProduct], at: SupercuspidalLabel) -> GLFormalSum:
    """L at rho|.|^z, extended to products by the Leibniz rule."""
    return _derivative(obj, at, left=True)


def right_derivative(obj: Union[Segment, SegmentProduct], at: SupercuspidalLabel) -> GLFormalSum:
    return _derivative(obj, at, left=False)


# --- conductors --------------------------------------------------------------


def segment_conductor(seg: Segment) -> int:
    """x - y for unramified labels, (x - y + 1) * base_conductor otherwise."""
    if seg.is_empty:
        return 0
    if seg.label.is_unramified:
        return (seg.x - seg.y).to_int()
    return seg.length * seg.label.base_conductor


# --- Hecke eigenvalues -------------------------------------------------------


def hecke_eigenvalues(
    factors: Sequence[tuple[Union[UnitSign, int], HalfIntLike]], r: int
) -> list[QLaurent]:
    """Solve for lambda_0..lambda_{r-1} from  L(s)^{-1} = prod (1 - u q^{-(s+e)}).

    Matching the coefficient of t^i (t = q^{-s}) against
    (-1)^i lambda_i q^{-i(r-1)/2 + i(i-1)/2}  gives each lambda_i.
    """
    if r < 1:
        raise InputError("r must be a positive integer")
    poly: list[QLaurent] = [QLaurent.constant(1)]
    for u, e in factors:
        root = QLaurent.monomial(-HalfInt.of(e), UnitSign.of(u).value)
        nxt = poly + [QLaurent()]
        for i, c in enumerate(poly):
            nxt[i + 1] = nxt[i + 1] - root * c
        poly = nxt
    while len(poly) > 1 and poly[-1].is_zero():
        poly.pop()
    if len(poly) - 1 >= r:
        raise InputError(
            f"inverse L-factor has degree {len(poly) - 1} >= r = {r}; no eigenvalues match"
        )
    out = []
    for i in range(r):
        c = poly[i] if i < len(poly) else QLaurent()
        shift = QLaurent.monomial(HalfInt(i * (r - 1)) - HalfInt(i * (i - 1)), (-1) ** i)
        out.append(c * shift)
    return out
