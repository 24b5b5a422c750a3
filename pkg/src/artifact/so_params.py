"""Discrete L-parameters of SO(2n+1) and the conductor reduction chain."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .errors import ConsistencyError, InputError
from .gl_ring import (
    ORTHOGONAL,
    SYMPLECTIC,
    Segment,
    SupercuspidalLabel,
    segment_conductor,
)
from .symbolics import HALF, HalfInt, HalfIntLike, QLaurent, UnitSign, PLUS


@dataclass(frozen=True)
class Summand:
    """phi_rho (x) S_{2 kappa + 1}."""

    label: SupercuspidalLabel
    kappa: HalfInt

    def __post_init__(self) -> None:
        object.__setattr__(self, "kappa", HalfInt.of(self.kappa))

    @property
    def dim(self) -> int:
        return self.label.dim_k * (self.kappa.twice_value + 1)

    def sort_key(self) -> tuple:
        return (self.label.sort_key(), self.kappa.twice_value)

    def __str__(self) -> str:
        return f"({self.label.name}, {self.kappa})"


class DiscreteLParameter:
    """A multiset of summands together with n.

    Construction does not validate; :func:`validate` does.  Derived
    parameters produced by the Jacquet calculus may carry repeated
    summands, which :attr:`is_discrete` reports.
    """

    __slots__ = ("summands", "n", "_hash")

    def __init__(self, summands: Iterable[Summand] = (), n: Optional[int] = None):
        ss = tuple(sorted(summands, key=Summand.sort_key))
        total = sum(s.dim for s in ss)
        if n is None:
            if total % 2:
                raise InputError(f"total dimension {total} is odd; cannot infer n")
            n = total // 2
        self.summands: tuple[Summand, ...] = ss
        self.n: int = n
        self._hash = hash((ss, n))

    @classmethod
    def of(cls, *pairs: tuple[SupercuspidalLabel, HalfIntLike], n: Optional[int] = None) -> "DiscreteLParameter":
        return cls((Summand(l, HalfInt.of(k)) for l, k in pairs), n)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, DiscreteLParameter) and (self.summands, self.n) == (other.summands, other.n)

    def __hash__(self) -> int:
        return self._hash

    def __iter__(self):
        return iter(self.summands)

    def __len__(self) -> int:
        return len(self.summands)

    @property
    def dim(self) -> int:
        return sum(s.dim for s in self.summands)

    @property
    def is_discrete(self) -> bool:
        return len(set(self.summands)) == len(self.summands)

    def labels(self) -> list[SupercuspidalLabel]:
        seen: dict[SupercuspidalLabel, None] = {}
        for s in self.summands:
            seen.setdefault(s.label, None)
        return list(seen)

    def kappas(self, label: SupercuspidalLabel) -> list[HalfInt]:
        """I_{phi,rho}, sorted ascending."""
        return [s.kappa for s in self.summands if s.label == label]

    def unramified_labels(self) -> list[SupercuspidalLabel]:
        return [l for l in self.labels() if l.is_unramified]

    def without(self, removed: Iterable[Summand]) -> "DiscreteLParameter":
        left = list(self.summands)
        for s in removed:
            left.remove(s)
        return DiscreteLParameter(left)

    def restricted(self, keep) -> "DiscreteLParameter":
        return DiscreteLParameter(s for s in self.summands if keep(s))

    def __str__(self) -> str:
        return "{" + ", ".join(map(str, self.summands)) + "}"

    def __repr__(self) -> str:
        return f"DiscreteLParameter(n={self.n}, {self})"


EMPTY = DiscreteLParameter((), 0)


# --- validation ---------------------------------------------------------------


def validate(phi: DiscreteLParameter) -> None:
    """Raise :class:`InputError` describing the first violated constraint."""
    seen = set()
    for s in phi.summands:
        if s in seen:
            raise InputError(f"duplicate summand {s}: the parameter is not discrete")
        seen.add(s)
    for s in phi.summands:
        lab = s.label
        if lab.twist != 0:
            raise InputError(f"summand {s}: labels in a parameter carry no twist")
        if s.kappa < 0:
            raise InputError(f"summand {s}: kappa must be non-negative")
        if lab.selfdual_kind == SYMPLECTIC and not s.kappa.is_integer:
            raise InputError(f"summand {s}: parity mismatch, symplectic label needs integral kappa")
        if lab.selfdual_kind == ORTHOGONAL and s.kappa.is_integer:
            raise InputError(f"summand {s}: parity mismatch, orthogonal label needs kappa in 1/2 + Z")
        if lab.selfdual_kind not in (SYMPLECTIC, ORTHOGONAL):
            raise InputError(f"summand {s}: label {lab.name} is not self-dual")
    by_name: dict[str, SupercuspidalLabel] = {}
    by_sign: dict[int, SupercuspidalLabel] = {}
    for lab in phi.labels():
        if lab.name in by_name and by_name[lab.name] != lab:
            raise InputError(f"label name {lab.name!r} is used for two different labels")
        by_name[lab.name] = lab
        if lab.is_unramified:
            v = lab.unram_sign.value
            if v in by_sign and by_sign[v] != lab:
                raise InputError(
                    f"labels {by_sign[v].name!r} and {lab.name!r} are the same unramified character"
                )
            by_sign[v] = lab
    if phi.dim != 2 * phi.n:
        raise InputError(f"dimension mismatch: summands have total dimension {phi.dim}, but 2n = {2 * phi.n}")


def is_valid(phi: DiscreteLParameter) -> bool:
    try:
        validate(phi)
    except InputError:
        return False
    return True


# --- partition and construction -----------------------------------------------


@dataclass(frozen=True)
class Partition:
    i00: tuple[SupercuspidalLabel, ...]
    i01: tuple[SupercuspidalLabel, ...]
    i02: tuple[SupercuspidalLabel, ...]
    i1: tuple[SupercuspidalLabel, ...]
    i2_even: tuple[SupercuspidalLabel, ...]
    i2_odd: tuple[SupercuspidalLabel, ...]

    @property
    def i0(self) -> tuple[SupercuspidalLabel, ...]:
        return self.i00 + self.i01 + self.i02

    def as_dict(self) -> dict[str, tuple[SupercuspidalLabel, ...]]:
        return {
            "I00": self.i00, "I01": self.i01, "I02": self.i02,
            "I1": self.i1, "I2_even": self.i2_even, "I2_odd": self.i2_odd,
        }


def partition(phi: DiscreteLParameter) -> Partition:
    sets: dict[str, list] = {k: [] for k in ("i00", "i01", "i02", "i1", "i2_even", "i2_odd")}
    for lab in phi.labels():
        ks = phi.kappas(lab)
        d = len(ks)
        if lab.selfdual_kind == SYMPLECTIC:
            if d % 2 == 0:
                sets["i1"].append(lab)
            elif ks[0] != 0:
                sets["i02"].append(lab)
            elif d == 1:
                sets["i00"].append(lab)
            else:
                sets["i01"].append(lab)
        else:
            sets["i2_even" if d % 2 == 0 else "i2_odd"].append(lab)
    return Partition(**{k: tuple(v) for k, v in sets.items()})


@dataclass(frozen=True)
class ConstructionResult:
    segments: tuple[Segment, ...]
    cuspidal_support: tuple[SupercuspidalLabel, ...]
    n0: int

    def sigma(self) -> DiscreteLParameter:
        """Parameter of the generic supercuspidal sigma."""
        return DiscreteLParameter(Summand(l, HalfInt(0)) for l in self.cuspidal_support)


def _pairs_from(label: SupercuspidalLabel, ks: Sequence[HalfInt], start: int) -> list[Segment]:
    """Delta[k_{j+1}, -k_j] for consecutive pairs of ks starting at index start."""
    return [Segment(label, ks[j + 1], -ks[j]) for j in range(start, len(ks) - 1, 2)]


def construct(phi: DiscreteLParameter) -> ConstructionResult:
    part = partition(phi)
    segs: list[Segment] = []
    for lab in part.i01:
        segs += _pairs_from(lab, phi.kappas(lab), 1)
    for lab in part.i02:
        ks = phi.kappas(lab)
        segs.append(Segment(lab, ks[0], 1))
        segs += _pairs_from(lab, ks, 1)
    for lab in part.i1 + part.i2_even:
        segs += _pairs_from(lab, phi.kappas(lab), 0)
    for lab in part.i2_odd:
        ks = phi.kappas(lab)
        segs.append(Segment(lab, ks[0], HALF))
        segs += _pairs_from(lab, ks, 1)
    support = part.i0
    n0 = sum(l.dim_k for l in support) // 2
    return ConstructionResult(tuple(segs), tuple(support), n0)


def is_supercuspidal(phi: DiscreteLParameter) -> bool:
    return not construct(phi).segments


# --- conductor and epsilon ----------------------------------------------------


def summand_conductor(s: Summand) -> int:
    if s.label.is_unramified:
        return s.kappa.twice_value
    return (s.kappa.twice_value + 1) * s.label.base_conductor


def conductor(phi: DiscreteLParameter) -> int:
    return sum(summand_conductor(s) for s in phi.summands)


def epsilon_sign(
    phi: DiscreteLParameter, ramified_signs: Optional[Mapping[str, UnitSign]] = None
) -> UnitSign:
    """Product of (-chi(varpi))^{2 kappa}; ramified summands need supplied signs."""
    out = PLUS
    for s in phi.summands:
        if s.label.is_unramified:
            out = out * (-s.label.unram_sign) ** s.kappa.twice_value
        else:
            if not ramified_signs or s.label.name not in ramified_signs:
                raise InputError(f"no epsilon sign supplied for ramified label {s.label.name}")
            out = out * UnitSign.of(ramified_signs[s.label.name])
    return out


def gamma_ratio_product(chi_sign: UnitSign, kappa: HalfIntLike) -> tuple[QLaurent, int]:
    """prod_{i=0}^{2x-1} -chi(varpi) q^{-(s - x + i)}, as (q-part, power of q^{-s})."""
    x = HalfInt.of(kappa)
    q_part = QLaurent.constant(1)
    t_power = 0
    for i in range(x.twice_value):
        q_part = q_part * QLaurent.monomial(x - i, -chi_sign.value)
        t_power += 1
    return q_part, t_power


# --- seeds ----------------------------------------------------------------------


def is_seed(phi: DiscreteLParameter) -> bool:
    return all(len(phi.kappas(l)) <= 1 for l in phi.unramified_labels())


def _seed_split(phi: DiscreteLParameter) -> tuple[DiscreteLParameter, list[Segment]]:
    kept: list[Summand] = [s for s in phi.summands if not s.label.is_unramified]
    peeled: list[Segment] = []
    for lab in phi.unramified_labels():
        ks = phi.kappas(lab)
        if len(ks) % 2:
            kept.append(Summand(lab, ks[0]))
            ks = ks[1:]
        peeled += _pairs_from(lab, ks, 0)
    return DiscreteLParameter(kept), peeled


def seed_of(phi: DiscreteLParameter) -> DiscreteLParameter:
    return _seed_split(phi)[0]


def non_seed_segments(phi: DiscreteLParameter) -> list[Segment]:
    """The segments Delta_1, ..., Delta_l peeled off when passing to the seed."""
    return _seed_split(phi)[1]


# --- reduction chain --------------------------------------------------------------

EQUAL = "equal"
OFF_BY_ONE = "off_by_one"

TEMPERED = "tempered"
NON_SEED = "non_seed"
SEED_STRIP = "seed_strip"
L_TRIVIAL = "l_trivial"
SUPERCUSPIDAL = "supercuspidal"

_EXPECTED = {TEMPERED: EQUAL, NON_SEED: EQUAL, SEED_STRIP: OFF_BY_ONE,
             L_TRIVIAL: EQUAL, SUPERCUSPIDAL: EQUAL}


@dataclass(frozen=True)
class ReductionNode:
    parameter: DiscreteLParameter
    segments_peeled: tuple[Segment, ...]
    a_induced: int
    c_param: int
    relation: str
    step: str
    next_parameter: Optional[DiscreteLParameter]

    def __post_init__(self) -> None:
        gap = self.c_param - self.a_induced
        if (self.relation, gap) not in ((EQUAL, 0), (OFF_BY_ONE, 1)):
            raise ConsistencyError(
                f"node {self.step}: relation {self.relation} with a = {self.a_induced}, c = {self.c_param}"
            )


def _relation(a: int, c: int, step: str, phi: DiscreteLParameter) -> str:
    if a == c:
        rel = EQUAL
    elif a == c - 1:
        rel = OFF_BY_ONE
    else:
        raise ConsistencyError(f"{step} step at {phi}: a = {a} and c = {c} are unrelated")
    if rel != _EXPECTED[step]:
        raise ConsistencyError(f"{step} step at {phi}: expected {_EXPECTED[step]}, got {rel}")
    return rel


def _node(step: str, phi: DiscreteLParameter, peeled: Sequence[Segment],
          nxt: Optional[DiscreteLParameter]) -> ReductionNode:
    # a is computed on the induced side: a(next) + 2 sum c(peeled), with a(next) = c(next)
    base = conductor(nxt) if nxt is not None else conductor(phi)
    a = base + 2 * sum(segment_conductor(s) for s in peeled)
    c = conductor(phi)
    return ReductionNode(phi, tuple(peeled), a, c, _relation(a, c, step, phi), step, nxt)


def reduction_chain(
    phi: DiscreteLParameter, tempered_segments: Sequence[Segment] = ()
) -> list[ReductionNode]:
    """Chain from phi down to its supercuspidal support.

    ``tempered_segments`` optionally prepends the tempered-to-square-integrable
    step: the GL data tau_i with phi_pi = phi + sum (phi_tau_i + phi_tau_i^vee).
    """
    validate(phi)
    nodes: list[ReductionNode] = []
    if tempered_segments:
        a = conductor(phi) + 2 * sum(segment_conductor(s) for s in tempered_segments)
        c = conductor(phi) + sum(segment_conductor(s) + segment_conductor(s.dual()) for s in tempered_segments)
        nodes.append(ReductionNode(phi, tuple(tempered_segments), a, c,
                                   _relation(a, c, TEMPERED, phi), TEMPERED, phi))
    cur = phi
    while True:
        if not is_seed(cur):
            seed, peeled = _seed_split(cur)
            node = _node(NON_SEED, cur, peeled, seed)
        elif cur.unramified_labels():
            lab = cur.unramified_labels()[0]
            (kappa,) = cur.kappas(lab)
            peeled = [Segment(lab, kappa, HALF)]
            node = _node(SEED_STRIP, cur, peeled, cur.without([Summand(lab, kappa)]))
        else:
            cons = construct(cur)
            if not cons.segments:
                if not nodes or nodes[-1].step == TEMPERED:
                    nodes.append(_node(SUPERCUSPIDAL, cur, (), None))
                break
            node = _node(L_TRIVIAL, cur, cons.segments, cons.sigma())
        nodes.append(node)
        cur = node.next_parameter
        if is_supercuspidal(cur):
            break
    return nodes
