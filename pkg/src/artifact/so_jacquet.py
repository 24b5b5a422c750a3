"""Jacquet-module bookkeeping on the two unramified character lines.

Only the K^ur part of the expansion of mu*_chi is enumerated: tuples a
with every a_i in {0, 1}.  For such a tuple the GL part is the product of
the singletons chi|.|^{kappa_i} (a_i = 1) and the SO part has parameter
phi with each chosen kappa_i lowered by one.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from math import comb, factorial, prod
from typing import Optional, Sequence

from .errors import ConsistencyError, InputError
from .gl_ring import Segment, SegmentProduct, SupercuspidalLabel, has_unramified_constituent, M_star_ur_count
from .so_params import (
    DiscreteLParameter,
    Summand,
    non_seed_segments,
    seed_of,
    validate,
)
from .symbolics import HalfInt, HalfIntLike


# --- Omega vectors and Atobe's dimension formula -----------------------------


@dataclass(frozen=True)
class OmegaVector:
    """Concatenation of descending runs (x_i, x_i - 1, ..., y_i)."""

    runs: tuple[tuple[HalfInt, HalfInt], ...]

    def __post_init__(self) -> None:
        runs = tuple((HalfInt.of(x), HalfInt.of(y)) for x, y in self.runs)
        object.__setattr__(self, "runs", runs)
        for x, y in runs:
            if not (x - y).is_integer or x < y:
                raise InputError(f"run ({x}, {y}) is not a descending run")
        for (x0, y0), (x1, y1) in zip(runs, runs[1:]):
            if x1 < x0 or (x0 == x1 and y1 < y0):
                raise InputError("runs violate the ordering x_1 <= x_2 <= ... (ties broken by y)")

    @classmethod
    def of(cls, *runs: tuple[HalfIntLike, HalfIntLike]) -> "OmegaVector":
        return cls(tuple(runs))

    @property
    def entries(self) -> tuple[HalfInt, ...]:
        out: list[HalfInt] = []
        for x, y in self.runs:
            out += [x - k for k in range((x - y).to_int() + 1)]
        return tuple(out)

    def __len__(self) -> int:
        return len(self.entries)


def jac_dim(z_prime: OmegaVector, z: OmegaVector) -> int:
    """dim Jac_{rho|.|^{z'}} delta_rho(z) where the formula determines it."""
    a, b = z_prime.entries, z.entries
    if len(a) != len(b):
        raise InputError("vectors of different length")
    if a == b:
        return prod(factorial(m) for m in Counter(z.runs).values())
    if a < b:
        return 0
    raise InputError("z' > z: the dimension is not determined by the available formula")


def kappa_vector(kappas: Sequence[HalfInt], a: Sequence[int]) -> OmegaVector:
    """kappa(a) = (k_1, ..., k_1 - a_1 + 1, ..., k_d, ..., k_d - a_d + 1)."""
    return OmegaVector(tuple((k, k - (ai - 1)) for k, ai in zip(kappas, a) if ai > 0))


# --- K sets --------------------------------------------------------------------


def k_sets(phi: DiscreteLParameter, chi: SupercuspidalLabel, ell: int,
           unramified_only: bool = False) -> list[tuple[int, ...]]:
    """K^(ell)_{phi,chi}, or its intersection with K^ur."""
    if not chi.is_unramified:
        raise InputError(f"{chi.name} is not an unramified character")
    ks = phi.kappas(chi)
    bounds = [1 if unramified_only else k.twice_value + 1 for k in ks]
    return [a for a in itertools.product(*(range(b + 1) for b in bounds)) if sum(a) == ell]


def k_ur_sets(phi: DiscreteLParameter, chi: SupercuspidalLabel) -> list[tuple[int, ...]]:
    d = len(phi.kappas(chi))
    return list(itertools.product((0, 1), repeat=d))


# --- derivatives of parameters ---------------------------------------------------


def lower_kappas(phi: DiscreteLParameter, chi: SupercuspidalLabel,
                 chosen: Sequence[HalfInt]) -> DiscreteLParameter:
    """Replace chi (x) S_{2k+1} by chi (x) S_{2k-1} for each chosen k (dropping k = 1/2)."""
    removed = [Summand(chi, k) for k in chosen]
    added = [Summand(chi, k - 1) for k in chosen if k > HalfInt(1)]
    return DiscreteLParameter(list(phi.without(removed).summands) + added)


def derivative_param(phi: DiscreteLParameter, chi: SupercuspidalLabel, kappa: HalfIntLike) -> DiscreteLParameter:
    kappa = HalfInt.of(kappa)
    if Summand(chi, kappa) not in phi.summands:
        raise InputError(f"derivative vanishes: ({chi.name}, {kappa}) is not a summand")
    out = lower_kappas(phi, chi, [kappa])
    if not out.is_discrete:
        raise InputError(
            f"lowering ({chi.name}, {kappa}) collides with an existing summand; result is not discrete"
        )
    return out


def highest_derivative_chain(phi: DiscreteLParameter, chi: SupercuspidalLabel) -> list[DiscreteLParameter]:
    """phi, D(phi), D^2(phi), ... down to the parameter with no chi-summand left.

    Empty when phi has no chi-summand.
    """
    ks = phi.kappas(chi)
    if not ks:
        return []
    if len(ks) != 1:
        raise InputError(f"{chi.name} occurs {len(ks)} times; the ladder needs a single summand")
    out = [phi]
    cur, k = phi, ks[0]
    while k > 0:
        cur = derivative_param(cur, chi, k)
        out.append(cur)
        k = k - 1
    return out


# --- mu*_ur ------------------------------------------------------------------------


@dataclass(frozen=True)
class MuUrTerm:
    gl_part: SegmentProduct
    so_parameter: DiscreteLParameter
    so_generic: bool = True

    @property
    def discrete(self) -> bool:
        return self.so_parameter.is_discrete


def unramified_lines(phi: DiscreteLParameter) -> tuple[Optional[SupercuspidalLabel], Optional[SupercuspidalLabel]]:
    labs = phi.unramified_labels()
    return (labs + [None, None])[0], (labs + [None, None])[1]


def mu_ur_terms(phi: DiscreteLParameter) -> list[MuUrTerm]:
    chi, chi_p = unramified_lines(phi)
    ks = phi.kappas(chi) if chi else []
    ks_p = phi.kappas(chi_p) if chi_p else []
    terms = []
    for a in itertools.product((0, 1), repeat=len(ks)):
        chosen = [k for k, ai in zip(ks, a) if ai]
        phi_a = lower_kappas(phi, chi, chosen) if chosen else phi
        for a_p in itertools.product((0, 1), repeat=len(ks_p)):
            chosen_p = [k for k, ai in zip(ks_p, a_p) if ai]
            phi_aa = lower_kappas(phi_a, chi_p, chosen_p) if chosen_p else phi_a
            gl = SegmentProduct(
                [Segment(chi, k, k) for k in chosen] + [Segment(chi_p, k, k) for k in chosen_p]
            )
            terms.append(MuUrTerm(gl, phi_aa))
    return terms


def count_mu_ur_upper(phi: DiscreteLParameter) -> int:
    """4^l |mu*_ur(seed)| computed through the seed and the peeled segments."""
    peeled = non_seed_segments(phi)
    return M_star_ur_count(SegmentProduct(peeled)) * len(mu_ur_terms(seed_of(phi)))


def count_mu_ur(phi: DiscreteLParameter) -> int:
    validate(phi)
    lower = len(mu_ur_terms(phi))
    upper = count_mu_ur_upper(phi)
    d = sum(len(phi.kappas(l)) for l in phi.unramified_labels())
    if not (lower == upper == 2 ** d):
        raise ConsistencyError(
            f"|mu*_ur| disagreement at {phi}: enumeration {lower}, seed recursion {upper}, 2^d = {2 ** d}"
        )
    return lower


def ur_binomial_check(d: int) -> bool:
    """|K^ur cap K^(l)| = C(d, l) for each l, by enumeration over {0,1}^d."""
    counts = Counter(sum(a) for a in itertools.product((0, 1), repeat=d))
    return all(counts[l] == comb(d, l) for l in range(d + 1))
