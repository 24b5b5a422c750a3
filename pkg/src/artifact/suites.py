"""Invariant suites shared by ``verify-all`` and the acceptance tests.

Each suite returns a :class:`SuiteResult` with a count of checked cases and
a list of failure records.  Nothing here raises on a failed check.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import coset_geometry as cg
from .errors import ArtifactError
from .gl_ring import (
    ORTHOGONAL,
    SYMPLECTIC,
    Segment,
    SegmentProduct,
    M_star_product,
    M_star_ur_count,
    has_unramified_constituent,
    hecke_eigenvalues,
    ramified_label,
    segment_conductor,
    unramified_character,
)
from .sampling import random_parameter
from .so_jacquet import count_mu_ur, count_mu_ur_upper, ur_binomial_check
from .so_params import (
    EQUAL,
    L_TRIVIAL,
    NON_SEED,
    OFF_BY_ONE,
    SEED_STRIP,
    DiscreteLParameter,
    Summand,
    conductor,
    epsilon_sign,
    gamma_ratio_product,
    reduction_chain,
)
from .symbolics import HalfInt, QLaurent, UnitSign


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)

    def check(self, ok: bool, detail: object = None) -> None:
        self.checked += 1
        if not ok:
            self.failures.append(detail)

    @property
    def ok(self) -> bool:
        return self.checked > 0 and not self.failures

    def to_json(self) -> dict:
        return {"name": self.name, "checked": self.checked, "ok": self.ok,
                "failures": self.failures[:20], "failure_count": len(self.failures)}


LABEL_KINDS = {
    "unramified": unramified_character("chi", 1),
    "ramified_orthogonal": ramified_label("rho_o", 1, ORTHOGONAL, 1),
    "ramified_symplectic": ramified_label("rho_s", 2, SYMPLECTIC, 2),
}


def expected_segment_count(seg: Segment) -> int:
    if not seg.label.is_unramified:
        return 1
    return 3 if seg.x == seg.y else 4


def segment_table(max_len: int = 8) -> SuiteResult:
    """M*_ur counts of single segments against the 1/3/4 table, by full expansion too."""
    res = SuiteResult("segment_table")
    for kind, lab in LABEL_KINDS.items():
        for length in range(max_len + 1):
            for x2 in range(-1, 3):
                x = HalfInt(x2)
                seg = Segment(lab, x, x - length)
                full = sum(mult for (left, _), mult in M_star_product(SegmentProduct.of(seg)).items()
                           if has_unramified_constituent(left))
                got = M_star_ur_count(SegmentProduct.of(seg))
                want = expected_segment_count(seg)
                res.check(got == full == want,
                          {"kind": kind, "segment": str(seg), "count": got, "expansion": full, "table": want})
    return res


def _lines(phi: DiscreteLParameter) -> tuple[int, int]:
    ds = [len(phi.kappas(l)) for l in phi.unramified_labels()]
    return tuple((ds + [0, 0])[:2])


def unramified_counts(samples: int = 200, max_d: int = 5, seed: int = 0) -> SuiteResult:
    res = SuiteResult("unramified_counts")
    rng = random.Random(seed)
    for _ in range(samples):
        phi = random_parameter(rng, max_d=max_d)
        d, d_p = _lines(phi)
        try:
            # count_mu_ur raises unless enumeration and seed recursion agree
            lower = count_mu_ur(phi)
            upper = count_mu_ur_upper(phi)
            ok = lower == upper == 2 ** (d + d_p)
        except ArtifactError as exc:
            ok, lower, upper = False, str(exc), None
        res.check(ok, {"parameter": str(phi), "enumeration": lower, "recursion": upper, "2^d": 2 ** (d + d_p)})
    for d in range(max_d + 1):
        res.check(ur_binomial_check(d), {"binomial_d": d})
    return res


_STEP_RELATION = {NON_SEED: EQUAL, L_TRIVIAL: EQUAL, SEED_STRIP: OFF_BY_ONE}


def conductor_chains(samples: int = 200, max_d: int = 5, seed: int = 1) -> SuiteResult:
    res = SuiteResult("conductor_chains")
    rng = random.Random(seed)
    for _ in range(samples):
        phi = random_parameter(rng, max_d=max_d)
        try:
            chain = reduction_chain(phi)
        except ArtifactError as exc:
            res.check(False, {"parameter": str(phi), "error": str(exc)})
            continue
        for node in chain:
            base = conductor(node.next_parameter) if node.next_parameter is not None else conductor(node.parameter)
            a = base + 2 * sum(segment_conductor(s) for s in node.segments_peeled)
            c = conductor(node.parameter)
            want = _STEP_RELATION.get(node.step, EQUAL)
            gap = {EQUAL: 0, OFF_BY_ONE: 1}[want]
            res.check(node.relation == want and a == node.a_induced and c - a == gap,
                      {"parameter": str(phi), "step": node.step, "relation": node.relation, "a": a, "c": c})
    return res


def epsilon_telescoping(max_twice_kappa: int = 15) -> SuiteResult:
    res = SuiteResult("epsilon_telescoping")
    for sign in (1, -1):
        chi = unramified_character("chi", sign)
        u = UnitSign(sign)
        for t in range(1, max_twice_kappa + 1, 2):
            k = HalfInt(t)
            phi = DiscreteLParameter([Summand(chi, k)], n=None)
            eps = epsilon_sign(phi)
            q_part, t_power = gamma_ratio_product(u, k)
            want_sign = (-u) ** t
            # the product is (-chi)^{2k} q^{k} t^{2k}: sign, then exponent of q, then of q^{-s}
            want_q = QLaurent.monomial(k, want_sign.value)
            res.check(eps == want_sign and conductor(phi) == t and q_part == want_q and t_power == t,
                      {"chi": sign, "kappa": str(k), "epsilon": eps.value, "conductor": conductor(phi),
                       "gamma": str(q_part), "t_power": t_power})
    return res


def hecke_ladder(r_max: int = 10) -> SuiteResult:
    res = SuiteResult("hecke_eigenvalues")
    for sign in (1, -1):
        for r in range(2, r_max + 1):
            lam = hecke_eigenvalues([(sign, HalfInt(r - 1))], r)
            want = [QLaurent.constant(1), QLaurent.constant(sign)] + [QLaurent()] * (r - 2)
            res.check(lam == want, {"chi": sign, "r": r, "got": [str(v) for v in lam]})
    return res


def coset_decomposition(n_max: int = 3, m_max: int = 2, primes: Sequence[int] = (2, 3)) -> SuiteResult:
    res = SuiteResult("coset_decomposition")
    for p in primes:
        for n in range(1, n_max + 1):
            for m in range(m_max + 1):
                reps = cg.enumerate_coset_reps(n, m, p)
                res.check(len(reps) == cg.expected_coset_count(n, p) == len(set(reps)),
                          {"n": n, "m": m, "p": p, "count": len(reps)})
                report = cg.verify_coset_distinctness(reps, n, m, p)
                res.check(report.ok, {"n": n, "m": m, "p": p, "collisions": list(report.failures[:3])})
    return res


def relation_suite(n_max: int = 4, m_max: int = 2, primes: Sequence[int] = (2, 3)) -> SuiteResult:
    res = SuiteResult("matrix_relations")
    rep = cg.verify_relation_suite(n_max, m_max, primes)
    for name in sorted(rep.checked):
        for _ in range(rep.checked[name] - len(rep.failures[name])):
            res.check(True)
        for d in rep.failures[name]:
            res.check(False, {"identity": name, **d})
    return res


def level_raising(n_max: int = 8) -> SuiteResult:
    res = SuiteResult("level_raising")
    for n in range(1, n_max + 1):
        for r in range(1, n + 1):
            for sign in (1, -1):
                w = cg.kernel_check(n, r, sign)
                res.check(w.is_zero, {"kind": "kernel", "n": n, "r": r, "chi": sign})
                val = cg.whittaker_value(n, r, sign)
                exp = cg.whittaker_expected(n, r)
                res.check((val == exp or val == -exp) and all(val.evaluate(q) != 0 for q in (2, 3)),
                          {"kind": "whittaker", "n": n, "r": r, "chi": sign, "value": str(val)})
    return res


def hecke_cosets(r_max: int = 4, primes: Sequence[int] = (2, 3)) -> SuiteResult:
    res = SuiteResult("hecke_cosets")
    for p in primes:
        for r in range(1, r_max + 1):
            for i in range(r):
                reps = cg.enumerate_hecke_reps(r, i, p)
                res.check(len(reps) == cg.expected_hecke_count(r, i, p),
                          {"r": r, "i": i, "p": p, "count": len(reps)})
                report = cg.verify_hecke_distinctness(reps, r, p)
                res.check(report.ok, {"r": r, "i": i, "p": p, "collisions": list(report.failures[:3])})
    return res


def all_suites(prime: int = 3, max_n: int = 6, max_d: int = 4, seed: int = 0) -> list[Callable[[], SuiteResult]]:
    primes = tuple(sorted({2, prime}))
    return [
        lambda: segment_table(8),
        lambda: unramified_counts(200, max_d, seed),
        lambda: conductor_chains(200, max_d, seed + 1),
        lambda: epsilon_telescoping(15),
        lambda: hecke_ladder(10),
        lambda: coset_decomposition(min(max_n, 3), 2, primes),
        lambda: relation_suite(min(max_n, 4), 2, primes),
        lambda: level_raising(max(max_n, 1)),
        lambda: hecke_cosets(min(max_n, 4), primes),
    ]
