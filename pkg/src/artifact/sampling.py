"""Deterministic random discrete parameters for sweeps."""

from __future__ import annotations

import random
from typing import Optional

from .gl_ring import ORTHOGONAL, SYMPLECTIC, ramified_label, unramified_character
from .so_params import DiscreteLParameter, Summand
from .symbolics import HalfInt


def _kappas(rng: random.Random, count: int, integral: bool, top: int) -> list[HalfInt]:
    # distinct kappas with a fixed parity; twice_value ranges over 0..top
    pool = [t for t in range(top + 1) if (t % 2 == 0) == integral]
    return [HalfInt(t) for t in sorted(rng.sample(pool, min(count, len(pool))))]


def random_parameter(rng: random.Random, max_d: int = 5, max_ramified: int = 2,
                     top: int = 15, d: Optional[int] = None,
                     d_prime: Optional[int] = None) -> DiscreteLParameter:
    """A valid discrete parameter with d (resp. d') summands on the chi (resp. chi') line."""
    d = rng.randint(0, max_d) if d is None else d
    d_prime = rng.randint(0, max_d) if d_prime is None else d_prime
    summands: list[Summand] = []
    for sign, count, name in ((1, d, "chi"), (-1, d_prime, "chi_p")):
        lab = unramified_character(name, sign)
        summands += [Summand(lab, k) for k in _kappas(rng, count, False, top)]
    for j in range(rng.randint(0, max_ramified)):
        if rng.random() < 0.5:
            lab = ramified_label(f"rho{j}", rng.choice((1, 2, 3)), ORTHOGONAL, rng.randint(1, 3))
            ks = _kappas(rng, rng.randint(1, 3), False, 9)
        else:
            lab = ramified_label(f"rho{j}", rng.choice((2, 4)), SYMPLECTIC, rng.randint(1, 3))
            ks = _kappas(rng, rng.randint(1, 3), True, 8)
        summands += [Summand(lab, k) for k in ks]
    if not summands:
        summands = [Summand(unramified_character("chi", 1), HalfInt(1))]
    return DiscreteLParameter(summands)
