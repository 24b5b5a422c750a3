"""Command-line entry point.

Exit status: 0 on success, 1 for malformed or invalid input, 2 when a
checked invariant or an internal cross-check fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Any, Callable, Optional, Sequence, TextIO

from . import coset_geometry as cg
from . import suites
from .errors import ArtifactError, ConsistencyError, InputError, InvariantViolation
from .gl_ring import hecke_eigenvalues
from .serialization import (
    dumps,
    label_to_json,
    node_to_json,
    parameter_from_json,
    parameter_to_json,
    parse_half,
    segment_from_json,
    segment_to_json,
)
from .so_jacquet import count_mu_ur, count_mu_ur_upper
from .so_params import (
    DiscreteLParameter,
    conductor,
    construct,
    epsilon_sign,
    gamma_ratio_product,
    is_seed,
    non_seed_segments,
    partition,
    reduction_chain,
    seed_of,
    summand_conductor,
    validate,
)
from .symbolics import UnitSign

COMMANDS = ("validate", "conductor", "epsilon", "seed", "construct", "reduce", "count-ur",
            "hecke", "cosets", "levelraise", "verify-all")


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: Optional[str] = None
    p: int = 3
    max_n: int = 6
    max_d: int = 4
    fmt: str = "json"
    seed: int = 0
    n: Optional[int] = None
    m: Optional[int] = None
    r: Optional[int] = None

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if self.max_n < 1 or self.max_d < 0:
            raise InputError("sweep bounds must be positive")
        if not _is_prime(self.p):
            raise InputError(f"--prime {self.p} is not prime")
        if self.fmt not in ("json", "table"):
            raise InputError(f"unknown format {self.fmt!r}")


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % k for k in range(2, int(p ** 0.5) + 1))


# --- input -------------------------------------------------------------------------------


def _load_json(cfg: RunConfig, stdin: TextIO) -> Any:
    try:
        if cfg.input_path and cfg.input_path != "-":
            with open(cfg.input_path, encoding="utf-8") as fh:
                return json.load(fh)
        return json.load(stdin)
    except OSError as exc:
        raise InputError(f"cannot read {cfg.input_path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"input is not valid JSON: {exc.msg} (line {exc.lineno})") from exc


def _parameter(cfg: RunConfig, stdin: TextIO) -> tuple[DiscreteLParameter, dict]:
    data = _load_json(cfg, stdin)
    phi = parameter_from_json(data)
    validate(phi)
    return phi, data


# --- commands --------------------------------------------------------------------------------


def cmd_validate(cfg: RunConfig, stdin: TextIO) -> dict:
    phi, _ = _parameter(cfg, stdin)
    return {"valid": True, "n": phi.n, "parameter": str(phi),
            "partition": {k: [l.name for l in v] for k, v in partition(phi).as_dict().items()}}


def cmd_conductor(cfg: RunConfig, stdin: TextIO) -> dict:
    phi, _ = _parameter(cfg, stdin)
    return {"parameter": str(phi), "conductor": conductor(phi),
            "summands": [{"summand": str(s), "conductor": summand_conductor(s)} for s in phi.summands]}


def cmd_epsilon(cfg: RunConfig, stdin: TextIO) -> dict:
    phi, data = _parameter(cfg, stdin)
    signs = data.get("ramified_signs") or {}
    if any(v not in (1, -1) for v in signs.values()):
        raise InputError("ramified_signs values must be 1 or -1")
    eps = epsilon_sign(phi, {k: UnitSign(v) for k, v in signs.items()})
    rows = []
    for s in phi.summands:
        if s.label.is_unramified:
            q_part, t_power = gamma_ratio_product(s.label.unram_sign, s.kappa)
            want = (-s.label.unram_sign) ** s.kappa.twice_value
            if q_part.coefficient(s.kappa) != want.value or t_power != summand_conductor(s):
                raise ConsistencyError(f"gamma-factor product disagrees at {s}: {q_part}, t^{t_power}")
            rows.append({"summand": str(s), "sign": want.value, "gamma_product": str(q_part),
                         "t_power": t_power})
    return {"parameter": str(phi), "epsilon": eps.value, "conductor": conductor(phi), "unramified": rows}


def cmd_seed(cfg: RunConfig, stdin: TextIO) -> dict:
    phi, _ = _parameter(cfg, stdin)
    return {"parameter": str(phi), "is_seed": is_seed(phi), "seed": str(seed_of(phi)),
            "seed_json": parameter_to_json(seed_of(phi)),
            "peeled": [segment_to_json(s) for s in non_seed_segments(phi)]}


def cmd_construct(cfg: RunConfig, stdin: TextIO) -> dict:
    phi, _ = _parameter(cfg, stdin)
    res = construct(phi)
    return {"parameter": str(phi), "segments": [segment_to_json(s) for s in res.segments],
            "cuspidal_support": [label_to_json(l) for l in res.cuspidal_support],
            "n0": res.n0, "sigma": str(res.sigma())}


def cmd_reduce(cfg: RunConfig, stdin: TextIO) -> dict:
    phi, data = _parameter(cfg, stdin)
    labels = {l.name: l for l in phi.labels()}
    tempered = [segment_from_json(s, labels) for s in data.get("tempered_segments", [])]
    chain = reduction_chain(phi, tempered)
    return {"parameter": str(phi), "relations": [n.relation for n in chain],
            "chain": [node_to_json(n) for n in chain]}


def cmd_count_ur(cfg: RunConfig, stdin: TextIO) -> dict:
    phi, _ = _parameter(cfg, stdin)
    count = count_mu_ur(phi)
    return {"parameter": str(phi), "count": count, "seed_recursion": count_mu_ur_upper(phi)}


def cmd_hecke(cfg: RunConfig, stdin: TextIO) -> dict:
    out: dict[str, Any] = {}
    if cfg.input_path is not None or cfg.r is None:
        data = _load_json(cfg, stdin)
        try:
            r = int(data["r"])
            factors = [(UnitSign.of(int(u)), parse_half(e, "exponent")) for u, e in data["factors"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError("hecke input needs {\"r\": int, \"factors\": [[sign, exponent], ...]}") from exc
        lam = hecke_eigenvalues(factors, r)
        out["r"] = r
        out["eigenvalues"] = [str(v) for v in lam]
    if cfg.r is not None:
        reps = []
        for i in range(cfg.r):
            found = cg.enumerate_hecke_reps(cfg.r, i, cfg.p)
            report = cg.verify_hecke_distinctness(found, cfg.r, cfg.p)
            expected = cg.expected_hecke_count(cfg.r, i, cfg.p)
            if len(found) != expected or not report.ok:
                raise InvariantViolation(f"Hecke cosets r={cfg.r} i={i}: {len(found)} found, "
                                         f"{expected} expected, {len(report.failures)} collisions")
            reps.append({"i": i, "count": len(found), "expected": expected, "pairs_checked": report.checked})
        out["cosets"] = {"r": cfg.r, "p": cfg.p, "by_index": reps}
    return out


def cmd_cosets(cfg: RunConfig, stdin: TextIO) -> dict:
    n = cfg.n if cfg.n is not None else 2
    m = cfg.m if cfg.m is not None else 1
    reps = cg.enumerate_coset_reps(n, m, cfg.p)
    expected = cg.expected_coset_count(n, cfg.p)
    report = cg.verify_coset_distinctness(reps, n, m, cfg.p)
    if len(reps) != expected or not report.ok:
        raise InvariantViolation(f"coset decomposition n={n} m={m} p={cfg.p}: {len(reps)} of {expected} "
                                 f"representatives, {len(report.failures)} collisions")
    return {"n": n, "m": m, "p": cfg.p, "count": len(reps), "expected": expected,
            "distinctness": report.to_json(), "representatives": [r.to_json() for r in reps]}


def cmd_levelraise(cfg: RunConfig, stdin: TextIO) -> dict:
    if cfg.n is not None:
        pairs = [(cfg.n, r) for r in ([cfg.r] if cfg.r is not None else range(1, cfg.n + 1))]
    else:
        pairs = [(n, r) for n in range(1, cfg.max_n + 1) for r in range(1, n + 1)]
    rows = []
    for n, r in pairs:
        if not 1 <= r <= n:
            raise InputError(f"need 1 <= r <= n, got n={n}, r={r}")
        for sign in (1, -1):
            w = cg.kernel_check(n, r, sign)
            val = cg.whittaker_value(n, r, sign)
            exp = cg.whittaker_expected(n, r)
            ok = val == exp or val == -exp
            if not w.is_zero or not ok:
                raise InvariantViolation(f"level raising fails at n={n} r={r} chi={sign}")
            rows.append({"n": n, "r": r, "chi": sign, "kernel_zero": w.is_zero,
                         "whittaker": str(val), "unit": 1 if val == exp else -1})
    return {"rows": rows}


def cmd_verify_all(cfg: RunConfig, stdin: TextIO) -> dict:
    results = [f() for f in suites.all_suites(cfg.p, cfg.max_n, cfg.max_d, cfg.seed)]
    report = {"ok": all(r.ok for r in results), "suites": [r.to_json() for r in results]}
    if not report["ok"]:
        bad = [r.name for r in results if not r.ok]
        raise InvariantViolation(f"failing suites: {', '.join(bad)}", report)
    return report


HANDLERS: dict[str, Callable[[RunConfig, TextIO], dict]] = {
    "validate": cmd_validate, "conductor": cmd_conductor, "epsilon": cmd_epsilon,
    "seed": cmd_seed, "construct": cmd_construct, "reduce": cmd_reduce,
    "count-ur": cmd_count_ur, "hecke": cmd_hecke, "cosets": cmd_cosets,
    "levelraise": cmd_levelraise, "verify-all": cmd_verify_all,
}


# --- output ------------------------------------------------------------------------------------


def _table(obj: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines += _table(v, indent + 1)
            else:
                lines.append(f"{pad}{k}: {json.dumps(v) if not isinstance(v, str) else v}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}-")
                lines += _table(item, indent + 1)
            else:
                lines.append(f"{pad}- {item}")
    else:
        lines.append(f"{pad}{obj}")
    return lines


def render(report: dict, fmt: str) -> str:
    if fmt == "table":
        return "\n".join(_table(json.loads(dumps(report))))
    return dumps(report)


def run(cfg: RunConfig, stdin: TextIO = sys.stdin, stdout: TextIO = sys.stdout,
        stderr: TextIO = sys.stderr) -> int:
    try:
        report = HANDLERS[cfg.command](cfg, stdin)
    except ArtifactError as exc:
        diag: dict[str, Any] = {"error": exc.kind, "message": str(exc.args[0]) if exc.args else ""}
        if len(exc.args) > 1 and isinstance(exc.args[1], dict):
            stdout.write(render(exc.args[1], cfg.fmt) + "\n")
        stderr.write(dumps(diag) + "\n")
        return exc.exit_code
    stdout.write(render(report, cfg.fmt) + "\n")
    return 0


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors, so they exit 1 rather than argparse's 2
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        sys.stderr.write(dumps({"error": "input", "message": message}) + "\n")
        raise SystemExit(InputError.exit_code)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="artifact", description="Newform conductor calculus for SO(2n+1).")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", dest="input_path", help="parameter JSON file ('-' or omitted: stdin)")
    parser.add_argument("--prime", dest="p", type=int, default=3)
    parser.add_argument("--max-n", type=int, default=6)
    parser.add_argument("--max-d", type=int, default=4)
    parser.add_argument("--format", dest="fmt", choices=("json", "table"), default="json")
    parser.add_argument("--seed", type=int, default=0, help="seed for random sweeps")
    parser.add_argument("--n", type=int, help="rank for cosets / levelraise")
    parser.add_argument("--m", type=int, help="level index for cosets")
    parser.add_argument("--r", type=int, help="GL rank for hecke cosets / levelraise")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(**vars(args))
    except InputError as exc:
        sys.stderr.write(dumps({"error": exc.kind, "message": str(exc)}) + "\n")
        return exc.exit_code
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
