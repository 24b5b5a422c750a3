"""JSON encoding of parameters, segments and reports.

Half-integers travel as strings ("3/2") or integers, never floats.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Mapping

from .errors import InputError
from .gl_ring import Segment, SupercuspidalLabel
from .so_params import DiscreteLParameter, ReductionNode, Summand
from .symbolics import HalfInt, QLaurent, UnitSign

_LABEL_KEYS = {"name", "dim_k", "ramified", "selfdual_kind", "unram_sign", "base_conductor"}


def parse_half(value: Any, what: str = "value") -> HalfInt:
    if isinstance(value, bool) or isinstance(value, float):
        raise InputError(f"{what}: give half-integers as strings like \"3/2\" or as integers")
    try:
        return HalfInt.of(Fraction(value) if isinstance(value, str) else value)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InputError(f"{what}: {value!r} is not a half-integer") from exc


def label_from_json(data: Mapping[str, Any]) -> SupercuspidalLabel:
    if not isinstance(data, Mapping):
        raise InputError(f"label must be an object, got {data!r}")
    extra = set(data) - _LABEL_KEYS
    if extra:
        raise InputError(f"unknown label fields {sorted(extra)}")
    try:
        name = data["name"]
        ramified = bool(data.get("ramified", False))
    except KeyError as exc:
        raise InputError(f"label is missing {exc.args[0]!r}") from exc
    sign = data.get("unram_sign")
    if sign is not None and sign not in (1, -1):
        raise InputError(f"label {name}: unram_sign must be 1 or -1")
    return SupercuspidalLabel(
        name=str(name),
        dim_k=data.get("dim_k", 1),
        ramified=ramified,
        selfdual_kind=data.get("selfdual_kind", "orthogonal"),
        unram_sign=None if sign is None else UnitSign(sign),
        base_conductor=data.get("base_conductor", 1 if ramified else 0),
    )


def label_to_json(lab: SupercuspidalLabel) -> dict:
    out = {"name": lab.name, "dim_k": lab.dim_k, "ramified": lab.ramified,
           "selfdual_kind": lab.selfdual_kind, "base_conductor": lab.base_conductor}
    if lab.unram_sign is not None:
        out["unram_sign"] = lab.unram_sign.value
    return out


def parameter_from_json(data: Mapping[str, Any]) -> DiscreteLParameter:
    """Accepts {"n", "labels": {name: label}, "summands": [{"label": name | label, "kappa"}]}."""
    if not isinstance(data, Mapping) or "summands" not in data:
        raise InputError("parameter JSON needs a 'summands' list")
    named = {k: label_from_json({"name": k, **v}) for k, v in data.get("labels", {}).items()}
    summands = []
    for i, item in enumerate(data["summands"]):
        if not isinstance(item, Mapping) or "label" not in item or "kappa" not in item:
            raise InputError(f"summand {i}: needs 'label' and 'kappa'")
        lab = item["label"]
        if isinstance(lab, str):
            if lab not in named:
                raise InputError(f"summand {i}: unknown label {lab!r}")
            lab = named[lab]
        else:
            lab = label_from_json(lab)
        summands.append(Summand(lab, parse_half(item["kappa"], f"summand {i} kappa")))
    n = data.get("n")
    if n is not None and (not isinstance(n, int) or isinstance(n, bool) or n < 0):
        raise InputError("n must be a non-negative integer")
    return DiscreteLParameter(summands, n)


def parameter_to_json(phi: DiscreteLParameter) -> dict:
    labels = {l.name: {k: v for k, v in label_to_json(l).items() if k != "name"} for l in phi.labels()}
    return {"n": phi.n, "labels": labels,
            "summands": [{"label": s.label.name, "kappa": s.kappa.to_json()} for s in phi.summands]}


def segment_from_json(data: Mapping[str, Any], labels: Mapping[str, SupercuspidalLabel]) -> Segment:
    lab = data.get("label")
    lab = labels.get(lab) if isinstance(lab, str) else label_from_json(lab)
    if lab is None:
        raise InputError(f"segment: unknown label {data.get('label')!r}")
    return Segment(lab, parse_half(data["x"], "segment x"), parse_half(data["y"], "segment y"))


def segment_to_json(seg: Segment) -> dict:
    return {"label": seg.label.name, "x": seg.x.to_json(), "y": seg.y.to_json(), "display": str(seg)}


def node_to_json(node: ReductionNode) -> dict:
    return {
        "step": node.step,
        "parameter": str(node.parameter),
        "segments_peeled": [segment_to_json(s) for s in node.segments_peeled],
        "a_induced": node.a_induced,
        "c_param": node.c_param,
        "relation": node.relation,
        "next": None if node.next_parameter is None else str(node.next_parameter),
    }


def laurent_to_json(p: QLaurent) -> dict:
    return {"terms": p.to_json(), "display": str(p)}


def dumps(obj: Any) -> str:
    """Byte-stable JSON."""
    return json.dumps(obj, sort_keys=True, indent=2, default=_default)


def _default(obj: Any) -> Any:
    if isinstance(obj, HalfInt):
        return obj.to_json()
    if isinstance(obj, UnitSign):
        return obj.value
    if isinstance(obj, QLaurent):
        return laurent_to_json(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (set, frozenset, tuple)):
        return list(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")
