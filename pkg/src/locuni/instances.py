"""Instance and trace files: JSON schemas, parsing, canonical serialization.

Instances and traces are plain JSON so that independent verifiers can be
written in any language.  Rationals are encoded as reduced "p/q" strings
(plain "p" when the denominator is 1), exponent vectors as integer
arrays.  Serialization is canonical (sorted keys, fixed separators), so
identical runs produce byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from .errors import CenteringError, EngineError, InstanceError, MembershipError
from .rankone import DEFAULT_FUEL, FULL_IDEAL, PAIR_MIN, Strategy
from .reduction import MODES, MODE_EMBEDDED, MODE_LU, Certificate, Trace, TraceStep
from .ringmodel import RingModel, monomial_member
from .values import ExpVec, MonomialValuation

TRACE_FORMAT = 1


@dataclass(frozen=True)
class Instance:
    name: str
    dim: int
    levels: int
    weights: tuple[tuple[Fraction, ...], ...]
    generators: tuple[ExpVec, ...]
    targets: tuple[ExpVec, ...]
    mode: str
    strategy: str
    fuel: int

    def valuation(self) -> MonomialValuation:
        return MonomialValuation(self.weights)

    def model(self) -> RingModel:
        return RingModel(dim=self.dim, gens=self.generators, val=self.valuation())

    def strategy_obj(self) -> Strategy:
        return Strategy(kind=self.strategy, fuel=self.fuel)


def _fraction(x: Any, where: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise InstanceError(f"{where}: expected an integer or 'p/q' string, got {x!r}")
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise InstanceError(f"{where}: bad rational {x!r}") from exc


def _int_vector(x: Any, length: int, where: str) -> ExpVec:
    if not isinstance(x, list) or len(x) != length:
        raise InstanceError(f"{where}: expected an integer array of length {length}")
    out = []
    for v in x:
        if isinstance(v, bool) or not isinstance(v, int):
            raise InstanceError(f"{where}: non-integer entry {v!r}")
        out.append(v)
    return tuple(out)


def instance_from_dict(data: Any, name_hint: str = "instance") -> Instance:
    if not isinstance(data, dict):
        raise InstanceError("instance file must contain a JSON object")
    name = data.get("name", name_hint)
    if not isinstance(name, str):
        raise InstanceError("name must be a string")
    dim = data.get("dim")
    levels = data.get("levels")
    for label, v in (("dim", dim), ("levels", levels)):
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise InstanceError(f"{label} must be a positive integer")
    weights_raw = data.get("weights")
    if not isinstance(weights_raw, list) or len(weights_raw) != levels:
        raise InstanceError(f"weights must be a {levels}x{dim} matrix")
    weights = []
    for i, row in enumerate(weights_raw):
        if not isinstance(row, list) or len(row) != dim:
            raise InstanceError(f"weights row {i} must have {dim} entries")
        weights.append(tuple(_fraction(x, f"weights[{i}]") for x in row))
    gens_raw = data.get("generators")
    if not isinstance(gens_raw, list) or not gens_raw:
        raise InstanceError("generators must be a nonempty list")
    generators = tuple(
        sorted({_int_vector(g, dim, f"generators[{i}]") for i, g in enumerate(gens_raw)})
    )
    targets_raw = data.get("targets", [])
    if not isinstance(targets_raw, list):
        raise InstanceError("targets must be a list")
    targets = tuple(_int_vector(t, dim, f"targets[{i}]") for i, t in enumerate(targets_raw))
    mode = data.get("mode", MODE_LU)
    if mode not in MODES:
        raise InstanceError(f"mode must be one of {MODES}, got {mode!r}")
    strategy = data.get("strategy", PAIR_MIN)
    if strategy not in (PAIR_MIN, FULL_IDEAL):
        raise InstanceError(f"strategy must be {PAIR_MIN!r} or {FULL_IDEAL!r}")
    fuel = data.get("fuel", DEFAULT_FUEL)
    if isinstance(fuel, bool) or not isinstance(fuel, int) or fuel < 1:
        raise InstanceError("fuel must be a positive integer")

    inst = Instance(
        name=name,
        dim=dim,
        levels=levels,
        weights=tuple(weights),
        generators=generators,
        targets=targets,
        mode=mode,
        strategy=strategy,
        fuel=fuel,
    )
    validate_instance(inst)
    return inst


def validate_instance(inst: Instance) -> RingModel:
    """Centering, target membership and target ordering checks."""
    try:
        model = inst.model()
    except CenteringError as exc:
        raise InstanceError(str(exc)) from exc
    except EngineError as exc:
        raise InstanceError(str(exc)) from exc
    for t in inst.targets:
        if monomial_member(t, model) is None:
            raise InstanceError(f"target {list(t)} is not a monomial of the ring")
    if inst.mode == MODE_EMBEDDED:
        vals = [model.val.value(t) for t in inst.targets]
        for lo, hi in zip(vals, vals[1:]):
            if lo > hi:
                raise InstanceError("embedded targets must be sorted by value")
    return model


def parse_instance(path: str | Path) -> Instance:
    p = Path(path)
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except OSError as exc:
        raise InstanceError(f"cannot read {p}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{p} is not valid JSON: {exc}") from exc
    return instance_from_dict(data, name_hint=p.stem)


def _frac_str(x: Fraction) -> str:
    return str(x)


def instance_to_dict(inst: Instance) -> dict:
    return {
        "name": inst.name,
        "dim": inst.dim,
        "levels": inst.levels,
        "weights": [[_frac_str(x) for x in row] for row in inst.weights],
        "generators": [list(g) for g in inst.generators],
        "targets": [list(t) for t in inst.targets],
        "mode": inst.mode,
        "strategy": inst.strategy,
        "fuel": inst.fuel,
    }


def _step_to_dict(ts: TraceStep) -> dict:
    mult = None
    if ts.multiplier is not None and any(ts.multiplier):
        mult = list(ts.multiplier)
    return {
        "tag": ts.tag,
        "level": ts.level,
        "ideal": [list(u) for u in ts.step.ideal],
        "pivot": list(ts.step.pivot),
        "adjoined": [list(u) for u in ts.step.adjoined],
        "multiplier": mult,
    }


def _certificate_to_dict(cert: Certificate) -> dict:
    out: dict = {
        "parameters": [list(p) for p in cert.parameters],
        "expressions": [
            {
                "target": list(e.target),
                "exponents": list(e.dense(cert.parameters)),
                "unit": list(e.unit),
            }
            for e in cert.expressions
        ],
    }
    out["witnesses"] = (
        None if cert.witnesses is None else [list(w) for w in cert.witnesses]
    )
    return out


def trace_to_dict(inst: Instance, trace: Trace) -> dict:
    return {
        "format": TRACE_FORMAT,
        "instance": instance_to_dict(inst),
        "status": trace.status,
        "steps": [_step_to_dict(ts) for ts in trace.steps],
        "final": {
            "generators": [list(g) for g in trace.final.gens],
            "inverted": [list(g) for g in sorted(trace.final.inverted)],
        },
        "certificate": (
            None if trace.certificate is None else _certificate_to_dict(trace.certificate)
        ),
        "fuel": {
            "limit": trace.fuel_limit,
            "used": trace.fuel_used,
            "by_tag": trace.fuel_by_tag,
        },
    }


def dumps_canonical(data: dict) -> str:
    return json.dumps(data, sort_keys=True, indent=1, separators=(",", ": ")) + "\n"


def load_trace(path: str | Path) -> dict:
    p = Path(path)
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except OSError as exc:
        raise InstanceError(f"cannot read {p}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{p} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or data.get("format") != TRACE_FORMAT:
        raise InstanceError("trace file must be a JSON object with format 1")
    return data
