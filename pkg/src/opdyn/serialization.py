"""Reading and writing system-description files.

A system file is a JSON object::

    {
      "description": "free text",
      "p": 1,                       # number or "p/q"
      "field": "real",              # or "complex"
      "exact": true,                # rational weights, exact arithmetic
      "invertible": true,           # optional claim, checked by validate
      "orbits": [
        {
          "kind": "bilateral",      # or "cycle" (needs "length") or "unilateral"
          "forward":  {"transient": [[w, m], ...], "period": 1,
                       "weights": [w, ...], "masses": [m, ...], "mass_ratio": "1/2"},
          "backward": {...} or null,
          "overrides": {"position": [w, m], ...}
        }
      ]
    }

Weights are numbers, rational strings "p/q" or ``[re, im]`` pairs; masses
are positive integers, rational strings or decimals (read exactly).
"""

from __future__ import annotations

import json
from fractions import Fraction

from .atomic_system import AtomicSystem, MapKind, Orbit, TailSpec
from .errors import ParseError, SchemaError


def _rational(value, path: str) -> Fraction:
    if isinstance(value, bool):
        raise SchemaError(path, "expected a number, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(str(value))
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise SchemaError(path, f"not a rational literal: {value!r}") from None
    raise SchemaError(path, f"expected a number or 'p/q' string, got {type(value).__name__}")


def _weight(value, path: str):
    if isinstance(value, list):
        if len(value) != 2 or not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                                       for v in value):
            raise SchemaError(path, "complex weights are [re, im] pairs of numbers")
        return complex(value[0], value[1])
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return value
    return _rational(value, path)


def _mass(value, path: str) -> Fraction:
    m = _rational(value, path)
    if m <= 0:
        raise SchemaError(path, "atom masses must be positive")
    return m


def _get(obj: dict, key: str, path: str, kind=None, required: bool = True, default=None):
    if key not in obj:
        if required:
            raise SchemaError(f"{path}.{key}" if path else key, "missing required field")
        return default
    value = obj[key]
    if kind is not None and (not isinstance(value, kind) or kind is int and isinstance(value, bool)):
        name = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise SchemaError(f"{path}.{key}" if path else key, f"expected {name}")
    return value


def _tail(obj, path: str) -> TailSpec:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    transient = []
    for i, entry in enumerate(_get(obj, "transient", path, list, required=False, default=[])):
        p = f"{path}.transient[{i}]"
        if not isinstance(entry, list) or len(entry) != 2:
            raise SchemaError(p, "transient entries are [weight, mass] pairs")
        transient.append((_weight(entry[0], p + "[0]"), _mass(entry[1], p + "[1]")))
    period = _get(obj, "period", path, int, required=False, default=None)
    weights = [_weight(w, f"{path}.weights[{i}]")
               for i, w in enumerate(_get(obj, "weights", path, list))]
    if period is None:
        period = len(weights)
    if period < 1 or len(weights) != period:
        raise SchemaError(f"{path}.weights", f"expected {period} periodic weights")
    masses = obj.get("masses")
    if masses is not None:
        if not isinstance(masses, list) or len(masses) != period:
            raise SchemaError(f"{path}.masses", f"expected {period} periodic masses")
        masses = tuple(_mass(m, f"{path}.masses[{i}]") for i, m in enumerate(masses))
    ratio = _mass(obj.get("mass_ratio", 1), f"{path}.mass_ratio")
    try:
        return TailSpec(tuple(transient), period, tuple(weights), ratio, masses)
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from None


def _orbit(obj, path: str) -> Orbit:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    kind_name = _get(obj, "kind", path, str)
    try:
        kind = MapKind(kind_name)
    except ValueError:
        raise SchemaError(f"{path}.kind", f"unknown orbit kind {kind_name!r}") from None
    forward = _tail(_get(obj, "forward", path), f"{path}.forward")
    backward = obj.get("backward")
    if kind is MapKind.BILATERAL:
        if backward is None:
            raise SchemaError(f"{path}.backward", "a bilateral chain needs a backward tail")
        backward = _tail(backward, f"{path}.backward")
    elif backward is not None:
        raise SchemaError(f"{path}.backward", f"a {kind.value} orbit has no backward tail")
    length = None
    if kind is MapKind.CYCLE:
        length = _get(obj, "length", path, int)
        if length < 1:
            raise SchemaError(f"{path}.length", "cycle length must be positive")
    overrides = []
    for key, entry in sorted(_get(obj, "overrides", path, dict, required=False, default={}).items(),
                             key=lambda kv: _position(kv[0], path)):
        p = f"{path}.overrides.{key}"
        pos = _position(key, path)
        if not isinstance(entry, list) or len(entry) != 2:
            raise SchemaError(p, "overrides map a position to [weight, mass]")
        overrides.append((pos, _weight(entry[0], p), _mass(entry[1], p)))
    try:
        return Orbit(kind, forward, backward, length, tuple(overrides))
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from None


def _position(key: str, path: str) -> int:
    try:
        return int(key)
    except ValueError:
        raise SchemaError(f"{path}.overrides", f"position keys are integers, got {key!r}") from None


def system_from_dict(data) -> AtomicSystem:
    if not isinstance(data, dict):
        raise SchemaError("", "top level must be an object")
    orbits = _get(data, "orbits", "", list)
    if not orbits:
        raise SchemaError("orbits", "at least one orbit is required")
    p_raw = data.get("p", 1)
    p = p_raw if isinstance(p_raw, float) else _rational(p_raw, "p")
    if not float(p) >= 1:
        raise SchemaError("p", "p must be >= 1")
    field = data.get("field", "real")
    if field not in ("real", "complex"):
        raise SchemaError("field", "expected 'real' or 'complex'")
    exact = data.get("exact", False)
    if not isinstance(exact, bool):
        raise SchemaError("exact", "expected true or false")
    invertible = data.get("invertible")
    if invertible is not None and not isinstance(invertible, bool):
        raise SchemaError("invertible", "expected true, false or null")
    description = data.get("description", "")
    if not isinstance(description, str):
        raise SchemaError("description", "expected a string")
    parsed = tuple(_orbit(o, f"orbits[{i}]") for i, o in enumerate(orbits))
    try:
        system = AtomicSystem(parsed, p=p, scalar_field=field, exact=exact,
                              claims_invertible=invertible, description=description)
        system._layouts  # force the canonical layout so bad weights surface here
    except ValueError as exc:
        raise SchemaError("orbits", str(exc)) from None
    return system


def parse_system(text: str) -> AtomicSystem:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return system_from_dict(data)


def load_system(path) -> AtomicSystem:
    with open(path, encoding="utf-8") as fh:
        return parse_system(fh.read())


# ---------------------------------------------------------------------------
# emission


def _emit_rational(q):
    q = Fraction(q)
    return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _emit_weight(w):
    if isinstance(w, complex):
        return [w.real, w.imag]
    if isinstance(w, Fraction):
        return _emit_rational(w)
    return w


def _emit_tail(t: TailSpec) -> dict:
    out = {
        "transient": [[_emit_weight(w), _emit_rational(m)] for w, m in t.transient],
        "period": t.period,
        "weights": [_emit_weight(w) for w in t.periodic_weights],
        "mass_ratio": _emit_rational(t.mass_ratio),
    }
    if t.periodic_masses is not None:
        out["masses"] = [_emit_rational(m) for m in t.periodic_masses]
    return out


def system_to_dict(system: AtomicSystem) -> dict:
    orbits = []
    for o in system.orbits:
        d = {"kind": o.kind.value, "forward": _emit_tail(o.forward),
             "backward": None if o.backward is None else _emit_tail(o.backward)}
        if o.length is not None:
            d["length"] = o.length
        if o.overrides:
            d["overrides"] = {str(pos): [_emit_weight(w), _emit_rational(m)]
                              for pos, w, m in o.overrides}
        orbits.append(d)
    out = {
        "description": system.description,
        "p": system.p if isinstance(system.p, float) else _emit_rational(system.p),
        "field": system.scalar_field,
        "exact": system.exact,
        "orbits": orbits,
    }
    if system.claims_invertible is not None:
        out["invertible"] = system.claims_invertible
    return out


def emit_system(system: AtomicSystem) -> str:
    return json.dumps(system_to_dict(system), indent=2, sort_keys=True) + "\n"
