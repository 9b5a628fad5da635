"""Machine-readable reports: JSON-safe encoding, analysis reports and CSV traces."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from enum import Enum
from fractions import Fraction

from . import __version__
from .atomic_system import AtomId, AtomicSystem, validate
from .cfs_expansivity import SpaceKind, analyze_cfs
from .dissipative_conjugacy import (
    ConjugacyPackage,
    build_conjugacy,
    verify_conjugacy,
    verify_shift_factor,
)
from .errors import OpdynError
from .growth import Mode, Notion, Verdict, log_criterion
from .lp_expansivity import analyze_lp
from .orbit_hopf import hopf_decompose

ALL_NOTIONS = tuple(Notion)


def encode(value):
    """Turn analysis values into JSON-compatible data.

    Rationals become ``"p/q"`` strings (integers stay integers), infinities
    become ``"+inf"``/``"-inf"`` and complex numbers ``[re, im]`` pairs.
    """
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        if math.isinf(value):
            return "+inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return value
    if isinstance(value, complex):
        return [encode(value.real), encode(value.imag)]
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, AtomId):
        return [value.orbit, value.position]
    if dataclasses.is_dataclass(value):
        return {f.name: encode(getattr(value, f.name)) for f in dataclasses.fields(value)
                if not callable(getattr(value, f.name))}
    if isinstance(value, dict):
        return {str(encode(k)) if not isinstance(k, str) else k: encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        return [encode(v) for v in value]
    raise TypeError(f"cannot encode {type(value).__name__}")


def dumps(report: dict) -> str:
    return json.dumps(encode(report), indent=2, sort_keys=True) + "\n"


def _error(exc: OpdynError) -> dict:
    return {"error": type(exc).__name__, "message": str(exc)}


def verdict_dict(v: Verdict) -> dict:
    out = {
        "notion": v.notion.value,
        "status": v.status.value,
        "horizon": v.horizon,
        "reason": v.reason,
        "rates": [r.as_dict() for r in v.rate_data],
    }
    if v.witness is not None:
        out["witness"] = {"atom": v.witness.atom, "n": v.witness.n,
                          "log10_value": v.witness.log10_value}
    if v.partition is not None:
        out["partition"] = [{"orbit": j, "class": part.value} for j, part in v.partition]
    return out


def validate_report(system: AtomicSystem) -> dict:
    cert = validate(system)
    return {"c": cert.c, "c_witness": cert.c_witness,
            "c_tilde": cert.c_tilde, "c_tilde_witness": cert.c_tilde_witness}


def hopf_report(system: AtomicSystem) -> dict:
    d = hopf_decompose(system)
    return {
        "conservative_orbits": d.conservative_orbits,
        "dissipative_orbits": d.dissipative_orbits,
        "wandering_set": d.wandering_set,
        "wandering_mass": d.wandering_mass,
        "dissipative": d.dissipative,
    }


def expansivity_report(system: AtomicSystem, space: str, notions, horizon: int,
                       threshold: float) -> dict:
    out = {"space": space, "verdicts": {}}
    for notion in notions:
        try:
            if space == "lp":
                v = analyze_lp(system, notion, horizon, threshold)
            else:
                v = analyze_cfs(system, space, notion, horizon, threshold)
            out["verdicts"][Notion(notion).value] = verdict_dict(v)
        except OpdynError as exc:
            out["verdicts"][Notion(notion).value] = _error(exc)
    return out


def package_dict(package: ConjugacyPackage) -> dict:
    d = package.decomposition
    table = [{"atom": x, "nu": package.nu[x], "transport": package.transport[x]}
             for x in sorted(package.nu)]
    dist = package.distortion
    return {
        "wandering_set": d.wandering_set,
        "wandering_mass": d.wandering_mass,
        "nu_table": table,
        "nu_total": package.nu_total,
        "chain_totals": {str(j): v for j, v in sorted(package.chain_totals.items())},
        "u": {str(k): v for k, v in sorted(package.u.items())},
        "distortion": {"K": "unbounded" if dist.K is None else dist.K,
                       "bounded": dist.bounded,
                       "witnesses": [{"k": k, "spread": s} for k, s in dist.witnesses],
                       "exact": dist.exact},
        "chaos": package.chaos,
    }


def package_from_dict(data: dict, package: ConjugacyPackage) -> ConjugacyPackage:
    """Replace the tables of ``package`` with those stored in a report."""
    from .serialization import _rational

    def scalar(v):
        if isinstance(v, list):
            return complex(v[0], v[1])
        if isinstance(v, str):
            return _rational(v, "nu_table")
        return v

    nu, transport = {}, {}
    for row in data["nu_table"]:
        x = AtomId(int(row["atom"][0]), int(row["atom"][1]))
        nu[x] = scalar(row["nu"])
        transport[x] = scalar(row["transport"])
    return dataclasses.replace(package, nu=nu, transport=transport)


def conjugacy_report(system: AtomicSystem, horizon: int) -> dict:
    return package_dict(build_conjugacy(system, horizon=horizon))


def verify_report(system: AtomicSystem, package: ConjugacyPackage, samples: int, seed: int) -> dict:
    rep = verify_conjugacy(package, system, samples=samples, seed=seed)
    out = {
        "samples": rep.samples,
        "seed": rep.seed,
        "exact": rep.exact,
        "max_isometry_deviation": rep.max_isometry_deviation,
        "max_intertwining_deviation": rep.max_intertwining_deviation,
        "max_inverse_deviation": rep.max_inverse_deviation,
        "max_deviation": rep.max_deviation,
        "passed": True,
    }
    if package.distortion.bounded:
        out["shift_factor_max_deviation"] = verify_shift_factor(
            package, system, samples=samples, seed=seed).max_deviation
    return out


def report_all(system: AtomicSystem, horizon: int, threshold: float, samples: int,
               seed: int) -> dict:
    """Every analysis that applies to ``system``; errors are recorded, not raised."""
    out = {"version": __version__, "description": system.description, "horizon": horizon,
           "threshold": threshold, "samples": samples, "seed": seed}

    def attempt(key, fn):
        try:
            out[key] = fn()
        except OpdynError as exc:
            out[key] = _error(exc)

    attempt("validate", lambda: validate_report(system))
    attempt("hopf", lambda: hopf_report(system))
    attempt("lp", lambda: expansivity_report(system, "lp", ALL_NOTIONS, horizon, threshold))
    for space in SpaceKind:
        attempt(space.value,
                lambda s=space: expansivity_report(system, s.value, ALL_NOTIONS, horizon, threshold))

    def conj():
        package = build_conjugacy(system, horizon=horizon)
        return {"package": package_dict(package),
                "verification": verify_report(system, package, samples, seed)}

    attempt("conjugacy", conj)
    return out


# ---------------------------------------------------------------------------
# CSV traces


def trace_rows(system: AtomicSystem, mode: Mode | str, horizon: int,
               atom: AtomId | None = None) -> list[tuple[int, float, int]]:
    """``(n, log10 value, sign)`` of the criterion quantity for one atom.

    n runs over ``[-horizon, horizon]``, or ``[0, horizon]`` without an inverse.
    """
    mode = Mode(mode)
    atom = atom or system.atom(0, 0)
    start = -horizon if system.invertible else 0
    rows = []
    for n in range(start, horizon + 1):
        v = log_criterion(system, mode, atom, n)
        if v == -math.inf:
            rows.append((n, -math.inf, 0))
        else:
            rows.append((n, v / math.log(10), 1))
    return rows


def emit_plot_data(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "log10_value", "sign"])
    for n, value, sign in rows:
        text = "-inf" if value == -math.inf else repr(round(value, 12) + 0.0)
        writer.writerow([n, text, sign])
    return buf.getvalue()
