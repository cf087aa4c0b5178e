"""Serialization of surfaces, ansatzes, and verification reports.

Spec files are JSON trees with every coefficient written as an exact
scalar string ("-1/4", "i/6", "sqrt30/2", "1/2+2i/3"), so exact data
round-trips bit-exactly.  Reports are JSON-compatible, deterministic for
fixed inputs (the timestamp lives in a separate field), and versioned.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .adjoint import AdjointSurface, adjoint, pedal
from .algebra import Poly, Rat
from .field import Element, FieldError, parse_element
from .surface import MinimalSurface

SPEC_SCHEMA = "willmore-spec/1"
REPORT_SCHEMA = "willmore-report/1"


class SpecError(ValueError):
    pass


# -- exact scalar strings -------------------------------------------------

def format_element(e: Element) -> str:
    """Inverse of :func:`willmore.field.parse_element`."""
    parts = []
    for q, unit in ((e.re, ""), (e.im, "i"),
                    (e.sre, f"sqrt{e.d}" if e.d else ""),
                    (e.sim, f"sqrt{e.d}i" if e.d else "")):
        if not q:
            continue
        sign = "-" if q < 0 else "+"
        num, den = abs(q).numerator, abs(q).denominator
        body = ("" if (num == 1 and unit) else str(num)) + unit
        if den != 1:
            body += f"/{den}"
        parts.append(sign + body)
    if not parts:
        return "0"
    joined = "".join(parts)
    return joined[1:] if joined[0] == "+" else joined


def _poly_out(p: Poly) -> list:
    return [format_element(c) for c in p.coeffs]


def _poly_in(coeffs, d: int, var: str = "z") -> Poly:
    return Poly([parse_element(c, d) for c in coeffs], var)


def _rat_out(r: Rat) -> dict:
    return {"num": _poly_out(r.num), "den": _poly_out(r.den)}


def _rat_in(obj, d: int) -> Rat:
    if not isinstance(obj, dict) or "num" not in obj:
        raise SpecError("rational entries need {num: [...], den: [...]}")
    return Rat(_poly_in(obj["num"], d), _poly_in(obj.get("den", ["1"]), d))


def _vector_out(v) -> list:
    return [format_element(c) for c in v]


def _vector_in(obj, d: int) -> list:
    return [parse_element(c, d) for c in obj]


# -- surface specs --------------------------------------------------------

def surface_to_spec(s: MinimalSurface, pedal_point=None, g: Rat | None = None,
                    charts: dict | None = None, d: int = 0) -> dict:
    spec = {
        "schema": SPEC_SCHEMA,
        "type": "surface",
        "ambient_dim": s.n,
        "components": [_rat_out(f) for f in s.F],
    }
    if d:
        spec["field"] = {"sqrt": d}
    if s.base_point is not None:
        spec["base_point"] = _vector_out(s.base_point)
    if pedal_point is not None:
        spec["pedal_point"] = _vector_out(pedal_point)
    if g is not None:
        spec["g"] = _rat_out(g)
    if charts:
        spec["charts"] = dict(charts)
    return spec


def spec_field(spec: dict) -> int:
    return int(spec.get("field", {}).get("sqrt", 0))


def spec_to_surface(spec: dict) -> MinimalSurface:
    if spec.get("type") != "surface":
        raise SpecError(f"not a surface spec: type={spec.get('type')!r}")
    d = spec_field(spec)
    try:
        F = [_rat_in(c, d) for c in spec["components"]]
        base = (_vector_in(spec["base_point"], d)
                if "base_point" in spec else None)
    except (KeyError, FieldError, TypeError) as exc:
        raise SpecError(f"malformed surface spec: {exc}") from exc
    return MinimalSurface(F, int(spec["ambient_dim"]), base)


def spec_to_adjoint(spec: dict) -> AdjointSurface | None:
    """The transform named by the spec (pedal point or g), if any."""
    d = spec_field(spec)
    s = spec_to_surface(spec)
    if "pedal_point" in spec:
        return pedal(s, _vector_in(spec["pedal_point"], d))
    if "g" in spec:
        return adjoint(s, _rat_in(spec["g"], d))
    return None


# -- ansatz specs ---------------------------------------------------------

def ansatz_to_spec(kind: str, **kw) -> dict:
    return {"schema": SPEC_SCHEMA, "type": "ansatz", "kind": kind, **kw}


def spec_to_ansatz(spec: dict):
    """(Ansatz, pins, meta) from an ansatz spec."""
    from .gram import numerator_ansatz, pole_ansatz
    if spec.get("type") != "ansatz":
        raise SpecError(f"not an ansatz spec: type={spec.get('type')!r}")
    d = spec_field(spec)
    if "poles" in spec:
        poles, names = {}, {}
        for entry in spec["poles"]:
            loc = parse_element(str(entry["location"]), d)
            order = int(entry["order"])
            poles[loc] = order
            for k, name in zip(range(order, 1, -1),
                               entry.get("names", [])):
                names[(loc, k)] = name
        tail = spec.get("tail")
        tail_degree = None
        if tail is not None:
            tail_degree = int(tail["degree"])
            for j, name in enumerate(tail.get("names", [])):
                names[("tail", j)] = name
        ansatz = pole_ansatz(poles, tail_degree, names)
    elif "numerator_degree" in spec:
        den = _poly_in(spec["denominator"], d)
        ansatz = numerator_ansatz(int(spec["numerator_degree"]), den,
                                  spec.get("prefix", "v"))
    else:
        raise SpecError("ansatz spec needs 'poles' or 'numerator_degree'")
    pins = parse_pins(spec.get("pins", {}), d)
    meta = {"ambient_dim": spec.get("ambient_dim")}
    return ansatz, pins, meta


def parse_pins(obj, d: int = 0) -> dict:
    """Pins from {"j*k": "value"} mappings or "j*k=value;..." strings."""
    if isinstance(obj, str):
        obj = dict(item.split("=", 1) for item in obj.split(";") if item)
    pins = {}
    for key, value in obj.items():
        j, _, k = key.partition("*")
        if not k:
            raise SpecError(f"pin key {key!r} must look like 'name*name'")
        pins[(j.strip(), k.strip())] = parse_element(str(value), d)
    return pins


# -- reports --------------------------------------------------------------

@dataclass
class Report:
    command: str
    input_path: str
    mode: str
    checks: list = field(default_factory=list)

    def add(self, check_id: str, status: str, **witness):
        if status not in ("PASS", "FAIL", "SUSPECT"):
            raise SpecError(f"bad status {status!r}")
        if status != "PASS" and not witness:
            raise SpecError("non-PASS checks must carry a witness")
        self.checks.append({"id": check_id, "status": status,
                            "witness": witness})

    @property
    def failed(self) -> bool:
        return any(c["status"] == "FAIL" for c in self.checks)

    def as_dict(self) -> dict:
        from . import __version__
        return {
            "schema": REPORT_SCHEMA,
            "tool": f"willmore {__version__}",
            "command": self.command,
            "input": self.input_path,
            "input_sha256": _file_hash(self.input_path),
            "mode": self.mode,
            "checks": self.checks,
        }


def _file_hash(path: str) -> str:
    try:
        with open(path, "rb") as fh:
            return hashlib.sha256(fh.read()).hexdigest()
    except OSError:
        return ""


def _default(obj):
    if isinstance(obj, Element):
        return format_element(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return repr(obj)


def dump_json(obj: dict, path: str | None = None,
              timestamp: str | None = None) -> str:
    """Deterministic serialization; the (optional) timestamp is kept in a
    separate top-level field so the body stays byte-identical."""
    body = json.dumps(obj, indent=2, sort_keys=True, default=_default)
    if timestamp is not None:
        body = body[:-2] + f',\n  "generated_at": "{timestamp}"\n}}'
    if path:
        with open(path, "w") as fh:
            fh.write(body + "\n")
    return body


def bundled_path(name: str) -> str:
    """Filesystem path of a bundled golden spec, e.g. "example1",
    "example2_ansatz"."""
    from importlib.resources import files
    p = files("willmore.data") / f"{name}.json"
    if not p.is_file():
        raise SpecError(f"no bundled spec {name!r}")
    return str(p)


def load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            spec = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecError(f"cannot read spec {path!r}: {exc}") from exc
    if not isinstance(spec, dict) or "schema" not in spec:
        raise SpecError(f"{path!r} is not a spec file (missing schema)")
    if spec["schema"] != SPEC_SCHEMA:
        raise SpecError(f"unsupported schema {spec['schema']!r}")
    return spec
