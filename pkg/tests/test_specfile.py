"""Serialization round-trips, pins parsing, and report invariants."""

import json

import pytest

from willmore import gallery
from willmore import specfile as SF
from willmore.field import Element, parse_element


def E(text, d=0):
    return parse_element(text, d)


SCALARS = [
    ("0", 0), ("1", 0), ("-1", 0), ("i", 0), ("-i", 0), ("2i", 0),
    ("-5/2", 0), ("1/2+i/3", 0), ("i/6", 0), ("-1/4", 0),
    ("sqrt30/2", 30), ("-sqrt30i/7", 30), ("3-sqrt30", 30),
    ("1-i+sqrt30-sqrt30i/3", 30), ("-2/3+5i/7-11sqrt30/13", 30),
]


@pytest.mark.parametrize("text,d", SCALARS)
def test_scalar_round_trip(text, d):
    e = E(text, d)
    assert parse_element(SF.format_element(e), d) == e


def test_format_element_is_parseable_text():
    # repr() of Element is not parse-compatible; format_element must be
    for text, d in SCALARS:
        out = SF.format_element(E(text, d))
        assert "*" not in out and " " not in out


@pytest.mark.parametrize("name,d", [("totally_isotropic_r6", 0),
                                    ("one_isotropic_r5", 30)])
def test_surface_spec_round_trip(name, d):
    s = getattr(gallery, name)()
    spec = SF.surface_to_spec(s, d=d)
    body1 = SF.dump_json(spec)
    back = SF.spec_to_surface(json.loads(body1))
    assert all(a == b for a, b in zip(s.F, back.F))
    body2 = SF.dump_json(SF.surface_to_spec(back, d=d))
    assert body1 == body2  # parse -> serialize -> parse is the identity


def test_bundled_specs_parse():
    for name in ("example1", "example2", "example3"):
        spec = SF.load_json(SF.bundled_path(name))
        s = SF.spec_to_surface(spec)
        assert s.n == spec["ambient_dim"]
    for name in ("example2_ansatz", "example3_ansatz"):
        ansatz, pins, meta = SF.spec_to_ansatz(
            SF.load_json(SF.bundled_path(name)))
        assert ansatz.names and pins


def test_bundled_path_unknown():
    with pytest.raises(SF.SpecError):
        SF.bundled_path("no_such_example")


def test_bundled_ansatz_matches_gallery():
    ansatz2, _, _ = SF.spec_to_ansatz(
        SF.load_json(SF.bundled_path("example2_ansatz")))
    ref2 = gallery.three_end_ansatz()
    assert [t[0] for t in ansatz2.terms] == [t[0] for t in ref2.terms]
    assert all(a == b for (_, a), (_, b) in zip(ansatz2.terms, ref2.terms))

    ansatz3, pins3, _ = SF.spec_to_ansatz(
        SF.load_json(SF.bundled_path("example3_ansatz")))
    ref3 = gallery.four_end_ansatz()
    assert all(a == b for (_, a), (_, b) in zip(ansatz3.terms, ref3.terms))
    assert pins3[("v0", "v8")] == Element(1)
    assert all(pins3[(f"v{j}", "v10")] == Element(0) for j in range(11))


def test_pedal_point_and_g_round_trip():
    s = gallery.totally_isotropic_r6()
    x0 = [Element(0)] * 6
    spec = SF.surface_to_spec(s, pedal_point=x0)
    adj = SF.spec_to_adjoint(json.loads(SF.dump_json(spec)))
    assert adj.pedal_point == x0
    plain = {k: v for k, v in spec.items() if k != "pedal_point"}
    assert SF.spec_to_adjoint(plain) is None


def test_parse_pins_mapping_and_string():
    m = SF.parse_pins({"u2*w3": "1", "v0*v8": "-1/2"})
    assert m[("u2", "w3")] == Element(1)
    assert m[("v0", "v8")] == E("-1/2")
    t = SF.parse_pins("u2*w3=1;v0*v8=-1/2")
    assert t == m
    with pytest.raises(SF.SpecError):
        SF.parse_pins({"u2w3": "1"})


def test_report_invariants(tmp_path):
    rep = SF.Report("verify", SF.bundled_path("example1"), "exact")
    rep.add("a", "PASS")
    assert not rep.failed
    with pytest.raises(SF.SpecError):
        rep.add("b", "FAIL")  # non-PASS must carry a witness
    with pytest.raises(SF.SpecError):
        rep.add("b", "BOGUS", x=1)
    rep.add("b", "FAIL", residual=1e-3)
    assert rep.failed
    d = rep.as_dict()
    assert d["schema"] == SF.REPORT_SCHEMA
    assert len(d["input_sha256"]) == 64
    assert d["tool"].startswith("willmore ")


def test_dump_json_deterministic_and_timestamped(tmp_path):
    obj = {"schema": SF.SPEC_SCHEMA, "b": 1, "a": 2}
    b1 = SF.dump_json(obj)
    b2 = SF.dump_json({"a": 2, "schema": SF.SPEC_SCHEMA, "b": 1})
    assert b1 == b2
    stamped = SF.dump_json(obj, timestamp="2026-01-01T00:00:00Z")
    parsed = json.loads(stamped)
    assert parsed.pop("generated_at") == "2026-01-01T00:00:00Z"
    assert parsed == json.loads(b1)


def test_load_json_errors(tmp_path):
    p = tmp_path / "x.json"
    p.write_text("not json")
    with pytest.raises(SF.SpecError):
        SF.load_json(str(p))
    p.write_text('{"no_schema": 1}')
    with pytest.raises(SF.SpecError):
        SF.load_json(str(p))
    p.write_text('{"schema": "other/9"}')
    with pytest.raises(SF.SpecError):
        SF.load_json(str(p))
    with pytest.raises(SF.SpecError):
        SF.load_json(str(tmp_path / "missing.json"))


def test_spec_type_errors():
    with pytest.raises(SF.SpecError):
        SF.spec_to_surface({"schema": SF.SPEC_SCHEMA, "type": "ansatz"})
    with pytest.raises(SF.SpecError):
        SF.spec_to_ansatz({"schema": SF.SPEC_SCHEMA, "type": "surface"})
    with pytest.raises(SF.SpecError):
        SF.spec_to_ansatz({"schema": SF.SPEC_SCHEMA, "type": "ansatz"})
