"""CLI exit-code contract, golden-spec pipelines, and mesh export."""

import json
import math

import pytest

from willmore import specfile as SF
from willmore.cli import main

EX1 = SF.bundled_path("example1")
EX2A = SF.bundled_path("example2_ansatz")
EX3 = SF.bundled_path("example3")
EX3A = SF.bundled_path("example3_ansatz")


def run(*argv):
    return main(list(argv))


def report(path):
    with open(path) as fh:
        return json.load(fh)


def checks(path):
    return {c["id"]: c for c in report(path)["checks"]}


def write_spec(tmp_path, spec, name="spec.json"):
    p = tmp_path / name
    p.write_text(SF.dump_json(spec))
    return str(p)


def plane_spec():
    # x = 2 Re F = (Re z, Im z, 0): F'.F' = 1/4 - 1/4 = 0
    return {
        "schema": SF.SPEC_SCHEMA, "type": "surface", "ambient_dim": 3,
        "components": [
            {"num": ["0", "1/4"], "den": ["1"]},
            {"num": ["0", "-i/4"], "den": ["1"]},
            {"num": ["0"], "den": ["1"]},
        ],
    }


# -- exit-code contract ---------------------------------------------------

def test_missing_spec_is_exit_2(tmp_path, capsys):
    assert run("verify", str(tmp_path / "nope.json")) == 2
    assert "error" in capsys.readouterr().err


def test_nonconformal_spec_fails_with_witness(tmp_path):
    spec = {
        "schema": SF.SPEC_SCHEMA, "type": "surface", "ambient_dim": 3,
        "components": [
            {"num": ["0", "1"], "den": ["1"]},
            {"num": ["0", "1"], "den": ["1"]},
            {"num": ["0"], "den": ["1"]},
        ],
    }
    out = tmp_path / "rep.json"
    assert run("verify", write_spec(tmp_path, spec), "--out", str(out)) == 1
    c = checks(out)["conformality"]
    assert c["status"] == "FAIL"
    assert c["witness"]["error"] == "NonConformal"


def test_unknown_command_is_exit_2(capsys):
    assert run("frobnicate") == 2
    capsys.readouterr()


# -- verify on the bundled examples ---------------------------------------

def test_verify_example1_all_pass(tmp_path):
    out = tmp_path / "rep.json"
    assert run("verify", EX1, "--mode", "exact", "--grid", "60",
               "--out", str(out)) == 0
    rep = report(out)
    assert rep["mode"] == "exact"
    assert rep["checks"] and all(c["status"] == "PASS"
                                 for c in rep["checks"])
    ids = {c["id"] for c in rep["checks"]}
    assert {"conformality", "isotropy_order", "contact", "riccati",
            "willmore_residual", "s_willmore_certificate",
            "energy_quantization", "closed_willmore"} <= ids
    cert = checks(out)["s_willmore_certificate"]["witness"]
    assert cert["frame_rank"] == 6 and not cert["is_s_willmore_near_p"]


def test_verify_example3_float_pass_with_infinity_record(tmp_path):
    out = tmp_path / "rep.json"
    assert run("verify", EX3, "--mode", "float", "--grid", "40",
               "--out", str(out)) == 0
    c = checks(out)
    assert all(rec["status"] == "PASS" for rec in c.values())
    for key in ("closed_willmore_i1_immersed", "closed_willmore_i2_no_umbilics",
                "closed_willmore_i3_no_common_zero",
                "closed_willmore_i4_end_profiles"):
        assert c[key]["status"] == "PASS"
    inf_rec = c["pedal_immersion_at_inf"]["witness"]
    deriv = inf_rec["pedal_derivative"]
    assert any(abs(complex(a, b)) > 1e-9 for a, b in deriv)


def test_mode_env_default(tmp_path, monkeypatch):
    monkeypatch.setenv("WILLMORE_MODE", "float")
    out = tmp_path / "rep.json"
    assert run("ends", EX1, "--out", str(out)) == 0
    assert report(out)["mode"] == "float"


def test_reports_are_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run("ends", EX1, "--out", str(a)) == 0
    assert run("ends", EX1, "--out", str(b)) == 0
    assert a.read_bytes() == b.read_bytes()


# -- gram -----------------------------------------------------------------

PRINTED_A2 = {
    "u3*u3": "0", "u3*u2": "0", "u3*v3": "-1", "u3*v2": "-2",
    "u3*w2": "1", "u3*w3": "1", "u2*v3": "2", "u2*v2": "5/2",
    "u2*w2": "-1/2", "u2*w3": "1", "v3*w2": "-2", "v3*w3": "1",
    "v2*w2": "1/2", "v2*w3": "-1",
}


def test_gram_example2_matches_printed_matrix(tmp_path):
    out = tmp_path / "rep.json"
    assert run("gram", EX2A, "--out", str(out)) == 0
    c = checks(out)
    entries = c["lambda_table"]["witness"]["entries"]
    for key, val in PRINTED_A2.items():
        j, k = key.split("*")
        got = entries.get(f"{j}*{k}") or entries.get(f"{k}*{j}") or "0"
        assert got == val, key
    assert c["lambda_table"]["witness"]["rank"] == 6
    assert c["realization"]["witness"]["signature"] == [3, 3]
    assert c["assembled_surface"]["witness"]["isotropy_order"] == 1
    surf = json.load(open(str(out) + ".surface.json"))
    assert SF.spec_to_surface(surf).isotropy_order() == 1


PRINTED_L3 = {"v0*v8": "1", "v3*v5": "-16", "v3*v8": "-20",
              "v4*v4": "30", "v5*v9": "20"}


def test_gram_example3_matches_printed_lambdas(tmp_path):
    out = tmp_path / "rep.json"
    assert run("gram", EX3A, "--out", str(out)) == 0
    c = checks(out)
    entries = c["lambda_table"]["witness"]["entries"]
    for key, val in PRINTED_L3.items():
        assert entries[key] == val
    assert c["lambda_table"]["witness"]["rank"] == 5
    assert c["solve"]["witness"]["family_dimension"] == 1
    assert c["assembled_surface"]["status"] == "PASS"
    assert c["assembled_surface"]["witness"]["isotropy_order"] == 1


def test_gram_contradictory_pins_named(tmp_path):
    out = tmp_path / "rep.json"
    assert run("gram", EX2A, "--pins", "u3*u3=1",
               "--out", str(out)) == 1
    c = checks(out)["solve"]
    assert c["status"] == "FAIL"
    assert "u3*u3" in c["witness"]["detail"]


# -- mesh -----------------------------------------------------------------

def test_mesh_example1_is_finite(tmp_path):
    base = str(tmp_path / "m")
    assert run("mesh", EX1, "--grid", "64", "--project", "1,2,5",
               "--out", base) == 0
    verts = []
    with open(base + ".obj") as fh:
        for line in fh:
            if line.startswith("v "):
                verts.append([float(t) for t in line.split()[1:]])
    assert len(verts) == 2 * 64 * 64
    assert all(math.isfinite(v) for row in verts for v in row)
    with open(base + ".csv") as fh:
        header = fh.readline().strip().split(",")
        n_rows = sum(1 for _ in fh)
    assert header[:3] == ["chart", "re", "im"] and len(header) == 9
    assert n_rows == 2 * 64 * 64


def test_mesh_plane_normals_parallel(tmp_path):
    base = str(tmp_path / "p")
    spec = write_spec(tmp_path, plane_spec())
    assert run("mesh", spec, "--grid", "12", "--project", "1,2,3",
               "--out", base) == 0
    verts, faces = [], []
    with open(base + ".obj") as fh:
        for line in fh:
            tok = line.split()
            if tok and tok[0] == "v":
                verts.append([float(t) for t in tok[1:]])
            elif tok and tok[0] == "f":
                faces.append([int(t) - 1 for t in tok[1:]])
    assert faces
    normals = []
    for a, b, c in faces:
        u = [verts[b][i] - verts[a][i] for i in range(3)]
        w = [verts[c][i] - verts[a][i] for i in range(3)]
        n = [u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2],
             u[0] * w[1] - u[1] * w[0]]
        mag = math.sqrt(sum(x * x for x in n))
        if mag > 1e-15:
            normals.append([x / mag for x in n])
    ref = normals[0]
    for n in normals:
        cross = math.sqrt(sum((ref[(i + 1) % 3] * n[(i + 2) % 3]
                               - ref[(i + 2) % 3] * n[(i + 1) % 3]) ** 2
                              for i in range(3)))
        assert cross < 1e-9


def test_mesh_bad_projection_exit_2(tmp_path, capsys):
    assert run("mesh", EX1, "--project", "7,1,2") == 2
    assert run("mesh", EX1, "--project", "1,1,2") == 2
    assert run("mesh", EX1, "--project", "1,2") == 2
    assert run("mesh", EX1, "--project", "a,b,c") == 2
    assert run("mesh", EX1, "--grid", "1") == 2
    capsys.readouterr()


def test_mesh_determinism(tmp_path):
    a, b = str(tmp_path / "a"), str(tmp_path / "b")
    spec = write_spec(tmp_path, plane_spec())
    assert run("mesh", spec, "--grid", "8", "--out", a) == 0
    assert run("mesh", spec, "--grid", "8", "--out", b) == 0
    for ext in (".csv", ".obj"):
        with open(a + ext, "rb") as f1, open(b + ext, "rb") as f2:
            assert f1.read() == f2.read()


# -- pedal / adjoint / energy ---------------------------------------------

@pytest.fixture()
def plain_example1(tmp_path):
    spec = SF.load_json(EX1)
    spec.pop("pedal_point", None)
    return write_spec(tmp_path, spec, "ex1_plain.json")


def test_pedal_command(tmp_path, plain_example1):
    out = tmp_path / "rep.json"
    assert run("pedal", plain_example1, "--pedal-point", "0,0,0,0,0,0",
               "--out", str(out)) == 0
    c = checks(out)
    assert c["contact"]["status"] == "PASS"
    assert c["riccati"]["status"] == "PASS"
    surf = json.load(open(str(out) + ".surface.json"))
    assert surf["pedal_point"] == ["0"] * 6


def test_adjoint_command(tmp_path, plain_example1):
    out = tmp_path / "rep.json"
    assert run("adjoint", plain_example1, "--g", "0,1/1",
               "--out", str(out)) == 0
    c = checks(out)
    assert c["contact"]["status"] == "PASS"
    assert c["riccati"]["status"] == "PASS"


def test_energy_command(tmp_path):
    out = tmp_path / "rep.json"
    assert run("energy", EX1, "--grid", "128", "--out", str(out)) == 0
    w = checks(out)["energy"]["witness"]
    assert w["nearest_2pi_multiple"] == 6
    assert abs(w["quanta"] - 6) < 1e-2
