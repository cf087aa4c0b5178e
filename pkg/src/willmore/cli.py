"""Batch command-line front end.

Subcommands: verify, gram, pedal, adjoint, ends, energy, mesh.  Specs and
reports are JSON trees with exact scalar strings (see
:mod:`willmore.specfile`).  Exit codes: 0 = all checks PASS, 1 = at least
one FAIL, 2 = invalid input.  The default precision mode comes from the
``WILLMORE_MODE`` environment variable (``exact`` or ``float``).

``exact`` mode runs the full identity checks, including the frame-based
Willmore residual, the S-Willmore rank certificate, and the energy
quadrature; ``float`` mode restricts to the cheap exact identities plus
numeric searches, which keeps large examples fast.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import gram as G
from . import moebius as M
from . import specfile as SF
from .adjoint import AdjointError, verify_contact
from .algebra import ResidueObstruction
from .birational import BiRat, VecBiRat
from .ends import EndsError, analyze_end, check_closed_willmore
from .specfile import Report, SpecError
from .surface import SurfaceError

MODE_ENV = "WILLMORE_MODE"


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code or 0
        return 0 if code == 0 else 2
    if not hasattr(args, "func"):
        parser.print_help()
        return 2
    try:
        return args.func(args)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="willmore", description=__doc__)
    sub = p.add_subparsers(dest="command")

    def common(sp):
        sp.add_argument("spec", help="path to a spec file")
        sp.add_argument("--mode", choices=("exact", "float"), default=None)
        sp.add_argument("--out", default=None,
                        help="write the report here (default: stdout)")

    sp = sub.add_parser("verify", help="run the verification pipeline")
    common(sp)
    sp.add_argument("--grid", type=int, default=120)
    sp.add_argument("--radius", type=float, default=6.0)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("gram", help="solve a Gram ansatz and realize it")
    common(sp)
    sp.add_argument("--pins", default=None,
                    help="extra pins, e.g. 'u2*w3=1;u3*u3=0'")
    sp.set_defaults(func=cmd_gram)

    sp = sub.add_parser("pedal", help="attach a pedal point and verify")
    common(sp)
    sp.add_argument("--pedal-point", required=True,
                    help="comma-separated exact scalars")
    sp.set_defaults(func=cmd_pedal)

    sp = sub.add_parser("adjoint", help="attach a parameter g and verify")
    common(sp)
    sp.add_argument("--g", required=True,
                    help="rational g as 'c0,c1,.../d0,d1,...'")
    sp.set_defaults(func=cmd_adjoint)

    sp = sub.add_parser("ends", help="analyze the ends of the surface")
    common(sp)
    sp.add_argument("--chart", choices=("z", "w"), default=None,
                    help="restrict to ends visible in one chart")
    sp.set_defaults(func=cmd_ends)

    sp = sub.add_parser("energy", help="Willmore energy quadrature")
    common(sp)
    sp.add_argument("--grid", type=int, default=256)
    sp.set_defaults(func=cmd_energy)

    sp = sub.add_parser("mesh", help="export CSV samples and a vertex/face mesh")
    common(sp)
    sp.add_argument("--grid", type=int, default=64)
    sp.add_argument("--project", default="1,2,3",
                    help="three 1-based coordinate indices, e.g. 1,2,5")
    sp.set_defaults(func=cmd_mesh)

    return p


def _mode(args) -> str:
    return args.mode or os.environ.get(MODE_ENV, "exact")


def _emit(report: Report, args) -> int:
    body = SF.dump_json(report.as_dict(), args.out)
    if not args.out:
        print(body)
    return 1 if report.failed else 0


def _status(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


# -- verify ---------------------------------------------------------------

def cmd_verify(args) -> int:
    spec = SF.load_json(args.spec)
    mode = _mode(args)
    rep = Report("verify", args.spec, mode)
    try:
        s = SF.spec_to_surface(spec)
    except SurfaceError as exc:
        rep.add("conformality", "FAIL", error=type(exc).__name__,
                detail=str(exc))
        return _emit(rep, args)
    rep.add("conformality", "PASS", ambient_dim=s.n)
    iso = s.isotropy_order()
    rep.add("isotropy_order", "PASS",
            order="inf" if iso == math.inf else iso)
    _end_checks(rep, s, args)
    adj = None
    try:
        adj = SF.spec_to_adjoint(spec)
    except AdjointError as exc:
        rep.add("transform", "FAIL", error=type(exc).__name__,
                detail=str(exc))
    if adj is not None:
        c1, c2 = verify_contact(adj)
        rep.add("contact", _status(not c1 and not c2),
                residuals=[repr(c1), repr(c2)])
        ric = adj.riccati_residual()
        rep.add("riccati", _status(not ric), residual=repr(ric))
        if mode == "exact":
            _frame_checks(rep, adj, args)
        if adj.pedal_point is not None:
            res = check_closed_willmore(s, adj.pedal_point, grid=args.grid,
                                        radius=args.radius)
            for key, item in res["checks"].items():
                if key == "branch_points":
                    for rec in item:
                        rep.add(f"pedal_immersion_at_{rec['location']}",
                                _status(bool(rec["pass"])),
                                **_jsonable(rec))
                    continue
                rep.add(f"closed_willmore_{key}",
                        _status(bool(item["pass"])), **_jsonable(item))
            rep.add("closed_willmore", _status(bool(res["pass"])),
                    ends=_jsonable(res["ends"]))
    return _emit(rep, args)


def _frame_checks(rep: Report, adj, args) -> None:
    md = M.frame_at(adj.xhat)
    residual = M.willmore_residual(md)
    rep.add("willmore_residual", _status(not residual),
            residual=repr(residual))
    for p in (0j, 0.37 + 0.29j):
        try:
            cert = M.s_willmore_certificate(md, p)
            rep.add("s_willmore_certificate", "PASS",
                    at=[p.real, p.imag], **_jsonable(cert))
            break
        except M.MoebiusError:
            continue
    energy = M.willmore_energy(md, grid=max(args.grid, 128))
    quanta = energy["W"] / (2 * math.pi)
    rep.add("energy_quantization",
            _status(energy["defect"] / (2 * math.pi) < 1e-2),
            W=energy["W"], quanta=quanta,
            nearest_integer=energy["nearest_2pi_multiple"])


def _end_checks(rep: Report, s, args) -> None:
    chart = getattr(args, "chart", None)
    for p in s.ends:
        is_inf = isinstance(p, str)
        if chart == "z" and is_inf:
            continue
        if chart == "w" and not is_inf:
            continue
        label = "inf" if is_inf else repr(complex(p))
        try:
            prof = analyze_end(s, p)
        except EndsError as exc:
            rep.add(f"end_{label}", "SUSPECT", error=type(exc).__name__,
                    detail=str(exc))
            continue
        rep.add(f"end_{label}", "PASS", m=prof.m, k=prof.k,
                k_minus_m=prof.k_minus_m,
                classification=prof.classification, exact=prof.exact)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (int, float, str, bool)) or obj is None:
        return obj
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return repr(obj)


# -- gram -----------------------------------------------------------------

def cmd_gram(args) -> int:
    spec = SF.load_json(args.spec)
    mode = _mode(args)
    d = SF.spec_field(spec)
    ansatz, pins, meta = SF.spec_to_ansatz(spec)
    if args.pins:
        pins.update(SF.parse_pins(args.pins, d))
    rep = Report("gram", args.spec, mode)
    system = G.build_system(ansatz)
    try:
        sol = G.solve_system(system, pins or None)
    except G.Inconsistent as exc:
        rep.add("solve", "FAIL", error="Inconsistent", detail=str(exc),
                pins={f"{j}*{k}": SF.format_element(v)
                      for (j, k), v in pins.items()})
        return _emit(rep, args)
    rep.add("solve", "PASS", family_dimension=sol.dimension,
            unknowns=len(system.pairs))
    names = ansatz.names
    L = [[sol.lambda_value(j, k) for k in names] for j in names]
    table = {f"{names[i]}*{names[j]}": SF.format_element(L[i][j])
             for i in range(len(names)) for j in range(i, len(names))
             if L[i][j]}
    rank = G.exact_rank(L)
    rep.add("lambda_table", "PASS", entries=table, rank=rank, names=names)
    n = max(int(meta.get("ambient_dim") or 0), rank)
    try:
        real = G.realize(L, n)
    except G.RankExceedsDimension as exc:
        rep.add("realization", "FAIL", error="RankExceedsDimension",
                detail=str(exc))
        return _emit(rep, args)
    rep.add("realization", _status(real.error < 1e-10), rank=real.rank,
            error=real.error, exact=real.exact,
            signature=list(real.signature) if real.signature else None,
            real_span_dim=real.real_span_dim,
            note=("vectors are complex; a real factor B with B*B^T = A "
                  "does not exist for indefinite A, so the real span "
                  "dimension of {Re b, Im b} is reported instead"))
    _assemble_check(rep, system, sol, rank, args)
    return _emit(rep, args)


def _assemble_check(rep, system, sol, rank, args) -> None:
    # Realize only the post-substitution basis vectors; dependent vectors
    # (residue relations) are linear in these, and realizing them
    # independently would break exact integrability.
    mu = sol.mu_matrix()
    basis_vecs = None
    for n in range(rank, 2 * rank + 1):
        try:
            basis_vecs = G.realize_exact(mu, n)
            break
        except G.GramError:
            continue
    if basis_vecs is None:
        rep.add("assembled_surface", "SUSPECT",
                detail="no exact realization found up to twice the rank")
        return
    by_name = dict(zip(system.basis, basis_vecs))
    dim = len(basis_vecs[0]) if basis_vecs else 0
    vectors = {}
    for name in system.ansatz.names:
        vec = [G.ZERO] * dim
        for b, c in system.subst[name].items():
            vec = [u + c * w for u, w in zip(vec, by_name[b])]
        vectors[name] = vec
    try:
        surf = G.assemble_surface(vectors, system.ansatz)
    except (ResidueObstruction, SurfaceError) as exc:
        rep.add("assembled_surface", "FAIL", error=type(exc).__name__,
                detail=str(exc))
        return
    iso = surf.isotropy_order()
    rep.add("assembled_surface", "PASS", ambient_dim=surf.n,
            isotropy_order="inf" if iso == math.inf else iso)
    if args.out:
        d = SF.spec_field(SF.load_json(args.spec))
        SF.dump_json(SF.surface_to_spec(surf, d=d),
                     args.out + ".surface.json")


# -- pedal / adjoint ------------------------------------------------------

def _attach_and_verify(args, extra: dict) -> int:
    spec = SF.load_json(args.spec)
    mode = _mode(args)
    spec = {k: v for k, v in spec.items() if k not in ("pedal_point", "g")}
    spec.update(extra)
    rep = Report(args.command, args.spec, mode)
    try:
        adj = SF.spec_to_adjoint(spec)
    except (SurfaceError, AdjointError) as exc:
        rep.add("transform", "FAIL", error=type(exc).__name__,
                detail=str(exc))
        return _emit(rep, args)
    c1, c2 = verify_contact(adj)
    rep.add("contact", _status(not c1 and not c2),
            residuals=[repr(c1), repr(c2)])
    ric = adj.riccati_residual()
    rep.add("riccati", _status(not ric), residual=repr(ric))
    if args.out:
        SF.dump_json(spec, args.out + ".surface.json")
    return _emit(rep, args)


def cmd_pedal(args) -> int:
    d = SF.spec_field(SF.load_json(args.spec))
    point = [SF.format_element(SF.parse_element(c, d))
             for c in args.pedal_point.split(",")]
    return _attach_and_verify(args, {"pedal_point": point})


def cmd_adjoint(args) -> int:
    d = SF.spec_field(SF.load_json(args.spec))
    num, _, den = args.g.partition("/")
    g = {"num": [SF.format_element(SF.parse_element(c, d))
                 for c in num.split(",")],
         "den": [SF.format_element(SF.parse_element(c, d))
                 for c in (den or "1").split(",")]}
    return _attach_and_verify(args, {"g": g})


# -- ends / energy --------------------------------------------------------

def cmd_ends(args) -> int:
    spec = SF.load_json(args.spec)
    rep = Report("ends", args.spec, _mode(args))
    try:
        s = SF.spec_to_surface(spec)
    except SurfaceError as exc:
        rep.add("conformality", "FAIL", error=type(exc).__name__,
                detail=str(exc))
        return _emit(rep, args)
    _end_checks(rep, s, args)
    return _emit(rep, args)


def cmd_energy(args) -> int:
    spec = SF.load_json(args.spec)
    rep = Report("energy", args.spec, _mode(args))
    try:
        adj = SF.spec_to_adjoint(spec)
        lift = adj.xhat if adj is not None else None
        md = M.frame_at(lift if lift is not None
                        else SF.spec_to_surface(spec))
        energy = M.willmore_energy(md, grid=args.grid)
    except (SurfaceError, AdjointError, M.MoebiusError) as exc:
        rep.add("energy", "FAIL", error=type(exc).__name__,
                detail=str(exc))
        return _emit(rep, args)
    quanta = energy["W"] / (2 * math.pi)
    rep.add("energy", _status(energy["defect"] / (2 * math.pi) < 1e-2),
            **_jsonable({**energy, "quanta": quanta}))
    return _emit(rep, args)


# -- mesh -----------------------------------------------------------------

def cmd_mesh(args) -> int:
    spec = SF.load_json(args.spec)
    try:
        proj = [int(t) for t in args.project.split(",")]
    except ValueError as exc:
        raise SpecError(f"bad projection {args.project!r}") from exc
    if spec.get("type") != "surface" or "ambient_dim" not in spec:
        raise SpecError("mesh needs a surface spec with ambient_dim")
    n = int(spec["ambient_dim"])
    if len(proj) != 3 or len(set(proj)) != 3 \
            or not all(1 <= i <= n for i in proj):
        raise SpecError(
            f"projection must be three distinct indices in 1..{n}")
    if args.grid < 2:
        raise SpecError("mesh grid must be at least 2")
    adj = SF.spec_to_adjoint(spec)
    x = adj.xhat if adj is not None else SF.spec_to_surface(spec).x
    out = args.out or "mesh"
    verts, cells, rows = _sample_two_charts(x, n, args.grid)
    with open(out + ".csv", "w") as fh:
        fh.write("chart,re,im," +
                 ",".join(f"x{k+1}" for k in range(n)) + "\n")
        fh.writelines(rows)
    with open(out + ".obj", "w") as fh:
        for v in verts:
            fh.write("v " + " ".join("%.17g" % v[i - 1] for i in proj)
                     + "\n")
        for a, b, c in cells:
            fh.write(f"f {a + 1} {b + 1} {c + 1}\n")
    print(f"wrote {out}.csv and {out}.obj "
          f"({len(verts)} vertices, {len(cells)} faces)")
    return 0


def _sample_two_charts(x: VecBiRat, n: int, N: int):
    """Polar N x N samples on |z| <= 1 and |w| <= 1 (w = 1/z); faces stay
    within each chart, so the unit-circle ring is duplicated."""
    charts = [("z", x), ("w", VecBiRat([c.invert_chart()
                                        for c in x.components]))]
    verts, cells, rows = [], [], []
    for ci, (tag, xc) in enumerate(charts):
        offset = ci * N * N
        for i in range(N):
            r = (i + 1) / N
            for j in range(N):
                t = 2 * math.pi * j / N
                z = complex(r * math.cos(t), r * math.sin(t))
                vals = [_eval_real(c, z) for c in xc.components]
                verts.append(vals)
                rows.append("%s,%.17g,%.17g," % (tag, z.real, z.imag)
                            + ",".join("%.17g" % v for v in vals) + "\n")
        for i in range(N - 1):
            for j in range(N):
                a = offset + i * N + j
                b = offset + i * N + (j + 1) % N
                c = offset + (i + 1) * N + (j + 1) % N
                d = offset + (i + 1) * N + j
                quad = [verts[k] for k in (a, b, c, d)]
                if all(all(math.isfinite(v) for v in vv) for vv in quad):
                    cells.append((a, b, c))
                    cells.append((a, c, d))
    return verts, cells, rows


def _eval_real(c: BiRat, z: complex) -> float:
    try:
        return float(complex(c(z)).real)
    except ZeroDivisionError:
        return math.inf


if __name__ == "__main__":
    sys.exit(main())
