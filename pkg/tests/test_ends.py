"""End analysis: Laurent normal forms, classifications, closed-surface checks."""

import numpy as np
import pytest

from willmore import gallery
from willmore.algebra import Poly, Rat
from willmore.ends import (
    BRANCHED, FLAT_END, IMMERSED_INTERIOR, UNCLASSIFIED, AllZero,
    DependentLeadingVectors, EndProfile, EndsError, ResidueEnd, analyze_end,
    check_closed_willmore, classify_end, line_direction_limit,
    pedal_branch_value, pedal_end_leading,
)
from willmore.field import Element
from willmore.surface import MinimalSurface

I = Element(0, 1)


@pytest.fixture(scope="module")
def s1():
    return gallery.totally_isotropic_r6()


@pytest.fixture(scope="module")
def s3():
    return gallery.one_isotropic_r5()


# -- profiles of the built-in surfaces ------------------------------------

def test_totally_isotropic_profile_origin(s1):
    prof = analyze_end(s1, Element(0))
    assert (prof.m, prof.k_minus_m) == (1, 1)
    assert prof.classification == IMMERSED_INTERIOR
    assert prof.exact and not prof.recoordinated
    # leading data straight off the holomorphic components
    assert [complex(c) for c in prof.v_minus_m] == [0, 0, 0.5j, 0.5, 0, 0]
    assert [complex(c) for c in prof.v_kminusm] == [0.25j, -0.25, 0, 0, 0, 0]


def test_totally_isotropic_profile_infinity(s1):
    prof = analyze_end(s1, "inf")
    assert (prof.m, prof.k_minus_m) == (2, -1)
    assert prof.classification == FLAT_END
    assert [complex(c) for c in prof.v_minus_m] == \
        [0, 0, 0, 0, 1j / 6, -1 / 6]


def test_one_isotropic_profiles(s3):
    got = {}
    for p in s3.ends:
        prof = analyze_end(s3, p)
        got[prof.location if isinstance(prof.location, str)
            else complex(prof.location)] = (prof.m, prof.k_minus_m,
                                            prof.classification, prof.exact)
    assert got[0j] == (2, 1, IMMERSED_INTERIOR, True)
    # the end at z = 1 snaps back into the exact field
    assert got[1 + 0j] == (2, -1, FLAT_END, True)
    omegas = [p for p in got if abs(p - 1) > 1e-6 and abs(p) > 1e-6]
    assert len(omegas) == 2
    for p in omegas:
        assert abs(p ** 3 - 1) < 1e-8
        assert got[p] == (2, -1, FLAT_END, False)


def test_exponent_fit_oracle(s1, s3):
    # brute-force check of (m, k - m) by log-log slope fitting
    for s, p, want_m, want_km in [(s1, Element(0), 1, 1), (s1, "inf", 2, -1),
                                  (s3, Element(0), 2, 1),
                                  (s3, Element(1), 2, -1)]:
        prof = analyze_end(s, p)
        assert (prof.m, prof.k_minus_m) == (want_m, want_km)
        m_fit, km_fit = _fit_exponents(s, p, prof)
        assert abs(m_fit - prof.m) < 0.1
        assert abs(km_fit - prof.k_minus_m) < 0.1


def _fit_exponents(s, p, prof):
    F = list(s.F)
    if isinstance(p, str):
        F = [f.invert_chart() for f in F]
        p0 = 0j
    else:
        p0 = complex(p)
    v = np.array([complex(c) for c in prof.v_minus_m])
    t = np.array([complex(c) for c in prof.translation])
    rs = np.logspace(-2.6, -1.8, 9)
    zs = p0 + rs * np.exp(0.37j)
    vals = np.array([[complex(f(z)) if f.num else 0j for f in F]
                     for z in zs])
    lead = np.linalg.norm(vals, axis=1)
    m_fit = -np.polyfit(np.log(rs), np.log(lead), 1)[0]
    rem = vals - v[None, :] * (zs - p0)[:, None] ** (-prof.m) - t[None, :]
    km_fit = np.polyfit(np.log(rs), np.log(np.linalg.norm(rem, axis=1)),
                        1)[0]
    return m_fit, km_fit


# -- synthetic normal forms -----------------------------------------------

V6 = [Element(1), I, Element(0), Element(0), Element(0), Element(0)]
U6 = [Element(0), Element(0), Element(1), I, Element(0), Element(0)]


def _surface(pairs, n=6):
    """MinimalSurface with F = sum rat * vector."""
    comps = [Rat(Poly([])) for _ in range(n)]
    for r, vec in pairs:
        for k in range(n):
            if vec[k]:
                comps[k] = comps[k] + r * vec[k]
    return MinimalSurface(comps, n)


def test_recoordinate_absorbs_parallel_terms():
    # F = v (z^-2 + z^-1) + u z: the z^-1 term is parallel to the leading
    # vector and is absorbed by zt = z (1 + z)^(-1/2)
    z = Poly.x()
    s = _surface([(Rat(z + Poly([1]), z * z), V6), (Rat(z), U6)])
    prof = analyze_end(s, Element(0))
    assert prof.recoordinated
    assert (prof.m, prof.k_minus_m) == (2, 1)
    assert prof.classification == IMMERSED_INTERIOR
    assert [complex(c) for c in prof.v_minus_m] == \
        [complex(c) for c in V6]
    assert [complex(c) for c in prof.v_kminusm] == [complex(c) for c in U6]


def test_constant_term_is_translation_not_direction():
    # F = v/z + w0 + u z: the constant is recorded separately and skipped
    z = Poly.x()
    w0 = [Element(3), Element(0), Element(0), Element(0), Element(-1),
          Element(0)]
    s = _surface([(Rat(Poly([1]), z), V6), (Rat(Poly([1])), w0),
                  (Rat(z), U6)])
    prof = analyze_end(s, Element(0))
    assert (prof.m, prof.k_minus_m) == (1, 1)
    assert [complex(c) for c in prof.translation] == [3, 0, 0, 0, -1, 0]
    assert [complex(c) for c in prof.v_kminusm] == [complex(c) for c in U6]


def test_branched_profile_fails_checklist():
    # F = v/z + u z^2 gives k - m = 2: a branch point of the pedal
    z = Poly.x()
    s = _surface([(Rat(Poly([1]), z), V6), (Rat(z ** 2), U6)])
    prof = analyze_end(s, Element(0))
    assert prof.k_minus_m == 2
    assert prof.classification == BRANCHED
    report = check_closed_willmore(s, [0] * 6, grid=60, radius=3)
    assert not report["checks"]["i4_end_profiles"]["pass"]
    assert not report["pass"]


def test_dependent_leading_vectors():
    z = Poly.x()
    s = _surface([(Rat(Poly([1]), z), V6)])
    with pytest.raises(DependentLeadingVectors):
        analyze_end(s, Element(0))


def test_residue_end_from_raw_data():
    z = Poly.x()
    xz = [Rat(Poly([c]), z) for c in V6]
    with pytest.raises(ResidueEnd):
        analyze_end(xz, Element(0))


def test_raw_xz_data_is_integrated():
    # x_z = -v/z^2 + u corresponds to F = v/z + u z
    z = Poly.x()
    xz = [Rat(Poly([-c]), z * z) + Rat(Poly([u])) for c, u in zip(V6, U6)]
    prof = analyze_end(xz, Element(0))
    assert (prof.m, prof.k_minus_m) == (1, 1)


def test_not_a_pole():
    s = _surface([(Rat(Poly([1]), Poly.x()), V6), (Rat(Poly.x()), U6)])
    with pytest.raises(EndsError):
        analyze_end(s, Element(5))


def test_numeric_end_outside_field():
    # poles at +-sqrt(2), which is not in Q(i)[sqrt(30)]
    z = Poly.x()
    s = _surface([(Rat(Poly([1]), z * z - Poly([2])), V6), (Rat(z), U6)])
    p = complex(np.sqrt(2))
    prof = analyze_end(s, p)
    assert not prof.exact
    assert (prof.m, prof.k_minus_m) == (1, 1)
    assert prof.classification == IMMERSED_INTERIOR


def test_classify_end_table():
    def prof(km):
        return EndProfile("inf", 2, 2 + km, V6, U6, [Element(0)] * 6)
    assert classify_end(prof(-1)) == FLAT_END
    assert classify_end(prof(1)) == IMMERSED_INTERIOR
    assert classify_end(prof(-2)) == BRANCHED
    assert classify_end(prof(3)) == BRANCHED
    assert classify_end(prof(0)) == UNCLASSIFIED


# -- pedal leading coefficient --------------------------------------------

def test_pedal_end_leading_matches_pedal_surface(s1):
    # fit the linear term of the pedal closed form at the immersed end z = 0
    from willmore.kernels import birat_grid
    prof = analyze_end(s1, Element(0))
    vhat = np.array([complex(c) for c in pedal_end_leading(prof)])
    xhat = gallery.pedal_of_totally_isotropic_r6()
    zs = 1e-5 * np.exp(2j * np.pi * np.arange(7) / 7)
    vals = np.stack([birat_grid(c, zs) for c in xhat.components], axis=-1)
    x0 = np.array([complex(c(0j)) for c in xhat.components])
    # x - x(0) = 2 Re(vhat z) + O(z^2)
    want = 2 * np.real(vhat[None, :] * zs[:, None])
    assert np.max(np.abs((vals - x0[None, :]).real - want)) < 1e-8


def test_pedal_end_leading_requires_independence():
    prof = EndProfile(Element(0), 1, 2, V6,
                      [c * Element(2) for c in V6], [Element(0)] * 6)
    with pytest.raises(EndsError):
        pedal_end_leading(prof)


# -- closed-surface checklist ---------------------------------------------

def test_checklist_totally_isotropic(s1):
    report = check_closed_willmore(s1, [0] * 6)
    assert report["pass"]
    for name in ("i1_immersed", "i2_no_umbilics", "i3_no_common_zero",
                 "i4_end_profiles"):
        assert report["checks"][name]["pass"], name
    cls = {e["location"]: e["classification"] for e in report["ends"]}
    assert cls[0j] == IMMERSED_INTERIOR and cls["inf"] == FLAT_END


def test_checklist_one_isotropic(s3):
    report = check_closed_willmore(s3, [1, 0, 2, 1, 3])
    assert report["pass"]
    bp = report["checks"]["branch_points"]
    assert len(bp) == 1 and bp[0]["location"] == "inf" and bp[0]["pass"]


def test_branch_value_formula(s3):
    # the direct limit of the pedal derivative at the branched point at
    # infinity equals -(1/40)[(E2b.x(0)) E1b + (E1b.x(0)) E2b] with x taken
    # relative to the pedal point
    x0 = [1, 0, 2, 1, 3]
    val = np.array(pedal_branch_value(s3, x0, "inf"))
    Fw = [f.invert_chart() for f in s3.F]
    xinf = np.array([2 * complex(f(0j)).real if f.num else 0.0 for f in Fw])
    rel = xinf - np.array(x0)
    e1b = np.array([1, -1j, 0, 0, 0])
    e2b = np.array([0, 0, 1, -1j, 0])
    want = -((e2b @ rel) * e1b + (e1b @ rel) * e2b) / 40
    assert np.max(np.abs(val - want)) < 1e-12


def test_branch_value_nonzero_needs_good_pedal_point(s3):
    # with the pedal point at the origin, x(0) is parallel to e5 and the
    # pedal degenerates at infinity
    val = np.array(pedal_branch_value(s3, [0] * 5, "inf"))
    assert np.max(np.abs(val)) < 1e-12
    report = check_closed_willmore(s3, [0] * 5, grid=60, radius=4)
    assert not report["pass"]
    assert not report["checks"]["branch_points"][0]["pass"]


# -- projective limits ----------------------------------------------------

def test_line_direction_limit_basic():
    z = Poly.x()
    secs = [Rat(z), Rat(z ** 2), Rat(z ** 3)]
    assert [complex(c) for c in line_direction_limit(secs, Element(0))] == \
        [1, 0, 0]
    assert [complex(c) for c in line_direction_limit(secs, "inf")] == \
        [0, 0, 1]


def test_line_direction_limit_common_factor_invariance():
    z = Poly.x()
    secs = [Rat(z + Poly([1])), Rat(z * 2), Rat(Poly([3]))]
    base = line_direction_limit(secs, Element(0))
    for fac in (Rat(z + Poly([3])), Rat(z ** 2), Rat(Poly([1]), z)):
        scaled = [f * fac for f in secs]
        assert line_direction_limit(scaled, Element(0)) == base


def test_line_direction_limit_all_zero():
    with pytest.raises(AllZero):
        line_direction_limit([Rat(Poly([])), Rat(Poly([]))], Element(0))
