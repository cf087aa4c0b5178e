"""Adjoint/pedal transforms: closed form, contact identities, branch search."""

import random

import pytest

from willmore import adjoint as adj_mod
from willmore import gallery, moebius
from willmore.adjoint import (
    AdjointError, NotSuperconformal, adjoint, branch_locus, pedal,
    recover_g, verify_contact,
)
from willmore.algebra import Poly, Rat
from willmore.birational import BiRat, VecBiRat, dot
from willmore.field import Element
from willmore.surface import rat_dot

ZERO = BiRat.const(0)


@pytest.fixture(scope="module")
def s1():
    return gallery.totally_isotropic_r6()


@pytest.fixture(scope="module")
def ped(s1):
    return pedal(s1, [0] * 6)


# -- closed form ----------------------------------------------------------

def test_pedal_matches_printed_closed_form(ped):
    assert ped.xhat == gallery.pedal_of_totally_isotropic_r6()


def test_pedal_rejects_non_superconformal():
    with pytest.raises(NotSuperconformal):
        pedal(gallery.enneper(), [0, 0, 0])
    with pytest.raises(NotSuperconformal):
        adjoint(gallery.enneper(), 0)


def test_dual_surface_flag(s1):
    d = adjoint(s1, "inf")
    assert d.is_dual
    assert d.dual_point == [Element(0)] * 6 + [Element(1), Element(-1)]
    with pytest.raises(AdjointError):
        pedal(s1, [0] * 6).dual_point


# -- contact identities ---------------------------------------------------

def test_contact_identities_pedal(ped):
    c1, c2 = verify_contact(ped)
    assert c1 == ZERO and c2 == ZERO


def test_symmetric_co_touching(ped, s1):
    # x_z . xhat_zb = 0 (conjugate identity)
    assert dot(s1.x_z, ped.xhat_zb) == ZERO


def test_tangency_to_mean_curvature_sphere(ped, s1):
    # xhat - x lies in span{x_z, x_zb}: all 3x3 minors with x_z, x_zb vanish
    diff = ped.xhat - s1.x
    u, v = s1.x_z, s1.x_zb
    n = len(diff)
    import itertools
    for i, j, k in itertools.combinations(range(n), 3):
        m = (diff[i] * (u[j] * v[k] - u[k] * v[j])
             - diff[j] * (u[i] * v[k] - u[k] * v[i])
             + diff[k] * (u[i] * v[j] - u[j] * v[i]))
        assert m == ZERO


def test_contact_random_quadratics_with_random_pedal_points():
    rng = random.Random(11)
    for seed in range(10):
        s = gallery.isotropic_quadratic(seed)
        x0 = [rng.randint(-3, 3) for _ in range(6)]
        a = pedal(s, x0)
        c1, c2 = verify_contact(a)
        assert c1 == ZERO and c2 == ZERO


def test_contact_arbitrary_g(s1):
    z = Poly.x()
    for g in (Rat(z ** 2), Rat(Poly([1]), z - Poly([2])),
              Rat(Poly([Element(0, 1)]), z)):
        c1, c2 = verify_contact(adjoint(s1, g))
        assert c1 == ZERO and c2 == ZERO


# -- Riccati relation -----------------------------------------------------

def test_riccati_residual_vanishes(ped, s1):
    assert not ped.riccati_residual()
    z = Poly.x()
    assert not adjoint(s1, Rat(z)).riccati_residual()


# -- recover_g ------------------------------------------------------------

def test_recover_g_roundtrip(s1):
    z = Poly.x()
    gs = [Rat(z ** 2), Rat(Poly([1]), z - Poly([2])),
          Rat(Poly([Element(0, 1)]), z), Rat(Poly([]))]
    rng = random.Random(5)
    for _ in range(20):
        num = Poly([Element(rng.randint(-3, 3), rng.randint(-3, 3))
                    for _ in range(rng.randint(1, 3))])
        den = Poly([Element(rng.randint(-2, 2)) for _ in range(2)]
                   + [Element(1)])
        if num:
            gs.append(Rat(num, den))
    for g in gs:
        a = adjoint(s1, g)
        assert recover_g(s1, a.xhat) == g


def test_recover_g_pedal_zero(ped, s1):
    assert recover_g(s1, ped.xhat) == Rat(Poly([]))


def test_recover_g_pedal_point(s1):
    x0 = [Element(1), Element(0), Element(2), Element(0), Element(0),
          Element(-1)]
    a = pedal(s1, x0)
    want = rat_dot([Rat(Poly([-c])) for c in x0], s1.Fp)  # -x0 . x_z
    assert recover_g(s1, a.xhat) == want


def test_adjoint_depends_only_on_combination(s1):
    # the transform sees g only through x.x_z + g: translating the base by t
    # while subtracting t.x_z from g reproduces the same surface shifted by t
    z = Poly.x()
    g = Rat(z)
    t = [Element(1), Element(-2), Element(0), Element(3), Element(0),
         Element(1)]
    comp = g - rat_dot([Rat(Poly([c])) for c in t], s1.Fp)
    a1 = adjoint(s1, g)
    a2 = adjoint(s1.translated(t), comp)
    shift = VecBiRat([BiRat.const(c) for c in t])
    assert a2.xhat == a1.xhat + shift


# -- xhat_z structure -----------------------------------------------------

def test_xhat_z_proportional_to_Q_mod_xzb(ped, s1):
    # xhat_z + ((x_zb.x + gbar)/(x_z.x_zb)) Q lies in span{x_zb}
    Q = s1.hopf_Q
    coef = dot(s1.x_zb, s1.x) / dot(s1.x_z, s1.x_zb)
    v = ped.xhat_z + Q * coef
    w = s1.x_zb
    n = len(v)
    for i in range(n):
        for j in range(i + 1, n):
            assert v[i] * w[j] - v[j] * w[i] == ZERO


# -- branch locus ---------------------------------------------------------

def test_branch_locus_origin_empty(ped):
    out = branch_locus(ped, grid=120, radius=5)
    assert out["branch"] == []
    assert out["umbilic"] == []
    assert out["suspect"] == []


def test_branch_locus_requires_pedal(s1):
    a = adjoint(s1, Rat(Poly.x()))
    with pytest.raises(AdjointError):
        branch_locus(a)


def test_branch_locus_random_pedal_points_mostly_empty(s1):
    rng = random.Random(3)
    bad = 0
    for _ in range(20):
        x0 = [Element(rng.randint(-1, 1)) for _ in range(6)]
        out = branch_locus(pedal(s1, x0), grid=80, radius=4)
        if out["branch"] or out["suspect"]:
            bad += 1
    assert bad == 0


def test_xzz_dot_x_nonzero_certificate(s1):
    # printed obstruction: x_zz . x is nowhere zero, so no branch points
    b1 = dot(s1.x_z.derivative("z"), s1.x)
    assert b1 != ZERO


# -- pedal is Willmore ----------------------------------------------------

def test_pedal_willmore_residual_exact_zero(ped):
    md = moebius.frame_at(ped.xhat)
    assert not moebius.willmore_residual(md)
