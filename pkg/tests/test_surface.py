"""Minimal-surface layer: conformality, isotropy, Hopf Q, umbilics, fixtures."""

import math
from fractions import Fraction as Fr

import pytest

from willmore import gallery
from willmore.algebra import Poly, Rat
from willmore.birational import BiPoly, BiRat, VecBiRat, dot
from willmore.field import Element
from willmore.surface import (
    DegenerateSurface, MinimalSurface, NonConformal, Weighted,
    ZeroDifferential, new_minimal, weighted_dot,
)

Z, ZB = BiPoly.z(), BiPoly.zb()
R2 = Z * ZB  # r^2 on the real slice


def E(re=0, im=0):
    return Element(re, im)


@pytest.fixture(scope="module")
def s1():
    return gallery.totally_isotropic_r6()


@pytest.fixture(scope="module")
def s3():
    return gallery.one_isotropic_r5()


# -- constructor gate ----------------------------------------------------

def test_rejects_nonconformal():
    z = Poly.x()
    with pytest.raises(NonConformal):
        new_minimal([Rat(z), Rat(z), Rat(Poly([]))], 3)


def test_rejects_zero_differential():
    with pytest.raises(ZeroDifferential):
        new_minimal([Rat(Poly([1])), Rat(Poly([2])), Rat(Poly([3]))], 3)


def test_accepts_plane():
    z = Poly.x()
    s = new_minimal([Rat(z), Rat(z * E(0, 1)), Rat(Poly([]))], 3)
    assert s.ends == ["inf"]
    with pytest.raises(DegenerateSurface):
        s.umbilic_locus()


def test_fixture_ends(s1, s3):
    assert s1.ends == [Element(0), "inf"]
    ends3 = s3.ends
    assert "inf" not in ends3
    got = sorted((complex(e) for e in ends3),
                 key=lambda c: (round(c.real, 6), round(c.imag, 6)))
    want = [-0.5 - 0.8660254j, -0.5 + 0.8660254j, 0j, 1 + 0j]
    assert len(got) == 4
    for a, b in zip(got, want):
        assert abs(a - b) < 1e-6


# -- conformality / harmonicity -----------------------------------------

def test_exact_conformality(s1, s3):
    for s in (s1, s3):
        assert dot(s.x_z, s.x_z) == BiRat.const(0)
        assert dot(s.x_zb, s.x_zb) == BiRat.const(0)


def test_harmonicity(s1):
    assert s1.x_z.derivative("zb") == VecBiRat([BiRat.const(0)] * 6)


# -- printed scalar identities for the R^6 fixture ----------------------

def test_x_dot_x(s1):
    want = BiRat(BiPoly.const(1) + R2 ** 2 * E(Fr(1, 4))
                 + R2 ** 3 * E(Fr(1, 9)), R2)
    assert dot(s1.x, s1.x) == want


def test_xz_dot_x(s1):
    num = BiPoly.const(1) - R2 ** 2 * E(Fr(1, 4)) - R2 ** 3 * E(Fr(2, 9))
    want = BiRat(-num, Z * R2 * 2)
    got = dot(s1.x_z, s1.x)
    assert got == want
    assert got == dot(s1.x, s1.x).derivative("z") * Element(Fr(1, 2))


def test_xzz_dot_x(s1):
    want = BiRat(ZB ** 2 * (R2 ** 3 * E(Fr(1, 9)) + 1), R2 ** 3)
    got = dot(s1.x_z.derivative("z"), s1.x)
    assert got == want
    assert got == dot(s1.x_z, s1.x).derivative("z")


def test_xz_dot_xzb(s1):
    want = BiRat(BiPoly.const(1) + R2 ** 2 * E(Fr(1, 4))
                 + R2 ** 3 * E(Fr(4, 9)), R2 ** 2 * 2)
    got = dot(s1.x_z, s1.x_zb)
    assert got == want
    assert got == dot(s1.x_z, s1.x).derivative("zb")


# -- isotropy order ------------------------------------------------------

def test_isotropy_orders(s1, s3):
    assert s1.isotropy_order() == math.inf
    assert s3.isotropy_order() == 1


def test_isotropy_order_invariance(s1):
    # complex-orthogonal mix of two components and a reparametrization z->az+b
    c, s = Element(Fr(5, 4)), Element(0, Fr(3, 4))  # c^2 + s^2 = 1
    F = list(s1.F)
    F[0], F[1] = F[0] * c + F[1] * s, F[1] * c - F[0] * s
    assert MinimalSurface(F, 6).isotropy_order() == math.inf

    # z -> 2z + 1 via composition on coefficients
    a, b = Element(2), Element(1)
    G = []
    for f in s1.F:
        num = _compose_affine(f.num, a, b)
        den = _compose_affine(f.den, a, b)
        G.append(Rat(num, den))
    assert MinimalSurface(G, 6).isotropy_order() == math.inf


def _compose_affine(p: Poly, a, b) -> Poly:
    out = Poly([], p.var)
    lin = Poly([b, a], p.var)
    for c in reversed(p.coeffs):
        out = out * lin + Poly([c], p.var)
    return out


def test_quadratic_data_is_superconformal():
    for seed in range(5):
        s = gallery.isotropic_quadratic(seed)
        assert s.isotropy_order() >= 1


# -- Hopf differential & umbilics ---------------------------------------

def test_hopf_Q_orthogonality(s1, s3):
    for s in (s1, s3):
        Q = s.hopf_Q
        assert dot(Q, s.x_z) == BiRat.const(0)
        assert dot(Q, s.x_zb) == BiRat.const(0)


def test_hopf_Q_isotropic_for_totally_isotropic(s1):
    assert dot(s1.hopf_Q, s1.hopf_Q) == BiRat.const(0)


def test_hopf_Q_not_isotropic_for_one_isotropic(s3):
    # x_zz.x_zz = 0 but Q.Q = 0 would force 2-isotropy here
    assert dot(s3.hopf_Q, s3.hopf_Q) == BiRat.const(0)


def test_umbilic_free(s1, s3):
    assert s1.umbilic_locus() == []
    assert s3.umbilic_locus() == []


def test_umbilic_locus_validation(s1):
    with pytest.raises(Exception):
        s1.umbilic_locus(radius=-1)


# -- x_z as printed for the R^5 fixture ---------------------------------

def test_r5_xz_matches_phi(s3):
    z = Poly.x()
    den = (z ** 3 - Poly([1])) ** 3 * z ** 3
    phi = gallery.phi_r5()
    for k in range(5):
        assert s3.x_z[k] == BiRat.from_rat(Rat(phi[k], den))


def test_r5_base_point():
    x0 = [Element(1), Element(2), Element(0), Element(0), Element(5)]
    s = gallery.one_isotropic_r5(base_point=x0)
    diff = s.x - gallery.one_isotropic_r5().x
    assert diff == VecBiRat([BiRat.const(c) for c in x0])


# -- weighted fields -----------------------------------------------------

def test_weighted_product_rule(s1):
    R = s1.R
    V = Weighted(-1, s1.x_z, R)  # R^(-1/2) x_z
    W = Weighted(1, s1.x_zb, R)
    P = weighted_dot(V, W)
    assert P.t == 0
    # exact partial with zb frozen vs. central difference in the z slot
    z0 = 0.7 + 0.3j
    h = 1e-6
    d = V.derivative("z")
    num = [(a - b) / (2 * h) for a, b in
           zip(V(z0 + h, z0.conjugate()), V(z0 - h, z0.conjugate()))]
    sym = d(z0, z0.conjugate())
    for a, b in zip(num, sym):
        assert abs(a - b) < 1e-5 * (1 + abs(b))


def test_weighted_add_weight_matching(s1):
    R = s1.R
    a = Weighted(0, BiRat.const(1), R)
    b = Weighted(2, BiRat.const(1), R)
    assert (a + b).t == 0
    assert a + b == Weighted(0, BiRat.const(1) + R, R)
    with pytest.raises(Exception):
        a + Weighted(1, BiRat.const(1), R)


def test_weighted_conjugate_fixes_R(s1):
    R = s1.R
    assert R.conjugate() == R
    V = Weighted(-1, s1.x_z, R)
    assert V.conjugate().value == s1.x_zb
