"""Built-in surface fixtures used by tests, the CLI golden specs, and docs.

All data is exact over Q(i) or Q(i)[sqrt(30)].  The fixtures are:

* ``totally_isotropic_r6`` — a totally isotropic minimal surface in R^6 with
  ends at 0 and infinity, together with the closed form of its pedal surface
  (pedal point the origin) and a polynomial light-cone lift of that pedal.
* ``one_isotropic_r5`` — a 1-isotropic (superconformal, not totally
  isotropic) minimal surface in R^5 with ends at 0 and the cube roots of
  unity, written as x_z = Phi / (z^3 (z^3-1)^3).
* ``three_end_ansatz`` / ``four_end_ansatz`` — the pole prescriptions whose
  Gram systems reproduce the two constructed families.
"""

from __future__ import annotations

from fractions import Fraction as Fr

from .algebra import Poly, Rat
from .birational import BiPoly, BiRat, VecBiRat
from .field import Element
from .surface import MinimalSurface


def _e(re=0, im=0, sre=0, sim=0):
    return Element(re, im, sre, sim, 30 if (sre or sim) else 0)


def totally_isotropic_r6() -> MinimalSurface:
    """Totally isotropic minimal surface in R^6:
    F = (iz/4, -z/4, i/(2z), 1/(2z), i z^2/6, -z^2/6)."""
    z = Poly.x()
    F = [
        Rat(z * _e(0, Fr(1, 4))),
        Rat(z * _e(Fr(-1, 4))),
        Rat(Poly([_e(0, Fr(1, 2))]), z),
        Rat(Poly([_e(Fr(1, 2))]), z),
        Rat(z * z * _e(0, Fr(1, 6))),
        Rat(z * z * _e(Fr(-1, 6))),
    ]
    return MinimalSurface(F, 6)


def pedal_of_totally_isotropic_r6() -> VecBiRat:
    """Closed form of the pedal (pedal point 0) of totally_isotropic_r6:
    a common positive denominator 1 + r^4/4 + 4 r^6/9 times six components
    polynomial in z, zb (r^2 = z zb)."""
    Z, ZB = BiPoly.z(), BiPoly.zb()
    r2 = Z * ZB
    one = BiPoly.const(1)
    den = one + r2 ** 2 * _e(Fr(1, 4)) + r2 ** 3 * _e(Fr(4, 9))
    a = one + r2 ** 3 * _e(Fr(1, 9))           # 1 + r^6/9
    b = r2 * _e(Fr(1, 4)) + r2 ** 2 * _e(Fr(1, 3))   # r^2/4 + r^4/3
    c = one - r2 ** 2 * _e(Fr(1, 12))          # 1 - r^4/12
    comps = [
        a * (Z - ZB) * _e(0, Fr(1, 2)),
        a * (Z + ZB) * _e(Fr(-1, 2)),
        b * (ZB - Z) * _e(0, 1),
        b * (ZB + Z),
        c * (Z * Z - ZB * ZB) * _e(0, Fr(1, 2)),
        c * (Z * Z + ZB * ZB) * _e(Fr(-1, 2)),
    ]
    return VecBiRat([BiRat(n, den) for n in comps])


def polynomial_lift_of_pedal_r6() -> VecBiRat:
    """A polynomial light-cone lift (8 components) of the pedal surface of
    totally_isotropic_r6; proportional to the canonical lift."""
    Z, ZB = BiPoly.z(), BiPoly.zb()
    r2 = Z * ZB
    one = BiPoly.const(1)
    a = one + r2 ** 3 * _e(Fr(1, 9))
    b = r2 * _e(Fr(1, 2)) + r2 ** 2 * _e(Fr(2, 3))
    c = one - r2 ** 2 * _e(Fr(1, 12))
    comps = [
        (Z - ZB) * a * _e(0, 1),
        (Z + ZB) * a * _e(-1),
        (ZB - Z) * b * _e(0, 1),
        (ZB + Z) * b,
        (Z * Z - ZB * ZB) * c * _e(0, 1),
        (Z * Z + ZB * ZB) * c * _e(-1),
        one - r2 - r2 ** 2 * _e(Fr(3, 4)) + r2 ** 3 * _e(Fr(4, 9))
        - r2 ** 4 * _e(Fr(1, 36)),
        one + r2 + r2 ** 2 * _e(Fr(5, 4)) + r2 ** 3 * _e(Fr(4, 9))
        + r2 ** 4 * _e(Fr(1, 36)),
    ]
    return VecBiRat([BiRat(n, None, reduce=False) for n in comps])


# complex basis vectors of the R^5 construction
E1 = [_e(1), _e(0, 1), _e(0), _e(0), _e(0)]
E2 = [_e(0), _e(0), _e(1), _e(0, 1), _e(0)]
E5 = [_e(0), _e(0), _e(0), _e(0), _e(1)]


def _lincomb(pairs) -> list[Rat]:
    """Sum of rat * basis-vector products as a 5-component Rat vector."""
    out = [Rat(Poly([])) for _ in range(5)]
    for r, vec in pairs:
        for k in range(5):
            if vec[k]:
                out[k] = out[k] + r * vec[k]
    return out


def one_isotropic_r5(base_point=None) -> MinimalSurface:
    """1-isotropic minimal surface in R^5 with ends at 0 and the three cube
    roots of unity; x_z = Phi / (z^3 (z^3 - 1)^3) with
    Phi = (1 - 20 z^3 - 80 z^6) E1 + (z^8/2) conj(E1)
          - (8 z^3 + 20 z^6 - 10 z^9) E2 + z^5 conj(E2)
          + sqrt(30) (z^4 + 2 z^7) e5."""
    z = Poly.x()
    d2 = (z ** 3 - Poly([1])) ** 2  # (z^3 - 1)^2
    conj5 = lambda v: [c.conjugate() for c in v]
    F = _lincomb([
        (Rat((Poly([1]) + z ** 3 * 32) * _e(Fr(1, 2)), d2 * z ** 2), E1),
        (Rat((Poly([1]) - z ** 3 * 2) * _e(Fr(1, 12)), d2), conj5(E1)),
        (Rat(z * 8 - z ** 4 * 5, d2), E2),
        (Rat(Poly([_e(Fr(-1, 6))]), d2), conj5(E2)),
        (Rat(z ** 2 * _e(0, 0, Fr(-1, 2)), d2), E5),
    ])
    return MinimalSurface(F, 5, base_point)


def phi_r5() -> list[Poly]:
    """The numerator polynomial vector Phi of one_isotropic_r5's x_z."""
    z = Poly.x()
    coeffs = [
        (Poly([1]) - z ** 3 * 20 - z ** 6 * 80, E1),
        (z ** 8 * _e(Fr(1, 2)), [c.conjugate() for c in E1]),
        (-(z ** 3 * 8 + z ** 6 * 20 - z ** 9 * 10), E2),
        (z ** 5, [c.conjugate() for c in E2]),
        ((z ** 4 + z ** 7 * 2) * _e(0, 0, 1), E5),
    ]
    out = [Poly([]) for _ in range(5)]
    for p, vec in coeffs:
        for k in range(5):
            if vec[k]:
                out[k] = out[k] + p * vec[k]
    return out


def enneper() -> MinimalSurface:
    """Enneper's surface in R^3: the standard non-superconformal test case
    (F'' . F'' = 4, so <kappa, kappa> != 0)."""
    z = Poly.x()
    F = [
        Rat(z - z ** 3 * Element(Fr(1, 3))),
        Rat((z + z ** 3 * Element(Fr(1, 3))) * Element(0, 1)),
        Rat(z ** 2),
    ]
    return MinimalSurface(F, 3)


def quadratic_r5() -> MinimalSurface:
    """A cheap minimal surface in R^5 (contained in an R^4 slice):
    F' = (1, i, z, iz, 0)."""
    z = Poly.x()
    F = [Rat(z), Rat(z * Element(0, 1)), Rat(z ** 2 * Element(Fr(1, 2))),
         Rat(z ** 2 * Element(0, Fr(1, 2))), Rat(Poly([]))]
    return MinimalSurface(F, 5)


def isotropic_quadratic(seed: int = 0) -> MinimalSurface:
    """Random-ish isotropic quadratic data in C^6 for property tests:
    F' = u + v z with u, v isotropic and u.v = 0 by construction."""
    import random
    rng = random.Random(seed)

    def iso_vec():
        p = [Element(rng.randint(-4, 4), rng.randint(-4, 4)) for _ in range(3)]
        # (p, i p) is always isotropic in C^6
        return p + [c * Element(0, 1) for c in p]

    z = Poly.x()
    while True:
        # u.v = p.q + (ip).(iq) = 0 automatically, likewise u.u = v.v = 0
        u, v = iso_vec(), iso_vec()
        if not any(u) or not any(v):
            continue
        F = [Rat(Poly([0, a]) + z * z * (b / 2)) for a, b in zip(u, v)]
        try:
            return MinimalSurface(F, 6)
        except Exception:
            continue


def three_end_ansatz():
    """Pole prescription for the R^6 family: x_z with order-3 poles at 0
    and 1 plus a linear polynomial tail, no residue terms."""
    from .gram import pole_ansatz
    names = {(0, 3): "u3", (0, 2): "u2", (1, 3): "v3", (1, 2): "v2",
             ("tail", 0): "w2", ("tail", 1): "w3"}
    return pole_ansatz({0: 3, 1: 3}, tail_degree=1, names=names)


def four_end_ansatz():
    """Numerator prescription for the R^5 family: x_z = Phi / (z^3 (z^3-1)^3)
    with deg Phi <= 10, residue elimination included as vector relations."""
    from .gram import numerator_ansatz
    z = Poly.x()
    den = (z ** 3 - Poly([1])) ** 3 * z ** 3
    return numerator_ansatz(10, den)
