"""Minimal surfaces from rational holomorphic data.

A surface is stored through its holomorphic data F (univariate rational
vector); the immersion is x = F + conj(F), automatically harmonic.  The
constructor enforces conformality F'.F' = 0 exactly.  Weighted fields
R^(t/2) * value with R = 2 x_z.x_zb carry the conformal-factor powers that
appear throughout the Moebius-geometric formulas, keeping every derivative
rational.
"""

from __future__ import annotations

import math
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .algebra import AlgebraError, Poly, Rat, poly_gcd, squarefree_decomposition
from .birational import BiPoly, BiRat, VecBiRat, dot
from .field import Element, is_zero


class SurfaceError(ValueError):
    pass


class NonConformal(SurfaceError):
    """Holomorphic data with F'.F' != 0."""


class ZeroDifferential(SurfaceError):
    """Holomorphic data with F' identically zero."""


class DegenerateSurface(SurfaceError):
    """Surface is umbilic everywhere (a plane)."""


def _rat_vec(F) -> list[Rat]:
    out = []
    for f in F:
        if isinstance(f, Rat):
            out.append(f)
        elif isinstance(f, Poly):
            out.append(Rat(f, None, f.var, reduce=False))
        else:
            out.append(Rat(Poly([f]), reduce=False))
    return out


def rat_dot(u: Sequence[Rat], v: Sequence[Rat]) -> Rat:
    if len(u) != len(v):
        raise AlgebraError("dimension mismatch")
    acc = Rat(Poly([]), reduce=False)
    for a, b in zip(u, v):
        acc = acc + a * b
    return acc


class MinimalSurface:
    """Conformal minimal immersion x = F + conj(F) of rational type."""

    def __init__(self, F: Iterable, n: int | None = None, base_point=None):
        self.F = _rat_vec(F)
        self.n = n if n is not None else len(self.F)
        if len(self.F) != self.n or self.n < 3:
            raise SurfaceError(
                f"need dim(F) = n >= 3, got {len(self.F)} and n={self.n}")
        self.Fp = [f.derivative() for f in self.F]
        if not any(self.Fp):
            raise ZeroDifferential("F' is identically zero")
        g = rat_dot(self.Fp, self.Fp)
        if g:
            raise NonConformal(f"F'.F' = {g!r} != 0")
        self.base_point = list(base_point) if base_point is not None else None

    # -- basic fields ----------------------------------------------------

    @cached_property
    def x(self) -> VecBiRat:
        """The immersion as a bivariate rational vector (base point included)."""
        comps = []
        for k, f in enumerate(self.F):
            c = BiRat.from_rat(f) + BiRat.from_rat(f.conjugate())
            if self.base_point is not None:
                c = c + BiRat.const(self.base_point[k])
            comps.append(c)
        return VecBiRat(comps)

    @cached_property
    def x_z(self) -> VecBiRat:
        return VecBiRat([BiRat.from_rat(f) for f in self.Fp])

    @cached_property
    def x_zb(self) -> VecBiRat:
        return self.x_z.conjugate()

    @cached_property
    def R(self) -> BiRat:
        """R = 2 x_z.x_zb = e^(2w); real and positive on the immersed set."""
        return dot(self.x_z, self.x_zb) * 2

    def translated(self, x0) -> "MinimalSurface":
        """Same holomorphic data with base point shifted by x0."""
        base = list(x0) if self.base_point is None else \
            [a + b for a, b in zip(self.base_point, x0)]
        s = MinimalSurface(self.F, self.n, base)
        return s

    @cached_property
    def ends(self) -> list:
        """Pole locations of x_z in C u {inf} ('inf' for the infinite end)."""
        factors: list[Poly] = []
        for f in self.Fp:
            for fac, _m in squarefree_decomposition(f.den):
                if not any(fac == g for g in factors):
                    factors.append(fac)
        out = []
        for fac in sorted(factors, key=lambda f: int(f.degree)):
            for r in _roots_of(fac):
                if not any(abs(complex(r) - complex(p)) < 1e-9 for p in out):
                    out.append(r)
        if any(f.num.degree - f.den.degree >= -1 for f in self.Fp if f):
            out.append("inf")
        return out

    # -- invariants ------------------------------------------------------

    def isotropy_order(self):
        """Largest r with F^(j).F^(k) = 0 for all 2 <= j,k <= r+1; inf if
        isotropy persists to the rational degree bound."""
        D = max(max(f.num.degree, f.den.degree, 0) for f in self.F)
        bound = 2 * int(D) + 2
        derivs = [self.F, self.Fp]
        while len(derivs) <= bound + 1:
            derivs.append([f.derivative() for f in derivs[-1]])
        for r in range(1, bound + 1):
            top = derivs[r + 1]
            for j in range(2, r + 2):
                if rat_dot(derivs[j], top):
                    return r - 1
        return math.inf

    @cached_property
    def hopf_Q(self) -> VecBiRat:
        """Classical normal-valued Hopf differential
        Q = x_zz - (x_zz.x_zb / x_z.x_zb) x_z."""
        x_zz = self.x_z.derivative("z")
        coef = dot(x_zz, self.x_zb) / dot(self.x_z, self.x_zb)
        return x_zz - self.x_z * coef

    @cached_property
    def _umbilic_minors(self) -> list[Rat]:
        """Holomorphic 2x2 minors of (F', F''); their common zeros are the
        umbilic points (Q = 0 iff x_zz parallel to x_z iff F'' parallel F')."""
        Fpp = [f.derivative() for f in self.Fp]
        out = []
        for i in range(self.n):
            for j in range(i + 1, self.n):
                m = self.Fp[i] * Fpp[j] - self.Fp[j] * Fpp[i]
                if m:
                    out.append(m)
        return out

    def umbilic_locus(self, chart: str = "z", radius: float = 10.0,
                      grid: int = 200) -> list[complex]:
        """Isolated umbilic points inside the disk |z| < radius.

        In exact mode an empty result is certified by a constant gcd of the
        minor numerators; otherwise candidate roots are polished by Newton
        iteration and confirmed on every minor.
        """
        if radius <= 0 or grid < 16:
            raise SurfaceError("need radius > 0 and grid >= 16")
        minors = self._umbilic_minors
        if chart == "w":
            minors = [m.invert_chart() for m in minors]
        if not minors:
            raise DegenerateSurface("Q = 0 identically (totally umbilic)")
        g = minors[0].num
        for m in minors[1:]:
            g = poly_gcd(g, m.num)
            if g.degree == 0:
                return []
        if g.degree == 0:
            return []
        roots = [r for r in np.roots(_np_coeffs(g)) if abs(r) < radius]
        out = []
        for r in roots:
            r = _newton_polish(g, complex(r))
            if all(_safe_abs(m, r) < 1e-9 for m in minors):
                out.append(r)
        return out

    def __repr__(self):
        return f"MinimalSurface(n={self.n}, ends={self.ends!r})"


def new_minimal(F: Iterable, n: int | None = None,
                base_point=None) -> MinimalSurface:
    """Validate holomorphic data and build the surface (conformality exact)."""
    return MinimalSurface(F, n, base_point)


def _roots_of(fac: Poly) -> list:
    """Roots of a squarefree factor: exact for linear factors, numeric else."""
    if fac.degree == 1:
        c0, c1 = fac.coeffs
        inv = c1.inverse() if isinstance(c1, Element) else 1 / c1
        return [-c0 * inv]
    return [complex(r) for r in np.roots(_np_coeffs(fac))]


def _np_coeffs(p: Poly) -> np.ndarray:
    return np.array([complex(c) for c in reversed(p.coeffs)])


def _newton_polish(p: Poly, z: complex, steps: int = 50,
                   tol: float = 1e-12) -> complex:
    cs = _np_coeffs(p)
    ds = np.polyder(cs)
    for _ in range(steps):
        f = np.polyval(cs, z)
        fp = np.polyval(ds, z)
        if abs(fp) == 0:
            break
        step = f / fp
        z -= step
        if abs(step) < tol:
            break
    return z


def _safe_abs(m: Rat, z: complex) -> float:
    num = np.polyval(_np_coeffs(m.num), z)
    den = np.polyval(_np_coeffs(m.den), z)
    if abs(den) < 1e-300:
        return math.inf
    return abs(num / den)


class Weighted:
    """A field R^(t/2) * value, value a BiRat or VecBiRat, R = 2 x_z.x_zb.

    The weight keeps powers of the conformal factor e^w = R^(1/2) symbolic,
    so that covariant derivatives of frame quantities remain rational:
    d/dz (R^(t/2) V) = R^(t/2) ((t/2)(R_z/R) V + V_z).
    """

    __slots__ = ("t", "value", "R")

    def __init__(self, t: int, value, R: BiRat):
        self.t = t
        self.value = value
        self.R = R

    @property
    def is_vector(self) -> bool:
        return isinstance(self.value, VecBiRat)

    def __bool__(self):
        return bool(self.value)

    def _match(self, other: "Weighted"):
        """Rewrite both operands to a common weight (the lower one)."""
        if self.t == other.t:
            return self.value, other.value
        if (self.t - other.t) % 2:
            raise AlgebraError("cannot add weights of different parity")
        if self.t > other.t:
            shift = self.R ** ((self.t - other.t) // 2)
            return self.value * shift, other.value
        shift = self.R ** ((other.t - self.t) // 2)
        return self.value, other.value * shift

    def __add__(self, other: "Weighted") -> "Weighted":
        a, b = self._match(other)
        return Weighted(min(self.t, other.t), a + b, self.R)

    def __sub__(self, other: "Weighted") -> "Weighted":
        return self + (-other)

    def __neg__(self) -> "Weighted":
        return Weighted(self.t, -self.value, self.R)

    def __mul__(self, other):
        if isinstance(other, Weighted):
            a, b = self.value, other.value
            if isinstance(b, VecBiRat) and not isinstance(a, VecBiRat):
                a, b = b, a  # vector-first keeps BiRat scalars on the right
            return Weighted(self.t + other.t, a * b, self.R)
        return Weighted(self.t, self.value * other, self.R)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Weighted):
            return Weighted(self.t - other.t, self.value / other.value, self.R)
        return Weighted(self.t, self.value / other, self.R)

    def __eq__(self, other):
        if not isinstance(other, Weighted):
            return NotImplemented
        a, b = self._match(other)
        return a == b

    def derivative(self, var: str = "z") -> "Weighted":
        dlog = self.R.derivative(var) / self.R
        if self.t:
            half = Element(self.t) / 2
            core = self.value * (dlog * half) + self.value.derivative(var)
        else:
            core = self.value.derivative(var)
        return Weighted(self.t, core, self.R)

    def conjugate(self) -> "Weighted":
        # R is real on the real slice: conj(R) = R exactly
        return Weighted(self.t, self.value.conjugate(), self.R)

    def __call__(self, z, zb=None):
        rv = self.R(z, zb)
        v = self.value(z, zb)
        scale = rv ** (self.t / 2) if isinstance(rv, complex) else None
        if scale is None:
            raise AlgebraError("numeric evaluation needs a complex point")
        if isinstance(v, list):
            return [scale * c for c in v]
        return scale * v

    def __repr__(self):
        return f"Weighted(R^({self.t}/2) * {self.value!r})"


def weighted_dot(u: Weighted, v: Weighted) -> Weighted:
    return Weighted(u.t + v.t, dot(u.value, v.value), u.R)


WeightedVec = Weighted
