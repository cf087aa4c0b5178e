"""Adjoint and pedal transforms of superconformal minimal surfaces.

The g-parametrized family of adjoint transforms is

    xhat = x - ((x.x_zb + conj(g)) / (x_z.x_zb)) x_z
             - ((x.x_z  +      g ) / (x_z.x_zb)) x_zb

for meromorphic g.  Pedal surfaces are the translation-conjugated g = 0
case.  All defining contact identities reduce to exact zero numerators.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .algebra import Poly, Rat
from .birational import BiPoly, BiRat, VecBiRat, dot
from .field import Element
from .kernels import birat_grid
from .surface import MinimalSurface, Weighted


class AdjointError(ValueError):
    pass


class NotSuperconformal(AdjointError):
    """The adjoint family needs Q . Q = 0 (isotropy order >= 1)."""


DUAL_POINT = "inf"  # sentinel for g = infinity (the dual surface)


def _require_superconformal(s: MinimalSurface):
    if s.isotropy_order() < 1:
        raise NotSuperconformal(
            "adjoint transforms require a superconformal base (Q.Q = 0)")


def _as_g(g) -> Rat:
    if isinstance(g, Rat):
        return g
    if isinstance(g, Poly):
        return Rat(g)
    return Rat(Poly([Element(g) if not isinstance(g, Element) else g]))


class AdjointSurface:
    """An adjoint transform of a superconformal minimal surface.

    ``parameter`` is either the meromorphic g (Rat), the pedal point x0
    (list), or the dual-surface sentinel "inf".
    """

    def __init__(self, base: MinimalSurface, xhat: VecBiRat | None,
                 g: Rat | None = None, pedal_point=None):
        self.base = base
        self.xhat = xhat
        self.g = g
        self.pedal_point = list(pedal_point) if pedal_point is not None \
            else None

    @property
    def is_dual(self) -> bool:
        return self.xhat is None

    @cached_property
    def dual_point(self) -> list:
        """Light-cone representative of the degenerate dual surface."""
        if not self.is_dual:
            raise AdjointError("not the dual surface")
        zero, one = Element(0), Element(1)
        return [zero] * self.base.n + [one, -one]

    @cached_property
    def xhat_z(self) -> VecBiRat:
        return self.xhat.derivative("z")

    @cached_property
    def xhat_zb(self) -> VecBiRat:
        return self.xhat.derivative("zb")

    def riccati_residual(self) -> BiRat:
        """theta = mu_z - mu^2/2 - s for mu = -2 zeta_z / zeta,
        zeta = 2 (x.x_zb + conj(g)) e^(-w); identically 0 by construction."""
        if self.is_dual:
            return BiRat.const(0)
        s0, g = self._gauge()
        x, xzb, R = s0.x, s0.x_zb, s0.R
        gbar = BiRat.from_rat(g.conjugate())
        zeta = Weighted(-1, (dot(x, xzb) + gbar) * 2, R)
        mu = -(zeta.derivative("z") / zeta) * Element(2)
        mu_b = mu.value
        wz = R.derivative("z") / (R * 2)
        schwarzian = wz.derivative("z") * 2 - wz * wz * 2
        return mu_b.derivative("z") - mu_b * mu_b * _HALF - schwarzian

    def _gauge(self) -> tuple[MinimalSurface, Rat]:
        """(surface, g) in the gauge the transform was assembled in."""
        if self.pedal_point is not None:
            return (self.base.translated([-c for c in self.pedal_point]),
                    _as_g(0))
        return self.base, self.g

    def __repr__(self):
        tag = "dual" if self.is_dual else (
            f"pedal@{self.pedal_point}" if self.pedal_point is not None
            else f"g={self.g!r}")
        return f"AdjointSurface({tag}, base={self.base!r})"


_HALF = Element(1) / 2


def adjoint(s: MinimalSurface, g) -> AdjointSurface:
    """Adjoint transform of a superconformal minimal surface for given g.

    g = "inf" yields the degenerate dual surface (a single point on the
    light cone for minimal input).
    """
    _require_superconformal(s)
    if isinstance(g, str) and g == DUAL_POINT:
        return AdjointSurface(s, None, None)
    g = _as_g(g)
    xhat = _assemble(s, g)
    return AdjointSurface(s, xhat, g=g)


def _assemble(s: MinimalSurface, g: Rat) -> VecBiRat:
    x, xz, xzb = s.x, s.x_z, s.x_zb
    r2 = dot(xz, xzb)
    gb = BiRat.from_rat(g.conjugate())
    gz = BiRat.from_rat(g)
    A = (dot(x, xzb) + gb) / r2
    B = (dot(x, xz) + gz) / r2
    return x - xz * A - xzb * B


def pedal(s: MinimalSurface, x0) -> AdjointSurface:
    """Pedal surface with pedal point x0: the g = 0 adjoint of x - x0,
    translated back (the foot of the perpendicular from x0 to each tangent
    plane)."""
    _require_superconformal(s)
    x0 = [c if isinstance(c, Element) else Element(c) for c in x0]
    shifted = s.translated([-c for c in x0])
    xhat0 = _assemble(shifted, _as_g(0))
    xhat = xhat0 + VecBiRat([BiRat.const(c) for c in x0])
    return AdjointSurface(s, xhat, pedal_point=x0)


def recover_g(s: MinimalSurface, xhat: VecBiRat) -> Rat:
    """The meromorphic parameter g with adjoint(s, g).xhat = xhat.

    From the closed form, (x - xhat).x_z = x.x_z + g, so
    g = (x - xhat).x_z - x.x_z.  (The source remark's "g dz = (x-xhat).x_z dz"
    omits the x.x_z term; the roundtrip identity fixes the convention.)
    """
    xh = xhat.xhat if isinstance(xhat, AdjointSurface) else xhat
    gb = dot(s.x - xh, s.x_z) - dot(s.x, s.x_z)
    return _to_univariate(gb)


def _to_univariate(r: BiRat) -> Rat:
    """Convert a BiRat known to be independent of zb into a Rat in z."""
    if r.derivative("zb"):
        raise AdjointError("expression depends on zb; not a meromorphic g")
    for c in (0, 1, -1, 2, 7):
        den = Poly([Element(1)])
        ok = True
        for f, e in r.den_factors.items():
            p = _sub_zb(f, Element(c))
            if not p:
                ok = False
                break
            den = den * p ** e
        if ok:
            return Rat(_sub_zb(r.num, Element(c)), den)
    raise AdjointError("could not specialize zb away")  # pragma: no cover


def _sub_zb(p: BiPoly, c: Element) -> Poly:
    coeffs = {}
    for (i, j), a in p.terms.items():
        coeffs[i] = coeffs.get(i, Element(0)) + a * c ** j
    if not coeffs:
        return Poly([])
    out = [Element(0)] * (max(coeffs) + 1)
    for i, a in coeffs.items():
        out[i] = a
    return Poly(out)


def verify_contact(adj: AdjointSurface) -> tuple[BiRat, BiRat]:
    """The defining identities (xhat_z . xhat_z, xhat_z . x_zb); both reduce
    to the exact zero function for every adjoint transform."""
    if adj.is_dual:
        return BiRat.const(0), BiRat.const(0)
    xhz = adj.xhat_z
    return dot(xhz, xhz), dot(xhz, adj.base.x_zb)


def branch_locus(adj: AdjointSurface, chart: str = "z", radius: float = 10.0,
                 grid: int = 200, tol: float = 1e-9) -> dict:
    """Branch points of a pedal surface inside |z| < radius.

    A branch point away from umbilics satisfies x_zz.(x-x0) = x_z.(x-x0) = 0
    simultaneously.  Returns confirmed branch points, base umbilic points
    (always branch points, tagged separately), and unconfirmed "suspect"
    grid cells (small values that Newton refinement could not certify).
    """
    if adj.pedal_point is None:
        raise AdjointError("branch locus is defined for pedal-type input")
    s = adj.base
    x0vec = VecBiRat([BiRat.const(c) for c in adj.pedal_point])
    rel = s.x - x0vec
    b1 = dot(s.x_z.derivative("z"), rel)
    b2 = dot(s.x_z, rel)
    if chart == "w":
        b1, b2 = b1.invert_chart(), b2.invert_chart()
    try:
        umb = s.umbilic_locus(chart=chart, radius=radius, grid=grid)
    except Exception:
        umb = []
    ax = np.linspace(-radius, radius, grid)
    X, Y = np.meshgrid(ax, ax)
    Z = (X + 1j * Y).ravel()
    v1 = _safe_grid(b1, Z)
    v2 = _safe_grid(b2, Z)
    m = np.maximum(v1, v2)
    scale = np.nanmedian(m[np.isfinite(m)]) or 1.0
    cand = Z[np.where(m < 1e-4 * scale)]
    eps = 2 * radius / grid
    confirmed, suspects = [], []
    for z0 in _dedup(cand, eps):
        z1, ok = _refine(b1, b2, complex(z0), tol)
        if ok and not any(abs(z1 - u) < 1e-6 for u in umb):
            if not any(abs(z1 - c) < 1e-8 for c in confirmed):
                confirmed.append(z1)
        elif not ok and _cell_near_zero(b1, b2, complex(z0), eps):
            suspects.append(complex(z0))
    return {"branch": confirmed, "umbilic": list(umb), "suspect": suspects}


def _safe_grid(b: BiRat, Z: np.ndarray) -> np.ndarray:
    with np.errstate(all="ignore"):
        v = np.abs(birat_grid(b, Z))
    v[~np.isfinite(v)] = np.inf
    return v


def _cell_near_zero(b1: BiRat, b2: BiRat, z0: complex, eps: float) -> bool:
    """Whether the candidate cell plausibly contains a common zero: the
    minimum of max(|b1|, |b2|) on a local mini-grid must be far below the
    cell's typical magnitude (a global median can be inflated by poles
    elsewhere, creating false candidates)."""
    ax = np.linspace(-eps, eps, 7)
    Z = (z0 + ax[:, None] + 1j * ax[None, :]).ravel()
    m = np.maximum(_safe_grid(b1, Z), _safe_grid(b2, Z))
    finite = m[np.isfinite(m)]
    if not finite.size:
        return True
    return bool(finite.min() < 1e-6 * (1 + np.median(finite)))


def _dedup(pts, eps):
    out = []
    for p in pts:
        if not any(abs(p - q) < eps for q in out):
            out.append(p)
    return out


def _refine(b1: BiRat, b2: BiRat, z0: complex, tol: float,
            steps: int = 60) -> tuple[complex, bool]:
    """Gauss-Newton on the 4-real-equation system (b1, b2)(z, conj z) = 0."""
    h = 1e-7
    z = z0
    for _ in range(steps):
        f = np.array([birat_grid(b1, np.array([z]))[0],
                      birat_grid(b2, np.array([z]))[0]])
        F = np.array([f[0].real, f[0].imag, f[1].real, f[1].imag])
        if np.max(np.abs(F)) < tol:
            return z, True
        J = np.empty((4, 2))
        for k, dz in enumerate((h, 1j * h)):
            fp = np.array([birat_grid(b1, np.array([z + dz]))[0],
                           birat_grid(b2, np.array([z + dz]))[0]])
            col = (np.array([fp[0].real, fp[0].imag, fp[1].real, fp[1].imag])
                   - F) / h
            J[:, k] = col
        try:
            step, *_ = np.linalg.lstsq(J, -F, rcond=None)
        except np.linalg.LinAlgError:
            return z, False
        z = z + step[0] + 1j * step[1]
        if not np.isfinite(z):
            return z0, False
    f = np.array([birat_grid(b1, np.array([z]))[0],
                  birat_grid(b2, np.array([z]))[0]])
    return z, bool(np.max(np.abs([f[0].real, f[0].imag, f[1].real,
                                  f[1].imag])) < tol)
