"""Moebius-geometric frame machinery on the projectivized light cone.

A conformal immersion into S^n is handled through a null lift L into the
Lorentz space R^(n+2,1) (signature: components 0..n spacelike, component n+1
timelike).  The canonical lift is Y = S^(-1/2) L with S = 2<L_z, L_zb>; all
frame quantities (N, Schwarzian s, Hopf differential kappa, normal connection
D) are computed symbolically as weighted rational fields, so Willmore and
S-Willmore certificates reduce to exact polynomial identities.
"""

from __future__ import annotations

import math
from functools import cached_property

import numpy as np

from .algebra import AlgebraError
from .birational import BiPoly, BiRat, VecBiRat, dot
from .field import Element
from .surface import MinimalSurface, Weighted

TWO = Element(2)
HALF = Element(1) / 2


class MoebiusError(ValueError):
    pass


class NotConformal(MoebiusError):
    pass


class UmbilicDegenerate(MoebiusError):
    """kappa vanishes identically: no well-defined Hopf direction."""


class SuperconformalInput(MoebiusError):
    """<kappa, kappa> = 0: the mu formula needs an explicit mu."""


class RankDrop(MoebiusError):
    pass


class NonCompact(MoebiusError):
    pass


def lorentz_dot(u: VecBiRat, v: VecBiRat) -> BiRat:
    """<u, v> = -u_last v_last + sum of the remaining products."""
    if len(u) != len(v):
        raise AlgebraError("dimension mismatch in Lorentz product")
    acc = BiRat.const(0)
    for a, b in zip(list(u)[:-1], list(v)[:-1]):
        acc = acc + a * b
    return acc - u[len(u) - 1] * v[len(v) - 1]


def wldot(u: Weighted, v: Weighted) -> Weighted:
    return Weighted(u.t + v.t, lorentz_dot(u.value, v.value), u.R)


def make_lift(x: VecBiRat) -> VecBiRat:
    """Euclidean-to-light-cone lift (x, (-1+x.x)/2, (-1-x.x)/2)."""
    xx = dot(x, x)
    half = BiRat.const(HALF)
    return VecBiRat(list(x) + [(xx - 1) * half, (xx + 1) * (-half)])


def canonical_lift(x: VecBiRat) -> Weighted:
    """Canonical lift of a conformal x: R^n -> S^n, with <Y_z, Y_zb> = 1/2."""
    xz = x.derivative("z")
    if dot(xz, xz) != BiRat.const(0):
        raise NotConformal("x_z . x_z != 0")
    L = make_lift(x)
    S = lorentz_dot(L.derivative("z"), L.derivative("zb")) * TWO
    return Weighted(-1, L, S)


class MoebiusData:
    """Canonical frame and Moebius invariants of one conformal immersion.

    Built from any exact null conformal lift; all members are weighted
    rational fields sharing the conformal factor S = 2<L_z, L_zb>.
    """

    def __init__(self, lift: VecBiRat):
        Lz = lift.derivative("z")
        Lzb = lift.derivative("zb")
        if lorentz_dot(lift, lift) != BiRat.const(0):
            raise NotConformal("lift is not null")
        if lorentz_dot(Lz, Lz) != BiRat.const(0):
            raise NotConformal("lift is not conformal")
        S = lorentz_dot(Lz, Lzb) * TWO
        if not S:
            raise NotConformal("degenerate conformal factor")
        self.lift = lift
        self.S = S
        self.n = len(lift) - 2
        self.Y = Weighted(-1, lift, S)

    @cached_property
    def Y_z(self) -> Weighted:
        return self.Y.derivative("z")

    @cached_property
    def Y_zb(self) -> Weighted:
        return self.Y.derivative("zb")

    @cached_property
    def Y_zz(self) -> Weighted:
        return self.Y_z.derivative("z")

    @cached_property
    def Y_zzb(self) -> Weighted:
        return self.Y_z.derivative("zb")

    @cached_property
    def N(self) -> Weighted:
        """Unique N in the frame span with <N,N>=0, <N,Y>=-1, <N,Y_z>=0."""
        a = wldot(self.Y_zzb, self.Y_zzb) * TWO
        return a * self.Y + self.Y_zzb * TWO

    @cached_property
    def s(self) -> Weighted:
        """Schwarzian: s = 2 <Y_zz, N>."""
        return wldot(self.Y_zz, self.N) * TWO

    @cached_property
    def kappa(self) -> Weighted:
        """Hopf differential: normal projection of Y_zz."""
        return self.project(self.Y_zz)

    def project(self, v: Weighted) -> Weighted:
        """Projection onto the Moebius normal bundle."""
        out = v + wldot(v, self.N) * self.Y + wldot(v, self.Y) * self.N
        out = out - wldot(v, self.Y_zb) * (self.Y_z * TWO)
        out = out - wldot(v, self.Y_z) * (self.Y_zb * TWO)
        return out

    def D(self, xi: Weighted, var: str = "z") -> Weighted:
        """Normal connection: projection of the plain derivative."""
        return self.project(xi.derivative(var))

    @cached_property
    def kk(self) -> Weighted:
        """<kappa, kappa> (isotropy scalar)."""
        return wldot(self.kappa, self.kappa)

    @cached_property
    def kkbar(self) -> Weighted:
        """<kappa, conj kappa>; 4 times it is the Moebius metric density."""
        return wldot(self.kappa, self.kappa.conjugate())


def frame_from_lift(lift: VecBiRat) -> MoebiusData:
    return MoebiusData(lift)


def frame_at(x) -> MoebiusData:
    """Frame of a Euclidean conformal immersion (VecBiRat or MinimalSurface)."""
    if isinstance(x, MinimalSurface):
        x = x.x
    xz = x.derivative("z")
    if dot(xz, xz) != BiRat.const(0):
        raise NotConformal("x_z . x_z != 0")
    return MoebiusData(make_lift(x))


def willmore_residual(md) -> Weighted:
    """D_zb D_zb kappa + (conj(s)/2) kappa; identically zero iff Willmore."""
    if not isinstance(md, MoebiusData):
        md = frame_at(md)
    r = md.D(md.D(md.kappa, "zb"), "zb") + md.s.conjugate() * HALF * md.kappa
    return r


def is_willmore(md) -> bool:
    return not willmore_residual(md)


def _deriv_columns(lift: VecBiRat) -> list[VecBiRat]:
    Lz = lift.derivative("z")
    Lzb = lift.derivative("zb")
    Lzz = Lz.derivative("z")
    Lzzb = Lz.derivative("zb")
    Lzzzb = Lzz.derivative("zb")
    return [lift, Lz, Lzb, Lzzb, Lzz, Lzzzb]


def frame_matrix(lift: VecBiRat, p: complex) -> np.ndarray:
    """(n+2) x 6 matrix (L, L_z, L_zb, L_zzb, L_zz, L_zzzb) at p."""
    cols = _deriv_columns(lift)
    return np.array([[complex(ci) for ci in c(p)] for c in cols],
                    dtype=complex).T


def s_willmore_certificate(md, p: complex, threshold: float = 1e-8,
                           gap: float = 1e-6) -> dict:
    """Rank certificate at p: frame rank 6 with singular-value gap implies
    the surface is not S-Willmore near p; exact proportionality of kappa and
    D_zb kappa certifies S-Willmore."""
    if not isinstance(md, MoebiusData):
        md = frame_at(md)
    M = frame_matrix(md.lift, p)
    sv = np.linalg.svd(M, compute_uv=False)
    rank = int(np.sum(sv > threshold * sv[0])) if sv[0] > 0 else 0
    has_gap = bool(sv[0] > 0 and len(sv) >= 6 and sv[5] / sv[0] > gap)
    k, dk = md.kappa, md.D(md.kappa, "zb")
    parallel = _is_parallel(k.value, dk.value)
    return {
        "frame_rank": rank,
        "singular_values": [float(s) for s in sv],
        "gap_certified": has_gap,
        "kappa_parallel_Dzb_kappa": parallel,
        "is_s_willmore_near_p": parallel and not (rank == 6 and has_gap),
    }


def _is_parallel(u: VecBiRat, v: VecBiRat) -> bool:
    for i in range(len(u)):
        for j in range(i + 1, len(u)):
            if u[i] * v[j] - u[j] * v[i]:
                return False
    return True


def mu_eta_rho(md, mu: Weighted | None = None):
    """(mu, eta, rho) for the adjoint-transform formalism.

    mu is conj-free input (the function mu itself); when omitted it is
    derived from mu_bar = -<k,k>_zb / <k,k>, which needs <k,k> != 0.
    For Euclidean minimal data pass mu = mu* = 2 w_z.
    """
    if not isinstance(md, MoebiusData):
        md = frame_at(md)
    if not md.kappa:
        raise UmbilicDegenerate("kappa = 0")
    if mu is None:
        if not md.kk:
            raise SuperconformalInput(
                "<kappa,kappa> = 0: mu is not determined, supply one")
        mu_bar = -(md.kk.derivative("zb") / md.kk)
        mu = mu_bar.conjugate()
    mu_bar = mu.conjugate()
    eta = md.D(md.kappa, "zb") + mu_bar * HALF * md.kappa
    rho = mu_bar.derivative("z") - md.kkbar * TWO
    return mu, eta, rho


def minimal_mu(surface: MinimalSurface, md: MoebiusData | None = None) -> Weighted:
    """mu* = 2 w_z = R_z / R for a Euclidean minimal surface."""
    R = surface.R
    S = md.S if md is not None else R
    return Weighted(0, R.derivative("z") / R, S)


def theta_forms(md, mu: Weighted | None = None) -> tuple[BiRat, BiRat]:
    """(Theta0, Theta3) coefficients as plain rational fields.

    Theta0 = <D_zb k, k>^2 - <D_zb k, D_zb k><k, k>  (a (dz)^6 form);
    Theta3 = rho <k, k>                              (a (dz)^4 form).
    """
    if not isinstance(md, MoebiusData):
        md = frame_at(md)
    dk = md.D(md.kappa, "zb")
    t0 = wldot(dk, md.kappa) * wldot(dk, md.kappa) - wldot(dk, dk) * md.kk
    theta0 = _as_birat(t0)
    try:
        _, _, rho = mu_eta_rho(md, mu)
        theta3 = _as_birat(rho * md.kk)
    except SuperconformalInput:
        # <k,k> = 0 makes Theta3 = rho <k,k> vanish regardless of mu
        theta3 = BiRat.const(0)
    return theta0, theta3


def _as_birat(w: Weighted) -> BiRat:
    """Collapse an even-weight field to the plain rational function."""
    if w.t % 2:
        raise AlgebraError("odd weight has no rational collapse")
    if w.t == 0:
        return w.value if isinstance(w.value, BiRat) else w.value
    return w.value * (w.R ** (w.t // 2))


# -- numeric layer: sampling, xi map, energy -----------------------------

def _numeric_weighted(w: Weighted, pts: np.ndarray) -> np.ndarray:
    """Evaluate a weighted vector at an array of complex points."""
    from .kernels import birat_grid
    S = birat_grid(w.R, pts)
    scale = S.astype(complex) ** (w.t / 2)
    comps = [birat_grid(c, pts) * scale for c in w.value]
    return np.stack(comps, axis=-1)


def xi_map(md, samples: np.ndarray | None = None, tol_rank: float = 1e-8):
    """Sampled unit normal xi orthogonal to Re/Im of eta# in the S^5 setting.

    eta# = <k,k> D_zb k - <k, D_zb k> k.  Returns the samples, xi values,
    and diagnostics |<xi_z, xi_z>| and the misalignment of xi_zzb with xi
    (both should vanish for conformally harmonic xi).
    """
    if not isinstance(md, MoebiusData):
        md = frame_at(md)
    if md.n != 5:
        raise MoebiusError("xi map requires an S^5 (7-component lift) input")
    if samples is None:
        t = np.linspace(0.15, 0.85, 50)
        samples = 0.9 * np.exp(2j * np.pi * 3 * t) * (0.3 + 0.6 * t)
    eta_sharp = (md.kappa, md.D(md.kappa, "zb"))
    h = 1e-5
    vals, diag_conf, diag_align = [], [], []
    prev = None
    for p in samples:
        xi = _xi_at(md, eta_sharp, complex(p), tol_rank)
        if prev is not None and _ldot_c(xi, prev).real < 0:
            xi = -xi
        prev = xi
        # numeric derivatives of the unit field for the diagnostics
        xs = {}
        for dz, dzb in ((h, 0), (-h, 0), (0, h), (0, -h), (h, h), (h, -h),
                        (-h, h), (-h, -h), (0, 0)):
            q = complex(p) + dz + 1j * dzb
            x2 = _xi_at(md, eta_sharp, q, tol_rank)
            if _ldot_c(x2, xi).real < 0:
                x2 = -x2
            xs[(dz, dzb)] = x2
        xi_x = (xs[(h, 0)] - xs[(-h, 0)]) / (2 * h)
        xi_y = (xs[(0, h)] - xs[(0, -h)]) / (2 * h)
        xi_z = (xi_x - 1j * xi_y) / 2
        lap = (xs[(h, 0)] + xs[(-h, 0)] + xs[(0, h)] + xs[(0, -h)]
               - 4 * xs[(0, 0)]) / (h * h)
        xi_zzb = lap / 4
        diag_conf.append(abs(_ldot_c(xi_z, xi_z)))
        proj = xi_zzb - _ldot_c(xi_zzb, xi) * xi
        denom = np.linalg.norm(xi_zzb) + 1e-300
        diag_align.append(float(np.linalg.norm(proj) / denom))
        vals.append(xi)
    return {
        "samples": np.asarray(samples),
        "xi": np.asarray(vals),
        "conformality": np.asarray(diag_conf),
        "alignment_defect": np.asarray(diag_align),
    }


def _ldot_c(u: np.ndarray, v: np.ndarray) -> complex:
    return complex(np.sum(u[:-1] * v[:-1]) - u[-1] * v[-1])


def _xi_at(md: MoebiusData, eta_sharp, p: complex,
           tol_rank: float) -> np.ndarray:
    """Unit normal orthogonal to Re/Im eta# at one point (sign-free).

    eta# = <k,k> D_zb k - <k, D_zb k> k is assembled numerically from the
    sampled kappa and D_zb kappa (the symbolic product is needlessly large).
    """
    kappa, dk = eta_sharp
    kv = _numeric_weighted(kappa, np.array([p]))[0]
    dv = _numeric_weighted(dk, np.array([p]))[0]
    es = _ldot_c(kv, kv) * dv - _ldot_c(kv, dv) * kv
    span = np.stack([es.real, es.imag])
    if np.linalg.matrix_rank(span, tol=tol_rank * max(1.0,
                                                      abs(span).max())) < 2:
        raise RankDrop(f"eta# does not span rank 2 at {p}")
    # normal bundle basis: orthogonal complement of {Y, Y_z, Y_zb, Y_zzb}
    cols = _deriv_columns(md.lift)[:4]
    V = np.array([[complex(ci) for ci in c(p)] for c in cols], dtype=complex)
    G = np.diag([1.0] * (md.n + 1) + [-1.0])
    # kernel of V G (Lorentz-orthogonality to the frame)
    _, sv, vh = np.linalg.svd(V @ G)
    kernel = vh[4:].conj()
    # restrict eta# span to the kernel and complement it there
    basis = kernel  # 3 x (n+2), Lorentz-spacelike normal bundle
    gram = basis @ G @ basis.T
    coeff = np.linalg.solve(gram, basis @ G @ span.T).T  # 2 x 3
    _, _, w = np.linalg.svd(coeff)
    xi_c = w[-1].conj() @ basis
    nrm = _ldot_c(xi_c, xi_c)
    xi_c = xi_c / np.sqrt(complex(nrm))
    if abs(xi_c.imag).max() > 1e-6 * max(1.0, abs(xi_c.real).max()):
        # rotate the leftover complex phase away
        ph = np.exp(-1j * np.angle(xi_c[np.argmax(abs(xi_c))]))
        xi_c = xi_c * ph
    return xi_c.real


def _smooth_step(t: np.ndarray) -> np.ndarray:
    """C^infinity step: 0 for t <= 0, 1 for t >= 1."""
    def h(u):
        out = np.zeros_like(u)
        m = u > 0
        out[m] = np.exp(-1.0 / u[m])
        return out
    a, b = h(t), h(1.0 - t)
    return a / (a + b + 1e-300)


def willmore_energy(md, grid: int = 512, compact_check=None) -> dict:
    """Willmore functional W = 4 int |kappa|^2 dx dy over C u {inf}.

    Two-chart Gauss-Legendre quadrature with a smooth partition of unity on
    the ring 1/2 < |z| < 2.  ``compact_check`` may carry a callable raising
    NonCompact; the inverted-chart frame existing and being exact is itself
    the smoothness witness for rational data.
    """
    ends = md.ends if isinstance(md, MinimalSurface) else []
    if not isinstance(md, MoebiusData):
        md = frame_at(md)
    if compact_check is not None:
        compact_check()
    if not md.kappa:
        return {"W": 0.0, "nearest_2pi_multiple": 0, "defect": 0.0}
    if ends:
        raise NonCompact(
            f"minimal surface has ends {ends}; integrate its pedal "
            "or adjoint instead")
    md_inv = MoebiusData(md.lift.invert_chart())
    total = 0.0
    for m in (md, md_inv):
        total += _chart_integral(m.kkbar, grid)
    k = round(total / (2 * math.pi))
    return {"W": total, "nearest_2pi_multiple": int(k),
            "defect": abs(total - 2 * math.pi * k)}


def _chart_integral(kkbar: Weighted, grid: int) -> float:
    from .kernels import birat_grid
    nodes, weights = np.polynomial.legendre.leggauss(grid)
    xs = 2.0 * nodes
    ws = 2.0 * weights
    X, Y = np.meshgrid(xs, xs)
    WW = np.outer(ws, ws)
    Z = X + 1j * Y
    r = np.abs(Z)
    # PoU weight: 1 well inside |z| < 1, 0 outside |z| > 2
    t = (np.log(np.maximum(r, 1e-300)) / math.log(2.0) + 1.0) / 2.0
    phi = 1.0 - _smooth_step(t)
    mask = phi > 0
    dens = np.zeros_like(phi)
    pts = Z[mask]
    num = birat_grid(kkbar.value, pts)
    S = birat_grid(kkbar.R, pts)
    vals = (num * S.astype(complex) ** (kkbar.t / 2)).real
    dens[mask] = 4.0 * vals
    return float(np.sum(dens * phi * WW))
