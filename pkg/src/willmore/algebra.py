"""Univariate exact polynomial and rational-function algebra.

Polynomials are dense ascending coefficient lists over the exact field (or
complex in floating mode).  The gcd used for reduction in exact mode is a
subresultant polynomial remainder sequence; floating coefficients never go
through gcd-based reduction.
"""

from __future__ import annotations

import math
from typing import Iterable

from .field import Element, FieldError, is_zero

NEG_INF = -math.inf


class AlgebraError(ValueError):
    pass


class ResidueObstruction(AlgebraError):
    """Raised when rational integration meets a nonzero residue."""


def _coerce_coeff(c):
    if isinstance(c, (Element, complex)):
        return c
    return Element(c)


class Poly:
    """Dense univariate polynomial; ``var`` tags the variable ('z' or 'zb')."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable = (), var: str = "z"):
        cs = [_coerce_coeff(c) for c in coeffs]
        while cs and is_zero(cs[-1]):
            cs.pop()
        self.coeffs = cs
        self.var = var

    # -- constructors ----------------------------------------------------

    @classmethod
    def const(cls, c, var: str = "z") -> "Poly":
        return cls([c], var)

    @classmethod
    def x(cls, var: str = "z") -> "Poly":
        return cls([0, 1], var)

    # -- basics ----------------------------------------------------------

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k: int):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Element(0)

    @property
    def lc(self):
        if not self.coeffs:
            raise AlgebraError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def _check_var(self, other: "Poly"):
        if self.coeffs and other.coeffs and self.var != other.var:
            raise AlgebraError(
                f"variable mismatch: {self.var} vs {other.var}")

    # -- ring operations -------------------------------------------------

    def __add__(self, other):
        other = _as_poly(other, self.var)
        self._check_var(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[k] + other[k] for k in range(n)],
                    self.var if self.coeffs else other.var)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_poly(other, self.var)
        return self + (-other)

    def __rsub__(self, other):
        return _as_poly(other, self.var) - self

    def __neg__(self):
        return Poly([-c for c in self.coeffs], self.var)

    def __mul__(self, other):
        if isinstance(other, (Element, int, complex)):
            return Poly([c * other for c in self.coeffs], self.var)
        other = _as_poly(other, self.var)
        self._check_var(other)
        if not self or not other:
            return Poly([], self.var)
        out = [Element(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise AlgebraError("negative power of a polynomial")
        result = Poly([1], self.var)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = _as_poly(other, self.var)
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((tuple(self.coeffs), self.var if self.coeffs else ""))

    # -- division --------------------------------------------------------

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        other = _as_poly(other, self.var)
        self._check_var(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly([], self.var), self
        inv_lc = 1 / other.lc if isinstance(other.lc, complex) \
            else other.lc.inverse()
        quo = [Element(0)] * (dq + 1)
        for k in range(dq, -1, -1):
            c = rem[k + len(other.coeffs) - 1] * inv_lc
            quo[k] = c
            if not is_zero(c):
                for j, b in enumerate(other.coeffs):
                    rem[k + j] = rem[k + j] - c * b
        return Poly(quo, self.var), Poly(rem[:len(other.coeffs) - 1], self.var)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if r:
            raise AlgebraError("inexact polynomial division")
        return q

    # -- calculus & evaluation ------------------------------------------

    def derivative(self) -> "Poly":
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:], self.var)

    def integral(self) -> "Poly":
        out = [Element(0)]
        for k, c in enumerate(self.coeffs):
            out.append(c * Element(1, 0) / (k + 1) if isinstance(c, Element)
                       else c / (k + 1))
        return Poly(out, self.var)

    def __call__(self, x):
        acc = x * 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift(self, p) -> "Poly":
        """Taylor shift: returns q with q(t) = self(t + p)."""
        out = Poly([], self.var)
        xp = Poly([p, 1], self.var)
        for c in reversed(self.coeffs):
            out = out * xp + Poly([c], self.var)
        return out

    def reversed_coeffs(self, upto: int | None = None) -> "Poly":
        n = (len(self.coeffs) - 1) if upto is None else upto
        out = [Element(0)] * (n + 1)
        for k, c in enumerate(self.coeffs):
            out[n - k] = c
        return Poly(out, self.var)

    def conjugate(self) -> "Poly":
        """Coefficient conjugation plus variable swap z <-> zb."""
        other = "zb" if self.var == "z" else "z"
        return Poly([c.conjugate() for c in self.coeffs], other)

    def monic(self) -> "Poly":
        if not self:
            return self
        inv = 1 / self.lc if isinstance(self.lc, complex) else self.lc.inverse()
        return Poly([c * inv for c in self.coeffs], self.var)

    def order_at(self, p) -> int:
        """Vanishing order at the point p (0 if nonzero there)."""
        if not self:
            raise AlgebraError("zero polynomial has infinite order")
        k, q = 0, self
        root = Poly([-p, 1], self.var)
        while True:
            quo, rem = q.divmod(root)
            if rem:
                return k
            k, q = k + 1, quo

    def __repr__(self):
        if not self.coeffs:
            return "Poly(0)"
        terms = []
        for k, c in enumerate(self.coeffs):
            if is_zero(c):
                continue
            cs = str(c)
            if k == 0:
                terms.append(cs)
            else:
                mono = self.var if k == 1 else f"{self.var}^{k}"
                terms.append(mono if cs == "1" else f"({cs})*{mono}")
        return "Poly(" + " + ".join(terms) + ")"


def _as_poly(x, var: str) -> Poly:
    if isinstance(x, Poly):
        return x
    return Poly([x], var)


# -- gcd machinery -------------------------------------------------------

def subresultant_prs(f: Poly, g: Poly) -> list[Poly]:
    """Subresultant polynomial remainder sequence of f, g."""
    if f.degree < g.degree:
        f, g = g, f
    prs = [f, g]
    d = int(f.degree - g.degree)
    beta = (-1) ** (d + 1)
    psi = Element(-1)
    while g:
        h = (f * (g.lc ** (d + 1))) % g
        if not h:
            break
        h = Poly([c / beta for c in h.coeffs], f.var)
        prs.append(h)
        f, g = g, h
        if d > 0:
            psi = ((-f.lc) ** d) / (psi ** (d - 1)) if d > 1 else -f.lc
        d = int(f.degree - g.degree)
        beta = -f.lc * psi ** d
    return prs


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd in exact mode via the subresultant PRS."""
    if not f:
        return g.monic()
    if not g:
        return f.monic()
    if isinstance(f.lc, complex) or isinstance(g.lc, complex):
        raise AlgebraError("gcd-based reduction is forbidden in floating mode")
    prs = subresultant_prs(f, g)
    last = prs[-1]
    if last.degree == 0:
        return Poly([1], f.var)
    return last.monic()


def poly_extended_gcd(f: Poly, g: Poly) -> tuple[Poly, Poly, Poly]:
    """Returns (h, s, t) with s*f + t*g = h = monic gcd(f, g)."""
    var = f.var if f else g.var
    r0, r1 = f, g
    s0, s1 = Poly([1], var), Poly([], var)
    t0, t1 = Poly([], var), Poly([1], var)
    while r1:
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if not r0:
        return r0, s0, t0
    inv = r0.lc.inverse() if isinstance(r0.lc, Element) else 1 / r0.lc
    return r0 * inv, s0 * inv, t0 * inv


def squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: returns [(factor_i, multiplicity_i)] with factors
    squarefree and pairwise coprime; characteristic zero only."""
    if not f or f.degree == 0:
        return []
    f = f.monic()
    out = []
    fp = f.derivative()
    a = poly_gcd(f, fp)
    b = f.exact_div(a)
    c = fp.exact_div(a)
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            out.append((a, i))
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
        i += 1
    return out


# -- rational functions --------------------------------------------------

class Rat:
    """Reduced rational function num/den with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, var: str = "z", reduce: bool = True):
        num = _as_poly(num, var)
        den = Poly([1], num.var) if den is None else _as_poly(den, num.var)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        num._check_var(den)
        if reduce and num and den.degree > 0 and isinstance(num.lc, Element):
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
        if den.coeffs:
            inv = den.lc.inverse() if isinstance(den.lc, Element) \
                else 1 / den.lc
            num, den = num * inv, den * inv
        self.num, self.den = num, den

    @property
    def var(self) -> str:
        return self.den.var if self.den.coeffs else self.num.var

    def __bool__(self):
        return bool(self.num)

    # -- field operations ------------------------------------------------

    def __add__(self, other):
        other = _as_rat(other, self.var)
        return Rat(self.num * other.den + other.num * self.den,
                   self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return _as_rat(other, self.var) - self

    def __neg__(self):
        return Rat(-self.num, self.den, reduce=False)

    def __mul__(self, other):
        other = _as_rat(other, self.var)
        return Rat(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rat(other, self.var)
        if not other.num:
            raise ZeroDivisionError("division by zero rational function")
        return Rat(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _as_rat(other, self.var) / self

    def __pow__(self, n: int):
        if n < 0:
            return Rat(self.den, self.num) ** (-n)
        return Rat(self.num ** n, self.den ** n, reduce=False)

    def __eq__(self, other):
        other = _as_rat(other, self.var)
        return not (self.num * other.den - other.num * self.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def derivative(self) -> "Rat":
        return Rat(self.num.derivative() * self.den
                   - self.num * self.den.derivative(),
                   self.den * self.den)

    def conjugate(self) -> "Rat":
        return Rat(self.num.conjugate(), self.den.conjugate(), reduce=False)

    def __call__(self, x):
        dv = self.den(x)
        if is_zero(dv, 0.0 if isinstance(dv, Element) else 1e-300):
            raise ZeroDivisionError("evaluation at a pole")
        return self.num(x) / dv

    def invert_chart(self) -> "Rat":
        """Substitute z -> 1/z and reduce."""
        n = max(len(self.num.coeffs), len(self.den.coeffs)) - 1
        return Rat(self.num.reversed_coeffs(n), self.den.reversed_coeffs(n))

    def poles(self) -> list[tuple[Poly, int]]:
        """Squarefree pole structure [(factor, order)] of the denominator."""
        return squarefree_decomposition(self.den)

    def __repr__(self):
        return f"Rat({self.num!r} / {self.den!r})"


def _as_rat(x, var: str) -> Rat:
    if isinstance(x, Rat):
        return x
    if isinstance(x, Poly):
        return Rat(x, None, x.var, reduce=False)
    return Rat(Poly([x], var), reduce=False)


# -- Laurent expansion ---------------------------------------------------

def laurent(f: Rat, p, order: int) -> tuple[int, list]:
    """Laurent coefficients of f at p (a field element or the string 'inf').

    Returns (lead, coeffs) with coeffs[j] the coefficient of (z-p)^(lead+j),
    listed up to exponent ``order`` inclusive.  Raises if ``order`` is below
    the leading order.
    """
    if not f.num:
        raise AlgebraError("Laurent expansion of the zero function")
    if isinstance(p, str) and p == "inf":
        return laurent(f.invert_chart(), Element(0), order)
    num = f.num.shift(p)
    den = f.den.shift(p)
    # strip powers of t from both
    on = next(k for k, c in enumerate(num.coeffs) if not is_zero(c))
    od = next(k for k, c in enumerate(den.coeffs) if not is_zero(c))
    lead = on - od
    if order < lead:
        raise AlgebraError(f"requested order {order} below leading {lead}")
    nterms = order - lead + 1
    ncs = num.coeffs[on:]
    dcs = den.coeffs[od:]
    inv0 = dcs[0].inverse() if isinstance(dcs[0], Element) else 1 / dcs[0]
    out = []
    for k in range(nterms):
        acc = ncs[k] if k < len(ncs) else Element(0)
        for j in range(1, k + 1):
            if j < len(dcs):
                acc = acc - dcs[j] * out[k - j]
        out.append(acc * inv0)
    return lead, out


def rational_integral(f: Rat) -> Rat:
    """Exact antiderivative of a rational function with zero residues.

    Uses Hermite reduction; raises ResidueObstruction when a logarithmic part
    (nonzero residue) is present.
    """
    g, h = hermite_reduce(f)
    if h:
        raise ResidueObstruction(
            "nonzero residue: rational function has a logarithmic part")
    return g


def hermite_reduce(f: Rat) -> tuple[Rat, Rat]:
    """Hermite reduction f = g' + h with h proper over a squarefree
    denominator; h carries exactly the logarithmic (residue) part, and is
    linear in the numerator of f for a fixed denominator."""
    var = f.var
    if f.den.degree == 0 or not f.num:
        return Rat(f.num.integral(), f.den, reduce=False), \
            Rat(Poly([], var), reduce=False)
    polypart, rem = f.num.divmod(f.den)
    result = Rat(polypart.integral(), None, var, reduce=False)
    num, den = rem, f.den
    # Hermite reduction: iteratively lower denominator multiplicities
    while True:
        sqf = squarefree_decomposition(den)
        top = max((m for _, m in sqf), default=0)
        if top <= 1:
            break
        # den = u * v^m with v the top-multiplicity squarefree part
        v = [fac for fac, m in sqf if m == top][0]
        m = top
        u = den.exact_div(v ** m)
        # choose B with B*u*v' = num (mod v); then
        # num/(u v^m) = d/dz[-B/((m-1) v^(m-1))] + new_num/(u v^(m-1))
        uvp = u * v.derivative()
        g, s, _ = poly_extended_gcd(uvp, v)
        if g.degree != 0:
            raise AlgebraError("unexpected common factor in Hermite step")
        b = (s * num) % v
        result = result + Rat(b * (Element(-1) / (m - 1)), v ** (m - 1))
        num = (num - b * uvp).exact_div(v) \
            + b.derivative() * u * (Element(1) / (m - 1))
        den = u * v ** (m - 1)
    # squarefree denominator: the remaining proper part is the residue part
    polypart, rem = num.divmod(den)
    g = result + Rat(polypart.integral(), None, var, reduce=False)
    return g, Rat(rem, den, var)
