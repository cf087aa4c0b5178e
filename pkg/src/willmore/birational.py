"""Bivariate rational functions in (z, zb) with real-slice semantics.

``zb`` is the formal conjugate variable: evaluation at a point p substitutes
z = p, zb = conj(p).  Because the real slice is Zariski-dense, a bivariate
rational function vanishes identically iff its numerator is the zero
polynomial, so zero tests never require gcd computations.

Denominators are kept in factored form ``prod_i p_i^{e_i}``.  Reduction is
performed by attempted exact division of the numerator by the known factors;
this controls degree growth without general bivariate gcds, whose cost would
dominate everything else.
"""

from __future__ import annotations

from typing import Iterable

from .algebra import AlgebraError, NEG_INF, Poly, Rat
from .field import Element, is_zero


def _czero(sample):
    return 0j if isinstance(sample, complex) else Element(0)


class BiPoly:
    """Sparse bivariate polynomial: dict (deg_z, deg_zb) -> coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        if terms:
            for k, c in (terms.items() if isinstance(terms, dict) else terms):
                if not is_zero(c):
                    t[k] = t[k] + c if k in t else c
                    if is_zero(t[k]):
                        del t[k]
        self.terms = t

    # -- constructors ----------------------------------------------------

    @classmethod
    def const(cls, c) -> "BiPoly":
        return cls({(0, 0): c if isinstance(c, (Element, complex))
                    else Element(c)})

    @classmethod
    def z(cls) -> "BiPoly":
        return cls({(1, 0): Element(1)})

    @classmethod
    def zb(cls) -> "BiPoly":
        return cls({(0, 1): Element(1)})

    @classmethod
    def from_poly(cls, p: Poly) -> "BiPoly":
        axis = 0 if p.var == "z" else 1
        return cls({((k, 0) if axis == 0 else (0, k)): c
                    for k, c in enumerate(p.coeffs)})

    # -- basics ----------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    @property
    def degree_z(self):
        return max((i for i, _ in self.terms), default=NEG_INF)

    @property
    def degree_zb(self):
        return max((j for _, j in self.terms), default=NEG_INF)

    @property
    def is_constant(self) -> bool:
        return all(k == (0, 0) for k in self.terms)

    def lead_key(self):
        """Lexicographically largest (deg_z, deg_zb) monomial present."""
        if not self.terms:
            raise AlgebraError("zero polynomial has no leading monomial")
        return max(self.terms)

    def __eq__(self, other):
        if not isinstance(other, BiPoly):
            other = BiPoly.const(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, BiPoly):
            other = BiPoly.const(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
            if is_zero(out[k]):
                del out[k]
        r = BiPoly.__new__(BiPoly)
        r.terms = out
        return r

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other if isinstance(other, BiPoly)
                       else -BiPoly.const(other))

    def __rsub__(self, other):
        return BiPoly.const(other) - self

    def __neg__(self):
        r = BiPoly.__new__(BiPoly)
        r.terms = {k: -c for k, c in self.terms.items()}
        return r

    def __mul__(self, other):
        if isinstance(other, (Element, int, complex)):
            if is_zero(other):
                return BiPoly()
            r = BiPoly.__new__(BiPoly)
            r.terms = {k: c * other for k, c in self.terms.items()}
            return r
        out = {}
        for (i, j), a in self.terms.items():
            for (k, l), b in other.terms.items():
                key = (i + k, j + l)
                v = a * b
                if key in out:
                    v = out[key] + v
                if is_zero(v):
                    out.pop(key, None)
                else:
                    out[key] = v
        r = BiPoly.__new__(BiPoly)
        r.terms = out
        return r

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BiPoly":
        if n < 0:
            raise AlgebraError("negative power of a bivariate polynomial")
        result = BiPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift_monomial(self, dz: int, dzb: int) -> "BiPoly":
        r = BiPoly.__new__(BiPoly)
        r.terms = {(i + dz, j + dzb): c for (i, j), c in self.terms.items()}
        return r

    # -- calculus, conjugation, evaluation -------------------------------

    def derivative(self, var: str = "z") -> "BiPoly":
        axis = 0 if var == "z" else 1
        out = {}
        for (i, j), c in self.terms.items():
            k = (i, j)[axis]
            if k:
                key = (i - 1, j) if axis == 0 else (i, j - 1)
                out[key] = c * k
        r = BiPoly.__new__(BiPoly)
        r.terms = out
        return r

    def conjugate(self) -> "BiPoly":
        r = BiPoly.__new__(BiPoly)
        r.terms = {(j, i): c.conjugate() for (i, j), c in self.terms.items()}
        return r

    def __call__(self, z, zb=None):
        if zb is None:
            zb = z.conjugate()
        acc = None
        for (i, j), c in self.terms.items():
            t = c * z ** i * zb ** j
            acc = t if acc is None else acc + t
        return acc if acc is not None else _czero(
            z if isinstance(z, complex) else Element(0))

    def numeric_terms(self) -> list[tuple[int, int, complex]]:
        """Coefficients as plain complex, for vectorized evaluation."""
        return [(i, j, complex(c)) for (i, j), c in sorted(self.terms.items())]

    # -- structure -------------------------------------------------------

    def monomial_content(self) -> tuple[int, int]:
        """Largest (a, b) with z^a zb^b dividing self (0 for the zero poly)."""
        if not self.terms:
            return 0, 0
        return (min(i for i, _ in self.terms), min(j for _, j in self.terms))

    def coeffs_in_zb(self) -> list[Poly]:
        """Recursive form: list of z-polynomials, ascending in zb."""
        n = self.degree_zb
        if n is NEG_INF:
            return []
        rows: list[dict] = [{} for _ in range(n + 1)]
        for (i, j), c in self.terms.items():
            rows[j][i] = c
        out = []
        for row in rows:
            m = max(row, default=-1)
            out.append(Poly([row.get(k, Element(0)) for k in range(m + 1)]))
        return out

    def coeffs_in_z(self) -> list[Poly]:
        n = self.degree_z
        if n is NEG_INF:
            return []
        rows: list[dict] = [{} for _ in range(n + 1)]
        for (i, j), c in self.terms.items():
            rows[i][j] = c
        out = []
        for row in rows:
            m = max(row, default=-1)
            out.append(Poly([row.get(k, Element(0)) for k in range(m + 1)],
                            "zb"))
        return out

    def try_div(self, d: "BiPoly") -> "BiPoly | None":
        """Exact quotient self / d, or None when the division is inexact."""
        if not d:
            raise ZeroDivisionError("bivariate division by zero")
        if not self:
            return BiPoly()
        if d.is_constant:
            return self * _invert(d.terms[(0, 0)])
        a, b = d.monomial_content()
        if a or b:
            sa, sb = self.monomial_content()
            if sa < a or sb < b:
                return None
            q = self.shift_monomial(-a, -b).try_div(d.shift_monomial(-a, -b))
            return q
        if d.degree_zb == 0:
            return self._try_div_univariate(d, axis=0)
        if d.degree_z == 0:
            return self._try_div_univariate(d, axis=1)
        return self._try_div_recursive(d)

    def _try_div_univariate(self, d: "BiPoly", axis: int) -> "BiPoly | None":
        dp = Poly([d.terms.get((k, 0) if axis == 0 else (0, k), Element(0))
                   for k in range((d.degree_z if axis == 0 else d.degree_zb)
                                  + 1)],
                  "z" if axis == 0 else "zb")
        rows = self.coeffs_in_zb() if axis == 0 else self.coeffs_in_z()
        out = {}
        for j, row in enumerate(rows):
            if not row:
                continue
            q, r = row.divmod(dp)
            if r:
                return None
            for k, c in enumerate(q.coeffs):
                if not is_zero(c):
                    out[(k, j) if axis == 0 else (j, k)] = c
        res = BiPoly.__new__(BiPoly)
        res.terms = out
        return res

    def _try_div_recursive(self, d: "BiPoly") -> "BiPoly | None":
        # long division in K[z][zb]: when the true quotient is a polynomial,
        # each quotient coefficient is an exact Poly division by lc_zb(d);
        # an inexact step proves the quotient is not polynomial.
        ncs = self.coeffs_in_zb()
        dcs = d.coeffs_in_zb()
        dn = len(dcs) - 1
        if len(ncs) - 1 < dn:
            return None
        rem = list(ncs)
        out = {}
        for k in range(len(ncs) - 1 - dn, -1, -1):
            c, r = rem[k + dn].divmod(dcs[-1])
            if r:
                return None
            if c:
                for j in range(dn + 1):
                    rem[k + j] = rem[k + j] - c * dcs[j]
                for i, ci in enumerate(c.coeffs):
                    if not is_zero(ci):
                        out[(i, k)] = ci
        if any(rem[:dn]):
            return None
        res = BiPoly.__new__(BiPoly)
        res.terms = out
        return res

    def __repr__(self):
        if not self.terms:
            return "BiPoly(0)"
        parts = []
        for (i, j), c in sorted(self.terms.items()):
            mono = "".join(filter(None, [
                f"z^{i}" if i > 1 else ("z" if i == 1 else ""),
                f"zb^{j}" if j > 1 else ("zb" if j == 1 else "")]))
            cs = str(c) if isinstance(c, Element) else repr(c)
            parts.append(f"({cs})" + (f"*{mono}" if mono else ""))
        return "BiPoly(" + " + ".join(parts) + ")"


def _invert(c):
    return c.inverse() if isinstance(c, Element) else 1 / c


def _as_bipoly(x) -> BiPoly:
    if isinstance(x, BiPoly):
        return x
    if isinstance(x, Poly):
        return BiPoly.from_poly(x)
    return BiPoly.const(x)


class BiRat:
    """Bivariate rational function with factored denominator.

    ``den_factors`` maps normalized BiPoly factors to positive exponents;
    the denominator is the product.  The numerator is not guaranteed coprime
    to the denominator in general (factors may share irreducible components),
    but every factor that divides the numerator exactly has been cancelled,
    which is what keeps degrees bounded in the surface pipeline.  Equality
    and zero tests are exact regardless (cross-multiplication / numerator
    identically zero).
    """

    __slots__ = ("num", "den_factors")

    def __init__(self, num, den=None, reduce: bool = True):
        self.num = _as_bipoly(num)
        if den is None:
            self.den_factors = {}
        elif isinstance(den, dict):
            self.den_factors = {f: e for f, e in den.items() if e}
        else:
            den = _as_bipoly(den)
            if not den:
                raise ZeroDivisionError("bivariate denominator is zero")
            f, scale = _normalize_factor(den)
            self.num = self.num * _invert(scale)
            self.den_factors = {} if f.is_constant else {f: 1}
        if reduce:
            self._reduce()

    def _reduce(self):
        if not self.num:
            self.den_factors = {}
            return
        for f in list(self.den_factors):
            while self.den_factors.get(f, 0) > 0:
                q = self.num.try_div(f)
                if q is None:
                    break
                self.num = q
                self.den_factors[f] -= 1
                if not self.den_factors[f]:
                    del self.den_factors[f]

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_rat(cls, r: Rat) -> "BiRat":
        return cls(BiPoly.from_poly(r.num), BiPoly.from_poly(r.den))

    @classmethod
    def const(cls, c) -> "BiRat":
        return cls(BiPoly.const(c), None, reduce=False)

    # -- basics ----------------------------------------------------------

    def __bool__(self):
        return bool(self.num)

    @property
    def den(self) -> BiPoly:
        out = BiPoly.const(1)
        for f, e in self.den_factors.items():
            out = out * f ** e
        return out

    def __eq__(self, other):
        if not isinstance(other, BiRat):
            other = BiRat.const(other) if not isinstance(other, BiPoly) \
                else BiRat(other, None, reduce=False)
        return not (self - other)

    def __hash__(self):
        raise TypeError("BiRat is unhashable; compare with ==")

    # -- factored-denominator helpers ------------------------------------

    @staticmethod
    def _merge_lcm(a: dict, b: dict) -> dict:
        out = dict(a)
        for f, e in b.items():
            out[f] = max(out.get(f, 0), e)
        return out

    def _scale_to(self, target: dict) -> BiPoly:
        """Numerator after rescaling this fraction to denominator `target`."""
        num = self.num
        for f, e in target.items():
            extra = e - self.den_factors.get(f, 0)
            if extra:
                num = num * f ** extra
        return num

    # -- field operations ------------------------------------------------

    def __add__(self, other):
        other = _as_birat(other)
        den = self._merge_lcm(self.den_factors, other.den_factors)
        r = BiRat.__new__(BiRat)
        r.num = self._scale_to(den) + other._scale_to(den)
        r.den_factors = den
        r._reduce()
        return r

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_as_birat(other))

    def __rsub__(self, other):
        return _as_birat(other) - self

    def __neg__(self):
        r = BiRat.__new__(BiRat)
        r.num = -self.num
        r.den_factors = dict(self.den_factors)
        return r

    def __mul__(self, other):
        other = _as_birat(other)
        den = dict(self.den_factors)
        for f, e in other.den_factors.items():
            den[f] = den.get(f, 0) + e
        r = BiRat.__new__(BiRat)
        r.num = self.num * other.num
        r.den_factors = den
        r._reduce()
        return r

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_birat(other)
        if not other.num:
            raise ZeroDivisionError("division by the zero bivariate function")
        return self * other._inverted()

    def __rtruediv__(self, other):
        return _as_birat(other) / self

    def _inverted(self) -> "BiRat":
        num = BiPoly.const(1)
        for f, e in self.den_factors.items():
            num = num * f ** e
        f, scale = _normalize_factor(self.num)
        r = BiRat.__new__(BiRat)
        r.num = num * _invert(scale)
        r.den_factors = {} if f.is_constant else {f: 1}
        r._reduce()
        return r

    def __pow__(self, n: int) -> "BiRat":
        if n < 0:
            return self._inverted() ** (-n)
        r = BiRat.__new__(BiRat)
        r.num = self.num ** n
        r.den_factors = {f: e * n for f, e in self.den_factors.items()}
        return r

    # -- calculus, conjugation, evaluation -------------------------------

    def derivative(self, var: str = "z") -> "BiRat":
        """Quotient-rule derivative, keeping the factored denominator."""
        relevant = [(f, e) for f, e in self.den_factors.items()
                    if f.derivative(var)]
        num = self.num.derivative(var)
        den = dict(self.den_factors)
        for f, e in relevant:
            num = num * f
            den[f] = den[f] + 1
        # subtract num * d/dvar(log den) cleared of denominators
        for f, e in relevant:
            t = self.num * (f.derivative(var) * e)
            for g, _ in relevant:
                if g != f:
                    t = t * g
            num = num - t
        r = BiRat.__new__(BiRat)
        r.num = num
        r.den_factors = den
        r._reduce()
        return r

    def conjugate(self) -> "BiRat":
        den = {}
        num = self.num.conjugate()
        for f, e in self.den_factors.items():
            g, scale = _normalize_factor(f.conjugate())
            num = num * _invert(scale) ** e
            den[g] = den.get(g, 0) + e
        r = BiRat.__new__(BiRat)
        r.num = num
        r.den_factors = den
        return r

    def __call__(self, z, zb=None):
        if zb is None:
            zb = z.conjugate()
        dv = None
        for f, e in self.den_factors.items():
            t = f(z, zb) ** e
            dv = t if dv is None else dv * t
        nv = self.num(z, zb)
        if dv is None:
            return nv
        if is_zero(dv, 0.0 if isinstance(dv, Element) else 1e-300):
            raise ZeroDivisionError("evaluation at a pole of the denominator")
        return nv / dv

    def invert_chart(self) -> "BiRat":
        """Substitute z -> 1/z, zb -> 1/zb and clear to polynomial factors."""
        def rev(p: BiPoly) -> BiPoly:
            a, b = p.degree_z, p.degree_zb
            r = BiPoly.__new__(BiPoly)
            r.terms = {(a - i, b - j): c for (i, j), c in p.terms.items()}
            return r

        if not self.num:
            return BiRat(BiPoly(), None, reduce=False)
        num = rev(self.num)
        dz = -self.num.degree_z
        dzb = -self.num.degree_zb
        den = {}
        for f, e in self.den_factors.items():
            dz += f.degree_z * e
            dzb += f.degree_zb * e
            g, scale = _normalize_factor(rev(f))
            num = num * _invert(scale) ** e
            den[g] = den.get(g, 0) + e
        zf, zbf = BiPoly.z(), BiPoly.zb()
        if dz > 0:
            num = num.shift_monomial(dz, 0)
        elif dz < 0:
            den[zf] = den.get(zf, 0) - dz
        if dzb > 0:
            num = num.shift_monomial(0, dzb)
        elif dzb < 0:
            den[zbf] = den.get(zbf, 0) - dzb
        r = BiRat.__new__(BiRat)
        r.num = num
        r.den_factors = den
        r._reduce()
        return r

    def __repr__(self):
        if not self.den_factors:
            return f"BiRat({self.num!r})"
        dens = " * ".join(f"({f!r})^{e}" if e > 1 else f"({f!r})"
                          for f, e in self.den_factors.items())
        return f"BiRat({self.num!r} / {dens})"


def _normalize_factor(p: BiPoly) -> tuple[BiPoly, object]:
    """Scale p so its lex-leading coefficient is 1; returns (factor, scale)."""
    if not p:
        raise ZeroDivisionError("zero factor")
    scale = p.terms[p.lead_key()]
    if scale == 1 or (isinstance(scale, Element) and scale == Element(1)):
        return p, scale if isinstance(scale, (Element, complex)) else Element(1)
    return p * _invert(scale), scale


def _as_birat(x) -> BiRat:
    if isinstance(x, BiRat):
        return x
    if isinstance(x, BiPoly):
        return BiRat(x, None, reduce=False)
    if isinstance(x, Rat):
        return BiRat.from_rat(x)
    if isinstance(x, Poly):
        return BiRat(BiPoly.from_poly(x), None, reduce=False)
    return BiRat.const(x)


class VecBiRat:
    """Vector of bivariate rational functions in a common ambient C^n."""

    __slots__ = ("components",)

    def __init__(self, components: Iterable):
        self.components = [_as_birat(c) for c in components]
        if not self.components:
            raise AlgebraError("empty vector")

    @property
    def dim(self) -> int:
        return len(self.components)

    def __getitem__(self, k: int) -> BiRat:
        return self.components[k]

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)

    def __bool__(self):
        return any(self.components)

    def __add__(self, other: "VecBiRat") -> "VecBiRat":
        if len(other) != len(self):
            raise AlgebraError("dimension mismatch")
        return VecBiRat([a + b for a, b in zip(self, other)])

    def __sub__(self, other: "VecBiRat") -> "VecBiRat":
        if len(other) != len(self):
            raise AlgebraError("dimension mismatch")
        return VecBiRat([a - b for a, b in zip(self, other)])

    def __neg__(self):
        return VecBiRat([-a for a in self])

    def __mul__(self, scalar) -> "VecBiRat":
        return VecBiRat([a * scalar for a in self])

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "VecBiRat":
        return VecBiRat([a / scalar for a in self])

    def __eq__(self, other):
        return len(self) == len(other) and \
            all(a == b for a, b in zip(self, other))

    def derivative(self, var: str = "z") -> "VecBiRat":
        return VecBiRat([a.derivative(var) for a in self])

    def conjugate(self) -> "VecBiRat":
        return VecBiRat([a.conjugate() for a in self])

    def invert_chart(self) -> "VecBiRat":
        return VecBiRat([a.invert_chart() for a in self])

    def __call__(self, z, zb=None):
        return [c(z, zb) for c in self.components]

    def __repr__(self):
        return f"VecBiRat({self.components!r})"


def dot(u: VecBiRat, v: VecBiRat) -> BiRat:
    """C-bilinear Euclidean product (no conjugation)."""
    if len(u) != len(v):
        raise AlgebraError(
            f"dimension mismatch: {len(u)} vs {len(v)}")
    acc = BiRat.const(0)
    for a, b in zip(u, v):
        acc = acc + a * b
    return acc


def conjugate(f):
    """Swap z <-> zb and conjugate coefficients (BiRat or VecBiRat)."""
    return f.conjugate()


def differentiate(f, var: str = "z"):
    return f.derivative(var)


def invert_chart(f):
    """Substitute z = 1/z (and zb = 1/zb) and reduce."""
    return f.invert_chart()
