"""Exact coefficient arithmetic over Q(i), optionally extended by one square root.

Elements have the form ``a + b*i + (c + d*i)*sqrt(D)`` with rational
components stored as ``gmpy2.mpq``.  A single square-free integer ``D`` may be
configured per field instance; mixing elements with different nonzero square
parts is an error.  A ``floating`` mode is provided for numeric work; it stores
plain ``complex`` values and forbids exact-only operations downstream.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

from gmpy2 import mpq

_ZERO = mpq(0)
_ONE = mpq(1)

Rationalish = Union[int, Fraction, type(_ZERO)]


class FieldError(ValueError):
    pass


class Element:
    """One element of Q(i)[sqrt(D)].

    ``re``/``im`` are the rational and imaginary rational parts, ``sre``/``sim``
    the parts multiplying sqrt(D).  ``d`` is the square-free radicand (0 when
    the element lies in plain Q(i)).
    """

    __slots__ = ("re", "im", "sre", "sim", "d")

    def __init__(self, re=0, im=0, sre=0, sim=0, d=0):
        self.re = mpq(re)
        self.im = mpq(im)
        self.sre = mpq(sre)
        self.sim = mpq(sim)
        self.d = d if (self.sre or self.sim) else (d or 0)
        if self.d < 0:
            raise FieldError("square root radicand must be a positive integer")
        if (self.sre or self.sim) and self.d == 0:
            raise FieldError("sqrt part present but no radicand configured")

    # -- helpers ---------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "Element":
        if isinstance(x, Element):
            return x
        if isinstance(x, (int, Fraction)) or type(x) is type(_ZERO):
            return Element(x)
        return NotImplemented

    def _join_d(self, other: "Element") -> int:
        if self.d and other.d and self.d != other.d:
            raise FieldError(
                f"mixed radicands sqrt({self.d}) and sqrt({other.d})")
        return self.d or other.d

    # -- predicates ------------------------------------------------------

    def __bool__(self):
        return bool(self.re or self.im or self.sre or self.sim)

    @property
    def is_rational(self) -> bool:
        return not (self.im or self.sre or self.sim)

    @property
    def is_gaussian(self) -> bool:
        return not (self.sre or self.sim)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (float, complex)):
            return complex(self) + other
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Element(self.re + other.re, self.im + other.im,
                       self.sre + other.sre, self.sim + other.sim,
                       self._join_d(other))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (float, complex)):
            return complex(self) - other
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Element(self.re - other.re, self.im - other.im,
                       self.sre - other.sre, self.sim - other.sim,
                       self._join_d(other))

    def __rsub__(self, other):
        if isinstance(other, (float, complex)):
            return other - complex(self)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __neg__(self):
        return Element(-self.re, -self.im, -self.sre, -self.sim, self.d)

    def __mul__(self, other):
        if isinstance(other, (float, complex)):
            return complex(self) * other
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, c, e = self.re, self.im, self.sre, self.sim
        p, q, r, s = other.re, other.im, other.sre, other.sim
        if not (c or e or r or s):  # Gaussian fast path
            return Element(a * p - b * q, a * q + b * p, 0, 0, 0)
        d = self._join_d(other)
        # (a+bi) and (c+ei) times sqrt(d); multiply as (u1 + v1*s)(u2 + v2*s)
        re = a * p - b * q + d * (c * r - e * s)
        im = a * q + b * p + d * (c * s + e * r)
        sre = a * r - b * s + c * p - e * q
        sim = a * s + b * r + c * q + e * p
        return Element(re, im, sre, sim, d)

    __rmul__ = __mul__

    def inverse(self) -> "Element":
        if not self:
            raise ZeroDivisionError("division by zero field element")
        a, b, c, e = self.re, self.im, self.sre, self.sim
        if not (c or e):
            n = a * a + b * b
            return Element(a / n, -b / n, 0, 0, 0)
        d = self.d
        # conjugate over sqrt(d): (u - v*s); norm = u^2 - d v^2 in Q(i)
        # u = a+bi, v = c+ei
        nr = a * a - b * b - d * (c * c - e * e)
        ni = 2 * (a * b - d * c * e)
        nn = nr * nr + ni * ni  # |norm|^2, rational, nonzero for squarefree d
        # (u - v s) / norm  with 1/norm = conj(norm)/|norm|^2
        inr, ini = nr / nn, -ni / nn
        re = a * inr - b * ini
        im = a * ini + b * inr
        sre = -(c * inr - e * ini)
        sim = -(c * ini + e * inr)
        return Element(re, im, sre, sim, d)

    def __truediv__(self, other):
        if isinstance(other, (float, complex)):
            return complex(self) / other
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        if isinstance(other, (float, complex)):
            return other / complex(self)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = Element(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "Element":
        """Complex conjugate (i -> -i, sqrt(D) fixed)."""
        return Element(self.re, -self.im, self.sre, -self.sim, self.d)

    # -- comparisons / hashing ------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (float, complex)):
            return complex(self) == other
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self.re == other.re and self.im == other.im
                and self.sre == other.sre and self.sim == other.sim)

    def __hash__(self):
        return hash((self.re, self.im, self.sre, self.sim))

    # -- conversions -----------------------------------------------------

    def __complex__(self) -> complex:
        s = self.d ** 0.5 if self.d else 0.0
        return complex(float(self.re) + s * float(self.sre),
                       float(self.im) + s * float(self.sim))

    def __repr__(self):
        return f"Element({self})"

    def __str__(self):
        if not self:
            return "0"
        parts = []
        for coef, tag in ((self.re, ""), (self.im, "i"),
                          (self.sre, f"sqrt{self.d}"),
                          (self.sim, f"i*sqrt{self.d}")):
            if not coef:
                continue
            txt = _format_rat_coef(coef, tag)
            if parts and not txt.startswith("-"):
                txt = "+" + txt
            parts.append(txt)
        return "".join(parts)


def _format_rat_coef(q, tag: str) -> str:
    num, den = q.numerator, q.denominator
    if not tag:
        return f"{num}" if den == 1 else f"{num}/{den}"
    head = "" if num == 1 else ("-" if num == -1 else str(num))
    body = head + tag if head in ("", "-") else f"{head}*{tag}"
    return body if den == 1 else f"{body}/{den}"


_TERM_RE = re.compile(
    r"""^\s*
    (?P<num>[+-]?\d+)?             # optional integer numerator
    (?:\s*\*?\s*(?P<i1>i))?        # optional i
    (?:\s*\*?\s*sqrt(?P<d>\d+))?   # optional sqrtNN
    (?:\s*\*?\s*(?P<i2>i))?        # i may follow sqrt
    (?:\s*/\s*(?P<den>\d+))?       # optional denominator
    \s*$""", re.VERBOSE)


def parse_element(text: str, d: int = 0) -> Element:
    """Parse strings like ``-1/4``, ``i/6``, ``2i``, ``sqrt30/2``, ``1/2+i/3``.

    ``d`` pins the expected radicand; a sqrt term with a different radicand is
    rejected.  A bare sign prefix distributes over the following term only.
    """
    text = text.strip()
    if not text:
        raise FieldError("empty element string")
    # split into signed terms at top level
    terms = re.findall(r"[+-]?[^+-]+", text.replace(" ", ""))
    if "".join(terms) != text.replace(" ", ""):
        raise FieldError(f"cannot parse element {text!r}")
    total = Element(0)
    for term in terms:
        sign = 1
        if term[0] in "+-":
            sign = -1 if term[0] == "-" else 1
            term = term[1:]
        m = _TERM_RE.match(term)
        if not m or not term:
            raise FieldError(f"cannot parse term {term!r} in {text!r}")
        num = int(m.group("num")) if m.group("num") is not None else 1
        den = int(m.group("den")) if m.group("den") is not None else 1
        if den == 0:
            raise FieldError(f"zero denominator in {text!r}")
        q = mpq(sign * num, den)
        has_i = bool(m.group("i1") or m.group("i2"))
        if m.group("i1") and m.group("i2"):
            raise FieldError(f"repeated i in term {term!r}")
        term_d = int(m.group("d")) if m.group("d") else 0
        if term_d:
            if d and term_d != d:
                raise FieldError(
                    f"radicand sqrt{term_d} does not match configured sqrt{d}")
            el = Element(0, 0, 0, q, term_d) if has_i else \
                Element(0, 0, q, 0, term_d)
        else:
            el = Element(0, q) if has_i else Element(q)
        total = total + el
    return total


class CoeffField:
    """Coefficient field configuration: exact Q(i)[sqrt(d)] or floating complex.

    ``d`` is immutable once set.  In floating mode, elements are plain complex
    numbers and gcd-based reduction is unavailable downstream.
    """

    def __init__(self, d: int | None = None, mode: str = "exact"):
        if mode not in ("exact", "floating"):
            raise FieldError(f"unknown mode {mode!r}")
        if d is not None:
            if d <= 1:
                raise FieldError("radicand must be an integer > 1")
            for p in range(2, int(d ** 0.5) + 1):
                if d % (p * p) == 0:
                    raise FieldError(f"radicand {d} is not square-free")
        self._d = d or 0
        self._mode = mode

    @property
    def d(self) -> int:
        return self._d

    @property
    def mode(self) -> str:
        return self._mode

    @property
    def is_exact(self) -> bool:
        return self._mode == "exact"

    def __call__(self, value) -> Element | complex:
        """Coerce a value (string, int, Fraction, Element) into this field."""
        if isinstance(value, str):
            el = parse_element(value, self._d)
        elif isinstance(value, Element):
            if value.d and self._d and value.d != self._d:
                raise FieldError("element radicand does not match field")
            el = value
        elif isinstance(value, complex):
            if self.is_exact:
                raise FieldError("cannot coerce float data into exact field")
            return value
        else:
            el = Element(value)
        return el if self.is_exact else complex(el)

    @property
    def zero(self):
        return Element(0) if self.is_exact else 0j

    @property
    def one(self):
        return Element(1) if self.is_exact else 1 + 0j

    @property
    def i(self):
        return Element(0, 1) if self.is_exact else 1j

    @property
    def sqrt(self):
        if not self._d:
            raise FieldError("no square root configured for this field")
        if self.is_exact:
            return Element(0, 0, 1, 0, self._d)
        return complex(self._d ** 0.5)

    def __repr__(self):
        tail = f", sqrt{self._d}" if self._d else ""
        return f"CoeffField({self._mode}{tail})"


ZERO = Element(0)
ONE = Element(1)
I = Element(0, 1)


def elem(re=0, im=0, sre=0, sim=0, d=0) -> Element:
    """Shorthand constructor used heavily in tests and fixtures."""
    return Element(re, im, sre, sim, d)


def is_zero(x, tol: float = 0.0) -> bool:
    """Zero test that works for exact elements and floating complex."""
    if isinstance(x, Element):
        return not x
    return abs(x) <= tol


def conj(x):
    """Complex conjugate for exact elements and floating complex alike."""
    return x.conjugate()
