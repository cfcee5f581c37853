"""Exact arithmetic: rationals, truncated series, rational functions, Q(c)[s].

Rational functions are backed by python-flint's ``fmpq_poly`` when it is
importable and by a small pure-Python polynomial class otherwise.  The
choice is made once at import time and exposed as ``POLY_BACKEND``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Any, Callable, Iterable, Sequence

try:  # pragma: no cover - exercised implicitly depending on the environment
    import flint as _flint

    _HAVE_FLINT = True
except ImportError:  # pragma: no cover
    _flint = None
    _HAVE_FLINT = False

__all__ = [
    "POLY_BACKEND",
    "QPoly",
    "RationalFunc",
    "KElement",
    "TruncatedSeries",
    "ps_compose",
    "ps_reversion",
    "ps_sqrt",
    "k_normalize",
    "k_expand_t",
    "c_series",
    "t_as_k",
    "frac_to_str",
    "frac_from_str",
]


def frac_to_str(x: Any) -> str:
    """Serialize a rational as ``"num/den"``, or a bare integer string."""
    q = to_fraction(x)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def frac_from_str(s: str) -> Fraction:
    return Fraction(s)


def to_fraction(x: Any) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if _HAVE_FLINT and isinstance(x, (_flint.fmpq, _flint.fmpz)):
        if isinstance(x, _flint.fmpz):
            return Fraction(int(x))
        return Fraction(int(x.p), int(x.q))
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, RationalFunc) and x.is_constant():
        return x.constant_value()
    if isinstance(x, KElement) and x.b.is_zero() and x.a.is_constant():
        return x.a.constant_value()
    raise TypeError(f"cannot convert {x!r} to a rational")


# ---------------------------------------------------------------------------
# Dense univariate polynomials over Q (pure-Python backend)
# ---------------------------------------------------------------------------


class QPoly:
    """Dense polynomial over Q with Fraction coefficients, lowest degree first.

    Mirrors the subset of the ``fmpq_poly`` interface used by RationalFunc.
    """

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable[Any] = ()):
        c = [to_fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = c

    @classmethod
    def _raw(cls, c: list) -> "QPoly":
        while c and c[-1] == 0:
            c.pop()
        p = cls.__new__(cls)
        p.c = c
        return p

    def degree(self) -> int:
        return len(self.c) - 1

    def __getitem__(self, i: int) -> Fraction:
        return self.c[i] if 0 <= i < len(self.c) else Fraction(0)

    def coeffs(self) -> list:
        return list(self.c)

    def __bool__(self) -> bool:
        return bool(self.c)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, QPoly):
            return self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self.c == ([Fraction(other)] if other != 0 else [])
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self.c))

    def _coerce(self, other: Any) -> "QPoly":
        if isinstance(other, QPoly):
            return other
        return QPoly([other])

    def __add__(self, other: Any) -> "QPoly":
        o = self._coerce(other)
        a, b = self.c, o.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] += x
        return QPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "QPoly":
        return QPoly._raw([-x for x in self.c])

    def __sub__(self, other: Any) -> "QPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> "QPoly":
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> "QPoly":
        if not isinstance(other, QPoly):
            k = to_fraction(other)
            return QPoly._raw([x * k for x in self.c])
        a, b = self.c, other.c
        if not a or not b:
            return QPoly._raw([])
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return QPoly._raw(out)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "QPoly":
        k = to_fraction(other)
        return QPoly._raw([x / k for x in self.c])

    def __divmod__(self, other: "QPoly") -> tuple["QPoly", "QPoly"]:
        if not other.c:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        db = len(other.c) - 1
        lead = other.c[-1]
        if len(r) - 1 < db:
            return QPoly._raw([]), QPoly._raw(r)
        q = [Fraction(0)] * (len(r) - db)
        for i in range(len(r) - 1 - db, -1, -1):
            coef = r[i + db] / lead
            q[i] = coef
            if coef:
                for j, y in enumerate(other.c):
                    r[i + j] -= coef * y
        return QPoly._raw(q), QPoly._raw(r[:db])

    def __floordiv__(self, other: "QPoly") -> "QPoly":
        return divmod(self, other)[0]

    def gcd(self, other: "QPoly") -> "QPoly":
        a, b = self, other
        while b.c:
            a, b = b, divmod(a, b)[1]
        if not a.c:
            return a
        return a / a.c[-1]

    def derivative(self) -> "QPoly":
        return QPoly._raw([i * x for i, x in enumerate(self.c)][1:])

    def __call__(self, x: Any) -> Any:
        acc: Any = 0
        for coef in reversed(self.c):
            acc = acc * x + coef
        return acc

    def __repr__(self) -> str:
        return f"QPoly({[str(x) for x in self.c]})"


if _HAVE_FLINT:
    _Poly: Any = _flint.fmpq_poly
    POLY_BACKEND = "flint"

    def _scalar(x: Any) -> Any:
        q = to_fraction(x)
        return _flint.fmpq(q.numerator, q.denominator)

else:  # pragma: no cover
    _Poly = QPoly
    POLY_BACKEND = "python"

    def _scalar(x: Any) -> Any:
        return to_fraction(x)


def _poly(coeffs: Sequence[Any]) -> Any:
    return _Poly([_scalar(x) for x in coeffs])


def _poly_coeffs(p: Any) -> list[Fraction]:
    return [to_fraction(x) for x in p.coeffs()]


# ---------------------------------------------------------------------------
# Rational functions in one variable
# ---------------------------------------------------------------------------


class RationalFunc:
    """Quotient num/den of polynomials over Q, reduced with monic denominator."""

    __slots__ = ("num", "den", "var")

    def __init__(self, num: Any = 0, den: Any = 1, var: str = "c", _reduced: bool = False):
        if not isinstance(num, _Poly):
            num = _poly(num) if isinstance(num, (list, tuple)) else _poly([num])
        if not isinstance(den, _Poly):
            den = _poly(den) if isinstance(den, (list, tuple)) else _poly([den])
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            if num == 0:
                den = _poly([1])
            else:
                g = num.gcd(den)
                if g.degree() > 0:
                    num = divmod(num, g)[0]
                    den = divmod(den, g)[0]
                lead = den[den.degree()]
                if lead != 1:
                    num = num / lead
                    den = den / lead
        self.num = num
        self.den = den
        self.var = var

    @classmethod
    def gen(cls, var: str = "c") -> "RationalFunc":
        return cls(_poly([0, 1]), _poly([1]), var, _reduced=True)

    @classmethod
    def const(cls, x: Any, var: str = "c") -> "RationalFunc":
        return cls(_poly([x]), _poly([1]), var, _reduced=True)

    @classmethod
    def from_coeffs(cls, num: Sequence[Any], den: Sequence[Any] = (1,), var: str = "c") -> "RationalFunc":
        return cls(_poly(num), _poly(den), var)

    def numerator_coeffs(self) -> list[Fraction]:
        return _poly_coeffs(self.num)

    def denominator_coeffs(self) -> list[Fraction]:
        return _poly_coeffs(self.den)

    def is_zero(self) -> bool:
        return self.num == 0

    def is_constant(self) -> bool:
        return self.num.degree() <= 0 and self.den.degree() == 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant")
        return to_fraction(self.num[0]) if self.num.degree() == 0 else Fraction(0)

    def _coerce(self, other: Any) -> "RationalFunc":
        if isinstance(other, RationalFunc):
            return other
        if isinstance(other, (int, Fraction)) or (_HAVE_FLINT and isinstance(other, (_flint.fmpq, _flint.fmpz))):
            return RationalFunc(_poly([other]), _poly([1]), self.var, _reduced=True)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: Any) -> "RationalFunc":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.num == 0:
            return self
        if self.num == 0:
            return o
        if self.den == o.den:
            return RationalFunc(self.num + o.num, self.den, self.var)
        if o.den.degree() == 0:
            return RationalFunc(self.num + o.num * self.den, self.den, self.var, _reduced=True)
        if self.den.degree() == 0:
            return RationalFunc(self.num * o.den + o.num, o.den, self.var, _reduced=True)
        g = self.den.gcd(o.den)
        if g.degree() > 0:
            d1 = divmod(self.den, g)[0]
            d2 = divmod(o.den, g)[0]
            return RationalFunc(self.num * d2 + o.num * d1, d1 * o.den, self.var)
        return RationalFunc(self.num * o.den + o.num * self.den, self.den * o.den, self.var)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunc":
        return RationalFunc(-self.num, self.den, self.var, _reduced=True)

    def __sub__(self, other: Any) -> "RationalFunc":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any) -> "RationalFunc":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: Any) -> "RationalFunc":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.num == 0 or o.num == 0:
            return RationalFunc(_poly([0]), _poly([1]), self.var, _reduced=True)
        if self.den.degree() == 0 and o.den.degree() == 0:
            return RationalFunc(self.num * o.num, self.den, self.var, _reduced=True)
        n1, d1, n2, d2 = self.num, self.den, o.num, o.den
        g1 = n1.gcd(d2)
        if g1.degree() > 0:
            n1 = divmod(n1, g1)[0]
            d2 = divmod(d2, g1)[0]
        g2 = n2.gcd(d1)
        if g2.degree() > 0:
            n2 = divmod(n2, g2)[0]
            d1 = divmod(d1, g2)[0]
        num = n1 * n2
        den = d1 * d2
        lead = den[den.degree()]
        if lead != 1:
            num = num / lead
            den = den / lead
        return RationalFunc(num, den, self.var, _reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunc":
        if self.num == 0:
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunc(self.den, self.num, self.var)

    def __truediv__(self, other: Any) -> "RationalFunc":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Any) -> "RationalFunc":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int) -> "RationalFunc":
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunc(self.num ** n if n else _poly([1]), self.den ** n if n else _poly([1]), self.var, _reduced=True)

    def __eq__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        return hash((tuple(self.numerator_coeffs()), tuple(self.denominator_coeffs())))

    def derivative(self) -> "RationalFunc":
        return RationalFunc(self.num.derivative() * self.den - self.num * self.den.derivative(), self.den * self.den, self.var)

    def __call__(self, x: Any) -> Any:
        """Evaluate at x, which may be a rational or any ring element (e.g. a series)."""
        if isinstance(x, (int, Fraction)):
            d = _horner(self.denominator_coeffs(), Fraction(x))
            if d == 0:
                raise ZeroDivisionError("pole at evaluation point")
            return _horner(self.numerator_coeffs(), Fraction(x)) / d
        num = _horner(self.numerator_coeffs(), x)
        den = _horner(self.denominator_coeffs(), x)
        return num / den

    def __repr__(self) -> str:
        n = _poly_str(self.numerator_coeffs(), self.var)
        if self.den.degree() == 0:
            return n
        return f"({n})/({_poly_str(self.denominator_coeffs(), self.var)})"


def _horner(coeffs: Sequence[Fraction], x: Any) -> Any:
    acc: Any = 0
    for coef in reversed(coeffs):
        acc = acc * x + coef
    return acc


def _poly_str(coeffs: Sequence[Fraction], var: str) -> str:
    terms = []
    for i, a in enumerate(coeffs):
        if a == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and a == 1:
            terms.append(mono)
        elif mono and a == -1:
            terms.append("-" + mono)
        elif mono:
            terms.append(f"{a}*{mono}")
        else:
            terms.append(str(a))
    if not terms:
        return "0"
    return " + ".join(reversed(terms)).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# The field K = Q(c)[s]/(s^2 - c^2 + 1)
# ---------------------------------------------------------------------------

_C = RationalFunc.gen("c")
_S2 = _C * _C - 1


class KElement:
    """Element a + b*s of Q(c)[s] with s^2 = c^2 - 1; a, b are RationalFuncs in c."""

    __slots__ = ("a", "b")

    def __init__(self, a: Any = 0, b: Any = 0):
        self.a = a if isinstance(a, RationalFunc) else RationalFunc.const(a)
        self.b = b if isinstance(b, RationalFunc) else RationalFunc.const(b)

    @staticmethod
    def c() -> "KElement":
        return KElement(_C)

    @staticmethod
    def s() -> "KElement":
        return KElement(0, 1)

    @staticmethod
    def _coerce(other: Any) -> "KElement":
        if isinstance(other, KElement):
            return other
        if isinstance(other, RationalFunc):
            return KElement(other)
        if isinstance(other, (int, Fraction)) or (_HAVE_FLINT and isinstance(other, (_flint.fmpq, _flint.fmpz))):
            return KElement(RationalFunc.const(other))
        return NotImplemented  # type: ignore[return-value]

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def is_rational_in_c(self) -> bool:
        return self.b.is_zero()

    def conj(self) -> "KElement":
        """The Galois conjugate s -> -s."""
        return KElement(self.a, -self.b)

    def norm(self) -> RationalFunc:
        return self.a * self.a - self.b * self.b * _S2

    def __add__(self, other: Any) -> "KElement":
        o = KElement._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return KElement(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self) -> "KElement":
        return KElement(-self.a, -self.b)

    def __sub__(self, other: Any) -> "KElement":
        o = KElement._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return KElement(self.a - o.a, self.b - o.b)

    def __rsub__(self, other: Any) -> "KElement":
        o = KElement._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other: Any) -> "KElement":
        o = KElement._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.b.is_zero():
            if o.b.is_zero():
                return KElement(self.a * o.a)
            return KElement(self.a * o.a, self.a * o.b)
        if o.b.is_zero():
            return KElement(self.a * o.a, self.b * o.a)
        a = self.a * o.a + self.b * o.b * _S2
        b = self.a * o.b + self.b * o.a
        return KElement(a, b)

    __rmul__ = __mul__

    def inverse(self) -> "KElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in K")
        if self.b.is_zero():
            return KElement(self.a.inverse())
        n = self.norm().inverse()
        return KElement(self.a * n, -self.b * n)

    def __truediv__(self, other: Any) -> "KElement":
        o = KElement._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Any) -> "KElement":
        o = KElement._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int) -> "KElement":
        if n < 0:
            return self.inverse() ** (-n)
        result = KElement(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        o = KElement._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __repr__(self) -> str:
        if self.b.is_zero():
            return f"K({self.a})"
        return f"K({self.a} + ({self.b})*s)"


def k_normalize(x: KElement) -> KElement:
    """Canonical form; KElement arithmetic already reduces, this rebuilds from parts."""
    return KElement(RationalFunc(x.a.num, x.a.den), RationalFunc(x.b.num, x.b.den))


def t_as_k() -> KElement:
    """t expressed in K: t = (c^2 - 1)/(3 c^4)."""
    return KElement((_C * _C - 1) / (3 * _C ** 4))


# ---------------------------------------------------------------------------
# Truncated power / Laurent series
# ---------------------------------------------------------------------------


def _is_zero(x: Any) -> bool:
    return x == 0


def _recip(x: Any) -> Any:
    if isinstance(x, int):
        return Fraction(1, x)
    if isinstance(x, TruncatedSeries):
        return x.inverse()
    return 1 / x


class TruncatedSeries:
    """sum_i coeffs[i] var^(min_exp + i) + O(var^(order + 1)).

    Coefficients may be any ring elements supporting +, -, * (and / for
    inversion), including KElements or other TruncatedSeries in a different
    variable.  Arithmetic propagates the truncation order soundly.
    """

    __slots__ = ("var", "min_exp", "coeffs", "order")

    def __init__(self, coeffs: Iterable[Any], order: int, min_exp: int = 0, var: str = "t"):
        coeffs = list(coeffs)
        if order + 1 < min_exp:
            min_exp = order + 1
        n = order + 1 - min_exp
        if len(coeffs) > n:
            coeffs = coeffs[:n]
        elif len(coeffs) < n:
            coeffs = coeffs + [0] * (n - len(coeffs))
        self.var = var
        self.min_exp = min_exp
        self.coeffs = coeffs
        self.order = order

    # -- constructors -----------------------------------------------------
    @classmethod
    def monomial(cls, exp: int, order: int, coeff: Any = 1, var: str = "t") -> "TruncatedSeries":
        if exp > order:
            return cls([], order, order + 1, var)
        return cls([coeff], order, exp, var)

    @classmethod
    def from_dict(cls, d: dict[int, Any], order: int, var: str = "t") -> "TruncatedSeries":
        if not d:
            return cls([], order, 0, var)
        lo = min(min(d), 0)
        return cls([d.get(e, 0) for e in range(lo, order + 1)], order, lo, var)

    # -- access -----------------------------------------------------------
    def coeff(self, e: int) -> Any:
        if e > self.order:
            raise ValueError(f"coefficient of {self.var}^{e} unknown beyond order {self.order}")
        if e < self.min_exp:
            return 0
        return self.coeffs[e - self.min_exp]

    def __getitem__(self, e: int) -> Any:
        return self.coeff(e)

    def valuation(self) -> int | None:
        for i, x in enumerate(self.coeffs):
            if not _is_zero(x):
                return self.min_exp + i
        return None

    def items(self) -> Iterable[tuple[int, Any]]:
        for i, x in enumerate(self.coeffs):
            if not _is_zero(x):
                yield self.min_exp + i, x

    def trimmed(self) -> "TruncatedSeries":
        v = self.valuation()
        if v is None:
            return TruncatedSeries([], self.order, self.order + 1, self.var)
        return TruncatedSeries(self.coeffs[v - self.min_exp:], self.order, v, self.var)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError("cannot raise the truncation order")
        return TruncatedSeries(self.coeffs, order, self.min_exp, self.var)

    def map_coeffs(self, fn: Callable[[Any], Any], var: str | None = None) -> "TruncatedSeries":
        return TruncatedSeries([fn(x) for x in self.coeffs], self.order, self.min_exp, var or self.var)

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by var^k."""
        return TruncatedSeries(self.coeffs, self.order + k, self.min_exp + k, self.var)

    # -- arithmetic -------------------------------------------------------
    def _same(self, other: Any) -> bool:
        return isinstance(other, TruncatedSeries) and other.var == self.var

    def __add__(self, other: Any) -> "TruncatedSeries":
        if not self._same(other):
            if _is_zero(other):
                return self
            other = TruncatedSeries([other], max(self.order, 0), 0, self.var)
        order = min(self.order, other.order)
        lo = min(self.min_exp, other.min_exp)
        out = [0] * (order + 1 - lo) if order + 1 >= lo else []
        for i, x in enumerate(self.coeffs):
            e = self.min_exp + i
            if e > order:
                break
            out[e - lo] = x
        for i, x in enumerate(other.coeffs):
            e = other.min_exp + i
            if e > order:
                break
            if not _is_zero(x):
                out[e - lo] = out[e - lo] + x
        return TruncatedSeries(out, order, lo, self.var)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries([-x for x in self.coeffs], self.order, self.min_exp, self.var)

    def __sub__(self, other: Any) -> "TruncatedSeries":
        return self + (-other)

    def __rsub__(self, other: Any) -> "TruncatedSeries":
        return (-self) + other

    def __mul__(self, other: Any) -> "TruncatedSeries":
        if not self._same(other):
            return TruncatedSeries([x * other for x in self.coeffs], self.order, self.min_exp, self.var)
        f, g = self, other
        vf = f.valuation()
        vg = g.valuation()
        vf_eff = f.order + 1 if vf is None else vf
        vg_eff = g.order + 1 if vg is None else vg
        order = min(f.order + vg_eff, g.order + vf_eff)
        lo = vf_eff + vg_eff
        if vf is None or vg is None or lo > order:
            return TruncatedSeries([], order, order + 1, self.var)
        out: list[Any] = [0] * (order + 1 - lo)
        fi = [(e, x) for e, x in f.items() if e + vg <= order]
        gi = [(e, x) for e, x in g.items() if e + vf <= order]
        for e1, x in fi:
            lim = order - e1
            for e2, y in gi:
                if e2 > lim:
                    break
                out[e1 + e2 - lo] = out[e1 + e2 - lo] + x * y
        return TruncatedSeries(out, order, lo, self.var)

    def __rmul__(self, other: Any) -> "TruncatedSeries":
        return TruncatedSeries([other * x for x in self.coeffs], self.order, self.min_exp, self.var)

    def inverse(self) -> "TruncatedSeries":
        v = self.valuation()
        if v is None:
            raise ZeroDivisionError("series is zero to known precision")
        u = self.coeffs[v - self.min_exp:]
        rel = self.order - v
        u0inv = _recip(u[0])
        b = [u0inv]
        for n in range(1, rel + 1):
            acc: Any = 0
            for k in range(1, min(n, len(u) - 1) + 1):
                if not _is_zero(u[k]):
                    acc = acc + u[k] * b[n - k]
            b.append(-(acc * u0inv))
        return TruncatedSeries(b, rel - v, -v, self.var)

    def __truediv__(self, other: Any) -> "TruncatedSeries":
        if self._same(other):
            return self * other.inverse()
        if isinstance(other, TruncatedSeries):
            inv = other.inverse()
            return TruncatedSeries([x * inv for x in self.coeffs], self.order, self.min_exp, self.var)
        if isinstance(other, int):
            other = Fraction(other)
        return TruncatedSeries([x / other for x in self.coeffs], self.order, self.min_exp, self.var)

    def __rtruediv__(self, other: Any) -> "TruncatedSeries":
        return self.inverse() * other

    def __pow__(self, n: int) -> "TruncatedSeries":
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return TruncatedSeries([1], max(self.order - (self.valuation() or 0), 0), 0, self.var)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result  # type: ignore[return-value]

    def derivative(self) -> "TruncatedSeries":
        out = [(self.min_exp + i) * x for i, x in enumerate(self.coeffs)]
        return TruncatedSeries(out, self.order - 1, self.min_exp - 1, self.var)

    def integral(self) -> "TruncatedSeries":
        """Primitive with zero constant term; requires no var^-1 term."""
        if self.min_exp <= -1 <= self.order and not _is_zero(self.coeff(-1)):
            raise ValueError("series has a residue; primitive is not a Laurent series")
        out = []
        for i, x in enumerate(self.coeffs):
            e = self.min_exp + i
            out.append(0 if e == -1 else x / (e + 1) if not isinstance(x, int) else Fraction(x, e + 1))
        return TruncatedSeries(out, self.order + 1, self.min_exp + 1, self.var)

    def residue(self) -> Any:
        return self.coeff(-1)

    # -- comparison / display --------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, TruncatedSeries):
            if other.var != self.var or other.order != self.order:
                return False
            lo = min(self.min_exp, other.min_exp)
            return all(_is_zero(self.coeff(e) - other.coeff(e)) for e in range(lo, self.order + 1))
        if _is_zero(other):
            return all(_is_zero(x) for x in self.coeffs)
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def agrees_with(self, other: "TruncatedSeries") -> bool:
        """Equality up to the smaller of the two truncation orders."""
        order = min(self.order, other.order)
        lo = min(self.min_exp, other.min_exp)
        return all(_is_zero(self.coeff(e) - other.coeff(e)) for e in range(lo, order + 1))

    def __repr__(self) -> str:
        terms = []
        for e, x in self.items():
            mono = "" if e == 0 else (self.var if e == 1 else f"{self.var}^{e}")
            terms.append(f"{x}*{mono}" if mono else f"{x}")
        terms.append(f"O({self.var}^{self.order + 1})")
        return " + ".join(terms)

    # -- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "var": self.var,
            "min_exp": self.min_exp,
            "coeffs": [frac_to_str(x) for x in self.coeffs],
            "order": self.order,
        }

    @classmethod
    def from_json(cls, d: dict) -> "TruncatedSeries":
        return cls([Fraction(x) for x in d["coeffs"]], int(d["order"]), int(d["min_exp"]), d["var"])


# ---------------------------------------------------------------------------
# Series operations
# ---------------------------------------------------------------------------


def ps_compose(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """f(g), with g(0) = 0.  Laurent f is allowed; then g^-k uses series inversion."""
    vg = g.valuation()
    if g.min_exp < 0 and any(not _is_zero(x) for e, x in g.items() if e < 0):
        raise ValueError("inner series must be a power series")
    if vg is None or vg < 1:
        raise ValueError("ps_compose requires g(0) = 0 and g nonzero")
    cap = (f.order + 1) * vg - 1
    acc: TruncatedSeries | None = None
    pos = None
    neg = None
    for e, x in sorted(f.items()):
        if e == 0:
            term = TruncatedSeries([x], cap, 0, g.var)
        elif e > 0:
            if pos is None:
                pos, pe = g, 1
            while pe < e:
                pos, pe = pos * g, pe + 1
            term = pos * x
        else:
            if neg is None:
                ginv = g.inverse()
                neg, ne = ginv, -1
            while ne > e:
                neg, ne = neg * ginv, ne - 1
            term = neg * x
        acc = term if acc is None else acc + term
    if acc is None:
        return TruncatedSeries([], cap, cap + 1, g.var)
    if acc.order > cap:
        acc = acc.truncate(cap)
    return acc


def ps_reversion(f: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse g with f(g(x)) = x + O(x^(N+1))."""
    if any(not _is_zero(x) for e, x in f.items() if e <= 0):
        raise ValueError("reversion requires f(0) = 0")
    a1 = f.coeff(1) if f.order >= 1 else 0
    if _is_zero(a1):
        raise ValueError("reversion requires a nonzero linear coefficient")
    N = f.order
    inv_a1 = _recip(a1)
    g = [0, inv_a1]
    for n in range(2, N + 1):
        gs = TruncatedSeries(g, n, 0, f.var)
        h = ps_compose(f.truncate(n), gs)
        g.append(-(h.coeff(n) * inv_a1))
    return TruncatedSeries(g, N, 0, f.var)


def _rational_sqrt(x: Any) -> Any:
    if isinstance(x, KElement):
        if x == 1:
            return KElement(1)
        raise ValueError("sqrt of a non-unit K constant is not supported")
    if isinstance(x, TruncatedSeries):
        return ps_sqrt(x)
    q = to_fraction(x)
    if q < 0:
        raise ValueError("constant term is negative")
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn != q.numerator or rd * rd != q.denominator:
        raise ValueError(f"constant term {q} is not a rational square")
    return Fraction(rn, rd)


def ps_sqrt(f: TruncatedSeries) -> TruncatedSeries:
    """Square root with the positive (given) root of the leading coefficient."""
    v = f.valuation()
    if v is None:
        raise ValueError("series is zero to known precision")
    if v % 2:
        raise ValueError("odd valuation has no Laurent square root")
    u = f.coeffs[v - f.min_exp:]
    rel = f.order - v
    g0 = _rational_sqrt(u[0])
    two_g0_inv = _recip(2 * g0)
    g = [g0]
    for n in range(1, rel + 1):
        acc: Any = u[n] if n < len(u) else 0
        for i in range(1, n):
            acc = acc - g[i] * g[n - i]
        g.append(acc * two_g0_inv)
    return TruncatedSeries(g, v // 2 + rel, v // 2, f.var)


_C_SERIES_CACHE: dict[int, TruncatedSeries] = {}


def c_series(order: int) -> TruncatedSeries:
    """c(t) = sqrt((1 - sqrt(1 - 12 t))/(6 t)) as a t-series to O(t^(order+1))."""
    if order in _C_SERIES_CACHE:
        return _C_SERIES_CACHE[order]
    one_minus = TruncatedSeries([1, -12], order + 1, 0, "t")
    r = ps_sqrt(one_minus)
    num = (1 - r).shift(-1) / 6
    c = ps_sqrt(num.truncate(order))
    _C_SERIES_CACHE[order] = c
    return c


def k_expand_t(x: Any, order: int) -> TruncatedSeries:
    """Substitute c = c(t) into an s-free element of K, exact to O(t^(order+1))."""
    if isinstance(x, KElement):
        if not x.b.is_zero():
            raise ValueError("k_expand_t requires s-cancellation (nonzero odd part)")
        a = x.a
    elif isinstance(x, RationalFunc):
        a = x
    else:
        return TruncatedSeries([to_fraction(x)], order, 0, "t")
    den_at_1 = _horner(a.denominator_coeffs(), Fraction(1))
    if den_at_1 == 0:
        raise ValueError("pole at c = 1 (t = 0)")
    cs = c_series(order)
    num = _horner(a.numerator_coeffs(), cs)
    den = _horner(a.denominator_coeffs(), cs)
    if not isinstance(num, TruncatedSeries):
        num = TruncatedSeries([num], order, 0, "t")
    if not isinstance(den, TruncatedSeries):
        den = TruncatedSeries([den], order, 0, "t")
    return (num / den).truncate(order)
