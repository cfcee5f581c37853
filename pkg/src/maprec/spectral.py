"""Spectral curves: the quadrangulation curve, its exchange, and general potentials.

A curve is a pair of rational maps z -> x(z), z -> y(z) on the Riemann sphere
with simple branch points of x.  Coefficients live either in the symbolic
field K = Q(c)[s] (``KElement``) or, for numeric specialization, in Q: taking
c = (p + 1/p)/2 and s = (p - 1/p)/2 for rational p keeps s^2 = c^2 - 1 exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Tuple

from .exactnum import (
    KElement,
    TruncatedSeries,
    k_expand_t,
    ps_compose,
    ps_reversion,
    ps_sqrt,
    to_fraction,
)

__all__ = [
    "ZRational",
    "SpectralCurve",
    "PotentialSpec",
    "GeneralCurve",
    "build_quadrangulation_curve",
    "build_general_curve",
    "exchange_curve",
    "numeric_params",
    "disk_series_general",
    "quadrangulation_disk_series",
]

ZETA = "zeta"


def _horner(coeffs: Sequence[Any], x: Any) -> Any:
    acc: Any = 0
    for a in reversed(coeffs):
        acc = acc * x + a
    return acc


def _is_zero(x: Any) -> bool:
    return x == 0


@dataclass(frozen=True)
class ZRational:
    """num(z)/den(z) with coefficient tuples (lowest degree first) over the curve field."""

    num: Tuple[Any, ...]
    den: Tuple[Any, ...]

    def __call__(self, z: Any) -> Any:
        return _horner(self.num, z) / _horner(self.den, z)

    def derivative(self) -> "ZRational":
        dn = [i * a for i, a in enumerate(self.num)][1:]
        dd = [i * a for i, a in enumerate(self.den)][1:]
        n = _poly_sub(_poly_mul(dn, list(self.den)), _poly_mul(list(self.num), dd))
        return ZRational(tuple(n), tuple(_poly_mul(list(self.den), list(self.den))))

    def scaled(self, lam: Any) -> "ZRational":
        return ZRational(tuple(a * lam for a in self.num), self.den)

    def jet(self, a: Any, order: int) -> TruncatedSeries:
        """Taylor series of the map at z = a + zeta, exact to O(zeta^(order+1))."""
        z = TruncatedSeries([a, 1], order + 2, 0, ZETA)
        num = _horner(self.num, z)
        den = _horner(self.den, z)
        num = num if isinstance(num, TruncatedSeries) else TruncatedSeries([num], order + 2, 0, ZETA)
        den = den if isinstance(den, TruncatedSeries) else TruncatedSeries([den], order + 2, 0, ZETA)
        r = num / den
        if r.order < order:
            raise ValueError("pole at jet base point exceeds the requested order")
        return r.truncate(order)

    def at_infinity(self, order: int, var: str = "u") -> TruncatedSeries:
        """Laurent series in u = 1/z at z = infinity, exact to O(u^(order+1))."""
        dn, dd = len(self.num) - 1, len(self.den) - 1
        num = TruncatedSeries(list(reversed(self.num)), order + dd + 2, 0, var)
        den = TruncatedSeries(list(reversed(self.den)), order + dd + 2, 0, var)
        r = (num / den).shift(dd - dn)
        return r.truncate(order)


def _poly_mul(a: List[Any], b: List[Any]) -> List[Any]:
    if not a or not b:
        return []
    out: List[Any] = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if _is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def _poly_sub(a: List[Any], b: List[Any]) -> List[Any]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    while len(out) > 1 and _is_zero(out[-1]):
        out.pop()
    return out


def numeric_params(p: Any) -> Tuple[Fraction, Fraction]:
    """Rational (c, s) with s^2 = c^2 - 1: c = (p + 1/p)/2, s = (p - 1/p)/2."""
    p = to_fraction(p)
    if p == 0:
        raise ValueError("p must be nonzero")
    return (p + 1 / p) / 2, (p - 1 / p) / 2


@dataclass(frozen=True)
class SpectralCurve:
    """A genus-0 spectral curve with simple branch points of the x-map.

    ``branch_points`` holds exact z-values; amplitude tensors refer to them by
    index.  ``c`` and ``s`` are the field constants (KElements or Fractions).
    """

    mode: str
    x: ZRational
    y: ZRational
    branch_points: Tuple[Any, ...]
    c: Any
    s: Any
    symbolic: bool
    label: str = "quadrangulation"
    scale: Any = 1
    _jets: Dict[Any, Any] = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __hash__(self) -> int:
        return id(self)

    def __eq__(self, other: object) -> bool:
        return self is other

    @property
    def t(self) -> Any:
        """t = (c^2 - 1)/(3 c^4) as a field element."""
        return (self.c * self.c - 1) / (3 * self.c ** 4)

    def x_prime(self) -> ZRational:
        key = ("dx",)
        if key not in self._jets:
            self._jets[key] = self.x.derivative()
        return self._jets[key]

    def x_jet(self, i: int, order: int) -> TruncatedSeries:
        return self._cached_jet("x", self.x, i, order)

    def y_jet(self, i: int, order: int) -> TruncatedSeries:
        return self._cached_jet("y", self.y, i, order)

    def dx_jet(self, i: int, order: int) -> TruncatedSeries:
        return self._cached_jet("dx", self.x_prime(), i, order)

    def _cached_jet(self, name: str, fn: ZRational, i: int, order: int) -> TruncatedSeries:
        key = (name, i)
        hit = self._jets.get(key)
        if hit is not None and hit.order >= order:
            return hit.truncate(order)
        j = fn.jet(self.branch_points[i], order)
        self._jets[key] = j
        return j

    def deck_jet(self, i: int, order: int) -> TruncatedSeries:
        """Local involution sigma(zeta) = -zeta + ... with x(a + sigma) = x(a + zeta)."""
        key = ("deck", i)
        hit = self._jets.get(key)
        if hit is not None and hit.order >= order:
            return hit.truncate(order)
        xj = self.x_jet(i, order + 1)
        if not _is_zero(xj.coeff(1)):
            raise ValueError("base point is not a branch point of x")
        x2 = xj.coeff(2)
        if _is_zero(x2):
            raise ValueError("branch point is not simple")
        # x(a+zeta) - x(a) = x2 * phi(zeta)^2 with phi = zeta + O(zeta^2)
        h = TruncatedSeries(xj.coeffs[2 - xj.min_exp:], order - 1, 0, ZETA) / x2
        phi = ps_sqrt(h).shift(1)
        phi_inv = ps_reversion(phi)
        sigma = ps_compose(phi_inv, -phi)
        self._jets[key] = sigma
        return sigma

    def check_regular(self, order: int = 3) -> bool:
        for i in range(len(self.branch_points)):
            xj = self.x_jet(i, order)
            yj = self.y_jet(i, order)
            if not _is_zero(xj.coeff(1)) or _is_zero(xj.coeff(2)) or _is_zero(yj.coeff(1)):
                return False
        return True

    def scaled(self, lam: Any) -> "SpectralCurve":
        """Same curve with y replaced by lam * y."""
        return SpectralCurve(self.mode, self.x, self.y.scaled(lam), self.branch_points, self.c, self.s,
                             self.symbolic, self.label, self.scale * lam)


def build_quadrangulation_curve(p: Any = None) -> SpectralCurve:
    """x = c(z + 1/z), y = w = 1/(cz) - t c^3/z^3 with t = (c^2 - 1)/(3c^4).

    With ``p`` None the curve is symbolic over K; otherwise c and s are the
    rational numbers given by :func:`numeric_params`.
    """
    if p is None:
        c, s = KElement.c(), KElement.s()
        symbolic = True
    else:
        c, s = numeric_params(p)
        symbolic = False
    zero = c * 0
    s2 = s * s
    x = ZRational((c, zero, c), (zero, c / c))
    y = ZRational((-s2 / 3, zero, c / c), (zero, zero, zero, c))
    one = c / c
    return SpectralCurve("ordinary", x, y, (one, -one), c, s, symbolic)


def exchange_curve(cur: SpectralCurve) -> SpectralCurve:
    """Swap the roles of x and y; branch points of the new x-map are z = +-s."""
    if cur.label != "quadrangulation" or cur.mode != "ordinary":
        raise ValueError("exchange is only supported for the ordinary quadrangulation curve")
    if not cur.symbolic and cur.s == 0:
        raise ValueError("exchanged curve degenerates at t = 0")
    return SpectralCurve("exchanged", cur.y, cur.x, (cur.s, -cur.s), cur.c, cur.s, cur.symbolic)


# ---------------------------------------------------------------------------
# General polynomial potential (ordinary curve only)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PotentialSpec:
    """Face weights t_j = weights[j] * t, and vertex weight u (a rational square).

    V'(x) = x - sum_j t_j x^(j-1).  A single grading variable t counts faces.
    """

    weights: Dict[int, Fraction]
    u: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        for j in self.weights:
            if j < 1:
                raise ValueError("face degrees must be >= 1")


@dataclass(frozen=True)
class GeneralCurve:
    """x(z) = alpha + gamma (z + 1/z), y(z) = [V'(x(z))]_{<0} as Laurent polynomials in z."""

    spec: PotentialSpec
    alpha: TruncatedSeries
    gamma: TruncatedSeries
    x_laurent: Dict[int, TruncatedSeries]
    y_laurent: Dict[int, TruncatedSeries]
    order: int


def _lp_mul(a: Dict[int, Any], b: Dict[int, Any]) -> Dict[int, Any]:
    out: Dict[int, Any] = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out[i + j] + x * y if i + j in out else x * y
    return out


def _central_binom(i: int, j: int) -> int:
    """[zeta^j] (zeta + 1/zeta)^i."""
    if (i + j) % 2 or abs(j) > i:
        return 0
    return math.comb(i, (i + j) // 2)


def _xpow_coeff(m: int, j: int, alpha: Any, gamma: Any, one: Any) -> Any:
    """[zeta^j] (alpha + gamma (zeta + 1/zeta))^m."""
    acc: Any = 0
    if m < 0:
        return acc
    apow = [one]
    for _ in range(m):
        apow.append(apow[-1] * alpha)
    gp = one
    for i in range(m + 1):
        cb = _central_binom(i, j)
        if cb:
            acc = acc + apow[m - i] * gp * (math.comb(m, i) * cb)
        gp = gp * gamma
    return acc


def _conditions(spec: PotentialSpec, alpha: Any, gamma: Any, tser: Any, one: Any) -> Tuple[Any, Any, Any, Any, Any, Any]:
    """(f1, f2, d f1/d alpha, d f1/d gamma, d f2/d alpha, d f2/d gamma).

    f1 = [zeta^0] V'(x),  f2 = gamma [zeta^-1] V'(x) - u.
    """
    def dcoef(m: int, j: int) -> Tuple[Any, Any, Any]:
        v = _xpow_coeff(m, j, alpha, gamma, one)
        da = _xpow_coeff(m - 1, j, alpha, gamma, one) * m if m else 0
        dg = (_xpow_coeff(m - 1, j - 1, alpha, gamma, one) + _xpow_coeff(m - 1, j + 1, alpha, gamma, one)) * m if m else 0
        return v, da, dg

    c0 = dcoef(1, 0)
    cm = dcoef(1, -1)
    f1, f1a, f1g = c0
    g1, g1a, g1g = cm
    for j, w in spec.weights.items():
        tw = tser * w
        v, da, dg = dcoef(j - 1, 0)
        f1, f1a, f1g = f1 - tw * v, f1a - tw * da, f1g - tw * dg
        v, da, dg = dcoef(j - 1, -1)
        g1, g1a, g1g = g1 - tw * v, g1a - tw * da, g1g - tw * dg
    f2 = gamma * g1 - spec.u
    f2a = gamma * g1a
    f2g = g1 + gamma * g1g
    return f1, f2, f1a, f1g, f2a, f2g


def build_general_curve(spec: PotentialSpec, order: int) -> GeneralCurve:
    """Solve for alpha, gamma as t-series by Newton iteration, exact to O(t^(order+1))."""
    u = to_fraction(spec.u)
    rn, rd = math.isqrt(u.numerator), math.isqrt(u.denominator)
    if u <= 0 or rn * rn != u.numerator or rd * rd != u.denominator:
        raise ValueError("vertex weight u must be a positive rational square")
    one = TruncatedSeries([1], order, 0, "t")
    tser = TruncatedSeries([0, 1], order, 0, "t")
    alpha = TruncatedSeries([0], order, 0, "t")
    gamma = TruncatedSeries([Fraction(rn, rd)], order, 0, "t")
    iterations = max(1, math.ceil(math.log2(order + 2))) + 2
    for _ in range(iterations):
        f1, f2, a11, a12, a21, a22 = _conditions(spec, alpha, gamma, tser, one)
        det = a11 * a22 - a12 * a21
        dinv = det.inverse()
        da = (a22 * f1 - a12 * f2) * dinv
        dg = (a11 * f2 - a21 * f1) * dinv
        alpha = (alpha - da).truncate(order)
        gamma = (gamma - dg).truncate(order)
    f1, f2, *_ = _conditions(spec, alpha, gamma, tser, one)
    if not (f1 == 0 and f2 == 0):
        raise RuntimeError("Newton iteration did not converge at the requested truncation")
    xl = {-1: gamma, 0: alpha, 1: gamma}
    vprime: Dict[int, Any] = dict(xl)
    xpow: Dict[int, Any] = {0: one}
    for j in sorted(spec.weights):
        pass
    maxdeg = max(spec.weights, default=1)
    powers = [xpow]
    for _ in range(maxdeg - 1):
        powers.append(_lp_mul(powers[-1], xl))
    for j, w in spec.weights.items():
        for e, v in powers[j - 1].items():
            term = v * tser * w
            vprime[e] = vprime[e] - term if e in vprime else -term
    yl = {e: v.truncate(order) for e, v in vprime.items() if e < 0}
    return GeneralCurve(spec, alpha, gamma, xl, yl, order)


def disk_series_general(cur: GeneralCurve, length: int) -> TruncatedSeries:
    """F_l = -Res_{x=oo} x^l W(x) dx = [z^-1] x(z)^l y(z) x'(z)."""
    xp = {0: cur.gamma, -2: -cur.gamma}
    acc: Dict[int, Any] = dict(cur.y_laurent)
    for _ in range(length):
        acc = _lp_mul(acc, cur.x_laurent)
    acc = _lp_mul(acc, xp)
    return acc.get(-1, TruncatedSeries([0], cur.order, 0, "t")).truncate(cur.order)


def quadrangulation_disk_series(length: int, order: int) -> TruncatedSeries:
    """F_l for quadrangulations from the symbolic curve, exact to O(t^(order+1))."""
    cur = build_quadrangulation_curve()
    c = cur.c
    # x^l y x' as a Laurent polynomial in z with K coefficients
    xl = {-1: c, 1: c}
    yl = {-1: 1 / c, -3: -(cur.s * cur.s) / (3 * c)}
    xp = {0: c, -2: -c}
    acc: Dict[int, Any] = dict(yl)
    for _ in range(length):
        acc = _lp_mul(acc, xl)
    acc = _lp_mul(acc, xp)
    return k_expand_t(acc.get(-1, KElement(0)), order)
