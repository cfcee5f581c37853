"""Residue extraction at z = infinity and the closed formulas for quadrangulations.

Near z = infinity we use u = 1/z.  On the quadrangulation curve

    x = c (u + 1/u),    w = (u/c)(1 - sigma u^2),    sigma = s^2/3 = t c^4,

so both boundary functions x^l and w^-k have explicit Laurent coefficients
in u and every residue below is a finite sum over K.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .exactnum import KElement, TruncatedSeries, c_series, k_expand_t, ps_sqrt
from .spectral import SpectralCurve, build_quadrangulation_curve, exchange_curve
from .tr_engine import Amplitude, tr_amplitude

__all__ = [
    "CountTable",
    "boundary_coeff",
    "disk_coeffs",
    "fully_simple_disk_coeffs",
    "ordinary_coeffs",
    "fully_simple_coeffs",
    "cylinder_ordinary",
    "cylinder_fully_simple",
    "cylinder_simple",
    "cylinder_mixed",
    "genus1_closed",
    "phi_series",
    "r_coeff",
    "r_coeff_series",
    "explicit_phi",
    "bernardi_fusy",
    "remark_l2_check",
    "symbolic_curves",
]


@dataclass
class CountTable:
    """[t^Q] coefficients of one generating series, Q = 0..truncation."""

    family: str
    genus: int
    lengths: Tuple[int, ...]
    coefficients: Dict[int, Fraction]
    truncation: int

    def values(self) -> List[Fraction]:
        return [self.coefficients.get(q, Fraction(0)) for q in range(self.truncation + 1)]

    def to_json(self) -> dict:
        out = []
        for q in range(self.truncation + 1):
            v = self.coefficients.get(q, Fraction(0))
            out.append({"q": q, "value": str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"})
        return {
            "family": self.family,
            "genus": self.genus,
            "lengths": list(self.lengths),
            "truncation": self.truncation,
            "coefficients": out,
        }

    @classmethod
    def from_json(cls, d: dict) -> "CountTable":
        coeffs = {int(e["q"]): Fraction(e["value"]) for e in d["coefficients"]}
        return cls(d["family"], int(d["genus"]), tuple(d["lengths"]), coeffs, int(d["truncation"]))


_CURVES: Dict[str, SpectralCurve] = {}


def symbolic_curves() -> Tuple[SpectralCurve, SpectralCurve]:
    """The shared symbolic (ordinary, exchanged) curves, so amplitudes are memoized once."""
    if not _CURVES:
        cur = build_quadrangulation_curve()
        _CURVES["ordinary"] = cur
        _CURVES["exchanged"] = exchange_curve(cur)
    return _CURVES["ordinary"], _CURVES["exchanged"]


def _to_table(family: str, g: int, lengths: Sequence[int], value: Any, q_max: int) -> CountTable:
    if isinstance(value, KElement):
        if not value.b.is_zero():
            raise ArithmeticError("extracted coefficient has a nonzero s-part")
    ser = k_expand_t(value, q_max)
    coeffs = {q: Fraction(ser.coeff(q)) for q in range(q_max + 1)}
    return CountTable(family, g, tuple(lengths), coeffs, q_max)


# ---------------------------------------------------------------------------
# Boundary functions at infinity
# ---------------------------------------------------------------------------


def boundary_coeff(kind: str, length: int, e: int, c: Any, s: Any) -> Any:
    """[u^e] of x^length (kind 'x') or of w^(-length) (kind 'w')."""
    if kind == "x":
        # c^l (u + 1/u)^l: exponent l - 2i
        if (length - e) % 2 or abs(e) > length:
            return 0
        i = (length - e) // 2
        return c ** length * math.comb(length, i)
    if kind == "w":
        # c^k u^-k (1 - sigma u^2)^-k
        d = e + length
        if d < 0 or d % 2:
            return 0
        m = d // 2
        sigma = s * s / 3
        return c ** length * sigma ** m * math.comb(length + m - 1, m)
    raise ValueError(f"unknown boundary kind {kind!r}")


def _pole_residue(kind: str, length: int, a: Any, kp: int, c: Any, s: Any) -> Any:
    """Res_{z=oo} B(z) dz/(z-a)^kp with B = x^l or w^-k; dz/(z-a)^kp = -u^(kp-2)(1-au)^-kp du."""
    acc: Any = 0
    j = 0
    low = -length  # valuation of both boundary functions
    while True:
        e = -1 - (kp - 2) - j
        if e < low:
            break
        b = boundary_coeff(kind, length, e, c, s)
        if not (b == 0):
            acc = acc + b * (a ** j) * math.comb(kp + j - 1, j)
        j += 1
    return -acc


def _extract_amplitude(amp: Amplitude, cur: SpectralCurve, kind: str, lengths: Sequence[int]) -> Any:
    if len(lengths) != amp.n:
        raise ValueError("number of lengths must equal the number of amplitude slots")
    cache: Dict[Tuple[int, int, int], Any] = {}

    def r(length: int, i: int, kp: int) -> Any:
        key = (length, i, kp)
        if key not in cache:
            cache[key] = _pole_residue(kind, length, cur.branch_points[i], kp, cur.c, cur.s)
        return cache[key]

    acc: Any = KElement(0) if cur.symbolic else Fraction(0)
    for key, v in amp.entries.items():
        term = v
        for length, (i, kp) in zip(lengths, key):
            f = r(length, i, kp)
            if f == 0:
                term = None
                break
            term = term * f
        if term is not None:
            acc = acc + term
    return acc


def ordinary_coeffs(amp: Amplitude, lengths: Sequence[int], q_max: int, cur: Optional[SpectralCurve] = None) -> CountTable:
    """F^{[g]}_{l_1..l_n} = (-1)^n prod Res x^l_i omega_{g,n}, t-expanded."""
    cur = cur or symbolic_curves()[0]
    val = _extract_amplitude(amp, cur, "x", lengths)
    if amp.n % 2:
        val = -val
    return _to_table("ordinary", amp.g, lengths, val, q_max)


def fully_simple_coeffs(amp: Amplitude, lengths: Sequence[int], q_max: int, cur: Optional[SpectralCurve] = None) -> CountTable:
    """H^{[g]}_{k_1..k_n} = prod Res w^-k_i (exchanged omega_{g,n}), t-expanded."""
    cur = cur or symbolic_curves()[1]
    val = _extract_amplitude(amp, cur, "w", lengths)
    return _to_table("fully-simple", amp.g, lengths, val, q_max)


# ---------------------------------------------------------------------------
# Disks and cylinders from closed forms
# ---------------------------------------------------------------------------


def _cs(cur: Optional[SpectralCurve]) -> Tuple[Any, Any]:
    cur = cur or symbolic_curves()[0]
    return cur.c, cur.s


def disk_coeffs(length: int, q_max: int, cur: Optional[SpectralCurve] = None) -> CountTable:
    """F_l = -Res_{z=oo} x^l y dx."""
    c, s = _cs(cur)
    # y dx = (u/c - sigma u^3 / c) * c (1 - 1/u^2) du  ... as a Laurent polynomial in u
    sigma = s * s / 3
    ydx = {1: 1 + sigma, -1: -1, 3: -sigma}
    acc: Any = 0
    for e, v in ydx.items():
        acc = acc + v * boundary_coeff("x", length, -1 - e, c, s)
    return _to_table("ordinary", 0, (length,), -acc, q_max)


def fully_simple_disk_coeffs(length: int, q_max: int, cur: Optional[SpectralCurve] = None) -> CountTable:
    """H_k = Res_{z=oo} w^-k x dw (simple and fully simple agree for one boundary)."""
    c, s = _cs(cur)
    sigma = s * s / 3
    # x dw = c (u + 1/u) (1/c)(1 - 3 sigma u^2) du = (u + 1/u)(1 - 3 sigma u^2) du
    xdw = {1: 1 - 3 * sigma, -1: 1, 3: -3 * sigma}
    acc: Any = 0
    for e, v in xdw.items():
        acc = acc + v * boundary_coeff("w", length, -1 - e, c, s)
    return _to_table("fully-simple", 0, (length,), acc, q_max)


def _diag_pairing(kind1: str, l1: int, kind2: str, l2: int, c: Any, s: Any) -> Any:
    """Res Res f1 f2 du1 du2 / (1 - u1 u2)^2 = sum_j (j+1) [u^-1-j] f1 [u^-1-j] f2."""
    acc: Any = 0
    for j in range(0, min(l1, l2)):
        b1 = boundary_coeff(kind1, l1, -1 - j, c, s)
        if b1 == 0:
            continue
        b2 = boundary_coeff(kind2, l2, -1 - j, c, s)
        if b2 == 0:
            continue
        acc = acc + (j + 1) * b1 * b2
    return acc


def cylinder_ordinary(l1: int, l2: int, q_max: int, cur: Optional[SpectralCurve] = None) -> CountTable:
    """F_{l1,l2} from B - dx dx/(x1-x2)^2 = du1 du2/(1 - u1 u2)^2."""
    c, s = _cs(cur)
    return _to_table("ordinary", 0, (l1, l2), _diag_pairing("x", l1, "x", l2, c, s), q_max)


def cylinder_simple(k1: int, k2: int, q_max: int, cur: Optional[SpectralCurve] = None) -> CountTable:
    """G_{k1,k2}: both boundaries simple; Y_2 dw dw = W_2 dx dx."""
    c, s = _cs(cur)
    return _to_table("simple", 0, (k1, k2), _diag_pairing("w", k1, "w", k2, c, s), q_max)


def cylinder_mixed(k: int, l: int, q_max: int, cur: Optional[SpectralCurve] = None) -> CountTable:
    """G_{k|l}: first boundary simple, second ordinary."""
    c, s = _cs(cur)
    return _to_table("mixed", 0, (k, l), _diag_pairing("w", k, "x", l, c, s), q_max)


def _log_coeff(i: int, j: int, sigma: Any) -> Any:
    """[u1^i u2^j] sum_n q^n/n with q = sigma (u1^2 + u1 u2 + u2^2)."""
    if (i + j) % 2 or i + j == 0:
        return 0
    n = (i + j) // 2
    tot = 0
    for a in range(0, i // 2 + 1):
        b = i - 2 * a
        cc = n - a - b
        if cc < 0 or b + 2 * cc != j:
            continue
        tot += math.factorial(n) // (math.factorial(a) * math.factorial(b) * math.factorial(cc))
    if tot == 0:
        return 0
    return sigma ** n * Fraction(tot, n)


def cylinder_fully_simple(k1: int, k2: int, q_max: int, cur: Optional[SpectralCurve] = None) -> CountTable:
    """H_{k1,k2} from X_2 dw dw = B - dw dw/(w1-w2)^2 = -d1 d2 log(1 - sigma(u1^2 + u1 u2 + u2^2))."""
    c, s = _cs(cur)
    sigma = s * s / 3
    acc: Any = 0
    for i in range(1, k1 + 1):
        b1 = boundary_coeff("w", k1, -i, c, s)
        if b1 == 0:
            continue
        for j in range(1, k2 + 1):
            lij = _log_coeff(i, j, sigma)
            if lij == 0:
                continue
            b2 = boundary_coeff("w", k2, -j, c, s)
            if b2 == 0:
                continue
            acc = acc + lij * (i * j) * b1 * b2
    return _to_table("fully-simple", 0, (k1, k2), acc, q_max)


# ---------------------------------------------------------------------------
# Genus one closed forms
# ---------------------------------------------------------------------------


def phi_series(m: int, q_max: int) -> TruncatedSeries:
    """phi_m = c^(2m) (1 + (m-1) sqrt(1-12t)) / (1 - 12t)."""
    root = ps_sqrt(TruncatedSeries([1, -12], q_max, 0, "t"))
    c2 = c_series(q_max) ** 2
    num = (c2 ** m) * (1 + (m - 1) * root) if m else (1 + (m - 1) * root)
    return (num / TruncatedSeries([1, -12], q_max, 0, "t")).truncate(q_max)


def genus1_closed(m: int, q_max: int, which: str = "ordinary") -> TruncatedSeries:
    """F^{[1]}_{2(m+1)} = (2m+1)!/(6 m!^2) phi_m;  H^{[1]}_{2m} = (3m)! t^(m+1)/(4 m! (2m-1)!) phi_{3m+1}."""
    if which == "ordinary":
        if m < 0:
            raise ValueError("m >= 0 required")
        pref = Fraction(math.factorial(2 * m + 1), 6 * math.factorial(m) ** 2)
        return phi_series(m, q_max) * pref
    if which == "fully-simple":
        if m < 1:
            raise ValueError("m >= 1 required")
        pref = Fraction(math.factorial(3 * m), 4 * math.factorial(m) * math.factorial(2 * m - 1))
        body = phi_series(3 * m + 1, max(q_max - m - 1, 0)) * pref
        return body.shift(m + 1).truncate(q_max) if q_max >= m + 1 else TruncatedSeries([], q_max, q_max + 1, "t")
    raise ValueError(f"unknown family {which!r}")


def r_coeff(m: int, i: int) -> Fraction:
    """r_{m,i} = 2^(m+2i) - 1/2 sum_{j=0}^{m/2} (-1)^j C(m-j-1, j) C(2(m+i-j), m+i-j)."""
    tot = 0
    for j in range(0, m // 2 + 1):
        top = m - j - 1
        b1 = math.comb(top, j) if top >= 0 else 0
        tot += (-1) ** j * b1 * math.comb(2 * (m + i - j), m + i - j)
    return Fraction(2 ** (m + 2 * i)) - Fraction(tot, 2)


def r_coeff_series(m: int, n_max: int) -> List[Fraction]:
    """[(3t)^i] c^(2m)/(1-12t) by direct series arithmetic."""
    ser = (c_series(n_max) ** (2 * m)) / TruncatedSeries([1, -12], n_max, 0, "t") if m else TruncatedSeries([1], n_max) / TruncatedSeries([1, -12], n_max, 0, "t")
    return [Fraction(ser.coeff(i)) / 3 ** i for i in range(n_max + 1)]


def explicit_phi(m: int, n_max: int) -> List[Fraction]:
    """[t^n] phi_m from the r_{m,i} expansion."""
    out = []
    for n in range(n_max + 1):
        acc = m * r_coeff(m, n)
        for i in range(n):
            d = n - i
            # sqrt(1 - 12t) = 1 - sum_d (2/d) C(2d-2, d-1) (3t)^d
            acc += (1 - m) * r_coeff(m, i) * Fraction(2, d) * math.comb(2 * (d - 1), d - 1)
        out.append(acc * 3 ** n)
    return out


# ---------------------------------------------------------------------------
# Planar fully simple quadrangulations with even boundaries
# ---------------------------------------------------------------------------


def bernardi_fusy(q: int, lengths: Sequence[int]) -> Fraction:
    """alpha(Q, L, n) prod k_i C(3k_i/2, k_i), zero when v = Q - L/2 - n + 2 < 0."""
    if any(k <= 0 or k % 2 for k in lengths):
        raise ValueError("all boundary lengths must be positive and even")
    n = len(lengths)
    L = sum(lengths)
    v = q - L // 2 - n + 2
    if v < 0:
        return Fraction(0)
    e = L // 2 + 2 * q
    alpha = Fraction(3) ** (q - L // 2) * math.factorial(e - 1) / (math.factorial(v) * math.factorial(L + q))
    prod = 1
    for k in lengths:
        prod *= k * math.comb(3 * k // 2, k)
    return alpha * prod


def remark_l2_check(q_max: int) -> bool:
    """F^{[1]}_2 = H_{1,1} + H^{[1]}_2 coefficientwise."""
    ordc, exc = symbolic_curves()
    f = ordinary_coeffs(tr_amplitude(ordc, 1, 1), (2,), q_max, ordc).values()
    h11 = cylinder_fully_simple(1, 1, q_max).values()
    h2 = fully_simple_coeffs(tr_amplitude(exc, 1, 1), (2,), q_max, exc).values()
    return all(a == b + c for a, b, c in zip(f, h11, h2))
