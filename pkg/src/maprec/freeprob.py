"""Non-crossing partitions and the identities linking ordinary and fully simple series.

Truncated multivariate series live in ``flint.fmpq_mpoly`` rings: a product
is truncated back to per-variable degree bounds, which is an ideal, so the
truncation commutes with ring operations.  Quadrangulation tables come from
:mod:`maprec.extract`; F_0 = H_0 = 1 are the single-vertex conventions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import flint

from .exactnum import KElement, RationalFunc
from .extract import (
    bernardi_fusy,
    cylinder_fully_simple,
    cylinder_mixed,
    cylinder_ordinary,
    cylinder_simple,
    disk_coeffs,
    fully_simple_coeffs,
    fully_simple_disk_coeffs,
    symbolic_curves,
)
from .hurwitz import partitions
from .spectral import SpectralCurve, ZRational, build_quadrangulation_curve, exchange_curve
from .tr_engine import tr_amplitude

__all__ = [
    "NCPartition",
    "nc_partitions",
    "is_noncrossing",
    "kreweras",
    "catalan",
    "moment_cumulant",
    "moments_from_cumulants_by_type",
    "faa_di_bruno_disks",
    "SeriesPair",
    "series_pair",
    "inversion_residual",
    "check_inversion",
    "cylinder_residuals",
    "check_cylinder",
    "pants_residual",
    "check_pants",
    "pants_residue_sum",
    "pants_fs_vs_bernardi_fusy",
    "tutte_fully_simple_residual",
]

Blocks = Tuple[Tuple[int, ...], ...]


# ---------------------------------------------------------------------------
# Non-crossing partitions
# ---------------------------------------------------------------------------


def is_noncrossing(blocks: Sequence[Sequence[int]]) -> bool:
    """No a < b < c < d with a, c in one block and b, d in another."""
    owner: Dict[int, int] = {}
    for i, blk in enumerate(blocks):
        for x in blk:
            owner[x] = i
    pts = sorted(owner)
    for ia, a in enumerate(pts):
        for ib in range(ia + 1, len(pts)):
            b = pts[ib]
            if owner[b] == owner[a]:
                continue
            for ic in range(ib + 1, len(pts)):
                c = pts[ic]
                if owner[c] != owner[a]:
                    continue
                for d in pts[ic + 1:]:
                    if owner[d] == owner[b]:
                        return False
    return True


@dataclass(frozen=True)
class NCPartition:
    """A non-crossing partition of {1..n}; blocks sorted, listed by their minima."""

    n: int
    blocks: Blocks

    def __post_init__(self) -> None:
        elems = sorted(x for b in self.blocks for x in b)
        if elems != list(range(1, self.n + 1)):
            raise ValueError("blocks must partition {1..n}")
        if not is_noncrossing(self.blocks):
            raise ValueError("blocks cross")

    def block_type(self) -> Tuple[int, ...]:
        return tuple(sorted((len(b) for b in self.blocks), reverse=True))


def _nc_rec(elems: Tuple[int, ...]) -> Iterator[List[Tuple[int, ...]]]:
    # the block of the first element splits the rest into independent gaps
    if not elems:
        yield []
        return
    first, rest = elems[0], elems[1:]
    m = len(rest)
    for mask in range(1 << m):
        chosen = [rest[i] for i in range(m) if mask >> i & 1]
        block = (first,) + tuple(chosen)
        gaps: List[Tuple[int, ...]] = []
        cur: List[int] = []
        for x in rest:
            if x in chosen:
                gaps.append(tuple(cur))
                cur = []
            else:
                cur.append(x)
        gaps.append(tuple(cur))
        yield from _combine([block], gaps)


def _combine(acc: List[Tuple[int, ...]], gaps: List[Tuple[int, ...]]) -> Iterator[List[Tuple[int, ...]]]:
    if not gaps:
        yield list(acc)
        return
    for part in _nc_rec(gaps[0]):
        yield from _combine(acc + part, gaps[1:])


def nc_partitions(n: int) -> Iterator[NCPartition]:
    """All non-crossing partitions of {1..n} (Catalan(n) of them)."""
    for blocks in _nc_rec(tuple(range(1, n + 1))):
        yield NCPartition(n, tuple(sorted(blocks)))


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def kreweras(lam: Sequence[int]) -> int:
    """Number of non-crossing partitions with block sizes lam."""
    lam = [int(x) for x in lam]
    if not lam or any(x <= 0 for x in lam):
        raise ValueError("lambda must be a nonempty partition")
    n, k = sum(lam), len(lam)
    mult = 1
    for v in set(lam):
        mult *= math.factorial(lam.count(v))
    num = math.factorial(n)
    den = mult * math.factorial(n - k + 1)
    if num % den:
        raise ArithmeticError("Kreweras number is not integral")
    return num // den


# ---------------------------------------------------------------------------
# Moment-cumulant relation
# ---------------------------------------------------------------------------


def _conv_powers(seq: List[Any], one: Any, n_max: int, s_max: int) -> List[List[Any]]:
    """pw[s][m] = [z^m] (sum_i seq[i] z^i)^s for m <= n_max."""
    zero = one * 0
    pw = [[one] + [zero] * n_max]
    for _ in range(s_max):
        prev = pw[-1]
        nxt = [zero] * (n_max + 1)
        for i, a in enumerate(prev):
            if a == 0:
                continue
            for j in range(0, n_max + 1 - i):
                nxt[i + j] = nxt[i + j] + a * seq[j]
        pw.append(nxt)
    return pw


def moment_cumulant(direction: str, values: Mapping[int, Any], n_max: int, one: Any = None) -> Dict[int, Any]:
    """Moments from free cumulants (``"to_moments"``) or the triangular inverse (``"to_cumulants"``).

    Uses the decomposition by the block containing 1:
    phi_n = sum_s k_s sum_{i_1+...+i_s = n-s} phi_{i_1}...phi_{i_s}, with phi_0 = 1.
    """
    if direction not in ("to_moments", "to_cumulants"):
        raise ValueError(f"unknown direction {direction!r}")
    vals = [values[i] for i in range(1, n_max + 1)]
    if one is None:
        one = vals[0] * 0 + 1 if vals else Fraction(1)
    zero = one * 0
    phi: List[Any] = [one] + [zero] * n_max
    kap: List[Any] = [zero] * (n_max + 1)
    for n in range(1, n_max + 1):
        # contribution of blocks of size s < n containing 1
        pw = _conv_powers(phi, one, n, n)
        rest = zero
        for s in range(1, n):
            rest = rest + kap[s] * pw[s][n - s]
        if direction == "to_moments":
            kap[n] = vals[n - 1]
            phi[n] = rest + kap[n]
        else:
            phi[n] = vals[n - 1]
            kap[n] = phi[n] - rest
    out = kap if direction == "to_cumulants" else phi
    return {n: out[n] for n in range(1, n_max + 1)}


def moments_from_cumulants_by_type(values: Mapping[int, Any], n: int) -> Any:
    """sum_{lambda |- n} c_lambda prod_i k_{lambda_i}, grouping NC(n) by block type."""
    acc: Any = 0
    for lam in partitions(n):
        term: Any = kreweras(lam)
        for part in lam:
            term = term * values[part]
        acc = acc + term
    return acc


def faa_di_bruno_disks(values: Mapping[int, Any], n: int, one: Any = Fraction(1)) -> Any:
    """F_n = sum_k n!/(n-k+1)! H_n((0,1)^k)/k!, with H_n((0,1)^k) summed over compositions."""
    zero = one * 0
    seq = [zero] + [one * values[i] for i in range(1, n + 1)]
    pw = _conv_powers(seq, one, n, n)
    acc = zero
    for k in range(1, n + 1):
        acc = acc + pw[k][n] * Fraction(math.factorial(n), math.factorial(n - k + 1) * math.factorial(k))
    return acc


# ---------------------------------------------------------------------------
# Truncated multivariate series over Q
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _ctx(names: Tuple[str, ...]) -> Any:
    return flint.fmpq_mpoly_ctx.get(names, "lex")


class _Ring:
    """Q[t, v_1, ...] modulo t^(q+1) and v_i^(n+1)."""

    def __init__(self, names: Tuple[str, ...], bounds: Tuple[int, ...]):
        self.ctx = _ctx(names)
        self.bounds = bounds
        self.gens = self.ctx.gens()

    def trunc(self, p: Any) -> Any:
        keep = {e: c for e, c in p.to_dict().items() if all(a <= b for a, b in zip(e, self.bounds))}
        return self.ctx.from_dict(keep) if keep else self.ctx.from_dict({})

    def mul(self, a: Any, b: Any) -> Any:
        return self.trunc(a * b)

    def pow(self, a: Any, k: int) -> Any:
        out = self.ctx.from_dict({(0,) * len(self.bounds): 1})
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def inv(self, p: Any) -> Any:
        """1/p for p = c0 + nilpotent, c0 a nonzero rational."""
        c0 = p.to_dict().get((0,) * len(self.bounds), 0)
        if c0 == 0:
            raise ZeroDivisionError("constant term vanishes")
        e = self.trunc(-(p - c0) / c0)
        term = self.ctx.from_dict({(0,) * len(self.bounds): 1})
        acc = term
        while True:
            term = self.mul(term, e)
            if term.is_zero():
                break
            acc = acc + term
        return acc / c0

    def log1m(self, y: Any) -> Any:
        """log(1 - y) for nilpotent y."""
        acc = self.ctx.from_dict({})
        term = self.ctx.from_dict({(0,) * len(self.bounds): 1})
        k = 0
        while True:
            k += 1
            term = self.mul(term, y)
            if term.is_zero():
                break
            acc = acc - term / k
        return acc

    def tpoly(self, coeffs: Sequence[Fraction]) -> Any:
        """A polynomial in the first generator t."""
        d = {}
        for q, v in enumerate(coeffs):
            if v and q <= self.bounds[0]:
                d[(q,) + (0,) * (len(self.bounds) - 1)] = flint.fmpq(v.numerator, v.denominator)
        return self.ctx.from_dict(d)


# ---------------------------------------------------------------------------
# Disk series and their inversion
# ---------------------------------------------------------------------------


@dataclass
class SeriesPair:
    """Disk tables: W = sum_l F_l x^(-l-1), X = 1/w + sum_l H_l w^(l-1), coefficients in t."""

    q_max: int
    F: Dict[int, List[Fraction]]
    H: Dict[int, List[Fraction]]


@lru_cache(maxsize=None)
def _series_pair(q_max: int, l_max: int) -> SeriesPair:
    one = [Fraction(1)] + [Fraction(0)] * q_max
    F = {0: one}
    H = {0: one}
    for ell in range(1, l_max + 1):
        F[ell] = disk_coeffs(ell, q_max).values()
        H[ell] = fully_simple_disk_coeffs(ell, q_max).values()
    return SeriesPair(q_max, F, H)


def series_pair(q_max: int, l_max: int) -> SeriesPair:
    return _series_pair(int(q_max), int(l_max))


def inversion_residual(q_max: int, l_max: int, vertex_terms: bool = True,
                       pair: Optional[SeriesPair] = None) -> Any:
    """u X(W(x)) - 1 with u = 1/x, truncated to u^l_max; zero iff x = X(W(x)) to that order.

    With W = u A(u), A = sum_l F_l u^l, this is h_0 / A + sum_{l>=1} H_l u^l A^(l-1) - 1.
    ``vertex_terms=False`` drops F_0 and H_0 (the 1/x and 1/w terms).
    """
    pair = pair or series_pair(q_max, l_max)
    R = _Ring(("t", "u"), (q_max, l_max))
    _, u = R.gens
    start = 0 if vertex_terms else 1
    A = R.ctx.from_dict({})
    for ell in range(start, l_max + 1):
        A = A + R.tpoly(pair.F[ell]) * u ** ell
    A = R.trunc(A)
    acc = R.ctx.from_dict({})
    if vertex_terms:
        acc = acc + R.inv(A)
    for ell in range(1, l_max + 1):
        acc = acc + R.mul(R.tpoly(pair.H[ell]) * u ** ell, R.pow(A, ell - 1))
    return R.trunc(acc - 1)


def check_inversion(q_max: int, l_max: int, vertex_terms: bool = True) -> bool:
    return inversion_residual(q_max, l_max, vertex_terms).is_zero()


# ---------------------------------------------------------------------------
# Cylinders
# ---------------------------------------------------------------------------


def _bivariate(R: _Ring, table: Callable[[int, int, int], Any], n: int, shift: Tuple[int, int] = (1, 1)) -> Any:
    """sum_{k1,k2} [table] v1^(k1 - shift) v2^(k2 - shift) with exponents <= n."""
    _, a, b = R.gens
    acc = R.ctx.from_dict({})
    for k1 in range(shift[0], n + shift[0] + 1):
        for k2 in range(shift[1], n + shift[1] + 1):
            if k1 <= 0 or k2 <= 0:
                continue
            vals = table(k1, k2, R.bounds[0]).values()
            if any(vals):
                acc = acc + R.tpoly(vals) * a ** (k1 - shift[0]) * b ** (k2 - shift[1])
    return acc


def _compose2(R: _Ring, table: Callable[[int, int, int], Any], n: int, W1: Any, W2: Any) -> Any:
    """sum_{k1,k2} [table] W1^(k1-1) W2^(k2-1) for W_i of valuation 1."""
    p1 = [R.pow(W1, k) for k in range(n + 1)]
    p2 = [R.pow(W2, k) for k in range(n + 1)]
    acc = R.ctx.from_dict({})
    for k1 in range(1, n + 2):
        for k2 in range(1, n + 2):
            vals = table(k1, k2, R.bounds[0]).values()
            if any(vals):
                acc = acc + R.mul(R.tpoly(vals) * p1[k1 - 1], p2[k2 - 1])
    return R.trunc(acc)


def cylinder_residuals(q_max: int, n_max: int = 6, omit_shift: bool = False) -> Dict[str, Any]:
    """Residuals of the planar cylinder identities, as series in (t, u_1, u_2) or (t, w_1, w_2).

    u = 1/x at each boundary, W(u) = sum_l F_l u^(l+1), hat W_2 = sum F_{l1,l2} u1^(l1-1) u2^(l2-1),
    D = (W(u1) - W(u2))/(u1 - u2).

    * ordinary-fully-simple: (u1-u2)^2 hat W_2 + 1 = [(u1-u2)^2 X_2(W1,W2) + D^-2] W'(u1) W'(u2),
      the cylinder identity B = (W_2 + 1/(x1-x2)^2) dx dx = (X_2 + 1/(w1-w2)^2) dw dw
      multiplied by (u1-u2)^2.  ``omit_shift`` drops the D^-2 term (the fully simple double pole).
    * simple-ordinary: Y_2(W1,W2) W'(u1) W'(u2) = hat W_2.
    * mixed-ordinary: Y_{1|1}(W(x1)|x2) = -W_2(x1,x2) X'(W(x1)), which in u reads
      sum G_{k|l} W1^(k-1) u2^(l-1) W'(u1) = hat W_2.
    * simple-fully-simple: Y_2 = X_2 - d1 d2 log(1 - w1 w2 E), E = sum_{l>=2} H_l h_{l-2}(w1, w2).
    """
    n = n_max
    pair = series_pair(q_max, 2 * n + 4)
    R = _Ring(("t", "a", "b"), (q_max, n, n))
    _, a, b = R.gens

    def wser(var: Any) -> Any:
        acc = R.ctx.from_dict({})
        for ell in range(0, n):
            acc = acc + R.tpoly(pair.F[ell]) * var ** (ell + 1)
        return R.trunc(acc)

    def wprime(var: Any) -> Any:
        acc = R.ctx.from_dict({})
        for ell in range(0, n + 1):
            acc = acc + (ell + 1) * R.tpoly(pair.F[ell]) * var ** ell
        return R.trunc(acc)

    W1, W2 = wser(a), wser(b)
    dW1, dW2 = wprime(a), wprime(b)
    D = R.ctx.from_dict({})
    for ell in range(0, 2 * n + 1):
        h = sum((a ** i * b ** (ell - i) for i in range(ell + 1)), R.ctx.from_dict({}))
        D = D + R.tpoly(pair.F[ell]) * h
    D = R.trunc(D)
    hatW2 = _bivariate(R, cylinder_ordinary, n)
    X2 = _compose2(R, cylinder_fully_simple, n, W1, W2)
    Y2 = _compose2(R, cylinder_simple, n, W1, W2)
    sq = (a - b) ** 2
    dW = R.mul(dW1, dW2)

    out: Dict[str, Any] = {}
    lhs = R.trunc(sq * hatW2 + 1)
    rhs = R.mul(R.trunc(sq * X2), dW)
    if not omit_shift:
        rhs = rhs + R.mul(R.inv(R.mul(D, D)), dW)
    out["ordinary-fully-simple"] = R.trunc(lhs - rhs)
    out["simple-ordinary"] = R.trunc(R.mul(Y2, dW) - hatW2)

    # mixed: first boundary simple (composed with W), second ordinary (power of u)
    p1 = [R.pow(W1, k) for k in range(n + 1)]
    mixed = R.ctx.from_dict({})
    for k in range(1, n + 2):
        for ell in range(1, n + 2):
            vals = cylinder_mixed(k, ell, q_max).values()
            if any(vals):
                mixed = mixed + R.mul(R.tpoly(vals) * b ** (ell - 1), p1[k - 1])
    out["mixed-ordinary"] = R.trunc(R.mul(R.trunc(mixed), dW1) - hatW2)

    # simple vs fully simple directly in the w variables
    S = _Ring(("t", "a", "b"), (q_max, n + 1, n + 1))
    _, wa, wb = S.gens
    E = S.ctx.from_dict({})
    for ell in range(2, 2 * n + 5):
        h = sum((wa ** i * wb ** (ell - 2 - i) for i in range(ell - 1)), S.ctx.from_dict({}))
        E = E + S.tpoly(pair.H[ell]) * h
    L = S.log1m(S.trunc(wa * wb * E))
    corr = R.trunc(L.derivative(1).derivative(2))
    Y2w = _bivariate(R, cylinder_simple, n)
    X2w = _bivariate(R, cylinder_fully_simple, n)
    out["simple-fully-simple"] = R.trunc(Y2w - X2w + corr)
    return out


def check_cylinder(q_max: int, n_max: int = 6, omit_shift: bool = False) -> bool:
    return all(r.is_zero() for r in cylinder_residuals(q_max, n_max, omit_shift).values())


# ---------------------------------------------------------------------------
# Pairs of pants
# ---------------------------------------------------------------------------

_PANTS_VARS = ("c", "s", "z1", "z2", "z3")


def _qpoly_to_mpoly(coeffs: Sequence[Fraction], var: int) -> Any:
    ctx = _ctx(_PANTS_VARS)
    d = {}
    for i, v in enumerate(coeffs):
        if v:
            e = [0] * 5
            e[var] = i
            d[tuple(e)] = flint.fmpq(Fraction(v).numerator, Fraction(v).denominator)
    return ctx.from_dict(d)


def _const_to_frac(x: Any) -> Tuple[Any, Any]:
    """(num, den) mpolys in (c, s) for an element of K or Q."""
    ctx = _ctx(_PANTS_VARS)
    one = ctx.from_dict({(0,) * 5: 1})
    if isinstance(x, KElement):
        an, ad = _const_to_frac(x.a)
        bn, bd = _const_to_frac(x.b)
        s = ctx.gens()[1]
        return an * bd + s * bn * ad, ad * bd
    if isinstance(x, RationalFunc):
        return _qpoly_to_mpoly(x.numerator_coeffs(), 0), _qpoly_to_mpoly(x.denominator_coeffs(), 0)
    q = Fraction(x)
    return one * flint.fmpq(q.numerator, q.denominator), one


def _zrational(f: ZRational, var: int) -> Tuple[Any, Any]:
    """A ZRational as (num, den) in the variable z_var over Q[c, s]."""
    ctx = _ctx(_PANTS_VARS)
    z = ctx.gens()[var]

    def poly(cs: Sequence[Any]) -> Tuple[Any, Any]:
        num = ctx.from_dict({})
        den = ctx.from_dict({(0,) * 5: 1})
        for i, a in enumerate(cs):
            n_, d_ = _const_to_frac(a)
            num = num * d_ + n_ * den * z ** i
            den = den * d_
        return num, den

    nn, nd = poly(f.num)
    dn, dd = poly(f.den)
    return nn * dd, nd * dn


def _fadd(p: Tuple[Any, Any], q: Tuple[Any, Any]) -> Tuple[Any, Any]:
    n = p[0] * q[1] + q[0] * p[1]
    d = p[1] * q[1]
    g = n.gcd(d)
    if not g.is_zero() and not g.is_one():
        n, d = n / g, d / g
    return n, d


def _fmul(p: Tuple[Any, Any], q: Tuple[Any, Any]) -> Tuple[Any, Any]:
    return p[0] * q[0], p[1] * q[1]


def _reduce_s(p: Any) -> Any:
    """Replace s^2 by c^2 - 1."""
    ctx = _ctx(_PANTS_VARS)
    c = ctx.gens()[0]
    acc = ctx.from_dict({})
    for e, v in p.to_dict().items():
        k = e[1]
        mono = ctx.from_dict({(e[0], k % 2) + tuple(e[2:]): v})
        acc = acc + mono * (c * c - 1) ** (k // 2)
    return acc


def _amp_frac(amp: Any) -> Tuple[Any, Any]:
    """An omega_{0,3} pole-basis tensor as a rational function of (z1, z2, z3)."""
    ctx = _ctx(_PANTS_VARS)
    gens = ctx.gens()
    acc = (ctx.from_dict({}), ctx.from_dict({(0,) * 5: 1}))
    for key, v in amp.entries.items():
        term = _const_to_frac(v)
        for slot, (i, k) in enumerate(key):
            pn, pd = _const_to_frac(amp.points[i])
            # 1/(z - p)^k = pd^k / (pd z - pn)^k
            term = _fmul(term, (pd ** k, (pd * gens[2 + slot] - pn) ** k))
        acc = _fadd(acc, term)
    return acc


def _pants_integrand(cur: SpectralCurve, i: int) -> Tuple[Any, Any]:
    """1/((z_i - z_j)^2 (z_i - z_k)^2 x'(z_i) y'(z_i)), the coefficient of B B/(dx dy)."""
    ctx = _ctx(_PANTS_VARS)
    gens = ctx.gens()
    j, k = [m for m in range(3) if m != i]
    zi, zj, zk = gens[2 + i], gens[2 + j], gens[2 + k]
    xn, xd = _zrational(cur.x.derivative(), 2 + i)
    yn, yd = _zrational(cur.y.derivative(), 2 + i)
    return xd * yd, (zi - zj) ** 2 * (zi - zk) ** 2 * xn * yn


def _pants_rhs(cur: SpectralCurve) -> Tuple[Any, Any]:
    """sum_i d/dz_i of the integrand at z_i."""
    ctx = _ctx(_PANTS_VARS)
    acc = (ctx.from_dict({}), ctx.from_dict({(0,) * 5: 1}))
    for i in range(3):
        num, den = _pants_integrand(cur, i)
        var = _PANTS_VARS[2 + i]
        dnum = num.derivative(var) * den - num * den.derivative(var)
        acc = _fadd(acc, (dnum, den * den))
    return acc


def pants_residual(cur: Optional[SpectralCurve] = None, exchanged: Optional[SpectralCurve] = None,
                   drop_exchanged: bool = False) -> Any:
    """Numerator of omega_{0,3} + omega^vee_{0,3} - sum_i d_i[B B/(dx dy)] with s^2 = c^2 - 1 imposed.

    The identity holds iff this is zero.  ``drop_exchanged`` omits omega^vee_{0,3}.
    """
    if cur is None:
        cur, exchanged = symbolic_curves()
    elif exchanged is None:
        exchanged = exchange_curve(cur)
    lhs = _amp_frac(tr_amplitude(cur, 0, 3))
    if not drop_exchanged:
        lhs = _fadd(lhs, _amp_frac(tr_amplitude(exchanged, 0, 3)))
    rn, rd = _pants_rhs(cur)
    diff = _fadd(lhs, (-rn, rd))
    return _reduce_s(diff[0])


def check_pants(p: Any = None) -> bool:
    """The pants identity over K (``p`` None) or on the numeric curve c = (p + 1/p)/2."""
    cur = None if p is None else build_quadrangulation_curve(p)
    return pants_residual(cur).is_zero()


def _residue(num: Any, den: Any, a: Fraction) -> Fraction:
    """Res_{z=a} num/den dz for univariate fmpq_polys."""
    shift = flint.fmpq_poly([flint.fmpq(a.numerator, a.denominator), 1])
    n = num(shift)
    d = den(shift)
    dc = [Fraction(int(x.p), int(x.q)) for x in d.coeffs()]
    m = 0
    while m < len(dc) and dc[m] == 0:
        m += 1
    if m == 0:
        return Fraction(0)
    nc = [Fraction(int(x.p), int(x.q)) for x in n.coeffs()]
    d1 = dc[m:]
    # [zeta^(m-1)] n / d1
    q: List[Fraction] = []
    for e in range(m):
        v = nc[e] if e < len(nc) else Fraction(0)
        for i in range(1, min(e, len(d1) - 1) + 1):
            v -= d1[i] * q[e - i]
        q.append(v / d1[0])
    return q[m - 1]


def pants_residue_sum(p: Any, z2: Any, z3: Any) -> Tuple[Fraction, List[Tuple[Any, Fraction]]]:
    """Residues in z1 of B(z1,z2) B(z1,z3)/(dx dy)(z1) at fixed z2, z3; the total with infinity vanishes."""
    cur = build_quadrangulation_curve(p)
    rn, rd = _pants_integrand(cur, 0)
    c, s = cur.c, cur.s

    def to_uni(poly: Any) -> Any:
        vals = {"c": Fraction(c), "s": Fraction(s), "z2": Fraction(z2), "z3": Fraction(z3)}
        coeffs: Dict[int, Fraction] = {}
        for e, v in poly.to_dict().items():
            term = Fraction(int(v.p), int(v.q))
            for name, ex in zip(_PANTS_VARS, e):
                if name != "z1" and ex:
                    term *= vals[name] ** int(ex)
            coeffs[int(e[2])] = coeffs.get(int(e[2]), Fraction(0)) + term
        deg = max(coeffs, default=0)
        return flint.fmpq_poly([flint.fmpq(coeffs.get(i, Fraction(0)).numerator, coeffs.get(i, Fraction(0)).denominator)
                                for i in range(deg + 1)])

    num, den = to_uni(rn), to_uni(rd)
    g = num.gcd(den)
    num, den = num / g, den / g
    poles: List[Any] = []
    for fac, _ in den.factor()[1]:
        if fac.degree() != 1:
            raise ArithmeticError("expected rational poles only")
        co = fac.coeffs()
        r = -co[0] / co[1]
        poles.append(Fraction(int(r.p), int(r.q)))
    res = [(a, _residue(num, den, a)) for a in poles]
    # infinity: f(z) dz = -f(1/u)/u^2 du; use the reversed polynomials
    dn, dd = num.degree(), den.degree()
    rnum = flint.fmpq_poly(list(reversed(num.coeffs())))
    rden = flint.fmpq_poly(list(reversed(den.coeffs())))
    # f(1/u) = u^(dd - dn) rnum/rden, so -f(1/u)/u^2 = -u^(dd - dn - 2) rnum/rden
    e = dd - dn - 2
    if e >= 0:
        r_inf = Fraction(0)
    else:
        r_inf = -_residue(rnum, rden * flint.fmpq_poly([0, 1]) ** (-e), Fraction(0))
    res.append(("inf", r_inf))
    return sum((r for _, r in res), Fraction(0)), res


def pants_fs_vs_bernardi_fusy(q_max: int = 8, lengths: Tuple[int, int, int] = (2, 2, 2)) -> bool:
    _, ex = symbolic_curves()
    vals = fully_simple_coeffs(tr_amplitude(ex, 0, 3), lengths, q_max, ex).values()
    return all(v == bernardi_fusy(q, lengths) for q, v in enumerate(vals))


# ---------------------------------------------------------------------------
# Tutte equation for fully simple disks
# ---------------------------------------------------------------------------


def _tser_mul(a: List[Fraction], b: List[Fraction], q: int) -> List[Fraction]:
    out = [Fraction(0)] * (q + 1)
    for i, x in enumerate(a):
        if x:
            for j in range(0, q + 1 - i):
                out[i + j] += x * b[j]
    return out


def _h_lambda(H: Mapping[int, List[Fraction]], lam: Sequence[int], q: int) -> List[Fraction]:
    acc = [Fraction(1)] + [Fraction(0)] * q
    for part in lam:
        acc = _tser_mul(acc, H[part], q)
    return acc


def tutte_fully_simple_residual(l: int, q_max: int, weights: Optional[Mapping[int, List[Fraction]]] = None,
                                H: Optional[Mapping[int, List[Fraction]]] = None,
                                empty_parts: bool = True) -> List[Fraction]:
    """The Tutte equation for ordinary disks rewritten through fully simple disks.

    sum_{lambda |- l-1} H_lambda sum_{mu1 + mu2 = lambda} c_{mu1} c_{mu2}
      + sum_j p_j sum_{lambda |- l-1+j} c_lambda H_lambda,

    with c the Kreweras numbers.  ``weights`` maps j to the series p_j; the
    default is p_2 = -1, p_4 = t (quadrangulations).  With ``empty_parts`` the
    splits mu1, mu2 may be empty (c_() = 1, the F_0 = 1 terms).
    """
    if l < 1:
        raise ValueError("l >= 1 required")
    q = q_max
    if weights is None:
        minus_one = [Fraction(-1)] + [Fraction(0)] * q
        tt = [Fraction(0)] * (q + 1)
        if q >= 1:
            tt[1] = Fraction(1)
        weights = {2: minus_one, 4: tt}
    need = l - 1 + max(weights, default=0)
    if H is None:
        pair = series_pair(q, max(need, 1))
        H = pair.H
    res = [Fraction(0)] * (q + 1)
    # split term, via all ordered pairs of partitions (mu1, mu2) with |mu1| + |mu2| = l - 1
    lo = 0 if empty_parts else 1
    for a in range(lo, l - lo):
        b = l - 1 - a
        if b < lo:
            continue
        for mu1 in partitions(a):
            c1 = kreweras(mu1) if mu1 else 1
            h1 = _h_lambda(H, mu1, q)
            for mu2 in partitions(b):
                c2 = kreweras(mu2) if mu2 else 1
                prod = _tser_mul(h1, _h_lambda(H, mu2, q), q)
                res = [r + c1 * c2 * v for r, v in zip(res, prod)]
    for j, pj in weights.items():
        if not any(pj):
            continue
        tot = [Fraction(0)] * (q + 1)
        for lam in partitions(l - 1 + j):
            c = kreweras(lam)
            tot = [x + c * v for x, v in zip(tot, _h_lambda(H, lam, q))]
        res = [r + v for r, v in zip(res, _tser_mul(pj, tot, q))]
    return res
