"""Topological recursion on genus-0 spectral curves with simple branch points.

Amplitudes are stored in the pole basis

    omega_{g,n}(z_1, ..., z_n) = sum C[(i_1,k_1), ..., (i_n,k_n)] prod_j dz_j / (z_j - a_{i_j})^{k_j}

where ``i`` indexes the curve's branch points.  All residues are computed
from local jets in zeta = z - a, never by moving contours.  At a branch
point a, expanding the kernel numerator in z_1 gives

    K_a(z_1, z) = sum_{m >= 1} dz_1/(z_1 - a)^{m+1} * kappa_m(zeta) / dz,
    kappa_m = (zeta^m - sigma^m) / (2 (y(a+zeta) - y(a+sigma)) x'(a+zeta)),

so each output entry with pole order m + 1 at a is a zeta-residue of
kappa_m times the bracket.  Bracket factors are of three kinds:

    ('z', j)      zeta^j                     (a pole at a itself, or a B expansion)
    ('p', b, k)   (a + zeta - b)^(-k)        (a pole at another branch point b)
    ('diag',)     sigma' / (zeta - sigma)^2  (B(z, sigma(z)), sigma-side only)

and the sigma-side versions are composed with sigma and multiplied by sigma'.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, Sequence, Tuple

from .exactnum import TruncatedSeries, ps_compose
from .spectral import ZETA, SpectralCurve

__all__ = [
    "Amplitude",
    "InsufficientOrder",
    "tr_amplitude",
    "deck_jet",
    "kernel_jet",
    "kernel_two_route_check",
    "dilaton_check",
    "homogeneity_check",
]

Key = Tuple[Tuple[int, int], ...]


class InsufficientOrder(RuntimeError):
    """A jet was not expanded far enough; ``required`` is the needed order."""

    def __init__(self, required: int):
        super().__init__(f"jet truncation insufficient, need order {required}")
        self.required = required


def _is_zero(x: Any) -> bool:
    return x == 0


@dataclass
class Amplitude:
    """omega_{g,n} as a full (all orderings) tensor over the pole basis."""

    g: int
    n: int
    entries: Dict[Key, Any]
    points: Tuple[Any, ...]

    def __getitem__(self, key: Key) -> Any:
        return self.entries.get(tuple(key), 0)

    def keys(self) -> Iterable[Key]:
        return self.entries.keys()

    def max_pole_order(self) -> int:
        return max((k for key in self.entries for _, k in key), default=0)

    def is_symmetric(self) -> bool:
        for key, v in self.entries.items():
            for perm in itertools.permutations(range(self.n)):
                other = tuple(key[i] for i in perm)
                if not _is_zero(self.entries.get(other, 0) - v):
                    return False
        return True

    def pole_orders_ok(self) -> bool:
        return all(k >= 2 for key in self.entries for _, k in key)

    def evaluate(self, zs: Sequence[Any]) -> Any:
        """Coefficient of dz_1 ... dz_n at the given point."""
        acc: Any = 0
        for key, v in self.entries.items():
            term = v
            for (i, k), z in zip(key, zs):
                term = term / (z - self.points[i]) ** k
            acc = acc + term
        return acc

    def map_coeffs(self, fn) -> "Amplitude":
        return Amplitude(self.g, self.n, {k: fn(v) for k, v in self.entries.items()}, self.points)

    def equals(self, other: "Amplitude") -> bool:
        keys = set(self.entries) | set(other.entries)
        return all(_is_zero(self[k] - other[k]) for k in keys)


# ---------------------------------------------------------------------------
# Local data at one branch point
# ---------------------------------------------------------------------------


class _PointData:
    """Jets at branch point index ``i``, recomputed when more precision is needed."""

    def __init__(self, cur: SpectralCurve, i: int):
        self.cur = cur
        self.i = i
        self.a = cur.branch_points[i]
        self.order = -1
        self._cache: Dict[Any, TruncatedSeries] = {}
        self.ensure(10)

    def ensure(self, order: int) -> None:
        if order <= self.order:
            return
        order = max(order, self.order + 4)
        cur, i = self.cur, self.i
        N = order + 4
        sigma = cur.deck_jet(i, N)
        dsigma = sigma.derivative()
        yj = cur.y_jet(i, N)
        y_sigma = ps_compose(yj, sigma)
        dx = cur.dx_jet(i, N)
        den = 2 * (yj - y_sigma) * dx
        self.sigma = sigma
        self.dsigma = dsigma
        self.den = den
        self.den_inv = den.inverse()
        self.order = self.den_inv.order
        self._cache = {}

    def zeta(self, j: int) -> TruncatedSeries:
        return TruncatedSeries.monomial(j, self.order + 8 + max(j, 0), 1, ZETA)

    def kappa(self, m: int) -> TruncatedSeries:
        key = ("kappa", m)
        if key not in self._cache:
            num = self.zeta(m) - self.sigma ** m
            self._cache[key] = num * self.den_inv
        return self._cache[key]

    def _pole_other(self, b: int, k: int) -> TruncatedSeries:
        """(a - b + zeta)^(-k) as an exact-to-order Taylor series."""
        key = ("pole", b, k)
        if key not in self._cache:
            d = self.a - self.cur.branch_points[b]
            N = self.order + 8
            inv_d = 1 / d
            coeffs = []
            dp = inv_d ** k
            for j in range(N + 1):
                # binom(-k, j) d^(-k-j)
                coeffs.append(dp * ((-1) ** j * math.comb(k + j - 1, j)))
                dp = dp * inv_d
            self._cache[key] = TruncatedSeries(coeffs, N, 0, ZETA)
        return self._cache[key]

    def z_factor(self, f: Tuple) -> TruncatedSeries:
        if f[0] == "z":
            return self.zeta(f[1])
        if f[0] == "p":
            return self._pole_other(f[1], f[2])
        raise ValueError(f"unknown z-side factor {f}")

    def s_factor(self, f: Tuple) -> TruncatedSeries:
        key = ("s", f)
        if key not in self._cache:
            if f[0] == "z":
                base = self.sigma ** f[1]
            elif f[0] == "p":
                base = ps_compose(self._pole_other(f[1], f[2]), self.sigma)
            elif f[0] == "diag":
                diff = self.zeta(1) - self.sigma
                base = (diff * diff).inverse()
            else:
                raise ValueError(f"unknown sigma-side factor {f}")
            self._cache[key] = base * self.dsigma
        return self._cache[key]


def _factor_valuation(f: Tuple) -> int:
    if f[0] == "z":
        return f[1]
    if f[0] == "diag":
        return -2
    return 0


def _residue3(f: TruncatedSeries, g: TruncatedSeries, h: TruncatedSeries) -> Any:
    """[zeta^-1] f g h, raising InsufficientOrder when undetermined."""
    vh = h.valuation()
    if vh is None:
        vh = h.order + 1
    target = -1 - vh
    fg = f * g
    if fg.order < target:
        raise InsufficientOrder(target - fg.order)
    acc: Any = 0
    for e, x in fg.items():
        if e > target:
            break
        j = -1 - e
        if j > h.order:
            raise InsufficientOrder(j - h.order)
        y = h.coeff(j)
        if not _is_zero(y):
            acc = acc + x * y
    return acc


# ---------------------------------------------------------------------------
# The recursion
# ---------------------------------------------------------------------------


class _Engine:
    def __init__(self, cur: SpectralCurve):
        self.cur = cur
        self.points = [_PointData(cur, i) for i in range(len(cur.branch_points))]
        self.amps: Dict[Tuple[int, int], Amplitude] = {}
        self.res: Dict[Tuple, Any] = {}

    def residue(self, i: int, m: int, fz: Tuple, fs: Tuple) -> Any:
        key = (i, m, fz, fs)
        if key in self.res:
            return self.res[key]
        pd = self.points[i]
        while True:
            try:
                r = _residue3(pd.kappa(m), pd.z_factor(fz), pd.s_factor(fs))
                break
            except InsufficientOrder as exc:
                pd.ensure(pd.order + exc.required + 2)
        self.res[key] = r
        return r

    def amplitude(self, g: int, n: int) -> Amplitude:
        if 2 * g - 2 + n <= 0:
            raise ValueError("unstable topology")
        key = (g, n)
        if key not in self.amps:
            self.amps[key] = self._compute(g, n)
        return self.amps[key]

    # slot expansions --------------------------------------------------
    def _slot_terms(self, g: int, n: int, i: int, max_pole: int):
        """For omega_{g,n} with slot 0 placed near branch point i.

        Yields (factor, coeff, rest_entries) where factor is a z-side factor
        key and rest_entries are the pole-basis entries of the other slots.
        """
        if (g, n) == (0, 2):
            # B(a + zeta, z_j) = sum_m (m+1) zeta^m dz_j / (z_j - a)^(m+2)
            for m in range(max_pole + 1):
                yield ("z", m), m + 1, ((i, m + 2),)
            return
        amp = self.amplitude(g, n)
        for key, v in amp.entries.items():
            b, k = key[0]
            f = ("z", -k) if b == i else ("p", b, k)
            yield f, v, key[1:]

    def _compute(self, g: int, n: int) -> Amplitude:
        cur = self.cur
        result: Dict[Key, Any] = {}
        others = list(range(1, n))
        for i in range(len(self.points)):
            # bracket[(fz, fs)][rest_key_by_slot] = coefficient
            bracket: Dict[Tuple, Dict[Key, Any]] = {}

            def add(fz: Tuple, fs: Tuple, coeff: Any, slots: Dict[int, Tuple[int, int]]) -> None:
                rk = tuple(slots[j] for j in others)
                d = bracket.setdefault((fz, fs), {})
                d[rk] = d[rk] + coeff if rk in d else coeff

            # omega_{g-1,n+1}(z, sigma(z), z_2..z_n)
            if g >= 1:
                if (g - 1, n + 1) == (0, 2):
                    add(("z", 0), ("diag",), 1, {})
                else:
                    amp = self.amplitude(g - 1, n + 1)
                    for key, v in amp.entries.items():
                        (b1, k1), (b2, k2) = key[0], key[1]
                        fz = ("z", -k1) if b1 == i else ("p", b1, k1)
                        fs = ("z", -k2) if b2 == i else ("p", b2, k2)
                        add(fz, fs, v, dict(zip(others, key[2:])))

            # sum' over h, I
            splits = []
            for h in range(g + 1):
                for r in range(len(others) + 1):
                    for I in itertools.combinations(others, r):
                        J = tuple(j for j in others if j not in I)
                        if (h, len(I)) == (0, 0) or (g - h, len(J)) == (0, 0):
                            continue
                        splits.append((h, I, J))
            for h, I, J in splits:
                left = (h, len(I) + 1)
                right = (g - h, len(J) + 1)
                lmax = self._max_pole(right, i)
                rmax = self._max_pole(left, i)
                lterms = list(self._slot_terms(left[0], left[1], i, lmax))
                rterms = list(self._sigma_terms(right[0], right[1], i, rmax))
                for fz, cz, restz in lterms:
                    for fs, cs, rests in rterms:
                        slots = dict(zip(I, restz))
                        slots.update(zip(J, rests))
                        add(fz, fs, cz * cs, slots)

            for (fz, fs), table in bracket.items():
                vmax = 1 - _factor_valuation(fz) - _factor_valuation(fs)
                for m in range(1, vmax + 1):
                    r = self.residue(i, m, fz, fs)
                    if _is_zero(r):
                        continue
                    for rk, coeff in table.items():
                        if _is_zero(coeff):
                            continue
                        full = ((i, m + 1),) + rk
                        val = coeff * r
                        result[full] = result[full] + val if full in result else val
        entries = {k: v for k, v in result.items() if not _is_zero(v)}
        return Amplitude(g, n, entries, tuple(cur.branch_points))

    def _sigma_terms(self, g: int, n: int, i: int, max_pole: int):
        if (g, n) == (0, 2):
            for m in range(max_pole + 1):
                yield ("z", m), m + 1, ((i, m + 2),)
            return
        amp = self.amplitude(g, n)
        for key, v in amp.entries.items():
            b, k = key[0]
            f = ("z", -k) if b == i else ("p", b, k)
            yield f, v, key[1:]

    def _max_pole(self, gn: Tuple[int, int], i: int) -> int:
        """Largest zeta-pole order the partner factor can carry at branch point i."""
        g, n = gn
        if (g, n) == (0, 2):
            return 0
        amp = self.amplitude(g, n)
        return max((key[0][1] for key in amp.entries if key[0][0] == i), default=0)


def _engine(cur: SpectralCurve) -> _Engine:
    eng = cur._jets.get("engine")
    if eng is None:
        eng = _Engine(cur)
        cur._jets["engine"] = eng
    return eng


def tr_amplitude(cur: SpectralCurve, g: int, n: int) -> Amplitude:
    """omega_{g,n} of the curve, memoized per curve object."""
    return _engine(cur).amplitude(g, n)


def deck_jet(cur: SpectralCurve, i: int, order: int) -> TruncatedSeries:
    return cur.deck_jet(i, order)


def kernel_jet(cur: SpectralCurve, i: int, m: int, order: int) -> TruncatedSeries:
    """kappa_m(zeta): coefficient of dz_1/(z_1 - a)^(m+1) in the kernel, as a zeta-series."""
    pd = _engine(cur).points[i]
    pd.ensure(order)
    return pd.kappa(m)


def kernel_two_route_check(cur: SpectralCurve, i: int, order: int = 6) -> bool:
    """Compare the denominator jet 2(y(z) - y(sigma z)) x'(z) with the symmetrized form.

    The second route uses omega01(z) - omega01(sigma z) = (y x')(z) - (y x')(sigma z) sigma'(z),
    which must agree because x(sigma z) = x(z) implies x'(sigma z) sigma' = x'(z).
    """
    pd = _engine(cur).points[i]
    pd.ensure(order)
    yj = cur.y_jet(i, order + 2)
    dxj = cur.dx_jet(i, order + 2)
    sig = cur.deck_jet(i, order + 2)
    yx = yj * dxj
    alt = 2 * (yx - ps_compose(yx, sig) * sig.derivative())
    return alt.agrees_with(pd.den)


def _primitive_jet(cur: SpectralCurve, i: int, order: int) -> TruncatedSeries:
    return (cur.y_jet(i, order) * cur.dx_jet(i, order)).integral()


def dilaton_check(cur: SpectralCurve, g: int, n: int) -> Tuple[bool, Dict[Key, Any]]:
    """Sum_a Res_{z->a} omega_{g,n+1}(z_1..z_n, z) Phi(z) - (2 - 2g - n) omega_{g,n}.

    Returns (all residuals zero, residual tensor).
    """
    big = tr_amplitude(cur, g, n + 1)
    small = tr_amplitude(cur, g, n)
    kmax = big.max_pole_order()
    phis = [_primitive_jet(cur, i, kmax + 1) for i in range(len(cur.branch_points))]
    lhs: Dict[Key, Any] = {}
    for key, v in big.entries.items():
        b, k = key[-1]
        # Res_{zeta=0} zeta^-k Phi(a+zeta) = [zeta^(k-1)] Phi
        r = phis[b].coeff(k - 1)
        if _is_zero(r):
            continue
        rk = key[:-1]
        lhs[rk] = lhs[rk] + v * r if rk in lhs else v * r
    factor = 2 - 2 * g - n
    residual: Dict[Key, Any] = {}
    for rk in set(lhs) | set(small.entries):
        d = lhs.get(rk, 0) - factor * small[rk]
        if not _is_zero(d):
            residual[rk] = d
    return not residual, residual


def homogeneity_check(cur: SpectralCurve, g: int, n: int, lam: Any = 2) -> bool:
    """omega_{g,n}[lam y] == lam^(2-2g-n) omega_{g,n}[y]."""
    base = tr_amplitude(cur, g, n)
    scaled = tr_amplitude(cur.scaled(lam), g, n)
    factor = Fraction(lam) ** (2 - 2 * g - n) if isinstance(lam, int) else lam ** (2 - 2 * g - n)
    return scaled.equals(base.map_coeffs(lambda v: v * factor))
