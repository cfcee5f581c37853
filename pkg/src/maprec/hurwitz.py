"""Symmetric-group characters, double Hurwitz numbers and the GUE transition identities.

Conventions: ``|Aut lambda| = L!/|C_lambda|``; the double Hurwitz number
attached to a symmetric function r is

    R_{mu,lambda} = 1/(|Aut lambda| |Aut mu|) sum_nu chi_nu(mu) r(cont nu) chi_nu(lambda)

with r = e_k (strictly monotone), h_k (weakly monotone) or p_1^k (ordinary).
GUE moments use the propagator <M_ab M_cd> = delta_ad delta_bc / N, so a
gluing with V vertices contributes N^(V - L/2).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

from . import _kernel_py

__all__ = [
    "Partition",
    "NPoly",
    "partitions",
    "aut",
    "class_size",
    "contents",
    "hook_dimension",
    "character",
    "content_function",
    "double_hurwitz",
    "monotone_path_oracle",
    "gue_moment",
    "gue_cumulant",
    "connected_2orbifold",
    "weingarten_transition_check",
    "transition_inverse_check",
    "fully_simple_gue",
]

Partition = Tuple[int, ...]
KINDS = ("strict", "weak", "ordinary")


def _part(lam: Iterable[int]) -> Partition:
    out = tuple(sorted((int(x) for x in lam), reverse=True))
    if any(x <= 0 for x in out):
        raise ValueError("partition parts must be positive")
    return out


@lru_cache(maxsize=None)
def partitions(n: int) -> Tuple[Partition, ...]:
    """Partitions of n in reverse lexicographic order."""
    def rec(rest: int, cap: int) -> Iterator[Partition]:
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in rec(rest - first, first):
                yield (first,) + tail
    return tuple(rec(n, n))


def aut(lam: Sequence[int]) -> int:
    """|Aut lambda| = prod_i i^(m_i) m_i!."""
    out = 1
    for part in set(lam):
        m = list(lam).count(part)
        out *= part ** m * math.factorial(m)
    return out


def class_size(lam: Sequence[int]) -> int:
    return math.factorial(sum(lam)) // aut(lam)


def contents(lam: Sequence[int]) -> List[int]:
    return [j - i for i, row in enumerate(lam) for j in range(row)]


def hook_dimension(lam: Sequence[int]) -> int:
    """chi_lambda(id) = L!/prod hooks."""
    lam = list(lam)
    conj = [sum(1 for r in lam if r > j) for j in range(lam[0] if lam else 0)]
    prod = 1
    for i, row in enumerate(lam):
        for j in range(row):
            prod *= row - j + conj[j] - i - 1
    return math.factorial(sum(lam)) // prod


# ---------------------------------------------------------------------------
# Laurent polynomials in N
# ---------------------------------------------------------------------------


class NPoly:
    """Finite Laurent polynomial in N with rational coefficients."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Dict[int, Fraction] | None = None):
        self.c: Dict[int, Fraction] = {k: Fraction(v) for k, v in (coeffs or {}).items() if v}

    @classmethod
    def const(cls, v) -> "NPoly":
        return cls({0: Fraction(v)})

    @classmethod
    def monomial(cls, exp: int, v=1) -> "NPoly":
        return cls({exp: Fraction(v)})

    @classmethod
    def linear(cls, a) -> "NPoly":
        """N + a."""
        return cls({1: Fraction(1), 0: Fraction(a)})

    def _coerce(self, other) -> "NPoly":
        return other if isinstance(other, NPoly) else NPoly.const(other)

    def __add__(self, other) -> "NPoly":
        other = self._coerce(other)
        out = dict(self.c)
        for k, v in other.c.items():
            out[k] = out.get(k, 0) + v
        return NPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "NPoly":
        return NPoly({k: -v for k, v in self.c.items()})

    def __sub__(self, other) -> "NPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "NPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "NPoly":
        other = self._coerce(other)
        out: Dict[int, Fraction] = {}
        for a, x in self.c.items():
            for b, y in other.c.items():
                out[a + b] = out.get(a + b, 0) + x * y
        return NPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "NPoly":
        out = NPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, NPoly):
            other = NPoly.const(other)
        return self.c == other.c

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.c.items())))

    def coeff(self, k: int) -> Fraction:
        return self.c.get(k, Fraction(0))

    def shift(self, k: int) -> "NPoly":
        return NPoly({e + k: v for e, v in self.c.items()})

    def truncate_below(self, k: int) -> "NPoly":
        """Drop every power below N^k."""
        return NPoly({e: v for e, v in self.c.items() if e >= k})

    def is_zero(self) -> bool:
        return not self.c

    def __repr__(self) -> str:
        if not self.c:
            return "0"
        return " + ".join(f"({v})N^{k}" for k, v in sorted(self.c.items(), reverse=True))


# ---------------------------------------------------------------------------
# Characters
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _mn(lam: Partition, mu: Partition) -> int:
    if not mu:
        return 1 if not lam else 0
    r, rest = mu[0], mu[1:]
    n = len(lam)
    beta = [lam[i] + n - 1 - i for i in range(n)]
    occupied = set(beta)
    total = 0
    for b in beta:
        nb = b - r
        if nb < 0 or nb in occupied:
            continue
        sign = (-1) ** sum(1 for x in beta if nb < x < b)
        new_beta = sorted((nb if x == b else x for x in beta), reverse=True)
        m = len(new_beta)
        new_lam = tuple(x for x in (new_beta[i] - (m - 1 - i) for i in range(m)) if x > 0)
        total += sign * _mn(new_lam, rest)
    return total


def character(lam: Sequence[int], mu: Sequence[int]) -> int:
    """chi_lambda(C_mu) by Murnaghan-Nakayama on beta-sets."""
    lam, mu = _part(lam), _part(mu)
    if sum(lam) != sum(mu):
        raise ValueError("partitions of different sizes")
    return _mn(lam, mu)


def _elementary(values: Sequence[int], k: int) -> int:
    e = [1] + [0] * k
    for v in values:
        for j in range(k, 0, -1):
            e[j] += e[j - 1] * v
    return e[k]


def _complete(values: Sequence[int], k: int) -> int:
    h = [1] + [0] * k
    for v in values:
        for j in range(1, k + 1):
            h[j] += h[j - 1] * v
    return h[k]


def content_function(kind: str, k: int, nu: Sequence[int]) -> int:
    cont = contents(nu)
    if kind == "strict":
        return _elementary(cont, k)
    if kind == "weak":
        return _complete(cont, k)
    if kind == "ordinary":
        return sum(cont) ** k
    raise ValueError(f"unknown kind {kind!r}")


@lru_cache(maxsize=None)
def _double_hurwitz(kind: str, k: int, lam: Partition, mu: Partition) -> Fraction:
    L = sum(lam)
    total = sum(character(nu, mu) * content_function(kind, k, nu) * character(nu, lam) for nu in partitions(L))
    return Fraction(total, aut(lam) * aut(mu))


def double_hurwitz(kind: str, k: int, lam: Sequence[int], mu: Sequence[int]) -> Fraction:
    lam, mu = _part(lam), _part(mu)
    if sum(lam) != sum(mu):
        raise ValueError("partitions of different sizes")
    if k < 0:
        raise ValueError("k must be nonnegative")
    return _double_hurwitz(kind, k, lam, mu)


# ---------------------------------------------------------------------------
# Path oracle
# ---------------------------------------------------------------------------


def _cycle_type(perm: Sequence[int]) -> Partition:
    seen = [False] * len(perm)
    out = []
    for i in range(len(perm)):
        if not seen[i]:
            n = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                n += 1
            out.append(n)
    return tuple(sorted(out, reverse=True))


def _perms_of_type(lam: Partition) -> Iterator[Tuple[int, ...]]:
    L = sum(lam)
    for p in _all_perms(L):
        if _cycle_type(p) == lam:
            yield p


@lru_cache(maxsize=None)
def _all_perms(L: int) -> Tuple[Tuple[int, ...], ...]:
    from itertools import permutations
    return tuple(permutations(range(L)))


def _blocks_merge(blocks: Tuple[int, ...], a: int, b: int) -> Tuple[int, ...]:
    ba, bb = blocks[a], blocks[b]
    if ba == bb:
        return blocks
    lo, hi = min(ba, bb), max(ba, bb)
    return tuple(lo if x == hi else x for x in blocks)


def _orbit_labels(perm: Sequence[int]) -> Tuple[int, ...]:
    lab = [-1] * len(perm)
    for i in range(len(perm)):
        if lab[i] < 0:
            j = i
            while lab[j] < 0:
                lab[j] = i
                j = perm[j]
    return tuple(lab)


def monotone_path_oracle(kind: str, k: int, lam: Sequence[int], mu: Sequence[int], connected: bool = False,
                         max_size: int = 8) -> Fraction:
    """(1/L!) #{(alpha, tau_1..tau_k): alpha in C_lambda, tau_k...tau_1 alpha in C_mu} with the monotone
    constraint on max(tau_i); ``connected`` keeps only paths whose permutations act transitively."""
    lam, mu = _part(lam), _part(mu)
    L = sum(lam)
    if L != sum(mu):
        raise ValueError("partitions of different sizes")
    if L > max_size or k > 6:
        raise ValueError("path oracle limited to L <= 8 and k <= 6")
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    # state: (permutation, orbit labels or None, steps used, last max) -> multiplicity
    states: Dict[tuple, int] = {}
    for p in _perms_of_type(lam):
        key = (p, _orbit_labels(p) if connected else None, 0, 0)
        states[key] = states.get(key, 0) + 1
    transpositions = [(a, b) for b in range(L) for a in range(b)]
    done: Dict[tuple, int] = {}
    frontier = states
    while frontier:
        nxt: Dict[tuple, int] = {}
        for (p, blocks, used, last), cnt in frontier.items():
            if used == k:
                done[(p, blocks)] = done.get((p, blocks), 0) + cnt
                continue
            for a, b in transpositions:
                if kind == "strict" and b + 1 <= last:
                    continue
                if kind == "weak" and b + 1 < last:
                    continue
                q = list(p)
                # left multiplication by (a b): relabel the images a <-> b
                for i in range(L):
                    if q[i] == a:
                        q[i] = b
                    elif q[i] == b:
                        q[i] = a
                nb = _blocks_merge(blocks, a, b) if connected else None
                key = (tuple(q), nb, used + 1, b + 1 if kind != "ordinary" else 0)
                nxt[key] = nxt.get(key, 0) + cnt
        frontier = nxt
    total = 0
    for (p, blocks), cnt in done.items():
        if _cycle_type(p) != mu:
            continue
        if connected and len(set(blocks)) != 1:
            continue
        total += cnt
    return Fraction(total, math.factorial(L))


# ---------------------------------------------------------------------------
# GUE
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _gue_moment(mu: Partition) -> NPoly:
    L = sum(mu)
    if L % 2:
        return NPoly()
    if L > 14:
        raise ValueError("pairing enumeration capped at 14 half-edges")
    phi, phi_inv, _ = _kernel_py.face_layout(mu)
    hist: Dict[int, int] = {}
    for alpha in _kernel_py.iter_alphas(L):
        seen = [False] * L
        v = 0
        for h in range(L):
            if not seen[h]:
                v += 1
                x = h
                while not seen[x]:
                    seen[x] = True
                    x = alpha[phi_inv[x]]
        hist[v] = hist.get(v, 0) + 1
    return NPoly({v - L // 2: Fraction(c) for v, c in hist.items()})


def gue_moment(mu: Sequence[int], normalized_trace: bool = False) -> NPoly:
    """<prod_i Tr M^mu_i> for the GUE, disconnected gluings included.

    With ``normalized_trace`` every trace carries a factor 1/N."""
    mu = tuple(int(x) for x in mu)
    if any(x <= 0 for x in mu):
        raise ValueError("trace powers must be positive")
    if not mu:
        return NPoly.const(1)
    out = _gue_moment(mu)
    return out.shift(-len(mu)) if normalized_trace else out


def _set_partitions(items: List[int]) -> Iterator[List[List[int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for sub in _set_partitions(rest):
        yield [[first]] + sub
        for i in range(len(sub)):
            yield sub[:i] + [[first] + sub[i]] + sub[i + 1:]


def gue_cumulant(mu: Sequence[int]) -> NPoly:
    """kappa_n(Tr M^mu_1, ..., Tr M^mu_n) by Moebius inversion over set partitions of the traces."""
    mu = tuple(int(x) for x in mu)
    total = NPoly()
    for pi in _set_partitions(list(range(len(mu)))):
        term = NPoly.const((-1) ** (len(pi) - 1) * math.factorial(len(pi) - 1))
        for block in pi:
            term = term * gue_moment(tuple(mu[i] for i in block))
        total = total + term
    return total


def _multiset_product(a: Dict[Partition, NPoly], b: Dict[Partition, NPoly], max_size: int) -> Dict[Partition, NPoly]:
    out: Dict[Partition, NPoly] = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            if sum(ka) + sum(kb) > max_size:
                continue
            key = tuple(sorted(ka + kb, reverse=True))
            out[key] = out.get(key, NPoly()) + va * vb
    return out


@lru_cache(maxsize=None)
def _connected_series(max_size: int) -> Dict[Partition, NPoly]:
    """log of sum_mu N^(|mu|/2) sum_k N^-k [E_k]_{mu,(2..2)} p_mu, as a series in the p's."""
    disc: Dict[Partition, NPoly] = {}
    for L in range(2, max_size + 1, 2):
        two = (2,) * (L // 2)
        for mu in partitions(L):
            poly = NPoly()
            for k in range(L):
                v = double_hurwitz("strict", k, mu, two)
                if v:
                    poly = poly + NPoly.monomial(L // 2 - k, v)
            if not poly.is_zero():
                disc[mu] = poly
    # log(1 + X) = sum_s (-1)^(s+1) X^s / s
    out: Dict[Partition, NPoly] = {}
    power = dict(disc)
    s = 1
    while power:
        for key, val in power.items():
            out[key] = out.get(key, NPoly()) + val * Fraction((-1) ** (s + 1), s)
        power = _multiset_product(power, disc, max_size)
        s += 1
    return {k: v for k, v in out.items() if not v.is_zero()}


def connected_2orbifold(g: int, mu: Sequence[int]) -> Fraction:
    """[E^{o,g}]_{mu,(2,...,2)}: connected strictly monotone 2-orbifold number of genus g."""
    mu = _part(mu)
    L = sum(mu)
    if L % 2:
        raise ValueError("|mu| must be even")
    series = _connected_series(max(L, 2))
    return series.get(mu, NPoly()).coeff(2 - 2 * g - len(mu))


def fully_simple_gue(lam: Sequence[int]) -> NPoly:
    """<P_lambda(M)> for the GUE: prod_i delta_{lambda_i,2}/N."""
    lam = _part(lam)
    if all(x == 2 for x in lam):
        return NPoly.monomial(-len(lam))
    return NPoly()


# ---------------------------------------------------------------------------
# Transition identities
# ---------------------------------------------------------------------------


def _content_denominator_lcm(L: int) -> Dict[int, int]:
    """Largest multiplicity of each content over partitions of L."""
    mult: Dict[int, int] = {}
    for nu in partitions(L):
        cnt: Dict[int, int] = {}
        for c in contents(nu):
            cnt[c] = cnt.get(c, 0) + 1
        for c, m in cnt.items():
            mult[c] = max(mult.get(c, 0), m)
    return mult


def _wein_form(lam: Partition) -> bool:
    """<P_lambda> = sum_mu G~(C_mu, phi) <p_mu>, cleared of the common content denominator."""
    L = sum(lam)
    full = _content_denominator_lcm(L)
    D = NPoly.const(1)
    for c, m in full.items():
        D = D * NPoly.linear(c) ** m
    rhs = NPoly()
    for mu in partitions(L):
        g_tilde = NPoly()
        for nu in partitions(L):
            chi = character(nu, mu) * character(nu, lam)
            if not chi:
                continue
            cnt: Dict[int, int] = {}
            for c in contents(nu):
                cnt[c] = cnt.get(c, 0) + 1
            rest = NPoly.const(1)
            for c, m in full.items():
                rest = rest * NPoly.linear(c) ** (m - cnt.get(c, 0))
            g_tilde = g_tilde + rest * Fraction(class_size(mu) * chi, math.factorial(L))
        rhs = rhs + g_tilde * gue_moment(mu)
    return rhs == D * fully_simple_gue(lam)


def _weak_form(lam: Partition, order: int) -> bool:
    """<P_lambda>/|Aut lambda| = sum_mu N^-|mu| sum_k (-N)^-k [H_k]_{lambda,mu} <p_mu>, to relative order."""
    L = sum(lam)
    rhs = NPoly()
    for mu in partitions(L):
        moment = gue_moment(mu)
        if moment.is_zero():
            continue
        series = NPoly()
        for k in range(order + 1):
            v = double_hurwitz("weak", k, lam, mu)
            if v:
                series = series + NPoly.monomial(-L - k, v * (-1) ** k)
        rhs = rhs + series * moment
    # deg <p_mu> <= l(mu) <= L, so the dropped k > order terms sit below N^-order
    cutoff = -order
    lhs = fully_simple_gue(lam) * Fraction(1, aut(lam))
    return rhs.truncate_below(cutoff) == lhs.truncate_below(cutoff)


def _strict_form(mu: Partition) -> bool:
    """<p_mu>/|Aut mu| = sum_lambda N^|lambda| sum_k N^-k [E_k]_{mu,lambda} <P_lambda>, exactly."""
    L = sum(mu)
    rhs = NPoly()
    for lam in partitions(L):
        p = fully_simple_gue(lam)
        if p.is_zero():
            continue
        for k in range(L):
            v = double_hurwitz("strict", k, mu, lam)
            if v:
                rhs = rhs + p * NPoly.monomial(L - k, v)
    return rhs == gue_moment(mu) * Fraction(1, aut(mu))


def weingarten_transition_check(mu: Sequence[int], form: str = "transi", order: int | None = None) -> bool:
    """Both sides of the ordinary/fully simple transition for the GUE, as identities in N.

    ``wein``: the Weingarten form, an identity of rational functions.
    ``transi``: the strictly monotone direction exactly and the weakly monotone
    direction as a 1/N series to ``order`` (default |mu| + 4)."""
    mu = _part(mu)
    if sum(mu) > 8:
        raise ValueError("checks are limited to |mu| <= 8")
    if form == "wein":
        return _wein_form(mu)
    if form == "transi":
        return _strict_form(mu) and _weak_form(mu, order if order is not None else sum(mu) + 4)
    raise ValueError(f"unknown form {form!r}")


def transition_inverse_check(L: int, order: int = 8) -> bool:
    """The weakly and strictly monotone transition operators are mutually inverse as 1/N series.

    In the class basis the operator of r(J) has matrix |Aut lambda| R_{mu,lambda}; the content
    functions prod 1/(N + c) and prod (N + c) multiply to 1."""
    parts = partitions(L)
    for lam in parts:
        for mu in parts:
            acc = NPoly()
            for nu in parts:
                weak = NPoly()
                for k in range(order + 1):
                    v = double_hurwitz("weak", k, nu, lam)
                    if v:
                        weak = weak + NPoly.monomial(-L - k, v * (-1) ** k)
                strict = NPoly()
                for k in range(L):
                    v = double_hurwitz("strict", k, mu, nu)
                    if v:
                        strict = strict + NPoly.monomial(L - k, v)
                acc = acc + weak * strict * (aut(lam) * aut(nu))
            target = NPoly.const(1 if lam == mu else 0)
            # weak terms beyond k = order only reach powers below N^-order
            if acc.truncate_below(-order) != target:
                return False
    return True
