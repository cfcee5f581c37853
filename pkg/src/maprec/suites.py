"""Verification suites shared by the command line and the acceptance test.

Each suite returns a :class:`SuiteResult` whose checks carry a short label,
a pass flag and a residual or detail string.  Negative controls are checks
that pass when the broken variant of an identity fails.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Sequence, Tuple

from . import freeprob, hurwitz
from .exactnum import frac_to_str
from .extract import (
    CountTable,
    bernardi_fusy,
    cylinder_fully_simple,
    cylinder_mixed,
    cylinder_ordinary,
    cylinder_simple,
    disk_coeffs,
    fully_simple_coeffs,
    fully_simple_disk_coeffs,
    genus1_closed,
    ordinary_coeffs,
    remark_l2_check,
    symbolic_curves,
)
from .maps_oracle import quadrangulation_count
from .spectral import build_quadrangulation_curve, exchange_curve
from .tr_engine import dilaton_check, homogeneity_check, tr_amplitude

__all__ = ["Check", "SuiteResult", "SUITES", "run_suite", "oracle_instances", "tr_table"]


@dataclass
class Check:
    label: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"label": self.label, "passed": self.passed, "detail": self.detail}


@dataclass
class SuiteResult:
    suite: str
    checks: List[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def add(self, label: str, passed: bool, detail: Any = "") -> None:
        self.checks.append(Check(label, bool(passed), str(detail)))

    def to_json(self) -> dict:
        return {"suite": self.suite, "passed": self.passed, "checks": [c.to_json() for c in self.checks]}


def _series_str(vals: Sequence[Fraction]) -> str:
    return "[" + ", ".join(frac_to_str(v) for v in vals) + "]"


# ---------------------------------------------------------------------------
# TR tables by (genus, class, lengths)
# ---------------------------------------------------------------------------


def tr_table(genus: int, cls: str, lengths: Tuple[int, ...], q_max: int) -> CountTable | None:
    """The TR-side table for one oracle instance, or None when no TR table is defined."""
    ordc, exc = symbolic_curves()
    n = len(lengths)
    if genus == 0 and n == 1:
        if cls == "ordinary":
            return disk_coeffs(lengths[0], q_max)
        return fully_simple_disk_coeffs(lengths[0], q_max)
    if genus == 0 and n == 2:
        fn = {"ordinary": cylinder_ordinary, "mixed": cylinder_mixed,
              "simple": cylinder_simple, "fully-simple": cylinder_fully_simple}[cls]
        return fn(lengths[0], lengths[1], q_max)
    if n == 1:
        if cls == "ordinary":
            return ordinary_coeffs(tr_amplitude(ordc, genus, 1), lengths, q_max, ordc)
        return fully_simple_coeffs(tr_amplitude(exc, genus, 1), lengths, q_max, exc)
    if cls == "ordinary":
        return ordinary_coeffs(tr_amplitude(ordc, genus, n), lengths, q_max, ordc)
    if cls == "fully-simple":
        return fully_simple_coeffs(tr_amplitude(exc, genus, n), lengths, q_max, exc)
    return None


def oracle_instances(h_max: int) -> List[Tuple[int, str, Tuple[int, ...], int]]:
    """(genus, class, lengths, Q_max) with lengths + 4 Q <= h_max, for g <= 1 and n <= 2."""
    out = []
    for genus in (0, 1):
        for n in (1, 2):
            classes = {1: ("ordinary", "simple", "fully-simple"),
                       2: ("ordinary", "mixed", "simple", "fully-simple") if genus == 0 else ("ordinary", "fully-simple")}[n]
            for lengths in itertools.product(range(1, h_max + 1), repeat=n):
                L = sum(lengths)
                if L > h_max or L % 2:
                    continue
                q_max = (h_max - L) // 4
                for cls in classes:
                    out.append((genus, cls, tuple(lengths), q_max))
    return out


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------


def suite_oracle_vs_tr(h_max: int = 14, **_: Any) -> SuiteResult:
    res = SuiteResult("oracle-vs-tr")
    for genus, cls, lengths, q_max in oracle_instances(h_max):
        table = tr_table(genus, cls, lengths, q_max)
        if table is None:
            continue
        tr_vals = table.values()
        or_vals = [quadrangulation_count(genus, lengths, q, cls, cap=h_max) for q in range(q_max + 1)]
        ok = all(Fraction(a) == b for a, b in zip(or_vals, tr_vals))
        res.add(f"g={genus} {cls} {lengths}", ok, "" if ok else f"oracle {or_vals} tr {_series_str(tr_vals)}")
    return res


def suite_inversion(q_max: int = 8, order: int = 8, **_: Any) -> SuiteResult:
    res = SuiteResult("inversion")
    r = freeprob.inversion_residual(q_max, order)
    res.add(f"x = X(W(x)) to u^{order}, Q <= {q_max}", r.is_zero(), r)
    res.add("Gaussian case Q = 0", freeprob.check_inversion(0, order))
    res.add("control: without the 1/x, 1/w terms the identity fails", not freeprob.check_inversion(q_max, order, False))
    return res


def suite_cylinder(q_max: int = 8, order: int = 6, **_: Any) -> SuiteResult:
    res = SuiteResult("cylinder")
    for name, r in freeprob.cylinder_residuals(q_max, order).items():
        res.add(name, r.is_zero(), r)
    res.add("pure B identity at t = 0", freeprob.check_cylinder(0, order))
    res.add("control: omitting the double-pole shift fails", not freeprob.check_cylinder(q_max, order, omit_shift=True))
    return res


def suite_pants(q_max: int = 8, **_: Any) -> SuiteResult:
    res = SuiteResult("pants")
    r = freeprob.pants_residual()
    res.add("omega_{0,3} + omega^vee_{0,3} = sum d[B B/(dx dy)] over K", r.is_zero(), r)
    for p in (Fraction(2), Fraction(3, 7)):
        res.add(f"numeric curve p = {p}", freeprob.check_pants(p))
    total, _ = freeprob.pants_residue_sum(Fraction(2), Fraction(3), Fraction(-5, 7))
    res.add("residue sum of B B/(dx dy) vanishes", total == 0, total)
    res.add(f"H_(2,2,2) equals Bernardi-Fusy, Q <= {q_max}", freeprob.pants_fs_vs_bernardi_fusy(q_max))
    res.add("control: dropping omega^vee_{0,3} fails", not freeprob.pants_residual(drop_exchanged=True).is_zero())
    return res


def suite_dilaton(gn_max: int = 4, **_: Any) -> SuiteResult:
    res = SuiteResult("dilaton")
    cur = build_quadrangulation_curve(Fraction(2))
    curves = (cur, exchange_curve(cur))
    for cv in curves:
        for chi in range(1, gn_max + 1):
            for g in range(0, chi // 2 + 2):
                n = chi + 2 - 2 * g
                if n < 1:
                    continue
                ok, residual = dilaton_check(cv, g, n)
                res.add(f"{cv.mode} dilaton (g,n)=({g},{n})", ok, "" if ok else residual)
                amp = tr_amplitude(cv, g, n)
                res.add(f"{cv.mode} symmetry (g,n)=({g},{n})", amp.is_symmetric() and amp.pole_orders_ok())
                if chi <= 3:
                    res.add(f"{cv.mode} homogeneity lambda=2 (g,n)=({g},{n})", homogeneity_check(cv, g, n, 2))
    # control: a perturbed amplitude breaks the dilaton equation
    probe = build_quadrangulation_curve(Fraction(5, 2))
    tr_amplitude(probe, 1, 2)
    amp = tr_amplitude(probe, 1, 1)
    key = next(iter(amp.entries))
    amp.entries[key] += 1
    try:
        res.add("control: perturbed omega_{1,1} fails the dilaton equation", not dilaton_check(probe, 1, 1)[0])
    finally:
        amp.entries[key] -= 1
    return res


def suite_transi(order: int = 6, **_: Any) -> SuiteResult:
    res = SuiteResult("transi")
    for size in range(1, order + 1):
        for mu in hurwitz.partitions(size):
            for form in ("wein", "transi"):
                res.add(f"{form} mu={mu}", hurwitz.weingarten_transition_check(mu, form))
        res.add(f"inverse transition |mu|={size}", hurwitz.transition_inverse_check(size))
    for m in range(1, 6):
        v = hurwitz.connected_2orbifold(0, (2 * m,)) * hurwitz.aut((2 * m,))
        res.add(f"planar (2m)=({2 * m}) gives Catalan({m})", v == freeprob.catalan(m), v)
    v = hurwitz.connected_2orbifold(1, (4,)) * hurwitz.aut((4,))
    res.add("genus one, mu=(4), value 1", v == 1, v)
    return res


def suite_genus1(q_max: int = 8, order: int = 4, **_: Any) -> SuiteResult:
    res = SuiteResult("genus1")
    ordc, exc = symbolic_curves()
    for m in range(0, order + 1):
        tr = ordinary_coeffs(tr_amplitude(ordc, 1, 1), (2 * m + 2,), q_max, ordc).values()
        cf = genus1_closed(m, q_max, "ordinary")
        ok = all(Fraction(cf.coeff(q)) == tr[q] for q in range(q_max + 1))
        res.add(f"ordinary F^[1]_{2 * m + 2}", ok)
    for m in range(1, order + 1):
        tr = fully_simple_coeffs(tr_amplitude(exc, 1, 1), (2 * m,), q_max, exc).values()
        cf = genus1_closed(m, q_max, "fully-simple")
        ok = all(Fraction(cf.coeff(q)) == tr[q] for q in range(q_max + 1))
        res.add(f"fully simple H^[1]_{2 * m}", ok)
    return res


def suite_bernardi_fusy(q_max: int = 8, order: int = 8, **_: Any) -> SuiteResult:
    res = SuiteResult("bernardi-fusy")
    _, exc = symbolic_curves()
    evens = tuple(range(2, order + 1, 2))
    for k in evens:
        vals = fully_simple_disk_coeffs(k, q_max).values()
        res.add(f"disk {k}", all(vals[q] == bernardi_fusy(q, (k,)) for q in range(q_max + 1)))
    for ks in itertools.combinations_with_replacement(evens, 2):
        vals = cylinder_fully_simple(*ks, q_max).values()
        res.add(f"cylinder {ks}", all(vals[q] == bernardi_fusy(q, ks) for q in range(q_max + 1)))
    amp = tr_amplitude(exc, 0, 3)
    for ks in itertools.combinations_with_replacement(evens, 3):
        vals = fully_simple_coeffs(amp, ks, q_max, exc).values()
        ok = all(vals[q] == bernardi_fusy(q, ks) for q in range(q_max + 1))
        res.add(f"pants {ks}", ok, "" if ok else _series_str(vals))
    return res


def suite_tuttefs(q_max: int = 8, order: int = 7, **_: Any) -> SuiteResult:
    res = SuiteResult("tuttefs")
    for l in range(1, order + 1):
        r = freeprob.tutte_fully_simple_residual(l, q_max)
        res.add(f"residual l={l}", not any(r), _series_str(r))
    pair = freeprob.series_pair(q_max, order + 3)
    H = dict(pair.H)
    H[2] = [H[2][0] + 1] + H[2][1:]
    res.add("control: perturbed H_2 gives a nonzero residual", any(freeprob.tutte_fully_simple_residual(3, q_max, H=H)))
    return res


def suite_remark_l2(q_max: int = 8, **_: Any) -> SuiteResult:
    res = SuiteResult("remark-l2")
    res.add("F^[1]_2 = H_(1,1) + H^[1]_2", remark_l2_check(q_max))
    return res


SUITES: Dict[str, Callable[..., SuiteResult]] = {
    "inversion": suite_inversion,
    "cylinder": suite_cylinder,
    "pants": suite_pants,
    "dilaton": suite_dilaton,
    "transi": suite_transi,
    "genus1": suite_genus1,
    "bernardi-fusy": suite_bernardi_fusy,
    "tuttefs": suite_tuttefs,
    "oracle-vs-tr": suite_oracle_vs_tr,
    "remark-l2": suite_remark_l2,
}


def run_suite(name: str, **kwargs: Any) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(name)
    kwargs = {k: v for k, v in kwargs.items() if v is not None}
    return SUITES[name](**kwargs)
