from __future__ import annotations

from fractions import Fraction

import pytest

from maprec.exactnum import KElement, ps_compose, TruncatedSeries
from maprec.extract import ordinary_coeffs
from maprec.spectral import build_quadrangulation_curve, exchange_curve
from maprec.tr_engine import (
    dilaton_check,
    homogeneity_check,
    kernel_jet,
    kernel_two_route_check,
    tr_amplitude,
)

F = Fraction


def _curves(p=F(2)):
    cur = build_quadrangulation_curve(p)
    return cur, exchange_curve(cur)


def tori1_over_dx(z, c, t):
    """Printed closed form of omega_{1,1}/dx on the ordinary curve."""
    u = t * c ** 4
    return z ** 3 * (u * z ** 4 + z ** 2 * (1 - 5 * u) + u) / (c * (z * z - 1) ** 5 * (1 - 3 * u) ** 2)


def tori2_over_dw(z, c, t):
    """Printed closed form of omega^vee_{1,1}/dw on the exchanged curve."""
    u = t * c ** 4
    num = 3 * t * t * c ** 9 * z ** 5 * ((3 * u - 2) * z ** 4 + 3 * u * (9 * u - 1) * z ** 2 - 27 * t ** 3 * c ** 12)
    return num / ((3 * u - z * z) ** 5 * (1 - 3 * u) ** 2)


@pytest.mark.parametrize("p", [F(2), F(3, 7)])
def test_omega11_matches_closed_forms_numeric(p):
    cur, ex = _curves(p)
    w11 = tr_amplitude(cur, 1, 1)
    v11 = tr_amplitude(ex, 1, 1)
    for z in (F(3), F(-5, 2), F(7, 11)):
        assert w11.evaluate([z]) == tori1_over_dx(z, cur.c, cur.t) * cur.x_prime()(z)
        assert v11.evaluate([z]) == tori2_over_dw(z, cur.c, cur.t) * ex.x_prime()(z)


def test_omega11_matches_closed_forms_symbolic():
    cur = build_quadrangulation_curve()
    ex = exchange_curve(cur)
    z = KElement(F(5, 3))
    assert tr_amplitude(cur, 1, 1).evaluate([z]) == tori1_over_dx(z, cur.c, cur.t) * cur.x_prime()(z)
    assert tr_amplitude(ex, 1, 1).evaluate([z]) == tori2_over_dw(z, cur.c, cur.t) * ex.x_prime()(z)


@pytest.mark.parametrize("which", [0, 1])
def test_omega03_local_formula(which):
    """omega_{0,3} = -sum_a 1/(2 x2(a) y1(a)) prod dz_i/(z_i - a)^2."""
    cur = _curves()[which]
    amp = tr_amplitude(cur, 0, 3)
    expected = {}
    for i in range(len(cur.branch_points)):
        x2 = cur.x_jet(i, 3).coeff(2)
        y1 = cur.y_jet(i, 3).coeff(1)
        expected[((i, 2),) * 3] = -1 / (2 * x2 * y1)
    assert set(amp.entries) == set(expected)
    assert all(amp[k] == v for k, v in expected.items())


def test_gaussian_specialization_genus_one_counts():
    """At c = 1 (t = 0) the curve is the GUE curve; genus-1 one-face gluings: 0, 1, 10, 70."""
    cur = build_quadrangulation_curve(F(1))
    assert cur.t == 0
    amp = tr_amplitude(cur, 1, 1)
    got = [ordinary_coeffs(amp, (l,), 0, cur).values()[0] for l in (2, 4, 6, 8)]
    assert got == [0, 1, 10, 70]


@pytest.mark.parametrize("which", [0, 1])
@pytest.mark.parametrize("gn", [(0, 3), (1, 1), (0, 4), (1, 2), (0, 5), (1, 3), (2, 1)])
def test_dilaton(which, gn):
    cur = _curves()[which]
    ok, residual = dilaton_check(cur, *gn)
    assert ok and residual == {}


def test_dilaton_symbolic_small():
    cur = build_quadrangulation_curve()
    for cv in (cur, exchange_curve(cur)):
        assert dilaton_check(cv, 1, 1)[0]
        assert dilaton_check(cv, 0, 3)[0]


def test_dilaton_detects_tampering():
    cur = build_quadrangulation_curve(F(5, 2))
    tr_amplitude(cur, 1, 2)
    amp = tr_amplitude(cur, 1, 1)
    key = next(iter(amp.entries))
    amp.entries[key] += 1
    try:
        assert not dilaton_check(cur, 1, 1)[0]
    finally:
        amp.entries[key] -= 1
    assert dilaton_check(cur, 1, 1)[0]


@pytest.mark.parametrize("which", [0, 1])
@pytest.mark.parametrize("gn", [(0, 3), (1, 1), (0, 4), (1, 2)])
def test_homogeneity(which, gn):
    assert homogeneity_check(_curves(F(3))[which], *gn, lam=2)


@pytest.mark.parametrize("which", [0, 1])
@pytest.mark.parametrize("gn", [(0, 3), (1, 1), (0, 4), (1, 2), (2, 1), (0, 5), (1, 3)])
def test_symmetry_and_pole_orders(which, gn):
    amp = tr_amplitude(_curves()[which], *gn)
    assert amp.pole_orders_ok()
    assert amp.is_symmetric()
    assert amp.max_pole_order() <= 6 * gn[0] - 2 + 2 * gn[1]


def test_quadrangulation_z_symmetry():
    """z -> -z exchanges the branch points; coefficients pick up (-1)^(sum k)."""
    cur = _curves()[0]
    amp = tr_amplitude(cur, 1, 2)
    for key, v in amp.entries.items():
        flipped = tuple((1 - i, k) for i, k in key)
        sign = (-1) ** sum(k for _, k in key)
        assert amp[flipped] == sign * v


@pytest.mark.parametrize("which", [0, 1])
def test_kernel_two_routes(which):
    cur = _curves(F(3, 5))[which]
    for i in range(2):
        assert kernel_two_route_check(cur, i, 6)


def test_kernel_two_routes_symbolic():
    cur = build_quadrangulation_curve()
    assert kernel_two_route_check(cur, 0, 4)
    assert kernel_two_route_check(exchange_curve(cur), 0, 4)


@pytest.mark.parametrize("which", [0, 1])
def test_kernel_has_simple_pole(which):
    cur = _curves()[which]
    # (zeta^m - sigma^m) vanishes to order m, the denominator to order 2
    assert kernel_jet(cur, 0, 1, 6).valuation() == -1
    for m in (2, 3, 4):
        assert kernel_jet(cur, 0, m, 6).valuation() >= m - 2


def test_deck_involution_numeric():
    for cur in _curves(F(7, 3)):
        for i in range(2):
            sig = cur.deck_jet(i, 7)
            assert ps_compose(sig, sig) == TruncatedSeries([0, 1], 7, 0, "zeta")
