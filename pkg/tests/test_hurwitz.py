from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maprec import hurwitz
from maprec.hurwitz import (
    NPoly,
    aut,
    character,
    class_size,
    connected_2orbifold,
    double_hurwitz,
    gue_cumulant,
    gue_moment,
    hook_dimension,
    monotone_path_oracle,
    partitions,
    transition_inverse_check,
    weingarten_transition_check,
)
from maprec.maps_oracle import quadrangulation_count


def catalan(m):
    return math.comb(2 * m, m) // (m + 1)


def test_partition_counts():
    assert [len(partitions(n)) for n in range(1, 11)] == [1, 2, 3, 5, 7, 11, 15, 22, 30, 42]


@pytest.mark.parametrize("L", range(1, 9))
def test_class_sizes_sum_to_factorial(L):
    assert sum(class_size(lam) for lam in partitions(L)) == math.factorial(L)
    assert all(class_size(lam) * aut(lam) == math.factorial(L) for lam in partitions(L))


@pytest.mark.parametrize("L", range(1, 9))
def test_dimension_and_trivial_character(L):
    for lam in partitions(L):
        assert character(lam, (1,) * L) == hook_dimension(lam)
        assert character((L,), lam) == 1
    assert sum(hook_dimension(lam) ** 2 for lam in partitions(L)) == math.factorial(L)


def test_small_character_values():
    assert character((2, 1), (3,)) == -1
    assert character((2, 1), (2, 1)) == 0
    assert character((1, 1, 1), (2, 1)) == -1
    with pytest.raises(ValueError):
        character((2,), (1,))


@pytest.mark.parametrize("L", range(1, 9))
def test_character_orthogonality(L):
    parts = partitions(L)
    for a in parts:
        for b in parts:
            s = sum(class_size(mu) * character(a, mu) * character(b, mu) for mu in parts)
            assert s == (math.factorial(L) if a == b else 0)


def test_double_hurwitz_small_values():
    assert double_hurwitz("strict", 1, (2,), (1, 1)) == Fraction(1, 2)
    for L in range(1, 6):
        for lam in partitions(L):
            for mu in partitions(L):
                assert double_hurwitz("strict", 0, lam, mu) == (Fraction(1, aut(lam)) if lam == mu else 0)
    with pytest.raises(ValueError):
        double_hurwitz("strict", 1, (2,), (1,))


@pytest.mark.parametrize("L", range(1, 6))
@pytest.mark.parametrize("kind", ["strict", "weak", "ordinary"])
def test_character_formula_equals_path_oracle(kind, L):
    for lam in partitions(L):
        for mu in partitions(L):
            for k in range(4):
                assert double_hurwitz(kind, k, lam, mu) == monotone_path_oracle(kind, k, lam, mu)


def test_weak_and_strict_coincide_at_one_step():
    for lam in partitions(5):
        for mu in partitions(5):
            assert monotone_path_oracle("weak", 1, lam, mu) == monotone_path_oracle("strict", 1, lam, mu)


def test_path_oracle_limits():
    with pytest.raises(ValueError):
        monotone_path_oracle("strict", 1, (9,), (9,))
    with pytest.raises(ValueError):
        monotone_path_oracle("bogus", 1, (2,), (2,))


def test_npoly_arithmetic():
    n = NPoly.monomial(1)
    assert (n + 1) * (n - 1) == n * n - 1
    assert NPoly.linear(3) ** 2 == NPoly({2: 1, 1: 6, 0: 9})
    assert (NPoly.monomial(-2, 5) + 0).coeff(-2) == 5
    assert NPoly({3: 1, -1: 2}).truncate_below(0) == NPoly.monomial(3)


def test_gue_moments():
    assert gue_moment((2,), normalized_trace=True) == 1
    assert gue_moment((4,), normalized_trace=True) == NPoly({0: 2, -2: 1})
    assert gue_moment((2,)) == NPoly.monomial(1)
    assert gue_moment((1,)).is_zero() and gue_moment((3, 2)).is_zero()
    assert gue_moment((2, 2)) == NPoly({2: 1, 0: 2})


@pytest.mark.parametrize("mu", [(2,), (4,), (6,), (8,), (2, 2), (4, 2), (3, 3), (3, 1), (5, 1), (4, 4), (2, 2, 2),
                                (6, 2), (3, 1, 2), (1, 1, 1, 1)])
def test_cumulants_count_connected_maps(mu):
    """The genus-g part of the GUE cumulant is the number of connected genus-g gluings."""
    kappa = gue_cumulant(mu)
    for g in range(3):
        assert kappa.coeff(2 - 2 * g - len(mu)) == quadrangulation_count(g, mu, 0)


@pytest.mark.parametrize("mu", [(2,), (4,), (2, 2), (6,), (4, 2), (3, 3), (3, 1), (2, 2, 2), (5, 1), (8,), (4, 4)])
def test_connected_2orbifold_three_routes(mu):
    L = sum(mu)
    for g in range(3):
        k = 2 * g - 2 + len(mu) + L // 2
        value = connected_2orbifold(g, mu)
        assert value == gue_cumulant(mu).coeff(2 - 2 * g - len(mu)) / aut(mu)
        if 0 <= k <= 6:
            assert value == monotone_path_oracle("strict", k, (2,) * (L // 2), mu, connected=True)


def test_connected_2orbifold_catalan():
    assert [aut((2 * m,)) * connected_2orbifold(0, (2 * m,)) for m in range(1, 6)] == [catalan(m) for m in range(1, 6)]
    assert aut((4,)) * connected_2orbifold(1, (4,)) == 1
    assert connected_2orbifold(0, (2,)) * aut((2,)) == 1
    with pytest.raises(ValueError):
        connected_2orbifold(0, (3,))


@pytest.mark.parametrize("L", range(1, 7))
def test_weingarten_forms(L):
    for mu in partitions(L):
        assert weingarten_transition_check(mu, "wein")
        assert weingarten_transition_check(mu, "transi")


def test_weingarten_detects_tampering(monkeypatch):
    real = hurwitz.double_hurwitz

    def skewed(kind, k, lam, mu):
        v = real(kind, k, lam, mu)
        return v + 1 if (kind, k) == ("strict", 1) else v

    monkeypatch.setattr(hurwitz, "double_hurwitz", skewed)
    assert not weingarten_transition_check((2, 2), "transi")
    assert not transition_inverse_check(3)
    monkeypatch.setattr(hurwitz, "fully_simple_gue", lambda lam: NPoly.monomial(-len(lam), 2))
    assert not weingarten_transition_check((2, 2), "wein")


@pytest.mark.parametrize("L", range(1, 7))
def test_transition_operators_inverse(L):
    assert transition_inverse_check(L)


def test_form_validation():
    with pytest.raises(ValueError):
        weingarten_transition_check((2,), "nope")
    with pytest.raises(ValueError):
        weingarten_transition_check((9,), "wein")


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 7).flatmap(lambda L: st.tuples(st.sampled_from(partitions(L)), st.sampled_from(partitions(L)),
                                                      st.integers(0, 6))))
def test_hurwitz_symmetry_and_integrality(data):
    lam, mu, k = data
    for kind in ("strict", "weak", "ordinary"):
        v = double_hurwitz(kind, k, lam, mu)
        assert v == double_hurwitz(kind, k, mu, lam)
        assert v >= 0
        # |Aut lambda| R_{mu,lambda} counts paths to a fixed permutation
        assert (aut(lam) * v).denominator == 1
