from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maprec import _kernel_py
from maprec.extract import (
    cylinder_fully_simple,
    cylinder_mixed,
    cylinder_ordinary,
    cylinder_simple,
    disk_coeffs,
    fully_simple_disk_coeffs,
    ordinary_coeffs,
)
from maprec.maps_oracle import (
    KERNEL_BACKEND,
    CapExceeded,
    CombMap,
    CylinderDecomposition,
    EnumSpec,
    _impl,
    classify,
    cylinder_compose,
    cylinder_decompose,
    disk_compose,
    disk_decompose,
    dump_witness,
    enumerate_maps,
    iter_maps,
    quadrangulation_count,
)
from maprec.spectral import build_quadrangulation_curve
from maprec.tr_engine import tr_amplitude


def test_documented_counts():
    assert quadrangulation_count(0, (2,), 1) == 2
    assert quadrangulation_count(1, (2,), 1) == 1
    assert quadrangulation_count(0, (1,), 0) == 0
    assert quadrangulation_count(0, (1, 1), 1, "fully-simple") == 1
    assert quadrangulation_count(0, (4,), 1, "simple") == 1
    assert quadrangulation_count(0, (2, 2), 2, "fully-simple") == 6
    assert quadrangulation_count(1, (2,), 2) == 15


def test_single_vertex_convention():
    assert enumerate_maps(EnumSpec(0, (0,), (), "fully-simple")) == 1
    assert enumerate_maps(EnumSpec(1, (0,))) == 0
    with pytest.raises(ValueError):
        EnumSpec(0, (0,), (4,))


def test_cap_refusal_reports_requirement():
    with pytest.raises(CapExceeded) as err:
        enumerate_maps(EnumSpec(0, (2,), (4,) * 5, cap=20))
    assert err.value.required == 22


def test_spec_validation():
    with pytest.raises(ValueError):
        EnumSpec(0, (2,), boundary_class="weird")
    with pytest.raises(ValueError):
        EnumSpec(0, (2,), connected=False)
    with pytest.raises(ValueError):
        EnumSpec(0, (2,), boundary_class="mixed")


@pytest.mark.skipif(KERNEL_BACKEND == "python", reason="compiled kernel not built")
@pytest.mark.parametrize("faces,n", [([2, 4], 1), ([4, 4, 4], 1), ([2, 2, 4, 4], 2), ([3, 3, 3, 3], 2),
                                     ([1, 2, 3, 4, 2], 3), ([6, 4], 1)])
def test_backends_agree(faces, n):
    assert _impl.count_maps(faces, n) == _kernel_py.count_maps(faces, n)


@pytest.mark.parametrize("lengths,degrees,cls", [
    ((4,), (4, 4), "ordinary"), ((2,), (4, 4), "ordinary"), ((6,), (4,), "simple"), ((2, 2), (4,), "ordinary"),
    ((1, 1), (4,), "fully-simple"), ((3,), (3,), "ordinary"), ((2, 2), (2, 3, 3), "mixed"), ((3, 1), (4,), "simple"),
])
def test_witness_stream_matches_count(lengths, degrees, cls):
    """Distinct canonical witnesses = labelled count / relabelling factor, per genus."""
    for g in (0, 1):
        spec = EnumSpec(g, lengths, degrees, cls)
        witnesses = list(iter_maps(spec))
        assert len(witnesses) == enumerate_maps(spec)
        for m in witnesses:
            m.validate()
            assert m.genus() == g
            assert m.boundary_lengths() == lengths
            assert m.internal_degrees() == tuple(sorted(degrees))


def test_degenerate_length_two_disk_is_simple():
    m = CombMap((1, 0), (1, 0), (0,))
    assert m.genus() == 0
    info = classify(m)
    assert info["simple"] == (True,) and info["fully_simple"]


def test_classify_examples():
    # two length-1 boundaries glued along their edges share both vertices' corners
    m = CombMap((0, 1), (1, 0), (0, 1))
    assert classify(m) == {"ordinary": True, "simple": (True, True), "fully_simple": False}
    # a length-4 boundary folded into two bridges visits the middle vertex twice
    m = CombMap((1, 2, 3, 0), (1, 0, 3, 2), (0,))
    assert classify(m)["simple"] == (False,)


def test_dump_witness_format():
    m = CombMap((1, 0), (1, 0), (0,))
    assert dump_witness(m) == "phi=(0 1) alpha=(0 1)"


@st.composite
def random_maps(draw):
    lengths = draw(st.lists(st.integers(1, 5), min_size=1, max_size=4))
    if sum(lengths) % 2:
        lengths[-1] += 1
    H = sum(lengths)
    perm = draw(st.permutations(range(H)))
    alpha = [0] * H
    for a, b in zip(perm[::2], perm[1::2]):
        alpha[a], alpha[b] = b, a
    n = draw(st.integers(1, len(lengths)))
    phi, _, _ = _kernel_py.face_layout(lengths)
    roots = [sum(lengths[:i]) for i in range(n)]
    return CombMap(tuple(phi), tuple(alpha), tuple(roots)), draw(st.permutations(range(H)))


@settings(max_examples=150, deadline=None)
@given(random_maps())
def test_euler_and_canonical_invariance(data):
    m, order = data
    m.validate()
    chi = m.euler_characteristic()
    assert (2 - len(m.roots) - chi) % 2 == 0
    shuffled = m.relabel(order)
    assert shuffled.euler_characteristic() == chi
    assert classify(shuffled) == classify(m)
    if m.is_connected():
        assert shuffled.key() == m.key()
        assert m.canonical().canonical() == m.canonical()


# ---------------------------------------------------------------------------
# disks
# ---------------------------------------------------------------------------


def _disks(hmax):
    for ell in range(1, hmax + 1):
        for q in range((hmax - ell) // 4 + 1):
            yield EnumSpec(0, (ell,), (4,) * q)
    yield EnumSpec(0, (3,), (3,))
    yield EnumSpec(0, (2,), (3, 3, 4))


def test_disk_round_trip_exhaustive():
    seen = 0
    for spec in _disks(12):
        images = set()
        for m in iter_maps(spec):
            d = disk_decompose(m)
            assert disk_compose(d).key() == m.key()
            assert classify(d.core)["simple"] == (True,)
            images.add(d)
            seen += 1
        assert len(images) == enumerate_maps(spec)
    assert seen > 500


def test_simple_disk_is_fixed_point():
    for m in itertools.chain(iter_maps(EnumSpec(0, (6,), (4,), "simple")),
                             iter_maps(EnumSpec(0, (4,), (4, 4), "simple"))):
        d = disk_decompose(m)
        assert d.core == m.canonical()
        assert all(p is None for p in d.pieces)


def test_disk_decompose_rejects_non_disks():
    m = next(iter_maps(EnumSpec(1, (4,))))
    with pytest.raises(ValueError):
        disk_decompose(m)


def _compositions(total, parts):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def test_disk_count_identity():
    """F_4 = sum over l' of H_l' times products of F over compositions of 4 - l', with F_0 = 1."""
    qmax = 2
    ell = 4

    def ordinary(l, q):
        if l == 0:
            return int(q == 0)
        return quadrangulation_count(0, (l,), q)

    for q in range(qmax + 1):
        total = 0
        shapes = Counter()
        for lp in range(1, ell + 1):
            for ls in _compositions(ell - lp, lp):
                for qs in _compositions(q, lp + 1):
                    term = quadrangulation_count(0, (lp,), qs[0], "simple")
                    for li, qi in zip(ls, qs[1:]):
                        term *= ordinary(li, qi)
                    total += term
                    shapes[(lp, ls)] += term
        assert total == ordinary(ell, q)
        got = Counter(disk_decompose(m).lengths() for m in iter_maps(EnumSpec(0, (ell,), (4,) * q)))
        assert got == +shapes


# ---------------------------------------------------------------------------
# cylinders
# ---------------------------------------------------------------------------


def _simple_cylinders(hmax):
    for l1, l2 in itertools.product(range(1, hmax), repeat=2):
        for q in range((hmax - l1 - l2) // 4 + 1) if l1 + l2 <= hmax else ():
            yield EnumSpec(0, (l1, l2), (4,) * q, "simple")


def test_cylinder_round_trip_exhaustive():
    kinds = Counter()
    for spec in _simple_cylinders(12):
        images = set()
        for m in iter_maps(spec):
            d = cylinder_decompose(m)
            kinds[d.kind] += 1
            assert cylinder_compose(d).key() == m.key()
            for disk, l1 in d.disks:
                assert disk.internal_degrees()
                assert disk.genus() == 0 and classify(disk)["simple"] == (True,)
                assert 1 <= l1 < disk.n_darts
            images.add(d)
        assert len(images) == enumerate_maps(spec)
    assert set(kinds) == {"split", "glued", "fully-simple"}


def test_fully_simple_cylinder_is_unchanged():
    for m in iter_maps(EnumSpec(0, (2, 2), (4, 4), "fully-simple")):
        d = cylinder_decompose(m)
        assert d.kind == "fully-simple" and d.fully_simple == m.canonical()


@pytest.mark.parametrize("k", range(1, 7))
def test_glued_cylinders_count_k(k):
    glued = [m for m in iter_maps(EnumSpec(0, (k, k), (), "simple"))]
    assert len(glued) == k
    assert sorted(cylinder_decompose(m).glued_offset for m in glued) == list(range(k))
    assert all(cylinder_decompose(m).kind == "glued" for m in glued)


def test_cylinder_compose_is_onto_swapped_disks():
    """Replacing a constituent disk by any simple disk of the same shape yields a valid preimage."""
    pool = {}
    for ell in range(2, 7):
        for q in (1, 2):
            for m in iter_maps(EnumSpec(0, (ell,), (4,) * q, "simple")):
                pool.setdefault(ell, []).append(m)
    checked = 0
    for spec in [EnumSpec(0, (2, 2), (4,), "simple"), EnumSpec(0, (3, 1), (4,), "simple"),
                 EnumSpec(0, (2, 2), (4, 4), "simple")]:
        for m in iter_maps(spec):
            d = cylinder_decompose(m)
            if d.kind != "split":
                continue
            for i, (disk, l1) in enumerate(d.disks):
                for other in pool.get(len(disk.boundary(0)), [])[:6]:
                    disks = list(d.disks)
                    disks[i] = (other.canonical(), l1)
                    d2 = CylinderDecomposition("split", shared=d.shared, disks=tuple(disks),
                                               root1_start=d.root1_start, root2_index=d.root2_index)
                    m2 = cylinder_compose(d2)
                    assert classify(m2)["simple"] == (True, True) and m2.genus() == 0
                    assert cylinder_decompose(m2) == d2
                    checked += 1
    assert checked > 100


def test_cylinder_decompose_rejects_non_simple():
    m = next(m for m in iter_maps(EnumSpec(0, (4, 2), (4,))) if not all(classify(m)["simple"]))
    with pytest.raises(ValueError):
        cylinder_decompose(m)


# ---------------------------------------------------------------------------
# against topological recursion
# ---------------------------------------------------------------------------

QS = 2


@pytest.mark.parametrize("ell", range(1, 9))
def test_oracle_matches_disk_tables(ell):
    qm = min(QS, (12 - ell) // 4)
    ordv = disk_coeffs(ell, qm).values()
    fsv = fully_simple_disk_coeffs(ell, qm).values()
    for q in range(qm + 1):
        assert quadrangulation_count(0, (ell,), q) == ordv[q]
        assert quadrangulation_count(0, (ell,), q, "simple") == fsv[q]
        assert quadrangulation_count(0, (ell,), q, "fully-simple") == fsv[q]


@pytest.mark.parametrize("k1,k2", [(1, 1), (2, 2), (3, 1), (4, 2), (2, 4), (3, 3), (5, 1), (4, 4)])
def test_oracle_matches_cylinder_tables(k1, k2):
    qm = (12 - k1 - k2) // 4
    tables = {
        "ordinary": cylinder_ordinary(k1, k2, qm).values(),
        "mixed": cylinder_mixed(k1, k2, qm).values(),
        "simple": cylinder_simple(k1, k2, qm).values(),
        "fully-simple": cylinder_fully_simple(k1, k2, qm).values(),
    }
    for cls, row in tables.items():
        assert [quadrangulation_count(0, (k1, k2), q, cls) for q in range(qm + 1)] == row


def test_oracle_matches_three_boundaries_at_t_zero():
    """At c = 1 the (0,3) amplitude counts gluings of three boundaries with no internal faces."""
    cur = build_quadrangulation_curve(Fraction(1))
    amp = tr_amplitude(cur, 0, 3)
    for lengths in [(1, 1, 2), (2, 2, 2), (1, 1, 4), (3, 1, 2), (2, 2, 4), (1, 3, 4)]:
        assert ordinary_coeffs(amp, lengths, 0, cur).values() == [quadrangulation_count(0, lengths, 0)]
