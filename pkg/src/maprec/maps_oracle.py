"""Brute-force enumeration of maps in the permutational model.

A map on darts 0..H-1 is a face permutation ``phi`` and a fixed-point-free
involution ``alpha``; vertices are the cycles of ``sigma = alpha o phi^-1``.
Face dart ``h`` is the corner of its face at vertex ``v(h)`` and starts the
edge ``{h, alpha(h)}``, which ends at the corner ``phi(h)``.

Cutting a vertex at two corners ``x, x'`` (or gluing two vertices at two
corners) is the same operation: exchange the phi-successors of
``phi^-1(x)`` and ``phi^-1(x')``.  Both decomposition algorithms below are
built from this move, so their inverses are exact.
"""

from __future__ import annotations

import math
import os
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from . import _kernel_py

if os.environ.get("MAPREC_PURE_PYTHON"):
    _impl = _kernel_py
else:
    try:
        from . import _kernel as _impl  # type: ignore[attr-defined]
    except ImportError:  # pragma: no cover - depends on the build
        _impl = _kernel_py

KERNEL_BACKEND: str = _impl.BACKEND

__all__ = [
    "KERNEL_BACKEND",
    "CombMap",
    "EnumSpec",
    "CapExceeded",
    "BOUNDARY_CLASSES",
    "enumerate_maps",
    "gluing_counts",
    "quadrangulation_count",
    "classify",
    "iter_maps",
    "dump_witness",
    "DiskDecomposition",
    "disk_decompose",
    "disk_compose",
    "CylinderDecomposition",
    "cylinder_decompose",
    "cylinder_compose",
]

BOUNDARY_CLASSES = ("ordinary", "simple", "mixed", "fully-simple")


class CapExceeded(ValueError):
    def __init__(self, required: int, cap: int):
        super().__init__(f"{required} half-edges exceed the cap of {cap}")
        self.required = required
        self.cap = cap


# ---------------------------------------------------------------------------
# Combinatorial maps
# ---------------------------------------------------------------------------


def _cycles(perm: Sequence[int]) -> List[List[int]]:
    seen = [False] * len(perm)
    out = []
    for h in range(len(perm)):
        if not seen[h]:
            cyc = []
            x = h
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = perm[x]
            out.append(cyc)
    return out


@dataclass(frozen=True)
class CombMap:
    """Rooted map: ``roots[i]`` is the root dart of boundary face i."""

    phi: Tuple[int, ...]
    alpha: Tuple[int, ...]
    roots: Tuple[int, ...]
    _cache: Dict[str, object] = field(default_factory=dict, compare=False, hash=False, repr=False)

    @property
    def n_darts(self) -> int:
        return len(self.phi)

    def validate(self) -> None:
        H = self.n_darts
        if sorted(self.phi) != list(range(H)):
            raise ValueError("phi is not a permutation")
        for h, a in enumerate(self.alpha):
            if a == h or self.alpha[a] != h:
                raise ValueError("alpha must be a fixed-point-free involution")
        faces = {}
        for i, cyc in enumerate(_cycles(self.phi)):
            for h in cyc:
                faces[h] = i
        if len({faces[r] for r in self.roots}) != len(self.roots):
            raise ValueError("two roots lie on the same face")

    def phi_inv(self) -> List[int]:
        if "phi_inv" not in self._cache:
            inv = [0] * self.n_darts
            for h, p in enumerate(self.phi):
                inv[p] = h
            self._cache["phi_inv"] = inv
        return self._cache["phi_inv"]  # type: ignore[return-value]

    def sigma(self) -> List[int]:
        inv = self.phi_inv()
        return [self.alpha[inv[h]] for h in range(self.n_darts)]

    def vertex_of(self) -> List[int]:
        if "vertex" not in self._cache:
            vert = [-1] * self.n_darts
            for i, cyc in enumerate(_cycles(self.sigma())):
                for h in cyc:
                    vert[h] = i
            self._cache["vertex"] = vert
        return self._cache["vertex"]  # type: ignore[return-value]

    def n_vertices(self) -> int:
        return len(set(self.vertex_of()))

    def faces(self) -> List[List[int]]:
        return _cycles(self.phi)

    def boundary(self, i: int) -> List[int]:
        out = [self.roots[i]]
        x = self.phi[out[0]]
        while x != out[0]:
            out.append(x)
            x = self.phi[x]
        return out

    def boundary_lengths(self) -> Tuple[int, ...]:
        return tuple(len(self.boundary(i)) for i in range(len(self.roots)))

    def internal_degrees(self) -> Tuple[int, ...]:
        rootset = set()
        for i in range(len(self.roots)):
            rootset.update(self.boundary(i))
        return tuple(sorted(len(c) for c in self.faces() if c[0] not in rootset))

    def is_connected(self) -> bool:
        if self.n_darts == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            h = stack.pop()
            for y in (self.phi[h], self.alpha[h]):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == self.n_darts

    def euler_characteristic(self) -> int:
        """|C(sigma)| - |C(alpha)| + |C(phi)| - n."""
        return self.n_vertices() - self.n_darts // 2 + len(self.faces()) - len(self.roots)

    def genus(self) -> int:
        two_g = 2 - len(self.roots) - self.euler_characteristic()
        if two_g % 2 or two_g < 0 or not self.is_connected():
            raise ValueError("not a connected orientable map")
        return two_g // 2

    def relabel(self, order: Sequence[int]) -> "CombMap":
        """New map whose dart i is old dart order[i]."""
        new = {old: i for i, old in enumerate(order)}
        phi = tuple(new[self.phi[old]] for old in order)
        alpha = tuple(new[self.alpha[old]] for old in order)
        return CombMap(phi, alpha, tuple(new[r] for r in self.roots))

    def canonical(self) -> "CombMap":
        """Breadth-first relabelling from the roots; equal for root-preserving isomorphic maps."""
        order: List[int] = []
        seen = set()
        for r in self.roots:
            if r in seen:
                continue
            seen.add(r)
            queue = deque([r])
            while queue:
                h = queue.popleft()
                order.append(h)
                for y in (self.phi[h], self.alpha[h]):
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
        if len(order) != self.n_darts:
            raise ValueError("canonical form needs every component to contain a root")
        return self.relabel(order)

    def key(self) -> Tuple[Tuple[int, ...], Tuple[int, ...], Tuple[int, ...]]:
        c = self.canonical()
        return c.phi, c.alpha, c.roots


def classify(m: CombMap) -> Dict[str, object]:
    """Per-boundary simplicity and global full simplicity, from boundary corners."""
    vert = m.vertex_of()
    simple = []
    owner: Dict[int, int] = {}
    fully = True
    for b in range(len(m.roots)):
        ok = True
        for h in m.boundary(b):
            v = vert[h]
            o = owner.get(v)
            if o == b:
                ok = False
                fully = False
            elif o is not None:
                fully = False
            owner[v] = b
        simple.append(ok)
    return {"ordinary": True, "simple": tuple(simple), "fully_simple": fully}


def _layout_map(face_lengths: Sequence[int], alpha: Sequence[int], n_boundary: int) -> CombMap:
    phi, _, _ = _kernel_py.face_layout(face_lengths)
    roots = []
    start = 0
    for length in face_lengths[:n_boundary]:
        roots.append(start)
        start += length
    return CombMap(tuple(phi), tuple(alpha), tuple(roots))


def dump_witness(m: CombMap) -> str:
    """One line: faces as cycles (boundaries first, rooted), then the edge pairs."""
    faces = [m.boundary(i) for i in range(len(m.roots))]
    done = set(h for f in faces for h in f)
    for cyc in m.faces():
        if cyc[0] not in done:
            faces.append(cyc)
    pairs = sorted({(min(h, a), max(h, a)) for h, a in enumerate(m.alpha)})
    phi_s = "".join("(" + " ".join(str(h) for h in f) + ")" for f in faces)
    alpha_s = "".join(f"({a} {b})" for a, b in pairs)
    return f"phi={phi_s} alpha={alpha_s}"


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EnumSpec:
    genus: int
    lengths: Tuple[int, ...]
    internal_degrees: Tuple[int, ...] = ()
    boundary_class: str = "ordinary"
    connected: bool = True
    cap: int = 20

    def __post_init__(self) -> None:
        if self.boundary_class not in BOUNDARY_CLASSES:
            raise ValueError(f"unknown boundary class {self.boundary_class!r}")
        if not self.lengths or any(l < 1 for l in self.lengths):
            if not self.single_vertex:
                raise ValueError("boundary lengths must be positive")
        if any(d < 1 for d in self.internal_degrees):
            raise ValueError("internal face degrees must be positive")
        if not self.connected:
            raise ValueError("only connected maps are enumerated")
        if self.boundary_class == "mixed" and len(self.lengths) != 2:
            raise ValueError("the mixed class needs exactly two boundaries")

    @property
    def single_vertex(self) -> bool:
        """The length-0 boundary of the one-vertex map, counted once by convention."""
        return self.lengths == (0,) and not self.internal_degrees

    @property
    def half_edges(self) -> int:
        return sum(self.lengths) + sum(self.internal_degrees)


def _relabelling_factor(degrees: Sequence[int]) -> int:
    """r! prod(degree) for labelled internal faces, grouped by equal degree."""
    out = 1
    for d, mult in Counter(degrees).items():
        out *= math.factorial(mult) * d ** mult
    return out


@lru_cache(maxsize=None)
def gluing_counts(lengths: Tuple[int, ...], internal_degrees: Tuple[int, ...]) -> Dict[Tuple[int, int, int], int]:
    """Raw labelled counts of connected gluings keyed by (genus, simple mask, fully simple)."""
    return dict(_impl.count_maps(list(lengths) + sorted(internal_degrees), len(lengths)))


def _class_ok(cls: str, mask: int, fs: int, n: int) -> bool:
    if cls == "ordinary":
        return True
    if cls == "simple":
        return mask == (1 << n) - 1
    if cls == "mixed":
        return bool(mask & 1)
    return bool(fs)


def enumerate_maps(spec: EnumSpec) -> int:
    """Number of unlabelled connected maps with rooted boundaries matching ``spec``."""
    H = spec.half_edges
    if H > spec.cap:
        raise CapExceeded(H, spec.cap)
    if spec.single_vertex:
        return int(spec.genus == 0)
    if H % 2:
        return 0
    raw = 0
    for (g, mask, fs), cnt in gluing_counts(tuple(spec.lengths), tuple(sorted(spec.internal_degrees))).items():
        if g == spec.genus and _class_ok(spec.boundary_class, mask, fs, len(spec.lengths)):
            raw += cnt
    factor = _relabelling_factor(spec.internal_degrees)
    if raw % factor:
        raise ArithmeticError("labelled count not divisible by the relabelling factor")
    return raw // factor


def quadrangulation_count(genus: int, lengths: Sequence[int], quads: int, boundary_class: str = "ordinary",
                          cap: int = 20) -> int:
    return enumerate_maps(EnumSpec(genus, tuple(lengths), (4,) * quads, boundary_class, True, cap))


def iter_maps(spec: EnumSpec) -> Iterator[CombMap]:
    """Witness stream: one canonical representative per unlabelled map (pure Python)."""
    H = spec.half_edges
    if H > spec.cap:
        raise CapExceeded(H, spec.cap)
    faces = list(spec.lengths) + sorted(spec.internal_degrees)
    n = len(spec.lengths)
    seen = set()
    for alpha in _kernel_py.iter_alphas(H):
        m = _layout_map(faces, list(alpha), n)
        if not m.is_connected() or m.genus() != spec.genus:
            continue
        info = classify(m)
        mask = sum(1 << i for i, ok in enumerate(info["simple"]) if ok)  # type: ignore[arg-type]
        if not _class_ok(spec.boundary_class, mask, int(info["fully_simple"]), n):  # type: ignore[arg-type]
            continue
        k = m.key()
        if k not in seen:
            seen.add(k)
            yield CombMap(*k)


# ---------------------------------------------------------------------------
# Surgery helpers
# ---------------------------------------------------------------------------


def _component(phi: Sequence[int], alpha: Sequence[int], root: int) -> List[int]:
    seen = {root}
    order = [root]
    i = 0
    while i < len(order):
        h = order[i]
        i += 1
        for y in (phi[h], alpha[h]):
            if y not in seen:
                seen.add(y)
                order.append(y)
    return order


def _submap(phi: Sequence[int], alpha: Sequence[int], roots: Sequence[int], darts: Sequence[int]) -> CombMap:
    new = {old: i for i, old in enumerate(darts)}
    m = CombMap(tuple(new[phi[d]] for d in darts), tuple(new[alpha[d]] for d in darts), tuple(new[r] for r in roots))
    return m.canonical()


def _disjoint_union(parts: Sequence[CombMap]) -> Tuple[List[int], List[int], List[int]]:
    """Concatenate dart sets; returns (phi, alpha, offsets)."""
    phi: List[int] = []
    alpha: List[int] = []
    offsets = []
    for p in parts:
        off = len(phi)
        offsets.append(off)
        phi.extend(x + off for x in p.phi)
        alpha.extend(x + off for x in p.alpha)
    return phi, alpha, offsets


# ---------------------------------------------------------------------------
# Ordinary disk -> simple disk + ordinary disks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiskDecomposition:
    core: CombMap
    pieces: Tuple[Optional[CombMap], ...]  # None is the single-vertex disk

    def lengths(self) -> Tuple[int, Tuple[int, ...]]:
        return len(self.core.boundary(0)), tuple(0 if p is None else len(p.boundary(0)) for p in self.pieces)


def _require_disk(m: CombMap) -> None:
    if len(m.roots) != 1 or not m.is_connected() or m.genus() != 0:
        raise ValueError("input must be a connected planar map with one boundary")


def disk_decompose(m: CombMap) -> DiskDecomposition:
    """Walk the boundary from the root edge, cutting each vertex at its first and last visit."""
    _require_disk(m)
    p = m.boundary(0)
    ell = len(p)
    vert = m.vertex_of()
    phi = list(m.phi)
    corner = lambda k: p[k % ell]  # noqa: E731
    cuts: List[Optional[int]] = []
    i = 1
    while True:
        if i == ell:
            cuts.append(None)
            break
        v = vert[p[i]]
        j = i
        for k in range(ell, i, -1):
            if vert[corner(k)] == v:
                j = k
                break
        if j > i:
            phi[corner(i - 1)] = corner(j)
            phi[corner(j - 1)] = corner(i)
            cuts.append(corner(i))
        else:
            cuts.append(None)
        if j == ell:
            break
        i = j + 1
    core = _submap(phi, m.alpha, [p[0]], _component(phi, m.alpha, p[0]))
    pieces = tuple(None if r is None else _submap(phi, m.alpha, [r], _component(phi, m.alpha, r)) for r in cuts)
    if len(core.boundary(0)) != len(pieces):
        raise AssertionError("core length and number of pieces disagree")
    return DiskDecomposition(core, pieces)


def disk_compose(d: DiskDecomposition) -> CombMap:
    """Glue piece k into the core corner reached after the k-th core edge."""
    core = d.core
    s = core.boundary(0)
    if len(s) != len(d.pieces):
        raise ValueError("one piece per core edge is required")
    present = [pc for pc in d.pieces if pc is not None]
    phi, alpha, offsets = _disjoint_union([core] + present)
    it = iter(offsets[1:])
    for k, pc in enumerate(d.pieces):
        if pc is None:
            continue
        off = next(it)
        c = [x + off for x in pc.boundary(0)]
        phi[s[k]] = c[0]
        phi[c[-1]] = s[(k + 1) % len(s)]
    return CombMap(tuple(phi), tuple(alpha), (s[0],)).canonical()


# ---------------------------------------------------------------------------
# Simple cylinder -> fully simple pieces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CylinderDecomposition:
    """kind 'fully-simple' keeps the map; 'glued' is the two boundaries glued along all edges;
    'split' stores the shared-piece lengths, the disks with their first-boundary part lengths
    and the data needed to put both roots back."""

    kind: str
    fully_simple: Optional[CombMap] = None
    glued_length: int = 0
    glued_offset: int = 0
    shared: Tuple[int, ...] = ()
    disks: Tuple[Tuple[CombMap, int], ...] = ()
    root1_start: int = 0
    root2_index: int = 0


def cylinder_decompose(m: CombMap) -> CylinderDecomposition:
    if len(m.roots) != 2 or not m.is_connected() or m.genus() != 0:
        raise ValueError("input must be a connected planar map with two boundaries")
    info = classify(m)
    if not all(info["simple"]):  # type: ignore[arg-type]
        raise ValueError("both boundaries must be simple")
    if info["fully_simple"]:
        return CylinderDecomposition("fully-simple", fully_simple=m.canonical())
    P = m.boundary(0)
    Q = m.boundary(1)
    k1, k2 = len(P), len(Q)
    face = [2] * m.n_darts
    for h in P:
        face[h] = 0
    for h in Q:
        face[h] = 1
    alpha = m.alpha
    shared = [face[alpha[h]] == 1 for h in P]
    if all(shared):
        if k1 != k2 or m.n_darts != 2 * k1:
            raise AssertionError("fully glued boundaries must be the whole map")
        return CylinderDecomposition("glued", glued_length=k1, glued_offset=Q.index(alpha[P[0]]))
    vert = m.vertex_of()
    qverts = {vert[h] for h in Q}
    # shared pieces as (start corner, length) in first-boundary order
    pieces: List[Tuple[int, int]] = []
    for a in range(k1):
        if shared[a] and not shared[a - 1]:
            m_len = 0
            while shared[(a + m_len) % k1]:
                m_len += 1
            pieces.append((a, m_len))
        elif not shared[a] and not shared[a - 1] and vert[P[a]] in qverts:
            pieces.append((a, 0))
    pieces.sort()
    r = len(pieces)
    # interior regions
    parent = list(range(m.n_darts))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for h in range(m.n_darts):
        if face[h] == 2:
            for y in (m.phi[h], alpha[h]):
                if face[y] == 2:
                    parent[find(h)] = find(y)
    disks = []
    l1_list: List[int] = []
    arc2_list: List[List[int]] = []
    used_regions = set()
    for i in range(r):
        s_i, m_i = pieces[i]
        end = (s_i + m_i) % k1
        nxt = pieces[(i + 1) % r][0]
        count = (nxt - end) % k1 or k1
        arc1 = [P[(end + x) % k1] for x in range(count)]
        if any(shared[(end + x) % k1] for x in range(count)):
            raise AssertionError("arc crosses a shared edge")
        region = find(alpha[arc1[0]])
        if region in used_regions or any(find(alpha[h]) != region for h in arc1):
            raise AssertionError("first-boundary arc does not bound a single new region")
        used_regions.add(region)
        inreg = [face[alpha[h]] == 2 and find(alpha[h]) == region for h in Q]
        starts = [b for b in range(k2) if inreg[b] and not inreg[b - 1]]
        if not starts and all(inreg):
            # a single pinch vertex: the arc starts at its corner on the second boundary
            pinch = vert[P[pieces[(i + 1) % r][0]]]
            starts = [b for b in range(k2) if vert[Q[b]] == pinch]
        if len(starts) != 1:
            raise AssertionError("second-boundary arc is not contiguous")
        arc2 = []
        b = starts[0]
        while inreg[b % k2] and len(arc2) < k2:
            arc2.append(Q[b % k2])
            b += 1
        interior = [h for h in range(m.n_darts) if face[h] == 2 and find(h) == region]
        cyc = arc1 + arc2
        phi = list(m.phi)
        for x in range(len(cyc)):
            phi[cyc[x]] = cyc[(x + 1) % len(cyc)]
        darts = cyc + interior
        disk = _submap(phi, alpha, [arc1[0]], darts)
        disks.append((disk, len(arc1)))
        l1_list.append(len(arc1))
        arc2_list.append(arc2)
    # consistency of both boundary words with the decomposition
    word1: List[int] = []
    for i, (s_i, m_i) in enumerate(pieces):
        word1.extend(P[(s_i + x) % k1] for x in range(m_i))
        word1.extend(P[(pieces[i][0] + m_i + x) % k1] for x in range(l1_list[i]))
    s0 = pieces[0][0]
    if word1 != [P[(s0 + x) % k1] for x in range(k1)]:
        raise AssertionError("first boundary is not the concatenation of pieces and arcs")
    word2: List[int] = []
    for i in range(r - 1, -1, -1):
        s_i, m_i = pieces[i]
        word2.extend(arc2_list[i])
        word2.extend(alpha[P[(s_i + m_i - 1 - x) % k1]] for x in range(m_i))
    if sorted(word2) != sorted(Q) or any(word2[(x + 1) % k2] != m.phi[word2[x]] for x in range(k2)):
        raise AssertionError("second boundary is not the concatenation of arcs and pieces")
    return CylinderDecomposition(
        "split",
        shared=tuple(mi for _, mi in pieces),
        disks=tuple(disks),
        root1_start=s0,
        root2_index=word2.index(Q[0]),
    )


def cylinder_compose(d: CylinderDecomposition) -> CombMap:
    if d.kind == "fully-simple":
        assert d.fully_simple is not None
        return d.fully_simple.canonical()
    if d.kind == "glued":
        k, j = d.glued_length, d.glued_offset
        phi = [(a + 1) % k for a in range(k)] + [k + (b + 1) % k for b in range(k)]
        alpha = [0] * (2 * k)
        for a in range(k):
            q = k + (j - a) % k
            alpha[a] = q
            alpha[q] = a
        return CombMap(tuple(phi), tuple(alpha), (0, k)).canonical()
    if d.kind != "split":
        raise ValueError(f"unknown decomposition kind {d.kind!r}")
    r = len(d.shared)
    if len(d.disks) != r or r == 0:
        raise ValueError("one disk per shared piece is required")
    phi, alpha, offsets = _disjoint_union([disk for disk, _ in d.disks])
    arcs1: List[List[int]] = []
    arcs2: List[List[int]] = []
    for (disk, l1), off in zip(d.disks, offsets):
        cyc = [x + off for x in disk.boundary(0)]
        if not 1 <= l1 < len(cyc):
            raise ValueError("first-boundary part must be a proper nonempty prefix")
        if len(cyc) == disk.n_darts:
            raise ValueError("a constituent disk needs an internal face")
        arcs1.append(cyc[:l1])
        arcs2.append(cyc[l1:])
    shared1: List[List[int]] = []
    shared2: List[List[int]] = []
    for mi in d.shared:
        u = list(range(len(phi), len(phi) + mi))
        w = list(range(len(phi) + mi, len(phi) + 2 * mi))
        phi.extend([0] * (2 * mi))
        alpha.extend([0] * (2 * mi))
        for x in range(mi):
            alpha[u[x]] = w[mi - 1 - x]
            alpha[w[mi - 1 - x]] = u[x]
        shared1.append(u)
        shared2.append(w)
    word1: List[int] = []
    for i in range(r):
        word1.extend(shared1[i])
        word1.extend(arcs1[i])
    word2: List[int] = []
    for i in range(r - 1, -1, -1):
        word2.extend(arcs2[i])
        word2.extend(shared2[i])
    for word in (word1, word2):
        for x in range(len(word)):
            phi[word[x]] = word[(x + 1) % len(word)]
    root1 = word1[(-d.root1_start) % len(word1)]
    root2 = word2[d.root2_index]
    return CombMap(tuple(phi), tuple(alpha), (root1, root2)).canonical()
