"""Pure-Python enumeration kernel, used when the compiled extension is absent.

Darts are labelled 0..H-1 and faces are consecutive blocks of darts, the
first ``n_boundary`` blocks being the rooted boundaries.  Every
fixed-point-free involution alpha is generated by pairing the smallest
unpaired dart first.  For each connected result the kernel records
(genus, simple-boundary bitmask, fully-simple flag).
"""

from __future__ import annotations

from typing import Dict, Iterator, List, Sequence, Tuple

__all__ = ["count_maps", "iter_alphas", "face_layout", "BACKEND"]

BACKEND = "python"


def face_layout(face_lengths: Sequence[int]) -> Tuple[List[int], List[int], List[int]]:
    """(phi, phi_inv, face_of) for consecutive face blocks."""
    phi: List[int] = []
    face_of: List[int] = []
    start = 0
    for f, length in enumerate(face_lengths):
        for k in range(length):
            phi.append(start + (k + 1) % length)
            face_of.append(f)
        start += length
    phi_inv = [0] * len(phi)
    for h, p in enumerate(phi):
        phi_inv[p] = h
    return phi, phi_inv, face_of


def iter_alphas(n_darts: int) -> Iterator[List[int]]:
    """All fixed-point-free involutions on range(n_darts); the yielded list is reused."""
    if n_darts % 2:
        return
    alpha = [-1] * n_darts

    def rec(start: int) -> Iterator[List[int]]:
        i = start
        while i < n_darts and alpha[i] >= 0:
            i += 1
        if i == n_darts:
            yield alpha
            return
        for j in range(i + 1, n_darts):
            if alpha[j] < 0:
                alpha[i] = j
                alpha[j] = i
                yield from rec(i + 1)
                alpha[j] = -1
        alpha[i] = -1

    yield from rec(0)


def _classify(alpha: List[int], phi_inv: List[int], face_of: List[int], n_faces: int,
              bounds: List[Tuple[int, int]]) -> Tuple[int, int, int] | None:
    H = len(alpha)
    # connectivity over faces
    parent = list(range(n_faces))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = n_faces
    for h in range(H):
        a, b = find(face_of[h]), find(face_of[alpha[h]])
        if a != b:
            parent[a] = b
            comps -= 1
    if comps != 1:
        return None
    vert = [-1] * H
    nv = 0
    for h in range(H):
        if vert[h] < 0:
            x = h
            while vert[x] < 0:
                vert[x] = nv
                x = alpha[phi_inv[x]]
            nv += 1
    two_g = 2 - nv + H // 2 - n_faces
    owner = [-1] * nv
    mask = 0
    fs = 1
    for b, (lo, hi) in enumerate(bounds):
        simple = 1
        for h in range(lo, hi):
            v = vert[h]
            o = owner[v]
            if o == b:
                simple = 0
                fs = 0
            elif o >= 0:
                fs = 0
            owner[v] = b
        mask |= simple << b
    return two_g // 2, mask, fs


def count_maps(face_lengths: Sequence[int], n_boundary: int) -> Dict[Tuple[int, int, int], int]:
    """Labelled counts of connected gluings keyed by (genus, simple mask, fully simple)."""
    H = sum(face_lengths)
    out: Dict[Tuple[int, int, int], int] = {}
    if H % 2 or H == 0:
        return out
    _, phi_inv, face_of = face_layout(face_lengths)
    bounds = []
    start = 0
    for length in face_lengths[:n_boundary]:
        bounds.append((start, start + length))
        start += length
    n_faces = len(face_lengths)
    for alpha in iter_alphas(H):
        key = _classify(alpha, phi_inv, face_of, n_faces, bounds)
        if key is not None:
            out[key] = out.get(key, 0) + 1
    return out
