# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernel; same contract as ``_kernel_py.count_maps``."""

from libc.stdlib cimport malloc, calloc, free

BACKEND = "cython"

MAXB = 16


cdef struct State:
    int H
    int n_faces
    int nb
    int gmax
    int ncls
    int *phi_inv
    int *alpha
    int *face_of
    int *vert
    int *owner
    int *parent
    int *bstart
    long long *counts


cdef inline int _find(int *parent, int x) nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


cdef void _leaf(State *st) nogil:
    cdef int H = st.H
    cdef int h, x, a, b, comps, nv, two_g, bnd, v, o, simple, fs, mask, g
    for h in range(st.n_faces):
        st.parent[h] = h
    comps = st.n_faces
    for h in range(H):
        a = _find(st.parent, st.face_of[h])
        b = _find(st.parent, st.face_of[st.alpha[h]])
        if a != b:
            st.parent[a] = b
            comps -= 1
    if comps != 1:
        return
    for h in range(H):
        st.vert[h] = -1
    nv = 0
    for h in range(H):
        if st.vert[h] < 0:
            x = h
            while st.vert[x] < 0:
                st.vert[x] = nv
                x = st.alpha[st.phi_inv[x]]
            nv += 1
    two_g = 2 - nv + H // 2 - st.n_faces
    g = two_g // 2
    if g > st.gmax:
        return
    for v in range(nv):
        st.owner[v] = -1
    mask = 0
    fs = 1
    for bnd in range(st.nb):
        simple = 1
        for h in range(st.bstart[bnd], st.bstart[bnd + 1]):
            v = st.vert[h]
            o = st.owner[v]
            if o == bnd:
                simple = 0
                fs = 0
            elif o >= 0:
                fs = 0
            st.owner[v] = bnd
        mask |= simple << bnd
    st.counts[g * st.ncls + mask * 2 + fs] += 1


cdef void _rec(State *st, int start) nogil:
    cdef int i = start
    cdef int j
    while i < st.H and st.alpha[i] >= 0:
        i += 1
    if i == st.H:
        _leaf(st)
        return
    for j in range(i + 1, st.H):
        if st.alpha[j] < 0:
            st.alpha[i] = j
            st.alpha[j] = i
            _rec(st, i + 1)
            st.alpha[j] = -1
    st.alpha[i] = -1


def count_maps(face_lengths, int n_boundary):
    """Labelled counts of connected gluings keyed by (genus, simple mask, fully simple)."""
    cdef State st
    cdef int H = 0
    cdef int f, k, start, length, g, cls
    lengths = [int(x) for x in face_lengths]
    for length in lengths:
        H += length
    out = {}
    if H % 2 or H == 0:
        return out
    if n_boundary > MAXB:
        raise ValueError("too many boundaries for the compiled kernel")
    st.H = H
    st.n_faces = len(lengths)
    st.nb = n_boundary
    st.gmax = H // 4 + 1
    st.ncls = (1 << n_boundary) * 2
    st.phi_inv = <int *> malloc(H * sizeof(int))
    st.alpha = <int *> malloc(H * sizeof(int))
    st.face_of = <int *> malloc(H * sizeof(int))
    st.vert = <int *> malloc(H * sizeof(int))
    st.owner = <int *> malloc(H * sizeof(int))
    st.parent = <int *> malloc(st.n_faces * sizeof(int))
    st.bstart = <int *> malloc((n_boundary + 1) * sizeof(int))
    st.counts = <long long *> calloc((st.gmax + 1) * st.ncls, sizeof(long long))
    try:
        start = 0
        for f in range(st.n_faces):
            length = lengths[f]
            if f < n_boundary:
                st.bstart[f] = start
            for k in range(length):
                st.phi_inv[start + (k + 1) % length] = start + k
                st.face_of[start + k] = f
            start += length
        st.bstart[n_boundary] = sum(lengths[:n_boundary])
        for k in range(H):
            st.alpha[k] = -1
        with nogil:
            _rec(&st, 0)
        for g in range(st.gmax + 1):
            for cls in range(st.ncls):
                if st.counts[g * st.ncls + cls]:
                    out[(g, cls // 2, cls % 2)] = int(st.counts[g * st.ncls + cls])
    finally:
        free(st.phi_inv)
        free(st.alpha)
        free(st.face_of)
        free(st.vert)
        free(st.owner)
        free(st.parent)
        free(st.bstart)
        free(st.counts)
    return out
