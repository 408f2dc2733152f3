"""Numba twins of :mod:`compcycle._kernels_np`.

Signatures and row conventions are identical; only the execution strategy
differs (fused loops instead of vectorised passes). Each kernel scans once
into a small buffer and, only when that overflows, again into an exactly
sized one. Table lookups are written out in place: a
helper taking array arguments costs a reference-count round trip per call,
which dominates these loops.
"""
import numpy as np

from ._accel import njit

_FIRST_BATCH = 64


@njit(cache=True, inline="always")
def _put(out, n, code, a, b, c):
    if n < out.shape[0]:
        out[n, 0] = code
        out[n, 1] = a
        out[n, 2] = b
        out[n, 3] = c
    return n + 1


@njit(cache=True)
def _category_scan(dom, cod, ident, out_ptr, out_list, out_pos, row_ptr,
                   pair_f, pair_g, comp, null, out):
    n_obj = ident.shape[0]
    n_mor = dom.shape[0]
    n = 0
    good_id = np.zeros(n_obj, dtype=np.bool_)
    for a in range(n_obj):
        i = ident[a]
        if i < 0:
            n = _put(out, n, 0, a, -1, -1)
        elif i >= n_mor or dom[i] != a or cod[i] != a:
            n = _put(out, n, 1, a, i, -1)
        else:
            good_id[a] = True

    n_pairs = comp.shape[0]
    typed = np.zeros(n_pairs, dtype=np.bool_)
    for e in range(n_pairs):
        h = comp[e]
        if h < 0:
            n = _put(out, n, 3, pair_f[e], pair_g[e], -1)
        elif h >= n_mor or dom[h] != dom[pair_f[e]] or cod[h] != cod[pair_g[e]]:
            n = _put(out, n, 2, pair_f[e], pair_g[e], h)
        else:
            typed[e] = True

    for f in range(n_mor):
        a = dom[f]
        if good_id[a] and comp[row_ptr[ident[a]] + out_pos[f]] != f:
            n = _put(out, n, 4, f, -1, -1)
    for f in range(n_mor):
        b = cod[f]
        if good_id[b] and comp[row_ptr[f] + out_pos[ident[b]]] != f:
            n = _put(out, n, 5, f, -1, -1)

    for e in range(n_pairs):
        if not typed[e]:
            continue
        f = pair_f[e]
        g = pair_g[e]
        h = comp[e]
        b = cod[g]
        for p in range(out_ptr[b], out_ptr[b + 1]):
            k = out_list[p]
            lhs = comp[row_ptr[h] + out_pos[k]]
            gk = comp[row_ptr[g] + out_pos[k]]
            if lhs < 0 or gk < 0 or gk >= n_mor:
                continue
            if dom[gk] != dom[g] or cod[gk] != cod[k]:
                continue
            rhs = comp[row_ptr[f] + out_pos[gk]]
            if rhs >= 0 and lhs != rhs:
                n = _put(out, n, 6, f, g, k)

    if null >= 0:
        n_from = np.zeros(n_obj, dtype=np.int64)
        n_to = np.zeros(n_obj, dtype=np.int64)
        for p in range(out_ptr[null], out_ptr[null + 1]):
            n_from[cod[out_list[p]]] += 1
        for f in range(n_mor):
            if cod[f] == null:
                n_to[dom[f]] += 1
        for x in range(n_obj):
            if n_from[x] != 1:
                n = _put(out, n, 7, x, -1, -1)
        for x in range(n_obj):
            if n_to[x] != 1:
                n = _put(out, n, 8, x, -1, -1)
    return n


def category_violations(dom, cod, ident, out_ptr, out_list, out_pos, row_ptr,
                        pair_f, pair_g, comp, null):
    args = (dom, cod, ident, out_ptr, out_list, out_pos, row_ptr, pair_f, pair_g, comp, null)
    return _collect(_category_scan, args)


@njit(cache=True)
def _functor_scan(s_dom, s_cod, s_ident, s_pair_f, s_pair_g, s_comp,
                  d_dom, d_cod, d_ident, d_row_ptr, d_out_pos, d_comp,
                  obj_map, mor_map, contravariant, out):
    n_dobj = d_ident.shape[0]
    n_dmor = d_dom.shape[0]
    n = 0
    for f in range(s_dom.shape[0]):
        m = mor_map[f]
        a = obj_map[s_dom[f]]
        b = obj_map[s_cod[f]]
        if contravariant:
            a, b = b, a
        if m < 0 or m >= n_dmor or d_dom[m] != a or d_cod[m] != b:
            n = _put(out, n, 0, f, -1, -1)
    for a in range(s_ident.shape[0]):
        i = s_ident[a]
        if i < 0:
            continue
        x = obj_map[a]
        if x < 0 or x >= n_dobj or d_ident[x] < 0 or mor_map[i] != d_ident[x]:
            n = _put(out, n, 1, a, -1, -1)
    for e in range(s_comp.shape[0]):
        h = s_comp[e]
        if h < 0:
            continue
        f = s_pair_f[e]
        g = s_pair_g[e]
        x = mor_map[f]
        y = mor_map[g]
        if contravariant:
            x, y = y, x
        got = -1
        if 0 <= x < n_dmor and 0 <= y < n_dmor and d_cod[x] == d_dom[y]:
            got = d_comp[d_row_ptr[x] + d_out_pos[y]]
        if got < 0 or got != mor_map[h]:
            n = _put(out, n, 2, f, g, -1)
    return n


def functor_violations(s_dom, s_cod, s_ident, s_pair_f, s_pair_g, s_comp,
                       d_dom, d_cod, d_ident, d_row_ptr, d_out_pos, d_comp,
                       obj_map, mor_map, contravariant):
    args = (s_dom, s_cod, s_ident, s_pair_f, s_pair_g, s_comp,
            d_dom, d_cod, d_ident, d_row_ptr, d_out_pos, d_comp,
            obj_map, mor_map, bool(contravariant))
    return _collect(_functor_scan, args)


@njit(cache=True)
def _naturality_scan(s_dom, s_cod, n_sobj, d_dom, d_cod, d_row_ptr, d_out_pos, d_comp,
                     f_obj, f_mor, g_obj, g_mor, eta, contravariant, out):
    n_dmor = d_dom.shape[0]
    n = 0
    for a in range(n_sobj):
        e = eta[a]
        if e < 0 or e >= n_dmor or d_dom[e] != f_obj[a] or d_cod[e] != g_obj[a]:
            n = _put(out, n, 0, a, -1, -1)
    for f in range(s_dom.shape[0]):
        ea = eta[s_dom[f]]
        eb = eta[s_cod[f]]
        if contravariant:
            x1, y1, x2, y2 = f_mor[f], ea, eb, g_mor[f]
        else:
            x1, y1, x2, y2 = ea, g_mor[f], f_mor[f], eb
        lhs = -1
        if 0 <= x1 < n_dmor and 0 <= y1 < n_dmor and d_cod[x1] == d_dom[y1]:
            lhs = d_comp[d_row_ptr[x1] + d_out_pos[y1]]
        rhs = -1
        if 0 <= x2 < n_dmor and 0 <= y2 < n_dmor and d_cod[x2] == d_dom[y2]:
            rhs = d_comp[d_row_ptr[x2] + d_out_pos[y2]]
        if lhs < 0 or rhs < 0 or lhs != rhs:
            n = _put(out, n, 1, f, -1, -1)
    return n


def naturality_violations(s_dom, s_cod, n_sobj, d_dom, d_cod, d_row_ptr, d_out_pos, d_comp,
                          f_obj, f_mor, g_obj, g_mor, eta, contravariant):
    args = (s_dom, s_cod, int(n_sobj), d_dom, d_cod, d_row_ptr, d_out_pos, d_comp,
            f_obj, f_mor, g_obj, g_mor, eta, bool(contravariant))
    return _collect(_naturality_scan, args)


@njit(cache=True)
def _triangle_scan(c_dom, c_cod, c_ident, c_row_ptr, c_out_pos, c_comp,
                   d_dom, d_cod, d_ident, d_row_ptr, d_out_pos, d_comp,
                   f_obj, f_mor, g_obj, g_mor, unit, counit, out):
    n = 0
    n_cmor = c_dom.shape[0]
    n_dmor = d_dom.shape[0]
    for c in range(c_ident.shape[0]):
        u = unit[c]
        e = counit[g_obj[c]]
        got = -1
        if 0 <= u < n_cmor:
            x = g_mor[u]
            if 0 <= x < n_dmor and 0 <= e < n_dmor and d_cod[x] == d_dom[e]:
                got = d_comp[d_row_ptr[x] + d_out_pos[e]]
        if got < 0 or got != d_ident[g_obj[c]]:
            n = _put(out, n, 0, c, -1, -1)
    for d in range(d_ident.shape[0]):
        e = counit[d]
        got = -1
        if 0 <= e < n_dmor:
            x = unit[f_obj[d]]
            y = f_mor[e]
            if 0 <= x < n_cmor and 0 <= y < n_cmor and c_cod[x] == c_dom[y]:
                got = c_comp[c_row_ptr[x] + c_out_pos[y]]
        if got < 0 or got != c_ident[f_obj[d]]:
            n = _put(out, n, 1, d, -1, -1)
    return n


def triangle_violations(c_dom, c_cod, c_ident, c_row_ptr, c_out_pos, c_comp,
                        d_dom, d_cod, d_ident, d_row_ptr, d_out_pos, d_comp,
                        f_obj, f_mor, g_obj, g_mor, unit, counit):
    args = (c_dom, c_cod, c_ident, c_row_ptr, c_out_pos, c_comp,
            d_dom, d_cod, d_ident, d_row_ptr, d_out_pos, d_comp,
            f_obj, f_mor, g_obj, g_mor, unit, counit)
    return _collect(_triangle_scan, args)


@njit(cache=True)
def _roundtrip_scan(first_obj, second_obj, first_mor, second_mor, out):
    n = 0
    for a in range(first_obj.shape[0]):
        if second_obj[first_obj[a]] != a:
            n = _put(out, n, 0, a, -1, -1)
    for f in range(first_mor.shape[0]):
        if second_mor[first_mor[f]] != f:
            n = _put(out, n, 1, f, -1, -1)
    return n


def roundtrip_violations(first_obj, second_obj, first_mor, second_mor):
    return _collect(_roundtrip_scan, (first_obj, second_obj, first_mor, second_mor))


@njit(cache=True)
def _square_scan(p_dom, p_cod, a_dom, a_cod, r_obj, r_mor, rt_mor, out):
    n = 0
    for f in range(p_dom.shape[0]):
        rf = r_mor[f]
        if a_dom[rf] != r_obj[p_dom[f]] or a_cod[rf] != r_obj[p_cod[f]]:
            n = _put(out, n, 0, f, -1, -1)
        elif rt_mor[rf] != f:
            n = _put(out, n, 1, f, -1, -1)
    return n


def square_violations(p_dom, p_cod, a_dom, a_cod, r_obj, r_mor, rt_mor):
    return _collect(_square_scan, (p_dom, p_cod, a_dom, a_cod, r_obj, r_mor, rt_mor))


def _collect(scan, args):
    out = np.empty((_FIRST_BATCH, 4), dtype=np.int64)
    n = scan(*args, out)
    if n <= _FIRST_BATCH:
        return out[:n].copy()
    out = np.empty((n, 4), dtype=np.int64)
    scan(*args, out)
    return out
