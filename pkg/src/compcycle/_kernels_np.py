"""Pure-numpy law-check kernels.

Every kernel returns an ``(n, 4)`` int64 array of violation rows
``[code, a, b, c]`` (unused slots are -1). Rows are unsorted; callers sort.
Composition tables use the row layout built in :mod:`compcycle.core`: the
composite of ``f`` then ``g`` lives at ``comp[row_ptr[f] + out_pos[g]]``.
"""
import numpy as np

_EMPTY = np.empty((0, 4), dtype=np.int64)


def _rows(code, a, b=None, c=None):
    n = len(a)
    out = np.full((n, 4), -1, dtype=np.int64)
    out[:, 0] = code
    out[:, 1] = a
    if b is not None:
        out[:, 2] = b
    if c is not None:
        out[:, 3] = c
    return out


def _stack(parts):
    parts = [p for p in parts if len(p)]
    if not parts:
        return _EMPTY.copy()
    return np.concatenate(parts)


def _expand(starts, counts):
    """Flatten the ranges ``starts[i] .. starts[i] + counts[i]``."""
    total = int(counts.sum())
    owner = np.repeat(np.arange(len(counts)), counts)
    offsets = np.cumsum(counts) - counts
    pos = starts[owner] + (np.arange(total) - offsets[owner])
    return owner, pos


def _in_range(x, n):
    return (x >= 0) & (x < n)


def _lookup(comp, row_ptr, out_pos, dom, cod, f, g):
    """Composite of f then g, or -1 when not composable or not tabulated."""
    n = len(dom)
    ok = _in_range(f, n) & _in_range(g, n)
    fs = np.where(ok, f, 0)
    gs = np.where(ok, g, 0)
    ok &= cod[fs] == dom[gs]
    idx = np.where(ok, row_ptr[fs] + out_pos[gs], 0)
    if len(comp) == 0:
        return np.full(len(f), -1, dtype=np.int64)
    return np.where(ok, comp[np.minimum(idx, len(comp) - 1)], -1)


def category_violations(dom, cod, ident, out_ptr, out_list, out_pos, row_ptr,
                        pair_f, pair_g, comp, null):
    n_obj = len(ident)
    n_mor = len(dom)
    objs = np.arange(n_obj)
    parts = []

    has = ident >= 0
    parts.append(_rows(0, objs[~has]))
    idn = np.where(has, ident, 0)
    if n_mor:
        bad = has & ((dom[idn] != objs) | (cod[idn] != objs))
    else:
        bad = has.copy()
    parts.append(_rows(1, objs[bad], ident[bad]))
    good_id = has & ~bad

    present = comp >= 0
    h = np.where(present, comp, 0)
    typed = present.copy()
    if len(comp):
        typed &= (dom[h] == dom[pair_f]) & (cod[h] == cod[pair_g])
    ill = present & ~typed
    parts.append(_rows(2, pair_f[ill], pair_g[ill], comp[ill]))
    parts.append(_rows(3, pair_f[~present], pair_g[~present]))

    if n_mor:
        f = np.arange(n_mor)
        ok = good_id[dom]
        left = comp[np.where(ok, row_ptr[ident[dom]] + out_pos[f], 0)] if len(comp) else f
        parts.append(_rows(4, f[ok & (left != f)]))
        ok = good_id[cod]
        right = comp[np.where(ok, row_ptr[f] + out_pos[np.where(ok, ident[cod], 0)], 0)] if len(comp) else f
        parts.append(_rows(5, f[ok & (right != f)]))

    # associativity over every typed entry (f, g) and every k leaving cod(g)
    e = np.nonzero(typed)[0]
    if len(e):
        b = cod[pair_g[e]]
        owner, pos = _expand(out_ptr[b], out_ptr[b + 1] - out_ptr[b])
        ee = e[owner]
        ff, gg, hh = pair_f[ee], pair_g[ee], comp[ee]
        kk = out_list[pos]
        lhs = comp[row_ptr[hh] + out_pos[kk]]
        gk = comp[row_ptr[gg] + out_pos[kk]]
        gks = np.where(gk >= 0, gk, 0)
        rhs_ok = (gk >= 0) & (dom[gks] == dom[gg]) & (cod[gks] == cod[kk])
        rhs = np.where(rhs_ok, comp[row_ptr[ff] + out_pos[gks]], -1)
        bad = (lhs >= 0) & rhs_ok & (rhs >= 0) & (lhs != rhs)
        parts.append(_rows(6, ff[bad], gg[bad], kk[bad]))

    if null >= 0:
        frm = out_list[out_ptr[null]:out_ptr[null + 1]]
        n_from = np.bincount(cod[frm], minlength=n_obj)
        n_to = np.bincount(dom[cod == null], minlength=n_obj)
        parts.append(_rows(7, objs[n_from != 1]))
        parts.append(_rows(8, objs[n_to != 1]))
    return _stack(parts)


def functor_violations(s_dom, s_cod, s_ident, s_pair_f, s_pair_g, s_comp,
                       d_dom, d_cod, d_ident, d_row_ptr, d_out_pos, d_comp,
                       obj_map, mor_map, contravariant):
    n_dobj = len(d_ident)
    n_dmor = len(d_dom)
    parts = []
    if len(s_dom):
        fm = mor_map
        ok = _in_range(fm, n_dmor)
        fs = np.where(ok, fm, 0)
        a = obj_map[s_dom]
        b = obj_map[s_cod]
        if contravariant:
            a, b = b, a
        if n_dmor:
            ok &= (d_dom[fs] == a) & (d_cod[fs] == b)
        parts.append(_rows(0, np.nonzero(~ok)[0]))

    objs = np.arange(len(s_ident))
    has = s_ident >= 0
    valid = _in_range(obj_map, n_dobj)
    target = np.where(valid, obj_map, 0)
    want = d_ident[target] if n_dobj else np.full(len(objs), -1)
    got = mor_map[np.where(has, s_ident, 0)] if len(s_dom) else np.full(len(objs), -1)
    bad = has & (~valid | (got != want) | (want < 0))
    parts.append(_rows(1, objs[bad]))

    present = s_comp >= 0
    if present.any():
        f = s_pair_f[present]
        g = s_pair_g[present]
        h = s_comp[present]
        x, y = mor_map[f], mor_map[g]
        if contravariant:
            x, y = y, x
        got = _lookup(d_comp, d_row_ptr, d_out_pos, d_dom, d_cod, x, y)
        bad = (got < 0) | (got != mor_map[h])
        parts.append(_rows(2, f[bad], g[bad]))
    return _stack(parts)


def naturality_violations(s_dom, s_cod, n_sobj,
                          d_dom, d_cod, d_row_ptr, d_out_pos, d_comp,
                          f_obj, f_mor, g_obj, g_mor, eta, contravariant):
    n_dmor = len(d_dom)
    objs = np.arange(n_sobj)
    ok = _in_range(eta, n_dmor)
    es = np.where(ok, eta, 0)
    if n_dmor:
        ok &= (d_dom[es] == f_obj) & (d_cod[es] == g_obj)
    parts = [_rows(0, objs[~ok])]
    if len(s_dom):
        ea = eta[s_dom]
        eb = eta[s_cod]
        if contravariant:
            lhs = _lookup(d_comp, d_row_ptr, d_out_pos, d_dom, d_cod, f_mor, ea)
            rhs = _lookup(d_comp, d_row_ptr, d_out_pos, d_dom, d_cod, eb, g_mor)
        else:
            lhs = _lookup(d_comp, d_row_ptr, d_out_pos, d_dom, d_cod, ea, g_mor)
            rhs = _lookup(d_comp, d_row_ptr, d_out_pos, d_dom, d_cod, f_mor, eb)
        bad = (lhs < 0) | (rhs < 0) | (lhs != rhs)
        parts.append(_rows(1, np.nonzero(bad)[0]))
    return _stack(parts)


def triangle_violations(c_dom, c_cod, c_ident, c_row_ptr, c_out_pos, c_comp,
                        d_dom, d_cod, d_ident, d_row_ptr, d_out_pos, d_comp,
                        f_obj, f_mor, g_obj, g_mor, unit, counit):
    parts = []
    # counit at G(c) after G(unit at c) is the identity on G(c)
    c = np.arange(len(c_ident))
    if len(c):
        x = g_mor[unit]
        y = counit[g_obj]
        got = _lookup(d_comp, d_row_ptr, d_out_pos, d_dom, d_cod, x, y)
        bad = (got < 0) | (got != d_ident[g_obj])
        parts.append(_rows(0, c[bad]))
    # F(counit at d) after unit at F(d) is the identity on F(d)
    d = np.arange(len(d_ident))
    if len(d):
        x = unit[f_obj]
        y = f_mor[counit]
        got = _lookup(c_comp, c_row_ptr, c_out_pos, c_dom, c_cod, x, y)
        bad = (got < 0) | (got != c_ident[f_obj])
        parts.append(_rows(1, d[bad]))
    return _stack(parts)


def roundtrip_violations(first_obj, second_obj, first_mor, second_mor):
    """Where ``second`` after ``first`` is not the identity."""
    parts = []
    o = np.arange(len(first_obj))
    parts.append(_rows(0, o[second_obj[first_obj] != o]))
    m = np.arange(len(first_mor))
    parts.append(_rows(1, m[second_mor[first_mor] != m]))
    return _stack(parts)


def square_violations(p_dom, p_cod, a_dom, a_cod, r_obj, r_mor, rt_mor):
    """Per source morphism: image typed between the images of its ends, and
    carried back to itself by the reverse map."""
    if len(p_dom) == 0:
        return _EMPTY.copy()
    f = np.arange(len(p_dom))
    rf = r_mor
    typed = (a_dom[rf] == r_obj[p_dom]) & (a_cod[rf] == r_obj[p_cod])
    back = rt_mor[rf] == f
    parts = [_rows(0, f[~typed]), _rows(1, f[typed & ~back])]
    return _stack(parts)
