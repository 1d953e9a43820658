"""Numpy implementations of the hot kernels (the portable fallback).

All arrays hold field-element encodings as int64.  ``terms`` is an
(n_terms, 4) array of nonzero structure constants (i, j, l, c) meaning
b_i * b_j contributes c * b_l.  ``add`` / ``mul`` are the field tables.
"""
from __future__ import annotations

import numpy as np


def alg_mul(x, y, terms, add, mul):
    n, d = x.shape
    out = np.zeros((n, d), dtype=np.int64)
    for i, j, l, c in terms:
        out[:, l] = add[out[:, l], mul[mul[x[:, i], y[:, j]], c]]
    return out


def grp_mul(x, y, terms, add, mul):
    return add[add[x, y], alg_mul(x, y, terms, add, mul)]


def grp_inv(x, terms, add, mul, neg, nclass):
    # (1+a)^{-1} = 1+b with b = -a - a*b; nclass iterations reach the fixed point
    minus_a = neg[x]
    b = minus_a.copy()
    for _ in range(nclass):
        b = add[minus_a, neg[alg_mul(x, b, terms, add, mul)]]
    return b


def grp_conj(x, g, terms, add, mul, neg, nclass):
    """g x g^{-1}, rowwise (g may be a single row broadcast against x)."""
    if g.shape[0] != x.shape[0]:
        g = np.broadcast_to(g, x.shape).copy()
    gi = grp_inv(g, terms, add, mul, neg, nclass)
    return grp_mul(grp_mul(g, x, terms, add, mul), gi, terms, add, mul)


def grp_comm(x, y, terms, add, mul, neg, nclass):
    """x y x^{-1} y^{-1}, rowwise."""
    xi = grp_inv(x, terms, add, mul, neg, nclass)
    yi = grp_inv(y, terms, add, mul, neg, nclass)
    t = grp_mul(grp_mul(x, y, terms, add, mul), xi, terms, add, mul)
    return grp_mul(t, yi, terms, add, mul)


def _hull_mul(s1, a1, s2, a2, terms, add, mul):
    s = mul[s1, s2]
    a = add[add[mul[s1[:, None], a2], mul[s2[:, None], a1]], alg_mul(a1, a2, terms, add, mul)]
    return s, a


def _hull_inv(s, a, terms, add, mul, neg, inv, nclass):
    si = inv[s]
    u = mul[si[:, None], a]
    v = grp_inv(u, terms, add, mul, neg, nclass)
    return si, mul[si[:, None], v]


def unipotent_det(scal, nil, terms, add, mul, neg, inv, nclass):
    """Batched Dieudonne determinant of matrices congruent to I mod the radical.

    ``scal`` has shape (N, n, n), ``nil`` shape (N, n, n, d).  The diagonal
    pivots are units, so elimination needs no row swaps.  Returns the ordered
    product of the final diagonal entries as (scalars (N,), nil parts (N, d)).
    """
    scal = scal.copy()
    nil = nil.copy()
    N, n, _ = scal.shape
    for c in range(n):
        ps, pa = _hull_inv(scal[:, c, c], nil[:, c, c], terms, add, mul, neg, inv, nclass)
        for i in range(c + 1, n):
            fs, fa = _hull_mul(scal[:, i, c], nil[:, i, c], ps, pa, terms, add, mul)
            for j in range(c, n):
                ts, ta = _hull_mul(fs, fa, scal[:, c, j], nil[:, c, j], terms, add, mul)
                scal[:, i, j] = add[scal[:, i, j], neg[ts]]
                nil[:, i, j] = add[nil[:, i, j], neg[ta]]
    ds, da = scal[:, 0, 0].copy(), nil[:, 0, 0].copy()
    for c in range(1, n):
        ds, da = _hull_mul(ds, da, scal[:, c, c], nil[:, c, c], terms, add, mul)
    return ds, da
