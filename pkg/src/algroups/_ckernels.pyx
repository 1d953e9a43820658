# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels`` (same signatures)."""
import numpy as np
cimport numpy as cnp

ctypedef cnp.int64_t i64

cnp.import_array()


cdef inline void _mul_row(const i64[:, ::1] x, Py_ssize_t rx, const i64[:, ::1] y, Py_ssize_t ry,
                          const i64[:, ::1] terms, const i64[:, ::1] add, const i64[:, ::1] mul,
                          i64[:, ::1] out, Py_ssize_t ro) noexcept nogil:
    cdef Py_ssize_t t, l
    cdef Py_ssize_t d = out.shape[1]
    for l in range(d):
        out[ro, l] = 0
    for t in range(terms.shape[0]):
        l = terms[t, 2]
        out[ro, l] = add[out[ro, l], mul[mul[x[rx, terms[t, 0]], y[ry, terms[t, 1]]], terms[t, 3]]]


def _c64(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def alg_mul(x, y, terms, add, mul):
    cdef const i64[:, ::1] X = _c64(x)
    cdef const i64[:, ::1] Y = _c64(y)
    cdef const i64[:, ::1] T = _c64(terms).reshape(-1, 4)
    cdef const i64[:, ::1] AD = _c64(add)
    cdef const i64[:, ::1] MU = _c64(mul)
    out = np.zeros((X.shape[0], X.shape[1]), dtype=np.int64)
    cdef i64[:, ::1] O = out
    cdef Py_ssize_t r
    with nogil:
        for r in range(X.shape[0]):
            _mul_row(X, r, Y, r, T, AD, MU, O, r)
    return out


def grp_mul(x, y, terms, add, mul):
    cdef const i64[:, ::1] X = _c64(x)
    cdef const i64[:, ::1] Y = _c64(y)
    cdef const i64[:, ::1] T = _c64(terms).reshape(-1, 4)
    cdef const i64[:, ::1] AD = _c64(add)
    cdef const i64[:, ::1] MU = _c64(mul)
    out = np.zeros((X.shape[0], X.shape[1]), dtype=np.int64)
    cdef i64[:, ::1] O = out
    cdef Py_ssize_t r, l
    with nogil:
        for r in range(X.shape[0]):
            _mul_row(X, r, Y, r, T, AD, MU, O, r)
            for l in range(X.shape[1]):
                O[r, l] = AD[AD[X[r, l], Y[r, l]], O[r, l]]
    return out


cdef void _inv_rows(const i64[:, ::1] X, const i64[:, ::1] T, const i64[:, ::1] AD,
                    const i64[:, ::1] MU, const i64[::1] NG, int nclass,
                    i64[:, ::1] B, i64[:, ::1] tmp) noexcept nogil:
    cdef Py_ssize_t r, l, it
    cdef Py_ssize_t d = X.shape[1]
    for r in range(X.shape[0]):
        for l in range(d):
            B[r, l] = NG[X[r, l]]
        for it in range(nclass):
            _mul_row(X, r, B, r, T, AD, MU, tmp, 0)
            for l in range(d):
                B[r, l] = AD[NG[X[r, l]], NG[tmp[0, l]]]


def grp_inv(x, terms, add, mul, neg, nclass):
    cdef const i64[:, ::1] X = _c64(x)
    cdef const i64[:, ::1] T = _c64(terms).reshape(-1, 4)
    cdef const i64[:, ::1] AD = _c64(add)
    cdef const i64[:, ::1] MU = _c64(mul)
    cdef const i64[::1] NG = _c64(neg)
    out = np.zeros((X.shape[0], X.shape[1]), dtype=np.int64)
    tmp = np.zeros((1, X.shape[1]), dtype=np.int64)
    cdef i64[:, ::1] O = out
    cdef i64[:, ::1] TM = tmp
    cdef int nc = nclass
    with nogil:
        _inv_rows(X, T, AD, MU, NG, nc, O, TM)
    return out


def grp_conj(x, g, terms, add, mul, neg, nclass):
    """g x g^{-1}, rowwise (g may be a single row broadcast against x)."""
    x = _c64(x)
    g = _c64(g)
    if g.shape[0] != x.shape[0]:
        g = np.ascontiguousarray(np.broadcast_to(g, x.shape))
    gi = grp_inv(g, terms, add, mul, neg, nclass)
    return grp_mul(grp_mul(g, x, terms, add, mul), gi, terms, add, mul)


def grp_comm(x, y, terms, add, mul, neg, nclass):
    """x y x^{-1} y^{-1}, rowwise."""
    xi = grp_inv(x, terms, add, mul, neg, nclass)
    yi = grp_inv(y, terms, add, mul, neg, nclass)
    t = grp_mul(grp_mul(x, y, terms, add, mul), xi, terms, add, mul)
    return grp_mul(t, yi, terms, add, mul)


cdef inline void _hmul(i64 s1, const i64* a1, i64 s2, const i64* a2, Py_ssize_t d,
                       const i64[:, ::1] T, const i64[:, ::1] AD, const i64[:, ::1] MU,
                       i64* so, i64* ao) noexcept nogil:
    # (s1 + a1)(s2 + a2) = s1 s2 + (s1 a2 + s2 a1 + a1 a2); ao must not alias a1/a2
    cdef Py_ssize_t t, l
    so[0] = MU[s1, s2]
    for l in range(d):
        ao[l] = AD[MU[s1, a2[l]], MU[s2, a1[l]]]
    for t in range(T.shape[0]):
        l = T[t, 2]
        ao[l] = AD[ao[l], MU[MU[a1[T[t, 0]], a2[T[t, 1]]], T[t, 3]]]


cdef inline void _hinv(i64 s, const i64* a, Py_ssize_t d, const i64[:, ::1] T,
                       const i64[:, ::1] AD, const i64[:, ::1] MU, const i64[::1] NG,
                       const i64[::1] INV, int nclass, i64* so, i64* ao,
                       i64* u, i64* b, i64* tmp) noexcept nogil:
    # (s + a)^{-1} = s^{-1} (1 + s^{-1} a)^{-1}
    cdef Py_ssize_t l, t, it
    cdef i64 si = INV[s]
    for l in range(d):
        u[l] = MU[si, a[l]]
        b[l] = NG[u[l]]
    for it in range(nclass):
        for l in range(d):
            tmp[l] = 0
        for t in range(T.shape[0]):
            l = T[t, 2]
            tmp[l] = AD[tmp[l], MU[MU[u[T[t, 0]], b[T[t, 1]]], T[t, 3]]]
        for l in range(d):
            b[l] = AD[NG[u[l]], NG[tmp[l]]]
    so[0] = si
    for l in range(d):
        ao[l] = MU[si, b[l]]


def unipotent_det(scal, nil, terms, add, mul, neg, inv, nclass):
    """Batched Dieudonne determinant of matrices congruent to I mod the radical."""
    S_arr = np.array(scal, dtype=np.int64, order="C", copy=True)
    A_arr = np.array(nil, dtype=np.int64, order="C", copy=True)
    cdef i64[:, :, ::1] S = S_arr
    cdef i64[:, :, :, ::1] A = A_arr
    cdef const i64[:, ::1] T = _c64(terms).reshape(-1, 4)
    cdef const i64[:, ::1] AD = _c64(add)
    cdef const i64[:, ::1] MU = _c64(mul)
    cdef const i64[::1] NG = _c64(neg)
    cdef const i64[::1] INV = _c64(inv)
    cdef Py_ssize_t N = S.shape[0]
    cdef Py_ssize_t n = S.shape[1]
    cdef Py_ssize_t d = A.shape[3]
    cdef int nc = nclass
    ds_arr = np.zeros(N, dtype=np.int64)
    da_arr = np.zeros((N, d), dtype=np.int64)
    cdef i64[::1] DS = ds_arr
    cdef i64[:, ::1] DA = da_arr
    work = np.zeros((8, max(d, 1)), dtype=np.int64)
    cdef i64[:, ::1] W = work
    cdef i64 ps, fs, ts, acc_s
    cdef Py_ssize_t k, c, i, j, l
    with nogil:
        for k in range(N):
            for c in range(n):
                _hinv(S[k, c, c], &A[k, c, c, 0], d, T, AD, MU, NG, INV, nc,
                      &ps, &W[0, 0], &W[1, 0], &W[2, 0], &W[3, 0])
                for i in range(c + 1, n):
                    _hmul(S[k, i, c], &A[k, i, c, 0], ps, &W[0, 0], d, T, AD, MU, &fs, &W[4, 0])
                    for j in range(c, n):
                        _hmul(fs, &W[4, 0], S[k, c, j], &A[k, c, j, 0], d, T, AD, MU, &ts, &W[5, 0])
                        S[k, i, j] = AD[S[k, i, j], NG[ts]]
                        for l in range(d):
                            A[k, i, j, l] = AD[A[k, i, j, l], NG[W[5, l]]]
            acc_s = S[k, 0, 0]
            for l in range(d):
                W[6, l] = A[k, 0, 0, l]
            for c in range(1, n):
                _hmul(acc_s, &W[6, 0], S[k, c, c], &A[k, c, c, 0], d, T, AD, MU, &ts, &W[7, 0])
                acc_s = ts
                for l in range(d):
                    W[6, l] = W[7, l]
            DS[k] = acc_s
            for l in range(d):
                DA[k, l] = W[6, l]
    return ds_arr, da_arr
