# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels; same contract as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport rint, fabs
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()

cdef double SCALE = <double>(1 << 30)
cdef double ZERO_TOL = 1e-12
cdef double PERM_TOL = 1e-9

cdef uint64_t M1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t M2 = 0x94D049BB133111EBULL
cdef uint64_t SEED0 = 0x243F6A8885A308D3ULL
cdef uint64_t SEED1 = 0x13198A2E03707344ULL
cdef uint64_t SALT0 = 0xA4093822299F31D0ULL
cdef uint64_t SALT1 = 0x082EFA98EC4E6C89ULL


cdef inline uint64_t mix(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * M1
    z = (z ^ (z >> 27)) * M2
    return z ^ (z >> 31)


cdef inline void apply_prim(double complex* src, double complex* dst, int dim,
                            int op, int cmask, int tmask) nogil:
    cdef int r, r1, k
    cdef double complex a, b, x0, x1
    for k in range(dim * dim):
        dst[k] = src[k]
    if op == 1:
        a = 0.5 + 0.5j
        b = 0.5 - 0.5j
    else:
        a = 0.5 - 0.5j
        b = 0.5 + 0.5j
    for r in range(dim):
        if (r & cmask) != cmask or (r & tmask) != 0:
            continue
        r1 = r | tmask
        for k in range(dim):
            x0 = src[r * dim + k]
            x1 = src[r1 * dim + k]
            if op == 0:
                dst[r * dim + k] = x1
                dst[r1 * dim + k] = x0
            else:
                dst[r * dim + k] = a * x0 + b * x1
                dst[r1 * dim + k] = b * x0 + a * x1


cdef inline int fingerprint(double complex* m, int n, uint64_t* h0, uint64_t* h1) nogil:
    """Hash the phase-canonical form of m[0:n]; return 1 if it is a 0/1 matrix."""
    cdef int k, first = 0
    cdef double complex ph, c
    cdef double re, im
    cdef uint64_t a = SEED0, b = SEED1, q
    cdef int perm = 1
    for k in range(n):
        if m[k].real * m[k].real + m[k].imag * m[k].imag > ZERO_TOL * ZERO_TOL:
            first = k
            break
    ph = m[first].real - 1j * m[first].imag
    for k in range(n):
        c = m[k] * ph
        re = c.real
        im = c.imag
        if perm:
            if not ((fabs(re) < PERM_TOL and fabs(im) < PERM_TOL) or (fabs(re - 1.0) < PERM_TOL and fabs(im) < PERM_TOL)):
                perm = 0
        q = <uint64_t><int64_t>rint(re * SCALE)
        a = mix(a ^ (q + SALT0))
        b = mix(b ^ (q + SALT1))
        q = <uint64_t><int64_t>rint(im * SCALE)
        a = mix(a ^ (q + SALT0))
        b = mix(b ^ (q + SALT1))
    h0[0] = a
    h1[0] = b
    return perm


def canonical_fingerprints(mats):
    cdef double complex[:, :, ::1] M = np.ascontiguousarray(mats, dtype=np.complex128)
    cdef Py_ssize_t N = M.shape[0], i
    cdef int n = M.shape[1] * M.shape[2]
    out = np.empty((N, 2), dtype=np.uint64)
    cdef uint64_t[:, ::1] H = out
    for i in range(N):
        fingerprint(&M[i, 0, 0], n, &H[i, 0], &H[i, 1])
    return out


def expand_fingerprints(frontier, prims):
    cdef double complex[:, :, ::1] U = np.ascontiguousarray(frontier, dtype=np.complex128)
    cdef int64_t[:, ::1] T = np.ascontiguousarray(prims, dtype=np.int64)
    cdef Py_ssize_t F = U.shape[0], P = T.shape[0], f, p
    cdef int dim = U.shape[1]
    hashes = np.empty((F, P, 2), dtype=np.uint64)
    perm = np.empty((F, P), dtype=np.uint8)
    cdef uint64_t[:, :, ::1] H = hashes
    cdef cnp.uint8_t[:, ::1] R = perm
    scratch = np.empty((dim, dim), dtype=np.complex128)
    cdef double complex[:, ::1] S = scratch
    with nogil:
        for f in range(F):
            for p in range(P):
                apply_prim(&U[f, 0, 0], &S[0, 0], dim, <int>T[p, 0], <int>T[p, 1], <int>T[p, 2])
                R[f, p] = fingerprint(&S[0, 0], dim * dim, &H[f, p, 0], &H[f, p, 1])
    return hashes, perm.astype(bool)


def apply_selected(frontier, prims, fidx, pidx):
    cdef double complex[:, :, ::1] U = np.ascontiguousarray(frontier, dtype=np.complex128)
    cdef int64_t[:, ::1] T = np.ascontiguousarray(prims, dtype=np.int64)
    cdef int64_t[::1] FI = np.ascontiguousarray(fidx, dtype=np.int64)
    cdef int64_t[::1] PI = np.ascontiguousarray(pidx, dtype=np.int64)
    cdef Py_ssize_t K = FI.shape[0], k
    cdef int dim = U.shape[1]
    out = np.empty((K, dim, dim), dtype=np.complex128)
    cdef double complex[:, :, ::1] O = out
    with nogil:
        for k in range(K):
            apply_prim(&U[FI[k], 0, 0], &O[k, 0, 0], dim,
                       <int>T[PI[k], 0], <int>T[PI[k], 1], <int>T[PI[k], 2])
    return out
