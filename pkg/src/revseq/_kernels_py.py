"""NumPy implementation of the search kernels.

Used when the compiled ``_kernels`` extension is not built.  Both
implementations must return identical fingerprints; see
``tests/test_kernels.py``.

Primitive table rows are ``(op, control_mask, target_mask)`` with op 0 = swap
(X / CX), 1 = CV, 2 = CVDG; a zero control mask means "always".
"""

import numpy as np

A = (1 + 1j) / 2
B = (1 - 1j) / 2

SCALE = float(1 << 30)
ZERO_TOL = 1e-12
PERM_TOL = 1e-9

_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_SEEDS = (np.uint64(0x243F6A8885A308D3), np.uint64(0x13198A2E03707344))
_SALTS = (np.uint64(0xA4093822299F31D0), np.uint64(0x082EFA98EC4E6C89))

CHUNK = 4096


def _mix(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _row_pairs(dim, cmask, tmask):
    rows = np.arange(dim)
    r0 = rows[((rows & cmask) == cmask) & ((rows & tmask) == 0)]
    return r0, r0 | tmask


def _apply(mats, op, cmask, tmask):
    """Left-multiply a stack of matrices by one primitive."""
    dim = mats.shape[-1]
    r0, r1 = _row_pairs(dim, cmask, tmask)
    out = mats.copy()
    if op == 0:
        out[:, r0] = mats[:, r1]
        out[:, r1] = mats[:, r0]
    else:
        a, b = (A, B) if op == 1 else (B, A)
        out[:, r0] = a * mats[:, r0] + b * mats[:, r1]
        out[:, r1] = b * mats[:, r0] + a * mats[:, r1]
    return out


def _canonical(flat):
    n = flat.shape[0]
    first = np.argmax(np.abs(flat) > ZERO_TOL, axis=1)
    return flat * np.conj(flat[np.arange(n), first])[:, None]


def _hash(canon):
    with np.errstate(over="ignore"):
        q = np.rint(canon.view(np.float64) * SCALE).astype(np.int64).view(np.uint64)
        out = np.empty((q.shape[0], 2), dtype=np.uint64)
        for lane in range(2):
            h = np.full(q.shape[0], _SEEDS[lane], dtype=np.uint64)
            salt = _SALTS[lane]
            for j in range(q.shape[1]):
                h = _mix(h ^ (q[:, j] + salt))
            out[:, lane] = h
    return out


def _is_perm(canon):
    re, im = canon.real, canon.imag
    small_im = np.abs(im) < PERM_TOL
    zero = (np.abs(re) < PERM_TOL) & small_im
    one = (np.abs(re - 1.0) < PERM_TOL) & small_im
    return np.all(zero | one, axis=1)


def canonical_fingerprints(mats):
    """Phase-invariant 128-bit fingerprints of a stack of matrices."""
    mats = np.ascontiguousarray(mats, dtype=np.complex128)
    n = mats.shape[0]
    flat = mats.reshape(n, -1)
    return _hash(_canonical(flat))


def expand_fingerprints(frontier, prims):
    """Fingerprint ``prim @ U`` for every frontier matrix and primitive.

    Returns ``(hashes[F, P, 2], is_perm[F, P])``.
    """
    frontier = np.ascontiguousarray(frontier, dtype=np.complex128)
    F, dim, _ = frontier.shape
    P = len(prims)
    hashes = np.empty((F, P, 2), dtype=np.uint64)
    perm = np.empty((F, P), dtype=bool)
    for lo in range(0, F, CHUNK):
        block = frontier[lo:lo + CHUNK]
        for pi, (op, cm, tm) in enumerate(prims):
            flat = _apply(block, int(op), int(cm), int(tm)).reshape(len(block), -1)
            canon = _canonical(flat)
            hashes[lo:lo + len(block), pi] = _hash(canon)
            perm[lo:lo + len(block), pi] = _is_perm(canon)
    return hashes, perm


def apply_selected(frontier, prims, fidx, pidx):
    """Materialize ``prims[pidx[k]] @ frontier[fidx[k]]`` for each k."""
    frontier = np.ascontiguousarray(frontier, dtype=np.complex128)
    fidx = np.asarray(fidx, dtype=np.int64)
    pidx = np.asarray(pidx, dtype=np.int64)
    out = np.empty((len(fidx),) + frontier.shape[1:], dtype=np.complex128)
    for pi, (op, cm, tm) in enumerate(prims):
        sel = np.nonzero(pidx == pi)[0]
        if len(sel):
            out[sel] = _apply(frontier[fidx[sel]], int(op), int(cm), int(tm))
    return out
