"""Independent brute-force reference for the cost atlas.

Shares nothing with the search kernels: full matrix products, a different
phase normalization (divide by the largest-magnitude entry of the first
nonzero column) and rounded-tuple keys.
"""

import numpy as np

from revseq.quantum import primitive_unitary
from revseq.synth import enumerate_primitives


def _key(u):
    col = u[:, np.argmax(np.abs(u).sum(axis=0) > 1e-9)]
    ph = col[np.argmax(np.abs(col))]
    c = u * (abs(ph) / ph)
    return tuple(np.round(c.real, 6).ravel()) + tuple(np.round(c.imag, 6).ravel())


def _perm_of(u):
    a = np.abs(u)
    if not np.allclose(a, np.round(a), atol=1e-9):
        return None
    rows = np.argmax(a, axis=0)
    ph = u[rows[0], 0]
    if np.allclose(u[rows, np.arange(len(u))], ph, atol=1e-9):
        return tuple(int(r) for r in rows)
    return None


def reachable_permutations(width, max_len):
    """{permutation map: shortest length} over all NCV sequences of length <= max_len."""
    mats = [primitive_unitary(p, width) for p in enumerate_primitives(width)]
    ident = np.eye(1 << width, dtype=complex)
    seen = {_key(ident)}
    frontier = [ident]
    found = {tuple(range(1 << width)): 0}
    for length in range(1, max_len + 1):
        nxt = []
        for u in frontier:
            for m in mats:
                v = m @ u
                k = _key(v)
                if k in seen:
                    continue
                seen.add(k)
                if length < max_len:
                    nxt.append(v)
                p = _perm_of(v)
                if p is not None:
                    found.setdefault(p, length)
        frontier = nxt
    return found
