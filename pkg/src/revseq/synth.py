"""Exhaustive NCV synthesis: cost atlas, minimum-cost search, MPG derivation.

The atlas is a breadth-first search over primitive sequences.  Sequences are
deduplicated by a phase-invariant fingerprint of their unitary, so each
level holds one representative per unitary class, namely the
lexicographically smallest sequence of minimal length (the frontier is kept
in lexicographic order and primitives are tried in ``enumerate_primitives``
order).  A class whose canonical form is a 0/1 matrix realizes a
permutation.

Targets beyond the atlas bound are reached meet-in-the-middle: a target T of
length ``l1 + l2`` factors as ``U2 @ U1`` with both halves inside the
atlas's stored levels, so ``T @ U1^dagger`` is looked up for every stored U1.
"""

from __future__ import annotations

import hashlib
import itertools
import logging
import math
import time
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import _backend
from .errors import SearchBoundError, SynthesisFailure
from .perm import GateDef, Permutation, decode
from .quantum import (
    Primitive,
    QuantumCircuit,
    circuit_unitary,
    equals_permutation,
    parse_primitive,
    quantum_cost,
)

log = logging.getLogger(__name__)

MAX_ATLAS_WIDTH = 3
MAX_ATLAS_COST = 5
SNAPSHOT_VERSION = 1

_VOID16 = np.dtype((np.void, 16))


def enumerate_primitives(width: int) -> List[Primitive]:
    """All X, then CX, CV, CVDG over ordered (control, target) pairs."""
    if not 1 <= width <= 4:
        raise ValueError(f"width must be in 1..4, got {width}")
    prims = [Primitive("X", t) for t in range(width)]
    for kind in ("CX", "CV", "CVDG"):
        for c in range(width):
            for t in range(width):
                if c != t:
                    prims.append(Primitive(kind, t, c))
    return prims


def primitive_table(prims: Sequence[Primitive], width: int) -> np.ndarray:
    """Rows ``(op, control_mask, target_mask)`` for the kernels."""
    ops = {"X": 0, "CX": 0, "CV": 1, "CVDG": 2}
    rows = []
    for p in prims:
        cm = 0 if p.control is None else 1 << (width - 1 - p.control)
        rows.append((ops[p.kind], cm, 1 << (width - 1 - p.target)))
    return np.array(rows, dtype=np.int64)


def _keys(hashes: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(hashes.reshape(-1, 2)).view(_VOID16).ravel()


@dataclass(frozen=True)
class AtlasEntry:
    cost: int
    witness: Tuple[int, ...]


class _ClassIndex:
    """Search state kept after a build: stored unitary classes and their parents.

    Classes of level < max_cost are "inner": their matrices, fingerprints and
    every minimal-length parent edge are kept.  Last-level classes are kept
    only when they realize a permutation.
    """

    def __init__(self, width, max_cost):
        self.width = width
        self.max_cost = max_cost
        self.level: List[int] = []
        self.mats: Optional[np.ndarray] = None
        self.inner_keys_sorted: Optional[np.ndarray] = None
        self.inner_ids_sorted: Optional[np.ndarray] = None
        self.parents: Dict[int, List[Tuple[int, int]]] = defaultdict(list)
        self.perm_class: Dict[Tuple[int, ...], int] = {}
        self.level_sizes: List[int] = []
        self._dagger: Optional[np.ndarray] = None

    @property
    def dagger(self) -> np.ndarray:
        if self._dagger is None:
            self._dagger = np.ascontiguousarray(np.conj(np.transpose(self.mats, (0, 2, 1))))
        return self._dagger

    @property
    def n_inner(self):
        return 0 if self.mats is None else len(self.mats)

    def lookup_inner(self, keys: np.ndarray) -> np.ndarray:
        """Class id for each key, or -1."""
        pos = np.searchsorted(self.inner_keys_sorted, keys)
        pos = np.minimum(pos, len(self.inner_keys_sorted) - 1)
        hit = self.inner_keys_sorted[pos] == keys
        return np.where(hit, self.inner_ids_sorted[pos], -1)

    def paths(self, cid: int, cap: int = 100000) -> List[Tuple[int, ...]]:
        """Every minimal-length primitive sequence of class ``cid``."""
        memo: Dict[int, List[Tuple[int, ...]]] = {}

        def walk(c):
            if c in memo:
                return memo[c]
            if self.level[c] == 0:
                out = [()]
            else:
                out = []
                for parent, prim in self.parents[c]:
                    out.extend(s + (prim,) for s in walk(parent))
                    if len(out) > cap:
                        raise SynthesisFailure(f"more than {cap} minimal realizations; refusing to enumerate")
            memo[c] = out
            return out

        return walk(cid)


class CostAtlas:
    """Map from permutation code array to (minimum NCV count, witness)."""

    def __init__(self, width: int, max_cost: int, entries: Dict[Tuple[int, ...], AtlasEntry],
                 index: Optional[_ClassIndex] = None):
        self.width = width
        self.max_cost = max_cost
        self.entries = entries
        self._index = index
        self.primitives = enumerate_primitives(width)

    def __len__(self):
        return len(self.entries)

    def __contains__(self, perm):
        return _perm_key(perm) in self.entries

    def lookup(self, perm) -> Optional[AtlasEntry]:
        return self.entries.get(_perm_key(perm))

    def circuit(self, seq: Sequence[int]) -> QuantumCircuit:
        return QuantumCircuit(self.width, tuple(self.primitives[i] for i in seq))

    @property
    def level_sizes(self) -> List[int]:
        return list(self.index.level_sizes)

    @property
    def index(self) -> _ClassIndex:
        if self._index is None:
            log.info("rebuilding search index for width %d, max_cost %d", self.width, self.max_cost)
            fresh = build_cost_atlas(self.width, self.max_cost, _check_bounds=False)
            if fresh.entries != self.entries:
                raise SynthesisFailure("snapshot does not match a fresh atlas build")
            self._index = fresh._index
        return self._index

    # -- snapshot ------------------------------------------------------

    def to_text(self) -> str:
        lines = [
            "# revseq NCV cost atlas",
            f"version {SNAPSHOT_VERSION}",
            f"width {self.width}",
            f"max_cost {self.max_cost}",
            "primitives " + " ".join(str(p) for p in self.primitives),
            f"entries {len(self.entries)}",
        ]
        for key, e in sorted(self.entries.items(), key=lambda kv: (kv[1].cost, kv[0])):
            seq = " ".join(map(str, e.witness)) or "-"
            lines.append(f"{' '.join(map(str, key))} | {e.cost} | {seq}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "CostAtlas":
        header = {}
        entries = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "|" in line:
                codes, cost, seq = (part.strip() for part in line.split("|"))
                key = tuple(int(v) for v in codes.split())
                witness = () if seq == "-" else tuple(int(v) for v in seq.split())
                entries[key] = AtlasEntry(int(cost), witness)
            else:
                name, _, value = line.partition(" ")
                header[name] = value
        if int(header.get("version", -1)) != SNAPSHOT_VERSION:
            raise ValueError(f"unsupported atlas snapshot version {header.get('version')!r}")
        width = int(header["width"])
        prims = [parse_primitive(t) for t in header["primitives"].split()]
        if prims != enumerate_primitives(width):
            raise ValueError("snapshot primitive order differs from enumerate_primitives")
        if int(header["entries"]) != len(entries):
            raise ValueError("snapshot entry count mismatch")
        return cls(width, int(header["max_cost"]), entries)

    def save(self, path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path) -> "CostAtlas":
        return cls.from_text(Path(path).read_text())

    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()


def _perm_key(perm) -> Tuple[int, ...]:
    if isinstance(perm, Permutation):
        return perm.map
    return tuple(int(v) for v in perm)


def build_cost_atlas(width: int = 3, max_cost: int = 5, backend: Optional[str] = None,
                     _check_bounds: bool = True) -> CostAtlas:
    """Breadth-first NCV search; every permutation of cost <= max_cost with its witness."""
    if _check_bounds and (width > MAX_ATLAS_WIDTH or max_cost > MAX_ATLAS_COST):
        raise SearchBoundError(
            f"atlas({width}, {max_cost}) exceeds the desk-scale guard "
            f"(width <= {MAX_ATLAS_WIDTH}, max_cost <= {MAX_ATLAS_COST}); "
            "the number of unitary classes grows roughly 11x per level"
        )
    if width < 1 or max_cost < 0:
        raise SearchBoundError("width must be >= 1 and max_cost >= 0")
    K = _backend.get(backend)
    prims = enumerate_primitives(width)
    table = primitive_table(prims, width)
    P = len(prims)
    dim = 1 << width
    t0 = time.perf_counter()

    index = _ClassIndex(width, max_cost)
    ident = np.eye(dim, dtype=np.complex128)[None]
    index.level.append(0)
    index.level_sizes.append(1)
    inner_mats = [ident]
    inner_keys = [_keys(K.canonical_fingerprints(ident))]
    witness = {0: ()}
    entries = {tuple(range(dim)): AtlasEntry(0, ())}
    index.perm_class[tuple(range(dim))] = 0

    frontier_ids = np.array([0], dtype=np.int64)
    frontier_mats = ident
    seen_sorted = np.sort(inner_keys[0])
    next_id = 1

    for lvl in range(1, max_cost + 1):
        last = lvl == max_cost
        hashes, isperm = K.expand_fingerprints(frontier_mats, table)
        keys = _keys(hashes)
        isperm = isperm.ravel()
        fresh = ~np.isin(keys, seen_sorted)
        if last:
            # only permutation classes are needed past the final level
            level_count = len(np.unique(keys[fresh]))
            fresh_perm = fresh & isperm
            cand = np.nonzero(fresh_perm)[0]
        else:
            cand = np.nonzero(fresh)[0]
        uniq, first, inverse = np.unique(keys[cand], return_index=True, return_inverse=True)
        order = np.argsort(first, kind="stable")  # lexicographic order of representatives
        rank = np.empty(len(order), dtype=np.int64)
        rank[order] = np.arange(len(order))
        ids = next_id + rank[inverse]  # class id for every candidate
        rep_pos = cand[first[order]]
        new_ids = next_id + np.arange(len(order))
        next_id += len(order)

        f_of = frontier_ids[cand // P]
        p_of = cand % P
        for child, parent, prim in zip(ids.tolist(), f_of.tolist(), p_of.tolist()):
            index.parents[child].append((parent, prim))
        for cid, pos in zip(new_ids.tolist(), rep_pos.tolist()):
            index.level.append(lvl)
            witness[cid] = witness[int(frontier_ids[pos // P])] + (int(pos % P),)

        new_mats = K.apply_selected(frontier_mats, table, rep_pos // P, rep_pos % P)
        perm_rep = isperm[rep_pos]
        for cid, m in zip(new_ids[perm_rep].tolist(), new_mats[perm_rep]):
            key = tuple(int(r) for r in np.argmax(np.abs(m), axis=0))
            entries[key] = AtlasEntry(lvl, witness[cid])
            index.perm_class[key] = cid

        if last:
            index.level_sizes.append(int(level_count))
            break
        index.level_sizes.append(len(new_ids))
        inner_mats.append(new_mats)
        inner_keys.append(uniq[order])
        seen_sorted = np.sort(np.concatenate(inner_keys))
        frontier_ids = new_ids
        frontier_mats = new_mats
        log.debug("level %d: %d classes, %d permutations so far", lvl, len(new_ids), len(entries))
        if len(new_ids) == 0:
            break

    index.mats = np.concatenate(inner_mats)
    all_keys = np.concatenate(inner_keys)
    srt = np.argsort(all_keys, kind="stable")
    index.inner_keys_sorted = all_keys[srt]
    index.inner_ids_sorted = srt.astype(np.int64)  # ids are assigned in concatenation order
    log.info("atlas(%d, %d): %d permutations in %.2fs [%s]", width, max_cost, len(entries),
             time.perf_counter() - t0, K.__name__)
    return CostAtlas(width, max_cost, entries, index)


@lru_cache(maxsize=4)
def default_atlas(width: int = 3, max_cost: int = 5) -> CostAtlas:
    return build_cost_atlas(width, max_cost)


# -- single-target synthesis ---------------------------------------------

@dataclass(frozen=True)
class Synthesis:
    """Result of an exhaustive search for one permutation.

    ``ncv_count`` is the exact minimum number of NCV primitives.  Among all
    sequences of that length, ``quantum_cost`` is the minimum number of merged
    1x1/2x2 gates and ``circuit`` the lexicographically smallest sequence
    attaining it.  ``lex_witness`` is the lexicographically smallest minimal
    sequence (the atlas witness).
    """

    perm: Permutation
    ncv_count: int
    quantum_cost: int
    circuit: QuantumCircuit
    lex_witness: QuantumCircuit
    realizations: int
    method: str = field(default="atlas", compare=False)


def _mitm_pairs(atlas: CostAtlas, perm: Permutation, max_cost: int):
    """Minimal ``(length, [(c1, c2), ...])`` with perm ~ U[c2] @ U[c1]."""
    idx = atlas.index
    K = _backend.get()
    # T @ U^dagger: row i of U^dagger moves to row perm(i)
    w = np.take(idx.dagger, list(perm.inverse().map), axis=1)
    keys = _keys(K.canonical_fingerprints(w))
    c2 = idx.lookup_inner(keys)
    hits = np.nonzero(c2 >= 0)[0]
    if len(hits) == 0:
        return None
    level = np.asarray(idx.level)
    tot = level[hits] + level[c2[hits]]
    best = int(tot.min())
    if best > max_cost:
        return None
    sel = hits[tot == best]
    # fix the split point so every realization is produced once
    split = int(level[sel].max())
    sel = sel[level[sel] == split]
    return best, [(int(a), int(c2[a])) for a in sel]


def min_cost_synthesis(perm, max_cost: Optional[int] = None,
                       atlas: Optional[CostAtlas] = None) -> Optional[Synthesis]:
    """Exact minimum-NCV realization(s) of ``perm``, or None beyond ``max_cost``.

    Lengths up to ``atlas.max_cost`` come straight from the atlas; longer ones,
    up to ``2 * (atlas.max_cost - 1)``, by meet-in-the-middle.
    """
    if not isinstance(perm, Permutation):
        perm = Permutation(int(math.log2(len(perm))), tuple(perm))
    atlas = atlas or default_atlas(perm.width)
    if perm.width != atlas.width:
        raise ValueError(f"permutation width {perm.width} != atlas width {atlas.width}")
    reach = 2 * (atlas.max_cost - 1)
    if max_cost is None:
        max_cost = max(reach, atlas.max_cost)
    if max_cost > max(reach, atlas.max_cost):
        raise SearchBoundError(f"max_cost {max_cost} beyond the reach ({reach}) of atlas max_cost {atlas.max_cost}")
    idx = atlas.index

    entry = atlas.lookup(perm)
    if entry is not None:
        if entry.cost > max_cost:
            return None
        seqs = idx.paths(idx.perm_class[perm.map])
        ncv, method = entry.cost, "atlas"
    else:
        found = _mitm_pairs(atlas, perm, max_cost)
        if found is None:
            return None
        ncv, pairs = found
        seqs = sorted({s1 + s2 for c1, c2 in pairs for s1 in idx.paths(c1) for s2 in idx.paths(c2)})
        method = "meet-in-the-middle"

    scored = sorted((quantum_cost(atlas.circuit(s)), s) for s in seqs)
    best_q, best_seq = scored[0]
    circuit = atlas.circuit(best_seq)
    lex = atlas.circuit(min(seqs))
    for c in (circuit, lex):
        if not equals_permutation(circuit_unitary(c), perm):
            raise SynthesisFailure(f"witness {c} does not realize {perm.map}")
    return Synthesis(perm, ncv, best_q, circuit, lex, len(seqs), method)


# -- constrained synthesis -----------------------------------------------

@dataclass(frozen=True)
class SynthesisConstraint:
    """Required output bits: ``columns[i]`` lists ``(input_code, bit)`` pairs for output i."""

    width: int
    columns: Tuple[Tuple[int, Tuple[Tuple[int, int], ...]], ...] = ()

    def __post_init__(self):
        n = 1 << self.width
        cols = tuple((int(i), tuple((int(c), int(b)) for c, b in reqs)) for i, reqs in self.columns)
        for i, reqs in cols:
            if not 0 <= i < self.width:
                raise ValueError(f"output index {i} out of range")
            if len(reqs) > n:
                raise ValueError("more constraints than input codes")
            for code, bit in reqs:
                if not 0 <= code < n or bit not in (0, 1):
                    raise ValueError(f"bad requirement ({code}, {bit})")
        object.__setattr__(self, "columns", cols)

    def satisfied_by(self, mapping: Sequence[int]) -> bool:
        w = self.width
        for i, reqs in self.columns:
            shift = w - 1 - i
            for code, bit in reqs:
                if (mapping[code] >> shift) & 1 != bit:
                    return False
        return True

    def candidates(self):
        n = 1 << self.width
        for mapping in itertools.permutations(range(n)):
            if self.satisfied_by(mapping):
                yield mapping


def _objective(s: Synthesis):
    return (s.ncv_count, s.quantum_cost, s.perm.map)


def min_ncv_count(perm: Permutation, max_cost: int, atlas: CostAtlas) -> Optional[int]:
    """Exact minimum NCV count within ``max_cost``, without enumerating circuits."""
    entry = atlas.lookup(perm)
    if entry is not None:
        return entry.cost if entry.cost <= max_cost else None
    if max_cost <= atlas.max_cost:
        return None
    found = _mitm_pairs(atlas, perm, max_cost)
    return None if found is None else found[0]


def constrained_synthesis(constraint: SynthesisConstraint, max_cost: Optional[int] = None,
                          atlas: Optional[CostAtlas] = None) -> Optional[Synthesis]:
    """Cheapest bijection meeting ``constraint``.

    Every permutation of the width is filtered; survivors are ranked by
    (NCV count, 2x2 quantum cost, map).  Meet-in-the-middle is only run when
    no survivor lies inside the atlas.
    """
    if constraint.width > MAX_ATLAS_WIDTH:
        raise SearchBoundError("constrained synthesis is limited to width <= 3")
    atlas = atlas or default_atlas(constraint.width)
    if max_cost is None:
        max_cost = max(2 * (atlas.max_cost - 1), atlas.max_cost)
    cands = [Permutation(constraint.width, m) for m in constraint.candidates()]
    ncv = {}
    for p in cands:
        e = atlas.lookup(p)
        if e is not None and e.cost <= max_cost:
            ncv[p] = e.cost
    if not ncv:
        for p in cands:
            k = min_ncv_count(p, max_cost, atlas)
            if k is not None:
                ncv[p] = k
    if not ncv:
        return None
    best = min(ncv.values())
    results = [min_cost_synthesis(p, max_cost, atlas) for p, k in ncv.items() if k == best]
    return min(results, key=_objective)


# -- MPG ----------------------------------------------------------------

def sr_next(q: int, r: int, s: int) -> int:
    """SR next state S + ~R.Q."""
    return s | ((1 - r) & q)


SR_LEGAL_ROWS = tuple(x for x in range(8) if not ((x >> 1) & 1 and x & 1))
SR_STABLE_ROWS = tuple(x for x in SR_LEGAL_ROWS if sr_next(*decode(x, 3)) == decode(x, 3)[0])


def mpg_constraint(next_index: int, comp_index: int) -> SynthesisConstraint:
    """Inputs (Q, R, S): output ``next_index`` = S + ~R.Q on legal rows,
    output ``comp_index`` = its complement on the stable rows."""
    nxt = tuple((x, sr_next(*decode(x, 3))) for x in SR_LEGAL_ROWS)
    comp = tuple((x, 1 - sr_next(*decode(x, 3))) for x in SR_STABLE_ROWS)
    return SynthesisConstraint(3, ((next_index, nxt), (comp_index, comp)))


@dataclass(frozen=True)
class MpgSearch:
    gate: GateDef
    synthesis: Synthesis
    next_index: int
    comp_index: int
    target_met: bool


def mpg_search(atlas: Optional[CostAtlas] = None, max_cost: Optional[int] = None, target: int = 4) -> MpgSearch:
    atlas = atlas or default_atlas(3)
    best = None
    for ni, ci in itertools.permutations(range(3), 2):
        s = constrained_synthesis(mpg_constraint(ni, ci), max_cost, atlas)
        if s is not None and (best is None or _objective(s) < _objective(best[0])):
            best = (s, ni, ci)
    if best is None:
        raise SynthesisFailure("no bijection satisfies the MPG constraints within the search bound")
    s, ni, ci = best
    gate = GateDef(
        "MPG", 3, s.perm, ("A", "B", "C"), ("P", "Q", "R"), None,
        f"next state on output {ni}, stability complement on output {ci}; "
        f"NCV {s.ncv_count}, 2x2 cost {s.quantum_cost}",
    )
    return MpgSearch(gate, s, ni, ci, s.quantum_cost <= target)


def derive_mpg(atlas: Optional[CostAtlas] = None) -> GateDef:
    return mpg_search(atlas).gate
