import random

import pytest

from oracle import reachable_permutations
from revseq.errors import SearchBoundError
from revseq.perm import MPG_MAP, Permutation, apply_gate, builtin_gate, decode
from revseq.quantum import circuit_unitary, equals_permutation, primitive_count, registered_decomposition
from revseq.synth import (
    CostAtlas, SR_LEGAL_ROWS, SR_STABLE_ROWS, SynthesisConstraint, build_cost_atlas, constrained_synthesis,
    enumerate_primitives, min_cost_synthesis, mpg_search, sr_next,
)


def test_enumerate_primitives_counts():
    assert [len(enumerate_primitives(w)) for w in (1, 2, 3, 4)] == [1, 8, 21, 40]
    with pytest.raises(ValueError):
        enumerate_primitives(5)


def test_bounds_guard():
    with pytest.raises(SearchBoundError):
        build_cost_atlas(4, 3)
    with pytest.raises(SearchBoundError):
        build_cost_atlas(3, 6)


def test_atlas_basics(atlas):
    assert atlas.lookup(Permutation.identity(3)).cost == 0
    assert len(atlas) == 1379
    assert atlas.level_sizes == [1, 21, 291, 3493, 39477, 429540]
    # every single-CNOT permutation costs 1
    for prim in enumerate_primitives(3):
        if prim.kind == "CX":
            from revseq.quantum import QuantumCircuit, as_permutation
            p = as_permutation(circuit_unitary(QuantumCircuit(3, (prim,))))
            assert atlas.lookup(p).cost == 1
    assert atlas.lookup(builtin_gate("TG").perm).cost == 5
    assert atlas.lookup(builtin_gate("PG").perm).cost == 4


def test_atlas_soundness(atlas):
    for key, entry in atlas.entries.items():
        c = atlas.circuit(entry.witness)
        assert primitive_count(c) == entry.cost
        assert equals_permutation(circuit_unitary(c), Permutation(3, key))


def test_atlas_minimality_against_oracle(atlas):
    ref = reachable_permutations(3, 4)
    # the oracle reaches exactly the atlas entries of cost <= 4, at the same cost
    assert ref == {k: e.cost for k, e in atlas.entries.items() if e.cost <= 4}
    rng = random.Random(7)
    sample = rng.sample(sorted(k for k, e in atlas.entries.items() if e.cost >= 1), 40)
    for key in sample:
        k = atlas.entries[key].cost
        assert all(ref.get(key, 99) > j for j in range(k))


def test_atlas_determinism_and_snapshot(atlas, tmp_path):
    again = build_cost_atlas(3, 5)
    assert again.to_text() == atlas.to_text()
    path = tmp_path / "atlas.txt"
    atlas.save(path)
    loaded = CostAtlas.load(path)
    assert loaded.entries == atlas.entries
    assert loaded.digest() == atlas.digest()


def test_snapshot_rejects_bad_header(atlas):
    text = atlas.to_text().replace("version 1", "version 9")
    with pytest.raises(ValueError):
        CostAtlas.from_text(text)


def test_min_cost_synthesis_small(atlas):
    s = min_cost_synthesis(Permutation.identity(3), atlas=atlas)
    assert s.ncv_count == 0 and len(s.circuit) == 0
    pg = min_cost_synthesis(builtin_gate("PG").perm, max_cost=3, atlas=atlas)
    assert pg is None
    pg = min_cost_synthesis(builtin_gate("PG").perm, atlas=atlas)
    assert (pg.ncv_count, pg.quantum_cost) == (4, 4)
    assert min_cost_synthesis(builtin_gate("TG").perm, max_cost=4, atlas=atlas) is None


@pytest.mark.parametrize("name,ncv,cost", [("FRG", 7, 5), ("SAM", 7, 4), ("MPG", 6, 4)])
def test_registry_entries_are_search_output(atlas, name, ncv, cost):
    s = min_cost_synthesis(builtin_gate(name).perm, atlas=atlas)
    assert (s.ncv_count, s.quantum_cost) == (ncv, cost)
    assert s.circuit == registered_decomposition(name)
    assert equals_permutation(circuit_unitary(s.lex_witness), s.perm)


def test_mitm_agrees_with_atlas_below_bound(atlas):
    """A smaller atlas plus meet-in-the-middle must agree with the larger atlas."""
    small = build_cost_atlas(3, 4)  # reaches 6 primitives by meet-in-the-middle
    rng = random.Random(3)
    keys = rng.sample(sorted(k for k, e in atlas.entries.items() if e.cost in (4, 5)), 15)
    for key in keys:
        s = min_cost_synthesis(Permutation(3, key), atlas=small)
        assert s is not None and s.ncv_count == atlas.entries[key].cost


def test_constraint_examples(atlas):
    assert constrained_synthesis(SynthesisConstraint(3), max_cost=5, atlas=atlas).perm.is_identity()
    n_col = tuple((x, sr_next(*decode(x, 3))) for x in range(8))
    m_col = tuple((x, 1 - b) for x, b in n_col)
    impossible = SynthesisConstraint(3, ((1, n_col), (2, m_col)))
    assert constrained_synthesis(impossible, atlas=atlas) is None
    with pytest.raises(ValueError):
        SynthesisConstraint(3, ((3, ()),))


def test_sr_rows():
    assert SR_LEGAL_ROWS == (0, 1, 2, 4, 5, 6)
    assert SR_STABLE_ROWS == (0, 2, 4, 5)


def test_derive_mpg(atlas):
    res = mpg_search(atlas)
    g = res.gate
    assert g.perm.map == MPG_MAP
    assert res.target_met and res.synthesis.quantum_cost == 4
    for x in SR_LEGAL_ROWS:
        out = apply_gate(g, decode(x, 3))
        assert out[res.next_index] == sr_next(*decode(x, 3))
    for x in SR_STABLE_ROWS:
        out = apply_gate(g, decode(x, 3))
        assert out[res.comp_index] == 1 - sr_next(*decode(x, 3))
    assert apply_gate(g, (0, 0, 1))[res.next_index] == 1
    assert apply_gate(g, (1, 0, 0))[res.next_index] == 1
    assert apply_gate(g, (1, 0, 0))[res.comp_index] == 0
