import itertools

import pytest
from hypothesis import given, strategies as st

from revseq.errors import MalformedTableError, UnknownGateError, WidthMismatchError
from revseq.perm import (
    BUILTIN_NAMES, SAM_TABLE, Permutation, apply_gate, builtin_gate, decode, encode,
    is_balanced, is_bijective, iter_builtin_gates, output_column, sam_printed_formula,
)

BITS3 = list(itertools.product((0, 1), repeat=3))


def test_encode_decode_msb_first():
    assert encode((1, 0, 1)) == 5
    assert decode(5, 3) == (1, 0, 1)
    for w in range(1, 7):
        for x in range(1 << w):
            assert encode(decode(x, w)) == x


def test_is_bijective_sam_table_and_identity():
    assert is_bijective([encode(r) for r in SAM_TABLE])
    assert is_bijective(list(range(8)))


def test_printed_sam_formula_collides():
    codes = [encode(sam_printed_formula(*b)) for b in BITS3]
    assert not is_bijective(codes)
    assert codes[0b100] == codes[0b101] == 0


@pytest.mark.parametrize("table", [[0, 1, 2], [0, 1, 2, 4], [0, -1], []])
def test_malformed_tables(table):
    with pytest.raises(MalformedTableError):
        is_bijective(table)


def test_apply_gate_examples():
    assert apply_gate(builtin_gate("SAM"), (1, 0, 0)) == (0, 1, 0)
    for b in (0, 1):
        assert apply_gate(builtin_gate("FG"), (0, b)) == (0, b)
    assert apply_gate(builtin_gate("PG"), (1, 1, 0)) == (1, 0, 1)
    with pytest.raises(WidthMismatchError):
        apply_gate(builtin_gate("FG"), (1, 0, 0))


def test_builtin_examples():
    assert builtin_gate("TG").perm(0b110) == 0b111
    assert builtin_gate("frg").perm(0b101) == 0b110
    sam = builtin_gate("SAM")
    for a, b in itertools.product((0, 1), repeat=2):
        assert apply_gate(sam, (a, b, 0)) == (1 - a, a | b, a & b)
    with pytest.raises(UnknownGateError):
        builtin_gate("XYZ")


def test_output_columns():
    sam = builtin_gate("SAM")
    assert output_column(sam, 0) == (1, 1, 1, 1, 0, 0, 0, 0)
    assert output_column(sam, 1) == (0, 0, 1, 1, 1, 0, 1, 0)
    ident = Permutation.identity(3)
    assert ident.column(2) == tuple(x & 1 for x in range(8))
    with pytest.raises(IndexError):
        output_column(sam, 3)


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_builtin_bijective_and_balanced(name):
    g = builtin_gate(name)
    assert is_bijective(g.perm.map)
    for i in range(g.width):
        assert is_balanced(g.perm.column(i))
        assert sum(g.perm.column(i)) == 1 << (g.width - 1)


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_inverse_round_trip(name):
    g = builtin_gate(name)
    inv = g.perm.inverse()
    for x in range(1 << g.width):
        assert inv(g.perm(x)) == x


def test_sam_closed_form_matches_table():
    for (a, b, c), row in zip(BITS3, SAM_TABLE):
        na = 1 - a
        assert row == (na, (na & b) ^ (a & (1 - c)), (na & c) ^ (a & b))


def test_fredkin_swap():
    frg = builtin_gate("FRG")
    for a, b, c in BITS3:
        assert apply_gate(frg, (a, b, c)) == ((a, c, b) if a else (a, b, c))


def test_gatedef_ports():
    for g in iter_builtin_gates():
        assert len(g.truth_table()) == 1 << g.width


@given(st.permutations(list(range(16))))
def test_random_permutations_bijective_balanced(m):
    p = Permutation(4, tuple(m))
    assert is_bijective(p.map)
    assert all(is_balanced(p.column(i)) for i in range(4))
    assert p.then(p.inverse()).is_identity()


@given(st.lists(st.integers(0, 7), min_size=8, max_size=8))
def test_bijective_iff_distinct(m):
    assert is_bijective(m) == (len(set(m)) == 8)
