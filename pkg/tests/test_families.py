import math

import pytest

from stripsym import model as dm
from stripsym.families import (
    ALL_FAMILIES,
    FamilyId,
    block_shapes,
    blocks_isomorphic,
    build,
    chain_stack,
    orphan_faults,
    table1,
)
from stripsym.model import check_strip_symmetric, fault_strips, strip_stats

from conftest import REFERENCE_STATS

SIZES = range(2, 13)
PAIRS = [("XZZX", "DSR"), ("DWCC", "CSR"), ("X3Z3", "HCSR")]


def test_family_parse_roundtrip():
    for f in ALL_FAMILIES:
        assert FamilyId.parse(str(f)) is f
        assert FamilyId.parse(str(f).lower()) is f
    with pytest.raises(ValueError):
        FamilyId.parse("BOGUS")


@pytest.mark.parametrize("row", REFERENCE_STATS, ids=lambda r: f"{r[0]}-{r[1]}")
def test_reference_stats_row(row):
    fam, L, *stats = row
    assert strip_stats(build(fam, L).model).as_tuple() == tuple(stats)


def test_reference_stats_all_rows_in_order():
    got = [(str(f), L, *s.as_tuple()) for f, L, s in table1(ALL_FAMILIES, [3, 4, 5])]
    assert sorted(got) == sorted(REFERENCE_STATS)
    assert [r[:2] for r in got] == [(str(f), L) for f in ALL_FAMILIES for L in (3, 4, 5)]


def test_stats_table_empty_and_single():
    assert table1([], [3, 4]) == []
    [(f, L, s)] = table1(["XZZX"], [4])
    assert s.as_tuple() == (5, 1, 3, 0, 0, 9, 16)


def test_csr_two():
    fm = build("CSR", 2)
    assert fm.model.n_strips == 2
    assert fm.model.strip_sizes() == [1, 1]
    assert fm.model.n_fault == 4


def test_build_rejects_small_L():
    with pytest.raises(ValueError):
        build("DSR", 1)


@pytest.mark.parametrize("fam", ALL_FAMILIES)
@pytest.mark.parametrize("L", SIZES)
def test_strip_local_for_all_sizes(fam, L):
    s = strip_stats(build(fam, L).model)
    assert s.off_block == 0 and s.non_local == 0


@pytest.mark.parametrize("L", SIZES)
def test_closed_forms(L):
    half = math.ceil(L / 2)
    dsr = strip_stats(build("DSR", L).model)
    assert (dsr.n_det, dsr.m, dsr.max_dets) == ((L - 1) ** 2, 2 * L - 3, L - 1)
    csr = strip_stats(build("CSR", L).model)
    assert (csr.n_det, csr.m) == (L * (L - 1), L)
    hcsr = strip_stats(build("HCSR", L).model)
    assert (hcsr.n_det, hcsr.m) == (half * (L - 1), half)


@pytest.mark.parametrize("a,b", PAIRS)
@pytest.mark.parametrize("L", SIZES)
def test_lattice_and_synthetic_isomorphic(a, b, L):
    assert blocks_isomorphic(build(a, L), build(b, L))


def test_isomorphism_examples():
    assert blocks_isomorphic(build("XZZX", 4), build("DSR", 4))
    assert not blocks_isomorphic(build("DWCC", 3), build("HCSR", 3))
    fm = build("X3Z3", 5)
    assert blocks_isomorphic(fm, fm)


def test_lattice_builders_are_not_aliases():
    assert build("XZZX", 4).model.det_labels != build("DSR", 4).model.det_labels
    shapes, orphans = block_shapes(build("XZZX", 4).model)
    assert sorted(shapes) == sorted(block_shapes(build("DSR", 4).model)[0])
    assert orphans == 2


@pytest.mark.parametrize("fam", ALL_FAMILIES)
@pytest.mark.parametrize("L", SIZES)
def test_logical_strip_has_L_faults(fam, L):
    fm = build(fam, L)
    [j] = fm.logical_strips
    [faults] = fm.logical_faults
    assert len(faults) == L
    strips = fault_strips(fm.model)
    assert set(faults) == {f for f, s in enumerate(strips) if s == j}


@pytest.mark.parametrize("fam", ALL_FAMILIES)
def test_families_strip_symmetric_with_virtual_boundaries(fam):
    for L in (2, 3, 4, 5):
        assert check_strip_symmetric(build(fam, L).model, True).strip_symmetric


def test_dsr_corner_orphans():
    assert len(orphan_faults(build("DSR", 3).model)) == 2


def test_hcsr_inactive_columns_are_orphans():
    fm = build("HCSR", 3)
    # column 1 of the 3x3 grid, row-major fault order
    assert orphan_faults(fm.model) == (1, 4, 7)


def test_export_comments_and_roundtrip():
    fm = build("X3Z3", 4)
    text = dm.dumps(fm.model, fm.comments())
    assert "# family=X3Z3 L=4" in text
    back = dm.loads(text)
    assert back.fault_supports == fm.model.fault_supports
    assert back.strip_of_detector == fm.model.strip_of_detector
    assert back.n_strips == fm.model.n_strips


def test_chain_stack():
    m = chain_stack([3, 5, 1])
    assert m.strip_sizes() == [2, 4, 0]
    assert m.n_fault == 9
    assert strip_stats(m).m == 2
