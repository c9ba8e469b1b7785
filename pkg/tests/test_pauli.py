import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stripsym.gf2 import BitMatrix
from stripsym.model import check_one_form, incidence_matrix
from stripsym.pauli import (
    DomainAssignment,
    NotBiasShiftingError,
    ParentNotStripSymmetricError,
    PauliString,
    SingleQubitClifford as C,
    commutes,
    conjugate,
    deform_and_check,
    incidence_from_paulis,
    weight,
    weight_preservation_check,
)

P = PauliString.from_str


@st.composite
def pauli_pair_and_assignment(draw):
    n = draw(st.integers(1, 16))
    letters = st.text("IXYZ", min_size=n, max_size=n)
    strips = draw(st.lists(st.integers(0, 3), min_size=n, max_size=n))
    cliffs = {j: draw(st.sampled_from(list(C))) for j in set(strips)}
    return P(draw(letters)), P(draw(letters)), DomainAssignment(tuple(strips), cliffs)


# --- basics ------------------------------------------------------------------


def test_letters_roundtrip():
    assert str(P("IXYZ")) == "IXYZ"
    assert P("Y").letter(0) == "Y"
    assert P("IXIZ").support() == (1, 3)


def test_bad_letter():
    with pytest.raises(ValueError):
        P("XQ")


def test_weight_examples():
    assert weight(PauliString.identity(4)) == 0
    assert weight(PauliString.single(5, 2, "Y")) == 1
    assert weight(P("XZY")) == 3


def test_commutes_examples():
    assert not commutes(P("X"), P("Z"))
    assert commutes(P("XX"), P("ZZ"))
    assert commutes(PauliString.identity(3), P("XYZ"))
    assert not commutes(P("XY"), P("XZ"))


def test_commutes_size_mismatch():
    with pytest.raises(ValueError):
        commutes(P("X"), P("XX"))


# --- Clifford tables ---------------------------------------------------------


def xyz(c):
    return {a: c.act(a) for a in "XYZ"}


def test_action_tables():
    assert xyz(C.I) == {"X": "X", "Y": "Y", "Z": "Z"}
    assert xyz(C.H) == {"X": "Z", "Y": "Y", "Z": "X"}
    assert xyz(C.HS) == {"X": "Y", "Y": "Z", "Z": "X"}
    for c in C:
        assert sorted(xyz(c).values()) == ["X", "Y", "Z"]
        for a in "XYZ":
            assert c.act(c.pullback(a)) == a


def test_hs_is_s_then_h():
    # S: X->Y, Y->X, Z->Z (up to phase); then H
    s = {"X": "Y", "Y": "X", "Z": "Z"}
    assert {a: C.H.act(s[a]) for a in "XYZ"} == xyz(C.HS)


def test_parse():
    assert C.parse("hs") is C.HS
    with pytest.raises(ValueError):
        C.parse("T")


# --- conjugate ---------------------------------------------------------------


def test_conjugate_examples():
    z = PauliString.single(3, 1, "Z")
    assert conjugate(z, DomainAssignment((0, 0, 0), {0: C.H})) == PauliString.single(3, 1, "X")
    assert conjugate(z, DomainAssignment((0, 0, 0), {0: C.HS})) == PauliString.single(3, 1, "X")
    q = P("XYZI")
    assert conjugate(q, DomainAssignment.uniform((0, 1, 0, 1), C.I)) == q


def test_conjugate_domainwise():
    a = DomainAssignment((0, 0, 1, 1), {0: C.H, 1: C.HS})
    assert conjugate(P("XZXZ"), a) == P("ZXYX")


def test_conjugate_uncovered_qubit():
    with pytest.raises(ValueError):
        conjugate(P("XXX"), DomainAssignment((0, 0), {0: C.H}))


def test_assignment_needs_clifford_per_strip():
    with pytest.raises(ValueError):
        DomainAssignment((0, 1), {0: C.H})


@given(pauli_pair_and_assignment())
@settings(max_examples=300)
def test_conjugation_preserves_weight_and_commutation(data):
    p, q, a = data
    if p.n_qubits != q.n_qubits:
        return
    cp, cq = conjugate(p, a), conjugate(q, a)
    assert weight(cp) == weight(p)
    assert commutes(cp, cq) == commutes(p, q)


@given(pauli_pair_and_assignment())
def test_h_conjugation_is_involution(data):
    p, _, a = data
    h = DomainAssignment.uniform(a.strip_of_qubit, C.H)
    assert conjugate(conjugate(p, h), h) == p


def test_hs_has_order_three():
    a = DomainAssignment.uniform((0, 0, 0), C.HS)
    p = P("XYZ")
    assert conjugate(conjugate(conjugate(p, a), a), a) == p


def test_weight_preservation_check_examples():
    assert weight_preservation_check(1000, 8, seed=1)
    one = DomainAssignment((0,), {0: C.H})
    assert weight(conjugate(P("Z"), one)) == 1
    both = DomainAssignment((0, 0), {0: C.HS})
    assert commutes(P("XX"), P("ZZ")) and commutes(conjugate(P("XX"), both), conjugate(P("ZZ"), both))


# --- incidence from Paulis ---------------------------------------------------


def test_incidence_from_paulis_examples():
    m = incidence_from_paulis([P("XX")], [P("ZI")], [0])
    assert m.fault_supports == ((0,),)
    m = incidence_from_paulis([P("ZZ")], [P("ZI")], [0])
    assert m.fault_supports == ((),)
    m = incidence_from_paulis([P("XXI"), P("IXX")], [P("IZI")], [0, 0])
    assert m.fault_supports == ((0, 1),)


def test_incidence_from_paulis_size_mismatch():
    with pytest.raises(ValueError):
        incidence_from_paulis([P("XX")], [P("Z")], [0])
    with pytest.raises(ValueError):
        incidence_from_paulis([P("XX")], [P("ZI")], [0, 0])


@pytest.mark.parametrize("k", [3, 4, 7])
def test_closed_x_chain_is_one_form(k):
    dets = [PauliString.from_letters(k, {i: "X", (i + 1) % k: "X"}) for i in range(k)]
    faults = [PauliString.single(k, v, "Z") for v in range(k)]
    m = incidence_from_paulis(dets, faults, [0] * k)
    assert check_one_form(m) == [True]


# --- deformation -------------------------------------------------------------


def x_chain(n_per_strip, n_strips, letter="X"):
    n = n_per_strip * n_strips
    dets, strips = [], []
    for j in range(n_strips):
        for i in range(n_per_strip - 1):
            q = j * n_per_strip + i
            dets.append(PauliString.from_letters(n, {q: letter, q + 1: letter}))
            strips.append(j)
    qubit_strips = tuple(j for j in range(n_strips) for _ in range(n_per_strip))
    return dets, strips, qubit_strips


def test_deform_x_chain_all_h():
    dets, strips, qs = x_chain(4, 2)
    rep = deform_and_check(dets, strips, DomainAssignment.uniform(qs, C.H))
    assert all(str(d).replace("I", "") == "ZZ" for d in rep.deformed_detectors)
    assert rep.incidence_equal
    assert rep.strip_symmetric
    assert incidence_matrix(rep.deformed) == incidence_matrix(rep.parent)


def test_deform_zz_parent_with_h_has_nontrivial_incidence():
    # Z-chain parent whose dominant error is X; H carries X to Z
    dets, strips, qs = x_chain(4, 2, letter="Z")
    rep = deform_and_check(dets, strips, DomainAssignment.uniform(qs, C.H), parent_axes={0: "X", 1: "X"})
    H = incidence_matrix(rep.deformed)
    assert H.nnz() > 0
    assert rep.incidence_equal and rep.strip_symmetric
    assert all(str(d).replace("I", "") == "XX" for d in rep.deformed_detectors)


def test_deform_all_identity_on_z_parent_is_vacuous():
    dets, strips, qs = x_chain(3, 2, letter="Z")
    rep = deform_and_check(dets, strips, DomainAssignment.uniform(qs, C.I))
    assert incidence_matrix(rep.deformed).nnz() == 0
    assert rep.strip_symmetric and rep.incidence_equal


def test_deform_alternating_h_and_i():
    # strip 0 is Z-native under H (parent error X), strip 1 is already Z-biased
    n = 6
    dets = [
        PauliString.from_letters(n, {0: "Z", 1: "Z"}),
        PauliString.from_letters(n, {1: "Z", 2: "Z"}),
        PauliString.from_letters(n, {3: "X", 4: "X"}),
        PauliString.from_letters(n, {4: "X", 5: "X"}),
    ]
    a = DomainAssignment((0, 0, 0, 1, 1, 1), {0: C.H, 1: C.I})
    rep = deform_and_check(dets, [0, 0, 1, 1], a, parent_axes={0: "X", 1: "Z"})
    assert rep.incidence_equal and rep.strip_symmetric
    for j in (0, 1):
        assert [f for f, sup in enumerate(rep.deformed.fault_supports) if sup and rep.deformed.strip_of_detector[sup[0]] == j] == [
            3 * j,
            3 * j + 1,
            3 * j + 2,
        ]


def test_deform_rejects_non_bias_shifting():
    dets, strips, qs = x_chain(3, 1, letter="Z")
    with pytest.raises(NotBiasShiftingError):
        deform_and_check(dets, strips, DomainAssignment.uniform(qs, C.H), parent_axes={0: "Z"})


def test_deform_rejects_non_symmetric_parent():
    # Z_1 flips detectors assigned to different strips
    n = 4
    dets = [PauliString.from_letters(n, {1: "X", 2: "X"}), PauliString.from_letters(n, {0: "X", 1: "X"})]
    a = DomainAssignment((0, 0, 1, 1), {0: C.I, 1: C.I})
    with pytest.raises(ParentNotStripSymmetricError):
        deform_and_check(dets, [0, 1], a)


def test_random_pauli_reproducible():
    from stripsym.pauli import random_pauli

    a = random_pauli(np.random.default_rng(3), 10)
    b = random_pauli(np.random.default_rng(3), 10)
    assert a == b and a.n_qubits == 10
    assert isinstance(BitMatrix.identity(1), BitMatrix)
