"""Strip-symmetric Z-detector models on an L x L grid of qubits.

Faults are single-qubit Z errors indexed row-major by grid position
``(r, c) -> r * L + c``. The synthetic families (DSR, CSR, HCSR) are written
directly as stacks of repetition chains. The physical shadows (XZZX, DWCC,
X3Z3) are derived from Pauli detector operators on the lattice and the
anticommutation rule, so the two routes only meet in the isomorphism checks.
"""

from __future__ import annotations

import enum
from collections.abc import Sequence
from dataclasses import dataclass

from stripsym.model import (
    ORPHAN,
    DetectorModel,
    StripStats,
    block_decompose,
    fault_strips,
    strip_stats,
)
from stripsym.pauli import (
    DomainAssignment,
    PauliString,
    SingleQubitClifford,
    conjugate,
    incidence_from_paulis,
)


class FamilyId(str, enum.Enum):
    XZZX = "XZZX"
    DWCC = "DWCC"
    X3Z3 = "X3Z3"
    DSR = "DSR"
    CSR = "CSR"
    HCSR = "HCSR"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, name: str) -> FamilyId:
        key = name.strip().upper()
        if key not in cls.__members__:
            raise ValueError(f"unknown family {name!r}; expected one of {', '.join(cls.__members__)}")
        return cls[key]


# Row order of the published strip-statistics table.
ALL_FAMILIES = (FamilyId.XZZX, FamilyId.DWCC, FamilyId.X3Z3, FamilyId.DSR, FamilyId.CSR, FamilyId.HCSR)


@dataclass(frozen=True)
class FamilyModel:
    family: FamilyId
    L: int
    model: DetectorModel
    logical_strips: tuple[int, ...]
    logical_faults: tuple[tuple[int, ...], ...]

    def comments(self) -> list[str]:
        return [f"family={self.family} L={self.L}"]


def _qubit(L: int, r: int, c: int) -> int:
    return r * L + c


def _fault_labels(L: int) -> tuple[str, ...]:
    return tuple(f"q({r},{c})" for r in range(L) for c in range(L))


def _stack_chains(
    n_fault: int,
    strips: Sequence[Sequence[int]],
    active: Sequence[bool],
    fault_labels: Sequence[str] | None = None,
) -> DetectorModel:
    """One open repetition chain per active strip.

    ``strips[j]`` lists the fault indices along strip ``j`` in chain order. A
    chain of q faults gets q - 1 link detectors; fault t flips links t - 1
    and t where they exist.
    """
    supports: list[list[int]] = [[] for _ in range(n_fault)]
    strip_of_detector: list[int] = []
    labels: list[str] = []
    for j, chain in enumerate(strips):
        if not active[j] or len(chain) < 2:
            continue
        first = len(strip_of_detector)
        for t in range(len(chain) - 1):
            strip_of_detector.append(j)
            labels.append(f"s{j}:{t}")
        for t, f in enumerate(chain):
            if t > 0:
                supports[f].append(first + t - 1)
            if t < len(chain) - 1:
                supports[f].append(first + t)
    return DetectorModel(
        n_det=len(strip_of_detector),
        fault_supports=tuple(tuple(s) for s in supports),
        strip_of_detector=tuple(strip_of_detector),
        n_strips=len(strips),
        det_labels=tuple(labels),
        fault_labels=tuple(fault_labels) if fault_labels is not None else None,
    )


def chain_stack(chain_lengths: Sequence[int]) -> DetectorModel:
    """Independent open chains; chain j has ``chain_lengths[j]`` faults."""
    strips, start = [], 0
    for q in chain_lengths:
        strips.append(list(range(start, start + q)))
        start += q
    return _stack_chains(start, strips, [True] * len(strips))


def _diagonals(L: int) -> list[list[int]]:
    return [[_qubit(L, r, r + k) for r in range(L) if 0 <= r + k < L] for k in range(-(L - 1), L)]


def _columns(L: int) -> list[list[int]]:
    return [[_qubit(L, r, c) for r in range(L)] for c in range(L)]


def build_dsr(L: int) -> DetectorModel:
    strips = _diagonals(L)
    return _stack_chains(L * L, strips, [True] * len(strips), _fault_labels(L))


def build_csr(L: int) -> DetectorModel:
    return _stack_chains(L * L, _columns(L), [True] * L, _fault_labels(L))


def build_hcsr(L: int) -> DetectorModel:
    return _stack_chains(L * L, _columns(L), [c % 2 == 0 for c in range(L)], _fault_labels(L))


def _z_faults(L: int) -> list[PauliString]:
    n = L * L
    return [PauliString.single(n, v, "Z") for v in range(n)]


def build_xzzx(L: int) -> DetectorModel:
    """Bulk XZZX plaquettes; a face's strip is its lattice diagonal.

    Face (r, c) has corners (r, c), (r, c+1), (r+1, c), (r+1, c+1) and carries
    X on the main-diagonal corners and Z on the other two, so Z errors only
    excite faces along one diagonal.
    """
    n = L * L
    dets, strips, labels = [], [], []
    for r in range(L - 1):
        for c in range(L - 1):
            dets.append(
                PauliString.from_letters(
                    n,
                    {
                        _qubit(L, r, c): "X",
                        _qubit(L, r, c + 1): "Z",
                        _qubit(L, r + 1, c): "Z",
                        _qubit(L, r + 1, c + 1): "X",
                    },
                )
            )
            strips.append(c - r + L - 1)
            labels.append(f"face({r},{c})")
    return incidence_from_paulis(dets, _z_faults(L), strips, 2 * L - 1, labels, _fault_labels(L))


def build_dwcc(L: int) -> DetectorModel:
    """Domain-wall faces: X on the two qubits of line c, Z on their neighbours in line c+1."""
    n = L * L
    dets, strips, labels = [], [], []
    for r in range(L - 1):
        for c in range(L):
            letters = {_qubit(L, r, c): "X", _qubit(L, r + 1, c): "X"}
            if c + 1 < L:
                letters[_qubit(L, r, c + 1)] = "Z"
                letters[_qubit(L, r + 1, c + 1)] = "Z"
            dets.append(PauliString.from_letters(n, letters))
            strips.append(c)
            labels.append(f"face({r},{c})")
    return incidence_from_paulis(dets, _z_faults(L), strips, L, labels, _fault_labels(L))


def build_x3z3(L: int) -> DetectorModel:
    """Domain-wise Hadamard deformation of a CSS parent.

    The parent has ZZ A-type detectors along the unshaded (even) vertical
    domains; H on unshaded domains and I on shaded ones turns them into
    detectors excited by physical Z errors.
    """
    n = L * L
    parent, strips, labels = [], [], []
    for c in range(0, L, 2):
        for r in range(L - 1):
            parent.append(PauliString.from_letters(n, {_qubit(L, r, c): "Z", _qubit(L, r + 1, c): "Z"}))
            strips.append(c)
            labels.append(f"A({r},{c})")
    cliffs = {c: (SingleQubitClifford.H if c % 2 == 0 else SingleQubitClifford.I) for c in range(L)}
    assignment = DomainAssignment(tuple(v % L for v in range(n)), cliffs)
    dets = [conjugate(p, assignment) for p in parent]
    return incidence_from_paulis(dets, _z_faults(L), strips, L, labels, _fault_labels(L))


_BUILDERS = {
    FamilyId.XZZX: build_xzzx,
    FamilyId.DWCC: build_dwcc,
    FamilyId.X3Z3: build_x3z3,
    FamilyId.DSR: build_dsr,
    FamilyId.CSR: build_csr,
    FamilyId.HCSR: build_hcsr,
}


def logical_strip(family: FamilyId, L: int) -> int:
    """Main diagonal for the diagonal families, column 0 otherwise."""
    if family in (FamilyId.XZZX, FamilyId.DSR):
        return L - 1
    return 0


def build(family: FamilyId | str, L: int) -> FamilyModel:
    if isinstance(family, str) and not isinstance(family, FamilyId):
        family = FamilyId.parse(family)
    if L < 2:
        raise ValueError(f"L must be at least 2, got {L}")
    model = _BUILDERS[family](L)
    j = logical_strip(family, L)
    assigned = fault_strips(model)
    faults = tuple(f for f, s in enumerate(assigned) if s == j)
    return FamilyModel(family, L, model, (j,), (faults,))


def block_shapes(model: DetectorModel) -> tuple[list[tuple[int, int]], int]:
    dec = block_decompose(model)
    return sorted((b.matrix.rows, b.matrix.cols) for b in dec.blocks), len(dec.orphan_faults)


def blocks_isomorphic(a: FamilyModel | DetectorModel, b: FamilyModel | DetectorModel) -> bool:
    """Do the two models decompose into the same multiset of block shapes and orphan count?"""
    ma = a.model if isinstance(a, FamilyModel) else a
    mb = b.model if isinstance(b, FamilyModel) else b
    return block_shapes(ma) == block_shapes(mb)


def table1(families: Sequence[FamilyId | str], sizes: Sequence[int]) -> list[tuple[FamilyId, int, StripStats]]:
    rows = []
    for fam in families:
        fm_id = fam if isinstance(fam, FamilyId) else FamilyId.parse(fam)
        for L in sizes:
            rows.append((fm_id, L, strip_stats(build(fm_id, L).model)))
    return rows


def orphan_faults(model: DetectorModel) -> tuple[int, ...]:
    return tuple(f for f, s in enumerate(fault_strips(model)) if s == ORPHAN)
