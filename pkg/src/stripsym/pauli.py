"""Symplectic Pauli strings and domain-wise single-qubit Clifford deformations.

Phases are dropped throughout: a Pauli is its pair of x/z bit vectors.
"""

from __future__ import annotations

import enum
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from stripsym.gf2 import BitVector
from stripsym.model import (
    DetectorModel,
    StripSymmetryReport,
    check_strip_symmetric,
    incidence_matrix,
)

_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_LETTER = {v: k for k, v in _LETTER_BITS.items()}


@dataclass(frozen=True)
class PauliString:
    x: BitVector
    z: BitVector

    def __post_init__(self) -> None:
        if self.x.length != self.z.length:
            raise ValueError("x and z parts must have equal length")

    @classmethod
    def from_str(cls, text: str) -> PauliString:
        text = text.strip().upper()
        try:
            bits = [_LETTER_BITS[ch] for ch in text]
        except KeyError as exc:
            raise ValueError(f"bad Pauli letter {exc.args[0]!r} in {text!r}") from None
        return cls(BitVector.from_bits(b[0] for b in bits), BitVector.from_bits(b[1] for b in bits))

    @classmethod
    def identity(cls, n: int) -> PauliString:
        return cls(BitVector.zeros(n), BitVector.zeros(n))

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> PauliString:
        bx, bz = _LETTER_BITS[letter]
        return cls(
            BitVector.from_support(n, [qubit] if bx else []),
            BitVector.from_support(n, [qubit] if bz else []),
        )

    @classmethod
    def from_letters(cls, n: int, letters: Mapping[int, str]) -> PauliString:
        chars = ["I"] * n
        for q, a in letters.items():
            chars[q] = a
        return cls.from_str("".join(chars))

    @property
    def n_qubits(self) -> int:
        return self.x.length

    def letter(self, q: int) -> str:
        return _BITS_LETTER[(self.x[q], self.z[q])]

    def support(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.x.to_array() | self.z.to_array()))

    def __str__(self) -> str:
        xs, zs = self.x.to_array(), self.z.to_array()
        return "".join(_BITS_LETTER[(int(a), int(b))] for a, b in zip(xs, zs))

    def __repr__(self) -> str:
        return f"PauliString('{self}')"


def weight(p: PauliString) -> int:
    return (p.x.to_array() | p.z.to_array()).sum().item()


def commutes(p: PauliString, q: PauliString) -> bool:
    if p.n_qubits != q.n_qubits:
        raise ValueError(f"qubit count mismatch: {p.n_qubits} vs {q.n_qubits}")
    return (p.x.dot(q.z) ^ p.z.dot(q.x)) == 0


class SingleQubitClifford(enum.Enum):
    """The bias-shifting single-qubit Cliffords, as letter permutations.

    ``HS`` is conjugation by ``H*S`` (S applied first), which cycles
    X -> Y -> Z -> X up to phase.
    """

    I = "I"  # noqa: E741
    H = "H"
    HS = "HS"

    @property
    def table(self) -> dict[str, str]:
        return _ACTIONS[self]

    def act(self, letter: str) -> str:
        return self.table[letter]

    def pullback(self, letter: str) -> str:
        """The letter that this Clifford maps onto ``letter``."""
        for src, dst in self.table.items():
            if dst == letter:
                return src
        raise AssertionError("action table is not a permutation")

    @classmethod
    def parse(cls, name: str) -> SingleQubitClifford:
        key = name.strip().upper()
        if key not in cls.__members__:
            raise ValueError(f"unknown Clifford {name!r}; expected one of I, H, HS")
        return cls[key]


_ACTIONS = {
    SingleQubitClifford.I: {"I": "I", "X": "X", "Y": "Y", "Z": "Z"},
    SingleQubitClifford.H: {"I": "I", "X": "Z", "Y": "Y", "Z": "X"},
    SingleQubitClifford.HS: {"I": "I", "X": "Y", "Y": "Z", "Z": "X"},
}


@dataclass(frozen=True)
class DomainAssignment:
    strip_of_qubit: tuple[int, ...]
    clifford_of_strip: Mapping[int, SingleQubitClifford]

    def __post_init__(self) -> None:
        object.__setattr__(self, "strip_of_qubit", tuple(int(j) for j in self.strip_of_qubit))
        missing = set(self.strip_of_qubit) - set(self.clifford_of_strip)
        if missing:
            raise ValueError(f"no Clifford given for strips {sorted(missing)}")

    @classmethod
    def uniform(cls, strip_of_qubit: Sequence[int], clifford: SingleQubitClifford) -> DomainAssignment:
        return cls(tuple(strip_of_qubit), {j: clifford for j in set(strip_of_qubit)})

    @property
    def n_qubits(self) -> int:
        return len(self.strip_of_qubit)

    def clifford(self, qubit: int) -> SingleQubitClifford:
        return self.clifford_of_strip[self.strip_of_qubit[qubit]]


def conjugate(p: PauliString, assignment: DomainAssignment) -> PauliString:
    """Apply each qubit's strip Clifford to its letter; weight is unchanged."""
    if p.n_qubits > assignment.n_qubits:
        raise ValueError(f"assignment covers {assignment.n_qubits} qubits, Pauli acts on {p.n_qubits}")
    return PauliString.from_str("".join(assignment.clifford(q).act(p.letter(q)) for q in range(p.n_qubits)))


def incidence_from_paulis(
    detectors: Sequence[PauliString],
    faults: Sequence[PauliString],
    strip_of_detector: Sequence[int],
    n_strips: int | None = None,
    det_labels: Sequence[str] | None = None,
    fault_labels: Sequence[str] | None = None,
) -> DetectorModel:
    """A fault flips a detector iff the two anticommute."""
    ns = {p.n_qubits for p in (*detectors, *faults)}
    if len(ns) > 1:
        raise ValueError(f"operators act on different qubit counts: {sorted(ns)}")
    if len(detectors) != len(strip_of_detector):
        raise ValueError("one strip index per detector required")
    if detectors:
        dx = np.stack([d.x.words for d in detectors])
        dz = np.stack([d.z.words for d in detectors])
    supports = []
    for f in faults:
        if not detectors:
            supports.append(())
            continue
        sym = np.bitwise_count(dx & f.z.words).sum(axis=1) + np.bitwise_count(dz & f.x.words).sum(axis=1)
        supports.append(tuple(int(i) for i in np.flatnonzero(sym & 1)))
    return DetectorModel(
        n_det=len(detectors),
        fault_supports=tuple(supports),
        strip_of_detector=tuple(strip_of_detector),
        n_strips=n_strips,
        det_labels=tuple(det_labels) if det_labels is not None else None,
        fault_labels=tuple(fault_labels) if fault_labels is not None else None,
    )


class NotBiasShiftingError(ValueError):
    pass


class ParentNotStripSymmetricError(ValueError):
    def __init__(self, report: StripSymmetryReport):
        super().__init__("parent detector model is not strip-symmetric under its dominant faults")
        self.report = report


@dataclass(frozen=True)
class DeformationReport:
    parent: DetectorModel
    deformed: DetectorModel
    deformed_detectors: tuple[PauliString, ...]
    parent_faults: tuple[PauliString, ...]
    parent_check: StripSymmetryReport
    deformed_check: StripSymmetryReport
    incidence_equal: bool

    @property
    def strip_symmetric(self) -> bool:
        return self.deformed_check.strip_symmetric


def deform_and_check(
    parent_detectors: Sequence[PauliString],
    strip_of_detector: Sequence[int],
    assignment: DomainAssignment,
    parent_axes: Mapping[int, str] | None = None,
    use_virtual_boundaries: bool = True,
) -> DeformationReport:
    """Deform a parent detector set and compare its incidence under physical Z noise.

    The parent's fault on qubit ``v`` is the single-qubit Pauli that the
    qubit's strip Clifford carries onto ``Z_v``. When ``parent_axes`` names
    the parent's dominant error letter per strip, each strip Clifford must map
    that letter to Z.
    """
    n = assignment.n_qubits
    if parent_axes is not None:
        for j, cliff in assignment.clifford_of_strip.items():
            axis = parent_axes.get(j)
            if axis is None:
                raise NotBiasShiftingError(f"no parent axis given for strip {j}")
            if cliff.act(axis.upper()) != "Z":
                raise NotBiasShiftingError(f"strip {j}: {cliff.value} maps {axis} to {cliff.act(axis.upper())}, not Z")
    parent_faults = tuple(PauliString.single(n, v, assignment.clifford(v).pullback("Z")) for v in range(n))
    n_strips = max([*strip_of_detector, *assignment.strip_of_qubit], default=-1) + 1
    parent = incidence_from_paulis(parent_detectors, parent_faults, strip_of_detector, n_strips)
    parent_check = check_strip_symmetric(parent, use_virtual_boundaries)
    if not parent_check.strip_symmetric:
        raise ParentNotStripSymmetricError(parent_check)
    deformed_dets = tuple(conjugate(d, assignment) for d in parent_detectors)
    physical = [PauliString.single(n, v, "Z") for v in range(n)]
    deformed = incidence_from_paulis(deformed_dets, physical, strip_of_detector, n_strips)
    return DeformationReport(
        parent=parent,
        deformed=deformed,
        deformed_detectors=deformed_dets,
        parent_faults=parent_faults,
        parent_check=parent_check,
        deformed_check=check_strip_symmetric(deformed, use_virtual_boundaries),
        incidence_equal=incidence_matrix(parent) == incidence_matrix(deformed),
    )


def random_pauli(rng: np.random.Generator, n: int) -> PauliString:
    return PauliString(BitVector.from_bits(rng.integers(0, 2, n)), BitVector.from_bits(rng.integers(0, 2, n)))


def random_assignment(rng: np.random.Generator, n: int, max_strips: int | None = None) -> DomainAssignment:
    k = int(rng.integers(1, (max_strips or n) + 1))
    strips = tuple(int(j) for j in rng.integers(0, k, n))
    choices = list(SingleQubitClifford)
    return DomainAssignment(strips, {j: choices[int(rng.integers(0, 3))] for j in range(k)})


def weight_preservation_check(trials: int, n_qubits: int, seed: int) -> bool:
    """Sample Pauli pairs and domain assignments; confirm weight and commutation survive conjugation."""
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        p, q = random_pauli(rng, n_qubits), random_pauli(rng, n_qubits)
        a = random_assignment(rng, n_qubits)
        cp, cq = conjugate(p, a), conjugate(q, a)
        if weight(cp) != weight(p) or weight(cq) != weight(q):
            return False
        if commutes(p, q) != commutes(cp, cq):
            return False
    return True
