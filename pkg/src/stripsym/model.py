"""Z-detector incidence structures with a strip partition of the detectors."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from stripsym.gf2 import BitMatrix, BitVector, invert_permutation, mat_vec, permute

ORPHAN = -1
NON_LOCAL = -2


class NonLocalFaultError(ValueError):
    """A fault flips detectors in more than one strip."""

    def __init__(self, fault: int, strips: Iterable[int]):
        self.fault = fault
        self.strips = tuple(sorted(set(strips)))
        super().__init__(f"fault {fault} is non-local: it flips detectors in strips {list(self.strips)}")


class EquivalenceViolation(RuntimeError):
    """The two strip-symmetry characterisations disagreed (a bug, never a model property)."""


class DetModelParseError(ValueError):
    pass


@dataclass(frozen=True)
class DetectorModel:
    """Detectors, faults as detector sets, and a strip index per detector.

    ``n_strips`` counts declared strips, empty ones included; it defaults to
    one more than the largest strip index in use.
    """

    n_det: int
    fault_supports: tuple[tuple[int, ...], ...]
    strip_of_detector: tuple[int, ...]
    n_strips: int | None = None
    det_labels: tuple[str, ...] | None = None
    fault_labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        supports = []
        for f, sup in enumerate(self.fault_supports):
            s = tuple(sorted(int(d) for d in sup))
            if len(set(s)) != len(s):
                raise ValueError(f"fault {f} lists a detector twice")
            if s and (s[0] < 0 or s[-1] >= self.n_det):
                raise ValueError(f"fault {f} references a detector outside range({self.n_det})")
            supports.append(s)
        object.__setattr__(self, "fault_supports", tuple(supports))
        strips = tuple(int(j) for j in self.strip_of_detector)
        if len(strips) != self.n_det:
            raise ValueError(f"{len(strips)} strip labels given for {self.n_det} detectors")
        if strips and min(strips) < 0:
            raise ValueError("strip indices must be non-negative")
        object.__setattr__(self, "strip_of_detector", strips)
        needed = max(strips) + 1 if strips else 0
        if self.n_strips is None:
            object.__setattr__(self, "n_strips", needed)
        elif self.n_strips < needed:
            raise ValueError(f"n_strips={self.n_strips} but strip index {needed - 1} is used")
        if self.det_labels is not None and len(self.det_labels) != self.n_det:
            raise ValueError("det_labels has the wrong length")
        if self.fault_labels is not None and len(self.fault_labels) != len(supports):
            raise ValueError("fault_labels has the wrong length")

    @property
    def n_fault(self) -> int:
        return len(self.fault_supports)

    def detectors_in_strip(self, j: int) -> tuple[int, ...]:
        return tuple(d for d, s in enumerate(self.strip_of_detector) if s == j)

    def strip_sizes(self) -> list[int]:
        sizes = [0] * self.n_strips
        for s in self.strip_of_detector:
            sizes[s] += 1
        return sizes


@dataclass(frozen=True)
class StripStats:
    m: int
    min_dets: int
    max_dets: int
    off_block: int
    non_local: int
    n_det: int
    n_fault: int

    def as_tuple(self) -> tuple[int, ...]:
        return (self.m, self.min_dets, self.max_dets, self.off_block, self.non_local, self.n_det, self.n_fault)


@dataclass(frozen=True)
class Block:
    strip: int
    matrix: BitMatrix
    detectors: tuple[int, ...]
    faults: tuple[int, ...]


@dataclass(frozen=True)
class BlockDecomposition:
    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]
    blocks: tuple[Block, ...]
    orphan_faults: tuple[int, ...]

    def assemble(self) -> BitMatrix:
        """Rebuild the original incidence matrix from the blocks."""
        diag = BitMatrix.block_diag([b.matrix for b in self.blocks], extra_cols=len(self.orphan_faults))
        return permute(diag, invert_permutation(self.row_perm), invert_permutation(self.col_perm))


@dataclass(frozen=True)
class StripSymmetryReport:
    """Both sides of the strip-symmetry equivalence for one model.

    ``condition1``: faults are strip-local and ``H_Z`` is block diagonal after
    the strip-respecting permutation. It also asks every fault to flip 0 or 2
    detectors (pair creation), the standing hypothesis of the equivalence.
    ``condition2``: every strip parity is conserved (``u_j^T H_Z = 0``) and
    every fault flips 0 or 2 detectors lying in one strip.
    """

    augmented: bool
    strip_local: bool
    block_diagonal: bool
    pair_creating: bool
    one_form: tuple[bool, ...]
    non_local_faults: tuple[int, ...]
    odd_faults: tuple[int, ...]
    condition1: bool
    condition2: bool
    model: DetectorModel = field(repr=False)

    @property
    def strip_symmetric(self) -> bool:
        return self.condition1 and self.condition2


def incidence_matrix(model: DetectorModel) -> BitMatrix:
    dense = np.zeros((model.n_det, model.n_fault), dtype=np.uint8)
    for f, sup in enumerate(model.fault_supports):
        dense[list(sup), f] = 1
    return BitMatrix.from_dense(dense)


def fault_strip(model: DetectorModel, fault: int) -> int:
    """Strip index of a fault, or ``ORPHAN`` / ``NON_LOCAL``."""
    if not 0 <= fault < model.n_fault:
        raise IndexError(f"fault {fault} out of range({model.n_fault})")
    strips = {model.strip_of_detector[d] for d in model.fault_supports[fault]}
    if not strips:
        return ORPHAN
    if len(strips) > 1:
        return NON_LOCAL
    return strips.pop()


def fault_strips(model: DetectorModel) -> list[int]:
    return [fault_strip(model, f) for f in range(model.n_fault)]


def strip_stats(model: DetectorModel) -> StripStats:
    sizes = [n for n in model.strip_sizes() if n > 0]
    off_block = 0
    non_local = 0
    for sup in model.fault_supports:
        if not sup:
            continue
        home = model.strip_of_detector[sup[0]]
        outside = sum(1 for d in sup if model.strip_of_detector[d] != home)
        off_block += outside
        non_local += outside > 0
    return StripStats(
        m=len(sizes),
        min_dets=min(sizes, default=0),
        max_dets=max(sizes, default=0),
        off_block=off_block,
        non_local=non_local,
        n_det=model.n_det,
        n_fault=model.n_fault,
    )


def block_decompose(model: DetectorModel) -> BlockDecomposition:
    strips = fault_strips(model)
    for f, j in enumerate(strips):
        if j == NON_LOCAL:
            raise NonLocalFaultError(f, (model.strip_of_detector[d] for d in model.fault_supports[f]))
    H = incidence_matrix(model).to_dense()
    row_perm: list[int] = []
    col_perm: list[int] = []
    blocks = []
    for j in range(model.n_strips):
        dets = model.detectors_in_strip(j)
        if not dets:
            continue
        faults = tuple(f for f, s in enumerate(strips) if s == j)
        row_perm.extend(dets)
        col_perm.extend(faults)
        sub = H[np.ix_(dets, faults)] if faults else np.zeros((len(dets), 0), dtype=np.uint8)
        blocks.append(Block(j, BitMatrix.from_dense(sub), dets, faults))
    orphans = tuple(f for f, s in enumerate(strips) if s == ORPHAN)
    col_perm.extend(orphans)
    return BlockDecomposition(tuple(row_perm), tuple(col_perm), tuple(blocks), orphans)


def strip_indicator(model: DetectorModel, j: int) -> BitVector:
    return BitVector.from_support(model.n_det, model.detectors_in_strip(j))


def check_one_form(model: DetectorModel) -> list[bool]:
    """Per strip: is the strip parity conserved by every fault?"""
    Ht = incidence_matrix(model).transpose()
    return [not mat_vec(Ht, strip_indicator(model, j)).any() for j in range(model.n_strips)]


def augment_virtual_boundaries(model: DetectorModel) -> DetectorModel:
    """Give every strip with weight-1 faults one extra detector shared by those faults."""
    strips = fault_strips(model)
    for f, j in enumerate(strips):
        if j == NON_LOCAL:
            raise NonLocalFaultError(f, (model.strip_of_detector[d] for d in model.fault_supports[f]))
    by_strip: dict[int, list[int]] = {}
    for f, sup in enumerate(model.fault_supports):
        if len(sup) == 1:
            by_strip.setdefault(strips[f], []).append(f)
    if not by_strip:
        return model
    supports = [list(s) for s in model.fault_supports]
    strip_of_detector = list(model.strip_of_detector)
    labels = list(model.det_labels) if model.det_labels is not None else None
    for j in sorted(by_strip):
        v = len(strip_of_detector)
        strip_of_detector.append(j)
        if labels is not None:
            labels.append(f"virtual[{j}]")
        for f in by_strip[j]:
            supports[f].append(v)
    return DetectorModel(
        n_det=len(strip_of_detector),
        fault_supports=tuple(tuple(s) for s in supports),
        strip_of_detector=tuple(strip_of_detector),
        n_strips=model.n_strips,
        det_labels=tuple(labels) if labels is not None else None,
        fault_labels=model.fault_labels,
    )


def _condition1(model: DetectorModel) -> tuple[bool, bool, bool, tuple[int, ...]]:
    strips = fault_strips(model)
    non_local = tuple(f for f, j in enumerate(strips) if j == NON_LOCAL)
    block_diagonal = False
    if not non_local:
        decomposition = block_decompose(model)
        block_diagonal = decomposition.assemble() == incidence_matrix(model)
    pair_creating = bool(np.isin(incidence_matrix(model).column_weights(), (0, 2)).all())
    return not non_local, block_diagonal, pair_creating, non_local


def _condition2(model: DetectorModel) -> tuple[tuple[bool, ...], tuple[int, ...], bool]:
    one_form = tuple(check_one_form(model))
    bad = []
    for f, sup in enumerate(model.fault_supports):
        if len(sup) == 0:
            continue
        if len(sup) != 2 or model.strip_of_detector[sup[0]] != model.strip_of_detector[sup[1]]:
            bad.append(f)
    return one_form, tuple(bad), all(one_form) and not bad


def check_strip_symmetric(model: DetectorModel, use_virtual_boundaries: bool = False) -> StripSymmetryReport:
    """Evaluate both characterisations of strip symmetry and insist they agree.

    With ``use_virtual_boundaries`` the model is first augmented by
    :func:`augment_virtual_boundaries`; non-local models are left as they are.
    """
    augmented = False
    if use_virtual_boundaries and NON_LOCAL not in fault_strips(model):
        aug = augment_virtual_boundaries(model)
        augmented = aug is not model
        model = aug
    strip_local, block_diagonal, pair_creating, non_local = _condition1(model)
    one_form, odd, cond2 = _condition2(model)
    cond1 = strip_local and block_diagonal and pair_creating
    if cond1 != cond2:
        raise EquivalenceViolation(
            f"condition 1 = {cond1} but condition 2 = {cond2} "
            f"(strip_local={strip_local}, block_diagonal={block_diagonal}, pair_creating={pair_creating}, "
            f"one_form={one_form}, offending faults={odd})"
        )
    return StripSymmetryReport(
        augmented=augmented,
        strip_local=strip_local,
        block_diagonal=block_diagonal,
        pair_creating=pair_creating,
        one_form=one_form,
        non_local_faults=non_local,
        odd_faults=odd,
        condition1=cond1,
        condition2=cond2,
        model=model,
    )


# --- DETMODEL v1 text format -------------------------------------------------

HEADER = "DETMODEL v1"


def dumps(model: DetectorModel, comments: Sequence[str] = ()) -> str:
    lines = [HEADER]
    lines.extend(f"# {c}" for c in comments)
    lines.append(f"dets {model.n_det}")
    lines.append(f"faults {model.n_fault}")
    lines.append(f"strips {model.n_strips}")
    lines.extend(f"strip {d} {j}" for d, j in enumerate(model.strip_of_detector))
    for f, sup in enumerate(model.fault_supports):
        lines.append(" ".join(["fault", str(f), *map(str, sup)]))
    return "\n".join(lines) + "\n"


def loads(text: str) -> DetectorModel:
    """Parse a DETMODEL v1 document.

    The ``strips <n>`` line is optional; without it the strip count is
    inferred from the largest strip index.
    """
    n_det = n_fault = n_strips = None
    strip_of: dict[int, int] = {}
    supports: dict[int, tuple[int, ...]] = {}
    seen_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not seen_header:
            if line.split() != HEADER.split():
                raise DetModelParseError(f"line {lineno}: expected header '{HEADER}'")
            seen_header = True
            continue
        key, *args = line.split()
        try:
            vals = [int(a) for a in args]
        except ValueError:
            raise DetModelParseError(f"line {lineno}: non-integer argument in '{line}'") from None
        if key in ("dets", "faults", "strips"):
            if len(vals) != 1 or vals[0] < 0:
                raise DetModelParseError(f"line {lineno}: '{key}' takes one non-negative count")
            if key == "dets":
                n_det = vals[0]
            elif key == "faults":
                n_fault = vals[0]
            else:
                n_strips = vals[0]
        elif key == "strip":
            if len(vals) != 2:
                raise DetModelParseError(f"line {lineno}: 'strip' takes a detector and a strip index")
            if vals[0] in strip_of:
                raise DetModelParseError(f"line {lineno}: detector {vals[0]} assigned twice")
            strip_of[vals[0]] = vals[1]
        elif key == "fault":
            if not vals:
                raise DetModelParseError(f"line {lineno}: 'fault' needs an index")
            if vals[0] in supports:
                raise DetModelParseError(f"line {lineno}: fault {vals[0]} defined twice")
            supports[vals[0]] = tuple(vals[1:])
        else:
            raise DetModelParseError(f"line {lineno}: unknown directive '{key}'")
    if not seen_header:
        raise DetModelParseError("empty document")
    if n_det is None or n_fault is None:
        raise DetModelParseError("missing 'dets' or 'faults' line")
    if sorted(strip_of) != list(range(n_det)):
        raise DetModelParseError("every detector needs exactly one 'strip' line")
    if any(not 0 <= f < n_fault for f in supports):
        raise DetModelParseError("fault index out of range")
    try:
        return DetectorModel(
            n_det=n_det,
            fault_supports=tuple(supports.get(f, ()) for f in range(n_fault)),
            strip_of_detector=tuple(strip_of[d] for d in range(n_det)),
            n_strips=n_strips,
        )
    except ValueError as exc:
        raise DetModelParseError(str(exc)) from None


def read(path: str | Path) -> DetectorModel:
    return loads(Path(path).read_text())


def write(path: str | Path, model: DetectorModel, comments: Sequence[str] = ()) -> None:
    Path(path).write_text(dumps(model, comments))
