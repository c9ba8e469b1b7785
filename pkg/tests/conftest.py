import itertools

import numpy as np
import pytest

from stripsym.gf2 import BitMatrix
from stripsym.model import DetectorModel

# family, L, m, min, max, off_block, non_local, n_det, n_fault
REFERENCE_STATS = [
    ("XZZX", 3, 3, 1, 2, 0, 0, 4, 9),
    ("XZZX", 4, 5, 1, 3, 0, 0, 9, 16),
    ("XZZX", 5, 7, 1, 4, 0, 0, 16, 25),
    ("DWCC", 3, 3, 2, 2, 0, 0, 6, 9),
    ("DWCC", 4, 4, 3, 3, 0, 0, 12, 16),
    ("DWCC", 5, 5, 4, 4, 0, 0, 20, 25),
    ("X3Z3", 3, 2, 2, 2, 0, 0, 4, 9),
    ("X3Z3", 4, 2, 3, 3, 0, 0, 6, 16),
    ("X3Z3", 5, 3, 4, 4, 0, 0, 12, 25),
    ("DSR", 3, 3, 1, 2, 0, 0, 4, 9),
    ("DSR", 4, 5, 1, 3, 0, 0, 9, 16),
    ("DSR", 5, 7, 1, 4, 0, 0, 16, 25),
    ("CSR", 3, 3, 2, 2, 0, 0, 6, 9),
    ("CSR", 4, 4, 3, 3, 0, 0, 12, 16),
    ("CSR", 5, 5, 4, 4, 0, 0, 20, 25),
    ("HCSR", 3, 2, 2, 2, 0, 0, 4, 9),
    ("HCSR", 4, 2, 3, 3, 0, 0, 6, 16),
    ("HCSR", 5, 3, 4, 4, 0, 0, 12, 25),
]

CHAIN = [[1, 1, 0], [0, 1, 1]]


def brute_force_ml(H: np.ndarray, s: np.ndarray):
    """Reference: all 2^n patterns in lexicographic order, first of minimum weight."""
    n = H.shape[1]
    patterns = np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.uint8).reshape(2**n, n)
    ok = np.all(patterns.astype(np.int64) @ H.T.astype(np.int64) % 2 == s, axis=1)
    if not ok.any():
        return None
    w = patterns.sum(axis=1)
    w[~ok] = n + 1
    return patterns[int(np.argmin(w))]


def column_space(H: np.ndarray) -> np.ndarray:
    """Every syndrome reachable from H, one row each."""
    rows = {tuple(np.zeros(H.shape[0], dtype=np.uint8))}
    for col in H.T:
        rows |= {tuple((np.array(r) + col) % 2) for r in rows}
    return np.array(sorted(rows), dtype=np.uint8).reshape(len(rows), H.shape[0])


def random_strip_local_model(rng: np.random.Generator, max_strips=4, max_dets=4, max_faults=8) -> DetectorModel:
    n_strips = int(rng.integers(1, max_strips + 1))
    sizes = rng.integers(0, max_dets + 1, size=n_strips)
    strip_of = [j for j, k in enumerate(sizes) for _ in range(k)]
    n_det = len(strip_of)
    supports = []
    for _ in range(int(rng.integers(0, max_faults + 1))):
        j = int(rng.integers(n_strips))
        dets = [d for d in range(n_det) if strip_of[d] == j]
        if not dets:
            supports.append(())
            continue
        k = int(rng.integers(0, min(3, len(dets)) + 1))
        supports.append(tuple(sorted(rng.choice(dets, size=k, replace=False).tolist())))
    return DetectorModel(n_det, tuple(supports), tuple(strip_of), n_strips=n_strips)


def inject_non_local(rng: np.random.Generator, model: DetectorModel) -> DetectorModel:
    """Append one fault that touches two different strips."""
    by_strip = {}
    for d, j in enumerate(model.strip_of_detector):
        by_strip.setdefault(j, []).append(d)
    a, b = rng.choice(sorted(by_strip), size=2, replace=False)
    f = tuple(sorted((int(rng.choice(by_strip[a])), int(rng.choice(by_strip[b])))))
    return DetectorModel(model.n_det, model.fault_supports + (f,), model.strip_of_detector, model.n_strips)


@pytest.fixture
def chain3() -> BitMatrix:
    return BitMatrix.from_dense(CHAIN)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def data_dir():
    from pathlib import Path

    return Path(__file__).parent / "data"
