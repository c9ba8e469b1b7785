"""Monte-Carlo logical error rates and strip-wise work ratios."""

from __future__ import annotations

import math
import time
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from stripsym.decoders import make_decoder
from stripsym.families import FamilyId, build
from stripsym.gf2 import BitVector
from stripsym.model import NON_LOCAL, DetectorModel, fault_strips, incidence_matrix

# Shots are drawn in fixed chunks, each from its own counter-based stream keyed
# by (seed, p index, chunk index); results never depend on the worker count.
CHUNK = 8192

DEFAULT_P_GRID = tuple(round(0.02 * k, 2) for k in range(1, 25))


@dataclass(frozen=True)
class SimConfig:
    family: FamilyId
    L: int
    p_values: tuple[float, ...]
    shots: int
    seed: int
    decoder: str = "stripwise"
    workers: int = 1

    def __post_init__(self) -> None:
        if isinstance(self.family, str) and not isinstance(self.family, FamilyId):
            object.__setattr__(self, "family", FamilyId.parse(self.family))
        object.__setattr__(self, "p_values", tuple(float(p) for p in self.p_values))
        if self.shots < 1:
            raise ValueError("shots must be at least 1")
        for p in self.p_values:
            if not 0.0 <= p < 0.5:
                raise ValueError(f"p must lie in [0, 0.5), got {p}")
        if self.decoder not in ("monolithic", "stripwise"):
            raise ValueError(f"unknown decoder {self.decoder!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class SimPoint:
    p: float
    failures: int
    shots: int
    estimate: float
    stderr: float
    analytic: float


@dataclass(frozen=True)
class BenchReport:
    alpha: float
    n_per_strip: tuple[int, ...]
    N: int
    mono_work: float
    strip_work: float
    predicted_balanced_speedup: float
    measured_ratio: float
    wall_times: dict[str, float] = field(default_factory=dict)

    @property
    def m(self) -> int:
        return len(self.n_per_strip)


def stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=tuple(key))))


def sample_error(n_fault: int, p: float, rng: np.random.Generator) -> BitVector:
    """Independent flips with probability ``p`` on each of ``n_fault`` faults."""
    if not 0.0 <= p < 0.5:
        raise ValueError(f"p must lie in [0, 0.5), got {p}")
    return BitVector.from_bits((rng.random(n_fault) < p).astype(np.uint8))


def sample_errors(shots: int, n_fault: int, p: float, rng: np.random.Generator) -> np.ndarray:
    return (rng.random((shots, n_fault)) < p).astype(np.uint8)


def analytic_rep(L: int, p: float) -> float:
    """Failure rate of majority decoding on a length-L repetition chain.

    Sums the binomial tail from ceil((L+1)/2) to L with a term recurrence in
    long double.
    """
    if L < 1:
        raise ValueError("L must be at least 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    w0 = L // 2 + 1
    if p == 0.0:
        return 0.0
    if p == 1.0:
        return 1.0
    pl = np.longdouble(p)
    ql = np.longdouble(1) - pl
    term = np.longdouble(math.comb(L, w0)) * pl**w0 * ql ** (L - w0)
    ratio = pl / ql
    total = np.longdouble(0)
    for w in range(w0, L + 1):
        total += term
        term = term * (L - w) / (w + 1) * ratio
    return float(total)


def _logical_mask(fm, n_fault: int) -> np.ndarray:
    mask = np.zeros(n_fault, dtype=bool)
    mask[list(fm.logical_faults[0])] = True
    return mask


def run_sim(config: SimConfig) -> list[SimPoint]:
    fm = build(config.family, config.L)
    model = fm.model
    H = incidence_matrix(model).to_dense().astype(np.int64)
    decoder = make_decoder(model, config.decoder)
    logical = _logical_mask(fm, model.n_fault)
    chain_len = int(logical.sum())
    n_chunks = -(-config.shots // CHUNK)

    def chunk_failures(pi: int, p: float, c: int) -> int:
        n = min(CHUNK, config.shots - c * CHUNK)
        E = sample_errors(n, model.n_fault, p, stream(config.seed, pi, c))
        S = (E @ H.T % 2).astype(np.uint8)
        Ehat = decoder.decode_batch(S)
        if not np.array_equal(Ehat @ H.T % 2, S):
            raise RuntimeError("decoder returned a correction inconsistent with its syndrome")
        residual = (Ehat ^ E)[:, logical]
        return int((residual.sum(axis=1) & 1).sum())

    points = []
    for pi, p in enumerate(config.p_values):
        jobs = range(n_chunks)
        if config.workers > 1:
            with ThreadPoolExecutor(config.workers) as pool:
                counts = list(pool.map(lambda c: chunk_failures(pi, p, c), jobs))
        else:
            counts = [chunk_failures(pi, p, c) for c in jobs]
        failures = sum(counts)
        est = failures / config.shots
        points.append(
            SimPoint(
                p=p,
                failures=failures,
                shots=config.shots,
                estimate=est,
                stderr=math.sqrt(est * (1 - est) / config.shots),
                analytic=analytic_rep(chain_len, p),
            )
        )
    return points


def _synthetic_work(n: int, alpha: float) -> int:
    acc = 0
    for i in range(int(round(n**alpha))):
        acc = (acc + i * i) & 0xFFFF
    return acc


def bench(model: DetectorModel, alpha: float, repeats: int = 0) -> BenchReport:
    """Compare total ``N**alpha`` work with the strip-wise sum of ``n_j**alpha``.

    With ``repeats > 0`` a loop of ``round(n**alpha)`` steps is also timed,
    once over the whole model and once per strip; the best of ``repeats``
    runs is kept.
    """
    if not alpha > 1:
        raise ValueError(f"alpha must exceed 1, got {alpha}")
    if NON_LOCAL in fault_strips(model):
        raise ValueError("model has non-local faults; strip-wise decoding does not apply")
    sizes = tuple(n for n in model.strip_sizes() if n > 0)
    N = sum(sizes)
    # long double, rounded once, so the balanced ratio lands on m**(alpha-1) exactly
    a = np.longdouble(alpha)
    mono_ld = np.longdouble(N) ** a
    strip_ld = sum((np.longdouble(n) ** a for n in sizes), np.longdouble(0))
    mono, strip = float(mono_ld), float(strip_ld)
    walls: dict[str, float] = {}
    if repeats > 0:
        t_mono, t_strip = [], []
        for _ in range(repeats):
            t0 = time.perf_counter()
            _synthetic_work(N, alpha)
            t_mono.append(time.perf_counter() - t0)
            t0 = time.perf_counter()
            for n in sizes:
                _synthetic_work(n, alpha)
            t_strip.append(time.perf_counter() - t0)
        walls = {"monolithic": min(t_mono), "stripwise": min(t_strip)}
    return BenchReport(
        alpha=float(alpha),
        n_per_strip=sizes,
        N=N,
        mono_work=mono,
        strip_work=strip,
        predicted_balanced_speedup=float(np.longdouble(len(sizes)) ** (a - 1)),
        measured_ratio=float(mono_ld / strip_ld) if strip else math.inf,
        wall_times=walls,
    )


def fmt(x: float) -> str:
    """Locale-free float formatting with 12 significant digits."""
    return f"{x:.12g}"


SIM_COLUMNS = ("family", "L", "p", "shots", "failures", "estimate", "stderr", "analytic")
BENCH_COLUMNS = ("family", "L", "alpha", "N", "m", "mono_work", "strip_work", "ratio", "predicted_balanced")


def sim_rows(family: str, L: int, points: Sequence[SimPoint]) -> list[list[str]]:
    return [
        [family, str(L), fmt(pt.p), str(pt.shots), str(pt.failures), fmt(pt.estimate), fmt(pt.stderr), fmt(pt.analytic)]
        for pt in points
    ]


def bench_row(family: str, L: int | str, rep: BenchReport) -> list[str]:
    return [
        family,
        str(L),
        fmt(rep.alpha),
        str(rep.N),
        str(rep.m),
        fmt(rep.mono_work),
        fmt(rep.strip_work),
        fmt(rep.measured_ratio),
        fmt(rep.predicted_balanced_speedup),
    ]
