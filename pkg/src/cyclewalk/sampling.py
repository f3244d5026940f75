"""Seeded Monte Carlo sampler for the chain.

Only the cycle type is tracked.  Transposing two points in the same cycle of
length l splits it at their distance d along the cycle (uniform on 1..l-1);
points in different cycles merge them.  Conjugation invariance makes this
exact for the class-level law.

Randomness: numpy's Philox4x64 bit generator.  Shard s draws from the stream
seeded by ``SeedSequence([seed, s])``, so results depend on (seed, shards)
only, never on scheduling.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numba
import numpy as np

from .partitions import Partition
from .walk import WalkSpec

CHUNK = 4096
CLASS_TRACKING_MAX_N = 40


@numba.njit(cache=True)
def _run_chunk(n, k, first, second, fp_out, types_out, track):
    samples, steps = first.shape
    cycles = np.empty(n, np.int64)
    for s in range(samples):
        cycles[0] = n - k
        ncyc = 1
        for q in range(k):
            cycles[ncyc] = 1
            ncyc += 1
        for step in range(steps):
            i = first[s, step]
            j = second[s, step]
            if j >= i:
                j += 1
            # locate the cycles holding points i and j and their offsets
            ci = -1
            cj = -1
            oi = 0
            oj = 0
            start = 0
            for c in range(ncyc):
                end = start + cycles[c]
                if ci < 0 and i < end:
                    ci = c
                    oi = i - start
                if cj < 0 and j < end:
                    cj = c
                    oj = j - start
                if ci >= 0 and cj >= 0:
                    break
                start = end
            if ci == cj:
                length = cycles[ci]
                d = (oj - oi) % length
                cycles[ci] = d
                cycles[ncyc] = length - d
                ncyc += 1
            else:
                cycles[ci] += cycles[cj]
                ncyc -= 1
                cycles[cj] = cycles[ncyc]
        fixed = 0
        for c in range(ncyc):
            if cycles[c] == 1:
                fixed += 1
        fp_out[s] = fixed
        if track:
            srt = np.sort(cycles[:ncyc])[::-1]
            for c in range(ncyc):
                types_out[s, c] = srt[c]


@dataclass
class SimulationResult:
    """Histograms from a batch of sampled walks; batches merge with ``+``."""

    n: int
    k: int
    steps: int
    samples: int
    fixed_points: Counter = field(default_factory=Counter)
    classes: Counter | None = None

    def __add__(self, other: "SimulationResult") -> "SimulationResult":
        if (self.n, self.k, self.steps) != (other.n, other.k, other.steps):
            raise ValueError("cannot merge simulations of different walks")
        classes = None
        if self.classes is not None and other.classes is not None:
            classes = self.classes + other.classes
        return SimulationResult(
            self.n, self.k, self.steps, self.samples + other.samples,
            self.fixed_points + other.fixed_points, classes,
        )

    def moment(self, r: int) -> tuple[float, float]:
        """Empirical E[fp^r] and its standard error."""
        N = self.samples
        items = sorted(self.fixed_points.items())
        mean = math.fsum(cnt * j**r for j, cnt in items) / N
        if N < 2:
            return mean, float("nan")
        var = math.fsum(cnt * (j**r - mean) ** 2 for j, cnt in items) / (N - 1)
        return mean, math.sqrt(var / N)

    def probability(self, j: int) -> tuple[float, float]:
        """Empirical P(fp = j) and its binomial standard error."""
        p = self.fixed_points.get(j, 0) / self.samples
        return p, math.sqrt(p * (1 - p) / self.samples)

    def class_frequencies(self) -> dict[Partition, float]:
        if self.classes is None:
            raise ValueError("class histogram was not tracked")
        return {mu: cnt / self.samples for mu, cnt in self.classes.items()}


def shard_sizes(samples: int, shards: int) -> list[int]:
    base, extra = divmod(samples, shards)
    return [base + (1 if s < extra else 0) for s in range(shards)]


def simulate_shard(spec: WalkSpec, samples: int, seed: int, shard: int,
                   track_classes: bool | None = None) -> SimulationResult:
    n, k, steps = spec.n, spec.k, spec.steps
    if track_classes is None:
        track_classes = n <= CLASS_TRACKING_MAX_N
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, shard])))
    fp_hist: Counter = Counter()
    classes: Counter | None = Counter() if track_classes else None
    done = 0
    while done < samples:
        size = min(CHUNK, samples - done)
        first = rng.integers(0, n, size=(size, steps), dtype=np.int64)
        # second point uniform on the other n - 1 points
        second = rng.integers(0, n - 1, size=(size, steps), dtype=np.int64)
        fp = np.empty(size, np.int64)
        types = np.zeros((size, n if track_classes else 1), np.int64)
        _run_chunk(n, k, first, second, fp, types, track_classes)
        values, counts = np.unique(fp, return_counts=True)
        fp_hist.update(dict(zip(values.tolist(), counts.tolist())))
        if track_classes:
            rows, counts = np.unique(types, axis=0, return_counts=True)
            for row, cnt in zip(rows.tolist(), counts.tolist()):
                classes[tuple(p for p in row if p)] += cnt
        done += size
    return SimulationResult(n, k, steps, samples, fp_hist, classes)


def simulate(spec: WalkSpec, shards: int = 1, track_classes: bool | None = None) -> SimulationResult:
    """Sample ``spec.samples`` walks in ``shards`` independent streams and merge them."""
    if spec.samples < 1:
        raise ValueError("samples must be at least 1")
    if shards < 1:
        raise ValueError("shards must be at least 1")
    result = None
    for s, size in enumerate(shard_sizes(spec.samples, shards)):
        if size == 0:
            continue
        part = simulate_shard(spec, size, spec.seed, s, track_classes)
        result = part if result is None else result + part
    return result
