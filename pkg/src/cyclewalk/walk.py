"""The (n-k)-cycle-then-transpositions chain, tracked on conjugacy classes.

Every measure the chain produces is constant on conjugacy classes, so a
measure on S_n is stored as a map from cycle type to the total probability of
that class.  Two independent engines evolve it: direct convolution on cycle
types and the Fourier (character) expansion.
"""
from __future__ import annotations

import math
import os
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod
from typing import Mapping, Union

from .characters import (
    FeasibilityError,
    character_table,
    cycle_character,
    max_n_table,
    transposition_normalized,
)
from .partitions import Partition, enumerate_partitions, make_partition

Prob = Union[Fraction, float]

DEFAULT_MAX_N_EXACT = 40
EXACT = "exact"
FLOAT = "float"
AUTO = "auto"


class InvariantError(RuntimeError):
    """Two routes that must agree did not."""


def max_n_exact() -> int:
    return int(os.environ.get("WALK_MAX_N_EXACT", DEFAULT_MAX_N_EXACT))


def cycle_sign(mu: Partition) -> int:
    return -1 if (sum(mu) - len(mu)) % 2 else 1


def class_size(mu: Partition) -> int:
    """Number of permutations of cycle type ``mu``."""
    mult = Counter(mu)
    return factorial(sum(mu)) // prod(l**m * factorial(m) for l, m in mult.items())


def _order_key(mu: Partition):
    # reverse-lexicographic, matching enumerate_partitions
    return tuple(-p for p in mu)


@dataclass(frozen=True)
class ClassMeasure:
    """Probability measure on S_n, constant on conjugacy classes.

    ``probs`` maps a cycle type to the total mass of its class; classes with
    zero mass are omitted.  ``parity`` is +1 or -1 when the support lies in
    one coset of A_n, ``None`` when it is mixed.
    """

    n: int
    probs: Mapping[Partition, Prob]
    parity: int | None = None
    exact: bool = field(default=True)

    def __post_init__(self):
        ordered = dict(sorted(self.probs.items(), key=lambda kv: _order_key(kv[0])))
        object.__setattr__(self, "probs", ordered)

    def __getitem__(self, mu: Partition) -> Prob:
        return self.probs.get(mu, 0)

    def total(self) -> Prob:
        if self.exact:
            return sum(self.probs.values(), Fraction(0))
        return math.fsum(self.probs.values())

    def support_parity(self) -> int | None:
        signs = {cycle_sign(mu) for mu, p in self.probs.items() if p != 0}
        return signs.pop() if len(signs) == 1 else None

    def as_float(self) -> "ClassMeasure":
        return ClassMeasure(self.n, {mu: float(p) for mu, p in self.probs.items()}, self.parity, exact=False)


@dataclass(frozen=True)
class WalkSpec:
    """Parameters of one run: start from a random (n-k)-cycle, then ``t`` transpositions.

    Give either ``t`` or ``c``; with ``c`` the step count is round(c n) for
    k = 1 and round(c n + (n/2) ln k) for k >= 2.
    """

    n: int
    k: int = 1
    t: int | None = None
    c: float | None = None
    seed: int = 0
    samples: int = 0

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"n must be at least 3, got {self.n}")
        if self.k < 0 or self.n - self.k < 2:
            raise ValueError(f"need 0 <= k and n - k >= 2, got n={self.n}, k={self.k}")
        if (self.t is None) == (self.c is None):
            raise ValueError("give exactly one of t or c")
        if self.t is not None and self.t < 0:
            raise ValueError("t must be non-negative")
        if self.c is not None and self.c <= 0:
            raise ValueError("c must be positive")

    @property
    def steps(self) -> int:
        """Transpositions applied after the initial cycle."""
        if self.t is not None:
            return self.t
        return steps_for(self.n, self.k, self.c)


def steps_for(n: int, k: int, c: float) -> int:
    if k <= 1:
        return round(c * n)
    return round(c * n + 0.5 * n * math.log(k))


def c_for(n: int, k: int, t: int) -> float:
    """Inverse of :func:`steps_for` before rounding."""
    if k <= 1:
        return t / n
    return (t - 0.5 * n * math.log(k)) / n


def resolve_mode(mode: str, n: int, t: int) -> str:
    if mode == AUTO:
        return EXACT if (n <= 8 or t <= 12) else FLOAT
    if mode not in (EXACT, FLOAT):
        raise ValueError(f"unknown numeric mode {mode!r}")
    return mode


def initial_measure(n: int, k: int) -> ClassMeasure:
    if k < 0 or n - k < 2:
        raise ValueError(f"need 0 <= k and n - k >= 2, got n={n}, k={k}")
    mu = make_partition((n - k,) + (1,) * k)
    return ClassMeasure(n, {mu: Fraction(1)}, cycle_sign(mu))


@lru_cache(maxsize=1 << 16)
def _transitions(mu: Partition) -> tuple[tuple[Partition, int], ...]:
    """Cycle types reachable from ``mu`` by one transposition, with pair counts.

    A pair inside a cycle of length l splits it into {d, l - d}: l pairs for
    d < l/2, l/2 pairs for d = l/2.  A pair across cycles of lengths a, b
    merges them.  Counts sum to C(n, 2).
    """
    mult = Counter(mu)
    lengths = sorted(mult)
    out: Counter = Counter()

    def replace(remove: tuple[int, ...], add: tuple[int, ...]) -> Partition:
        c = Counter(mu)
        c.subtract(remove)
        c.update(add)
        return tuple(sorted(c.elements(), reverse=True))

    for l in lengths:
        m = mult[l]
        for d in range(1, l // 2 + 1):
            pairs = l // 2 if 2 * d == l else l
            out[replace((l,), (d, l - d))] += m * pairs
    for i, a in enumerate(lengths):
        ma = mult[a]
        if ma >= 2:
            out[replace((a, a), (2 * a,))] += comb(ma, 2) * a * a
        for b in lengths[i + 1:]:
            out[replace((a, b), (a + b,))] += ma * mult[b] * a * b
    return tuple(sorted(out.items(), key=lambda kv: _order_key(kv[0])))


def transposition_step(m: ClassMeasure) -> ClassMeasure:
    """Convolve with the uniform measure on transpositions."""
    n = m.n
    total_pairs = comb(n, 2)
    acc: dict[Partition, list] = {}
    for mu, p in m.probs.items():
        if p == 0:
            continue
        for nu, count in _transitions(mu):
            if m.exact:
                acc.setdefault(nu, []).append(p * Fraction(count, total_pairs))
            else:
                acc.setdefault(nu, []).append(p * count / total_pairs)
    if m.exact:
        probs = {nu: sum(terms, Fraction(0)) for nu, terms in acc.items()}
    else:
        probs = {nu: math.fsum(terms) for nu, terms in acc.items()}
    parity = None if m.parity is None else -m.parity
    return ClassMeasure(n, probs, parity, m.exact)


def evolve_direct(spec: WalkSpec, mode: str = AUTO) -> ClassMeasure:
    """Law after the initial cycle and ``spec.steps`` transpositions, by repeated convolution."""
    if spec.n > max_n_exact():
        raise FeasibilityError(
            f"direct engine limited to n <= {max_n_exact()} (set WALK_MAX_N_EXACT to raise it), got n={spec.n}"
        )
    t = spec.steps
    m = initial_measure(spec.n, spec.k)
    if resolve_mode(mode, spec.n, t) == FLOAT:
        m = m.as_float()
    for _ in range(t):
        m = transposition_step(m)
    return m


def iter_direct(n: int, k: int, t_max: int, mode: str = AUTO):
    """Yield (t, law) for t = 0..t_max, reusing each step."""
    m = initial_measure(n, k)
    if resolve_mode(mode, n, t_max) == FLOAT:
        m = m.as_float()
    yield 0, m
    for t in range(1, t_max + 1):
        m = transposition_step(m)
        yield t, m


def fourier_coefficients(n: int, k: int, t: int, exact: bool = True):
    """Per irreducible lam: chi^lam(cycle) * r(lam)^t, i.e. the trace of the transform."""
    out = {}
    for lam in enumerate_partitions(n):
        chi = cycle_character(lam, k)
        if chi == 0:
            continue
        r = transposition_normalized(lam)
        out[lam] = chi * r**t if exact else chi * float(r) ** t
    return out


def evolve_fourier(spec: WalkSpec, mode: str = AUTO, float_tol: float = 1e-12) -> ClassMeasure:
    """Law after the initial cycle and ``spec.steps`` transpositions, by inverse Fourier transform.

    mu(c) = |c|/n! * sum_lam chi^lam_c * chi^lam(cycle) * r(lam)^t
    """
    n, k, t = spec.n, spec.k, spec.steps
    if n > max_n_table():
        raise FeasibilityError(
            f"Fourier engine limited to n <= {max_n_table()} (set WALK_MAX_N_TABLE to raise it), got n={n}"
        )
    exact = resolve_mode(mode, n, t) == EXACT
    table = character_table(n)
    coeffs = fourier_coefficients(n, k, t, exact)
    parity = cycle_sign((n - k,) + (1,) * k) * (-1) ** t
    nfact = factorial(n)
    rows = [(table.values[table.rows.index(lam)], f) for lam, f in coeffs.items()]
    probs: dict[Partition, Prob] = {}
    for j, mu in enumerate(table.classes):
        if cycle_sign(mu) != parity:
            continue
        if exact:
            s = sum((row[j] * f for row, f in rows), Fraction(0))
            p = Fraction(class_size(mu), nfact) * s
        else:
            s = math.fsum(row[j] * f for row, f in rows)
            p = class_size(mu) / nfact * s
            if abs(p) < float_tol:
                p = 0.0
        if p < 0:
            raise InvariantError(f"negative class probability {p} for {mu}")
        if p != 0:
            probs[mu] = p
    return ClassMeasure(n, probs, parity, exact)


def stationary_measure(n: int, t: int, k: int) -> ClassMeasure:
    """Uniform law on A_n when t and n - k have the same parity, else on the odd coset.

    ``t`` counts every step including the initial cycle.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    parity = 1 if (t - (n - k)) % 2 == 0 else -1
    half = factorial(n) // 2
    probs = {mu: Fraction(class_size(mu), half) for mu in enumerate_partitions(n) if cycle_sign(mu) == parity}
    return ClassMeasure(n, probs, parity)


def stationary_for(spec: WalkSpec) -> ClassMeasure:
    """The coset law matched to the chain after ``spec.steps`` transpositions."""
    return stationary_measure(spec.n, spec.steps + 1, spec.k)


def tv(a: ClassMeasure, b: ClassMeasure) -> Prob:
    """Total variation distance; classwise sums suffice since both are class measures."""
    if a.n != b.n:
        raise ValueError(f"measures on different groups: n={a.n} vs n={b.n}")
    keys = sorted(set(a.probs) | set(b.probs), key=_order_key)
    if a.exact and b.exact:
        return sum((abs(a[mu] - b[mu]) for mu in keys), Fraction(0)) / 2
    return 0.5 * math.fsum(abs(float(a[mu]) - float(b[mu])) for mu in keys)


def max_discrepancy(a: ClassMeasure, b: ClassMeasure) -> Prob:
    keys = set(a.probs) | set(b.probs)
    return max((abs(a[mu] - b[mu]) for mu in keys), default=0)


def fixed_points(mu: Partition) -> int:
    return sum(1 for p in mu if p == 1)


def fixed_point_pmf(m: ClassMeasure) -> dict[int, Prob]:
    groups: dict[int, list] = {}
    for mu, p in m.probs.items():
        groups.setdefault(fixed_points(mu), []).append(p)
    if m.exact:
        return {j: sum(ps, Fraction(0)) for j, ps in sorted(groups.items())}
    return {j: math.fsum(ps) for j, ps in sorted(groups.items())}


def fixed_point_moment(m: ClassMeasure, r: int) -> Prob:
    """E[(number of fixed points)^r]."""
    if r < 0:
        raise ValueError("moment order must be non-negative")
    pmf = fixed_point_pmf(m)
    if m.exact:
        return sum((p * j**r for j, p in pmf.items()), Fraction(0))
    return math.fsum(p * j**r for j, p in pmf.items())
