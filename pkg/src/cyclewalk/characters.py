"""Irreducible characters of S_n.

Values come from the Murnaghan-Nakayama recursion and are exact integers
throughout.  Closed forms (long cycles, transpositions) are kept next to the
recursion and checked against it in the test suite rather than replacing it.
"""
from __future__ import annotations

import csv
import io
import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .partitions import (
    Partition,
    conjugate,
    dimension,
    enumerate_partitions,
    format_partition,
    make_partition,
    part,
    rim_hook_removals,
)

DEFAULT_MAX_N_TABLE = 20


class FeasibilityError(ValueError):
    """Requested size exceeds a configured computational ceiling."""


def max_n_table() -> int:
    return int(os.environ.get("WALK_MAX_N_TABLE", DEFAULT_MAX_N_TABLE))


class CharacterCache:
    """Memo table of character values keyed by ``(lam, mu)``.

    Reads are lock-free; inserts take a lock.  Two threads may compute the
    same entry, but they store the same integer.
    """

    def __init__(self) -> None:
        self._memo: dict[tuple[Partition, Partition], int] = {}
        self._lock = threading.Lock()

    def get(self, key):
        return self._memo.get(key)

    def put(self, key, value: int) -> None:
        with self._lock:
            self._memo.setdefault(key, value)

    def __len__(self) -> int:
        return len(self._memo)

    def clear(self) -> None:
        with self._lock:
            self._memo.clear()


_default_cache = CharacterCache()


def mn_character(lam: Partition, mu: Partition, cache: CharacterCache | None = None) -> int:
    """chi^lam evaluated on the class of cycle type ``mu``.

    Removes the largest part of ``mu`` first, summing sign * chi over every
    rim-hook removal of that length.
    """
    lam = make_partition(lam)
    mu = make_partition(sorted((p for p in mu if p), reverse=True))
    if sum(lam) != sum(mu):
        raise ValueError(f"size mismatch: |lam|={sum(lam)}, |mu|={sum(mu)}")
    return _mn(lam, mu, _default_cache if cache is None else cache)


def _mn(lam: Partition, mu: Partition, cache: CharacterCache) -> int:
    if not mu:
        return 1
    if mu[0] == 1:
        return dimension(lam)
    key = (lam, mu)
    hit = cache.get(key)
    if hit is not None:
        return hit
    rest = mu[1:]
    value = sum(rem.sign * _mn(rem.residue, rest, cache) for rem in rim_hook_removals(lam, mu[0]))
    cache.put(key, value)
    return value


def cycle_class(n: int, k: int) -> Partition:
    """Cycle type of an (n-k)-cycle in S_n."""
    return make_partition((n - k,) + (1,) * k)


def cycle_character(lam: Partition, k: int) -> int:
    """chi^lam on an (n-k)-cycle.

    When the cycle is longer than n/2 at most one rim hook of that length can
    be removed, and the value is that removal's sign times the dimension of
    what is left.
    """
    n = sum(lam)
    m = n - k
    if k < 0 or m < 2:
        raise ValueError(f"need 0 <= k and n - k >= 2, got n={n}, k={k}")
    if 2 * m > n:
        removals = rim_hook_removals(lam, m)
        if not removals:
            return 0
        (rem,) = removals
        return rem.sign * dimension(rem.residue)
    return mn_character(lam, cycle_class(n, k))


def transposition_normalized(lam: Partition) -> Fraction:
    """r(lam) = chi^lam(transposition) / d_lam, from row lengths."""
    n = sum(lam)
    if n < 2:
        raise ValueError("transpositions need n >= 2")
    total = sum(p * p - (2 * i + 1) * p for i, p in enumerate(lam))
    return Fraction(total, n * (n - 1))


def transposition_normalized_binomial(lam: Partition) -> Fraction:
    """Same value as :func:`transposition_normalized`, from rows and columns."""
    n = sum(lam)
    if n < 2:
        raise ValueError("transpositions need n >= 2")
    total = sum(comb(p, 2) for p in lam) - sum(comb(q, 2) for q in conjugate(lam))
    return Fraction(total, comb(n, 2))


def r_upper_bound(lam: Partition) -> Fraction:
    """Upper bound on r(lam) using only the first two rows."""
    n = sum(lam)
    if n < 2:
        raise ValueError("transpositions need n >= 2")
    l1, l2 = part(lam, 0), part(lam, 1)
    return (l2 - 3 + Fraction(l1 * (l1 - l2 + 2), n)) / (n - 1)


def rim_move_delta(lam: Partition, k: int, l: int) -> Fraction:
    """r(lam) - r(lam') where lam' moves one box from row k down to row l.

    Rows are 1-based; row l may be one past the last row.  The closed form
    is cross-checked against direct evaluation on both diagrams.
    """
    n = sum(lam)
    if not (1 <= k < l <= len(lam) + 1):
        raise ValueError(f"need 1 <= k < l <= {len(lam) + 1}, got k={k}, l={l}")
    lk, ll = part(lam, k - 1), part(lam, l - 1)
    if not ll < lk:
        raise ValueError("the moved box must come from a longer row")
    moved = list(lam) + [0]
    moved[k - 1] -= 1
    moved[l - 1] += 1
    try:
        lam_prime = make_partition(moved)
    except ValueError:
        raise ValueError(f"moving a box from row {k} to row {l} of {lam} is not a partition") from None
    delta = Fraction(2 * (lk - ll + (l - k) - 1), n * (n - 1))
    direct = transposition_normalized(lam) - transposition_normalized(lam_prime)
    if delta != direct:
        raise AssertionError(f"rim move closed form {delta} != direct {direct}")
    return delta


@dataclass(frozen=True)
class CharacterTable:
    """Rows indexed by irreducibles, columns by cycle types (identity class first)."""

    n: int
    rows: tuple[Partition, ...]
    classes: tuple[Partition, ...]
    values: tuple[tuple[int, ...], ...]

    def __getitem__(self, key: tuple[Partition, Partition]) -> int:
        lam, mu = key
        return self.values[self.rows.index(lam)][self.classes.index(mu)]

    def row(self, lam: Partition) -> tuple[int, ...]:
        return self.values[self.rows.index(lam)]

    def column(self, mu: Partition) -> tuple[int, ...]:
        j = self.classes.index(mu)
        return tuple(r[j] for r in self.values)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["lambda"] + [format_partition(mu) for mu in self.classes])
        for lam, vals in zip(self.rows, self.values):
            writer.writerow([format_partition(lam)] + list(vals))
        return buf.getvalue()


def character_table(n: int, ceiling: int | None = None) -> CharacterTable:
    ceiling = max_n_table() if ceiling is None else ceiling
    if n > ceiling:
        raise FeasibilityError(
            f"character table for n={n} exceeds the ceiling n <= {ceiling} (set WALK_MAX_N_TABLE to raise it)"
        )
    rows = enumerate_partitions(n)
    classes = rows[::-1]
    values = tuple(tuple(mn_character(lam, mu) for mu in classes) for lam in rows)
    return CharacterTable(n, rows, classes, values)
