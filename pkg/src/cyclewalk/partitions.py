"""Integer partitions and Young diagrams.

Partitions are plain tuples of positive integers in non-increasing order, so
they hash, compare and serve as dictionary keys without wrapping.  The same
tuples index irreducible representations of S_n and cycle types.
"""
from __future__ import annotations

import bisect
import enum
from functools import lru_cache
from math import comb, factorial, prod
from typing import Iterator, NamedTuple, Sequence

Partition = tuple[int, ...]

SYT_BRUTEFORCE_CEILING = 10


def make_partition(parts: Sequence[int]) -> Partition:
    """Validate ``parts`` and return it as a canonical partition tuple.

    Trailing zeros are stripped; anything else that is not a non-increasing
    sequence of positive integers raises ``ValueError``.
    """
    parts = list(parts)
    while parts and parts[-1] == 0:
        parts.pop()
    for a, b in zip(parts, parts[1:]):
        if b > a:
            raise ValueError(f"parts must be non-increasing: {tuple(parts)}")
    if parts and parts[-1] < 0:
        raise ValueError(f"parts must be positive: {tuple(parts)}")
    return tuple(int(p) for p in parts)


def parse_partition(text: str) -> Partition:
    """Parse the comma-joined wire form, e.g. ``"6,4,2,1,1"``; ``""`` is the empty partition."""
    text = text.strip()
    if not text:
        return ()
    return make_partition([int(tok) for tok in text.split(",")])


def format_partition(lam: Partition) -> str:
    return ",".join(str(p) for p in lam)


def size(lam: Partition) -> int:
    return sum(lam)


def part(lam: Partition, i: int) -> int:
    """The ``i``-th part (0-based), reading missing parts as 0."""
    return lam[i] if i < len(lam) else 0


@lru_cache(maxsize=64)
def enumerate_partitions(n: int) -> tuple[Partition, ...]:
    """All partitions of ``n`` in reverse-lexicographic order, starting from ``(n,)``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    out: list[Partition] = []

    def rec(remaining: int, cap: int, prefix: list[int]) -> None:
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for p in range(min(remaining, cap), 0, -1):
            prefix.append(p)
            rec(remaining - p, p, prefix)
            prefix.pop()

    rec(n, n, [])
    return tuple(out)


def conjugate(lam: Partition) -> Partition:
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p > j) for j in range(lam[0]))


def strip_rows(lam: Partition, r: int) -> Partition:
    """Drop the first ``r`` rows of the diagram."""
    if r < 0:
        raise ValueError("r must be non-negative")
    return lam[r:]


class Dominance(str, enum.Enum):
    EQUAL = "equal"
    DOMINATES = "dominates"
    DOMINATED = "dominated"
    INCOMPARABLE = "incomparable"


def dominance(lam: Partition, xi: Partition) -> Dominance:
    """Compare two partitions of the same size in dominance order."""
    if sum(lam) != sum(xi):
        raise ValueError(f"dominance needs equal sizes, got {sum(lam)} and {sum(xi)}")
    if lam == xi:
        return Dominance.EQUAL
    ge = le = True
    a = b = 0
    for j in range(max(len(lam), len(xi))):
        a += part(lam, j)
        b += part(xi, j)
        ge &= a >= b
        le &= a <= b
    if ge:
        return Dominance.DOMINATES
    if le:
        return Dominance.DOMINATED
    return Dominance.INCOMPARABLE


def hook_lengths(lam: Partition) -> list[list[int]]:
    conj = conjugate(lam)
    return [[(row - j - 1) + (conj[j] - i - 1) + 1 for j in range(row)] for i, row in enumerate(lam)]


@lru_cache(maxsize=4096)
def dimension(lam: Partition) -> int:
    """Number of standard Young tableaux of shape ``lam``, by the hook-length formula."""
    hooks = prod(h for row in hook_lengths(lam) for h in row)
    return factorial(sum(lam)) // hooks


def syt_count_bruteforce(lam: Partition, ceiling: int = SYT_BRUTEFORCE_CEILING) -> int:
    """Count standard fillings of ``lam`` by filling cells with 1, 2, ... one at a time.

    Each step puts the next number into any cell whose upper and left
    neighbours are already filled, so every standard filling is visited
    exactly once.  Independent of the hook-length formula.
    """
    n = sum(lam)
    if n > ceiling:
        raise ValueError(f"brute-force SYT count limited to n <= {ceiling}, got {n}")
    target = list(lam)

    def rec(filled: list[int], placed: int) -> int:
        if placed == n:
            return 1
        total = 0
        for i, row in enumerate(target):
            # next free cell in row i is column filled[i]
            if filled[i] < row and (i == 0 or filled[i - 1] > filled[i]):
                filled[i] += 1
                total += rec(filled, placed + 1)
                filled[i] -= 1
        return total

    return rec([0] * len(target), 0)


class RimHookRemoval(NamedTuple):
    residue: Partition
    rows_spanned: int
    sign: int


def rim_hook_removals(lam: Partition, m: int) -> list[RimHookRemoval]:
    """Every way to remove an ``m``-cell rim hook from ``lam``.

    Each cell with hook length ``m`` determines one removal: the rim between
    the end of its arm and the end of its leg.  Ordered by the top row of the
    removed hook.
    """
    if m < 1:
        raise ValueError("rim hook length must be positive")
    if not lam:
        return []
    conj = conjugate(lam)
    found = []
    for i, row in enumerate(lam):
        for j in range(row):
            arm = row - j - 1
            leg = conj[j] - i - 1
            if arm + leg + 1 != m:
                continue
            new = list(lam)
            for r in range(i, i + leg):
                new[r] = lam[r + 1] - 1
            new[i + leg] = j
            found.append(RimHookRemoval(make_partition(new), leg + 1, -1 if leg % 2 else 1))
    return found


def beta_set(lam: Partition, length: int) -> list[int]:
    """First-column hook lengths of ``lam`` padded to ``length`` beads, descending."""
    if length < len(lam):
        raise ValueError("beta set shorter than the partition")
    return [part(lam, r) + length - 1 - r for r in range(length)]


def from_beta_set(beads: Sequence[int]) -> Partition:
    beads = sorted(beads, reverse=True)
    L = len(beads)
    return make_partition([b - (L - 1 - r) for r, b in enumerate(beads)])


class Attachment(NamedTuple):
    """An ``m``-rim hook added to ``xi``, described on the beta set of ``xi``.

    ``bottom_row`` is the row of the hook's lowest cell; ``lowest_content`` is
    the content (column minus row) of that cell, so the hook's cells carry
    the contents ``lowest_content .. lowest_content + m - 1``.
    """
    bottom_row: int
    lowest_content: int
    rows_spanned: int
    beads: tuple[int, ...]


def iter_attachments(xi: Partition, m: int) -> Iterator[Attachment]:
    """Attachments of an ``m``-rim hook to ``xi``, by increasing bottom row.

    A hook is added by sliding one bead of the beta set ``m`` places up into
    an empty position; the bead's original row is the hook's lowest row.
    """
    if m < 1:
        raise ValueError("rim hook length must be positive")
    L = len(xi) + m
    beads = beta_set(xi, L)
    occupied = set(beads)
    ascending = beads[::-1]
    for r, b in enumerate(beads):
        if b + m in occupied:
            continue
        between = bisect.bisect_left(ascending, b + m) - bisect.bisect_right(ascending, b)
        new = list(beads)
        new[r] = b + m
        yield Attachment(r, b - L + 1, between + 1, tuple(sorted(new, reverse=True)))


def rim_hook_attachments(xi: Partition, m: int) -> list[Partition]:
    """All partitions that leave ``xi`` after removing some ``m``-rim hook.

    Ordered by the row of the attached hook's lowest cell, so the first entry
    extends the first row of ``xi`` by ``m``.
    """
    return [from_beta_set(a.beads) for a in iter_attachments(xi, m)]


def content_sum(lam: Partition) -> int:
    """Sum over cells of (column - row); equals sum of C(lam_i, 2) - C(lam^T_i, 2)."""
    return sum(comb(p, 2) - i * p for i, p in enumerate(lam))
