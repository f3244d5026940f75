import math
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from cyclewalk.partitions import (
    Dominance,
    beta_set,
    conjugate,
    content_sum,
    dimension,
    dominance,
    enumerate_partitions,
    format_partition,
    from_beta_set,
    hook_lengths,
    iter_attachments,
    make_partition,
    parse_partition,
    rim_hook_attachments,
    rim_hook_removals,
    strip_rows,
    syt_count_bruteforce,
)

from oracles import partitions_bruteforce, rim_hooks_bruteforce

# partition numbers p(0..14), written down before running anything
PARTITION_NUMBERS = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135]


@st.composite
def partitions(draw, min_n=0, max_n=12):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    parts = []
    left = n
    while left:
        p = draw(st.integers(min_value=1, max_value=min(left, parts[-1] if parts else left)))
        parts.append(p)
        left -= p
    return tuple(parts)


# --- construction and wire form ---------------------------------------------

def test_make_partition_strips_zeros():
    assert make_partition([3, 1, 0, 0]) == (3, 1)


@pytest.mark.parametrize("bad", [[1, 2], [2, -1], [3, 0, 1]])
def test_make_partition_rejects(bad):
    with pytest.raises(ValueError):
        make_partition(bad)


def test_wire_form():
    assert parse_partition("6,4,2,1,1") == (6, 4, 2, 1, 1)
    assert format_partition((6, 4, 2, 1, 1)) == "6,4,2,1,1"
    assert parse_partition("") == ()


@given(partitions())
def test_wire_roundtrip(lam):
    assert parse_partition(format_partition(lam)) == lam


# --- enumeration ---------------------------------------------------------------

def test_enumerate_small():
    assert enumerate_partitions(0) == ((),)
    assert enumerate_partitions(4) == ((4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1))
    assert len(enumerate_partitions(10)) == 42


@pytest.mark.parametrize("n", range(0, 15))
def test_enumerate_counts(n):
    got = enumerate_partitions(n)
    assert len(got) == PARTITION_NUMBERS[n]
    assert len(set(got)) == len(got)
    assert list(got) == sorted(got, reverse=True)
    assert got[0] == ((n,) if n else ())


@pytest.mark.parametrize("n", range(0, 11))
def test_enumerate_matches_composition_oracle(n):
    assert set(enumerate_partitions(n)) == partitions_bruteforce(n)


# --- conjugation ---------------------------------------------------------------

def test_conjugate_examples():
    assert conjugate((5,)) == (1,) * 5
    assert conjugate((6, 4, 2, 1, 1)) == (5, 3, 2, 2, 1, 1)
    assert conjugate(()) == ()


@given(partitions())
def test_conjugate_involution(lam):
    assert conjugate(conjugate(lam)) == lam
    assert sum(conjugate(lam)) == sum(lam)


def test_strip_rows():
    n, i = 12, 3
    assert strip_rows((n - 2 - i, 2) + (1,) * i, 2) == (1,) * i
    assert strip_rows((5, 3, 1), 1) == (3, 1)
    assert strip_rows((4,), 2) == ()
    with pytest.raises(ValueError):
        strip_rows((4,), -1)


# --- dominance -----------------------------------------------------------------

def test_dominance_examples():
    assert dominance((3, 3), (4, 1, 1)) is Dominance.INCOMPARABLE
    assert dominance((4, 1, 1), (3, 3)) is Dominance.INCOMPARABLE
    assert dominance((6,), (6,)) is Dominance.EQUAL
    for xi in enumerate_partitions(6)[1:]:
        assert dominance((6,), xi) is Dominance.DOMINATES
        assert dominance(xi, (6,)) is Dominance.DOMINATED
    with pytest.raises(ValueError):
        dominance((2,), (1,))


def _ge(a, b):
    return dominance(a, b) in (Dominance.EQUAL, Dominance.DOMINATES)


@pytest.mark.parametrize("n", range(1, 11))
def test_dominance_is_partial_order(n):
    ps = enumerate_partitions(n)
    ge = {(a, b): _ge(a, b) for a in ps for b in ps}
    for a in ps:
        assert ge[a, a]
    for a in ps:
        for b in ps:
            if a != b:
                assert not (ge[a, b] and ge[b, a])
                assert (dominance(a, b) is Dominance.DOMINATES) == (dominance(b, a) is Dominance.DOMINATED)
    # transitivity on the up-sets
    for a in ps:
        above_a = [b for b in ps if ge[b, a]]
        for b in above_a:
            for c in ps:
                if ge[c, b]:
                    assert ge[c, a]


@pytest.mark.parametrize("n", range(1, 9))
def test_dominance_reverses_under_conjugation(n):
    ps = enumerate_partitions(n)
    for a in ps:
        for b in ps:
            assert _ge(a, b) == _ge(conjugate(b), conjugate(a))


# --- hooks and dimensions ---------------------------------------------------------

def test_hook_lengths_examples():
    assert hook_lengths((2, 2)) == [[3, 2], [2, 1]]
    assert hook_lengths((1,)) == [[1]]
    assert hook_lengths((3, 1)) == [[4, 2, 1], [1]]


def test_dimension_examples():
    assert dimension((7,)) == 1
    assert dimension((2, 2)) == 2
    assert dimension((4, 1)) == 4


def test_syt_bruteforce_examples():
    assert syt_count_bruteforce((2, 1)) == 2
    assert syt_count_bruteforce((1, 1, 1)) == 1
    assert syt_count_bruteforce((3, 2)) == 5
    with pytest.raises(ValueError):
        syt_count_bruteforce((11,))


@pytest.mark.parametrize("n", range(1, 9))
def test_dimension_equals_syt_count(n):
    for lam in enumerate_partitions(n):
        assert dimension(lam) == syt_count_bruteforce(lam)


@pytest.mark.parametrize("n", range(0, 13))
def test_dimension_squares_sum_to_factorial(n):
    assert sum(dimension(lam) ** 2 for lam in enumerate_partitions(n)) == math.factorial(n)


@given(partitions(max_n=30))
def test_dimension_conjugate_symmetry(lam):
    assert dimension(lam) == dimension(conjugate(lam))


def test_dimension_is_exact_beyond_64_bits():
    lam = (10, 9, 8, 7, 6)
    assert dimension(lam) > 2**63
    assert dimension(lam) == math.factorial(40) // math.prod(h for row in hook_lengths(lam) for h in row)


# --- rim hooks -----------------------------------------------------------------

def test_rim_hook_examples():
    assert rim_hook_removals((2, 2), 3) == [((1,), 2, -1)]
    assert rim_hook_removals((3, 1), 3) == []
    assert rim_hook_removals((6,), 6) == [((), 1, 1)]
    with pytest.raises(ValueError):
        rim_hook_removals((2,), 0)


@pytest.mark.parametrize("n", range(1, 9))
def test_rim_hook_removals_match_skew_search(n):
    for lam in enumerate_partitions(n):
        for m in range(1, n + 1):
            got = sorted((r.residue, r.rows_spanned) for r in rim_hook_removals(lam, m))
            assert got == rim_hooks_bruteforce(lam, m), (lam, m)
            for r in rim_hook_removals(lam, m):
                assert r.sign == (-1) ** (r.rows_spanned - 1)


@pytest.mark.parametrize("n", range(1, 15))
def test_long_rim_hook_is_unique(n):
    for lam in enumerate_partitions(n):
        for m in range(n // 2 + 1, n + 1):
            assert len(rim_hook_removals(lam, m)) <= 1


def test_attachment_examples():
    n = 14
    got = rim_hook_attachments((2, 1, 1), n - 4)
    assert len(got) == n - 4
    assert got[0] == (n - 2, 1, 1)
    assert got[1] == (n - 4, 3, 1)
    assert got[-1] == (2,) + (1,) * (n - 2)
    assert rim_hook_attachments((), 5) == [(5,), (4, 1), (3, 1, 1), (2, 1, 1, 1), (1, 1, 1, 1, 1)]


def test_attachment_to_column_starts_with_hook_over_first_row():
    # the first attachment extends the first row of the column (k) by m cells
    k, m = 3, 9
    assert rim_hook_attachments((1,) * k, m)[0] == (m + 1, 1, 1)


@pytest.mark.parametrize("total", range(1, 15))
def test_attachments_and_removals_are_inverse(total):
    for m in range(1, total + 1):
        for xi in enumerate_partitions(total - m):
            attached = rim_hook_attachments(xi, m)
            assert len(set(attached)) == len(attached)
            for lam in attached:
                assert xi in [r.residue for r in rim_hook_removals(lam, m)]
        for lam in enumerate_partitions(total):
            for r in rim_hook_removals(lam, m):
                assert lam in rim_hook_attachments(r.residue, m)


@pytest.mark.parametrize("k", range(0, 6))
def test_long_hook_attachment_count(k):
    n = 3 * k + 5
    for xi in enumerate_partitions(k):
        assert len(rim_hook_attachments(xi, n - k)) == n - k


@given(partitions(max_n=8), st.integers(min_value=1, max_value=8))
@settings(max_examples=150)
def test_attachment_metadata(xi, m):
    for a in iter_attachments(xi, m):
        lam = from_beta_set(a.beads)
        # the added cells carry m consecutive contents starting at lowest_content
        added = content_sum(lam) - content_sum(xi)
        assert added == m * a.lowest_content + m * (m - 1) // 2
        removal = [r for r in rim_hook_removals(lam, m) if r.residue == xi]
        assert [r.rows_spanned for r in removal] == [a.rows_spanned]
        assert part(lam, a.bottom_row) > part(xi, a.bottom_row)


def part(lam, i):
    return lam[i] if i < len(lam) else 0


@given(partitions())
def test_beta_set_roundtrip(lam):
    assert from_beta_set(beta_set(lam, len(lam) + 3)) == lam


def test_content_sum_matches_cell_sum():
    for n in range(0, 9):
        for lam in enumerate_partitions(n):
            assert content_sum(lam) == sum(j - i for i, row in enumerate(lam) for j in range(row))


def test_hook_multiset_counts_cells():
    lam = (6, 4, 2, 1, 1)
    hooks = Counter(h for row in hook_lengths(lam) for h in row)
    assert sum(hooks.values()) == 14
    for m, count in hooks.items():
        assert len(rim_hook_removals(lam, m)) == count
