import math
import random
import threading
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cyclewalk.characters import (
    CharacterCache,
    FeasibilityError,
    character_table,
    cycle_character,
    mn_character,
    r_upper_bound,
    rim_move_delta,
    transposition_normalized,
    transposition_normalized_binomial,
)
from cyclewalk.partitions import Dominance, conjugate, dimension, dominance, enumerate_partitions
from cyclewalk.walk import class_size

from oracles import class_sizes_bruteforce, frobenius_character

# S_5, rows in enumeration order, classes (1^5),(2,1^3),(2,2,1),(3,1,1),(3,2),(4,1),(5)
S5_TABLE = {
    (5,): (1, 1, 1, 1, 1, 1, 1),
    (4, 1): (4, 2, 0, 1, -1, 0, -1),
    (3, 2): (5, 1, 1, -1, 1, -1, 0),
    (3, 1, 1): (6, 0, -2, 0, 0, 0, 1),
    (2, 2, 1): (5, -1, 1, -1, -1, 1, 0),
    (2, 1, 1, 1): (4, -2, 0, 1, 1, 0, -1),
    (1, 1, 1, 1, 1): (1, -1, 1, 1, -1, -1, 1),
}


def transposition(n):
    return (2,) + (1,) * (n - 2)


def test_mn_examples():
    for mu in enumerate_partitions(6):
        assert mn_character((6,), mu) == 1
    assert mn_character((2, 2), (3, 1)) == -1
    assert mn_character((7, 1), (5, 1, 1, 1)) == 2
    n = 10
    assert mn_character((n - 2, 2), (n - 2, 1, 1)) == -1
    with pytest.raises(ValueError):
        mn_character((3,), (2,))


def test_mn_accepts_unsorted_class_and_trailing_zeros():
    assert mn_character((3, 1, 0), (1, 3)) == mn_character((3, 1), (3, 1))


def test_s5_table_frozen():
    table = character_table(5)
    for lam, row in S5_TABLE.items():
        assert table.row(lam) == row


@pytest.mark.parametrize("n", range(1, 8))
def test_mn_matches_frobenius_formula(n):
    for lam in enumerate_partitions(n):
        for mu in enumerate_partitions(n):
            assert mn_character(lam, mu) == frobenius_character(lam, mu), (lam, mu)


def test_identity_column_is_dimension():
    for n in range(1, 11):
        for lam in enumerate_partitions(n):
            assert mn_character(lam, (1,) * n) == dimension(lam)


@pytest.mark.parametrize("n", range(1, 13))
def test_row_orthogonality(n):
    table = character_table(n)
    sizes = [class_size(mu) for mu in table.classes]
    fact = math.factorial(n)
    for a, ra in enumerate(table.values):
        for b, rb in enumerate(table.values[: a + 1]):
            inner = sum(s * x * y for s, x, y in zip(sizes, ra, rb))
            assert inner == (fact if a == b else 0)


@pytest.mark.parametrize("n", range(1, 11))
def test_column_orthogonality(n):
    table = character_table(n)
    fact = math.factorial(n)
    for i, mu in enumerate(table.classes):
        for j, nu in enumerate(table.classes[: i + 1]):
            inner = sum(row[i] * row[j] for row in table.values)
            assert inner == (fact // class_size(mu) if i == j else 0)


@pytest.mark.parametrize("n", range(1, 8))
def test_class_size_formula(n):
    sizes = class_sizes_bruteforce(n)
    for mu in enumerate_partitions(n):
        assert class_size(mu) == sizes[mu]


def test_character_table_small():
    t2 = character_table(2)
    assert t2.classes == ((1, 1), (2,))
    assert t2.rows == ((2,), (1, 1))
    assert t2.values == ((1, 1), (1, -1))
    t4 = character_table(4)
    assert t4.row((2, 2)) == (2, 0, 2, -1, 0)
    assert t4[(2, 2), (3, 1)] == -1
    assert t4.column((1, 1, 1, 1)) == (1, 3, 2, 3, 1)


def test_character_table_csv():
    text = character_table(3).to_csv()
    assert text.splitlines() == ['lambda,"1,1,1","2,1",3', "3,1,1,1", '"2,1",2,0,-1', '"1,1,1",1,-1,1']


def test_character_table_ceiling(monkeypatch):
    with pytest.raises(FeasibilityError, match="ceiling"):
        character_table(25)
    monkeypatch.setenv("WALK_MAX_N_TABLE", "3")
    with pytest.raises(FeasibilityError, match="WALK_MAX_N_TABLE"):
        character_table(4)


# --- cycle characters ---------------------------------------------------------

def test_cycle_character_examples():
    n = 13
    for i in range(0, n - 4):
        lam = (n - 2 - i, 2) + (1,) * i
        if lam[0] >= 2:
            assert cycle_character(lam, 1) == (-1) ** (i + 1)
    for k in range(0, n - 1):
        assert cycle_character((n,), k) == 1
    assert cycle_character((n - 3, 3), 2) == -1
    with pytest.raises(ValueError):
        cycle_character((5,), 4)


@pytest.mark.parametrize("n", range(3, 11))
def test_cycle_character_fast_path_matches_mn(n):
    for k in range(0, n - 1):
        mu = tuple(sorted((n - k,) + (1,) * k, reverse=True))
        for lam in enumerate_partitions(n):
            assert cycle_character(lam, k) == mn_character(lam, mu)


def test_long_cycle_characters_vanish_except_hook_families():
    # on an (n-1)-cycle only (n), (1^n) and the shapes (n-2-i, 2, 1^i) and
    # their conjugates carry a nonzero character
    for n in range(5, 15):
        survivors = {lam for lam in enumerate_partitions(n) if cycle_character(lam, 1)}
        family = {(n,), (1,) * n}
        for i in range(0, n - 3):
            lam = (n - 2 - i, 2) + (1,) * i
            if lam[0] >= 2:
                family.add(lam)
                family.add(conjugate(lam))
        assert survivors == family


def test_low_rows_on_long_cycles_n12():
    n = 12
    for k in range(2, 7):
        assert cycle_character((n,), k) == 1
        assert cycle_character((n - 1, 1), k) == k - 1
    # two-row and hook shapes split as C(k,2)-k and C(k-1,2) on the fixed points
    for k in range(4, 7):
        assert cycle_character((n - 2, 2), k) == k * (k - 3) // 2
        assert cycle_character((n - 2, 1, 1), k) == (k - 1) * (k - 2) // 2
    assert [cycle_character((n - 2, 2), k) for k in (2, 3)] == [-1, 0]
    assert [cycle_character((n - 2, 1, 1), k) for k in (2, 3)] == [0, 1]


# --- r(lambda) ------------------------------------------------------------------

def test_r_examples():
    n = 9
    assert transposition_normalized((n,)) == 1
    assert transposition_normalized((n - 1, 1)) == Fraction(n - 3, n - 1)
    assert transposition_normalized((6, 4, 2, 1, 1)) == Fraction(1, 13)
    # (n-2-i, 2, 1^i): row sum gives (n-1)(n-4-2i), so r = 1 - (4+2i)/n,
    # the rate whose cn-th power tends to exp(-2c(2+i))
    for i in range(0, (n - 4) // 2 + 1):
        lam = (n - 2 - i, 2) + (1,) * i
        assert transposition_normalized(lam) == 1 - Fraction(4 + 2 * i, n)
    with pytest.raises(ValueError):
        transposition_normalized((1,))


def test_r_second_row_shapes():
    for n in range(5, 41):
        assert transposition_normalized((n - 2, 2)) == Fraction(n - 4, n)
        assert transposition_normalized((n - 2, 1, 1)) == Fraction(n - 5, n - 1)


@pytest.mark.parametrize("n", range(2, 15))
def test_r_formulas_agree_and_match_mn(n):
    t = transposition(n)
    for lam in enumerate_partitions(n):
        r = transposition_normalized(lam)
        assert r == transposition_normalized_binomial(lam)
        assert r == -transposition_normalized(conjugate(lam))
        if n <= 12:
            assert r == Fraction(mn_character(lam, t), dimension(lam))


@pytest.mark.parametrize("n", range(2, 13))
def test_r_upper_bound_dominates(n):
    for lam in enumerate_partitions(n):
        assert r_upper_bound(lam) >= transposition_normalized(lam)
    assert r_upper_bound((n,)) == 1


def test_r_upper_bound_standard_shape():
    n = 11
    # lam1 (lam1 - lam2 + 2) = (n-1) n here, so the bound is tight
    expected = (Fraction(-2) + Fraction((n - 1) * n, n)) / (n - 1)
    assert r_upper_bound((n - 1, 1)) == expected == Fraction(n - 3, n - 1)


@pytest.mark.parametrize("n", range(2, 11))
def test_r_monotone_in_dominance(n):
    ps = enumerate_partitions(n)
    for a in ps:
        for b in ps:
            if dominance(a, b) is Dominance.DOMINATES:
                assert transposition_normalized(a) >= transposition_normalized(b)


def test_rim_move_examples():
    assert rim_move_delta((6, 4, 2, 1, 1), 2, 4) == Fraction(4, 91)
    assert transposition_normalized((6, 3, 2, 2, 1)) == Fraction(3, 91)
    assert rim_move_delta((3, 1), 1, 2) == Fraction(1, 3)
    with pytest.raises(ValueError):
        rim_move_delta((2, 2), 1, 2)
    with pytest.raises(ValueError):
        rim_move_delta((3, 3, 1), 1, 2)
    with pytest.raises(ValueError):
        rim_move_delta((3, 1), 2, 1)


@st.composite
def box_moves(draw):
    n = draw(st.integers(min_value=2, max_value=30))
    lam = draw(st.sampled_from(enumerate_partitions(n)))
    moves = []
    rows = list(lam) + [0]
    for k in range(1, len(lam) + 1):
        for l in range(k + 1, len(lam) + 2):
            new = rows[:]
            new[k - 1] -= 1
            new[l - 1] += 1
            if all(a >= b for a, b in zip(new, new[1:])) and rows[l - 1] < rows[k - 1]:
                moves.append((k, l))
    if not moves:
        return lam, None
    return lam, draw(st.sampled_from(moves))


@given(box_moves())
@settings(max_examples=300, deadline=None)
def test_rim_move_closed_form(case):
    lam, move = case
    if move is None:
        return
    delta = rim_move_delta(lam, *move)
    assert delta > 0


def test_cache_threads_agree():
    cache = CharacterCache()
    n = 10
    pairs = [(lam, mu) for lam in enumerate_partitions(n) for mu in enumerate_partitions(n)]
    random.Random(7).shuffle(pairs)
    results = [None] * 4

    def work(slot):
        results[slot] = [mn_character(lam, mu, cache) for lam, mu in pairs]

    threads = [threading.Thread(target=work, args=(s,)) for s in range(4)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    assert all(r == results[0] for r in results)
    assert results[0] == [mn_character(lam, mu) for lam, mu in pairs]
