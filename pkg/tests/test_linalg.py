import random
from fractions import Fraction

import pytest

from coneforms.linalg import (
    bareiss_rank,
    row_space_basis,
    solve_exact,
    sparse_from_rows,
    sparse_rank,
    sturm_root_count,
)


def test_rank_small_cases():
    rows = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    assert sparse_rank(sparse_from_rows(rows)) == 2
    assert bareiss_rank(rows) == 2
    assert sparse_rank({}) == 0
    assert bareiss_rank([]) == 0


def test_rank_rational_entries():
    singular = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), 1]]
    assert sparse_rank(sparse_from_rows(singular)) == bareiss_rank(singular) == 1
    regular = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), 2]]
    assert sparse_rank(sparse_from_rows(regular)) == bareiss_rank(regular) == 2


def test_sparse_matches_bareiss_randomized():
    rng = random.Random(5)
    for _ in range(60):
        n_rows = rng.randint(1, 8)
        n_cols = rng.randint(1, 8)
        rows = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3))
                 if rng.random() < 0.5 else 0
                 for _ in range(n_cols)] for _ in range(n_rows)]
        assert sparse_rank(sparse_from_rows(rows)) == bareiss_rank(rows)


def test_solve_exact():
    a = [[2, 1], [1, 3]]
    sols = solve_exact(a, [[5, 10]])
    x = sols[0]
    assert [2 * x[0] + 1 * x[1], 1 * x[0] + 3 * x[1]] == [5, 10]
    with pytest.raises(ValueError):
        solve_exact([[1, 1], [1, 1]], [[0, 1]])


def test_row_space_basis():
    basis = row_space_basis([[2, 4], [1, 2], [0, 1]])
    assert len(basis) == 2
    assert basis[0][0] == 1


def test_sturm_root_count():
    # (s - 1)(s + 2) has two real roots
    assert sturm_root_count([-2, -1, 1]) == 2
    # s^2 + 1 has none
    assert sturm_root_count([1, 0, 1]) == 0
    # (s - 1)^2 has one distinct root
    assert sturm_root_count([1, -2, 1]) == 1
    # degree five with three real roots: s(s-2)(s+2)(s^2+1)
    assert sturm_root_count([0, -4, 0, -3, 0, 1]) == 3
    assert sturm_root_count([Fraction(7)]) == 0
    with pytest.raises(ValueError):
        sturm_root_count([0])
