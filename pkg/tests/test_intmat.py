import random
from itertools import combinations
from math import gcd

import pytest

from qtensor.intmat import IntegerMatrix, abelian_invariants_from_relations, smith_normal_form


def minor_gcd_invariants(m):
    """Independent oracle: d_k = gcd of all k x k minors; invariant factors
    are the successive quotients d_k / d_{k-1}."""
    rows = m.to_rows()

    def det(sq):
        n = len(sq)
        if n == 0:
            return 1
        if n == 1:
            return sq[0][0]
        total = 0
        for j in range(n):
            sub = [r[:j] + r[j + 1:] for r in sq[1:]]
            total += (-1) ** j * sq[0][j] * det(sub)
        return total

    out = []
    prev = 1
    for k in range(1, min(m.rows, m.cols) + 1):
        g = 0
        for ri in combinations(range(m.rows), k):
            for ci in combinations(range(m.cols), k):
                sub = [[rows[i][j] for j in ci] for i in ri]
                g = gcd(g, det(sub))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def test_identity():
    m = IntegerMatrix.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert smith_normal_form(m) == ([1, 1, 1], 3)


def test_diag_2_3():
    m = IntegerMatrix.from_rows([[2, 0], [0, 3]])
    assert smith_normal_form(m) == ([1, 6], 2)


def test_zero():
    m = IntegerMatrix(2, 2)
    assert smith_normal_form(m) == ([], 0)


def test_rectangular():
    m = IntegerMatrix.from_rows([[2, 4, 4]])
    diag, rank = smith_normal_form(m)
    assert diag == [2] and rank == 1


def test_fixed_point_on_diagonal():
    m = IntegerMatrix.from_rows([[1, 0], [0, 6]])
    diag, rank = smith_normal_form(m)
    m2 = IntegerMatrix.from_rows([[diag[0], 0], [0, diag[1]]])
    assert smith_normal_form(m2) == (diag, rank)


@pytest.mark.parametrize("seed", range(30))
def test_against_minor_gcd_oracle(seed):
    rng = random.Random(seed)
    r = rng.randint(1, 4)
    c = rng.randint(1, 4)
    m = IntegerMatrix.from_rows(
        [[rng.randint(-6, 6) for _ in range(c)] for _ in range(r)])
    diag, rank = smith_normal_form(m)
    assert diag == minor_gcd_invariants(m)
    assert rank == len(diag)
    for a, b in zip(diag, diag[1:]):
        assert b % a == 0


def test_entry_growth_exactness():
    # classic near-singular pattern whose reduction overflows fixed width
    m = IntegerMatrix.from_rows(
        [[2 ** 40 + i * j + (1 if i == j else 0) for j in range(4)]
         for i in range(4)])
    diag, rank = smith_normal_form(m)
    assert diag == minor_gcd_invariants(m)


def test_relation_quotient():
    # Z^2 / <(2,0),(0,3)>  =  C6
    m = IntegerMatrix.from_rows([[2, 0], [0, 3]])
    assert abelian_invariants_from_relations(m, 2) == ([6], 0)
    # Z^3 / <(0,0,5)>  =  Z^2 x C5
    m = IntegerMatrix.from_rows([[0, 0, 5]])
    assert abelian_invariants_from_relations(m, 3) == ([5], 2)
