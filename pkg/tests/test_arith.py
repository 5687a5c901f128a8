from qtensor.arith import divisors, factorint, mobius, witt_rank


def test_factorint():
    assert factorint(360) == {2: 3, 3: 2, 5: 1}
    assert factorint(1) == {}


def test_divisors():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]


def test_mobius():
    assert [mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


def test_witt_rank_values():
    assert witt_rank(2, 3) == 2          # (1/3)(n^3 - n) at n = 2
    assert witt_rank(3, 2) == 3          # (9 - 3)/2
    for n in range(1, 8):
        assert witt_rank(n, 1) == n


def test_witt_rank_divisibility_identity():
    for n in range(1, 7):
        for r in range(1, 9):
            total = sum(mobius(d) * n ** (r // d) for d in divisors(r))
            assert r * witt_rank(n, r) == total
