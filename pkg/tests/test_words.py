import random

from hypothesis import given, strategies as st

from qtensor.words import (
    commutator, concat, conjugate, flatten_steps, free_reduce, gen,
    hall_witt_check, inverse, power, word_length,
)

letters = st.lists(
    st.tuples(st.integers(0, 3), st.integers(-3, 3)), max_size=12)


def test_identity_cancellation():
    assert free_reduce([(0, 1), (0, -1)]) == ()


def test_merge_adjacent():
    assert free_reduce([(0, 2), (0, -1), (1, 1)]) == ((0, 1), (1, 1))


def test_telescoping():
    assert free_reduce([(0, 1), (1, 1), (1, -1), (0, -1)]) == ()


@given(letters)
def test_free_reduce_idempotent(w):
    r = free_reduce(w)
    assert free_reduce(r) == r


@given(letters)
def test_free_reduce_length_nonincreasing(w):
    assert word_length(free_reduce(w)) <= word_length([l for l in w if l[1]])


@given(letters)
def test_inverse_cancels(w):
    assert concat(w, inverse(w)) == ()


def test_power_and_conjugate():
    a, b = gen(0), gen(1)
    assert power(a, 3) == ((0, 3),)
    assert power(a, -2) == ((0, -2),)
    assert conjugate(a, b) == ((1, -1), (0, 1), (1, 1))
    assert commutator(a, a) == ()


def test_flatten_steps():
    assert flatten_steps(((0, 2), (1, -1))) == [0, 0, 3]


def test_hall_witt_single_letters():
    a, b, c = gen(0), gen(1), gen(2)
    assert hall_witt_check(a, b, c)
    assert hall_witt_check(a, a, a)


def test_hall_witt_random_words():
    rng = random.Random(17)
    for _ in range(100):
        ws = []
        for _ in range(3):
            n = rng.randint(0, 6)
            ws.append(free_reduce(
                [(rng.randint(0, 4), rng.choice([-2, -1, 1, 2]))
                 for _ in range(n)]))
        assert hall_witt_check(*ws)
