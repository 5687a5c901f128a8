from itertools import product

import pytest

from qtensor.abelian import (
    TRIVIAL, AbelianGroupStructure, abelian_tensor, cyclic, homocyclic,
)


def bilinear_map_group(a_orders, b_orders, q):
    """Independent oracle: the tensor product of finite abelian groups is
    isomorphic to the group of bilinear maps A x B -> Q/Z (with the extra
    q-linearity for q >= 1).  Enumerate those maps explicitly.

    A bilinear map is determined by the images of generator pairs; the image
    of (x_i, y_j) can be any element killed by gcd(m_i, n_j, q).  Build all
    maps as exponent matrices and read off the group structure by order
    counting.
    """
    from math import gcd, lcm

    e = 1
    for m in list(a_orders) + list(b_orders) + ([q] if q else []):
        e = lcm(e, m)
    # allowed values per generator pair live in the subgroup of Z/e killed
    # by d_ij; list each choice as a multiple of e // d_ij
    constraints = []
    for m in a_orders:
        for n in b_orders:
            d = gcd(m, n) if q == 0 else gcd(m, n, q)
            constraints.append(d)
    maps = []
    ranges = [range(d) for d in constraints]
    for combo in product(*ranges):
        maps.append(tuple(c * (e // d) % e for c, d in zip(combo, constraints)))
    # maps form a group under pointwise addition mod e: count element orders
    n = len(maps)
    orders = []
    for mvec in maps:
        o = 1
        cur = mvec
        zero = tuple(0 for _ in mvec)
        while cur != zero:
            cur = tuple((x + y) % e for x, y in zip(cur, mvec))
            o += 1
        orders.append(o)
    return sorted(orders)


def structure_element_orders(s):
    """Element orders of a finite AbelianGroupStructure, sorted."""
    from math import lcm

    assert s.free_rank == 0
    factors = list(s.torsion) or []
    orders = []
    for combo in product(*[range(d) for d in factors]) if factors else [()]:
        o = 1
        for c, d in zip(combo, factors):
            if c:
                o = lcm(o, d // __import__("math").gcd(c, d))
        orders.append(o)
    return sorted(orders)


def test_canonicalization():
    s = AbelianGroupStructure.from_orders([2, 3])
    assert s.torsion == (6,)
    s = AbelianGroupStructure.from_orders([4, 6])
    assert s.torsion == (2, 12)
    s = AbelianGroupStructure.from_orders([1, 1])
    assert s == TRIVIAL


def test_divisibility_chain_enforced():
    with pytest.raises(ValueError):
        AbelianGroupStructure((4, 2))


def test_tensor_c2_c4():
    assert abelian_tensor(cyclic(2), cyclic(4), 0) == cyclic(2)


def test_tensor_trivial_absorbs():
    for q in (0, 1, 2, 5):
        assert abelian_tensor(TRIVIAL, cyclic(12), q) == TRIVIAL


def test_tensor_infinite():
    zz = cyclic(0)
    assert abelian_tensor(zz, zz, 0) == zz
    assert abelian_tensor(zz, zz, 5) == cyclic(5)
    assert abelian_tensor(zz, cyclic(6), 0) == cyclic(6)
    assert abelian_tensor(zz, cyclic(6), 4) == cyclic(2)


def test_tensor_symmetric_and_distributive():
    groups = [
        AbelianGroupStructure.from_orders(o)
        for o in ([2], [3], [4], [2, 2], [2, 4], [6], [8], [12])
    ]
    for a in groups:
        for b in groups:
            for q in (0, 1, 2, 3):
                assert abelian_tensor(a, b, q) == abelian_tensor(b, a, q)
    a, b, c = groups[0], groups[2], groups[5]
    for q in (0, 2, 3):
        lhs = abelian_tensor(a * b, c, q)
        rhs = abelian_tensor(a, c, q) * abelian_tensor(b, c, q)
        assert lhs == rhs


@pytest.mark.parametrize("a_orders,b_orders,q", [
    ([2], [4], 0),
    ([2], [4], 2),
    ([2, 2], [4], 0),
    ([3], [6], 0),
    ([3], [6], 3),
    ([4], [4], 2),
    ([2, 4], [2, 4], 0),
    ([2, 4], [6], 4),
])
def test_against_bilinear_map_oracle(a_orders, b_orders, q):
    a = AbelianGroupStructure.from_orders(a_orders)
    b = AbelianGroupStructure.from_orders(b_orders)
    got = abelian_tensor(a, b, q)
    assert structure_element_orders(got) == bilinear_map_group(
        a_orders, b_orders, q)


def test_homocyclic():
    assert homocyclic(3, 2).torsion == (3, 3)
    assert homocyclic(0, 3).free_rank == 3
