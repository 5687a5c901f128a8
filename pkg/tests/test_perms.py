import numpy as np
import pytest

from qtensor.perms import (
    PermutationGroup, compose, identity, inverse, kernel_of_action,
    perm_order, subgroup_report,
)


def cycle(n, *pts):
    p = np.arange(n, dtype=np.int32)
    for a, b in zip(pts, pts[1:]):
        p[a] = b
    p[pts[-1]] = pts[0]
    return p


def test_compose_inverse():
    p = cycle(4, 0, 1, 2)
    assert np.array_equal(compose(p, inverse(p)), identity(4))
    assert perm_order(p) == 3


def test_s4_order():
    g = PermutationGroup([cycle(4, 0, 1), cycle(4, 0, 1, 2, 3)], 4)
    assert g.chain_order() == 24
    assert g.contains(cycle(4, 2, 3))
    assert not PermutationGroup([cycle(4, 0, 1, 2, 3)], 4).contains(
        cycle(4, 0, 1))


def test_a4_and_dihedral_orders():
    a4 = PermutationGroup([cycle(4, 0, 1, 2), cycle(4, 1, 2, 3)], 4)
    assert a4.chain_order() == 12
    d = PermutationGroup(
        [cycle(5, 0, 1, 2, 3, 4),
         np.array([0, 4, 3, 2, 1], dtype=np.int32)], 5)
    assert d.chain_order() == 10


def test_big_degree_cyclic():
    n = 512
    shift = np.roll(np.arange(n, dtype=np.int32), -1)
    g = PermutationGroup([shift], n)
    assert g.chain_order() == n


def test_elements_listing():
    g = PermutationGroup([cycle(3, 0, 1), cycle(3, 0, 1, 2)], 3)
    assert len(g.elements()) == 6
    with pytest.raises(OverflowError):
        g.elements(cap=3)


def test_subgroup_report_trivial_and_cyclic():
    amb = PermutationGroup([cycle(6, 0, 1, 2, 3)], 6)
    r = subgroup_report(amb, [])
    assert r.order == 1 and r.min_generators == 0
    r = subgroup_report(amb, [cycle(6, 0, 1, 2, 3)])
    assert r.order == 4
    assert r.is_abelian
    assert r.abelian_invariants.torsion == (4,)
    assert r.min_generators == 1


def test_subgroup_report_s3():
    gens = [cycle(6, 0, 1), cycle(6, 0, 1, 2)]
    # regular-ish rep of S3 on 6 points: use the natural action on 3 points
    g = PermutationGroup([cycle(3, 0, 1), cycle(3, 0, 1, 2)], 3)
    r = subgroup_report(g, g.gens)
    assert r.order == 6
    assert not r.is_abelian
    assert r.derived_order == 3
    assert r.nilpotency_class is None
    assert r.min_generators is None
    _ = gens


def test_subgroup_report_quaternion():
    # Q8 as permutations (regular representation via explicit lists)
    from qtensor.groups import quaternion_group

    q8 = quaternion_group()
    regular = [np.array([q8.mul(x, g) for x in range(8)], dtype=np.int32)
               for g in q8.generators]
    g = PermutationGroup(regular, 8)
    r = subgroup_report(g, regular)
    assert r.order == 8
    assert not r.is_abelian
    assert r.derived_order == 2
    assert r.nilpotency_class == 2
    assert r.min_generators == 2


def test_kernel_of_action():
    # S3 acting on itself (faithful): trivial kernel
    g = PermutationGroup([cycle(3, 0, 1), cycle(3, 0, 1, 2)], 3)
    k = kernel_of_action(g, [cycle(3, 0, 1), cycle(3, 0, 1, 2)])
    assert not k
    # trivial target action: whole group is the kernel
    k = kernel_of_action(g, [identity(1), identity(1)])
    kg = PermutationGroup(k, 3)
    assert kg.chain_order() == 6
    # sign action of S3 on 2 points: kernel = A3
    sgn = np.array([1, 0], dtype=np.int32)
    k = kernel_of_action(g, [sgn, identity(2)])
    assert PermutationGroup(k, 3).chain_order() == 3


def test_kernel_verifies_relators():
    g = PermutationGroup([cycle(3, 0, 1)], 3)
    with pytest.raises(ValueError):
        kernel_of_action(g, [cycle(4, 0, 1, 2)],
                         verify_words=[[(0, 1), (0, 1)]])
