import numpy as np
import pytest

from qtensor.errors import InvalidCayleyTable, OversizeError
from qtensor.groups import (
    abelian_group, build_group, cyclic_group, dihedral_group, direct_product,
    heisenberg_group, quaternion_group, symmetric_group,
)


def brute_commutator_closure(g):
    comms = {g.comm(a, b) for a in range(g.order) for b in range(g.order)}
    return g.closure(comms)


def test_trivial_group():
    g = cyclic_group(1)
    assert g.order == 1 and g.generators == ()
    assert g.nilpotency_class() == 0


def test_cyclic_6():
    g = cyclic_group(6)
    assert g.order == 6
    assert len(g.generators) == 1
    assert g.element_order(g.generators[0]) == 6
    assert g.is_abelian()
    assert g.abelian_invariants().torsion == (6,)


def test_heisenberg_3():
    g = heisenberg_group(3)
    assert g.order == 27
    assert g.nilpotency_class() == 2
    assert g.exponent() == 3
    assert len(g.generators) == 2
    series = g.lower_central_series()
    assert [len(s) for s in series] == [27, 3, 1]


@pytest.mark.parametrize("make,expect_derived", [
    (lambda: abelian_group([2, 4]), 1),
    (lambda: symmetric_group(3), 3),
    (lambda: quaternion_group(), 2),
    (lambda: dihedral_group(8), 2),
    (lambda: symmetric_group(4), 12),
])
def test_derived_subgroup_against_brute_force(make, expect_derived):
    g = make()
    derived = g.derived_subgroup()
    assert derived == brute_commutator_closure(g)
    assert len(derived) == expect_derived
    # G/G' is abelian
    q, _ = g.quotient(derived)
    assert q.is_abelian()


def test_s3_not_nilpotent():
    g = symmetric_group(3)
    series = g.lower_central_series()
    assert len(series[-1]) == 3
    assert g.nilpotency_class() is None


def test_class_two_families():
    for g in (dihedral_group(8), quaternion_group(), heisenberg_group(3)):
        assert g.nilpotency_class() == 2
    assert cyclic_group(5).nilpotency_class() == 1


def test_quaternion_center():
    g = quaternion_group()
    assert len(g.center()) == 2
    assert g.derived_subgroup() == g.center()


def test_power_commutator_subgroup():
    g = cyclic_group(6)
    assert len(g.power_commutator_subgroup(1)) == 6
    assert len(g.power_commutator_subgroup(4)) == 3
    s3 = symmetric_group(3)
    assert s3.power_commutator_subgroup(0) == s3.derived_subgroup()


def test_coset_order():
    s3 = symmetric_group(3)
    derived = s3.derived_subgroup()
    for x in derived:
        assert s3.coset_order(x) == 1
    transposition = next(a for a in range(6)
                         if s3.element_order(a) == 2)
    assert s3.coset_order(transposition) == 2
    c6 = cyclic_group(6)
    assert c6.coset_order(c6.generators[0]) == 6


def test_coset_order_divides_order():
    for g in (symmetric_group(4), quaternion_group(), abelian_group([2, 4])):
        for x in range(g.order):
            assert g.element_order(x) % g.coset_order(x) == 0


def test_exponent_divides_order():
    for g in (symmetric_group(4), dihedral_group(8), heisenberg_group(3)):
        assert g.order % g.exponent() == 0


def test_abelian_invariants_counting():
    assert abelian_group([2, 4]).abelian_invariants().torsion == (2, 4)
    assert abelian_group([2, 3]).abelian_invariants().torsion == (6,)
    assert abelian_group([2, 2, 2]).abelian_invariants().torsion == (2, 2, 2)


def test_abelian_basis():
    g = abelian_group([2, 4])
    basis = g.abelian_basis()
    assert [g.element_order(b) for b in basis] == [2, 4]
    assert len(g.closure(basis)) == 8
    sub = {g.identity}
    for b in basis:
        new = g.closure(sub | {b})
        assert len(new) == len(sub) * g.element_order(b)
        sub = new


def test_quotient_materialization():
    s4 = symmetric_group(4)
    q, proj = s4.quotient(s4.derived_subgroup())
    assert q.order == 2
    h, _ = s4.quotient(set(range(s4.order)))
    assert h.order == 1


def test_direct_product_embeddings():
    a, b = cyclic_group(2), cyclic_group(3)
    g = direct_product(a, b)
    assert g.order == 6
    emb_a, emb_b = g.factor_embeddings
    assert len(set(emb_a) & set(emb_b)) == 1  # just the identity
    assert g.is_abelian()


def test_build_group_spec():
    assert build_group({"kind": "cyclic", "n": 6}).order == 6
    assert build_group({"kind": "quaternion8"}).order == 8
    assert build_group({"kind": "heisenberg_mod", "p": 3}).order == 27
    assert build_group({"kind": "abelian", "invariants": [2, 2]}).order == 4
    t = cyclic_group(4).table
    g = build_group({"kind": "cayley", "table": t.tolist()})
    assert g.order == 4 and len(g.generators) == 1


def test_invalid_table_reports_witness():
    t = np.array([[0, 1], [1, 1]])  # 1*1 = 1 breaks inverses/latin
    with pytest.raises(InvalidCayleyTable):
        build_group({"kind": "cayley", "table": t.tolist()})
    t = cyclic_group(3).table.copy()
    t = t.tolist()
    t[1][2] = 1  # break associativity/latin square
    with pytest.raises(InvalidCayleyTable) as exc:
        build_group({"kind": "cayley", "table": t})
    assert exc.value.axiom in ("associativity", "identity", "inverses")


def test_oversize():
    with pytest.raises(OversizeError):
        cyclic_group(50, max_order=10)
    with pytest.raises(OversizeError):
        symmetric_group(5)
