"""Concrete finite groups by Cayley table, built-in families, and the
elementary invariants every structure statement refers to (derived subgroup,
lower central series, coset orders, power-commutator subgroups, quotients).

Groups are stored by full multiplication table; uniform and sufficient at
desk scale.  Element 0 is always the identity for built-in families.
"""

from __future__ import annotations

from itertools import product
from math import gcd, lcm

import numpy as np

from .abelian import AbelianGroupStructure
from .errors import InvalidCayleyTable, OversizeError

DEFAULT_MAX_ORDER = 10_000
_EXHAUSTIVE_ASSOC_LIMIT = 128


class FiniteGroup:
    """A finite group given by its Cayley table.

    table[a, b] is the index of the product ab; generators is an ordered
    generating sequence of element indices.  Immutable after construction.
    """

    def __init__(self, table, generators, name="G",
                 max_order=DEFAULT_MAX_ORDER):
        table = np.array(table, dtype=np.int32)
        if table.ndim != 2 or table.shape[0] != table.shape[1]:
            raise InvalidCayleyTable("shape", table.shape, "table must be square")
        self.order = int(table.shape[0])
        if self.order < 1:
            raise InvalidCayleyTable("shape", table.shape, "empty table")
        if self.order > max_order:
            raise OversizeError(f"order {self.order} exceeds limit {max_order}")
        self.table = table
        self.table.setflags(write=False)
        self.name = name
        self.generators = tuple(int(g) for g in generators)
        self.identity = _validate_table(table, self.generators)
        self._inv = np.empty(self.order, dtype=np.int32)
        for a in range(self.order):
            self._inv[a] = int(np.nonzero(table[a] == self.identity)[0][0])
        self._inv.setflags(write=False)
        if self.closure(self.generators) != set(range(self.order)):
            raise InvalidCayleyTable(
                "generation", self.generators,
                "declared generators do not generate the group")

    # -- basic arithmetic -------------------------------------------------

    def mul(self, a, b):
        return int(self.table[a, b])

    def inv(self, a):
        return int(self._inv[a])

    def power(self, a, n):
        if n < 0:
            return self.power(self.inv(a), -n)
        r = self.identity
        b = a
        while n:
            if n & 1:
                r = self.mul(r, b)
            b = self.mul(b, b)
            n >>= 1
        return r

    def conj(self, a, b):
        """a^b = b^-1 a b."""
        return self.mul(self.mul(self.inv(b), a), b)

    def comm(self, a, b):
        """[a, b] = a^-1 b^-1 a b."""
        return self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))

    def element_order(self, a):
        o = 1
        x = a
        while x != self.identity:
            x = self.mul(x, a)
            o += 1
        return o

    def exponent(self):
        e = 1
        for a in range(self.order):
            e = lcm(e, self.element_order(a))
        return e

    # -- subgroups ---------------------------------------------------------

    def closure(self, seed):
        """Subgroup generated by seed, as a set of element indices."""
        seed = [s for s in seed]
        elems = {self.identity}
        frontier = [self.identity]
        gens = [s for s in seed if s != self.identity]
        gens += [self.inv(s) for s in gens]
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in elems:
                        elems.add(y)
                        new.append(y)
            frontier = new
        return elems

    def normal_closure(self, seed):
        """Smallest normal subgroup containing seed."""
        gens = set(seed) - {self.identity}
        while True:
            extra = set()
            for s in gens:
                for g in self.generators:
                    c = self.conj(s, g)
                    if c not in gens:
                        extra.add(c)
            if not extra:
                break
            gens |= extra
        return self.closure(gens)

    def derived_subgroup(self):
        """G' as an element set: normal closure of generator commutators."""
        seeds = {self.comm(a, b) for a in self.generators for b in self.generators}
        return self.normal_closure(seeds)

    def lower_central_series(self):
        """[G, gamma_2, ...] until stable; each term an element set."""
        series = [set(range(self.order))]
        while True:
            prev = series[-1]
            seeds = {self.comm(x, g)
                     for x in prev for g in self.generators}
            nxt = self.normal_closure(seeds) if seeds - {self.identity} \
                else {self.identity}
            if nxt == prev:
                break
            series.append(nxt)
            if nxt == {self.identity}:
                break
        return series

    def nilpotency_class(self):
        """Nilpotency class, or None if not nilpotent."""
        series = self.lower_central_series()
        if series[-1] != {self.identity}:
            return None
        return len(series) - 1

    def center(self):
        t = self.table
        return {a for a in range(self.order) if np.array_equal(t[a], t[:, a])}

    def power_commutator_subgroup(self, q):
        """G'G^q: the derived subgroup together with all q-th powers
        (G' itself when q = 0)."""
        if q < 0:
            raise ValueError("q must be >= 0")
        seed = set(self.derived_subgroup())
        if q:
            seed |= {self.power(a, q) for a in range(self.order)}
        return self.closure(seed)

    def coset_order(self, x):
        """Order of the coset xG' in G/G'."""
        derived = self.derived_subgroup()
        o = 1
        y = x
        while y not in derived:
            y = self.mul(y, x)
            o += 1
        return o

    def is_abelian(self):
        return bool(np.array_equal(self.table, self.table.T))

    # -- quotients and products --------------------------------------------

    def quotient(self, normal_elems):
        """G/N materialized as a new FiniteGroup plus the projection map.

        Returns (quotient_group, proj) where proj[g] is the index of gN.
        """
        n = sorted(normal_elems)
        nset = set(n)
        for a in nset:
            for g in self.generators:
                if self.conj(a, g) not in nset:
                    raise ValueError("subgroup is not normal")
        proj = -np.ones(self.order, dtype=np.int32)
        reps = []
        for a in range(self.order):
            if proj[a] >= 0:
                continue
            idx = len(reps)
            reps.append(a)
            for h in nset:
                proj[self.mul(a, h)] = idx
        m = len(reps)
        table = np.empty((m, m), dtype=np.int32)
        for i, a in enumerate(reps):
            for j, b in enumerate(reps):
                table[i, j] = proj[self.mul(a, b)]
        gens = []
        for g in self.generators:
            pg = int(proj[g])
            if pg != int(proj[self.identity]) and pg not in gens:
                gens.append(pg)
        q = FiniteGroup(table, gens or ([] if m == 1 else gens),
                        name=f"{self.name}/N")
        return q, proj

    def abelianization(self):
        """(G/G', projection)."""
        return self.quotient(self.derived_subgroup())

    def abelian_invariants(self):
        """Invariant factors of G, which must be abelian."""
        if not self.is_abelian():
            raise ValueError("group is not abelian")
        return AbelianGroupStructure.from_orders(
            _abelian_orders_by_counting(self))

    def abelian_basis(self):
        """Elements b_1, ..., b_r of an abelian G with G = <b_1> x ... and
        o(b_1) | o(b_2) | ... (ascending divisibility chain)."""
        if not self.is_abelian():
            raise ValueError("group is not abelian")
        basis = _abelian_basis(self)
        basis.sort(key=self.element_order)
        orders = [self.element_order(b) for b in basis]
        for a, b in zip(orders, orders[1:]):
            assert b % a == 0
        return basis

    def __repr__(self):
        return f"<FiniteGroup {self.name} of order {self.order}>"


def _validate_table(table, generators=()):
    """Check group axioms; returns the identity index.

    Associativity is checked exhaustively up to order 128 and by Light's
    test (all pairs against the generating sequence, an exact shortcut)
    above that; identity and inverses are always checked exhaustively.
    """
    m = table.shape[0]
    if table.min() < 0 or table.max() >= m:
        bad = np.argwhere((table < 0) | (table >= m))[0]
        raise InvalidCayleyTable("closure", tuple(int(x) for x in bad),
                                 "entry out of range")
    identity = None
    for e in range(m):
        if np.array_equal(table[e], np.arange(m)) and \
           np.array_equal(table[:, e], np.arange(m)):
            identity = e
            break
    if identity is None:
        raise InvalidCayleyTable("identity", None, "no two-sided identity")
    for a in range(m):
        if identity not in table[a]:
            raise InvalidCayleyTable("inverses", (a,), f"element {a} has no inverse")
    if m <= _EXHAUSTIVE_ASSOC_LIMIT:
        # (ab)c == a(bc) for all triples, vectorized
        left = table[table, :]          # left[a, b, c] = (ab)c
        right = table[:, table]         # right[a, b, c] = a(bc)
        if not np.array_equal(left, right):
            bad = np.argwhere(left != right)[0]
            raise InvalidCayleyTable("associativity", tuple(int(x) for x in bad))
    else:
        for g in set(generators) or set(range(m)):
            # (a g) b == a (g b) for all a, b
            if not np.array_equal(table[table[:, g], :],
                                  table[:, table[g, :]]):
                bad = np.argwhere(table[table[:, g], :]
                                  != table[:, table[g, :]])[0]
                raise InvalidCayleyTable(
                    "associativity", (int(bad[0]), int(g), int(bad[1])))
    return identity


def _abelian_orders_by_counting(g):
    """Cyclic factor orders of an abelian group via element-order counting.

    For each prime p, the counts of solutions of x^(p^i) = 1 determine the
    partition of the p-part; this is independent of any matrix reduction.
    """
    from .arith import factorint

    orders = []
    for p in factorint(g.order):
        # s_i = log_p #{x : x^(p^i) = 1} = sum_j min(lambda_j, i)
        s = []
        i = 0
        while True:
            c = sum(1 for a in range(g.order)
                    if g.power(a, p ** i) == g.identity)
            e = 0
            while c > 1:
                assert c % p == 0
                c //= p
                e += 1
            s.append(e)
            if i and s[-1] == s[-2]:
                s.pop()
                break
            i += 1
        # m_i = s_i - s_{i-1} = #{parts >= i}; recover the partition
        mult = [s[i] - s[i - 1] for i in range(1, len(s))]
        parts = []
        for i, m in enumerate(mult):
            nxt = mult[i + 1] if i + 1 < len(mult) else 0
            parts.extend([i + 1] * (m - nxt))
        orders.extend(p ** k for k in parts)
    return orders


def _abelian_basis(g):
    """Greedy basis construction: take a maximal-order element (it generates
    a direct summand), recurse on the quotient, lift order-preservingly."""
    if g.order == 1:
        return []
    top = max(range(g.order), key=g.element_order)
    sub = g.closure([top])
    q, proj = g.quotient(sub)
    qbasis = _abelian_basis(q)
    lifts = []
    lookup = {}
    for a in range(g.order):
        lookup.setdefault(int(proj[a]), []).append(a)
    for c in qbasis:
        want = q.element_order(c)
        lift = None
        for a in lookup[c]:
            if g.element_order(a) == want:
                lift = a
                break
        assert lift is not None, "order-preserving lift must exist"
        lifts.append(lift)
    return [top] + lifts


# -- built-in families ------------------------------------------------------


def cyclic_group(n, max_order=DEFAULT_MAX_ORDER):
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > max_order:
        raise OversizeError(f"order {n} exceeds limit {max_order}")
    idx = np.arange(n, dtype=np.int32)
    table = (idx[:, None] + idx[None, :]) % n
    gens = [1] if n > 1 else []
    return FiniteGroup(table, gens, name=f"C{n}" if n > 1 else "1")


def abelian_group(invariants, max_order=DEFAULT_MAX_ORDER):
    """Direct product of cyclic groups of the given orders."""
    invariants = [int(d) for d in invariants if int(d) != 1]
    if not invariants:
        return cyclic_group(1)
    g = cyclic_group(invariants[0], max_order=max_order)
    for d in invariants[1:]:
        g = direct_product(g, cyclic_group(d), max_order=max_order)
    g.name = "x".join(f"C{d}" for d in invariants)
    return g


def dihedral_group(order, max_order=DEFAULT_MAX_ORDER):
    """Dihedral group of the given (even) order 2n, n >= 1."""
    if order % 2 or order < 2:
        raise ValueError("dihedral order must be even and >= 2")
    n = order // 2
    # elements r^i s^j  ->  index 2*i + j
    table = np.empty((order, order), dtype=np.int32)
    for a in range(order):
        i1, j1 = divmod(a, 2)
        for b in range(order):
            i2, j2 = divmod(b, 2)
            i = (i1 - i2) % n if j1 else (i1 + i2) % n
            table[a, b] = 2 * i + (j1 ^ j2)
    gens = [2, 1] if n > 1 else [1]
    return FiniteGroup(table, gens, name=f"D{order}")


def quaternion_group():
    """Q8 = {1, -1, i, -i, j, -j, k, -k}."""
    # encode q = (sign, axis) with axis in {1=1, i, j, k}; use the
    # quaternion multiplication table on units
    units = ["1", "i", "j", "k"]
    mul_axis = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    elems = [(s, u) for u in units for s in (1, -1)]
    elems.sort(key=lambda e: (e[1] != "1", e[1], e[0] < 0))
    index = {e: i for i, e in enumerate(elems)}
    m = 8
    table = np.empty((m, m), dtype=np.int32)
    for a, (s1, u1) in enumerate(elems):
        for b, (s2, u2) in enumerate(elems):
            s, u = mul_axis[(u1, u2)]
            table[a, b] = index[(s * s1 * s2, u)]
    gens = [index[(1, "i")], index[(1, "j")]]
    return FiniteGroup(table, gens, name="Q8")


def heisenberg_group(p, max_order=DEFAULT_MAX_ORDER):
    """Upper unitriangular 3x3 matrices over Z_p: order p^3, class 2,
    exponent p for odd p."""
    if p < 2:
        raise ValueError("p must be >= 2")
    if p ** 3 > max_order:
        raise OversizeError(f"order {p**3} exceeds limit {max_order}")
    # element (a, b, c) ~ matrix [[1, a, c], [0, 1, b], [0, 0, 1]]
    def idx(a, b, c):
        return (a * p + b) * p + c

    m = p ** 3
    table = np.empty((m, m), dtype=np.int32)
    for a1, b1, c1 in product(range(p), repeat=3):
        i = idx(a1, b1, c1)
        for a2, b2, c2 in product(range(p), repeat=3):
            table[i, idx(a2, b2, c2)] = idx(
                (a1 + a2) % p, (b1 + b2) % p, (c1 + c2 + a1 * b2) % p)
    gens = [idx(1, 0, 0), idx(0, 1, 0)]
    return FiniteGroup(table, gens, name=f"H{p}")


def symmetric_group(n):
    """S_n for n <= 4 (larger n exceeds the intended enumeration scale)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > 4:
        raise OversizeError("symmetric groups are capped at n = 4")
    perms = [()]
    from itertools import permutations

    perms = sorted(permutations(range(n)))
    # put the identity first
    ident = tuple(range(n))
    perms.remove(ident)
    perms.insert(0, ident)
    index = {p: i for i, p in enumerate(perms)}
    m = len(perms)
    table = np.empty((m, m), dtype=np.int32)
    for a, pa in enumerate(perms):
        for b, pb in enumerate(perms):
            table[a, b] = index[tuple(pb[pa[i]] for i in range(n))]
    if n == 1:
        gens = []
    elif n == 2:
        gens = [index[(1, 0)]]
    else:
        transposition = tuple([1, 0] + list(range(2, n)))
        ncycle = tuple(list(range(1, n)) + [0])
        gens = [index[transposition], index[ncycle]]
    return FiniteGroup(table, gens, name=f"S{n}")


def direct_product(a, b, max_order=DEFAULT_MAX_ORDER):
    """A x B with element (x, y) at index x*|B| + y.

    The returned group carries factor embeddings in .factor_embeddings.
    """
    m = a.order * b.order
    if m > max_order:
        raise OversizeError(f"order {m} exceeds limit {max_order}")
    ta = np.asarray(a.table, dtype=np.int64)
    tb = np.asarray(b.table, dtype=np.int64)
    table = (ta[:, None, :, None] * b.order + tb[None, :, None, :]) \
        .reshape(m, m)
    gens = [g * b.order + b.identity for g in a.generators] + \
           [a.identity * b.order + h for h in b.generators]
    g = FiniteGroup(np.asarray(table, dtype=np.int32), gens,
                    name=f"{a.name}x{b.name}")
    g.factor_embeddings = (
        tuple(x * b.order + b.identity for x in range(a.order)),
        tuple(a.identity * b.order + y for y in range(b.order)),
    )
    return g


def build_group(spec, max_order=DEFAULT_MAX_ORDER):
    """Construct a group from a GroupSpec mapping.

    Kinds: trivial | cyclic(n) | abelian(invariants) | dihedral(order) |
    quaternion8 | heisenberg(p) | symmetric(n) | cayley(table[, generators]).
    """
    kind = spec.get("kind")
    if kind == "trivial":
        return cyclic_group(1)
    if kind == "cyclic":
        return cyclic_group(int(spec["n"]), max_order=max_order)
    if kind == "abelian":
        return abelian_group(spec["invariants"], max_order=max_order)
    if kind == "dihedral":
        return dihedral_group(int(spec["order"]), max_order=max_order)
    if kind == "quaternion8":
        return quaternion_group()
    if kind in ("heisenberg", "heisenberg_mod"):
        return heisenberg_group(int(spec["p"]), max_order=max_order)
    if kind == "symmetric":
        return symmetric_group(int(spec["n"]))
    if kind == "cayley":
        table = np.asarray(spec["table"], dtype=np.int32)
        if table.shape[0] > max_order:
            raise OversizeError(
                f"order {table.shape[0]} exceeds limit {max_order}")
        gens = spec.get("generators")
        if gens is None:
            gens = _find_generators(table)
        return FiniteGroup(table, gens, name=spec.get("name", "cayley"))
    raise ValueError(f"unknown group kind {kind!r}")


def _find_generators(table):
    """Small deterministic generating sequence for a raw Cayley table."""
    g = FiniteGroup(table, range(table.shape[0]), name="scratch")
    gens = []
    have = {g.identity}
    for a in range(g.order):
        if a in have:
            continue
        gens.append(a)
        have = g.closure(gens)
        if len(have) == g.order:
            break
    return gens
