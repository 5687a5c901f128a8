"""Permutation groups with stabilizer chains, subgroup analysis, and
kernels of actions.

Permutations are numpy int arrays mapping point i to perm[i]; products
compose left to right ((p * q)(x) = q(p(x))), matching coset-table tracing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .abelian import AbelianGroupStructure


def compose(p, q):
    """Apply p then q."""
    return q[p]


def inverse(p):
    out = np.empty_like(p)
    out[p] = np.arange(len(p), dtype=p.dtype)
    return out


def identity(degree):
    return np.arange(degree, dtype=np.int32)


def is_identity(p):
    return bool(np.array_equal(p, np.arange(len(p), dtype=p.dtype)))


def perm_order(p):
    from math import lcm

    n = len(p)
    seen = np.zeros(n, dtype=bool)
    o = 1
    for i in range(n):
        if seen[i] or p[i] == i:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        o = lcm(o, length)
    return o


class _Level:
    __slots__ = ("point", "gens", "orbit", "_reps")

    def __init__(self, point):
        self.point = point
        self.gens = []
        # orbit: point -> (gen_index, parent_point); base maps to (-1, -1)
        self.orbit = {point: (-1, -1)}
        self._reps = {point: None}  # None stands for the identity

    def rebuild(self):
        self.orbit = {self.point: (-1, -1)}
        self._reps = {self.point: None}
        frontier = [self.point]
        while frontier:
            nxt = []
            for pt in frontier:
                for gi, g in enumerate(self.gens):
                    img = int(g[pt])
                    if img not in self.orbit:
                        self.orbit[img] = (gi, pt)
                        nxt.append(img)
            frontier = nxt

    def coset_rep(self, pt):
        """Permutation mapping self.point to pt (None = identity)."""
        path = []
        while pt not in self._reps:
            path.append(pt)
            pt = self.orbit[pt][1]
        rep = self._reps[pt]
        for q in reversed(path):
            gi = self.orbit[q][0]
            rep = self.gens[gi] if rep is None else compose(rep, self.gens[gi])
            self._reps[q] = rep
        return rep if not path else self._reps[path[0]]


class PermutationGroup:
    """Group generated by permutations, with a deterministic stabilizer
    chain built by sifting Schreier generators.

    The order is the product of the fundamental orbit lengths.  An
    externally certified order may be attached for groups whose chain is
    too expensive; it is cross-checked lazily when the chain is built.
    """

    def __init__(self, gens, degree, certified_order=None):
        self.degree = degree
        self.gens = [np.asarray(g, dtype=np.int32) for g in gens]
        for g in self.gens:
            if sorted(g.tolist()) != list(range(degree)):
                raise ValueError("generator is not a permutation")
        self._levels: Optional[list] = None
        self._certified = certified_order

    @property
    def order(self):
        if self._certified is not None:
            return self._certified
        return self.chain_order()

    def chain_order(self):
        self._build_chain()
        n = 1
        for lv in self._levels:
            n *= len(lv.orbit)
        return n

    def _sift(self, g):
        """Returns (level_index, residue); residue fixes base[:level]."""
        h = g
        for i, lv in enumerate(self._levels):
            x = int(h[lv.point])
            if x == lv.point:
                continue
            if x not in lv.orbit:
                return i, h
            rep = lv.coset_rep(x)
            h = compose(h, inverse(rep))
        return len(self._levels), h

    def _build_chain(self, base_hint=()):
        if self._levels is not None:
            return
        self._levels = []
        hint = list(base_hint)
        work = [g for g in self.gens if not is_identity(g)]
        while work:
            g = work.pop()
            i, h = self._sift(g)
            if is_identity(h):
                continue
            if i == len(self._levels):
                moved = None
                for b in hint:
                    if h[b] != b:
                        moved = b
                        break
                if moved is None:
                    moved = int(np.nonzero(h != np.arange(self.degree))[0][0])
                self._levels.append(_Level(moved))
            for j in range(i + 1):
                lv = self._levels[j]
                if any(np.array_equal(h, s) for s in lv.gens):
                    continue
                lv.gens.append(h)
            # rebuild every affected orbit and requeue its Schreier
            # generators (each level must stay verified against its gens)
            for j in range(i + 1):
                lv = self._levels[j]
                lv.rebuild()
                for pt in lv.orbit:
                    u = lv.coset_rep(pt)
                    for s in lv.gens:
                        img = int(s[pt])
                        v = lv.coset_rep(img)
                        sg = s if u is None else compose(u, s)
                        if v is not None:
                            sg = compose(sg, inverse(v))
                        if not is_identity(sg):
                            work.append(sg)

    def contains(self, p):
        self._build_chain()
        i, h = self._sift(np.asarray(p, dtype=np.int32))
        return is_identity(h)

    def elements(self, cap=100_000):
        """All elements by BFS closure; raises if the cap is exceeded."""
        ident = identity(self.degree)
        seen = {ident.tobytes(): ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for e in frontier:
                for g in self.gens:
                    f = compose(e, g)
                    k = f.tobytes()
                    if k not in seen:
                        if len(seen) >= cap:
                            raise OverflowError("element cap exceeded")
                        seen[k] = f
                        nxt.append(f)
            frontier = nxt
        return list(seen.values())


def kernel_of_action(group: PermutationGroup, target_gens,
                     verify_words=()):
    """Generators of the kernel of the homomorphism sending each group
    generator to the matching permutation of an auxiliary point set.

    Builds the combined action on own-points + auxiliary points with a
    stabilizer chain whose base exhausts the auxiliary block first; strong
    generators fixing the whole auxiliary block generate the kernel.
    verify_words: optional iterable of (word, expected-trivial) relator
    steps checked against target_gens before trusting the action.
    """
    degree = group.degree
    target_gens = [np.asarray(t, dtype=np.int32) for t in target_gens]
    if len(target_gens) != len(group.gens):
        raise ValueError("need one target permutation per generator")
    aux = len(target_gens[0]) if target_gens else 0
    for rel in verify_words:
        pos = np.arange(aux, dtype=np.int32)
        for gi, sign in rel:
            t = target_gens[gi]
            pos = t[pos] if sign > 0 else inverse(t)[pos]
        if not np.array_equal(pos, np.arange(aux, dtype=np.int32)):
            raise ValueError("target action violates a relator")
    combined = [np.concatenate([g, t + degree])
                for g, t in zip(group.gens, target_gens)]
    big = PermutationGroup(combined, degree + aux)
    # aux-first base: every strong generator that moves any auxiliary point
    # sits at an auxiliary level, so the strong generators fixing the whole
    # auxiliary block generate the kernel
    big._build_chain(base_hint=range(degree, degree + aux))
    kernel_gens = []
    seenb = set()
    aux_ident = np.arange(aux, dtype=np.int32) + degree
    for lv in big._levels:
        for s in lv.gens:
            if np.array_equal(s[degree:], aux_ident):
                k = s.tobytes()
                if k not in seenb:
                    seenb.add(k)
                    kernel_gens.append(s[:degree].copy())
    return kernel_gens


@dataclass
class SubgroupReport:
    """Structural summary of a subgroup."""

    order: int
    is_abelian: bool
    abelian_invariants: Optional[AbelianGroupStructure]
    derived_order: int
    nilpotency_class: Optional[int]  # None = not nilpotent
    min_generators: Optional[int]    # for nilpotent subgroups only

    def to_dict(self):
        return {
            "order": self.order,
            "is_abelian": self.is_abelian,
            "abelian_invariants": (
                list(self.abelian_invariants.torsion)
                if self.abelian_invariants is not None else None),
            "derived_order": self.derived_order,
            "nilpotency_class": self.nilpotency_class,
            "min_generators": self.min_generators,
        }


def _invariants_by_order_counting(orders):
    """Invariant factors of a finite abelian group from the multiset of its
    element orders (power-counting method)."""
    from .arith import factorint

    n = len(orders)
    factors = []
    for p in factorint(n):
        s = []
        i = 0
        while True:
            pk = p ** i
            c = sum(1 for o in orders if pk % o == 0)
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
        mult = [s[i] - s[i - 1] for i in range(1, len(s))]
        for i, m in enumerate(mult):
            nxt = mult[i + 1] if i + 1 < len(mult) else 0
            factors.extend([p ** (i + 1)] * (m - nxt))
    return AbelianGroupStructure.from_orders(factors)


def subgroup_report(group: PermutationGroup, gens, cap=100_000):
    """Analyze the subgroup generated by gens inside a permutation group.

    Orders come from the stabilizer chain; abelian invariants use
    exhaustive element listing plus primary decomposition when the order
    fits the cap (the report degrades to order-only beyond it).
    """
    gens = [np.asarray(g, dtype=np.int32) for g in gens]
    gens = [g for g in gens if not is_identity(g)]
    if not gens:
        return SubgroupReport(1, True, AbelianGroupStructure(), 1, 0, 0)
    sub = PermutationGroup(gens, group.degree)
    order = sub.chain_order()
    abelian = all(
        np.array_equal(compose(a, b), compose(b, a))
        for i, a in enumerate(gens) for b in gens[i + 1:])
    if order > cap:
        return SubgroupReport(order, abelian, None, 0, None, None)
    elems = sub.elements(cap=cap)
    invariants = None
    if abelian:
        invariants = _invariants_by_order_counting(
            [perm_order(e) for e in elems])
    derived = _derived_closure(gens, elems)
    nil_class: Optional[int] = None
    if len(derived) == 1:
        nil_class = 0 if order == 1 else 1
    else:
        cur = derived
        k = 1
        while True:
            k += 1
            nxt = _bracket_closure(cur, gens, elems)
            if len(nxt) == 1:
                nil_class = k
                break
            if len(nxt) == len(cur):
                nil_class = None
                break
            cur = nxt
    min_gens: Optional[int] = None
    if nil_class is not None:
        if order == 1:
            min_gens = 0
        else:
            dset = {e.tobytes() for e in derived}
            coset_orders = _quotient_orders(elems, dset, gens[0].shape[0])
            min_gens = len(
                _invariants_by_order_counting(coset_orders).torsion)
    return SubgroupReport(order, abelian, invariants, len(derived),
                          nil_class, min_gens)


def _derived_closure(gens, elems):
    """Derived subgroup as an element list (closure of commutators of
    generators under conjugation and products)."""
    lookup = {e.tobytes(): e for e in elems}
    seeds = []
    for a in gens:
        for b in gens:
            c = compose(compose(inverse(a), inverse(b)), compose(a, b))
            seeds.append(c)
    return _normal_closure(seeds, gens, lookup)


def _bracket_closure(current, gens, elems):
    """[current, <gens>] as an element list."""
    lookup = {e.tobytes(): e for e in elems}
    seeds = []
    for a in current:
        for b in gens:
            seeds.append(
                compose(compose(inverse(a), inverse(b)), compose(a, b)))
    return _normal_closure(seeds, gens, lookup)


def _normal_closure(seeds, gens, lookup):
    degree = len(next(iter(lookup.values())))
    ident = identity(degree)
    have = {ident.tobytes(): ident}
    work = [s for s in seeds if not is_identity(s)]
    while work:
        s = work.pop()
        k = s.tobytes()
        if k in have:
            continue
        # close under products with existing elements
        newly = [s]
        have[k] = s
        while newly:
            e = newly.pop()
            for f in list(have.values()):
                for prod in (compose(e, f), compose(f, e)):
                    pk = prod.tobytes()
                    if pk not in have:
                        have[pk] = prod
                        newly.append(prod)
        # conjugates of s by the ambient generators
        for g in gens:
            work.append(compose(compose(inverse(g), s), g))
    return list(have.values())


def _quotient_orders(elems, normal_bytes, degree):
    """Orders of the cosets eN in <elems>/N, one entry per coset."""
    seen = set()
    orders = []
    lookup = {e.tobytes(): e for e in elems}
    for e in elems:
        # canonical coset key: minimal bytes among eN
        key = min(compose(lookup[nb], e).tobytes() for nb in normal_bytes)
        if key in seen:
            continue
        seen.add(key)
        o = 1
        cur = e
        while cur.tobytes() not in normal_bytes:
            cur = compose(cur, e)
            o += 1
        orders.append(o)
    return orders
