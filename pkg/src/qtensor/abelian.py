"""Canonical finitely generated abelian group structures.

The canonical form is the invariant-factor chain d_1 | d_2 | ... | d_k
(each d_i >= 2) plus a free rank; it is unique per isomorphism type.
"""

from __future__ import annotations

from math import gcd

from .arith import factorint


class AbelianGroupStructure:
    """Isomorphism type of a finitely generated abelian group."""

    __slots__ = ("torsion", "free_rank")

    def __init__(self, torsion=(), free_rank=0):
        torsion = tuple(int(d) for d in torsion)
        if any(d < 2 for d in torsion):
            raise ValueError("torsion factors must be >= 2")
        for a, b in zip(torsion, torsion[1:]):
            if b % a:
                raise ValueError("torsion must form a divisibility chain")
        if free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        self.torsion = torsion
        self.free_rank = int(free_rank)

    @classmethod
    def from_orders(cls, orders, free_rank=0):
        """Canonicalize an arbitrary list of cyclic factor orders.

        Orders of 1 are dropped; 0 (or None) counts as a free factor.
        """
        primary = {}
        free = int(free_rank)
        for n in orders:
            if n in (0, None):
                free += 1
                continue
            n = int(n)
            if n == 1:
                continue
            for p, e in factorint(n).items():
                primary.setdefault(p, []).append(e)
        # merge primary parts into invariant factors, largest first
        for exps in primary.values():
            exps.sort(reverse=True)
        width = max((len(v) for v in primary.values()), default=0)
        factors = []
        for i in range(width):
            f = 1
            for p, exps in primary.items():
                if i < len(exps):
                    f *= p ** exps[i]
            factors.append(f)
        return cls(tuple(reversed(factors)), free)

    @property
    def order(self):
        """Group order, or 0 for infinite groups."""
        if self.free_rank:
            return 0
        n = 1
        for d in self.torsion:
            n *= d
        return n

    @property
    def is_trivial(self):
        return not self.torsion and not self.free_rank

    def __eq__(self, other):
        return (isinstance(other, AbelianGroupStructure)
                and self.torsion == other.torsion
                and self.free_rank == other.free_rank)

    def __hash__(self):
        return hash((self.torsion, self.free_rank))

    def __mul__(self, other):
        """Direct sum."""
        return AbelianGroupStructure.from_orders(
            self.torsion + other.torsion,
            self.free_rank + other.free_rank)

    def cyclic_factors(self):
        """Invariant factors with 0 standing for each free factor."""
        return list(self.torsion) + [0] * self.free_rank

    def __repr__(self):
        return f"AbelianGroupStructure({self.torsion!r}, {self.free_rank})"

    def __str__(self):
        parts = [f"C{d}" for d in self.torsion] + ["C_inf"] * self.free_rank
        return " x ".join(parts) if parts else "1"


TRIVIAL = AbelianGroupStructure()


def cyclic(n):
    """C_n for n >= 1, or the infinite cyclic group for n in (0, None)."""
    if n in (0, None):
        return AbelianGroupStructure((), 1)
    return AbelianGroupStructure.from_orders([n])


def homocyclic(n, rank):
    """Direct product of `rank` copies of C_n (free abelian when n == 0)."""
    if n in (0, None):
        return AbelianGroupStructure((), rank)
    return AbelianGroupStructure.from_orders([n] * rank)


def _factor_tensor(m, n, q):
    """Order of the tensor product of cyclic factors of orders m, n over
    Z_q (0 = infinite factor, q = 0 means over Z)."""
    if m == 0 and n == 0:
        return q  # C_inf (x) C_inf = C_inf over Z, C_q over Z_q
    if m == 0:
        return n if q == 0 else gcd(n, q)
    if n == 0:
        return m if q == 0 else gcd(m, q)
    d = gcd(m, n)
    return d if q == 0 else gcd(d, q)


def abelian_tensor(a: AbelianGroupStructure, b: AbelianGroupStructure, q=0):
    """Tensor product of two abelian groups over Z_q (over Z when q = 0).

    Computed factor by factor via gcds: C_m (x) C_n = C_gcd(m,n),
    C_inf (x) C_n = C_n, C_inf (x) C_inf = C_inf, each further reduced
    mod q when q >= 1.
    """
    if q < 0:
        raise ValueError("q must be >= 0")
    orders = []
    free = 0
    for m in a.cyclic_factors():
        for n in b.cyclic_factors():
            t = _factor_tensor(m, n, q)
            if t == 0:
                free += 1
            else:
                orders.append(t)
    return AbelianGroupStructure.from_orders(orders, free)
