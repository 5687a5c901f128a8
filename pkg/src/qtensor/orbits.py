"""Free-orbit machinery over an enumerated coset table.

In both representation strategies used for nu^q(G) (regular: cosets of the
trivial subgroup; cosets: cosets of the embedded plain copy of G), the
subgroup Upsilon^q = [G, G^phi]<hats> intersects every point stabilizer
trivially, so it acts freely on the orbit of the base coset.  Elements of
Upsilon^q therefore correspond bijectively to orbit points, and subgroup
orders, coset partitions, quotients, and identity checks all reduce to
orbit computations with single-point word traces.

Freeness is not assumed: during the orbit search every edge that lands on
a known point is checked for consistency of the tracked evaluation image
(the Schreier generators of the point stabilizer all evaluate trivially,
and the evaluation map is injective on the stabilizer), which certifies
the free action exactly.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from . import words as W
from .abelian import AbelianGroupStructure
from .groups import FiniteGroup
from .perms import SubgroupReport, _invariants_by_order_counting
from .presentation import ROLE_G, ROLE_HAT, ROLE_PHI, FpPresentation


class NuAction:
    """An enumerated nu^q(G) with fast column access.

    The extra identity column (index 2 * ngens) lets identity elements be
    traced uniformly in vectorized word applications.
    """

    def __init__(self, pres: FpPresentation, group: FiniteGroup, ctable,
                 strategy: str):
        self.pres = pres
        self.group = group
        self.strategy = strategy
        self.ncosets = ctable.ncosets
        self.enum_stats = dict(ctable.stats)
        w = 2 * pres.ngens
        self.ident_col = w
        self.xtable = np.concatenate(
            [ctable.table,
             np.arange(self.ncosets, dtype=np.int32)[:, None]], axis=1)
        if strategy == "regular":
            self.nu_order = self.ncosets
        else:
            # the plain copy embeds with order exactly |G| (the evaluation
            # map splits the inclusion), so index * |G| is the group order
            self.nu_order = self.ncosets * group.order
        self._colmap = {}
        for role in (ROLE_G, ROLE_PHI, ROLE_HAT):
            arr = np.full(group.order, w, dtype=np.int32)
            self._colmap[role] = arr
        for gid, (role, elem) in enumerate(pres.roles):
            self._colmap[role][elem] = 2 * gid

    def col(self, role, elem, sign=1):
        c = int(self._colmap[role][elem])
        if c == self.ident_col or sign > 0:
            return c
        return c ^ 1

    def cols_vec(self, role, elems, sign=1):
        c = self._colmap[role][np.asarray(elems)]
        if sign > 0:
            return c
        return np.where(c == self.ident_col, c, c ^ 1)

    def word_cols(self, word):
        """Flatten a presentation word to a column list."""
        cols = []
        for g, e in word:
            col = 2 * g if e > 0 else 2 * g + 1
            cols.extend([col] * abs(e))
        return cols

    def apply(self, pts, cols):
        pos = pts
        for c in cols:
            pos = self.xtable[pos, c]
        return pos


def upsilon_generator_words(pres: FpPresentation, group: FiniteGroup):
    """Generating words of Upsilon^q: all [g, h^phi] plus all hats."""
    gens = []
    for g in range(group.order):
        if g == group.identity:
            continue
        xg = W.gen(pres.gen_for(ROLE_G, g))
        for h in range(group.order):
            if h == group.identity:
                continue
            yh = W.gen(pres.gen_for(ROLE_PHI, h))
            gens.append(W.commutator(xg, yh))
    for e in pres.hat_elements:
        gens.append(W.gen(pres.gen_for(ROLE_HAT, e)))
    return gens


def rho_image_of_word(word, pres: FpPresentation, group: FiniteGroup):
    """Evaluate a presentation word in G under the evaluation map."""
    acc = group.identity
    for gid, e in word:
        role, elem = pres.roles[gid]
        val = group.power(elem, pres.q) if role == ROLE_HAT else elem
        acc = group.mul(acc, group.power(val, e))
    return acc


class FreeOrbit:
    """Orbit of the base coset under a free subgroup action; points are
    element indices (index 0 = identity)."""

    def __init__(self, action: NuAction, points, idx, parent_gen, parent_pt,
                 gen_cols, rho, img=None):
        self.action = action
        self.points = points
        self.idx = idx
        self.parent_gen = parent_gen
        self.parent_pt = parent_pt
        self.gen_cols = gen_cols
        self.rho = rho
        self.img = img
        self.size = int(points.size)
        self._cols_cache = {0: ()}

    # -- element words ------------------------------------------------------

    def elem_cols(self, i):
        """Column word for element i (path from the identity)."""
        cached = self._cols_cache.get(i)
        if cached is not None:
            return cached
        path = []
        j = i
        while j not in self._cols_cache:
            path.append(j)
            j = int(self.parent_pt[j])
        for k in reversed(path):
            base = self._cols_cache[int(self.parent_pt[k])]
            self._cols_cache[k] = base + tuple(
                self.gen_cols[int(self.parent_gen[k])])
        return self._cols_cache[i]

    def inv_cols(self, cols):
        ident = self.action.ident_col
        return tuple(c if c == ident else c ^ 1 for c in reversed(cols))

    def _to_index(self, point):
        j = int(self.idx[point])
        if j < 0:
            raise AssertionError("product left the orbit")
        return j

    def apply_cols_index(self, i, cols):
        return self._to_index(self.action.apply(int(self.points[i]), cols))

    # -- element arithmetic --------------------------------------------------

    def mul(self, i, j):
        return self.apply_cols_index(i, self.elem_cols(j))

    def inv(self, i):
        return self.apply_cols_index(0, self.inv_cols(self.elem_cols(i)))

    def conj(self, i, j):
        """i^j = j^-1 i j."""
        cj = self.elem_cols(j)
        cols = self.inv_cols(cj) + self.elem_cols(i) + cj
        return self.apply_cols_index(0, cols)

    def comm(self, i, j):
        ci, cj = self.elem_cols(i), self.elem_cols(j)
        cols = self.inv_cols(ci) + self.inv_cols(cj) + ci + cj
        return self.apply_cols_index(0, cols)

    def order_of(self, i):
        if i == 0:
            return 1
        cols = self.elem_cols(i)
        j = i
        o = 1
        while j != 0:
            j = self.apply_cols_index(j, cols)
            o += 1
        return o

    def order_mod(self, i, member_mask):
        """Order of the coset of element i modulo the subgroup marked by
        member_mask."""
        cols = self.elem_cols(i)
        j = i
        o = 1
        while not member_mask[j]:
            j = self.apply_cols_index(j, cols)
            o += 1
        return o

    # -- subgroups as index sets ---------------------------------------------

    def subgroup_closure(self, gen_indices):
        """Sorted index array of <gens>; identity always included."""
        mask = np.zeros(self.size, dtype=bool)
        mask[0] = True
        frontier = np.array([0], dtype=np.int64)
        gen_cols = [self.elem_cols(int(g)) for g in gen_indices
                    if int(g) != 0]
        while frontier.size and gen_cols:
            nxt = []
            pts = self.points[frontier]
            for cols in gen_cols:
                pos = self.action.apply(pts, list(cols))
                tgt = self.idx[pos]
                if np.any(tgt < 0):
                    raise AssertionError("subgroup product left the orbit")
                fresh = tgt[~mask[tgt]]
                if fresh.size:
                    fresh = np.unique(fresh)
                    mask[fresh] = True
                    nxt.append(fresh)
            frontier = (np.concatenate(nxt) if nxt
                        else np.empty(0, dtype=np.int64))
        return np.nonzero(mask)[0], mask

    def reduce_gens(self, gen_indices):
        """Small generating subset via membership-driven greedy selection."""
        chosen = []
        _, mask = self.subgroup_closure([])
        for g in gen_indices:
            g = int(g)
            if g == 0 or mask[g]:
                continue
            chosen.append(g)
            _, mask = self.subgroup_closure(chosen)
        return chosen

    def normal_closure(self, seed_indices, under_indices):
        """Closure of <seeds> under conjugation by the given elements."""
        seeds = [int(s) for s in seed_indices if int(s) != 0]
        under = [int(u) for u in under_indices if int(u) != 0]
        gens = list(dict.fromkeys(seeds))
        while True:
            members, mask = self.subgroup_closure(gens)
            new = []
            for s in gens:
                for u in under:
                    c = self.conj(s, u)
                    if not mask[c]:
                        new.append(c)
            if not new:
                return members, mask, gens
            gens.extend(dict.fromkeys(new))

    def partition(self, member_indices, subgroup_gen_indices):
        """Left cosets of the subgroup inside the member set.

        Returns (labels over the full orbit with -1 outside, n_components).
        """
        labels = -np.ones(self.size, dtype=np.int64)
        gen_cols = [self.elem_cols(int(g)) for g in subgroup_gen_indices
                    if int(g) != 0]
        n = 0
        member_mask = np.zeros(self.size, dtype=bool)
        member_mask[member_indices] = True
        for start in member_indices:
            start = int(start)
            if labels[start] >= 0:
                continue
            labels[start] = n
            frontier = np.array([start], dtype=np.int64)
            while frontier.size and gen_cols:
                nxt = []
                pts = self.points[frontier]
                for cols in gen_cols:
                    tgt = self.idx[self.action.apply(pts, list(cols))]
                    fresh = tgt[labels[tgt] < 0]
                    if fresh.size:
                        fresh = np.unique(fresh)
                        if not member_mask[fresh].all():
                            raise AssertionError(
                                "coset leaves the member set")
                        labels[fresh] = n
                        nxt.append(fresh)
                frontier = (np.concatenate(nxt) if nxt
                            else np.empty(0, dtype=np.int64))
            n += 1
        return labels, n


def build_free_orbit(action: NuAction, gen_words, image: Optional[tuple] = None):
    """Breadth-first orbit of the base coset under the given generator
    words, tracking the evaluation image in G and (optionally) the image in
    another analysis.

    image: (image_action, image_orbit, word_image_fn) where word_image_fn
    maps a presentation word of this group to a word of the image group's
    presentation.

    Raises AssertionError if any orbit edge is inconsistent with the
    tracked catalogs (which would contradict the free action).
    """
    g = action.group
    pres = action.pres
    start = 0

    gen_cols = []
    gen_rho = []
    gen_img_cols = []
    seen_endpoint = {}
    for word in gen_words:
        cols = action.word_cols(word)
        end = int(action.apply(start, cols))
        rho = rho_image_of_word(word, pres, g)
        if end in seen_endpoint:
            if seen_endpoint[end] != rho:
                raise AssertionError("evaluation image mismatch on "
                                     "duplicate generator")
            continue
        if end == start and rho == g.identity:
            continue
        seen_endpoint[end] = rho
        gen_cols.append(tuple(cols))
        gen_rho.append(rho)
        if image is not None:
            _, img_orbit, word_image_fn = image
            img_word = word_image_fn(word)
            gen_img_cols.append(tuple(
                img_orbit.action.word_cols(img_word)))

    npts_guess = 64
    points = np.empty(npts_guess, dtype=np.int64)
    rho_val = np.empty(npts_guess, dtype=np.int32)
    img_val = np.empty(npts_guess, dtype=np.int64) if image else None
    parent_gen = np.empty(npts_guess, dtype=np.int32)
    parent_pt = np.empty(npts_guess, dtype=np.int64)
    idx = np.full(action.ncosets, -1, dtype=np.int64)

    points[0] = start
    rho_val[0] = g.identity
    parent_gen[0] = -1
    parent_pt[0] = -1
    if image is not None:
        img_val[0] = 0
    idx[start] = 0
    size = 1
    frontier = np.array([0], dtype=np.int64)

    gtab = g.table
    while frontier.size:
        nxt = []
        for gi, cols in enumerate(gen_cols):
            pos = action.apply(points[frontier], list(cols))
            new_rho = gtab[rho_val[frontier], gen_rho[gi]]
            if image is not None:
                img_orbit = image[1]
                ipos = img_orbit.points[img_val[frontier]]
                ipos = img_orbit.action.apply(ipos, list(gen_img_cols[gi]))
                new_img = img_orbit.idx[ipos]
                if np.any(new_img < 0):
                    raise AssertionError("image left the image orbit")
            tgt = idx[pos]
            known = tgt >= 0
            # consistency of every edge that lands on a known point: the
            # Schreier generators of the stabilizer evaluate trivially
            if np.any(known):
                if not np.array_equal(new_rho[known],
                                      rho_val[tgt[known]]):
                    raise AssertionError(
                        "free action violated (evaluation mismatch)")
                if image is not None and not np.array_equal(
                        new_img[known], img_val[tgt[known]]):
                    raise AssertionError(
                        "free action violated (image mismatch)")
            fresh_sel = np.nonzero(~known)[0]
            if fresh_sel.size == 0:
                continue
            uniq, first = np.unique(pos[fresh_sel], return_index=True)
            take = fresh_sel[first]
            nnew = uniq.size
            while size + nnew > points.size:
                points = np.resize(points, points.size * 2)
                rho_val = np.resize(rho_val, rho_val.size * 2)
                parent_gen = np.resize(parent_gen, parent_gen.size * 2)
                parent_pt = np.resize(parent_pt, parent_pt.size * 2)
                if img_val is not None:
                    img_val = np.resize(img_val, img_val.size * 2)
            sel = np.arange(size, size + nnew)
            points[sel] = uniq
            rho_val[sel] = new_rho[take]
            parent_gen[sel] = gi
            parent_pt[sel] = frontier[take]
            if img_val is not None:
                img_val[sel] = new_img[take]
            idx[uniq] = sel
            nxt.append(sel)
            size += nnew
            # recheck the duplicates inside this batch against the chosen
            # representatives
            dup = np.nonzero(~known)[0]
            tgt2 = idx[pos[dup]]
            if not np.array_equal(new_rho[dup], rho_val[tgt2]):
                raise AssertionError(
                    "free action violated (evaluation mismatch)")
            if img_val is not None and not np.array_equal(
                    new_img[dup], img_val[tgt2]):
                raise AssertionError("free action violated (image mismatch)")
        frontier = (np.concatenate(nxt) if nxt
                    else np.empty(0, dtype=np.int64))

    return FreeOrbit(
        action, points[:size].copy(), idx, parent_gen[:size].copy(),
        parent_pt[:size].copy(), gen_cols, rho_val[:size].copy(),
        img_val[:size].copy() if img_val is not None else None)


# -- structural reports -------------------------------------------------------


def point_subgroup_report(orbit: FreeOrbit, member_indices, gen_indices,
                          listing_cap=100_000) -> SubgroupReport:
    """SubgroupReport for a subgroup given as orbit indices."""
    order = int(len(member_indices))
    if order == 1:
        return SubgroupReport(1, True, AbelianGroupStructure(), 1, 0, 0)
    if order > listing_cap:
        return SubgroupReport(order, False, None, 0, None, None)
    reduced = orbit.reduce_gens(gen_indices)
    abelian = all(orbit.comm(a, b) == 0
                  for i, a in enumerate(reduced) for b in reduced[i + 1:])
    invariants = None
    if abelian:
        invariants = _invariants_by_order_counting(
            [orbit.order_of(int(i)) for i in member_indices])
    # derived subgroup: normal closure of generator commutators
    seeds = [orbit.comm(a, b)
             for i, a in enumerate(reduced) for b in reduced[i + 1:]]
    derived, dmask, dgens = orbit.normal_closure(seeds, reduced)
    nil_class: Optional[int] = None
    if derived.size == 1:
        nil_class = 1
    else:
        cur_gens = dgens
        cur_size = derived.size
        k = 1
        while True:
            k += 1
            seeds = [orbit.comm(a, b) for a in cur_gens for b in reduced]
            nxt, _, ngens2 = orbit.normal_closure(seeds, reduced)
            if nxt.size == 1:
                nil_class = k
                break
            if nxt.size == cur_size:
                nil_class = None
                break
            cur_gens = ngens2
            cur_size = nxt.size
    min_gens: Optional[int] = None
    if nil_class is not None:
        labels, ncomp = orbit.partition(member_indices, dgens)
        quotient_orders = []
        seen = set()
        for i in member_indices:
            lab = int(labels[int(i)])
            if lab in seen:
                continue
            seen.add(lab)
            quotient_orders.append(orbit.order_mod(int(i), dmask))
        inv = _invariants_by_order_counting(quotient_orders)
        min_gens = len(inv.torsion)
        _ = ncomp
    return SubgroupReport(order, abelian, invariants, int(derived.size),
                          nil_class, min_gens)


def quotient_invariants(orbit: FreeOrbit, member_indices, normal_gen_indices,
                        normal_mask) -> AbelianGroupStructure:
    """Invariant factors of (members)/(normal subgroup), which must be
    abelian; computed from coset orders via the counting method."""
    labels, _ = orbit.partition(member_indices, normal_gen_indices)
    orders = []
    seen = set()
    for i in member_indices:
        lab = int(labels[int(i)])
        if lab in seen:
            continue
        seen.add(lab)
        orders.append(orbit.order_mod(int(i), normal_mask))
    return _invariants_by_order_counting(orders)
