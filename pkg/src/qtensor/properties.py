"""The identity battery: mechanical checks of the commutator and hat laws
that hold in nu^q(G), evaluated over element tuples.

Every check reduces to "this word lies in Upsilon^q and equals 1", which by
the free action of Upsilon^q on the base-coset orbit is equivalent to the
word fixing the base coset.  Words are traced for all tuples at once using
per-tuple column arrays.

Failures are recorded with the first offending tuple, never raised.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, gcd
from typing import Optional

import numpy as np

from .abelian import AbelianGroupStructure
from .analyze import Analysis
from .config import RunConfig
from .orbits import quotient_invariants
from .presentation import ROLE_G, ROLE_HAT, ROLE_PHI


@dataclass
class PropertyResult:
    check: str
    ok: bool
    counterexample: Optional[tuple]
    mode: str

    def as_tuple(self):
        return (self.check, self.ok, self.counterexample, self.mode)


class Pat:
    """A word whose letters are per-tuple column arrays."""

    __slots__ = ("fwd", "bwd")

    def __init__(self, fwd, bwd):
        self.fwd = fwd
        self.bwd = bwd

    @staticmethod
    def letter(action, role, elems, sign=1):
        f = action.cols_vec(role, elems, sign)
        b = action.cols_vec(role, elems, -sign)
        return Pat([f], [b])

    @staticmethod
    def empty():
        return Pat([], [])

    def __mul__(self, other):
        return Pat(self.fwd + other.fwd, list(other.bwd) + list(self.bwd))

    def inv(self):
        return Pat(list(self.bwd), list(self.fwd))

    def conj(self, by):
        return by.inv() * self * by

    def comm(self, other):
        return self.inv() * other.inv() * self * other

    def pow(self, n):
        if n < 0:
            return self.inv().pow(-n)
        out = Pat.empty()
        for _ in range(n):
            out = out * self
        return out


class Battery:
    """Tuple spaces and vectorized tracing for one analysis."""

    def __init__(self, ana: Analysis, config: RunConfig):
        self.ana = ana
        self.action = ana.action
        self.g = ana.group
        self.config = config
        g = self.g
        t = np.asarray(g.table, dtype=np.int64)
        inv = np.asarray(g._inv, dtype=np.int64)
        self.mul_t = t
        self.inv_t = inv
        # comm_t[a, b] = [a, b] in G
        self.comm_t = t[t[inv[:, None], inv[None, :]],
                        t[np.arange(g.order)[:, None],
                          np.arange(g.order)[None, :]]]
        self.orders = np.array([g.element_order(a) for a in range(g.order)],
                               dtype=np.int64)
        self.coset_orders = np.array(
            [g.coset_order(a) for a in range(g.order)], dtype=np.int64)
        derived = g.derived_subgroup()
        self.derived_mask = np.zeros(g.order, dtype=bool)
        self.derived_mask[sorted(derived)] = True
        self.results: list[PropertyResult] = []
        self.exhaustive = g.order <= config.tuple_exhaustive_order
        self.rng = np.random.default_rng(config.seed)

    # -- tuple spaces -------------------------------------------------------

    def tuples(self, arity):
        """Element index arrays (one per slot) plus a mode string."""
        m = self.g.order
        if self.exhaustive:
            grids = np.meshgrid(*[np.arange(m)] * arity, indexing="ij")
            return [a.ravel() for a in grids], "exhaustive"
        k = self.config.tuple_samples
        return [self.rng.integers(0, m, size=k) for _ in range(arity)], \
            f"sampled({self.config.tuple_samples})"

    # -- pattern helpers ----------------------------------------------------

    def X(self, elems, sign=1):
        return Pat.letter(self.action, ROLE_G, elems, sign)

    def Y(self, elems, sign=1):
        return Pat.letter(self.action, ROLE_PHI, elems, sign)

    def H(self, elems, sign=1):
        return Pat.letter(self.action, ROLE_HAT, elems, sign)

    def tau(self, gs, hs):
        """[g, h^phi] as a pattern."""
        return self.X(gs).comm(self.Y(hs))

    def trace_trivial(self, pat, ntuples):
        """Boolean array: does the word fix the base coset per tuple."""
        pos = np.zeros(ntuples, dtype=np.int64)
        xt = self.action.xtable
        for arr in pat.fwd:
            pos = xt[pos, arr]
        return pos == 0

    def record(self, check, ok_array, tup_arrays, mode):
        if bool(ok_array.all()):
            self.results.append(PropertyResult(check, True, None, mode))
            return
        bad = int(np.nonzero(~ok_array)[0][0])
        ce = tuple(int(a[bad]) for a in tup_arrays)
        self.results.append(PropertyResult(check, False, ce, mode))

    def check_pattern(self, check, pat, tup_arrays, mode, mask=None):
        n = len(tup_arrays[0]) if tup_arrays else 1
        ok = self.trace_trivial(pat, n)
        if mask is not None:
            ok = ok | ~mask
        self.record(check, ok, tup_arrays, mode)

    def check_power_divides(self, check, pat, dvec, tup_arrays, mode,
                            mask=None):
        """Check pat^d(t) == 1 per tuple, d varying per tuple."""
        n = len(dvec)
        pos = np.zeros(n, dtype=np.int64)
        ok = np.zeros(n, dtype=bool)
        xt = self.action.xtable
        dmax = int(dvec.max()) if n else 0
        for k in range(1, dmax + 1):
            for arr in pat.fwd:
                pos = xt[pos, arr]
            hit = dvec == k
            ok[hit] = pos[hit] == 0
        if mask is not None:
            ok = ok | ~mask
        self.record(check, ok, tup_arrays, mode)


def check_properties(ana: Analysis, config: Optional[RunConfig] = None):
    """Run the full identity battery; returns a list of PropertyResult."""
    config = config or RunConfig()
    b = Battery(ana, config)
    q = ana.q
    g = ana.group

    _basic_laws(b, q)
    _order_laws(b, q)
    _centrality_laws(b)
    _hat_laws(b, q)
    _kernel_law(b)
    _fg1_laws(b)
    if g.nilpotency_class() is not None and g.nilpotency_class() <= 2:
        _class2_laws(b, q)
    if q % 2 == 1:
        _q_odd_collapse(b)
    return [r.as_tuple() for r in b.results]


def _basic_laws(b: Battery, q):
    # (i) conjugating a commutator by [x, y^phi] or by the element [x, y]
    # acts identically
    (gs, hs, xs, ys), mode = b.tuples(4)
    tgh = b.tau(gs, hs)
    lhs = tgh.conj(b.tau(xs, ys))
    rhs = tgh.conj(b.X(b.comm_t[xs, ys]))
    b.check_pattern("basic_i", lhs * rhs.inv(), (gs, hs, xs, ys), mode)

    # (ii) the six weight-3 mixed commutators agree
    (gs, hs, xs), mode = b.tuples(3)
    e1 = b.tau(gs, hs).comm(b.Y(xs))
    variants = {
        "basic_ii_gh": b.X(gs).comm(b.X(hs)).comm(b.Y(xs)),
        "basic_ii_x": b.tau(gs, hs).comm(b.X(xs)),
        "basic_ii_phi_h": b.Y(gs).comm(b.X(hs)).comm(b.Y(xs)),
        "basic_ii_phiphi": b.Y(gs).comm(b.Y(hs)).comm(b.X(xs)),
        "basic_ii_phi_hx": b.Y(gs).comm(b.X(hs)).comm(b.X(xs)),
    }
    for name, other in variants.items():
        b.check_pattern(name, e1 * other.inv(), (gs, hs, xs), mode)

    # (iii) symmetric pairs vanish when either entry is a commutator
    (gs, hs), mode = b.tuples(2)
    sym = b.tau(gs, hs) * b.tau(hs, gs)
    in_derived = b.derived_mask[gs] | b.derived_mask[hs]
    b.check_pattern("basic_iii", sym, (gs, hs), mode, mask=in_derived)

    # (ix) diagonal vanishes on the derived subgroup
    (gs,), mode = b.tuples(1)
    b.check_pattern("basic_ix", b.tau(gs, gs), (gs,), mode,
                    mask=b.derived_mask[gs])

    # (x) if x centralizes g and h then [g, h, x^phi] = 1 = [[g,h]^phi, x]
    (gs, hs, xs), mode = b.tuples(3)
    central = (b.comm_t[xs, gs] == b.g.identity) & \
              (b.comm_t[xs, hs] == b.g.identity)
    w1 = b.X(gs).comm(b.X(hs)).comm(b.Y(xs))
    w2 = b.Y(b.comm_t[gs, hs]).comm(b.X(xs))
    b.check_pattern("basic_x_a", w1, (gs, hs, xs), mode, mask=central)
    b.check_pattern("basic_x_b", w2, (gs, hs, xs), mode, mask=central)

    if q >= 1:
        # (iv) hats see only the commutator element
        (xs, gs, hs), mode = b.tuples(3)
        lhs = b.H(xs).comm(b.tau(gs, hs))
        rhs = b.H(xs).comm(b.X(b.comm_t[gs, hs]))
        b.check_pattern("basic_iv", lhs * rhs.inv(), (xs, gs, hs), mode)

        # (v) conjugation of a hat in the plain copy
        (xs, gs), mode = b.tuples(2)
        xq = _power_vec(b, xs, q)
        lhs = b.H(xs).conj(b.X(gs))
        rhs = b.H(xs) * b.X(xq).comm(b.Y(gs))
        b.check_pattern("basic_v", lhs * rhs.inv(), (xs, gs), mode)


def _order_laws(b: Battery, q):
    (gs, hs), mode = b.tuples(2)
    commuting = b.comm_t[gs, hs] == b.g.identity
    if q >= 1:
        # (vi) commuting pairs: o([g, h^phi]) divides gcd(q, o(g), o(h))
        d = np.gcd(np.gcd(b.orders[gs], b.orders[hs]),
                   np.full_like(gs, q))
        b.check_power_divides("basic_vi_order", b.tau(gs, hs),
                              np.where(commuting, d, 1),
                              (gs, hs), mode, mask=commuting)
    # (vi) commuting pairs give central commutators
    _masked_centrality(b, "basic_vi_central", b.tau(gs, hs), (gs, hs),
                       mode, commuting)
    # corollary (iv): symmetric pair order divides gcd(q, o'(g), o'(h))
    dsym = np.gcd(b.coset_orders[gs], b.coset_orders[hs])
    if q:
        dsym = np.gcd(dsym, np.full_like(gs, q))
    sym = b.tau(gs, hs) * b.tau(hs, gs)
    b.check_power_divides("coset_order_sym", sym, dsym, (gs, hs), mode)

    # corollary (v): diagonal order divides gcd(q, o'(h)^2, 2 o'(h))
    (hs,), mode = b.tuples(1)
    dd = np.gcd(b.coset_orders[hs] ** 2, 2 * b.coset_orders[hs])
    if q:
        dd = np.gcd(dd, np.full_like(hs, q))
    b.check_power_divides("coset_order_diag", b.tau(hs, hs), dd,
                          (hs,), mode)

    if q == 2:
        # commuting x, y have [x, y^phi] = [y, x^phi]
        (gs, hs), mode = b.tuples(2)
        commuting = b.comm_t[gs, hs] == b.g.identity
        w = b.tau(gs, hs) * b.tau(hs, gs).inv()
        b.check_pattern("q2_symmetry", w, (gs, hs), mode, mask=commuting)


def _centrality_laws(b: Battery):
    # (vii) [g, g^phi] central; (viii) [g, h^phi][h, g^phi] central
    (gs,), mode1 = b.tuples(1)
    (pg, ph), mode2 = b.tuples(2)
    diag = b.tau(gs, gs)
    sym = b.tau(pg, ph) * b.tau(ph, pg)
    ok_diag = np.ones(len(gs), dtype=bool)
    ok_sym = np.ones(len(pg), dtype=bool)
    xt = b.action.xtable
    ncols = 2 * b.ana.pres.ngens
    for col in range(ncols):
        inv_col = col ^ 1
        for pat, ok in ((diag, ok_diag), (sym, ok_sym)):
            pos = np.zeros(len(ok), dtype=np.int64)
            pos = xt[pos, inv_col]
            for arr in pat.fwd:
                pos = xt[pos, arr]
            pos = xt[pos, col]
            for arr in pat.bwd:
                pos = xt[pos, arr]
            ok &= pos == 0
    b.record("central_diag", ok_diag, (gs,), mode1)
    b.record("central_sym", ok_sym, (pg, ph), mode2)


def _hat_laws(b: Battery, q):
    if q < 1:
        return
    # hat of a power: hat(x^n) = hat(x)^n [x, x^phi]^(-C(n,2) C(q,2))
    (xs,), mode = b.tuples(1)
    cq2 = comb(q, 2)
    for n in (2, 3):
        xn = _power_vec(b, xs, n)
        e = comb(n, 2) * cq2
        w = b.H(xn) * b.tau(xs, xs).pow(e) * b.H(xs).pow(n).inv()
        b.check_pattern(f"hat_power_{n}", w, (xs,), mode)


def _kernel_law(b: Battery):
    """|Ker pi_0| agrees with |[G', G^phi]| and the sets coincide."""
    ana = b.ana
    if ana.orbit.img is None:
        ok = len(ana.derived_phi_members) == 1
        b.results.append(PropertyResult(
            "ker_pi0_eq_derived_phi", ok, None if ok else (), "abelian"))
        return
    ker = set(int(i) for i in ana.ker_pi0_members)
    dphi = set(int(i) for i in ana.derived_phi_members)
    ok = ker == dphi
    ce = None
    if not ok:
        diff = sorted(ker.symmetric_difference(dphi))
        ce = (diff[0],)
    b.results.append(PropertyResult(
        "ker_pi0_eq_derived_phi", ok, ce, "set-compare"))


def _fg1_laws(b: Battery):
    """Delta^q and Upsilon^q from an abelianization basis: the reduced
    generating sets of the finite-generation lemma."""
    ana = b.ana
    g = b.g
    gab, proj = g.abelianization()
    basis_ab = gab.abelian_basis()
    # lift basis cosets to representatives in G
    lifts = []
    for c in basis_ab:
        reps = [a for a in range(g.order) if int(proj[a]) == c]
        lifts.append(min(reps))
    r = len(lifts)
    delta_desc = [ana.comm_index(x, x) for x in lifts]
    sym_desc = []
    for i in range(r):
        for j in range(i + 1, r):
            xi, xj = lifts[i], lifts[j]
            k1 = ana.comm_index(xi, xj)
            k2 = ana.comm_index(xj, xi)
            sym_desc.append(ana.orbit.mul(k1, k2))
    members, _ = ana.orbit.subgroup_closure(
        ana.orbit.reduce_gens(delta_desc + sym_desc))
    ok = (members.size == ana.delta_members.size
          and bool(np.array_equal(members, ana.delta_members)))
    b.results.append(PropertyResult(
        "fg1_delta_generators", ok, None if ok else (len(members),),
        f"basis-rank-{r}"))

    e_desc = []
    for i in range(r):
        for j in range(i + 1, r):
            e_desc.append(ana.comm_index(lifts[i], lifts[j]))
    if ana.q >= 1:
        e_desc += [ana.hat_index(x) for x in lifts if x != g.identity]
    e_desc += list(ana.derived_phi_gens)
    both = ana.orbit.reduce_gens(
        list(ana.delta_gens) + e_desc)
    members2, _ = ana.orbit.subgroup_closure(both)
    ok2 = members2.size == ana.orbit.size
    b.results.append(PropertyResult(
        "fg1_upsilon_decomposition", ok2,
        None if ok2 else (int(members2.size),), f"basis-rank-{r}"))


def _class2_laws(b: Battery, q):
    ana = b.ana
    mode = "exhaustive" if b.exhaustive else "sampled"
    if q >= 1:
        (ks, gs, hs), tmode = b.tuples(3)
        w = b.H(ks).comm(b.tau(gs, hs))
        b.check_pattern("class2_hat_centralizes_T", w, (ks, gs, hs), tmode)
    else:
        b.results.append(PropertyResult(
            "class2_hat_centralizes_T", True, None, "no-hats"))
    # [G', G^phi] is central in nu^q(G)
    ok = np.ones(1, dtype=bool)
    xt = b.action.xtable
    ncols = 2 * b.ana.pres.ngens
    bad = None
    for i in ana.derived_phi_gens:
        cols = ana.orbit.elem_cols(int(i))
        icols = ana.orbit.inv_cols(cols)
        for col in range(ncols):
            pos = 0
            for c in (col ^ 1, *cols, col, *icols):
                pos = int(xt[pos, c])
            if pos != 0:
                ok[0] = False
                bad = (int(i), col)
                break
        if bad:
            break
    b.results.append(PropertyResult(
        "class2_derived_phi_central", bool(ok[0]), bad, mode))
    rep = ana.report.upsilon
    okc = rep.nilpotency_class is not None and rep.nilpotency_class <= 2
    b.results.append(PropertyResult(
        "class2_upsilon_class_le_2", okc,
        None if okc else (rep.nilpotency_class,), "report"))


def _q_odd_collapse(b: Battery):
    ana = b.ana
    if ana.image_analysis is None:
        ok = True  # abelian: Delta^q(G) is literally Delta^q(G^ab)
        b.results.append(PropertyResult(
            "q_odd_delta_collapse", ok, None, "abelian"))
        return
    own = int(ana.delta_members.size)
    img = int(ana.image_analysis.delta_members.size)
    ok = own == img
    b.results.append(PropertyResult(
        "q_odd_delta_collapse", ok, None if ok else (own, img), "orders"))


def _masked_centrality(b: Battery, check, pat, tup_arrays, mode, mask):
    ok = np.ones(len(tup_arrays[0]), dtype=bool)
    xt = b.action.xtable
    ncols = 2 * b.ana.pres.ngens
    for col in range(ncols):
        pos = np.zeros(len(ok), dtype=np.int64)
        pos = xt[pos, col ^ 1]
        for arr in pat.fwd:
            pos = xt[pos, arr]
        pos = xt[pos, col]
        for arr in pat.bwd:
            pos = xt[pos, arr]
        ok &= pos == 0
    b.record(check, ok | ~mask, tup_arrays, mode)


def _power_vec(b: Battery, elems, n):
    out = np.full_like(elems, b.g.identity)
    t = b.mul_t
    base = elems
    k = n
    while k:
        if k & 1:
            out = t[out, base]
        base = t[base, base]
        k >>= 1
    return out


def h2_cyclic_oracle(n, q):
    """Independent oracle for the cohomology slot of cyclic groups:
    Z_q / n Z_q, i.e. C_gcd(n, q) for q >= 1; trivial at q = 0 (the slot
    degenerates to the Schur multiplier of a cyclic group)."""
    if q == 0:
        return AbelianGroupStructure()
    return AbelianGroupStructure.from_orders([gcd(n, q)])


def verify_direct_product(a_group, b_group, q, config=None, _cache=None):
    """Check the direct-product decomposition on G = A x B.

    Returns a dict with the three-factor order identity and the middle
    tensor-factor comparison against the abelian tensor product.
    """
    from .abelian import abelian_tensor
    from .analyze import analyze
    from .groups import direct_product

    config = config or RunConfig()
    g = direct_product(a_group, b_group)
    ana = analyze(g, q, config, _cache)
    emb_a, emb_b = g.factor_embeddings
    orbit = ana.orbit

    def upsilon_inside(emb, factor):
        gens = []
        for n1 in emb:
            if n1 == g.identity:
                continue
            for n2 in emb:
                if n2 == g.identity:
                    continue
                gens.append(ana.comm_index(n1, n2))
        if ana.q >= 1:
            gens += [ana.hat_index(n1) for n1 in emb if n1 != g.identity]
        members, _ = orbit.subgroup_closure(orbit.reduce_gens(gens))
        return members

    ups_a = upsilon_inside(emb_a, a_group)
    ups_b = upsilon_inside(emb_b, b_group)
    mid_gens = []
    one_side = []
    for n1 in emb_a:
        if n1 == g.identity:
            continue
        for n2 in emb_b:
            if n2 == g.identity:
                continue
            mid_gens.append(ana.comm_index(n1, n2))
            one_side.append(mid_gens[-1])
            mid_gens.append(ana.comm_index(n2, n1))
    mid_members, _ = orbit.subgroup_closure(orbit.reduce_gens(mid_gens))
    side_members, _ = orbit.subgroup_closure(orbit.reduce_gens(one_side))

    def reduced(group_, qq):
        sub = group_.power_commutator_subgroup(qq)
        if len(sub) == 1:
            return group_.abelian_invariants()
        quo, _ = group_.quotient(sub)
        return quo.abelian_invariants()

    nbar = reduced(a_group, q)
    hbar = reduced(b_group, q)
    predicted_mid = abelian_tensor(nbar, hbar, q)

    product_order = int(ups_a.size) * int(mid_members.size) * int(ups_b.size)
    analysis_a = analyze(a_group, q, config, _cache)
    analysis_b = analyze(b_group, q, config, _cache)
    return {
        "group": g.name,
        "q": q,
        "upsilon_order": ana.upsilon_order,
        "factor_orders": (int(ups_a.size), int(mid_members.size),
                          int(ups_b.size)),
        "three_factor_identity": product_order == ana.upsilon_order,
        "factor_matches_standalone": (
            int(ups_a.size) == analysis_a.upsilon_order
            and int(ups_b.size) == analysis_b.upsilon_order),
        "one_side_order": int(side_members.size),
        "one_side_matches_tensor":
            int(side_members.size) == predicted_mid.order,
        "predicted_tensor": predicted_mid,
    }
