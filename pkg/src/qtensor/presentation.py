"""Finite presentations of nu^q(G) built from a Cayley-table group.

Generators come in up to three families, one generator per nontrivial
element of G: the plain copy, the phi-copy, and (for q >= 1) the hat
symbols.  The identity element is represented by the empty word, which
keeps relators short and the coset tables small.

Relator families (all instantiated over full element tuples):

  cayley-G / cayley-Gphi   multiplication tables of the two copies
  nu-conj                  conjugation laws tying the copies together,
                           in both the plain and the phi conjugating form
  R1..R6                   the hat relators (empty when q = 0)

Conjugations g^k and powers k^q that appear inside relators are relations
of G, so they are resolved to element indices through the Cayley table at
build time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Tuple

from . import words as W
from .errors import OversizeError
from .groups import FiniteGroup

ROLE_G = "g"
ROLE_PHI = "phi"
ROLE_HAT = "hat"


@dataclass(frozen=True)
class FpPresentation:
    """A finite presentation with per-relator provenance.

    core_mask marks a subset of relators that provably generates the same
    normal closure; enumeration strategies may drive scanning with the core
    and use the rest for verification only.
    """

    ngens: int
    roles: Tuple[Tuple[str, int], ...]
    relators: Tuple[W.WordT, ...]
    provenance: Tuple[str, ...]
    source: Tuple[tuple, ...]
    core_mask: Tuple[bool, ...]
    counts: dict = field(compare=False)
    group_name: str = "G"
    group_order: int = 1
    q: int = 0

    def gen_for(self, role: str, element: int) -> Optional[int]:
        """Generator id of (role, element), or None for the identity."""
        return self._index().get((role, element))

    def _index(self):
        idx = getattr(self, "_role_index", None)
        if idx is None:
            idx = {re: i for i, re in enumerate(self.roles)}
            object.__setattr__(self, "_role_index", idx)
        return idx

    @property
    def hat_elements(self):
        return tuple(e for r, e in self.roles if r == ROLE_HAT)


class _Builder:
    def __init__(self, g: FiniteGroup, q: int):
        self.g = g
        self.q = q
        nontrivial = [e for e in range(g.order) if e != g.identity]
        roles = [(ROLE_G, e) for e in nontrivial]
        roles += [(ROLE_PHI, e) for e in nontrivial]
        if q >= 1:
            roles += [(ROLE_HAT, e) for e in nontrivial]
        self.roles = tuple(roles)
        self.gen_of = {re: i for i, re in enumerate(self.roles)}
        self.relators = []
        self.provenance = []
        self.source = []
        self.core = []
        self.emitted = {}

    def word(self, role, e):
        if e == self.g.identity:
            return W.EMPTY
        return W.gen(self.gen_of[(role, e)])

    def x(self, e):
        return self.word(ROLE_G, e)

    def y(self, e):
        return self.word(ROLE_PHI, e)

    def hat(self, e):
        return self.word(ROLE_HAT, e)

    def emit(self, family, src, word, core):
        self.emitted[family] = self.emitted.get(family, 0) + 1
        self.relators.append(W.free_reduce(word))
        self.provenance.append(family)
        self.source.append(src)
        self.core.append(core)


def build_nu_q(g: FiniteGroup, q: int, generators_only: bool = False,
               max_relators: int = 5_000_000) -> FpPresentation:
    """Presentation of nu^q(G) for a finite group G and q >= 0.

    All relator families are instantiated over full element tuples (the
    relations are quantified over the whole group; restricting the
    conjugating variables to the generating sequence is available as the
    experimental `generators_only` flag, whose output must be checked
    against the full build).

    The returned presentation marks a core subset (full tuple coverage with
    conjugating variables running over the generating sequence) that has
    the same normal closure; see the enumerator.
    """
    if q < 0:
        raise ValueError("q must be >= 0")
    b = _Builder(g, q)
    m = g.order
    expected = 2 * m * m + 2 * m ** 3
    if q >= 1:
        expected += m ** 3 + 5 * m * m
    if expected > max_relators:
        raise OversizeError(
            f"presentation would have {expected} relators (cap {max_relators})")

    gens = set(g.generators)
    elements = range(m)

    # multiplication tables of the two copies
    for fam, w in ((("cayley-G"), b.x), (("cayley-Gphi"), b.y)):
        for a in elements:
            for c in elements:
                rel = W.concat(w(a), w(c), W.inverse(w(g.mul(a, c))))
                b.emit(fam, (a, c), rel, True)

    # [g, h^phi]^k = [g^k, (h^k)^phi] = [g, h^phi]^(k^phi)
    for gg in elements:
        for h in elements:
            base = W.commutator(b.x(gg), b.y(h))
            for k in elements:
                if generators_only and k not in gens:
                    continue
                target = W.inverse(W.commutator(
                    b.x(g.conj(gg, k)), b.y(g.conj(h, k))))
                in_core = k in gens
                b.emit("nu-conj", (gg, h, k, 0),
                       W.concat(W.conjugate(base, b.x(k)), target), in_core)
                b.emit("nu-conj", (gg, h, k, 1),
                       W.concat(W.conjugate(base, b.y(k)), target), in_core)

    if q >= 1:
        # R1/R2: hats are permuted by conjugation in either copy
        for fam, w in (("R1", b.x), ("R2", b.y)):
            for gg in elements:
                if generators_only and gg not in gens:
                    continue
                for k in elements:
                    rel = W.concat(W.inverse(w(gg)), b.hat(k), w(gg),
                                   W.inverse(b.hat(g.conj(k, gg))))
                    b.emit(fam, (gg, k), rel, gg in gens)

        # R3: hat conjugation acts on commutators through k^q
        for gg in elements:
            for h in elements:
                base = W.commutator(b.x(gg), b.y(h))
                for k in elements:
                    if generators_only and k not in gens:
                        continue
                    c = g.power(k, q)
                    rel = W.concat(
                        W.inverse(b.hat(k)), base, b.hat(k),
                        W.inverse(W.commutator(
                            b.x(g.conj(gg, c)), b.y(g.conj(h, c)))))
                    b.emit("R3", (gg, h, k), rel, k in gens)

        # R4: hat of a product, with the correction product built verbatim
        for k in elements:
            for k1 in elements:
                prod = W.EMPTY
                for i in range(1, q):
                    term = W.conjugate(
                        W.commutator(b.x(k), b.y(g.power(k1, -i))),
                        b.x(g.power(k, q - 1 - i)))
                    prod = W.concat(prod, term)
                rel = W.concat(W.inverse(b.hat(k)), b.hat(g.mul(k, k1)),
                               W.inverse(b.hat(k1)), W.inverse(prod))
                b.emit("R4", (k, k1), rel, True)

        # R5: hats commute up to a commutator of q-th powers
        for k in elements:
            for k1 in elements:
                rel = W.concat(
                    W.commutator(b.hat(k), b.hat(k1)),
                    W.inverse(W.commutator(b.x(g.power(k, q)),
                                           b.y(g.power(k1, q)))))
                b.emit("R5", (k, k1), rel, True)

        # R6: hat of a commutator element
        for gg in elements:
            for h in elements:
                rel = W.concat(
                    b.hat(g.comm(gg, h)),
                    W.power(W.commutator(b.x(gg), b.y(h)), -q))
                b.emit("R6", (gg, h), rel, True)

    # expected emission counts are closed forms in |G|
    if not generators_only:
        mm = m * m
        want = {"cayley-G": mm, "cayley-Gphi": mm, "nu-conj": 2 * m ** 3}
        if q >= 1:
            want.update({"R1": mm, "R2": mm, "R3": m ** 3,
                         "R4": mm, "R5": mm, "R6": mm})
        assert b.emitted == want, (b.emitted, want)

    # drop freely-trivial relators, then exact duplicates
    relators, provenance, source, core = [], [], [], []
    seen = {}
    dropped_trivial = dropped_dup = 0
    for rel, fam, src, c in zip(b.relators, b.provenance, b.source, b.core):
        if not rel:
            dropped_trivial += 1
            continue
        k = rel
        if k in seen:
            dropped_dup += 1
            if c and not core[seen[k]]:
                core[seen[k]] = True  # keep core status on the survivor
            continue
        seen[k] = len(relators)
        relators.append(rel)
        provenance.append(fam)
        source.append(src)
        core.append(c)

    counts = {
        "emitted": dict(b.emitted),
        "dropped_trivial": dropped_trivial,
        "dropped_duplicate": dropped_dup,
        "kept": len(relators),
    }
    pres = FpPresentation(
        ngens=len(b.roles), roles=b.roles, relators=tuple(relators),
        provenance=tuple(provenance), source=tuple(source),
        core_mask=tuple(core), counts=counts,
        group_name=g.name, group_order=g.order, q=q)
    verify_evaluation_map(pres, g)
    return pres


def verify_evaluation_map(pres: FpPresentation, g: FiniteGroup):
    """Check that every relator evaluates to the identity of G under the
    map sending both copies to G and each hat symbol to the q-th power.

    This is the mechanical witness that the presentation admits the
    evaluation epimorphism onto G.
    """
    q = pres.q
    image = {}
    for i, (role, e) in enumerate(pres.roles):
        image[i] = g.power(e, q) if role == ROLE_HAT else e
    for rel, fam, src in zip(pres.relators, pres.provenance, pres.source):
        acc = g.identity
        for gen_id, exp in rel:
            acc = g.mul(acc, g.power(image[gen_id], exp))
        if acc != g.identity:
            raise AssertionError(
                f"relator {fam}{src} does not evaluate to 1 in {g.name}")


# -- serialization -----------------------------------------------------------


def export_presentation(pres: FpPresentation, fmt: str) -> str:
    """Deterministic serialization; the gap format is a valid F/relators
    expression for external cross-checks."""
    if fmt == "gap":
        return _export_gap(pres)
    if fmt == "json":
        return _export_json(pres)
    if fmt == "text":
        return _export_text(pres)
    raise ValueError(f"unknown format {fmt!r}")


def _gap_word(rel):
    parts = []
    for g, e in rel:
        parts.append(f"F.{g + 1}" if e == 1 else f"F.{g + 1}^{e}")
    return "*".join(parts)


def _export_gap(pres):
    rels = ", ".join(_gap_word(r) for r in pres.relators)
    body = f"[ {rels} ]" if rels else "[]"
    return f"F := FreeGroup({pres.ngens});; G := F / {body};;"


_ROLE_PREFIX = {ROLE_G: "g", ROLE_PHI: "f", ROLE_HAT: "h"}


def _gen_name(pres, gid):
    role, e = pres.roles[gid]
    return f"{_ROLE_PREFIX[role]}{e}"


def _export_text(pres):
    lines = [f"presentation of nu^{pres.q}({pres.group_name})",
             "generators: " + ", ".join(
                 _gen_name(pres, i) for i in range(pres.ngens))]
    for rel, fam in zip(pres.relators, pres.provenance):
        w = "*".join(
            _gen_name(pres, g) + (f"^{e}" if e != 1 else "")
            for g, e in rel)
        lines.append(f"  [{fam}] {w}")
    return "\n".join(lines) + "\n"


def _export_json(pres):
    doc = {
        "schema": 1,
        "q": pres.q,
        "group": pres.group_name,
        "group_order": pres.group_order,
        "generators": [{"role": r, "element": e} for r, e in pres.roles],
        "relators": [[[g, e] for g, e in rel] for rel in pres.relators],
        "provenance": list(pres.provenance),
        "counts": pres.counts,
    }
    return json.dumps(doc, indent=None, separators=(",", ":"))


def presentation_from_json(text: str) -> FpPresentation:
    doc = json.loads(text)
    roles = tuple((d["role"], d["element"]) for d in doc["generators"])
    relators = tuple(tuple((g, e) for g, e in rel) for rel in doc["relators"])
    prov = tuple(doc.get("provenance") or [""] * len(relators))
    return FpPresentation(
        ngens=len(roles), roles=roles, relators=relators, provenance=prov,
        source=tuple(() for _ in relators),
        core_mask=tuple(True for _ in relators),
        counts=doc.get("counts", {}),
        group_name=doc.get("group", "G"),
        group_order=doc.get("group_order", 1),
        q=doc.get("q", 0))
