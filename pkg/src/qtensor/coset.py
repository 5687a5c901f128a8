"""Todd-Coxeter coset enumeration (HLT strategy with row filling).

The scanning kernel is resumable and array-based so it can run either as
plain Python or JIT-compiled by numba; both paths execute the same source.

Enumeration may be driven by a marked core subset of the relators (see
FpPresentation.core_mask): the core has the same normal closure as the full
set, the completed table is verified against the remaining relators by a
vectorized sweep, and any violated relator is promoted into the driving set
and the enumeration restarted.  For tables too large for a full sweep the
non-core check degrades to a seeded sample (recorded in stats).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from . import words as W
from .errors import EnumerationLimitError, VerificationError
from .presentation import FpPresentation

_STATUS_DONE = 0
_STATUS_GROW = 1
_STATUS_LIMIT = 2


def _hlt_kernel(table, p, queue, rel_steps, rel_off, sub_steps, sub_off,
                state, fill):
    """Process cosets until done, out of space, or at the coset limit.

    state: int64[3] = (nalloc, resume_coset, max_cosets); updated in place.
    fill=0 runs a lookahead pass: deductions and coincidences only, no new
    cosets.  Returns _STATUS_DONE / _STATUS_GROW / _STATUS_LIMIT.
    """
    w = table.shape[1]
    cap = table.shape[0]
    nrel = rel_off.shape[0] - 1
    nsub = sub_off.shape[0] - 1

    def rep(c):
        r = c
        while p[r] != r:
            r = p[r]
        while p[c] != c:
            nxt = p[c]
            p[c] = r
            c = nxt
        return r

    def coincidence(a, b):
        a = rep(a)
        b = rep(b)
        if a == b:
            return
        if a > b:
            a, b = b, a
        p[b] = a
        queue[0] = b
        head = 0
        tail = 1
        while head < tail:
            dead = queue[head]
            head += 1
            for col in range(w):
                delta = table[dead, col]
                if delta < 0:
                    continue
                if table[delta, col ^ 1] == dead:
                    table[delta, col ^ 1] = -1
                mu = rep(dead)
                nu = rep(delta)
                tmu = table[mu, col]
                if tmu >= 0:
                    x = rep(tmu)
                    y = nu
                    if x != y:
                        if x > y:
                            x, y = y, x
                        p[y] = x
                        queue[tail] = y
                        tail += 1
                else:
                    tnu = table[nu, col ^ 1]
                    if tnu >= 0:
                        x = rep(tnu)
                        y = mu
                        if x != y:
                            if x > y:
                                x, y = y, x
                            p[y] = x
                            queue[tail] = y
                            tail += 1
                    else:
                        table[mu, col] = nu
                        table[nu, col ^ 1] = mu

    def scan_and_fill(alpha, lo, hi):
        # returns 0 ok, 1 need space, 2 at limit
        f = alpha
        i = lo
        b = alpha
        j = hi - 1
        while True:
            while i <= j:
                nf = table[f, rel_steps[i]]
                if nf < 0:
                    break
                f = nf
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return 0
            while j >= i:
                nb = table[b, rel_steps[j] ^ 1]
                if nb < 0:
                    break
                b = nb
                j -= 1
            if j < i:
                coincidence(f, b)
                return 0
            if j == i:
                col = rel_steps[i]
                table[f, col] = b
                table[b, col ^ 1] = f
                return 0
            if fill == 0:
                return 0  # lookahead: no definitions
            # gap of length >= 2: define a new coset
            n = state[0]
            if n >= cap:
                return 1 if cap < state[2] else 2
            col = rel_steps[i]
            table[f, col] = n
            table[n, col ^ 1] = f
            p[n] = n
            state[0] = n + 1
            f = n
            i += 1

    # subgroup generator words close at coset 0 (idempotent on resume)
    if fill == 1:
        for s in range(nsub):
            res = scan_and_fill(0, sub_off[s], sub_off[s + 1])
            if res != 0:
                return res

    alpha = state[1]
    while alpha < state[0]:
        if p[alpha] != alpha:
            alpha += 1
            continue
        died = False
        for r in range(nrel):
            res = scan_and_fill(alpha, rel_off[r], rel_off[r + 1])
            if res != 0:
                state[1] = alpha
                return res
            if p[alpha] != alpha:
                died = True
                break
        if fill == 1 and not died:
            for col in range(w):
                if table[alpha, col] < 0:
                    n = state[0]
                    if n >= cap:
                        state[1] = alpha
                        return 1 if cap < state[2] else 2
                    table[alpha, col] = n
                    table[n, col ^ 1] = alpha
                    p[n] = n
                    state[0] = n + 1
        alpha += 1
    state[1] = alpha
    return 0


_JITTED = None


def _get_kernel(use_numba=True):
    global _JITTED
    if not use_numba or os.environ.get("QTENSOR_NO_NUMBA"):
        return _hlt_kernel
    if _JITTED is None:
        try:
            import numba
            _JITTED = numba.njit(cache=True)(_hlt_kernel)
        except ImportError:  # pragma: no cover
            _JITTED = _hlt_kernel
    return _JITTED


@dataclass
class CosetTable:
    """A complete standardized coset table; table[c, 2g] is c * gen_g and
    table[c, 2g+1] is c * gen_g^-1."""

    ncosets: int
    ngens: int
    table: np.ndarray
    status: str = "complete"
    stats: dict = field(default_factory=dict)

    def to_csv(self):
        head = ["coset"]
        for g in range(self.ngens):
            head += [f"g{g}", f"g{g}^-1"]
        lines = [",".join(head)]
        for c in range(self.ncosets):
            lines.append(",".join(
                [str(c)] + [str(int(x)) for x in self.table[c]]))
        return "\n".join(lines) + "\n"

    def column(self, gen_id, inverse=False):
        """Permutation of the coset set induced by one generator."""
        return self.table[:, 2 * gen_id + (1 if inverse else 0)].copy()


def _resolve(p):
    """Union-find closure: map every index to its class representative."""
    reps = p.copy()
    while True:
        new = reps[reps]
        if np.array_equal(new, reps):
            return reps
        reps = new


def _compact(table, p, nalloc, resume):
    """Renumber away dead cosets, preserving index order (so the processed
    prefix stays a prefix).  Returns (table, p, nlive, new_resume)."""
    cap, w = table.shape
    reps = _resolve(p[:nalloc])
    live = np.nonzero(reps == np.arange(nalloc, dtype=np.int32))[0]
    label = -np.ones(nalloc, dtype=np.int64)
    label[live] = np.arange(live.size)
    rows = table[live]
    mapped = np.where(rows < 0, np.int64(-1), label[reps[np.maximum(rows, 0)]])
    out = np.full((cap, w), -1, dtype=np.int32)
    out[:live.size] = mapped.astype(np.int32)
    newp = np.arange(cap, dtype=np.int32)
    new_resume = int(np.searchsorted(live, resume))
    return out, newp, int(live.size), new_resume


def _flatten(wordlist):
    steps = []
    offs = [0]
    for word in wordlist:
        steps.extend(W.flatten_steps(word))
        offs.append(len(steps))
    return (np.asarray(steps, dtype=np.int32),
            np.asarray(offs, dtype=np.int32))


def _standardize(table):
    """Canonical BFS relabeling from coset 0 in column order."""
    n, w = table.shape
    label = -np.ones(n, dtype=np.int64)
    order = np.empty(n, dtype=np.int64)
    label[0] = 0
    order[0] = 0
    count = 1
    head = 0
    while head < count:
        c = order[head]
        head += 1
        for col in range(w):
            d = table[c, col]
            if label[d] < 0:
                label[d] = count
                order[count] = d
                count += 1
    assert count == n, "table is not transitive from coset 0"
    out = np.empty_like(table)
    out[label] = label[table]
    return out


def trace_all(table, word):
    """Vectorized trace of a word from every coset; returns endpoint array."""
    pos = np.arange(table.shape[0], dtype=np.int64)
    for col in W.flatten_steps(word):
        pos = table[pos, col]
    return pos


def _verify(table, relators, core_mask, subgroup, budget, sample_size, seed):
    """Check relator closure on the final table.

    Core relators (the driving set) and all subgroup words are always
    verified in full.  Non-core relators are verified in full when the
    letters x cosets product fits the budget, else on a seeded coset
    sample.  Returns (mode, violated_indices).
    """
    n = table.shape[0]
    ident = np.arange(n, dtype=np.int64)
    violated = []
    noncore_letters = sum(
        W.word_length(r) for r, c in zip(relators, core_mask) if not c)
    full = noncore_letters * n <= budget
    if full:
        idx = ident
    else:
        rng = np.random.default_rng(seed)
        k = min(n, sample_size)
        idx = np.unique(np.concatenate(
            [np.arange(min(n, 64)), rng.integers(0, n, size=k)]))
    for i, (rel, core) in enumerate(zip(relators, core_mask)):
        pos = ident if core or full else idx
        start = pos
        for col in W.flatten_steps(rel):
            pos = table[pos, col]
        if not np.array_equal(pos, start):
            violated.append(i)
    for word in subgroup:
        pos = np.zeros(1, dtype=np.int64)
        for col in W.flatten_steps(word):
            pos = table[pos, col]
        if pos[0] != 0:
            raise VerificationError("subgroup word does not fix coset 0")
    return ("full" if full else f"sampled({idx.size})"), violated


def todd_coxeter(pres: FpPresentation, subgroup=(), max_cosets=2_000_000,
                 use_core=True, use_numba=True,
                 verify_budget=2_000_000_000, sample_size=2048, seed=0,
                 raise_on_limit=True) -> CosetTable:
    """Enumerate the cosets of <subgroup> in the presented group.

    Enumerating over the empty subgroup yields the regular representation,
    so the coset count equals the group order.  Raises
    EnumerationLimitError when max_cosets is exceeded (never silently
    wrong).
    """
    if pres.ngens == 0:
        return CosetTable(1, 0, np.zeros((1, 0), dtype=np.int32),
                          stats={"verified": "trivial", "defined": 1})
    subgroup = tuple(W.free_reduce(w) for w in subgroup)
    driving = list(pres.core_mask) if use_core else [True] * len(pres.relators)
    kernel = _get_kernel(use_numba)
    w = 2 * pres.ngens
    attempts = 0
    while True:
        attempts += 1
        drive_idx = [i for i, c in enumerate(driving) if c]
        rel_steps, rel_off = _flatten([pres.relators[i] for i in drive_idx])
        sub_steps, sub_off = _flatten(subgroup)
        cap = int(min(max_cosets, 65536))
        table = np.full((cap, w), -1, dtype=np.int32)
        p = np.arange(cap, dtype=np.int32)
        queue = np.empty(cap, dtype=np.int32)
        state = np.array([1, 0, max_cosets], dtype=np.int64)
        defined_total = 1
        lookaheads = 0
        while True:
            before = int(state[0])
            status = kernel(table, p, queue, rel_steps, rel_off,
                            sub_steps, sub_off, state, 1)
            defined_total += int(state[0]) - before
            if status == _STATUS_DONE:
                break
            # out of room: lookahead pass (deductions/coincidences only)
            # over the unprocessed cosets, then compact away dead rows
            lookaheads += 1
            resume = int(state[1])
            state[1] = resume
            kernel(table, p, queue, rel_steps, rel_off,
                   sub_steps, sub_off, state, 0)
            table, p, nlive, resume = _compact(table, p, int(state[0]),
                                               resume)
            state[0] = nlive
            state[1] = resume
            if nlive >= 0.8 * cap:
                if status == _STATUS_LIMIT or cap >= max_cosets:
                    if raise_on_limit:
                        raise EnumerationLimitError(max_cosets)
                    return CosetTable(0, pres.ngens,
                                      np.zeros((0, w), dtype=np.int32),
                                      status="exceeded-limit")
                newcap = int(min(max_cosets, cap * 2))
                grown = np.full((newcap, w), -1, dtype=np.int32)
                grown[:cap] = table
                table = grown
                pg = np.arange(newcap, dtype=np.int32)
                pg[:cap] = p
                p = pg
                cap = newcap
            queue = np.empty(cap, dtype=np.int32)

        nalloc = int(state[0])
        # resolve union-find and compact to live cosets
        reps = _resolve(p[:nalloc])
        live = np.nonzero(reps == np.arange(nalloc, dtype=np.int32))[0]
        label = -np.ones(nalloc, dtype=np.int64)
        label[live] = np.arange(live.size)
        compact = table[live]
        if compact.min() < 0:
            raise AssertionError("incomplete table after enumeration")
        compact = label[reps[compact]].astype(np.int32)
        compact = _standardize(compact)

        mode, violated = _verify(
            compact, pres.relators, [driving[i] for i in range(len(driving))],
            subgroup, verify_budget, sample_size, seed)
        if not violated:
            stats = {
                "defined": defined_total,
                "dead": int(defined_total - live.size),
                "lookaheads": lookaheads,
                "driving_relators": len(drive_idx),
                "total_relators": len(pres.relators),
                "verified": mode,
                "attempts": attempts,
            }
            return CosetTable(int(live.size), pres.ngens, compact,
                              stats=stats)
        # promote violated relators into the driving set and redo
        for i in violated:
            driving[i] = True
        if attempts > 8:
            raise VerificationError(
                "enumeration did not stabilize after promoting relators")
