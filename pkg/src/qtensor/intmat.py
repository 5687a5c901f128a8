"""Exact integer matrix reduction: Smith normal form.

Entries are Python ints throughout; intermediate growth is real even on
small matrices, so no fixed-width arithmetic is used anywhere.
"""

from __future__ import annotations

from math import gcd


class IntegerMatrix:
    """Dense row-major integer matrix with arbitrary-precision entries."""

    def __init__(self, rows, cols, entries=None):
        if rows < 0 or cols < 0:
            raise ValueError("negative dimensions")
        self.rows = rows
        self.cols = cols
        if entries is None:
            entries = [0] * (rows * cols)
        entries = [int(x) for x in entries]
        if len(entries) != rows * cols:
            raise ValueError("entry count != rows*cols")
        self.entries = entries

    @classmethod
    def from_rows(cls, rows_data):
        rows = len(rows_data)
        cols = len(rows_data[0]) if rows else 0
        flat = []
        for r in rows_data:
            if len(r) != cols:
                raise ValueError("ragged rows")
            flat.extend(r)
        return cls(rows, cols, flat)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def __setitem__(self, ij, v):
        i, j = ij
        self.entries[i * self.cols + j] = int(v)

    def to_rows(self):
        c = self.cols
        return [self.entries[i * c:(i + 1) * c] for i in range(self.rows)]

    def copy(self):
        return IntegerMatrix(self.rows, self.cols, list(self.entries))

    def __eq__(self, other):
        return (isinstance(other, IntegerMatrix)
                and self.rows == other.rows and self.cols == other.cols
                and self.entries == other.entries)

    def __repr__(self):
        return f"IntegerMatrix({self.to_rows()!r})"


def smith_normal_form(m: IntegerMatrix):
    """Diagonalize by elementary row/column operations.

    Returns (invariants, rank): the nonzero diagonal d_1 | d_2 | ... of the
    Smith form (all positive) and the rank.  Zero diagonal entries are
    reported through the rank deficit, per the divisibility-chain contract.
    """
    a = m.to_rows()
    nr, nc = m.rows, m.cols
    diag = []
    t = 0
    while t < nr and t < nc:
        # find a pivot: nonzero entry in the remaining block
        piv = None
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                v = abs(a[i][j])
                if v and (best is None or v < best):
                    best, piv = v, (i, j)
        if piv is None:
            break
        pi, pj = piv
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        while True:
            # clear column t
            again = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    for j in range(t, nc):
                        a[i][j] -= q * a[t][j]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        again = True
            if again:
                continue
            # clear row t
            for j in range(t + 1, nc):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    for i in range(t, nr):
                        a[i][j] -= q * a[i][t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        again = True
            if not again:
                break
        # enforce divisibility: a[t][t] must divide everything below-right
        d = abs(a[t][t])
        fix = None
        for i in range(t + 1, nr):
            for j in range(t + 1, nc):
                if a[i][j] % d:
                    fix = i
                    break
            if fix is not None:
                break
        if fix is not None:
            # add the offending row to row t and restart this pivot
            for j in range(t, nc):
                a[t][j] += a[fix][j]
            continue
        diag.append(d)
        t += 1
    rank = len(diag)
    for i in range(1, rank):
        if diag[i] % diag[i - 1]:
            raise AssertionError("divisibility chain violated")
    return diag, rank


def abelian_invariants_from_relations(m: IntegerMatrix, ngens):
    """Structure of Z^ngens / (row space of m).

    Returns (torsion, free_rank) with torsion the invariant factors > 1 in
    a divisibility chain.
    """
    if m.cols != ngens:
        raise ValueError("column count must equal generator count")
    diag, rank = smith_normal_form(m)
    torsion = [d for d in diag if d > 1]
    return torsion, ngens - rank
