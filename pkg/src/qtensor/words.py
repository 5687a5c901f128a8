"""Free words over integer generator ids.

A word is a tuple of (generator-id, exponent) letters with nonzero exponents.
Generator ids are small integers; a separate symbol table (kept by callers)
maps them to meaning.  The empty tuple is the identity.
"""

from __future__ import annotations

from typing import Iterable, Tuple

Letter = Tuple[int, int]
WordT = Tuple[Letter, ...]

EMPTY: WordT = ()


def free_reduce(letters: Iterable[Letter]) -> WordT:
    """Freely reduced normal form: adjacent same-generator letters merged,
    zero exponents dropped.  Idempotent and length-nonincreasing."""
    out: list[Letter] = []
    for g, e in letters:
        if e == 0:
            continue
        if out and out[-1][0] == g:
            e += out.pop()[1]
            if e == 0:
                continue
        out.append((g, e))
    return tuple(out)


def inverse(w: Iterable[Letter]) -> WordT:
    return tuple((g, -e) for g, e in reversed(tuple(w)))


def concat(*ws: Iterable[Letter]) -> WordT:
    letters: list[Letter] = []
    for w in ws:
        letters.extend(w)
    return free_reduce(letters)


def power(w: Iterable[Letter], n: int) -> WordT:
    w = tuple(w)
    if n < 0:
        w, n = inverse(w), -n
    return free_reduce(w * n)


def conjugate(w, by) -> WordT:
    """w^by = by^-1 * w * by."""
    return concat(inverse(by), w, by)


def commutator(a, b) -> WordT:
    """[a, b] = a^-1 b^-1 a b (left-normed convention)."""
    return concat(inverse(a), inverse(b), a, b)


def gen(g: int, e: int = 1) -> WordT:
    return ((g, e),) if e else EMPTY


def word_length(w: Iterable[Letter]) -> int:
    """Total letter count with exponents unfolded."""
    return sum(abs(e) for _, e in w)


def flatten_steps(w: Iterable[Letter]) -> list[int]:
    """Unfold a word into single steps 2*g (generator) / 2*g+1 (inverse).

    This is the column encoding used by the coset enumerator.
    """
    steps = []
    for g, e in w:
        col = 2 * g if e > 0 else 2 * g + 1
        steps.extend([col] * abs(e))
    return steps


def hall_witt_check(x, y, z) -> bool:
    """Check the three-variable commutator identity

        [x, y^-1, z]^y [y, z^-1, x]^z [z, x^-1, y]^x = 1

    by free reduction.  It is a law of free groups, so this must return
    True on every input; it doubles as a self-test of the word engine.
    """
    t1 = conjugate(commutator(commutator(x, inverse(y)), z), y)
    t2 = conjugate(commutator(commutator(y, inverse(z)), x), z)
    t3 = conjugate(commutator(commutator(z, inverse(x)), y), x)
    return concat(t1, t2, t3) == EMPTY
