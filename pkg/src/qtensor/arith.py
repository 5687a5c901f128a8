"""Elementary number-theoretic helpers: factorization, Moebius, Witt ranks."""

from math import comb, gcd  # noqa: F401  (re-exported for neighbours)


def factorint(n):
    """Prime factorization of n >= 1 as {prime: exponent}."""
    if n < 1:
        raise ValueError("n must be positive")
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n):
    """Sorted list of positive divisors of n >= 1."""
    divs = [1]
    for p, e in factorint(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def mobius(n):
    """Moebius function: 0 on non-squarefree n, else (-1)^(#prime factors)."""
    f = factorint(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def witt_rank(n, r):
    """Rank M_n(r) of the r-th lower-central factor of a rank-n free group.

    M_n(r) = (1/r) * sum_{d | r} mu(d) n^(r/d); the sum is always divisible
    by r, so the result is integer-exact.
    """
    if n < 1 or r < 1:
        raise ValueError("witt_rank requires n >= 1 and r >= 1")
    total = sum(mobius(d) * n ** (r // d) for d in divisors(r))
    q, rem = divmod(total, r)
    if rem:
        raise AssertionError(f"Moebius sum {total} not divisible by {r}")
    return q
