"""Hirzebruch-Jung continued fractions and zero continued fractions.

Chains are tuples of integers. A chain [b1..br] encodes the value
b1 - 1/(b2 - 1/(...)); for coprime n > a >= 1 the expansion with all
entries >= 2 is unique and encodes the resolution chain of the cyclic
quotient singularity of type n/a. Chains with entries 1 or 0 appear as
intermediate states of blow-up/blow-down calculus and as zero continued
fractions.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

INFINITY = float("inf")


def _as_chain(chain) -> tuple[int, ...]:
    c = tuple(chain)
    if not all(isinstance(b, int) for b in c):
        raise TypeError("chain entries must be integers")
    return c


def hj_expand(n: int, a: int) -> tuple[int, ...]:
    """Expansion of n/a with all entries >= 2, for coprime 0 < a < n."""
    if not (isinstance(n, int) and isinstance(a, int)):
        raise TypeError("n and a must be integers")
    if not 0 < a < n:
        raise ValueError(f"need 0 < a < n, got {n}/{a}")
    if gcd(n, a) != 1:
        raise ValueError(f"{n} and {a} are not coprime")
    out = []
    while a > 0:
        b = -(-n // a)  # ceil(n/a)
        out.append(b)
        n, a = a, b * a - n
    return tuple(out)


def hj_eval_pair(chain) -> tuple[int, int]:
    """Projective value (p, q) of a chain, q = 0 meaning infinity.

    Computed right to left by (p, q) <- (b*p - q, p) from (1, 0), so p is
    the continuant of the whole chain and q the continuant of its tail.
    """
    p, q = 1, 0
    for b in reversed(_as_chain(chain)):
        p, q = b * p - q, p
    return p, q


def hj_eval(chain):
    """Value of a chain as a Fraction, or INFINITY for the empty tail."""
    p, q = hj_eval_pair(chain)
    if q == 0:
        return INFINITY
    return Fraction(p, q)


def dual(n: int, a: int) -> tuple[int, int]:
    """The dual type (n, n-a); its chain describes the same link reversed."""
    if not 0 < a < n or gcd(n, a) != 1:
        raise ValueError(f"invalid type {n}/{a}")
    return n, n - a


def blow_up(chain, position: int) -> tuple[int, ...]:
    """Insert a 1 at `position`, incrementing the adjacent entries."""
    c = list(_as_chain(chain))
    if not 0 <= position <= len(c):
        raise ValueError(f"position {position} out of range for length {len(c)}")
    if position > 0:
        c[position - 1] += 1
    if position < len(c):
        c[position] += 1
    return tuple(c[:position] + [1] + c[position:])


def blow_down(chain) -> tuple[int, ...]:
    """Remove the leftmost 1, decrementing its neighbors.

    [1] contracts to the empty chain; a lone [0] left over from contracting
    a zero-fraction pair is also treated as fully blown down.
    """
    c = list(_as_chain(chain))
    try:
        i = c.index(1)
    except ValueError:
        raise ValueError("chain has no entry 1 to blow down") from None
    if i > 0:
        c[i - 1] -= 1
    if i + 1 < len(c):
        c[i + 1] -= 1
    out = c[:i] + c[i + 1 :]
    if out == [0]:
        return ()
    return tuple(out)


def window_continuants(chain) -> list[list[int]]:
    """d[i][j] = determinant of the tridiagonal window chain[i..j] (unit
    off-diagonal), via d(i,j) = c_j*d(i,j-1) - d(i,j-2)."""
    c = _as_chain(chain)
    e = len(c)
    d = [[0] * e for _ in range(e)]
    for i in range(e):
        prev2, prev1 = 1, c[i]
        d[i][i] = prev1
        for j in range(i + 1, e):
            prev2, prev1 = prev1, c[j] * prev1 - prev2
            d[i][j] = prev1
    return d

def is_admissible(chain) -> bool:
    """True iff the associated tridiagonal form is positive semidefinite.

    For symmetric tridiagonal matrices with unit off-diagonal all principal
    minors factor through contiguous windows, so PSD is equivalent to every
    window continuant being >= 0; the rank bound (>= length - 1) is then
    automatic because the off-diagonal never vanishes.
    """
    c = _as_chain(chain)
    if any(b < 0 for b in c):
        return False
    d = window_continuants(c)
    e = len(c)
    return all(d[i][j] >= 0 for i in range(e) for j in range(i, e))


def represents_zero(chain) -> bool:
    """True iff the chain's value is 0 (full continuant vanishes)."""
    p, q = hj_eval_pair(chain)
    return p == 0 and q != 0


def zero_fractions(e: int) -> frozenset[tuple[int, ...]]:
    """All admissible zero continued fractions of length e.

    Generated as the blow-up closure of (1, 1); the count is the Catalan
    number C(e-1). Length 1 returns the empty set: the lone zero chain [0]
    carries no deformation data and is excluded by convention.
    """
    if e < 1:
        raise ValueError("length must be positive")
    if e == 1:
        return frozenset()
    cur = {(1, 1)}
    for _ in range(e - 2):
        cur = {blow_up(k, p) for k in cur for p in range(len(k) + 1)}
    return frozenset(cur)


def k_of_x(n: int, a: int) -> tuple[tuple[int, ...], ...]:
    """Admissible zero chains k with k_i <= a_i, a = dual chain of (n, a).

    Search over prefixes keeps the leading continuants strictly positive;
    together with a vanishing full continuant that already forces positive
    semidefiniteness, so the final admissibility assert never fires.

    Entries >= 1 is automatic for length >= 2 (a zero entry makes some
    window continuant -1). Length 1 (a = n-1, Du Val) admits exactly the
    trivial zero chain (0,), matching the single deformation component.
    """
    if gcd(n, a) != 1 or not 0 < a < n:
        raise ValueError(f"invalid type {n}/{a}")
    aa = hj_expand(n, n - a)
    e = len(aa)
    if e == 1:
        return ((0,),)
    found: list[tuple[int, ...]] = []

    def rec(i: int, p: int, q: int, prefix: tuple[int, ...]) -> None:
        if i == e - 1:
            # last entry must close the continuant to exactly 0
            if p % q == 0:
                k = p // q
                if 1 <= k <= aa[i]:
                    found.append(prefix + (k,))
            return
        # smallest k keeping the new leading continuant positive
        lo = p // q + 1
        for k in range(max(1, lo), aa[i] + 1):
            rec(i + 1, q, k * q - p, prefix + (k,))

    rec(0, 0, 1, ())
    for k in found:
        assert is_admissible(k), k
    return tuple(sorted(found))
