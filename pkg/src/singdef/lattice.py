"""Homology classes over the extended dot diagram of a cyclic quotient.

The resolution chain [b_1..b_r] of n/a lays out dots in rows, b_i - 1 per
row, each row starting under the last dot of the previous one, plus one
extra dot diagonally past the last row. Read by rows the dots give the
exceptional classes; read by columns they follow the dual chain
[a_1..a_s] and carry the curvetta classes. Everything is exact integer
bookkeeping over the basis (l_inf; e_1..e_N) with l_inf^2 = +1,
e_d^2 = -1, mixed products 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

from .hjcf import hj_expand


@dataclass(frozen=True)
class HClass:
    """l_coeff * l_inf plus a finitely supported sum of e_d's."""

    l_coeff: int = 0
    e_coeffs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        merged: dict[int, int] = {}
        for d, c in self.e_coeffs:
            merged[int(d)] = merged.get(int(d), 0) + int(c)
        object.__setattr__(self, "l_coeff", int(self.l_coeff))
        object.__setattr__(
            self, "e_coeffs", tuple(sorted((d, c) for d, c in merged.items() if c))
        )

    def coeff(self, d: int) -> int:
        return dict(self.e_coeffs).get(d, 0)

    def support(self) -> frozenset[int]:
        return frozenset(d for d, _ in self.e_coeffs)

    def __add__(self, other: "HClass") -> "HClass":
        return HClass(self.l_coeff + other.l_coeff, self.e_coeffs + other.e_coeffs)

    def __neg__(self) -> "HClass":
        return HClass(-self.l_coeff, tuple((d, -c) for d, c in self.e_coeffs))

    def __sub__(self, other: "HClass") -> "HClass":
        return self + (-other)

    def __rmul__(self, k: int) -> "HClass":
        return HClass(k * self.l_coeff, tuple((d, k * c) for d, c in self.e_coeffs))

    def dot(self, other: "HClass") -> int:
        mine = dict(self.e_coeffs)
        shared = sum(c * other.coeff(d) for d, c in mine.items())
        return self.l_coeff * other.l_coeff - shared

    def __str__(self) -> str:
        parts = []
        if self.l_coeff:
            parts.append(("" if self.l_coeff == 1 else f"{self.l_coeff}") + "l_inf")
        for d, c in self.e_coeffs:
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else f"{abs(c)}"
            parts.append(f"{sign} {mag}e{d}")
        if not parts:
            return "0"
        out = " ".join(parts)
        return out[2:] if out.startswith("+ ") else out


L_INF = HClass(1)


def basis_e(d: int) -> HClass:
    return HClass(0, ((d, 1),))


@dataclass(frozen=True, eq=False)
class _Diagram:
    chain: tuple[int, ...]
    dual: tuple[int, ...]
    rows: tuple[tuple[int, ...], ...]  # labels by row, extra dot excluded
    cols: tuple[tuple[int, ...], ...]  # labels by original column, top down
    extra: int
    pos: dict  # label -> (row, position) in row reading


@lru_cache(maxsize=None)
def _diagram(n: int, a: int) -> _Diagram:
    chain = hj_expand(n, a)
    dual = hj_expand(n, n - a)
    rows = []
    colmap: dict[int, list[int]] = {}
    pos: dict[int, tuple[int, int]] = {}
    label = 0
    start = 1
    for i, b in enumerate(chain, start=1):
        row = []
        for j in range(b - 1):
            label += 1
            row.append(label)
            pos[label] = (i, j)
            colmap.setdefault(start + j, []).append(label)
        rows.append(tuple(row))
        start += b - 2
    extra = label + 1
    pos[extra] = (len(chain), chain[-1] - 1)
    s = len(dual)
    # column census must reproduce the dual chain
    assert sorted(colmap) == list(range(1, s + 1))
    cols = tuple(tuple(colmap[c]) for c in range(1, s + 1))
    assert all(len(cols[j]) == dual[j] - 1 for j in range(s))
    return _Diagram(chain, dual, tuple(rows), cols, extra, pos)


def dot_labels(n: int, a: int):
    """(rows, cols, extra) label layout of the extended dot diagram."""
    D = _diagram(n, a)
    return D.rows, D.cols, D.extra


def class_E(n: int, a: int, i: int) -> HClass:
    """Exceptional class of the i-th curve of the resolution chain."""
    D = _diagram(n, a)
    r = len(D.chain)
    if not 1 <= i <= r:
        raise ValueError(f"i must be in 1..{r}")
    row = D.rows[i - 1]
    nxt = D.extra if i == r else D.rows[i][0]
    coeffs = [(row[0], 1)] + [(d, -1) for d in row[1:]] + [(nxt, -1)]
    return HClass(0, tuple(coeffs))


def class_C(n: int, a: int, i: int, j: int) -> HClass:
    """Curvetta class attached to dot (i, j), j >= 1 in row reading.

    Degree n_{i,j} is the least one whose class has nonnegative square;
    any positive choice satisfies the comparison identity, and nothing
    downstream reads the l_inf part.
    """
    D = _diagram(n, a)
    r = len(D.chain)
    if not 1 <= i <= r:
        raise ValueError(f"i must be in 1..{r}")
    jmax = D.chain[i - 1] - (1 if i == r else 2)
    if not 1 <= j <= jmax:
        raise ValueError(f"j must be in 1..{jmax} for row {i}")
    if i == r and j == D.chain[-1] - 1:
        dot = D.extra
    else:
        dot = D.rows[i - 1][j]
    base = [D.rows[t][0] for t in range(i)] + [dot]
    npts = len(base)
    deg = isqrt(npts) if isqrt(npts) ** 2 == npts else isqrt(npts) + 1
    return HClass(deg, tuple((d, -1) for d in base))


def class_A(n: int, a: int, j: int) -> HClass:
    """Column-reading class of the j-th curve in the dual presentation."""
    D = _diagram(n, a)
    s = len(D.dual)
    if not 1 <= j <= s:
        raise ValueError(f"j must be in 1..{s}")
    col = D.cols[j - 1]
    if j == 1:
        l_part, coeffs = 1, [(d, -1) for d in col]
    else:
        l_part, coeffs = 0, [(col[0], 1)] + [(d, -1) for d in col[1:]]
    tail = D.extra if j == s else D.cols[j][0]
    return HClass(l_part, tuple(coeffs + [(tail, -1)]))


def curvetta_classes(n: int, a: int) -> tuple[HClass, ...]:
    """All curvetta classes in column order, the extra-dot one last.

    Every column past the first has exactly one non-leading dot, its top;
    these dots plus the extra dot carry the s curvettas.
    """
    D = _diagram(n, a)
    out = []
    for c in range(2, len(D.dual) + 1):
        i, j = D.pos[D.cols[c - 1][0]]
        out.append(class_C(n, a, i, j))
    out.append(class_C(n, a, len(D.chain), D.chain[-1] - 1))
    return tuple(out)


def decorations(n: int, a: int) -> tuple[int, ...]:
    """l decorations: base-point counts of the curvetta classes."""
    return tuple(len(C.support()) for C in curvetta_classes(n, a))


def shared_base_points(n: int, a: int) -> tuple[tuple[int, ...], ...]:
    """Pairwise counts of common base dots, zero diagonal."""
    sups = [C.support() for C in curvetta_classes(n, a)]
    s = len(sups)
    return tuple(
        tuple(0 if i == k else len(sups[i] & sups[k]) for k in range(s))
        for i in range(s)
    )


def verify_c_equals_sum_a(n: int, a: int):
    """Check each curvetta class equals n_j l_inf + A_1 + ... + A_j.

    Returns (True, witnesses) with the nonnegative n_j list, or
    (False, j) at the first failing curvetta (1-based).
    """
    acc = HClass()
    witnesses = []
    for j, C in enumerate(curvetta_classes(n, a), start=1):
        acc = acc + class_A(n, a, j)
        diff = C - acc
        if diff.e_coeffs or diff.l_coeff < 0:
            return (False, j)
        witnesses.append(diff.l_coeff)
    return (True, tuple(witnesses))
