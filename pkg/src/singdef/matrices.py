"""Combinatorial incidence matrices, homology matrices, and k-sequences.

An incidence matrix has one row per decorated curve and one column per
free point of a deformed picture; entry m_ij is the number of local
branches of curve i through point j. The curve data (delta_i, l_i,
C_i.C_k) pins the solutions down to a finite set which is enumerated
exactly. Canonical form everywhere: columns sorted descending
lexicographically (top row most significant), no zero columns; equality
up to column permutation is equality of canonical forms.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from math import isqrt

from .errors import DimensionMismatch, MissingBranchAssignment, NotInKX
from .hjcf import is_admissible, represents_zero


def _canonical_rows(rows) -> tuple[tuple[int, ...], ...]:
    rows = tuple(tuple(int(x) for x in r) for r in rows)
    if not rows:
        return ()
    if any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("ragged matrix")
    cols = sorted(zip(*rows), reverse=True)
    return tuple(tuple(c[i] for c in cols) for i in range(len(rows)))


def _rows_of(M) -> tuple[tuple[int, ...], ...]:
    if hasattr(M, "rows"):
        return M.rows
    return tuple(tuple(int(x) for x in r) for r in M)


@dataclass(frozen=True)
class DecoratedCurveData:
    """Row data for incidence matrices: (delta_i, l_i) per curve plus the
    symmetric intersection table (diagonal ignored). For weighted
    homogeneous structures `central` and `arms` partition the row indices;
    both stay None for cyclic ones."""

    curves: tuple[tuple[int, int], ...]
    inter: tuple[tuple[int, ...], ...]
    central: tuple[int, ...] | None = None
    arms: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        curves = tuple((int(d), int(l)) for d, l in self.curves)
        inter = tuple(tuple(int(x) for x in row) for row in self.inter)
        object.__setattr__(self, "curves", curves)
        object.__setattr__(self, "inter", inter)
        s = len(curves)
        if len(inter) != s or any(len(r) != s for r in inter):
            raise DimensionMismatch(f"inter must be {s}x{s}, got {len(inter)} rows")
        for i in range(s):
            for k in range(i + 1, s):
                if inter[i][k] != inter[k][i]:
                    raise ValueError("inter must be symmetric")
                if inter[i][k] < 0:
                    raise ValueError("intersections must be nonnegative")
        for d, l in curves:
            if d < 0 or l < 1:
                raise ValueError("need delta >= 0 and l >= 1 per curve")
        if self.central is not None or self.arms is not None:
            central = tuple(int(i) for i in (self.central or ()))
            arms = tuple(tuple(int(i) for i in a) for a in (self.arms or ()))
            object.__setattr__(self, "central", central)
            object.__setattr__(self, "arms", arms)
            claimed = sorted(list(central) + [i for a in arms for i in a])
            if claimed != list(range(s)):
                raise ValueError("central + arms must partition the row indices")

    @property
    def size(self) -> int:
        return len(self.curves)

    @property
    def deltas(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.curves)

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(l for _, l in self.curves)


def _check_matrix(rows) -> tuple[tuple[int, ...], ...]:
    rows = _canonical_rows(rows)
    for r in rows:
        if any(x < 0 for x in r):
            raise ValueError("entries must be nonnegative")
    for col in zip(*rows):
        if not any(col):
            raise ValueError("zero column")
    return rows


@dataclass(frozen=True)
class IncidenceMatrix:
    rows: tuple[tuple[int, ...], ...]
    data: DecoratedCurveData | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "rows", _check_matrix(self.rows))

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def columns(self) -> tuple[tuple[int, ...], ...]:
        return tuple(zip(*self.rows)) if self.rows else ()


@dataclass(frozen=True)
class HomologyMatrix:
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", _check_matrix(self.rows))

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def columns(self) -> tuple[tuple[int, ...], ...]:
        return tuple(zip(*self.rows)) if self.rows else ()


@dataclass(frozen=True)
class KSequence:
    """Admissible zero continued fraction; the k-sequence of a component."""

    entries: tuple[int, ...]

    def __post_init__(self):
        k = tuple(int(x) for x in self.entries)
        object.__setattr__(self, "entries", k)
        if not k:
            raise NotInKX("empty k-sequence")
        if not is_admissible(k) or not represents_zero(k):
            raise NotInKX(f"{list(k)} is not an admissible zero chain")


@dataclass(frozen=True)
class ConstraintReport:
    """validate_incidence result: truthy iff every constraint holds."""

    ok: bool
    lines: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.ok


def validate_incidence(M, data: DecoratedCurveData) -> ConstraintReport:
    """Check the three row/pair constraint families, one report line each."""
    rows = _rows_of(M)
    s = data.size
    if len(rows) != s:
        raise DimensionMismatch(f"matrix has {len(rows)} rows, data has {s}")
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise DimensionMismatch("ragged matrix")
    lines = []
    ok = True
    for i, (d, l) in enumerate(data.curves):
        got_d = sum(m * (m - 1) // 2 for m in rows[i])
        got_l = sum(rows[i])
        for name, got, want in (("delta", got_d, d), ("l", got_l, l)):
            good = got == want
            ok &= good
            lines.append(
                f"row {i + 1} {name}: {got} == {want} {'ok' if good else 'FAIL'}"
            )
    for i in range(s):
        for k in range(i + 1, s):
            got = sum(a * b for a, b in zip(rows[i], rows[k]))
            want = data.inter[i][k]
            good = got == want
            ok &= good
            lines.append(
                f"rows {i + 1}.{k + 1}: {got} == {want} {'ok' if good else 'FAIL'}"
            )
    for j, col in enumerate(zip(*rows)):
        if not any(col):
            ok = False
            lines.append(f"column {j + 1}: zero FAIL")
    if any(x < 0 for r in rows for x in r):
        ok = False
        lines.append("negative entry FAIL")
    return ConstraintReport(ok, tuple(lines))


def _delta_cap(d_rem: int) -> int:
    # largest v with v(v-1)/2 <= d_rem
    return (1 + isqrt(1 + 8 * d_rem)) // 2


def enumerate_incidence(data: DecoratedCurveData, column_bound: int | None = None):
    """All combinatorial incidence matrices for the data, canonical, sorted.

    Rows are placed one at a time; columns are tracked as groups sharing
    the same prefix of already-placed entries, so permutations of equal
    columns are never explored twice. Every row consumes its l, delta, and
    pairwise budgets exactly, which prunes hard; a cheap coverage bound on
    future rows cuts the rest.
    """
    s = data.size
    deltas, lens = data.deltas, data.lengths
    inter = data.inter
    if column_bound is None:
        column_bound = sum(lens)
    results: set[tuple[tuple[int, ...], ...]] = set()

    # the DFS nests one frame per group per row; lift the limit accordingly
    depth_need = s * (column_bound + max(lens) + 8) + 200
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, depth_need))

    def feasible_future(i: int, groups) -> bool:
        # rows > i must cover their pair budgets with rows <= i using at
        # most l_f mass on columns of bounded prefix weight
        for f in range(i + 1, s):
            need = sum(inter[h][f] for h in range(i + 1))
            if need == 0:
                continue
            best = 0
            for prefix, cnt in groups:
                w = sum(prefix)
                if w > best:
                    best = w
            if need > lens[f] * best:
                return False
        return True

    def place_row(i: int, groups, ncols: int):
        if i == s:
            cols = []
            for prefix, cnt in groups:
                if any(prefix):
                    cols.extend([prefix] * cnt)
            rows = tuple(
                tuple(c[r] for c in sorted(cols, reverse=True)) for r in range(s)
            )
            results.add(rows)
            return

        l_i, d_i = lens[i], deltas[i]
        pair = tuple(inter[h][i] for h in range(i))

        # assignment per group: sorted tuple of positive entries (zeros
        # implicit); fresh columns appended after the last group
        def assign(gi: int, l_rem: int, d_rem: int, pair_rem, acc):
            if gi == len(groups):
                if any(pair_rem):
                    return  # fresh columns cannot cover earlier rows
                for parts in fresh_parts(l_rem, d_rem, column_bound - ncols):
                    finish(acc, parts)
                return
            prefix, cnt = groups[gi]
            weights = [(h, prefix[h]) for h in range(i) if prefix[h]]

            def per_group(c_rem: int, vmax: int, l_rem, d_rem, pair_rem, vals):
                assign(gi + 1, l_rem, d_rem, pair_rem, acc + [vals])
                if c_rem == 0:
                    return
                cap = min(vmax, l_rem, _delta_cap(d_rem))
                for h, w in weights:
                    cap = min(cap, pair_rem[h] // w)
                for v in range(cap, 0, -1):
                    npair = list(pair_rem)
                    for h, w in weights:
                        npair[h] -= w * v
                    per_group(
                        c_rem - 1,
                        v,
                        l_rem - v,
                        d_rem - v * (v - 1) // 2,
                        tuple(npair),
                        vals + (v,),
                    )

            per_group(cnt, l_i, l_rem, d_rem, pair_rem, ())

        def fresh_parts(l_rem: int, d_rem: int, slots: int):
            if l_rem == 0:
                if d_rem == 0:
                    yield ()
                return
            if slots <= 0:
                return
            vmax = min(l_rem, _delta_cap(d_rem))
            for v in range(vmax, 0, -1):
                dd = v * (v - 1) // 2
                for rest in fresh_parts(l_rem - v, d_rem - dd, slots - 1):
                    if not rest or rest[0] <= v:
                        yield (v,) + rest

        def finish(acc, parts):
            nxt = []
            added = 0
            for (prefix, cnt), vals in zip(groups, acc):
                leftover = cnt - len(vals)
                by_val: dict[int, int] = {}
                for v in vals:
                    by_val[v] = by_val.get(v, 0) + 1
                if leftover:
                    by_val[0] = leftover
                for v, c in sorted(by_val.items(), reverse=True):
                    nxt.append((prefix + (v,), c))
            zero_prefix = (0,) * i
            by_val = {}
            for v in parts:
                by_val[v] = by_val.get(v, 0) + 1
            for v, c in sorted(by_val.items(), reverse=True):
                nxt.append((zero_prefix + (v,), c))
                added += c
            if feasible_future(i, nxt):
                place_row(i + 1, nxt, ncols + added)

        assign(0, l_i, d_i, pair, [])

    try:
        place_row(0, [], 0)
    finally:
        sys.setrecursionlimit(old_limit)
    out = [IncidenceMatrix(rows, data) for rows in results]
    out.sort(key=lambda m: (-m.n_cols, m.rows))
    return tuple(out)


def difference(M) -> tuple[tuple[int, ...], ...]:
    """Row 1 unchanged, row i replaced by row i minus row i-1."""
    rows = _rows_of(M)
    out = [rows[0]] if rows else []
    for prev, cur in zip(rows, rows[1:]):
        out.append(tuple(c - p for p, c in zip(prev, cur)))
    return tuple(out)


def positive_part(M) -> tuple[tuple[int, ...], ...]:
    """Drop columns containing a negative entry, then zero columns."""
    rows = _rows_of(M)
    if not rows:
        return ()
    cols = [c for c in zip(*rows) if min(c) >= 0 and any(c)]
    return tuple(tuple(c[i] for c in cols) for i in range(len(rows)))


def phi_ih_cyclic(M) -> HomologyMatrix:
    """Incidence to homology for cyclic quotients: positive difference."""
    return HomologyMatrix(positive_part(difference(M)))


def phi_ih_weighted(M, data: DecoratedCurveData) -> HomologyMatrix:
    """Incidence to homology for weighted homogeneous structures.

    Columns meeting a central-curve row are deleted together with the
    central rows; the difference is taken per arm, then one global
    positive part.
    """
    if data.arms is None:
        raise MissingBranchAssignment("data carries no central/arm partition")
    rows = _rows_of(M)
    if len(rows) != data.size:
        raise DimensionMismatch(f"matrix has {len(rows)} rows, data {data.size}")
    ncols = len(rows[0]) if rows else 0
    central = data.central or ()
    keep = [j for j in range(ncols) if all(rows[c][j] == 0 for c in central)]
    blocks: list[tuple[int, ...]] = []
    for arm in data.arms:
        sub = [tuple(rows[i][j] for j in keep) for i in arm]
        blocks.extend(difference(sub))
    return HomologyMatrix(positive_part(blocks))


def phi_hk(H, a_chain) -> KSequence:
    """k_i = a_i minus the number of nonzero entries in row i of H."""
    rows = _rows_of(H)
    a = tuple(int(x) for x in a_chain)
    if len(rows) != len(a):
        raise DimensionMismatch(f"{len(rows)} rows against {len(a)} chain entries")
    k = tuple(ai - sum(1 for x in row if x) for ai, row in zip(a, rows))
    if any(ki < 0 or ki > ai for ki, ai in zip(k, a)):
        raise NotInKX(f"k = {list(k)} violates bounds of a = {list(a)}")
    return KSequence(k)


def phi_ik(M, a_chain) -> KSequence:
    """k_i = a_i - d_i with d_i the number of staircase columns at row i
    (zeros strictly above row i, ones from row i to the bottom)."""
    rows = _rows_of(M)
    a = tuple(int(x) for x in a_chain)
    if len(rows) != len(a):
        raise DimensionMismatch(f"{len(rows)} rows against {len(a)} chain entries")
    d = [0] * len(a)
    for col in zip(*rows):
        nz = [p for p, x in enumerate(col) if x]
        if nz and nz == list(range(nz[0], len(a))) and all(col[p] == 1 for p in nz):
            d[nz[0]] += 1
    k = tuple(ai - di for ai, di in zip(a, d))
    if any(ki < 0 or ki > ai for ki, ai in zip(k, a)):
        raise NotInKX(f"k = {list(k)} violates bounds of a = {list(a)}")
    return KSequence(k)


def milnor_number(M) -> int:
    """Second Betti number of the smoothing: columns minus rows."""
    rows = _rows_of(M)
    return (len(rows[0]) if rows else 0) - len(rows)


def to_json(M) -> str:
    doc: dict = {"rows": [list(r) for r in _rows_of(M)]}
    data = getattr(M, "data", None)
    if data is not None:
        doc["curve_data"] = {
            "curves": [list(c) for c in data.curves],
            "inter": [list(r) for r in data.inter],
            "central": None if data.central is None else list(data.central),
            "arms": None if data.arms is None else [list(a) for a in data.arms],
        }
    return json.dumps(doc, sort_keys=True)


def from_json(text: str) -> IncidenceMatrix:
    doc = json.loads(text)
    data = None
    if "curve_data" in doc:
        cd = doc["curve_data"]
        data = DecoratedCurveData(
            tuple((d, l) for d, l in cd["curves"]),
            tuple(tuple(r) for r in cd["inter"]),
            None if cd.get("central") is None else tuple(cd["central"]),
            None if cd.get("arms") is None else tuple(tuple(a) for a in cd["arms"]),
        )
    return IncidenceMatrix(tuple(tuple(r) for r in doc["rows"]), data)
