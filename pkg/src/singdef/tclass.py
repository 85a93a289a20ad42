"""T-singularities, Wahl chains, dot diagrams, and P-resolutions.

A chain [b1..br] stands for a string of rational curves of
self-intersections -b1..-br. Contracted configurations are chains or star
graphs with some connected runs of curves marked for contraction; a
P-resolution needs every marked run to be a T-singularity chain (or a Du
Val string of 2s) and the canonical class strictly positive on the honest
curves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from .errors import (
    BlowDownMismatch,
    DepthBoundTooSmall,
    InternalInconsistency,
    NotWahl,
    SingularSystem,
)
from .hjcf import blow_down, blow_up, hj_eval_pair, hj_expand, k_of_x


@dataclass(frozen=True)
class WahlData:
    """Wahl singularity of type (m, a): index m**2, weight m*a - 1."""

    m: int
    a: int

    @property
    def chain(self) -> tuple[int, ...]:
        return hj_expand(self.m * self.m, self.m * self.a - 1)


@dataclass(frozen=True)
class TData:
    """T-singularity of type (d, n, a): index d*n**2, weight d*n*a - 1."""

    d: int
    n: int
    a: int

    @property
    def chain(self) -> tuple[int, ...]:
        return hj_expand(self.d * self.n * self.n, self.d * self.n * self.a - 1)


@dataclass(frozen=True)
class DotDiagram:
    """Dot diagram of a chain: row i carries b_i - 1 dots, each row starting
    in the column of the previous row's last dot, columns decreasing to the
    right. The extended diagram appends one extra dot below-right of the
    last dot. delta_* fields are set for Wahl chains only (median dot)."""

    chain: tuple[int, ...]
    extended: bool
    positions: tuple[tuple[int, int], ...]
    delta_ordinal: int | None = None
    delta_row: int | None = None
    delta_col: int | None = None


@dataclass(frozen=True)
class StarGraph:
    """Star-shaped dual graph: central curve plus chains hanging off it.

    Arm entries are listed center-outward; all values are positive b with
    self-intersection -b.
    """

    center: int
    arms: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "arms", tuple(tuple(a) for a in self.arms))

    def canonical(self) -> tuple[int, tuple[tuple[int, ...], ...]]:
        return self.center, tuple(sorted(self.arms))


@dataclass(frozen=True)
class PChain:
    """Chain with marked contracted runs, given as half-open index ranges.

    Runs must be sorted, disjoint, and pairwise non-adjacent (an honest
    curve separates any two contracted singularities).
    """

    entries: tuple[int, ...]
    runs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        object.__setattr__(self, "runs", tuple(tuple(r) for r in self.runs))
        last = None
        for a, b in self.runs:
            if not (0 <= a < b <= len(self.entries)):
                raise ValueError(f"run ({a},{b}) out of range")
            if last is not None and a <= last:
                raise ValueError("runs must be sorted, disjoint, non-adjacent")
            last = b
        # b == next a would make two runs touch without an honest curve
        for (_, b), (a, _) in zip(self.runs, self.runs[1:]):
            if a == b:
                raise ValueError("adjacent runs")

    def honest(self) -> tuple[int, ...]:
        covered = set()
        for a, b in self.runs:
            covered.update(range(a, b))
        return tuple(i for i in range(len(self.entries)) if i not in covered)

    def reversed(self) -> "PChain":
        L = len(self.entries)
        runs = tuple(sorted((L - b, L - a) for a, b in self.runs))
        return PChain(tuple(reversed(self.entries)), runs)


@dataclass(frozen=True)
class PStar:
    """Star graph with marked contracted runs.

    Vertex ids: "c" for the center, (arm, pos) otherwise. Each run is a
    tuple of vertex ids forming a path, listed in path order.
    """

    center: int
    arms: tuple[tuple[int, ...], ...]
    runs: tuple[tuple, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "arms", tuple(tuple(a) for a in self.arms))
        object.__setattr__(self, "runs", tuple(tuple(r) for r in self.runs))
        verts = self.vertex_values()
        seen = set()
        adj = self.adjacency()
        for run in self.runs:
            for v in run:
                if v not in verts:
                    raise ValueError(f"unknown vertex {v}")
                if v in seen:
                    raise ValueError(f"vertex {v} in two runs")
                seen.add(v)
            for u, v in zip(run, run[1:]):
                if v not in adj[u]:
                    raise ValueError(f"run not a path at {u}-{v}")
        # non-adjacency between distinct runs
        for i, r1 in enumerate(self.runs):
            for r2 in self.runs[i + 1 :]:
                if any(v in adj[u] for u in r1 for v in r2):
                    raise ValueError("adjacent runs")

    def vertex_values(self) -> dict:
        vals = {"c": self.center}
        for i, arm in enumerate(self.arms):
            for j, b in enumerate(arm):
                vals[(i, j)] = b
        return vals

    def adjacency(self) -> dict:
        adj = {"c": set()}
        for i, arm in enumerate(self.arms):
            prev = "c"
            for j in range(len(arm)):
                v = (i, j)
                adj.setdefault(v, set())
                adj[prev].add(v)
                adj[v].add(prev)
                prev = v
        return adj

    def honest(self) -> tuple:
        marked = {v for run in self.runs for v in run}
        return tuple(v for v in self.vertex_values() if v not in marked)


def _strip(chain: tuple[int, ...]) -> tuple[int, ...]:
    c = list(chain)
    while len(c) > 1:
        if c[0] >= 3 and c[-1] == 2:
            c = [c[0] - 1] + c[1:-1]
        elif c[-1] >= 3 and c[0] == 2:
            c = c[1:-1] + [c[-1] - 1]
        else:
            break
    return tuple(c)


def _is_t_terminal(c: tuple[int, ...]) -> bool:
    if c == (4,):
        return True
    return len(c) >= 2 and c[0] == c[-1] == 3 and all(b == 2 for b in c[1:-1])


@lru_cache(maxsize=None)
def t_recognize(chain) -> TData | None:
    """TData for a T-singularity chain, None otherwise (Du Val excluded)."""
    c = tuple(chain)
    if not c or any(b < 2 for b in c):
        return None
    if all(b == 2 for b in c):
        return None
    if not _is_t_terminal(_strip(c)):
        return None
    big, wt = hj_eval_pair(c)
    g = gcd(big, wt + 1)
    n = big // g
    if n < 2 or g % n:
        return None
    d = g // n
    a = (wt + 1) // g
    if d * n * n != big or d * n * a != wt + 1 or not 0 < a < n or gcd(n, a) != 1:
        raise InternalInconsistency(f"strip accepted non-T chain {c}")
    return TData(d, n, a)


def wahl_recognize(chain) -> WahlData | None:
    """WahlData for a Wahl chain (index m**2), None otherwise."""
    t = t_recognize(tuple(chain))
    if t is None or t.d != 1:
        return None
    return WahlData(t.n, t.a)


def is_wahl_value(big: int, wt: int) -> bool:
    """Value-based Wahl test: big = m**2 and wt = m*a - 1, used as the
    independent oracle against the strip recursion."""
    m = isqrt(big)
    if m * m != big or m < 2:
        return False
    if (wt + 1) % m:
        return False
    a = (wt + 1) // m
    return 0 < a < m and gcd(m, a) == 1


def dot_diagram(chain, extended: bool = False) -> DotDiagram:
    """Dot diagram of a chain with all entries >= 2."""
    c = tuple(chain)
    if not c or any(b < 2 for b in c):
        raise ValueError("dot diagram needs entries >= 2")
    start = sum(b - 2 for b in c) + (1 if extended else 0)
    positions = []
    col = start
    for i, b in enumerate(c):
        for t in range(b - 1):
            positions.append((i, col - t))
        col -= b - 2
    if extended:
        positions.append((len(c), col - 1))
    w = wahl_recognize(c)
    if w is None:
        return DotDiagram(c, extended, tuple(positions))
    core = sum(b - 1 for b in c)
    ordinal = (core + 1) // 2
    row, column = positions[ordinal - 1]
    return DotDiagram(c, extended, tuple(positions), ordinal, row + 1, column)


def delta_dot(chain) -> DotDiagram:
    """Dot diagram with the median delta dot; Wahl chains only."""
    c = tuple(chain)
    if wahl_recognize(c) is None:
        raise NotWahl(f"{list(c)} is not a Wahl chain")
    return dot_diagram(c, extended=False)


def crepant_m_resolution(d: int, n: int, a: int) -> PChain:
    """M-resolution of the T-singularity (d, n, a): d copies of the Wahl
    (n, a) chain joined by honest -1 curves."""
    if d < 1 or n < 2 or not 0 < a < n or gcd(n, a) != 1:
        raise ValueError(f"invalid T-type ({d},{n},{a})")
    w = hj_expand(n * n, n * a - 1)
    entries: tuple[int, ...] = ()
    runs = []
    for i in range(d):
        if i:
            entries += (1,)
        runs.append((len(entries), len(entries) + len(w)))
        entries += w
    out = PChain(entries, tuple(runs))
    if _full_blow_down(entries) != hj_expand(d * n * n, d * n * a - 1):
        raise InternalInconsistency("M-resolution does not blow down to X")
    return out


def _full_blow_down(entries: tuple[int, ...]) -> tuple[int, ...]:
    c = tuple(entries)
    while 1 in c:
        c = blow_down(c)
    return c


def _solve(vals: dict, adj: dict) -> dict:
    """Discrepancy coefficients: (K + sum a_j E_j) . E_k = 0 for all k."""
    verts = sorted(vals, key=repr)
    idx = {v: i for i, v in enumerate(verts)}
    m = len(verts)
    rows = []
    for v in verts:
        row = [Fraction(0)] * m + [Fraction(2 - vals[v])]
        row[idx[v]] = Fraction(-vals[v])
        for u in adj[v]:
            row[idx[u]] += 1
        rows.append(row)
    # gaussian elimination, exact
    for col in range(m):
        piv = next((r for r in range(col, m) if rows[r][col]), None)
        if piv is None:
            raise SingularSystem("discrepancy system is singular")
        rows[col], rows[piv] = rows[piv], rows[col]
        pv = rows[col][col]
        rows[col] = [x / pv for x in rows[col]]
        for r in range(m):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return {v: rows[idx[v]][m] for v in verts}


@lru_cache(maxsize=None)
@lru_cache(maxsize=None)
def _chain_discrepancies(chain: tuple[int, ...]) -> tuple[Fraction, ...]:
    vals = {i: b for i, b in enumerate(chain)}
    adj = {i: set() for i in vals}
    for i in range(len(chain) - 1):
        adj[i].add(i + 1)
        adj[i + 1].add(i)
    sol = _solve(vals, adj)
    return tuple(sol[i] for i in range(len(chain)))


def discrepancies(target):
    """Coefficients a_j in [0,1) with (K + sum a_j E_j) . E_k = 0.

    Chains return a tuple aligned with the chain; StarGraphs return
    (center coefficient, per-arm tuples).
    """
    if isinstance(target, StarGraph):
        ps = PStar(target.center, target.arms)
        sol = _solve(ps.vertex_values(), ps.adjacency())
        return sol["c"], tuple(
            tuple(sol[(i, j)] for j in range(len(arm)))
            for i, arm in enumerate(target.arms)
        )
    return _chain_discrepancies(tuple(target))


def canonical_degree(ktilde_c: int, parts) -> Fraction:
    """K.C for a curve meeting contracted singularities.

    ktilde_c is the degree on the resolution; parts is an iterable of
    (target, mu) with mu the intersection multiplicities against the
    target's curves (chain order, or (center, arms) for a StarGraph).
    """
    total = Fraction(ktilde_c)
    for target, mu in parts:
        if isinstance(target, StarGraph):
            cdisc, armdisc = discrepancies(target)
            mc, marms = mu
            total += cdisc * mc
            for darm, muarm in zip(armdisc, marms):
                for dd, mm in zip(darm, muarm):
                    total += dd * mm
        else:
            for dd, mm in zip(discrepancies(tuple(target)), mu):
                total += dd * mm
    return total


@lru_cache(maxsize=None)
def _run_ok(seg: tuple[int, ...]) -> bool:
    """Contracted runs must be T-singularities or Du Val strings of 2s."""
    if all(b == 2 for b in seg):
        return True
    return t_recognize(seg) is not None


@lru_cache(maxsize=None)
def _end_disc(seg: tuple[int, ...], last: bool) -> Fraction:
    if all(b == 2 for b in seg):
        return Fraction(0)
    d = _chain_discrepancies(seg)
    return d[-1] if last else d[0]


def is_p_resolution(candidate, target) -> bool:
    """Check a marked chain or star against a singularity.

    target is (n, a) for a PChain candidate, a StarGraph for a PStar.
    Raises BlowDownMismatch when the underlying curves do not contract to
    the target's minimal chain/graph; returns False when a run is not
    T/Du Val or some honest curve has non-positive K-degree.
    """
    if isinstance(candidate, PChain):
        return _is_p_resolution_chain(candidate, target)
    if isinstance(candidate, PStar):
        return _is_p_resolution_star(candidate, target)
    raise TypeError("candidate must be PChain or PStar")


def _is_p_resolution_chain(cand: PChain, target) -> bool:
    n, a = target
    base = hj_expand(n, a)
    bd = _full_blow_down(cand.entries)
    if bd != base and bd != tuple(reversed(base)):
        raise BlowDownMismatch(f"{list(cand.entries)} contracts to {list(bd)}")
    for s, t in cand.runs:
        if not _run_ok(cand.entries[s:t]):
            return False
    ends = {t - 1: (s, t) for s, t in cand.runs}
    starts = {s: (s, t) for s, t in cand.runs}
    for i in cand.honest():
        k = Fraction(cand.entries[i] - 2)
        if i - 1 in ends:
            s, t = ends[i - 1]
            k += _end_disc(cand.entries[s:t], last=True)
        if i + 1 in starts:
            s, t = starts[i + 1]
            k += _end_disc(cand.entries[s:t], last=False)
        if k <= 0:
            return False
    return True


def _blow_down_star(center: int, arms) -> tuple[int, tuple[tuple[int, ...], ...]]:
    center = int(center)
    arms = [list(a) for a in arms]
    while True:
        hit = False
        for i, arm in enumerate(arms):
            for j, b in enumerate(arm):
                if b != 1:
                    continue
                if j > 0:
                    arm[j - 1] -= 1
                else:
                    center -= 1
                if j + 1 < len(arm):
                    arm[j + 1] -= 1
                del arm[j]
                hit = True
                break
            if hit:
                break
        if not hit:
            break
        if center < 1:
            raise BlowDownMismatch("central curve contracted during blow-down")
    return center, tuple(sorted(tuple(a) for a in arms if a))


def _is_p_resolution_star(cand: PStar, target: StarGraph) -> bool:
    got = _blow_down_star(cand.center, cand.arms)
    want = (target.center, tuple(sorted(target.arms)))
    if got != want:
        raise BlowDownMismatch(f"star contracts to {got}, wanted {want}")
    vals = cand.vertex_values()
    adj = cand.adjacency()
    run_entries = {run: tuple(vals[v] for v in run) for run in cand.runs}
    for run, seg in run_entries.items():
        if not _run_ok(seg):
            return False
    for v in cand.honest():
        k = Fraction(vals[v] - 2)
        for run in cand.runs:
            seg = run_entries[run]
            for pos, u in enumerate(run):
                if u in adj[v]:
                    if all(b == 2 for b in seg):
                        continue
                    k += _chain_discrepancies(seg)[pos]
        if k <= 0:
            return False
    return True


def _valid_markings(entries: tuple[int, ...]):
    """All run layouts making every honest curve strictly K-positive."""
    L = len(entries)
    out = []

    def k_ok(i: int, left: Fraction | None, right: Fraction | None) -> bool:
        k = Fraction(entries[i] - 2)
        if left is not None:
            k += left
        if right is not None:
            k += right
        return k > 0

    def rec(pos, runs, disc_from_left, pending):
        # pending: (index, left disc) of an honest curve awaiting its right
        # neighborhood; disc_from_left: disc of a run ending at pos-1
        if pos == L:
            if pending is None or k_ok(*pending, None):
                out.append(tuple(runs))
            return
        # honest curve at pos
        if pending is None or k_ok(*pending, None):
            rec(pos + 1, runs, None, (pos, disc_from_left))
        # run starting at pos (forbidden right after another run)
        if disc_from_left is None:
            for end in range(pos + 1, L + 1):
                seg = entries[pos:end]
                if not _run_ok(seg):
                    continue
                first = _end_disc(seg, last=False)
                if pending is not None and not k_ok(*pending, first):
                    continue
                rec(end, runs + [(pos, end)], _end_disc(seg, last=True), None)

    rec(0, [], None, None)
    return out


@lru_cache(maxsize=None)
def _t_pool(max_entry: int, max_len: int, max_excess: int):
    """Non-Du-Val T-chains within the given bounds, grouped by first entry.

    Seeds [4] and [3,2..2,3] closed under e -> (e1+1,..,2) and
    (2,..,es+1); this generates exactly the T-chains. Each op raises the
    total over-2 excess by one, and a chain obtained from the target by d
    blow-ups carries at most base excess + 2d, so max_excess caps the
    closure without losing any usable run.
    """
    def excess(c):
        return sum(e - 2 for e in c if e > 2)

    seen = set()
    frontier = [(4,)] + [
        (3,) + (2,) * k + (3,) for k in range(max(0, max_len - 1))
    ]
    frontier = [
        c for c in frontier
        if len(c) <= max_len and c[0] <= max_entry and excess(c) <= max_excess
    ]
    seen.update(frontier)
    while frontier:
        nxt = []
        for c in frontier:
            for cand in ((c[0] + 1,) + c[1:] + (2,), (2,) + c[:-1] + (c[-1] + 1,)):
                if len(cand) > max_len or max(cand[0], cand[-1]) > max_entry:
                    continue
                if excess(cand) > max_excess:
                    continue
                if cand not in seen:
                    seen.add(cand)
                    nxt.append(cand)
        frontier = nxt
    by_first: dict = {}
    for c in sorted(seen):
        by_first.setdefault(c[0], []).append(c)
    for runs in by_first.values():
        runs.sort(key=len)
    return by_first


def _p_res_search(n: int, a: int, max_len: int, target: int):
    """Exact-remainder DFS over marked chains evaluating to n/a.

    Builds left to right; a step appends either one honest entry or a whole
    contracted run (T-chain or Du Val string). The tail of the chain past
    position i must evaluate to the running remainder v, so v = c - 1/v'
    pins v' = 1/(c - v) at every step and the final entry must equal its
    remainder exactly. Honest curves get their K-positivity constraints
    applied at placement: an honest 1 needs contracted neighbors on both
    sides with discrepancies summing over 1, an honest 2 needs one
    non-Du-Val contracted neighbor. A length-t positive tail evaluates to
    at least 1/t, which bounds each honest entry by v + t.
    """
    base = hj_expand(n, a)
    r = len(base)
    max_base = max(base)
    max_entry = max_base + (max_len - r)
    contract_cap = max_len - r
    base_excess = sum(e - 2 for e in base if e > 2)
    pool = _t_pool(max_entry, max_len, base_excess + 2 * contract_cap)
    found: dict = {}

    def push(S, e):
        # Append entry e to the reduced blow-down stack, contracting
        # interior 1s as they become interior. None = a curve would drop
        # below self-intersection -1, impossible in a blow-up chain.
        S = list(S)
        while S and S[-1] == 1:
            S.pop()
            e -= 1
            if S:
                S[-1] -= 1
                if S[-1] < 1:
                    return None
            if e < 1:
                return None
        S.append(e)
        return S

    def prefix_ok(S, A):
        # Future cascades enter only from the open end; with at most A
        # contractions left they can melt a bounded suffix of S. The
        # rightmost exposed entry costs its value in contractions (value-1
        # decrements plus its own pop), each entry further left gets one
        # free decrement from the pop to its right. Entries left of the
        # melt frontier are final and must match the target chain.
        if A < 0:
            return False
        k = len(S)
        cost = 0
        m = k
        for j in range(k - 1, -1, -1):
            step = (S[j] - 1) if j == k - 1 else max(0, S[j] - 2)
            cost += step + 1
            if cost > A:
                break
            m = j
        if m == 0:
            return True
        if m > r:
            return False
        for i in range(m - 1):
            if S[i] != base[i]:
                return False
        return S[m - 1] >= base[m - 1]

    def close(S, entries, runs):
        # A marking and its mirror are distinct P-resolutions even over a
        # palindromic chain (the deformation components they induce are
        # distinct, matching mirrored k-sequences), so no reversal dedup.
        S = list(S)
        while S and S[-1] == 1:
            S.pop()
            if S:
                S[-1] -= 1
                if S[-1] < 1:
                    return False
        if S != list(base):
            return False
        pc = PChain(tuple(entries), tuple(runs))
        try:
            ok = is_p_resolution(pc, (n, a))
        except BlowDownMismatch:
            return False
        if not ok:
            return False
        key = (pc.entries, pc.runs)
        if key not in found:
            found[key] = pc
        return len(found) == target

    def dfs(vp, vq, S, entries, runs, last_run_disc, pending, run_just_ended, budget):
        # remainder v = vp/vq stays an exact coprime pair: 1/(c - p/q) is
        # (q, c*q - p), so no reduction is ever needed. pending = minimal
        # first-discrepancy the next run must exceed, or None; set by a
        # trailing honest 1 or naked honest 2
        if budget == 0:
            return False
        A = contract_cap - (len(entries) - len(S))
        if A < 0:
            return False
        # close with a single honest entry
        if pending is None and vq == 1:
            ok = vp >= 3 or (vp == 2 and last_run_disc is not None and last_run_disc > 0)
            if ok:
                S2 = push(S, vp)
                if S2 is not None and close(S2, entries + [vp], runs):
                    return True
        # extend or close with a contracted run first (not adjacent to
        # another run); runs close whole chains so they bottom out faster
        # than honest branches
        start = len(entries)
        if not run_just_ended:
            for seg in _seg_candidates(vp, vq, budget, pending):
                if pending is not None and _end_disc(seg, last=False) <= pending:
                    continue
                wp, wq = vp, vq
                S2 = S
                dead = False
                for e in seg[:-1]:
                    if wp >= e * wq:
                        dead = True
                        break
                    wp, wq = wq, e * wq - wp
                    S2 = push(S2, e)
                    if S2 is None:
                        dead = True
                        break
                if dead:
                    continue
                tail = seg[-1]
                S2 = push(S2, tail)
                if S2 is None:
                    continue
                if wp == tail * wq:  # run closes the chain
                    if close(S2, entries + list(seg), runs + [(start, start + len(seg))]):
                        return True
                elif wp < tail * wq and budget - len(seg) >= 1:
                    if not prefix_ok(S2, contract_cap - (len(entries) + len(seg) - len(S2))):
                        continue
                    if dfs(wq, tail * wq - wp, S2, entries + list(seg),
                           runs + [(start, start + len(seg))],
                           _end_disc(seg, last=True), None, True,
                           budget - len(seg)):
                        return True
        # extend with one honest entry c > v (tail bound: next tail >= 1/t;
        # a placed entry either survives, capped by the target chain, or
        # melts, capped by the remaining contraction allowance)
        t = budget - 1
        if t >= 1 and pending is None:
            lo = max(1, vp // vq + 1)
            hi = min((vp + t * vq) // vq, max(max_base, 1 + A))
            for c in range(lo, hi + 1):
                if c == 1:
                    if last_run_disc is None or last_run_disc == 0:
                        continue
                    need = 1 - last_run_disc
                elif c == 2:
                    free = last_run_disc is not None and last_run_disc > 0
                    need = None if free else Fraction(0)
                else:
                    need = None
                S2 = push(S, c)
                if S2 is None or not prefix_ok(S2, contract_cap - (len(entries) + 1 - len(S2))):
                    continue
                if dfs(vq, c * vq - vp, S2, entries + [c], runs, None, need,
                       False, budget - 1):
                    return True
        return False

    def _seg_candidates(vp, vq, budget, pending):
        # Du Val strings of any usable length plus pooled T-chains whose
        # first entry can follow remainder v; the 1/t tail bound caps the
        # first entry at v + budget. Du Val ends carry discrepancy 0, so
        # they can never discharge a pending constraint.
        if pending is None:
            for k in range(budget, 0, -1):
                yield (2,) * k
        lo = max(2, vp // vq)
        hi = (vp + budget * vq) // vq
        for first in range(lo, hi + 1):
            for seg in pool.get(first, ()):
                if len(seg) > budget:
                    break  # pool lists are sorted by length
                yield seg
        return

    dfs(n, a, [], [], [], None, None, False, max_len)
    return found


def enumerate_p_resolutions(n: int, a: int, depth_bound: int = 16):
    """All P-resolutions of the cyclic quotient of type (n, a).

    Depth-first over marked chains built left to right with exact
    continued-fraction remainders; stops as soon as the count matches
    |K(X)| (the deformation-component bijection certifies completeness).
    A marking and its mirror count separately: over a palindromic chain
    they induce distinct deformation components. depth_bound caps the
    number of blow-ups past the minimal chain, escalated lazily so shallow
    singularities stay cheap.

    Reversing a marked chain is a bijection with the P-resolutions of the
    conjugate type (n, a^-1 mod n), and the search closes leading Du Val
    strings much faster than trailing ones, so enumerate over whichever
    orientation starts with more 2s and mirror the results back.
    """
    base = hj_expand(n, a)
    a2 = pow(a, -1, n) if n > 1 else a
    mirrored = False
    if a2 != a:
        base2 = hj_expand(n, a2)
        twos = next((i for i, e in enumerate(base) if e != 2), len(base))
        twos2 = next((i for i, e in enumerate(base2) if e != 2), len(base2))
        if twos2 > twos:
            a, base, mirrored = a2, base2, True
    target = len(k_of_x(n, a))
    found: dict = {}
    for bound in (4, 8, 12, depth_bound):
        bound = min(bound, depth_bound)
        found = _p_res_search(n, a, len(base) + bound, target)
        if len(found) == target:
            out = tuple(found[k] for k in sorted(found))
            if mirrored:
                out = tuple(sorted((p.reversed() for p in out),
                                   key=lambda p: (p.entries, p.runs)))
            return out
        if len(found) > target:
            raise InternalInconsistency(
                f"{len(found)} P-resolutions for {n}/{a}, expected {target}"
            )
        if bound == depth_bound:
            break
    raise DepthBoundTooSmall(
        f"{len(found)}/{target} P-resolutions of {n}/{a} "
        f"within depth {depth_bound}"
    )
