"""Curve configurations on compactified sandwiched surfaces and the
incidence-matrix runner.

A cyclic quotient or weighted homogeneous singularity is presented as a
sandwiched surface: the minimal resolution with enough curvetta (-1)s
blown up that the decorated germ (C, l) reappears, plus a section at
infinity closing everything off. Starting from an M-resolution the runner
plays the two moves that survive contraction to the one-parameter smoothing,
usual flips of (-1)-curves onto Wahl runs and divisorial contractions of
free (-1)-curves, until no exceptional curve is left. Every divisorial
contraction emits one column of intersection numbers against the tracked
degenerations of the decorated curves; the columns assemble into the
incidence matrix of the smoothing component the M-resolution encodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    IncompatibleResolution,
    InternalInconsistency,
    NonTerminating,
    NotContractible,
    OutOfCatalog,
)
from .hjcf import hj_expand
from .lattice import decorations, shared_base_points
from .matrices import DecoratedCurveData, IncidenceMatrix, validate_incidence
from .mmp import usual_flip
from .tclass import (
    PChain,
    PStar,
    StarGraph,
    TData,
    WahlData,
    _solve,
    crepant_m_resolution,
    t_recognize,
    wahl_recognize,
)


@dataclass(frozen=True)
class Run:
    """Marked run: the curves over one singular point of the midway surface.

    ids are chain-ordered for chain runs; label is the recognized Wahl or
    T type, or None for the one cataloged star shape (whose geometry lives
    in the configuration's edges).
    """

    ids: tuple[str, ...]
    label: WahlData | TData | None

    def __post_init__(self):
        object.__setattr__(self, "ids", tuple(self.ids))


class CurveConfig:
    """Mutable curve configuration: weighted graph plus runs and ledgers.

    self_int maps vertex id -> self-intersection (decorated curves and the
    section at infinity are tracked relatively, starting at 0). edges maps
    frozenset({u, v}) -> intersection multiplicity. ledgers track, per
    decorated curve, the limit divisor Gamma_j as integer combinations of
    surviving vertices; ledgers start as {j: 1} and only flips and
    contractions rewrite them.
    """

    def __init__(self, data: DecoratedCurveData):
        self.self_int: dict[str, int] = {}
        self.edges: dict[frozenset, int] = {}
        self.runs: list[Run] = []
        self.decorated: tuple[str, ...] = ()
        self.ledgers: dict[str, dict[str, int]] = {}
        self.infinity: str | None = None
        self.data = data
        self._seq: dict[str, int] = {}
        self._fresh = 0

    # -- graph primitives ------------------------------------------------

    def add_vertex(self, vid: str, self_int: int) -> str:
        if vid in self.self_int:
            raise InternalInconsistency(f"duplicate vertex {vid}")
        self.self_int[vid] = self_int
        self._seq[vid] = self._fresh
        self._fresh += 1
        return vid

    def fresh_vertex(self, prefix: str, self_int: int) -> str:
        vid = f"{prefix}{self._fresh}"
        return self.add_vertex(vid, self_int)

    def add_edge(self, u: str, v: str, mult: int = 1) -> None:
        if u == v:
            raise InternalInconsistency("self edge")
        key = frozenset((u, v))
        self.edges[key] = self.edges.get(key, 0) + mult

    def mult(self, u: str, v: str) -> int:
        return self.edges.get(frozenset((u, v)), 0)

    def adjacency(self, v: str):
        out = []
        for key, m in self.edges.items():
            if v in key:
                (u,) = key - {v}
                out.append((u, m))
        return out

    def seq(self, v: str) -> int:
        return self._seq[v]

    def run_of(self, v: str) -> Run | None:
        for run in self.runs:
            if v in run.ids:
                return run
        return None

    def exceptional(self):
        skip = set(self.decorated)
        if self.infinity is not None:
            skip.add(self.infinity)
        return [v for v in self.self_int if v not in skip]

    def honest_exceptional(self):
        marked = {i for run in self.runs for i in run.ids}
        return [v for v in self.exceptional() if v not in marked]

    # -- intersection theory on the midway surface ------------------------

    def run_discrepancies(self, run: Run) -> dict[str, Fraction]:
        vals = {i: -self.self_int[i] for i in run.ids}
        adj: dict[str, set] = {i: set() for i in run.ids}
        for key in self.edges:
            u, v = tuple(key)
            if u in vals and v in vals:
                adj[u].add(v)
                adj[v].add(u)
        return _solve(vals, adj)

    def k_degree(self, v: str) -> Fraction:
        """K.v after contracting the marked runs; adjunction plus the
        discrepancy corrections of adjacent contracted curves."""
        deg = Fraction(-2 - self.self_int[v])
        for run in self.runs:
            discs = None
            for u in run.ids:
                m = self.mult(v, u)
                if m:
                    if discs is None:
                        discs = self.run_discrepancies(run)
                    deg += m * discs[u]
        return deg

    def ledger_k(self, j: str) -> Fraction:
        return sum(
            (Fraction(c) * self.k_degree(w) for w, c in self.ledgers[j].items()),
            Fraction(0),
        )

    def contract(self, v: str) -> None:
        """Blow down the (-1)-vertex v: pairwise rewiring with multiplicity
        products, neighbors gain m^2 on the self-intersection."""
        if self.self_int[v] != -1:
            raise NotContractible(f"{v} has self-intersection {self.self_int[v]}")
        nbrs = self.adjacency(v)
        for u, m in nbrs:
            self.self_int[u] += m * m
        for i, (u, mu) in enumerate(nbrs):
            for w, mw in nbrs[i + 1 :]:
                self.add_edge(u, w, mu * mw)
        for key in [k for k in self.edges if v in k]:
            del self.edges[key]
        del self.self_int[v]
        del self._seq[v]

    def check_invariants(self) -> None:
        for key, m in self.edges.items():
            if m < 1:
                raise InternalInconsistency(f"edge {set(key)} multiplicity {m}")
            for u in key:
                if u not in self.self_int:
                    raise InternalInconsistency(f"edge endpoint {u} missing")
        seen: set[str] = set()
        for run in self.runs:
            for i in run.ids:
                if i not in self.self_int:
                    raise InternalInconsistency(f"run vertex {i} missing")
                if i in seen:
                    raise InternalInconsistency(f"vertex {i} in two runs")
                seen.add(i)
        for j in self.decorated:
            for w in self.ledgers[j]:
                if w not in self.self_int:
                    raise InternalInconsistency(f"ledger of {j} holds dead {w}")


@dataclass(frozen=True)
class SandwichedStructure:
    """Compactification recipe: where the curvetta (-1)s sit on the minimal
    chain and the decorated-curve constraints the final matrix must meet."""

    n: int
    a: int
    chain: tuple[int, ...]
    f_on: tuple[int, ...]
    data: DecoratedCurveData


def build_sandwiched_cqss(n: int, a: int) -> SandwichedStructure:
    """Sandwiched presentation of the cyclic quotient (n, a).

    E_i carries b_i - 2 curvetta (-1)-curves, the last curve one extra;
    the curvetta order matches the decoration lengths, which come out
    non-decreasing with the extra one last.
    """
    chain = hj_expand(n, a)
    ls = decorations(n, a)
    inter = shared_base_points(n, a)
    f_on = []
    for i, b in enumerate(chain):
        f_on.extend([i] * (b - 2))
    f_on.append(len(chain) - 1)
    if len(f_on) != len(ls):
        raise InternalInconsistency(
            f"{len(f_on)} curvettas for {len(ls)} decorations"
        )
    data = DecoratedCurveData(tuple((0, l) for l in ls), inter)
    return SandwichedStructure(n, a, chain, tuple(f_on), data)


def _provenance_blow_down(entries, target):
    """Contract 1s in entries down to target, returning for each target
    position the index of the surviving original entry."""
    cur = list(entries)
    idx = list(range(len(entries)))
    while 1 in cur:
        if len(cur) == 1:
            raise IncompatibleResolution(f"{list(entries)} contracts past {list(target)}")
        p = cur.index(1)
        if p > 0:
            cur[p - 1] -= 1
        if p < len(cur) - 1:
            cur[p + 1] -= 1
        del cur[p]
        del idx[p]
        if any(c < 1 for c in cur):
            raise IncompatibleResolution(f"{list(entries)} is not a blow-up chain")
    if tuple(cur) != tuple(target):
        raise IncompatibleResolution(
            f"{list(entries)} contracts to {cur}, not {list(target)}"
        )
    return idx


def compactify_m_resolution(m_res: PChain, structure: SandwichedStructure) -> CurveConfig:
    """Curve configuration of the compactified M-resolution.

    The resolution chain replaces the minimal chain, curvettas reattach
    along the blow-down provenance, Du Val runs come in resolved; T-runs
    of depth >= 2 are expanded to their crepant M-resolution by the
    runner's normalization pass.
    """
    prov = _provenance_blow_down(m_res.entries, structure.chain)
    cfg = CurveConfig(structure.data)
    zs = [cfg.add_vertex(f"Z{i}", -e) for i, e in enumerate(m_res.entries)]
    for i in range(len(zs) - 1):
        cfg.add_edge(zs[i], zs[i + 1])
    for a, b in m_res.runs:
        seg = m_res.entries[a:b]
        if all(e == 2 for e in seg):
            continue  # Du Val points stay resolved on the runner's surface
        label = wahl_recognize(seg) or t_recognize(seg)
        if label is None:
            raise IncompatibleResolution(f"run {list(seg)} is neither T nor Du Val")
        cfg.runs.append(Run(tuple(zs[a:b]), label))
    dec = []
    for j, e_idx in enumerate(structure.f_on):
        f = cfg.add_vertex(f"F{j + 1}", -1)
        cfg.add_edge(f, zs[prov[e_idx]])
        c = cfg.add_vertex(f"C{j + 1}", 0)
        cfg.add_edge(c, f)
        dec.append(c)
    cfg.decorated = tuple(dec)
    cfg.ledgers = {j: {j: 1} for j in dec}
    inf = cfg.add_vertex("Inf", 0)
    cfg.infinity = inf
    for c in dec:
        cfg.add_edge(inf, c)
    cfg.check_invariants()
    return cfg


# -- runner moves ---------------------------------------------------------


def _normalize(cfg: CurveConfig, trace=None) -> None:
    """Unmark Du Val runs and expand non-Wahl T-runs in place to their
    crepant M-resolutions; stars wait for their cataloged flip."""
    changed = True
    while changed:
        changed = False
        for run in list(cfg.runs):
            if run.label is None:
                continue
            chain = tuple(-cfg.self_int[i] for i in run.ids)
            if all(e == 2 for e in chain):
                cfg.runs.remove(run)
                changed = True
                continue
            if wahl_recognize(chain) is not None:
                continue
            t = t_recognize(chain)
            if t is None:
                raise InternalInconsistency(f"marked run {list(chain)} is not T")
            m = crepant_m_resolution(t.d, t.n, t.a)
            prov = _provenance_blow_down(m.entries, chain)
            # survivors keep their vertex, everything else is freshly blown up
            vertex_of: dict[int, str] = {}
            for pos, vid in zip(prov, run.ids):
                vertex_of[pos] = vid
                cfg.self_int[vid] = -m.entries[pos]
            for pos, e in enumerate(m.entries):
                if pos not in vertex_of:
                    vertex_of[pos] = cfg.fresh_vertex("N", -e)
            for i in range(len(run.ids) - 1):
                key = frozenset((run.ids[i], run.ids[i + 1]))
                del cfg.edges[key]
            for pos in range(len(m.entries) - 1):
                cfg.add_edge(vertex_of[pos], vertex_of[pos + 1])
            cfg.runs.remove(run)
            for a, b in m.runs:
                seg = m.entries[a:b]
                cfg.runs.append(
                    Run(tuple(vertex_of[p] for p in range(a, b)), wahl_recognize(seg))
                )
            if trace is not None:
                trace.append(
                    {
                        "op": "expand",
                        "run": list(chain),
                        "into": [list(m.entries[a:b]) for a, b in m.runs],
                    }
                )
            changed = True


@dataclass(frozen=True)
class _FlipPlan:
    kind: str  # "usual" | "mid" | "star"
    eminus: str
    run: Run = field(compare=False)
    attach: str = ""
    collapse: bool = False


def _star_shape(cfg: CurveConfig, run: Run, attach: str):
    """Match the cataloged star: attachment N(-2) on center C(-4) carrying
    leaf S(-2), leaf E(-4) and the two-curve arm W1(-2)-W2(-2). Returns
    (N, C, S, W1, W2, E) or None."""
    ids = set(run.ids)
    if len(ids) != 6:
        return None
    inside = {
        v: [u for u, _ in cfg.adjacency(v) if u in ids] for v in ids
    }
    n = attach
    if cfg.self_int[n] != -2 or len(inside[n]) != 1:
        return None
    # N carries only the flip curve outside the run
    if sum(1 for u, _ in cfg.adjacency(n) if u not in ids) != 1:
        return None
    c = inside[n][0]
    if cfg.self_int[c] != -4 or len(inside[c]) != 4:
        return None
    s = e = w1 = None
    for arm in inside[c]:
        if arm == n:
            continue
        deg = len(inside[arm])
        si = cfg.self_int[arm]
        if deg == 1 and si == -2 and s is None:
            s = arm
        elif deg == 1 and si == -4 and e is None:
            e = arm
        elif deg == 2 and si == -2 and w1 is None:
            w1 = arm
        else:
            return None
    if None in (s, e, w1):
        return None
    w2 = next(u for u in inside[w1] if u != c)
    if cfg.self_int[w2] != -2 or len(inside[w2]) != 1:
        return None
    return n, c, s, w1, w2, e


def _flip_candidates(cfg: CurveConfig):
    plans = []
    for v in cfg.honest_exceptional():
        if cfg.self_int[v] != -1:
            continue
        touched = []
        for run in cfg.runs:
            hit = [(u, cfg.mult(v, u)) for u in run.ids if cfg.mult(v, u)]
            if hit:
                touched.append((run, hit))
        if len(touched) != 1:
            continue  # free (-1)s contract, two-run (-1)s wait
        run, hit = touched[0]
        if len(hit) != 1 or hit[0][1] != 1:
            continue
        u = hit[0][0]
        if run.label is None:
            if _star_shape(cfg, run, u) is not None:
                plans.append(_FlipPlan("star", v, run, u))
            continue
        if u == run.ids[-1] or u == run.ids[0]:
            oriented = run.ids if u == run.ids[-1] else run.ids[::-1]
            chain = tuple(-cfg.self_int[i] for i in oriented)
            collapse = all(e == 2 for e in chain[1:])
            plans.append(_FlipPlan("usual", v, run, u, collapse))
        elif tuple(-cfg.self_int[i] for i in run.ids) == (3, 5, 2) and u == run.ids[1]:
            plans.append(_FlipPlan("mid", v, run, u))
        elif tuple(-cfg.self_int[i] for i in run.ids) == (2, 5, 3) and u == run.ids[1]:
            plans.append(_FlipPlan("mid", v, run, u))
        # other contacts wait; a stall with runs left reports OutOfCatalog
    plans.sort(key=lambda p: (not p.collapse, cfg.seq(p.attach), cfg.seq(p.eminus)))
    return plans


def _ledger_pre(cfg: CurveConfig, plan: _FlipPlan):
    pre, gains, had = {}, {}, {}
    for j in cfg.decorated:
        led = cfg.ledgers[j]
        pre[j] = cfg.ledger_k(j)
        g = sum(c * cfg.mult(w, plan.eminus) for w, c in led.items())
        g += sum(cfg.mult(j, u) for u in plan.run.ids)
        gains[j] = g
        had[j] = led.get(plan.eminus, 0)
    return pre, gains, had


def _ledger_post(cfg, plan, eplus, beta, pre, gains, had, conserve=True):
    ke = cfg.k_degree(eplus)
    for j in cfg.decorated:
        led = cfg.ledgers[j]
        led.pop(plan.eminus, None)
        if gains[j]:
            led[eplus] = led.get(eplus, 0) + beta * gains[j]
        if not conserve:
            continue
        diff = pre[j] - cfg.ledger_k(j)
        if had[j]:
            if ke == 0:
                if diff != 0:
                    raise InternalInconsistency(
                        f"flip at {plan.eminus}: ledger {j} leaks {diff} with K(E+)=0"
                    )
                continue
            gamma = diff / ke
            if gamma.denominator != 1 or gamma < 0:
                raise InternalInconsistency(
                    f"flip at {plan.eminus}: ledger {j} needs gamma={gamma}"
                )
            if gamma:
                led[eplus] = led.get(eplus, 0) + int(gamma)
        elif diff != 0:
            raise InternalInconsistency(
                f"flip at {plan.eminus}: ledger {j} leaks K-degree {diff}"
            )


def _apply_usual(cfg: CurveConfig, plan: _FlipPlan, trace=None) -> None:
    run = plan.run
    oriented = list(run.ids if plan.attach == run.ids[-1] else run.ids[::-1])
    chain = tuple(-cfg.self_int[i] for i in oriented)
    expected = usual_flip(chain, len(chain))
    pre, gains, had = _ledger_pre(cfg, plan)
    cfg.runs.remove(run)
    cfg.contract(plan.eminus)
    k = len(oriented) - 1
    while k >= 0 and cfg.self_int[oriented[k]] == -1:
        cfg.contract(oriented[k])
        k -= 1
    survivors = oriented[: k + 1]
    got = tuple(-cfg.self_int[i] for i in survivors)
    if got != expected.entries:
        raise InternalInconsistency(
            f"flip surgery left {got}, expected {expected.entries}"
        )
    for a, b in expected.runs:
        seg = expected.entries[a:b]
        cfg.runs.append(Run(tuple(survivors[a:b]), wahl_recognize(seg)))
    eplus = survivors[expected.honest()[0]]
    _ledger_post(cfg, plan, eplus, 1, pre, gains, had)
    if trace is not None:
        trace.append(
            {
                "op": "flip",
                "kind": "usual",
                "eminus": plan.eminus,
                "run": list(chain),
                "result": list(expected.entries),
                "eplus": eplus,
            }
        )


def _apply_mid(cfg: CurveConfig, plan: _FlipPlan, trace=None) -> None:
    """The one cataloged interior flip: [3, 5, 2] marked with the (-1) on
    the middle curve; the center blows down, the 3.5 corner blows up, and
    the run splits into [4] and [5, 2] around the new curve."""
    run = plan.run
    ids = run.ids if -cfg.self_int[run.ids[0]] == 3 else run.ids[::-1]
    u1, u2, u3 = ids
    pre, gains, had = _ledger_pre(cfg, plan)
    cfg.runs.remove(run)
    cfg.contract(plan.eminus)  # u2 comes down to -4
    if cfg.mult(u1, u2) != 1:
        raise InternalInconsistency("corner blow-up needs a transverse corner")
    del cfg.edges[frozenset((u1, u2))]
    p = cfg.fresh_vertex("P", -1)
    cfg.add_edge(p, u1)
    cfg.add_edge(p, u2)
    cfg.self_int[u1] -= 1
    cfg.self_int[u2] -= 1
    got = tuple(-cfg.self_int[i] for i in (u1, u2, u3))
    if got != (4, 5, 2):
        raise InternalInconsistency(f"interior flip left {got}, expected (4, 5, 2)")
    cfg.runs.append(Run((u1,), wahl_recognize((4,))))
    cfg.runs.append(Run((u2, u3), wahl_recognize((5, 2))))
    _ledger_post(cfg, plan, p, 2, pre, gains, had)
    if trace is not None:
        trace.append(
            {"op": "flip", "kind": "interior", "eminus": plan.eminus, "eplus": p}
        )


def _apply_star(cfg: CurveConfig, plan: _FlipPlan, trace=None) -> None:
    """Cataloged star flip: the north arm blows down onto the center, the
    inner west curve comes out honest as E+, and the rest re-marks as a
    Du Val point plus a [2, 3, 4] T-run (expanded by normalization).
    K-conservation is not asserted here: the star's contribution to the
    tracked degenerations was pinned with the catalog, not recomputed.
    """
    shape = _star_shape(cfg, plan.run, plan.attach)
    if shape is None:
        raise OutOfCatalog("star flip pattern did not match")
    n, c, s, w1, w2, e = shape
    pre, gains, had = _ledger_pre(cfg, plan)
    if any(had.values()):
        raise InternalInconsistency("star flip with the flip curve in a ledger")
    cfg.runs.remove(plan.run)
    cfg.contract(plan.eminus)
    if cfg.self_int[n] != -1:
        raise InternalInconsistency("north curve not (-1) after the flip blow-down")
    cfg.contract(n)
    got = tuple(-cfg.self_int[i] for i in (s, c, e))
    if got != (2, 3, 4):
        raise InternalInconsistency(f"star flip left {got}, expected (2, 3, 4)")
    cfg.runs.append(Run((s, c, e), t_recognize((2, 3, 4))))
    # w1 and w2 come out honest; w2 is an A1 point, kept resolved
    _ledger_post(cfg, plan, w1, 2, pre, gains, had, conserve=False)
    if trace is not None:
        trace.append(
            {"op": "flip", "kind": "star", "eminus": plan.eminus, "eplus": w1}
        )


def _contract_candidates(cfg: CurveConfig):
    marked = {i for run in cfg.runs for i in run.ids}
    out = []
    for v in cfg.honest_exceptional():
        if cfg.self_int[v] != -1:
            continue
        if any(u in marked for u, _ in cfg.adjacency(v)):
            continue  # flips and waits are handled elsewhere
        near_dec = any(cfg.mult(v, j) for j in cfg.decorated)
        out.append((not near_dec, cfg.seq(v), v))
    out.sort()
    return [v for _, _, v in out]


def _emit_column(cfg: CurveConfig, v: str) -> tuple[int, ...]:
    col = []
    for j in cfg.decorated:
        led = cfg.ledgers[j]
        x = sum(c * cfg.mult(w, v) for w, c in led.items() if w != v)
        x += led.get(v, 0) * cfg.self_int[v]
        col.append(x)
    if not any(col):
        raise InternalInconsistency(f"contraction of {v} emits a zero column")
    if any(x < 0 for x in col):
        raise InternalInconsistency(f"contraction of {v} emits negatives: {col}")
    return tuple(col)


def run_phi_pi(cfg: CurveConfig, trace=None) -> IncidenceMatrix:
    """Run the flip/contraction loop to the incidence matrix.

    One move per iteration: the first flip in priority order (chain
    collapses first, then by age of the attachment and of the flip curve),
    else the first free (-1) contraction (curvetta-adjacent first). Each
    contraction emits one column; flips emit none. Ends when no exceptional
    curve remains, then validates the matrix against the decoration data.
    """
    max_steps = 10 * (len(cfg.self_int) + 10)
    columns = []
    steps = 0
    while True:
        steps += 1
        if steps > max_steps:
            raise NonTerminating(f"no progress after {max_steps} moves")
        _normalize(cfg, trace)
        plans = _flip_candidates(cfg)
        if plans:
            plan = plans[0]
            if plan.kind == "usual":
                _apply_usual(cfg, plan, trace)
            elif plan.kind == "mid":
                _apply_mid(cfg, plan, trace)
            else:
                _apply_star(cfg, plan, trace)
            cfg.check_invariants()
            continue
        cands = _contract_candidates(cfg)
        if cands:
            v = cands[0]
            col = _emit_column(cfg, v)
            columns.append(col)
            for j in cfg.decorated:
                cfg.ledgers[j].pop(v, None)
            cfg.contract(v)
            cfg.check_invariants()
            if trace is not None:
                trace.append({"op": "contract", "vertex": v, "column": list(col)})
            continue
        break
    if cfg.runs:
        stuck = [tuple(-cfg.self_int[i] for i in run.ids) for run in cfg.runs]
        raise OutOfCatalog(f"stalled with marked runs {stuck}")
    left = cfg.exceptional()
    if left:
        raise InternalInconsistency(f"stalled with exceptional curves {sorted(left)}")
    rows = tuple(tuple(col[i] for col in columns) for i in range(len(cfg.decorated)))
    M = IncidenceMatrix(rows, cfg.data)
    report = validate_incidence(M, cfg.data)
    if not report:
        bad = [l for l in report.lines if l.endswith("FAIL")]
        raise InternalInconsistency("matrix fails its constraints: " + "; ".join(bad))
    return M


def phi_pi(n: int, a: int, m_res: PChain, trace=None) -> IncidenceMatrix:
    """Incidence matrix of the smoothing component given by an M- or
    P-resolution of the cyclic quotient (n, a)."""
    structure = build_sandwiched_cqss(n, a)
    cfg = compactify_m_resolution(m_res, structure)
    return run_phi_pi(cfg, trace)


# -- star-shaped (weighted homogeneous) structures -------------------------


@dataclass(frozen=True)
class SandwichedStarStructure:
    """Compactification recipe for a star-shaped singularity: the minimal
    star, the arm each curvetta hangs off (at the arm's end), and the
    decorated-curve constraints."""

    params: tuple[int, int, int]
    graph: StarGraph
    f_on: tuple[int, ...]
    data: DecoratedCurveData


def build_sandwiched_wpqr(p: int, q: int, r: int) -> SandwichedStarStructure:
    """Sandwiched presentation of the W(p, q, r) star.

    Central -4; the arm with q twos ends in -(p+3) and carries p+2
    curvettas of decoration q+3, and cyclically. Curvettas on one end meet
    each other in all their base points and curvettas on different ends
    only in the first one, so the intersection table is q+2 / r+2 / p+2 on
    the diagonal blocks and 1 everywhere else. All curvettas are smooth
    (delta 0).
    """
    if min(p, q, r) < 0:
        raise ValueError("p, q, r must be nonnegative")
    graph = StarGraph(
        4,
        (
            (2,) * q + (p + 3,),
            (2,) * r + (q + 3,),
            (2,) * p + (r + 3,),
        ),
    )
    counts = (p + 2, q + 2, r + 2)
    ls = (q + 3, r + 3, p + 3)
    same = (q + 2, r + 2, p + 2)
    rows: list[tuple[int, int]] = []
    f_on: list[int] = []
    for arm, (cnt, l) in enumerate(zip(counts, ls)):
        rows.extend([(0, l)] * cnt)
        f_on.extend([arm] * cnt)
    s = len(rows)
    inter = [
        tuple(
            0 if i == j else (same[f_on[i]] if f_on[i] == f_on[j] else 1)
            for j in range(s)
        )
        for i in range(s)
    ]
    blocks = []
    at = 0
    for cnt in counts:
        blocks.append(tuple(range(at, at + cnt)))
        at += cnt
    data = DecoratedCurveData(tuple(rows), tuple(inter), central=(), arms=tuple(blocks))
    return SandwichedStarStructure((p, q, r), graph, tuple(f_on), data)


def _provenance_blow_down_star(m_res: PStar, target: StarGraph):
    """Contract arm 1s of m_res down to the target star, returning for each
    target arm position the m_res arm index that survives there. Arms
    correspond in order, not up to permutation."""
    if len(m_res.arms) != len(target.arms):
        raise IncompatibleResolution(
            f"{len(m_res.arms)} arms for a {len(target.arms)}-armed star"
        )
    center = m_res.center
    arms = [list(a) for a in m_res.arms]
    idx = [list(range(len(a))) for a in m_res.arms]
    while True:
        hit = False
        for arm, ix in zip(arms, idx):
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
                del ix[j]
                hit = True
                break
            if hit:
                break
        if not hit:
            break
        if center < 1 or any(b < 1 for a in arms for b in a):
            raise IncompatibleResolution("not a blow-up of the target star")
    if center != target.center or tuple(tuple(a) for a in arms) != target.arms:
        raise IncompatibleResolution(
            f"contracts to {center}/{arms}, not the target star"
        )
    return idx


def compactify_star_resolution(
    m_res: PStar, structure: SandwichedStarStructure
) -> CurveConfig:
    """Curve configuration of the compactified star M-resolution. Curvetta
    j reattaches at the surviving image of its arm's end."""
    prov = _provenance_blow_down_star(m_res, structure.graph)
    cfg = CurveConfig(structure.data)
    vals = m_res.vertex_values()
    zs = {"c": cfg.add_vertex("Zc", -m_res.center)}
    for i, arm in enumerate(m_res.arms):
        prev = "Zc"
        for j in range(len(arm)):
            v = cfg.add_vertex(f"Z{i}.{j}", -arm[j])
            cfg.add_edge(prev, v)
            zs[(i, j)] = v
            prev = v
    for run in m_res.runs:
        seg = tuple(vals[v] for v in run)
        if all(e == 2 for e in seg):
            continue  # Du Val points stay resolved on the runner's surface
        label = wahl_recognize(seg) or t_recognize(seg)
        if label is None:
            raise IncompatibleResolution(f"run {list(seg)} is neither T nor Du Val")
        cfg.runs.append(Run(tuple(zs[v] for v in run), label))
    dec = []
    for j, arm_i in enumerate(structure.f_on):
        end = zs[(arm_i, prov[arm_i][-1])]
        f = cfg.add_vertex(f"F{j + 1}", -1)
        cfg.add_edge(f, end)
        c = cfg.add_vertex(f"C{j + 1}", 0)
        cfg.add_edge(c, f)
        dec.append(c)
    cfg.decorated = tuple(dec)
    cfg.ledgers = {j: {j: 1} for j in dec}
    inf = cfg.add_vertex("Inf", 0)
    cfg.infinity = inf
    for c in dec:
        cfg.add_edge(inf, c)
    cfg.check_invariants()
    return cfg


def phi_pi_wpqr(p: int, q: int, r: int, m_res: PStar, trace=None) -> IncidenceMatrix:
    """Incidence matrix of the smoothing component given by a star-shaped
    M- or P-resolution of W(p, q, r)."""
    structure = build_sandwiched_wpqr(p, q, r)
    cfg = compactify_star_resolution(m_res, structure)
    return run_phi_pi(cfg, trace)
