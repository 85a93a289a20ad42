"""The W(p,q,r) case study.

Star graph, the seven families of combinatorial incidence matrices with
their validity conditions, explicit P-resolutions for the non-QHD
families, the two QHD ample embeddings, and the cross-check harness that
ties the classification to brute-force enumeration.

Row order everywhere: the p+2 A-curvettas (decoration q+3), then the q+2
B-curvettas (r+3), then the r+2 C-curvettas (p+3), matching
build_sandwiched_wpqr. Family matrices are built from their block
descriptions: identity, complement-identity (J - I) and all-ones blocks,
parameterized by the per-arm type choice I/II where II exists.
"""

from __future__ import annotations

from .errors import (
    ConditionViolated,
    InternalInconsistency,
    MismatchReport,
)
from .matrices import IncidenceMatrix, enumerate_incidence, milnor_number, validate_incidence
from .surface import build_sandwiched_wpqr
from .tclass import PStar, StarGraph, is_p_resolution

ARM_NAMES = ("A", "B", "C")


def _params(params) -> tuple[int, int, int]:
    p, q, r = params
    if min(p, q, r) < 0:
        raise ValueError("p, q, r must be nonnegative")
    return int(p), int(q), int(r)


def wpqr_graph(params) -> StarGraph:
    """Minimal resolution star of W(p,q,r)."""
    return build_sandwiched_wpqr(*_params(params)).graph


# -- block assembly ---------------------------------------------------------


def _ones(n):
    return (1,) * n


def _zeros(n):
    return (0,) * n


def _unit(n, i):
    return tuple(1 if j == i else 0 for j in range(n))


def _co_unit(n, i):
    return tuple(0 if j == i else 1 for j in range(n))


def _matrix(p, q, r, cols) -> IncidenceMatrix:
    size = (p + 2) + (q + 2) + (r + 2)
    if any(len(c) != size for c in cols):
        raise InternalInconsistency("family column of the wrong height")
    m = IncidenceMatrix(tuple(zip(*cols)))
    report = validate_incidence(m, build_sandwiched_wpqr(p, q, r).data)
    if not report.ok:
        raise InternalInconsistency(f"family matrix fails validation: {report}")
    return m


def _m12_cols(p, q, r, drop, kinds):
    """Columns of M(1) (drop=1) or M(2) (drop=2) for a per-arm choice of
    block types. kinds[i] = "II" replaces arm i's identity block by J - I
    and shortens its run of private all-ones columns by (p,q,r)[i]."""
    sizes = (p + 2, q + 2, r + 2)
    picks = (p, q, r)
    cols = []
    if drop == 1:
        cols.append(_ones(sizes[0]) + _ones(sizes[1]) + _ones(sizes[2]))
    else:
        cols.append(_ones(sizes[0]) + _ones(sizes[1]) + _zeros(sizes[2]))
        cols.append(_zeros(sizes[0]) + _ones(sizes[1]) + _ones(sizes[2]))
        cols.append(_ones(sizes[0]) + _zeros(sizes[1]) + _ones(sizes[2]))
    for i in range(3):
        n = sizes[i]
        width = sizes[(i + 1) % 3] - drop
        if kinds[i] == "II":
            if picks[i] < 1:
                raise ConditionViolated(f"{ARM_NAMES[i]}(II) needs {ARM_NAMES[i].lower()} >= 1")
            width -= picks[i]
            if width < 0:
                raise ConditionViolated(
                    f"{ARM_NAMES[i]}(II) leaves {width} all-ones columns"
                )
            block = [_co_unit(n, k) for k in range(n)]
        else:
            block = [_unit(n, k) for k in range(n)]
        pre = sum(sizes[:i])
        post = sum(sizes[i + 1 :])
        for piece in block + [_ones(n)] * width:
            cols.append(_zeros(pre) + piece + _zeros(post))
    return cols


def _m3_pieces(P, Q, R, sub):
    """Column pieces (on the P-arm, Q-arm, R-arm row blocks) of the M(3)
    construction over parameters (P,Q,R): the P-arm identity block carries
    all-ones on the Q-rows, alpha and beta tie the R-rows to the other two
    blocks, and the Q-block comes in type I or II."""
    nP, nQ, nR = P + 2, Q + 2, R + 2
    if sub == "I":
        if R - P < 1:
            raise ConditionViolated("type I needs r - p >= 1")
        q_block = [_unit(nQ, k) for k in range(nQ)]
        q_extra = R - P - 1
    else:
        if Q < 1 or R - P - Q < 1:
            raise ConditionViolated("type II needs q >= 1 and r - p - q >= 1")
        q_block = [_co_unit(nQ, k) for k in range(nQ)]
        q_extra = R - P - Q - 1
    pieces = []
    for k in range(nP):
        pieces.append((_unit(nP, k), _ones(nQ), _zeros(nR)))
    pieces.append((_ones(nP), _zeros(nQ), _ones(nR)))  # alpha
    pieces.append((_zeros(nP), _ones(nQ), _ones(nR)))  # beta
    for _ in range(Q + 1):
        pieces.append((_ones(nP), _zeros(nQ), _zeros(nR)))
    for piece in q_block + [_ones(nQ)] * q_extra:
        pieces.append((_zeros(nP), piece, _zeros(nR)))
    for k in range(nR):
        pieces.append((_zeros(nP), _zeros(nQ), _unit(nR, k)))
    for _ in range(P):
        pieces.append((_zeros(nP), _zeros(nQ), _ones(nR)))
    return pieces


# constr-arm -> original-arm offset for M(3), M(4), M(5): the rotation
# (p,q,r) -> (q,r,p) sends the construction's special arm to B, etc.
_M345_ROT = {"M(3)": 0, "M(4)": 1, "M(5)": 2}


def _m345_cols(p, q, r, tag, sub):
    rot = _M345_ROT[tag]
    P, Q, R = ((p, q, r) * 2)[rot : rot + 3]
    cols = []
    for triple in _m3_pieces(P, Q, R, sub):
        ordered = tuple(triple[(i - rot) % 3] for i in range(3))
        cols.append(ordered[0] + ordered[1] + ordered[2])
    return cols


def _m6_cols(p, q, r, reverse=False):
    """M(6): for each arm, one identity column block carrying all-ones on
    the previous arm's rows. M(7) (reverse=True, p=q=r only) orients the
    ones the other way around."""
    sizes = (p + 2, q + 2, r + 2)
    cols = []
    for i in range(3):
        other = (i + 2) % 3 if not reverse else (i + 1) % 3
        for k in range(sizes[i]):
            piece = [_zeros(sizes[0]), _zeros(sizes[1]), _zeros(sizes[2])]
            piece[i] = _unit(sizes[i], k)
            piece[other] = _ones(sizes[other])
            cols.append(piece[0] + piece[1] + piece[2])
    return cols


def _kind_choices(p, q, r, drop):
    """Admissible (A,B,C) type vectors for M(1)/M(2); II needs the pick
    positive and enough all-ones columns left after dropping the shared
    ones."""
    sizes = (p + 2, q + 2, r + 2)
    picks = (p, q, r)
    per_arm = []
    for i in range(3):
        kinds = ["I"]
        if picks[i] >= 1 and sizes[(i + 1) % 3] - picks[i] - drop >= 0:
            kinds.append("II")
        per_arm.append(kinds)
    return [
        (a, b, c) for a in per_arm[0] for b in per_arm[1] for c in per_arm[2]
    ]


def wpqr_families(params):
    """All combinatorial incidence matrices of W(p,q,r), as (tag, matrix,
    conditions) triples, deduplicated after canonicalization.

    Tags are M(1)..M(7); conditions name the per-arm type choice that
    produced the matrix, e.g. ("A(II)", "B(I)", "C(I)").
    """
    p, q, r = _params(params)
    out = []
    seen = set()

    def emit(tag, conds, cols):
        m = _matrix(p, q, r, cols)
        if m.rows in seen:
            return
        seen.add(m.rows)
        out.append((tag, m, tuple(conds)))

    for drop, tag in ((1, "M(1)"), (2, "M(2)")):
        for kinds in _kind_choices(p, q, r, drop):
            conds = [f"{ARM_NAMES[i]}({kinds[i]})" for i in range(3)]
            emit(tag, conds, _m12_cols(p, q, r, drop, kinds))
    for tag, special in (("M(3)", "B"), ("M(4)", "C"), ("M(5)", "A")):
        for sub in ("I", "II"):
            try:
                cols = _m345_cols(p, q, r, tag, sub)
            except ConditionViolated:
                continue
            emit(tag, [f"{special}({sub})"], cols)
    emit("M(6)", [], _m6_cols(p, q, r))
    if p == q == r:
        emit("M(7)", [], _m6_cols(p, q, r, reverse=True))
    return tuple(out)


# -- P-resolutions ----------------------------------------------------------


def _m12_pstar(p, q, r, central, kinds):
    """Items (1)-(7): the minimal star with an optional central [4] run and
    an optional Wahl run [k+3, 2^(k-1)] at the end of each arm with pick
    k >= 1. The central run forces one extra honest 2 below each arm run."""
    twos = (q, r, p)
    picks = (p, q, r)
    arms = []
    runs = []
    if central:
        runs.append(("c",))
    for i in range(3):
        arms.append((2,) * twos[i] + (picks[i] + 3,))
        if kinds[i] != "II":
            continue
        k = picks[i]
        if k < 1:
            raise ConditionViolated(f"{ARM_NAMES[i]}(II) needs {ARM_NAMES[i].lower()} >= 1")
        start = twos[i] - k + 1
        if start < 0 or (central and start < 1):
            raise ConditionViolated(
                f"{ARM_NAMES[i]}(II) run does not fit on arm {i}"
            )
        runs.append(tuple((i, j) for j in range(start, twos[i] + 1)))
    return PStar(4, tuple(arms), tuple(runs))


def _m3_pstar(P, Q, R, sub):
    """P-resolution of the M(3) construction over (P,Q,R): blow up once so
    the first arm carries the T-chain [P+3, 2^(Q-1), 3, 2^P] (flattened to
    [P+4, 2^P] when Q = 0), mark the center Wahl chain [P+5, 2^(P+1)] down
    the second arm, and for type II also mark [2^(Q-1), Q+3] at its end."""
    if sub == "I":
        if R - P < 1:
            raise ConditionViolated("type I needs r - p >= 1")
    else:
        if Q < 1 or R - P - Q < 1:
            raise ConditionViolated("type II needs q >= 1 and r - p - q >= 1")
    if Q >= 1:
        arm0 = (1,) + (2,) * P + (3,) + (2,) * (Q - 1) + (P + 3,)
        run0 = tuple((0, j) for j in range(1, P + Q + 2))
    else:
        arm0 = (1,) + (2,) * P + (P + 4,)
        run0 = tuple((0, j) for j in range(1, P + 2))
    arm1 = (2,) * R + (Q + 3,)
    arm2 = (2,) * P + (R + 3,)
    runs = [run0, ("c",) + tuple((1, j) for j in range(P + 1))]
    if sub == "II":
        runs.append(tuple((1, j) for j in range(R - Q + 1, R + 1)))
    return P + 5, (arm0, arm1, arm2), tuple(runs)


def _rotate_pstar(center, arms, runs, rot):
    out_arms = [None, None, None]
    for i in range(3):
        out_arms[(i + rot) % 3] = arms[i]
    out_runs = tuple(
        tuple(v if v == "c" else ((v[0] + rot) % 3, v[1]) for v in run)
        for run in runs
    )
    return PStar(center, tuple(out_arms), out_runs)


def wpqr_p_resolutions(params):
    """P-resolutions for every non-QHD family entry, as (tag, conditions,
    PStar) triples keyed like wpqr_families. Every output passes
    is_p_resolution against wpqr_graph."""
    p, q, r = _params(params)
    target = wpqr_graph(params)
    out = []
    seen = set()

    def emit(tag, conds, ps):
        key = (tag, tuple(conds))
        if key in seen:  # degenerate choices collapse like the matrices do
            return
        seen.add(key)
        if not is_p_resolution(ps, target):
            raise InternalInconsistency(f"{tag} {conds} candidate is not a P-resolution")
        out.append((tag, tuple(conds), ps))

    for central, tag in ((False, "M(1)"), (True, "M(2)")):
        for kinds in _kind_choices(p, q, r, 1 if not central else 2):
            conds = [f"{ARM_NAMES[i]}({kinds[i]})" for i in range(3)]
            emit(tag, conds, _m12_pstar(p, q, r, central, kinds))
    for tag, special in (("M(3)", "B"), ("M(4)", "C"), ("M(5)", "A")):
        rot = _M345_ROT[tag]
        P, Q, R = ((p, q, r) * 2)[rot : rot + 3]
        for sub in ("I", "II"):
            try:
                center, arms, runs = _m3_pstar(P, Q, R, sub)
            except ConditionViolated:
                continue
            emit(tag, [f"{special}({sub})"], _rotate_pstar(center, arms, runs, rot))
    return tuple(out)


# -- QHD ample embeddings ---------------------------------------------------


def qhd_embeddings(params):
    """The cataloged ample embeddings of the compactifying divisor whose
    smoothings of negative weight give the QHD components: one wheel for
    M(6), the mirrored wheel for M(7) when p = q = r.

    Each graph is (self_int, edges) with a +1 central curve, three chains
    [-(k+2), 2^(m+1)] hanging off it, and three (-1)-curves joining each
    chain's far end to the next chain's head.
    """
    p, q, r = _params(params)

    def wheel(heads, tails, step):
        self_int = {"Z": 1}
        edges = []
        for i, (h, t) in enumerate(zip(heads, tails)):
            self_int[(i, 0)] = -(h + 2)
            edges.append(("Z", (i, 0)))
            for j in range(1, t + 2):
                self_int[(i, j)] = -2
                edges.append(((i, j - 1), (i, j)))
        for i, t in enumerate(tails):
            e = f"E{i}"
            self_int[e] = -1
            edges.append(((i, t + 1), e))
            edges.append((e, ((i + step) % 3, 0)))
        return self_int, tuple(edges)

    out = {"M(6)": wheel((q, p, r), (p, r, q), 1)}
    if p == q == r:
        out["M(7)"] = wheel((p, p, p), (p, p, p), 2)
    return out


def _contracts_to_line(self_int, edges) -> bool:
    """Graph-level consistency of an ample embedding: contracting
    (-1)-curves (and whatever they create) must end at a single +1 curve,
    the image of a line in the plane."""
    si = dict(self_int)
    mult = {}
    for u, v in edges:
        key = frozenset((u, v))
        mult[key] = mult.get(key, 0) + 1
    while True:
        v = next((w for w, s in si.items() if s == -1), None)
        if v is None:
            break
        nbrs = []
        for key, m in list(mult.items()):
            if v in key:
                (u,) = key - {v}
                nbrs.append((u, m))
                del mult[key]
        for u, m in nbrs:
            si[u] += m * m
        for i, (u, mu) in enumerate(nbrs):
            for w, mw in nbrs[i + 1 :]:
                key = frozenset((u, w))
                mult[key] = mult.get(key, 0) + mu * mw
        del si[v]
    return len(si) == 1 and set(si.values()) == {1}


# -- the cross-check harness ------------------------------------------------

QHD_TAGS = ("M(6)", "M(7)")


def kollar_check(params) -> dict:
    """Cross-check the classification at one parameter tuple.

    Brute-force enumeration from the curvetta data must coincide with the
    classified family matrices; every non-QHD family must come with a
    P-resolution that passes is_p_resolution; the QHD families must have
    Milnor number zero and a consistent ample embedding. Returns a report
    dict; raises MismatchReport when enumeration finds an unclassified
    matrix or a family fails its checks.
    """
    p, q, r = _params(params)
    if max(p, q, r) > 3:
        raise ValueError("cross-check is desk-scale: p, q, r <= 3")
    families = wpqr_families(params)
    by_rows = {m.rows: (tag, conds) for tag, m, conds in families}
    if len(by_rows) != len(families):
        raise MismatchReport(f"duplicate family matrices at {params}")
    enumerated = enumerate_incidence(build_sandwiched_wpqr(p, q, r).data)
    extra = [m for m in enumerated if m.rows not in by_rows]
    if extra:
        raise MismatchReport(
            f"enumeration found {len(extra)} unclassified matrices at {params}: "
            f"{[m.columns() for m in extra]}"
        )
    if len(enumerated) != len(families):
        realized = {e.rows for e in enumerated}
        missing = [tag for tag, m, _ in families if m.rows not in realized]
        raise MismatchReport(f"families {missing} not realized by enumeration at {params}")

    presolutions = {(tag, conds): ps for tag, conds, ps in wpqr_p_resolutions(params)}
    rows = []
    for tag, m, conds in families:
        mu = milnor_number(m)
        if tag in QHD_TAGS:
            if mu != 0:
                raise MismatchReport(f"{tag} has Milnor number {mu}, expected 0")
            rows.append({"tag": tag, "conditions": list(conds), "mu": mu, "qhd": True})
            continue
        if mu <= 0:
            raise MismatchReport(f"{tag} {conds} has Milnor number {mu}, expected > 0")
        if (tag, conds) not in presolutions:
            raise MismatchReport(f"no P-resolution constructed for {tag} {conds}")
        rows.append({"tag": tag, "conditions": list(conds), "mu": mu, "qhd": False})
    embeddings = qhd_embeddings(params)
    for tag, (si, edges) in embeddings.items():
        if not _contracts_to_line(si, edges):
            raise MismatchReport(f"{tag} ample embedding fails the blow-down check")
    return {
        "params": [p, q, r],
        "families": len(families),
        "enumerated": len(enumerated),
        "qhd": sorted(embeddings),
        "rows": rows,
    }
