"""Extremal neighborhoods of Wahl singularities: invariants, Mori
sequences, flips and divisorial contractions, degeneration coefficients.

Conventions. A Wahl slot is a coprime pair (m, a) with 0 < a < m; (1, 1)
marks a smooth point. An mk2A neighborhood is written
[(m2, a2)] - 1 - [(m1, a1)]: the flipping curve meets the left singularity
with the chain of (m2, a2) reversed and the right one with the chain of
(m1, a1) as is, so the resolved picture left to right reads
reverse(chain2), 1, chain1. An mk1A is a Wahl chain with one marked curve
(1-based index) crossed by the flipping curve.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import (
    InternalInconsistency,
    NonIntegralBeta,
    NonPositiveDelta,
    NotEndMarked,
    NotFlipping,
    NotInitial,
    NotWahl,
)
from .hjcf import hj_eval, hj_eval_pair, hj_expand
from .tclass import PChain, canonical_degree, wahl_recognize

SMOOTH = (1, 1)


def _valid_slot(slot) -> tuple[int, int]:
    m, a = slot
    if (m, a) == SMOOTH:
        return SMOOTH
    if m < 2 or not 0 < a < m or gcd(m, a) != 1:
        raise ValueError(f"invalid Wahl slot {slot}")
    return m, a


def slot_chain(slot) -> tuple[int, ...]:
    """Resolution chain of a Wahl slot; empty for a smooth point."""
    m, a = slot
    if (m, a) == SMOOTH:
        return ()
    return hj_expand(m * m, m * a - 1)


@dataclass(frozen=True)
class NbhdInvariants:
    delta: int
    Delta: int
    Omega: int
    k_degree: Fraction
    c_squared: Fraction


@dataclass(frozen=True)
class Mk1A:
    chain: tuple[int, ...]
    index: int  # 1-based marked curve
    m: int
    a: int
    invariants: NbhdInvariants


@dataclass(frozen=True)
class Mk2A:
    left: tuple[int, int]  # (m2, a2)
    right: tuple[int, int]  # (m1, a1)
    invariants: NbhdInvariants

    @property
    def resolved_chain(self) -> tuple[int, ...]:
        return tuple(reversed(slot_chain(self.left))) + (1,) + slot_chain(self.right)


@dataclass(frozen=True)
class ExtremalPRes:
    """Flip target [(m2', a2')] - c - [(m1', a1')], smooth slots allowed."""

    left: tuple[int, int]
    right: tuple[int, int]
    c: int

    @property
    def resolved_chain(self) -> tuple[int, ...]:
        return (
            tuple(reversed(slot_chain(self.left))) + (self.c,) + slot_chain(self.right)
        )


@dataclass(frozen=True)
class Classification:
    kind: str  # "flipping" or "divisorial"
    initial: Mk2A
    steps: int
    flip: ExtremalPRes | None


def mk1a_invariants(chain, index: int) -> Mk1A:
    """Invariants of the mk1A given by a Wahl chain with curve `index` marked.

    beta runs down from the right end, alpha and gamma up from the left;
    delta = (beta_i + alpha_i)/m, Delta = m^2 - beta_i alpha_i,
    Omega = (ma - 1) - gamma_i beta_i, K.C = -delta/m, C.C = -Delta/m^2.
    """
    e = tuple(chain)
    w = wahl_recognize(e)
    if w is None:
        raise NotWahl(f"{list(e)} is not a Wahl chain")
    s = len(e)
    if not 1 <= index <= s:
        raise ValueError(f"index {index} out of range")
    m, a = w.m, w.a
    beta = [0] * (s + 2)  # beta[j] for j = 0..s+1
    beta[s + 1], beta[s] = 0, 1
    for j in range(s - 1, -1, -1):
        beta[j] = e[j] * beta[j + 1] - beta[j + 2]
    alpha = [0] * (s + 1)
    gamma = [0] * (s + 1)
    alpha[0], gamma[0] = 0, -1
    if s >= 1:
        alpha[1], gamma[1] = 1, 0
    for j in range(2, s + 1):
        alpha[j] = e[j - 2] * alpha[j - 1] - alpha[j - 2]
        gamma[j] = e[j - 2] * gamma[j - 1] - gamma[j - 2]
    if beta[0] != m * m or beta[1] != m * a - 1:
        raise InternalInconsistency("beta recursion broke")
    num = beta[index] + alpha[index]
    if num % m:
        raise InternalInconsistency(f"delta not integral for {list(e)} at {index}")
    delta = num // m
    if delta <= 0:
        raise NonPositiveDelta(f"delta = {delta}")
    Delta = m * m - beta[index] * alpha[index]
    if Delta <= 0:
        raise NonPositiveDelta(
            f"Delta = {Delta}: the marked curve does not contract"
        )
    Omega = (m * a - 1) - gamma[index] * beta[index]
    if Omega <= 0:
        raise InternalInconsistency(f"Omega = {Omega} with Delta > 0")
    dec = e[:index - 1] + (e[index - 1] - 1,) + e[index:]
    if hj_eval(dec) != Fraction(Delta, Omega):
        raise InternalInconsistency("Delta/Omega certificate failed")
    inv = NbhdInvariants(
        delta, Delta, Omega, Fraction(-delta, m), Fraction(-Delta, m * m)
    )
    return Mk1A(e, index, m, a, inv)


def mk2a_invariants(left, right) -> Mk2A:
    """Invariants of [(m2, a2)] - 1 - [(m1, a1)]."""
    m2, a2 = _valid_slot(left)
    m1, a1 = _valid_slot(right)
    delta = m1 * a2 + m2 * a1 - m1 * m2
    if delta <= 0:
        raise NonPositiveDelta(f"delta = {delta} for {left}, {right}")
    Delta = m1 * m1 + m2 * m2 - delta * m1 * m2
    if Delta <= 0:
        raise NonPositiveDelta(
            f"Delta = {Delta}: the middle curve does not contract"
        )
    Omega = (m2 - delta * m1) * (m2 - a2) + m1 * a1 - 1
    if Omega <= 0:
        raise InternalInconsistency(f"Omega = {Omega} with Delta > 0")
    if (m2, a2) == SMOOTH and (m1, a1) == SMOOTH:
        raise ValueError("at least one slot must be singular")
    mk = Mk2A(
        (m2, a2),
        (m1, a1),
        NbhdInvariants(
            delta,
            Delta,
            Omega,
            Fraction(-delta, m1 * m2),
            Fraction(-Delta, m1 * m1 * m2 * m2),
        ),
    )
    # Certify against the formal evaluation of the resolved picture; a
    # smooth left slot leaves the flipping curve at the end, where it is
    # contracted instead (a leading 1 does not preserve the evaluation).
    cert = mk.resolved_chain
    if (m2, a2) == SMOOTH:
        e = slot_chain((m1, a1))
        cert = (e[0] - 1,) + e[1:]
    if hj_eval(cert) != Fraction(Delta, Omega):
        raise InternalInconsistency("Delta/Omega certificate failed")
    return mk


def _neighbor_slots(delta: int, Omega: int, m_new: int, m_kept: int):
    """Solve the delta and Omega constraints for the a-parameters of the
    neighborhood [(m_new, x)] - 1 - [(m_kept, z)]."""
    # m_kept*x + m_new*z - m_new*m_kept = delta
    # (m_new - delta*m_kept)*(m_new - x) + m_kept*z - 1 = Omega
    # Subtracting eliminates z when expanded; solve exactly over Fractions.
    d = Fraction(delta)
    c1, c2, r1 = Fraction(m_kept), Fraction(m_new), d + m_new * m_kept
    t = Fraction(m_new - delta * m_kept)
    # t*(m_new - x) + m_kept*z = Omega + 1
    c3, c4, r2 = -t, Fraction(m_kept), Fraction(Omega + 1) - t * m_new
    det = c1 * c4 - c2 * c3
    if det == 0:
        raise InternalInconsistency("degenerate slot system")
    x = (r1 * c4 - c2 * r2) / det
    z = (c1 * r2 - r1 * c3) / det
    if x.denominator != 1 or z.denominator != 1:
        raise InternalInconsistency("non-integral slot solution")
    return int(x), int(z)


def _as_mk2a(nbhd) -> Mk2A:
    if isinstance(nbhd, Mk2A):
        return nbhd
    left, right = nbhd
    return mk2a_invariants(left, right)


def is_initial(nbhd) -> bool:
    mk = _as_mk2a(nbhd)
    return mk.invariants.delta * mk.right[0] - mk.left[0] <= 0


def _to_initial_oriented(nbhd) -> tuple[Mk2A, int, bool]:
    mk = _as_mk2a(nbhd)
    delta = mk.invariants.delta
    steps = 0
    mirrored = False
    while True:
        m2, m1 = mk.left[0], mk.right[0]
        m0 = delta * m1 - m2
        if m0 <= 0:
            return mk, steps, mirrored
        if m0 >= m1:
            if mirrored:
                raise InternalInconsistency("antecedent walk does not descend")
            mirrored = True
            mk = mk2a_invariants(mk.right, mk.left)
            continue
        x, z = _neighbor_slots(delta, mk.invariants.Omega, m_new=m1, m_kept=m0)
        prev = mk.invariants
        mk = mk2a_invariants((m1, x), (m0, z))
        if (mk.invariants.delta, mk.invariants.Omega) != (prev.delta, prev.Omega):
            raise InternalInconsistency("invariants drifted along the sequence")
        steps += 1


def to_initial(nbhd) -> tuple[Mk2A, int]:
    """Walk the Mori sequence down to its initial member.

    A genuine antecedent step has m0 = delta*m1 - m2 < m1; failing that
    the presentation is mirror-oriented, and since the left chain is
    stored reversed the mirror is the plain slot swap (delta and Delta
    are symmetric, Omega conjugates). Returns (initial, antecedent steps).
    """
    mk, steps, _ = _to_initial_oriented(nbhd)
    return mk, steps


def classify(nbhd) -> Classification:
    """Flipping or divisorial, decided at the initial member."""
    initial, steps = to_initial(nbhd)
    delta = initial.invariants.delta
    m2, m1 = initial.left[0], initial.right[0]
    if delta * m1 - m2 == 0:
        return Classification("divisorial", initial, steps, None)
    return Classification("flipping", initial, steps, flip(nbhd))


def flip(nbhd) -> ExtremalPRes:
    """Extremal P-resolution replacing a flipping neighborhood.

    Reported in the orientation of the input: if the initial member was
    reached through a mirror, the result is mirrored back."""
    initial, _, mirrored = _to_initial_oriented(nbhd)
    delta = initial.invariants.delta
    (m2, a2), (m1, a1) = initial.left, initial.right
    if delta * m1 - m2 == 0:
        raise NotFlipping(f"{initial} is divisorial")
    m2p = m1
    a2p = m1 - a1 if m1 > 1 else 1
    m1p = m2 - delta * m1
    if m1p == 1:
        a1p = 1
    else:
        a1p = (m2 - a2 - delta * a1) % m1p
        if a1p == 0:
            a1p = m1p
    for slot in ((m2p, a2p), (m1p, a1p)):
        _valid_slot(slot)
    num = delta + m1p * a2p + m2p * a1p
    if num % (m1p * m2p):
        raise InternalInconsistency("flip curve coefficient not integral")
    c = num // (m1p * m2p)
    res = ExtremalPRes((m2p, a2p), (m1p, a1p), c)
    want = Fraction(initial.invariants.Delta, initial.invariants.Omega)
    if hj_eval(res.resolved_chain) != want:
        raise InternalInconsistency("flip Delta/Omega certificate failed")
    if mirrored:
        res = ExtremalPRes(res.right, res.left, res.c)
    return res


def mori_sequence(nbhd, count: int) -> list[Mk2A]:
    """First `count` members of the Mori sequence starting at an initial
    neighborhood (successors share delta, Delta, Omega and the flip)."""
    mk = _as_mk2a(nbhd)
    if not is_initial(mk):
        raise NotInitial(f"{mk.left}-1-{mk.right} is not initial")
    out = [mk]
    delta, Omega = mk.invariants.delta, mk.invariants.Omega
    while len(out) < count:
        m1, m2 = out[-1].right[0], out[-1].left[0]
        m3 = delta * m2 - m1
        if m3 < 1:
            break
        x, z = _neighbor_slots(delta, Omega, m_new=m3, m_kept=m2)
        nxt = mk2a_invariants((m3, x), (m2, z))
        if (nxt.invariants.delta, nxt.invariants.Omega) != (delta, Omega):
            raise InternalInconsistency("invariants drifted along the sequence")
        out.append(nxt)
    return out


def mk1a_to_mk2a(chain, index: int) -> Mk2A:
    """Convert an mk1A to its mk2A form.

    The curves left of the mark become the left slot via
    m2/(m2 - a2) = [e_1..e_{i-1}] (empty piece: smooth) and the original
    singularity fills the right slot; a mark on the last curve instead
    appends the blow-up there, moving the conjugate (m, m - a) left over
    a smooth point. delta, Delta, Omega are preserved on the nose.
    """
    one = mk1a_invariants(chain, index)
    e = one.chain
    m, a = one.m, one.a

    def piece_slot(piece) -> tuple[int, int]:
        if not piece:
            return SMOOTH
        p, q = hj_eval_pair(piece)
        return p, p - q

    if index == len(e):
        mk = mk2a_invariants((m, m - a), SMOOTH)
    else:
        mk = mk2a_invariants(piece_slot(e[: index - 1]), (m, a))
    if (mk.invariants.delta, mk.invariants.Delta, mk.invariants.Omega) != (
        one.invariants.delta,
        one.invariants.Delta,
        one.invariants.Omega,
    ):
        raise InternalInconsistency("mk1A/mk2A invariants disagree")
    return mk


def usual_flip(chain, index: int) -> PChain:
    """Flip of the end-marked mk1A [a_1 .. marked a_s].

    With i the last index carrying an entry >= 3 the result is the honest
    curve a_1 followed by the Wahl run [a_2 .. a_i - 1]; for i = 1 it is
    the single honest curve a_1 - 1. Marking the first curve instead is
    handled by reversing. The result chain evaluates to Delta/Omega.
    """
    e = tuple(chain)
    s = len(e)
    if wahl_recognize(e) is None:
        raise NotWahl(f"{list(e)} is not a Wahl chain")
    if index == 1 and s > 1:
        flipped = usual_flip(tuple(reversed(e)), s)
        return flipped.reversed()
    if index != s:
        raise NotEndMarked(f"marked curve {index} is not at an end")
    inv = mk1a_invariants(e, s).invariants
    i = max(j for j in range(1, s + 1) if e[j - 1] >= 3)
    if i == 1:
        out = PChain((e[0] - 1,), ())
    else:
        run = e[1 : i - 1] + (e[i - 1] - 1,)
        if wahl_recognize(run) is None:
            raise InternalInconsistency(f"usual flip run {list(run)} is not Wahl")
        out = PChain((e[0],) + run, ((1, len(run) + 1),))
    if hj_eval(out.entries) != Fraction(inv.Delta, inv.Omega):
        raise InternalInconsistency("usual flip certificate failed")
    return out


def _degree(ctx) -> Fraction:
    if isinstance(ctx, (int, Fraction)):
        return Fraction(ctx)
    ktilde_c, parts = ctx
    return canonical_degree(ktilde_c, parts)


def degeneration_beta(before, after, eplus) -> int:
    """Degeneration coefficient beta with Gamma ~> Gamma' + beta E+.

    Arguments are K-degrees, either plain numbers or (ktilde_c, parts)
    contexts in the sense of canonical_degree: the K-degree of the tracked
    curve before the flip, of its proper transform after, and of the new
    flip curve. K-degree conservation across the degeneration gives
    before = after + beta * eplus.
    """
    kb, ka, ke = _degree(before), _degree(after), _degree(eplus)
    if ke <= 0:
        raise NonIntegralBeta(f"flip curve degree {ke} not positive")
    beta = (kb - ka) / ke
    if beta.denominator != 1 or beta <= 0:
        raise NonIntegralBeta(f"beta = {beta}")
    return int(beta)
