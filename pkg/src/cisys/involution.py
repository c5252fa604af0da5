"""Involutive divisions of the pairwise class, Janet division and completion.

A division is fixed by a permutation ``rho`` of the variable indices and a
total ordering on monomials that is either admissible or the inverse of an
admissible one.  The nonmultiplicative variables of ``u`` in ``U`` are the
union over ``v != u`` of a pairwise rule:

* nothing if ``u`` is above ``v``, or ``u`` is below ``v`` and ``v | u``;
* otherwise the single variable ``x_rho(i)`` with ``i`` the first position
  (in ``rho`` order) where ``u`` has smaller degree than ``v``.

The completion loop (:class:`InvolutiveCompletion`) is written once and works
for coefficients in Q as well as in Q[a]; the parametric engine plugs a
``decide`` hook into it that examines leading coefficients.
"""

import itertools
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels
from .paramring import gcd
from .polyalg import MonomialOrder, Poly, mono_divides, mono_lcm, mono_mul, monomial_quotient

__all__ = [
    "DivisionSpec",
    "NMPartition",
    "Triple",
    "Stats",
    "nm_pair",
    "nm_set",
    "inv_divisor",
    "inv_head_nf",
    "inv_tail_nf",
    "inv_nf",
    "criteria",
    "cancel_term",
    "normalize",
    "InvolutiveCompletion",
    "gbi",
    "prop1_completion",
    "janet_partition_classical",
]


@dataclass(frozen=True)
class DivisionSpec:
    """Division of the pairwise class.

    ``rho`` is the variable permutation (0-based), ``order`` the monomial
    ordering used to compare ``u`` and ``v``; ``inverse=True`` replaces it by
    its inverse.
    """

    rho: tuple
    order: MonomialOrder
    inverse: bool = False

    def __post_init__(self):
        n = self.order.nvars
        if sorted(self.rho) != list(range(n)):
            raise ValueError(f"rho={self.rho} is not a permutation of 0..{n - 1}")

    @classmethod
    def janet(cls, nvars):
        return cls(tuple(range(nvars)), MonomialOrder("lex", nvars), False)

    @property
    def nvars(self):
        return self.order.nvars

    def above(self, u, v):
        """``u`` strictly above ``v`` in the division's ordering."""
        ku, kv = self.order.key(u), self.order.key(v)
        return ku < kv if self.inverse else ku > kv

    def ranks(self, U):
        """Rank of every monomial of ``U`` in ascending division order."""
        idx = sorted(range(len(U)), key=lambda i: self.order.key(U[i]), reverse=self.inverse)
        rank = np.empty(len(U), dtype=np.int64)
        rank[idx] = np.arange(len(U), dtype=np.int64)
        return rank

    def describe(self):
        if self == DivisionSpec.janet(self.nvars):
            return "janet"
        perm = ",".join(str(i + 1) for i in self.rho)
        return f"pair:{perm}:{self.order.kind}:{'inv' if self.inverse else 'adm'}"


def nm_pair(u, v, d):
    """Nonmultiplicative variables of ``u`` in ``{u, v}`` (empty or one index)."""
    if u == v:
        raise ValueError("nm_pair needs two distinct monomials")
    if d.above(u, v) or mono_divides(v, u):
        return frozenset()
    for j in d.rho:
        if u[j] < v[j]:
            return frozenset((j,))
    raise AssertionError("u below v without a smaller degree")  # pragma: no cover


class NMPartition:
    """Multiplicative/nonmultiplicative split of every monomial in ``U``.

    ``order`` (the term ordering) is only used to break ties when several
    involutive divisors exist: the largest one wins.
    """

    def __init__(self, U, d, order=None):
        U = list(dict.fromkeys(tuple(u) for u in U))
        self.U = U
        self.division = d
        self.order = order
        self.index = {u: i for i, u in enumerate(U)}
        n = d.nvars
        self.array = np.array(U, dtype=np.int64).reshape(len(U), n)
        rho = np.array(d.rho, dtype=np.int64)
        self.matrix = _kernels.nm_matrix(self.array, d.ranks(U), rho)
        self._sets = [frozenset(np.nonzero(row)[0].tolist()) for row in self.matrix]

    def nm(self, u):
        try:
            return self._sets[self.index[tuple(u)]]
        except KeyError:
            raise ValueError(f"{u} is not in the monomial set") from None

    def multiplicative(self, u):
        return frozenset(range(self.division.nvars)) - self.nm(u)

    def divisors(self, t):
        """All members of ``U`` that involutively divide ``t``."""
        if not self.U:
            return []
        mask = _kernels.involutive_divisor_mask(self.array, self.matrix, np.asarray(t, dtype=np.int64))
        return [self.U[i] for i in np.nonzero(mask)[0]]

    def divisor(self, t):
        found = self.divisors(t)
        if not found:
            return None
        if len(found) == 1 or self.order is None:
            return found[0]
        return max(found, key=self.order.key)


def nm_set(u, U, d):
    """Nonmultiplicative variable indices of ``u`` with respect to ``U``."""
    U = [tuple(v) for v in U]
    if tuple(u) not in U:
        raise ValueError(f"{u} is not in the monomial set")
    return NMPartition(U, d).nm(u)


def inv_divisor(t, U, d, order=None):
    """The involutive divisor of ``t`` in ``U`` (largest under ``order``), or None."""
    return NMPartition(U, d, order).divisor(t)


def janet_partition_classical(U):
    """Classical Janet partition by degree groups (independent construction).

    ``x_i`` is multiplicative for ``u`` iff ``deg_i(u)`` is maximal among the
    members of ``U`` that agree with ``u`` in all earlier variables.  Returns a
    dict ``u -> frozenset of nonmultiplicative indices``.
    """
    U = list(dict.fromkeys(tuple(u) for u in U))
    out = {}
    for u in U:
        nm = set()
        for i in range(len(u)):
            group = [v for v in U if v[:i] == u[:i]]
            if max(v[i] for v in group) > u[i]:
                nm.add(i)
        out[u] = frozenset(nm)
    return out


# -- coefficient-generic reduction steps ---------------------------------------


def normalize(h):
    """Monic over Q, numerically primitive over Q[a]."""
    if not h:
        return h
    if h.ring.coeff is None:
        return h.monic()
    return h.primitive()


def cancel_term(h, exp, c, g):
    """Remove the term ``c*x^exp`` of ``h`` with ``g`` (``LM(g) | exp``).

    Over Q[a] this is a fraction-free step: ``h`` is multiplied by
    ``LC(g)/gcd(LC(g), c)``, which never vanishes where ``LC(g)`` doesn't.
    """
    q = monomial_quotient(exp, g.lm)
    lcg = g.lc
    if h.ring.coeff is None:
        return h - g.mul_term(q, c / lcg)
    if lcg.is_constant():
        return h - g.mul_term(q, c.scale(1 / lcg.constant_value()))
    d = gcd(lcg, c)
    return h.scale(lcg.exact_div(d)) - g.mul_term(q, c.exact_div(d))


def _lead_map(G):
    out = {}
    for g in G:
        if g and g.lm not in out:
            out[g.lm] = g
    return out


def inv_head_nf(f, G, d, order=None):
    """Involutive head reduction of ``f`` modulo ``G``."""
    leads = _lead_map(G)
    part = NMPartition(list(leads), d, order)
    h = f
    while h:
        u = part.divisor(h.lm)
        if u is None:
            break
        h = cancel_term(h, h.lm, h.lc, leads[u])
    return h


def inv_tail_nf(f, G, d, order=None):
    """Involutive reduction of the terms of ``f`` modulo ``G``.

    Meant for an ``f`` whose head is already irreducible, but a reducible
    head is reduced too, so no term of the result is involutively reducible.
    """
    if not f:
        return f
    leads = _lead_map(G)
    part = NMPartition(list(leads), d, order)
    return _tail_reduce(f, part, leads, head=True)


def inv_nf(f, G, d, order=None):
    """Full involutive normal form: head, then tail."""
    h = inv_head_nf(f, G, d, order)
    return inv_tail_nf(h, G, d, order) if h else h


def _tail_reduce(h, part, leads, head=False):
    if not h:
        return h
    key = h.ring.order.key
    bound = key(h.lm)
    start = 1
    if head and part.divisor(h.lm) is not None:
        start, bound = 0, None
    while h:
        hit = None
        for e, c in h.terms[start:]:
            if bound is not None and key(e) >= bound:
                continue
            u = part.divisor(e)
            if u is not None:
                hit = (e, c, u)
                break
        if hit is None:
            return h
        e, c, u = hit
        h = cancel_term(h, e, c, leads[u])
        bound = key(e)
        start = 0
    return h


# -- triples and criteria -------------------------------------------------------


@dataclass(frozen=True)
class Triple:
    """A polynomial, its ancestor and the prolongation variables already used."""

    poly: Poly
    anc: Poly
    nm: frozenset = frozenset()
    seq: int = field(default=0, compare=False)


def criteria(p, g):
    """Involutive Buchberger criteria for the prolongation ``p`` and divisor ``g``."""
    lm = p.poly.lm
    ap, ag = p.anc.lm, g.anc.lm
    if mono_mul(ap, ag) == lm:
        return True
    lcm = mono_lcm(ap, ag)
    return lcm != lm and mono_divides(lcm, lm)


@dataclass
class Stats:
    reductions: int = 0
    criteria_hits: int = 0
    prolongations: int = 0
    branches: int = 0


class _NoTrace:
    def __bool__(self):
        return False


class InvolutiveCompletion:
    """The completion loop with head reduction, tail reduction and criteria.

    ``decide(h, state) -> (cd, h', state')`` is called after every head
    reduction step; a nonempty ``cd`` stops the computation so the caller can
    split on a condition.  Without a hook the coefficient domain is treated
    as a field (every nonzero leading coefficient is decided).
    """

    def __init__(self, division, order, use_criteria=True, decide=None, tracer=None,
                 stats=None, render=str):
        self.division = division
        self.order = order
        self.use_criteria = use_criteria
        self.decide = decide
        self.tracer = tracer if tracer is not None else _NoTrace()
        self.stats = stats if stats is not None else Stats()
        self.render = render
        self._seq = itertools.count(1)
        self._part_cache = {}

    # -- helpers

    def triple(self, poly, anc=None, nm=frozenset()):
        return Triple(poly, poly if anc is None else anc, frozenset(nm), next(self._seq))

    def _key(self, t):
        return (self.order.key(t.poly.lm), t.seq)

    def partition(self, T):
        lms = tuple(t.poly.lm for t in T)
        part = self._part_cache.get(lms)
        if part is None:
            if len(self._part_cache) > 256:
                self._part_cache.clear()
            part = NMPartition(lms, self.division, self.order)
            self._part_cache[lms] = part
        return part

    def _fmt_triples(self, P):
        return "{" + ", ".join(self.render(t.poly) for t in P) + "}"

    def _fmt_triple(self, t):
        nm = "{" + ",".join(str(i + 1) for i in sorted(t.nm)) + "}" if t.nm else "∅"
        return f"[{self.render(t.poly)}, {self.render(t.anc)}, {nm}]"

    # -- subalgorithms

    def head_normal_form(self, p, T, state):
        tr = self.tracer
        if tr:
            tr.enter("HeadNormalForm", f"{self._fmt_triple(p)}, T, {tr.spec(state)}")
        ok, h, state = self._hnf(p, T, state)
        if tr:
            tr.leave(f"({str(ok).lower()}, {self.render(h)}, T, {tr.spec(state)})",
                     kind="HeadNormalForm", ok=ok, poly=self.render(h))
        return ok, h, state

    def _hnf(self, p, T, state):
        h = p.poly
        if not h:
            return True, h, state
        part = self.partition(T)
        leads = {t.poly.lm: t for t in T}
        u = part.divisor(h.lm)
        if u is None:
            return True, h, state
        if h.lm != p.anc.lm and self.use_criteria and criteria(p, leads[u]):
            self.stats.criteria_hits += 1
            return True, h.ring.zero, state
        while h:
            u = part.divisor(h.lm)
            if u is None:
                break
            h = cancel_term(h, h.lm, h.lc, leads[u].poly)
            self.stats.reductions += 1
            if self.decide is not None:
                cd, h, state = self.decide(h, state)
                if cd:
                    return False, h, state
            else:
                h = normalize(h)
        return True, h, state

    def head_reduce(self, T, state, Q):
        tr = self.tracer
        if tr:
            tr.enter("HeadReduce", f"T, {tr.spec(state)}, {self._fmt_triples(Q)}")
        S = sorted(Q, key=self._key)
        out = []
        while S:
            p = S.pop(0)
            if not p.poly:
                continue
            ok, h, state = self.head_normal_form(p, T, state)
            if not ok:
                pending = self.triple(h)
                rest = S + out
                if tr:
                    tr.leave(f"(false, {self._fmt_triple(pending)}, T, {tr.spec(state)}, "
                             f"{self._fmt_triples(rest)})", kind="HeadReduce", ok=False)
                return False, pending, T, state, rest
            if h:
                out.append(p if h.lm == p.poly.lm else self.triple(h))
            elif p.poly.lm == p.anc.lm and all(t.anc != p.poly for t in T):
                # ancestors compare by value, so keep them while an equal
                # polynomial still lives in T
                S = [q for q in S if q.anc != p.poly]
        if tr:
            tr.leave(f"(true, 0, T, {tr.spec(state)}, {self._fmt_triples(out)})",
                     kind="HeadReduce", ok=True, queue=[self.render(t.poly) for t in out])
        return True, None, T, state, out

    def tail_normal_form(self, p, T):
        tr = self.tracer
        if tr:
            tr.enter("TailNormalForm", f"{self._fmt_triple(p)}, T")
        leads = {t.poly.lm: t.poly for t in T}
        h = _tail_reduce(p.poly, self.partition(T), leads)
        if h is not p.poly:
            self.stats.reductions += 1
            h = normalize(h)
        if tr:
            tr.leave(self.render(h), kind="TailNormalForm", poly=self.render(h))
        return h

    def run(self, B, state, P=(), resume=False):
        """One completion pass.

        With an empty ``P`` (and ``resume`` off) ``B`` is a fresh generating
        set; otherwise ``B`` is an existing partial basis and ``P`` the queue.
        Returns ``(done, pending, T, state, Q)``.  When ``done`` is False,
        ``pending`` is a triple whose leading coefficient must be split on
        and ``(T, Q)`` is the exact resume state.
        """
        tr = self.tracer
        if tr:
            tr.enter("GBI", f"{self._fmt_triples(B)}, {tr.spec(state)}, {self._fmt_triples(P)}")
        result = self._run(list(B), state, list(P), resume)
        if tr:
            done, pending, T, st, Q = result
            if done:
                basis = [self.render(t.poly) for t in T] or ["0"]
                tr.leave(f"(true, 0, {{{', '.join(basis)}}}, {tr.spec(st)})",
                         kind="GBI", done=True, basis=basis)
            else:
                tr.leave(f"(false, {self._fmt_triple(pending)}, T, {tr.spec(st)}, "
                         f"{self._fmt_triples(Q)})", kind="GBI", done=False)
        return result

    def _run(self, B, state, P, resume):
        if not P and not resume:
            B = [b for b in B if b.poly]
            if not B:
                return True, None, [], state, []
            p = min(B, key=self._key)
            T = [p]
            Q = [b for b in B if b is not p]
        else:
            T = [t for t in B if t.poly]
            Q = [q for q in P if q.poly]
        while Q:
            ok, pending, T, state, Q = self.head_reduce(T, state, Q)
            if not ok:
                return False, pending, T, state, Q
            if not Q:
                break
            p = min(Q, key=self._key)
            Q.remove(p)
            if p.poly == p.anc:
                lm = p.poly.lm
                moved = [q for q in T if q.poly.lm != lm and mono_divides(lm, q.poly.lm)]
                if moved:
                    T = [q for q in T if q not in moved]
                    Q.extend(moved)
            h = self.tail_normal_form(p, T)
            T.append(Triple(h, p.anc, p.nm, next(self._seq)))
            part = self.partition(T)
            for i, q in enumerate(T):
                nmq = part.nm(q.poly.lm)
                fresh = sorted(nmq - q.nm)
                if not fresh:
                    # forget variables that turned multiplicative, so they are
                    # prolonged again if they turn back
                    if not q.nm <= nmq:
                        T[i] = replace(q, nm=q.nm & nmq)
                    continue
                for x in fresh:
                    shift = tuple(1 if j == x else 0 for j in range(self.division.nvars))
                    Q.append(self.triple(q.poly.mul_monomial(shift), q.anc))
                    self.stats.prolongations += 1
                T[i] = replace(q, nm=(q.nm & nmq) | frozenset(fresh))
        return True, None, self.autoreduce(T), state, []

    def autoreduce(self, T):
        """Tail-reduce every element against the whole basis."""
        if len(T) < 2:
            return [replace(t, poly=normalize(t.poly)) for t in T]
        part = self.partition(T)
        leads = {t.poly.lm: t.poly for t in T}
        out = []
        for t in T:
            h = _tail_reduce(t.poly, part, leads)
            out.append(replace(t, poly=normalize(h)))
        return out


def gbi(F, division, order=None, use_criteria=True, stats=None):
    """Minimal monic involutive basis of ``<F>`` over Q, sorted by leading monomial."""
    F = [f for f in F if f]
    if not F:
        return []
    order = order or F[0].ring.order
    engine = InvolutiveCompletion(division, order, use_criteria, stats=stats)
    B = [engine.triple(normalize(f)) for f in F]
    _, _, T, _, _ = engine.run(B, None)
    return sorted((t.poly.monic() for t in T), key=lambda g: order.key(g.lm))


def prop1_completion(G, division=None, order=None):
    """All prolongations ``m*g`` with ``deg_i(m) <= h_i - deg_i(LM(g))``.

    ``h_i`` is the largest degree of ``x_i`` over the leading monomials.  For a
    minimal Groebner basis the result is an involutive basis of the same
    ideal for every division of the pairwise class.
    """
    G = [g for g in G if g]
    if not G:
        return []
    lms = [g.lm for g in G]
    for i, j in itertools.permutations(range(len(G)), 2):
        if mono_divides(lms[i], lms[j]):
            raise ValueError("not minimal: leading monomials divide each other")
    n = len(lms[0])
    h = [max(m[i] for m in lms) for i in range(n)]
    out = []
    for g, lm in zip(G, lms):
        ranges = [range(h[i] - lm[i] + 1) for i in range(n)]
        boxes = sorted(itertools.product(*ranges), key=lambda m: (sum(m), m))
        for m in boxes:
            p = g.mul_monomial(tuple(m))
            if p not in out:
                out.append(p)
    return out
