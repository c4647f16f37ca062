"""Normal forms and Buchberger's algorithm on sparse polynomials.

The reducer keeps pending monomials in a heap so a reduction step costs
O(log n) instead of a scan for the next leading term.  Pair bookkeeping
follows the Gebauer-Moeller installation with sugar-degree selection.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .polynomial import DEGREVLEX, AmbientMismatch, MonomialOrder, Polynomial, PolyRing


@dataclass(frozen=True)
class Budget:
    """Resource limits for one Groebner computation."""

    max_pairs: int = 2_000_000
    max_terms: int = 5_000_000
    max_basis: int = 100_000


DEFAULT_BUDGET = Budget()


class ResourceExhausted(RuntimeError):
    """A configured budget was exceeded; the answer is unknown, not negative."""


def _divides(a, b) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _coprime(a, b) -> bool:
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


def _check_ambient(ring: PolyRing, polys) -> None:
    for g in polys:
        if g.ring != ring:
            raise AmbientMismatch(f"{g.ring!r} is not {ring!r}")


class _Elem:
    """A basis polynomial prepared for reduction."""

    __slots__ = ("lead", "lc", "terms", "tail", "sugar")

    def __init__(self, terms: dict, key, sugar=None):
        self.terms = terms
        self.lead = max(terms, key=key)
        self.lc = terms[self.lead]
        self.tail = [(e, c) for e, c in terms.items() if e != self.lead]
        self.sugar = sugar if sugar is not None else max(sum(e) for e in terms)


# above this many basis elements the divisor search is vectorized
_VECTOR_THRESHOLD = 48


class _Reducer:
    def __init__(self, ring: PolyRing, order: MonomialOrder, budget: Budget = DEFAULT_BUDGET):
        self.ring = ring
        self.order = order
        self.key = order.key_function(ring.nvars)
        self.p = ring.field.p
        self.inv = ring.field.inv
        self.budget = budget

    def negkey(self, e):
        return tuple(-k for k in self.key(e))

    def reduce(self, terms: dict, basis: Sequence[_Elem], top_only: bool = False,
               quotients: list | None = None, divisor_cache: dict | None = None) -> dict:
        """Full (or top-) reduction of ``terms`` against ``basis``.

        When ``quotients`` is a list of dicts (one per basis element) the
        multipliers used are accumulated there.  ``divisor_cache`` memoizes
        divisor lookups and must only be shared between calls with the same
        basis.
        """
        if not terms:
            return {}
        p = self.p
        pending = dict(terms)
        negkey = self.negkey
        heap = [(negkey(e), e) for e in pending]
        heapq.heapify(heap)
        remainder: dict = {}
        max_terms = self.budget.max_terms
        inv = self.inv
        leads = None
        if len(basis) >= _VECTOR_THRESHOLD:
            leads = np.array([g.lead for g in basis], dtype=np.int64)
        while heap:
            _, m = heapq.heappop(heap)
            c = pending.pop(m, None)
            if c is None:
                continue
            if divisor_cache is not None and m in divisor_cache:
                k = divisor_cache[m]
            elif leads is not None:
                mask = (leads <= np.array(m, dtype=np.int64)).all(axis=1)
                k = int(mask.argmax())
                if not mask[k]:
                    k = -1
            else:
                for k, g in enumerate(basis):
                    if _divides(g.lead, m):
                        break
                else:
                    k = -1
                if divisor_cache is not None:
                    divisor_cache[m] = k
            if k < 0:
                if top_only:
                    remainder[m] = c
                    for e, v in pending.items():
                        remainder[e] = v
                    return remainder
                remainder[m] = c
                continue
            g = basis[k]
            shift = tuple(a - b for a, b in zip(m, g.lead))
            factor = c * inv(g.lc)
            if p:
                factor %= p
            if quotients is not None:
                qk = quotients[k]
                v = qk.get(shift, 0) + factor
                if p:
                    v %= p
                if v:
                    qk[shift] = v
                else:
                    qk.pop(shift, None)
            for e, v in g.tail:
                mm = tuple(a + b for a, b in zip(e, shift))
                old = pending.get(mm)
                if old is None:
                    new = -factor * v
                    if p:
                        new %= p
                    pending[mm] = new
                    heapq.heappush(heap, (negkey(mm), mm))
                else:
                    new = old - factor * v
                    if p:
                        new %= p
                    if new:
                        pending[mm] = new
                    else:
                        del pending[mm]
            if len(pending) > max_terms:
                raise ResourceExhausted(f"intermediate polynomial exceeded {max_terms} terms")
        return remainder

    def spoly(self, f: _Elem, g: _Elem) -> dict:
        l = _lcm(f.lead, g.lead)
        sf = tuple(a - b for a, b in zip(l, f.lead))
        sg = tuple(a - b for a, b in zip(l, g.lead))
        p = self.p
        cf = self.inv(f.lc)
        cg = self.inv(g.lc)
        out: dict = {}
        for e, v in f.tail:
            out[tuple(a + b for a, b in zip(e, sf))] = v * cf
        for e, v in g.tail:
            mm = tuple(a + b for a, b in zip(e, sg))
            out[mm] = out.get(mm, 0) - v * cg
        if p:
            return {e: v % p for e, v in out.items() if v % p}
        return {e: v for e, v in out.items() if v}


def normal_form(f: Polynomial, G: Sequence[Polynomial], order: MonomialOrder = DEGREVLEX) -> Polynomial:
    """Fully reduce ``f`` by ``G`` (divisors tried in list order)."""
    _check_ambient(f.ring, G)
    red = _Reducer(f.ring, order)
    basis = [_Elem(g.terms, red.key) for g in G if g]
    return Polynomial(f.ring, red.reduce(f.terms, basis))


def _monic_terms(terms: dict, lc, ring: PolyRing) -> dict:
    fld = ring.field
    inv = fld.inv(lc)
    if fld.p:
        return {e: c * inv % fld.p for e, c in terms.items()}
    return {e: c * inv for e, c in terms.items()}


@dataclass
class GroebnerStats:
    pairs_processed: int = 0
    pairs_pruned: int = 0
    zero_reductions: int = 0


def buchberger(gens: Sequence[Polynomial], order: MonomialOrder = DEGREVLEX,
               budget: Budget = DEFAULT_BUDGET, stats: GroebnerStats | None = None) -> list[Polynomial]:
    """Reduced Groebner basis of ``gens``, sorted by decreasing leading monomial."""
    gens = [g for g in gens if g]
    if not gens:
        return []
    ring = gens[0].ring
    _check_ambient(ring, gens)
    red = _Reducer(ring, order, budget)
    stats = stats if stats is not None else GroebnerStats()
    elems = _buchberger_core(red, [g.terms for g in gens], budget, stats)
    return _reduce_basis(red, elems)


def _buchberger_core(red: _Reducer, inputs: list, budget: Budget, stats: GroebnerStats) -> list:
    key = red.key
    polys: list[_Elem] = []     # every element ever added
    active: list[int] = []      # indices not made redundant
    pairs: dict = {}
    heap: list = []

    def push_pair(i, j):
        l = _lcm(polys[i].lead, polys[j].lead)
        s = max(polys[i].sugar + sum(l) - sum(polys[i].lead),
                polys[j].sugar + sum(l) - sum(polys[j].lead))
        pairs[(i, j)] = l
        heapq.heappush(heap, (s, key(l), i, j))

    def install(terms, sugar):
        h = len(polys)
        if h >= budget.max_basis:
            raise ResourceExhausted(f"basis exceeded {budget.max_basis} elements")
        polys.append(_Elem(terms, key, sugar))
        lh = polys[h].lead
        # Gebauer-Moeller: among the new pairs keep one per minimal lcm, and
        # none for an lcm shared with a coprime pair
        groups: dict = {}
        for g in active:
            groups.setdefault(_lcm(lh, polys[g].lead), []).append(g)
        minimal: list = []
        for L in sorted(groups, key=sum):
            if any(_divides(M, L) for M in minimal):
                stats.pairs_pruned += len(groups[L])
                continue
            minimal.append(L)
        new_pairs = []
        for L in minimal:
            members = groups[L]
            if any(_coprime(lh, polys[g].lead) for g in members):
                stats.pairs_pruned += len(members)
                continue
            new_pairs.append(min(members))
            stats.pairs_pruned += len(members) - 1
        # old pairs made superfluous by the new leading monomial
        for (i, j), lij in list(pairs.items()):
            if (_divides(lh, lij) and _lcm(polys[i].lead, lh) != lij
                    and _lcm(polys[j].lead, lh) != lij):
                del pairs[(i, j)]
                stats.pairs_pruned += 1
        for g in sorted(new_pairs):
            push_pair(g, h)
        active[:] = [g for g in active if not _divides(lh, polys[g].lead)] + [h]
        if not red.p:
            # over QQ keep the basis tail-reduced; coefficients swell otherwise
            basis = [polys[g] for g in active]
            for g in active[:-1]:
                old = polys[g]
                if any(_divides(lh, e) for e, _ in old.tail):
                    tail = red.reduce(dict(old.tail), basis)
                    tail[old.lead] = old.lc
                    polys[g] = _Elem(tail, key, old.sugar)

    for t in sorted(inputs, key=lambda t: red.key(max(t, key=key))):
        if not t:
            continue
        r = red.reduce(t, [polys[i] for i in active])
        if r:
            lead = max(r, key=key)
            install(_monic_terms(r, r[lead], red.ring), max(sum(e) for e in t))

    while heap:
        s, _, i, j = heapq.heappop(heap)
        if (i, j) not in pairs:
            continue
        del pairs[(i, j)]
        stats.pairs_processed += 1
        if stats.pairs_processed > budget.max_pairs:
            raise ResourceExhausted(f"S-pair budget of {budget.max_pairs} exhausted")
        sp = red.spoly(polys[i], polys[j])
        r = red.reduce(sp, [polys[k] for k in active])
        if not r:
            stats.zero_reductions += 1
            continue
        lead = max(r, key=key)
        install(_monic_terms(r, r[lead], red.ring), s)
    return [polys[i] for i in active]


def _reduce_basis(red: _Reducer, elems: list) -> list[Polynomial]:
    ring = red.ring
    minimal: list[_Elem] = []
    for g in sorted(elems, key=lambda g: red.key(g.lead)):
        if not any(_divides(h.lead, g.lead) for h in minimal):
            minimal.append(g)
    # tail terms are smaller than the lead, so no element ever reduces its
    # own tail and one shared basis (and divisor cache) serves every element
    out = []
    cache: dict = {}
    for g in minimal:
        tail = red.reduce(dict(g.tail), minimal, divisor_cache=cache)
        tail[g.lead] = g.lc
        out.append(_monic_terms(tail, g.lc, ring))
    polys = [Polynomial(ring, t) for t in out]
    polys.sort(key=lambda f: red.key(max(f.terms, key=red.key)), reverse=True)
    return polys


def is_groebner_basis(G: Sequence[Polynomial], order: MonomialOrder = DEGREVLEX) -> bool:
    """Buchberger's criterion: all S-polynomials reduce to zero."""
    G = [g for g in G if g]
    if not G:
        return True
    red = _Reducer(G[0].ring, order)
    elems = [_Elem(g.terms, red.key) for g in G]
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            if _coprime(elems[i].lead, elems[j].lead):
                continue
            if red.reduce(red.spoly(elems[i], elems[j]), elems):
                return False
    return True


# ---------------------------------------------------------------------------
# cofactor tracking


def lift(f: Polynomial, gens: Sequence[Polynomial], order: MonomialOrder = DEGREVLEX,
         budget: Budget = DEFAULT_BUDGET) -> list[Polynomial] | None:
    """Cofactors ``h`` with ``f == sum(h[i] * gens[i])``, or None if f is not in the ideal.

    Runs a Buchberger variant that records every basis element as a
    combination of the input generators; slower than :func:`buchberger`.
    """
    ring = f.ring
    _check_ambient(ring, gens)
    n = len(gens)
    red = _Reducer(ring, order, budget)
    key = red.key
    p = ring.field.p
    fld = ring.field

    elems: list[_Elem] = []
    rows: list[list[Polynomial]] = []

    def add_row(terms, row):
        lead = max(terms, key=key)
        inv = fld.inv(terms[lead])
        elems.append(_Elem(_monic_terms(terms, terms[lead], ring), key))
        rows.append([h.scale(inv) for h in row])

    def combine(quotients, base_row):
        row = list(base_row)
        for k, q in enumerate(quotients):
            if q:
                qp = Polynomial(ring, q)
                row = [a - qp * b for a, b in zip(row, rows[k])]
        return row

    for i, g in enumerate(gens):
        if not g:
            continue
        quot = [dict() for _ in elems]
        r = red.reduce(g.terms, elems, quotients=quot)
        if r:
            unit = [ring.zero] * n
            unit[i] = ring.one
            add_row(r, combine(quot, unit))

    done = set()
    processed = 0
    changed = True
    while changed:
        changed = False
        for i in range(len(elems)):
            for j in range(i + 1, len(elems)):
                if (i, j) in done:
                    continue
                done.add((i, j))
                if _coprime(elems[i].lead, elems[j].lead):
                    continue
                processed += 1
                if processed > budget.max_pairs:
                    raise ResourceExhausted("S-pair budget exhausted while lifting")
                a, b = elems[i], elems[j]
                l = _lcm(a.lead, b.lead)
                sa = ring.monomial(tuple(x - y for x, y in zip(l, a.lead)), fld.inv(a.lc))
                sb = ring.monomial(tuple(x - y for x, y in zip(l, b.lead)), fld.inv(b.lc))
                sp = red.spoly(a, b)
                base = [sa * x - sb * y for x, y in zip(rows[i], rows[j])]
                quot = [dict() for _ in elems]
                r = red.reduce(sp, elems, quotients=quot)
                if r:
                    add_row(r, combine(quot, base))
                    changed = True
    quot = [dict() for _ in elems]
    r = red.reduce(f.terms, elems, quotients=quot)
    if r:
        return None
    row = [ring.zero] * n
    for k, q in enumerate(quot):
        if q:
            qp = Polynomial(ring, q)
            row = [a + qp * b for a, b in zip(row, rows[k])]
    return row


# ---------------------------------------------------------------------------
# derived ideal operations


def divide_exact(a: Polynomial, b: Polynomial, order: MonomialOrder = DEGREVLEX) -> Polynomial:
    """Quotient ``a / b`` in the polynomial ring; raises if b does not divide a."""
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    red = _Reducer(a.ring, order)
    quot = [dict()]
    r = red.reduce(a.terms, [_Elem(b.terms, red.key)], quotients=quot)
    if r:
        raise ValueError("division is not exact")
    return Polynomial(a.ring, quot[0])


def _extend_ring(ring: PolyRing, name: str = "_t") -> PolyRing:
    while name in ring.variables:
        name = "_" + name
    return PolyRing((name,) + ring.variables, ring.field)


def intersect(I: Sequence[Polynomial], J: Sequence[Polynomial], order: MonomialOrder = DEGREVLEX,
              budget: Budget = DEFAULT_BUDGET) -> list[Polynomial]:
    """Generators of (I) ∩ (J) by eliminating t from t*I + (1-t)*J."""
    I = [g for g in I if g]
    J = [g for g in J if g]
    if not I or not J:
        return []
    ring = I[0].ring
    big = _extend_ring(ring)
    t = big.gen(0)
    emb = [g.embed(big) for g in I], [g.embed(big) for g in J]
    gens = [t * g for g in emb[0]] + [(1 - t) * g for g in emb[1]]
    inner = order.resolved_perm(ring.nvars)
    elim = MonomialOrder(order.kind, (0,) + tuple(i + 1 for i in inner), block=1)
    G = buchberger(gens, elim, budget)
    out = []
    for g in G:
        if all(e[0] == 0 for e in g.terms):
            out.append(Polynomial(ring, {e[1:]: c for e, c in g.terms.items()}))
    return out


def colon(I: Sequence[Polynomial], f: Polynomial, order: MonomialOrder = DEGREVLEX,
          budget: Budget = DEFAULT_BUDGET) -> list[Polynomial]:
    """Generators of (I : f)."""
    if not f:
        return [f.ring.one]
    return [divide_exact(g, f, order) for g in intersect(I, [f], order, budget)]
