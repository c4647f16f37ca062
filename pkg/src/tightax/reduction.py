"""Integer models of rational presentations and their prime fibers.

Only finite fiber evidence is produced: a sweep over a list of primes can
never certify anything about all but finitely many primes.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import factorint, nextprime

from .fields import FieldSpec
from .frobenius import TightParams, TightVerdict, VerdictKind, tight_membership
from .ideals import Ideal, RingPresentation
from .polynomial import DEGREVLEX, MonomialOrder, Polynomial, PolyRing


class BadPrime(ValueError):
    pass


def _prime_factors(n: int) -> set:
    n = abs(int(n))
    return set(factorint(n)) if n > 1 else set()


def _clear(f: Polynomial) -> tuple[Polynomial, int]:
    den = 1
    for c in f.terms.values():
        den = math.lcm(den, Fraction(c).denominator)
    return (f.scale(den) if den != 1 else f), den


@dataclass
class IntegralModel:
    """Integer-coefficient data over QQ with the primes where it degenerates."""

    presentation: RingPresentation
    ideals: dict
    elements: dict
    bad_primes: frozenset
    order: MonomialOrder = DEGREVLEX
    _rational_gb: dict = field(default_factory=dict, repr=False)

    def rational_basis(self, name: str | None) -> list:
        """Reduced Groebner basis over QQ of relations (+ the named ideal)."""
        if name not in self._rational_gb:
            gens = list(self.presentation.relations.generators)
            if name is not None:
                gens += list(self.ideals[name].generators)
            self._rational_gb[name] = Ideal(self.presentation.ring, gens).groebner(self.order)
        return self._rational_gb[name]


def clear_denominators(R: RingPresentation, ideals: dict | None = None, elements: dict | None = None,
                       order: MonomialOrder = DEGREVLEX) -> IntegralModel:
    """Scale every polynomial by the lcm of its denominators."""
    if R.field.p:
        raise ValueError("integral models start from a presentation over QQ")
    bad: set = set()

    def clear(f):
        g, den = _clear(f)
        bad.update(_prime_factors(den))
        if g:
            bad.update(_prime_factors(Fraction(g.leading_term(order)[1]).numerator))
        return g

    rels = [clear(g) for g in R.relations.generators]
    pres = RingPresentation(R.ring, rels, order=R.order)
    I = {k: Ideal(R.ring, [clear(g) for g in v.generators]) for k, v in (ideals or {}).items()}
    E = {k: clear(v) for k, v in (elements or {}).items()}
    return IntegralModel(pres, I, E, frozenset(bad), order)


def reduce_polynomial(f: Polynomial, ring: PolyRing) -> Polynomial:
    fld = ring.field
    return f.map_coefficients(ring, fld)


@dataclass
class PrimeFiber:
    p: int
    presentation: RingPresentation
    ideals: dict
    elements: dict
    lucky: bool
    reason: str


def reduce_mod_p(model: IntegralModel, p: int, exclude_divisors_of: int | None = None) -> PrimeFiber:
    """Coefficientwise reduction with a luckiness decision.

    A fiber is lucky when, for the relations and for relations + each ideal,
    the rational reduced Groebner basis has p-integral coefficients and the
    fiber's leading-term ideal equals the rational one.
    """
    if p in model.bad_primes:
        raise BadPrime(f"{p} divides a cleared denominator or leading coefficient")
    fld = FieldSpec(p)
    ring = model.presentation.ring.with_field(fld)
    rels = [reduce_polynomial(g, ring) for g in model.presentation.relations.generators]
    try:
        pres = RingPresentation(ring, rels, order=model.presentation.order)
    except ValueError:
        pres = RingPresentation(ring, rels, zero_ring=True, order=model.presentation.order)
    ideals = {k: Ideal(ring, [reduce_polynomial(g, ring) for g in v.generators]) for k, v in model.ideals.items()}
    elements = {k: reduce_polynomial(v, ring) for k, v in model.elements.items()}

    if exclude_divisors_of and exclude_divisors_of % p == 0:
        return PrimeFiber(p, pres, ideals, elements, False, f"p divides {exclude_divisors_of}")
    for name in [None] + sorted(model.ideals):
        rat = model.rational_basis(name)
        gens = list(pres.relations.generators) + (list(ideals[name].generators) if name else [])
        fib = Ideal(ring, gens).groebner(model.order)
        label = "relations" if name is None else f"relations + {name}"
        if any(Fraction(c).denominator % p == 0 for g in rat for c in g.terms.values()):
            return PrimeFiber(p, pres, ideals, elements, False,
                              f"rational basis of {label} has p in a denominator")
        lt_rat = sorted(g.leading_monomial(model.order) for g in rat)
        lt_fib = sorted(g.leading_monomial(model.order) for g in fib)
        if lt_rat != lt_fib:
            return PrimeFiber(p, pres, ideals, elements, False, f"staircase of {label} changes")
    return PrimeFiber(p, pres, ideals, elements, True, "leading-term ideals agree")


class SweepAggregate:
    CERTIFIED = "CertifiedInAllLuckyFibers"
    NEGATIVE = "ExactNegative"
    MIXED = "Mixed"


@dataclass
class FiberResult:
    p: int
    lucky: bool
    reason: str
    verdict: TightVerdict | None
    seconds: float = 0.0

    def to_dict(self, timing: bool = True) -> dict:
        d = {"p": self.p, "lucky": self.lucky, "reason": self.reason}
        if self.verdict is not None:
            d.update(self.verdict.to_dict(timing))
        if timing:
            d["seconds"] = round(self.seconds, 6)
        return d


@dataclass
class SweepReport:
    fibers: list

    @property
    def aggregate(self) -> str:
        return aggregate(self.fibers)

    def to_dict(self, timing: bool = True) -> dict:
        return {
            "verdict": self.aggregate,
            "evidence": {
                "fibers": [f.to_dict(timing) for f in self.fibers],
                "note": "finite fiber evidence only; no characteristic-0 conclusion is claimed",
            },
        }


def aggregate(fibers) -> str:
    verdicts = [f.verdict for f in fibers if f.lucky and f.verdict is not None]
    if verdicts and all(v.is_member for v in verdicts):
        return SweepAggregate.CERTIFIED
    if verdicts and all(v.kind == VerdictKind.EXACT_NON_MEMBER for v in verdicts):
        return SweepAggregate.NEGATIVE
    return SweepAggregate.MIXED


def fiber_sweep(model: IntegralModel, ideal: str, element: str, primes, params: TightParams = TightParams(),
                exclude_divisors_of: int | None = None) -> SweepReport:
    """Run the bounded tight-closure search in every lucky fiber, in prime order."""
    primes = list(primes)
    if len(set(primes)) != len(primes):
        raise ValueError("primes must be pairwise distinct")
    results = []
    for p in sorted(primes):
        t0 = time.perf_counter()
        if p in model.bad_primes:
            results.append(FiberResult(p, False, "bad prime", None))
            continue
        fib = reduce_mod_p(model, p, exclude_divisors_of)
        verdict = None
        if fib.lucky:
            verdict = tight_membership(fib.presentation, fib.ideals[ideal], fib.elements[element], params)
        results.append(FiberResult(p, fib.lucky, fib.reason, verdict, time.perf_counter() - t0))
    if not any(r.lucky for r in results):
        raise ValueError("no lucky fiber among the given primes")
    return SweepReport(results)


def primes_congruent_one(m: int, count: int, exclude=()) -> list:
    """The first ``count`` primes p ≡ 1 (mod m) outside ``exclude``."""
    out = []
    p = 1
    while len(out) < count:
        p = nextprime(p)
        if p % m == 1 and p not in exclude:
            out.append(int(p))
    return out
