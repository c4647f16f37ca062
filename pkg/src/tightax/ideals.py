"""Ideals, quotient-ring presentations, membership, and ring homomorphisms."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .fields import FieldSpec
from .groebner import DEFAULT_BUDGET, Budget, buchberger, colon, lift, normal_form
from .polynomial import DEGREVLEX, AmbientMismatch, MonomialOrder, Polynomial, PolyRing


class Ideal:
    """A finitely generated ideal of a polynomial ring.

    Groebner bases are cached per monomial order; the cache is write-once.
    """

    def __init__(self, ring: PolyRing, generators: Iterable = ()):
        self.ring = ring
        gens = []
        for g in generators:
            g = ring(g)
            if g.ring != ring:
                raise AmbientMismatch(f"{g.ring!r} is not {ring!r}")
            gens.append(g)
        self.generators = tuple(gens)
        self._gb: dict = {}

    def __repr__(self):
        return f"Ideal({[str(g) for g in self.generators]})"

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def nonzero(self) -> tuple:
        return tuple(g for g in self.generators if g)

    def is_zero(self) -> bool:
        return not self.nonzero()

    def groebner(self, order: MonomialOrder = DEGREVLEX, budget: Budget = DEFAULT_BUDGET) -> list:
        key = order
        if key not in self._gb:
            self._gb[key] = buchberger(self.nonzero(), order, budget)
        return self._gb[key]

    def reduce(self, f: Polynomial, order: MonomialOrder = DEGREVLEX) -> Polynomial:
        return normal_form(f, self.groebner(order), order)

    def contains(self, f: Polynomial, order: MonomialOrder = DEGREVLEX) -> bool:
        return not self.reduce(f, order)

    def __add__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.ring, self.generators + other.generators)

    def __mul__(self, other: "Ideal") -> "Ideal":
        return ideal_product(self, other)

    def same_ideal(self, other: "Ideal", order: MonomialOrder = DEGREVLEX) -> bool:
        """Mutual normal-form reduction to zero."""
        return all(other.contains(g, order) for g in self.generators) and all(
            self.contains(g, order) for g in other.generators
        )

    def leading_ideal(self, order: MonomialOrder = DEGREVLEX) -> list:
        return sorted(g.leading_monomial(order) for g in self.groebner(order))

    def map(self, fn) -> "Ideal":
        gens = [fn(g) for g in self.generators]
        ring = gens[0].ring if gens else self.ring
        return Ideal(ring, gens)


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    return Ideal(I.ring, [a * b for a in I.nonzero() for b in J.nonzero()])


class RingPresentation:
    """R = field[variables] / relations."""

    def __init__(self, ring: PolyRing, relations: Iterable = (), zero_ring: bool = False,
                 order: MonomialOrder = DEGREVLEX):
        self.ring = ring
        self.relations = relations if isinstance(relations, Ideal) else Ideal(ring, relations)
        self.order = order
        self.zero_ring = zero_ring
        if not zero_ring and self.relations.contains(ring.one, order):
            raise ValueError("relations generate the unit ideal; pass zero_ring=True")

    @classmethod
    def build(cls, variables: Sequence[str], field: FieldSpec, relations: Sequence = (), **kw):
        ring = PolyRing(variables, field)
        return cls(ring, [ring(r) for r in relations], **kw)

    def __repr__(self):
        rels = ", ".join(str(g) for g in self.relations.generators)
        return f"{self.field}[{', '.join(self.variables)}]/({rels})"

    @property
    def field(self) -> FieldSpec:
        return self.ring.field

    @property
    def variables(self) -> tuple:
        return self.ring.variables

    @property
    def is_polynomial_ring(self) -> bool:
        return self.relations.is_zero()

    def __call__(self, text) -> Polynomial:
        return self.ring(text)

    def ideal(self, *gens) -> Ideal:
        return Ideal(self.ring, [self.ring(g) for g in gens])

    def relation_basis(self, order: MonomialOrder | None = None, budget: Budget = DEFAULT_BUDGET) -> list:
        return self.relations.groebner(order or self.order, budget)

    def reduce(self, f: Polynomial, order: MonomialOrder | None = None) -> Polynomial:
        """Canonical representative of the class of f."""
        order = order or self.order
        return normal_form(f, self.relation_basis(order), order)

    def is_zero(self, f: Polynomial) -> bool:
        return self.zero_ring or not self.reduce(f)

    def extended(self, I: Ideal) -> Ideal:
        """I + relations, as an ideal of the ambient polynomial ring."""
        return I + self.relations

    def with_field(self, field: FieldSpec, convert) -> "RingPresentation":
        ring = self.ring.with_field(field)
        return RingPresentation(ring, [convert(g, ring) for g in self.relations.generators])


@dataclass
class Membership:
    """Outcome of an exact membership decision.

    ``witness`` when present is a list of cofactors, one per generator of the
    ideal; ``unit`` is set for local decisions (u * f is then the combination).
    """

    member: bool
    witness: list | None = None
    unit: Polynomial | None = None
    method: str = "groebner"

    def __bool__(self):
        return self.member


def ideal_membership(f: Polynomial, I: Ideal, R: RingPresentation, witness: bool = False,
                     order: MonomialOrder | None = None, budget: Budget = DEFAULT_BUDGET) -> Membership:
    """Decide f ∈ I + relations(R); optionally return cofactors modulo relations."""
    if f.ring != R.ring or I.ring != R.ring:
        raise AmbientMismatch("element, ideal and ring must share variables and field")
    order = order or R.order
    if R.zero_ring:
        return Membership(True, [R.ring.zero] * len(I) if witness else None, method="zero-ring")
    K = R.extended(I)
    member = not normal_form(f, K.groebner(order, budget), order)
    if not member or not witness:
        return Membership(member)
    gens = list(I.generators) + list(R.relations.generators)
    cof = lift(f, gens, order, budget)
    assert cof is not None, "lift disagrees with normal form"
    return Membership(True, [R.reduce(h, order) for h in cof[: len(I)]])


def check_witness(f: Polynomial, I: Ideal, R: RingPresentation, m: Membership) -> bool:
    """Σ h_i g_i - u f reduces to zero modulo relations."""
    total = R.ring.zero
    for h, g in zip(m.witness, I.generators):
        total = total + h * g
    lhs = f if m.unit is None else m.unit * f
    return R.is_zero(total - lhs)


def local_membership(f: Polynomial, I: Ideal, R: RingPresentation, witness: bool = False,
                     order: MonomialOrder | None = None, budget: Budget = DEFAULT_BUDGET) -> Membership:
    """Decide membership in the localization of R at the origin.

    f ∈ I·R_m exactly when the colon ((I + J) : f) has a generator with
    nonzero constant term, i.e. u·f ∈ I + J for some u with u(0) ≠ 0.
    """
    order = order or R.order
    if any(g.constant_term() for g in R.relations.generators):
        return Membership(True, method="local-origin-absent")
    K = R.extended(I)
    quot = colon(list(K.nonzero()), f, order, budget)
    units = [u for u in quot if u.constant_term()]
    if not units:
        return Membership(False, method="local-colon")
    u = min(units, key=lambda g: (len(g), g.total_degree()))
    if not witness:
        return Membership(True, unit=u, method="local-colon")
    cof = lift(u * f, list(I.generators) + list(R.relations.generators), order, budget)
    assert cof is not None
    return Membership(True, [R.reduce(h, order) for h in cof[: len(I)]], unit=u, method="local-colon")


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True)
class RingHom:
    """A map of presentations given by one target polynomial per source variable."""

    source: RingPresentation
    target: RingPresentation
    images: tuple
    name: str = ""
    proof: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.images) != self.source.ring.nvars:
            raise ValueError(
                f"{len(self.images)} images for {self.source.ring.nvars} source variables"
            )
        for g in self.images:
            if g.ring != self.target.ring:
                raise AmbientMismatch("images must live in the target ring")
        if self.source.field != self.target.field:
            raise AmbientMismatch("source and target fields differ")

    @property
    def validated(self) -> bool:
        return self.proof is not None

    def raw(self, f: Polynomial) -> Polynomial:
        if f.ring != self.source.ring:
            raise AmbientMismatch("argument does not live in the source ring")
        return f.substitute(list(self.images), self.target.ring)

    def __call__(self, f: Polynomial) -> Polynomial:
        return apply_hom(self, f)

    def describe(self) -> dict:
        return {v: str(g) for v, g in zip(self.source.variables, self.images)}


@dataclass
class HomValidation:
    valid: bool
    hom: RingHom | None
    log: list
    offending: list

    def __bool__(self):
        return self.valid


def validate_hom(h: RingHom) -> HomValidation:
    """Check that every source relation maps to zero in the target."""
    log = []
    bad = []
    for rel in h.source.relations.generators:
        nf = h.target.reduce(h.raw(rel))
        log.append((str(rel), str(nf)))
        if nf:
            bad.append((str(rel), str(nf)))
    if bad:
        return HomValidation(False, None, log, bad)
    ok = RingHom(h.source, h.target, tuple(h.target.reduce(g) for g in h.images), h.name, tuple(log))
    return HomValidation(True, ok, log, [])


def apply_hom(h: RingHom, f: Polynomial) -> Polynomial:
    """φ(f): substitution followed by normal form in the target."""
    if not h.validated:
        raise ValueError(f"homomorphism {h.name or '<anonymous>'} has not been validated")
    return h.target.reduce(h.raw(f))


def identity_hom(R: RingPresentation) -> RingHom:
    return validate_hom(RingHom(R, R, R.ring.gens, "id")).hom


def compose(outer: RingHom, inner: RingHom, name: str = "") -> RingHom:
    """outer ∘ inner, validated when both factors are."""
    if inner.target.ring != outer.source.ring:
        raise AmbientMismatch("composition of incompatible maps")
    images = tuple(outer.target.reduce(outer.raw(g)) for g in inner.images)
    h = RingHom(inner.source, outer.target, images, name or f"{outer.name}∘{inner.name}")
    if inner.validated and outer.validated:
        return validate_hom(h).hom
    return h


def extend_ideal(h: RingHom, I: Ideal) -> Ideal:
    """φ(I)·S as an ideal of the target's polynomial ring."""
    return Ideal(h.target.ring, [apply_hom(h, g) for g in I.generators])
