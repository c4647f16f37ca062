"""Rings of axes L[X_1..X_n]/(X_i X_j, i != j), branch valuations, and the
valuative membership criterion with explicit witnesses.

An element of an axes ring is a shared constant plus one constant-free
univariate polynomial per branch.  Membership questions about the
valuations are local ones: they are answered in the localization at the
meeting point, where every polynomial with nonzero constant is a unit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, total_ordering
from typing import Sequence

from .fields import FieldSpec
from .ideals import (
    Ideal,
    Membership,
    RingHom,
    RingPresentation,
    compose,
    extend_ideal,
    ideal_membership,
    local_membership,
    validate_hom,
    apply_hom,
)
from .polynomial import DEGREVLEX, AmbientMismatch, MonomialOrder, Polynomial, PolyRing, format_polynomial


@total_ordering
class _Infinity:
    """The valuation of zero.  Greater than every integer, absorbing under +."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    __str__ = __repr__

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("inf-valuation")

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __rmul__(self, k):
        if k == 0:
            raise ValueError("0 * inf is undefined")
        return self

    __mul__ = __rmul__


INF = _Infinity()


def exceeds(a, b) -> bool:
    """a > b for the criterion, where inf > inf counts as true."""
    if a is INF:
        return True
    if b is INF:
        return False
    return a > b


def as_json_val(v):
    return "inf" if v is INF else v


# ---------------------------------------------------------------------------


class AxesRing:
    """The ring of n coordinate axes over a field."""

    def __init__(self, field: FieldSpec, branches: int, names: Sequence[str] | None = None):
        if branches < 1:
            raise ValueError("need at least one branch")
        self.field = field
        self.n = branches
        self.names = tuple(names) if names else tuple(f"X{i + 1}" for i in range(branches))
        if len(self.names) != branches:
            raise ValueError("one variable name per branch")
        self.ring = PolyRing(self.names, field)

    def __repr__(self):
        return f"AxesRing({self.field}, {self.n}, {list(self.names)})"

    def __eq__(self, other):
        return isinstance(other, AxesRing) and self.ring == other.ring

    def __hash__(self):
        return hash(self.ring)

    @cached_property
    def presentation(self) -> RingPresentation:
        gens = self.ring.gens
        rels = [gens[i] * gens[j] for i in range(self.n) for j in range(i + 1, self.n)]
        return RingPresentation(self.ring, rels)

    def element(self, f) -> "AxesElement":
        return canonicalize(self.ring(f), self)

    def ideal(self, *gens) -> list:
        return [self.element(g) for g in gens]


@dataclass(frozen=True)
class AxesElement:
    """``constant`` plus, for each branch i, a dict {k >= 1: coeff of X_i^k}."""

    ring: AxesRing
    constant: object
    branches: tuple

    def branch(self, i: int) -> dict:
        return self.branches[i]

    def restriction(self, i: int) -> dict:
        """Univariate coefficients of the component on branch i, constant included."""
        out = dict(self.branches[i])
        if self.constant:
            out[0] = self.constant
        return out

    def is_unit(self) -> bool:
        return bool(self.constant)

    def is_zero(self) -> bool:
        return not self.constant and not any(self.branches)

    def to_polynomial(self) -> Polynomial:
        ring = self.ring.ring
        n = self.ring.n
        terms = {}
        if self.constant:
            terms[(0,) * n] = self.constant
        for i, part in enumerate(self.branches):
            for k, c in part.items():
                e = [0] * n
                e[i] = k
                terms[tuple(e)] = c
        return Polynomial(ring, terms)

    def __str__(self):
        fld = self.ring.field
        parts = [str(fld.signed(self.constant) if self.constant else 0)]
        for i, part in enumerate(self.branches):
            uni = PolyRing((self.ring.names[i],), fld)
            parts.append(format_polynomial(Polynomial(uni, {(k,): c for k, c in part.items()})))
        return " | ".join(parts)

    def __add__(self, other):
        return canonicalize(self.to_polynomial() + other.to_polynomial(), self.ring)

    def __mul__(self, other):
        return canonicalize(self.to_polynomial() * other.to_polynomial(), self.ring)


def canonicalize(f: Polynomial, A: AxesRing) -> AxesElement:
    """Normal form modulo (X_i X_j): mixed monomials vanish."""
    if f.ring != A.ring:
        raise AmbientMismatch(f"{f.ring!r} is not the ring of {A!r}")
    constant = A.field.zero
    branches = [dict() for _ in range(A.n)]
    for e, c in f.terms.items():
        support = [i for i, k in enumerate(e) if k]
        if not support:
            constant = c
        elif len(support) == 1:
            i = support[0]
            branches[i][e[i]] = c
    return AxesElement(A, constant, tuple(branches))


def val_branch(f: AxesElement, i: int):
    """Order of vanishing on branch i (0-based); INF for the zero component."""
    if not 0 <= i < f.ring.n:
        raise IndexError(f"branch {i} out of range")
    if f.constant:
        return 0
    part = f.branches[i]
    return min(part) if part else INF


def val_ideal(I: Sequence[AxesElement], i: int):
    """Minimum of the branch valuation over the generators."""
    if not I:
        raise ValueError("val_ideal needs at least one generator")
    return min((val_branch(g, i) for g in I), key=lambda v: (v is INF, 0 if v is INF else v))


def _vmin(values):
    finite = [v for v in values if v is not INF]
    return min(finite) if finite else INF


# ---------------------------------------------------------------------------
# valuative membership


class Lemma1Kind:
    MEMBER_WITH_WITNESS = "MemberWithWitness"
    NON_MEMBER_AT_BRANCH = "NonMemberAtBranch"
    BOUNDARY_FALLBACK = "BoundaryFallback"


@dataclass
class Lemma1Outcome:
    """Result of the valuative test.

    For MemberWithWitness: ``unit * f == sum(cofactors[k] * I[k])`` exactly in
    the axes ring, with ``unit`` a polynomial of nonzero constant term (a unit
    at the meeting point; it is 1 whenever the chosen generators have
    constant-free unit parts).
    """

    kind: str
    member: bool
    f_vals: tuple
    ideal_vals: tuple
    cofactors: list | None = None
    unit: AxesElement | None = None
    branch: int | None = None
    method: str = "valuation"

    def to_dict(self) -> dict:
        d = {
            "kind": self.kind,
            "member": self.member,
            "val_f": [as_json_val(v) for v in self.f_vals],
            "val_I": [as_json_val(v) for v in self.ideal_vals],
            "method": self.method,
        }
        if self.cofactors is not None:
            d["cofactors"] = [str(c) for c in self.cofactors]
            d["unit"] = str(self.unit)
        if self.branch is not None:
            d["branch"] = self.branch + 1
        return d


def _uni_key(d: dict):
    return min(d) if d else None


def lemma1_membership(f: AxesElement, I: Sequence[AxesElement], A: AxesRing | None = None) -> Lemma1Outcome:
    """Membership of f in the ideal generated by I, localized at the meeting point.

    If every branch valuation of f strictly exceeds the ideal's, build the
    witness branch by branch: pick g_i attaining the minimum on branch i,
    write its component as X_i^v * u_i with u_i(0) != 0, and use
    y_i = (f_i / X_i^v) / u_i, which lives on branch i only.
    """
    A = A or f.ring
    n = A.n
    if not I:
        I = [canonicalize(A.ring.zero, A)]
    f_vals = tuple(val_branch(f, i) for i in range(n))
    I_vals = tuple(val_ideal(I, i) for i in range(n))

    if all(exceeds(a, b) for a, b in zip(f_vals, I_vals)):
        ring = A.ring
        gens = ring.gens
        units = []
        numer = []
        chosen = []
        for i in range(n):
            if f_vals[i] is INF:
                continue
            v = I_vals[i]
            k = next(j for j, g in enumerate(I) if val_branch(g, i) == v)
            comp = I[k].restriction(i)
            u = Polynomial(ring, {_pow(n, i, d - v): c for d, c in comp.items()})
            N = Polynomial(ring, {_pow(n, i, d - v): c for d, c in f.branches[i].items()})
            units.append(u)
            numer.append(N)
            chosen.append(k)
        cof = [ring.zero for _ in I]
        D = ring.one
        for u in units:
            D = D * u
        for idx, (k, N) in enumerate(zip(chosen, numer)):
            a = N
            for jdx, u in enumerate(units):
                if jdx != idx:
                    a = a * u
            cof[k] = cof[k] + a
        D_el = canonicalize(D, A)
        cof_el = [canonicalize(c, A) for c in cof]
        if D_el.is_unit() and not any(D_el.branches):
            inv = A.field.inv(D_el.constant)
            cof_el = [canonicalize(c.to_polynomial().scale(inv), A) for c in cof_el]
            D_el = canonicalize(ring.one, A)
        return Lemma1Outcome(Lemma1Kind.MEMBER_WITH_WITNESS, True, f_vals, I_vals,
                             cofactors=cof_el, unit=D_el)

    for i, (a, b) in enumerate(zip(f_vals, I_vals)):
        if a is not INF and (b is INF or a < b):
            return Lemma1Outcome(Lemma1Kind.NON_MEMBER_AT_BRANCH, False, f_vals, I_vals, branch=i)

    R = A.presentation
    m = local_membership(f.to_polynomial(), Ideal(A.ring, [g.to_polynomial() for g in I]), R)
    return Lemma1Outcome(Lemma1Kind.BOUNDARY_FALLBACK, m.member, f_vals, I_vals, method=m.method)


def _pow(n, i, k):
    e = [0] * n
    e[i] = k
    return tuple(e)


def recompose(outcome: Lemma1Outcome, f: AxesElement, I: Sequence[AxesElement]) -> bool:
    """Check unit * f == sum(cofactor * generator) exactly."""
    A = f.ring
    total = A.ring.zero
    for c, g in zip(outcome.cofactors, I):
        total = total + c.to_polynomial() * g.to_polynomial()
    lhs = outcome.unit.to_polynomial() * f.to_polynomial()
    return canonicalize(total - lhs, A).is_zero() and outcome.unit.is_unit()


# ---------------------------------------------------------------------------
# recognizing axes presentations


class InvalidChangeOfVariables(ValueError):
    """The supplied coordinate maps are not mutually inverse isomorphisms."""


@dataclass
class AxesCheck:
    accepted: bool
    reason: str
    axes: AxesRing | None = None
    to_axes: RingHom | None = None
    from_axes: RingHom | None = None
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.accepted

    def to_dict(self) -> dict:
        d = {"accepted": self.accepted, "reason": self.reason}
        if self.axes is not None:
            d["branches"] = self.axes.n
            d["axes_vars"] = list(self.axes.names)
        d.update(self.details)
        return d


def affine_hilbert_function(R: RingPresentation, d: int) -> int:
    """dim of polynomials of degree <= d modulo the relations."""
    leads = [g.leading_monomial(DEGREVLEX) for g in R.relations.groebner(DEGREVLEX)]
    count = 0
    for e in R.ring.monomials_up_to(d):
        if not any(all(a <= b for a, b in zip(l, e)) for l in leads):
            count += 1
    return count


def is_axes_presentation(R: RingPresentation, change: tuple | None = None) -> AxesCheck:
    """Decide whether R is (after an optional change of variables) an axes ring.

    ``change`` is a pair (forward: R -> A, backward: A -> R) of homs with A
    the canonical presentation of an :class:`AxesRing`.
    """
    if change is not None:
        fwd, back = change
        vf, vb = validate_hom(fwd), validate_hom(back)
        if not vf or not vb:
            raise InvalidChangeOfVariables(
                f"coordinate maps do not respect relations: {vf.offending or vb.offending}"
            )
        if fwd.target.ring != back.source.ring or fwd.source.ring != R.ring or back.target.ring != R.ring:
            raise InvalidChangeOfVariables("coordinate maps do not connect R with one axes ring")
        A = AxesRing(fwd.target.field, fwd.target.ring.nvars, fwd.target.variables)
        if not A.presentation.relations.same_ideal(fwd.target.relations):
            raise InvalidChangeOfVariables("forward map does not land in a canonical axes presentation")
        roundtrip_R = compose(vb.hom, vf.hom)
        roundtrip_A = compose(vf.hom, vb.hom)
        if any(R.reduce(img - x) for img, x in zip(roundtrip_R.images, R.ring.gens)) or any(
            A.presentation.reduce(img - x) for img, x in zip(roundtrip_A.images, A.ring.gens)
        ):
            raise InvalidChangeOfVariables("coordinate maps are not mutually inverse")
        return AxesCheck(True, "isomorphic to axes ring via the supplied coordinates",
                         A, vf.hom, vb.hom)

    n = R.ring.nvars
    A = AxesRing(R.field, n, R.variables)
    expected = A.presentation.relation_basis(DEGREVLEX)
    actual = R.relation_basis(DEGREVLEX)
    if [g.terms for g in expected] == [g.terms for g in actual] or (
        n == 1 and not actual
    ):
        ident = validate_hom(RingHom(R, A.presentation, A.ring.gens, "coords")).hom
        back = validate_hom(RingHom(A.presentation, R, R.ring.gens, "coords^-1")).hom
        return AxesCheck(True, "relations are exactly the pairwise products", A, ident, back)
    for d in range(1, 4):
        hf = affine_hilbert_function(R, d)
        if hf != 1 + n * d:
            return AxesCheck(
                False,
                f"affine Hilbert function is {hf} in degree <= {d}, an axes ring on "
                f"{n} variables has {1 + n * d}; no affine change of variables helps",
                details={"hilbert_degree": d, "hilbert_value": hf, "axes_value": 1 + n * d},
            )
    return AxesCheck(False, "relations are not the pairwise products in these coordinates; "
                            "supply a change of variables")


# ---------------------------------------------------------------------------
# axes closure tests


@dataclass
class AxesTarget:
    """A validated hom φ: R -> S, and the identification of S with an axes ring."""

    hom: RingHom
    check: AxesCheck

    @property
    def name(self) -> str:
        return self.hom.name

    def to_axes(self) -> RingHom:
        return compose(self.check.to_axes, self.hom, self.hom.name)


def make_target(hom: RingHom, change: tuple | None = None) -> AxesTarget:
    v = validate_hom(hom)
    if not v:
        raise ValueError(f"homomorphism {hom.name} is not well defined: {v.offending}")
    check = is_axes_presentation(hom.target, change)
    if not check:
        raise ValueError(f"target of {hom.name} is not an axes ring: {check.reason}")
    return AxesTarget(v.hom, check)


@dataclass
class AxesReport:
    verdict: str
    refuting: list
    per_hom: list

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "evidence": {
                "refuting_homs": list(self.refuting),
                "per_hom": self.per_hom,
                "note": ("every listed test passed; this is not a proof of axes-closure membership"
                         if self.verdict == "PassedAllTests" else "f is not in the axes closure"),
            },
        }


def image_membership(target: AxesTarget, I: Ideal, f: Polynomial) -> tuple[Membership, Lemma1Outcome, dict]:
    psi = target.to_axes()
    A = target.check.axes
    fi = apply_hom(psi, f)
    Ii = extend_ideal(psi, I)
    exact = ideal_membership(fi, Ii, A.presentation)
    lem = lemma1_membership(canonicalize(fi, A), [canonicalize(g, A) for g in Ii.generators], A)
    info = {
        "image_f": str(canonicalize(fi, A)),
        "image_I": [str(canonicalize(g, A)) for g in Ii.generators],
    }
    return exact, lem, info


def axes_closure_test(R: RingPresentation, I: Ideal, f: Polynomial, targets: Sequence[AxesTarget]) -> AxesReport:
    """Test φ(f) ∈ φ(I)S for each target; any failure refutes f ∈ I^ax."""
    refuting = []
    rows = []
    for t in targets:
        if not t.hom.validated:
            raise ValueError(f"homomorphism {t.name} has not been validated")
        if t.hom.source.ring != R.ring:
            raise AmbientMismatch(f"homomorphism {t.name} does not start at R")
        exact, lem, info = image_membership(t, I, f)
        rows.append({"hom": t.name, "member": exact.member, "local_criterion": lem.to_dict(), **info})
        if not exact.member:
            refuting.append(t.name)
    return AxesReport("Refuted" if refuting else "PassedAllTests", refuting, rows)


def valuation_chain(target: AxesTarget, m: Ideal, I: Ideal, f: Polynomial, q0: int) -> list:
    """Per-branch valuations behind the special tight closure argument.

    Records val(φ(f)), val(φ(I)), val(φ(m)) and whether
    q0*val(φ(f)) >= val(φ(m)) + q0*val(φ(I)) and val(φ(f)) > val(φ(I)).
    """
    psi = target.to_axes()
    A = target.check.axes
    h = canonicalize(apply_hom(psi, f), A)
    Ii = [canonicalize(g, A) for g in extend_ideal(psi, I).generators] or [canonicalize(A.ring.zero, A)]
    mi = [canonicalize(g, A) for g in extend_ideal(psi, m).generators] or [canonicalize(A.ring.zero, A)]
    rows = []
    for i in range(A.n):
        vh, vI, va = val_branch(h, i), val_ideal(Ii, i), val_ideal(mi, i)
        if vh is INF:
            weak = True
        elif vI is INF or va is INF:
            weak = False
        else:
            weak = q0 * vh >= va + q0 * vI
        rows.append({
            "branch": i + 1,
            "val_f": as_json_val(vh), "val_I": as_json_val(vI), "val_m": as_json_val(va),
            "scaled_inequality": weak, "strict": exceeds(vh, vI),
        })
    return rows
