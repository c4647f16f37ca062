"""Sparse multivariate polynomials over an exact field.

A polynomial is a mapping from exponent tuples to nonzero coefficients.
Exponent tuples are indexed by the ring's declared variable order; monomial
orders only decide how terms are *ranked*, never how they are stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .fields import FieldSpec

Exponents = tuple  # tuple[int, ...], one entry per ring variable


class AmbientMismatch(ValueError):
    """Raised when two objects live in different polynomial rings."""


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, offset: int, text: str = ""):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.text = text


# ---------------------------------------------------------------------------
# monomial orders

ORDER_KINDS = ("degrevlex", "deglex", "lex")


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order on ``nvars`` variables.

    ``perm`` lists variable indices from largest to smallest; it defaults to
    the declared order.  ``block > 0`` turns the order into an elimination
    order for the first ``block`` variables of ``perm`` (their total degree is
    compared first).
    """

    kind: str = "degrevlex"
    perm: tuple | None = None
    block: int = 0

    def __post_init__(self):
        if self.kind not in ORDER_KINDS:
            raise ValueError(f"unknown monomial order {self.kind!r}")

    def resolved_perm(self, nvars: int) -> tuple:
        if self.perm is None:
            return tuple(range(nvars))
        if sorted(self.perm) != list(range(nvars)):
            raise ValueError(f"variable permutation {self.perm} does not match {nvars} variables")
        return tuple(self.perm)

    def key_function(self, nvars: int) -> Callable[[Exponents], tuple]:
        """Return ``key`` with ``key(a) > key(b)`` iff monomial a > b."""
        perm = self.resolved_perm(nvars)
        rev = tuple(reversed(perm))
        if self.kind == "degrevlex":
            def base(e):
                return (sum(e),) + tuple(-e[i] for i in rev)
        elif self.kind == "deglex":
            def base(e):
                return (sum(e),) + tuple(e[i] for i in perm)
        else:
            def base(e):
                return tuple(e[i] for i in perm)
        if not self.block:
            return base
        head = perm[: self.block]

        def blocked(e):
            return (sum(e[i] for i in head),) + base(e)

        return blocked

    def describe(self, variables: Sequence[str]) -> str:
        perm = self.resolved_perm(len(variables))
        return f"{self.kind}:{','.join(variables[i] for i in perm)}"

    @classmethod
    def parse(cls, text: str, variables: Sequence[str]) -> "MonomialOrder":
        """Parse ``degrevlex`` or ``lex:Z,X,Y`` (variables largest first)."""
        kind, _, rest = text.strip().partition(":")
        kind = kind.strip() or "degrevlex"
        if not rest.strip():
            return cls(kind)
        names = [v for v in rest.replace(",", " ").split() if v]
        try:
            perm = tuple(variables.index(v) for v in names)
        except ValueError:
            raise ValueError(f"order {text!r} names an undeclared variable") from None
        return cls(kind, perm)


DEGREVLEX = MonomialOrder("degrevlex")


# ---------------------------------------------------------------------------
# rings and polynomials


class PolyRing:
    """The polynomial ring ``field[variables]``."""

    def __init__(self, variables: Iterable[str], field: FieldSpec):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable in {self.variables}")
        self.field = field
        self.nvars = len(self.variables)
        self._zero_exp = (0,) * self.nvars

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.variables == other.variables
            and self.field == other.field
        )

    def __hash__(self):
        return hash((self.variables, self.field))

    def __repr__(self):
        return f"PolyRing({list(self.variables)}, {self.field})"

    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    @property
    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        c = self.field(c)
        return Polynomial(self, {self._zero_exp: c} if c else {})

    def monomial(self, exps: Sequence[int], coeff=1) -> "Polynomial":
        exps = tuple(int(e) for e in exps)
        if len(exps) != self.nvars or min(exps, default=0) < 0:
            raise ValueError(f"bad exponent vector {exps}")
        c = self.field(coeff)
        return Polynomial(self, {exps: c} if c else {})

    def gen(self, name: str | int) -> "Polynomial":
        i = name if isinstance(name, int) else self.index(name)
        e = [0] * self.nvars
        e[i] = 1
        return self.monomial(e)

    @property
    def gens(self) -> tuple:
        return tuple(self.gen(i) for i in range(self.nvars))

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise KeyError(f"undeclared variable {name!r}") from None

    def from_dict(self, terms: Mapping) -> "Polynomial":
        f = self.field
        out = {}
        for e, c in terms.items():
            c = f(c)
            if c:
                out[tuple(e)] = c
        return Polynomial(self, out)

    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(text, self)

    def __call__(self, value) -> "Polynomial":
        if isinstance(value, Polynomial):
            if value.ring != self:
                raise AmbientMismatch(f"{value.ring!r} is not {self!r}")
            return value
        if isinstance(value, str):
            return self.parse(value)
        return self.constant(value)

    def with_field(self, field: FieldSpec) -> "PolyRing":
        return PolyRing(self.variables, field)

    def monomials_up_to(self, degree: int) -> list:
        """All exponent vectors of total degree <= degree."""
        out = []

        def rec(i, left, acc):
            if i == self.nvars - 1:
                for k in range(left + 1):
                    out.append(tuple(acc + [k]))
                return
            for k in range(left + 1):
                rec(i + 1, left - k, acc + [k])

        if self.nvars == 0:
            return [()]
        rec(0, degree, [])
        return out


class Polynomial:
    """Immutable sparse polynomial.  ``terms`` maps exponents to coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- basic protocol

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.constant(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({str(self)!r}, {self.ring.field})"

    def __str__(self):
        return format_polynomial(self)

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise AmbientMismatch(f"{other.ring!r} is not {self.ring!r}")
            return other
        return self.ring.constant(other)

    # -- arithmetic

    def __add__(self, other):
        other = self._coerce(other)
        p = self.ring.field.p
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = (v + c) % p if p else v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.field.p
        if p:
            return Polynomial(self.ring, {e: (p - c) for e, c in self.terms.items()})
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        other = self._coerce(other)
        p = self.ring.field.p
        out: dict = {}
        get = out.get
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = get(e, 0) + c1 * c2
        if p:
            out = {e: c % p for e, c in out.items() if c % p}
        else:
            out = {e: c for e, c in out.items() if c}
        return Polynomial(self.ring, out)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "Polynomial":
        f = self.ring.field
        c = f(c)
        if not c:
            return self.ring.zero
        p = f.p
        if p:
            return Polynomial(self.ring, {e: v * c % p for e, v in self.terms.items()})
        return Polynomial(self.ring, {e: v * c for e, v in self.terms.items()})

    def mul_monomial(self, exps: Exponents, c=1) -> "Polynomial":
        f = self.ring.field
        c = f(c)
        p = f.p
        if not c:
            return self.ring.zero
        out = {}
        for e, v in self.terms.items():
            out[tuple(a + b for a, b in zip(e, exps))] = v * c % p if p else v * c
        return Polynomial(self.ring, out)

    def __pow__(self, n: int):
        """Exact power by repeated squaring."""
        if n < 0:
            raise ValueError("negative exponent")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- inspection

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self):
        return self.terms.get(self.ring._zero_exp, self.ring.field.zero)

    def variables_used(self) -> set:
        return {i for e in self.terms for i, k in enumerate(e) if k}

    def sorted_terms(self, order: MonomialOrder = DEGREVLEX) -> list:
        """Terms ``(exps, coeff)`` from largest to smallest monomial."""
        key = order.key_function(self.ring.nvars)
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_term(self, order: MonomialOrder = DEGREVLEX):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        key = order.key_function(self.ring.nvars)
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def leading_monomial(self, order: MonomialOrder = DEGREVLEX) -> Exponents:
        return self.leading_term(order)[0]

    def monic(self, order: MonomialOrder = DEGREVLEX) -> "Polynomial":
        if not self.terms:
            return self
        _, c = self.leading_term(order)
        return self.scale(self.ring.field.inv(c))

    # -- substitution and ring changes

    def substitute(self, images: Sequence["Polynomial"], target: PolyRing | None = None) -> "Polynomial":
        """Evaluate at ``images`` (one target polynomial per variable)."""
        if len(images) != self.ring.nvars:
            raise ValueError("need one image per variable")
        target = target or (images[0].ring if images else self.ring)
        powers: list[dict] = [dict() for _ in images]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                if k == 0:
                    cache[k] = target.one
                elif k == 1:
                    cache[k] = images[i]
                else:
                    half = power(i, k // 2)
                    sq = half * half
                    cache[k] = sq * images[i] if k % 2 else sq
            return cache[k]

        fld = target.field
        result = target.zero
        for e, c in self.terms.items():
            term = target.constant(fld(c) if fld.p else c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def frobenius(self, q: int) -> "Polynomial":
        """``f**q`` over F_p for q a power of p, computed as sum c * m**q."""
        p = self.ring.field.p
        if not p:
            raise ValueError("Frobenius needs a prime field")
        r = q
        while r % p == 0:
            r //= p
        if r != 1:
            raise ValueError(f"{q} is not a power of {p}")
        return Polynomial(self.ring, {tuple(k * q for k in e): c for e, c in self.terms.items()})

    def map_coefficients(self, ring: PolyRing, fn) -> "Polynomial":
        out = {}
        for e, c in self.terms.items():
            v = fn(c)
            if v:
                out[e] = v
        return Polynomial(ring, out)

    def embed(self, ring: PolyRing) -> "Polynomial":
        """Rename into a ring containing all of this ring's variables."""
        idx = [ring.index(v) for v in self.ring.variables]
        out = {}
        for e, c in self.terms.items():
            ne = [0] * ring.nvars
            for i, k in zip(idx, e):
                ne[i] = k
            out[tuple(ne)] = c
        if ring.field != self.ring.field:
            raise AmbientMismatch("embedding must keep the field")
        return Polynomial(ring, out)


# ---------------------------------------------------------------------------
# text format


def _format_coeff(c) -> str:
    return str(c)


def format_polynomial(f: Polynomial, order: MonomialOrder = DEGREVLEX) -> str:
    if not f.terms:
        return "0"
    names = f.ring.variables
    fld = f.ring.field
    pieces = []
    for e, c in f.sorted_terms(order):
        c = fld.signed(c)
        neg = c < 0
        a = -c if neg else c
        mono = "*".join(
            names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
        )
        if not mono:
            body = _format_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_coeff(a)}*{mono}"
        if not pieces:
            pieces.append(f"-{body}" if neg else body)
        else:
            pieces.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(pieces)


def parse_polynomial(text: str, ring: PolyRing) -> Polynomial:
    """Parse the polynomial text grammar.

    Terms are joined by ``+``/``-``; a term is an optional coefficient and
    ``*``-separated factors ``X`` or ``X^3``.  Coefficients are integers, or
    ``a/b`` fractions (which must be invertible in the field).
    """
    return _Parser(text, ring).parse()


class _Parser:
    def __init__(self, text: str, ring: PolyRing):
        self.text = text
        self.ring = ring
        self.pos = 0

    def error(self, msg, pos=None):
        raise PolynomialSyntaxError(msg, self.pos if pos is None else pos, self.text)

    def skip(self):
        t = self.text
        while self.pos < len(t) and t[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected integer")
        return int(self.text[start:self.pos])

    def parse(self) -> Polynomial:
        ring = self.ring
        result = ring.zero
        if not self.peek():
            self.error("empty polynomial")
        first = True
        while True:
            ch = self.peek()
            sign = 1
            if ch in "+-":
                sign = -1 if ch == "-" else 1
                self.pos += 1
            elif not first:
                self.error(f"unexpected {ch!r}")
            result = result + self.term().scale(sign)
            first = False
            if not self.peek():
                return result

    def term(self) -> Polynomial:
        ring = self.ring
        coeff = Fraction(1)
        exps = [0] * ring.nvars
        self.skip()
        begin = self.pos
        while True:
            self.skip()
            ch = self.peek()
            if ch.isdigit():
                num = Fraction(self.integer())
                if self.peek() == "/":
                    self.pos += 1
                    slash = self.pos
                    den = self.integer()
                    if den == 0:
                        self.error("division by zero", slash)
                    num /= den
                coeff *= num
            elif ch.isalpha() or ch == "_":
                start = self.pos
                while self.pos < len(self.text) and (
                    self.text[self.pos].isalnum() or self.text[self.pos] == "_"
                ):
                    self.pos += 1
                name = self.text[start:self.pos]
                if name not in ring.variables:
                    self.error(f"undeclared variable {name!r}", start)
                k = 1
                if self.peek() == "^":
                    self.pos += 1
                    if not self.peek().isdigit():
                        self.error("malformed exponent")
                    k = self.integer()
                exps[ring.variables.index(name)] += k
            elif ch == "":
                self.error("unexpected end of input")
            else:
                self.error(f"unexpected {ch!r}")
            if self.peek() == "*":
                self.pos += 1
                continue
            break
        try:
            c = ring.field(coeff)
        except ZeroDivisionError as exc:
            self.error(str(exc), begin)
        return ring.monomial(exps, c)
