"""Line-oriented problem files.

A problem file declares one ring and the data a command needs::

    field F7
    vars X Y Z
    relations
      X^3 + Y^3 + Z^3
    ideal I = X, Y
    element f = Z^2
    hom xi
      target vars U V
      target relations U*V
      X = 6*U + 2*V
      Y = 0
      Z = 4*U + 3*V
    params
      e_max = 3
      c_deg = 4

Section bodies are indented or follow on the header line after ``=`` (for
``ideal``/``element``) or directly (for ``relations``).  Polynomials in one
line are separated by commas.  ``#`` starts a comment.  Anything not in the
grammar is an error; nothing is filled in silently except documented
parameter defaults.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property

from .axes import AxesRing, AxesTarget, make_target
from .fields import FieldSpec
from .frobenius import TightParams
from .groebner import Budget
from .ideals import Ideal, RingHom, RingPresentation
from .polynomial import MonomialOrder, Polynomial, PolynomialSyntaxError, PolyRing, format_polynomial


class ProblemSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


SECTIONS = ("field", "vars", "relations", "ideal", "element", "hom", "params")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

# key -> (kind, default)
PARAM_KEYS = {
    "e_max": ("int", 3),
    "c_deg": ("int", 2),
    "q0_max": ("int", 1),
    "primes": ("ints", ()),
    "order": ("str", "degrevlex"),
    "budget": ("int", Budget().max_pairs),
    "domain": ("bool", True),
    "candidates": ("polys", ()),
    "exclude_divisors_of": ("int", 0),
    "ideal": ("name", None),
    "element": ("name", None),
    "maximal": ("name", None),
}


@dataclass(frozen=True)
class HomSpec:
    """A hom block: target presentation, images, optional axes coordinates.

    ``axes_vars``/``forward``/``backward`` identify the target with the
    canonical axes ring on ``axes_vars``; ``target_axes`` instead says the
    target already is that canonical ring.
    """

    name: str
    target_vars: tuple
    target_relations: tuple
    images: tuple
    target_axes: bool = False
    axes_vars: tuple = ()
    forward: tuple = ()
    backward: tuple = ()


@dataclass(frozen=True)
class ProblemFile:
    field: FieldSpec
    variables: tuple
    relations: tuple
    ideals: dict = field(default_factory=dict)
    elements: dict = field(default_factory=dict)
    homs: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def __eq__(self, other):
        if not isinstance(other, ProblemFile):
            return NotImplemented
        return (self.field, self.variables, self.relations, self.ideals, self.elements, self.homs,
                self.params) == (other.field, other.variables, other.relations, other.ideals,
                                 other.elements, other.homs, other.params)

    __hash__ = None

    @cached_property
    def ring(self) -> PolyRing:
        return PolyRing(self.variables, self.field)

    @cached_property
    def presentation(self) -> RingPresentation:
        return RingPresentation(self.ring, self.relations, order=self.order)

    @property
    def order(self) -> MonomialOrder:
        return MonomialOrder.parse(self.param("order"), self.variables)

    def param(self, key: str):
        if key not in PARAM_KEYS:
            raise KeyError(key)
        return self.params.get(key, PARAM_KEYS[key][1])

    def _pick(self, table: dict, key: str, name: str | None, what: str):
        name = name or self.param(key)
        if name is None:
            if len(table) != 1:
                raise ValueError(f"several {what}s declared; name one of {sorted(table)}")
            name = next(iter(table))
        if name not in table:
            raise ValueError(f"no {what} named {name!r}")
        return name

    def ideal_name(self, name: str | None = None) -> str:
        return self._pick(self.ideals, "ideal", name, "ideal")

    def element_name(self, name: str | None = None) -> str:
        return self._pick(self.elements, "element", name, "element")

    def ideal(self, name: str | None = None) -> Ideal:
        return Ideal(self.ring, self.ideals[self.ideal_name(name)])

    def element(self, name: str | None = None) -> Polynomial:
        return self.elements[self.element_name(name)]

    def maximal_ideal(self) -> Ideal:
        """The ``maximal`` ideal if named, else the ideal of all variables."""
        name = self.param("maximal")
        if name is not None:
            return self.ideal(name)
        return Ideal(self.ring, self.ring.gens)

    def tight_params(self) -> TightParams:
        return TightParams(
            c_deg=self.param("c_deg"),
            e_max=self.param("e_max"),
            candidates=tuple(self.param("candidates")),
            domain=self.param("domain"),
            order=self.order if "order" in self.params else None,
            budget=Budget(max_pairs=self.param("budget")),
        )

    def hom(self, name: str) -> RingHom:
        spec = self.homs[name]
        target = RingPresentation(PolyRing(spec.target_vars, self.field), spec.target_relations)
        return RingHom(self.presentation, target, spec.images, name)

    def target(self, name: str) -> AxesTarget:
        spec = self.homs[name]
        h = self.hom(name)
        change = None
        if spec.axes_vars:
            A = AxesRing(self.field, len(spec.axes_vars), spec.axes_vars)
            fwd = RingHom(h.target, A.presentation, spec.forward, f"{name}:to_axes")
            back = RingHom(A.presentation, h.target, spec.backward, f"{name}:from_axes")
            change = (fwd, back)
        return make_target(h, change)


# ---------------------------------------------------------------------------
# parsing


class _Lines:
    def __init__(self, text: str):
        self.rows = []
        for n, raw in enumerate(text.splitlines(), 1):
            body = raw.split("#", 1)[0].rstrip()
            if body.strip():
                indent = len(body) - len(body.lstrip())
                self.rows.append((n, indent, body.strip(), raw.index(body.strip()) + 1))


def _split_items(text: str, line: int, col: int) -> list:
    """Comma-separated items with their column offsets."""
    out = []
    pos = 0
    for piece in text.split(","):
        lead = len(piece) - len(piece.lstrip())
        if not piece.strip():
            raise ProblemSyntaxError("empty item", line, col + pos)
        out.append((piece.strip(), col + pos + lead))
        pos += len(piece) + 1
    return out


def _poly(text: str, ring: PolyRing, line: int, col: int) -> Polynomial:
    try:
        return ring.parse(text)
    except PolynomialSyntaxError as exc:
        msg = str(exc).rsplit(" at offset", 1)[0]
        raise ProblemSyntaxError(msg, line, col + exc.offset) from None


def _polys(text: str, ring: PolyRing, line: int, col: int) -> list:
    return [_poly(t, ring, line, c) for t, c in _split_items(text, line, col)]


def _check_vars(names: list, line: int, col: int) -> tuple:
    for v in names:
        if not _NAME.match(v):
            raise ProblemSyntaxError(f"invalid variable name {v!r}", line, col)
    if len(set(names)) != len(names):
        raise ProblemSyntaxError("duplicate variable", line, col)
    if not names:
        raise ProblemSyntaxError("no variables declared", line, col)
    return tuple(names)


def _param_value(key: str, text: str, ring: PolyRing, line: int, col: int):
    kind = PARAM_KEYS[key][0]
    try:
        if kind == "int":
            v = int(text)
            if v < 0:
                raise ValueError
            return v
        if kind == "ints":
            return tuple(int(t) for t in text.replace(",", " ").split())
        if kind == "bool":
            if text.lower() not in ("true", "false"):
                raise ValueError
            return text.lower() == "true"
        if kind == "name":
            if not _NAME.match(text):
                raise ValueError
            return text
        if kind == "polys":
            return tuple(_polys(text, ring, line, col))
        return text
    except ValueError:
        raise ProblemSyntaxError(f"bad value {text!r} for {key}", line, col) from None


def parse_problem(text: str) -> ProblemFile:
    """Parse and structurally validate a problem file."""
    rows = _Lines(text).rows
    fld = None
    variables = None
    relations: list = []
    ideals: dict = {}
    elements: dict = {}
    homs: dict = {}
    raw_params: list = []
    seen = set()
    i = 0

    def ring_needed(line):
        if fld is None or variables is None:
            raise ProblemSyntaxError("field and vars must come first", line)
        return PolyRing(variables, fld)

    def body(start):
        j = start
        out = []
        while j < len(rows) and rows[j][1] > 0:
            out.append(rows[j])
            j += 1
        return out, j

    while i < len(rows):
        line, indent, content, col = rows[i]
        if indent:
            raise ProblemSyntaxError("indented line outside a section", line, col)
        head, _, rest = content.partition(" ")
        rest = rest.strip()
        rcol = col + content.index(rest, len(head)) if rest else col
        if head not in SECTIONS:
            raise ProblemSyntaxError(f"unknown section {head!r}", line, col)
        lines, i = body(i + 1)
        if head in ("field", "vars", "relations", "params"):
            if head in seen:
                raise ProblemSyntaxError(f"duplicate section {head!r}", line, col)
            seen.add(head)
        if head == "field":
            if lines or not rest:
                raise ProblemSyntaxError("field takes exactly one value", line, col)
            try:
                fld = FieldSpec.parse(rest)
            except ValueError as exc:
                raise ProblemSyntaxError(str(exc), line, rcol) from None
        elif head == "vars":
            if lines:
                raise ProblemSyntaxError("vars fits on one line", lines[0][0], lines[0][3])
            variables = _check_vars(rest.replace(",", " ").split(), line, rcol)
        elif head == "relations":
            ring = ring_needed(line)
            if rest:
                relations += _polys(rest, ring, line, rcol)
            for ln, _, c, cc in lines:
                relations += _polys(c, ring, ln, cc)
        elif head in ("ideal", "element"):
            ring = ring_needed(line)
            name, eq, inline = rest.partition("=")
            name = name.strip()
            if not _NAME.match(name):
                raise ProblemSyntaxError(f"{head} needs a name", line, rcol)
            table = ideals if head == "ideal" else elements
            if name in table:
                raise ProblemSyntaxError(f"duplicate {head} {name!r}", line, col)
            items = []
            if eq:
                icol = col + content.index("=") + 1
                items += _polys(inline, ring, line, icol) if inline.strip() else []
            for ln, _, c, cc in lines:
                items += _polys(c, ring, ln, cc)
            if head == "element":
                if len(items) != 1:
                    raise ProblemSyntaxError("an element is exactly one polynomial", line, col)
                elements[name] = items[0]
            else:
                ideals[name] = tuple(items)
        elif head == "hom":
            ring = ring_needed(line)
            if not _NAME.match(rest):
                raise ProblemSyntaxError("hom needs a name", line, rcol)
            if rest in homs:
                raise ProblemSyntaxError(f"duplicate hom {rest!r}", line, col)
            homs[rest] = _parse_hom(rest, lines, ring, line)
        else:
            if rest:
                raise ProblemSyntaxError("params entries go on their own lines", line, rcol)
            raw_params += lines

    if fld is None or variables is None:
        raise ProblemSyntaxError("missing field or vars section", rows[-1][0] if rows else 1)
    ring = PolyRing(variables, fld)
    params: dict = {}
    for ln, _, c, cc in raw_params:
        key, eq, val = c.partition("=")
        key = key.strip()
        if not eq:
            raise ProblemSyntaxError("expected key = value", ln, cc)
        if key not in PARAM_KEYS:
            raise ProblemSyntaxError(f"unknown parameter {key!r}", ln, cc)
        if key in params:
            raise ProblemSyntaxError(f"duplicate parameter {key!r}", ln, cc)
        vcol = cc + c.index("=") + 1 + (len(val) - len(val.lstrip()))
        params[key] = _param_value(key, val.strip(), ring, ln, vcol)
    if "order" in params:
        try:
            MonomialOrder.parse(params["order"], variables)
        except ValueError as exc:
            raise ProblemSyntaxError(str(exc), *_param_pos(raw_params, "order")) from None
    for key, table in (("ideal", ideals), ("element", elements), ("maximal", ideals)):
        if params.get(key) is not None and params[key] not in table:
            raise ProblemSyntaxError(f"{key} {params[key]!r} is not declared", *_param_pos(raw_params, key))
    pf = ProblemFile(fld, variables, tuple(relations), ideals, elements, homs, params)
    try:
        pf.presentation
    except ValueError as exc:
        raise ProblemSyntaxError(str(exc), rows[0][0]) from None
    return pf


def _param_pos(rows, key):
    for ln, _, c, cc in rows:
        if c.partition("=")[0].strip() == key:
            return ln, cc
    return 1, 1


def _assignments(text: str, ring: PolyRing, line: int, col: int) -> dict:
    out = {}
    for item, c in _split_items(text, line, col):
        name, eq, rhs = item.partition("=")
        name = name.strip()
        if not eq or not name:
            raise ProblemSyntaxError("expected var = polynomial", line, c)
        out[name] = (_poly(rhs.strip(), ring, line, c + item.index("=") + 1 + len(rhs) - len(rhs.lstrip())),
                     line, c)
    return out


def _parse_hom(name: str, lines: list, source: PolyRing, hline: int) -> HomSpec:
    fld = source.field
    tvars = None
    trel_text = []
    axes_n = None
    axes_vars = ()
    fwd_text = []
    back_text = []
    image_text = []
    for ln, _, c, cc in lines:
        words = c.split()
        if words[:2] == ["target", "vars"]:
            tvars = _check_vars(c.split(None, 2)[2].replace(",", " ").split() if len(words) > 2 else [], ln, cc)
        elif words[:2] == ["target", "relations"]:
            txt = c.split(None, 2)[2] if len(words) > 2 else ""
            trel_text.append((txt, ln, cc + c.index(txt) if txt else cc))
        elif words[:2] == ["target", "axes"]:
            try:
                axes_n = int(words[2])
            except (IndexError, ValueError):
                raise ProblemSyntaxError("target axes needs a branch count", ln, cc) from None
            names = words[3:] or [f"X{k}" for k in range(1, axes_n + 1)]
            if len(names) != axes_n:
                raise ProblemSyntaxError("branch count and variable names disagree", ln, cc)
            tvars = _check_vars(names, ln, cc)
        elif words[:2] == ["axes", "vars"]:
            axes_vars = _check_vars(words[2:], ln, cc)
        elif words[:2] in (["axes", "forward"], ["axes", "backward"]):
            txt = c.split(None, 2)[2] if len(words) > 2 else ""
            (fwd_text if words[1] == "forward" else back_text).append((txt, ln, cc + c.index(txt) if txt else cc))
        elif "=" in c:
            image_text.append((c, ln, cc))
        else:
            raise ProblemSyntaxError(f"unknown hom directive {words[0]!r}", ln, cc)
    if tvars is None:
        raise ProblemSyntaxError(f"hom {name} has no target", hline)
    target = PolyRing(tvars, fld)
    if axes_n is not None:
        if trel_text:
            raise ProblemSyntaxError("target axes fixes the relations", trel_text[0][1], trel_text[0][2])
        rels = tuple(AxesRing(fld, axes_n, tvars).presentation.relations.generators)
    else:
        rels = tuple(p for txt, ln, cc in trel_text if txt for p in _polys(txt, target, ln, cc))
    imgs: dict = {}
    for txt, ln, cc in image_text:
        for k, v in _assignments(txt, target, ln, cc).items():
            if k not in source.variables:
                raise ProblemSyntaxError(f"{k!r} is not a source variable", v[1], v[2])
            if k in imgs:
                raise ProblemSyntaxError(f"{k!r} mapped twice", v[1], v[2])
            imgs[k] = v[0]
    missing = [v for v in source.variables if v not in imgs]
    if missing:
        raise ProblemSyntaxError(f"hom {name} gives no image for {', '.join(missing)}", hline)
    images = tuple(imgs[v] for v in source.variables)
    forward = backward = ()
    if axes_vars or fwd_text or back_text:
        if not (axes_vars and fwd_text and back_text):
            raise ProblemSyntaxError("axes coordinates need vars, forward and backward", hline)
        A = PolyRing(axes_vars, fld)
        forward = _ordered(fwd_text, A, tvars, hline, "forward")
        backward = _ordered(back_text, target, axes_vars, hline, "backward")
    return HomSpec(name, tvars, rels, images, axes_n is not None, axes_vars, forward, backward)


def _ordered(texts, ring: PolyRing, names: tuple, hline: int, what: str) -> tuple:
    got: dict = {}
    for txt, ln, cc in texts:
        for k, v in _assignments(txt, ring, ln, cc).items():
            if k not in names or k in got:
                raise ProblemSyntaxError(f"bad {what} assignment for {k!r}", v[1], v[2])
            got[k] = v[0]
    if set(got) != set(names):
        raise ProblemSyntaxError(f"axes {what} must assign each of {', '.join(names)}", hline)
    return tuple(got[k] for k in names)


# ---------------------------------------------------------------------------
# printing


def _fmt_value(key, v):
    kind = PARAM_KEYS[key][0]
    if kind == "ints":
        return ", ".join(str(x) for x in v)
    if kind == "bool":
        return "true" if v else "false"
    if kind == "polys":
        return ", ".join(format_polynomial(g) for g in v)
    return str(v)


def format_problem(pf: ProblemFile) -> str:
    """Canonical text; ``parse_problem(format_problem(pf)) == pf``."""
    out = [f"field {pf.field.name}", f"vars {' '.join(pf.variables)}"]
    if pf.relations:
        out.append("relations")
        out += [f"  {format_polynomial(g)}" for g in pf.relations]
    for name, gens in pf.ideals.items():
        out.append(f"ideal {name} = " + ", ".join(format_polynomial(g) for g in gens))
    for name, f in pf.elements.items():
        out.append(f"element {name} = {format_polynomial(f)}")
    for name, h in pf.homs.items():
        out.append(f"hom {name}")
        if h.target_axes:
            out.append(f"  target axes {len(h.target_vars)} {' '.join(h.target_vars)}")
        else:
            out.append(f"  target vars {' '.join(h.target_vars)}")
            if h.target_relations:
                out.append("  target relations " + ", ".join(format_polynomial(g) for g in h.target_relations))
        for v, img in zip(pf.variables, h.images):
            out.append(f"  {v} = {format_polynomial(img)}")
        if h.axes_vars:
            out.append(f"  axes vars {' '.join(h.axes_vars)}")
            out.append("  axes forward " + ", ".join(
                f"{v} = {format_polynomial(g)}" for v, g in zip(h.target_vars, h.forward)))
            out.append("  axes backward " + ", ".join(
                f"{v} = {format_polynomial(g)}" for v, g in zip(h.axes_vars, h.backward)))
    if pf.params:
        out.append("params")
        out += [f"  {k} = {_fmt_value(k, v)}" for k, v in pf.params.items()]
    return "\n".join(out) + "\n"
