"""Command dispatch shared by the CLI and the corpus runner.

Every command maps a parsed problem plus flags to a JSON-ready report with
a ``verdict`` field and an ``evidence`` field.  Timing never enters the
report unless asked for, so reports of the same input compare equal.
"""

from __future__ import annotations

import dataclasses

from .axes import AxesRing, axes_closure_test, canonicalize, is_axes_presentation, lemma1_membership
from .frobenius import PrimePower, bracket_power, special_tight_membership, tight_membership
from .groebner import Budget
from .ideals import ideal_membership
from .polynomial import format_polynomial
from .problem import PARAM_KEYS, ProblemFile
from .reduction import BadPrime, clear_denominators, fiber_sweep, reduce_mod_p

COMMANDS = ("gb", "member", "bracket", "tight", "special-tight", "axes-member", "axes-test",
            "is-axes", "reduce", "sweep", "corpus")

# flags that override problem parameters of the same name
PARAM_FLAGS = ("e_max", "c_deg", "q0_max", "primes", "order", "budget")


def with_flags(pf: ProblemFile, flags: dict) -> ProblemFile:
    params = dict(pf.params)
    for k in PARAM_FLAGS:
        if flags.get(k) is not None:
            v = flags[k]
            params[k] = tuple(v) if PARAM_KEYS[k][0] == "ints" else v
    return dataclasses.replace(pf, params=params)


def _fmt(gs) -> list:
    return [format_polynomial(g) for g in gs]


def _budget(pf: ProblemFile) -> Budget:
    return Budget(max_pairs=pf.param("budget"))


def cmd_gb(pf, flags):
    R = pf.presentation
    gens = list(R.relations.nonzero())
    label = "relations"
    if pf.ideals:
        name = pf.ideal_name(flags.get("ideal"))
        gens = list(pf.ideal(name).nonzero()) + gens
        label = f"{name} + relations"
    from .groebner import buchberger

    G = buchberger(gens, pf.order, _budget(pf))
    return {"verdict": "computed",
            "evidence": {"ideal": label, "order": pf.order.describe(pf.variables), "basis": _fmt(G)}}


def cmd_member(pf, flags):
    f, I = pf.element(flags.get("element")), pf.ideal(flags.get("ideal"))
    m = ideal_membership(f, I, pf.presentation, witness=True, order=pf.order, budget=_budget(pf))
    ev = {"element": format_polynomial(f), "ideal": _fmt(I.generators)}
    if m.member:
        ev["cofactors"] = _fmt(m.witness)
    return {"verdict": "member" if m.member else "non-member", "evidence": ev}


def cmd_bracket(pf, flags):
    I = pf.ideal(flags.get("ideal"))
    p = pf.field.p
    rows = []
    for e in range(1, pf.param("e_max") + 1):
        rows.append({"e": e, "q": p ** e if p else None,
                     "generators": _fmt(bracket_power(I, PrimePower(p, e)).generators)})
    return {"verdict": "computed", "evidence": {"ideal": _fmt(I.generators), "powers": rows}}


def cmd_tight(pf, flags):
    v = tight_membership(pf.presentation, pf.ideal(flags.get("ideal")), pf.element(flags.get("element")),
                         pf.tight_params())
    return v.to_dict(flags.get("timing", False))


def cmd_special_tight(pf, flags):
    v = special_tight_membership(pf.presentation, pf.maximal_ideal(), pf.ideal(flags.get("ideal")),
                                 pf.element(flags.get("element")), pf.tight_params(), pf.param("q0_max"))
    return v.to_dict(flags.get("timing", False))


def cmd_axes_member(pf, flags):
    check = is_axes_presentation(pf.presentation)
    if not check:
        raise ValueError(f"the declared ring is not a canonical axes ring: {check.reason}")
    A = check.axes
    f = canonicalize(pf.element(flags.get("element")), A)
    I = [canonicalize(g, A) for g in pf.ideal(flags.get("ideal")).generators]
    out = lemma1_membership(f, I, A)
    return {"verdict": "member" if out.member else "non-member",
            "evidence": {"element": str(f), "ideal": [str(g) for g in I], **out.to_dict()}}


def _hom_names(pf, flags) -> list:
    names = list(flags.get("hom") or pf.homs)
    for n in names:
        if n not in pf.homs:
            raise ValueError(f"no hom named {n!r}")
    return names


def cmd_axes_test(pf, flags):
    names = _hom_names(pf, flags)
    if not names:
        raise ValueError("axes-test needs at least one hom block")
    targets = [pf.target(n) for n in names]
    return axes_closure_test(pf.presentation, pf.ideal(flags.get("ideal")), pf.element(flags.get("element")),
                             targets).to_dict()


def cmd_is_axes(pf, flags):
    names = flags.get("hom") or []
    if len(names) > 1:
        raise ValueError("is-axes checks one ring at a time")
    if names:
        spec = pf.homs[names[0]] if names[0] in pf.homs else None
        if spec is None:
            raise ValueError(f"no hom named {names[0]!r}")
        h = pf.hom(names[0])
        change = None
        if spec.axes_vars:
            from .ideals import RingHom

            A = AxesRing(pf.field, len(spec.axes_vars), spec.axes_vars)
            change = (RingHom(h.target, A.presentation, spec.forward, "to_axes"),
                      RingHom(A.presentation, h.target, spec.backward, "from_axes"))
        check = is_axes_presentation(h.target, change)
        ring = f"target of {names[0]}"
    else:
        check = is_axes_presentation(pf.presentation)
        ring = "declared ring"
    return {"verdict": "accepted" if check else "rejected", "evidence": {"ring": ring, **check.to_dict()}}


def _model(pf):
    return clear_denominators(pf.presentation, {k: pf.ideal(k) for k in pf.ideals}, dict(pf.elements),
                              pf.order)


def cmd_reduce(pf, flags):
    primes = list(pf.param("primes"))
    if not primes:
        raise ValueError("reduce needs primes (flag --primes or params)")
    model = _model(pf)
    rows = []
    for p in sorted(primes):
        try:
            fib = reduce_mod_p(model, p, pf.param("exclude_divisors_of") or None)
        except BadPrime as exc:
            rows.append({"p": p, "lucky": False, "reason": str(exc)})
            continue
        rows.append({
            "p": p, "lucky": fib.lucky, "reason": fib.reason,
            "relations": _fmt(fib.presentation.relations.generators),
            "ideals": {k: _fmt(v.generators) for k, v in fib.ideals.items()},
            "elements": {k: format_polynomial(v) for k, v in fib.elements.items()},
        })
    return {"verdict": "computed",
            "evidence": {"bad_primes": sorted(model.bad_primes),
                         "relations": _fmt(model.presentation.relations.generators),
                         "ideals": {k: _fmt(v.generators) for k, v in model.ideals.items()},
                         "elements": {k: format_polynomial(v) for k, v in model.elements.items()},
                         "fibers": rows}}


def cmd_sweep(pf, flags):
    primes = list(pf.param("primes"))
    if not primes:
        raise ValueError("sweep needs primes (flag --primes or params)")
    rep = fiber_sweep(_model(pf), pf.ideal_name(flags.get("ideal")), pf.element_name(flags.get("element")),
                      primes, pf.tight_params(), pf.param("exclude_divisors_of") or None)
    return rep.to_dict(flags.get("timing", False))


HANDLERS = {
    "gb": cmd_gb,
    "member": cmd_member,
    "bracket": cmd_bracket,
    "tight": cmd_tight,
    "special-tight": cmd_special_tight,
    "axes-member": cmd_axes_member,
    "axes-test": cmd_axes_test,
    "is-axes": cmd_is_axes,
    "reduce": cmd_reduce,
    "sweep": cmd_sweep,
}


def run_command(command: str, problem: ProblemFile | None, flags: dict | None = None) -> dict:
    """Dispatch ``command`` on ``problem``; ``corpus`` ignores the problem."""
    flags = dict(flags or {})
    if command == "corpus":
        from .corpus import run_corpus

        return run_corpus(flags.get("case") or None).to_dict(flags.get("timing", False))
    if command not in HANDLERS:
        raise ValueError(f"unknown command {command!r}")
    if problem is None:
        raise ValueError(f"{command} needs a problem file")
    return HANDLERS[command](with_flags(problem, flags), flags)
