"""The bundled example corpus and its runner.

Each case is a problem file under ``problems/`` plus a list of checks.  A
check runs one command and compares selected report fields (dotted paths)
against expected values.  ``basis`` says why the expectation holds:

- ``worked-example``: a hand computation with a known answer,
- ``computed``: found by the search itself, then frozen and replayed,
- ``elementary``: immediate from the definitions.

The comparison section of the report is a pure function of the corpus;
timings live in a separate section.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from importlib import resources

from .problem import ProblemFile, parse_problem

BASES = ("worked-example", "computed", "elementary")


@dataclass(frozen=True)
class Check:
    command: str
    expect: dict
    basis: str
    flags: dict = field(default_factory=dict)

    def label(self) -> str:
        bits = [self.command] + [f"{k}={v}" for k, v in sorted(self.flags.items())]
        return " ".join(str(b) for b in bits)


@dataclass(frozen=True)
class CorpusCase:
    id: str
    file: str
    description: str
    checks: tuple
    normal: bool = False

    def problem(self) -> ProblemFile:
        return load_problem(self.file)


def load_problem(name: str) -> ProblemFile:
    text = resources.files("tightax").joinpath("problems").joinpath(name).read_text()
    return parse_problem(text)


def _c(command, expect, basis, **flags):
    assert basis in BASES
    return Check(command, expect, basis, flags)


def _intro(p):
    return CorpusCase(
        f"intro-f{p}", f"intro_f{p}.prob",
        f"X^2 = Y Z^2 over F{p}: X is in the tight closure of (Z) but not its axes closure",
        (
            _c("tight", {"verdict": "BoundedCertified", "evidence.certificate.c": "X",
                         "evidence.certificate.e_range": [1, 4]}, "worked-example"),
            _c("member", {"verdict": "non-member"}, "worked-example"),
            _c("is-axes", {"verdict": "accepted", "evidence.branches": 2}, "worked-example", hom=["y1"]),
            _c("axes-test", {"verdict": "Refuted", "evidence.refuting_homs": ["y1"]}, "worked-example"),
        ),
    )


def _regular(name, fld, tight):
    checks = [_c("member", {"verdict": "non-member"}, "elementary")]
    if tight:
        checks.append(_c("tight", {"verdict": "ExactNonMember"}, "worked-example"))
    else:
        checks.append(_c("sweep", {"verdict": "ExactNegative"}, "computed"))
    return CorpusCase(f"regular-{name}", f"regular_{name}.prob",
                      f"X^2 Y^2 against (X^3, Y^3) in the polynomial ring over {fld}", tuple(checks), normal=True)


CASES = (
    _intro(5),
    _intro(7),
    _regular("f5", "F5", True),
    _regular("f7", "F7", True),
    _regular("qq", "QQ", False),
    CorpusCase(
        "fermat", "fermat_f7.prob",
        "Fermat cubic cone over F7: Z^2 in (X, Y)*, Z not in the axes closure",
        (
            _c("tight", {"verdict": "BoundedCertified", "evidence.certificate.c": "X",
                         "evidence.certificate.e_range": [1, 3]}, "computed", element="f"),
            _c("tight", {"verdict": "InconclusiveNegative", "evidence.bounds.candidates_tried": 35},
               "computed", element="g"),
            _c("is-axes", {"verdict": "accepted"}, "worked-example", hom=["xi35"]),
            _c("axes-test", {"verdict": "Refuted", "evidence.refuting_homs": ["xi35", "xi36", "xi56"]},
               "worked-example", element="g"),
            _c("axes-test", {"verdict": "PassedAllTests"}, "computed", element="f"),
        ),
        normal=True,
    ),
    CorpusCase(
        "lemma1", "lemma1_axes.prob",
        "valuative membership in the two-branch axes ring: member, boundary, strict failure",
        (
            _c("axes-member", {"verdict": "member", "evidence.kind": "MemberWithWitness"}, "worked-example",
               ideal="I", element="f"),
            _c("axes-member", {"verdict": "non-member", "evidence.kind": "BoundaryFallback"}, "worked-example",
               ideal="I", element="g"),
            _c("axes-member", {"verdict": "non-member", "evidence.kind": "NonMemberAtBranch",
                               "evidence.branch": 1}, "worked-example", ideal="J", element="h"),
        ),
    ),
    CorpusCase(
        "special-xy", "special_xy.prob",
        "special tight closure of (X) in F5[X, Y] with m = (X, Y)",
        (
            _c("special-tight", {"verdict": "ExactMember", "evidence.q0": 1}, "worked-example", element="f"),
            _c("special-tight", {"verdict": "InconclusiveNegative"}, "elementary", element="g"),
            _c("member", {"verdict": "member"}, "elementary", element="f"),
        ),
        normal=True,
    ),
    CorpusCase(
        "nontransversal", "nontransversal_f7.prob",
        "three concurrent lines in a plane are not an axes ring; Z^2 is not in (X)",
        (
            _c("is-axes", {"verdict": "rejected", "evidence.hilbert_value": 6}, "worked-example"),
            _c("member", {"verdict": "non-member"}, "worked-example"),
        ),
    ),
    CorpusCase(
        "remark", "remark_f5.prob",
        "X^2 = (W + 1) Z^2 over F5: X in (Z)*, no special tight certificate for X",
        (
            _c("tight", {"verdict": "BoundedCertified", "evidence.certificate.c": "X"}, "worked-example"),
            _c("special-tight", {"verdict": "InconclusiveNegative"}, "computed", q0_max=5, e_max=2),
        ),
    ),
    CorpusCase(
        "fermat-sweep", "fermat_qq.prob",
        "rational Fermat cubic cone: Z^2 certified in the fibers at 7, 13, 31",
        (
            _c("sweep", {"verdict": "CertifiedInAllLuckyFibers"}, "computed"),
        ),
    ),
)


# ---------------------------------------------------------------------------
# running


def lookup(report: dict, path: str):
    cur = report
    for part in path.split("."):
        if not isinstance(cur, dict) or part not in cur:
            return _MISSING
        cur = cur[part]
    return cur


class _Missing:
    def __repr__(self):
        return "<missing>"


_MISSING = _Missing()


def run_check(pf: ProblemFile, check: Check) -> tuple[dict, float]:
    from .commands import run_command

    t0 = time.perf_counter()
    report = run_command(check.command, pf, check.flags)
    dt = time.perf_counter() - t0
    got = {k: lookup(report, k) for k in check.expect}
    mismatches = [k for k in check.expect if got[k] != check.expect[k]]
    row = {
        "check": check.label(),
        "basis": check.basis,
        "expected": dict(check.expect),
        "got": {k: (None if v is _MISSING else v) for k, v in got.items()},
        "ok": not mismatches,
        "report": report,
    }
    if mismatches:
        row["mismatched"] = mismatches
    return row, dt


@dataclass
class CorpusReport:
    cases: list
    inclusion: list
    valuation_chain: list
    timing: dict

    @property
    def failures(self) -> list:
        bad = [c["id"] for c in self.cases if not c["ok"]]
        if any(not r["ok"] for r in self.inclusion):
            bad.append("theorem-inclusion")
        if any(not r["ok"] for r in self.valuation_chain):
            bad.append("valuation-chain")
        return bad

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "verdict": "AllExpectationsMet" if self.ok else "ExpectationFailed",
            "evidence": {
                "comparison": {
                    "cases": self.cases,
                    "theorem_inclusion": self.inclusion,
                    "valuation_chain": self.valuation_chain,
                    "failures": self.failures,
                },
            },
        }
        if timing:
            d["timing"] = {k: round(v, 6) for k, v in self.timing.items()}
        return d

    def comparison_json(self) -> str:
        return json.dumps(self.to_dict(False)["evidence"]["comparison"], sort_keys=True, indent=2)


def select_cases(ids=None, cases=CASES) -> list:
    if not ids:
        return list(cases)
    known = {c.id: c for c in cases}
    unknown = [i for i in ids if i not in known]
    if unknown:
        raise ValueError(f"unknown corpus case(s): {', '.join(unknown)}; known: {', '.join(known)}")
    return [c for c in cases if c.id in set(ids)]


def run_corpus(ids=None, cases=CASES) -> CorpusReport:
    """Run the selected cases in identifier order of declaration."""
    rows = []
    timing = {}
    for case in select_cases(ids, cases):
        pf = case.problem()
        checks = []
        total = 0.0
        for chk in case.checks:
            row, dt = run_check(pf, chk)
            checks.append(row)
            total += dt
        timing[case.id] = total
        rows.append({"id": case.id, "file": case.file, "description": case.description,
                     "normal": case.normal, "checks": checks, "ok": all(r["ok"] for r in checks)})
    selected = select_cases(ids, cases)
    return CorpusReport(rows, inclusion_rows(selected, rows), valuation_rows(selected, rows), timing)


def _member_triples(case: CorpusCase, row: dict):
    """(ideal, element) pairs with a membership-kind tight verdict in this case."""
    for chk, res in zip(case.checks, row["checks"]):
        if chk.command in ("tight", "special-tight") and res["report"]["verdict"] in (
                "ExactMember", "BoundedCertified"):
            yield chk, res


def inclusion_rows(cases, rows) -> list:
    """Every tight-closure member in a normal ring maps into the extended ideal."""
    from .axes import image_membership

    out = []
    for case, row in zip(cases, rows):
        if not case.normal:
            continue
        pf = case.problem()
        for chk, _ in _member_triples(case, row):
            iname = pf.ideal_name(chk.flags.get("ideal"))
            ename = pf.element_name(chk.flags.get("element"))
            for h in pf.homs:
                exact, _, info = image_membership(pf.target(h), pf.ideal(iname), pf.element(ename))
                out.append({"case": case.id, "ideal": iname, "element": ename, "hom": h,
                            "image_f": info["image_f"], "image_I": info["image_I"], "ok": exact.member})
    return out


def valuation_rows(cases, rows) -> list:
    """Branch valuations behind each special tight certificate."""
    from .axes import image_membership, valuation_chain

    out = []
    for case, row in zip(cases, rows):
        pf = case.problem()
        for chk, res in _member_triples(case, row):
            if chk.command != "special-tight":
                continue
            q0 = res["report"]["evidence"].get("q0", 1)
            iname = pf.ideal_name(chk.flags.get("ideal"))
            ename = pf.element_name(chk.flags.get("element"))
            for h in pf.homs:
                t = pf.target(h)
                branches = valuation_chain(t, pf.maximal_ideal(), pf.ideal(iname), pf.element(ename), q0)
                strict = all(b["strict"] for b in branches)
                exact = image_membership(t, pf.ideal(iname), pf.element(ename))[0].member
                out.append({"case": case.id, "element": ename, "hom": h, "q0": q0, "branches": branches,
                            "strict": strict, "exact_member": exact, "ok": strict or exact})
    return out
