import pytest

from tightax import TightParams, persistence_check, tight_membership, validate_hom
from tightax.corpus import BASES, CASES, load_problem, run_corpus, select_cases

REQUIRED = {"intro-f5", "intro-f7", "regular-f5", "regular-f7", "regular-qq", "fermat", "lemma1", "special-xy",
            "nontransversal", "remark", "fermat-sweep"}


@pytest.fixture(scope="module")
def full():
    return run_corpus()


def test_full_corpus_meets_expectations(full):
    assert full.failures == []
    assert {c["id"] for c in full.cases} == REQUIRED
    d = full.to_dict()
    assert d["verdict"] == "AllExpectationsMet" and "timing" not in d


def test_case_metadata():
    assert len({c.id for c in CASES}) == len(CASES)
    for case in CASES:
        assert case.description and case.checks
        assert all(chk.basis in BASES for chk in case.checks)
        load_problem(case.file)


def test_determinism(full):
    again = run_corpus()
    assert again.comparison_json() == full.comparison_json()


def test_inclusion_rows(full):
    rows = full.inclusion
    assert {(r["case"], r["hom"]) for r in rows} == {("fermat", "xi35"), ("fermat", "xi36"), ("fermat", "xi56"),
                                                     ("special-xy", "diag")}
    assert all(r["ok"] for r in rows)
    # the intro ring is not normal, so it contributes no rows
    assert not any(r["case"].startswith("intro") for r in rows)


def test_valuation_chain_rows(full):
    (row,) = full.valuation_chain
    assert row["case"] == "special-xy" and row["q0"] == 1 and row["ok"]
    assert [(b["val_f"], b["val_I"], b["val_m"]) for b in row["branches"]] == [(2, 1, 1), (2, 1, 1)]


def test_filters():
    assert [c.id for c in select_cases(["fermat", "lemma1"])] == ["fermat", "lemma1"]
    with pytest.raises(ValueError, match="unknown corpus case"):
        select_cases(["nope"])
    rep = run_corpus(["lemma1"])
    assert [c["id"] for c in rep.cases] == ["lemma1"] and rep.ok


@pytest.mark.parametrize("name, hom", [("intro_f5.prob", "y1"), ("fermat_f7.prob", "xi35")])
def test_persistence_of_corpus_certificates(name, hom):
    pf = load_problem(name)
    h = validate_hom(pf.hom(hom)).hom
    f = pf.element("f")
    v = tight_membership(pf.presentation, pf.ideal(), f, TightParams(c_deg=pf.param("c_deg"), e_max=2))
    assert v.is_member
    assert persistence_check(h, pf.ideal(), f, v.certificate) is True
