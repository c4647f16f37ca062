import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import coefficient
from tightax import (
    GF,
    INF,
    QQ,
    AxesRing,
    Ideal,
    Lemma1Kind,
    RingHom,
    RingPresentation,
    axes_closure_test,
    canonicalize,
    ideal_membership,
    is_axes_presentation,
    lemma1_membership,
    local_membership,
    make_target,
    recompose,
    val_branch,
    val_ideal,
)
from tightax.axes import InvalidChangeOfVariables, affine_hilbert_function, exceeds

F7 = GF(7)


def test_canonicalize_examples():
    A = AxesRing(F7, 2)
    f = canonicalize(A.ring.parse("X1*X2 + X1^2"), A)
    assert f.constant == 0 and f.branch(0) == {2: 1} and f.branch(1) == {}
    g = A.element("3 + X1")
    assert g.constant == 3 and g.branch(0) == {1: 1}
    assert str(A.element("X1^2 + 2*X2 - 1")) == "-1 | X1^2 | 2*X2"


def test_valuation_examples():
    A = AxesRing(F7, 2)
    u = A.element("2 + X1 + X2^3")
    assert [val_branch(u, i) for i in range(2)] == [0, 0]
    f = A.element("X1^3 + X2")
    assert (val_branch(f, 0), val_branch(f, 1)) == (3, 1)
    assert val_branch(A.element("0"), 0) is INF
    assert [val_ideal(A.ideal("X1 + X2"), i) for i in range(2)] == [1, 1]
    assert [val_ideal(A.ideal("X1^2 + X2", "X1"), i) for i in range(2)] == [1, 1]
    with pytest.raises(IndexError):
        val_branch(f, 2)


def test_infinity_convention():
    assert exceeds(INF, INF) and exceeds(INF, 3) and not exceeds(3, INF)
    assert exceeds(4, 3) and not exceeds(3, 3)
    assert INF + 2 is INF and INF > 10**9


def _random_element(A, rng, deg=5, terms=3, constant_prob=0.2):
    n = A.n
    poly = A.ring.zero
    for _ in range(terms):
        i = rng.randrange(n)
        e = [0] * n
        e[i] = rng.randint(1, deg)
        poly = poly + A.ring.monomial(e, coefficient(rng, A.field.p))
    if rng.random() < constant_prob:
        poly = poly + A.ring.constant(coefficient(rng, A.field.p))
    if rng.random() < 0.3 and n > 1:
        poly = poly + A.ring.monomial([1] * n)   # mixed, dies on canonicalization
    return canonicalize(poly, A)


def lemma1_instances(n_inst=520, seed=17):
    rng = random.Random(seed)
    for k in range(n_inst):
        A = AxesRing([GF(5), F7, QQ][k % 3], rng.randint(1, 3))
        I = [_random_element(A, rng, terms=rng.randint(1, 3)) for _ in range(rng.randint(1, 3))]
        mode = k % 4
        if mode == 0:
            f = A.element(0)
            for g in I:
                f = f + g * _random_element(A, rng, deg=3, terms=2, constant_prob=0.5)
        elif mode == 1:      # push valuations up: multiply by a high power on each branch
            f = _random_element(A, rng, terms=2, constant_prob=0)
            f = f * canonicalize(sum((x ** 3 for x in A.ring.gens), A.ring.zero), A)
        else:
            f = _random_element(A, rng, terms=rng.randint(1, 3))
        yield A, I, f


def lemma1_disagreements(n_inst=520):
    kinds = Counter()
    bad = []
    for A, I, f in lemma1_instances(n_inst):
        out = lemma1_membership(f, I, A)
        kinds[out.kind] += 1
        exact = local_membership(f.to_polynomial(), Ideal(A.ring, [g.to_polynomial() for g in I]),
                                 A.presentation).member
        if out.member != exact:
            bad.append((A, I, f, out.kind))
        if out.kind == Lemma1Kind.MEMBER_WITH_WITNESS and not recompose(out, f, I):
            bad.append((A, I, f, "witness"))
        glob = ideal_membership(f.to_polynomial(), Ideal(A.ring, [g.to_polynomial() for g in I]),
                                A.presentation).member
        if glob and not exact:
            bad.append((A, I, f, "global member but not local"))
    return bad, kinds


def test_lemma1_random_agreement():
    bad, kinds = lemma1_disagreements(520)
    assert bad == []
    assert sum(kinds.values()) == 520
    assert all(kinds[k] >= 30 for k in (Lemma1Kind.MEMBER_WITH_WITNESS, Lemma1Kind.NON_MEMBER_AT_BRANCH,
                                        Lemma1Kind.BOUNDARY_FALLBACK)), kinds


def test_lemma1_examples():
    A = AxesRing(QQ, 2)
    I = A.ideal("X1 + X2")
    out = lemma1_membership(A.element("X1^2 + X2^3"), I, A)
    assert out.kind == Lemma1Kind.MEMBER_WITH_WITNESS
    assert [str(c) for c in out.cofactors] == ["0 | X1 | X2^2"]
    assert recompose(out, A.element("X1^2 + X2^3"), I)
    # the witness from the worked example also recomposes
    assert A.element("X1 + X2") * A.element("X1 + X2^2") == A.element("X1^2 + X2^3")
    out = lemma1_membership(A.element("X1 - X2"), I, A)
    assert out.kind == Lemma1Kind.BOUNDARY_FALLBACK and not out.member
    assert not ideal_membership(A.ring.parse("X1 - X2"), Ideal(A.ring, [A.ring.parse("X1 + X2")]),
                                A.presentation)
    out = lemma1_membership(A.element("X1"), A.ideal("X1^2 + X2"), A)
    assert out.kind == Lemma1Kind.NON_MEMBER_AT_BRANCH and out.to_dict()["branch"] == 1


def test_local_and_global_differ_off_the_meeting_point():
    # one branch: X1^2 = X1/(1 + X1) * (X1 + X1^2) needs a unit denominator
    A = AxesRing(QQ, 1)
    f, I = A.element("X1^2"), A.ideal("X1 + X1^2")
    out = lemma1_membership(f, I, A)
    assert out.member and out.unit.is_unit() and any(out.unit.branches)   # the unit is not a constant
    assert recompose(out, f, I)
    assert not ideal_membership(f.to_polynomial(), Ideal(A.ring, [I[0].to_polynomial()]), A.presentation)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_valuation_properties(seed):
    rng = random.Random(seed)
    A = AxesRing(GF(5), rng.randint(1, 3))
    f, g = _random_element(A, rng), _random_element(A, rng)
    for i in range(A.n):
        vf, vg = val_branch(f, i), val_branch(g, i)
        prod = val_branch(f * g, i)
        assert prod == (INF if INF in (vf, vg) else vf + vg)
        s = val_branch(f + g, i)
        assert s is INF or (s >= min(v for v in (vf, vg) if v is not INF))
    I = [_random_element(A, rng) for _ in range(2)]
    combo = I[0] * _random_element(A, rng) + I[1] * _random_element(A, rng)
    for i in range(A.n):
        v, lo = val_branch(combo, i), val_ideal(I, i)
        assert v is INF or (lo is not INF and v >= lo)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_canonicalize_agrees_with_normal_form(seed):
    rng = random.Random(seed)
    A = AxesRing(F7, rng.randint(1, 3))
    poly = A.ring.zero
    for _ in range(5):
        e = [rng.randint(0, 2) for _ in range(A.n)]
        poly = poly + A.ring.monomial(e, rng.randrange(1, 7))
    c = canonicalize(poly, A)
    assert c.to_polynomial() == A.presentation.reduce(poly)
    assert canonicalize(c.to_polynomial(), A) == c


# -- recognizing axes rings -------------------------------------------------


def test_is_axes_examples():
    S = RingPresentation.build("UV", F7, ["U*V"])
    chk = is_axes_presentation(S)
    assert chk.accepted and chk.axes.n == 2
    T = RingPresentation.build("XZ", F7, ["X^2 - Z^2"])
    plain = is_axes_presentation(T)
    assert not plain.accepted and "change of variables" in plain.reason
    A = AxesRing(F7, 2, ("U", "V"))
    fwd = RingHom(T, A.presentation, (A.ring.parse("4*U + 4*V"), A.ring.parse("4*V - 4*U")))
    back = RingHom(A.presentation, T, (T("X - Z"), T("X + Z")))
    chk = is_axes_presentation(T, (fwd, back))
    assert chk.accepted and chk.axes.n == 2
    N = RingPresentation.build("XZ", F7, ["X^3 - Z^3"])
    rej = is_axes_presentation(N)
    assert not rej.accepted and rej.details["hilbert_value"] == 6
    assert affine_hilbert_function(N, 2) == 6 and affine_hilbert_function(S, 2) == 5


def test_invalid_change_of_variables_is_distinct():
    T = RingPresentation.build("XZ", F7, ["X^2 - Z^2"])
    A = AxesRing(F7, 2, ("U", "V"))
    fwd = RingHom(T, A.presentation, (A.ring.parse("U"), A.ring.parse("V")))
    back = RingHom(A.presentation, T, (T("X - Z"), T("X + Z")))
    with pytest.raises(InvalidChangeOfVariables):
        is_axes_presentation(T, (fwd, back))


# -- axes closure tests -----------------------------------------------------


def _intro_target(p):
    R = RingPresentation.build("XYZ", GF(p), ["X^2 - Y*Z^2"])
    T = RingPresentation.build("XZ", GF(p), ["X^2 - Z^2"])
    A = AxesRing(GF(p), 2, ("U", "V"))
    h = make_target(
        RingHom(R, T, (T("X"), T.ring.one, T("Z")), "y1"),
        (RingHom(T, A.presentation, (A.ring.parse("1/2*U + 1/2*V"), A.ring.parse("1/2*V - 1/2*U"))),
         RingHom(A.presentation, T, (T("X - Z"), T("X + Z")))),
    )
    return R, h


@pytest.mark.parametrize("p", [5, 7])
def test_intro_refuted(p):
    R, t = _intro_target(p)
    rep = axes_closure_test(R, R.ideal("Z"), R("X"), [t])
    assert rep.verdict == "Refuted" and rep.refuting == ["y1"]
    ok = axes_closure_test(R, R.ideal("Z"), R("X*Z + Z^2"), [t])
    assert ok.verdict == "PassedAllTests"
    assert "not a proof" in ok.to_dict()["evidence"]["note"]


def test_fermat_refuted_by_xi_map():
    R = RingPresentation.build("XYZ", F7, ["X^3 + Y^3 + Z^3"])
    S = RingPresentation.build("UV", F7, ["U*V"])
    t = make_target(RingHom(R, S, (S("6*U + 2*V"), S.ring.zero, S("4*U + 3*V")), "xi"))
    rep = axes_closure_test(R, R.ideal("X", "Y"), R("Z"), [t])
    assert rep.verdict == "Refuted"
    assert axes_closure_test(R, R.ideal("X", "Y"), R("Z^2"), [t]).verdict == "PassedAllTests"


def test_unvalidated_or_bad_targets_rejected():
    R = RingPresentation.build("XYZ", F7, ["X^3 + Y^3 + Z^3"])
    N = RingPresentation.build("XZ", F7, ["X^3 - Z^3"])
    with pytest.raises(ValueError):
        make_target(RingHom(R, N, (N("X"), N.ring.zero, N("Z")), "plane"))
    S = RingPresentation.build("UV", F7, ["U*V"])
    with pytest.raises(ValueError):
        make_target(RingHom(R, S, (S("U"), S("V"), S("U")), "broken"))
