import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from pspec import (
    IdealHandle,
    PencilSpec,
    Poly,
    RatFunc,
    analyze_primitive_candidate,
    classify_point,
    gamma_of,
    is_poisson_ideal,
    is_residually_null,
    parse_expr,
    pencil_ideal,
    smoothness_check,
)
from pspec.ideals import CandidateError, first_nonvanishing_bracket, pencil_generators, singular_locus_ideal

from oracles import symbols, to_sympy


def P(text, n=4):
    return parse_expr(text, n)


def ideal(*texts):
    return IdealHandle([P(t) for t in texts], nvars=4)


D = "x1*x4 - x2*x3"
H_PRIMES = [
    (), ("x2",), ("x3",), (D,),
    ("x1", "x2"), ("x2", "x4"), ("x2", "x3"), ("x1", "x3"), ("x3", "x4"),
    ("x1", "x2", "x3"), ("x1", "x2", "x4"), ("x1", "x3", "x4"), ("x2", "x3", "x4"),
    ("x1", "x2", "x3", "x4"),
]
RESIDUALLY_NULL = [("x2", "x3"), ("x1", "x2", "x4"), ("x1", "x3", "x4")]


def as_ideal(gens):
    return IdealHandle([P(g) for g in gens], nvars=4)


@pytest.mark.parametrize("gens", H_PRIMES, ids=lambda g: "(" + ",".join(g) + ")")
def test_h_primes_are_poisson(qmat, gens):
    assert is_poisson_ideal(qmat, as_ideal(gens))


def test_poisson_examples(qmat):
    assert is_poisson_ideal(qmat, ideal("x2"))
    assert not is_poisson_ideal(qmat, ideal("x1"))
    assert is_poisson_ideal(qmat, [P("x1"), P("x2")])


@pytest.mark.parametrize("gens", RESIDUALLY_NULL, ids=str)
def test_residually_null_list(qmat, gens):
    assert is_residually_null(qmat, as_ideal(gens))


def test_residually_null_examples(qmat, sharedpencil):
    assert not is_residually_null(qmat, ideal("x2"))
    assert first_nonvanishing_bracket(qmat, ideal("x2")) == ((1, 3), P("x1*x3"))
    s1 = sharedpencil.pairs[0][0]
    assert is_residually_null(sharedpencil, [s1])


def test_gamma_examples(qmat):
    data = gamma_of(qmat, ideal("x1", "x3"))
    assert data.gamma.entries == ((0, 1), (1, 0))
    assert data.dense
    assert data.V_gamma == (RatFunc(P(D)), RatFunc(P("x3"), P("x2")))
    assert data.S_gamma == (Poly.one(4), P("x2"))
    assert str(data.gamma) == "((0,1),(1,0))"

    data = gamma_of(qmat, ideal("x2", "x3"))
    assert data.gamma.entries == ((1, 1), (0, 0))
    assert not data.dense and data.V_gamma is None
    xs = symbols(4)
    G = sympy.groebner([xs[1], xs[2]], *xs, order="grevlex")
    assert not G.contains(to_sympy(P(D), xs))

    assert gamma_of(qmat, ideal(D)).gamma.entries == ((0, 1), (1, 1))


def test_gamma_of_unit_ideal_raises(qmat):
    with pytest.raises(ValueError):
        gamma_of(qmat, ideal("x1", "x1 - 1"))


def test_gamma_v_rule(structures):
    for S in structures.values():
        for gens in H_PRIMES:
            data = gamma_of(S, as_ideal(gens)) if as_ideal(gens).is_proper() else None
            if data is None or not data.dense:
                continue
            for v, (s, t), (g, d) in zip(data.V_gamma, S.pairs, data.gamma.entries):
                assert v == (RatFunc(s, t) if d else RatFunc(t, s))


def test_non_dense_implies_residually_null(qmat):
    for gens in H_PRIMES:
        I = as_ideal(gens)
        if not gamma_of(qmat, I).dense:
            assert is_residually_null(qmat, I)


def test_proper_poisson_primes_never_contain_a_whole_pair(qmat):
    for gens in H_PRIMES:
        I = as_ideal(gens)
        if is_poisson_ideal(qmat, I) and not is_residually_null(qmat, I):
            assert all(not (I.contains(s) and I.contains(t)) for s, t in qmat.pairs)


def test_pencil_examples(qmat, symm, sharedpencil):
    assert pencil_generators(qmat, PencilSpec((1, 1), (0, 1))) == [P(D), P("x2 - x3")]
    s1, s2 = (s for s, _ in symm.pairs)
    assert pencil_generators(symm, PencilSpec((1, 1), (4, 6))) == [s1 - 4, s2 - 6]
    gens = pencil_generators(sharedpencil, PencilSpec((1, 1), (0, -1)))
    assert gens[0] == gens[1] == sharedpencil.pairs[0][0]


def test_pencil_spec_rejects_zero_pair():
    with pytest.raises(ValueError):
        PencilSpec((1, 0), (2, 0))


def test_pencil_length_mismatch(qmat):
    with pytest.raises(ValueError):
        pencil_ideal(qmat, PencilSpec((1,), (1,)))


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=5)
pencil_specs = st.lists(st.tuples(rationals, rationals).filter(lambda p: p != (0, 0)), min_size=2, max_size=2)


@settings(max_examples=30, deadline=None)
@given(pencil_specs, st.sampled_from(["qmat", "symm", "detprod", "sharedpencil"]))
def test_pencil_ideals_are_poisson(structures, pairs, name):
    spec = PencilSpec(tuple(l for l, _ in pairs), tuple(m for _, m in pairs))
    assert is_poisson_ideal(structures[name], pencil_ideal(structures[name], spec))


def test_residually_null_implies_poisson_on_monomial_ideals(qmat, symm):
    rng = random.Random(4)
    for S in (qmat,):
        brackets = [b for b in S.table().values() if b]
        for _ in range(30):
            gens = []
            for b in brackets:
                m = rng.choice(list(b.terms))
                divisor = tuple(rng.randint(0, e) for e in m)
                gens.append(Poly({divisor: 1}, 4))
            gens += [Poly({tuple(rng.randint(0, 2) for _ in range(4)): 1}, 4) for _ in range(rng.randint(0, 2))]
            I = IdealHandle(gens, nvars=4)
            assert is_residually_null(S, I)
            assert is_poisson_ideal(S, I)


def test_classify_pinned_points(qmat, symm):
    r = classify_point(qmat, (0, 0, 0, 0))
    assert r.condition1 == 2 and r.final and r.direct_verdict and r.deciding_condition == 1

    r = classify_point(qmat, (1, 1, 1, 1))
    assert r.condition1 is None and not r.condition2 and r.condition3 is False
    assert r.gradient_rank == 2
    assert not r.final and not r.direct_verdict
    assert r.witness == ((1, 2), 1)
    assert r.g == (P(D), P("x2 - x3"))

    r = classify_point(symm, (2, 2, 2, 2))
    assert r.condition1 is None and not r.condition2 and r.condition3
    assert r.gradient_rank == 1 and r.final and r.direct_verdict


def test_symm_diagonal_gradients_are_proportional(symm):
    r = classify_point(symm, (2, 2, 2, 2))
    grads = [[d.evaluate((2, 2, 2, 2)) for d in g.gradient()] for g in r.g]
    assert grads[1] == [6 * c for c in grads[0]]


def test_classify_point_length_mismatch(qmat):
    with pytest.raises(ValueError):
        classify_point(qmat, (0, 0, 0))


point_coords = st.one_of(st.integers(-2, 2).map(Fraction), st.fractions(min_value=-3, max_value=3, max_denominator=4))


@settings(max_examples=60, deadline=None)
@given(st.tuples(*[point_coords] * 4), st.sampled_from(["qmat", "symm", "detprod", "sharedpencil"]))
def test_classification_matches_direct_check(structures, p, name):
    r = classify_point(structures[name], p)
    assert r.consistent
    assert r.final == (r.condition1 is not None or r.condition2 or bool(r.condition3))


def test_classification_reaches_condition_two(sharedpencil):
    r = classify_point(sharedpencil, (1, 0, 1, -2))
    assert r.condition1 is None
    assert r.condition2 and r.final and r.direct_verdict


def test_primitive_qmat_candidate(qmat):
    report = analyze_primitive_candidate(qmat, PencilSpec((1, 1), (0, 1)), ideal(D, "x2 - x3"))
    assert report.pencil_proper and report.pencil_poisson
    assert report.candidate_contains_pencil and report.candidate_poisson
    assert not report.candidate_residually_null
    assert report.not_checked == ("primality", "minimality")
    assert report.verdict.startswith("proper Poisson")


def test_primitive_shared_pencil_is_flagged(sharedpencil):
    report = analyze_primitive_candidate(sharedpencil, PencilSpec((1, 1), (0, -1)))
    assert report.pencil_residually_null
    assert report.verdict == "residually null: not Poisson primitive"


def test_primitive_errors(qmat, symm):
    with pytest.raises(CandidateError, match="improper"):
        analyze_primitive_candidate(symm, PencilSpec((0, 0), (1, 1)))
    with pytest.raises(CandidateError, match="contain"):
        analyze_primitive_candidate(qmat, PencilSpec((1, 1), (0, 1)), ideal("x1"))


def sympy_unit_ideal(I):
    xs = symbols(4)
    G = sympy.groebner([to_sympy(g, xs) for g in I.gens], *xs, order="grevlex")
    return list(G.exprs) == [1]


def test_smoothness_detprod(detprod):
    assert smoothness_check(detprod, (1, 1))
    assert sympy_unit_ideal(singular_locus_ideal(detprod, (1, 1)))
    assert not smoothness_check(detprod, (0, 0))
    J = singular_locus_ideal(detprod, (0, 0))
    assert all(g.evaluate((0, 0, 0, 0)) == 0 for g in J.gens)


def test_smoothness_symm_frozen_oracle(symm):
    J = singular_locus_ideal(symm, (4, 6))
    assert not sympy_unit_ideal(J)
    assert all(g.evaluate((1, 1, 1, 1)) == 0 for g in J.gens)
    assert smoothness_check(symm, (4, 6)) is False


def test_smoothness_preconditions(qmat):
    from pspec import build_structure
    with pytest.raises(ValueError, match="t_i = 1"):
        smoothness_check(qmat, (1, 1))
    x1 = Poly.var(1, 4)
    S = build_structure([(x1, Poly.one(4)), (x1 * x1, Poly.one(4))])
    with pytest.raises(ValueError, match="dependent"):
        smoothness_check(S, (1, 1))
