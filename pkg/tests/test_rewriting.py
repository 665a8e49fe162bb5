"""Matching, unification, reduction, critical pairs, confluence."""

import pytest

from cac import (ConfluenceLevel, RewriteRule, STAR, Symb, Var, Variable,
                 alpha_eq, confluence_check, critical_pairs, joinable,
                 left_linear, match_first_order, normalize, reduce_one,
                 step, unify)
from cac.rewriting import RuleError, rename_apart
from cac.terms import Abs, App, BVar, FuelExhausted, Sort, lam


def v(name):
    return Variable.fresh(name, Sort.STAR)


def sy(name, *args):
    return Symb(name, tuple(args))


def test_match_basic():
    x = v("x")
    sigma = match_first_order(sy("f", Var(x)), sy("f", sy("a")))
    assert sigma == {x: sy("a")}
    assert match_first_order(sy("f", Var(x)), sy("g", sy("a"))) is None


def test_match_nonlinear_requires_equal_images():
    x = v("x")
    pat = sy("f", Var(x), Var(x))
    assert match_first_order(pat, sy("f", sy("a"), sy("a"))) is not None
    assert match_first_order(pat, sy("f", sy("a"), sy("b"))) is None


def test_unify_with_occurs_check():
    x, y = v("x"), v("y")
    sigma = unify(sy("f", Var(x)), sy("f", sy("g", Var(y))))
    assert sigma is not None and alpha_eq(sigma[x], sy("g", Var(y)))
    assert unify(Var(x), sy("f", Var(x))) is None  # occurs check


def test_rule_validation():
    x, y = v("x"), v("y")
    with pytest.raises(RuleError):
        RewriteRule("r", Var(x), Var(x))  # lhs must be symbol-headed
    with pytest.raises(RuleError):
        RewriteRule("r", sy("f", Var(x)), Var(y))  # rhs var not in lhs


def int_rules():
    x, y1, y2 = v("x"), v("y"), v("y")
    return [
        RewriteRule("r1", sy("s", sy("p", Var(x))), Var(x)),
        RewriteRule("r2", sy("p", sy("s", Var(x))), Var(x)),
        RewriteRule("r3", sy("plus", sy("0"), Var(y1)), Var(y1)),
        RewriteRule("r4", sy("times", sy("0"), Var(y2)), sy("0")),
    ]


def test_step_and_normalize_int():
    rules = int_rules()
    # [DERIVED] hand reduction: p(s(p(s(0)))) -> p(s(0)) -> 0
    t = sy("p", sy("s", sy("p", sy("s", sy("0")))))
    s1 = step(t, rules)
    assert s1 == sy("p", sy("s", sy("0")))
    assert normalize(t, rules) == sy("0")


def test_normal_form_is_irreducible():
    rules = int_rules()
    t = sy("plus", sy("0"), sy("p", sy("s", sy("0"))))
    nf = normalize(t, rules)
    assert step(nf, rules) is None
    assert nf == sy("0")


def test_beta_step():
    x = v("x")
    t = App(lam(x, STAR, Var(x)), sy("a"))
    assert step(t, []) == sy("a")
    assert normalize(t, []) == sy("a")


def test_reduce_one_collects_all_redexes():
    rules = int_rules()
    t = sy("plus", sy("s", sy("p", sy("0"))), sy("p", sy("s", sy("0"))))
    reducts = reduce_one(t, rules)
    assert sy("plus", sy("0"), sy("p", sy("s", sy("0")))) in reducts
    assert sy("plus", sy("s", sy("p", sy("0"))), sy("0")) in reducts


def test_fuel_exhaustion():
    x = v("x")
    loop = RewriteRule("loop", sy("f", Var(x)), sy("f", Var(x)))
    with pytest.raises(FuelExhausted):
        normalize(sy("f", sy("a")), [loop], fuel=50)


def test_critical_pairs_int_exactly_two():
    rules = int_rules()
    cps = critical_pairs(rules)
    # [DERIVED] the only overlaps are s/p cancellation inside each other
    assert len(cps) == 2
    peaks = sorted(str(cp.peak) for cp in cps)
    assert peaks == ["p(s(p(x)))", "s(p(s(x)))"]
    for cp in cps:
        assert cp.overlap_position == (1,)
        assert joinable(cp.left_reduct, cp.right_reduct, rules)


def test_confluence_newman_for_int():
    from cac import load
    from tests.conftest import corpus_source
    lf = load(corpus_source("int"))
    verdict = confluence_check(lf.rules, lf.signature)
    assert verdict.level == ConfluenceLevel.NEWMAN


def test_confluence_orthogonal():
    rules = [RewriteRule("r", sy("f", sy("a")), sy("b"))]
    verdict = confluence_check(rules)
    assert verdict.level == ConfluenceLevel.ORTHOGONAL


def test_confluence_unknown_and_asserted():
    # non-terminating, non-orthogonal: two root-overlapping rules
    rules = [RewriteRule("r1", sy("f", sy("a")), sy("f", sy("a"))),
             RewriteRule("r2", sy("f", sy("a")), sy("b"))]
    assert confluence_check(rules).level == ConfluenceLevel.UNKNOWN
    assert confluence_check(rules, assume_confluent=True).level \
        == ConfluenceLevel.ASSERTED


def test_left_linear():
    x = v("x")
    assert left_linear(RewriteRule("r", sy("f", Var(x)), Var(x)))
    assert not left_linear(
        RewriteRule("r", sy("eq", Var(x), Var(x)), sy("a")))


def test_joinable_without_confluence_uses_search():
    rules = int_rules()
    a = sy("s", sy("p", sy("plus", sy("0"), sy("0"))))
    b = sy("plus", sy("0"), sy("0"))
    assert joinable(a, b, rules, confluent=False)
    assert not joinable(sy("0"), sy("s", sy("0")), rules, confluent=False)


def test_rename_apart_is_fresh():
    x = v("x")
    r = RewriteRule("r", sy("f", Var(x)), Var(x))
    r2 = rename_apart(r)
    fv = r2.lhs.args[0].var
    assert fv != x  # fresh variable, same shape
    assert r2.rhs == Var(fv)
    assert match_first_order(r2.lhs, r.lhs) is not None
