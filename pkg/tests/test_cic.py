"""Inductive-type translation: constructors, recursors, computation
rules, strong elimination, and bundle certification."""

import pytest

from cac import (InductiveDecl, OverallVerdict, STAR, Signature, Symb,
                 TypeChecker, Var, Variable, alpha_eq, arrow, certify_bundle,
                 normalize, pi, pp, selim_for_motive, translate_inductive)
from cac.cic import BridgeError, is_small
from cac.terms import Environment, Sort


def nat_decl():
    x = Variable.fresh("nat", Sort.BOX)
    return InductiveDecl("nat", STAR, x, (
        ("zero", Var(x)),
        ("succ", arrow(Var(x), Var(x))),
    ))


def num(n):
    t = Symb("zero", ())
    for _ in range(n):
        t = Symb("succ", (t,))
    return t


def test_translate_nat_symbols():
    sig = Signature()
    bundle = translate_inductive(nat_decl(), sig)
    assert bundle.inductive == "nat"
    assert bundle.welim == "WElim_nat"
    assert set(bundle.symbols) >= {"nat", "zero", "succ", "WElim_nat"}
    assert sig.decls["succ"].arity == 1
    assert sig.structure.ind_of("nat") == frozenset()
    assert sig.structure.acc_of("succ") == frozenset({1})


def test_welim_type_shape():
    sig = Signature()
    bundle = translate_inductive(nat_decl(), sig)
    d = sig.decls["WElim_nat"]
    assert d.arity == 4  # motive, two branches, scrutinee
    assert pp(d.typ) == "(Q:★) -> Q -> (nat -> Q -> Q) -> nat -> Q"


def test_iota_rules_compute():
    sig = Signature()
    bundle = translate_inductive(nat_decl(), sig)
    assert len(bundle.rules) == 2
    names = {r.name for r in bundle.rules}
    assert names == {"iota_WElim_nat_zero", "iota_WElim_nat_succ"}
    # doubling by recursion: f_succ ignores the predecessor
    from cac.terms import lam
    x = Variable.fresh("x", Sort.STAR)
    y = Variable.fresh("y", Sort.STAR)
    f_succ = lam(x, Symb("nat", ()),
                 lam(y, Symb("nat", ()),
                     Symb("succ", (Symb("succ", (Var(y),)),))))
    t = Symb("WElim_nat", (Symb("nat", ()), num(0), f_succ, num(3)))
    assert normalize(t, bundle.rules) == num(6)


def test_iota_rules_are_typed():
    sig = Signature()
    bundle = translate_inductive(nat_decl(), sig)
    tc = TypeChecker(sig, bundle.rules)
    for r in bundle.rules:
        tc.env_valid(r.ann_env)


def test_bundle_certifies_admissible():
    sig = Signature()
    bundle = translate_inductive(nat_decl(), sig)
    report = certify_bundle(bundle, sig)
    assert report.overall == OverallVerdict.ADMISSIBLE
    assert report.a1.level.value == "ORTHOGONAL"
    assert report.a4_non_algebraic == frozenset({"WElim_nat"})
    assert report.a4_non_algebraic_props.safe.holds
    assert report.a4_non_algebraic_props.recursive.holds


def test_corrupted_bundle_fails_schema():
    import dataclasses
    sig = Signature()
    bundle = translate_inductive(nat_decl(), sig)
    succ_rule = next(r for r in bundle.rules if "succ" in r.name)
    # swap the structural recursion argument for the whole scrutinee
    bad_rhs = _swap_recursion_argument(succ_rule)
    bad = dataclasses.replace(succ_rule, rhs=bad_rhs)
    rules = [r if "succ" not in r.name else bad for r in bundle.rules]
    from cac import satisfies_general_schema
    v = satisfies_general_schema(bad, sig, rules)
    assert not v.ok


def _swap_recursion_argument(rule):
    """Replace the recursive call's scrutinee with the lhs scrutinee."""
    from cac.terms import App, Symb as S

    scrutinee = rule.lhs.args[3]  # succ(b)

    def fix(t):
        if isinstance(t, S) and t.name == "WElim_nat":
            return S(t.name, t.args[:3] + (scrutinee,))
        if isinstance(t, S):
            return S(t.name, tuple(fix(a) for a in t.args))
        if isinstance(t, App):
            return App(fix(t.head), fix(t.arg))
        return t

    return fix(rule.rhs)


def test_polymorphic_inductive_list():
    sig = Signature()
    x = Variable.fresh("list", Sort.BOX)
    a = Variable.fresh("A", Sort.BOX)
    from cac.terms import App
    decl = InductiveDecl(
        "list", arrow(STAR, STAR), x, (
            ("nil", pi(a, STAR, App(Var(x), Var(a)))),
            ("cons", pi(a, STAR,
                        arrow(Var(a),
                              arrow(App(Var(x), Var(a)),
                                    App(Var(x), Var(a)))))),
        ))
    bundle = translate_inductive(decl, sig)
    assert sig.decls["cons"].arity == 3
    report = certify_bundle(bundle, sig)
    assert report.overall == OverallVerdict.ADMISSIBLE


def test_heterogeneous_inductive_rejected():
    sig = Signature()
    x = Variable.fresh("listh", Sort.BOX)
    a = Variable.fresh("A", Sort.BOX)
    decl = InductiveDecl(
        "listh", STAR, x, (
            ("nilh", Var(x)),
            ("consh", pi(a, STAR,
                         arrow(Var(a), arrow(Var(x), Var(x))))),
        ))
    with pytest.raises(BridgeError):
        translate_inductive(decl, sig)


def test_is_small():
    assert is_small(nat_decl())
    x = Variable.fresh("T", Sort.BOX)
    a = Variable.fresh("A", Sort.BOX)
    big = InductiveDecl("T", STAR, x, (
        ("pack", pi(a, STAR, Var(x))),))
    assert not is_small(big)


def test_strong_elimination_with_cache():
    sig = Signature()
    bundle = translate_inductive(nat_decl(), sig)
    name1, rules1 = selim_for_motive(nat_decl(), bundle, sig, STAR)
    name2, rules2 = selim_for_motive(nat_decl(), bundle, sig, STAR)
    assert name1 == name2  # alpha-equal motives share a symbol
    # the motive is baked in: branches + scrutinee only
    assert sig.decls[name1].arity == 3
    # computing a type by recursion: zero -> nat, succ _ -> nat
    from cac.terms import lam
    z = Variable.fresh("z", Sort.STAR)
    q = Variable.fresh("Q", Sort.BOX)
    f_succ = lam(z, Symb("nat", ()),
                 lam(q, STAR, Symb("nat", ())))
    t = Symb(name1, (Symb("nat", ()), f_succ, num(2)))
    assert normalize(t, rules1) == Symb("nat", ())


def test_open_motive_rejected():
    sig = Signature()
    bundle = translate_inductive(nat_decl(), sig)
    a = Variable.fresh("A", Sort.BOX)
    with pytest.raises(BridgeError):
        selim_for_motive(nat_decl(), bundle, sig, Var(a))
