"""Randomized, seed-fixed property suites (500 cases each):
substitution composition, one-step subject reduction, polarity
disjointness, match/substitute round trips, normalization idempotence."""

import random

import pytest

from cac import (Environment, STAR, Symb, TypeChecker, Var, Variable,
                 alpha_eq, match_first_order, normalize, polarity, pp,
                 reduce_one, step, subst_apply)
from cac.terms import arrow, compose_subst, free_vars, lam, pi, Sort

CASES = 500


def _int_vars(rng, n=4):
    return [Variable.fresh(f"v{i}", Sort.STAR) for i in range(n)]


def random_int_term(rng, vars_, depth):
    """A term of type int over the integer signature."""
    if depth == 0 or rng.random() < 0.25:
        if vars_ and rng.random() < 0.5:
            return Var(rng.choice(vars_))
        return Symb("0", ())
    choice = rng.randrange(4)
    if choice == 0:
        return Symb("s", (random_int_term(rng, vars_, depth - 1),))
    if choice == 1:
        return Symb("p", (random_int_term(rng, vars_, depth - 1),))
    name = "plus" if choice == 2 else "times"
    return Symb(name, (random_int_term(rng, vars_, depth - 1),
                       random_int_term(rng, vars_, depth - 1)))


def test_substitution_composition(intf):
    rng = random.Random(20260824)
    for _ in range(CASES):
        vars_ = _int_vars(rng)
        t = random_int_term(rng, vars_, rng.randrange(1, 5))
        theta = {v: random_int_term(rng, vars_, 2)
                 for v in vars_ if rng.random() < 0.7}
        sigma = {v: random_int_term(rng, [], 2)
                 for v in vars_ if rng.random() < 0.7}
        lhs = subst_apply(subst_apply(t, theta), sigma)
        rhs = subst_apply(t, compose_subst(theta, sigma))
        assert lhs == rhs, pp(t)


def test_substitution_composition_under_binders(intf):
    rng = random.Random(7)
    intt = Symb("int", ())
    for _ in range(CASES):
        vars_ = _int_vars(rng, 3)
        x = Variable.fresh("x", Sort.STAR)
        body = random_int_term(rng, vars_ + [x], rng.randrange(1, 4))
        t = lam(x, intt, body)
        theta = {v: random_int_term(rng, vars_, 1)
                 for v in vars_ if rng.random() < 0.7}
        sigma = {v: random_int_term(rng, [], 1)
                 for v in vars_ if rng.random() < 0.7}
        assert subst_apply(subst_apply(t, theta), sigma) \
            == subst_apply(t, compose_subst(theta, sigma))


def test_one_step_subject_reduction(intf):
    rng = random.Random(99)
    tc = TypeChecker(intf.signature, intf.rules, confluent=True)
    intt = Symb("int", ())
    checked = 0
    for _ in range(CASES):
        t = random_int_term(rng, [], rng.randrange(1, 6))
        tc.check(Environment(), t, intt)
        for u in reduce_one(t, intf.rules):
            tc.check(Environment(), u, intt)
            checked += 1
    assert checked >= CASES // 2  # plenty of reducible cases


def random_type(rng, sig, preds, depth):
    """A random predicate-level term of bounded depth."""
    if depth == 0 or rng.random() < 0.3:
        if preds and rng.random() < 0.5:
            return Var(rng.choice(preds))
        return STAR
    c = rng.randrange(3)
    if c == 0:
        x = Variable.fresh("x", Sort.STAR)
        return pi(x, random_type(rng, sig, preds, depth - 1),
                  random_type(rng, sig, preds, depth - 1))
    if c == 1:
        return Symb("list", (random_type(rng, sig, preds, depth - 1),))
    x = Variable.fresh("A", Sort.BOX)
    return lam(x, STAR, random_type(rng, sig, preds + [x], depth - 1))


def test_polarity_disjointness(app):
    rng = random.Random(4242)
    sig = app.signature
    for _ in range(CASES):
        preds = [Variable.fresh("P", Sort.BOX)]
        t = random_type(rng, sig, preds, rng.randrange(1, 7))
        rep = polarity(t, sig)  # asserts disjointness internally
        assert not (rep.positive & rep.negative)
        assert () in rep.positive


def test_match_then_substitute_round_trip(intf):
    rng = random.Random(31337)
    for _ in range(CASES):
        rule = rng.choice(intf.rules)
        fv = sorted(free_vars(rule.lhs), key=lambda v: v.id)
        sigma = {v: random_int_term(rng, [], rng.randrange(0, 3))
                 for v in fv}
        instance = subst_apply(rule.lhs, sigma)
        m = match_first_order(rule.lhs, instance)
        assert m is not None
        assert m == sigma
        # and matching reproduces the instance
        assert subst_apply(rule.lhs, m) == instance


def test_normalize_idempotent(intf):
    rng = random.Random(2718)
    for _ in range(CASES):
        t = random_int_term(rng, [], rng.randrange(1, 6))
        nf = normalize(t, intf.rules)
        assert step(nf, intf.rules) is None
        assert normalize(nf, intf.rules) == nf
