"""The typing judgment: a syntax-directed checker for the calculus,
recording replayable derivations.

The declarative rules (ax/symb/var/weak/prod/abs/app/conv) are folded
into an algorithm: weakening is implicit in environment lookup and
conversion is checked at argument boundaries and at `check`'s root.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .rewriting import RewriteRule, joinable, normalize, step
from .signature import Signature
from .terms import (Abs, App, BOX, BVar, CacError, Environment, FuelExhausted,
                    Prod, STAR, Sort, SortT, Symb, Term, Var, Variable,
                    alpha_eq, free_vars, lam, open_, open_fresh, pi,
                    sort_class_of_type, subst_apply)


class TypingError(CacError):
    pass


@dataclass(frozen=True)
class TypingDerivation:
    env: Environment
    term: Term
    typ: Term
    rule_tag: str  # ax | symb | var | weak | prod | abs | app | conv
    premises: tuple = ()

    def nodes(self):
        yield self
        for p in self.premises:
            yield from p.nodes()


class TypeChecker:
    def __init__(self, signature: Signature, rules: Sequence[RewriteRule] = (),
                 fuel: int = 10000, confluent: bool = False):
        self.sig = signature
        self.rules = list(rules)
        self.fuel = fuel
        self.confluent = confluent
        self._tau_sorts = {}

    # -- conversion ----------------------------------------------------------

    def convertible(self, t: Term, u: Term) -> bool:
        return joinable(t, u, self.rules, self.fuel, self.confluent)

    def _whnf_product(self, t: Term) -> Prod:
        fuel = self.fuel
        while not isinstance(t, Prod):
            r = step(t, self.rules)
            if r is None:
                raise TypingError("not-a-product",
                                  f"expected a product type, found {t}")
            t = r
            fuel -= 1
            if fuel < 0:
                raise FuelExhausted("reduction to product")
        return t

    # -- judgments -----------------------------------------------------------

    def infer(self, env: Environment, t: Term) -> Tuple[Term, TypingDerivation]:
        if isinstance(t, SortT):
            if t.sort is Sort.STAR:
                return BOX, TypingDerivation(env, t, BOX, "ax")
            raise TypingError("sort-error", "the sort □ has no type")
        if isinstance(t, BVar):
            raise TypingError("internal", "dangling bound variable")
        if isinstance(t, Var):
            typ = env.lookup(t.var)
            if typ is None:
                raise TypingError("unbound-variable",
                                  f"variable {t.var} not bound in environment")
            return typ, TypingDerivation(env, t, typ, "var")
        if isinstance(t, Symb):
            return self._infer_symb(env, t)
        if isinstance(t, Prod):
            s1, d1 = self._infer_sort(env, t.domain)
            v, cod = open_fresh(t)
            if v.sort != s1:
                # sort class is syntactic; re-open with the inferred sort
                v = Variable.fresh(t.hint, s1)
                cod = open_(t.codomain, Var(v))
            env2 = env.extend(v, t.domain)
            s2, d2 = self._infer_sort(env2, cod)
            typ = SortT(s2)
            return typ, TypingDerivation(env, t, typ, "prod", (d1, d2))
        if isinstance(t, Abs):
            s1, d1 = self._infer_sort(env, t.domain)
            v = Variable.fresh(t.hint, s1)
            body = open_(t.body, Var(v))
            env2 = env.extend(v, t.domain)
            bty, d2 = self.infer(env2, body)
            prod = pi(v, t.domain, bty)
            _, d3 = self._infer_sort(env, prod)
            return prod, TypingDerivation(env, t, prod, "abs", (d2, d3))
        if isinstance(t, App):
            hty, d1 = self.infer(env, t.head)
            prod = self._whnf_product(hty)
            d2 = self.check(env, t.arg, prod.domain)
            typ = open_(prod.codomain, t.arg)
            return typ, TypingDerivation(env, t, typ, "app", (d1, d2))
        raise TypingError("internal", f"unknown term node {t!r}")

    def _infer_symb(self, env: Environment, t: Symb) -> Tuple[Term, TypingDerivation]:
        decl = self.sig.decls.get(t.name)
        if decl is None:
            raise TypingError("unknown-symbol", f"undeclared symbol {t.name}")
        if len(t.args) != decl.arity:
            raise TypingError("arity-error",
                              f"{t.name} expects {decl.arity} argument(s), "
                              f"got {len(t.args)}")
        gamma = decl.inst(t.args)
        premises = []
        for arg, (_, ti) in zip(t.args, decl.binders):
            expected = subst_apply(ti, gamma)
            premises.append(self.check(env, arg, expected))
        typ = subst_apply(decl.output, gamma)
        return typ, TypingDerivation(env, t, typ, "symb", tuple(premises))

    def _infer_sort(self, env: Environment, t: Term) -> Tuple[Sort, TypingDerivation]:
        typ, d = self.infer(env, t)
        if not isinstance(typ, SortT):
            typ_n = normalize(typ, self.rules, self.fuel)
            if not isinstance(typ_n, SortT):
                raise TypingError("sort-error", f"{t} is not a type or kind "
                                                f"(its type is {typ})")
            d = TypingDerivation(env, t, typ_n, "conv", (d,))
            typ = typ_n
        return typ.sort, d

    def sort_of(self, env: Environment, t: Term) -> Sort:
        return self._infer_sort(env, t)[0]

    def check(self, env: Environment, t: Term, expected: Term) -> TypingDerivation:
        actual, d = self.infer(env, t)
        if alpha_eq(actual, expected):
            return d
        try:
            conv = self.convertible(actual, expected)
        except FuelExhausted:
            raise
        if not conv:
            raise TypingError(
                "type-mismatch",
                f"{t} has type {self._display(actual)}, expected "
                f"{self._display(expected)}")
        self._infer_sort(env, expected)
        return TypingDerivation(env, t, expected, "conv", (d,))

    def _display(self, t: Term) -> Term:
        try:
            return normalize(t, self.rules, self.fuel)
        except FuelExhausted:
            return t

    # -- environments and substitutions ---------------------------------------

    def env_valid(self, env: Environment) -> None:
        prefix = Environment()
        for idx, (v, typ) in enumerate(env):
            try:
                s = self.sort_of(prefix, typ)
            except CacError as e:
                raise TypingError("invalid-environment",
                                  f"binding {idx + 1} ({v}:{typ}): {e.message}")
            if v.sort != s:
                raise TypingError("invalid-environment",
                                  f"binding {idx + 1}: variable {v} has sort "
                                  f"class {v.sort} but its type is sorted {s}")
            prefix = prefix.extend(v, typ)

    def check_substitution(self, theta: dict, gamma: Environment,
                           delta: Environment) -> None:
        """theta : gamma -> delta in the well-typed sense."""
        failures = []
        for v, typ in gamma:
            image = theta.get(v, Var(v))
            expected = subst_apply(typ, theta)
            try:
                self.check(delta, image, expected)
            except CacError as e:
                failures.append(f"{v}: {e.message}")
        if failures:
            raise TypingError("ill-typed-substitution", "; ".join(failures))


def replay(deriv: TypingDerivation, tc: TypeChecker) -> bool:
    """Re-validate a recorded derivation node by node: each node's
    conclusion must instantiate its rule given the premises."""
    env, t, typ, tag, prem = (deriv.env, deriv.term, deriv.typ,
                              deriv.rule_tag, deriv.premises)
    ok = all(replay(p, tc) for p in prem)
    if not ok:
        return False
    if tag == "ax":
        return t == STAR and typ == BOX
    if tag == "var":
        bound = env.lookup(t.var) if isinstance(t, Var) else None
        return bound is not None and alpha_eq(bound, typ)
    if tag == "symb":
        if not isinstance(t, Symb):
            return False
        decl = tc.sig.decls.get(t.name)
        if decl is None or len(t.args) != decl.arity:
            return False
        gamma = decl.inst(t.args)
        return alpha_eq(typ, subst_apply(decl.output, gamma))
    if tag == "prod":
        return isinstance(t, Prod) and isinstance(typ, SortT)
    if tag == "abs":
        return isinstance(t, Abs) and isinstance(typ, Prod) \
            and alpha_eq(typ.domain, t.domain)
    if tag == "app":
        if not (isinstance(t, App) and len(prem) == 2):
            return False
        hty = prem[0].typ
        try:
            p = tc._whnf_product(hty)
        except CacError:
            return False
        return alpha_eq(typ, open_(p.codomain, t.arg))
    if tag == "conv":
        return len(prem) == 1 and tc.convertible(prem[0].typ, typ)
    return False
