"""First-order matching, beta/rule reduction, normalization, critical
pairs and the confluence verdict."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .terms import (Abs, App, BVar, CacError, Environment, FuelExhausted,
                    Position, Prod, Symb, Term, Var, Variable, alpha_eq,
                    free_vars, is_algebraic, open_, open_fresh, lam,
                    positions, replace_at, subst_apply, subterm_at)


class RuleError(CacError):
    pass


@dataclass(frozen=True)
class RewriteRule:
    """l -> r with the annotation environment Gamma and substitution rho
    of the type-preservation conditions."""

    name: str
    lhs: Term
    rhs: Term
    ann_env: Environment = Environment()
    ann_subst: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (is_algebraic(self.lhs) and isinstance(self.lhs, Symb)):
            raise RuleError("bad-lhs", f"{self.name}: left-hand side must be an "
                                       "algebraic term headed by a symbol")
        extra = free_vars(self.rhs) - free_vars(self.lhs)
        if extra:
            raise RuleError("bad-rhs", f"{self.name}: right-hand side has free "
                                       f"variables {sorted(v.name for v in extra)} "
                                       "not in the left-hand side")

    def head_name(self) -> str:
        return self.lhs.name  # type: ignore[union-attr]

    def lhs_args(self) -> Tuple[Term, ...]:
        return self.lhs.args  # type: ignore[union-attr]

    def __str__(self):
        return f"{self.name}: {self.lhs} -> {self.rhs}"


def match_first_order(pattern: Term, subject: Term,
                      sigma: Optional[dict] = None) -> Optional[dict]:
    """Match an algebraic pattern against a subject.  Repeated pattern
    variables require alpha-equal images."""
    if sigma is None:
        sigma = {}
    if isinstance(pattern, Var):
        bound = sigma.get(pattern.var)
        if bound is None:
            sigma[pattern.var] = subject
            return sigma
        return sigma if alpha_eq(bound, subject) else None
    if isinstance(pattern, Symb):
        if not (isinstance(subject, Symb) and subject.name == pattern.name
                and len(subject.args) == len(pattern.args)):
            return None
        for p, s in zip(pattern.args, subject.args):
            if match_first_order(p, s, sigma) is None:
                return None
        return sigma
    raise RuleError("bad-pattern", "pattern must be algebraic")


def unify(a: Term, b: Term, sigma: Optional[dict] = None) -> Optional[dict]:
    """First-order unification of algebraic terms (shared variable space)."""
    if sigma is None:
        sigma = {}

    def walk(t):
        while isinstance(t, Var) and t.var in sigma:
            t = sigma[t.var]
        return t

    def occurs(v, t):
        t = walk(t)
        if isinstance(t, Var):
            return t.var == v
        if isinstance(t, Symb):
            return any(occurs(v, a) for a in t.args)
        return False

    def go(x, y):
        x, y = walk(x), walk(y)
        if isinstance(x, Var) and isinstance(y, Var) and x.var == y.var:
            return True
        if isinstance(x, Var):
            if occurs(x.var, y):
                return False
            sigma[x.var] = y
            return True
        if isinstance(y, Var):
            return go(y, x)
        if isinstance(x, Symb) and isinstance(y, Symb):
            if x.name != y.name or len(x.args) != len(y.args):
                return False
            return all(go(p, q) for p, q in zip(x.args, y.args))
        return False

    if not go(a, b):
        return None
    # resolve chains so images are fully substituted
    def resolve(t):
        t = walk(t)
        if isinstance(t, Symb):
            return Symb(t.name, tuple(resolve(a) for a in t.args))
        return t

    return {v: resolve(u) for v, u in sigma.items()}


def rename_apart(rule: RewriteRule) -> RewriteRule:
    ren = {v: Var(Variable.fresh(v.name, v.sort)) for v in free_vars(rule.lhs)}
    return RewriteRule(rule.name, subst_apply(rule.lhs, ren),
                       subst_apply(rule.rhs, ren))


# ---------------------------------------------------------------------------
# reduction

def _root_reducts(t: Term, rules: Sequence[RewriteRule]) -> List[Term]:
    out = []
    for rule in rules:
        sigma = match_first_order(rule.lhs, t)
        if sigma is not None:
            out.append(subst_apply(rule.rhs, sigma))
    if isinstance(t, App) and isinstance(t.head, Abs):
        out.append(open_(t.head.body, t.arg))
    return out


def reduce_one(t: Term, rules: Sequence[RewriteRule]) -> List[Term]:
    """All one-step reducts of t (rule steps and beta steps, anywhere)."""
    out: List[Term] = []

    def add(u):
        if all(not alpha_eq(u, w) for w in out):
            out.append(u)

    for u in _root_reducts(t, rules):
        add(u)
    if isinstance(t, Symb):
        for i, a in enumerate(t.args):
            for ra in reduce_one(a, rules):
                add(Symb(t.name, t.args[:i] + (ra,) + t.args[i + 1:]))
    elif isinstance(t, App):
        for rh in reduce_one(t.head, rules):
            add(App(rh, t.arg))
        for ra in reduce_one(t.arg, rules):
            add(App(t.head, ra))
    elif isinstance(t, Abs):
        for rd in reduce_one(t.domain, rules):
            add(Abs(rd, t.body, t.hint))
        v, body = open_fresh(t)
        for rb in reduce_one(body, rules):
            add(lam(v, t.domain, rb))
    elif isinstance(t, Prod):
        for rd in reduce_one(t.domain, rules):
            add(Prod(rd, t.codomain, t.hint))
        v, body = open_fresh(t)
        from .terms import pi
        for rb in reduce_one(body, rules):
            add(pi(v, t.domain, rb))
    return out


def step(t: Term, rules: Sequence[RewriteRule]) -> Optional[Term]:
    """Leftmost-outermost single step; rules take priority over beta at
    the same position.  None when t is in normal form."""
    for rule in rules:
        sigma = match_first_order(rule.lhs, t)
        if sigma is not None:
            return subst_apply(rule.rhs, sigma)
    if isinstance(t, App) and isinstance(t.head, Abs):
        return open_(t.head.body, t.arg)
    if isinstance(t, Symb):
        for i, a in enumerate(t.args):
            r = step(a, rules)
            if r is not None:
                return Symb(t.name, t.args[:i] + (r,) + t.args[i + 1:])
        return None
    if isinstance(t, App):
        r = step(t.head, rules)
        if r is not None:
            return App(r, t.arg)
        r = step(t.arg, rules)
        if r is not None:
            return App(t.head, r)
        return None
    if isinstance(t, Abs):
        r = step(t.domain, rules)
        if r is not None:
            return Abs(r, t.body, t.hint)
        v, body = open_fresh(t)
        r = step(body, rules)
        if r is not None:
            return lam(v, t.domain, r)
        return None
    if isinstance(t, Prod):
        r = step(t.domain, rules)
        if r is not None:
            return Prod(r, t.codomain, t.hint)
        v, body = open_fresh(t)
        r = step(body, rules)
        if r is not None:
            from .terms import pi
            return pi(v, t.domain, r)
        return None
    return None


def normalize(t: Term, rules: Sequence[RewriteRule], fuel: int = 10000) -> Term:
    """Leftmost-outermost normal form; raises FuelExhausted rather than
    ever returning a reducible term."""
    for _ in range(fuel):
        r = step(t, rules)
        if r is None:
            return t
        t = r
    if step(t, rules) is None:
        return t
    raise FuelExhausted("normalization")


def joinable(t: Term, u: Term, rules: Sequence[RewriteRule],
             fuel: int = 10000, confluent: bool = False) -> bool:
    """Do t and u have a common reduct?  Under a positive confluence
    verdict this is normalize-and-compare; otherwise a bounded
    breadth-first search of both reduction graphs."""
    if alpha_eq(t, u):
        return True
    if confluent:
        return alpha_eq(normalize(t, rules, fuel), normalize(u, rules, fuel))
    seen_t, seen_u = [t], [u]
    frontier_t, frontier_u = [t], [u]
    budget = fuel

    def meets(xs, ys):
        return any(alpha_eq(x, y) for x in xs for y in ys)

    while frontier_t or frontier_u:
        if meets(seen_t, seen_u):
            return True
        nxt_t, nxt_u = [], []
        for x in frontier_t:
            for r in reduce_one(x, rules):
                budget -= 1
                if budget < 0:
                    raise FuelExhausted("joinability search")
                if all(not alpha_eq(r, s) for s in seen_t):
                    seen_t.append(r)
                    nxt_t.append(r)
        for y in frontier_u:
            for r in reduce_one(y, rules):
                budget -= 1
                if budget < 0:
                    raise FuelExhausted("joinability search")
                if all(not alpha_eq(r, s) for s in seen_u):
                    seen_u.append(r)
                    nxt_u.append(r)
        frontier_t, frontier_u = nxt_t, nxt_u
    return meets(seen_t, seen_u)


# ---------------------------------------------------------------------------
# critical pairs and confluence

@dataclass(frozen=True)
class CriticalPair:
    peak: Term
    left_reduct: Term
    right_reduct: Term
    overlap_position: Position
    rules: Tuple[str, str]

    def __str__(self):
        return (f"peak {self.peak} -> {self.left_reduct} | {self.right_reduct}"
                f" (rules {self.rules[0]}/{self.rules[1]} at {list(self.overlap_position)})")


def left_linear(rule: RewriteRule) -> bool:
    counts: Dict[Variable, int] = {}
    for p in positions(rule.lhs):
        s = subterm_at(rule.lhs, p)
        if isinstance(s, Var):
            counts[s.var] = counts.get(s.var, 0) + 1
    return all(c == 1 for c in counts.values())


def _overlaps(r1: RewriteRule, r2: RewriteRule,
              include_root: bool) -> List[CriticalPair]:
    """Overlap r2's lhs into non-variable positions of r1's lhs."""
    out = []
    for p in positions(r1.lhs):
        sub = subterm_at(r1.lhs, p)
        if not isinstance(sub, Symb):
            continue
        if p == () and not include_root:
            continue
        sigma = unify(sub, r2.lhs)
        if sigma is None:
            continue
        peak = subst_apply(r1.lhs, sigma)
        left = subst_apply(r1.rhs, sigma)
        right = subst_apply(replace_at(r1.lhs, p, r2.rhs), sigma)
        out.append(CriticalPair(peak, left, right, p, (r1.name, r2.name)))
    return out


def critical_pairs(rules: Sequence[RewriteRule]) -> List[CriticalPair]:
    """All overlaps between renamed-apart rule pairs at non-variable
    positions.  Rule/beta pairs do not exist: left-hand sides are
    algebraic, hence abstraction-free."""
    out: List[CriticalPair] = []
    n = len(rules)
    for i in range(n):
        ri = rename_apart(rules[i])
        # self-overlaps at proper positions only
        out.extend(_overlaps(ri, rename_apart(rules[i]), include_root=False))
        for j in range(i + 1, n):
            rj = rename_apart(rules[j])
            out.extend(_overlaps(ri, rj, include_root=True))
            out.extend(_overlaps(rj, ri, include_root=False))
    return out


class ConfluenceLevel(enum.Enum):
    ORTHOGONAL = "ORTHOGONAL"
    NEWMAN = "NEWMAN"
    ASSERTED = "ASSERTED"
    UNKNOWN = "UNKNOWN"


@dataclass
class ConfluenceVerdict:
    level: ConfluenceLevel
    evidence: List[str] = field(default_factory=list)

    @property
    def positive(self) -> bool:
        return self.level != ConfluenceLevel.UNKNOWN

    def to_dict(self):
        return {"level": self.level.value, "evidence": list(self.evidence)}


def confluence_check(rules: Sequence[RewriteRule], signature=None,
                     fuel: int = 10000,
                     assume_confluent: bool = False) -> ConfluenceVerdict:
    """ORTHOGONAL: left-linear with no critical pairs (van Oostrom gives
    confluence of the combination with beta).  NEWMAN: a recursive path
    order proves termination of the rules and all critical pairs join.
    ASSERTED: user flag.  Otherwise UNKNOWN."""
    if not rules:
        return ConfluenceVerdict(ConfluenceLevel.ORTHOGONAL, ["empty rule set"])
    ll = all(left_linear(r) for r in rules)
    cps = critical_pairs(rules)
    if ll and not cps:
        return ConfluenceVerdict(ConfluenceLevel.ORTHOGONAL,
                                 ["left-linear", "no critical pairs"])
    if signature is not None:
        from .orderings import rpo_terminates
        trace = rpo_terminates(signature, rules)
        if trace is not None:
            evidence = ["termination by recursive path order"]
            all_join = True
            for cp in cps:
                try:
                    ok = joinable(cp.left_reduct, cp.right_reduct, rules, fuel)
                except FuelExhausted:
                    ok = False
                evidence.append(f"critical pair {cp}: "
                                + ("joinable" if ok else "NOT joinable"))
                if not ok:
                    all_join = False
            if all_join:
                return ConfluenceVerdict(ConfluenceLevel.NEWMAN, evidence)
    if assume_confluent:
        return ConfluenceVerdict(ConfluenceLevel.ASSERTED,
                                 ["assume-confluent pragma"])
    return ConfluenceVerdict(ConfluenceLevel.UNKNOWN,
                             [f"{len(cps)} critical pair(s); "
                              "left-linear" if ll else "non-left-linear"])
