"""Positive/negative occurrence positions, the admissibility conditions
on the declared inductive structure (I1-I6), and the classification of
free predicate symbols by the shape of their constructors' argument
types."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Sequence

from .signature import Signature
from .terms import (Abs, App, BVar, EPSILON, Position, Prod, Sort, SortT,
                    Symb, Term, Var, Variable, free_vars, positions,
                    positions_of, spine)


@dataclass(frozen=True)
class PolarityReport:
    subject: Term
    positive: FrozenSet[Position]
    negative: FrozenSet[Position]

    def __post_init__(self):
        overlap = self.positive & self.negative
        assert not overlap, f"polarity sets overlap at {sorted(overlap)}"


def is_predicate_term(t: Term, sig: Optional[Signature] = None) -> bool:
    """Whether t lives at the predicate level (its type is a kind):
    decided from the head's declared sort class."""
    if isinstance(t, (SortT, Prod)):
        return True
    if isinstance(t, Var):
        return t.var.sort == Sort.BOX
    if isinstance(t, Symb):
        if sig is not None and t.name in sig.decls:
            return sig.decls[t.name].sort == Sort.BOX
        return False
    if isinstance(t, Abs):
        return is_predicate_term(t.body, sig)
    if isinstance(t, App):
        return is_predicate_term(spine(t)[0], sig)
    return False


def _prefixed(i: int, ps: FrozenSet[Position]) -> set:
    return {(i,) + p for p in ps}


def polarity(t: Term, sig: Signature,
             free_predicates: Optional[Sequence[str]] = None) -> PolarityReport:
    """Positive and negative positions of t.

    The two sets follow the mutual definition: products flip the
    polarity of their domain; an application of a free predicate symbol
    with declared inductive positions propagates into exactly those
    arguments.  Positions reachable without a polarity (abstraction
    domains, object arguments of applications) are reported as positive
    so the two sets stay disjoint; no admissibility condition ever
    consults their sign, only membership in the positive set or
    emptiness of occurrence sets.
    """
    if free_predicates is None:
        free_predicates = [n for n, d in sig.decls.items()
                           if d.sort == Sort.BOX]
    free_set = set(free_predicates)

    def go(u: Term, delta: int):
        """Returns (same-polarity set, flipped-polarity set)."""
        if isinstance(u, (SortT, Var, BVar)):
            return {EPSILON}, set()
        if isinstance(u, Symb):
            pos = {EPSILON}
            neg: set = set()
            if u.name in free_set:
                for i in sig.structure.ind_of(u.name):
                    if 1 <= i <= len(u.args):
                        p, n = go(u.args[i - 1], delta)
                        pos |= _prefixed(i, frozenset(p))
                        neg |= _prefixed(i, frozenset(n))
            return pos, neg
        if isinstance(u, Prod):
            dp, dn = go(u.domain, -delta)
            cp, cn = go(u.codomain, delta)
            pos = {EPSILON} | _prefixed(1, frozenset(dn)) | _prefixed(2, frozenset(cp))
            neg = _prefixed(1, frozenset(dp)) | _prefixed(2, frozenset(cn))
            return pos, neg
        if isinstance(u, Abs):
            bp, bn = go(u.body, delta)
            pos = {EPSILON} | _prefixed(1, set(positions(u.domain))) \
                | _prefixed(2, frozenset(bp))
            neg = _prefixed(2, frozenset(bn))
            return pos, neg
        if isinstance(u, App):
            hp, hn = go(u.head, delta)
            pos = {EPSILON} | _prefixed(1, frozenset(hp))
            neg = _prefixed(1, frozenset(hn))
            if not is_predicate_term(u.arg, sig):
                pos |= _prefixed(2, set(positions(u.arg)))
            return pos, neg
        return {EPSILON}, set()

    # with delta=+1 the "same-polarity" set is the positive one
    pos, neg = go(t, +1)
    return PolarityReport(t, frozenset(pos), frozenset(neg))


# ---------------------------------------------------------------------------
# admissible inductive structure


class PredicateClass(enum.Enum):
    PRIMITIVE = "PRIMITIVE"
    BASIC = "BASIC"
    STRICTLY_POSITIVE = "STRICTLY_POSITIVE"
    GENERAL = "GENERAL"


@dataclass(frozen=True)
class StructureViolation:
    condition: str       # "I1" .. "I6"
    predicate: str       # the free predicate C
    constructor: str
    arg_index: Optional[int]   # the accessible j, when applicable
    detail: str

    def __str__(self):
        where = f", argument {self.arg_index}" if self.arg_index else ""
        return (f"{self.condition} violated for {self.predicate} at "
                f"constructor {self.constructor}{where}: {self.detail}")


def _free_predicates(sig: Signature, rules=()) -> List[str]:
    return sig.free_predicate_symbols(rules)


def check_inductive_structure(sig: Signature,
                              rules=()) -> List[StructureViolation]:
    """All violations of the six structural conditions; empty means the
    declared (Ind, Acc) structure is admissible."""
    out: List[StructureViolation] = []
    frees = _free_predicates(sig, rules)
    defined_preds = set(sig.defined_predicate_symbols(rules))
    prec = sig.precedence

    for cname in frees:
        ind = sig.structure.ind_of(cname)
        for con in sig.constructors_of(cname):
            d = sig.decls[con]
            output = d.output
            assert isinstance(output, Symb) and output.name == cname
            vs = output.args
            # I1: inductive output arguments are predicate variables
            for i in ind:
                if not (1 <= i <= len(vs)):
                    out.append(StructureViolation(
                        "I1", cname, con, None,
                        f"inductive position {i} exceeds the output arity"))
                    continue
                vi = vs[i - 1]
                if not (isinstance(vi, Var) and vi.var.sort == Sort.BOX):
                    out.append(StructureViolation(
                        "I1", cname, con, None,
                        f"output argument {i} is {vi}, not a predicate variable"))
            binders = list(d.binders)
            for j in sorted(sig.structure.acc_of(con)):
                if not (1 <= j <= len(binders)):
                    out.append(StructureViolation(
                        "I2", cname, con, j,
                        "accessible index exceeds the arity"))
                    continue
                uj = binders[j - 1][1]
                rep = polarity(uj, sig, frees)
                # I2: inductive-argument variables occur positively
                for i in ind:
                    if not (1 <= i <= len(vs)):
                        continue
                    vi = vs[i - 1]
                    if not isinstance(vi, Var):
                        continue
                    occ = positions_of(uj, vi.var)
                    bad = occ - rep.positive
                    if bad:
                        out.append(StructureViolation(
                            "I2", cname, con, j,
                            f"variable {vi} occurs non-positively at "
                            f"{sorted(bad)[0]} in {uj}"))
                # I3: equivalent free predicates occur positively
                # I4: strictly greater free predicates do not occur
                for e in frees:
                    occ = positions_of(uj, e)
                    if not occ:
                        continue
                    if prec.eq(e, cname):
                        bad = occ - rep.positive
                        if bad:
                            out.append(StructureViolation(
                                "I3", cname, con, j,
                                f"equivalent predicate {e} occurs "
                                f"non-positively at {sorted(bad)[0]} in {uj}"))
                    elif prec.gt(e, cname):
                        out.append(StructureViolation(
                            "I4", cname, con, j,
                            f"greater predicate {e} occurs at "
                            f"{sorted(occ)[0]} in {uj}"))
                # I5: defined predicates do not occur
                for f in defined_preds:
                    occ = positions_of(uj, f)
                    if occ:
                        out.append(StructureViolation(
                            "I5", cname, con, j,
                            f"defined predicate {f} occurs at "
                            f"{sorted(occ)[0]} in {uj}"))
                # I6: predicate free variables are output parameters
                for x in sorted(free_vars(uj, Sort.BOX),
                                key=lambda v: v.id):
                    if not any(isinstance(v, Var) and v.var == x for v in vs):
                        out.append(StructureViolation(
                            "I6", cname, con, j,
                            f"predicate variable {x} in {uj} is not a "
                            f"parameter of the output type {output}"))
    return out


def classify_predicate(sig: Signature, cname: str,
                       rules=()) -> PredicateClass:
    """Strongest shape class of a free predicate symbol, quantifying
    over all equivalent predicates and their constructors' accessible
    argument types."""
    prec = sig.precedence
    frees = _free_predicates(sig, rules)
    cls = {d for d in frees if prec.eq(d, cname)}

    def eq_occurs(u: Term, dname: str) -> bool:
        return any(prec.eq(e, dname)
                   for e in _symbol_names(u) if e in frees)

    primitive = basic = strictly = True
    for dname in sorted(cls):
        for con in sig.constructors_of(dname):
            decl = sig.decls[con]
            for j in sorted(sig.structure.acc_of(con)):
                if not (1 <= j <= decl.arity):
                    continue
                uj = decl.binders[j - 1][1]
                # primitive: U_j is E(t-vec) with E basic below D, or
                # E equivalent to D
                if isinstance(uj, Symb) and uj.name in frees:
                    e = uj.name
                    if prec.eq(e, dname):
                        pass
                    elif prec.gt(dname, e) and _is_basic_shape(sig, e, rules):
                        pass
                    else:
                        primitive = False
                else:
                    primitive = False
                # basic: equivalent symbols occur only at the root
                if eq_occurs(uj, dname):
                    if not (isinstance(uj, Symb) and uj.name in frees
                            and prec.eq(uj.name, dname)):
                        basic = False
                    elif any(eq_occurs(a, dname) for a in uj.args):
                        basic = False
                # strictly positive: (z-vec:V-vec) E(t-vec), no
                # equivalent symbol in the domains
                if eq_occurs(uj, dname):
                    core = uj
                    domains = []
                    while isinstance(core, Prod):
                        domains.append(core.domain)
                        core = core.codomain
                    ok = (isinstance(core, Symb) and core.name in frees
                          and prec.eq(core.name, dname)
                          and not any(eq_occurs(v, dname) for v in domains)
                          and not any(eq_occurs(a, dname) for a in core.args))
                    if not ok:
                        strictly = False
    if primitive and basic:
        return PredicateClass.PRIMITIVE
    if basic:
        return PredicateClass.BASIC
    if strictly:
        return PredicateClass.STRICTLY_POSITIVE
    return PredicateClass.GENERAL


def _is_basic_shape(sig: Signature, cname: str, rules=()) -> bool:
    return classify_predicate(sig, cname, rules) in (
        PredicateClass.PRIMITIVE, PredicateClass.BASIC)


def _symbol_names(t: Term) -> FrozenSet[str]:
    from .terms import symbols_of
    return symbols_of(t)
