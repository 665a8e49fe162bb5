"""Translation of basic inductive declarations into symbols and
recursor rewrite rules (weak elimination always, strong elimination per
closed small motive), ready for the admissibility pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .rewriting import RewriteRule
from .signature import Signature, SymbolDecl
from .terms import (Abs, App, CacError, Environment, Prod, Sort, SortT, STAR,
                    Symb, Term, Var, Variable, alpha_eq, apply_spine,
                    free_vars, lam, open_, pi, spine, strip_products,
                    subst_apply)


class BridgeError(CacError):
    pass


@dataclass(frozen=True)
class InductiveDecl:
    """An inductive type: its name, its arity (x-vec:A-vec)*, and the
    constructor types (z-vec:B-vec) X m-vec written over the
    self-reference variable `self_var`."""

    name: str
    arity_type: Term
    self_var: Variable
    constructors: Tuple[Tuple[str, Term], ...]  # (name, type) pairs


@dataclass
class GeneratedBundle:
    inductive: str
    symbols: List[str]
    welim: str
    rules: List[RewriteRule] = field(default_factory=list)
    provenance: Dict[str, Tuple[str, int, str]] = field(default_factory=dict)
    # constructor metadata used for rule generation: per constructor,
    # the original argument types over the self-reference
    ctor_arg_types: Dict[str, List[Term]] = field(default_factory=dict)
    ctor_output_args: Dict[str, List[Term]] = field(default_factory=dict)


def _self_applications_ok(b: Term, x: Variable) -> bool:
    """The self-reference occurs only as the head of a full application
    spine (the 'basic' restriction for argument types)."""
    head, args = spine(b)
    if isinstance(head, Var) and head.var == x:
        return all(x not in free_vars(a) for a in args)
    return x not in free_vars(b)


def _replace_self(t: Term, x: Variable, image_head: Term) -> Term:
    """Rewrite every spine X a-vec into image_head applied to a-vec."""
    head, args = spine(t)
    if isinstance(head, Var) and head.var == x:
        return apply_spine(image_head,
                           [_replace_self(a, x, image_head) for a in args])
    if isinstance(t, App):
        return App(_replace_self(t.head, x, image_head),
                   _replace_self(t.arg, x, image_head))
    if isinstance(t, Abs):
        return Abs(_replace_self(t.domain, x, image_head),
                   _replace_self(t.body, x, image_head), t.hint)
    if isinstance(t, Prod):
        return Prod(_replace_self(t.domain, x, image_head),
                    _replace_self(t.codomain, x, image_head), t.hint)
    if isinstance(t, Symb):
        return Symb(t.name, tuple(_replace_self(a, x, image_head)
                                  for a in t.args))
    return t


def _self_to_symbol(t: Term, x: Variable, iname: str, arity: int) -> Term:
    """Like _replace_self but producing the fixed-arity symbol form."""
    head, args = spine(t)
    if isinstance(head, Var) and head.var == x:
        if len(args) != arity:
            raise BridgeError(
                "non-basic-constructor",
                f"self-reference applied to {len(args)} argument(s), "
                f"the inductive type has arity {arity}")
        return Symb(iname, tuple(_self_to_symbol(a, x, iname, arity)
                                 for a in args))
    if isinstance(t, App):
        return App(_self_to_symbol(t.head, x, iname, arity),
                   _self_to_symbol(t.arg, x, iname, arity))
    if isinstance(t, Abs):
        return Abs(_self_to_symbol(t.domain, x, iname, arity),
                   _self_to_symbol(t.body, x, iname, arity), t.hint)
    if isinstance(t, Prod):
        return Prod(_self_to_symbol(t.domain, x, iname, arity),
                    _self_to_symbol(t.codomain, x, iname, arity), t.hint)
    if isinstance(t, Symb):
        return Symb(t.name, tuple(_self_to_symbol(a, x, iname, arity)
                                  for a in t.args))
    return t


def translate_inductive(d: InductiveDecl, sig: Signature,
                        fuel: int = 10000) -> GeneratedBundle:
    """Declare the type symbol, its constructors, and the weak recursor;
    record the inductive structure (no inductive positions, all
    constructor arguments accessible)."""
    params, core = strip_products(d.arity_type)
    if core != STAR:
        raise BridgeError("bad-arity-type",
                          f"the arity of {d.name} must end in ★, got {core}")
    arity = len(params)
    sig.declare(d.name, arity, d.arity_type, fuel=fuel)
    sig.structure.ind[d.name] = frozenset()

    bundle = GeneratedBundle(inductive=d.name, symbols=[d.name],
                             welim=f"WElim_{d.name}")
    x = d.self_var

    for cname, ctype in d.constructors:
        binders, output = strip_products(ctype)
        # basic restriction + I6 on the declared shape
        for _, b in binders:
            if not _self_applications_ok(b, x):
                raise BridgeError(
                    "non-basic-constructor",
                    f"constructor {cname}: argument type {b} uses the "
                    "inductive type other than as a full application")
        head, margs = spine(output)
        if not (isinstance(head, Var) and head.var == x):
            raise BridgeError(
                "bad-constructor-output",
                f"constructor {cname} does not end in the inductive type")
        if any(x in free_vars(m) for m in margs):
            raise BridgeError(
                "non-basic-constructor",
                f"constructor {cname}: output indices mention the type")
        for v, b in binders:
            if v.sort == Sort.BOX and not any(
                    isinstance(m, Var) and m.var == v for m in margs):
                raise BridgeError(
                    "i6-violation",
                    f"constructor {cname}: predicate argument {v} is not "
                    "a parameter of the output type")
        ctor_type = _rebuild_telescope(
            [(v, _self_to_symbol(b, x, d.name, arity)) for v, b in binders],
            Symb(d.name, tuple(_self_to_symbol(m, x, d.name, arity)
                               for m in margs)))
        sig.declare(cname, len(binders), ctor_type, fuel=fuel)
        sig.structure.acc[cname] = frozenset(range(1, len(binders) + 1))
        bundle.symbols.append(cname)
        bundle.ctor_arg_types[cname] = [_close_telescope(binders, i)
                                        for i in range(len(binders))]
        bundle.ctor_output_args[cname] = list(margs)

    welim_type = _welim_type(d, sig, arity, params)
    welim_arity = 1 + len(d.constructors) + arity + 1
    sig.declare(bundle.welim, welim_arity, welim_type, fuel=fuel)
    # recursive calls are compared on the scrutinee argument
    sig.status[bundle.welim] = (welim_arity,)
    bundle.symbols.append(bundle.welim)
    generate_iota_rules(d, bundle, sig)
    return bundle


def _rebuild_telescope(binders, core: Term) -> Term:
    t = core
    for v, dom in reversed(binders):
        t = pi(v, dom, t)
    return t


def _close_telescope(binders, i: int) -> Term:
    """The i-th argument type as a function of the previous binders
    (kept open: earlier binder variables stay free)."""
    return binders[i][1]


def _motive_applied(q: Term, args: Sequence[Term]) -> Term:
    return apply_spine(q, list(args))


def _branch_type(d: InductiveDecl, sig: Signature, cname: str, ctype: Term,
                 q_head: Term, arity: int) -> Term:
    """C_i{I,Q}: the original telescope with the self-reference mapped
    to the type symbol, then a copy of each argument with the
    self-reference mapped to the motive, ending in the motive at the
    output indices."""
    x = d.self_var
    binders, output = strip_products(ctype)
    _, margs = spine(output)
    firsts = [(v, _self_to_symbol(b, x, d.name, arity)) for v, b in binders]
    seconds = []
    for v, b in binders:
        v2 = Variable.fresh(v.name + "'", v.sort)
        seconds.append((v2, _replace_self(b, x, q_head)))
    core = _motive_applied(q_head,
                           [_self_to_symbol(m, x, d.name, arity)
                            for m in margs])
    return _rebuild_telescope(firsts + seconds, core)


def _welim_type(d: InductiveDecl, sig: Signature, arity: int,
                params) -> Term:
    qv = Variable.fresh("Q", Sort.BOX)
    fbinders = []
    for cname, ctype in d.constructors:
        fv = Variable.fresh(f"f_{cname}", Sort.STAR)
        fbinders.append((fv, _branch_type(d, sig, cname, ctype,
                                          Var(qv), arity)))
    xbinders = [(Variable.fresh(v.name, v.sort), t) for v, t in params]
    # re-thread dependencies among the x-binders
    ren = {old: Var(new) for (old, _), (new, _) in zip(params, xbinders)}
    xbinders = [(v, subst_apply(t, ren)) for v, t in xbinders]
    cv = Variable.fresh("c", Sort.STAR)
    ctyp = Symb(d.name, tuple(Var(v) for v, _ in xbinders))
    core = _motive_applied(Var(qv), [Var(v) for v, _ in xbinders])
    return _rebuild_telescope([(qv, d.arity_type)] + fbinders + xbinders
                              + [(cv, ctyp)], core)


def generate_iota_rules(d: InductiveDecl, bundle: GeneratedBundle,
                        sig: Signature) -> List[RewriteRule]:
    """One computation rule per constructor: the recursor applied to a
    constructor form hands the branch the constructor's arguments plus,
    for each recursive argument, the recursive result."""
    x = d.self_var
    welim = sig.decls[bundle.welim]
    arity = len(strip_products(d.arity_type)[0])
    rules: List[RewriteRule] = []
    for idx, (cname, ctype) in enumerate(d.constructors, start=1):
        cdecl = sig.decls[cname]
        qv = Variable.fresh("Q", Sort.BOX)
        fvars = [Variable.fresh(f"f{i}", Sort.STAR)
                 for i in range(1, len(d.constructors) + 1)]
        avars = [Variable.fresh(f"a{i}", v.sort)
                 for i, (v, _) in enumerate(strip_products(d.arity_type)[0],
                                            start=1)]
        binders, _ = strip_products(ctype)
        bvars = [Variable.fresh(f"b{j}", v.sort)
                 for j, (v, _) in enumerate(binders, start=1)]
        lhs = Symb(bundle.welim,
                   (Var(qv),) + tuple(Var(f) for f in fvars)
                   + tuple(Var(a) for a in avars)
                   + (Symb(cname, tuple(Var(b) for b in bvars)),))
        gamma_zb = {v: Var(b) for (v, _), b in zip(binders, bvars)}
        firsts = [Var(b) for b in bvars]
        seconds = []
        for (v, b), bv in zip(binders, bvars):
            head, aprime = spine(b)
            if isinstance(head, Var) and head.var == x:
                rec_args = [subst_apply(a, gamma_zb) for a in aprime]
                seconds.append(Symb(
                    bundle.welim,
                    (Var(qv),) + tuple(Var(f) for f in fvars)
                    + tuple(rec_args) + (Var(bv),)))
            else:
                seconds.append(Var(bv))
        rhs = apply_spine(Var(fvars[idx - 1]), firsts + seconds)
        # annotation environment: Q, the branches, then the constructor
        # arguments at their instantiated declared types; the index
        # variables are handled by the substitution mapping each to the
        # constructor's output index (typing the scrutinee forces the
        # identification)
        env = Environment()
        env = env.extend(qv, d.arity_type)
        for fv, (fcname, fctype) in zip(fvars, d.constructors):
            env = env.extend(fv, _branch_type(d, sig, fcname, fctype,
                                              Var(qv), arity))
        cgamma = cdecl.inst(tuple(Var(b) for b in bvars))
        for bv, (_, u) in zip(bvars, cdecl.binders):
            env = env.extend(bv, subst_apply(u, cgamma))
        assert isinstance(cdecl.output, Symb)
        rho = {a: subst_apply(m, cgamma)
               for a, m in zip(avars, cdecl.output.args)}
        rname = f"iota_{bundle.welim}_{cname}"
        rule = RewriteRule(rname, lhs, rhs, env, rho)
        rules.append(rule)
        bundle.rules.append(rule)
        bundle.provenance[rname] = (d.name, idx, "weak")
    return rules


# ---------------------------------------------------------------------------
# strong elimination (per closed small motive)


def is_small(d: InductiveDecl) -> bool:
    """Small: no constructor has predicate arguments beyond the
    parameters of the type (which basic I6-checked inductives expose as
    output arguments)."""
    x = d.self_var
    for cname, ctype in d.constructors:
        binders, output = strip_products(ctype)
        _, margs = spine(output)
        for v, _ in binders:
            if v.sort == Sort.BOX and not any(
                    isinstance(m, Var) and m.var == v for m in margs):
                return False
    return True


def selim_for_motive(d: InductiveDecl, bundle: GeneratedBundle,
                     sig: Signature, motive: Term,
                     fuel: int = 10000) -> Tuple[str, List[RewriteRule]]:
    """Declare a strong recursor specialized to a closed motive of the
    shape [x-vec:A-vec]K with K a kind, and its computation rules."""
    if not is_small(d):
        raise BridgeError("not-small",
                          f"{d.name} does not support strong elimination")
    if free_vars(motive):
        raise BridgeError("open-motive", "the motive must be closed")
    params, _ = strip_products(d.arity_type)
    arity = len(params)
    # reuse an existing symbol for an alpha-equal motive
    for name, m in getattr(sig, "_selim_cache", {}).get(d.name, []):
        if alpha_eq(m, motive):
            return name, [r for r in bundle.rules
                          if bundle.provenance.get(r.name, ("",))[0] == name]
    idx = len(getattr(sig, "_selim_cache", {}).get(d.name, [])) + 1
    name = f"SElim_{d.name}_{idx}"
    fbinders = []
    for cname, ctype in d.constructors:
        fv = Variable.fresh(f"f_{cname}", Sort.STAR)
        fbinders.append((fv, _branch_type(d, sig, cname, ctype,
                                          motive, arity)))
    xbinders = [(Variable.fresh(v.name, v.sort), t) for v, t in params]
    ren = {old: Var(new) for (old, _), (new, _) in zip(params, xbinders)}
    xbinders = [(v, subst_apply(t, ren)) for v, t in xbinders]
    cv = Variable.fresh("c", Sort.STAR)
    ctyp = Symb(d.name, tuple(Var(v) for v, _ in xbinders))
    core = _motive_applied(motive, [Var(v) for v, _ in xbinders])
    typ = _rebuild_telescope(fbinders + xbinders + [(cv, ctyp)], core)
    sig.declare(name, len(fbinders) + arity + 1, typ, fuel=fuel)
    cache = getattr(sig, "_selim_cache", None)
    if cache is None:
        cache = {}
        sig._selim_cache = cache
    cache.setdefault(d.name, []).append((name, motive))

    x = d.self_var
    rules = []
    for idx_c, (cname, ctype) in enumerate(d.constructors, start=1):
        cdecl = sig.decls[cname]
        fvars = [Variable.fresh(f"f{i}", Sort.STAR)
                 for i in range(1, len(d.constructors) + 1)]
        avars = [Variable.fresh(f"a{i}", v.sort)
                 for i, (v, _) in enumerate(params, start=1)]
        binders, _ = strip_products(ctype)
        bvars = [Variable.fresh(f"b{j}", v.sort)
                 for j, (v, _) in enumerate(binders, start=1)]
        lhs = Symb(name, tuple(Var(f) for f in fvars)
                   + tuple(Var(a) for a in avars)
                   + (Symb(cname, tuple(Var(b) for b in bvars)),))
        gamma_zb = {v: Var(b) for (v, _), b in zip(binders, bvars)}
        seconds = []
        for (v, b), bv in zip(binders, bvars):
            head, aprime = spine(b)
            if isinstance(head, Var) and head.var == x:
                rec_args = [subst_apply(a, gamma_zb) for a in aprime]
                seconds.append(Symb(name, tuple(Var(f) for f in fvars)
                                    + tuple(rec_args) + (Var(bv),)))
            else:
                seconds.append(Var(bv))
        rhs = apply_spine(Var(fvars[idx_c - 1]),
                          [Var(b) for b in bvars] + seconds)
        env = Environment()
        for fv, (fcname, fctype) in zip(fvars, d.constructors):
            env = env.extend(fv, _branch_type(d, sig, fcname, fctype,
                                              motive, arity))
        ren = {v: Var(a) for (v, _), a in zip(params, avars)}
        for a, (_, t) in zip(avars, params):
            env = env.extend(a, subst_apply(t, ren))
        cgamma = cdecl.inst(tuple(Var(b) for b in bvars))
        for bv, (_, u) in zip(bvars, cdecl.binders):
            env = env.extend(bv, subst_apply(u, cgamma))
        rname = f"iota_{name}_{cname}"
        rule = RewriteRule(rname, lhs, rhs, env, {})
        rules.append(rule)
        bundle.rules.append(rule)
        bundle.provenance[rname] = (name, idx_c, "strong")
    return name, rules


def certify_bundle(bundle: GeneratedBundle, sig: Signature,
                   rules: Sequence[RewriteRule] = (), fuel: int = 10000):
    """Run the admissibility pipeline over the generated rules (plus any
    caller-supplied ones)."""
    from .admissibility import check_admissible
    all_rules = list(bundle.rules) + [r for r in rules
                                      if r not in bundle.rules]
    return check_admissible(sig, all_rules, fuel=fuel)
