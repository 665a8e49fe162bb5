"""Symbol declarations, precedence, inductive structure (Ind/Acc)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from .terms import (CacError, Environment, Prod, Sort, SortT, STAR, Symb,
                    Term, Var, Variable, open_, sort_class_of_type,
                    subst_apply, symbols_of)


class DeclarationError(CacError):
    pass


@dataclass(frozen=True)
class SymbolDecl:
    """A symbol with its arity and declared type (x1:T1)...(xn:Tn)U."""

    name: str
    arity: int
    typ: Term
    sort: Sort  # the s with |- typ : s
    # telescope: binder variables paired with their domains, plus output
    binders: Tuple = ()   # tuple of (Variable, Term)
    output: Term = STAR

    def arg_types(self) -> List[Term]:
        return [t for _, t in self.binders]

    def binder_vars(self) -> List[Variable]:
        return [v for v, _ in self.binders]

    def inst(self, args: Iterable[Term]) -> dict:
        """The substitution gamma = {x-vec -> t-vec}."""
        return dict(zip(self.binder_vars(), args))


def split_telescope(typ: Term, arity: int, name: str) -> Tuple[Tuple, Term]:
    """Open the first `arity` products of a declared type."""
    binders = []
    t = typ
    for _ in range(arity):
        if not isinstance(t, Prod):
            raise DeclarationError(
                "arity-mismatch",
                f"type of {name} has fewer than {arity} leading products")
        v = Variable.fresh(t.hint or "x", sort_class_of_type(t.domain))
        binders.append((v, t.domain))
        t = open_(t.codomain, Var(v))
    return tuple(binders), t


class Precedence:
    """Quasi-order >=_F on symbols: equivalence classes plus a strict
    order on classes.  Defaults (symbols mentioned in tau_f sit strictly
    below f) are kept separately so user pragmas can override them."""

    def __init__(self):
        self._parent: Dict[str, str] = {}
        self._user_gt: set = set()      # (a, b) meaning a >_F b
        self._default_gt: set = set()

    def _find(self, a: str) -> str:
        p = self._parent.get(a, a)
        if p == a:
            return a
        root = self._find(p)
        self._parent[a] = root
        return root

    def add_eq(self, a: str, b: str):
        ra, rb = self._find(a), self._find(b)
        if ra != rb:
            self._parent[ra] = rb

    def add_gt(self, a: str, b: str):
        self._user_gt.add((a, b))

    def add_default_gt(self, a: str, b: str):
        self._default_gt.add((a, b))

    def eq(self, a: str, b: str) -> bool:
        return self._find(a) == self._find(b)

    def _strict_edges(self) -> set:
        """Effective strict edges on class representatives."""
        edges = set()
        for a, b in self._user_gt:
            edges.add((self._find(a), self._find(b)))
        for a, b in self._default_gt:
            ra, rb = self._find(a), self._find(b)
            if ra == rb:
                continue  # user pragma made them equivalent
            if (rb, ra) in edges:
                continue  # user pragma says otherwise
            edges.add((ra, rb))
        return edges

    def gt(self, a: str, b: str) -> bool:
        """a >_F b in the transitive closure of the strict class order."""
        ra, rb = self._find(a), self._find(b)
        if ra == rb:
            return False
        edges = self._strict_edges()
        seen = {ra}
        stack = [ra]
        while stack:
            x = stack.pop()
            for (u, v) in edges:
                if u == x and v not in seen:
                    if v == rb:
                        return True
                    seen.add(v)
                    stack.append(v)
        return False

    def ge(self, a: str, b: str) -> bool:
        return self.eq(a, b) or self.gt(a, b)

    def find_cycle(self) -> Optional[List[str]]:
        """A cycle in the strict class order, or None if acyclic."""
        edges = self._strict_edges()
        succ: Dict[str, List[str]] = {}
        for u, v in edges:
            succ.setdefault(u, []).append(v)
        WHITE, GREY, BLACK = 0, 1, 2
        color: Dict[str, int] = {}
        path: List[str] = []

        def dfs(u):
            color[u] = GREY
            path.append(u)
            for v in succ.get(u, []):
                if color.get(v, WHITE) == GREY:
                    return path[path.index(v):] + [v]
                if color.get(v, WHITE) == WHITE:
                    cyc = dfs(v)
                    if cyc:
                        return cyc
            path.pop()
            color[u] = BLACK
            return None

        for u in list(succ):
            if color.get(u, WHITE) == WHITE:
                cyc = dfs(u)
                if cyc:
                    return cyc
        return None


@dataclass
class InductiveStructure:
    """User-supplied Ind (inductive positions of free predicate symbols)
    and Acc (accessible argument positions of constructors)."""

    ind: Dict[str, FrozenSet[int]] = field(default_factory=dict)
    acc: Dict[str, FrozenSet[int]] = field(default_factory=dict)

    def ind_of(self, name: str) -> FrozenSet[int]:
        return self.ind.get(name, frozenset())

    def acc_of(self, name: str) -> FrozenSet[int]:
        return self.acc.get(name, frozenset())


class Signature:
    def __init__(self):
        self.decls: Dict[str, SymbolDecl] = {}
        self.precedence = Precedence()
        self.structure = InductiveStructure()
        # per-symbol argument status: the 1-based positions compared by
        # the recursive-call guard (default: all positions in order)
        self.status: Dict[str, Tuple[int, ...]] = {}
        self.sealed = False

    def __contains__(self, name: str) -> bool:
        return name in self.decls

    def __getitem__(self, name: str) -> SymbolDecl:
        return self.decls[name]

    def names(self) -> List[str]:
        return list(self.decls)

    def seal(self):
        self.sealed = True

    def declare(self, name: str, arity: int, typ: Term,
                rules=(), fuel: int = 10000) -> SymbolDecl:
        """Declare a symbol: shape-check the telescope and kind-check
        |- typ : s against the current signature and rules."""
        if self.sealed:
            raise DeclarationError("sealed", "signature is sealed")
        if name in self.decls:
            raise DeclarationError("duplicate-name", f"symbol {name} already declared")
        unknown = symbols_of(typ) - set(self.decls)
        if unknown:
            raise DeclarationError(
                "unknown-symbol",
                f"type of {name} mentions undeclared symbol(s) {sorted(unknown)}")
        binders, output = split_telescope(typ, arity, name)

        from .typing import TypeChecker  # deferred: typing depends on signature
        tc = TypeChecker(self, list(rules), fuel=fuel)
        sort = tc.sort_of(Environment(), typ)

        decl = SymbolDecl(name, arity, typ, sort, binders, output)
        self.decls[name] = decl
        # default precedence: symbols used in tau_f are strictly below f
        for g in symbols_of(typ):
            self.precedence.add_default_gt(name, g)
        return decl

    # -- classification -----------------------------------------------------

    def free_and_defined(self, rules) -> Tuple[FrozenSet[str], FrozenSet[str]]:
        defined = frozenset(r.head_name() for r in rules if r.head_name() in self.decls)
        free = frozenset(self.decls) - defined
        return free, defined

    def is_free(self, name: str, rules) -> bool:
        return all(r.head_name() != name for r in rules)

    def free_predicate_symbols(self, rules) -> List[str]:
        free, _ = self.free_and_defined(rules)
        return [n for n in self.decls
                if n in free and self.decls[n].sort == Sort.BOX]

    def defined_predicate_symbols(self, rules) -> List[str]:
        _, defined = self.free_and_defined(rules)
        return [n for n in self.decls
                if n in defined and self.decls[n].sort == Sort.BOX]

    def constructors_of(self, cname: str) -> List[str]:
        """Co(C): object symbols whose fully applied output type is headed
        by C — including defined symbols."""
        out = []
        for name, d in self.decls.items():
            if d.sort != Sort.STAR:
                continue
            if isinstance(d.output, Symb) and d.output.name == cname:
                out.append(name)
        return out

    def constructor_target(self, cname: str) -> Optional[str]:
        """The free predicate a constructor builds, from its output head."""
        d = self.decls.get(cname)
        if d is None or d.sort != Sort.STAR:
            return None
        if isinstance(d.output, Symb):
            return d.output.name
        return None

    def check_precedence(self) -> Optional[List[str]]:
        """None when the strict class order is acyclic, else a witness cycle."""
        return self.precedence.find_cycle()

    def check_arities(self, t: Term):
        """Every symbol application in t has its declared arity."""
        if isinstance(t, Symb):
            d = self.decls.get(t.name)
            if d is None:
                raise DeclarationError("unknown-symbol", f"undeclared symbol {t.name}")
            if len(t.args) != d.arity:
                raise DeclarationError(
                    "arity-error",
                    f"{t.name} applied to {len(t.args)} argument(s), arity is {d.arity}")
        for c in _subterms_shallow(t):
            self.check_arities(c)


def _subterms_shallow(t: Term):
    from .terms import _children
    return _children(t)
