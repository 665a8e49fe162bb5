"""Term syntax: sorts, variables, symbol applications, binders, positions.

Terms use a locally nameless representation: bound variables are de
Bruijn indices (`BVar`), free variables are globally unique `Variable`
objects.  Alpha-equivalence is therefore plain structural equality and
substitution is capture-free by construction.  Display names are kept
on binders and variables for printing only and are excluded from
comparison and hashing.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

Position = tuple  # tuple of positive ints; () is the root position
EPSILON: Position = ()


class CacError(Exception):
    """Base class for every error raised by the checker."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


class InvalidPosition(CacError):
    def __init__(self, term, pos):
        super().__init__("invalid-position", f"position {pos} not in {term}")


class FuelExhausted(CacError):
    def __init__(self, what: str = "reduction"):
        super().__init__("fuel-exhausted", f"fuel exhausted during {what}")


class Sort(enum.Enum):
    STAR = "*"   # impredicative universe of propositions
    BOX = "[]"   # predicative universe containing STAR

    def __str__(self):
        return "★" if self is Sort.STAR else "□"


_var_ids = itertools.count(1)


@dataclass(frozen=True)
class Variable:
    """A free variable with a fixed sort class (object or predicate)."""

    id: int
    sort: Sort
    name: str = field(compare=False)

    def __str__(self):
        return self.name

    @staticmethod
    def fresh(name: str, sort: Sort = Sort.STAR) -> "Variable":
        return Variable(next(_var_ids), sort, name)


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class SortT(Term):
    sort: Sort

    def __str__(self):
        return str(self.sort)


STAR = SortT(Sort.STAR)
BOX = SortT(Sort.BOX)


@dataclass(frozen=True)
class Var(Term):
    var: Variable

    def __str__(self):
        return self.var.name


@dataclass(frozen=True)
class BVar(Term):
    """Bound variable (de Bruijn index); never user-visible."""

    index: int

    def __str__(self):
        return f"#{self.index}"


@dataclass(frozen=True)
class Symb(Term):
    """Fully applied symbol f(t1, ..., tn); arity is fixed by the signature."""

    name: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.name
        return f"{self.name}({', '.join(map(str, self.args))})"


@dataclass(frozen=True)
class Abs(Term):
    domain: Term
    body: Term
    hint: str = field(default="x", compare=False)

    def __str__(self):
        from .printer import pp
        return pp(self)


@dataclass(frozen=True)
class Prod(Term):
    domain: Term
    codomain: Term
    hint: str = field(default="x", compare=False)

    def __str__(self):
        from .printer import pp
        return pp(self)


@dataclass(frozen=True)
class App(Term):
    head: Term
    arg: Term

    def __str__(self):
        from .printer import pp
        return pp(self)


def alpha_eq(t: Term, u: Term) -> bool:
    """Equality up to bound-variable names (structural here)."""
    return t == u


def is_kind(t: Term) -> bool:
    """True iff t is of the shape (x1:T1)...(xn:Tn)*.

    In CC every well-typed term of type BOX has this shape, so this
    syntactic test decides the sort class of a variable from its
    declared type.
    """
    while isinstance(t, Prod):
        t = t.codomain
    return t == STAR


def sort_class_of_type(t: Term) -> Sort:
    """Sort class of a variable whose declared type is t."""
    return Sort.BOX if is_kind(t) else Sort.STAR


# ---------------------------------------------------------------------------
# binder plumbing

def close(t: Term, v: Variable, depth: int = 0) -> Term:
    """Replace free occurrences of v by the bound index `depth`."""
    if isinstance(t, Var):
        return BVar(depth) if t.var == v else t
    if isinstance(t, Symb):
        return Symb(t.name, tuple(close(a, v, depth) for a in t.args))
    if isinstance(t, Abs):
        return Abs(close(t.domain, v, depth), close(t.body, v, depth + 1), t.hint)
    if isinstance(t, Prod):
        return Prod(close(t.domain, v, depth), close(t.codomain, v, depth + 1), t.hint)
    if isinstance(t, App):
        return App(close(t.head, v, depth), close(t.arg, v, depth))
    return t


def open_(t: Term, image: Term, depth: int = 0) -> Term:
    """Instantiate the bound index `depth` with `image` (locally closed)."""
    if isinstance(t, BVar):
        return image if t.index == depth else t
    if isinstance(t, Symb):
        return Symb(t.name, tuple(open_(a, image, depth) for a in t.args))
    if isinstance(t, Abs):
        return Abs(open_(t.domain, image, depth), open_(t.body, image, depth + 1), t.hint)
    if isinstance(t, Prod):
        return Prod(open_(t.domain, image, depth), open_(t.codomain, image, depth + 1), t.hint)
    if isinstance(t, App):
        return App(open_(t.head, image, depth), open_(t.arg, image, depth))
    return t


def lam(v: Variable, domain: Term, body: Term) -> Abs:
    return Abs(domain, close(body, v), v.name)


def pi(v: Variable, domain: Term, codomain: Term) -> Prod:
    return Prod(domain, close(codomain, v), v.name)


def arrow(domain: Term, codomain: Term) -> Prod:
    """Non-dependent product T -> U."""
    return Prod(domain, codomain, "_")


def open_fresh(t: Union[Abs, Prod]) -> "tuple[Variable, Term]":
    """Open a binder with a fresh variable of the right sort class."""
    v = Variable.fresh(t.hint, sort_class_of_type(t.domain))
    body = t.body if isinstance(t, Abs) else t.codomain
    return v, open_(body, Var(v))


def binds(t: Union[Abs, Prod]) -> bool:
    """True iff the binder's variable actually occurs in the body."""
    body = t.body if isinstance(t, Abs) else t.codomain

    def occ(u, depth):
        if isinstance(u, BVar):
            return u.index == depth
        if isinstance(u, Symb):
            return any(occ(a, depth) for a in u.args)
        if isinstance(u, Abs):
            return occ(u.domain, depth) or occ(u.body, depth + 1)
        if isinstance(u, Prod):
            return occ(u.domain, depth) or occ(u.codomain, depth + 1)
        if isinstance(u, App):
            return occ(u.head, depth) or occ(u.arg, depth)
        return False

    return occ(body, 0)


# ---------------------------------------------------------------------------
# free variables and substitution

def free_vars(t: Term, sort_filter: Optional[Sort] = None) -> frozenset:
    out = set()

    def go(u):
        if isinstance(u, Var):
            out.add(u.var)
        elif isinstance(u, Symb):
            for a in u.args:
                go(a)
        elif isinstance(u, Abs):
            go(u.domain)
            go(u.body)
        elif isinstance(u, Prod):
            go(u.domain)
            go(u.codomain)
        elif isinstance(u, App):
            go(u.head)
            go(u.arg)

    go(t)
    if sort_filter is not None:
        out = {v for v in out if v.sort == sort_filter}
    return frozenset(out)


Substitution = dict  # Variable -> Term, finite domain


def subst_apply(t: Term, theta: Substitution) -> Term:
    """Capture-avoiding simultaneous substitution (images locally closed)."""
    if not theta:
        return t
    if isinstance(t, Var):
        return theta.get(t.var, t)
    if isinstance(t, Symb):
        return Symb(t.name, tuple(subst_apply(a, theta) for a in t.args))
    if isinstance(t, Abs):
        return Abs(subst_apply(t.domain, theta), subst_apply(t.body, theta), t.hint)
    if isinstance(t, Prod):
        return Prod(subst_apply(t.domain, theta), subst_apply(t.codomain, theta), t.hint)
    if isinstance(t, App):
        return App(subst_apply(t.head, theta), subst_apply(t.arg, theta))
    return t


def compose_subst(theta: Substitution, sigma: Substitution) -> Substitution:
    """theta;sigma — apply theta first, then sigma."""
    out = {v: subst_apply(u, sigma) for v, u in theta.items()}
    for v, u in sigma.items():
        out.setdefault(v, u)
    return out


def dom_sorted(theta: Substitution, sort: Sort) -> frozenset:
    return frozenset(v for v in theta if v.sort == sort)


# ---------------------------------------------------------------------------
# positions

def _children(t: Term):
    """Immediate subterms, 1-indexed.  Binder bodies are traversed raw
    (bound indices intact); positions 1/2 are domain/body for Abs and Prod."""
    if isinstance(t, Symb):
        return list(t.args)
    if isinstance(t, Abs):
        return [t.domain, t.body]
    if isinstance(t, Prod):
        return [t.domain, t.codomain]
    if isinstance(t, App):
        return [t.head, t.arg]
    return []


def _rebuild(t: Term, kids) -> Term:
    if isinstance(t, Symb):
        return Symb(t.name, tuple(kids))
    if isinstance(t, Abs):
        return Abs(kids[0], kids[1], t.hint)
    if isinstance(t, Prod):
        return Prod(kids[0], kids[1], t.hint)
    if isinstance(t, App):
        return App(kids[0], kids[1])
    return t


def positions(t: Term) -> Iterator[Position]:
    """All positions of t, in prefix (leftmost-outermost) order."""
    yield EPSILON
    for i, c in enumerate(_children(t), start=1):
        for p in positions(c):
            yield (i,) + p


def subterm_at(t: Term, p: Position) -> Term:
    """Raw subterm; may contain dangling bound indices when p crosses a binder."""
    for i in p:
        kids = _children(t)
        if not 1 <= i <= len(kids):
            raise InvalidPosition(t, p)
        t = kids[i - 1]
    return t


def replace_at(t: Term, p: Position, u: Term) -> Term:
    if p == EPSILON:
        return u
    i = p[0]
    kids = _children(t)
    if not 1 <= i <= len(kids):
        raise InvalidPosition(t, p)
    kids[i - 1] = replace_at(kids[i - 1], p[1:], u)
    return _rebuild(t, kids)


def positions_of(t: Term, needle: Union[str, Variable]) -> frozenset:
    """Positions where a symbol occurs, or where a variable occurs free."""
    out = set()
    for p in positions(t):
        sub = subterm_at(t, p)
        if isinstance(needle, Variable):
            if isinstance(sub, Var) and sub.var == needle:
                out.add(p)
        else:
            if isinstance(sub, Symb) and sub.name == needle:
                out.add(p)
    return frozenset(out)


def is_algebraic(t: Term) -> bool:
    if isinstance(t, Var):
        return True
    if isinstance(t, Symb):
        return all(is_algebraic(a) for a in t.args)
    return False


def symbols_of(t: Term) -> frozenset:
    out = set()
    for p in positions(t):
        sub = subterm_at(t, p)
        if isinstance(sub, Symb):
            out.add(sub.name)
    return frozenset(out)


# ---------------------------------------------------------------------------
# environments

@dataclass(frozen=True)
class Environment:
    """Ordered list of typed variable bindings; also the Gamma of rules."""

    bindings: tuple = ()

    @staticmethod
    def of(pairs: Iterable) -> "Environment":
        return Environment(tuple(pairs))

    def extend(self, v: Variable, typ: Term) -> "Environment":
        return Environment(self.bindings + ((v, typ),))

    def lookup(self, v: Variable) -> Optional[Term]:
        for w, typ in reversed(self.bindings):
            if w == v:
                return typ
        return None

    def domain(self) -> tuple:
        return tuple(v for v, _ in self.bindings)

    def dom_set(self) -> frozenset:
        return frozenset(v for v, _ in self.bindings)

    def dom_sorted(self, sort: Sort) -> frozenset:
        return frozenset(v for v, _ in self.bindings if v.sort == sort)

    def __iter__(self):
        return iter(self.bindings)

    def __len__(self):
        return len(self.bindings)

    def __str__(self):
        return "[" + ", ".join(f"{v}:{t}" for v, t in self.bindings) + "]"


def spine(t: Term) -> "tuple[Term, list]":
    """Decompose nested applications: spine(((h a) b)) = (h, [a, b])."""
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.head
    args.reverse()
    return t, args


def apply_spine(head: Term, args: Iterable[Term]) -> Term:
    for a in args:
        head = App(head, a)
    return head


def strip_products(t: Term, limit: Optional[int] = None) -> "tuple[list, Term]":
    """Open leading products with fresh variables: ((v, dom) list, core)."""
    binders = []
    while isinstance(t, Prod) and (limit is None or len(binders) < limit):
        v, body = open_fresh(t)
        binders.append((v, t.domain))
        t = body
    return binders, t
