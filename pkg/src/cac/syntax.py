"""Surface syntax: lexer, recursive-descent parser and incremental
elaborator for declaration files.

Grammar (one item per terminating `.`):

    symbol NAME : TYPE .
    rule LHS -> RHS [with env [x:T, ...] rho {x := TERM, ...}] .
    inductive NAME : TYPE [:= CTOR : TYPE | ...] .
    pragma ind(NAME) = {i, ...} .
    pragma acc(NAME) = {i, ...} .
    pragma prec NAME > NAME .
    pragma prec NAME = NAME .
    pragma assume_confluent .
    pragma assume_terminating .
    pragma non_algebraic NAME .
    check TERM : TYPE .
    normalize TERM .
    convert TERM , TERM .

Terms: `*` for the sort of propositions, `fun (x:T) => t`, dependent
products `(x:T) -> U`, arrows `T -> U`, symbol application `f(a, b)`,
term application by juxtaposition.  `#` starts a line comment."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .cic import InductiveDecl, translate_inductive
from .rewriting import RewriteRule
from .schema import derived_type
from .signature import Signature
from .terms import (Abs, App, CacError, Environment, Prod, Sort, SortT, STAR,
                    Symb, Term, Var, Variable, free_vars, is_kind, lam, pi,
                    positions_of, sort_class_of_type, subst_apply)


class ParseError(CacError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__("parse-error", f"{line}:{col}: {message}")
        self.line = line
        self.col = col


UNICODE_ALIASES = {
    "★": "*", "→": "->", "⇒": "=>", "¬": "not", "∧": "/\\", "∨": "\\/",
    "⊤": "top", "⊥": "bot", "λ": "fun", "ℓ": "l",
}

MULTI = ["->", "=>", ":=", "/\\", "\\/"]
SINGLE = "()[]{}:,.*=>|"


@dataclass(frozen=True)
class Token:
    kind: str   # "name" | "punct" | "eof"
    text: str
    line: int
    col: int


def lex(source: str) -> List[Token]:
    for u, a in UNICODE_ALIASES.items():
        source = source.replace(u, f" {a} ")
    tokens: List[Token] = []
    line, col, i = 1, 1, 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        matched = next((m for m in MULTI if source.startswith(m, i)), None)
        if matched:
            # the connective spellings are ordinary names
            kind = "name" if matched in ("/\\", "\\/") else "punct"
            tokens.append(Token(kind, matched, line, col))
            i += len(matched)
            col += len(matched)
            continue
        if ch in SINGLE:
            tokens.append(Token("punct", ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isalnum() or ch in "_'":
            j = i
            while j < n and (source[j].isalnum() or source[j] in "_'"):
                j += 1
            tokens.append(Token("name", source[i:j], line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# term AST (names unresolved until elaboration)


@dataclass(frozen=True)
class PName:
    name: str
    line: int
    col: int


@dataclass(frozen=True)
class PStar:
    pass


@dataclass(frozen=True)
class PSymbApp:
    name: str
    args: tuple
    line: int
    col: int


@dataclass(frozen=True)
class PApp:
    head: object
    arg: object


@dataclass(frozen=True)
class PAbs:
    var: str
    domain: object
    body: object


@dataclass(frozen=True)
class PProd:
    var: Optional[str]   # None for a plain arrow
    domain: object
    codomain: object


@dataclass
class Item:
    kind: str            # symbol | rule | inductive | pragma | directive
    payload: dict
    line: int


class Parser:
    def __init__(self, tokens: List[Token]):
        self.toks = tokens
        self.i = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.toks[min(self.i + ahead, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.peek()
        if t.kind != "eof":
            self.i += 1
        return t

    def error(self, msg: str) -> ParseError:
        t = self.peek()
        return ParseError(msg + f" (found {t.text!r})", t.line, t.col)

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t.text != text:
            raise self.error(f"expected {text!r}")
        return self.next()

    def expect_name(self) -> Token:
        t = self.peek()
        if t.kind != "name":
            raise self.error("expected a name")
        return self.next()

    # -- items ---------------------------------------------------------------

    def parse_file(self) -> List[Item]:
        items = []
        while self.peek().kind != "eof":
            items.append(self.parse_item())
        return items

    def parse_item(self) -> Item:
        t = self.peek()
        handlers = {"symbol": self._symbol, "rule": self._rule,
                    "inductive": self._inductive, "pragma": self._pragma,
                    "check": self._check, "normalize": self._normalize,
                    "convert": self._convert}
        h = handlers.get(t.text)
        if h is None:
            raise self.error("expected a declaration, rule, pragma or "
                             "directive")
        self.next()
        item = h(t)
        self.expect(".")
        return item

    def _symbol(self, t: Token) -> Item:
        name = self.expect_name().text
        self.expect(":")
        typ = self.parse_term()
        return Item("symbol", {"name": name, "type": typ}, t.line)

    def _rule(self, t: Token) -> Item:
        lhs = self.parse_app()  # application level: '->' separates sides
        self.expect("->")
        rhs = self.parse_term()
        env = None
        rho = None
        if self.peek().text == "with":
            self.next()
            self.expect("env")
            self.expect("[")
            env = []
            while self.peek().text != "]":
                x = self.expect_name().text
                self.expect(":")
                env.append((x, self.parse_term()))
                if self.peek().text == ",":
                    self.next()
            self.expect("]")
            rho = []
            if self.peek().text == "rho":
                self.next()
                self.expect("{")
                while self.peek().text != "}":
                    x = self.expect_name().text
                    self.expect(":=")
                    rho.append((x, self.parse_term()))
                    if self.peek().text == ",":
                        self.next()
                self.expect("}")
        return Item("rule", {"lhs": lhs, "rhs": rhs, "env": env,
                             "rho": rho}, t.line)

    def _inductive(self, t: Token) -> Item:
        name = self.expect_name().text
        self.expect(":")
        typ = self.parse_term()
        ctors = []
        if self.peek().text == ":=":
            self.next()
            while True:
                cname = self.expect_name().text
                self.expect(":")
                ctors.append((cname, self.parse_term()))
                if self.peek().text == "|":
                    self.next()
                    continue
                break
        return Item("inductive", {"name": name, "type": typ,
                                  "ctors": ctors}, t.line)

    def _pragma(self, t: Token) -> Item:
        kind = self.expect_name().text
        if kind in ("ind", "acc"):
            self.expect("(")
            name = self.expect_name().text
            self.expect(")")
            self.expect("=")
            self.expect("{")
            idxs = []
            while self.peek().text != "}":
                tok = self.expect_name()
                if not tok.text.isdigit():
                    raise ParseError("expected an argument index",
                                     tok.line, tok.col)
                idxs.append(int(tok.text))
                if self.peek().text == ",":
                    self.next()
            self.expect("}")
            return Item("pragma", {"kind": kind, "name": name,
                                   "indices": idxs}, t.line)
        if kind == "prec":
            a = self.expect_name().text
            op = self.next().text
            if op not in (">", "="):
                raise self.error("expected '>' or '=' in a precedence pragma")
            b = self.expect_name().text
            return Item("pragma", {"kind": "prec", "op": op,
                                   "left": a, "right": b}, t.line)
        if kind in ("assume_confluent", "assume_terminating"):
            return Item("pragma", {"kind": kind}, t.line)
        if kind == "non_algebraic":
            name = self.expect_name().text
            return Item("pragma", {"kind": kind, "name": name}, t.line)
        raise self.error(f"unknown pragma {kind!r}")

    def _check(self, t: Token) -> Item:
        term = self.parse_term()
        self.expect(":")
        typ = self.parse_term()
        return Item("directive", {"kind": "check", "term": term,
                                  "type": typ}, t.line)

    def _normalize(self, t: Token) -> Item:
        return Item("directive", {"kind": "normalize",
                                  "term": self.parse_term()}, t.line)

    def _convert(self, t: Token) -> Item:
        a = self.parse_term()
        self.expect(",")
        b = self.parse_term()
        return Item("directive", {"kind": "convert", "left": a,
                                  "right": b}, t.line)

    # -- terms ---------------------------------------------------------------

    def parse_term(self):
        """arrow level (right associative)."""
        left = self.parse_app()
        if self.peek().text == "->":
            self.next()
            return PProd(None, left, self.parse_term())
        return left

    def parse_app(self):
        t = self.parse_atom()
        while self._starts_atom():
            t = PApp(t, self.parse_atom())
        return t

    def _starts_atom(self) -> bool:
        tok = self.peek()
        if tok.kind == "name" and tok.text not in (
                "with", "env", "rho"):
            return True
        if tok.text in ("*", "fun", "("):
            return True
        return False

    def _binder_ahead(self) -> bool:
        return (self.peek().text == "(" and self.peek(1).kind == "name"
                and self.peek(2).text == ":")

    def parse_atom(self):
        tok = self.peek()
        if tok.text == "*":
            self.next()
            return PStar()
        if tok.text == "fun":
            self.next()
            self.expect("(")
            x = self.expect_name().text
            self.expect(":")
            dom = self.parse_term()
            self.expect(")")
            self.expect("=>")
            return PAbs(x, dom, self.parse_term())
        if tok.text == "(":
            if self._binder_ahead():
                self.next()
                x = self.expect_name().text
                self.expect(":")
                dom = self.parse_term()
                self.expect(")")
                self.expect("->")
                return PProd(x, dom, self.parse_term())
            self.next()
            t = self.parse_term()
            self.expect(")")
            return t
        if tok.kind == "name":
            self.next()
            if self.peek().text == "(" and not self._binder_ahead():
                self.next()
                args = []
                while self.peek().text != ")":
                    args.append(self.parse_term())
                    if self.peek().text == ",":
                        self.next()
                self.expect(")")
                return PSymbApp(tok.text, tuple(args), tok.line, tok.col)
            return PName(tok.text, tok.line, tok.col)
        raise self.error("expected a term")


def parse(source: str) -> List[Item]:
    return Parser(lex(source)).parse_file()


# ---------------------------------------------------------------------------
# elaboration


class ElabError(CacError):
    pass


@dataclass
class Directive:
    kind: str            # check | normalize | convert
    line: int
    terms: List[Term]


@dataclass
class LoadedFile:
    signature: Signature
    rules: List[RewriteRule]
    directives: List[Directive]
    assume_confluent: bool = False
    assume_terminating: bool = False
    non_algebraic: frozenset = frozenset()
    bundles: list = field(default_factory=list)


class Elaborator:
    def __init__(self, fuel: int = 10000):
        self.sig = Signature()
        self.rules: List[RewriteRule] = []
        self.fuel = fuel

    def term(self, p, scope: Dict[str, Variable],
             allow_free: bool = False,
             free_out: Optional[Dict[str, Variable]] = None) -> Term:
        """Resolve a parsed term: bound names from `scope`, then symbols
        from the signature; other names are fresh variables when
        `allow_free` (shared through free_out), otherwise errors."""
        if isinstance(p, PStar):
            return STAR
        if isinstance(p, PName):
            if p.name in scope:
                return Var(scope[p.name])
            if p.name in self.sig:
                d = self.sig[p.name]
                if d.arity != 0:
                    raise ElabError(
                        "arity-error",
                        f"{p.line}:{p.col}: symbol {p.name} expects "
                        f"{d.arity} argument(s)")
                return Symb(p.name, ())
            if allow_free:
                assert free_out is not None
                if p.name not in free_out:
                    free_out[p.name] = Variable.fresh(p.name, Sort.STAR)
                return Var(free_out[p.name])
            raise ElabError("unbound-name",
                            f"{p.line}:{p.col}: unknown name {p.name}")
        if isinstance(p, PSymbApp):
            if p.name not in self.sig:
                raise ElabError("unbound-name",
                                f"{p.line}:{p.col}: unknown symbol {p.name}")
            d = self.sig[p.name]
            if d.arity != len(p.args):
                raise ElabError(
                    "arity-error",
                    f"{p.line}:{p.col}: {p.name} expects {d.arity} "
                    f"argument(s), got {len(p.args)}")
            return Symb(p.name, tuple(
                self.term(a, scope, allow_free, free_out) for a in p.args))
        if isinstance(p, PApp):
            return App(self.term(p.head, scope, allow_free, free_out),
                       self.term(p.arg, scope, allow_free, free_out))
        if isinstance(p, PAbs):
            dom = self.term(p.domain, scope, allow_free, free_out)
            v = Variable.fresh(p.var, sort_class_of_type(dom))
            inner = dict(scope)
            inner[p.var] = v
            return lam(v, dom, self.term(p.body, inner, allow_free, free_out))
        if isinstance(p, PProd):
            dom = self.term(p.domain, scope, allow_free, free_out)
            if p.var is None:
                from .terms import arrow
                return arrow(dom, self.term(p.codomain, scope,
                                            allow_free, free_out))
            v = Variable.fresh(p.var, sort_class_of_type(dom))
            inner = dict(scope)
            inner[p.var] = v
            return pi(v, dom, self.term(p.codomain, inner,
                                        allow_free, free_out))
        raise ElabError("internal", f"unknown parse node {p!r}")

    # -- items ---------------------------------------------------------------

    def add_symbol(self, name: str, ptype) -> None:
        typ = self.term(ptype, {})
        arity = 0
        t = typ
        while isinstance(t, Prod):
            arity += 1
            t = t.codomain
        self.sig.declare(name, arity, typ, self.rules, fuel=self.fuel)

    def add_rule(self, payload: dict, line: int) -> RewriteRule:
        name = f"rule{len(self.rules) + 1}"
        if payload["env"] is not None:
            rule = self._annotated_rule(name, payload)
        else:
            rule = self._inferred_rule(name, payload, line)
        self.rules.append(rule)
        return rule

    def _annotated_rule(self, name: str, payload: dict) -> RewriteRule:
        scope: Dict[str, Variable] = {}
        env = Environment()
        for x, ptyp in payload["env"]:
            typ = self.term(ptyp, scope)
            v = Variable.fresh(x, Sort.BOX if is_kind(typ) else Sort.STAR)
            scope[x] = v
            env = env.extend(v, typ)
        rho: Dict[Variable, Term] = {}
        for x, pimg in payload["rho"] or []:
            img = self.term(pimg, scope)
            sort = Sort.BOX if _is_pred(img, self.sig) else Sort.STAR
            v = Variable.fresh(x, sort)
            scope[x] = v
            rho[v] = img
        lhs = self.term(payload["lhs"], scope)
        rhs = self.term(payload["rhs"], scope)
        return RewriteRule(name, lhs, rhs, env, rho)

    def _inferred_rule(self, name: str, payload: dict,
                       line: int) -> RewriteRule:
        free: Dict[str, Variable] = {}
        lhs = self.term(payload["lhs"], {}, allow_free=True, free_out=free)
        rhs = self.term(payload["rhs"], {}, allow_free=True, free_out=free)
        if not isinstance(lhs, Symb):
            raise ElabError("bad-lhs",
                            f"line {line}: rule left-hand side must be a "
                            "symbol application")
        # infer each variable's declared type from its first occurrence
        types: Dict[Variable, Term] = {}
        for v in free.values():
            occ = sorted(positions_of(lhs, v))
            if not occ:
                raise ElabError(
                    "bad-rhs",
                    f"line {line}: variable {v.name} does not occur in the "
                    "left-hand side; annotate the rule explicitly")
            types[v] = derived_type(lhs, occ[0], self.sig)
        # correct the sort classes and rebuild
        repl: Dict[Variable, Term] = {}
        fixed: Dict[Variable, Variable] = {}
        for v, typ in types.items():
            sort = Sort.BOX if is_kind(typ) else Sort.STAR
            nv = v if v.sort == sort else Variable.fresh(v.name, sort)
            fixed[v] = nv
            repl[v] = Var(nv)
        lhs = subst_apply(lhs, repl)
        rhs = subst_apply(rhs, repl)
        types = {fixed[v]: subst_apply(t, repl) for v, t in types.items()}
        # environment in dependency order (types may mention other vars)
        order: List[Variable] = []
        remaining = dict(types)
        while remaining:
            progressed = False
            for v in sorted(remaining, key=lambda w: w.id):
                if free_vars(remaining[v]) <= set(order):
                    order.append(v)
                    del remaining[v]
                    progressed = True
            if not progressed:
                raise ElabError(
                    "bad-env",
                    f"line {line}: cyclic dependencies among inferred "
                    "variable types; annotate the rule explicitly")
        env = Environment.of((v, types[v]) for v in order)
        return RewriteRule(name, lhs, rhs, env, {})

    def add_inductive(self, payload: dict) -> None:
        name = payload["name"]
        arity_type = self.term(payload["type"], {})
        self_var = Variable.fresh(name, Sort.BOX)
        ctors = []
        for cname, ptyp in payload["ctors"]:
            ctors.append((cname, self.term(ptyp, {name: self_var})))
        decl = InductiveDecl(name, arity_type, self_var, tuple(ctors))
        bundle = translate_inductive(decl, self.sig, fuel=self.fuel)
        self.rules.extend(bundle.rules)
        return bundle


def _is_pred(t: Term, sig: Signature) -> bool:
    from .positivity import is_predicate_term
    return is_predicate_term(t, sig)


def load(source: str, fuel: int = 10000) -> LoadedFile:
    items = parse(source)
    elab = Elaborator(fuel=fuel)
    out = LoadedFile(elab.sig, elab.rules, [])
    for item in items:
        if item.kind == "symbol":
            elab.add_symbol(item.payload["name"], item.payload["type"])
        elif item.kind == "rule":
            elab.add_rule(item.payload, item.line)
        elif item.kind == "inductive":
            out.bundles.append(elab.add_inductive(item.payload))
        elif item.kind == "pragma":
            _apply_pragma(elab, out, item)
        elif item.kind == "directive":
            d = item.payload
            if d["kind"] == "check":
                out.directives.append(Directive(
                    "check", item.line,
                    [elab.term(d["term"], {}), elab.term(d["type"], {})]))
            elif d["kind"] == "normalize":
                out.directives.append(Directive(
                    "normalize", item.line, [elab.term(d["term"], {})]))
            else:
                out.directives.append(Directive(
                    "convert", item.line,
                    [elab.term(d["left"], {}), elab.term(d["right"], {})]))
    return out


def _apply_pragma(elab: Elaborator, out: LoadedFile, item: Item) -> None:
    p = item.payload
    if p["kind"] == "ind":
        _require_symbol(elab, p["name"], item)
        elab.sig.structure.ind[p["name"]] = frozenset(p["indices"])
    elif p["kind"] == "acc":
        _require_symbol(elab, p["name"], item)
        elab.sig.structure.acc[p["name"]] = frozenset(p["indices"])
    elif p["kind"] == "prec":
        _require_symbol(elab, p["left"], item)
        _require_symbol(elab, p["right"], item)
        if p["op"] == ">":
            elab.sig.precedence.add_gt(p["left"], p["right"])
        else:
            elab.sig.precedence.add_eq(p["left"], p["right"])
    elif p["kind"] == "assume_confluent":
        out.assume_confluent = True
    elif p["kind"] == "assume_terminating":
        out.assume_terminating = True
    elif p["kind"] == "non_algebraic":
        _require_symbol(elab, p["name"], item)
        out.non_algebraic = out.non_algebraic | {p["name"]}


def _require_symbol(elab: Elaborator, name: str, item: Item) -> None:
    if name not in elab.sig:
        raise ElabError("unbound-name",
                        f"line {item.line}: unknown symbol {name}")
