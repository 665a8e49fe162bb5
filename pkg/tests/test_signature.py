"""Symbol declarations, precedence, inductive structure bookkeeping."""

import pytest

from cac import Signature, STAR, Symb, arrow
from cac.terms import CacError, Sort


def base_sig():
    sig = Signature()
    sig.declare("o", 0, STAR)
    return sig


def test_declare_and_lookup():
    sig = base_sig()
    sig.declare("f", 1, arrow(Symb("o", ()), Symb("o", ())))
    d = sig.decls["f"]
    assert d.arity == 1
    assert d.sort == Sort.STAR
    assert d.output == Symb("o", ())


def test_declare_rejects_arity_beyond_products():
    sig = base_sig()
    with pytest.raises(CacError):
        sig.declare("f", 2, arrow(Symb("o", ()), Symb("o", ())))


def test_declare_rejects_duplicates():
    sig = base_sig()
    with pytest.raises(CacError):
        sig.declare("o", 0, STAR)


def test_predicate_symbols_have_box_sort():
    sig = base_sig()
    assert sig.decls["o"].sort == Sort.BOX


def test_default_precedence_edges():
    sig = base_sig()
    sig.declare("f", 1, arrow(Symb("o", ()), Symb("o", ())))
    # declared symbols sit above the symbols of their type
    assert sig.precedence.gt("f", "o")
    assert not sig.precedence.gt("o", "f")


def test_user_precedence_and_equivalence():
    sig = base_sig()
    sig.declare("f", 1, arrow(Symb("o", ()), Symb("o", ())))
    sig.declare("g", 1, arrow(Symb("o", ()), Symb("o", ())))
    sig.precedence.add_gt("f", "g")
    assert sig.precedence.gt("f", "g")
    assert not sig.precedence.gt("g", "f")
    sig.precedence.add_eq("f", "h")
    assert sig.precedence.eq("h", "f")
    assert sig.precedence.gt("h", "g")


def test_precedence_cycle_detection():
    sig = base_sig()
    sig.declare("f", 0, Symb("o", ()))
    sig.declare("g", 0, Symb("o", ()))
    sig.precedence.add_gt("f", "g")
    sig.precedence.add_gt("g", "f")
    assert sig.precedence.find_cycle() is not None


def test_constructors_of_includes_non_free_symbols(intf):
    sig = intf.signature
    names = set(sig.constructors_of("int"))
    # [PAPER] constructors need not be free: defined symbols with an
    # int-valued output count as constructors of int.
    assert {"0", "s", "p", "plus", "times"} <= names


def test_free_and_defined(intf):
    free, defined = intf.signature.free_and_defined(intf.rules)
    assert defined == frozenset({"s", "p", "plus", "times"})
    assert "0" in free and "int" in free


def test_constructor_target(app):
    sig = app.signature
    assert sig.constructor_target("nil") == "list"
    assert sig.constructor_target("cons") == "list"
    assert sig.constructor_target("list") is None
