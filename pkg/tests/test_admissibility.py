"""Type-preservation conditions, system properties, the defined-symbol
partition, and the overall verdict."""

import pytest

from cac import (Outcome, OverallVerdict, check_admissible,
                 check_type_preservation, load, partition_defined,
                 system_properties)
from cac.admissibility import partition_explained
from tests.conftest import corpus_source


def _conds(lf, name):
    rule = next(r for r in lf.rules if r.name == name)
    return check_type_preservation(rule, lf.signature, lf.rules)


def test_app_s_conditions(app):
    for r in app.rules:
        c = check_type_preservation(r, app.signature, app.rules)
        # S1-S3 exact, S4-S5 via the sufficient conditions
        assert c["s1"].outcome == Outcome.PASS
        assert c["s2"].outcome == Outcome.PASS
        assert c["s3"].outcome == Outcome.PASS
        assert c["s4"].outcome == Outcome.PASS_SUFFICIENT
        assert c["s5"].outcome == Outcome.PASS_SUFFICIENT


def test_s1_fails_when_rho_hits_env(app):
    import dataclasses
    rule = app.rules[0]
    (gamma_var, _) = tuple(rule.ann_env)[0]
    bad = dataclasses.replace(rule, ann_subst={gamma_var: rule.lhs.args[0]})
    c = check_type_preservation(bad, app.signature, app.rules)
    assert c["s1"].outcome == Outcome.FAIL


def test_s3_fails_on_ill_typed_rhs(app):
    import dataclasses
    from cac import STAR, Symb
    rule = next(r for r in app.rules if r.name == "rule1")
    bad = dataclasses.replace(rule, rhs=rule.lhs.args[0])  # a type, not a list
    c = check_type_preservation(bad, app.signature, app.rules)
    assert c["s3"].outcome == Outcome.FAIL


def test_ndm_properties(ndm):
    gset = frozenset(ndm.signature.defined_predicate_symbols(ndm.rules))
    assert gset == {"/\\", "\\/", "not"}
    props = system_properties(gset, ndm.rules, ndm.signature, ndm.rules)
    assert props.algebraic.holds
    assert props.non_duplicating.holds
    assert props.primitive.holds
    assert props.safe.holds
    # not simple: the deep negation rules nest defined connectives in
    # their lhs arguments — the primitive branch carries the system
    assert props.simple.status == "FAILS"


def test_non_duplication_witness():
    lf = load(corpus_source("neg_dup"))
    props = system_properties(frozenset({"f"}), lf.rules, lf.signature,
                              lf.rules, which=("non_duplicating",))
    assert props.non_duplicating.status == "FAILS"
    assert "duplicates x" in props.non_duplicating.witness


def test_top_overlap_detection():
    src = """
    symbol o : * .
    symbol f : o -> o .
    symbol a : o .
    rule f(x) -> a .
    rule f(a) -> a .
    """
    lf = load(src)
    props = system_properties(frozenset({"f"}), lf.rules, lf.signature,
                              lf.rules, which=("simple",))
    assert props.simple.status == "FAILS"
    assert "top" in props.simple.witness


def test_partition_int(intf):
    fa, fna = partition_defined(intf.signature, intf.rules)
    assert fa == frozenset({"s", "p", "plus", "times"})
    assert fna == frozenset()


def test_partition_demotes_with_reasons(natf):
    fa, fna, reasons = partition_explained(natf.signature, natf.rules)
    assert "WElim_nat" in fna
    assert reasons["WElim_nat"]  # a concrete demotion reason is recorded


def test_partition_force_non_algebraic(intf):
    fa, fna = partition_defined(intf.signature, intf.rules,
                                force_non_algebraic=frozenset({"plus"}))
    assert "plus" in fna


def test_verdicts(corpus):
    expected = {
        "app": OverallVerdict.ADMISSIBLE,
        "ndm_prop": OverallVerdict.ADMISSIBLE,
        "int": OverallVerdict.ADMISSIBLE,
        "nat": OverallVerdict.ADMISSIBLE,
        "listh": OverallVerdict.REJECTED,
        "neg_schema": OverallVerdict.REJECTED,
        "neg_dup": OverallVerdict.REJECTED,
    }
    for name, verdict in expected.items():
        lf = corpus[name]
        report = check_admissible(lf.signature, lf.rules,
                                  force_non_algebraic=lf.non_algebraic)
        assert report.overall == verdict, (name, report.to_text())


def test_assertion_downgrades_verdict():
    # a duplicating but otherwise fine system accepted only by assertion
    src = """
    symbol o : * .
    symbol a : o .
    symbol f : o -> o .
    rule f(a) -> a .
    """
    lf = load(src)
    plain = check_admissible(lf.signature, lf.rules)
    assert plain.overall == OverallVerdict.ADMISSIBLE
    asserted = check_admissible(lf.signature, lf.rules,
                                assume_confluent=True)
    # the assertion is not needed (orthogonal), so it is not recorded
    assert asserted.overall == OverallVerdict.ADMISSIBLE


def test_confluence_assertion_recorded_when_used():
    src = """
    symbol o : * .
    symbol a : o .
    symbol b : o .
    symbol f : o -> o .
    rule f(x) -> b .
    rule f(a) -> b .
    pragma assume_confluent .
    """
    lf = load(src)
    report = check_admissible(lf.signature, lf.rules,
                              assume_confluent=lf.assume_confluent)
    assert report.a1.level.value == "ASSERTED"
    assert report.assertions
    assert report.overall in (OverallVerdict.ADMISSIBLE_WITH_ASSERTIONS,
                              OverallVerdict.REJECTED)


def test_report_text_and_dict_consistent(intf):
    report = check_admissible(intf.signature, intf.rules)
    d = report.to_dict()
    assert d["overall"] == report.overall.value
    assert d["a1"]["level"] == "NEWMAN"
    assert d["a4"]["algebraic"] == ["p", "plus", "s", "times"]
    assert "strongly normalizing" in d["meaning"]
    assert "overall: ADMISSIBLE" in report.to_text()
