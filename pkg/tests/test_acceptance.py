"""Acceptance criteria: one test per criterion, each printing a single
pass/fail line and enforcing its runtime bound."""

import json
import time

from cac import (ConfluenceLevel, Outcome, OverallVerdict, Symb,
                 check_admissible, check_inductive_structure,
                 check_type_preservation, check_well_formed, cc_check,
                 critical_pairs, joinable, left_linear, load, normalize,
                 satisfies_general_schema, system_properties)
from tests.conftest import CORPUS, corpus_source


def _report(num, ok, label):
    print(f"\nacceptance {num}: {'PASS' if ok else 'FAIL'} — {label}")
    assert ok, label


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def test_acceptance_1_list_append():
    with Timer() as tm:
        lf = load(corpus_source("app"))
        ok = True
        for r in lf.rules:
            conds = check_type_preservation(r, lf.signature, lf.rules)
            ok &= all(conds[k].outcome == Outcome.PASS
                      for k in ("s1", "s2", "s3"))
            ok &= conds["s4"].outcome == Outcome.PASS_SUFFICIENT
            ok &= conds["s5"].outcome == Outcome.PASS_SUFFICIENT
            ok &= left_linear(r)
            ok &= check_well_formed(r, lf.signature).ok
            ok &= satisfies_general_schema(r, lf.signature, lf.rules).ok
        rule2 = next(r for r in lf.rules if r.name == "rule2")
        deriv = cc_check(rule2, lf.signature, lf.rules)
        ok &= any("⟨cons(A', x, l), list(A)⟩ > ⟨l, list(A)⟩" in n
                  for n in deriv.notes())
    ok &= tm.elapsed < 1.0
    _report(1, ok, "append rules: exact S1-S3, sufficient S4-S5, "
                   "well-formed, schema-compliant, decreasing recursive "
                   f"call witnessed ({tm.elapsed:.2f}s)")


def test_acceptance_2_propositional_system():
    with Timer() as tm:
        lf = load(corpus_source("ndm_prop"))
        gset = frozenset(lf.signature.defined_predicate_symbols(lf.rules))
        props = system_properties(gset, lf.rules, lf.signature, lf.rules,
                                  which=("algebraic", "non_duplicating",
                                         "primitive"))
        ok = (props.algebraic.holds and props.non_duplicating.holds
              and props.primitive.holds)
        ok &= all(left_linear(r) for r in lf.rules)
        cps = critical_pairs(lf.rules)
        ok &= len(cps) > 0
        ok &= all(joinable(cp.left_reduct, cp.right_reduct, lf.rules,
                           fuel=100) for cp in cps)
        report = check_admissible(lf.signature, lf.rules)
        ok &= report.a1.level == ConfluenceLevel.NEWMAN
        ok &= report.a4_sn.status == "HOLDS"
        ok &= all(f"rule{i}" in report.a4_sn.witness and ">rpo" in
                  report.a4_sn.witness for i in range(1, 9))
        ok &= report.overall == OverallVerdict.ADMISSIBLE
        ok &= report.assertions == []
    ok &= tm.elapsed < 1.0
    _report(2, ok, "connective system: algebraic, non-duplicating, "
                   "primitive, left-linear; all critical pairs joined; "
                   "RPO termination; ADMISSIBLE with zero assertions "
                   f"({tm.elapsed:.2f}s)")


def test_acceptance_3_integer_constructors():
    with Timer() as tm:
        lf = load(corpus_source("int"))
        sp_rules = [r for r in lf.rules if r.head_name() in ("s", "p")]
        cps = critical_pairs(sp_rules)
        ok = len(cps) == 2
        ok &= all(joinable(cp.left_reduct, cp.right_reduct, lf.rules)
                  for cp in cps)
        t = Symb("p", (Symb("s", (Symb("p", (Symb("s", (Symb("0", ()),)),)),)),))
        ok &= normalize(t, lf.rules) == Symb("0", ())
        ok &= {"plus", "times"} <= set(lf.signature.constructors_of("int"))
    ok &= tm.elapsed < 1.0
    _report(3, ok, "integer constructors: exactly 2 joinable critical "
                   "pairs, p(s(p(s(0)))) normalizes to 0, plus and times "
                   f"are constructors of int ({tm.elapsed:.2f}s)")


def _peano(n):
    t = Symb("zero", ())
    for _ in range(n):
        t = Symb("succ", (t,))
    return t


def test_acceptance_4_recursor_bundle():
    with Timer() as tm:
        lf = load(corpus_source("nat"))
        report = check_admissible(lf.signature, lf.rules)
        ok = report.overall == OverallVerdict.ADMISSIBLE
        ok &= report.a1.level == ConfluenceLevel.ORTHOGONAL
        ok &= report.a4_non_algebraic == frozenset({"WElim_nat"})
        ok &= report.a4_non_algebraic_props.safe.holds
        ok &= report.a4_non_algebraic_props.recursive.holds

        from cac.terms import Sort, Variable, Var, lam
        natt = Symb("nat", ())
        x = Variable.fresh("x", Sort.STAR)
        y = Variable.fresh("y", Sort.STAR)
        f_succ = lam(x, natt, lam(y, natt, Symb("succ", (Var(y),))))

        def add(m, n):
            return Symb("WElim_nat", (natt, _peano(n), f_succ, _peano(m)))

        ok &= normalize(add(2, 2), lf.rules) == _peano(4)
        # the recursor simulation agrees with ordinary addition on all
        # numerals up to 10
        for m in range(11):
            for n in range(11):
                ok &= normalize(add(m, n), lf.rules) == _peano(m + n)
    ok &= tm.elapsed < 2.0
    _report(4, ok, "generated recursor: bundle ADMISSIBLE (orthogonal, "
                   "safe+recursive), 2+2 computes to 4, simulation agrees "
                   f"with addition on numerals <= 10 ({tm.elapsed:.2f}s)")


def test_acceptance_5_negative_controls():
    lf = load(corpus_source("listh"))
    violations = check_inductive_structure(lf.signature, lf.rules)
    ok = any(v.condition == "I6" and v.constructor == "consh"
             for v in violations)

    lf2 = load(corpus_source("neg_schema"))
    (r2,) = lf2.rules
    v2 = satisfies_general_schema(r2, lf2.signature, lf2.rules)
    ok &= not v2.ok and v2.failure is not None
    rep2 = check_admissible(lf2.signature, lf2.rules)
    ok &= rep2.overall == OverallVerdict.REJECTED
    ok &= any("not smaller" in ts["witness"]
              for ts in rep2.to_dict()["a4"]
              ["non_algebraic_properties"].values())

    lf3 = load(corpus_source("neg_dup"))
    props = system_properties(frozenset({"f"}), lf3.rules, lf3.signature,
                              lf3.rules, which=("non_duplicating",))
    ok &= props.non_duplicating.status == "FAILS"
    ok &= "duplicates x" in props.non_duplicating.witness
    rep3 = check_admissible(lf3.signature, lf3.rules)
    ok &= rep3.overall == OverallVerdict.REJECTED
    ok &= "duplicates x" in rep3.to_dict()["a4"]["demotions"]["f"]
    _report(5, ok, "negative controls: I6 violation, schema failure, "
                   "duplication — each with a concrete witness")


def test_acceptance_6_property_suites():
    with Timer() as tm:
        import subprocess
        import sys
        proc = subprocess.run(
            [sys.executable, "-m", "pytest", "tests/test_properties.py",
             "-q", "--no-header"],
            capture_output=True, text=True)
        ok = proc.returncode == 0
    ok &= tm.elapsed < 60.0
    _report(6, ok, "five randomized property suites (500 seed-fixed cases "
                   f"each) all pass ({tm.elapsed:.2f}s)")


def test_acceptance_7_determinism():
    ok = True
    for p in sorted(CORPUS.glob("*.cac")):
        reports = []
        for _ in range(2):
            lf = load(p.read_text(encoding="utf-8"))
            report = check_admissible(lf.signature, lf.rules,
                                      assume_confluent=lf.assume_confluent,
                                      assume_terminating=lf.assume_terminating,
                                      force_non_algebraic=lf.non_algebraic)
            reports.append(json.dumps(report.to_dict(), indent=2,
                                      sort_keys=True).encode())
        ok &= reports[0] == reports[1]
    _report(7, ok, "admissibility reports are byte-identical across runs "
                   "on every corpus file")
