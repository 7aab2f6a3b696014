import re

import pytest

from feq.emit import (
    LOGIC,
    all_queries,
    emit_check,
    emit_find,
    emit_prove,
    emit_template_verification,
    emit_uniqueness,
    emit_uniteq,
    read_sexprs,
    to_text,
    uniteq_eligibility,
)
from feq.errors import NotUnitEquational, ParseError
from feq.parser import parse_problem
from feq.qe import eliminate
from feq.solved import to_solved_form
from feq.template import Kind, Template, Variant, inline


def squash(text):
    return re.sub(r"\s+", " ", text).replace("( ", "(").replace(" )", ")").strip()


def solved(p, kind):
    t = Template.of(kind, avoid=p.variables())
    c = eliminate(inline(p, t), p.variables())
    return t, to_solved_form(c.formulas(), t.coefficients)


def every_query(corpus):
    out = []
    for p in corpus.values():
        out.extend(all_queries(p))
        out.extend(all_queries(p, inline_check=True)[2:])
        for kind in Kind:
            for variant in Variant:
                out.append(emit_template_verification(p, kind, variant))
    for name, kind in [("Eq1", Kind.LINEAR), ("U3", Kind.LINEAR), ("U91", Kind.LINEAR), ("C1", Kind.MONOMIAL_QUADRATIC), ("U25", Kind.MONOMIAL_LINEAR)]:
        t, sf = solved(corpus[name], kind)
        out.append(emit_uniqueness(corpus[name], sf, t))
    return out


def test_all_queries_reparse(corpus):
    for q in every_query(corpus):
        parsed = read_sexprs(q.text)
        assert parsed == list(q.commands), q.filename
        assert "".join(to_text(c) + "\n" for c in parsed) in q.text


def test_query_shape(corpus):
    for q in every_query(corpus):
        cmds = q.commands
        assert cmds[0] == ["set-logic", LOGIC]
        assert sum(1 for c in cmds if c == ["check-sat"]) == 1
        assert cmds[-1] == ["check-sat"]
        status = [c for c in cmds if c[0] == "set-info"][0][2]
        assert status == ("sat" if q.kind == "find" else "unsat") == q.expected


def test_emission_is_deterministic(corpus):
    first = [q.text for q in every_query(corpus)]
    second = [q.text for q in every_query(corpus)]
    assert first == second


EQ1_SPEC = "(forall ((x Real) (y Real)) (= (f (+ x y)) (+ (* x (f y)) (* y (f x)))))"


def test_eq1_find(corpus):
    q = emit_find(corpus["Eq1"])
    assert q.filename == "Eq1.find.smt2"
    assert squash(f"(assert {EQ1_SPEC})") in squash(q.text)
    assert "(declare-fun f (Real) Real)" in q.text


def test_eq1_prove(corpus):
    text = squash(emit_prove(corpus["Eq1"]).text)
    assert squash(f"(assert {EQ1_SPEC})") in text
    assert "(assert (exists ((x Real)) (not (= (f x) 0.0))))" in text


def test_eq1_check(corpus):
    q = emit_check(corpus["Eq1"], corpus["Eq1"].solutions[0])
    text = squash(q.text)
    assert q.filename == "Eq1.check1.smt2"
    assert "(assert (forall ((x Real)) (= (f x) 0.0)))" in text
    assert "(assert (exists ((x Real) (y Real)) (not (= (f (+ x y)) (+ (* x (f y)) (* y (f x)))))))" in text


def test_check_declares_parameters(corpus):
    text = emit_check(corpus["U3"], corpus["U3"].solutions[0]).text
    assert "(declare-const b Real)" in text
    assert "(assert (forall ((x Real)) (= (f x) (+ x b))))" in text


def test_prove_quantifies_parameters(corpus):
    text = emit_prove(corpus["U3"]).text
    assert "(forall ((b Real)) (exists ((x Real)) (not (= (f x) (+ x b)))))" in text


def test_inline_check_removes_f(corpus):
    q = emit_check(corpus["C1"], corpus["C1"].solutions[0], inline=True)
    assert "declare-fun" not in q.text and "(f " not in q.text


def test_tv_quadratic_second(corpus):
    q = emit_template_verification(corpus["Eq1"], Kind.QUADRATIC, Variant.SECOND)
    assert q.filename == "Eq1.quad.second.tv.smt2"
    assert "(declare-const w Real)" in q.text
    assert "(* 2.0 (f w))" in q.text
    assert "(+ (f 1.0) (f (- 1.0)))" in q.text


def test_tv_constant_first(corpus):
    q = emit_template_verification(corpus["U24"], Kind.CONSTANT, Variant.FIRST)
    assert "(assert (forall ((c Real)) (exists ((x Real)) (not (= (f x) c)))))" in q.text


def test_tv_u91_linear_second(corpus):
    q = emit_template_verification(corpus["U91"], Kind.LINEAR, Variant.SECOND)
    assert "(assert (not (= (f w) (+ (* (+ (f 1.0) (- (f 0.0))) w) (f 0.0)))))" in q.text


def test_uniqueness_c1(corpus):
    t, sf = solved(corpus["C1"], Kind.MONOMIAL_QUADRATIC)
    q = emit_uniqueness(corpus["C1"], sf, t)
    assert q.filename == "C1.unique.smt2"
    assert "(assert (exists ((x Real)) (not (= (f x) (* x x)))))" in q.text


def test_uniqueness_u3_parameterized(corpus):
    t, sf = solved(corpus["U3"], Kind.LINEAR)
    q = emit_uniqueness(corpus["U3"], sf, t)
    assert "(assert (forall ((b Real)) (exists ((x Real)) (not (= (f x) (+ x b))))))" in q.text


def test_uniqueness_matches_prove_for_eq1(corpus):
    t, sf = solved(corpus["Eq1"], Kind.LINEAR)
    unique = emit_uniqueness(corpus["Eq1"], sf, t)
    prove = emit_prove(corpus["Eq1"])
    asserts = lambda q: [c for c in q.commands if c[0] == "assert"]  # noqa: E731
    assert asserts(unique) == asserts(prove)


def test_uniqueness_of_empty_solved_form(corpus):
    t, sf = solved(corpus["U91"], Kind.CONSTANT)
    assert sf.is_bottom
    assert emit_uniqueness(corpus["U91"], sf, t) is None


def test_reader_handles_comments_strings_and_quoted_symbols():
    got = read_sexprs('; note\n(set-info :source "a ""q"" (x)") (declare-const |a b| Real)')
    assert got == [["set-info", ":source", '"a ""q"" (x)"'], ["declare-const", "|a b|", "Real"]]
    with pytest.raises(ParseError):
        read_sexprs("(a (b)")
    with pytest.raises(ParseError):
        read_sexprs("a)")


def test_rational_literals():
    p = parse_problem("problem H\nassert forall x . f(x) = 1/2*x - 3\n")
    text = emit_find(p).text
    assert "(/ 1.0 2.0)" in text and "(- 3.0)" in text


# -- unit equality -------------------------------------------------------------


def test_uniteq_eligibility(corpus):
    assert uniteq_eligibility(corpus["U25"]) is None
    assert uniteq_eligibility(corpus["U87"]) is None
    assert uniteq_eligibility(corpus["U2"]) == "order side-condition"
    with pytest.raises(NotUnitEquational, match="order side-condition"):
        emit_uniteq(corpus["U2"], Kind.LINEAR)


def test_uniteq_rejects_fractions():
    p = parse_problem("problem H\nassert forall x . f(x) = 1/2*x\n")
    with pytest.raises(NotUnitEquational):
        emit_uniteq(p, Kind.LINEAR)


def test_uniteq_u25(corpus):
    task = emit_uniteq(corpus["U25"], Kind.MONOMIAL_LINEAR)
    tptp = task.to_tptp()
    assert task.filename == "U25.mlinear.p"
    assert "cnf(hypothesis_1, hypothesis, f(plus(times(X,f(X)),f(Y))) = plus(Y,times(f(X),f(X))))." in tptp
    assert "cnf(goal, negated_conjecture, f(d) != times(f(one),d))." in tptp
    assert len(task.axioms) == 8


def test_uniteq_u87_and_linear_goal(corpus):
    task = emit_uniteq(corpus["U87"], Kind.MONOMIAL_LINEAR)
    assert "f(d) != times(f(one),d)" in task.to_tptp()
    linear = emit_uniteq(corpus["U87"], Kind.LINEAR).to_tptp()
    assert "f(d) != plus(times(plus(f(one),neg(f(zero))),d),f(zero))" in linear


def test_uniteq_integers_as_sums(corpus):
    tptp = emit_uniteq(corpus["U91"], Kind.LINEAR).to_tptp()
    # U91 has the literal 2
    assert "plus(one,one)" in tptp


def test_tptp_clauses_are_unit_equations(corpus):
    for name in ("U25", "U87", "U91", "C1", "Eq1"):
        for kind in Kind:
            for line in emit_uniteq(corpus[name], kind).to_tptp().splitlines():
                if line.startswith("cnf("):
                    assert line.endswith(").")
                    assert line.count("=") == 1
                    assert line.count("(") == line.count(")")


def test_legacy_format(corpus):
    text = emit_uniteq(corpus["U25"], Kind.MONOMIAL_LINEAR).to_legacy()
    for section in ("NAME", "MODE", "SORTS", "SIGNATURE", "ORDERING", "VARIABLES", "EQUATIONS", "CONCLUSION"):
        assert re.search(rf"^{section}\b", text, re.MULTILINE), section
    assert "CONCLUSION  f(d) = times(f(one),d)" in text
