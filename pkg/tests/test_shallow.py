"""Skeleton checking: decidable arity and shape errors."""

import textwrap

import pytest

from dtf.core import BOOL, BaseApp, Name, NameKind, Pi
from dtf.shallow import Arrow, Base, SBool, check_shallow, skeletonize
from dtf.syntax import Problem, parse_file, parse_problem


def _nat() -> BaseApp:
    return BaseApp(Name("nat", NameKind.TYPE))


def _vec(*args) -> BaseApp:
    return BaseApp(Name("vec", NameKind.TYPE), tuple(args))


X = Name("X", NameKind.VAR)


def test_skeletonize_drops_term_arguments():
    from dtf.core import Const

    zero = Const(Name("zero", NameKind.CONST))
    assert skeletonize(_vec(zero)) == Base(Name("vec", NameKind.TYPE))


def test_skeletonize_flattens_pi():
    ty = Pi(X, _nat(), _vec())
    assert skeletonize(ty) == Arrow(Base(_nat().head), Base(_vec().head))
    assert skeletonize(BOOL) == SBool()


def test_simple_type_strings():
    a = Arrow(Arrow(Base(_nat().head), SBool()), Base(_nat().head))
    assert str(a) == "(nat > $o) > nat"


def check(text: str):
    problem = parse_problem(textwrap.dedent(text))
    assert isinstance(problem, Problem), [d.message for d in problem]
    return check_shallow(problem)


def test_corpus_positives_pass(corpus_dir):
    for path in sorted(corpus_dir.glob("*.p")):
        problem = parse_file(str(path))
        assert isinstance(problem, Problem), path
        assert check_shallow(problem) == [], path


# expected line of the first diagnostic in each negative file
NEGATIVE_LINES = {
    "neg_arity_missing.p": 5,
    "neg_arity_extra.p": 5,
    "neg_app_mismatch.p": 4,
    "neg_eq_mismatch.p": 6,
    "neg_head_mismatch.p": 8,
    "neg_not_bool.p": 4,
    "neg_poly_const.p": 2,
    "neg_poly_type.p": 3,
}


@pytest.mark.parametrize("name,line", sorted(NEGATIVE_LINES.items()))
def test_negative_files_fail_with_position(negative_dir, name, line):
    problem = parse_file(str(negative_dir / name))
    assert isinstance(problem, Problem), f"{name} should parse"
    diags = check_shallow(problem)
    assert diags, f"{name} should fail the shallow check"
    first = diags[0]
    assert first.span is not None and first.span.line == line, first.format()
    assert first.path and first.path.endswith(name)


def test_arity_message():
    diags = check("""
        thf(nat_type, type, nat: $tType).
        thf(zero_type, type, zero: nat).
        thf(vec_type, type, vec: nat > $tType).
        thf(bad_type, type, v: vec @ zero @ zero).
    """)
    assert any("expects 1 argument, got 2" in d.message for d in diags)


def test_type_argument_skeleton_mismatch():
    diags = check("""
        thf(nat_type, type, nat: $tType).
        thf(elem_type, type, elem: $tType).
        thf(e_type, type, e: elem).
        thf(vec_type, type, vec: nat > $tType).
        thf(bad_type, type, v: vec @ e).
    """)
    assert any("argument 1 of type 'vec'" in d.message for d in diags)


def test_equation_skeleton_mismatch_message():
    diags = check("""
        thf(nat_type, type, nat: $tType).
        thf(zero_type, type, zero: nat).
        thf(f_type, type, f: nat > nat).
        thf(bad, axiom, f = zero).
    """)
    assert any("different skeletons: nat > nat vs nat" in d.message for d in diags)


def test_binder_body_must_be_bool():
    diags = check("""
        thf(nat_type, type, nat: $tType).
        thf(zero_type, type, zero: nat).
        thf(bad, axiom, ! [X: nat]: (X)).
    """)
    assert any("$o" in d.message for d in diags)


def test_connective_operands_must_be_bool():
    diags = check("""
        thf(nat_type, type, nat: $tType).
        thf(zero_type, type, zero: nat).
        thf(q_type, type, q: $o).
        thf(bad, axiom, q & zero).
    """)
    assert any("connective operand" in d.message for d in diags)


def test_choice_skeleton_is_domain():
    diags = check("""
        thf(nat_type, type, nat: $tType).
        thf(zero_type, type, zero: nat).
        thf(ok, axiom, (@+ [X: nat]: (X = zero)) = zero).
    """)
    assert diags == []


def test_lambda_skeleton():
    diags = check("""
        thf(nat_type, type, nat: $tType).
        thf(zero_type, type, zero: nat).
        thf(f_type, type, f: nat > nat).
        thf(ok, axiom, ((^ [X: nat]: (X)) @ zero) = (f @ zero)).
    """)
    assert diags == []


def test_errors_do_not_cascade_per_formula():
    diags = check("""
        thf(nat_type, type, nat: $tType).
        thf(zero_type, type, zero: nat).
        thf(bad1, axiom, zero).
        thf(bad2, axiom, zero = (zero @ zero)).
    """)
    # both formulae report, independently
    lines = {d.span.line for d in diags if d.span}
    assert len(lines) >= 2
