"""Lexing, parsing, and elaboration."""

import textwrap

from dtf.core import (
    And,
    App,
    BaseApp,
    BoolType,
    Choice,
    Const,
    Eq,
    Exists,
    Forall,
    Implies,
    Lam,
    Not,
    Pi,
    Var,
    alpha_equal,
)
from dtf.syntax import Problem, parse_file, parse_problem

PRELUDE = """
thf(nat_type, type, nat: $tType).
thf(zero_type, type, zero: nat).
thf(suc_type, type, suc: nat > nat).
thf(p_type, type, p: nat > $o).
thf(q_type, type, q: $o).
thf(r_type, type, r: $o).
"""


def parse_ok(text: str) -> Problem:
    result = parse_problem(textwrap.dedent(text))
    assert isinstance(result, Problem), [d.message for d in result]
    return result


def parse_bad(text: str):
    result = parse_problem(textwrap.dedent(text))
    assert isinstance(result, list) and result, "expected diagnostics"
    return result


def only_axiom(problem: Problem):
    return problem.theory.axioms()[-1].formula


# -- basic shapes ---------------------------------------------------------------


def test_parse_worked_example_shape(corpus_dir):
    problem = parse_file(str(corpus_dir / "list_append.p"))
    assert isinstance(problem, Problem)
    counts = problem.role_counts()
    assert counts == {"type": 9, "axiom": 3, "conjecture": 1}
    assert problem.conjecture_name == "list_app_assoc_base"
    assert not problem.polymorphic
    list_decl = problem.theory.type_decl("list")
    assert list_decl is not None and len(list_decl.telescope) == 1
    cons = problem.theory.const_decl("cons")
    assert isinstance(cons.ty, Pi)
    assert cons.ty.binder.text == "N"


def test_application_is_left_nested():
    problem = parse_ok(PRELUDE + "thf(a, axiom, p @ (suc @ zero)).")
    f = only_axiom(problem)
    assert f == App(Const(f.fun.name), App(Const(f.arg.fun.name), Const(f.arg.arg.name)))


def test_binder_list_sugar():
    problem = parse_ok(PRELUDE + "thf(a, axiom, ! [X: nat, Y: nat]: (p @ X)).")
    f = only_axiom(problem)
    assert isinstance(f, Forall) and isinstance(f.body, Forall)
    assert f.binder.text == "X" and f.body.binder.text == "Y"


def test_lambda_and_choice():
    problem = parse_ok(PRELUDE + "thf(a, axiom, p @ ((^ [X: nat]: (X)) @ zero)).")
    lam = only_axiom(problem).arg.fun
    assert isinstance(lam, Lam)
    problem = parse_ok(PRELUDE + "thf(a, axiom, p @ (@+ [X: nat]: (p @ X))).")
    assert isinstance(only_axiom(problem).arg, Choice)


# -- connective sugar -------------------------------------------------------------


def test_iff_desugars_to_two_implications():
    f = only_axiom(parse_ok(PRELUDE + "thf(a, axiom, q <=> r)."))
    assert isinstance(f, And)
    assert isinstance(f.left, Implies) and isinstance(f.right, Implies)
    assert f.left.left == f.right.right  # q


def test_reverse_implication_swaps_sides():
    f = only_axiom(parse_ok(PRELUDE + "thf(a, axiom, q <= r)."))
    g = only_axiom(parse_ok(PRELUDE + "thf(a, axiom, r => q)."))
    assert alpha_equal(f, g)


def test_xor_is_negated_iff():
    f = only_axiom(parse_ok(PRELUDE + "thf(a, axiom, q <~> r)."))
    assert isinstance(f, Not) and isinstance(f.arg, And)


def test_disequality_is_negated_equality():
    f = only_axiom(parse_ok(PRELUDE + "thf(a, axiom, zero != (suc @ zero))."))
    assert isinstance(f, Not) and isinstance(f.arg, Eq)


def test_truth_constants():
    f = only_axiom(parse_ok(PRELUDE + "thf(a, axiom, q <=> $true)."))
    assert isinstance(f, And)


def test_mixed_connectives_need_parens():
    diags = parse_bad(PRELUDE + "thf(a, axiom, q & r | q).")
    assert any("parentheses" in d.message for d in diags)


def test_chained_implication_needs_parens():
    diags = parse_bad(PRELUDE + "thf(a, axiom, q => r => q).")
    assert any("parentheses" in d.message for d in diags)


def test_and_chain_is_allowed():
    f = only_axiom(parse_ok(PRELUDE + "thf(a, axiom, q & r & q)."))
    assert isinstance(f, And) and isinstance(f.left, And)


# -- declarations -------------------------------------------------------------------


def test_dependent_type_declaration_telescope():
    problem = parse_ok("""
        thf(nat_type, type, nat: $tType).
        thf(vec_type, type, vec: nat > nat > $tType).
    """)
    decl = problem.theory.type_decl("vec")
    assert len(decl.telescope) == 2
    assert all(ty == BaseApp(decl.telescope[0][1].head) for _, ty in decl.telescope)


def test_pi_binder_declaration():
    problem = parse_ok("""
        thf(nat_type, type, nat: $tType).
        thf(vec_type, type, vec: nat > $tType).
        thf(f_type, type, f: !> [N: nat]: ((vec @ N) > nat)).
    """)
    f = problem.theory.const_decl("f")
    assert isinstance(f.ty, Pi) and f.ty.binder.text == "N"
    inner = f.ty.codomain
    assert isinstance(inner, Pi)
    assert inner.domain == BaseApp(problem.theory.type_decl("vec").name, (Var(f.ty.binder),))


def test_parenthesized_typing():
    problem = parse_ok("thf(t, type, (nat: $tType)). thf(c, type, (zero: nat)).")
    assert problem.theory.type_decl("nat") is not None
    assert problem.theory.const_decl("zero") is not None


def test_duplicate_declaration_rejected():
    diags = parse_bad("""
        thf(t1, type, nat: $tType).
        thf(t2, type, nat: $tType).
    """)
    assert any("duplicate" in d.message for d in diags)


def test_two_conjectures_rejected():
    diags = parse_bad(PRELUDE + """
        thf(c1, conjecture, q).
        thf(c2, conjecture, r).
    """)
    assert any("one conjecture" in d.message for d in diags)


def test_unknown_role_rejected():
    diags = parse_bad(PRELUDE + "thf(a, guess, q).")
    assert any("role" in d.message for d in diags)


# -- errors with positions -------------------------------------------------------------


def test_unknown_symbol_has_position():
    diags = parse_bad(PRELUDE + "thf(a, axiom, p @ missing).")
    d = next(d for d in diags if "missing" in d.message)
    assert d.span is not None and d.span.line == 8  # PRELUDE is 7 lines incl. blank


def test_unbound_variable_rejected():
    diags = parse_bad(PRELUDE + "thf(a, axiom, p @ X).")
    assert any("unbound variable 'X'" in d.message for d in diags)


def test_description_binder_rejected():
    diags = parse_bad(PRELUDE + "thf(a, axiom, p @ (@- [X: nat]: (p @ X))).")
    assert any("description not supported" in d.message for d in diags)


def test_numbers_rejected():
    diags = parse_bad(PRELUDE + "thf(a, axiom, p @ 42).")
    assert any("number" in d.message for d in diags)


def test_unsupported_dollar_symbol_rejected():
    diags = parse_bad(PRELUDE + "thf(a, axiom, p @ $sum).")
    assert any("$-symbol" in d.message for d in diags)


def test_arrow_in_formula_rejected():
    diags = parse_bad(PRELUDE + "thf(a, axiom, q > r).")
    assert any("arrow" in d.message for d in diags)


def test_parse_error_recovery_reports_multiple():
    diags = parse_bad(PRELUDE + """
        thf(a, axiom, p @ missing_one).
        thf(b, axiom, p @ missing_two).
    """)
    assert len(diags) >= 2


# -- polymorphism flag ---------------------------------------------------------------


def test_rank1_binder_sets_polymorphic_flag():
    problem = parse_ok("thf(id_type, type, id: !> [A: $tType]: (A > A)).")
    assert problem.polymorphic


def test_mixed_binder_order_rejected():
    # all-type-variable binders are fine ...
    ok = parse_ok("thf(w_type, type, w: !> [N: $tType, A: $tType]: (A > N)).")
    assert ok.polymorphic
    # ... but a type variable after a term variable is not
    diags = parse_bad(
        "thf(nat_type, type, nat: $tType).\n"
        "thf(w_type, type, w: !> [N: nat, A: $tType]: (A > nat > $tType)).\n")
    assert any("precede" in d.message for d in diags)


def test_prenex_only_pi_binder():
    diags = parse_bad(
        "thf(nat_type, type, nat: $tType).\n"
        "thf(f_type, type, f: nat > (!> [N: nat]: nat)).\n")
    assert any("prenex" in d.message for d in diags)


# -- binder hygiene ---------------------------------------------------------------------


def test_shadowed_binders_are_freshened():
    problem = parse_ok(PRELUDE +
                       "thf(a, axiom, ! [X: nat]: ((p @ X) & (! [X: nat]: (p @ X)))).")
    outer = only_axiom(problem)
    inner = outer.body.right
    assert isinstance(outer, Forall) and isinstance(inner, Forall)
    assert outer.binder.text != inner.binder.text
    # each occurrence refers to its own binder
    assert outer.body.left.arg == Var(outer.binder)
    assert inner.body.arg == Var(inner.binder)


def test_sibling_binders_keep_their_names_across_formulae():
    problem = parse_ok(PRELUDE + """
        thf(a1, axiom, ! [N: nat]: (p @ N)).
        thf(a2, axiom, ! [N: nat]: (p @ N)).
    """)
    a1, a2 = problem.theory.axioms()[-2:]
    assert a1.formula.binder.text == "N"
    assert a2.formula.binder.text == "N"


# -- equation annotations ------------------------------------------------------------------


def test_equation_annotation_from_left_side():
    problem = parse_ok(PRELUDE + "thf(a, axiom, (suc @ zero) = zero).")
    eq = only_axiom(problem)
    assert eq.at == BaseApp(problem.theory.type_decl("nat").name)


def test_equation_annotation_dependent():
    problem = parse_ok("""
        thf(nat_type, type, nat: $tType).
        thf(zero_type, type, zero: nat).
        thf(vec_type, type, vec: nat > $tType).
        thf(v_type, type, v: vec @ zero).
        thf(a, axiom, v = v).
    """)
    eq = only_axiom(problem)
    assert isinstance(eq.at, BaseApp) and eq.at.head.text == "vec"
    assert eq.at.args == (Const(problem.theory.const_decl("zero").name),)


def test_equation_annotation_bool():
    problem = parse_ok(PRELUDE + "thf(a, axiom, q = r).")
    assert isinstance(only_axiom(problem).at, BoolType)


# -- quoted atoms -----------------------------------------------------------------------


def test_quoted_atom_with_space():
    problem = parse_ok("""
        thf(t, type, nat: $tType).
        thf(z, type, 'my zero': nat).
        thf(a, axiom, 'my zero' = 'my zero').
    """)
    assert problem.theory.const_decl("my zero") is not None


def test_quoted_atom_same_as_bare():
    problem = parse_ok("""
        thf(t, type, nat: $tType).
        thf(z, type, 'zero': nat).
        thf(a, axiom, zero = 'zero').
    """)
    eq = only_axiom(problem)
    assert eq.left == eq.right


def test_quoted_atom_escapes():
    problem = parse_ok("""
        thf(t, type, nat: $tType).
        thf(z, type, 'it\\'s': nat).
        thf(a, axiom, 'it\\'s' = 'it\\'s').
    """)
    assert problem.theory.const_decl("it's") is not None


# -- includes ----------------------------------------------------------------------------


def test_include_splices_formulae(tmp_path):
    (tmp_path / "base.ax").write_text(
        "thf(nat_type, type, nat: $tType).\n"
        "thf(zero_type, type, zero: nat).\n")
    main = tmp_path / "main.p"
    main.write_text(
        "include('base.ax').\n"
        "thf(a, axiom, zero = zero).\n")
    problem = parse_file(str(main))
    assert isinstance(problem, Problem)
    assert problem.theory.type_decl("nat") is not None
    assert len(problem.theory.axioms()) == 1


def test_include_cycle_detected(tmp_path):
    a = tmp_path / "a.p"
    b = tmp_path / "b.ax"
    a.write_text("include('b.ax').\n")
    b.write_text("include('a.p').\n")
    diags = parse_file(str(a))
    assert isinstance(diags, list)
    assert any("circular include" in d.message for d in diags)


def test_include_missing_file(tmp_path):
    main = tmp_path / "main.p"
    main.write_text("include('nope.ax').\n")
    diags = parse_file(str(main))
    assert isinstance(diags, list)
    assert any("cannot read include" in d.message for d in diags)


def test_include_selection_warns(tmp_path):
    (tmp_path / "base.ax").write_text("thf(nat_type, type, nat: $tType).\n")
    main = tmp_path / "main.p"
    main.write_text("include('base.ax', [nat_type]).\n")
    problem = parse_file(str(main))
    assert isinstance(problem, Problem)
    assert any("selection" in w.message for w in problem.warnings)


# -- comments and annotations ------------------------------------------------------------------


def test_comments_are_skipped():
    problem = parse_ok("""
        % a line comment
        /* a block
           comment */
        thf(t, type, nat: $tType). % trailing
    """)
    assert problem.theory.type_decl("nat") is not None


def test_source_annotations_are_preserved():
    problem = parse_ok(PRELUDE +
                       "thf(a, axiom, q, file('other.p', a), [useful]).")
    formula = [f for f in problem.formulae if f.name == "a"][0]
    assert formula.source == "file('other.p', a)"
    assert formula.useful_info == "[useful]"


def test_polymorphic_use_of_type_kind_flag():
    problem = parse_ok("thf(c_type, type, c: $tType > $o).")
    assert problem.polymorphic


def test_type_symbol_in_term_position_rejected():
    diags = parse_bad(PRELUDE + "thf(a, axiom, p @ nat).")
    assert any("type symbol" in d.message for d in diags)


def test_empty_input_is_a_problem_without_formulae():
    problem = parse_ok("% nothing here\n")
    assert problem.formulae == ()
    assert problem.conjecture is None


def test_exists_parses():
    f = only_axiom(parse_ok(PRELUDE + "thf(a, axiom, ? [X: nat]: (p @ X))."))
    assert isinstance(f, Exists)
