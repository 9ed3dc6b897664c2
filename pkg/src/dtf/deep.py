"""Deep type checking: undecidable equalities become proof obligations.

Typing a dependently typed problem reduces to simple-type facts (already
covered by the shallow skeleton pass) plus equations between the term
arguments of base types.  This checker walks each declaration, compares
types up to beta-eta normalization and alpha-equivalence, and turns every
remaining equation into an Obligation: a goal in a typing context, plus a
closed formula obtained by discharging the context.

Obligations whose closed or open form matches a context assumption are
discharged by lookup and reported separately; the rest are residual and can
be exported as self-contained problems.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace

from .core import (
    BOOL,
    Assumption,
    Axiom,
    App,
    BaseApp,
    BoolType,
    Bottom,
    Choice,
    Const,
    ConstDecl,
    Context,
    Eq,
    Exists,
    Forall,
    Implies,
    And,
    Or,
    Lam,
    Not,
    NormalizationBudgetExceeded,
    Pi,
    Term,
    Theory,
    Top,
    Type,
    TypeDecl,
    Var,
    VarDecl,
    alpha_equal,
    beta_eta_normalize,
    free_vars,
    substitute_type,
)
from .diagnostics import Diagnostic, Span, error


@dataclass(frozen=True)
class Obligation:
    """A proof obligation produced while checking one formula."""

    label: str
    context: Context
    goal: Term
    origin: str
    formula: Term                 # closed form: context discharged into the goal
    theory_prefix: int            # how many leading theory declarations are visible
    source_span: Span | None = None
    discharged_by: str | None = None


@dataclass
class CheckReport:
    """Everything the deep checker found for one problem."""

    obligations: list = field(default_factory=list)   # residual
    discharged: list = field(default_factory=list)    # matched an assumption
    diagnostics: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.diagnostics


class _DeepError(Exception):
    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


def close_obligation(context: Context, goal: Term) -> Term:
    """Quantify a goal over its context.

    Unlabeled assumptions become premises; labeled ones are theory axioms
    and stay out of the formula.  Context variables not needed by the goal,
    a kept assumption, or the type of a kept variable are pruned.
    """
    entries = list(context.entries)
    kept_assumptions = [e for e in entries if isinstance(e, Assumption) and e.label is None]
    needed = set(free_vars(goal))
    for a in kept_assumptions:
        needed |= free_vars(a.formula)
    kept: list = []
    for entry in reversed(entries):
        if isinstance(entry, VarDecl):
            if entry.name.text in needed:
                kept.append(entry)
                needed |= free_vars(entry.ty)
    kept.reverse()

    body = goal
    for a in reversed(kept_assumptions):
        body = Implies(a.formula, body)
    for v in reversed(kept):
        body = Forall(v.name, v.ty, body)
    return body


class DeepChecker:
    """Checks formulae against a fixed theory, accumulating obligations."""

    def __init__(self, theory: Theory, path: str | None = None):
        self.theory = theory
        self.path = path
        self.obligations: list = []
        self.discharged: list = []
        self.diagnostics: list = []
        self._counter = 0
        self._theory_prefix = len(theory.decls)
        self._current_label = "formula"

    # -- plumbing -----------------------------------------------------------

    def fail(self, message: str, span: Span | None) -> _DeepError:
        return _DeepError(error(message, span, self.path))

    def _normalize(self, t, span: Span | None):
        try:
            return beta_eta_normalize(t)
        except NormalizationBudgetExceeded:
            raise self.fail("normalization budget exceeded", span)

    # -- types ----------------------------------------------------------------

    def wf_type(self, ctx: Context, ty: Type) -> None:
        if isinstance(ty, BoolType):
            return
        if isinstance(ty, BaseApp):
            decl = self.theory.type_decl(ty.head.text)
            if decl is None:
                raise self.fail(f"unknown type symbol {ty.head.text!r}", ty.span)
            if len(ty.args) != len(decl.telescope):
                raise self.fail(
                    f"type {ty.head.text!r} expects {len(decl.telescope)} "
                    f"argument{'s' if len(decl.telescope) != 1 else ''}, "
                    f"got {len(ty.args)}", ty.span)
            for i, arg in enumerate(ty.args):
                expected = _instantiate_telescope(decl.telescope, ty.args, i)
                self.check(ctx, arg, expected)
            return
        if isinstance(ty, Pi):
            self.wf_type(ctx, ty.domain)
            self.wf_type(ctx.push_var(ty.binder, ty.domain), ty.codomain)
            return
        raise self.fail(f"ill-formed type {ty!r}", getattr(ty, "span", None))

    def type_equal(self, ctx: Context, a: Type, b: Type, span: Span | None,
                   origin: str) -> None:
        """Require a and b equal, emitting obligations for term arguments."""
        a_n = self._normalize(a, span)
        b_n = self._normalize(b, span)
        if alpha_equal(a_n, b_n):
            return
        if isinstance(a_n, BaseApp) and isinstance(b_n, BaseApp):
            if a_n.head != b_n.head or len(a_n.args) != len(b_n.args):
                raise self.fail(
                    f"types differ: {_show_type(a_n)} vs {_show_type(b_n)}", span)
            decl = self.theory.type_decl(a_n.head.text)
            telescope = decl.telescope if decl is not None else ()
            for i, (s, t) in enumerate(zip(a_n.args, b_n.args)):
                s_n = self._normalize(s, span)
                t_n = self._normalize(t, span)
                if alpha_equal(s_n, t_n):
                    continue
                at = (_instantiate_telescope(telescope, a_n.args, i)
                      if i < len(telescope) else None)
                self.emit(ctx, Eq(s, t, at, span=span), origin, span)
            return
        if isinstance(a_n, Pi) and isinstance(b_n, Pi):
            self.type_equal(ctx, a_n.domain, b_n.domain, span, origin)
            cod_b = substitute_type(b_n.codomain, b_n.binder, Var(a_n.binder))
            self.type_equal(ctx.push_var(a_n.binder, a_n.domain),
                            a_n.codomain, cod_b, span, origin)
            return
        raise self.fail(f"types differ: {_show_type(a_n)} vs {_show_type(b_n)}", span)

    # -- terms ------------------------------------------------------------------

    def infer(self, ctx: Context, t: Term) -> Type:
        if isinstance(t, Var):
            ty = ctx.var_type(t.name.text)
            if ty is None:
                raise self.fail(f"unbound variable {t.name.text!r}", t.span)
            return ty
        if isinstance(t, Const):
            decl = self.theory.const_decl(t.name.text)
            if decl is None:
                raise self.fail(f"unknown constant {t.name.text!r}", t.span)
            return decl.ty
        if isinstance(t, App):
            fun_ty = self._normalize(self.infer(ctx, t.fun), t.span)
            if not isinstance(fun_ty, Pi):
                raise self.fail(
                    f"applied term has non-function type {_show_type(fun_ty)}", t.span)
            self.check(ctx, t.arg, fun_ty.domain)
            return substitute_type(fun_ty.codomain, fun_ty.binder, t.arg)
        if isinstance(t, Lam):
            self.wf_type(ctx, t.domain)
            body_ty = self.infer(ctx.push_var(t.binder, t.domain), t.body)
            return Pi(t.binder, t.domain, body_ty)
        if isinstance(t, (Forall, Exists)):
            self.wf_type(ctx, t.domain)
            self.check(ctx.push_var(t.binder, t.domain), t.body, BOOL)
            return BOOL
        if isinstance(t, Implies):
            self.check(ctx, t.left, BOOL)
            self.check(ctx.push_assumption(t.left), t.right, BOOL)
            return BOOL
        if isinstance(t, And):
            self.check(ctx, t.left, BOOL)
            self.check(ctx.push_assumption(t.left), t.right, BOOL)
            return BOOL
        if isinstance(t, Or):
            self.check(ctx, t.left, BOOL)
            self.check(ctx.push_assumption(Not(t.left)), t.right, BOOL)
            return BOOL
        if isinstance(t, Not):
            self.check(ctx, t.arg, BOOL)
            return BOOL
        if isinstance(t, Eq):
            left_ty = self.infer(ctx, t.left)
            right_ty = self.infer(ctx, t.right)
            self.type_equal(ctx, left_ty, right_ty, t.span,
                            "equation sides must have equal types")
            return BOOL
        if isinstance(t, Choice):
            self.wf_type(ctx, t.domain)
            self.check(ctx.push_var(t.binder, t.domain), t.body, BOOL)
            witness = Exists(t.binder, t.domain, t.body, span=t.span)
            self.emit(ctx, witness, "choice requires a provable witness", t.span)
            return t.domain
        if isinstance(t, (Top, Bottom)):
            return BOOL
        raise self.fail(f"cannot infer a type for {t!r}", getattr(t, "span", None))

    def check(self, ctx: Context, t: Term, expected: Type) -> None:
        inferred = self.infer(ctx, t)
        self.type_equal(ctx, inferred, expected, getattr(t, "span", None),
                        "inferred type must match the expected type")

    # -- obligations ---------------------------------------------------------------

    def emit(self, ctx: Context, goal: Term, origin: str, span: Span | None) -> None:
        self._counter += 1
        closed = close_obligation(ctx, goal)
        ob = Obligation(
            label=f"ob{self._counter}",
            context=ctx,
            goal=goal,
            origin=f"{origin} (while checking {self._current_label!r})",
            formula=closed,
            theory_prefix=self._theory_prefix,
            source_span=span,
        )
        matched = self._lookup(ctx, goal, closed, span)
        if matched is not None:
            self.discharged.append(replace(ob, discharged_by=matched))
        else:
            self.obligations.append(ob)

    def _lookup(self, ctx: Context, goal: Term, closed: Term,
                span: Span | None) -> str | None:
        """Discharge by assumption: open or closed form, up to normalization."""
        goal_n = self._normalize(goal, span)
        closed_n = self._normalize(closed, span)
        if isinstance(goal_n, Eq) and alpha_equal(goal_n.left, goal_n.right):
            return "reflexivity"
        for entry in ctx.entries:
            if not isinstance(entry, Assumption):
                continue
            form_n = self._normalize(entry.formula, span)
            if alpha_equal(form_n, goal_n) or alpha_equal(form_n, closed_n):
                return entry.label or "local assumption"
        return None

    # -- formula and problem entry points ----------------------------------------

    def check_formula(self, formula: Term, label: str = "formula",
                      context: Context | None = None) -> None:
        """Check one formula as a proposition, accumulating obligations."""
        self._current_label = label
        ctx = context if context is not None else self._seeded_context(len(self.theory.decls))
        self.check(ctx, formula, BOOL)

    def _seeded_context(self, prefix: int) -> Context:
        ctx = Context()
        for decl in self.theory.decls[:prefix]:
            if isinstance(decl, Axiom):
                ctx = ctx.push_assumption(decl.formula, label=decl.label)
        return ctx


def _instantiate_telescope(telescope, args, i) -> Type:
    """Type of the i-th argument after substituting the earlier ones."""
    ty = telescope[i][1]
    for (name, _), value in zip(telescope[:i], args[:i]):
        ty = substitute_type(ty, name, value)
    return ty


def _show_type(ty: Type) -> str:
    from .printer import format_type

    return format_type(ty)


def check_problem(problem) -> CheckReport:
    """Deep-check every declaration and the conjecture of a problem.

    Earlier axioms are visible as labeled assumptions when checking later
    formulae; each obligation records how many theory declarations it may
    rely on.
    """
    report = CheckReport()
    if problem.polymorphic:
        from .shallow import find_polymorphic_span

        report.diagnostics.append(error(
            "polymorphic declarations are not supported",
            find_polymorphic_span(problem), problem.path))
        return report

    decls = problem.theory.decls
    checker = DeepChecker(Theory(()), problem.path)
    for k, decl in enumerate(decls):
        checker.theory = Theory(decls[:k])
        checker._theory_prefix = k
        ctx = checker._seeded_context(k)
        try:
            if isinstance(decl, TypeDecl):
                checker._current_label = decl.label or decl.name.text
                inner = ctx
                for name, ty in decl.telescope:
                    checker.wf_type(inner, ty)
                    inner = inner.push_var(name, ty)
            elif isinstance(decl, ConstDecl):
                checker._current_label = decl.label or decl.name.text
                checker.wf_type(ctx, decl.ty)
            elif isinstance(decl, Axiom):
                checker._current_label = decl.label
                checker.check(ctx, decl.formula, BOOL)
        except _DeepError as exc:
            report.diagnostics.append(exc.diagnostic)
    if problem.conjecture is not None:
        checker.theory = Theory(decls)
        checker._theory_prefix = len(decls)
        ctx = checker._seeded_context(len(decls))
        checker._current_label = problem.conjecture_name or "conjecture"
        try:
            checker.check(ctx, problem.conjecture, BOOL)
        except _DeepError as exc:
            report.diagnostics.append(exc.diagnostic)
    report.obligations = checker.obligations
    report.discharged = checker.discharged
    return report


def obligation_problem(problem, ob: Obligation):
    """Build a self-contained problem whose conjecture is the obligation."""
    from .syntax import Problem

    visible = problem.theory.decls[: ob.theory_prefix]
    return Problem(
        formulae=(),
        theory=Theory(tuple(visible)),
        conjecture=ob.formula,
        conjecture_name=ob.label,
        polymorphic=False,
        path=problem.path,
    )


def export_obligations(problem, obligations, out_dir: str) -> list:
    """Write each obligation as `<stem>__ob<k>.p`; returns the paths."""
    from .printer import print_problem

    os.makedirs(out_dir, exist_ok=True)
    stem = "problem"
    if problem.path:
        stem = os.path.splitext(os.path.basename(problem.path))[0]
    paths: list = []
    for k, ob in enumerate(obligations, start=1):
        path = os.path.join(out_dir, f"{stem}__ob{k}.p")
        text = print_problem(obligation_problem(problem, ob))
        header = f"% {ob.label}: {ob.origin}\n"
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(header + text)
        paths.append(path)
    return paths
