"""Shallow (decidable) type checking over dependency-erased skeletons.

A skeleton is a simple type obtained by dropping every term argument from a
base type and flattening dependent products into plain arrows.  Checking
skeletons catches arity and head mismatches without proving anything.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    App,
    Axiom,
    BaseApp,
    BoolType,
    Bottom,
    Choice,
    Const,
    ConstDecl,
    Eq,
    Exists,
    Forall,
    Implies,
    And,
    Or,
    Lam,
    Name,
    Not,
    Pi,
    Term,
    Top,
    Type,
    TypeDecl,
    Var,
    is_type_kind,
)
from .diagnostics import Diagnostic, Span, error


# ---------------------------------------------------------------------------
# Simple types


@dataclass(frozen=True)
class Base:
    head: Name

    def __str__(self) -> str:
        return self.head.text


@dataclass(frozen=True)
class Arrow:
    arg: "SimpleType"
    res: "SimpleType"

    def __str__(self) -> str:
        arg = f"({self.arg})" if isinstance(self.arg, Arrow) else str(self.arg)
        return f"{arg} > {self.res}"


@dataclass(frozen=True)
class SBool:
    def __str__(self) -> str:
        return "$o"


SimpleType = object  # Base | Arrow | SBool

BOOL_SKEL = SBool()


def skeletonize(ty: Type) -> SimpleType:
    """Drop term arguments and dependencies from a type."""
    if isinstance(ty, BaseApp):
        return Base(ty.head)
    if isinstance(ty, Pi):
        return Arrow(skeletonize(ty.domain), skeletonize(ty.codomain))
    if isinstance(ty, BoolType):
        return BOOL_SKEL
    raise TypeError(f"skeletonize: unexpected type {ty!r}")


# ---------------------------------------------------------------------------
# Checking


class _ShallowChecker:
    def __init__(self, path: str | None):
        self.path = path
        self.diagnostics: list[Diagnostic] = []
        self.type_arity: dict = {}   # text -> tuple of telescope skeletons
        self.const_skel: dict = {}   # text -> SimpleType

    def report(self, message: str, span: Span | None) -> None:
        self.diagnostics.append(error(message, span, self.path))

    # -- types ------------------------------------------------------------

    def check_type(self, ty: Type, env: dict) -> bool:
        if isinstance(ty, BoolType):
            return True
        if isinstance(ty, BaseApp):
            expected = self.type_arity.get(ty.head.text)
            if expected is None:
                if ty.head.kind.value == "variable":
                    self.report(f"type variable {ty.head.text!r} is not supported here", ty.span)
                else:
                    self.report(f"unknown type symbol {ty.head.text!r}", ty.span)
                return False
            if len(ty.args) != len(expected):
                self.report(
                    f"type {ty.head.text!r} expects {len(expected)} "
                    f"argument{'s' if len(expected) != 1 else ''}, got {len(ty.args)}",
                    ty.span)
                return False
            ok = True
            for i, (arg, want) in enumerate(zip(ty.args, expected), start=1):
                got = self.infer(arg, env)
                if got is None:
                    ok = False
                elif got != want:
                    self.report(
                        f"argument {i} of type {ty.head.text!r} has skeleton "
                        f"{got}, expected {want}", _term_span(arg) or ty.span)
                    ok = False
            return ok
        if isinstance(ty, Pi):
            ok = self.check_type(ty.domain, env)
            env2 = dict(env)
            env2[ty.binder.text] = skeletonize(ty.domain)
            return self.check_type(ty.codomain, env2) and ok
        raise TypeError(f"check_type: unexpected type {ty!r}")

    # -- terms ------------------------------------------------------------

    def infer(self, t: Term, env: dict):
        """Infer the skeleton of t; None when an error was already reported."""
        if isinstance(t, Var):
            skel = env.get(t.name.text)
            if skel is None:
                self.report(f"unbound variable {t.name.text!r}", t.span)
            return skel
        if isinstance(t, Const):
            skel = self.const_skel.get(t.name.text)
            if skel is None:
                self.report(f"unknown constant {t.name.text!r}", t.span)
            return skel
        if isinstance(t, App):
            fun = self.infer(t.fun, env)
            arg = self.infer(t.arg, env)
            if fun is None or arg is None:
                return None
            if not isinstance(fun, Arrow):
                self.report(f"term of skeleton {fun} cannot be applied", t.span)
                return None
            if arg != fun.arg:
                self.report(f"function expects argument skeleton {fun.arg}, got {arg}", t.span)
                return None
            return fun.res
        if isinstance(t, Lam):
            if not self.check_type(t.domain, env):
                return None
            dom = skeletonize(t.domain)
            env2 = dict(env)
            env2[t.binder.text] = dom
            body = self.infer(t.body, env2)
            return Arrow(dom, body) if body is not None else None
        if isinstance(t, (Forall, Exists, Choice)):
            if not self.check_type(t.domain, env):
                return None
            dom = skeletonize(t.domain)
            env2 = dict(env)
            env2[t.binder.text] = dom
            body = self.infer(t.body, env2)
            if body is None:
                return None
            if body != BOOL_SKEL:
                self.report(f"binder body must have skeleton $o, got {body}", t.span)
                return None
            return dom if isinstance(t, Choice) else BOOL_SKEL
        if isinstance(t, (Implies, And, Or)):
            ok = True
            for side in (t.left, t.right):
                got = self.infer(side, env)
                if got is None:
                    ok = False
                elif got != BOOL_SKEL:
                    self.report(f"connective operand must have skeleton $o, got {got}",
                                _term_span(side) or t.span)
                    ok = False
            return BOOL_SKEL if ok else None
        if isinstance(t, Not):
            got = self.infer(t.arg, env)
            if got is None:
                return None
            if got != BOOL_SKEL:
                self.report(f"negation operand must have skeleton $o, got {got}", t.span)
                return None
            return BOOL_SKEL
        if isinstance(t, Eq):
            left = self.infer(t.left, env)
            right = self.infer(t.right, env)
            if left is None or right is None:
                return None
            if left != right:
                self.report(f"equation sides have different skeletons: {left} vs {right}", t.span)
                return None
            return BOOL_SKEL
        if isinstance(t, (Top, Bottom)):
            return BOOL_SKEL
        raise TypeError(f"infer: unexpected term {t!r}")

    def check_formula(self, label: str, formula: Term, span: Span | None) -> None:
        got = self.infer(formula, {})
        if got is not None and got != BOOL_SKEL:
            self.report(f"formula {label!r} must have skeleton $o, got {got}", span)


def _term_span(t) -> Span | None:
    return getattr(t, "span", None)


def find_polymorphic_span(problem) -> Span | None:
    """Span of the first declaration that mentions the kind of types."""

    def mentions_kind(ty: Type) -> bool:
        if is_type_kind(ty):
            return True
        if isinstance(ty, Pi):
            return mentions_kind(ty.domain) or mentions_kind(ty.codomain)
        if isinstance(ty, BaseApp):
            return ty.head.kind.value == "variable"
        return False

    for decl in problem.theory.decls:
        if isinstance(decl, TypeDecl) and any(mentions_kind(ty) for _, ty in decl.telescope):
            return decl.span
        if isinstance(decl, ConstDecl) and mentions_kind(decl.ty):
            return decl.span
    return None


def check_shallow(problem) -> list[Diagnostic]:
    """Skeleton-check every declaration and formula of an elaborated problem.

    Returns an empty list exactly when the problem is shallowly well typed.
    """
    checker = _ShallowChecker(problem.path)
    if problem.polymorphic:
        checker.report("polymorphic declarations are not supported",
                       find_polymorphic_span(problem))
        return checker.diagnostics
    for decl in problem.theory.decls:
        if isinstance(decl, TypeDecl):
            env: dict = {}
            skels: list = []
            for name, ty in decl.telescope:
                checker.check_type(ty, env)
                if is_type_kind(ty):
                    checker.report("polymorphic declarations are not supported", decl.span)
                    return checker.diagnostics
                skel = skeletonize(ty)
                env[name.text] = skel
                skels.append(skel)
            checker.type_arity[decl.name.text] = tuple(skels)
        elif isinstance(decl, ConstDecl):
            checker.check_type(decl.ty, {})
            checker.const_skel[decl.name.text] = skeletonize(decl.ty)
        elif isinstance(decl, Axiom):
            checker.check_formula(decl.label, decl.formula, decl.span)
    if problem.conjecture is not None:
        checker.check_formula(problem.conjecture_name or "conjecture",
                              problem.conjecture, None)
    return checker.diagnostics
