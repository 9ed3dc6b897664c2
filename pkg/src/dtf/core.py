"""Core term language: names, types, terms, theories, contexts.

Binders are represented by names, not de Bruijn indices, so that printed
output keeps the variable names the user wrote; alpha_equal does the
canonical comparison and substitution freshens on capture.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum

from .diagnostics import Span


class NameKind(Enum):
    TYPE = "type-symbol"
    CONST = "constant"
    VAR = "variable"


@dataclass(frozen=True)
class Name:
    text: str
    kind: NameKind

    def __str__(self) -> str:
        return self.text


def type_name(text: str) -> Name:
    return Name(text, NameKind.TYPE)


def const_name(text: str) -> Name:
    return Name(text, NameKind.CONST)


def var_name(text: str) -> Name:
    return Name(text, NameKind.VAR)


# ---------------------------------------------------------------------------
# Types


class Type:
    __slots__ = ()


@dataclass(frozen=True)
class BaseApp(Type):
    """A declared base-type symbol applied to term arguments, e.g. list @ N."""

    head: Name
    args: tuple = ()
    span: Span | None = field(default=None, compare=False, kw_only=True)


@dataclass(frozen=True)
class Pi(Type):
    """Dependent function type; prints as A > B when the binder is unused."""

    binder: Name
    domain: Type
    codomain: Type
    span: Span | None = field(default=None, compare=False, kw_only=True)


@dataclass(frozen=True)
class BoolType(Type):
    span: Span | None = field(default=None, compare=False, kw_only=True)


BOOL = BoolType()

# $tType is representable only so that rank-1 polymorphic declarations can be
# parsed and printed back; both checkers reject problems that contain it.
TYPE_KIND = BaseApp(Name("$tType", NameKind.TYPE))


def is_type_kind(ty: Type) -> bool:
    return isinstance(ty, BaseApp) and ty.head.text == "$tType"


# ---------------------------------------------------------------------------
# Terms


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    name: Name
    span: Span | None = field(default=None, compare=False, kw_only=True)


@dataclass(frozen=True)
class Const(Term):
    name: Name
    span: Span | None = field(default=None, compare=False, kw_only=True)


@dataclass(frozen=True)
class Lam(Term):
    binder: Name
    domain: Type
    body: Term
    span: Span | None = field(default=None, compare=False, kw_only=True)


@dataclass(frozen=True)
class App(Term):
    fun: Term
    arg: Term
    span: Span | None = field(default=None, compare=False, kw_only=True)


@dataclass(frozen=True)
class Forall(Term):
    binder: Name
    domain: Type
    body: Term
    span: Span | None = field(default=None, compare=False, kw_only=True)


@dataclass(frozen=True)
class Exists(Term):
    binder: Name
    domain: Type
    body: Term
    span: Span | None = field(default=None, compare=False, kw_only=True)


@dataclass(frozen=True)
class Choice(Term):
    """Hilbert choice: some x of the domain satisfying the body."""

    binder: Name
    domain: Type
    body: Term
    span: Span | None = field(default=None, compare=False, kw_only=True)


@dataclass(frozen=True)
class Implies(Term):
    left: Term
    right: Term
    span: Span | None = field(default=None, compare=False, kw_only=True)


@dataclass(frozen=True)
class And(Term):
    left: Term
    right: Term
    span: Span | None = field(default=None, compare=False, kw_only=True)


@dataclass(frozen=True)
class Or(Term):
    left: Term
    right: Term
    span: Span | None = field(default=None, compare=False, kw_only=True)


@dataclass(frozen=True)
class Not(Term):
    arg: Term
    span: Span | None = field(default=None, compare=False, kw_only=True)


@dataclass(frozen=True)
class Eq(Term):
    """Typed equality; `at` is the type both sides inhabit.

    Surface syntax writes bare `=`; elaboration fills `at` from the inferred
    type of the left operand. It can be None only on terms that fail the
    simply typed skeleton, which the checkers reject before anything reads it.
    """

    left: Term
    right: Term
    at: Type | None = None
    span: Span | None = field(default=None, compare=False, kw_only=True)


@dataclass(frozen=True)
class Top(Term):
    span: Span | None = field(default=None, compare=False, kw_only=True)


@dataclass(frozen=True)
class Bottom(Term):
    span: Span | None = field(default=None, compare=False, kw_only=True)


_BINDER_TERMS = (Lam, Forall, Exists, Choice)
_BINARY_TERMS = (Implies, And, Or)


# ---------------------------------------------------------------------------
# Declarations, theories, contexts


@dataclass(frozen=True)
class TypeDecl:
    """Base-type symbol with a telescope of term-argument types."""

    name: Name
    telescope: tuple = ()  # tuple[(Name, Type), ...]
    label: str | None = field(default=None, compare=False)
    span: Span | None = field(default=None, compare=False, kw_only=True)


@dataclass(frozen=True)
class ConstDecl:
    name: Name
    ty: Type
    label: str | None = field(default=None, compare=False)
    span: Span | None = field(default=None, compare=False, kw_only=True)


@dataclass(frozen=True)
class Axiom:
    label: str
    formula: Term
    role: str = "axiom"  # axiom | lemma | hypothesis | definition
    span: Span | None = field(default=None, compare=False, kw_only=True)


@dataclass(frozen=True)
class Theory:
    decls: tuple = ()

    def type_decl(self, text: str) -> TypeDecl | None:
        for d in self.decls:
            if isinstance(d, TypeDecl) and d.name.text == text:
                return d
        return None

    def const_decl(self, text: str) -> ConstDecl | None:
        for d in self.decls:
            if isinstance(d, ConstDecl) and d.name.text == text:
                return d
        return None

    def axioms(self) -> tuple:
        return tuple(d for d in self.decls if isinstance(d, Axiom))

    def extended(self, decl) -> "Theory":
        return Theory(self.decls + (decl,))


@dataclass(frozen=True)
class VarDecl:
    name: Name
    ty: Type


@dataclass(frozen=True)
class Assumption:
    """A formula assumed in context; label is set when seeded from an axiom."""

    formula: Term
    label: str | None = None


@dataclass(frozen=True)
class Context:
    entries: tuple = ()

    def push_var(self, name: Name, ty: Type) -> "Context":
        return Context(self.entries + (VarDecl(name, ty),))

    def push_assumption(self, formula: Term, label: str | None = None) -> "Context":
        return Context(self.entries + (Assumption(formula, label),))

    def var_type(self, text: str) -> Type | None:
        for entry in reversed(self.entries):
            if isinstance(entry, VarDecl) and entry.name.text == text:
                return entry.ty
        return None

    def assumptions(self):
        return tuple(e for e in self.entries if isinstance(e, Assumption))


# ---------------------------------------------------------------------------
# Free variables and fresh names


def free_vars(t) -> frozenset:
    """Free variable names (texts) of a term or type."""
    acc: set = set()
    _free_into(t, acc, ())
    return frozenset(acc)


def _free_into(t, acc: set, bound: tuple) -> None:
    if isinstance(t, Var):
        if t.name.text not in bound:
            acc.add(t.name.text)
    elif isinstance(t, (Const, Top, Bottom, BoolType)):
        pass
    elif isinstance(t, App):
        _free_into(t.fun, acc, bound)
        _free_into(t.arg, acc, bound)
    elif isinstance(t, _BINDER_TERMS):
        _free_into(t.domain, acc, bound)
        _free_into(t.body, acc, bound + (t.binder.text,))
    elif isinstance(t, _BINARY_TERMS):
        _free_into(t.left, acc, bound)
        _free_into(t.right, acc, bound)
    elif isinstance(t, Not):
        _free_into(t.arg, acc, bound)
    elif isinstance(t, Eq):
        _free_into(t.left, acc, bound)
        _free_into(t.right, acc, bound)
        if t.at is not None:
            _free_into(t.at, acc, bound)
    elif isinstance(t, BaseApp):
        if t.head.kind is NameKind.VAR and t.head.text not in bound:
            acc.add(t.head.text)
        for a in t.args:
            _free_into(a, acc, bound)
    elif isinstance(t, Pi):
        _free_into(t.domain, acc, bound)
        _free_into(t.codomain, acc, bound + (t.binder.text,))
    else:
        raise TypeError(f"free_vars: unexpected node {t!r}")


def term_size(t) -> int:
    """Node count of a term or type.

    Every variable, constant, connective, quantifier, application, and type
    former counts as one node. Inferred equality annotations (`Eq.at`) are
    elaboration metadata, not written syntax, and are not counted.
    """
    if isinstance(t, (Var, Const, Top, Bottom, BoolType)):
        return 1
    if isinstance(t, App):
        return 1 + term_size(t.fun) + term_size(t.arg)
    if isinstance(t, _BINDER_TERMS):
        return 1 + term_size(t.domain) + term_size(t.body)
    if isinstance(t, _BINARY_TERMS):
        return 1 + term_size(t.left) + term_size(t.right)
    if isinstance(t, Not):
        return 1 + term_size(t.arg)
    if isinstance(t, Eq):
        return 1 + term_size(t.left) + term_size(t.right)
    if isinstance(t, BaseApp):
        return 1 + sum(term_size(a) for a in t.args)
    if isinstance(t, Pi):
        return 1 + term_size(t.domain) + term_size(t.codomain)
    raise TypeError(f"term_size: unexpected node {t!r}")


def fresh_name(base: str, avoid) -> str:
    """Deterministic fresh variant of base not occurring in avoid."""
    if base not in avoid:
        return base
    stem = base.rstrip("0123456789") or base
    for i in itertools.count():
        candidate = f"{stem}{i}"
        if candidate not in avoid:
            return candidate
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# Substitution (capture avoiding)


def substitute(t: Term, x: Name, u: Term) -> Term:
    if isinstance(t, Var):
        return u if t.name == x else t
    if isinstance(t, (Const, Top, Bottom)):
        return t
    if isinstance(t, App):
        return App(substitute(t.fun, x, u), substitute(t.arg, x, u), span=t.span)
    if isinstance(t, _BINDER_TERMS):
        binder, domain, body = _subst_under_binder(t.binder, t.domain, t.body, x, u)
        return type(t)(binder, domain, body, span=t.span)
    if isinstance(t, _BINARY_TERMS):
        return type(t)(substitute(t.left, x, u), substitute(t.right, x, u), span=t.span)
    if isinstance(t, Not):
        return Not(substitute(t.arg, x, u), span=t.span)
    if isinstance(t, Eq):
        at = substitute_type(t.at, x, u) if t.at is not None else None
        return Eq(substitute(t.left, x, u), substitute(t.right, x, u), at, span=t.span)
    raise TypeError(f"substitute: unexpected term {t!r}")


def substitute_type(ty: Type, x: Name, u: Term) -> Type:
    if isinstance(ty, BoolType):
        return ty
    if isinstance(ty, BaseApp):
        return BaseApp(ty.head, tuple(substitute(a, x, u) for a in ty.args), span=ty.span)
    if isinstance(ty, Pi):
        domain = substitute_type(ty.domain, x, u)
        if ty.binder == x:
            return Pi(ty.binder, domain, ty.codomain, span=ty.span)
        binder, codomain = ty.binder, ty.codomain
        if binder.text in free_vars(u) and x.text in free_vars(codomain):
            renamed = Name(fresh_name(binder.text, free_vars(u) | free_vars(codomain) | {x.text}), binder.kind)
            codomain = substitute_type(codomain, binder, Var(renamed))
            binder = renamed
        return Pi(binder, domain, substitute_type(codomain, x, u), span=ty.span)
    raise TypeError(f"substitute_type: unexpected type {ty!r}")


def _subst_under_binder(binder: Name, domain: Type, body: Term, x: Name, u: Term):
    domain = substitute_type(domain, x, u)
    if binder == x:
        return binder, domain, body
    if binder.text in free_vars(u) and x.text in free_vars(body):
        renamed = Name(fresh_name(binder.text, free_vars(u) | free_vars(body) | {x.text}), binder.kind)
        body = substitute(body, binder, Var(renamed))
        binder = renamed
    return binder, domain, substitute(body, x, u)


# ---------------------------------------------------------------------------
# Alpha equality


def alpha_equal(a, b) -> bool:
    """Alpha equivalence of two terms or two types (Eq annotations included)."""
    return _alpha(a, b, {}, {})


def _binders_match(a, b, lr: dict, rl: dict) -> bool:
    if not _alpha(a.domain, b.domain, lr, rl):
        return False
    lr2 = dict(lr)
    rl2 = dict(rl)
    lr2[a.binder.text] = b.binder.text
    rl2[b.binder.text] = a.binder.text
    return _alpha(a.body if isinstance(a, Term) else a.codomain,
                  b.body if isinstance(b, Term) else b.codomain, lr2, rl2)


def _name_matches(a: Name, b: Name, lr: dict, rl: dict) -> bool:
    la = lr.get(a.text)
    lb = rl.get(b.text)
    if la is None and lb is None:
        return a == b
    return la == b.text and lb == a.text


def _alpha(a, b, lr: dict, rl: dict) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, Var):
        return _name_matches(a.name, b.name, lr, rl)
    if isinstance(a, Const):
        return a.name == b.name
    if isinstance(a, (Top, Bottom, BoolType)):
        return True
    if isinstance(a, App):
        return _alpha(a.fun, b.fun, lr, rl) and _alpha(a.arg, b.arg, lr, rl)
    if isinstance(a, _BINDER_TERMS):
        return _binders_match(a, b, lr, rl)
    if isinstance(a, _BINARY_TERMS):
        return _alpha(a.left, b.left, lr, rl) and _alpha(a.right, b.right, lr, rl)
    if isinstance(a, Not):
        return _alpha(a.arg, b.arg, lr, rl)
    if isinstance(a, Eq):
        if (a.at is None) != (b.at is None):
            return False
        if a.at is not None and not _alpha(a.at, b.at, lr, rl):
            return False
        return _alpha(a.left, b.left, lr, rl) and _alpha(a.right, b.right, lr, rl)
    if isinstance(a, BaseApp):
        # Heads may be bound rank-1 type variables, so route them through the
        # renaming environment like variables.
        if not _name_matches(a.head, b.head, lr, rl):
            return False
        if len(a.args) != len(b.args):
            return False
        return all(_alpha(x, y, lr, rl) for x, y in zip(a.args, b.args))
    if isinstance(a, Pi):
        return _binders_match(a, b, lr, rl)
    raise TypeError(f"alpha_equal: unexpected node {a!r}")


def theory_alpha_equal(t1: Theory, t2: Theory) -> bool:
    if len(t1.decls) != len(t2.decls):
        return False
    for d1, d2 in zip(t1.decls, t2.decls):
        if type(d1) is not type(d2):
            return False
        if isinstance(d1, TypeDecl):
            if d1.name != d2.name or len(d1.telescope) != len(d2.telescope):
                return False
            lr: dict = {}
            rl: dict = {}
            ok = True
            for (x1, ty1), (x2, ty2) in zip(d1.telescope, d2.telescope):
                if not _alpha(ty1, ty2, lr, rl):
                    ok = False
                    break
                lr[x1.text] = x2.text
                rl[x2.text] = x1.text
            if not ok:
                return False
        elif isinstance(d1, ConstDecl):
            if d1.name != d2.name or not alpha_equal(d1.ty, d2.ty):
                return False
        else:
            if d1.label != d2.label or d1.role != d2.role or not alpha_equal(d1.formula, d2.formula):
                return False
    return True


# ---------------------------------------------------------------------------
# Beta-eta normalization


class NormalizationBudgetExceeded(Exception):
    """Internal error: the reduction step budget ran out."""


def beta_eta_normalize(t, max_steps: int = 10_000):
    """Normal-order beta reduction followed by eta contraction.

    Works on terms and on types (whose argument terms are normalized).
    Idempotent and alpha-stable; raises NormalizationBudgetExceeded when the
    step budget runs out (or the term grows past what the interpreter can
    traverse, which is the same failure for callers).
    """
    budget = [max_steps]
    try:
        if isinstance(t, Type):
            return _norm_type(t, budget)
        return _norm_term(t, budget)
    except RecursionError:
        raise NormalizationBudgetExceeded(
            "beta-eta normalization budget exceeded") from None


def _spend(budget) -> None:
    budget[0] -= 1
    if budget[0] < 0:
        raise NormalizationBudgetExceeded("beta-eta normalization budget exceeded")


def _norm_term(t: Term, budget) -> Term:
    if isinstance(t, (Var, Const, Top, Bottom)):
        return t
    if isinstance(t, App):
        # Head reduction iterates in place: a looping redex must exhaust the
        # step budget, not the interpreter stack.
        while isinstance(t, App):
            fun = _norm_term(t.fun, budget)
            if isinstance(fun, Lam):
                _spend(budget)
                t = substitute(fun.body, fun.binder, t.arg)
            else:
                return App(fun, _norm_term(t.arg, budget), span=t.span)
        return _norm_term(t, budget)
    if isinstance(t, Lam):
        domain = _norm_type(t.domain, budget)
        body = _norm_term(t.body, budget)
        if isinstance(body, App) and isinstance(body.arg, Var) and body.arg.name == t.binder \
                and t.binder.text not in free_vars(body.fun):
            _spend(budget)
            return body.fun
        return Lam(t.binder, domain, body, span=t.span)
    if isinstance(t, (Forall, Exists, Choice)):
        return type(t)(t.binder, _norm_type(t.domain, budget), _norm_term(t.body, budget), span=t.span)
    if isinstance(t, _BINARY_TERMS):
        return type(t)(_norm_term(t.left, budget), _norm_term(t.right, budget), span=t.span)
    if isinstance(t, Not):
        return Not(_norm_term(t.arg, budget), span=t.span)
    if isinstance(t, Eq):
        at = _norm_type(t.at, budget) if t.at is not None else None
        return Eq(_norm_term(t.left, budget), _norm_term(t.right, budget), at, span=t.span)
    raise TypeError(f"beta_eta_normalize: unexpected term {t!r}")


def _norm_type(ty: Type, budget) -> Type:
    if isinstance(ty, BoolType):
        return ty
    if isinstance(ty, BaseApp):
        return BaseApp(ty.head, tuple(_norm_term(a, budget) for a in ty.args), span=ty.span)
    if isinstance(ty, Pi):
        return Pi(ty.binder, _norm_type(ty.domain, budget), _norm_type(ty.codomain, budget), span=ty.span)
    raise TypeError(f"beta_eta_normalize: unexpected type {ty!r}")
