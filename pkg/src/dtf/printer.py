"""Canonical TPTP printing for elaborated problems.

Output is deliberately conservative: binary connectives and binder bodies are
always parenthesized, applications use explicit '@', and every formula is a
single `thf(...)` annotated line (indented onto a second line when long).
The printed text reparses to an alpha-equal problem.
"""

from __future__ import annotations

import re

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
    Not,
    Pi,
    Term,
    Top,
    Type,
    TypeDecl,
    Var,
    free_vars,
    is_type_kind,
)

_BARE_ATOM = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")


def atom(text: str) -> str:
    """Render an atomic word, quoting it when necessary."""
    if _BARE_ATOM.match(text) or text.startswith("$"):
        return text
    escaped = text.replace("\\", "\\\\").replace("'", "\\'")
    return f"'{escaped}'"


# ---------------------------------------------------------------------------
# Types


def format_type(ty: Type) -> str:
    if isinstance(ty, BoolType):
        return "$o"
    if isinstance(ty, BaseApp):
        head = ty.head.text if ty.head.kind.value == "variable" else atom(ty.head.text)
        if not ty.args:
            return head
        parts = [head] + [_format_arg(a) for a in ty.args]
        return " @ ".join(parts)
    if isinstance(ty, Pi):
        return _format_pi_chain(ty)
    raise TypeError(f"format_type: unexpected type {ty!r}")


def _format_pi_chain(ty: Type) -> str:
    binders: list = []
    while isinstance(ty, Pi):
        binders.append((ty.binder, ty.domain))
        ty = ty.codomain
    tail = ty
    last_dependent = -1
    for i in range(len(binders)):
        rest_types = [d for _, d in binders[i + 1:]] + [tail]
        if any(binders[i][0].text in free_vars(t) for t in rest_types):
            last_dependent = i
    parts: list = []
    if last_dependent >= 0:
        group = ", ".join(
            f"{name.text}: {_format_domain(dom)}"
            for name, dom in binders[: last_dependent + 1])
        parts.append(f"!> [{group}]:")
    arrow_parts = [_format_component(dom) for _, dom in binders[last_dependent + 1:]]
    arrow_parts.append(_format_component(tail))
    arrow = " > ".join(arrow_parts)
    if parts:
        return f"{parts[0]} ({arrow})" if len(arrow_parts) > 1 else f"{parts[0]} {arrow}"
    return arrow


def _format_domain(ty: Type) -> str:
    text = format_type(ty)
    return f"({text})" if isinstance(ty, Pi) else text


def _format_component(ty: Type) -> str:
    if is_type_kind(ty):
        return "$tType"
    text = format_type(ty)
    if isinstance(ty, Pi) or (isinstance(ty, BaseApp) and ty.args):
        return f"({text})"
    return text


# ---------------------------------------------------------------------------
# Terms

_BINDER_OPS = {Forall: "!", Exists: "?", Lam: "^", Choice: "@+"}
_BINARY_OPS = {Implies: "=>", And: "&", Or: "|"}


def format_term(t: Term) -> str:
    if isinstance(t, Var) or isinstance(t, Const):
        return t.name.text if isinstance(t, Var) else atom(t.name.text)
    if isinstance(t, Top):
        return "$true"
    if isinstance(t, Bottom):
        return "$false"
    if isinstance(t, App):
        spine: list = []
        fun: Term = t
        while isinstance(fun, App):
            spine.append(fun.arg)
            fun = fun.fun
        spine.reverse()
        parts = [_format_operand(fun)] + [_format_operand(a) for a in spine]
        return " @ ".join(parts)
    if isinstance(t, (Forall, Exists, Lam, Choice)):
        op = _BINDER_OPS[type(t)]
        group: list = []
        body: Term = t
        while isinstance(body, type(t)) and _BINDER_OPS[type(body)] == op:
            group.append(f"{body.binder.text}: {_format_domain(body.domain)}")
            body = body.body
        return f"{op} [{', '.join(group)}]: ({format_term(body)})"
    if isinstance(t, (Implies, And, Or)):
        op = _BINARY_OPS[type(t)]
        return f"({_format_operand(t.left)} {op} {_format_operand(t.right)})"
    if isinstance(t, Not):
        return f"~ {_format_operand(t.arg)}"
    if isinstance(t, Eq):
        return f"({_format_operand(t.left)} = {_format_operand(t.right)})"
    raise TypeError(f"format_term: unexpected term {t!r}")


def _format_operand(t: Term) -> str:
    """Format a term so it can sit under '@', '=', or a binary connective."""
    text = format_term(t)
    if isinstance(t, (Var, Const, Top, Bottom)):
        return text
    if text.startswith("(") and _balanced_to_end(text):
        return text
    return f"({text})"


def _format_arg(t: Term) -> str:
    return _format_operand(t)


def _balanced_to_end(text: str) -> bool:
    depth = 0
    for i, c in enumerate(text):
        if c == "(":
            depth += 1
        elif c == ")":
            depth -= 1
            if depth == 0:
                return i == len(text) - 1
    return False


# ---------------------------------------------------------------------------
# Problems


def check_simply_typed(problem) -> None:
    """Raise ValueError if the problem uses dependent types anywhere."""

    def check_type(ty: Type) -> None:
        if isinstance(ty, BaseApp):
            if ty.args:
                raise ValueError(
                    f"cannot print TH0: type {ty.head.text!r} takes term arguments")
        elif isinstance(ty, Pi):
            if ty.binder.text in free_vars(ty.codomain):
                raise ValueError(
                    f"cannot print TH0: dependent product over {ty.binder.text!r}")
            check_type(ty.domain)
            check_type(ty.codomain)

    def check_term(t: Term) -> None:
        if isinstance(t, (Lam, Forall, Exists, Choice)):
            check_type(t.domain)
            check_term(t.body)
        elif isinstance(t, App):
            check_term(t.fun)
            check_term(t.arg)
        elif isinstance(t, (Implies, And, Or)):
            check_term(t.left)
            check_term(t.right)
        elif isinstance(t, Not):
            check_term(t.arg)
        elif isinstance(t, Eq):
            check_term(t.left)
            check_term(t.right)

    for decl in problem.theory.decls:
        if isinstance(decl, TypeDecl):
            if decl.telescope:
                raise ValueError(
                    f"cannot print TH0: type {decl.name.text!r} takes term arguments")
        elif isinstance(decl, ConstDecl):
            check_type(decl.ty)
        elif isinstance(decl, Axiom):
            check_term(decl.formula)
    if problem.conjecture is not None:
        check_term(problem.conjecture)


def format_annotated(name: str, role: str, body: str, width: int = 80) -> str:
    one_line = f"thf({atom(name)}, {role}, {body})."
    if len(one_line) <= width:
        return one_line
    return f"thf({atom(name)}, {role},\n    {body})."


def _decl_lines(problem) -> list:
    lines: list = []
    for decl in problem.theory.decls:
        if isinstance(decl, TypeDecl):
            ty = _telescope_type(decl)
            label = decl.label or decl.name.text
            lines.append(format_annotated(label, "type", f"{atom(decl.name.text)}: {ty}"))
        elif isinstance(decl, ConstDecl):
            label = decl.label or decl.name.text
            lines.append(format_annotated(label, "type", f"{atom(decl.name.text)}: {format_type(decl.ty)}"))
        elif isinstance(decl, Axiom):
            lines.append(format_annotated(decl.label, decl.role, format_term(decl.formula)))
    return lines


def _telescope_type(decl: TypeDecl) -> str:
    ty: Type = BaseApp(decl.name)  # placeholder tail, swapped for $tType below
    chain = list(decl.telescope)
    last_dependent = -1
    for i, (name, _) in enumerate(chain):
        rest = [d for _, d in chain[i + 1:]]
        if any(name.text in free_vars(t) for t in rest):
            last_dependent = i
    parts: list = []
    prefix = ""
    if last_dependent >= 0:
        group = ", ".join(f"{n.text}: {_format_domain(d)}" for n, d in chain[: last_dependent + 1])
        prefix = f"!> [{group}]: "
    arrow_parts = [_format_component(d) for _, d in chain[last_dependent + 1:]]
    arrow_parts.append("$tType")
    arrow = " > ".join(arrow_parts)
    if prefix and len(arrow_parts) > 1:
        return f"{prefix}({arrow})"
    return f"{prefix}{arrow}"


def print_problem(problem, conjecture_role: str = "conjecture") -> str:
    """Render a problem back to concrete TPTP syntax."""
    lines = _decl_lines(problem)
    if problem.conjecture is not None:
        name = problem.conjecture_name or "goal"
        lines.append(format_annotated(name, conjecture_role, format_term(problem.conjecture)))
    return "\n".join(lines) + "\n"


def print_th0(problem) -> str:
    """Render a simply typed problem, refusing dependent input."""
    check_simply_typed(problem)
    return print_problem(problem)
