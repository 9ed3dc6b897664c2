"""Concrete TPTP syntax: lexer, parser, and elaboration into the core AST.

parse_problem accepts annotated `thf` formulae with dependent type
declarations (`!>` telescopes, base types applied to term arguments) and
returns either an elaborated Problem or a list of Diagnostics.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from . import core
from .core import (
    BOOL,
    TYPE_KIND,
    And,
    App,
    Axiom,
    BaseApp,
    Bottom,
    Choice,
    Const,
    ConstDecl,
    Eq,
    Exists,
    Forall,
    Implies,
    Lam,
    Name,
    NameKind,
    Not,
    Or,
    Pi,
    Term,
    Theory,
    Top,
    Type,
    TypeDecl,
    Var,
    fresh_name,
    is_type_kind,
    substitute_type,
)
from .diagnostics import Diagnostic, Span, error, warning


# ---------------------------------------------------------------------------
# Lexer

_PUNCT = [
    "<~>", "<=>", "=>", "<=", "!=", "!>", "?*", "@+", "@-",
    "(", ")", "[", "]", ",", ".", ":", "@", "!", "?", "^",
    "~", "&", "|", "=", ">",
]


@dataclass(frozen=True)
class Token:
    kind: str  # lower|upper|dollar|quoted|number|one of _PUNCT|eof
    text: str
    line: int
    column: int
    offset: int
    end: int

    @property
    def span(self) -> Span:
        return Span(self.line, self.column, max(1, self.end - self.offset))


class _SyntaxError(Exception):
    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


def _is_lower_start(c: str) -> bool:
    return c.isalpha() and c.islower()


def _is_word_char(c: str) -> bool:
    return c.isalnum() or c == "_"


def tokenize(text: str, path: str | None = None) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    line = 1
    line_start = 0
    n = len(text)

    def span_here(length: int = 1) -> Span:
        return Span(line, i - line_start + 1, length)

    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            i += 1
            line_start = i
            continue
        if c in " \t\r":
            i += 1
            continue
        if c == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if text.startswith("/*", i):
            end = text.find("*/", i + 2)
            if end < 0:
                raise _SyntaxError(error("unterminated block comment", span_here(2), path))
            line += text.count("\n", i, end)
            if "\n" in text[i:end]:
                line_start = text.rfind("\n", i, end) + 1
            i = end + 2
            continue
        start = i
        col = i - line_start + 1
        if c == "'":
            i += 1
            value = []
            while i < n and text[i] != "'":
                if text[i] == "\\" and i + 1 < n and text[i + 1] in "\\'":
                    value.append(text[i + 1])
                    i += 2
                elif text[i] == "\n":
                    raise _SyntaxError(error("unterminated quoted atom", Span(line, col, i - start), path))
                else:
                    value.append(text[i])
                    i += 1
            if i >= n:
                raise _SyntaxError(error("unterminated quoted atom", Span(line, col, i - start), path))
            i += 1
            tokens.append(Token("quoted", "".join(value), line, col, start, i))
            continue
        if c == "$":
            j = i + 1
            if j < n and text[j] == "$":
                j += 1
            while j < n and _is_word_char(text[j]):
                j += 1
            if j == i + 1:
                raise _SyntaxError(error("stray '$'", span_here(), path))
            tokens.append(Token("dollar", text[i:j], line, col, i, j))
            i = j
            continue
        if c.isdigit():
            j = i
            while j < n and (text[j].isdigit() or text[j] in ".eE+-/"):
                j += 1
            tokens.append(Token("number", text[i:j], line, col, i, j))
            i = j
            continue
        if c.isalpha():
            j = i
            while j < n and _is_word_char(text[j]):
                j += 1
            kind = "lower" if _is_lower_start(c) else "upper"
            tokens.append(Token(kind, text[i:j], line, col, i, j))
            i = j
            continue
        for p in _PUNCT:
            if text.startswith(p, i):
                tokens.append(Token(p, p, line, col, i, i + len(p)))
                i += len(p)
                break
        else:
            raise _SyntaxError(error(f"unexpected character {c!r}", span_here(), path))
    tokens.append(Token("eof", "", line, n - line_start + 1, n, n))
    return tokens


# ---------------------------------------------------------------------------
# Surface trees


@dataclass(frozen=True)
class SName:
    category: str  # lower|upper|dollar|quoted
    text: str
    span: Span


@dataclass(frozen=True)
class SApp:
    fun: object
    arg: object
    span: Span


@dataclass(frozen=True)
class SBin:
    op: str  # & | => <= <=> <~> >
    left: object
    right: object
    span: Span


@dataclass(frozen=True)
class SNot:
    operand: object
    span: Span


@dataclass(frozen=True)
class SEq:
    left: object
    right: object
    negated: bool
    span: Span


@dataclass(frozen=True)
class SBinder:
    op: str  # ! ? ^ !> @+
    variables: tuple  # tuple[(SName, surface-type), ...]
    body: object
    span: Span


@dataclass(frozen=True)
class STyping:
    subject: SName
    ty: object
    span: Span


@dataclass(frozen=True)
class AnnotatedFormula:
    language: str
    name: str
    role: str
    body: object  # surface tree (STyping for role type)
    source: str | None = None
    useful_info: str | None = None
    span: Span | None = None


@dataclass(frozen=True)
class _Include:
    path: str
    span: Span


@dataclass(frozen=True)
class Problem:
    """An elaborated problem: original formulae plus the core theory."""

    formulae: tuple = ()
    theory: Theory = Theory()
    conjecture: Term | None = None
    conjecture_name: str | None = None
    polymorphic: bool = False
    path: str | None = None
    warnings: tuple = ()

    def role_counts(self) -> dict:
        counts: dict = {}
        for f in self.formulae:
            counts[f.role] = counts.get(f.role, 0) + 1
        return counts


# ---------------------------------------------------------------------------
# Parser

_ROLES = {"type", "axiom", "lemma", "hypothesis", "definition", "conjecture"}
_BINARY_OPS = {"&", "|", "=>", "<=", "<=>", "<~>", ">"}


class _Parser:
    def __init__(self, tokens: list[Token], path: str | None):
        self.tokens = tokens
        self.pos = 0
        self.path = path
        self.source_text: str | None = None

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise self.fail(f"expected {kind!r}, found {tok.text or 'end of input'!r}", tok)
        return self.next()

    def fail(self, message: str, tok: Token | None = None) -> _SyntaxError:
        tok = tok or self.peek()
        return _SyntaxError(error(message, tok.span, self.path))

    # -- items ----------------------------------------------------------

    def parse_items(self) -> tuple[list, list[Diagnostic], list[Diagnostic]]:
        items: list = []
        diagnostics: list[Diagnostic] = []
        warnings_out: list[Diagnostic] = []
        while self.peek().kind != "eof":
            try:
                tok = self.peek()
                if tok.kind == "lower" and tok.text == "thf":
                    items.append(self.parse_annotated())
                elif tok.kind == "lower" and tok.text == "include":
                    inc, warns = self.parse_include()
                    items.append(inc)
                    warnings_out.extend(warns)
                elif tok.kind == "lower" and tok.text in ("fof", "cnf", "tff", "tcf"):
                    raise self.fail(f"only thf formulae are supported, found {tok.text!r}", tok)
                else:
                    raise self.fail(f"expected 'thf' or 'include', found {tok.text or 'end of input'!r}", tok)
            except _SyntaxError as exc:
                diagnostics.append(exc.diagnostic)
                if len(diagnostics) >= 20:
                    break
                self._recover()
        return items, diagnostics, warnings_out

    def _recover(self) -> None:
        while self.peek().kind not in (".", "eof"):
            self.next()
        if self.peek().kind == ".":
            self.next()

    def parse_include(self) -> tuple[_Include, list[Diagnostic]]:
        warns: list[Diagnostic] = []
        kw = self.next()
        self.expect("(")
        target = self.peek()
        if target.kind not in ("quoted", "lower"):
            raise self.fail("include expects a quoted file name", target)
        self.next()
        if self.peek().kind == ",":
            self.next()
            depth = 0
            while not (depth == 0 and self.peek().kind == ")"):
                tok = self.next()
                if tok.kind == "eof":
                    raise self.fail("unterminated include directive", tok)
                if tok.kind in ("(", "["):
                    depth += 1
                elif tok.kind in (")", "]"):
                    depth -= 1
            warns.append(warning("include selection list ignored", target.span, self.path))
        self.expect(")")
        self.expect(".")
        return _Include(target.text, kw.span), warns

    def parse_annotated(self) -> AnnotatedFormula:
        kw = self.next()  # thf
        self.expect("(")
        name_tok = self.peek()
        if name_tok.kind not in ("lower", "quoted", "number", "upper"):
            raise self.fail("expected a formula name", name_tok)
        self.next()
        self.expect(",")
        role_tok = self.expect("lower")
        self.expect(",")
        if role_tok.text == "type":
            body: object = self.parse_typing()
        else:
            body = self.parse_expr()
        source = useful = None
        if self.peek().kind == ",":
            self.next()
            source = self._parse_opaque()
            if self.peek().kind == ",":
                self.next()
                useful = self._parse_opaque()
        self.expect(")")
        self.expect(".")
        return AnnotatedFormula("thf", name_tok.text, role_tok.text, body,
                                source, useful, kw.span)

    def _parse_opaque(self) -> str:
        start_tok = self.peek()
        depth = 0
        end = start_tok.offset
        while not (depth == 0 and self.peek().kind in (",", ")")):
            tok = self.next()
            if tok.kind == "eof":
                raise self.fail("unterminated annotation", tok)
            if tok.kind in ("(", "["):
                depth += 1
            elif tok.kind in (")", "]"):
                depth -= 1
            end = tok.end
        assert self.source_text is not None
        return self.source_text[start_tok.offset:end]

    # -- typings ---------------------------------------------------------

    def parse_typing(self) -> STyping:
        parens = 0
        while self.peek().kind == "(" and self._looks_like_typing_paren():
            self.next()
            parens += 1
        subject_tok = self.peek()
        if subject_tok.kind not in ("lower", "quoted"):
            raise self.fail("expected the declared symbol name", subject_tok)
        self.next()
        self.expect(":")
        ty = self.parse_type_expr()
        for _ in range(parens):
            self.expect(")")
        return STyping(SName("lower", subject_tok.text, subject_tok.span), ty, subject_tok.span)

    def _looks_like_typing_paren(self) -> bool:
        tok = self.tokens[self.pos + 1] if self.pos + 1 < len(self.tokens) else None
        after = self.tokens[self.pos + 2] if self.pos + 2 < len(self.tokens) else None
        return bool(tok and tok.kind in ("lower", "quoted") and after and after.kind == ":")

    def parse_type_expr(self) -> object:
        """Type expressions reuse the formula grammar; '>' is parsed here."""
        return self.parse_expr()

    # -- formulae ---------------------------------------------------------

    def parse_expr(self) -> object:
        left = self.parse_unit()
        op_tok = self.peek()
        if op_tok.kind not in _BINARY_OPS:
            return left
        op = op_tok.kind
        if op in ("&", "|"):
            operands = [left]
            while self.peek().kind == op:
                self.next()
                operands.append(self.parse_unit())
            self._reject_chain_mixing(op)
            result = operands[0]
            for rhs in operands[1:]:
                result = SBin(op, result, rhs, op_tok.span)
            return result
        if op == ">":
            operands = [left]
            while self.peek().kind == ">":
                self.next()
                operands.append(self.parse_unit())
            self._reject_chain_mixing(op)
            result = operands[-1]
            for lhs in reversed(operands[:-1]):
                result = SBin(">", lhs, result, op_tok.span)
            return result
        self.next()
        right = self.parse_unit()
        self._reject_chain_mixing(op)
        return SBin(op, left, right, op_tok.span)

    def _reject_chain_mixing(self, op: str) -> None:
        nxt = self.peek()
        if nxt.kind in _BINARY_OPS:
            raise self.fail(
                f"{nxt.kind!r} after {op!r} needs parentheses", nxt)

    def parse_unit(self) -> object:
        tok = self.peek()
        if tok.kind == "~":
            self.next()
            return SNot(self.parse_unit(), tok.span)
        left = self.parse_apply()
        nxt = self.peek()
        if nxt.kind in ("=", "!="):
            self.next()
            right = self.parse_apply()
            after = self.peek()
            if after.kind in ("=", "!="):
                raise self.fail("chained equality needs parentheses", after)
            return SEq(left, right, nxt.kind == "!=", nxt.span)
        return left

    def parse_apply(self) -> object:
        result = self.parse_atom()
        while self.peek().kind == "@":
            at = self.next()
            arg = self.parse_atom()
            result = SApp(result, arg, at.span)
        return result

    def parse_atom(self) -> object:
        tok = self.peek()
        if tok.kind == "(":
            self.next()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        if tok.kind in ("!", "?", "^", "!>", "@+"):
            return self.parse_binder()
        if tok.kind == "@-":
            raise self.fail("description not supported in DTF checker", tok)
        if tok.kind == "?*":
            raise self.fail("unsupported binder '?*'", tok)
        if tok.kind in ("lower", "upper", "dollar", "quoted"):
            self.next()
            return SName(tok.kind, tok.text, tok.span)
        if tok.kind == "number":
            raise self.fail("numbers are not supported", tok)
        raise self.fail(f"expected a term, found {tok.text or 'end of input'!r}", tok)

    def parse_binder(self) -> SBinder:
        op_tok = self.next()
        self.expect("[")
        variables: list = []
        seen_term_var = False
        while True:
            var_tok = self.expect("upper")
            self.expect(":")
            ty = self.parse_var_type()
            is_type_var = isinstance(ty, SName) and ty.text == "$tType"
            if op_tok.kind == "!>":
                if is_type_var and seen_term_var:
                    raise _SyntaxError(error(
                        "type variables must precede term variables in '!>'",
                        var_tok.span, self.path))
                if not is_type_var:
                    seen_term_var = True
            variables.append((SName("upper", var_tok.text, var_tok.span), ty))
            if self.peek().kind == ",":
                self.next()
                continue
            break
        self.expect("]")
        self.expect(":")
        body = self.parse_unit()
        if op_tok.kind == "@+" and len(variables) != 1:
            raise _SyntaxError(error("choice binds exactly one variable",
                                     op_tok.span, self.path))
        return SBinder(op_tok.kind, tuple(variables), body, op_tok.span)

    def parse_var_type(self) -> object:
        operand = self.parse_unit()
        if self.peek().kind != ">":
            return operand
        operands = [operand]
        while self.peek().kind == ">":
            at = self.next()
            operands.append(self.parse_unit())
        result = operands[-1]
        for lhs in reversed(operands[:-1]):
            result = SBin(">", lhs, result, at.span)
        return result


# ---------------------------------------------------------------------------
# Elaboration


class _ElabError(Exception):
    def __init__(self, diagnostic: Diagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


_AXIOM_ROLES = ("axiom", "lemma", "hypothesis", "definition")


class _Elaborator:
    def __init__(self, path: str | None):
        self.path = path
        self.decls: list = []
        self.symbols: dict = {}
        self.diagnostics: list[Diagnostic] = []
        self.polymorphic = False
        self.conjecture: Term | None = None
        self.conjecture_name: str | None = None
        self._used_binders: set = set()
        self._arrow_counter = 0

    def err(self, message: str, span: Span | None) -> _ElabError:
        return _ElabError(error(message, span, self.path))

    # -- entry ------------------------------------------------------------

    def run(self, formulae: list[AnnotatedFormula]) -> None:
        for f in formulae:
            try:
                self.elaborate_formula(f)
            except _ElabError as exc:
                self.diagnostics.append(exc.diagnostic)

    def elaborate_formula(self, f: AnnotatedFormula) -> None:
        if f.role not in _ROLES:
            raise self.err(f"unsupported role {f.role!r}", f.span)
        self._used_binders = set()
        self._arrow_counter = 0
        if f.role == "type":
            self.elaborate_declaration(f)
            return
        body = self.elaborate_term(f.body, {})
        body = self.annotate_term(body, {})
        if f.role == "conjecture":
            if self.conjecture is not None:
                raise self.err("a problem may contain at most one conjecture", f.span)
            self.conjecture = body
            self.conjecture_name = f.name
        else:
            self.decls.append(Axiom(f.name, body, f.role, span=f.span))

    # -- declarations ------------------------------------------------------

    def elaborate_declaration(self, f: AnnotatedFormula) -> None:
        typing = f.body
        assert isinstance(typing, STyping)
        symbol = typing.subject.text
        if symbol in self.symbols:
            raise self.err(f"duplicate declaration of {symbol!r}", typing.span)

        binders, spine = self._split_decl_type(typing.ty)
        tail = spine[-1]
        if isinstance(tail, SName) and tail.category == "dollar" and tail.text == "$tType":
            telescope: list = []
            venv: dict = {}
            for var, sty in binders:
                domain = self._binder_domain(sty, venv)
                name = Name(var.text, NameKind.VAR)
                telescope.append((name, domain))
                venv[var.text] = ("tyvar",) if is_type_kind(domain) else ("var", name)
            for component in spine[:-1]:
                domain = self._binder_domain(component, venv, allow_pi=True)
                name = Name(self._invent_binder(), NameKind.VAR)
                telescope.append((name, domain))
            env: dict = {}
            annotated: list = []
            for n, ty in telescope:
                ty = self.annotate_type(ty, env)
                annotated.append((n, ty))
                env[n.text] = ty
            telescope = annotated
            decl = TypeDecl(Name(symbol, NameKind.TYPE), tuple(telescope), f.name, span=f.span)
        else:
            ty = self.elaborate_type(typing.ty, {}, allow_pi=True)
            ty = self.annotate_type(ty, {})
            decl = ConstDecl(Name(symbol, NameKind.CONST), ty, f.name, span=f.span)
        self.decls.append(decl)
        self.symbols[symbol] = decl

    def _split_decl_type(self, ty: object) -> tuple[list, list]:
        """Split a declaration type into !>-binders and its arrow spine."""
        binders: list = []
        while isinstance(ty, SBinder) and ty.op == "!>":
            binders.extend(ty.variables)
            ty = ty.body
        spine = [ty]
        while isinstance(spine[-1], SBin) and spine[-1].op == ">":
            last = spine.pop()
            spine.append(last.left)
            spine.append(last.right)
        return binders, spine

    def _binder_domain(self, sty: object, venv: dict, allow_pi: bool = False) -> Type:
        if isinstance(sty, SName) and sty.category == "dollar" and sty.text == "$tType":
            self.polymorphic = True
            return TYPE_KIND
        return self.elaborate_type(sty, venv, allow_pi=allow_pi)

    def _invent_binder(self) -> str:
        self._arrow_counter += 1
        return f"X{self._arrow_counter}_"

    # -- types -------------------------------------------------------------

    def elaborate_type(self, sty: object, venv: dict, allow_pi: bool = False) -> Type:
        if isinstance(sty, SName):
            if sty.category == "dollar":
                if sty.text == "$o":
                    return core.BoolType(span=sty.span)
                if sty.text == "$tType":
                    self.polymorphic = True
                    return BaseApp(Name("$tType", NameKind.TYPE), span=sty.span)
                raise self.err(f"unsupported $-symbol {sty.text!r} in type position", sty.span)
            if sty.category == "upper":
                entry = venv.get(sty.text)
                if entry and entry[0] == "tyvar":
                    return BaseApp(Name(sty.text, NameKind.VAR), span=sty.span)
                if entry:
                    raise self.err(f"term variable {sty.text!r} used as a type", sty.span)
                raise self.err(f"unbound type variable {sty.text!r}", sty.span)
            decl = self.symbols.get(sty.text)
            if isinstance(decl, TypeDecl):
                return BaseApp(Name(sty.text, NameKind.TYPE), span=sty.span)
            if decl is not None:
                raise self.err(f"{sty.text!r} is not a type symbol", sty.span)
            raise self.err(f"unknown type symbol {sty.text!r}", sty.span)
        if isinstance(sty, SApp):
            spine: list = []
            head = sty
            while isinstance(head, SApp):
                spine.append(head.arg)
                head = head.fun
            spine.reverse()
            if not isinstance(head, SName):
                raise self.err("type application needs a type-symbol head", sty.span)
            head_ty = self.elaborate_type(head, venv)
            if not isinstance(head_ty, BaseApp):
                raise self.err("only base types take term arguments", sty.span)
            args = tuple(self.elaborate_term(a, venv) for a in spine)
            return BaseApp(head_ty.head, args, span=sty.span)
        if isinstance(sty, SBin) and sty.op == ">":
            name = Name(self._invent_binder(), NameKind.VAR)
            domain = self.elaborate_type(sty.left, venv)
            codomain = self.elaborate_type(sty.right, venv, allow_pi=False)
            return Pi(name, domain, codomain, span=sty.span)
        if isinstance(sty, SBinder) and sty.op == "!>":
            if not allow_pi:
                raise self.err("'!>' is only allowed prenex in declaration types", sty.span)
            venv = dict(venv)
            bound: list = []
            for var, vty in sty.variables:
                domain = self._binder_domain(vty, venv)
                name = Name(var.text, NameKind.VAR)
                venv[var.text] = ("tyvar",) if is_type_kind(domain) else ("var", name)
                bound.append((name, domain))
            result = self.elaborate_type(sty.body, venv, allow_pi=True)
            for name, domain in reversed(bound):
                result = Pi(name, domain, result, span=sty.span)
            return result
        if isinstance(sty, SBinder):
            raise self.err(f"binder {sty.op!r} cannot appear in a type", sty.span)
        raise self.err("expected a type", getattr(sty, "span", None))

    # -- terms ---------------------------------------------------------------

    def elaborate_term(self, s: object, venv: dict) -> Term:
        if isinstance(s, SName):
            return self._elaborate_name(s, venv)
        if isinstance(s, SApp):
            head = s
            while isinstance(head, SApp):
                head = head.fun
            if isinstance(head, SName) and head.category in ("lower", "quoted") \
                    and isinstance(self.symbols.get(head.text), TypeDecl):
                raise self.err(f"type symbol {head.text!r} used as a term", head.span)
            return App(self.elaborate_term(s.fun, venv), self.elaborate_term(s.arg, venv), span=s.span)
        if isinstance(s, SNot):
            return Not(self.elaborate_term(s.operand, venv), span=s.span)
        if isinstance(s, SEq):
            eq = Eq(self.elaborate_term(s.left, venv), self.elaborate_term(s.right, venv), None, span=s.span)
            return Not(eq, span=s.span) if s.negated else eq
        if isinstance(s, SBin):
            if s.op == ">":
                raise self.err("arrow cannot appear in a formula", s.span)
            left = self.elaborate_term(s.left, venv)
            right = self.elaborate_term(s.right, venv)
            if s.op == "&":
                return And(left, right, span=s.span)
            if s.op == "|":
                return Or(left, right, span=s.span)
            if s.op == "=>":
                return Implies(left, right, span=s.span)
            if s.op == "<=":
                return Implies(right, left, span=s.span)
            if s.op == "<=>":
                return And(Implies(left, right, span=s.span), Implies(right, left, span=s.span), span=s.span)
            if s.op == "<~>":
                both = And(Implies(left, right, span=s.span), Implies(right, left, span=s.span), span=s.span)
                return Not(both, span=s.span)
            raise self.err(f"unsupported connective {s.op!r}", s.span)
        if isinstance(s, SBinder):
            return self._elaborate_binder(s, venv)
        raise self.err("expected a formula", getattr(s, "span", None))

    def _elaborate_name(self, s: SName, venv: dict) -> Term:
        if s.category == "dollar":
            if s.text == "$true":
                return Top(span=s.span)
            if s.text == "$false":
                return Bottom(span=s.span)
            if s.text in ("$o", "$tType"):
                raise self.err(f"{s.text} cannot appear in a formula", s.span)
            raise self.err(f"unsupported $-symbol {s.text!r}", s.span)
        if s.category == "upper":
            entry = venv.get(s.text)
            if entry is None:
                raise self.err(f"unbound variable {s.text!r}", s.span)
            if entry[0] == "tyvar":
                raise self.err(f"type variable {s.text!r} used as a term", s.span)
            return Var(entry[1], span=s.span)
        decl = self.symbols.get(s.text)
        if isinstance(decl, ConstDecl):
            return Const(Name(s.text, NameKind.CONST), span=s.span)
        if isinstance(decl, TypeDecl):
            raise self.err(f"type symbol {s.text!r} used as a term", s.span)
        raise self.err(f"unknown symbol {s.text!r}", s.span)

    def _elaborate_binder(self, s: SBinder, venv: dict) -> Term:
        if s.op == "!>":
            raise self.err("'!>' is only allowed in declaration types", s.span)
        node = {"!": Forall, "?": Exists, "^": Lam, "@+": Choice}[s.op]
        venv = dict(venv)
        bound: list = []
        for var, vty in s.variables:
            if isinstance(vty, SName) and vty.category == "dollar" and vty.text == "$tType":
                self.polymorphic = True
                domain: Type = TYPE_KIND
                name = Name(self._fresh_binder(var.text), NameKind.VAR)
                venv[var.text] = ("tyvar",)
            else:
                domain = self.elaborate_type(vty, venv)
                name = Name(self._fresh_binder(var.text), NameKind.VAR)
                venv[var.text] = ("var", name)
            bound.append((name, domain))
        body = self.elaborate_term(s.body, venv)
        for name, domain in reversed(bound):
            body = node(name, domain, body, span=s.span)
        return body

    def _fresh_binder(self, text: str) -> str:
        resolved = fresh_name(text, self._used_binders)
        self._used_binders.add(resolved)
        return resolved

    # -- equation annotations -------------------------------------------------

    def annotate_term(self, t: Term, env: dict) -> Term:
        if isinstance(t, (Var, Const, Top, Bottom)):
            return t
        if isinstance(t, App):
            return App(self.annotate_term(t.fun, env), self.annotate_term(t.arg, env), span=t.span)
        if isinstance(t, (Lam, Forall, Exists, Choice)):
            domain = self.annotate_type(t.domain, env)
            env2 = dict(env)
            env2[t.binder.text] = domain
            return type(t)(t.binder, domain, self.annotate_term(t.body, env2), span=t.span)
        if isinstance(t, (Implies, And, Or)):
            return type(t)(self.annotate_term(t.left, env), self.annotate_term(t.right, env), span=t.span)
        if isinstance(t, Not):
            return Not(self.annotate_term(t.arg, env), span=t.span)
        if isinstance(t, Eq):
            left = self.annotate_term(t.left, env)
            right = self.annotate_term(t.right, env)
            return Eq(left, right, self._synth(left, env), span=t.span)
        raise TypeError(f"annotate_term: unexpected {t!r}")

    def annotate_type(self, ty: Type, env: dict) -> Type:
        if isinstance(ty, BaseApp):
            return BaseApp(ty.head, tuple(self.annotate_term(a, env) for a in ty.args), span=ty.span)
        if isinstance(ty, Pi):
            domain = self.annotate_type(ty.domain, env)
            env2 = dict(env)
            env2[ty.binder.text] = domain
            return Pi(ty.binder, domain, self.annotate_type(ty.codomain, env2), span=ty.span)
        return ty

    def _synth(self, t: Term, env: dict) -> Type | None:
        """Structural type synthesis; None when the skeleton is broken."""
        if isinstance(t, Var):
            return env.get(t.name.text)
        if isinstance(t, Const):
            decl = self.symbols.get(t.name.text)
            return decl.ty if isinstance(decl, ConstDecl) else None
        if isinstance(t, App):
            fun_ty = self._synth(t.fun, env)
            if isinstance(fun_ty, Pi):
                return substitute_type(fun_ty.codomain, fun_ty.binder, t.arg)
            return None
        if isinstance(t, Lam):
            env2 = dict(env)
            env2[t.binder.text] = t.domain
            body_ty = self._synth(t.body, env2)
            return Pi(t.binder, t.domain, body_ty) if body_ty is not None else None
        if isinstance(t, Choice):
            return t.domain
        if isinstance(t, (Forall, Exists, Implies, And, Or, Not, Eq, Top, Bottom)):
            return BOOL
        return None


# ---------------------------------------------------------------------------
# Entry points


def _resolve_includes(items: list, path: str | None, seen: set,
                      diagnostics: list[Diagnostic], warnings_out: list[Diagnostic]) -> list:
    resolved: list = []
    base = os.path.dirname(os.path.abspath(path)) if path else os.getcwd()
    for item in items:
        if not isinstance(item, _Include):
            resolved.append(item)
            continue
        target = item.path if os.path.isabs(item.path) else os.path.join(base, item.path)
        target = os.path.normpath(target)
        if target in seen:
            diagnostics.append(error(f"circular include of {item.path!r}", item.span, path))
            continue
        try:
            with open(target, encoding="utf-8") as handle:
                text = handle.read()
        except OSError as exc:
            diagnostics.append(error(f"cannot read include {item.path!r}: {exc.strerror or exc}", item.span, path))
            continue
        try:
            tokens = tokenize(text, target)
        except _SyntaxError as exc:
            diagnostics.append(exc.diagnostic)
            continue
        sub_parser = _Parser(tokens, target)
        sub_parser.source_text = text
        sub_items, sub_diags, sub_warns = sub_parser.parse_items()
        diagnostics.extend(sub_diags)
        warnings_out.extend(sub_warns)
        resolved.extend(_resolve_includes(sub_items, target, seen | {target},
                                          diagnostics, warnings_out))
    return resolved


def parse_problem(text: str, path: str | None = None):
    """Parse and elaborate a DTF problem.

    Returns a Problem on success and a non-empty list of Diagnostics on any
    lex, parse, or elaboration error.
    """
    try:
        tokens = tokenize(text, path)
    except _SyntaxError as exc:
        return [exc.diagnostic]
    parser = _Parser(tokens, path)
    parser.source_text = text
    items, diagnostics, warns = parser.parse_items()
    items = _resolve_includes(items, path, {os.path.normpath(os.path.abspath(path))} if path else set(),
                              diagnostics, warns)
    if diagnostics:
        return diagnostics
    formulae = [i for i in items if isinstance(i, AnnotatedFormula)]
    elab = _Elaborator(path)
    elab.run(formulae)
    if elab.diagnostics:
        return elab.diagnostics
    return Problem(
        formulae=tuple(formulae),
        theory=Theory(tuple(elab.decls)),
        conjecture=elab.conjecture,
        conjecture_name=elab.conjecture_name,
        polymorphic=elab.polymorphic,
        path=path,
        warnings=tuple(warns),
    )


def parse_file(path: str):
    """Read a .p/.ax file (UTF-8) and parse it; see parse_problem."""
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        return [error(f"cannot read {path!r}: {exc.strerror or exc}", None, path)]
    return parse_problem(text, path)
