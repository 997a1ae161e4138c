"""Reader and printer for ``.tbp`` problem files.

    var x0 { values v0, v1; trans v0 -> {v1}; trans v1 -> {v0, v1}; }
    rule r: a0[x0=v0] => exists a1[x0=v1]. end(a0) = start(a1);
    rule s: true => (exists a[x0=v0]. start(a) < end(a)) | (exists b[x0=v1]. b meets b2 ...);

Values and transition targets are comma separated.  The grammar is in the
README.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from . import allen
from .model import (END, START, Atom, ExistentialStatement, PlanningProblem, Quantifier,
                    StateVariable, SynchronizationRule, Term, equal)


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int = 1

    def __str__(self):
        return f"{self.line}:{self.column}"


@dataclass(frozen=True)
class ParseDiagnostic:
    span: SourceSpan
    message: str
    severity: str = "error"

    def as_dict(self) -> dict:
        return {"line": self.span.line, "column": self.span.column,
                "length": self.span.length, "severity": self.severity,
                "message": self.message}

    def __str__(self):
        return f"{self.span}: {self.severity}: {self.message}"


class ParseError(ValueError):
    def __init__(self, diagnostics: list[ParseDiagnostic]):
        super().__init__("\n".join(str(d) for d in diagnostics))
        self.diagnostics = diagnostics


@dataclass
class ParseResult:
    problem: Optional[PlanningProblem]
    diagnostics: list[ParseDiagnostic] = field(default_factory=list)

    @property
    def errors(self) -> list[ParseDiagnostic]:
        return [d for d in self.diagnostics if d.severity == "error"]


# -- lexer --------------------------------------------------------------------

KEYWORDS = {"var", "values", "trans", "rule", "true", "exists", "start", "end"}

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<op><=|=>|->|[<=&|;:.,()\[\]{}])
  | (?P<ident>[A-Za-z0-9_]+(?:-[A-Za-z]+)*)
""", re.VERBOSE)


@dataclass(frozen=True)
class Tok:
    kind: str      # "op" | "ident" | "eof"
    text: str
    span: SourceSpan


def tokenize(source: str) -> list[Tok]:
    out = []
    line, col, pos = 1, 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError([ParseDiagnostic(SourceSpan(line, col),
                                              f"unexpected character {source[pos]!r}")])
        text = m.group()
        kind = m.lastgroup
        if kind == "nl":
            line, col = line + 1, 1
        else:
            if kind in ("op", "ident"):
                out.append(Tok(kind, text, SourceSpan(line, col, len(text))))
            col += len(text)
        pos = m.end()
    out.append(Tok("eof", "", SourceSpan(line, col)))
    return out


# -- parser -------------------------------------------------------------------

class _Fail(Exception):
    pass


class _Parser:
    def __init__(self, source: str):
        self.toks = tokenize(source)
        self.i = 0
        self.diags: list[ParseDiagnostic] = []
        self.variables: dict[str, StateVariable] = {}
        self.var_order: list[str] = []
        self.rules: list[SynchronizationRule] = []
        self.rule_names: set[str] = set()

    # helpers
    @property
    def cur(self) -> Tok:
        return self.toks[self.i]

    def error(self, span: SourceSpan, msg: str, fatal: bool = True):
        self.diags.append(ParseDiagnostic(span, msg))
        if fatal:
            raise _Fail()

    def warn(self, span: SourceSpan, msg: str):
        self.diags.append(ParseDiagnostic(span, msg, "warning"))

    def at(self, text: str) -> bool:
        return self.cur.text == text and self.cur.kind != "eof"

    def expect(self, text: str) -> Tok:
        t = self.cur
        if t.text != text or t.kind == "eof":
            got = "end of input" if t.kind == "eof" else repr(t.text)
            self.error(t.span, f"expected {text!r}, got {got}")
        self.i += 1
        return t

    def ident(self, what: str) -> Tok:
        t = self.cur
        if t.kind != "ident" or t.text in KEYWORDS or "-" in t.text:
            got = "end of input" if t.kind == "eof" else repr(t.text)
            self.error(t.span, f"expected {what}, got {got}")
        self.i += 1
        return t

    def sync(self):
        """Skip to just after the next ``;`` at top level, or to a declaration keyword."""
        depth = 0
        while self.cur.kind != "eof":
            t = self.cur.text
            if depth == 0 and t in ("var", "rule") and self.cur.kind == "ident":
                return
            self.i += 1
            if t in "({[":
                depth += 1
            elif t in ")}]":
                depth = max(0, depth - 1)
            elif t == ";" and depth == 0:
                return

    # grammar
    def problem(self) -> Optional[PlanningProblem]:
        while self.cur.kind != "eof":
            start_i = self.i
            try:
                if self.at("var"):
                    self.var_decl()
                elif self.at("rule"):
                    self.rule_decl()
                else:
                    self.error(self.cur.span, f"expected 'var' or 'rule', got {self.cur.text!r}")
            except _Fail:
                if self.i == start_i:
                    self.i += 1
                self.sync()
        if any(d.severity == "error" for d in self.diags):
            return None
        return PlanningProblem(tuple(self.variables[x] for x in self.var_order), tuple(self.rules))

    def var_decl(self):
        self.expect("var")
        name = self.ident("variable name")
        self.expect("{")
        self.expect("values")
        values = [self.ident("value")]
        while self.at(","):
            self.i += 1
            values.append(self.ident("value"))
        self.expect(";")
        seen = set()
        for v in values:
            if v.text in seen:
                self.error(v.span, f"value {v.text} listed twice", fatal=False)
            seen.add(v.text)
        trans: dict[str, frozenset[str]] = {}
        while self.at("trans"):
            self.i += 1
            src = self.ident("value")
            self.expect("->")
            self.expect("{")
            targets = []
            if not self.at("}"):
                targets.append(self.ident("value"))
                while self.at(","):
                    self.i += 1
                    targets.append(self.ident("value"))
            self.expect("}")
            self.expect(";")
            for t in [src] + targets:
                if t.text not in seen:
                    self.error(t.span, f"unknown value {t.text} of variable {name.text}", fatal=False)
            if src.text in trans:
                self.error(src.span, f"transitions of {src.text} given twice", fatal=False)
            trans[src.text] = frozenset(t.text for t in targets)
        self.expect("}")
        if name.text in self.variables:
            self.error(name.span, f"duplicate variable {name.text}", fatal=False)
            return
        self.variables[name.text] = StateVariable(name.text, frozenset(seen), trans)
        self.var_order.append(name.text)

    def quantifier(self) -> tuple[Quantifier, Tok]:
        tok = self.ident("token name")
        self.expect("[")
        var = self.ident("variable name")
        self.expect("=")
        val = self.ident("value")
        self.expect("]")
        x = self.variables.get(var.text)
        if x is None:
            self.error(var.span, f"unknown variable {var.text}", fatal=False)
        elif val.text not in x.values:
            self.error(val.span, f"unknown value {val.text} of variable {var.text}", fatal=False)
        return Quantifier(tok.text, var.text, val.text), tok

    def rule_decl(self):
        self.expect("rule")
        name = self.ident("rule name")
        self.expect(":")
        trigger = None
        if self.at("true"):
            self.i += 1
        else:
            trigger, _ = self.quantifier()
        self.expect("=>")
        statements = []
        if self.at("("):
            self.i += 1
            statements.append(self.statement(trigger))
            self.expect(")")
            while self.at("|"):
                self.i += 1
                self.expect("(")
                statements.append(self.statement(trigger))
                self.expect(")")
        else:
            statements.append(self.statement(trigger))
            if self.at("|"):
                self.error(self.cur.span, "disjoined statements must be parenthesized")
        self.expect(";")
        if name.text in self.rule_names:
            self.error(name.span, f"duplicate rule {name.text}", fatal=False)
        self.rule_names.add(name.text)
        self.rules.append(SynchronizationRule(name.text, trigger, tuple(statements)))

    def statement(self, trigger: Optional[Quantifier]) -> ExistentialStatement:
        quants = []
        scope = {trigger.token} if trigger else set()
        if self.at("exists"):
            self.i += 1
            while not self.at("."):
                q, tok = self.quantifier()
                if q.token in scope:
                    self.error(tok.span, f"token {q.token} bound twice", fatal=False)
                scope.add(q.token)
                quants.append(q)
            if not quants:
                self.error(self.cur.span, "expected a quantified token after 'exists'")
            self.expect(".")
        atoms = set(self.item(scope))
        while self.at("&"):
            self.i += 1
            atoms |= self.item(scope)
        return ExistentialStatement(tuple(quants), frozenset(atoms))

    def item(self, scope) -> frozenset[Atom]:
        if self.at("start") or self.at("end"):
            lhs = self.term(scope)
            op = self.cur
            if op.text not in ("<=", "<", "="):
                self.error(op.span, f"expected '<=', '<' or '=', got {op.text!r}")
            self.i += 1
            rhs = self.term(scope)
            if op.text == "=":
                return equal(lhs, rhs)
            atom = Atom(lhs, rhs, op.text == "<")
            if lhs == rhs and atom.strict:
                self.warn(op.span, f"{atom} can never hold")
            return frozenset({atom})
        a = self.token_ref(scope)
        rel = self.cur
        if rel.kind != "ident" or rel.text not in allen.RELATIONS:
            self.error(rel.span, f"expected an Allen relation, got {rel.text!r}")
        self.i += 1
        b = self.token_ref(scope)
        if a.text == b.text:
            self.error(b.span, f"Allen relation between {a.text} and itself")
        return allen.encode(rel.text, a.text, b.text)

    def term(self, scope) -> Term:
        kw = self.cur
        self.i += 1
        self.expect("(")
        tok = self.token_ref(scope)
        self.expect(")")
        return Term(START if kw.text == "start" else END, tok.text)

    def token_ref(self, scope) -> Tok:
        tok = self.ident("token name")
        if tok.text not in scope:
            self.error(tok.span, f"unknown token name {tok.text}", fatal=False)
        return tok


def parse(source: str) -> ParseResult:
    p = _Parser.__new__(_Parser)
    try:
        p.__init__(source)
    except ParseError as e:
        return ParseResult(None, list(e.diagnostics))
    problem = p.problem()
    return ParseResult(problem, p.diags)


def parse_problem(source: str) -> PlanningProblem:
    """Parse or raise :class:`ParseError` carrying every error diagnostic."""
    res = parse(source)
    if res.errors:
        raise ParseError(res.errors)
    return res.problem


def parse_file(path) -> PlanningProblem:
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read())


# -- printer ------------------------------------------------------------------

def _atom_key(a: Atom):
    return (a.lhs.token, a.lhs.endpoint != START, a.rhs.token, a.rhs.endpoint != START, a.strict)


def print_statement(st: ExistentialStatement) -> str:
    head = ""
    if st.quantifiers:
        head = "exists " + " ".join(str(q) for q in st.quantifiers) + ". "
    parts = []
    done = set()
    for a in sorted(st.clause, key=_atom_key):
        if a in done:
            continue
        back = Atom(a.rhs, a.lhs)
        if not a.strict and back in st.clause and a.lhs != a.rhs:
            done.add(back)
            parts.append(f"{a.lhs} = {a.rhs}")
        else:
            parts.append(str(a))
    return head + " & ".join(parts)


def print_rule(rule: SynchronizationRule) -> str:
    trig = str(rule.trigger) if rule.trigger else "true"
    if len(rule.statements) == 1:
        body = print_statement(rule.statements[0])
    else:
        body = "\n    | ".join(f"({print_statement(s)})" for s in rule.statements)
    return f"rule {rule.name}: {trig} => {body};"


def print_variable(x: StateVariable) -> str:
    lines = [f"var {x.name} {{", f"  values {', '.join(sorted(x.values))};"]
    for v, ws in sorted(x.transitions.items()):
        lines.append(f"  trans {v} -> {{{', '.join(sorted(ws))}}};")
    lines.append("}")
    return "\n".join(lines)


def print_problem(problem: PlanningProblem) -> str:
    parts = [print_variable(x) for x in problem.variables]
    parts += [print_rule(r) for r in problem.rules]
    return "\n".join(parts) + ("\n" if parts else "")
