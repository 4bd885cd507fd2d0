"""Recursive-descent parser for MiniC.

The first syntax error aborts parsing; there is no recovery.
"""

from __future__ import annotations

from pathlib import Path

from ..shared.errors import ParseError
from .lexer import Token, tokenize
from .nodes import (
    INT,
    VOID,
    ArrayType,
    Assert,
    Assign,
    Assume,
    Binary,
    Call,
    ExprStmt,
    FieldAccess,
    FunctionDef,
    If,
    Index,
    IntLit,
    Param,
    RecordDecl,
    RecordType,
    Return,
    SourceUnit,
    Span,
    Unary,
    Var,
    VarDecl,
    While,
)

# binary operators by precedence level, loosest first
_BINARY_LEVELS = (
    ("||",),
    ("&&",),
    ("==", "!="),
    ("<", "<=", ">", ">="),
    ("+", "-"),
    ("*", "/", "%"),
)

RESERVED_PREFIX = "__"


class MiniCParser:
    """Parse one MiniC file into a SourceUnit."""

    def __init__(self, text: str, path: str = "<input>", harness: bool = False):
        self.text = text
        self.path = path
        self.harness = harness
        self.tokens = tokenize(text)
        self.pos = 0
        self.loop_counter = 0
        # property formulas may mention the pseudo-variable `return`
        self.return_var = False

    def parse(self) -> SourceUnit:
        records = []
        functions = []
        while not self._at("eof"):
            if self._at_text("record"):
                records.append(self._parse_record())
            else:
                functions.append(self._parse_function())
        return SourceUnit(
            path=self.path,
            record_decls=tuple(records),
            functions=tuple(functions),
            harness=self.harness,
            text=self.text,
        )

    # --- token helpers ---------------------------------------------------

    @property
    def _current(self) -> Token:
        return self.tokens[self.pos]

    def _peek(self, offset=1) -> Token:
        index = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[index]

    def _at(self, kind) -> bool:
        return self._current.kind == kind

    def _at_text(self, text) -> bool:
        tok = self._current
        return tok.kind in ("keyword", "punct") and tok.text == text

    def _advance(self) -> Token:
        tok = self._current
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def _error(self, expected) -> ParseError:
        tok = self._current
        return ParseError(tok.line, tok.column, expected, tok.describe())

    def _expect(self, text) -> Token:
        if not self._at_text(text):
            raise self._error(f"'{text}'")
        return self._advance()

    def _expect_ident(self, what="identifier") -> Token:
        if not self._at("ident"):
            raise self._error(what)
        tok = self._advance()
        if tok.text.startswith(RESERVED_PREFIX) and not self.harness:
            raise ParseError(tok.line, tok.column, "identifier without the reserved '__' prefix", tok.text)
        return tok

    def _expect_length(self) -> int:
        if not self._at("int"):
            raise self._error("array length")
        return int(self._advance().text)

    @staticmethod
    def _span(tok: Token) -> Span:
        return Span(tok.line, tok.column)

    # --- declarations ----------------------------------------------------

    def _parse_record(self) -> RecordDecl:
        start = self._expect("record")
        name = self._expect_ident("record name").text
        self._expect("{")
        fields = []
        while not self._at_text("}"):
            self._expect("int")
            fields.append(self._expect_ident("field name").text)
            self._expect(";")
        self._expect("}")
        if self._at_text(";"):
            self._advance()
        return RecordDecl(name, tuple(fields), span=self._span(start))

    def _parse_return_type(self):
        if self._at_text("void"):
            self._advance()
            return VOID
        if self._at_text("int"):
            self._advance()
            if self._at_text("["):
                self._advance()
                length = self._expect_length()
                self._expect("]")
                return ArrayType(length)
            return INT
        if self._at("ident"):
            return RecordType(self._advance().text)
        raise self._error("type")

    def _parse_function(self) -> FunctionDef:
        start = self._current
        return_type = self._parse_return_type()
        name = self._expect_ident("function name").text
        self._expect("(")
        params = []
        if not self._at_text(")"):
            params.append(self._parse_param())
            while self._at_text(","):
                self._advance()
                params.append(self._parse_param())
        self._expect(")")
        self.loop_counter = 0
        body = self._parse_block()
        return FunctionDef(name, tuple(params), return_type, body, span=self._span(start))

    def _parse_param(self) -> Param:
        start = self._current
        if self._at_text("int"):
            self._advance()
            name = self._expect_ident("parameter name").text
            if self._at_text("["):
                self._advance()
                length = self._expect_length()
                self._expect("]")
                return Param(name, ArrayType(length), span=self._span(start))
            return Param(name, INT, span=self._span(start))
        if self._at("ident"):
            record = self._advance().text
            name = self._expect_ident("parameter name").text
            return Param(name, RecordType(record), span=self._span(start))
        raise self._error("parameter type")

    # --- statements ------------------------------------------------------

    def _parse_block(self) -> tuple:
        self._expect("{")
        stmts = []
        while not self._at_text("}"):
            if self._at("eof"):
                raise self._error("'}'")
            stmts.append(self._parse_statement())
        self._expect("}")
        return tuple(stmts)

    def _parse_statement(self):
        tok = self._current
        if tok.kind == "keyword":
            if tok.text == "int":
                return self._parse_int_decl()
            if tok.text == "if":
                return self._parse_if()
            if tok.text == "while":
                return self._parse_while()
            if tok.text == "return":
                return self._parse_return()
            if tok.text == "assume":
                return self._parse_assume()
            if tok.text == "assert":
                return self._parse_assert()
            raise self._error("statement")
        if tok.kind == "ident" and self._peek().kind == "ident":
            return self._parse_record_decl()
        return self._parse_simple()

    def _parse_int_decl(self) -> VarDecl:
        start = self._expect("int")
        name = self._expect_ident("variable name").text
        type_tag = INT
        if self._at_text("["):
            self._advance()
            type_tag = ArrayType(self._expect_length())
            self._expect("]")
        init = None
        if self._at_text("="):
            self._advance()
            init = self._parse_expression()
        elif type_tag == INT:
            raise self._error("'=' initializer")
        self._expect(";")
        return VarDecl(name, type_tag, init, span=self._span(start))

    def _parse_record_decl(self) -> VarDecl:
        start = self._advance()
        name = self._expect_ident("variable name").text
        init = None
        if self._at_text("="):
            self._advance()
            init = self._parse_expression()
        self._expect(";")
        return VarDecl(name, RecordType(start.text), init, span=self._span(start))

    def _parse_if(self) -> If:
        start = self._expect("if")
        self._expect("(")
        cond = self._parse_expression()
        self._expect(")")
        then = self._parse_block()
        orelse = ()
        if self._at_text("else"):
            self._advance()
            if self._at_text("if"):
                orelse = (self._parse_if(),)
            else:
                orelse = self._parse_block()
        return If(cond, then, orelse, span=self._span(start))

    def _parse_while(self) -> While:
        start = self._expect("while")
        ordinal = self.loop_counter
        self.loop_counter += 1
        self._expect("(")
        cond = self._parse_expression()
        self._expect(")")
        body = self._parse_block()
        return While(cond, body, span=self._span(start), ordinal=ordinal)

    def _parse_return(self) -> Return:
        start = self._expect("return")
        value = None
        if not self._at_text(";"):
            value = self._parse_expression()
        self._expect(";")
        return Return(value, span=self._span(start))

    def _parse_assume(self) -> Assume:
        start = self._current
        if not self.harness:
            raise self._error("statement (assume is only allowed in harness files)")
        self._advance()
        self._expect("(")
        cond = self._parse_expression()
        self._expect(")")
        self._expect(";")
        return Assume(cond, span=self._span(start))

    def _parse_assert(self) -> Assert:
        start = self._current
        if not self.harness:
            raise self._error("statement (assert is only allowed in harness files)")
        self._advance()
        label = self._expect_ident("assertion label").text
        self._expect(":")
        cond = self._parse_expression()
        self._expect(";")
        return Assert(label, cond, span=self._span(start))

    def _parse_simple(self):
        start = self._current
        expr = self._parse_expression()
        if self._at_text("="):
            if not _is_lvalue(expr):
                raise ParseError(start.line, start.column, "assignable variable, field or element", start.describe())
            self._advance()
            value = self._parse_expression()
            self._expect(";")
            return Assign(expr, value, span=self._span(start))
        if not isinstance(expr, Call):
            raise self._error("'=' (only calls may stand alone as statements)")
        self._expect(";")
        return ExprStmt(expr, span=self._span(start))

    # --- expressions -----------------------------------------------------

    def _parse_expression(self, level=0):
        if level == len(_BINARY_LEVELS):
            return self._parse_unary()
        left = self._parse_expression(level + 1)
        ops = _BINARY_LEVELS[level]
        while self._current.kind == "punct" and self._current.text in ops:
            op_tok = self._advance()
            right = self._parse_expression(level + 1)
            left = Binary(op_tok.text, left, right, span=self._span(op_tok))
        return left

    def _parse_unary(self):
        tok = self._current
        if tok.kind == "punct" and tok.text in ("-", "!"):
            self._advance()
            return Unary(tok.text, self._parse_unary(), span=self._span(tok))
        return self._parse_postfix()

    def _parse_postfix(self):
        expr = self._parse_primary()
        while True:
            if self._at_text("."):
                dot = self._advance()
                name = self._expect_ident("field name").text
                expr = FieldAccess(expr, name, span=self._span(dot))
            elif self._at_text("["):
                bracket = self._advance()
                index = self._parse_expression()
                self._expect("]")
                expr = Index(expr, index, span=self._span(bracket))
            else:
                return expr

    def _parse_primary(self):
        tok = self._current
        if tok.kind == "int":
            self._advance()
            return IntLit(int(tok.text), span=self._span(tok))
        if tok.kind == "ident":
            self._expect_ident()
            if self._at_text("("):
                self._advance()
                args = []
                if not self._at_text(")"):
                    args.append(self._parse_expression())
                    while self._at_text(","):
                        self._advance()
                        args.append(self._parse_expression())
                self._expect(")")
                return Call(tok.text, tuple(args), span=self._span(tok))
            return Var(tok.text, span=self._span(tok))
        if self.return_var and tok.kind == "keyword" and tok.text == "return":
            self._advance()
            return Var("return", span=self._span(tok))
        if self._at_text("("):
            self._advance()
            expr = self._parse_expression()
            self._expect(")")
            return expr
        raise self._error("expression")


def _is_lvalue(expr) -> bool:
    if isinstance(expr, Var):
        return True
    if isinstance(expr, (FieldAccess, Index)):
        return isinstance(expr.base, Var)
    return False


def parse(source_text: str, path: str = "<input>", harness: bool = False) -> SourceUnit:
    """Parse MiniC text; raises ParseError at the first syntax error."""
    return MiniCParser(source_text, path=path, harness=harness).parse()


def parse_expression(text: str, harness: bool = False):
    """Parse a standalone MiniC expression (used for property formula text)."""
    parser = MiniCParser(text, harness=harness)
    parser.return_var = True
    expr = parser._parse_expression()
    if not parser._at("eof"):
        raise parser._error("end of expression")
    return expr


def parse_file(path, harness: bool = False) -> SourceUnit:
    file_path = Path(path)
    return parse(file_path.read_text(encoding="utf-8"), path=str(file_path), harness=harness)
