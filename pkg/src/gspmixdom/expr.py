"""Text DSL for GSP parse trees.

Grammar::

    tree := "e(" id "," id ")" | "s(" tree "," tree ")"
          | "p(" tree "," tree ")" | "g(" tree "," tree ")"
    id   := [A-Za-z0-9_]+

Whitespace is insignificant and ``#`` starts a comment that runs to the end
of the line. Parsing and formatting are iterative, so nesting depth is only
bounded by memory.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .model import KINDS, Binary, Leaf, Node, TreeError, validate_tree

_TOKEN_RE = re.compile(r"\s+|#[^\n]*|([A-Za-z0-9_]+)|([(),])|(.)")


@dataclass(frozen=True)
class ParseDiagnostic:
    kind: str  # SyntaxError | TerminalMismatch | SelfLoop | NameCollision
    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.kind}: {self.message}"


class ParseError(ValueError):
    def __init__(self, diagnostic: ParseDiagnostic):
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic

    @property
    def kind(self) -> str:
        return self.diagnostic.kind


def _tokenize(text: str):
    line, line_start = 1, 0
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        start = m.start()
        col = start - line_start + 1
        ident, punct, junk = m.groups()
        if ident is not None:
            tokens.append((ident, "id", line, col))
        elif punct is not None:
            tokens.append((punct, punct, line, col))
        elif junk is not None:
            raise ParseError(
                ParseDiagnostic("SyntaxError", line, col, f"unexpected character {junk!r}")
            )
        newlines = m.group().count("\n")
        if newlines:
            line += newlines
            line_start = start + m.group().rindex("\n") + 1
    eof_col = len(text) - line_start + 1
    tokens.append(("", "eof", line, eof_col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.where: dict[int, tuple[int, int]] = {}

    def fail(self, tok, message, kind="SyntaxError"):
        raise ParseError(ParseDiagnostic(kind, tok[2], tok[3], message))

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, typ, what):
        tok = self.next()
        if tok[1] != typ:
            found = "end of input" if tok[1] == "eof" else repr(tok[0])
            self.fail(tok, f"expected {what}, found {found}")
        return tok

    def parse(self) -> Node:
        # frame: [kind, location, children]
        stack: list[list] = []
        while True:
            head = self.expect("id", "one of e, s, p, g")
            kind = head[0]
            if kind not in KINDS:
                self.fail(head, f"unknown node kind {kind!r}; expected e, s, p or g")
            self.expect("(", "'('")
            if kind != "e":
                stack.append([kind, head, []])
                continue
            u = self.expect("id", "vertex name")[0]
            self.expect(",", "','")
            v = self.expect("id", "vertex name")[0]
            self.expect(")", "')'")
            value = self.build(Leaf, (u, v), head)
            # Fold finished values into their parents.
            while True:
                if not stack:
                    self.expect("eof", "end of input")
                    return value
                frame = stack[-1]
                frame[2].append(value)
                if len(frame[2]) == 1:
                    self.expect(",", "','")
                    break
                self.expect(")", "')'")
                stack.pop()
                value = self.build(KINDS[frame[0]], frame[2], frame[1])

    def build(self, cls, args, tok) -> Node:
        try:
            node = cls(*args)
        except TreeError as exc:
            self.fail(tok, str(exc), exc.kind)
        except ValueError as exc:
            self.fail(tok, str(exc))
        if isinstance(node, Binary):
            self.where[id(node)] = (tok[2], tok[3])
        return node


def parse_expr(text: str) -> Node:
    """Parse ``text`` into a validated parse tree or raise :class:`ParseError`."""
    parser = _Parser(text)
    tree = parser.parse()
    try:
        validate_tree(tree)
    except TreeError as exc:
        line, col = parser.where.get(id(exc.node), (1, 1))
        raise ParseError(ParseDiagnostic(exc.kind, line, col, str(exc))) from None
    return tree


def format_expr(tree: Node) -> str:
    """Canonical rendering; ``parse_expr(format_expr(t)) == t``."""
    out: list[str] = []
    stack: list = [tree]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
        elif isinstance(item, Leaf):
            out.append(f"e({item.s},{item.t})")
        else:
            out.append(f"{item.kind}(")
            stack.extend((")", item.right, ",", item.left))
    return "".join(out)


def read_expr(path) -> Node:
    with open(path, encoding="utf-8") as fh:
        return parse_expr(fh.read())
