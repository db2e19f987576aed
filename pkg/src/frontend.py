import logging
import re
from bisect import bisect_right
from contextlib import contextmanager
from enum import Enum

from .ecst import (
    COMMENT, IDENTIFIER, KEYWORD, EcstNode, EcstTree, MalformedTreeError, SourceSpan, UniversalNodeKind,
)
from .tokens import Token

logger = logging.getLogger(__name__)

# characters outside the XML 1.0 Char production cannot be stored in an eCST document
NON_XML_CHARACTER = re.compile("[^\t\n\r\x20-\ud7ff\ue000-\ufffd\U00010000-\U0010ffff]")


class FrontendErrorKind(Enum):
    UNKNOWN_EXTENSION = "UnknownExtension"
    LEX_ERROR = "LexError"
    PARSE_ERROR = "ParseError"
    IO_ERROR = "IoError"


class FrontendError(Exception):
    kind = None

    def __init__(self, message, span=None):
        super().__init__(message)
        self.message = message
        self.span = span

    def __str__(self):
        if self.span is None:
            return self.message
        return f"{self.span.start_line}:{self.span.start_column}: {self.message}"


class UnknownExtensionError(FrontendError):
    kind = FrontendErrorKind.UNKNOWN_EXTENSION


class LexError(FrontendError):
    kind = FrontendErrorKind.LEX_ERROR

    def __init__(self, message, span):
        super().__init__(message, span)


class ParseError(FrontendError):
    kind = FrontendErrorKind.PARSE_ERROR

    def __init__(self, message, span):
        super().__init__(message, span)


class FrontendIoError(FrontendError):
    kind = FrontendErrorKind.IO_ERROR


class RegistryError(FrontendIoError):
    """Language registry is readable but inconsistent (e.g. duplicate extension)."""


def count_lines(source):
    return source.count("\n") + (0 if source.endswith("\n") else 1)


class Scanner:
    # subclasses provide token_pattern (groups space, comment, literal, word, operator,
    # punctuation, unterminated) and the word sets used by classify
    token_pattern = None
    keywords = frozenset()
    word_operators = frozenset()
    word_literals = frozenset()

    def __init__(self, source):
        self.source = source
        self.line_starts = [0] + [m.end() for m in re.finditer("\n", source)]

    def position(self, offset):
        line = bisect_right(self.line_starts, offset)
        return line, offset - self.line_starts[line - 1] + 1

    def span(self, start, end):
        start_line, start_column = self.position(start)
        end_line, end_column = self.position(max(start, end - 1))
        return SourceSpan(start_line, start_column, end_line, end_column)

    def scan_comment(self, offset):
        # hook for comments a regular expression cannot describe
        return None

    def classify(self, group, lexeme):
        if group != "word":
            return group
        if lexeme in self.keywords:
            return KEYWORD
        if lexeme in self.word_operators:
            return "operator"
        if lexeme in self.word_literals:
            return "literal"
        return IDENTIFIER

    def tokenize(self):
        source = self.source
        bad = NON_XML_CHARACTER.search(source)
        if bad is not None:
            raise LexError(f"character {bad.group()!r} is not allowed in source text",
                           self.span(bad.start(), bad.end()))
        tokens = []
        offset = 0
        while offset < len(source):
            end = self.scan_comment(offset)
            if end is not None:
                tokens.append(Token(source[offset:end], COMMENT, self.span(offset, end)))
                offset = end
                continue
            match = self.token_pattern.match(source, offset)
            if match is None or match.end() == offset:
                raise LexError(f"unrecognized character {source[offset]!r}", self.span(offset, offset + 1))
            group = match.lastgroup
            if group == "unterminated":
                raise LexError("unterminated literal or comment", self.span(offset, offset + 1))
            if group != "space":
                lexeme = match.group()
                tokens.append(Token(lexeme, self.classify(group, lexeme), self.span(offset, match.end())))
            offset = match.end()
        return tokens


class Parser:
    """Recursive-descent parser base that builds the eCST while it parses.

    Concrete tokens are appended to the innermost open universal node;
    `node()` opens a new universal node for the duration of a `with` block.
    Comment tokens are attached lazily, right before the next code token or
    node is placed.
    """

    def __init__(self, tokens, source_path="", total_lines=None, language_id=""):
        self.tokens = list(tokens)
        self.code = [i for i, token in enumerate(self.tokens) if not token.is_comment]
        self.cursor = 0
        self.attached = 0
        self.source_path = source_path
        self.language_id = language_id
        if total_lines is None:
            total_lines = max((t.span.end_line for t in self.tokens), default=1)
        self.total_lines = total_lines
        self.root = EcstNode.universal(UniversalNodeKind.COMPILATION_UNIT)
        self.stack = [self.root]

    # -- token access

    def peek(self, k=0):
        index = self.cursor + k
        if index < len(self.code):
            return self.tokens[self.code[index]]
        return None

    def at(self, *lexemes, k=0):
        token = self.peek(k)
        return token is not None and token.token_type not in ("literal", COMMENT) and token.lexeme in lexemes

    def at_type(self, token_type, k=0):
        token = self.peek(k)
        return token is not None and token.token_type == token_type

    def at_end(self):
        return self.cursor >= len(self.code)

    def flush_comments(self):
        target = self.code[self.cursor] if self.cursor < len(self.code) else len(self.tokens)
        for token in self.tokens[self.attached:target]:
            self._attach(token)
        self.attached = max(self.attached, target)

    def advance(self):
        if self.at_end():
            raise self.error("unexpected end of input")
        self.flush_comments()
        token = self.tokens[self.code[self.cursor]]
        self._attach(token)
        self.attached += 1
        self.cursor += 1
        return token

    def accept(self, *lexemes):
        if self.at(*lexemes):
            return self.advance()
        return None

    def expect(self, lexeme):
        if not self.at(lexeme):
            raise self.error(f"expected {lexeme!r}")
        return self.advance()

    def expect_type(self, token_type, what=None):
        if not self.at_type(token_type):
            raise self.error(f"expected {what or token_type}")
        return self.advance()

    def error(self, message):
        token = self.peek()
        if token is not None:
            return ParseError(f"{message} but found {token.lexeme!r}", token.span)
        if self.code:
            last = self.tokens[self.code[-1]].span
            return ParseError(f"{message} but reached end of input",
                              SourceSpan(last.end_line, last.end_column, last.end_line, last.end_column))
        return ParseError(f"{message} but reached end of input", SourceSpan(1, 1, 1, 1))

    # -- tree building

    def _attach(self, token):
        self.stack[-1].children.append(EcstNode.concrete(token.lexeme, token.token_type, token.span))

    @contextmanager
    def node(self, kind):
        self.flush_comments()
        universal = EcstNode.universal(kind)
        self.stack[-1].children.append(universal)
        self.stack.append(universal)
        try:
            yield universal
        finally:
            self.stack.pop()

    def parse_compilation_unit(self):
        raise NotImplementedError("parse_compilation_unit method not implemented")

    def parse(self):
        if not self.tokens:
            raise ParseError("empty compilation unit", SourceSpan(1, 1, 1, 1))
        self.parse_compilation_unit()
        if not self.at_end():
            raise self.error("expected end of input")
        self.flush_comments()
        tree = EcstTree(self.root, self.source_path, self.language_id, self.total_lines).renumber()
        try:
            tree.validate()
        except MalformedTreeError as e:
            first = self.tokens[0].span
            raise ParseError(f"frontend produced a malformed tree: {e}", first) from e
        logger.debug("parsed %s as %s: %d tokens, %d nodes",
                     self.source_path or "<source>", self.language_id, len(self.tokens), len(tree))
        return tree


class Frontend:
    language_id = None
    scanner_class = Scanner
    parser_class = Parser

    def lex(self, source):
        return self.scanner_class(source).tokenize()

    def parse(self, tokens, source_path="", total_lines=None):
        return self.parser_class(tokens, source_path, total_lines, self.language_id).parse()

    def parse_source(self, source, source_path=""):
        return self.parse(self.lex(source), source_path, count_lines(source))
