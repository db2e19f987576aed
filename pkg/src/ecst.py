import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

logger = logging.getLogger(__name__)

COMMENT = "comment"
IDENTIFIER = "identifier"
KEYWORD = "keyword"
TOKEN_TYPES = ("keyword", "identifier", "literal", "operator", "punctuation", "comment")

# keywords that extend the opening keyword of a branch, as in "else if"
CHAINED_KEYWORDS = frozenset(["if"])


class MalformedTreeError(Exception):
    pass


class UniversalNodeKind(str, Enum):
    COMPILATION_UNIT = "COMPILATION_UNIT"
    FUNCTION_DECL = "FUNCTION_DECL"
    LOOP_STATEMENT = "LOOP_STATEMENT"
    BRANCH_STATEMENT = "BRANCH_STATEMENT"
    BRANCH = "BRANCH"
    CONDITION = "CONDITION"

    @classmethod
    def parse(cls, text):
        try:
            return cls(text)
        except ValueError:
            raise ValueError(f"unknown universal node kind {text!r}") from None


@dataclass(frozen=True)
class SourceSpan:
    start_line: int
    start_column: int
    end_line: int
    end_column: int

    def __post_init__(self):
        if min(self.start_line, self.start_column, self.end_line, self.end_column) < 1:
            raise MalformedTreeError(f"span positions are 1-based: {self}")
        if (self.start_line, self.start_column) > (self.end_line, self.end_column):
            raise MalformedTreeError(f"span ends before it starts: {self}")

    @classmethod
    def cover(cls, spans):
        spans = list(spans)
        start = min((s.start_line, s.start_column) for s in spans)
        end = max((s.end_line, s.end_column) for s in spans)
        return cls(start[0], start[1], end[0], end[1])

    def contains(self, other):
        return ((self.start_line, self.start_column) <= (other.start_line, other.start_column)
                and (other.end_line, other.end_column) <= (self.end_line, self.end_column))

    @property
    def line_count(self):
        return self.end_line - self.start_line + 1

    def __str__(self):
        return f"{self.start_line}:{self.start_column}-{self.end_line}:{self.end_column}"


@dataclass
class EcstNode:
    # universal nodes have a kind and no token data; concrete nodes are token leaves
    label: str
    kind: Optional[UniversalNodeKind] = None
    token_type: Optional[str] = None
    token_span: Optional[SourceSpan] = None
    children: List["EcstNode"] = field(default_factory=list)
    node_id: int = field(default=0, compare=False)

    @classmethod
    def universal(cls, kind):
        return cls(label=kind.value, kind=kind)

    @classmethod
    def concrete(cls, lexeme, token_type, span):
        return cls(label=lexeme, token_type=token_type, token_span=span)

    @property
    def is_universal(self):
        return self.kind is not None

    @property
    def is_comment(self):
        return self.token_type == COMMENT

    @property
    def span(self):
        return subtree_span(self)

    def concrete_descendants(self):
        for node in iter_preorder(self):
            if not node.is_universal:
                yield node

    def __repr__(self):
        if self.is_universal:
            return f"EcstNode({self.kind.value}, {len(self.children)} children)"
        return f"EcstNode({self.label!r}, {self.token_type}, {self.token_span})"


@dataclass
class EcstTree:
    root: EcstNode
    source_path: str
    language_id: str
    total_lines: int

    def __post_init__(self):
        if self.root.kind is not UniversalNodeKind.COMPILATION_UNIT:
            raise MalformedTreeError("tree root must be a COMPILATION_UNIT node")
        if self.total_lines < 1:
            raise MalformedTreeError("a source file has at least one line")

    def renumber(self):
        for node_id, node in enumerate(iter_preorder(self.root)):
            node.node_id = node_id
        return self

    def validate(self):
        seen = set()
        for node in iter_preorder(self.root):
            if node.node_id in seen:
                raise MalformedTreeError(f"duplicate node id {node.node_id}")
            seen.add(node.node_id)
            if node.is_universal:
                if node.kind is UniversalNodeKind.COMPILATION_UNIT and node is not self.root:
                    raise MalformedTreeError("COMPILATION_UNIT may only appear as the root")
                _validate_universal(node)
            else:
                if node.children:
                    raise MalformedTreeError(f"concrete node {node.label!r} has children")
                if node.token_type is None or node.token_span is None:
                    raise MalformedTreeError(f"concrete node {node.label!r} lacks token data")
                if node.token_span.end_line > self.total_lines:
                    raise MalformedTreeError(
                        f"token {node.label!r} at {node.token_span} lies past line {self.total_lines}")
        logger.debug("validated %s tree of %s (%d nodes)", self.language_id, self.source_path, len(seen))
        return self

    def __len__(self):
        return sum(1 for _ in iter_preorder(self.root))


def _validate_universal(node):
    if node.token_type is not None or node.token_span is not None:
        raise MalformedTreeError(f"universal node {node.kind.value} carries token data")
    subtree_span(node)
    if node.kind is UniversalNodeKind.FUNCTION_DECL and unit_name(node) is None:
        raise MalformedTreeError("FUNCTION_DECL without an identifier")
    if node.kind is UniversalNodeKind.BRANCH_STATEMENT:
        for child in node.children:
            if child.is_universal and child.kind is not UniversalNodeKind.BRANCH:
                raise MalformedTreeError(f"BRANCH_STATEMENT holds a {child.kind.value} node")
    for child in node.children:
        if child.kind is UniversalNodeKind.CONDITION and node.kind not in (
                UniversalNodeKind.BRANCH, UniversalNodeKind.LOOP_STATEMENT):
            raise MalformedTreeError(f"CONDITION placed under {node.kind.value}")


def iter_preorder(node):
    stack = [node]
    while stack:
        current = stack.pop()
        yield current
        stack.extend(reversed(current.children))


def traverse_preorder(tree):
    return list(iter_preorder(tree.root))


def find_nodes(tree, kind):
    return [node for node in iter_preorder(tree.root) if node.kind is kind]


def subtree_span(node):
    if not node.is_universal:
        return node.token_span
    spans = [n.token_span for n in iter_preorder(node) if not n.is_universal]
    if not spans:
        raise MalformedTreeError(f"{node.kind.value} node has no concrete descendants")
    return SourceSpan.cover(spans)


def leading_keywords(node):
    # "WHILE", "do", "else if", ...
    words = []
    for child in node.children:
        if child.is_comment:
            continue
        if child.is_universal or child.token_type != KEYWORD:
            break
        if words and child.label.lower() not in CHAINED_KEYWORDS:
            break
        words.append(child.label)
    return " ".join(words)


def unit_name(node):
    # identifier right before the parameter list, else the first identifier
    previous = None
    first = None
    for child in node.children:
        if child.is_universal or child.is_comment:
            continue
        if child.label == "(" and previous is not None and previous.token_type == IDENTIFIER:
            return previous.label
        if first is None and child.token_type == IDENTIFIER:
            first = child
        previous = child
    if first is not None:
        return first.label
    for child in node.concrete_descendants():
        if child.token_type == IDENTIFIER:
            return child.label
    return None


def render_outline(tree, universal_only=False):
    lines = []

    def walk(node, depth):
        indent = "  " * depth
        if node.is_universal:
            lines.append(f"{indent}{node.kind.value}")
            for child in node.children:
                walk(child, depth + 1)
        elif not universal_only:
            span = node.token_span
            lexeme = node.label.replace("\n", "\\n")
            lines.append(f"{indent}{lexeme} ({node.token_type}) {span.start_line}:{span.start_column}")

    walk(tree.root, 0)
    return "\n".join(lines)
