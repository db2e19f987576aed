import logging
from dataclasses import dataclass, field
from typing import List, NamedTuple

import numpy as np

from .ecst import (
    MalformedTreeError, SourceSpan, UniversalNodeKind, iter_preorder, leading_keywords, subtree_span, unit_name,
)

logger = logging.getLogger(__name__)

FUNCTION_DECL = UniversalNodeKind.FUNCTION_DECL
LOOP = UniversalNodeKind.LOOP_STATEMENT
BRANCH_STATEMENT = UniversalNodeKind.BRANCH_STATEMENT
BRANCH = UniversalNodeKind.BRANCH
CONDITION = UniversalNodeKind.CONDITION

MEASURED_KINDS = (FUNCTION_DECL, LOOP, BRANCH_STATEMENT, BRANCH)

# binary logical operators counted by the extended CC mode, per language id
LOGICAL_OPERATORS = {
    "modula2": frozenset(["AND", "OR", "&"]),
    "javaoo": frozenset(["&&", "||"]),
}
ANY_LOGICAL_OPERATOR = frozenset().union(*LOGICAL_OPERATORS.values())


class UnsupportedElementError(Exception):
    pass


class LocBundle(NamedTuple):
    loc: int
    sloc: int
    cloc: int


@dataclass(frozen=True)
class ElementMetrics:
    element_name: str
    annotation: UniversalNodeKind
    cc: int
    loc: int
    sloc: int
    cloc: int
    span: SourceSpan


@dataclass
class MetricsReport:
    source_path: str
    language_id: str
    rows: List[ElementMetrics] = field(default_factory=list)
    totals: LocBundle = LocBundle(0, 0, 0)


def is_decision_point(node):
    if node.kind is LOOP:
        return True
    return node.kind is BRANCH and any(child.kind is CONDITION for child in node.children)


def decision_count(node, extended=False, language_id=None):
    operators = LOGICAL_OPERATORS.get(language_id, ANY_LOGICAL_OPERATOR)
    count = 0
    stack = [(node, False)]
    while stack:
        current, in_condition = stack.pop()
        if is_decision_point(current):
            count += 1
        elif extended and in_condition and current.token_type == "operator" and current.label in operators:
            count += 1
        in_condition = in_condition or current.kind is CONDITION
        stack.extend((child, in_condition) for child in current.children)
    return count


def cyclomatic_complexity(node, extended=False, language_id=None):
    if node.kind not in MEASURED_KINDS:
        raise UnsupportedElementError(f"cyclomatic complexity is not defined for {node.kind or node.label!r}")
    if node.kind is FUNCTION_DECL:
        return 1 + decision_count(node, extended, language_id)
    return decision_count(node, extended, language_id)


def _line_masks(node, first_line, line_count):
    code = np.zeros(line_count, dtype=bool)
    comment = np.zeros(line_count, dtype=bool)
    for token in node.concrete_descendants():
        span = token.token_span
        mask = comment if token.is_comment else code
        mask[span.start_line - first_line:span.end_line - first_line + 1] = True
    return code, comment


def loc_bundle(node, tree):
    span = subtree_span(node)
    if span.end_line > tree.total_lines:
        raise MalformedTreeError(f"span {span} lies past the end of {tree.source_path} ({tree.total_lines} lines)")
    code, comment = _line_masks(node, span.start_line, span.line_count)
    return LocBundle(span.line_count, int(np.count_nonzero(code)), int(np.count_nonzero(comment)))


def file_totals(tree):
    code, comment = _line_masks(tree.root, 1, tree.total_lines)
    return LocBundle(tree.total_lines, int(np.count_nonzero(code)), int(np.count_nonzero(comment)))


def element_name(node):
    if node.kind is FUNCTION_DECL:
        return unit_name(node)
    if node.kind is BRANCH_STATEMENT:
        return "BRANCHING"
    return leading_keywords(node)


def measure_tree(tree, extended=False):
    report = MetricsReport(tree.source_path, tree.language_id)
    for node in iter_preorder(tree.root):
        if node.kind not in MEASURED_KINDS:
            continue
        loc, sloc, cloc = loc_bundle(node, tree)
        report.rows.append(ElementMetrics(
            element_name=element_name(node),
            annotation=node.kind,
            cc=cyclomatic_complexity(node, extended, tree.language_id),
            loc=loc,
            sloc=sloc,
            cloc=cloc,
            span=subtree_span(node),
        ))
    report.totals = file_totals(tree)
    logger.debug("measured %s: %d elements", tree.source_path, len(report.rows))
    return report


def format_table(report):
    header = ("PL element", "Annotation in eCST", "CC", "LOC", "SLOC", "CLOC")
    rows = [(r.element_name, r.annotation.value, r.cc, r.loc, r.sloc, r.cloc) for r in report.rows]
    widths = [max([len(str(h))] + [len(str(row[i])) for row in rows]) for i, h in enumerate(header)]

    def line(cells):
        return "  ".join(str(c).ljust(w) if i < 2 else str(c).rjust(w)
                         for i, (c, w) in enumerate(zip(cells, widths))).rstrip()

    out = [f"{report.source_path} ({report.language_id})", line(header), line("-" * w for w in widths)]
    out.extend(line(row) for row in rows)
    totals = report.totals
    out.append(f"totals: loc={totals.loc} sloc={totals.sloc} cloc={totals.cloc}")
    return "\n".join(out)
