# eCST document:
#
#   <ecst source="PATH" language="LANGUAGE_ID" totalLines="N">
#     <node kind="COMPILATION_UNIT">
#       <node kind="...">...</node>
#       <token type="TOKEN_TYPE" line="L" col="C" endLine="L2" endCol="C2">LEXEME</token>
#     </node>
#   </ecst>
#
# Only <token> elements carry positions; universal node spans are derived again on load.
#
# Metrics document:
#
#   <metrics source="PATH" language="LANGUAGE_ID">
#     <element name="NAME" annotation="KIND" cc="N" loc="N" sloc="N" cloc="N" startLine="L" endLine="L2"/>
#     <totals loc="N" sloc="N" cloc="N"/>
#   </metrics>
import logging

from lxml import etree

from .ecst import TOKEN_TYPES, EcstNode, EcstTree, MalformedTreeError, SourceSpan, UniversalNodeKind

logger = logging.getLogger(__name__)


class TreeXmlError(Exception):
    pass


def _tostring(root):
    return etree.tostring(root, pretty_print=True, xml_declaration=True, encoding="UTF-8")


def _node_to_xml(parent, node):
    if node.is_universal:
        elt = etree.SubElement(parent, "node", kind=node.kind.value)
        for child in node.children:
            _node_to_xml(elt, child)
    else:
        span = node.token_span
        elt = etree.SubElement(parent, "token")
        elt.set("type", node.token_type)
        elt.set("line", str(span.start_line))
        elt.set("col", str(span.start_column))
        elt.set("endLine", str(span.end_line))
        elt.set("endCol", str(span.end_column))
        elt.text = node.label


def serialize_tree(tree):
    root = etree.Element("ecst")
    root.set("source", tree.source_path)
    root.set("language", tree.language_id)
    root.set("totalLines", str(tree.total_lines))
    try:
        _node_to_xml(root, tree.root)
    except ValueError as e:
        # lxml refuses text outside the XML character set
        raise TreeXmlError(f"cannot store eCST of {tree.source_path}: {e}") from e
    return _tostring(root)


def _fail(elt, message):
    return TreeXmlError(f"<{elt.tag}> at line {elt.sourceline}: {message}")


def _int_attribute(elt, name):
    value = elt.get(name)
    if value is None:
        raise _fail(elt, f"missing attribute {name!r}")
    try:
        number = int(value)
    except ValueError:
        raise _fail(elt, f"attribute {name}={value!r} is not an integer") from None
    if number < 1:
        raise _fail(elt, f"attribute {name}={value!r} must be positive")
    return number


def _check_no_text(elt):
    for text in (elt.text, *(child.tail for child in elt)):
        if text and text.strip():
            raise _fail(elt, f"unexpected text {text.strip()!r}")


def _children(elt):
    return [child for child in elt if isinstance(child.tag, str)]


def _node_from_xml(elt):
    if elt.tag == "node":
        try:
            kind = UniversalNodeKind.parse(elt.get("kind", ""))
        except ValueError as e:
            raise _fail(elt, str(e)) from None
        _check_no_text(elt)
        node = EcstNode.universal(kind)
        node.children = [_node_from_xml(child) for child in _children(elt)]
        return node
    if elt.tag == "token":
        token_type = elt.get("type")
        if token_type not in TOKEN_TYPES:
            raise _fail(elt, f"unknown token type {token_type!r}")
        if _children(elt):
            raise _fail(elt, "tokens cannot have child elements")
        if not elt.text:
            raise _fail(elt, "empty lexeme")
        try:
            span = SourceSpan(_int_attribute(elt, "line"), _int_attribute(elt, "col"),
                              _int_attribute(elt, "endLine"), _int_attribute(elt, "endCol"))
        except MalformedTreeError as e:
            raise _fail(elt, str(e)) from None
        return EcstNode.concrete(elt.text, token_type, span)
    raise _fail(elt, "unknown element")


def parse_tree_xml(document):
    try:
        root = etree.fromstring(document)
    except (etree.XMLSyntaxError, ValueError) as e:
        raise TreeXmlError(f"not a well-formed eCST document: {e}") from e
    if root.tag != "ecst":
        raise _fail(root, "eCST documents start with <ecst>")
    for name in ("source", "language"):
        if root.get(name) is None:
            raise _fail(root, f"missing attribute {name!r}")
    total_lines = _int_attribute(root, "totalLines")
    _check_no_text(root)
    top = _children(root)
    if len(top) != 1 or top[0].tag != "node" or top[0].get("kind") != UniversalNodeKind.COMPILATION_UNIT.value:
        raise _fail(root, "expected exactly one <node kind=\"COMPILATION_UNIT\">")
    try:
        tree = EcstTree(_node_from_xml(top[0]), root.get("source"), root.get("language"), total_lines)
        tree.renumber().validate()
    except MalformedTreeError as e:
        raise TreeXmlError(f"eCST document describes a malformed tree: {e}") from e
    logger.debug("loaded eCST of %s (%d nodes)", tree.source_path, len(tree))
    return tree


def serialize_metrics(report):
    root = etree.Element("metrics")
    root.set("source", report.source_path)
    root.set("language", report.language_id)
    for row in report.rows:
        elt = etree.SubElement(root, "element")
        elt.set("name", row.element_name)
        elt.set("annotation", row.annotation.value)
        elt.set("cc", str(row.cc))
        elt.set("loc", str(row.loc))
        elt.set("sloc", str(row.sloc))
        elt.set("cloc", str(row.cloc))
        elt.set("startLine", str(row.span.start_line))
        elt.set("endLine", str(row.span.end_line))
    totals = etree.SubElement(root, "totals")
    totals.set("loc", str(report.totals.loc))
    totals.set("sloc", str(report.totals.sloc))
    totals.set("cloc", str(report.totals.cloc))
    return _tostring(root)
