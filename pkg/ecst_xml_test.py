import pytest
from lxml import etree

from conftest import fixture_path
from ecst_test import minimal_tree, token
from src.ecst_xml import TreeXmlError, parse_tree_xml, serialize_metrics, serialize_tree
from src.metrics import LocBundle, MetricsReport, measure_tree
from src.registry import lex, parse, parse_file

VALID = b"""<?xml version='1.0' encoding='UTF-8'?>
<ecst source="a.mod" language="modula2" totalLines="1">
  <node kind="COMPILATION_UNIT">
    <token type="identifier" line="1" col="1" endLine="1" endCol="1">a</token>
  </node>
</ecst>
"""


def test_serialize_minimal_tree():
    document = serialize_tree(minimal_tree())
    root = etree.fromstring(document)
    assert root.tag == "ecst"
    assert root.attrib == {"source": "a.mod", "language": "modula2", "totalLines": "1"}
    [unit] = root
    assert unit.tag == "node" and unit.get("kind") == "COMPILATION_UNIT"
    [token] = unit
    assert token.tag == "token" and token.text == "a"
    assert dict(token.attrib) == {"type": "identifier", "line": "1", "col": "1", "endLine": "1", "endCol": "1"}


def test_serialized_layout_is_fixed():
    assert serialize_tree(minimal_tree()) == VALID


def test_serialize_refuses_control_characters():
    tree = minimal_tree()
    tree.root.children.append(token("\x07", 1, 2, "comment"))
    with pytest.raises(TreeXmlError, match="a.mod"):
        serialize_tree(tree)


def test_serialize_branch_markers(modula_tree):
    root = etree.fromstring(serialize_tree(modula_tree))
    conditions = root.xpath('//node[@kind="BRANCH_STATEMENT"]/node[@kind="BRANCH"]/node[@kind="CONDITION"]')
    assert len(conditions) == 3


def test_round_trip(corpus_tree):
    document = serialize_tree(corpus_tree)
    reloaded = parse_tree_xml(document)
    assert reloaded == corpus_tree
    assert serialize_tree(reloaded) == document


def test_serialization_is_deterministic(corpus_tree):
    assert serialize_tree(corpus_tree) == serialize_tree(corpus_tree)


def test_round_trip_escapes_lexemes():
    source = 'class T { static void m(int a, int b) {\n  if (a < b && b > 0) a = b; /* <&> */\n  String s = "x&y";\n} }'
    tree = parse(lex(source, "javaoo"), "javaoo", "T.java")
    document = serialize_tree(tree)
    assert b"&lt;" in document and b"&amp;&amp;" in document
    assert parse_tree_xml(document) == tree


def test_distinct_trees_serialize_differently(modula_tree, java_tree):
    assert serialize_tree(modula_tree) != serialize_tree(java_tree)


def test_unknown_kind_is_rejected():
    document = VALID.replace(b'kind="COMPILATION_UNIT"', b'kind="COMPILATION_UNIT"><node kind="SWITCH"')
    document = document.replace(b"</node>", b"</node></node>")
    with pytest.raises(TreeXmlError, match="SWITCH"):
        parse_tree_xml(document)


@pytest.mark.parametrize("document", [b"", b"   ", b"<ecst"])
def test_unparsable_documents(document):
    with pytest.raises(TreeXmlError):
        parse_tree_xml(document)


@pytest.mark.parametrize("old, new, message", [
    (b"<ecst ", b"<tree ", "tree"),
    (b' totalLines="1"', b"", "totalLines"),
    (b' col="1"', b"", "col"),
    (b'type="identifier"', b'type="whitespace"', "whitespace"),
    (b'endCol="1">a<', b'endCol="1"><', "empty lexeme"),
    (b'<token type', b'<tok type', "tok"),
    (b'kind="COMPILATION_UNIT"', b'kind="LOOP_STATEMENT"', "COMPILATION_UNIT"),
    (b'line="1" col="1"', b'line="1" col="4"', "span"),
    (b'endLine="1"', b'endLine="2"', "past line"),
])
def test_schema_violations_name_the_problem(old, new, message):
    document = VALID.replace(old, new)
    if old == b"<ecst ":
        document = document.replace(b"</ecst>", b"</tree>")
    if old == b"<token type":
        document = document.replace(b"</token>", b"</tok>")
    with pytest.raises(TreeXmlError, match=message):
        parse_tree_xml(document)


def test_schema_violation_names_line():
    with pytest.raises(TreeXmlError, match="line 4"):
        parse_tree_xml(VALID.replace(b'type="identifier"', b'type="bogus"'))


def test_serialize_metrics_rows(modula_tree):
    root = etree.fromstring(serialize_metrics(measure_tree(modula_tree)))
    assert root.tag == "metrics"
    elements = root.findall("element")
    assert len(elements) == 10
    first = elements[0]
    assert (first.get("name"), first.get("annotation"), first.get("cc")) == ("Sort", "FUNCTION_DECL", "7")
    assert list(first.attrib) == ["name", "annotation", "cc", "loc", "sloc", "cloc", "startLine", "endLine"]
    assert root[-1].tag == "totals"


def test_serialize_empty_report():
    report = MetricsReport("empty.java", "javaoo", [], LocBundle(3, 1, 2))
    root = etree.fromstring(serialize_metrics(report))
    assert root.findall("element") == []
    assert dict(root.find("totals").attrib) == {"loc": "3", "sloc": "1", "cloc": "2"}


def test_serialize_metrics_is_deterministic(registry):
    tree = parse_file(fixture_path("QuickSort.java"), registry)
    assert serialize_metrics(measure_tree(tree)) == serialize_metrics(measure_tree(tree))
