import random

import pytest

from src.ecst import (
    EcstNode, EcstTree, MalformedTreeError, SourceSpan, UniversalNodeKind,
    find_nodes, leading_keywords, render_outline, subtree_span, traverse_preorder, unit_name,
)
from src.modula2 import Modula2Frontend

K = UniversalNodeKind

IF_CHAIN = """MODULE M;
VAR a, b, res : INTEGER;
BEGIN
  IF a > b THEN res := 1
  ELSIF a = b THEN res := 0
  ELSE res := -1
  END
END M.
"""


def token(lexeme, line, column, token_type="identifier"):
    return EcstNode.concrete(lexeme, token_type, SourceSpan(line, column, line, column + len(lexeme) - 1))


def minimal_tree():
    root = EcstNode.universal(K.COMPILATION_UNIT)
    root.children.append(token("a", 1, 1))
    return EcstTree(root, "a.mod", "modula2", 1).renumber()


def count_nodes(node):
    return 1 + sum(count_nodes(child) for child in node.children)


def random_tree(rng, max_depth=5):
    line = [1]

    def next_token():
        line[0] += 1
        return token(f"t{line[0]}", line[0], 1)

    def build(kind, depth):
        node = EcstNode.universal(kind)
        node.children.append(next_token())
        for _ in range(rng.randint(0, 3)):
            if depth < max_depth and rng.random() < 0.5:
                node.children.append(build(rng.choice([K.FUNCTION_DECL, K.LOOP_STATEMENT]), depth + 1))
            else:
                node.children.append(next_token())
        return node

    root = build(K.COMPILATION_UNIT, 0)
    return EcstTree(root, "random", "modula2", line[0]).renumber()


def test_traverse_minimal_tree():
    tree = minimal_tree()
    nodes = traverse_preorder(tree)
    assert len(nodes) == 2
    assert nodes[0] is tree.root
    assert nodes[1].label == "a"


def test_traverse_if_chain_orders_markers():
    tree = Modula2Frontend().parse_source(IF_CHAIN, "m.mod")
    nodes = traverse_preorder(tree)
    index = {id(node): i for i, node in enumerate(nodes)}
    [statement] = find_nodes(tree, K.BRANCH_STATEMENT)
    branches = [child for child in statement.children if child.is_universal]
    assert [leading_keywords(b) for b in branches] == ["IF", "ELSIF", "ELSE"]
    for branch in branches:
        assert index[id(statement)] < index[id(branch)]
        for condition in (c for c in branch.children if c.kind is K.CONDITION):
            assert index[id(branch)] < index[id(condition)]


def test_traverse_visits_every_node_once(corpus_tree):
    nodes = traverse_preorder(corpus_tree)
    assert len(nodes) == count_nodes(corpus_tree.root) == len(corpus_tree)
    assert len({id(node) for node in nodes}) == len(nodes)
    assert [node.node_id for node in nodes] == list(range(len(nodes)))


@pytest.mark.parametrize("seed", range(20))
def test_traverse_random_trees(seed):
    tree = random_tree(random.Random(seed))
    nodes = traverse_preorder(tree)
    position = {id(node): i for i, node in enumerate(nodes)}
    for node in nodes:
        child_positions = [position[id(child)] for child in node.children]
        assert all(position[id(node)] < p for p in child_positions)
        assert child_positions == sorted(child_positions)
    lines = [node.token_span.start_line for node in nodes if not node.is_universal]
    assert lines == sorted(lines)


def test_find_nodes_modula_loops(modula_tree):
    loops = find_nodes(modula_tree, K.LOOP_STATEMENT)
    assert [leading_keywords(loop) for loop in loops] == ["REPEAT", "WHILE", "WHILE"]


def test_find_nodes_java_branch_statements(java_tree):
    assert len(find_nodes(java_tree, K.BRANCH_STATEMENT)) == 3


def test_find_nodes_empty_unit():
    tree = minimal_tree()
    for kind in K:
        if kind is not K.COMPILATION_UNIT:
            assert find_nodes(tree, kind) == []
    assert find_nodes(tree, K.COMPILATION_UNIT) == [tree.root]


def test_find_nodes_matches_filtered_traversal(corpus_tree):
    for kind in K:
        expected = [node for node in traverse_preorder(corpus_tree) if node.kind is kind]
        assert find_nodes(corpus_tree, kind) == expected


def test_subtree_span_of_concrete_node():
    node = token("Middle", 3, 5)
    assert subtree_span(node) == SourceSpan(3, 5, 3, 10)


def test_subtree_span_of_branch_statement(modula_tree):
    first = find_nodes(modula_tree, K.BRANCH_STATEMENT)[0]
    span = subtree_span(first)
    assert (span.start_line, span.end_line) == (31, 38)


def test_subtree_span_of_function(modula_tree):
    [sort] = find_nodes(modula_tree, K.FUNCTION_DECL)
    assert subtree_span(sort) == SourceSpan(16, 1, 46, 8)
    assert unit_name(sort) == "Sort"


def test_subtree_span_rejects_empty_universal_node():
    with pytest.raises(MalformedTreeError):
        subtree_span(EcstNode.universal(K.LOOP_STATEMENT))


def test_parent_span_contains_child_spans(corpus_tree):
    for node in traverse_preorder(corpus_tree):
        if node.is_universal:
            for child in node.children:
                assert subtree_span(node).contains(subtree_span(child))


def test_span_tie_break_uses_columns():
    span = SourceSpan.cover([SourceSpan(2, 9, 2, 9), SourceSpan(2, 3, 2, 4), SourceSpan(2, 12, 2, 14)])
    assert span == SourceSpan(2, 3, 2, 14)


def test_span_must_not_end_before_start():
    with pytest.raises(MalformedTreeError):
        SourceSpan(4, 1, 3, 1)
    with pytest.raises(MalformedTreeError):
        SourceSpan(3, 5, 3, 4)


def test_root_must_be_compilation_unit():
    with pytest.raises(MalformedTreeError):
        EcstTree(EcstNode.universal(K.FUNCTION_DECL), "x", "modula2", 1)


def test_validate_rejects_misplaced_markers():
    root = EcstNode.universal(K.COMPILATION_UNIT)
    statement = EcstNode.universal(K.BRANCH_STATEMENT)
    loop = EcstNode.universal(K.LOOP_STATEMENT)
    loop.children.append(token("WHILE", 1, 1, "keyword"))
    statement.children.append(loop)
    root.children.append(statement)
    with pytest.raises(MalformedTreeError, match="BRANCH_STATEMENT"):
        EcstTree(root, "x", "modula2", 1).renumber().validate()

    root = EcstNode.universal(K.COMPILATION_UNIT)
    condition = EcstNode.universal(K.CONDITION)
    condition.children.append(token("a", 1, 1))
    root.children.append(condition)
    with pytest.raises(MalformedTreeError, match="CONDITION"):
        EcstTree(root, "x", "modula2", 1).renumber().validate()


def test_validate_requires_unit_identifier():
    root = EcstNode.universal(K.COMPILATION_UNIT)
    function = EcstNode.universal(K.FUNCTION_DECL)
    function.children.append(token("PROCEDURE", 1, 1, "keyword"))
    root.children.append(function)
    with pytest.raises(MalformedTreeError, match="identifier"):
        EcstTree(root, "x", "modula2", 1).renumber().validate()


def test_render_outline():
    tree = Modula2Frontend().parse_source(IF_CHAIN, "m.mod")
    skeleton = render_outline(tree, universal_only=True).splitlines()
    assert skeleton == [
        "COMPILATION_UNIT",
        "  BRANCH_STATEMENT",
        "    BRANCH",
        "      CONDITION",
        "    BRANCH",
        "      CONDITION",
        "    BRANCH",
    ]
    assert "  MODULE (keyword) 1:1" in render_outline(tree).splitlines()
