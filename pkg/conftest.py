import os

import pytest

from src.registry import load_registry, parse_file

collect_ignore = ["examples"]

ROOT = os.path.dirname(os.path.abspath(__file__))
FIXTURES = os.path.join(ROOT, "fixtures")
REGISTRY = os.path.join(ROOT, "languages.xml")

QUICKSORTS = ["QuickSort.mod", "QuickSort.java"]
CORPUS = ["QuickSort.mod", "QuickSort.java", "QuickSortWhile.java", "Commented.mod"]


def fixture_path(name):
    return os.path.join(FIXTURES, name)


def read_fixture(name):
    with open(fixture_path(name), encoding="utf-8") as f:
        return f.read()


@pytest.fixture(scope="session")
def registry():
    return load_registry(REGISTRY)


@pytest.fixture
def modula_tree(registry):
    return parse_file(fixture_path("QuickSort.mod"), registry)


@pytest.fixture
def java_tree(registry):
    return parse_file(fixture_path("QuickSort.java"), registry)


@pytest.fixture(params=QUICKSORTS)
def quicksort_tree(request, registry):
    return parse_file(fixture_path(request.param), registry)


@pytest.fixture(params=CORPUS)
def corpus_tree(request, registry):
    return parse_file(fixture_path(request.param), registry)
