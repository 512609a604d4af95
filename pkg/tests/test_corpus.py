from math import ceil
from random import Random

import pytest

from equitable.coloring import exact_equitable, exact_list, list_color_constructive, random_lists, validate_coloring
from equitable.configurations import load_catalog
from equitable.fixtures import load_corpus
from equitable.structure import class_membership

CORPUS = load_corpus()
SMALL = [f for f in CORPUS if f.graph.order <= 12]
SMALL_MEMBERS = [f for f in SMALL if class_membership(f.graph).is_member]
SUBCUBIC = [f for f in CORPUS if f.graph.order <= 10 and f.graph.max_degree <= 3]


def _name(fixture):
    return fixture.name


def test_sweeps_are_not_empty():
    assert len(SMALL) >= 20
    assert len(SMALL_MEMBERS) >= 15
    assert len(SUBCUBIC) >= 10


@pytest.mark.parametrize('fixture', SMALL, ids=_name)
def test_small_fixtures_take_max_degree_plus_one(fixture):
    g = fixture.graph
    k = g.max_degree + 1
    found = exact_equitable(g, k)
    assert found is not None
    assert validate_coloring(g, found.assignment, k).passed


@pytest.mark.parametrize('fixture', SUBCUBIC, ids=_name)
def test_subcubic_fixtures_are_list_colorable(fixture):
    g = fixture.graph
    k = g.max_degree + 1
    for seed in range(20):
        lists = random_lists(g, k, 3 * k, Random(seed))
        found = exact_list(g, lists)
        assert found is not None, seed
        assert validate_coloring(g, found.assignment, lists=lists).passed, seed


@pytest.mark.parametrize('fixture', SMALL_MEMBERS, ids=_name)
def test_members_are_equitably_choosable(fixture):
    g = fixture.graph
    k = max(7, g.max_degree)
    cap = ceil(g.order / k)
    catalog = load_catalog().configurations
    for seed in range(100):
        lists = random_lists(g, k, 3 * k, Random(seed))
        result = list_color_constructive(g, lists, catalog=catalog)
        assert validate_coloring(g, result.coloring.assignment, lists=lists).passed, seed
        assert max(result.coloring.usage.values()) <= cap, seed
