import json

import pytest
import sympy

from lamiter.arith import primes_upto
from lamiter.carmichael import big_L
from lamiter.pratt import (
    branch_bound,
    branch_excess,
    branches,
    build_tree,
    height,
    level_counts,
    render_tree,
)


def children(node):
    return [(c.p, c.alpha) for c in node.children]


def test_tree_of_two():
    t = build_tree(2)
    assert t.p == 2 and t.alpha is None and t.children == ()


def test_tree_of_3691():
    t = build_tree(3691)
    assert children(t) == [(2, 1), (3, 2), (5, 1), (41, 1)]
    sub = {c.p: c for c in t.children}
    assert children(sub[41]) == [(2, 3), (5, 1)]
    assert children(sub[5]) == [(2, 2)]
    assert children(sub[3]) == [(2, 1)]


def test_tree_of_7():
    t = build_tree(7)
    assert children(t) == [(2, 1), (3, 1)]
    assert children(t.children[1]) == [(2, 1)]


def test_build_tree_rejects_composites():
    with pytest.raises(ValueError):
        build_tree(91)


def test_tree_invariants():
    memo = {}
    for p in primes_upto(3000):
        t = build_tree(int(p), memo)
        for _, node in t.walk():
            if node.p == 2:
                assert node.children == ()
                continue
            prod = 1
            for c in node.children:
                assert (node.p - 1) % c.p**c.alpha == 0
                assert (node.p - 1) % c.p ** (c.alpha + 1) != 0
                prod *= c.p**c.alpha
            assert prod == node.p - 1
            assert [c.p for c in node.children] == sorted(c.p for c in node.children)
        assert all(node.p == 2 for _, node in t.walk() if not node.children)


def test_shared_memo_reuses_subtrees():
    memo = {}
    a = build_tree(3691, memo)
    b = build_tree(41, memo)
    assert a.children[3].children is b.children


@pytest.mark.parametrize("p,expected", [(2, 0), (3691, 3), (41, 2), (3, 1), (7, 2)])
def test_height(p, expected):
    assert height(p) == expected
    assert height(build_tree(p)) == expected


@pytest.mark.parametrize(
    "p,expected", [(2, [1]), (3691, [1, 4, 4, 1]), (7, [1, 2, 1])]
)
def test_level_counts(p, expected):
    assert level_counts(p) == expected


def test_level_counts_distinct():
    assert level_counts(3691, distinct=True) == [1, 4, 2, 1]


def test_level_counts_shape():
    for p in primes_upto(5000):
        p = int(p)
        counts = level_counts(p)
        assert counts[0] == 1
        assert len(counts) == height(p) + 1
        assert sum(counts) == sum(1 for _ in build_tree(p).walk())


@pytest.mark.parametrize("p,expected", [(3, 0), (41, 2), (3691, 2), (2, 0), (17, 3)])
def test_branch_excess(p, expected):
    assert branch_excess(p) == expected


def test_branches_of_41():
    got = sorted(branches(41))
    assert got == [((41, 2), (3,)), ((41, 5, 2), (1, 2))]


def test_height_below_L_and_branch_bound():
    memo = {}
    for p in primes_upto(20000):
        p = int(p)
        t = build_tree(p, memo)
        L, H = big_L(p), height(t)
        assert H < L
        assert L <= branch_bound(t)
        assert L <= H + branch_excess(t) + 1


def test_render_json():
    assert render_tree(build_tree(2), "json") == '{"p":2,"children":[]}'
    assert render_tree(build_tree(3), "json") == '{"p":3,"children":[{"p":2,"alpha":1,"children":[]}]}'
    doc = json.loads(render_tree(build_tree(3691), "json"))
    assert [c["p"] for c in doc["children"]] == [2, 3, 5, 41]
    assert "alpha" not in doc


def test_render_dot():
    dot = render_tree(build_tree(3691), "dot")
    assert dot.startswith("digraph")
    assert '"3691" -> "3691/41";' in dot
    assert '"3691" -> "3691/3" [label=2];' in dot
    assert '"3691/41" -> "3691/41/2" [label=3];' in dot
    assert dot == render_tree(build_tree(3691), "dot")
    # one DOT node per instance: 10 nodes in the tree
    assert dot.count("[label=\"") == 10


def test_render_unknown_format():
    with pytest.raises(ValueError):
        render_tree(build_tree(3), "svg")


def test_large_prime_tree():
    p = sympy.prevprime(2**61)
    t = build_tree(p)
    assert height(t) == max(d for d, _ in t.walk())
