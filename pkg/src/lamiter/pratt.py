"""Pratt trees: the recursive tree of primes dividing p - 1.

Heights use the convention H(2) = 0, so that H(p) <= L(p) and in fact
H(p) < L(p) for every prime.  Subtrees are shared through a memo keyed by
prime; nodes are immutable, so a memo can be reused across builds and
threads (``dict.setdefault`` gives insert-if-absent semantics).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator

from .arith import factorize, is_prime


@dataclass(frozen=True)
class PrattNode:
    p: int
    alpha: int | None
    children: tuple["PrattNode", ...]

    def walk(self, depth: int = 0) -> Iterator[tuple[int, "PrattNode"]]:
        yield depth, self
        for child in self.children:
            yield from child.walk(depth + 1)


# The root of a tree is simply a node without a multiplicity.
PrattTree = PrattNode

Memo = dict[int, tuple[PrattNode, ...]]


def _children(p: int, memo: Memo) -> tuple[PrattNode, ...]:
    kids = memo.get(p)
    if kids is not None:
        return kids
    if p == 2:
        kids = ()
    else:
        kids = tuple(PrattNode(q, a, _children(q, memo)) for q, a in factorize(p - 1))
    return memo.setdefault(p, kids)


def build_tree(p: int, memo: Memo | None = None) -> PrattTree:
    """Pratt tree of the prime ``p`` with children in ascending order."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return PrattNode(p, None, _children(p, {} if memo is None else memo))


def _as_tree(p_or_tree: int | PrattTree) -> PrattTree:
    if isinstance(p_or_tree, PrattNode):
        return p_or_tree
    return build_tree(p_or_tree)


def height(p: int | PrattTree) -> int:
    """Longest root-to-leaf edge count; H(2) = 0."""
    if isinstance(p, PrattNode):
        return max(d for d, _ in p.walk())
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return _height(p, {})


def _height(p: int, cache: dict[int, int]) -> int:
    h = cache.get(p)
    if h is None:
        h = 0 if p == 2 else 1 + max(_height(q, cache) for q, _ in factorize(p - 1))
        cache[p] = h
    return h


def level_counts(p: int | PrattTree, distinct: bool = False) -> list[int]:
    """Number of nodes at each depth.

    By default every node instance is counted, so a prime reached through
    two different subtrees counts twice.  With ``distinct=True`` each prime
    counts once per level.
    """
    tree = _as_tree(p)
    if distinct:
        levels: list[set[int]] = []
        for depth, node in tree.walk():
            if depth == len(levels):
                levels.append(set())
            levels[depth].add(node.p)
        return [len(s) for s in levels]
    counts: list[int] = []
    for depth, _ in tree.walk():
        if depth == len(counts):
            counts.append(0)
        counts[depth] += 1
    return counts


def branches(p: int | PrattTree) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Yield every root-to-leaf branch as ``(primes, multiplicities)``.

    ``primes`` starts at the root; ``multiplicities[i]`` is the exponent on
    the edge into ``primes[i + 1]``.
    """
    tree = _as_tree(p)

    def rec(node, primes, alphas):
        primes = primes + (node.p,)
        if node.alpha is not None:
            alphas = alphas + (node.alpha,)
        if not node.children:
            yield primes, alphas
        for child in node.children:
            yield from rec(child, primes, alphas)

    yield from rec(tree, (), ())


def branch_excess(p: int | PrattTree) -> int:
    """max over branches of sum(alpha_i - 1)."""
    return max(sum(a - 1 for a in alphas) for _, alphas in branches(p))


def branch_bound(p: int | PrattTree) -> int:
    """max over branches of (branch length + branch excess) + 1.

    An upper bound for L(p): every edge costs one lambda step plus one
    more for each surplus power of the child prime.
    """
    return 1 + max(len(alphas) + sum(a - 1 for a in alphas) for _, alphas in branches(p))


def render_tree(tree: PrattTree, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(_node_dict(tree), separators=(",", ":"))
    if fmt == "dot":
        return _to_dot(tree)
    raise ValueError(f"unknown tree format {fmt!r}")


def _node_dict(node: PrattNode) -> dict:
    d: dict = {"p": node.p}
    if node.alpha is not None:
        d["alpha"] = node.alpha
    d["children"] = [_node_dict(c) for c in node.children]
    return d


def _to_dot(tree: PrattTree) -> str:
    # node ids are slash-joined root paths, so repeated primes stay distinct
    lines = [f"digraph pratt_{tree.p} {{"]
    edges = []

    def rec(node, path):
        lines.append(f'  "{path}" [label="{node.p}"];')
        for child in node.children:
            cpath = f"{path}/{child.p}"
            label = f" [label={child.alpha}]" if child.alpha > 1 else ""
            edges.append(f'  "{path}" -> "{cpath}"{label};')
            rec(child, cpath)

    rec(tree, str(tree.p))
    lines.extend(edges)
    lines.append("}")
    return "\n".join(lines) + "\n"
