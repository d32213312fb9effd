"""Oriented, labeled unitrivalent trees with canonical encodings.

Trees come in three kinds.  A rooted tree is an ordered binary tree
(`Leaf`/`Node`) whose leaf labels are integers in 1..m; the
(first, second) order at a `Node` encodes the cyclic orientation
(incoming edge, first, second) at that trivalent vertex, so structural
equality of the encoding is isomorphism of oriented rooted trees.  An
unrooted tree is stored as a canonical two-sided split `<I,J>`: over
all edges and both orientations, the pair minimizing the lexicographic
order of printed forms (with print(I) <= print(J)) is kept.  An
inf-tree is a rooted tree whose root vertex carries the distinguished
infinity label instead of being bare.

The order of a tree is its number of trivalent vertices.  Orientation
reversal at a single vertex (`as_variant`) and the local Jacobi
rewiring at an internal edge (`ihx_triple`) are the moves from which
the relation sets of the quotient groups are generated downstream.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Union

from .errors import ResourceLimitError, TreeformsError, TreeSyntaxError

# Enumeration refuses to materialize more trees than this unless the
# caller raises the cap explicitly.
DEFAULT_ENUM_CAP = 100_000


@dataclass(frozen=True)
class Leaf:
    label: int

    def __post_init__(self):
        if self.label < 1:
            raise TreeformsError(f"leaf labels start at 1, got {self.label}")


@dataclass(frozen=True)
class Node:
    first: "RootedTree"
    second: "RootedTree"


RootedTree = Union[Leaf, Node]


@dataclass(frozen=True)
class UnrootedTree:
    """Unrooted oriented tree as a split into two rooted halves.

    Instances produced by this module are always in canonical-split
    form; build them through `inner_product` or `canonical_unrooted`,
    never directly.
    """

    first: RootedTree
    second: RootedTree


@dataclass(frozen=True)
class InfTree:
    body: RootedTree


Tree = Union[RootedTree, UnrootedTree, InfTree]


def tree_kind(t: Tree) -> str:
    if isinstance(t, (Leaf, Node)):
        return "rooted"
    if isinstance(t, UnrootedTree):
        return "unrooted"
    if isinstance(t, InfTree):
        return "inf"
    raise TreeformsError(f"not a tree: {t!r}")


def order(t: Tree) -> int:
    """Number of trivalent vertices; for an inf-tree, of its body."""
    if isinstance(t, Leaf):
        return 0
    if isinstance(t, Node):
        return order(t.first) + order(t.second) + 1
    if isinstance(t, UnrootedTree):
        return order(t.first) + order(t.second)
    if isinstance(t, InfTree):
        return order(t.body)
    raise TreeformsError(f"not a tree: {t!r}")


@functools.lru_cache(maxsize=None)
def _print_rooted(t: RootedTree) -> str:
    if isinstance(t, Leaf):
        return str(t.label)
    return f"({_print_rooted(t.first)},{_print_rooted(t.second)})"


def print_tree(t: Tree) -> str:
    """Canonical text form; round-trips with `parse_tree`."""
    if isinstance(t, (Leaf, Node)):
        return _print_rooted(t)
    if isinstance(t, UnrootedTree):
        return f"<{_print_rooted(t.first)},{_print_rooted(t.second)}>"
    if isinstance(t, InfTree):
        return f"inf({_print_rooted(t.body)})"
    raise TreeformsError(f"not a tree: {t!r}")


def leaf_labels(t: Tree) -> tuple:
    """Sorted multiset of univalent-vertex labels (root excluded)."""
    out = []

    def walk(x):
        if isinstance(x, Leaf):
            out.append(x.label)
        else:
            walk(x.first)
            walk(x.second)

    if isinstance(t, UnrootedTree):
        walk(t.first)
        walk(t.second)
    elif isinstance(t, InfTree):
        walk(t.body)
    else:
        walk(t)
    return tuple(sorted(out))


def max_label(t: Tree) -> int:
    return max(leaf_labels(t))


# ---------------------------------------------------------------------------
# parsing


class _Cursor:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            raise TreeSyntaxError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def at_end(self):
        self.skip_ws()
        return self.pos >= len(self.text)


def _parse_label(cur: _Cursor, max_lbl) -> Leaf:
    cur.skip_ws()
    start = cur.pos
    while cur.pos < len(cur.text) and cur.text[cur.pos].isdigit():
        cur.pos += 1
    if cur.pos == start:
        raise TreeSyntaxError("expected a leaf label", start)
    value = int(cur.text[start:cur.pos])
    if value < 1:
        raise TreeSyntaxError("leaf labels start at 1", start)
    if max_lbl is not None and value > max_lbl:
        raise TreeSyntaxError(f"label {value} out of range 1..{max_lbl}", start)
    return Leaf(value)


def _parse_rooted(cur: _Cursor, max_lbl) -> RootedTree:
    ch = cur.peek()
    if ch == "(":
        cur.expect("(")
        first = _parse_rooted(cur, max_lbl)
        cur.expect(",")
        second = _parse_rooted(cur, max_lbl)
        cur.expect(")")
        return Node(first, second)
    return _parse_label(cur, max_lbl)


def parse_tree(text: str, max_label: "int | None" = None) -> Tree:
    """Parse `leaf | (R,R) | <R,R> | inf(R)`; unrooted input is canonicalized."""
    cur = _Cursor(text)
    ch = cur.peek()
    if ch == "<":
        cur.expect("<")
        first = _parse_rooted(cur, max_label)
        cur.expect(",")
        second = _parse_rooted(cur, max_label)
        cur.expect(">")
        t: Tree = canonical_unrooted(UnrootedTree(first, second))
    elif cur.text.startswith("inf", cur.pos):
        cur.pos += 3
        cur.expect("(")
        body = _parse_rooted(cur, max_label)
        cur.expect(")")
        t = InfTree(body)
    else:
        t = _parse_rooted(cur, max_label)
    if not cur.at_end():
        raise TreeSyntaxError("trailing input", cur.pos)
    return t


# ---------------------------------------------------------------------------
# products, splits, canonical form


def rooted_product(i: RootedTree, j: RootedTree) -> RootedTree:
    """Join two roots at a new trivalent vertex, oriented (in, i, j)."""
    if not isinstance(i, (Leaf, Node)) or not isinstance(j, (Leaf, Node)):
        raise TreeformsError("rooted_product takes rooted trees")
    return Node(i, j)


def _splits_of_pair(first: RootedTree, second: RootedTree):
    """One ordered split per edge of the unrooted tree glued from the pair.

    Splitting at an edge cuts the tree in two; each half is rooted at
    its endpoint of the cut edge.  Re-rooting preserves the cyclic
    order (in, first, second) at every vertex, which fixes the child
    order of the context tree below.
    """
    out = [(first, second)]

    def inside(x, ctx):
        if isinstance(x, Node):
            left_ctx = Node(x.second, ctx)
            out.append((x.first, left_ctx))
            inside(x.first, left_ctx)
            right_ctx = Node(ctx, x.first)
            out.append((x.second, right_ctx))
            inside(x.second, right_ctx)

    inside(first, second)
    inside(second, first)
    return out


def canonical_unrooted(t: UnrootedTree) -> UnrootedTree:
    """Canonical-split form: minimal (print(I), print(J)) over all edges."""
    best = None
    best_key = None
    for x, y in _splits_of_pair(t.first, t.second):
        px, py = _print_rooted(x), _print_rooted(y)
        if px > py:
            x, y, px, py = y, x, py, px
        key = (px, py)
        if best_key is None or key < best_key:
            best, best_key = (x, y), key
    return UnrootedTree(*best)


def inner_product(i: RootedTree, j: RootedTree) -> UnrootedTree:
    """Glue two rooted trees along their root edges; canonical result."""
    if not isinstance(i, (Leaf, Node)) or not isinstance(j, (Leaf, Node)):
        raise TreeformsError("inner_product takes rooted trees")
    return canonical_unrooted(UnrootedTree(i, j))


def splits(t: UnrootedTree):
    """One (I, J) with <I,J> = t per edge of t; 2*order(t)+1 entries."""
    if not isinstance(t, UnrootedTree):
        raise TreeformsError("splits takes an unrooted tree")
    return _splits_of_pair(t.first, t.second)


# ---------------------------------------------------------------------------
# vertices, orientation reversal, IHX rewiring


def _node_paths(t: RootedTree):
    """Paths (tuples of 0/1) of Node positions, preorder."""
    out = []

    def walk(x, path):
        if isinstance(x, Node):
            out.append(path)
            walk(x.first, path + (0,))
            walk(x.second, path + (1,))

    walk(t, ())
    return out


def _subtree_at(t: RootedTree, path) -> RootedTree:
    for step in path:
        t = t.first if step == 0 else t.second
    return t


def _replace_at(t: RootedTree, path, new: RootedTree) -> RootedTree:
    if not path:
        return new
    if path[0] == 0:
        return Node(_replace_at(t.first, path[1:], new), t.second)
    return Node(t.first, _replace_at(t.second, path[1:], new))


def as_variant(t: Tree, v: int) -> Tree:
    """Reverse the cyclic orientation at trivalent vertex v.

    Vertex ids index the Node positions in preorder; for an unrooted
    tree the first half's vertices come before the second half's.  The
    result is re-canonicalized where applicable.
    """
    if isinstance(t, (Leaf, Node)):
        paths = _node_paths(t)
        if not 0 <= v < len(paths):
            raise TreeformsError(f"no trivalent vertex {v} in {print_tree(t)}")
        sub = _subtree_at(t, paths[v])
        return _replace_at(t, paths[v], Node(sub.second, sub.first))
    if isinstance(t, UnrootedTree):
        n1 = order(t.first)
        n = n1 + order(t.second)
        if not 0 <= v < n:
            raise TreeformsError(f"no trivalent vertex {v} in {print_tree(t)}")
        if v < n1:
            return canonical_unrooted(UnrootedTree(as_variant(t.first, v), t.second))
        return canonical_unrooted(UnrootedTree(t.first, as_variant(t.second, v - n1)))
    if isinstance(t, InfTree):
        return InfTree(as_variant(t.body, v))
    raise TreeformsError(f"not a tree: {t!r}")


def internal_edge_ids(t: Tree):
    """Ids of edges joining two trivalent vertices (rooted: root edge excluded)."""
    if isinstance(t, (Leaf, Node)):
        return list(range(sum(1 for p in _node_paths(t) if p != ())))
    if isinstance(t, UnrootedTree):
        return [
            i
            for i, (x, y) in enumerate(splits(t))
            if isinstance(x, Node) and isinstance(y, Node)
        ]
    if isinstance(t, InfTree):
        return internal_edge_ids(t.body)
    raise TreeformsError(f"not a tree: {t!r}")


def _rooted_ihx(t: RootedTree, e: int):
    """Jacobi rewiring at internal edge e of a rooted tree.

    The edge is the root edge of the Node subtree U = (A,B) sitting
    under its parent; the pendant pieces A, B, the sibling C and the
    direction of the root stay fixed.  With the orientation convention
    baked into the encoding, the three trees satisfy I - H + X = 0 in
    the quotient by antisymmetry and Jacobi relations:

        parent (U, C):  I = ((A,B),C)  H = ((A,C),B)  X = ((B,C),A)
        parent (C, U):  I = (C,(A,B))  H = (B,(A,C))  X = (A,(B,C))
    """
    paths = [p for p in _node_paths(t) if p != ()]
    if not 0 <= e < len(paths):
        raise TreeformsError(
            f"no internal edge {e} in {print_tree(t)} ({len(paths)} available)"
        )
    # internal-edge ids count only non-root Node positions
    path = paths[e]
    sub = _subtree_at(t, path)
    a, b = sub.first, sub.second
    parent_path = path[:-1]
    parent = _subtree_at(t, parent_path)
    if path[-1] == 0:
        c = parent.second
        h_parent = Node(Node(a, c), b)
        x_parent = Node(Node(b, c), a)
    else:
        c = parent.first
        h_parent = Node(b, Node(a, c))
        x_parent = Node(a, Node(b, c))
    return (
        t,
        _replace_at(t, parent_path, h_parent),
        _replace_at(t, parent_path, x_parent),
    )


def ihx_triple(t: Tree, e: int):
    """The (I, H, X) local rewirings at internal edge e; I is t itself.

    For rooted and unrooted trees the relation vector downstream is
    I - H + X.  For inf-trees the triple is taken on the body and the
    twisted relation additionally involves the pairing of H with X.
    """
    if isinstance(t, (Leaf, Node)):
        return _rooted_ihx(t, e)
    if isinstance(t, UnrootedTree):
        sp = splits(t)
        if not 0 <= e < len(sp):
            raise TreeformsError(f"no edge {e} in {print_tree(t)}")
        u, v = sp[e]
        if not (isinstance(u, Node) and isinstance(v, Node)):
            raise TreeformsError(
                f"edge {e} of {print_tree(t)} is not internal"
            )
        a, b = u.first, u.second
        c, d = v.first, v.second
        return (
            t,
            inner_product(Node(Node(a, c), b), d),
            inner_product(Node(Node(b, c), a), d),
        )
    if isinstance(t, InfTree):
        i, h, x = _rooted_ihx(t.body, e)
        return (InfTree(i), InfTree(h), InfTree(x))
    raise TreeformsError(f"not a tree: {t!r}")


# ---------------------------------------------------------------------------
# enumeration


def _catalan(n: int) -> int:
    c = 1
    for k in range(n):
        c = c * 2 * (2 * k + 1) // (k + 2)
    return c


@functools.lru_cache(maxsize=None)
def _rooted_trees(n: int, m: int):
    if n == 0:
        return tuple(Leaf(i) for i in range(1, m + 1))
    out = []
    for k in range(n):
        for first in _rooted_trees(k, m):
            for second in _rooted_trees(n - 1 - k, m):
                out.append(Node(first, second))
    return tuple(out)


def enumerate_trees(kind: str, n: int, m: int, cap: "int | None" = None):
    """All isomorphism classes of oriented trees of order n, labels 1..m.

    Complete, duplicate-free, deterministically ordered.  Orientation
    variants are distinct entries: antisymmetry is never quotiented at
    the encoding level.
    """
    if n < 0 or m < 1:
        raise TreeformsError(f"need n >= 0 and m >= 1, got ({n}, {m})")
    cap = DEFAULT_ENUM_CAP if cap is None else cap
    if kind == "rooted":
        count = _catalan(n) * m ** (n + 1)
        if count > cap:
            raise ResourceLimitError(
                f"{count} rooted trees of order {n} with {m} labels exceeds cap {cap}"
            )
        return list(_rooted_trees(n, m))
    if kind == "inf":
        return [InfTree(body) for body in enumerate_trees("rooted", n, m, cap)]
    if kind == "unrooted":
        seen = {}
        for k in range(n + 1):
            lhs = enumerate_trees("rooted", k, m, cap)
            rhs = enumerate_trees("rooted", n - k, m, cap)
            for x in lhs:
                for y in rhs:
                    t = inner_product(x, y)
                    seen[print_tree(t)] = t
                    if len(seen) > cap:
                        raise ResourceLimitError(
                            f"more than {cap} unrooted trees of order {n}"
                        )
        return [seen[key] for key in sorted(seen)]
    raise TreeformsError(f"unknown tree kind {kind!r}")


# ---------------------------------------------------------------------------
# integer linear combinations of trees


class TreeVector:
    """Finite map from canonical trees (one kind, one order) to nonzero ints."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        items = coeffs.items() if hasattr(coeffs, "items") else coeffs
        acc = {}
        for tree, c in items:
            if c:
                acc[tree] = acc.get(tree, 0) + c
        self.coeffs = {t: c for t, c in acc.items() if c}
        kinds = {tree_kind(t) for t in self.coeffs}
        orders = {order(t) for t in self.coeffs}
        if len(kinds) > 1 or len(orders) > 1:
            raise TreeformsError("mixed kinds or orders in a TreeVector")

    @classmethod
    def from_tree(cls, t: Tree, c: int = 1) -> "TreeVector":
        return cls([(t, c)])

    def items(self):
        return self.coeffs.items()

    def get(self, t, default=0):
        return self.coeffs.get(t, default)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, TreeVector) and self.coeffs == other.coeffs

    def __add__(self, other):
        return TreeVector(list(self.coeffs.items()) + list(other.coeffs.items()))

    def __neg__(self):
        return TreeVector({t: -c for t, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k: int):
        return TreeVector({t: k * c for t, c in self.coeffs.items()})

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for t in sorted(self.coeffs, key=print_tree):
            c = self.coeffs[t]
            parts.append(f"{c:+d}*{print_tree(t)}")
        return " ".join(parts)
