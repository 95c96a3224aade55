"""Rooted binary tree shapes and plane binary trees.

Two representations live here:

* :class:`TreeShape` is an unordered shape up to isomorphism.  Shapes are
  interned, so two isomorphic shapes are the same Python object and ``is``
  (or ``==``) is an O(1) isomorphism test.
* :class:`PlaneTree` keeps child order.  Its leaves carry ranks ``1..n`` in
  left-to-right order.

Both read and write the text grammar ``L`` / ``(X Y)``.  Anywhere a tree is
parsed the builder aliases ``cat:<k>``, ``cb:<h>``, ``even:<n>`` and ``a52``
may stand in for a subtree.
"""
from __future__ import annotations

import functools
import itertools
import re
import threading
from typing import Iterable, Iterator

from .errors import InvalidRankError, LimitExceeded, TreeParseError

DEFAULT_ENUMERATION_LIMIT = 14


@functools.total_ordering
class TreeShape:
    """Canonical unordered rooted binary tree.

    Do not call the constructor; use :data:`LEAF` and :func:`make_node`.
    ``left`` is never larger than ``right`` in the canonical order
    ``(leaf_count, encoding)``.
    """

    __slots__ = ("left", "right", "leaf_count", "encoding", "_hash", "__weakref__")

    def __init__(self, left: TreeShape | None, right: TreeShape | None, encoding: str):
        self.left = left
        self.right = right
        self.leaf_count = 1 if left is None else left.leaf_count + right.leaf_count
        self.encoding = encoding
        self._hash = hash(encoding)

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    @property
    def key(self) -> tuple[int, str]:
        return (self.leaf_count, self.encoding)

    def __len__(self) -> int:
        return self.leaf_count

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if isinstance(other, TreeShape):
            # distinct interned objects are never isomorphic
            return False
        return NotImplemented

    def __lt__(self, other: TreeShape) -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        return f"TreeShape({self.encoding!r})"

    def __str__(self) -> str:
        return self.encoding

    def __reduce__(self):
        return (parse_shape, (self.encoding,))

    @property
    def branches(self) -> tuple[TreeShape, TreeShape]:
        if self.left is None:
            raise ValueError("a leaf has no branches")
        return self.left, self.right

    def to_plane(self) -> PlaneTree:
        """Plane embedding with the smaller branch first at every vertex."""
        memo: dict[TreeShape, PlaneTree] = {}
        for t in unique_subtrees(self):
            memo[t] = PLANE_LEAF if t.is_leaf else PlaneTree(memo[t.left], memo[t.right])
        return memo[self]


_TABLE: dict[str, TreeShape] = {}
_TABLE_LOCK = threading.Lock()

LEAF = TreeShape(None, None, "L")
_TABLE["L"] = LEAF


def make_node(left: TreeShape, right: TreeShape) -> TreeShape:
    """Return the interned shape with branch multiset ``{left, right}``."""
    if right < left:
        left, right = right, left
    enc = f"({left.encoding} {right.encoding})"
    node = _TABLE.get(enc)
    if node is None:
        with _TABLE_LOCK:
            node = _TABLE.get(enc)
            if node is None:
                node = TreeShape(left, right, enc)
                _TABLE[enc] = node
    return node


def unique_subtrees(root: TreeShape) -> list[TreeShape]:
    """Distinct rooted subtrees of ``root``, children before parents."""
    out: list[TreeShape] = []
    seen: set[int] = set()
    stack: list[tuple[TreeShape, bool]] = [(root, False)]
    while stack:
        t, expanded = stack.pop()
        if id(t) in seen:
            continue
        if t.is_leaf or expanded:
            seen.add(id(t))
            out.append(t)
        else:
            stack.append((t, True))
            stack.append((t.right, False))
            stack.append((t.left, False))
    return out


# ---------------------------------------------------------------------------
# named families


@functools.lru_cache(maxsize=None)
def caterpillar(k: int) -> TreeShape:
    if k < 1:
        raise ValueError("caterpillar needs k >= 1")
    t = LEAF
    for _ in range(k - 1):
        t = make_node(LEAF, t)
    return t


@functools.lru_cache(maxsize=None)
def complete(h: int) -> TreeShape:
    if h < 0:
        raise ValueError("complete tree needs h >= 0")
    t = LEAF
    for _ in range(h):
        t = make_node(t, t)
    return t


@functools.lru_cache(maxsize=None)
def even(n: int) -> TreeShape:
    """The unique tree whose branches differ by at most one leaf everywhere."""
    if n < 1:
        raise ValueError("even tree needs n >= 1")
    if n == 1:
        return LEAF
    return make_node(even(n // 2), even(n - n // 2))


def a52() -> TreeShape:
    """The five-leaf tree consisting of a leaf joined to a complete tree of height 2."""
    return make_node(LEAF, complete(2))


# ---------------------------------------------------------------------------
# enumeration and invariants

_SHAPES: dict[int, list[TreeShape]] = {1: [LEAF]}


def enumerate_shapes(n: int, limit: int = DEFAULT_ENUMERATION_LIMIT) -> list[TreeShape]:
    """All shapes with ``n`` leaves, once each, sorted in canonical order."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > limit:
        raise LimitExceeded("n", n, limit, "--exact-limit")
    return list(_shapes(n))


def _shapes(n: int) -> list[TreeShape]:
    if n not in _SHAPES:
        out = []
        for a in range(1, n // 2 + 1):
            small, large = _shapes(a), _shapes(n - a)
            if a == n - a:
                pairs = itertools.combinations_with_replacement(small, 2)
            else:
                pairs = itertools.product(small, large)
            out.extend(make_node(x, y) for x, y in pairs)
        out.sort()
        _SHAPES[n] = out
    return _SHAPES[n]


def automorphism_order(t: TreeShape) -> int:
    memo: dict[TreeShape, int] = {}
    for s in unique_subtrees(t):
        if s.is_leaf:
            memo[s] = 1
        elif s.left is s.right:
            memo[s] = 2 * memo[s.left] ** 2
        else:
            memo[s] = memo[s.left] * memo[s.right]
    return memo[t]


def height(t: TreeShape) -> int:
    memo: dict[TreeShape, int] = {}
    for s in unique_subtrees(t):
        memo[s] = 0 if s.is_leaf else 1 + max(memo[s.left], memo[s.right])
    return memo[t]


# ---------------------------------------------------------------------------
# plane trees


class PlaneTree:
    """Ordered rooted binary tree; leaves are ranked 1..n from left to right."""

    __slots__ = ("first", "second", "n", "text", "_shape_cache")

    def __init__(self, first: PlaneTree | None = None, second: PlaneTree | None = None):
        if (first is None) != (second is None):
            raise ValueError("a plane tree vertex has zero or two children")
        self.first = first
        self.second = second
        if first is None:
            self.n = 1
            self.text = "L"
        else:
            self.n = first.n + second.n
            self.text = f"({first.text} {second.text})"
        self._shape_cache = None

    @property
    def is_leaf(self) -> bool:
        return self.first is None

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PlaneTree):
            return self.text == other.text
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.text)

    def __repr__(self) -> str:
        return f"PlaneTree({self.text!r})"

    def __str__(self) -> str:
        return self.text

    @property
    def shape(self) -> TreeShape:
        """The unordered shape, forgetting child order."""
        if self._shape_cache is None:
            if self.is_leaf:
                self._shape_cache = LEAF
            else:
                self._shape_cache = make_node(self.first.shape, self.second.shape)
        return self._shape_cache

    def internal_vertices(self) -> list[tuple[PlaneTree, int]]:
        """Internal vertices in pre-order, each with the rank offset of its first leaf."""
        out = []
        stack = [(self, 0)]
        while stack:
            node, offset = stack.pop()
            if node.is_leaf:
                continue
            out.append((node, offset))
            stack.append((node.second, offset + node.first.n))
            stack.append((node.first, offset))
        return out

    def flip(self, bits: Iterable[bool]) -> tuple[PlaneTree, list[int]]:
        """Swap the children of the internal vertices whose bit is set.

        Bits follow the pre-order of :meth:`internal_vertices`.  Returns the
        new tree and ``new_rank`` with ``new_rank[r - 1]`` the rank of old
        leaf ``r`` after flipping.
        """
        bits = list(bits)
        if len(bits) != self.n - 1:
            raise ValueError(f"expected {self.n - 1} flip bits, got {len(bits)}")
        it = iter(bits)

        # bits are consumed in pre-order of the original tree
        def rec(node: PlaneTree, offset: int) -> tuple[PlaneTree, list[int]]:
            if node.is_leaf:
                return node, [offset + 1]
            swap = next(it)
            a, oa = rec(node.first, offset)
            b, ob = rec(node.second, offset + node.first.n)
            if swap:
                return PlaneTree(b, a), ob + oa
            return PlaneTree(a, b), oa + ob

        new, order = rec(self, 0)
        new_rank = [0] * self.n
        for pos, old in enumerate(order, start=1):
            new_rank[old - 1] = pos
        return new, new_rank


PLANE_LEAF = PlaneTree()


def plane_from_shape(t: TreeShape) -> PlaneTree:
    return t.to_plane()


def restrict(host: PlaneTree, ranks: Iterable[int]) -> PlaneTree:
    """Plane tree induced by a leaf subset, keeping left-to-right order."""
    members = sorted(set(ranks))
    if not members:
        raise InvalidRankError("leaf subset is empty")
    if members[0] < 1 or members[-1] > host.n:
        raise InvalidRankError(f"leaf ranks must lie in 1..{host.n}, got {members}")
    from bisect import bisect_left

    def rec(node: PlaneTree, lo: int, hi: int, offset: int) -> PlaneTree | None:
        # members[lo:hi] are the chosen ranks inside this subtree
        if lo == hi:
            return None
        if node.is_leaf:
            return node
        mid = bisect_left(members, offset + node.first.n + 1, lo, hi)
        a = rec(node.first, lo, mid, offset)
        b = rec(node.second, mid, hi, offset + node.first.n)
        if a is None:
            return b
        if b is None:
            return a
        return PlaneTree(a, b)

    return rec(host, 0, len(members), 0)


def induce(host: PlaneTree | TreeShape, subset: Iterable[int]) -> TreeShape:
    """Shape induced by a set of leaf ranks of ``host``.

    A :class:`TreeShape` host is read through its canonical plane embedding.
    """
    if isinstance(host, TreeShape):
        host = host.to_plane()
    return restrict(host, subset).shape


@functools.lru_cache(maxsize=None)
def plane_trees(n: int) -> tuple[PlaneTree, ...]:
    """All Catalan-many plane binary trees with ``n`` leaves."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return (PLANE_LEAF,)
    out = []
    for a in range(1, n):
        for x in plane_trees(a):
            for y in plane_trees(n - a):
                out.append(PlaneTree(x, y))
    return tuple(out)


def iter_leaf_subsets(n: int, k: int) -> Iterator[tuple[int, ...]]:
    return itertools.combinations(range(1, n + 1), k)


# ---------------------------------------------------------------------------
# text grammar

_ALIAS = re.compile(r"(cat|cb|even):(\d+)|a52")


def _parse(text: str, node_leaf, node_pair, alias):
    pos = 0
    n = len(text)
    # explicit stack: each frame is the list of children parsed so far
    stack: list[list] = []
    result = None

    def skip_ws(p: int) -> int:
        while p < n and text[p] == " ":
            p += 1
        return p

    pos = skip_ws(pos)
    while True:
        if pos >= n:
            raise TreeParseError("unexpected end of input", text, pos)
        ch = text[pos]
        if ch == "(":
            stack.append([])
            pos = skip_ws(pos + 1)
            continue
        if ch == "L":
            item = node_leaf()
            pos += 1
        else:
            m = _ALIAS.match(text, pos)
            if m is None:
                raise TreeParseError(f"unexpected character {ch!r}", text, pos)
            try:
                item = alias(m.group(1) or "a52", int(m.group(2) or 0))
            except ValueError as exc:
                raise TreeParseError(str(exc), text, pos) from None
            pos = m.end()
        # close as many frames as this item completes
        while True:
            if not stack:
                result = item
                break
            frame = stack[-1]
            frame.append(item)
            if len(frame) == 1:
                if pos >= n or text[pos] != " ":
                    raise TreeParseError("expected a single space between children", text, pos)
                pos += 1
                item = None
                break
            if pos >= n or text[pos] != ")":
                raise TreeParseError("expected ')'", text, pos)
            pos += 1
            stack.pop()
            item = node_pair(frame[0], frame[1])
        if result is not None:
            break
    pos = skip_ws(pos)
    if pos != n:
        raise TreeParseError("trailing characters", text, pos)
    return result


def _shape_alias(kind: str, value: int) -> TreeShape:
    if kind == "cat":
        return caterpillar(value)
    if kind == "cb":
        return complete(value)
    if kind == "even":
        return even(value)
    return a52()


def parse_shape(text: str) -> TreeShape:
    """Parse the ``L`` / ``(X Y)`` grammar (or an alias) into a canonical shape."""
    return _parse(text.strip(), lambda: LEAF, make_node, _shape_alias)


def parse_plane(text: str) -> PlaneTree:
    """Parse a plane tree; child order is kept, aliases use the canonical embedding."""
    return _parse(
        text.strip(),
        lambda: PLANE_LEAF,
        PlaneTree,
        lambda kind, value: _shape_alias(kind, value).to_plane(),
    )
