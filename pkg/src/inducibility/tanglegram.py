"""Tanglegrams: layouts, crossings, tangle crossing numbers and the No. 6 bound.

A :class:`Tanglegram` value is one *layout*: two plane trees and the matching
``sigma`` (``sigma[i - 1]`` is the right-tree rank matched to left rank ``i``).
Layouts related by flipping internal vertices of either tree represent the
same tanglegram.  Text form: ``<left>|<right>|<sigma images, comma separated>``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import LimitExceeded
from .trees import PLANE_LEAF, PlaneTree, caterpillar, parse_plane, plane_trees, restrict

CRT_LIMIT = 10
AUTOMORPHISM_LIMIT = 12
ENUMERATION_LIMIT = 5
BOUND_LIMIT = 512


@dataclass(frozen=True)
class Tanglegram:
    left: PlaneTree
    right: PlaneTree
    sigma: tuple[int, ...]

    def __post_init__(self):
        n = self.left.n
        if self.right.n != n:
            raise ValueError(f"trees differ in size: {n} vs {self.right.n}")
        if sorted(self.sigma) != list(range(1, n + 1)):
            raise ValueError(f"sigma is not a permutation of 1..{n}: {self.sigma}")

    @property
    def n(self) -> int:
        return self.left.n

    @property
    def text(self) -> str:
        return f"{self.left.text}|{self.right.text}|{','.join(map(str, self.sigma))}"

    def __str__(self) -> str:
        return self.text

    @property
    def sigma_inverse(self) -> tuple[int, ...]:
        inv = [0] * self.n
        for i, j in enumerate(self.sigma, start=1):
            inv[j - 1] = i
        return tuple(inv)

    def flipped(self, left_bits, right_bits) -> Tanglegram:
        """Apply flips to both trees; matching edges travel with their leaves."""
        left, lrank = self.left.flip(left_bits)
        right, rrank = self.right.flip(right_bits)
        sigma = [0] * self.n
        for i, j in enumerate(self.sigma):
            sigma[lrank[i] - 1] = rrank[j - 1]
        return Tanglegram(left, right, tuple(sigma))

    def induced(self, left_ranks) -> Tanglegram:
        """Sub-tanglegram on a set of left leaves and their partners."""
        u = sorted(left_ranks)
        v = sorted(self.sigma[i - 1] for i in u)
        pos = {r: i for i, r in enumerate(v, start=1)}
        sigma = tuple(pos[self.sigma[i - 1]] for i in u)
        return Tanglegram(restrict(self.left, u), restrict(self.right, v), sigma)


@dataclass(frozen=True)
class FlipAssignment:
    """One flip bit per internal vertex of each tree, in pre-order."""

    left_flips: tuple[bool, ...]
    right_flips: tuple[bool, ...]

    def apply(self, t: Tanglegram) -> Tanglegram:
        if len(self.left_flips) != t.n - 1 or len(self.right_flips) != t.n - 1:
            raise ValueError("flip vectors must have n - 1 entries each")
        return t.flipped(self.left_flips, self.right_flips)


def parse_tanglegram(text: str) -> Tanglegram:
    parts = text.strip().split("|")
    if len(parts) != 3:
        raise ValueError(f"expected '<left>|<right>|<sigma>', got {text!r}")
    left, right = parse_plane(parts[0]), parse_plane(parts[1])
    try:
        sigma = tuple(int(x) for x in parts[2].split(","))
    except ValueError:
        raise ValueError(f"bad sigma {parts[2]!r}") from None
    return Tanglegram(left, right, sigma)


def all_flip_assignments(n: int):
    bits = list(itertools.product((False, True), repeat=n - 1))
    for lb in bits:
        for rb in bits:
            yield FlipAssignment(lb, rb)


# ---------------------------------------------------------------------------
# sampling


def random_plane_tree(n: int, rng: np.random.Generator) -> PlaneTree:
    """Uniform plane binary tree with ``n`` leaves (Remy's insertion)."""
    if n < 1:
        raise ValueError("n must be positive")
    size = 2 * n - 1
    first = [-1] * size
    second = [-1] * size
    parent = [-1] * size
    root = 0
    count = 1
    for _ in range(n - 1):
        x = int(rng.integers(count))
        side = int(rng.integers(2))
        leaf, node = count, count + 1
        count += 2
        p = parent[x]
        if p < 0:
            root = node
        elif first[p] == x:
            first[p] = node
        else:
            second[p] = node
        parent[node] = p
        if side:
            first[node], second[node] = x, leaf
        else:
            first[node], second[node] = leaf, x
        parent[x] = parent[leaf] = node
    # bottom-up without recursion
    built: dict[int, PlaneTree] = {}
    stack = [(root, False)]
    while stack:
        v, done = stack.pop()
        if first[v] < 0:
            built[v] = PLANE_LEAF
        elif done:
            built[v] = PlaneTree(built.pop(first[v]), built.pop(second[v]))
        else:
            stack.append((v, True))
            stack.append((second[v], False))
            stack.append((first[v], False))
    return built[root]


def random_tanglegram_layout(n: int, rng: np.random.Generator) -> Tanglegram:
    """Uniform over the ``C_{n-1}^2 * n!`` layouts."""
    left = random_plane_tree(n, rng)
    right = random_plane_tree(n, rng)
    sigma = tuple(int(x) + 1 for x in rng.permutation(n))
    return Tanglegram(left, right, sigma)


# ---------------------------------------------------------------------------
# crossings


def count_inversions(seq) -> int:
    """Inversions of a sequence of distinct values in ``1..n`` (Fenwick tree)."""
    n = len(seq)
    tree = [0] * (n + 1)
    inv = 0
    for seen, v in enumerate(seq):
        # how many earlier values are <= v
        i, le = v, 0
        while i > 0:
            le += tree[i]
            i -= i & -i
        inv += seen - le
        i = v
        while i <= n:
            tree[i] += 1
            i += i & -i
    return inv


def layout_crossings(t: Tanglegram) -> int:
    return count_inversions(t.sigma)


def _embeddings(tree: PlaneTree) -> tuple[np.ndarray, np.ndarray]:
    """All 2^(n-1) flips of ``tree``.

    Returns ``(pos, bits)``: ``pos[e, r - 1]`` is the 0-based position of
    original leaf ``r`` in embedding ``e``, and ``bits[e]`` the pre-order
    flip vector producing it.
    """
    if tree.is_leaf:
        return np.zeros((1, 1), dtype=np.int64), np.zeros((1, 0), dtype=bool)
    pa, ba = _embeddings(tree.first)
    pb, bb = _embeddings(tree.second)
    na, nb = tree.first.n, tree.second.n
    ia, ib = np.meshgrid(np.arange(len(pa)), np.arange(len(pb)), indexing="ij")
    ia, ib = ia.ravel(), ib.ravel()
    rows = len(ia)
    pos, bits = [], []
    for swap in (False, True):
        if swap:
            pos.append(np.hstack([pa[ia] + nb, pb[ib]]))
        else:
            pos.append(np.hstack([pa[ia], pb[ib] + na]))
        bits.append(np.hstack([np.full((rows, 1), swap), ba[ia], bb[ib]]))
    return np.vstack(pos), np.vstack(bits)


def _best_right_layouts(t: Tanglegram, pos: np.ndarray):
    """For each left embedding, the fewest crossings over all right flips.

    Pairs of matching edges are separated at the lowest common ancestor of
    their right endpoints, and only that vertex's flip changes whether they
    cross, so every right vertex is settled independently.
    """
    q = pos[:, np.asarray(t.sigma_inverse) - 1]  # left position, indexed by right rank
    total = np.zeros(len(pos), dtype=np.int64)
    choices = []
    for node, offset in t.right.internal_vertices():
        na = node.first.n
        a = q[:, offset:offset + na]
        b = q[:, offset + na:offset + node.n]
        c = (a[:, :, None] > b[:, None, :]).sum(axis=(1, 2))
        other = na * node.second.n - c
        total += np.minimum(c, other)
        choices.append(c > other)
    return total, np.array(choices).T if choices else np.zeros((len(pos), 0), dtype=bool)


def tangle_crossing_exact(t: Tanglegram, limit: int = CRT_LIMIT) -> int:
    """Minimum number of crossings over all layouts of ``t``."""
    return optimal_layout(t, limit)[1]


def optimal_layout(t: Tanglegram, limit: int = CRT_LIMIT) -> tuple[Tanglegram, int]:
    """A crossing-minimal layout of ``t`` and its crossing count.

    Every flip of the left tree is enumerated; the right tree is then
    optimised vertex by vertex, which is exact.
    """
    if t.n > limit:
        raise LimitExceeded("n", t.n, limit, "--exact-limit")
    if t.n == 1:
        return t, 0
    pos, lbits = _embeddings(t.left)
    total, rbits = _best_right_layouts(t, pos)
    e = int(np.argmin(total))
    best = t.flipped(lbits[e].tolist(), rbits[e].tolist())
    return best, int(total[e])


def tangle_crossing_bruteforce(t: Tanglegram) -> int:
    """Reference minimum over every pair of flip vectors; small n only."""
    if t.n > 7:
        raise LimitExceeded("n", t.n, 7)
    return min(layout_crossings(f.apply(t)) for f in all_flip_assignments(t.n))


# ---------------------------------------------------------------------------
# canonical forms and the size-4 catalogue


def flip_images(t: Tanglegram) -> set[str]:
    """Texts of every layout of the tanglegram ``t`` belongs to."""
    lefts = _flips(t.left)
    rights = _flips(t.right)
    out = set()
    for left, lrank in lefts:
        for right, rrank in rights:
            sigma = [0] * t.n
            for i, j in enumerate(t.sigma):
                sigma[lrank[i] - 1] = rrank[j - 1]
            out.add(f"{left.text}|{right.text}|{','.join(map(str, sigma))}")
    return out


@lru_cache(maxsize=4096)
def _flips(tree: PlaneTree) -> tuple[tuple[PlaneTree, tuple[int, ...]], ...]:
    out = []
    for bits in itertools.product((False, True), repeat=tree.n - 1):
        new, rank = tree.flip(bits)
        out.append((new, tuple(rank)))
    return tuple(out)


def canonical_text(t: Tanglegram) -> str:
    """Lexicographically smallest layout text among all flips."""
    return min(flip_images(t))


@dataclass(frozen=True)
class Size4Class:
    encoding: str
    pair_type: str
    crt: int

    @property
    def is_no6(self) -> bool:
        return self.pair_type == "C4/C4" and self.crt == 1

    @property
    def is_no13(self) -> bool:
        return self.pair_type == "CB2/CB2" and self.crt == 1


def _shape_label(tree: PlaneTree) -> str:
    return "C4" if tree.shape is caterpillar(4) else "CB2"


@lru_cache(maxsize=None)
def _classify_text(text: str) -> Size4Class:
    t = parse_tanglegram(text)
    return Size4Class(
        canonical_text(t),
        f"{_shape_label(t.left)}/{_shape_label(t.right)}",
        tangle_crossing_exact(t),
    )


def classify_size4(t: Tanglegram) -> Size4Class:
    if t.n != 4:
        raise ValueError(f"classify_size4 needs n = 4, got {t.n}")
    return _classify_text(t.text)


def is_no6(t: Tanglegram) -> bool:
    return classify_size4(t).is_no6


def is_no13(t: Tanglegram) -> bool:
    return classify_size4(t).is_no13


@dataclass(frozen=True)
class TanglegramClass:
    encoding: str
    layouts: int
    automorphisms: int


def enumerate_tanglegrams(n: int, limit: int = ENUMERATION_LIMIT) -> list[TanglegramClass]:
    """All tanglegrams with ``n`` leaves per tree, one canonical layout each."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > limit:
        raise LimitExceeded("n", n, limit, "--exact-limit")
    seen: set[str] = set()
    classes = []
    trees = plane_trees(n)
    for left in trees:
        for right in trees:
            for perm in itertools.permutations(range(1, n + 1)):
                t = Tanglegram(left, right, perm)
                if t.text in seen:
                    continue
                orbit = flip_images(t)
                seen |= orbit
                classes.append(TanglegramClass(min(orbit), len(orbit), 2 ** (2 * n - 2) // len(orbit)))
    classes.sort(key=lambda c: c.encoding)
    return classes


def all_layouts(n: int):
    for left in plane_trees(n):
        for right in plane_trees(n):
            for perm in itertools.permutations(range(1, n + 1)):
                yield Tanglegram(left, right, perm)


# ---------------------------------------------------------------------------
# automorphisms


def plane_automorphisms(tree: PlaneTree) -> list[tuple[int, ...]]:
    """Automorphisms of the underlying unordered tree as leaf maps.

    Each entry ``a`` maps leaf rank ``r`` to ``a[r - 1]``.
    """

    def rec(node: PlaneTree, offset: int):
        # returns (automorphisms as image tuples over this block, leaves in canonical order, shape)
        if node.is_leaf:
            return [(offset + 1,)], [offset + 1], node.shape
        auts_a, canon_a, sa = rec(node.first, offset)
        auts_b, canon_b, sb = rec(node.second, offset + node.first.n)
        auts = [a + b for a in auts_a for b in auts_b]
        if sa is sb:
            to_b = dict(zip(canon_a, canon_b))
            to_a = dict(zip(canon_b, canon_a))
            auts += [
                tuple(to_b[x] for x in a) + tuple(to_a[y] for y in b)
                for a in auts_a
                for b in auts_b
            ]
        canon = canon_a + canon_b if sa <= sb else canon_b + canon_a
        return auts, canon, node.shape

    return rec(tree, 0)[0]


def tanglegram_automorphism_order(t: Tanglegram, limit: int = AUTOMORPHISM_LIMIT) -> int:
    """Number of automorphism pairs of the two trees that preserve the matching."""
    if t.n > limit:
        raise LimitExceeded("n", t.n, limit, "--exact-limit")
    left = set(plane_automorphisms(t.left))
    sigma, inv = t.sigma, t.sigma_inverse
    count = 0
    for b in plane_automorphisms(t.right):
        # the left leaf map that b induces through the matching
        a = tuple(inv[b[sigma[i] - 1] - 1] for i in range(t.n))
        count += a in left
    return count


def tanglegram_automorphism_bruteforce(t: Tanglegram) -> int:
    """Flip assignments that return the very same layout; small n only."""
    if t.n > 6:
        raise LimitExceeded("n", t.n, 6)
    return sum(f.apply(t).text == t.text for f in all_flip_assignments(t.n))


# ---------------------------------------------------------------------------
# the No. 6 counting bound


def lca_depths(tree: PlaneTree) -> np.ndarray:
    """``D[i, j]`` is the depth of the lowest common ancestor of leaves ``i+1`` and ``j+1``.

    The diagonal holds ``n + 1``, deeper than any internal vertex.
    """
    n = tree.n
    d = np.full((n, n), n + 1, dtype=np.int32)
    stack = [(tree, 0, 0)]
    while stack:
        node, offset, depth = stack.pop()
        if node.is_leaf:
            continue
        mid, hi = offset + node.first.n, offset + node.n
        d[offset:mid, mid:hi] = depth
        d[mid:hi, offset:mid] = depth
        stack.append((node.first, offset, depth + 1))
        stack.append((node.second, mid, depth + 1))
    return d


def _is_c4(d: np.ndarray, quad) -> bool:
    # a 4-set induces a caterpillar iff its induced root splits it 1|3,
    # i.e. exactly three of its six pairs meet strictly below that root
    depths = [d[a, b] for a, b in itertools.combinations(quad, 2)]
    low = min(depths)
    return sum(x > low for x in depths) == 3


def c4_quadruples(tree: PlaneTree) -> set[frozenset[int]]:
    """All 4-sets of leaf ranks inducing the 4-leaf caterpillar."""
    if tree.n < 4:
        raise ValueError("need at least 4 leaves")
    d = lca_depths(tree)
    return {
        frozenset(i + 1 for i in quad)
        for quad in itertools.combinations(range(tree.n), 4)
        if _is_c4(d, quad)
    }


def no6_copies_direct(t: Tanglegram) -> int:
    """Count caterpillar 4-sets whose induced 4-leaf tanglegram is No. 6, one by one."""
    if t.n < 4:
        return 0
    h2 = c4_quadruples(t.right)
    count = 0
    for u in c4_quadruples(t.left):
        v = frozenset(t.sigma[i - 1] for i in u)
        if v in h2 and is_no6(t.induced(u)):
            count += 1
    return count


def no6_copies(t: Tanglegram) -> int:
    """Count induced No. 6 copies in O(n^3).

    Label a No. 6 copy ``p, q, r, s`` so that the left tree induces the
    caterpillar with cherry ``{p, q}``, then ``r``, then ``s``.  The right
    tree then induces cherry ``{p, s}``, then ``r``, then ``q`` (this fixes
    which cherry leaf is ``p``).  In LCA depths the conditions read::

        L[p,q] > L[p,r]   and   R[q,r] < R[p,r]     (constraints on q)
        L[r,s] < L[p,r]   and   R[p,s] > R[p,r]     (constraints on s)

    Given ``(p, r)`` the admissible ``q`` and ``s`` are independent, so the
    total is a sum of products.
    """
    n = t.n
    if n < 4:
        return 0
    left = lca_depths(t.left)
    s = np.asarray(t.sigma) - 1
    right = lca_depths(t.right)[np.ix_(s, s)]
    total = 0
    for p in range(n):
        lp, rp = left[p], right[p]
        q_ok = (lp[None, :] > lp[:, None]) & (right < rp[:, None])
        s_ok = (left < lp[:, None]) & (rp[None, :] > rp[:, None])
        total += int(q_ok.sum(axis=1) @ s_ok.sum(axis=1))
    return total


def no6_lower_bound(t: Tanglegram, limit: int = BOUND_LIMIT) -> Fraction:
    """Lower bound on the tangle crossing number from induced No. 6 copies."""
    if t.n > limit:
        raise LimitExceeded("n", t.n, limit, "--exact-limit")
    if t.n < 4:
        return Fraction(0)
    return Fraction(no6_copies(t), math.comb(t.n - 2, 2))


def no6_lower_bound_direct(t: Tanglegram) -> Fraction:
    if t.n < 4:
        return Fraction(0)
    return Fraction(no6_copies_direct(t), math.comb(t.n - 2, 2))


# The thirteen size-4 tanglegrams in catalogue order; caterpillars hang the cherry first,
# complete trees are two cherries.
_CAT = "(((L L) L) L)"
_CB = "((L L) (L L))"
SIZE4_CATALOGUE = {
    1: f"{_CAT}|{_CAT}|1,2,3,4",
    2: f"{_CAT}|{_CAT}|1,2,4,3",
    3: f"{_CAT}|{_CAT}|1,3,2,4",
    4: f"{_CAT}|{_CAT}|1,3,4,2",
    5: f"{_CAT}|{_CAT}|1,4,2,3",
    6: f"{_CAT}|{_CAT}|1,4,3,2",
    7: f"{_CAT}|{_CAT}|3,4,1,2",
    8: f"{_CAT}|{_CB}|1,2,3,4",
    9: f"{_CAT}|{_CB}|1,3,2,4",
    10: f"{_CB}|{_CAT}|1,2,3,4",
    11: f"{_CB}|{_CAT}|1,3,2,4",
    12: f"{_CB}|{_CB}|1,2,3,4",
    13: f"{_CB}|{_CB}|1,3,2,4",
}


def catalogue_tanglegram(number: int) -> Tanglegram:
    return parse_tanglegram(SIZE4_CATALOGUE[number])

