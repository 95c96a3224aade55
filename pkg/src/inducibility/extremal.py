"""Maximising the density of a pattern over hosts of a fixed size.

Exact mode enumerates every shape.  Search mode combines a beam over root
splits with hill climbing by subtree moves; its result is always the exact
density of an explicit host, so it is a certified lower bound on the maximum.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .counting import count_vector, even_inducibility, format_rational, gamma, pattern_table
from .errors import LimitExceeded
from .rng import make_rng
from .tanglegram import random_plane_tree
from .trees import LEAF, TreeShape, caterpillar, enumerate_shapes, even, make_node


@dataclass
class SearchConfig:
    exact_limit: int = 14
    beam_width: int = 64
    restarts: int = 32
    local_moves: int = 2000
    seed: int = 0

    def __post_init__(self):
        for name in ("exact_limit", "beam_width", "restarts", "local_moves"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass
class ExtremalReport:
    pattern: TreeShape
    n: int
    best_value: Fraction
    argmax: list[str]
    method: str
    gap_to_limit: Fraction | None = None
    seed: int | None = None

    def row(self) -> dict:
        return {
            "pattern": self.pattern.encoding,
            "n": self.n,
            "method": self.method,
            "best_value_num": self.best_value.numerator,
            "best_value_den": self.best_value.denominator,
            "argmax_encodings": ";".join(self.argmax),
            "seed": "" if self.seed is None else self.seed,
        }


REPORT_COLUMNS = [
    "pattern",
    "n",
    "method",
    "best_value_num",
    "best_value_den",
    "argmax_encodings",
    "seed",
]


def reports_to_csv(reports: list[ExtremalReport]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=REPORT_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in reports:
        w.writerow(r.row())
    return buf.getvalue()


def known_inducibility(pattern: TreeShape) -> Fraction | None:
    """Inducibility where a closed form is known (caterpillars and even trees)."""
    k = pattern.leaf_count
    if pattern is caterpillar(k):
        return Fraction(1)
    if pattern is even(k):
        return even_inducibility(k)
    return None


def _gap(pattern: TreeShape, value: Fraction) -> Fraction | None:
    limit = known_inducibility(pattern)
    return None if limit is None else limit - value


def max_gamma_exact(pattern: TreeShape, n: int, exact_limit: int = 14) -> ExtremalReport:
    """Maximum density over every host with ``n`` leaves, with all maximisers."""
    if n < pattern.leaf_count:
        raise ValueError(f"n = {n} is smaller than the pattern")
    hosts = enumerate_shapes(n, limit=exact_limit)
    table = pattern_table(pattern)
    memo: dict = {}
    counts = [count_vector(table, t, memo)[-1] for t in hosts]
    best = max(counts)
    argmax = [t.encoding for t, c in zip(hosts, counts) if c == best]
    value = Fraction(best, math.comb(n, pattern.leaf_count))
    return ExtremalReport(pattern, n, value, argmax, "exact", _gap(pattern, value))


# ---------------------------------------------------------------------------
# beam over root splits


def _combine_block(table, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Count vectors of every host ``(x, y)`` for rows x of ``a`` and y of ``b``."""
    out = np.empty((len(a), a.shape[1]), dtype=a.dtype)
    out[:, 0] = a[:, 0] + b[:, 0]
    for e in range(1, a.shape[1]):
        x, y = table.branches[e]
        s = a[:, x] * b[:, y]
        if not table.symmetric[e]:
            s = s + a[:, y] * b[:, x]
        out[:, e] = a[:, e] + b[:, e] + s
    return out


def _top(score: np.ndarray, k: int) -> np.ndarray:
    if len(score) <= k:
        return np.arange(len(score))
    return np.argpartition(-score, k - 1)[:k]


def _first_unique_rows(vecs: np.ndarray) -> np.ndarray:
    if vecs.dtype != object:
        _, first = np.unique(vecs, axis=0, return_index=True)
        return np.sort(first)
    seen: dict[tuple, int] = {}
    for i, row in enumerate(map(tuple, vecs)):
        seen.setdefault(row, i)
    return np.array(sorted(seen.values()), dtype=np.int64)


def _pareto(vectors: np.ndarray, order: np.ndarray) -> np.ndarray:
    """Indices (taken in ``order``) of rows not weakly dominated by an earlier kept row."""
    kept: list[int] = []
    kept_rows = np.empty((0, vectors.shape[1]), dtype=vectors.dtype)
    for i in order:
        v = vectors[i]
        if len(kept) and np.any(np.all(kept_rows >= v, axis=1)):
            continue
        kept.append(int(i))
        kept_rows = np.vstack([kept_rows, v])
    return np.array(kept, dtype=np.int64)


class _Beam:
    """Per-size candidate sets of count vectors, with how each was composed."""

    def __init__(self, pattern: TreeShape, n: int, width: int):
        self.table = pattern_table(pattern)
        self.n = n
        self.width = width
        k = pattern.leaf_count
        fits = math.comb(n, k) < 2**62 and all(math.comb(n, len(e)) < 2**62 for e in self.table.entries)
        self.dtype = np.int64 if fits else object
        self.sizes = np.array([len(e) for e in self.table.entries])
        self.vectors: dict[int, np.ndarray] = {
            1: np.array([self.table.leaf_vector], dtype=self.dtype)
        }
        self.origin: dict[int, list] = {1: [None]}
        self._built: dict[tuple[int, int], TreeShape] = {}

    def _score_matrix(self, vecs: np.ndarray, m: int) -> np.ndarray:
        # densities of each entry at host size m; used only for ranking
        norm = np.array([max(math.comb(m, int(s)), 1) for s in self.sizes], dtype=float)
        return vecs.astype(float) / norm

    def _shortlist(self, vecs: np.ndarray, m: int, k: int) -> np.ndarray:
        """Top-k rows under a few weightings of the entry densities."""
        if len(vecs) <= k:
            return np.arange(len(vecs))
        dens = self._score_matrix(vecs, m)
        picks = [_top(dens[:, -1], k)]
        for e in range(1, dens.shape[1] - 1):
            for w in (0.25, 0.5, 0.75):
                picks.append(_top(w * dens[:, e] + (1 - w) * dens[:, -1], max(k // 4, 1)))
        return np.unique(np.concatenate(picks))

    def grow(self, m: int) -> None:
        blocks, origins = [], []
        for a in range(1, m // 2 + 1):
            b = m - a
            va, vb = self.vectors[a], self.vectors[b]
            if a == b:
                ia, ib = np.triu_indices(len(va))
            else:
                ia, ib = (x.ravel() for x in np.meshgrid(np.arange(len(va)), np.arange(len(vb)), indexing="ij"))
            vecs = _combine_block(self.table, va[ia], vb[ib])
            keep = self._shortlist(vecs, m, self.width)
            blocks.append(vecs[keep])
            origins.extend((a, int(ia[i]), int(ib[i])) for i in keep)
        vecs = np.vstack(blocks)
        # identical vectors behave identically in every larger host
        first = _first_unique_rows(vecs)
        vecs = vecs[first]
        origins = [origins[i] for i in first]
        if len(vecs) > 4 * self.width:
            keep = self._shortlist(vecs, m, 4 * self.width)
            vecs, origins = vecs[keep], [origins[i] for i in keep]
        # larger counts in every entry never hurt (the recursion is monotone)
        # objective first, remaining entries as tie-breaks
        keys = [-vecs[:, e].astype(float) for e in range(vecs.shape[1] - 1)]
        order = np.lexsort(keys + [-vecs[:, -1].astype(float)])
        front = _pareto(vecs, order)
        if len(front) > self.width:
            top = max(self.width // 4, 1)
            rest = front[top:]
            spaced = rest[np.linspace(0, len(rest) - 1, self.width - top).round().astype(int)]
            front = np.concatenate([front[:top], np.unique(spaced)])
        self.vectors[m] = vecs[front]
        self.origin[m] = [origins[i] for i in front]

    def run(self) -> None:
        for m in range(2, self.n + 1):
            self.grow(m)

    def build(self, m: int, i: int) -> TreeShape:
        key = (m, i)
        if key not in self._built:
            o = self.origin[m][i]
            if o is None:
                self._built[key] = LEAF
            else:
                a, ia, ib = o
                # children first keeps recursion shallow for long chains
                left = self.build(a, ia)
                right = self.build(m - a, ib)
                self._built[key] = make_node(left, right)
        return self._built[key]

    def best(self) -> TreeShape:
        vecs = self.vectors[self.n]
        i = int(np.argmax(vecs[:, -1].astype(float)))
        top = vecs[i, -1]
        # exact tie-break on the integer objective
        for j in range(len(vecs)):
            if vecs[j, -1] > top:
                i, top = j, vecs[j, -1]
        return self.build(self.n, i)


def beam_search(pattern: TreeShape, n: int, width: int = 64) -> TreeShape:
    beam = _Beam(pattern, n, width)
    for m in range(2, n + 1):
        beam.grow(m)
        # build bottom-up so that reconstruction never recurses deeply
        for i in range(len(beam.origin[m])):
            beam.build(m, i)
    return beam.best()


# ---------------------------------------------------------------------------
# hill climbing on a mutable tree


class _MutableTree:
    """Rooted binary tree with parent pointers and cached count vectors."""

    def __init__(self, shape: TreeShape, table):
        self.table = table
        self.first: list[int] = []
        self.second: list[int] = []
        self.parent: list[int] = []
        self.vec: list[tuple] = []
        # post-order build; every occurrence of a shared shape gets its own vertex
        stack = [(shape, False)]
        out_stack: list[int] = []
        while stack:
            t, done = stack.pop()
            if t.is_leaf:
                out_stack.append(self._new(-1, -1, table.leaf_vector))
            elif done:
                b = out_stack.pop()
                a = out_stack.pop()
                v = self._new(a, b, table.combine(self.vec[a], self.vec[b]))
                self.parent[a] = self.parent[b] = v
                out_stack.append(v)
            else:
                stack.append((t, True))
                stack.append((t.right, False))
                stack.append((t.left, False))
        self.root = out_stack.pop()
        self.leaves = [v for v in range(len(self.first)) if self.first[v] < 0]

    def _new(self, a: int, b: int, vec: tuple) -> int:
        self.first.append(a)
        self.second.append(b)
        self.parent.append(-1)
        self.vec.append(vec)
        return len(self.first) - 1

    @property
    def value(self) -> int:
        return self.vec[self.root][-1]

    def _refresh(self, v: int) -> None:
        while v >= 0:
            self.vec[v] = self.table.combine(self.vec[self.first[v]], self.vec[self.second[v]])
            v = self.parent[v]

    def _replace_child(self, p: int, old: int, new: int) -> None:
        if p < 0:
            self.root = new
        elif self.first[p] == old:
            self.first[p] = new
        else:
            self.second[p] = new
        self.parent[new] = p

    def is_ancestor(self, a: int, v: int) -> bool:
        while v >= 0:
            if v == a:
                return True
            v = self.parent[v]
        return False

    def sibling(self, u: int) -> int:
        p = self.parent[u]
        return self.second[p] if self.first[p] == u else self.first[p]

    def can_regraft(self, u: int, v: int) -> bool:
        if u == self.root or u == v:
            return False
        return v != self.parent[u] and v != self.sibling(u) and not self.is_ancestor(u, v)

    def can_swap(self, u: int, v: int) -> bool:
        if self.root in (u, v) or u == v:
            return False
        return not (self.is_ancestor(u, v) or self.is_ancestor(v, u) or self.parent[u] == self.parent[v])

    def regraft(self, u: int, v: int) -> None:
        """Prune the subtree at ``u`` and reattach it on the edge above ``v``."""
        if not self.can_regraft(u, v):
            raise ValueError(f"cannot regraft {u} above {v}")
        p = self.parent[u]
        s = self.sibling(u)
        g = self.parent[p]
        self._replace_child(g, p, s)
        w = self.parent[v]
        self._replace_child(w, v, p)
        self.first[p], self.second[p] = v, u
        self.parent[v] = p
        self.parent[u] = p
        self._refresh(g)
        self._refresh(p)

    def swap(self, u: int, v: int) -> None:
        """Exchange two disjoint subtrees with different parents."""
        if not self.can_swap(u, v):
            raise ValueError(f"cannot swap {u} and {v}")
        pu, pv = self.parent[u], self.parent[v]
        if self.first[pu] == u:
            self.first[pu] = v
        else:
            self.second[pu] = v
        if self.first[pv] == v:
            self.first[pv] = u
        else:
            self.second[pv] = u
        self.parent[u], self.parent[v] = pv, pu
        self._refresh(pu)
        self._refresh(pv)

    def to_shape(self) -> TreeShape:
        built: dict[int, TreeShape] = {}
        stack = [(self.root, False)]
        while stack:
            v, done = stack.pop()
            if self.first[v] < 0:
                built[v] = LEAF
            elif done:
                built[v] = make_node(built.pop(self.first[v]), built.pop(self.second[v]))
            else:
                stack.append((v, True))
                stack.append((self.second[v], False))
                stack.append((self.first[v], False))
        return built[self.root]


def local_search(start: TreeShape, pattern: TreeShape, moves: int, rng: np.random.Generator) -> TreeShape:
    """Random-move hill climbing; sideways moves are accepted."""
    table = pattern_table(pattern)
    tree = _MutableTree(start, table)
    nodes = len(tree.first)
    if nodes < 3:
        return start
    best_value = tree.value
    best_shape = start
    for _ in range(moves):
        u = int(rng.integers(nodes))
        v = int(rng.integers(nodes))
        if u == tree.root or v == tree.root or u == v:
            continue
        current = tree.value
        if rng.random() < 0.5:
            if not tree.can_regraft(u, v):
                continue
            s = tree.sibling(u)
            tree.regraft(u, v)
            if tree.value < current:
                tree.regraft(u, s)
        else:
            if not tree.can_swap(u, v):
                continue
            tree.swap(u, v)
            if tree.value < current:
                tree.swap(u, v)
        if tree.value > best_value:
            best_value = tree.value
            best_shape = tree.to_shape()
    return best_shape


def max_gamma_search(pattern: TreeShape, n: int, cfg: SearchConfig | None = None) -> ExtremalReport:
    """Heuristic maximiser; the reported value is the exact density of the returned host."""
    cfg = cfg or SearchConfig()
    k = pattern.leaf_count
    if n < k:
        raise ValueError(f"n = {n} is smaller than the pattern")
    table = pattern_table(pattern)
    memo: dict = {}

    def score(t: TreeShape) -> int:
        return count_vector(table, t, memo)[-1]

    starts = [beam_search(pattern, n, cfg.beam_width), even(n), caterpillar(n)]
    candidates = list(starts)
    for r in range(cfg.restarts):
        rng = make_rng(cfg.seed, r)
        if r < len(starts):
            start = starts[r]
        else:
            start = random_plane_tree(n, rng).shape
        candidates.append(local_search(start, pattern, cfg.local_moves, rng))
    best = max(score(t) for t in candidates)
    argmax = sorted({t.encoding for t in candidates if score(t) == best})
    value = gamma(pattern, next(t for t in candidates if score(t) == best))
    return ExtremalReport(pattern, n, value, argmax, "heuristic", _gap(pattern, value), cfg.seed)


def max_gamma(pattern: TreeShape, n: int, cfg: SearchConfig | None = None) -> ExtremalReport:
    """Exact when ``n`` is within the enumeration limit, heuristic otherwise."""
    cfg = cfg or SearchConfig()
    if n <= cfg.exact_limit:
        return max_gamma_exact(pattern, n, cfg.exact_limit)
    return max_gamma_search(pattern, n, cfg)


# ---------------------------------------------------------------------------
# conjecture tables


@dataclass
class ConjectureRow:
    k: int
    n: int
    max_count: int
    even_count: int
    even_is_max: bool
    max_gamma: Fraction
    limit: Fraction
    gap: Fraction = field(init=False)
    n_gap: Fraction = field(init=False)

    def __post_init__(self):
        self.gap = self.limit - self.max_gamma
        self.n_gap = self.n * self.gap

    def row(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "max_count": self.max_count,
            "even_count": self.even_count,
            "even_is_max": int(self.even_is_max),
            "max_gamma": format_rational(self.max_gamma),
            "inducibility": format_rational(self.limit),
            "gap": format_rational(self.gap),
            "n_gap": format_rational(self.n_gap),
        }


CONJECTURE_COLUMNS = ["k", "n", "max_count", "even_count", "even_is_max", "max_gamma", "inducibility", "gap", "n_gap"]


def conjecture_report(k: int, n_max: int, exact_limit: int = 14) -> list[ConjectureRow]:
    """Whether the even tree is extremal for the even pattern, and the signed gap to the limit."""
    if n_max > exact_limit:
        raise LimitExceeded("n", n_max, exact_limit, "--exact-limit")
    pattern = even(k)
    table = pattern_table(pattern)
    limit = even_inducibility(k)
    memo: dict = {}
    rows = []
    for n in range(k, n_max + 1):
        counts = [count_vector(table, t, memo)[-1] for t in enumerate_shapes(n, exact_limit)]
        top = max(counts)
        ev = count_vector(table, even(n), memo)[-1]
        rows.append(ConjectureRow(k, n, top, ev, ev == top, Fraction(top, math.comb(n, k)), limit))
    return rows
