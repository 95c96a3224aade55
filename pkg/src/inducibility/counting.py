"""Exact counts of induced copies of a pattern tree, and the closed forms around them.

Rationals are :class:`fractions.Fraction` (always reduced, arbitrary precision).
Counts are plain Python ints.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import LimitExceeded
from .trees import PlaneTree, TreeShape, induce, unique_subtrees

DEFAULT_ORACLE_BUDGET = 10**6


def format_rational(q: Fraction | int) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class PatternTable:
    """Distinct rooted subtrees of a pattern, children before parents.

    ``entries[0]`` is the leaf and ``entries[-1]`` the pattern itself.
    ``branches[i]`` holds the entry indices of entry ``i``'s two branches
    (``None`` for the leaf) and ``symmetric[i]`` whether they are isomorphic.
    """

    pattern: TreeShape
    entries: tuple[TreeShape, ...]
    branches: tuple[tuple[int, int] | None, ...]
    symmetric: tuple[bool, ...]
    index: dict = field(compare=False, repr=False)

    @classmethod
    def build(cls, pattern: TreeShape) -> PatternTable:
        entries = sorted(unique_subtrees(pattern))
        index = {t: i for i, t in enumerate(entries)}
        branches = tuple(
            None if t.is_leaf else (index[t.left], index[t.right]) for t in entries
        )
        symmetric = tuple((not t.is_leaf) and t.left is t.right for t in entries)
        return cls(pattern, tuple(entries), branches, symmetric, index)

    def __len__(self) -> int:
        return len(self.entries)

    def combine(self, a: tuple, b: tuple) -> tuple:
        """Count vector of the host ``(a, b)`` from the count vectors of its branches."""
        out = [a[0] + b[0]]
        for i in range(1, len(self.entries)):
            x, y = self.branches[i]
            s = a[x] * b[y]
            if not self.symmetric[i]:
                s += a[y] * b[x]
            out.append(a[i] + b[i] + s)
        return tuple(out)

    @property
    def leaf_vector(self) -> tuple:
        return (1,) + (0,) * (len(self.entries) - 1)


@lru_cache(maxsize=256)
def pattern_table(pattern: TreeShape) -> PatternTable:
    return PatternTable.build(pattern)


def count_vector(
    table: PatternTable, host: TreeShape, memo: dict | None = None
) -> tuple[int, ...]:
    """Counts of every table entry inside ``host``.

    ``memo`` may be shared between calls with the same table; host subtrees
    that repeat (shapes are interned) are evaluated once.
    """
    if memo is None:
        memo = {}
    for t in unique_subtrees(host):
        if t in memo:
            continue
        if t.is_leaf:
            memo[t] = table.leaf_vector
        else:
            memo[t] = table.combine(memo[t.left], memo[t.right])
    return memo[host]


def count_induced(pattern: TreeShape, host: TreeShape | PlaneTree) -> int:
    """Number of ``|pattern|``-subsets of host leaves that induce ``pattern``."""
    if isinstance(host, PlaneTree):
        host = host.shape
    return count_vector(pattern_table(pattern), host)[-1]


def count_induced_bruteforce(
    pattern: TreeShape,
    host: TreeShape | PlaneTree,
    budget: int = DEFAULT_ORACLE_BUDGET,
) -> int:
    """Reference count by inducing every leaf subset of the right size."""
    if isinstance(host, TreeShape):
        host = host.to_plane()
    k, n = pattern.leaf_count, host.n
    subsets = math.comb(n, k)
    if subsets > budget:
        raise LimitExceeded("C(|T|, |B|)", subsets, budget, "budget")
    return sum(1 for u in itertools.combinations(range(1, n + 1), k) if induce(host, u) is pattern)


def gamma(pattern: TreeShape, host: TreeShape | PlaneTree) -> Fraction:
    n = host.n if isinstance(host, PlaneTree) else host.leaf_count
    k = pattern.leaf_count
    if n < k:
        raise ValueError(f"host has {n} leaves, fewer than the pattern's {k}")
    return Fraction(count_induced(pattern, host), math.comb(n, k))


# ---------------------------------------------------------------------------
# closed forms


def cb2_bound(n: int) -> Fraction:
    """Upper bound on the number of induced complete 4-leaf trees in an n-leaf host."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return Fraction(n * (n - 1) * (n - 2) * (3 * n - 5), 168)


@lru_cache(maxsize=None)
def even_constant(r: int) -> Fraction:
    if r < 1:
        raise ValueError("r must be positive")
    if r == 1:
        return Fraction(1)
    s = r // 2
    if r % 2 == 0:
        return even_constant(s) ** 2 / (2 ** (2 * s) - 2)
    return even_constant(s) * even_constant(s + 1) / (2 ** (2 * s) - 1)


def even_inducibility(r: int) -> Fraction:
    return math.factorial(r) * even_constant(r)


def caterpillar_liminf(k: int) -> Fraction:
    """Limit inferior of the caterpillar density over all large hosts."""
    if k < 2:
        raise ValueError("k must be at least 2")
    q = Fraction(math.factorial(k), 2)
    for j in range(1, k):
        q /= 2**j - 1
    return q


def caterpillar_count_complete(k: int, h: int) -> int:
    """Closed-form number of induced k-leaf caterpillars in the complete tree of height h."""
    if k < 2 or h < 1:
        raise ValueError("need k >= 2 and h >= 1")
    q = Fraction(2 ** (h - 1))
    for j in range(1, k):
        q *= Fraction(2**h - 2 ** (j - 1), 2**j - 1)
    if q.denominator != 1:
        raise ArithmeticError(f"closed form for k={k}, h={h} is not an integer: {q}")
    return q.numerator


# ---------------------------------------------------------------------------
# the three one-variable lemma functions


def lemma_f(x, k: int):
    """Ratio bounded by ``1/(2^{2k}-2)``, maximal at one half."""
    return x**k * (1 - x) ** k / (1 - x ** (2 * k) - (1 - x) ** (2 * k))


def lemma_g(x, k: int):
    """Odd-split companion of :func:`lemma_f`, bounded by ``1/(2^{2k}-1)``."""
    num = x**k * (1 - x) ** (k + 1) + x ** (k + 1) * (1 - x) ** k
    return num / (1 - x ** (2 * k + 1) - (1 - x) ** (2 * k + 1))


def lemma_f_min(x, k: int):
    """Caterpillar ratio bounded below by ``1/(2^{k-1}-1)``, minimal at one half."""
    return x * (1 - x) * (x ** (k - 2) + (1 - x) ** (k - 2)) / (1 - x**k - (1 - x) ** k)


@dataclass
class LemmaCheck:
    name: str
    k: int
    kind: str  # "max" or "min"
    bound: Fraction
    extremum: float
    location: float
    value_at_half: float
    margin: float
    passed: bool


@dataclass
class LemmaReport:
    k: int
    grid_step: float
    eps: float
    checks: list[LemmaCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def lemma_grid(grid_step: float) -> np.ndarray:
    if not 0 < grid_step < 0.5:
        raise ValueError("grid_step must lie in (0, 1/2)")
    m = int(math.floor(1 / grid_step))
    xs = np.arange(1, m + 1) * grid_step
    xs = xs[xs < 1.0]
    return np.union1d(xs, [0.5])


def verify_lemma_functions(k: int, grid_step: float = 1e-3, eps: float = 1e-12) -> LemmaReport:
    """Evaluate the lemma functions on a grid and compare with their closed-form extremes.

    The extremum counts as located at one half when the value there is
    within ``eps`` of the grid extremum (several of the functions are
    constant for the smallest ``k``).
    """
    if k < 1:
        raise ValueError("k must be positive")
    xs = lemma_grid(grid_step)
    specs = [
        ("f", lemma_f, "max", Fraction(1, 2 ** (2 * k) - 2)),
        ("g", lemma_g, "max", Fraction(1, 2 ** (2 * k) - 1)),
    ]
    if k >= 2:
        specs.append(("f_min", lemma_f_min, "min", Fraction(1, 2 ** (k - 1) - 1)))
    checks = []
    for name, fn, kind, bound in specs:
        ys = fn(xs, k)
        at_half = float(fn(0.5, k))
        if kind == "max":
            i = int(np.argmax(ys))
            margin = float(bound) + eps - float(ys[i])
            located = at_half >= ys[i] - eps
        else:
            i = int(np.argmin(ys))
            margin = float(ys[i]) - (float(bound) - eps)
            located = at_half <= ys[i] + eps
        ok = margin >= 0 and located and abs(at_half - float(bound)) <= eps
        # flat functions tie everywhere; report the half point then
        where = 0.5 if located else float(xs[i])
        checks.append(LemmaCheck(name, k, kind, bound, float(ys[i]), where, at_half, margin, ok))
    return LemmaReport(k, grid_step, eps, checks)


def lemma_value_at_half(name: str, k: int) -> Fraction:
    """Exact value of a lemma function at one half."""
    fn = {"f": lemma_f, "g": lemma_g, "f_min": lemma_f_min}[name]
    return fn(Fraction(1, 2), k)

