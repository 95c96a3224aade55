import itertools
import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import plane_trees, tanglegrams
from inducibility.counting import count_induced
from inducibility.errors import LimitExceeded
from inducibility.tanglegram import (
    SIZE4_CATALOGUE,
    FlipAssignment,
    Tanglegram,
    all_flip_assignments,
    all_layouts,
    c4_quadruples,
    canonical_text,
    classify_size4,
    count_inversions,
    enumerate_tanglegrams,
    catalogue_tanglegram,
    is_no6,
    is_no13,
    layout_crossings,
    no6_copies,
    no6_copies_direct,
    no6_lower_bound,
    no6_lower_bound_direct,
    optimal_layout,
    parse_tanglegram,
    plane_automorphisms,
    random_plane_tree,
    random_tanglegram_layout,
    tangle_crossing_bruteforce,
    tangle_crossing_exact,
    tanglegram_automorphism_bruteforce,
    tanglegram_automorphism_order,
)
from inducibility.trees import caterpillar, complete, parse_plane, plane_from_shape

CAT4 = "(((L L) L) L)"


def cat_layout(n, sigma):
    p = plane_from_shape(caterpillar(n))
    return Tanglegram(p, p, tuple(sigma))


def test_text_roundtrip():
    t = parse_tanglegram(f"{CAT4}|((L L) (L L))|2,1,4,3")
    assert t.text == f"{CAT4}|((L L) (L L))|2,1,4,3"
    assert t.sigma_inverse == (2, 1, 4, 3)


@pytest.mark.parametrize(
    "text", ["(L L)|(L L)", "(L L)|((L L) L)|1,2", "(L L)|(L L)|1,1", "(L L)|(L L)|a,b"]
)
def test_bad_tanglegram_text(text):
    with pytest.raises(ValueError):
        parse_tanglegram(text)


def test_flip_assignment_length_checked():
    t = cat_layout(4, (1, 2, 3, 4))
    with pytest.raises(ValueError):
        FlipAssignment((True,), (False, False, False)).apply(t)


def test_inversion_examples():
    assert count_inversions([1, 2, 3, 4]) == 0
    assert count_inversions([4, 3, 2, 1]) == 6
    assert count_inversions([2, 1, 3, 4, 5]) == 1
    assert layout_crossings(cat_layout(4, (4, 3, 2, 1))) == 6


@given(st.permutations(list(range(1, 12))))
def test_inversions_against_quadratic(p):
    slow = sum(1 for i, j in itertools.combinations(range(len(p)), 2) if p[i] > p[j])
    assert count_inversions(p) == slow


def test_crt_of_numbered_size4():
    assert tangle_crossing_exact(catalogue_tanglegram(6)) == 1
    assert tangle_crossing_exact(catalogue_tanglegram(13)) == 1
    assert tangle_crossing_exact(catalogue_tanglegram(1)) == 0


def test_size4_catalogue():
    classes = {n: classify_size4(catalogue_tanglegram(n)) for n in SIZE4_CATALOGUE}
    assert len({c.encoding for c in classes.values()}) == 13
    assert [n for n, c in classes.items() if c.crt == 1] == [6, 13]
    assert classes[6].is_no6 and classes[6].pair_type == "C4/C4"
    assert classes[13].is_no13 and classes[13].pair_type == "CB2/CB2"
    assert {c.encoding for c in classes.values()} == {c.encoding for c in enumerate_tanglegrams(4)}


def test_classify_wrong_size():
    with pytest.raises(ValueError):
        classify_size4(cat_layout(5, range(1, 6)))


def test_four_of_24_matchings_are_no6():
    hits = [p for p in itertools.permutations(range(1, 5)) if is_no6(cat_layout(4, p))]
    assert len(hits) == 4
    assert not any(is_no13(cat_layout(4, p)) for p in itertools.permutations(range(1, 5)))


def test_enumeration_counts():
    assert [len(enumerate_tanglegrams(n)) for n in range(1, 5)] == [1, 1, 2, 13]
    with pytest.raises(LimitExceeded) as exc:
        enumerate_tanglegrams(6)
    assert "--exact-limit" in str(exc.value)


def test_enumeration_n3_by_hand_oracle():
    # brute force over the 2*2*6 layouts with flip reduction done independently
    seen, classes = set(), 0
    for t in all_layouts(3):
        if t.text in seen:
            continue
        classes += 1
        for fa in all_flip_assignments(3):
            seen.add(fa.apply(t).text)
    assert classes == 2


def test_orbit_stabilizer_identity():
    total = sum(Fraction(tanglegram_automorphism_order(t), 2**6) for t in all_layouts(4))
    assert total == 13
    assert sum(1 for _ in all_layouts(4)) == 600


def test_automorphism_examples():
    assert tanglegram_automorphism_order(parse_tanglegram("L|L|1")) == 1
    assert tanglegram_automorphism_order(catalogue_tanglegram(1)) == 2
    with pytest.raises(LimitExceeded):
        tanglegram_automorphism_order(cat_layout(13, range(1, 14)))


def test_automorphisms_match_bruteforce_size4():
    for t in all_layouts(4):
        a = tanglegram_automorphism_order(t)
        assert a == tanglegram_automorphism_bruteforce(t)
        assert a & (a - 1) == 0
        assert len(plane_automorphisms(t.left)) % a == 0


def cluster_automorphisms(tree):
    """Leaf permutations preserving the cluster set, by brute force."""
    n = tree.n
    clusters = set()

    def walk(p, lo):
        if p.first is None:
            clusters.add(frozenset([lo]))
            return 1
        a = walk(p.first, lo)
        b = walk(p.second, lo + a)
        clusters.add(frozenset(range(lo, lo + a + b)))
        return a + b

    walk(tree, 1)
    return [
        perm
        for perm in itertools.permutations(range(1, n + 1))
        if {frozenset(perm[i - 1] for i in c) for c in clusters} == clusters
    ]


@given(tanglegrams(min_leaves=1, max_leaves=6))
def test_automorphisms_against_cluster_oracle(t):
    left = cluster_automorphisms(t.left)
    right = set(cluster_automorphisms(t.right))
    # alpha on the left is an automorphism iff sigma alpha sigma^-1 is one on the right
    count = 0
    for a in left:
        beta = tuple(t.sigma[a[t.sigma_inverse[j - 1] - 1] - 1] for j in range(1, t.n + 1))
        count += beta in right
    assert tanglegram_automorphism_order(t) == count


@given(tanglegrams(min_leaves=1, max_leaves=6))
def test_exact_crt_matches_bruteforce(t):
    assert tangle_crossing_exact(t) == tangle_crossing_bruteforce(t)


@given(tanglegrams(min_leaves=1, max_leaves=8), st.data())
def test_crt_invariants(t, data):
    crt = tangle_crossing_exact(t)
    assert crt <= layout_crossings(t)
    assert crt <= math.comb(t.n, 2)
    lb = data.draw(st.lists(st.booleans(), min_size=t.n - 1, max_size=t.n - 1))
    rb = data.draw(st.lists(st.booleans(), min_size=t.n - 1, max_size=t.n - 1))
    assert tangle_crossing_exact(t.flipped(lb, rb)) == crt
    assert canonical_text(t.flipped(lb, rb)) == canonical_text(t)
    best, value = optimal_layout(t)
    assert value == crt and layout_crossings(best) == crt
    assert canonical_text(best) == canonical_text(t)


def test_crt_cap():
    with pytest.raises(LimitExceeded):
        tangle_crossing_exact(cat_layout(11, range(1, 12)))


def test_c4_quadruples_examples():
    cb3 = plane_from_shape(complete(3))
    assert len(c4_quadruples(cb3)) == 32
    assert len(c4_quadruples(plane_from_shape(caterpillar(6)))) == 15
    assert len(c4_quadruples(plane_from_shape(complete(2)))) == 0


@given(plane_trees(min_leaves=4, max_leaves=10))
def test_c4_quadruples_agree_with_counting(p):
    assert len(c4_quadruples(p)) == count_induced(caterpillar(4), p.shape)


def test_no6_bound_examples():
    assert no6_lower_bound(catalogue_tanglegram(6)) == 1
    for n in range(4, 12):
        assert no6_lower_bound(cat_layout(n, range(1, n + 1))) == 0
    with pytest.raises(LimitExceeded):
        no6_lower_bound(cat_layout(5, range(1, 6)), limit=4)


@given(tanglegrams(min_leaves=4, max_leaves=9))
def test_fast_no6_count_matches_direct(t):
    assert no6_copies(t) == no6_copies_direct(t)
    assert no6_lower_bound(t) == no6_lower_bound_direct(t)


@given(tanglegrams(min_leaves=4, max_leaves=8))
def test_no6_bound_below_crt(t):
    assert no6_lower_bound(t) <= tangle_crossing_exact(t)


def test_random_plane_tree_small_cases(rng):
    assert all(random_plane_tree(2, rng).text == "(L L)" for _ in range(20))
    counts = Counter(random_plane_tree(3, rng).text for _ in range(10_000))
    assert set(counts) == {"((L L) L)", "(L (L L))"}
    assert all(abs(c / 10_000 - 0.5) < 0.03 for c in counts.values())
    with pytest.raises(ValueError):
        random_plane_tree(0, rng)


def test_random_layout_sigma_marginal(rng):
    counts = Counter(random_tanglegram_layout(3, rng).sigma for _ in range(12_000))
    assert len(counts) == 6
    assert all(abs(c / 12_000 - 1 / 6) < 0.02 for c in counts.values())


def test_random_plane_tree_chi_square(rng):
    from scipy.stats import chisquare

    draws = Counter(random_plane_tree(4, rng).text for _ in range(20_000))
    assert len(draws) == 5
    assert chisquare(list(draws.values())).pvalue > 1e-3


def no6_pair_hits(left, right, u, v):
    n = left.n
    hits = 0
    for perm in itertools.permutations(range(1, n + 1)):
        t = Tanglegram(left, right, perm)
        if sorted(perm[i - 1] for i in u) == sorted(v) and is_no6(t.induced(u)):
            hits += 1
    return hits


def test_per_pair_probability_exact():
    # 4 of the matchings of two caterpillars form No. 6, so P = 4 (n-4)!/n!
    for n in (5, 6):
        left = plane_from_shape(caterpillar(n))
        right = random_plane_tree(n, np.random.default_rng(n))
        while not c4_quadruples(right):
            right = random_plane_tree(n, np.random.default_rng(n + 100))
        u = sorted(next(iter(sorted(c4_quadruples(left), key=sorted))))
        v = sorted(next(iter(sorted(c4_quadruples(right), key=sorted))))
        hits = no6_pair_hits(left, right, u, v)
        assert Fraction(hits, math.factorial(n)) == Fraction(4 * math.factorial(n - 4), math.factorial(n))


def test_per_pair_probability_monte_carlo(rng):
    n = 8
    left = plane_from_shape(caterpillar(n))
    right = parse_plane("(((L L) (L L)) (((L L) L) L))")
    u = sorted(sorted(c4_quadruples(left), key=sorted)[0])
    v = sorted(sorted(c4_quadruples(right), key=sorted)[0])
    trials, hits = 200_000, 0
    for _ in range(trials):
        perm = tuple(int(x) + 1 for x in rng.permutation(n))
        if sorted(perm[i - 1] for i in u) == v:
            hits += is_no6(Tanglegram(left, right, perm).induced(u))
    p = 4 * math.factorial(n - 4) / math.factorial(n)
    sd = math.sqrt(p * (1 - p) / trials)
    assert abs(hits / trials - p) < 5 * sd
