import random
from fractions import Fraction

import pytest
from sympy import primerange

from dynaport.dynamics import INF
from dynaport.portraits import (
    AtInfinityError,
    BadReductionError,
    Portrait,
    PreperiodicPointError,
    Val,
    common_reduction_primes,
    is_good_prime,
    is_periodic_mod_p,
    is_squarefree_portrait,
    portrait_mod_p,
    reduce_point,
    reduced_step,
    search_witnesses,
    valuation_of_difference,
    verify_witness,
)

from conftest import nf, pt
from oracles import classify, exact_ord, naive_orbit, poly_step_mod, walk_portrait


def test_reduce_point_examples():
    assert reduce_point(pt(2), 5) == 2
    assert reduce_point(pt(5), 5) == 0
    assert reduce_point(pt("1/5"), 5) is INF
    assert reduce_point(pt("inf"), 5) is INF


def test_portrait_examples():
    assert portrait_mod_p(nf("x^2+1"), pt(2), 5) == Portrait(0, 3)
    assert portrait_mod_p(nf("x^2+1"), pt(0), 3) == Portrait(2, 1)
    assert portrait_mod_p(nf("x^2"), pt(1), 7) == Portrait(0, 1)


def test_portrait_rejects_bad_prime():
    with pytest.raises(BadReductionError, match="bad reduction"):
        portrait_mod_p(nf("x^2+1/3"), pt(2), 3)
    with pytest.raises(ValueError):
        portrait_mod_p(nf("x^2+1"), pt(2), 9)


@pytest.mark.parametrize("c", [1, -2, 3])
def test_portrait_matches_list_walk(c):
    phi = nf(f"x^2+{c}" if c > 0 else f"x^2{c}")
    for p in primerange(3, 150):
        if not is_good_prime(phi, p):
            continue
        for a in range(0, p, max(1, p // 7)):
            got = portrait_mod_p(phi, pt(a), p)
            assert (got.m, got.n) == walk_portrait(poly_step_mod([c, 0, 1], p), a % p)


def test_valuation_examples():
    assert valuation_of_difference(nf("x^2"), pt(2), 0, 1, 2).value is Val.ONE
    assert valuation_of_difference(nf("x^2+1"), pt(2), 0, 3, 5).value is Val.AT_LEAST_2
    assert valuation_of_difference(nf("x^2+1"), pt(2), 0, 3, 7).value is Val.ZERO


def test_valuation_at_infinity_raises():
    with pytest.raises(AtInfinityError, match="at-infinity"):
        valuation_of_difference(nf("x^2+1"), pt("1/3"), 0, 1, 3)
    rep = valuation_of_difference(nf("x^2+1"), pt("1/3"), 0, 1, 3, strict=False)
    assert not rep.both_affine


@pytest.mark.parametrize("text", ["x^2", "x^2+1", "x^2-2", "(x^2-1)/x"])
def test_valuation_matches_exact_ord(text):
    phi = nf(text)
    for alpha in ["3", "5/2"]:
        orbit = naive_orbit(text, Fraction(alpha), 5)
        for m in range(0, 3):
            for n in range(1, 6 - m):
                x, y = orbit[m], orbit[m + n]
                for p in primerange(2, 60):
                    if not is_good_prime(phi, p):
                        continue
                    rep = valuation_of_difference(phi, pt(alpha), m, n, p, strict=False)
                    if not rep.both_affine:
                        continue
                    assert rep.value.value == classify(exact_ord(y - x, p)), (alpha, m, n, p)


def test_squarefree_portrait_examples():
    assert is_squarefree_portrait(nf("x^2+1"), pt(2), 0, 1, 3)
    assert not is_squarefree_portrait(nf("x^2+1"), pt(2), 0, 3, 5)
    assert is_squarefree_portrait(nf("x^2"), pt(2), 0, 1, 2)


def test_squarefree_portrait_rejects_preperiodic():
    with pytest.raises(PreperiodicPointError):
        is_squarefree_portrait(nf("x^2-2"), pt(0), 0, 1, 3)


def test_search_examples():
    res = search_witnesses(nf("x^2+1"), pt(2), 0, 1, 100)
    assert 3 in res.primes()
    assert res.primes() == sorted(res.primes())
    for alpha in ["1", "2", "1/2", "-3"]:
        for m in range(3):
            assert not len(search_witnesses(nf("x+x^2"), pt(alpha), m, 1, 2000))


def test_search_witnesses_reverify():
    phi = nf("x^2+1")
    res = search_witnesses(phi, pt(2), 0, 3, 10**4)
    for w in res:
        assert w.squarefree and w.portrait == Portrait(0, 3)
        assert is_squarefree_portrait(phi, pt(2), 0, 3, w.prime)
        assert verify_witness(phi, pt(2), 0, 3, w.prime)["passed"]


def test_search_exclude_and_bad_primes():
    phi = nf("x^2+1")
    assert 3 not in search_witnesses(phi, pt(2), 0, 1, 100, exclude={3}).primes()
    res = search_witnesses(nf("x^2+1/3"), pt(2), 0, 1, 200)
    assert 3 not in res.primes()
    with pytest.raises(ValueError):
        search_witnesses(phi, pt(2), 0, 1, 1)


def test_search_skip_log_records_infinity():
    # (x^2-1)/x sends 0 to infinity; primes where the endpoint reduces there are logged
    phi = nf("(x^2-1)/x")
    res = search_witnesses(phi, pt(3), 1, 1, 3000)
    assert res.skipped == [(3, "endpoint reduces to infinity")]
    for p, reason in res.skipped:
        assert "infinity" in reason
        assert reduce_point(phi(pt(3)), p) is INF
    assert not set(res.primes()) & {p for p, _ in res.skipped}


def test_search_deterministic_across_workers():
    phi = nf("x^2+1")
    one = search_witnesses(phi, pt(2), 1, 2, 60000, workers=1, block_size=2048)
    four = search_witnesses(phi, pt(2), 1, 2, 60000, workers=4, block_size=2048)
    assert one.primes() == four.primes() and one.skipped == four.skipped


def test_doubly_primitive_consequence():
    # oracle: exact rational differences for every earlier index pair
    text = "x^2+1"
    phi = nf(text)
    orbit = naive_orbit(text, 2, 6)
    for m in range(3):
        for n in range(1, 4):
            if m + n > 5:
                continue
            for w in search_witnesses(phi, pt(2), m, n, 3000):
                for u in range(m + n + 1):
                    for v in range(1, m + n + 1 - u):
                        if u < m or v < n:
                            assert exact_ord(orbit[u + v] - orbit[u], w.prime) <= 0, (m, n, u, v, w.prime)


LEMMA_MAPS = ["x^2+1", "x^2-2", "(x^2-1)/x", "x^3-3x", "x^3+x+1", "(x^2+2)/(x-1)", "x^2-x-1"]


def _p1(p):
    return [INF, *range(p)]


def test_equal_images_never_both_periodic():
    # collisions of the reduced map can't sit on cycles: each periodic point has one periodic preimage
    rng = random.Random(17)
    done = 0
    while done < 500:
        phi = nf(rng.choice(LEMMA_MAPS))
        p = rng.choice(list(primerange(3, 80)))
        if not is_good_prime(phi, p):
            continue
        groups = {}
        for x in _p1(p):
            groups.setdefault(reduced_step(phi, x, p), []).append(x)
        pairs = [g for g in groups.values() if len(g) > 1]
        if not pairs:
            continue
        g1, g2 = rng.sample(rng.choice(pairs), 2)
        assert not (is_periodic_mod_p(phi, g1, p) and is_periodic_mod_p(phi, g2, p))
        done += 1


def test_common_reduction_primes_examples():
    assert common_reduction_primes(pt("1/3"), pt("2/3")) == {3}
    assert common_reduction_primes(pt(0), pt("inf")) == set()
    assert common_reduction_primes(pt(5), pt(0)) == {5}
    with pytest.raises(ValueError):
        common_reduction_primes(pt(1), pt(1))


def test_common_reduction_primes_match_reduction():
    rng = random.Random(4)
    for _ in range(200):
        x = pt(Fraction(rng.randint(-500, 500), rng.randint(1, 60)))
        y = pt(Fraction(rng.randint(-500, 500), rng.randint(1, 60)))
        if x == y:
            continue
        got = common_reduction_primes(x, y)
        for p in primerange(2, 100):
            assert (p in got) == (reduce_point(x, p) == reduce_point(y, p))
