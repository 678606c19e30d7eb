from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest

from linsyz.arith import QQ, PrimeField, Ring
from linsyz.curves import ferrand_double_ideal, linear_embed, rnc_ideal, veronese_ideal
from linsyz.groebner import FreeElt, FreeModule
from linsyz.plethysm import Partition, schur_dim
from linsyz.resolve import (BettiTable, ResPoly, betti, betti_from_frame, hilbert, ideal_graded_dim, koszul_betti,
                            min_resolution, minimalize, monomial_numerator, res_poly, res_poly_mul,
                            schreyer_resolution)


def conic():
    R = Ring(3)
    z = R.gens()
    return [z[0] * z[2] - z[1] ** 2]


def corpus():
    return {
        "conic": conic(),
        "cubic": rnc_ideal(3),
        "rnc4": rnc_ideal(4),
        "double2": ferrand_double_ideal(2),
        "v2P2": veronese_ideal(2, 2),
    }


def linear(d, ells):
    return {(0, 0): 1, **{(l, l + 1): l * comb(d, l + 1) for l in ells}}


@pytest.fixture(scope="module")
def resolved():
    return {k: (g, min_resolution(g)) for k, g in corpus().items()}


def test_examples():
    R = Ring(3)
    z = R.gens()
    assert betti(min_resolution([z[2] ** 2])) == {(0, 0): 1, (1, 2): 1}
    assert betti(min_resolution(rnc_ideal(3))) == {(0, 0): 1, (1, 2): 3, (2, 3): 2}
    v2 = betti(min_resolution(veronese_ideal(2, 2)))
    assert v2 == {(0, 0): 1, (1, 2): 6, (2, 3): 8, (3, 4): 3}
    # the Schur dimensions of the equivariant resolution
    assert [v2[(1, 2)], v2[(2, 3)], v2[(3, 4)]] == [schur_dim(Partition(p), 3) for p in [(2, 2), (2, 1), (1, 1)]]
    assert betti(min_resolution(conic())) == {(0, 0): 1, (1, 2): 1}
    assert betti(min_resolution(rnc_ideal(4))) == linear(4, range(1, 4))
    assert betti(min_resolution(ferrand_double_ideal(2))) == linear(4, range(1, 4))


def test_minimalize_examples():
    frame = schreyer_resolution(rnc_ideal(3))
    res = minimalize(frame)
    assert betti(res) == betti(min_resolution(rnc_ideal(3)))
    assert betti(minimalize(res)) == betti(res)
    R = Ring(("x", "y"))
    x, y = R.gens()
    koszul = min_resolution([x, y])
    assert koszul.ranks() == [1, 2, 1]
    assert betti(koszul) == {(0, 0): 1, (1, 1): 2, (2, 2): 1}


def test_betti_rejects_frame():
    frame = schreyer_resolution(ferrand_double_ideal(2))
    assert not frame.minimal
    with pytest.raises(ValueError):
        betti(frame)


@pytest.mark.parametrize("name", list(corpus()))
def test_invariants(resolved, name):
    gens, res = resolved[name]
    ring = gens[0].ring
    assert res.is_complex()
    assert res.is_graded()
    assert res.minimal and not res.has_unit_entries()
    assert not res.truncated
    assert res.length <= ring.n
    table = betti(res)
    assert table.euler_numerator() == hilbert(gens).numerator
    # Koszul homology and frame ranks are independent of the pruning
    assert koszul_betti(gens, table.entries) == table
    assert betti_from_frame(schreyer_resolution(gens)) == table


@pytest.mark.parametrize("name,codim", [("cubic", 2), ("rnc4", 3), ("double2", 3), ("conic", 1)])
def test_acm_length_equals_codimension(resolved, name, codim):
    assert resolved[name][1].length == codim


@pytest.mark.parametrize("name", ["conic", "cubic", "rnc4", "double2"])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_linear_embedding_product_law(resolved, name, m):
    gens, res = resolved[name]
    lifted = betti(min_resolution(linear_embed(gens, m)))
    assert res_poly(lifted) == res_poly_mul(res_poly(betti(res)), ResPoly.one_plus_xt(m))


def test_res_poly_examples():
    p = res_poly(BettiTable({(0, 0): 1, (1, 2): 1}))
    assert str(p) == "1 + x*t^2"
    q = p * ResPoly.one_plus_xt()
    assert q == ResPoly({(0, 0): 1, (1, 1): 1, (1, 2): 1, (2, 3): 1})
    assert res_poly_mul(p, ResPoly({(0, 0): 1})) == p
    assert ResPoly.one_plus_xt(2) == ResPoly({(0, 0): 1, (1, 1): 2, (2, 2): 1})


def test_hilbert_examples():
    assert hilbert(ferrand_double_ideal(2)).hp_string() == "4t + 1"
    assert hilbert(rnc_ideal(3)).hp_string() == "3t + 1"
    R = Ring(3)
    z = R.gens()
    assert hilbert([z[2] ** 2]).hp_string() == "2t + 1"
    free = hilbert([], ring=R)
    assert free.numerator == [1] and free.hilbert_function(2) == 6
    pts = hilbert([z[0] * z[1], z[2] ** 2])
    # two double points, a zero-dimensional scheme of length 4
    assert pts.hilbert_polynomial == [Fraction(4)]
    assert pts.hp_string() == "4"


@pytest.mark.parametrize("name", list(corpus()))
def test_hilbert_series_matches_linear_algebra(name):
    gens = corpus()[name]
    h = hilbert(gens)
    ring = gens[0].ring
    for ell in range(len(h.numerator) + 4):
        quotient = comb(ell + ring.n - 1, ring.n - 1) - ideal_graded_dim(gens, ell)
        assert h.hilbert_function(ell) == quotient
        if ell >= len(h.numerator):
            assert h.hp(ell) == quotient


def test_monomial_numerator():
    # (x^2, y^2) in two variables: (1 - t^2)^2
    assert monomial_numerator([(2, 0), (0, 2)]) == [1, 0, -2, 0, 1]
    assert monomial_numerator([(1, 0)]) == [1, -1]


def test_module_hilbert_shifts():
    R = Ring(("x", "y"))
    x, y = R.gens()
    F = FreeModule(R, (0, 1))
    h = hilbert([FreeElt.from_components(F, [x, R.zero()])])
    assert h.hilbert_function(0) == 1
    # R/(x) plus a free summand R(-1)
    assert h.hilbert_function(1) == 1 + 1
    assert h.hilbert_function(2) == 1 + 2


def test_text_and_json():
    t = BettiTable({(0, 0): 1, (1, 2): 3, (2, 3): 2})
    assert t.to_text() == "       0 1 2\ntotal: 1 3 2\n    0: 1 . .\n    1: . 3 2"
    assert t.to_json() == {"entries": [[0, 0, 1], [1, 2, 3], [2, 3, 2]]}
    assert BettiTable.from_json(t.dumps()) == t
    assert t.totals() == [1, 3, 2] and t.length == 2 and t.is_linear()
    with pytest.raises(ValueError):
        BettiTable({(0, 0): -1})


@pytest.mark.parametrize("d", [2, 3])
def test_rationals_agree_with_prime_field(d):
    a = betti(min_resolution(rnc_ideal(d, QQ)))
    b = betti(min_resolution(rnc_ideal(d, PrimeField(32003))))
    assert a == b
    c = betti(min_resolution(ferrand_double_ideal(d, QQ)))
    assert c == betti(min_resolution(ferrand_double_ideal(d)))


def test_truncation_flagged():
    res = min_resolution(rnc_ideal(4), max_length=1)
    assert res.truncated
    assert res.length == 1
    assert not min_resolution(rnc_ideal(4), max_length=3).truncated


def test_pruning_is_deterministic():
    a = minimalize(schreyer_resolution(ferrand_double_ideal(2)))
    b = minimalize(schreyer_resolution(ferrand_double_ideal(2)))
    assert [m.to_lists() for m in a.matrices] == [m.to_lists() for m in b.matrices]
