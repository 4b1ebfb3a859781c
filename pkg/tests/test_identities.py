"""String and dilaton identities, checked two independent ways.

Coefficient level: identities between values of the count polynomials on
integer grids, using only the combinatorial recursion.  Form level: the
same identities as statements about residue contractions of the engine's
correlators, using only exact rational-function algebra.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from nbar import tr
from nbar.lattice import euler_char, nbar_eval, nbar_poly

F = Fraction


def string_rhs(g: int, n: int, b) -> Fraction:
    """Σ_k Σ_{a=0}^{b_k} [a] N̄_{g,n}(a, b without k), with [0] = 1."""
    qp = nbar_poly(g, n)
    total = F(0)
    for k in range(len(b)):
        rest = b[:k] + b[k + 1:]
        for a in range(0, b[k] + 1):
            total += (a if a else 1) * qp.evaluate((a,) + rest)
    return total


def test_string_identity_on_grids():
    cases = [
        (0, 3, range(0, 5), 3),
        (0, 4, range(0, 4), 4),
        (1, 1, range(0, 10), 1),
        (1, 2, range(0, 6), 2),
    ]
    for g, n, rng, reps in cases:
        big = nbar_poly(g, n + 1)
        for b in itertools.product(rng, repeat=reps):
            if sum(b) % 2 == 0:
                continue  # the extra argument is 1, so Σb must be odd
            assert big.evaluate((1,) + b) == string_rhs(g, n, b)


def test_string_identity_includes_the_zero_term():
    # for b = (1,) the right side is [0]·N̄_{1,1}(0) + [1]·N̄_{1,1}(1)
    # = 5/12 + 0, which the count N̄_{1,2}(1,1) must reproduce exactly;
    # dropping the a = 0 term would lose 5/12.
    assert nbar_poly(1, 2).evaluate((1, 1)) == F(5, 12)
    assert string_rhs(1, 1, (1,)) == F(5, 12)


def test_dilaton_identity_on_grids():
    cases = [
        (0, 3, range(0, 5), 3),
        (0, 4, range(0, 4), 4),
        (1, 1, range(0, 10), 1),
        (1, 2, range(0, 6), 2),
    ]
    for g, n, rng, reps in cases:
        big = nbar_poly(g, n + 1)
        small = nbar_poly(g, n)
        factor = 2 * g - 2 + n
        for b in itertools.product(rng, repeat=reps):
            if sum(b) % 2:
                continue
            lhs = big.evaluate((2,) + b) - big.evaluate((0,) + b)
            assert lhs == factor * small.evaluate(b)


def test_dilaton_identity_symbolically():
    # pinning the extra even argument at 2 and 0 and subtracting must give
    # (2g - 2 + n) times the smaller count polynomial, as polynomials
    qp12 = nbar_poly(1, 2)
    diff = qp12.pin_even(2) - qp12.pin_even(0)
    assert diff == nbar_poly(1, 1).scale(1)

    qp04 = nbar_poly(0, 4)
    diff = qp04.pin_even(2) - qp04.pin_even(0)
    assert diff == nbar_poly(0, 3).scale(1)

    qp13 = nbar_poly(1, 3)
    diff = qp13.pin_even(2) - qp13.pin_even(0)
    assert diff == nbar_poly(1, 2).scale(2)


def test_spot_values_from_the_identities():
    assert nbar_eval(1, 2, (1, 3)) == F(17, 12)
    # dilaton at b = 4: N̄_{1,2}(2,4) - N̄_{1,2}(0,4) = (16+20)/48
    qp = nbar_poly(1, 2)
    assert qp.evaluate((2, 4)) - qp.evaluate((0, 4)) == F(36, 48)


def test_string_identity_form_level():
    for g, n in [(0, 3), (1, 1), (0, 4), (1, 2)]:
        assert tr.string_check(g, n)


def test_dilaton_identity_form_level():
    for g, n in [(0, 3), (1, 1), (0, 4), (1, 2)]:
        assert tr.dilaton_check(g, n)


def test_euler_agrees_with_counts_at_origin():
    for g, n in [(0, 3), (0, 4), (0, 5), (1, 1), (1, 2), (1, 3), (2, 1)]:
        assert euler_char(g, n) == nbar_poly(g, n).evaluate((0,) * n)
